#![allow(dead_code)]

use std::process::Command;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn cli(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_fractal-calc"))
        .args(args)
        .env_remove("FRACTAL_CALC_PRECISION")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn json<T: serde::de::DeserializeOwned>(run: &Run) -> T {
    serde_json::from_str(&run.stdout)
        .unwrap_or_else(|e| panic!("bad json ({e}): {}{}", run.stdout, run.stderr))
}
