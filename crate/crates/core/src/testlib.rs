//! Catalog of test functions with known roots, fixed points and Hölder
//! exponents, plus the bisection oracle used to check them.
//!
//! Every metadatum is re-verified when the catalog is built, so consumers
//! never rely on a hand-typed constant that nobody checked.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fractal_number::{spow, FractalOrder};
use crate::fractal_series::{mittag_leffler, FractalPowerSeries};
use crate::numerics::{gamma, holder_fit, RealFunction, StepSchedule};

/// Residual tolerance for catalog roots and fixed points.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-10;
/// Allowed gap between a documented and a fitted Hölder exponent.
pub const HOLDER_TOL: f64 = 0.1;

const MITTAG_LEFFLER_TERMS: usize = 40;
const WEIERSTRASS_TERMS: usize = 30;

#[derive(Debug, Clone)]
pub struct TestFunction {
    pub name: String,
    pub function: RealFunction,
    pub known_root: Option<f64>,
    pub known_fixed_point: Option<f64>,
    /// Hölder exponent and the point where it holds.
    pub known_holder: Option<(f64, f64)>,
    /// Orders for which the series form and derivative metadata are valid.
    pub valid_alpha: Vec<f64>,
}

impl TestFunction {
    fn new(name: impl Into<String>, function: RealFunction, valid_alpha: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            function,
            known_root: None,
            known_fixed_point: None,
            known_holder: None,
            valid_alpha,
        }
    }

    pub fn series_form(&self) -> Option<&FractalPowerSeries> {
        self.function.series()
    }

    /// Checks every provided metadatum against the callable.
    pub fn verify(&self) -> Result<()> {
        if let Some(root) = self.known_root {
            let r = self.function.eval(root).abs();
            if !(r < ROOT_RESIDUAL_TOL) {
                return Err(Error::Domain(format!(
                    "{}: residual {r:e} at documented root {root}",
                    self.name
                )));
            }
        }
        if let Some(p) = self.known_fixed_point {
            let r = (self.function.eval(p) - p).abs();
            if !(r < ROOT_RESIDUAL_TOL) {
                return Err(Error::Domain(format!(
                    "{}: |φ(p) - p| = {r:e} at documented fixed point {p}",
                    self.name
                )));
            }
        }
        if let Some((exponent, x0)) = self.known_holder {
            let fit = holder_fit(&self.function, x0, &holder_schedule())?;
            if (fit.exponent - exponent).abs() > HOLDER_TOL {
                return Err(Error::Domain(format!(
                    "{}: fitted Hölder exponent {} vs documented {exponent}",
                    self.name, fit.exponent
                )));
            }
        }
        Ok(())
    }
}

/// Schedule for Hölder fits: ten steps per decade over `h ∈ [1e-6, 1e-2]`.
pub fn holder_schedule() -> StepSchedule {
    StepSchedule::new(1e-2, 10f64.powf(-0.1), 41).expect("static schedule is valid")
}

/// `spow(x, kα) / Γ(1 + kα)`.
pub fn monomial(k: usize, order: FractalOrder) -> TestFunction {
    let series = FractalPowerSeries::monomial(order, 0.0, k);
    let mut t = TestFunction::new(
        format!("monomial:{k}"),
        RealFunction::from_series(series),
        vec![order.alpha()],
    );
    if k >= 1 {
        t.known_root = Some(0.0);
        t.known_holder = Some((k as f64 * order.alpha(), 0.0));
    }
    t
}

/// Point where the monomial `e_k` reaches 1: `Γ(1 + kα)^{1/(kα)}`.
pub fn monomial_unit_level(k: usize, order: FractalOrder) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("e_0 is identically 1".into()));
    }
    let p = k as f64 * order.alpha();
    Ok(gamma(1.0 + p)?.powf(1.0 / p))
}

/// `e_k - 1`, with its positive root.
pub fn shifted_monomial(k: usize, order: FractalOrder) -> Result<TestFunction> {
    let mut coeffs = vec![0.0; k + 1];
    coeffs[0] -= 1.0;
    coeffs[k] += 1.0;
    let series = FractalPowerSeries::new(order, 0.0, coeffs)?;
    let mut t = TestFunction::new(
        format!("shifted-monomial:{k}"),
        RealFunction::from_series(series),
        vec![order.alpha()],
    );
    t.known_root = Some(monomial_unit_level(k, order)?);
    Ok(t)
}

pub fn mittag_leffler_function(order: FractalOrder) -> TestFunction {
    let mut t = TestFunction::new(
        "mittag-leffler",
        RealFunction::from_series(mittag_leffler(order, MITTAG_LEFFLER_TERMS)),
        vec![order.alpha()],
    );
    t.known_holder = Some((order.alpha(), 0.0));
    t
}

/// `x ↦ c + b·spow(x, α)`.
pub fn affine_fractal(c: f64, b: f64, order: FractalOrder) -> Result<TestFunction> {
    let alpha = order.alpha();
    let series = FractalPowerSeries::new(order, 0.0, vec![c, b * gamma(1.0 + alpha)?])?;
    let f = RealFunction::new(move |x| c + b * spow(x, alpha)).with_series(series);
    let mut t = TestFunction::new(format!("affine:{c}:{b}"), f, vec![alpha]);
    t.known_fixed_point = affine_fixed_point(c, b, order);
    Ok(t)
}

/// Closed forms at `α = 1/2` (quadratic in `√x`) and `α = 1`; bisection
/// otherwise. `None` when no fixed point is bracketed.
fn affine_fixed_point(c: f64, b: f64, order: FractalOrder) -> Option<f64> {
    let alpha = order.alpha();
    if alpha == 0.5 && c >= 0.0 {
        let s = (b + (b * b + 4.0 * c).sqrt()) / 2.0;
        return (s >= 0.0).then_some(s * s);
    }
    if alpha == 1.0 {
        return (b != 1.0).then(|| c / (1.0 - b));
    }
    let g = move |x: f64| c + b * spow(x, alpha) - x;
    let mut hi = 1.0;
    while g(hi) * g(-hi) > 0.0 && hi < 1e12 {
        hi *= 2.0;
    }
    let root = brute_force_root(&RealFunction::new(g), -hi, hi, 1e-13).ok()?;
    // bisection isolates the sign change; polish to the residual target
    (g(root).abs() < ROOT_RESIDUAL_TOL).then_some(root)
}

/// `Σ_{k=0}^{K} a^k cos(b^k π x)`, summed in increasing `k`.
pub fn weierstrass_eval(a: f64, b: f64, k_max: usize, x: f64) -> Result<f64> {
    check_weierstrass(a, b)?;
    let mut sum = 0.0;
    let (mut ak, mut bk) = (1.0, 1.0);
    for _ in 0..=k_max {
        sum += ak * (bk * std::f64::consts::PI * x).cos();
        ak *= a;
        bk *= b;
    }
    Ok(sum)
}

fn check_weierstrass(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && a < 1.0) || !(b > 1.0) || !(a * b > 1.0) {
        return Err(Error::Domain(format!(
            "Weierstrass parameters need 0 < a < 1, b > 1, ab > 1; got a={a}, b={b}"
        )));
    }
    Ok(())
}

/// Weierstrass function with Hölder exponent `-ln a / ln b`, documented at
/// `x0 = 0.37`.
pub fn weierstrass(a: f64, b: f64, k_max: usize) -> Result<TestFunction> {
    check_weierstrass(a, b)?;
    let f = RealFunction::new(move |x| weierstrass_eval(a, b, k_max, x).unwrap_or(f64::NAN));
    let mut t = TestFunction::new(format!("weierstrass:{a}:{b}"), f, Vec::new());
    t.known_holder = Some((-a.ln() / b.ln(), 0.37));
    Ok(t)
}

fn classical(
    name: &str,
    f: fn(f64) -> f64,
    d: fn(f64) -> f64,
    series: FractalPowerSeries,
) -> TestFunction {
    TestFunction::new(
        name,
        RealFunction::new(f)
            .with_derivative(FractalOrder::one(), d)
            .with_series(series),
        vec![1.0],
    )
}

pub fn exp_function() -> TestFunction {
    let series = mittag_leffler(FractalOrder::one(), 30);
    classical("exp", f64::exp, f64::exp, series)
}

pub fn cos_function() -> TestFunction {
    let coeffs = (0..=30)
        .map(|k| match k % 4 {
            0 => 1.0,
            2 => -1.0,
            _ => 0.0,
        })
        .collect();
    let series = FractalPowerSeries::new(FractalOrder::one(), 0.0, coeffs).expect("finite");
    let mut t = classical("cos", f64::cos, |x| -x.sin(), series);
    t.known_fixed_point = Some(0.739_085_133_215_160_6);
    t
}

pub fn square_minus_two() -> TestFunction {
    let series =
        FractalPowerSeries::new(FractalOrder::one(), 0.0, vec![-2.0, 0.0, 2.0]).expect("finite");
    let mut t = classical("square-minus-two", |x| x * x - 2.0, |x| 2.0 * x, series);
    t.known_root = Some(std::f64::consts::SQRT_2);
    t
}

pub fn identity_function(order: FractalOrder) -> TestFunction {
    let mut f = RealFunction::new(|x| x);
    if order.alpha() == 1.0 {
        f = f
            .with_derivative(order, |_| 1.0)
            .with_series(FractalPowerSeries::new(order, 0.0, vec![0.0, 1.0]).expect("finite"));
    }
    let mut t = TestFunction::new("identity", f, vec![1.0]);
    t.known_root = Some(0.0);
    t
}

/// The full catalog at a given order, verified on construction.
pub fn catalog(order: FractalOrder) -> Result<Vec<TestFunction>> {
    let mut list: Vec<TestFunction> = (1..=8).map(|k| monomial(k, order)).collect();
    list.extend(
        (1..=4)
            .map(|k| shifted_monomial(k, order))
            .collect::<Result<Vec<_>>>()?,
    );
    list.push(mittag_leffler_function(order));
    list.push(affine_fractal(1.0, 0.5, order)?);
    list.push(weierstrass(0.5, 3.0, WEIERSTRASS_TERMS)?);
    list.push(exp_function());
    list.push(cos_function());
    list.push(square_minus_two());
    list.push(identity_function(order));
    for t in &list {
        t.verify()?;
    }
    Ok(list)
}

/// Bisection on a sign change, to interval width `tol`.
pub fn brute_force_root(f: &RealFunction, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Configuration(format!("tol must be > 0, got {tol}")));
    }
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let (mut flo, fhi) = (f.eval(lo), f.eval(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo * fhi < 0.0) {
        return Err(Error::NoSignChange { a, b });
    }
    while hi - lo > tol {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f.eval(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(lo + 0.5 * (hi - lo))
}

/// Catalog entry as exported by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub name: String,
    pub known_root: Option<f64>,
    pub known_fixed_point: Option<f64>,
    pub known_holder_exponent: Option<f64>,
    pub holder_point: Option<f64>,
    pub valid_alpha: Vec<f64>,
    pub series: Option<FractalPowerSeries>,
}

impl From<&TestFunction> for CatalogEntry {
    fn from(t: &TestFunction) -> Self {
        Self {
            name: t.name.clone(),
            known_root: t.known_root,
            known_fixed_point: t.known_fixed_point,
            known_holder_exponent: t.known_holder.map(|h| h.0),
            holder_point: t.known_holder.map(|h| h.1),
            valid_alpha: t.valid_alpha.clone(),
            series: t.series_form().cloned(),
        }
    }
}
