//! The inline function mini-language.
//!
//! Accepted forms:
//! - catalog names: `exp`, `cos`, `identity`, `square-minus-two`,
//!   `mittag-leffler`, `monomial:k`, `shifted-monomial:k`,
//!   `weierstrass:a:b[:K]`
//! - `const:v`
//! - `affine:c:b` for `x ↦ c + b·spow(x, α)`
//! - `series:[c0,c1,...]@center` (center defaults to 0)

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fractal_number::FractalOrder;
use crate::fractal_series::{mittag_leffler, FractalPowerSeries};
use crate::numerics::RealFunction;
use crate::testlib::{self, TestFunction};

const DEFAULT_WEIERSTRASS_TERMS: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Exp,
    Cos,
    Identity,
    SquareMinusTwo,
    MittagLeffler,
    Monomial(usize),
    ShiftedMonomial(usize),
    Weierstrass { a: f64, b: f64, terms: usize },
    Const(f64),
    Affine { c: f64, b: f64 },
    Series { coeffs: Vec<f64>, center: f64 },
}

fn number(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Configuration(format!("invalid {what}: {s:?}")))
}

fn count(s: &str, what: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| Error::Configuration(format!("invalid {what}: {s:?}")))
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        let spec = match (head, rest) {
            ("exp", None) => Self::Exp,
            ("cos", None) => Self::Cos,
            ("identity", None) => Self::Identity,
            ("square-minus-two", None) => Self::SquareMinusTwo,
            ("mittag-leffler", None) => Self::MittagLeffler,
            ("monomial", Some(k)) => Self::Monomial(count(k, "monomial index")?),
            ("shifted-monomial", Some(k)) => {
                let k = count(k, "monomial index")?;
                if k == 0 {
                    return Err(Error::Configuration("shifted-monomial needs k >= 1".into()));
                }
                Self::ShiftedMonomial(k)
            }
            ("weierstrass", Some(r)) => {
                let parts: Vec<&str> = r.split(':').collect();
                let (a, b, terms) = match parts.as_slice() {
                    [a, b] => (*a, *b, DEFAULT_WEIERSTRASS_TERMS),
                    [a, b, k] => (*a, *b, count(k, "Weierstrass terms")?),
                    _ => {
                        return Err(Error::Configuration(format!(
                            "expected weierstrass:a:b[:K], got {s:?}"
                        )))
                    }
                };
                Self::Weierstrass {
                    a: number(a, "Weierstrass a")?,
                    b: number(b, "Weierstrass b")?,
                    terms,
                }
            }
            ("const", Some(v)) => Self::Const(number(v, "constant")?),
            ("affine", Some(r)) => {
                let (c, b) = r.split_once(':').ok_or_else(|| {
                    Error::Configuration(format!("expected affine:c:b, got {s:?}"))
                })?;
                Self::Affine {
                    c: number(c, "affine offset")?,
                    b: number(b, "affine slope")?,
                }
            }
            ("series", Some(r)) => {
                let (list, center) = match r.rsplit_once('@') {
                    Some((l, c)) => (l, number(c, "series center")?),
                    None => (r, 0.0),
                };
                let coeffs: Vec<f64> = serde_json::from_str(list.trim()).map_err(|e| {
                    Error::Configuration(format!("invalid series literal {list:?}: {e}"))
                })?;
                if coeffs.is_empty() {
                    return Err(Error::Configuration(
                        "series literal needs a coefficient".into(),
                    ));
                }
                Self::Series { coeffs, center }
            }
            _ => return Err(Error::Configuration(format!("unknown function {s:?}"))),
        };
        Ok(spec)
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exp => write!(f, "exp"),
            Self::Cos => write!(f, "cos"),
            Self::Identity => write!(f, "identity"),
            Self::SquareMinusTwo => write!(f, "square-minus-two"),
            Self::MittagLeffler => write!(f, "mittag-leffler"),
            Self::Monomial(k) => write!(f, "monomial:{k}"),
            Self::ShiftedMonomial(k) => write!(f, "shifted-monomial:{k}"),
            Self::Weierstrass { a, b, terms } => write!(f, "weierstrass:{a}:{b}:{terms}"),
            Self::Const(v) => write!(f, "const:{v}"),
            Self::Affine { c, b } => write!(f, "affine:{c}:{b}"),
            Self::Series { coeffs, center } => {
                write!(
                    f,
                    "series:{}@{center}",
                    serde_json::to_string(coeffs).map_err(|_| fmt::Error)?
                )
            }
        }
    }
}

impl FunctionSpec {
    /// Builds the function at the given order.
    pub fn resolve(&self, order: FractalOrder) -> Result<TestFunction> {
        let t = match self {
            Self::Exp => testlib::exp_function(),
            Self::Cos => testlib::cos_function(),
            Self::Identity => testlib::identity_function(order),
            Self::SquareMinusTwo => testlib::square_minus_two(),
            Self::MittagLeffler => testlib::mittag_leffler_function(order),
            Self::Monomial(k) => testlib::monomial(*k, order),
            Self::ShiftedMonomial(k) => testlib::shifted_monomial(*k, order)?,
            Self::Weierstrass { a, b, terms } => testlib::weierstrass(*a, *b, *terms)?,
            Self::Affine { c, b } => testlib::affine_fractal(*c, *b, order)?,
            Self::Const(v) => {
                let v = *v;
                let series = FractalPowerSeries::new(order, 0.0, vec![v])?;
                TestFunction {
                    name: self.to_string(),
                    function: RealFunction::new(move |_| v).with_series(series),
                    known_root: None,
                    known_fixed_point: None,
                    known_holder: None,
                    valid_alpha: vec![order.alpha()],
                }
            }
            Self::Series { coeffs, center } => {
                let series = FractalPowerSeries::new(order, *center, coeffs.clone())?;
                TestFunction {
                    name: self.to_string(),
                    function: RealFunction::from_series(series),
                    known_root: None,
                    known_fixed_point: None,
                    known_holder: None,
                    valid_alpha: vec![order.alpha()],
                }
            }
        };
        Ok(t)
    }

    /// Series form at `order`, truncated (or, for the Mittag-Leffler
    /// series, extended) to `terms` when given.
    pub fn series(&self, order: FractalOrder, terms: Option<usize>) -> Result<FractalPowerSeries> {
        if let (Self::MittagLeffler, Some(k)) = (self, terms) {
            return Ok(mittag_leffler(order, k));
        }
        let t = self.resolve(order)?;
        let s = t
            .series_form()
            .filter(|s| s.order() == order)
            .ok_or_else(|| {
                Error::UnsupportedBackend(format!(
                    "{self} has no series form at alpha = {}",
                    order.alpha()
                ))
            })?;
        Ok(match terms {
            Some(k) => s.truncated(k),
            None => s.clone(),
        })
    }
}
