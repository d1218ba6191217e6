//! Generalized Taylor series in the basis `(x - x0)^{kα} / Γ(1 + kα)`.
//!
//! Coefficient `c_k` stores the k-fold local fractional derivative at the
//! center, so the local fractional derivative is a left shift of the
//! coefficient vector and the integral (lower limit at the center) is a
//! right shift with a leading zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fractal_number::{spow, FractalOrder};
use crate::numerics::ln_gamma;

/// Largest argument for which `Γ` is finite in double precision.
const GAMMA_OVERFLOW: f64 = 171.6;

/// Truncated series `Σ_{k=0}^{K} c_k (x - x0)^{kα} / Γ(1 + kα)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct FractalPowerSeries {
    order: FractalOrder,
    center: f64,
    coeffs: Vec<f64>,
}

/// JSON layout `{alpha, center, coeffs}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesRepr {
    alpha: f64,
    center: f64,
    coeffs: Vec<f64>,
}

impl TryFrom<SeriesRepr> for FractalPowerSeries {
    type Error = Error;

    fn try_from(r: SeriesRepr) -> Result<Self> {
        Self::new(FractalOrder::new(r.alpha)?, r.center, r.coeffs)
    }
}

impl From<FractalPowerSeries> for SeriesRepr {
    fn from(s: FractalPowerSeries) -> Self {
        Self {
            alpha: s.order.alpha(),
            center: s.center,
            coeffs: s.coeffs,
        }
    }
}

/// Value of a series together with the indices of terms whose `Γ(1 + kα)`
/// overflowed and whose contribution underflowed to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub underflowed_terms: Vec<usize>,
}

impl FractalPowerSeries {
    pub fn new(order: FractalOrder, center: f64, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSeries(
                "at least one coefficient required".into(),
            ));
        }
        if let Some(k) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "coefficient {k} is not finite"
            )));
        }
        if !center.is_finite() {
            return Err(Error::InvalidSeries("center must be finite".into()));
        }
        Ok(Self {
            order,
            center,
            coeffs,
        })
    }

    /// The zero series, truncation 0.
    pub fn zero(order: FractalOrder, center: f64) -> Self {
        Self {
            order,
            center,
            coeffs: vec![0.0],
        }
    }

    /// Basis monomial `e_k = (x - x0)^{kα} / Γ(1 + kα)`.
    pub fn monomial(order: FractalOrder, center: f64, k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Self {
            order,
            center,
            coeffs,
        }
    }

    pub fn order(&self) -> FractalOrder {
        self.order
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Index of the last retained term.
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Keeps terms `0..=k`.
    pub fn truncated(&self, k: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(k + 1);
        Self {
            coeffs,
            ..self.clone()
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.eval_detailed(x).map(|v| v.value)
    }

    /// Evaluates with terms summed in ascending magnitude.
    pub fn eval_detailed(&self, x: f64) -> Result<SeriesValue> {
        let alpha = self.order.alpha();
        let dx = x - self.center;
        let mut underflowed_terms = Vec::new();
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (k, &c) in self.coeffs.iter().enumerate() {
            let term = if k == 0 {
                c
            } else if c == 0.0 || dx == 0.0 {
                0.0
            } else {
                let p = k as f64 * alpha;
                if 1.0 + p < GAMMA_OVERFLOW {
                    c * spow(dx, p) / libm::tgamma(1.0 + p)
                } else {
                    let log_mag = c.abs().ln() + p * dx.abs().ln() - ln_gamma(1.0 + p)?;
                    let mag = log_mag.exp();
                    if mag == 0.0 {
                        underflowed_terms.push(k);
                    }
                    let sign = c.signum() * if dx < 0.0 { -1.0 } else { 1.0 };
                    sign * mag
                }
            };
            if !term.is_finite() {
                return Err(Error::Range { term: k });
            }
            terms.push(term);
        }
        terms.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        let value: f64 = terms.iter().sum();
        if !value.is_finite() {
            return Err(Error::Range {
                term: self.truncation(),
            });
        }
        Ok(SeriesValue {
            value,
            underflowed_terms,
        })
    }

    /// Local fractional derivative of order `alpha`: drop `c_0`, shift left.
    pub fn lfd(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(self.order, self.center);
        }
        Self {
            coeffs: self.coeffs[1..].to_vec(),
            ..self.clone()
        }
    }

    /// Local fractional integral from the center: shift right, `c_0 = 0`.
    pub fn integral(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        coeffs.extend_from_slice(&self.coeffs);
        Self {
            coeffs,
            ..self.clone()
        }
    }

    fn ensure_compatible(&self, other: &Self) -> Result<()> {
        self.order.ensure_same(other.order)?;
        if self.center != other.center {
            return Err(Error::CenterMismatch {
                left: self.center,
                right: other.center,
            });
        }
        Ok(())
    }

    /// Coefficient-wise sum, truncated to the shorter operand.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ensure_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.order, self.center, coeffs)
    }

    pub fn scale(&self, lambda: f64) -> Result<Self> {
        Self::new(
            self.order,
            self.center,
            self.coeffs.iter().map(|c| c * lambda).collect(),
        )
    }

    /// Cauchy product in the monomial basis `(x - x0)^{kα}`.
    ///
    /// In stored coefficients this is
    /// `c'_m = Σ_{i+j=m} c_i d_j Γ(1+mα) / (Γ(1+iα) Γ(1+jα))`,
    /// with the gamma ratio formed in log space. Evaluates to the pointwise
    /// product for `x >= center`; left of it the signed power breaks the
    /// identity.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.ensure_compatible(other)?;
        let alpha = self.order.alpha();
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let lg: Vec<f64> = (0..len)
            .map(|k| ln_gamma(1.0 + k as f64 * alpha))
            .collect::<Result<_>>()?;
        let mut out = vec![0.0; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                let m = i + j;
                out[m] += a * b * (lg[m] - lg[i] - lg[j]).exp();
            }
        }
        if let Some(m) = out.iter().position(|c| !c.is_finite()) {
            return Err(Error::Range { term: m });
        }
        Self::new(self.order, self.center, out)
    }
}

/// Data for the Taylor remainder `M·r^{(n+1)α} / Γ(1 + (n+1)α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemainderBound {
    /// Upper bound on `|f^{((n+1)α)}|` over the interval.
    pub derivative_bound: f64,
    /// `n + 1`.
    pub order_index: usize,
    /// `|x - x0|`.
    pub radius: f64,
    pub order: FractalOrder,
}

pub fn taylor_remainder(b: &RemainderBound) -> f64 {
    if b.derivative_bound == 0.0 || b.radius == 0.0 {
        return 0.0;
    }
    let p = b.order_index as f64 * b.order.alpha();
    let log_val =
        b.derivative_bound.abs().ln() + p * b.radius.abs().ln() - libm::lgamma_r(1.0 + p).0;
    log_val.exp()
}

/// Mittag-Leffler series `E_α(x^α) = Σ_{k=0}^{K} x^{kα} / Γ(1 + kα)`.
pub fn mittag_leffler(order: FractalOrder, k: usize) -> FractalPowerSeries {
    FractalPowerSeries {
        order,
        center: 0.0,
        coeffs: vec![1.0; k + 1],
    }
}
