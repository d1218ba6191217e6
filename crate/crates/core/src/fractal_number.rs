//! Numbers on a fractal set of order `alpha` and the snowflake metrics.
//!
//! A [`FractalNumber`] keeps its base `x` rather than the real value `x^α`.
//! In base coordinates the operator laws of the fractal real line are plain
//! real arithmetic, so `(x + y)^α = x^α + y^α`, `(x - y)^α = x^α - y^α` and
//! `(xy)^α = x^α y^α` hold by construction. The real value is only
//! materialized by [`FractalNumber::value`], using the signed power
//! `sign(x)|x|^α` so that negative bases are well defined.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Signed power `sign(x)·|x|^p`.
///
/// `spow(0, 0) = 1` and `spow(x, 1) = x` exactly.
#[inline]
pub fn spow(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        return x;
    }
    let m = x.abs().powf(p);
    if x < 0.0 {
        -m
    } else {
        m
    }
}

/// Fractal order `alpha` with `0 < alpha <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FractalOrder(f64);

impl FractalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidOrder(alpha))
        }
    }

    /// The classical order `alpha = 1`.
    pub const fn one() -> Self {
        Self(1.0)
    }

    #[inline]
    pub fn alpha(self) -> f64 {
        self.0
    }

    /// Exact equality check; orders are configuration, not measurements.
    pub(crate) fn ensure_same(self, other: Self) -> Result<()> {
        if self.0 == other.0 {
            Ok(())
        } else {
            Err(Error::OrderMismatch {
                left: self.0,
                right: other.0,
            })
        }
    }
}

impl TryFrom<f64> for FractalOrder {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<FractalOrder> for f64 {
    fn from(order: FractalOrder) -> f64 {
        order.0
    }
}

/// An element `x^α` of the fractal real line, stored by its base `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractalNumber {
    base: f64,
    order: FractalOrder,
}

impl FractalNumber {
    pub fn new(base: f64, order: FractalOrder) -> Self {
        Self { base, order }
    }

    /// `0^α`, the additive identity.
    pub fn zero(order: FractalOrder) -> Self {
        Self::new(0.0, order)
    }

    /// `1^α`, the multiplicative identity.
    pub fn one(order: FractalOrder) -> Self {
        Self::new(1.0, order)
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn order(&self) -> FractalOrder {
        self.order
    }

    /// `a^α ⊕ b^α = (a + b)^α`.
    pub fn try_add(self, rhs: Self) -> Result<Self> {
        self.order.ensure_same(rhs.order)?;
        Ok(Self::new(self.base + rhs.base, self.order))
    }

    /// `a^α ⊖ b^α = (a - b)^α`.
    pub fn try_sub(self, rhs: Self) -> Result<Self> {
        self.order.ensure_same(rhs.order)?;
        Ok(Self::new(self.base - rhs.base, self.order))
    }

    /// `a^α ⊗ b^α = (ab)^α`.
    pub fn try_mul(self, rhs: Self) -> Result<Self> {
        self.order.ensure_same(rhs.order)?;
        Ok(Self::new(self.base * rhs.base, self.order))
    }

    /// Real value `sign(x)|x|^α`.
    pub fn value(&self) -> f64 {
        spow(self.base, self.order.alpha())
    }

    /// Snowflake distance `|a - b|^α`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.order.ensure_same(other.order)?;
        Ok(snowflake(self.base - other.base, self.order.alpha()))
    }
}

#[inline]
pub(crate) fn snowflake(diff: f64, alpha: f64) -> f64 {
    spow(diff.abs(), alpha)
}

/// A point `(x_1^α, …, x_n^α)` of the n-dimensional fractal space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractalPoint {
    bases: Vec<f64>,
    order: FractalOrder,
}

impl FractalPoint {
    pub fn new(bases: Vec<f64>, order: FractalOrder) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::DimensionMismatch { left: 0, right: 1 });
        }
        Ok(Self { bases, order })
    }

    pub fn bases(&self) -> &[f64] {
        &self.bases
    }

    pub fn order(&self) -> FractalOrder {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.bases.len()
    }

    /// `(Σ |p_i - q_i|^{2α})^{1/2}`; the Euclidean distance at `alpha = 1`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.order.ensure_same(other.order)?;
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let two_alpha = 2.0 * self.order.alpha();
        let sum: f64 = self
            .bases
            .iter()
            .zip(&other.bases)
            .map(|(p, q)| (p - q).abs().powf(two_alpha))
            .sum();
        Ok(sum.sqrt())
    }
}
