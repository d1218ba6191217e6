//! Black-box numerical operators.
//!
//! Everything here works on a [`RealFunction`], a deterministic callable that
//! may also carry an exact series form. The local fractional derivative is
//! probed through its literal difference quotient, local fractional
//! continuity through a log-log Hölder fit, and the local fractional integral
//! through three backends that differ in how `(dt)^α` is read.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fractal_number::{spow, FractalOrder};
use crate::fractal_series::FractalPowerSeries;

/// Euler gamma function.
///
/// Poles at the non-positive integers are reported as domain errors.
pub fn gamma(x: f64) -> Result<f64> {
    check_pole(x)?;
    Ok(libm::tgamma(x))
}

/// `ln |Γ(x)|`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_pole(x)?;
    Ok(libm::lgamma_r(x).0)
}

fn check_pole(x: f64) -> Result<()> {
    if x.is_nan() || (x <= 0.0 && x == x.floor()) {
        Err(Error::Domain(format!("gamma has a pole at {x}")))
    } else {
        Ok(())
    }
}

/// `Γ(1 + α)` for a valid order; never a pole.
pub(crate) fn gamma_one_plus(order: FractalOrder) -> f64 {
    libm::tgamma(1.0 + order.alpha())
}

type Callable = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A deterministic real function, optionally carrying its series form and a
/// local fractional derivative of a given order.
#[derive(Clone)]
pub struct RealFunction {
    f: Callable,
    series: Option<FractalPowerSeries>,
    derivative: Option<(FractalOrder, Callable)>,
}

impl RealFunction {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            series: None,
            derivative: None,
        }
    }

    /// Wraps a series. Evaluation failures surface as NaN, which the
    /// consumers turn into evaluation errors or a diverged status.
    pub fn from_series(series: FractalPowerSeries) -> Self {
        let s = series.clone();
        Self {
            f: Arc::new(move |x| s.eval(x).unwrap_or(f64::NAN)),
            series: Some(series),
            derivative: None,
        }
    }

    pub fn with_series(mut self, series: FractalPowerSeries) -> Self {
        self.series = Some(series);
        self
    }

    /// Attaches `f^{(α)}` for the given order.
    pub fn with_derivative(
        mut self,
        order: FractalOrder,
        d: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.derivative = Some((order, Arc::new(d)));
        self
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn series(&self) -> Option<&FractalPowerSeries> {
        self.series.as_ref()
    }

    /// A callable for `f^{(α)}` at the requested order: the attached
    /// derivative if its order matches, else the shifted series form.
    pub fn lfd(&self, order: FractalOrder) -> Option<RealFunction> {
        if let Some((o, d)) = &self.derivative {
            if *o == order {
                return Some(Self {
                    f: Arc::clone(d),
                    series: None,
                    derivative: None,
                });
            }
        }
        match &self.series {
            Some(s) if s.order() == order => Some(Self::from_series(s.lfd())),
            _ => None,
        }
    }
}

impl fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFunction")
            .field("series", &self.series)
            .field(
                "derivative_order",
                &self.derivative.as_ref().map(|(o, _)| o.alpha()),
            )
            .finish_non_exhaustive()
    }
}

/// Geometric step sequence `h_i = h0 · ratio^i`, `i = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSchedule {
    h0: f64,
    ratio: f64,
    count: usize,
}

impl Default for StepSchedule {
    fn default() -> Self {
        Self {
            h0: 1e-1,
            ratio: 0.5,
            count: 20,
        }
    }
}

impl StepSchedule {
    pub fn new(h0: f64, ratio: f64, count: usize) -> Result<Self> {
        if !(h0.is_finite() && h0 > 0.0) {
            return Err(Error::Configuration(format!("h0 must be > 0, got {h0}")));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::Configuration(format!(
                "ratio must lie in (0, 1), got {ratio}"
            )));
        }
        if count < 3 {
            return Err(Error::Configuration(format!(
                "schedule needs at least 3 steps, got {count}"
            )));
        }
        Ok(Self { h0, ratio, count })
    }

    pub fn h0(&self) -> f64 {
        self.h0
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn steps(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.h0 * self.ratio.powi(i as i32))
    }
}

/// One finite-step sample `Γ(1+α)(f(x0+h) - f(x0)) / spow(h, α)` of the
/// local fractional difference quotient.
pub fn lfd_quotient(f: &RealFunction, x0: f64, h: f64, order: FractalOrder) -> Result<f64> {
    if h == 0.0 || !h.is_finite() {
        return Err(Error::Domain(format!(
            "step must be finite and nonzero, got {h}"
        )));
    }
    let f0 = f.eval(x0);
    let f1 = f.eval(x0 + h);
    if !f0.is_finite() {
        return Err(Error::Evaluation { at: x0, step: h });
    }
    if !f1.is_finite() {
        return Err(Error::Evaluation {
            at: x0 + h,
            step: h,
        });
    }
    Ok(gamma_one_plus(order) * (f1 - f0) / spow(h, order.alpha()))
}

/// Result of [`lfd_limit_estimate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    /// Final sample of the trail.
    pub estimate: f64,
    pub converged: bool,
    /// The trail decays to zero along a consistent power law; the limit is 0
    /// and `estimate` is the last (small, nonzero) sample.
    pub vanishing: bool,
    pub steps: Vec<f64>,
    pub trail: Vec<f64>,
}

const LIMIT_RTOL: f64 = 1e-6;
const VANISHING_SLOPE_TOL: f64 = 1e-2;

/// Follows the two-sided averaged quotient along the schedule.
///
/// Converged means the last three samples agree within a relative 1e-6, or
/// they shrink along a consistent power law `C·h^β` with `β > 0` (limit 0).
pub fn lfd_limit_estimate(
    f: &RealFunction,
    x0: f64,
    order: FractalOrder,
    sched: &StepSchedule,
) -> Result<LimitEstimate> {
    let mut steps = Vec::with_capacity(sched.count());
    let mut trail = Vec::with_capacity(sched.count());
    for h in sched.steps() {
        let forward = lfd_quotient(f, x0, h, order)?;
        let backward = lfd_quotient(f, x0, -h, order)?;
        let q = 0.5 * (forward + backward);
        if !q.is_finite() {
            return Err(Error::Evaluation { at: x0, step: h });
        }
        steps.push(h);
        trail.push(q);
    }

    let n = trail.len();
    let last = &trail[n - 3..];
    let scale = last.iter().fold(0.0f64, |m, q| m.max(q.abs()));
    let spread = last.iter().fold(f64::NEG_INFINITY, |m, &q| m.max(q))
        - last.iter().fold(f64::INFINITY, |m, &q| m.min(q));
    let agrees = spread <= LIMIT_RTOL * scale;

    let vanishing = !agrees && {
        let hs = &steps[n - 3..];
        let local_exponent =
            |i: usize| (last[i].abs() / last[i - 1].abs()).ln() / (hs[i] / hs[i - 1]).ln();
        let same_sign = last
            .iter()
            .all(|q| q.signum() == last[0].signum() && *q != 0.0);
        let shrinking = last[0].abs() > last[1].abs() && last[1].abs() > last[2].abs();
        same_sign && shrinking && {
            let (b1, b2) = (local_exponent(1), local_exponent(2));
            b1 > 0.0 && b2 > 0.0 && (b1 - b2).abs() <= VANISHING_SLOPE_TOL * b1.max(b2)
        }
    };

    Ok(LimitEstimate {
        estimate: trail[n - 1],
        converged: agrees || vanishing,
        vanishing,
        steps,
        trail,
    })
}

/// Log-log fit of `|f(x0 + h) - f(x0)| ≈ C·h^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderFit {
    pub exponent: f64,
    pub log_coefficient: f64,
    pub r_squared: f64,
    pub samples: usize,
}

/// Least-squares slope of `ln|Δf|` against `ln h` over the schedule.
/// Zero increments carry no scale information and are skipped.
pub fn holder_fit(f: &RealFunction, x0: f64, sched: &StepSchedule) -> Result<HolderFit> {
    let f0 = f.eval(x0);
    if !f0.is_finite() {
        return Err(Error::Evaluation { at: x0, step: 0.0 });
    }
    let mut xs = Vec::with_capacity(sched.count());
    let mut ys = Vec::with_capacity(sched.count());
    for h in sched.steps() {
        let f1 = f.eval(x0 + h);
        if !f1.is_finite() {
            return Err(Error::Evaluation {
                at: x0 + h,
                step: h,
            });
        }
        let inc = (f1 - f0).abs();
        if inc > 0.0 {
            xs.push(h.ln());
            ys.push(inc.ln());
        }
    }
    if xs.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "only {} nonzero increments; function is locally constant",
            xs.len()
        )));
    }

    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let r_squared = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    if !slope.is_finite() {
        return Err(Error::DegenerateFit("non-finite slope".into()));
    }
    Ok(HolderFit {
        exponent: slope,
        log_coefficient: intercept,
        r_squared,
        samples: xs.len(),
    })
}

/// How `∫ f(t) (dt)^α` is discretized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureBackend {
    /// `Σ f(t_j) (Δt_j)^α` over a uniform partition, at the given `N`.
    LiteralEq3,
    /// Riemann–Stieltjes midpoint sum against the measure `d(t^α)`.
    Measure,
    /// Exact integration of the attached series form.
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub backend: QuadratureBackend,
    pub partitions: usize,
}

impl QuadratureSpec {
    pub fn new(backend: QuadratureBackend, partitions: usize) -> Result<Self> {
        if partitions == 0 {
            return Err(Error::Configuration("partitions must be >= 1".into()));
        }
        Ok(Self {
            backend,
            partitions,
        })
    }
}

/// Local fractional integral `(1/Γ(1+α)) ∫_a^b f(t) (dt)^α`.
///
/// `a == b` gives 0 and `a > b` gives the negated integral over `[b, a]`.
pub fn lf_integral(
    f: &RealFunction,
    a: f64,
    b: f64,
    order: FractalOrder,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if spec.partitions == 0 {
        return Err(Error::Configuration("partitions must be >= 1".into()));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("integration limits must be finite".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return lf_integral(f, b, a, order, spec).map(|v| -v);
    }
    match spec.backend {
        QuadratureBackend::LiteralEq3 => literal_sum(f, a, b, order, spec.partitions),
        QuadratureBackend::Measure => measure_sum(f, a, b, order, spec.partitions),
        QuadratureBackend::Series => series_integral_between(f, a, b, order),
    }
}

fn literal_sum(f: &RealFunction, a: f64, b: f64, order: FractalOrder, n: usize) -> Result<f64> {
    let dt = (b - a) / n as f64;
    let weight = dt.powf(order.alpha());
    let mut sum = 0.0;
    for j in 0..n {
        let t = a + j as f64 * dt;
        let v = f.eval(t);
        if !v.is_finite() {
            return Err(Error::Evaluation { at: t, step: dt });
        }
        sum += v * weight;
    }
    Ok(sum / gamma_one_plus(order))
}

fn measure_sum(f: &RealFunction, a: f64, b: f64, order: FractalOrder, n: usize) -> Result<f64> {
    let alpha = order.alpha();
    let dt = (b - a) / n as f64;
    let mut sum = 0.0;
    for j in 0..n {
        let lo = a + j as f64 * dt;
        let hi = if j + 1 == n { b } else { lo + dt };
        let mid = 0.5 * (lo + hi);
        let v = f.eval(mid);
        if !v.is_finite() {
            return Err(Error::Evaluation { at: mid, step: dt });
        }
        sum += v * (spow(hi, alpha) - spow(lo, alpha));
    }
    Ok(sum / gamma_one_plus(order))
}

fn series_integral_between(f: &RealFunction, a: f64, b: f64, order: FractalOrder) -> Result<f64> {
    let s = f.series().ok_or_else(|| {
        Error::UnsupportedBackend("series backend needs a function with a series form".into())
    })?;
    order.ensure_same(s.order())?;
    if s.center() > a {
        return Err(Error::Domain(format!(
            "series center {} lies above the lower limit {a}",
            s.center()
        )));
    }
    let antiderivative = s.integral();
    Ok(antiderivative.eval(b)? - antiderivative.eval(a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ord(a: f64) -> FractalOrder {
        FractalOrder::new(a).unwrap()
    }

    // √π / 2, independent of any gamma routine.
    const GAMMA_1_5: f64 = 0.886_226_925_452_758;

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(2.0).unwrap(), 1.0);
        assert!((gamma(1.5).unwrap() - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-15);
        let by_recurrence = 5.5 * 4.5 * 3.5 * 2.5 * 1.5 * GAMMA_1_5;
        assert_relative_eq!(gamma(6.5).unwrap(), by_recurrence, max_relative = 1e-14);
        assert_relative_eq!(
            gamma(6.5).unwrap(),
            287.885_277_815_044_36,
            max_relative = 1e-13
        );
    }

    #[test]
    fn gamma_poles() {
        for x in [0.0, -1.0, -7.0, f64::NAN] {
            assert!(matches!(gamma(x), Err(Error::Domain(_))));
            assert!(matches!(ln_gamma(x), Err(Error::Domain(_))));
        }
        assert!(gamma(-0.5).unwrap() < 0.0);
    }

    #[test]
    fn gamma_recurrence_and_factorials() {
        let mut x = 0.5;
        while x <= 40.0 {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
            x += 0.125;
        }
        let mut fact = 1.0f64;
        for n in 1..=30u32 {
            fact *= n as f64;
            assert_relative_eq!(gamma(n as f64 + 1.0).unwrap(), fact, max_relative = 1e-13);
            assert_relative_eq!(
                ln_gamma(n as f64 + 1.0).unwrap(),
                fact.ln(),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn quotient_examples() {
        let o = ord(0.5);
        let root = RealFunction::new(|x| spow(x, 0.5));
        for h in [1e-1, 3.7e-3, 1e-8] {
            assert_relative_eq!(
                lfd_quotient(&root, 0.0, h, o).unwrap(),
                GAMMA_1_5,
                max_relative = 1e-15
            );
        }
        let id = RealFunction::new(|x| x);
        assert!((lfd_quotient(&id, 1.0, 1e-4, FractalOrder::one()).unwrap() - 1.0).abs() < 1e-10);
        let q = lfd_quotient(&root, 1.0, 1e-4, o).unwrap();
        assert!((q - 0.004_431_023_854_436_68).abs() < 1e-6);
        assert!(lfd_quotient(&root, 1.0, 0.0, o).is_err());
        let bad = RealFunction::new(|x| 1.0 / (x - 1.0));
        assert_eq!(
            lfd_quotient(&bad, 0.0, 1.0, o),
            Err(Error::Evaluation { at: 1.0, step: 1.0 })
        );
    }

    #[test]
    fn quotient_alpha_one_is_forward_difference() {
        let f = RealFunction::new(|x: f64| x.sin() * x.exp());
        for (x0, h) in [(0.3, 1e-3), (-1.2, 0.25), (2.0, -1e-5)] {
            let classical = (f.eval(x0 + h) - f.eval(x0)) / h;
            assert_eq!(
                lfd_quotient(&f, x0, h, FractalOrder::one()).unwrap(),
                classical
            );
        }
    }

    #[test]
    fn limit_of_power_law_is_gamma() {
        let o = ord(0.5);
        let f = RealFunction::new(|x| spow(x, 0.5));
        let est = lfd_limit_estimate(&f, 0.0, o, &StepSchedule::default()).unwrap();
        assert!(est.converged && !est.vanishing);
        assert!((est.estimate - GAMMA_1_5).abs() < 1e-12);
        assert_eq!(est.trail.len(), 20);
    }

    #[test]
    fn limit_of_exp() {
        let f = RealFunction::new(f64::exp);
        let classical =
            lfd_limit_estimate(&f, 0.0, FractalOrder::one(), &StepSchedule::default()).unwrap();
        assert!(classical.converged);
        assert!((classical.estimate - 1.0).abs() < 1e-6);

        let rough = lfd_limit_estimate(&f, 0.0, ord(0.5), &StepSchedule::default()).unwrap();
        assert!(rough.converged && rough.vanishing);
        assert!(rough.estimate.abs() < 1e-3);
        for w in rough.trail.windows(2) {
            assert!(w[1] < w[0]);
            assert_relative_eq!(w[1] / w[0], 0.5f64.sqrt(), max_relative = 0.05);
        }
    }

    #[test]
    fn limit_of_rough_function_does_not_converge() {
        // spow(x, 0.3) at order 0.6: the quotient blows up like h^-0.3.
        let f = RealFunction::new(|x: f64| spow(x, 0.3));
        let est = lfd_limit_estimate(&f, 0.0, ord(0.6), &StepSchedule::default()).unwrap();
        assert!(!est.converged);
    }

    #[test]
    fn limit_reports_non_finite_samples() {
        let f = RealFunction::new(|x: f64| if x > 0.01 { f64::NAN } else { x });
        assert!(matches!(
            lfd_limit_estimate(&f, 0.0, ord(0.5), &StepSchedule::default()),
            Err(Error::Evaluation { .. })
        ));
    }

    #[test]
    fn schedule_validation() {
        assert!(StepSchedule::new(0.0, 0.5, 10).is_err());
        assert!(StepSchedule::new(0.1, 1.0, 10).is_err());
        assert!(StepSchedule::new(0.1, 0.5, 2).is_err());
        let s = StepSchedule::new(1.0, 0.25, 4).unwrap();
        assert_eq!(
            s.steps().collect::<Vec<_>>(),
            vec![1.0, 0.25, 0.0625, 0.015625]
        );
    }

    #[test]
    fn holder_examples() {
        let sched = StepSchedule::default();
        let root = RealFunction::new(|x| spow(x, 0.5));
        let fit = holder_fit(&root, 0.0, &sched).unwrap();
        assert!((fit.exponent - 0.5).abs() < 1e-6);
        assert!(fit.r_squared > 1.0 - 1e-12);
        assert_eq!(fit.samples, 20);

        let lin = RealFunction::new(|x| 3.0 * x);
        let fit = holder_fit(&lin, 1.0, &sched).unwrap();
        assert!((fit.exponent - 1.0).abs() < 1e-6);
        assert!((fit.log_coefficient - 3.0f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn holder_scaling_shifts_log_coefficient() {
        let sched = StepSchedule::default();
        let f = RealFunction::new(|x| spow(x, 0.7));
        let g = RealFunction::new(|x| -4.0 * spow(x, 0.7));
        let (a, b) = (
            holder_fit(&f, 0.0, &sched).unwrap(),
            holder_fit(&g, 0.0, &sched).unwrap(),
        );
        assert!((a.exponent - b.exponent).abs() < 1e-9);
        assert!((b.log_coefficient - a.log_coefficient - 4.0f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn holder_degenerate() {
        let c = RealFunction::new(|_| 2.0);
        assert!(matches!(
            holder_fit(&c, 0.0, &StepSchedule::default()),
            Err(Error::DegenerateFit(_))
        ));
    }

    #[test]
    fn literal_backend_examples() {
        let o = ord(0.5);
        let one = RealFunction::new(|_| 1.0);
        let n1 = lf_integral(
            &one,
            0.0,
            1.0,
            o,
            &QuadratureSpec::new(QuadratureBackend::LiteralEq3, 1).unwrap(),
        )
        .unwrap();
        assert!((n1 - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-15);
        let n4 = lf_integral(
            &one,
            0.0,
            1.0,
            o,
            &QuadratureSpec::new(QuadratureBackend::LiteralEq3, 4).unwrap(),
        )
        .unwrap();
        assert!((n4 - 2.256_758_334_191_025).abs() < 1e-14);
    }

    #[test]
    fn measure_and_series_backends_disagree_on_monomials() {
        let o = ord(0.5);
        let s = FractalPowerSeries::new(o, 0.0, vec![0.0, 1.0]).unwrap();
        let f = RealFunction::from_series(s);
        let exact = lf_integral(
            &f,
            0.0,
            1.0,
            o,
            &QuadratureSpec::new(QuadratureBackend::Series, 1).unwrap(),
        )
        .unwrap();
        assert!((exact - 1.0).abs() < 1e-15);
        // (1/Γ(1.5)) ∫ t^0.5/Γ(1.5) · 0.5 t^-0.5 dt = 0.5/Γ(1.5)^2 = 2/π
        let measure = lf_integral(
            &f,
            0.0,
            1.0,
            o,
            &QuadratureSpec::new(QuadratureBackend::Measure, 10_000).unwrap(),
        )
        .unwrap();
        assert!(
            (measure - 2.0 / std::f64::consts::PI).abs() < 1e-4,
            "{measure}"
        );
        // unnormalized √t gives 1/(2Γ(1.5))
        let sqrt = RealFunction::new(|x| spow(x, 0.5));
        let measure = lf_integral(
            &sqrt,
            0.0,
            1.0,
            o,
            &QuadratureSpec::new(QuadratureBackend::Measure, 10_000).unwrap(),
        )
        .unwrap();
        assert!(
            (measure - 0.564_189_583_547_756_3).abs() < 1e-4,
            "{measure}"
        );
    }

    #[test]
    fn measure_backend_exact_for_constants() {
        let o = ord(0.3);
        let one = RealFunction::new(|_| 1.0);
        let s = FractalPowerSeries::new(o, -1.0, vec![1.0]).unwrap();
        let series_form = RealFunction::from_series(s);
        for (a, b) in [(0.0, 1.0), (-1.0, 2.5), (0.25, 0.5)] {
            let m = lf_integral(
                &one,
                a,
                b,
                o,
                &QuadratureSpec::new(QuadratureBackend::Measure, 7).unwrap(),
            )
            .unwrap();
            let expected = (spow(b, 0.3) - spow(a, 0.3)) / gamma(1.3).unwrap();
            assert_relative_eq!(m, expected, max_relative = 1e-13);
            // the series backend measures (b - c)^α - (a - c)^α from its own center
            let e = lf_integral(
                &series_form,
                a,
                b,
                o,
                &QuadratureSpec::new(QuadratureBackend::Series, 1).unwrap(),
            )
            .unwrap();
            let expected = (spow(b + 1.0, 0.3) - spow(a + 1.0, 0.3)) / gamma(1.3).unwrap();
            assert_relative_eq!(e, expected, max_relative = 1e-13);
        }
    }

    #[test]
    fn integral_orientation_and_degenerate_interval() {
        let o = ord(0.7);
        let s = FractalPowerSeries::new(o, 0.0, vec![1.0, -0.5, 2.0]).unwrap();
        let f = RealFunction::from_series(s);
        for backend in [
            QuadratureBackend::LiteralEq3,
            QuadratureBackend::Measure,
            QuadratureBackend::Series,
        ] {
            let spec = QuadratureSpec::new(backend, 13).unwrap();
            let fwd = lf_integral(&f, 0.2, 1.9, o, &spec).unwrap();
            let bwd = lf_integral(&f, 1.9, 0.2, o, &spec).unwrap();
            assert_eq!(fwd, -bwd);
            assert_eq!(lf_integral(&f, 0.4, 0.4, o, &spec).unwrap(), 0.0);
        }
    }

    #[test]
    fn integral_errors() {
        let o = ord(0.5);
        let plain = RealFunction::new(|x| x);
        let series = QuadratureSpec::new(QuadratureBackend::Series, 1).unwrap();
        assert!(matches!(
            lf_integral(&plain, 0.0, 1.0, o, &series),
            Err(Error::UnsupportedBackend(_))
        ));
        let centered =
            RealFunction::from_series(FractalPowerSeries::new(o, 0.5, vec![1.0]).unwrap());
        assert!(matches!(
            lf_integral(&centered, 0.0, 1.0, o, &series),
            Err(Error::Domain(_))
        ));
        let other =
            RealFunction::from_series(FractalPowerSeries::new(ord(0.6), 0.0, vec![1.0]).unwrap());
        assert!(matches!(
            lf_integral(&other, 0.0, 1.0, o, &series),
            Err(Error::OrderMismatch { .. })
        ));
        let nan = RealFunction::new(|x| if x > 0.5 { f64::NAN } else { 1.0 });
        let lit = QuadratureSpec::new(QuadratureBackend::LiteralEq3, 4).unwrap();
        assert!(matches!(
            lf_integral(&nan, 0.0, 1.0, o, &lit),
            Err(Error::Evaluation { .. })
        ));
        assert!(QuadratureSpec::new(QuadratureBackend::Measure, 0).is_err());
    }

    #[test]
    fn series_backend_additive_over_adjacent_intervals() {
        let o = ord(0.4);
        let s = FractalPowerSeries::new(o, 0.0, vec![0.3, 1.0, -2.0, 0.75]).unwrap();
        let f = RealFunction::from_series(s);
        let spec = QuadratureSpec::new(QuadratureBackend::Series, 1).unwrap();
        let (a, c, b) = (0.1, 0.65, 1.8);
        let whole = lf_integral(&f, a, b, o, &spec).unwrap();
        let parts =
            lf_integral(&f, a, c, o, &spec).unwrap() + lf_integral(&f, c, b, o, &spec).unwrap();
        assert!((whole - parts).abs() <= 4.0 * f64::EPSILON * whole.abs());
    }

    #[test]
    fn series_derivative_attached_via_lfd() {
        let o = ord(0.5);
        let f = RealFunction::from_series(
            FractalPowerSeries::new(o, 0.0, vec![0.0, 0.0, 1.0]).unwrap(),
        );
        let d = f.lfd(o).unwrap();
        assert!((d.eval(1.0) - 1.0 / GAMMA_1_5).abs() < 1e-15);
        assert!(f.lfd(ord(0.25)).is_none());
        let g = RealFunction::new(|x| x * x).with_derivative(FractalOrder::one(), |x| 2.0 * x);
        assert_eq!(g.lfd(FractalOrder::one()).unwrap().eval(3.0), 6.0);
        assert!(g.lfd(o).is_none());
    }
}
