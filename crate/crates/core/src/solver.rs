//! Fixed-point and Newton-type iteration measured in the snowflake metric.
//!
//! Iterates live in real base coordinates and maps are evaluated with
//! ordinary real arithmetic. The fractal order enters through the metric
//! `ρ_α(x, y) = |x - y|^α`, which drives the stopping rule, the empirical
//! contraction constant and the a priori / a posteriori error bounds.
//!
//! The a posteriori bound is the geometric-series consequence of the
//! telescoping estimate `ρ(x_{k+p}, x_k) ≤ (L^{p-1} + … + 1) ρ(x_{k+1}, x_k)`,
//! i.e. `ρ(x*, x_k) ≤ ρ(x_{k+1}, x_k) / (1 - L)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fractal_number::{snowflake, spow, FractalOrder};
use crate::fractal_series::FractalPowerSeries;
use crate::numerics::{gamma_one_plus, RealFunction};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationSettings {
    pub max_iter: usize,
    /// Threshold on `ρ_α(x_{k+1}, x_k)`.
    pub tol: f64,
    pub order: FractalOrder,
    pub contraction_window: usize,
}

impl IterationSettings {
    /// Defaults: 200 iterations, window 5, and a base-coordinate tolerance
    /// of 1e-10, i.e. `tol = (1e-10)^α` in the fractal metric.
    pub fn new(order: FractalOrder) -> Self {
        Self {
            max_iter: 200,
            tol: Self::tol_from_base(1e-10, order),
            order,
            contraction_window: 5,
        }
    }

    /// Converts a tolerance on `|x_{k+1} - x_k|` into the fractal metric.
    pub fn tol_from_base(base_tol: f64, order: FractalOrder) -> f64 {
        base_tol.powf(order.alpha())
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_window(mut self, window: usize) -> Self {
        self.contraction_window = window;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iter < 1 {
            return Err(Error::Configuration("max_iter must be >= 1".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Configuration(format!(
                "tol must be > 0, got {}",
                self.tol
            )));
        }
        if self.contraction_window < 2 {
            return Err(Error::Configuration(
                "contraction_window must be >= 2".into(),
            ));
        }
        if self.contraction_window > self.max_iter {
            return Err(Error::Configuration(
                "contraction_window must not exceed max_iter".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct IterationTrace {
    pub iterates: Vec<f64>,
    /// `ρ_α(x_{k+1}, x_k)`.
    pub fractal_steps: Vec<f64>,
    /// `fractal_steps[k + 1] / fractal_steps[k]`.
    pub ratio_sequence: Vec<f64>,
}

impl IterationTrace {
    fn start(x0: f64) -> Self {
        Self {
            iterates: vec![x0],
            ..Self::default()
        }
    }

    fn push(&mut self, x: f64, step: f64) {
        if let Some(&prev) = self.fractal_steps.last() {
            self.ratio_sequence.push(step_ratio(prev, step));
        }
        self.iterates.push(x);
        self.fractal_steps.push(step);
    }

    /// Builds a trace from iterates alone.
    pub fn from_iterates(iterates: Vec<f64>, order: FractalOrder) -> Self {
        let mut trace = Self::start(iterates[0]);
        for w in iterates.windows(2) {
            trace.push(w[1], snowflake(w[1] - w[0], order.alpha()));
        }
        trace
    }

    /// Builds a trace from a step sequence; iterates are left empty.
    pub fn from_steps(steps: Vec<f64>) -> Self {
        let ratio_sequence = steps.windows(2).map(|w| step_ratio(w[0], w[1])).collect();
        Self {
            iterates: Vec::new(),
            fractal_steps: steps,
            ratio_sequence,
        }
    }

    pub fn iterations(&self) -> usize {
        self.fractal_steps.len()
    }
}

fn step_ratio(prev: f64, next: f64) -> f64 {
    if prev > 0.0 {
        next / prev
    } else if next == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractionEstimate {
    pub l_hat: f64,
    pub window: usize,
    /// Every windowed ratio is below 1.
    pub uniform: bool,
}

/// Empirical contraction constant: the largest of the last `window` step
/// ratios. A zero step inside the window means the iteration already sits
/// on a fixed point and yields `L̂ = 0`.
pub fn estimate_contraction(trace: &IterationTrace, window: usize) -> Result<ContractionEstimate> {
    let steps = &trace.fractal_steps;
    if window == 0 || steps.len() < window + 1 {
        return Err(Error::InsufficientData {
            needed: window + 1,
            got: steps.len(),
        });
    }
    let tail = &steps[steps.len() - window - 1..];
    if tail.contains(&0.0) {
        return Ok(ContractionEstimate {
            l_hat: 0.0,
            window,
            uniform: true,
        });
    }
    let l_hat = tail.windows(2).map(|w| w[1] / w[0]).fold(0.0f64, f64::max);
    Ok(ContractionEstimate {
        l_hat,
        window,
        uniform: l_hat < 1.0,
    })
}

/// `L^k · ρ_α(x*, x_0)`.
pub fn apriori_bound(l: f64, dist0: f64, k: u32) -> Result<f64> {
    if !(0.0..1.0).contains(&l) {
        return Err(Error::BoundUnavailable(l));
    }
    Ok(l.powi(k as i32) * dist0)
}

/// `last_step / (1 - L̂)`, or `+∞` when `L̂ ≥ 1`.
pub fn aposteriori_bound(l_hat: f64, last_step: f64) -> f64 {
    if l_hat < 1.0 {
        last_step / (1.0 - l_hat)
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    MaxIterExceeded,
    Diverged,
    NonContractive,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Converged => "converged",
            Self::MaxIterExceeded => "max_iter_exceeded",
            Self::Diverged => "diverged",
            Self::NonContractive => "non_contractive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub status: SolveStatus,
    /// Last iterate.
    pub root: f64,
    pub trace: IterationTrace,
    pub contraction: ContractionEstimate,
    /// Fractal-metric error bound; `+∞` when no contraction was observed.
    pub a_posteriori: f64,
    /// `|f(root)|` for Newton, `ρ_α(φ(root), root)` for fixed-point runs.
    pub residual: f64,
}

impl ConvergenceReport {
    pub fn iterations(&self) -> usize {
        self.trace.iterations()
    }

    pub fn to_document(&self) -> ReportDocument {
        ReportDocument::from(self)
    }
}

/// JSON layout of a [`ConvergenceReport`]. Non-finite numbers are written
/// as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub status: SolveStatus,
    pub root: Option<f64>,
    pub residual: Option<f64>,
    pub iterations: usize,
    #[serde(rename = "L_hat")]
    pub l_hat: Option<f64>,
    pub a_posteriori: Option<f64>,
    pub trace: Vec<TraceRow>,
}

/// One iterate; `step` is `ρ_α(x_k, x_{k-1})`, absent for `k = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceRow {
    pub k: usize,
    pub x: Option<f64>,
    pub step: Option<f64>,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl From<&ConvergenceReport> for ReportDocument {
    fn from(r: &ConvergenceReport) -> Self {
        let trace = r
            .trace
            .iterates
            .iter()
            .enumerate()
            .map(|(k, &x)| TraceRow {
                k,
                x: finite(x),
                step: k
                    .checked_sub(1)
                    .and_then(|i| finite(r.trace.fractal_steps[i])),
            })
            .collect();
        Self {
            status: r.status,
            root: finite(r.root),
            residual: finite(r.residual),
            iterations: r.iterations(),
            l_hat: finite(r.contraction.l_hat),
            a_posteriori: finite(r.a_posteriori),
            trace,
        }
    }
}

/// Runs `x_{k+1} = advance(x_k)` under the shared stopping rules.
fn iterate(
    x0: f64,
    settings: &IterationSettings,
    mut advance: impl FnMut(f64) -> Result<f64>,
) -> Result<(SolveStatus, IterationTrace)> {
    settings.validate()?;
    if !x0.is_finite() {
        return Err(Error::Configuration(format!(
            "starting point must be finite, got {x0}"
        )));
    }
    let alpha = settings.order.alpha();
    let stall = 3 * settings.contraction_window;
    let mut trace = IterationTrace::start(x0);
    let mut x = x0;
    for _ in 0..settings.max_iter {
        let next = advance(x)?;
        let step = snowflake(next - x, alpha);
        if !next.is_finite() || !step.is_finite() {
            trace.iterates.push(next);
            trace.fractal_steps.push(f64::INFINITY);
            return Ok((SolveStatus::Diverged, trace));
        }
        trace.push(next, step);
        x = next;
        if step <= settings.tol {
            return Ok((SolveStatus::Converged, trace));
        }
        let ratios = &trace.ratio_sequence;
        if ratios.len() >= stall && ratios[ratios.len() - stall..].iter().all(|&r| r >= 1.0) {
            return Ok((SolveStatus::NonContractive, trace));
        }
    }
    Ok((SolveStatus::MaxIterExceeded, trace))
}

fn summarize(trace: &IterationTrace, window: usize) -> (ContractionEstimate, f64) {
    let steps = &trace.fractal_steps;
    let last = steps.last().copied().unwrap_or(0.0);
    let w = window.min(steps.len().saturating_sub(1));
    let contraction = if w >= 1 && last.is_finite() {
        estimate_contraction(trace, w).ok()
    } else {
        None
    }
    .unwrap_or_else(|| {
        // a single step: only a zero step says anything about L
        let l_hat = if steps.len() == 1 && last == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        ContractionEstimate {
            l_hat,
            window: w,
            uniform: l_hat < 1.0,
        }
    });
    let a_posteriori = aposteriori_bound(contraction.l_hat, last);
    (contraction, a_posteriori)
}

/// Fixed-point iteration `x_{k+1} = φ(x_k)`.
///
/// Non-finite map values end the run with [`SolveStatus::Diverged`];
/// only invalid settings are errors.
pub fn fixed_point_solve(
    phi: &RealFunction,
    x0: f64,
    settings: &IterationSettings,
) -> Result<ConvergenceReport> {
    let (status, trace) = iterate(x0, settings, |x| Ok(phi.eval(x)))?;
    let (contraction, a_posteriori) = summarize(&trace, settings.contraction_window);
    let root = *trace.iterates.last().unwrap();
    let residual = snowflake(phi.eval(root) - root, settings.order.alpha());
    Ok(ConvergenceReport {
        status,
        root,
        residual: if residual.is_finite() {
            residual
        } else {
            f64::INFINITY
        },
        trace,
        contraction,
        a_posteriori,
    })
}

/// Coordinate system in which the Newton increment is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NewtonVariant {
    /// `x_{k+1} = x_k + spow(s_k, 1/α)`.
    BaseCoordinate,
    /// `u = spow(x, α)`, `u_{k+1} = u_k + s_k`, `x_{k+1} = spow(u_{k+1}, 1/α)`.
    FractalCoordinate,
}

/// Newton-type iteration from the first-order generalized Taylor expansion
/// `0 = f(x_k) + f^{(α)}(x_k)/Γ(1+α) · (x - x_k)^α`, with increment
/// `s_k = -Γ(1+α) f(x_k) / f^{(α)}(x_k)`.
///
/// `f` must carry a derivative of the settings' order, either attached
/// directly or through its series form.
pub fn newton_solve(
    f: &RealFunction,
    x0: f64,
    settings: &IterationSettings,
    variant: NewtonVariant,
) -> Result<ConvergenceReport> {
    let order = settings.order;
    let deriv = f.lfd(order).ok_or_else(|| {
        Error::Configuration(format!(
            "no local fractional derivative of order {} available",
            order.alpha()
        ))
    })?;
    let alpha = order.alpha();
    let g = gamma_one_plus(order);
    let (status, trace) = iterate(x0, settings, |x| {
        let fx = f.eval(x);
        let dfx = deriv.eval(x);
        if !(fx.is_finite() && dfx.is_finite()) {
            return Ok(f64::NAN);
        }
        if dfx == 0.0 {
            return Err(Error::DerivativeVanishes { iterate: x });
        }
        let s = -g * fx / dfx;
        Ok(match variant {
            NewtonVariant::BaseCoordinate => x + spow(s, 1.0 / alpha),
            NewtonVariant::FractalCoordinate => spow(spow(x, alpha) + s, 1.0 / alpha),
        })
    })?;
    let (contraction, a_posteriori) = summarize(&trace, settings.contraction_window);
    let root = *trace.iterates.last().unwrap();
    let residual = f.eval(root).abs();
    Ok(ConvergenceReport {
        status,
        root,
        residual: if residual.is_finite() {
            residual
        } else {
            f64::INFINITY
        },
        trace,
        contraction,
        a_posteriori,
    })
}

/// Sampled bound `L = max |φ^{(α)}(x)| / Γ(1+α)` over a uniform grid.
///
/// This is a sampling certificate, not a proof: it can miss spikes of the
/// derivative between grid points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractionCertificate {
    pub lipschitz: f64,
    pub certified: bool,
    pub grid: usize,
}

pub fn contraction_certificate(
    phi: &FractalPowerSeries,
    a: f64,
    b: f64,
    grid: usize,
) -> Result<ContractionCertificate> {
    if !(a < b) {
        return Err(Error::Domain(format!("need a < b, got [{a}, {b}]")));
    }
    if grid < 2 {
        return Err(Error::Configuration("grid needs at least 2 points".into()));
    }
    let d = phi.lfd();
    let g = gamma_one_plus(phi.order());
    let h = (b - a) / (grid - 1) as f64;
    let mut max = 0.0f64;
    for i in 0..grid {
        let x = if i + 1 == grid { b } else { a + i as f64 * h };
        max = max.max(d.eval(x)?.abs());
    }
    let lipschitz = max / g;
    Ok(ContractionCertificate {
        lipschitz,
        certified: lipschitz < 1.0,
        grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gamma;

    fn ord(a: f64) -> FractalOrder {
        FractalOrder::new(a).unwrap()
    }

    /// Fixed point of `x ↦ 1 + 0.5√x`: with `s = √x`, `s² - 0.5s - 1 = 0`.
    fn affine_fixed_point() -> f64 {
        let s = (0.5 + 4.25f64.sqrt()) / 2.0;
        s * s
    }

    fn affine() -> RealFunction {
        RealFunction::new(|x| 1.0 + 0.5 * spow(x, 0.5))
    }

    #[test]
    fn settings_validation() {
        let o = ord(0.5);
        assert!(IterationSettings::new(o).validate().is_ok());
        assert!((IterationSettings::new(o).tol - 1e-5).abs() < 1e-20);
        assert!(IterationSettings::new(o)
            .with_max_iter(0)
            .validate()
            .is_err());
        assert!(IterationSettings::new(o).with_tol(0.0).validate().is_err());
        assert!(IterationSettings::new(o).with_window(1).validate().is_err());
        assert!(IterationSettings::new(o)
            .with_max_iter(3)
            .with_window(4)
            .validate()
            .is_err());
        assert!(
            fixed_point_solve(&affine(), 2.0, &IterationSettings::new(o).with_window(1)).is_err()
        );
    }

    #[test]
    fn fixed_point_affine_fractal() {
        let o = ord(0.5);
        let r = fixed_point_solve(&affine(), 2.0, &IterationSettings::new(o)).unwrap();
        assert_eq!(r.status, SolveStatus::Converged);
        assert!((r.root - affine_fixed_point()).abs() < 1e-8);
        assert!((r.root - 1.640_388_203_202_207_5).abs() < 1e-8);
        assert!(*r.trace.fractal_steps.last().unwrap() <= IterationSettings::new(o).tol);
        assert!(r.residual <= 2.0 * IterationSettings::new(o).tol);
    }

    #[test]
    fn fixed_point_cos() {
        let r = fixed_point_solve(
            &RealFunction::new(f64::cos),
            1.0,
            &IterationSettings::new(FractalOrder::one()),
        )
        .unwrap();
        assert_eq!(r.status, SolveStatus::Converged);
        assert!((r.root - 0.739_085_133_215_160_6).abs() < 1e-7);
    }

    #[test]
    fn fixed_point_identity() {
        for a in [0.3, 1.0] {
            let r = fixed_point_solve(
                &RealFunction::new(|x| x),
                3.0,
                &IterationSettings::new(ord(a)),
            )
            .unwrap();
            assert_eq!(r.status, SolveStatus::Converged);
            assert_eq!(r.iterations(), 1);
            assert_eq!(r.root, 3.0);
            assert_eq!(r.trace.fractal_steps, vec![0.0]);
            assert_eq!(r.contraction.l_hat, 0.0);
            assert_eq!(r.a_posteriori, 0.0);
        }
    }

    #[test]
    fn fixed_point_failure_statuses() {
        let o = FractalOrder::one();
        let blowup = RealFunction::new(|x: f64| {
            if x > 1e3 {
                f64::INFINITY
            } else {
                3.0 * x + 1.0
            }
        });
        let r = fixed_point_solve(&blowup, 1.0, &IterationSettings::new(o)).unwrap();
        assert_eq!(r.status, SolveStatus::Diverged);
        assert_eq!(r.a_posteriori, f64::INFINITY);

        let r = fixed_point_solve(
            &RealFunction::new(|x| 2.0 * x + 1.0),
            1.0,
            &IterationSettings::new(o),
        )
        .unwrap();
        assert_eq!(r.status, SolveStatus::NonContractive);
        assert_eq!(r.iterations(), 16);
        assert!(!r.contraction.uniform);

        let slow = RealFunction::new(|x| 0.99 * x);
        let r =
            fixed_point_solve(&slow, 1.0, &IterationSettings::new(o).with_max_iter(20)).unwrap();
        assert_eq!(r.status, SolveStatus::MaxIterExceeded);
        assert_eq!(r.iterations(), 20);
        assert!((r.contraction.l_hat - 0.99).abs() < 1e-12);

        // a 2-cycle has unit ratios forever
        let flip = RealFunction::new(|x| -x);
        let r = fixed_point_solve(&flip, 1.0, &IterationSettings::new(ord(0.5))).unwrap();
        assert_eq!(r.status, SolveStatus::NonContractive);
    }

    #[test]
    fn contraction_examples() {
        let t = IterationTrace::from_steps(vec![1.0, 0.25, 0.0625]);
        let e = estimate_contraction(&t, 2).unwrap();
        assert_eq!(e.l_hat, 0.25);
        assert!(e.uniform);

        let flat = IterationTrace::from_steps(vec![0.5; 6]);
        let e = estimate_contraction(&flat, 5).unwrap();
        assert_eq!(e.l_hat, 1.0);
        assert!(!e.uniform);

        let stuck = IterationTrace::from_steps(vec![1.0, 0.5, 0.0, 0.0]);
        assert_eq!(estimate_contraction(&stuck, 3).unwrap().l_hat, 0.0);

        assert_eq!(
            estimate_contraction(&t, 3),
            Err(Error::InsufficientData { needed: 4, got: 3 })
        );
    }

    #[test]
    fn contraction_of_affine_fractal_tail() {
        let o = ord(0.5);
        let r = fixed_point_solve(&affine(), 2.0, &IterationSettings::new(o)).unwrap();
        // asymptotic ratio (φ'(x*))^α = (0.25/√x*)^0.5
        let asymptotic = (0.25 / affine_fixed_point().sqrt()).sqrt();
        assert!((asymptotic - 0.4417).abs() < 1e-3);
        assert!((r.contraction.l_hat - asymptotic).abs() < 0.02);
        assert!(r.contraction.uniform);
    }

    #[test]
    fn bound_examples() {
        assert_eq!(apriori_bound(0.3, 1.7, 0).unwrap(), 1.7);
        let dist0 = affine_fixed_point().sqrt();
        assert!((dist0 - 1.280_776_5).abs() < 1e-7);
        assert!((apriori_bound(0.5, dist0, 3).unwrap() - 0.160_097_050_800_551_9).abs() < 1e-15);
        assert_eq!(apriori_bound(0.0, 2.0, 4).unwrap(), 0.0);
        assert_eq!(
            apriori_bound(1.0, 2.0, 4),
            Err(Error::BoundUnavailable(1.0))
        );
        assert!(apriori_bound(-0.1, 2.0, 4).is_err());

        assert_eq!(aposteriori_bound(0.0, 0.37), 0.37);
        assert_eq!(aposteriori_bound(0.5, 0.01), 0.02);
        assert_eq!(aposteriori_bound(1.0, 0.01), f64::INFINITY);
    }

    #[test]
    fn bounds_dominate_true_distance() {
        let o = ord(0.5);
        let settings = IterationSettings::new(o);
        let xs = affine_fixed_point();
        let r = fixed_point_solve(&affine(), 2.0, &settings).unwrap();
        let phi = FractalPowerSeries::new(o, 0.0, vec![1.0, 0.5 * gamma(1.5).unwrap()]).unwrap();
        let cert = contraction_certificate(&phi, 1.0, 2.0, 64).unwrap();
        let dist0 = snowflake(xs - 2.0, 0.5);
        for (k, &x) in r.trace.iterates.iter().enumerate() {
            let truth = snowflake(xs - x, 0.5);
            assert!(
                apriori_bound(cert.lipschitz, dist0, k as u32).unwrap() >= truth,
                "a priori at k={k}"
            );
            if k >= settings.contraction_window && k < r.trace.fractal_steps.len() {
                let bound = aposteriori_bound(r.contraction.l_hat, r.trace.fractal_steps[k]);
                assert!(bound >= truth, "a posteriori at k={k}");
            }
        }
    }

    #[test]
    fn newton_first_step_and_convergence() {
        let o = ord(0.5);
        let f = RealFunction::from_series(
            FractalPowerSeries::new(o, 0.0, vec![-1.0, 0.0, 1.0]).unwrap(),
        );
        // the base variant closes in sublinearly here: x_{k+1} - 1 ≈ e - (π/4)² e²
        let slow = IterationSettings::new(o).with_max_iter(200_000);
        let base = newton_solve(&f, 4.0, &slow, NewtonVariant::BaseCoordinate).unwrap();
        // s_0 = -Γ(1.5)²·3/2 = -3π/8, x_1 = 4 - s_0²
        let s0 = 3.0 * std::f64::consts::PI / 8.0;
        assert!((base.trace.iterates[1] - (4.0 - s0 * s0)).abs() < 1e-12);
        assert!((base.trace.iterates[1] - 2.612_086_881_096_809).abs() < 1e-6);
        assert_eq!(base.status, SolveStatus::Converged);
        assert!(base.iterations() > 100_000);
        assert!((base.root - 1.0).abs() < 1e-4);
        let capped = newton_solve(
            &f,
            4.0,
            &IterationSettings::new(o),
            NewtonVariant::BaseCoordinate,
        )
        .unwrap();
        assert_eq!(capped.status, SolveStatus::MaxIterExceeded);

        let frac = newton_solve(
            &f,
            4.0,
            &IterationSettings::new(o),
            NewtonVariant::FractalCoordinate,
        )
        .unwrap();
        assert_eq!(frac.status, SolveStatus::Converged);
        // scalar recurrence u ← u - (π/4)(u² - 1)/u from u_0 = 2
        let mut u = 2.0f64;
        for (k, &x) in frac.trace.iterates.iter().enumerate().skip(1) {
            u -= std::f64::consts::FRAC_PI_4 * (u * u - 1.0) / u;
            assert!((x - u * u).abs() < 1e-12 * (1.0 + u * u), "k={k}");
        }
        assert!((frac.root - 1.0).abs() < 1e-9);
    }

    #[test]
    fn newton_classical_reduction() {
        let one = FractalOrder::one();
        let f = RealFunction::new(|x| x * x - 2.0).with_derivative(one, |x| 2.0 * x);
        let settings = IterationSettings::new(one);
        let a = newton_solve(&f, 1.0, &settings, NewtonVariant::BaseCoordinate).unwrap();
        let b = newton_solve(&f, 1.0, &settings, NewtonVariant::FractalCoordinate).unwrap();
        assert_eq!(a, b);
        assert!(a.iterations() <= 8);
        assert!((a.root - std::f64::consts::SQRT_2).abs() < 1e-10);
        let mut x = 1.0f64;
        for &xi in &a.trace.iterates[1..] {
            x -= (x * x - 2.0) / (2.0 * x);
            assert_eq!(xi, x);
        }
    }

    #[test]
    fn newton_errors() {
        let o = ord(0.5);
        let plain = RealFunction::new(|x| x - 1.0);
        assert!(matches!(
            newton_solve(
                &plain,
                2.0,
                &IterationSettings::new(o),
                NewtonVariant::BaseCoordinate
            ),
            Err(Error::Configuration(_))
        ));
        let flat =
            RealFunction::new(|x| x * x + 1.0).with_derivative(FractalOrder::one(), |x| 2.0 * x);
        assert_eq!(
            newton_solve(
                &flat,
                0.0,
                &IterationSettings::new(FractalOrder::one()),
                NewtonVariant::BaseCoordinate
            ),
            Err(Error::DerivativeVanishes { iterate: 0.0 })
        );
    }

    #[test]
    fn certificate_examples() {
        let o = ord(0.5);
        let g = gamma(1.5).unwrap();
        let affine = FractalPowerSeries::new(o, 0.0, vec![1.0, 0.5 * g]).unwrap();
        for (a, b) in [(0.0, 1.0), (-3.0, 7.0)] {
            let c = contraction_certificate(&affine, a, b, 11).unwrap();
            assert!((c.lipschitz - 0.5).abs() < 1e-15);
            assert!(c.certified);
        }
        let id = FractalPowerSeries::new(FractalOrder::one(), 2.0, vec![2.0, 1.0]).unwrap();
        let c = contraction_certificate(&id, 0.0, 4.0, 5).unwrap();
        assert_eq!(c.lipschitz, 1.0);
        assert!(!c.certified);
        let zero = FractalPowerSeries::zero(o, 0.0);
        let c = contraction_certificate(&zero, 0.0, 1.0, 2).unwrap();
        assert_eq!(c.lipschitz, 0.0);
        assert!(c.certified);
        assert!(contraction_certificate(&zero, 1.0, 1.0, 4).is_err());
        assert!(contraction_certificate(&zero, 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn report_document_layout() {
        let o = ord(0.5);
        let r = fixed_point_solve(&affine(), 2.0, &IterationSettings::new(o)).unwrap();
        let doc = r.to_document();
        assert_eq!(doc.trace.len(), r.iterations() + 1);
        assert_eq!(doc.trace[0].step, None);
        assert_eq!(doc.trace[1].step, Some(r.trace.fractal_steps[0]));
        let json = serde_json::to_value(&doc).unwrap();
        let keys: Vec<_> = json.as_object().unwrap().keys().cloned().collect();
        assert_eq!(
            keys,
            [
                "L_hat",
                "a_posteriori",
                "iterations",
                "residual",
                "root",
                "status",
                "trace"
            ]
        );
        assert_eq!(json["status"], "converged");
        let back: ReportDocument = serde_json::from_value(json).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn deterministic_reports() {
        let o = ord(0.5);
        let a = fixed_point_solve(&affine(), 2.0, &IterationSettings::new(o)).unwrap();
        let b = fixed_point_solve(&affine(), 2.0, &IterationSettings::new(o)).unwrap();
        assert_eq!(a, b);
    }
}
