//! Local fractional calculus toolkit.
//!
//! Numbers on a fractal set of order `alpha` are stored by their base real,
//! so the formal identities `(x ± y)^α = x^α ± y^α` and `(xy)^α = x^α y^α`
//! hold exactly. On top of that sit generalized Taylor series in the basis
//! `(x - x0)^{kα} / Γ(1 + kα)`, black-box numerical operators (difference
//! quotients, Hölder fits, three integral backends) and the fixed-point and
//! Newton-type iterations measured in the snowflake metric `|x - y|^α`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fractal_number;
pub mod fractal_series;
pub mod numerics;
pub mod solver;
pub mod testlib;

pub use error::{Error, Result};
pub use fractal_number::{spow, FractalNumber, FractalOrder, FractalPoint};
pub use fractal_series::{mittag_leffler, taylor_remainder, FractalPowerSeries, RemainderBound};
pub use numerics::{
    gamma, holder_fit, lf_integral, lfd_limit_estimate, lfd_quotient, ln_gamma, HolderFit,
    LimitEstimate, QuadratureBackend, QuadratureSpec, RealFunction, StepSchedule,
};
pub use solver::{
    aposteriori_bound, apriori_bound, contraction_certificate, estimate_contraction,
    fixed_point_solve, newton_solve, ContractionCertificate, ContractionEstimate,
    ConvergenceReport, IterationSettings, IterationTrace, NewtonVariant, SolveStatus,
};
