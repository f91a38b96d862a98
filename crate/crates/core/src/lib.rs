//! Partial sums of the Gauss hypergeometric series at unit argument.
//!
//! For complex parameters `a`, `b`, `c` the finite sum
//!
//! ```text
//! S_n(a,b;c) = Σ_{k=0}^{n-1} (a)_k (b)_k / ((c)_k k!)
//! ```
//!
//! is evaluated through convergent inverse factorial expansions whose form
//! depends on the parametric excess `s = c - a - b`:
//!
//! | excess                  | evaluator                          |
//! |-------------------------|------------------------------------|
//! | generic                 | [`engine::eval_generic`]           |
//! | `s = 0`                 | [`engine::eval_log`]               |
//! | `s = m > 0`             | [`engine::eval_pos_int`]           |
//! | `s = -m`                | [`engine::eval_neg_int`]           |
//! | `s = -m`, `a` or `b` in `1..=m` | [`engine::eval_conjectured`] |
//!
//! [`engine::eval_auto`] dispatches on [`params::classify`]. The Landau
//! constants `G_n = S_{n+1}(1/2,1/2;1)` are available through several
//! independent formulas in [`landau`], the asymptotic coefficient families
//! live in [`coeffs`], and [`oracle`] provides an extended-precision
//! reference evaluator built on MPFR.
//!
//! ```
//! use hypersum::{engine, params, Tolerance};
//! use num_complex::Complex64;
//!
//! let p = params::ParamSet::new(
//!     Complex64::new(0.5, 0.0),
//!     Complex64::new(0.5, 0.0),
//!     Complex64::new(1.0, 0.0),
//! ).unwrap();
//! let report = engine::eval_auto(&p, 2, &Tolerance::default()).unwrap();
//! assert!((report.value.re - 1.25).abs() < 1e-13);
//! ```

pub mod cli;
pub mod coeffs;
pub mod complexfn;
mod dd;
pub mod engine;
mod error;
pub mod landau;
pub mod oracle;
pub mod params;
mod series;
pub mod table1;
pub mod verify;

pub use complexfn::ComplexVal;
pub use engine::{EvalReport, Tolerance};
pub use error::{Error, Result};
pub use params::{ExcessClass, ExcessKind, Flag, ParamSet};
