//! Moduli of one-circle packings on complex affine tori, and the hyperbolic
//! Dehn filling space of the one-cusped orbifold they parametrize.
//!
//! The affine parameter `c` of a torus admitting a one-circle packing ranges
//! over the strip `|Im c| < pi`. Each nonzero `c` determines the Teichmüller
//! parameter `omega` through the level curves of
//! `f(z) = 1 - cos(Im z / 2) / cosh(Re z / 2)` ([`levelset`], [`moduli`]),
//! and with it Dehn filling coefficients, the slope-like invariant `T` and
//! cone data ([`filling`]). [`packing`] develops the packing itself.
//!
//! ```
//! use onecircle::{moduli::solve_parallelogram, Complex64};
//!
//! let point = solve_parallelogram(Complex64::new(0.5, 0.5)).unwrap();
//! assert!(point.omega().im > 0.0);
//! assert!(point.residual() < 1e-9);
//! ```

pub mod error;
pub mod filling;
pub mod levelset;
pub mod moduli;
pub mod packing;
pub mod parse;

pub use num_complex::Complex64;

/// A point of the parameter plane.
pub type ComplexValue = Complex64;

pub use error::{Error, Result};
pub use filling::{DehnFilling, Extended, FillingData, HexagonRegion};
pub use levelset::{f_value, level_point, level_radius, LevelSpec};
pub use moduli::{ModuliPoint, ModuliSolver, RegionId, SolverConfig};
pub use packing::{PackingSpec, ValidationReport, Window};
