//! Coherent states of the Jacobi group `G^J_1 = H_1 ⋊ SU(1,1)` based on the
//! manifold `C × D1`.
//!
//! The crate covers the group law and its action on `(z, w)`, the composition
//! rules for displacement and squeeze operators, the reproducing kernel with
//! its Kähler geometry, the realization of the Lie algebra by first order
//! differential operators, truncated Fock-space matrices used as an
//! independent check, classical motion on the manifold and the Siegel-Jacobi
//! upper half plane picture.
//!
//! ```
//! use jacobi_cs::{kernel, JacobiCSPoint, Weight};
//! use num_complex::Complex64;
//!
//! let k = Weight::strict(1.5).unwrap();
//! let x = JacobiCSPoint::new(Complex64::new(0.3, -0.2), Complex64::new(0.1, 0.4)).unwrap();
//! let kxx = kernel::kernel_closed(&x, &x, &k);
//! assert!(kxx.re > 1.0 && kxx.im.abs() < 1e-12);
//! ```

// negated float comparisons are used on purpose so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cjson;
pub mod coords;
pub mod diffops;
pub mod dynamics;
mod error;
pub mod fock;
pub mod kernel;
pub mod numerics;
pub mod transforms;
pub mod verify;
mod weight;

pub use algebra::{DiskPoint, JacobiCSPoint, JacobiElement, SU11Matrix};
pub use error::{Error, Result};
pub use weight::{Weight, WeightMode};

/// Minimal distance to the unit circle accepted when a disk point is built
/// from a raw complex value.
pub const BOUNDARY_EPS: f64 = 1e-12;

/// Tolerance on `|a|^2 - |b|^2 = 1` for SU(1,1) matrices.
pub const SU11_EPS: f64 = 1e-12;
