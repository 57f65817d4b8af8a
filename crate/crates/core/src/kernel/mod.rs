//! Reproducing kernel of the coherent state vectors, the orthonormal basis
//! of holomorphic functions, the Kähler potential with its metric and
//! invariant measure, and Monte Carlo evaluation of the scalar product.

mod geometry;
mod hermite;
mod quadrature;
mod reproducing;

use serde::{Deserialize, Serialize};

pub use geometry::{
    gram_eigenvalue_range, gram_matrix, kahler_potential, kahler_potential_and_metric, metric,
    normalization_constant, volume_and_measure_density, MeasureDensity, MetricComponents,
};
pub use hermite::{hermite_poly, mehler_closed, mehler_sum, pn_poly, pn_via_hermite};
pub use quadrature::{inner_product_quadrature, QuadratureReport, BATCH_SIZE};
pub use reproducing::{
    basis_function, basis_function_hermite, boson_factor_values, factor_coefficient,
    kernel_checked, kernel_closed, kernel_holomorphic, kernel_log, kernel_truncated,
    su11_factor_values,
};

/// Index `(n, m)` of the basis function `f_{n,m}`: `n` counts bosons, `m` is
/// the SU(1,1) ladder index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    pub n: usize,
    pub m: usize,
}

impl BasisIndex {
    pub fn new(n: usize, m: usize) -> Self {
        BasisIndex { n, m }
    }
}
