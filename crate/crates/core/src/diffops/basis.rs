//! Generator action on the orthonormal basis `f_{n,m}` and on the kernel.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::ops::{make_generators, DiffOp};
use super::poly::BivariatePoly;
use crate::algebra::JacobiCSPoint;
use crate::fock::Generator;
use crate::kernel::{factor_coefficient, kernel_holomorphic, BasisIndex};
use crate::numerics::{cauchy_derivative, factorial};
use crate::{Error, Result, Weight};

type P = BivariatePoly<Complex64>;

/// `w^m P_n(z, w)` with `P_n = Σ_j n!/(j! (n-2j)! 2^j) z^{n-2j} w^j`.
/// Monic in `z`, of `z`-degree `n`.
pub fn monic_basis_poly(n: usize, m: usize) -> P {
    P::from_terms((0..=n / 2).map(|j| {
        let c = factorial(n) / (factorial(j) * factorial(n - 2 * j) * 2f64.powi(j as i32));
        (((n - 2 * j) as u32, (m + j) as u32), Complex64::new(c, 0.0))
    }))
}

/// Normalization `c_m(2k') / sqrt(n!)` of `f_{n,m}` relative to the monic polynomial.
fn basis_norm(n: usize, m: usize, k: &Weight) -> f64 {
    factor_coefficient(m, 2.0 * k.k_prime()) / factorial(n).sqrt()
}

pub fn basis_poly(idx: BasisIndex, k: &Weight) -> P {
    monic_basis_poly(idx.n, idx.m).scale(&Complex64::new(basis_norm(idx.n, idx.m, k), 0.0))
}

/// Expands a polynomial in the basis by peeling off the highest power of `z`
/// one monomial at a time (the system is triangular).
pub fn expand_in_basis(
    f: &P,
    k: &Weight,
    grid: (usize, usize),
) -> Result<BTreeMap<BasisIndex, Complex64>> {
    // cancellation leaves roundoff of relative size ~1e-16 on lower monomials
    let floor = 1e-13 * f.max_abs();
    let mut rest = f.clone();
    let mut out = BTreeMap::new();
    while let Some((&(p, q), &c)) = rest
        .terms()
        .filter(|(_, c)| c.norm() > floor)
        .max_by_key(|((p, q), _)| (*p, *q))
    {
        let (n, m) = (p as usize, q as usize);
        if n > grid.0 || m > grid.1 {
            return Err(Error::ExpansionOverflow { n, m });
        }
        rest = rest.sub(&monic_basis_poly(n, m).scale(&c));
        // the leading term cancels exactly; drop roundoff left on it
        rest = P::from_terms(
            rest.terms()
                .filter(|(e, _)| **e != (p, q))
                .map(|(&e, &v)| (e, v)),
        );
        out.insert(BasisIndex::new(n, m), c / basis_norm(n, m, k));
    }
    Ok(out)
}

/// Coefficients of `A f_{idx}` over the basis, i.e. the column `idx` of the
/// matrix `<f_{n',m'}, A f_{n,m}>`. For the generators this is the Fock
/// matrix itself, no transpose or conjugation.
pub fn apply_to_basis(
    op: &DiffOp<Complex64>,
    idx: BasisIndex,
    k: &Weight,
    grid: (usize, usize),
) -> Result<BTreeMap<BasisIndex, Complex64>> {
    expand_in_basis(&op.apply(&basis_poly(idx, k)), k, grid)
}

/// Both sides of the kernel adjoint identity for one generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjointCheck {
    /// `X_z K(z, w; ζ, ω)`.
    pub lhs: Complex64,
    /// `(X+)_ζ K(z, w; ζ, ω)`, the adjoint acting on the antiholomorphic slot.
    pub rhs: Complex64,
    /// `|lhs - rhs| / |K|`.
    pub residual: f64,
}

/// Compares `X` acting on the kernel in `x` with `X+` acting in
/// `(ζ, ω) = (conj y.z, conj y.w)`. First derivatives of the kernel are
/// taken by Cauchy integrals.
pub fn adjoint_kernel_check(
    gen: Generator,
    x: &JacobiCSPoint,
    y: &JacobiCSPoint,
    k: &Weight,
) -> Result<AdjointCheck> {
    let g = make_generators::<Complex64>(k)?;
    let (z, w) = (x.z, x.w());
    let (zeta, omega) = (y.z.conj(), y.w().conj());
    let kf = |z: Complex64, w: Complex64, zeta: Complex64, omega: Complex64| {
        kernel_holomorphic(z, w, zeta, omega, k)
    };
    let r_w = 0.25 * x.w.defect().min(y.w.defect()).min(0.2);
    let r_z = 0.05;
    let d = |f: &dyn Fn(Complex64) -> Complex64, at: Complex64, r: f64| {
        cauchy_derivative(f, at, 1, r, 32)
    };
    let kv = kf(z, w, zeta, omega);
    let kz = d(&|s| kf(s, w, zeta, omega), z, r_z);
    let kw = d(&|s| kf(z, s, zeta, omega), w, r_w);
    let kzeta = d(&|s| kf(z, w, s, omega), zeta, r_z);
    let komega = d(&|s| kf(z, w, zeta, s), omega, r_w);
    let lhs = g.get(gen).eval_pointwise(z, w, kv, kz, kw);
    let rhs = g
        .get(gen.adjoint())
        .eval_pointwise(zeta, omega, kv, kzeta, komega);
    Ok(AdjointCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).norm() / kv.norm(),
    })
}
