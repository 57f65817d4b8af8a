//! Truncated Fock space realization of the Jacobi algebra on
//! `|n> ⊗ e_{k',k'+m}`, `n <= N`, `m <= M`, used as an independent check of
//! the closed formulas.
//!
//! `K+ = (a+)^2/2 + K'+`, `K- = a^2/2 + K'-`, `K0 = (a+ a + 1/2)/2 + K'0`
//! with `K'+ e_m = sqrt((m+1)(m+2k')) e_{m+1}` and `K'0 e_m = (k'+m) e_m`.
//! Operators of the form `exp(X_b ⊗ 1 + 1 ⊗ X')` are exponentiated factor
//! by factor.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::JacobiCSPoint;
use crate::numerics::{factorial, pochhammer};
use crate::{Error, Result, Weight};

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

/// Row-major sparse matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    rows: Vec<Vec<(usize, C)>>,
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        SparseMatrix {
            dim,
            rows: vec![Vec::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut s = Self::zeros(dim);
        for i in 0..dim {
            s.rows[i].push((i, ONE));
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `v` to entry `(i, j)`.
    pub fn add_entry(&mut self, i: usize, j: usize, v: C) {
        if v == ZERO {
            return;
        }
        let row = &mut self.rows[i];
        match row.iter_mut().find(|(c, _)| *c == j) {
            Some(e) => e.1 += v,
            None => row.push((j, v)),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C {
        self.rows[i]
            .iter()
            .find(|(c, _)| *c == j)
            .map(|e| e.1)
            .unwrap_or(ZERO)
    }

    pub fn matvec(&self, v: &[C]) -> Vec<C> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, a)| a * v[j]).sum())
            .collect()
    }

    pub fn mul(&self, o: &SparseMatrix) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(k, a) in row {
                for &(j, b) in &o.rows[k] {
                    out.add_entry(i, j, a * b);
                }
            }
        }
        out
    }

    pub fn scaled(&self, s: C) -> SparseMatrix {
        SparseMatrix {
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&(j, v)| (j, v * s)).collect())
                .collect(),
        }
    }

    pub fn add(&self, o: &SparseMatrix) -> SparseMatrix {
        let mut out = self.clone();
        for (i, row) in o.rows.iter().enumerate() {
            for &(j, v) in row {
                out.add_entry(i, j, v);
            }
        }
        out
    }

    pub fn sub(&self, o: &SparseMatrix) -> SparseMatrix {
        self.add(&o.scaled(-ONE))
    }

    pub fn commutator(&self, o: &SparseMatrix) -> SparseMatrix {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn adjoint(&self) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out.add_entry(j, i, v.conj());
            }
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<C> {
        let mut m = DMatrix::from_element(self.dim, self.dim, ZERO);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] += v;
            }
        }
        m
    }

    /// Largest `|entry|` with both row and column accepted by `keep`.
    pub fn max_abs_where<F: Fn(usize) -> bool>(&self, keep: F) -> f64 {
        let mut best = 0.0f64;
        for (i, row) in self.rows.iter().enumerate() {
            if !keep(i) {
                continue;
            }
            for &(j, v) in row {
                if keep(j) {
                    best = best.max(v.norm());
                }
            }
        }
        best
    }
}

/// Generator labels shared with the differential operator realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    A,
    ADag,
    KMinus,
    K0,
    KPlus,
}

impl Generator {
    pub const ALL: [Generator; 5] = [
        Generator::A,
        Generator::ADag,
        Generator::KMinus,
        Generator::K0,
        Generator::KPlus,
    ];

    /// Label of the Hilbert space adjoint.
    pub fn adjoint(self) -> Generator {
        match self {
            Generator::A => Generator::ADag,
            Generator::ADag => Generator::A,
            Generator::KMinus => Generator::KPlus,
            Generator::KPlus => Generator::KMinus,
            Generator::K0 => Generator::K0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Generator::A => "a",
            Generator::ADag => "a+",
            Generator::KMinus => "K-",
            Generator::K0 => "K0",
            Generator::KPlus => "K+",
        }
    }
}

/// Truncated representation on the `(N+1)(M+1)` dimensional product space.
#[derive(Debug, Clone)]
pub struct FockRep {
    n_cut: usize,
    m_cut: usize,
    k: Weight,
    pub a: SparseMatrix,
    pub a_dag: SparseMatrix,
    pub k0: SparseMatrix,
    pub k_plus: SparseMatrix,
    pub k_minus: SparseMatrix,
    /// `K+ - (a+)^2/2` built directly from the ladder coefficients.
    pub kp_plus: SparseMatrix,
}

impl FockRep {
    pub fn n_cut(&self) -> usize {
        self.n_cut
    }

    pub fn m_cut(&self) -> usize {
        self.m_cut
    }

    pub fn weight(&self) -> &Weight {
        &self.k
    }

    pub fn dim(&self) -> usize {
        (self.n_cut + 1) * (self.m_cut + 1)
    }

    pub fn index(&self, n: usize, m: usize) -> usize {
        n * (self.m_cut + 1) + m
    }

    pub fn split(&self, i: usize) -> (usize, usize) {
        (i / (self.m_cut + 1), i % (self.m_cut + 1))
    }

    pub fn generator(&self, g: Generator) -> &SparseMatrix {
        match g {
            Generator::A => &self.a,
            Generator::ADag => &self.a_dag,
            Generator::KMinus => &self.k_minus,
            Generator::K0 => &self.k0,
            Generator::KPlus => &self.k_plus,
        }
    }

    /// Levels `n <= N-2`, `m <= M-2`, where products of two generators are
    /// not affected by the truncation.
    pub fn is_interior(&self, i: usize) -> bool {
        let (n, m) = self.split(i);
        n + 2 <= self.n_cut && m + 2 <= self.m_cut
    }

    /// Boson factor matrices `(a, a+)` of size `N+1`.
    pub fn boson_ladder(&self) -> (DMatrix<C>, DMatrix<C>) {
        let d = self.n_cut + 1;
        let mut a = DMatrix::from_element(d, d, ZERO);
        for n in 1..d {
            a[(n - 1, n)] = C::new((n as f64).sqrt(), 0.0);
        }
        let ad = a.adjoint();
        (a, ad)
    }

    /// SU(1,1) factor matrices `(K'+, K'-, K'0)` of size `M+1`.
    pub fn su11_ladder(&self) -> (DMatrix<C>, DMatrix<C>, DMatrix<C>) {
        let d = self.m_cut + 1;
        let two_kp = 2.0 * self.k.k_prime();
        let mut kp = DMatrix::from_element(d, d, ZERO);
        let mut k0 = DMatrix::from_element(d, d, ZERO);
        for m in 0..d {
            k0[(m, m)] = C::new(self.k.k_prime() + m as f64, 0.0);
            if m + 1 < d {
                kp[(m + 1, m)] = C::new((((m + 1) as f64) * (m as f64 + two_kp)).sqrt(), 0.0);
            }
        }
        let km = kp.adjoint();
        (kp, km, k0)
    }
}

pub fn build_rep(n_cut: usize, m_cut: usize, k: &Weight) -> Result<FockRep> {
    if n_cut < 2 || m_cut < 2 {
        return Err(Error::InvalidCutoff(format!(
            "cutoffs must be at least 2, got ({n_cut}, {m_cut})"
        )));
    }
    let kp = k.k_prime();
    if kp <= 0.0 {
        return Err(Error::InvalidWeight {
            k: k.k(),
            reason: "the factor weight k - 1/4 must be positive".into(),
        });
    }
    let two_kp = 2.0 * kp;
    let dim = (n_cut + 1) * (m_cut + 1);
    let idx = |n: usize, m: usize| n * (m_cut + 1) + m;
    let mut a_dag = SparseMatrix::zeros(dim);
    let mut k_plus = SparseMatrix::zeros(dim);
    let mut kp_plus = SparseMatrix::zeros(dim);
    let mut k0 = SparseMatrix::zeros(dim);
    for n in 0..=n_cut {
        for m in 0..=m_cut {
            let i = idx(n, m);
            k0.add_entry(i, i, C::new(0.5 * (n as f64 + 0.5) + kp + m as f64, 0.0));
            if n < n_cut {
                a_dag.add_entry(idx(n + 1, m), i, C::new(((n + 1) as f64).sqrt(), 0.0));
            }
            if n + 2 <= n_cut {
                let v = 0.5 * (((n + 1) * (n + 2)) as f64).sqrt();
                k_plus.add_entry(idx(n + 2, m), i, C::new(v, 0.0));
            }
            if m < m_cut {
                let v = (((m + 1) as f64) * (m as f64 + two_kp)).sqrt();
                k_plus.add_entry(idx(n, m + 1), i, C::new(v, 0.0));
                kp_plus.add_entry(idx(n, m + 1), i, C::new(v, 0.0));
            }
        }
    }
    Ok(FockRep {
        n_cut,
        m_cut,
        k: k.clone(),
        a: a_dag.adjoint(),
        k_minus: k_plus.adjoint(),
        a_dag,
        k0,
        k_plus,
        kp_plus,
    })
}

/// Interior residual of one commutation relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualRecord {
    pub relation: String,
    pub max_residual: f64,
    /// Largest `(n, m)` of the block on which the residual is measured.
    pub block: [usize; 2],
}

/// Checks the full commutation table of the Jacobi algebra on the interior
/// block.
pub fn commutator_table_check(rep: &FockRep) -> Vec<ResidualRecord> {
    use Generator::*;
    let half = C::new(0.5, 0.0);
    let id = SparseMatrix::identity(rep.dim());
    let g = |x: Generator| rep.generator(x);
    let zero = SparseMatrix::zeros(rep.dim());
    let table: Vec<(&str, SparseMatrix, SparseMatrix)> = vec![
        ("[a, a+] = 1", g(A).commutator(g(ADag)), id),
        (
            "[K0, K+] = K+",
            g(K0).commutator(g(KPlus)),
            g(KPlus).clone(),
        ),
        (
            "[K0, K-] = -K-",
            g(K0).commutator(g(KMinus)),
            g(KMinus).scaled(-ONE),
        ),
        (
            "[K-, K+] = 2 K0",
            g(KMinus).commutator(g(KPlus)),
            g(K0).scaled(C::new(2.0, 0.0)),
        ),
        ("[a, K+] = a+", g(A).commutator(g(KPlus)), g(ADag).clone()),
        ("[K-, a+] = a", g(KMinus).commutator(g(ADag)), g(A).clone()),
        ("[K+, a+] = 0", g(KPlus).commutator(g(ADag)), zero.clone()),
        ("[K-, a] = 0", g(KMinus).commutator(g(A)), zero),
        (
            "[K0, a+] = a+/2",
            g(K0).commutator(g(ADag)),
            g(ADag).scaled(half),
        ),
        ("[K0, a] = -a/2", g(K0).commutator(g(A)), g(A).scaled(-half)),
    ];
    let block = [rep.n_cut - 2, rep.m_cut - 2];
    table
        .into_iter()
        .map(|(name, lhs, rhs)| ResidualRecord {
            relation: name.to_string(),
            max_residual: lhs.sub(&rhs).max_abs_where(|i| rep.is_interior(i)),
            block,
        })
        .collect()
}

/// Interior residual of `K+ = (a+)^2/2 + K'+` with `(a+)^2` formed as a matrix product.
pub fn k_plus_split_residual(rep: &FockRep) -> f64 {
    let rhs = rep
        .a_dag
        .mul(&rep.a_dag)
        .scaled(C::new(0.5, 0.0))
        .add(&rep.kp_plus);
    rep.k_plus.sub(&rhs).max_abs_where(|i| rep.is_interior(i))
}

/// Coefficients over the `(n, m)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_cut: usize,
    m_cut: usize,
    coeffs: Vec<C>,
}

impl StateVector {
    pub fn from_coeffs(n_cut: usize, m_cut: usize, coeffs: Vec<C>) -> Result<Self> {
        if coeffs.len() != (n_cut + 1) * (m_cut + 1) {
            return Err(Error::InvalidArgument(
                "coefficient array has the wrong size".into(),
            ));
        }
        Ok(StateVector {
            n_cut,
            m_cut,
            coeffs,
        })
    }

    pub fn get(&self, n: usize, m: usize) -> C {
        self.coeffs[n * (self.m_cut + 1) + m]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `(self, other) = sum conj(self) other`.
    pub fn overlap(&self, other: &StateVector) -> C {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Relative weight carried by the two highest levels of either factor.
    pub fn tail_weight(&self) -> f64 {
        let mut tail = 0.0;
        let mut total = 0.0;
        for n in 0..=self.n_cut {
            for m in 0..=self.m_cut {
                let v = self.get(n, m).norm_sqr();
                total += v;
                if n + 2 > self.n_cut || m + 2 > self.m_cut {
                    tail += v;
                }
            }
        }
        if total == 0.0 {
            0.0
        } else {
            (tail / total).sqrt()
        }
    }

    /// Largest coefficient difference on `n <= n_max`, `m <= m_max`.
    pub fn max_abs_diff_on(&self, other: &StateVector, n_max: usize, m_max: usize) -> f64 {
        let mut best = 0.0f64;
        for n in 0..=n_max.min(self.n_cut) {
            for m in 0..=m_max.min(self.m_cut) {
                best = best.max((self.get(n, m) - other.get(n, m)).norm());
            }
        }
        best
    }

    pub fn scaled(&self, s: C) -> StateVector {
        StateVector {
            n_cut: self.n_cut,
            m_cut: self.m_cut,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }
}

/// `e_{z,w} = exp(z a+ + w K+) e0`. The exponent raises `n + 2m`, so the
/// series is a finite sum on the truncated space.
pub fn cs_vector(x: &JacobiCSPoint, rep: &FockRep) -> StateVector {
    if x.w.norm() > 0.8 {
        log::warn!(
            "cs_vector: |w| = {} is outside the convergence regime |w| <= 0.8",
            x.w.norm()
        );
    }
    let gen = rep.a_dag.scaled(x.z).add(&rep.k_plus.scaled(x.w()));
    let mut v = vec![ZERO; rep.dim()];
    v[0] = ONE;
    let mut term = v.clone();
    let max_terms = rep.n_cut + 2 * rep.m_cut + 2;
    for j in 1..=max_terms {
        term = gen.matvec(&term);
        let inv = 1.0 / j as f64;
        let mut any = false;
        for (t, acc) in term.iter_mut().zip(v.iter_mut()) {
            *t *= inv;
            if *t != ZERO {
                any = true;
                *acc += *t;
            }
        }
        if !any {
            break;
        }
    }
    let s = StateVector {
        n_cut: rep.n_cut,
        m_cut: rep.m_cut,
        coeffs: v,
    };
    let tail = s.tail_weight();
    if tail > 1e-8 {
        log::warn!(
            "cs_vector: tail weight {tail:e} exceeds 1e-8 at cutoffs ({}, {})",
            rep.n_cut,
            rep.m_cut
        );
    }
    s
}

/// `lambda_{n;m} = (e0, a^n (a+)^m e0)` and `mu_{n;m} = (e0, K-^n K+^m e0)`.
pub fn appendix_moments(n: usize, m: usize, rep: &FockRep) -> Result<(f64, f64)> {
    let top = n.max(m);
    if 2 * top > rep.n_cut || top > rep.m_cut {
        return Err(Error::CutoffContamination { n, m });
    }
    let mut e0 = vec![ZERO; rep.dim()];
    e0[0] = ONE;
    let apply =
        |op: &SparseMatrix, times: usize, v: Vec<C>| (0..times).fold(v, |acc, _| op.matvec(&acc));
    let lam = apply(&rep.a, n, apply(&rep.a_dag, m, e0.clone()))[0];
    let mu = apply(&rep.k_minus, n, apply(&rep.k_plus, m, e0))[0];
    Ok((lam.re, mu.re))
}

/// Closed forms `lambda_{n;m} = n! delta`, `mu_{n;n} = n! Gamma(2k+n)/Gamma(2k)`.
pub fn appendix_closed_forms(n: usize, m: usize, k: &Weight) -> (f64, f64) {
    if n != m {
        return (0.0, 0.0);
    }
    (factorial(n), factorial(n) * pochhammer(2.0 * k.k(), n))
}

/// Operator `B ⊗ S` on the product space.
#[derive(Debug, Clone)]
pub struct FactorizedOperator {
    pub boson: DMatrix<C>,
    pub su11: DMatrix<C>,
}

impl FactorizedOperator {
    pub fn apply(&self, v: &StateVector) -> StateVector {
        let (nd, md) = (v.n_cut + 1, v.m_cut + 1);
        // coefficient grid as an nd x md matrix V; result is B V S^T
        let grid = DMatrix::from_fn(nd, md, |n, m| v.get(n, m));
        let out = &self.boson * grid * self.su11.transpose();
        let mut coeffs = Vec::with_capacity(nd * md);
        for n in 0..nd {
            for m in 0..md {
                coeffs.push(out[(n, m)]);
            }
        }
        StateVector {
            n_cut: v.n_cut,
            m_cut: v.m_cut,
            coeffs,
        }
    }

    pub fn then(&self, next: &FactorizedOperator) -> FactorizedOperator {
        FactorizedOperator {
            boson: &next.boson * &self.boson,
            su11: &next.su11 * &self.su11,
        }
    }
}

/// `D(alpha) = exp(alpha a+ - conj(alpha) a)`.
pub fn displacement_operator(rep: &FockRep, alpha: C) -> FactorizedOperator {
    let (a, ad) = rep.boson_ladder();
    let x = ad * alpha - a * alpha.conj();
    FactorizedOperator {
        boson: x.exp(),
        su11: DMatrix::identity(rep.m_cut + 1, rep.m_cut + 1),
    }
}

/// Boson part of `2i theta K0 + z K+ - conj(z) K-`.
fn squeeze_boson_generator(rep: &FockRep, z: C, theta: f64) -> DMatrix<C> {
    let (a, ad) = rep.boson_ladder();
    let d = rep.n_cut + 1;
    let num = &ad * &a;
    let id = DMatrix::<C>::identity(d, d);
    (num + id * C::new(0.5, 0.0)) * C::new(0.0, theta) + (&ad * &ad) * (z * 0.5)
        - (&a * &a) * (z.conj() * 0.5)
}

/// `S(z, theta) = exp(2i theta K0 + z K+ - conj(z) K-)`, the representative
/// of `exp([[i theta, z], [conj(z), -i theta]])`.
pub fn squeeze_operator(rep: &FockRep, z: C, theta: f64) -> FactorizedOperator {
    let (kp, km, k0) = rep.su11_ladder();
    let xs = k0 * C::new(0.0, 2.0 * theta) + kp * z - km * z.conj();
    FactorizedOperator {
        boson: squeeze_boson_generator(rep, z, theta).exp(),
        su11: xs.exp(),
    }
}

/// Coefficients of `S(z, theta)⁻¹ a S(z, theta) = c_a a + c_adag a+` read
/// off a truncated matrix exponential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovFit {
    #[serde(with = "crate::cjson::complex")]
    pub coeff_a: C,
    #[serde(with = "crate::cjson::complex")]
    pub coeff_a_dag: C,
    /// Largest deviation from `c_a a + c_adag a+` on the low block.
    pub residual: f64,
}

pub fn bogoliubov_conjugation(rep: &FockRep, z: C, theta: f64, block: usize) -> BogoliubovFit {
    let x = squeeze_boson_generator(rep, z, theta);
    let u = x.clone().exp();
    let u_inv = (-x).exp();
    let (a, ad) = rep.boson_ladder();
    let conj = &u_inv * &a * &u;
    let ca = conj[(0, 1)];
    let cd = conj[(1, 0)];
    let fit = &a * ca + &ad * cd;
    let mut residual = 0.0f64;
    let b = block.min(rep.n_cut);
    for i in 0..=b {
        for j in 0..=b {
            residual = residual.max((conj[(i, j)] - fit[(i, j)]).norm());
        }
    }
    BogoliubovFit {
        coeff_a: ca,
        coeff_a_dag: cd,
        residual,
    }
}

/// Applies `S(z, theta) D(alpha)` to `e_x` on the truncated space.
pub fn jacobi_action_on_cs(
    rep: &FockRep,
    z: C,
    theta: f64,
    alpha: C,
    x: &JacobiCSPoint,
) -> StateVector {
    let op = displacement_operator(rep, alpha).then(&squeeze_operator(rep, z, theta));
    let out = op.apply(&cs_vector(x, rep));
    let leak = out.tail_weight();
    if leak > 1e-10 {
        log::info!("jacobi_action_on_cs: leakage into the top levels {leak:e}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{basis_function, BasisIndex};

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn rep_entries() {
        let k = Weight::strict(1.5).unwrap();
        let rep = build_rep(6, 5, &k).unwrap();
        let kp = k.k_prime();
        // K'0 e_{k',k'} = k' e_{k',k'} on top of the boson vacuum energy 1/4
        assert!((rep.k0.get(0, 0).re - (kp + 0.25)).abs() < 1e-15);
        assert_eq!(rep.a_dag.get(rep.index(1, 0), rep.index(0, 0)), ONE);
        let v = rep.kp_plus.get(rep.index(0, 1), rep.index(0, 0));
        assert!((v.re - (2.0 * kp).sqrt()).abs() < 1e-15);
        assert!(build_rep(1, 5, &k).is_err());
    }

    #[test]
    fn commutators_vanish_on_interior() {
        let k = Weight::relaxed(1.3).unwrap();
        let rep = build_rep(12, 10, &k).unwrap();
        for r in commutator_table_check(&rep) {
            assert!(r.max_residual < 1e-12, "{}: {}", r.relation, r.max_residual);
        }
        assert!(k_plus_split_residual(&rep) < 1e-14);
    }

    #[test]
    fn cs_vector_examples() {
        let k = Weight::strict(2.0).unwrap();
        let rep = build_rep(20, 20, &k).unwrap();
        let v = cs_vector(&JacobiCSPoint::origin(), &rep);
        assert_eq!(v.get(0, 0), ONE);
        assert!((v.norm() - 1.0).abs() < 1e-16);
        let z = c(0.6, -0.3);
        let v = cs_vector(&JacobiCSPoint::new(z, c(0.0, 0.0)).unwrap(), &rep);
        for n in 0..10 {
            let expect = z.powu(n as u32) / factorial(n).sqrt();
            assert!((v.get(n, 0) - expect).norm() < 1e-14);
            assert_eq!(v.get(n, 1), ZERO);
        }
        let w = c(0.2, 0.5);
        let x = JacobiCSPoint::new(c(0.0, 0.0), w).unwrap();
        let v = cs_vector(&x, &rep);
        let two_kp = 2.0 * k.k_prime();
        for m in 0..10 {
            let expect = (pochhammer(two_kp, m) / factorial(m)).sqrt() * w.powu(m as u32);
            assert!((v.get(0, m) - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn cs_vector_matches_basis_functions() {
        let k = Weight::strict(1.5).unwrap();
        let rep = build_rep(16, 12, &k).unwrap();
        let x = JacobiCSPoint::new(c(0.5, 0.4), c(-0.3, 0.2)).unwrap();
        let v = cs_vector(&x, &rep);
        for n in 0..=16 {
            for m in 0..=12 {
                let f = basis_function(BasisIndex::new(n, m), &x, &k).unwrap();
                if n + 2 * m <= 16 {
                    assert!(
                        (v.get(n, m) - f).norm() < 1e-13 * f.norm().max(1.0),
                        "({n}, {m})"
                    );
                }
            }
        }
    }

    #[test]
    fn appendix_examples() {
        let k = Weight::strict(1.5).unwrap();
        let rep = build_rep(16, 8, &k).unwrap();
        assert_eq!(appendix_moments(0, 0, &rep).unwrap(), (1.0, 1.0));
        let (_, mu) = appendix_moments(1, 1, &rep).unwrap();
        assert!((mu - 2.0 * k.k()).abs() < 1e-13);
        let (lam, _) = appendix_moments(3, 3, &rep).unwrap();
        assert!((lam - 6.0).abs() < 1e-12);
        assert!(matches!(
            appendix_moments(9, 2, &rep),
            Err(Error::CutoffContamination { .. })
        ));
    }

    #[test]
    fn displacement_on_vacuum() {
        let k = Weight::strict(1.0).unwrap();
        let rep = build_rep(60, 2, &k).unwrap();
        let al = c(0.7, -0.4);
        let v = displacement_operator(&rep, al).apply(&cs_vector(&JacobiCSPoint::origin(), &rep));
        // D(alpha) e0 = exp(-|alpha|^2/2) e_{alpha, 0}
        let e = cs_vector(&JacobiCSPoint::new(al, c(0.0, 0.0)).unwrap(), &rep)
            .scaled(C::new((-al.norm_sqr() / 2.0).exp(), 0.0));
        assert!(v.max_abs_diff_on(&e, 30, 2) < 1e-12);
    }
}
