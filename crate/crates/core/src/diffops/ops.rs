//! First-order holomorphic differential operators `P + Qz ∂/∂z + Qw ∂/∂w`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::{join_terms, BivariatePoly, Coefficient, GaussianRational, WeightPoly};
use crate::fock::Generator;
use crate::{Result, Weight};

#[derive(Debug, Clone, PartialEq)]
pub struct DiffOp<C: Coefficient> {
    pub p: BivariatePoly<C>,
    pub qz: BivariatePoly<C>,
    pub qw: BivariatePoly<C>,
}

impl<C: Coefficient> DiffOp<C> {
    pub fn new(p: BivariatePoly<C>, qz: BivariatePoly<C>, qw: BivariatePoly<C>) -> Self {
        DiffOp { p, qz, qw }
    }

    pub fn zero() -> Self {
        Self::new(
            BivariatePoly::zero(),
            BivariatePoly::zero(),
            BivariatePoly::zero(),
        )
    }

    pub fn identity() -> Self {
        Self::multiplication(BivariatePoly::one())
    }

    pub fn multiplication(p: BivariatePoly<C>) -> Self {
        Self::new(p, BivariatePoly::zero(), BivariatePoly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.qz.is_zero() && self.qw.is_zero()
    }

    pub fn apply(&self, f: &BivariatePoly<C>) -> BivariatePoly<C> {
        self.p
            .mul(f)
            .add(&self.qz.mul(&f.partial_z()))
            .add(&self.qw.mul(&f.partial_w()))
    }

    /// Vector field part acting on a polynomial, without the multiplication term.
    fn derive(&self, f: &BivariatePoly<C>) -> BivariatePoly<C> {
        self.qz
            .mul(&f.partial_z())
            .add(&self.qw.mul(&f.partial_w()))
    }

    /// `[self, o]`, again first order.
    pub fn commutator(&self, o: &Self) -> Self {
        DiffOp {
            p: self.derive(&o.p).sub(&o.derive(&self.p)),
            qz: self.derive(&o.qz).sub(&o.derive(&self.qz)),
            qw: self.derive(&o.qw).sub(&o.derive(&self.qw)),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        DiffOp {
            p: self.p.add(&o.p),
            qz: self.qz.add(&o.qz),
            qw: self.qw.add(&o.qw),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-C::one()))
    }

    pub fn scale(&self, s: &C) -> Self {
        DiffOp {
            p: self.p.scale(s),
            qz: self.qz.scale(s),
            qw: self.qw.scale(s),
        }
    }

    /// Largest total degree among the three coefficient polynomials.
    pub fn degree(&self) -> Option<u32> {
        [self.p.degree(), self.qz.degree(), self.qw.degree()]
            .into_iter()
            .flatten()
            .max()
    }

    pub fn to_float(&self) -> DiffOp<Complex64> {
        DiffOp::new(self.p.to_float(), self.qz.to_float(), self.qw.to_float())
    }

    /// Value of the operator applied to a function with value `f` and
    /// first derivatives `(fz, fw)` at `(z, w)`.
    pub fn eval_pointwise(
        &self,
        z: Complex64,
        w: Complex64,
        f: Complex64,
        fz: Complex64,
        fw: Complex64,
    ) -> Complex64 {
        self.p.eval(z, w) * f + self.qz.eval(z, w) * fz + self.qw.eval(z, w) * fw
    }
}

impl<C: Coefficient> fmt::Display for DiffOp<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = self.p.display_parts();
        for (q, d) in [(&self.qz, "∂/∂z"), (&self.qw, "∂/∂w")] {
            parts.extend(
                q.display_parts()
                    .into_iter()
                    .map(|(c, body)| (c, format!("{body}{d}"))),
            );
        }
        f.write_str(&join_terms(parts))
    }
}

/// The five generators, in the order of [`Generator::ALL`].
#[derive(Debug, Clone, PartialEq)]
pub struct Generators<C: Coefficient> {
    pub a: DiffOp<C>,
    pub a_dag: DiffOp<C>,
    pub k_minus: DiffOp<C>,
    pub k0: DiffOp<C>,
    pub k_plus: DiffOp<C>,
}

impl<C: Coefficient> Generators<C> {
    pub fn get(&self, g: Generator) -> &DiffOp<C> {
        match g {
            Generator::A => &self.a,
            Generator::ADag => &self.a_dag,
            Generator::KMinus => &self.k_minus,
            Generator::K0 => &self.k0,
            Generator::KPlus => &self.k_plus,
        }
    }

    pub fn to_float(&self) -> Generators<Complex64> {
        Generators {
            a: self.a.to_float(),
            a_dag: self.a_dag.to_float(),
            k_minus: self.k_minus.to_float(),
            k0: self.k0.to_float(),
            k_plus: self.k_plus.to_float(),
        }
    }
}

/// `a = ∂z`, `a+ = z + w∂z`, `K- = ∂w`, `K0 = k + ½z∂z + w∂w`,
/// `K+ = ½z² + 2kw + zw∂z + w²∂w`.
pub fn make_generators<C: Coefficient>(k: &Weight) -> Result<Generators<C>> {
    Ok(generators_with_weight(C::from_weight(k)?))
}

/// Generators over [`WeightPoly`] with `k` kept as a formal symbol.
pub fn symbolic_generators() -> Generators<WeightPoly> {
    generators_with_weight(WeightPoly::k())
}

fn generators_with_weight<C: Coefficient>(kc: C) -> Generators<C> {
    type P<C> = BivariatePoly<C>;
    let one = C::one();
    let half = C::from_ratio(1, 2);
    let zero = P::<C>::zero;
    Generators {
        a: DiffOp::new(zero(), P::one(), zero()),
        a_dag: DiffOp::new(P::z(), P::w(), zero()),
        k_minus: DiffOp::new(zero(), zero(), P::one()),
        k0: DiffOp::new(
            P::constant(kc.clone()),
            P::monomial(half.clone(), 1, 0),
            P::w(),
        ),
        k_plus: DiffOp::new(
            P::from_terms([((2, 0), half), ((0, 1), kc.clone() + kc)]),
            P::monomial(one.clone(), 1, 1),
            P::monomial(one, 0, 2),
        ),
    }
}

/// One row of the commutation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorRecord {
    pub relation: String,
    /// Rendered left-hand side `[X, Y]`.
    pub computed: String,
    /// Largest coefficient of `[X, Y] - rhs`, zero when the identity is exact.
    pub residual: f64,
    pub holds: bool,
}

pub type Relation<C> = (&'static str, DiffOp<C>, DiffOp<C>, DiffOp<C>);

/// The relation list as `(name, X, Y, rhs)` with `rhs` a combination of
/// generators and the identity.
pub fn commutator_relations<C: Coefficient>(g: &Generators<C>) -> Vec<Relation<C>> {
    let half = C::from_ratio(1, 2);
    let two = C::from_ratio(2, 1);
    vec![
        (
            "[a, a+] = 1",
            g.a.clone(),
            g.a_dag.clone(),
            DiffOp::identity(),
        ),
        (
            "[K0, K+] = K+",
            g.k0.clone(),
            g.k_plus.clone(),
            g.k_plus.clone(),
        ),
        (
            "[K0, K-] = -K-",
            g.k0.clone(),
            g.k_minus.clone(),
            g.k_minus.scale(&-C::one()),
        ),
        (
            "[K-, K+] = 2 K0",
            g.k_minus.clone(),
            g.k_plus.clone(),
            g.k0.scale(&two),
        ),
        (
            "[a, K+] = a+",
            g.a.clone(),
            g.k_plus.clone(),
            g.a_dag.clone(),
        ),
        (
            "[K-, a+] = a",
            g.k_minus.clone(),
            g.a_dag.clone(),
            g.a.clone(),
        ),
        (
            "[K+, a+] = 0",
            g.k_plus.clone(),
            g.a_dag.clone(),
            DiffOp::zero(),
        ),
        (
            "[K-, a] = 0",
            g.k_minus.clone(),
            g.a.clone(),
            DiffOp::zero(),
        ),
        (
            "[K0, a+] = a+/2",
            g.k0.clone(),
            g.a_dag.clone(),
            g.a_dag.scale(&half),
        ),
        (
            "[K0, a] = -a/2",
            g.k0.clone(),
            g.a.clone(),
            g.a.scale(&-half),
        ),
    ]
}

pub fn commutation_table<C: Coefficient>(g: &Generators<C>) -> Vec<CommutatorRecord> {
    commutator_relations(g)
        .into_iter()
        .map(|(name, x, y, rhs)| {
            let lhs = x.commutator(&y);
            let diff = lhs.sub(&rhs);
            let residual = [diff.p.max_abs(), diff.qz.max_abs(), diff.qw.max_abs()]
                .into_iter()
                .fold(0.0, f64::max);
            CommutatorRecord {
                relation: name.to_string(),
                computed: lhs.to_string(),
                residual,
                holds: diff.is_zero(),
            }
        })
        .collect()
}

/// Exact table over Gaussian rationals.
pub fn exact_commutation_table(k: &Weight) -> Result<Vec<CommutatorRecord>> {
    Ok(commutation_table(&make_generators::<GaussianRational>(k)?))
}

/// Number of triples among the generators and the identity for which the
/// Jacobi identity fails.
pub fn jacobi_identity_failures<C: Coefficient>(g: &Generators<C>) -> usize {
    let mut ops: Vec<DiffOp<C>> = Generator::ALL.iter().map(|&x| g.get(x).clone()).collect();
    ops.push(DiffOp::identity());
    let mut failures = 0;
    for a in &ops {
        for b in &ops {
            for c in &ops {
                let s = a
                    .commutator(&b.commutator(c))
                    .add(&b.commutator(&c.commutator(a)))
                    .add(&c.commutator(&a.commutator(b)));
                if !s.is_zero() {
                    failures += 1;
                }
            }
        }
    }
    failures
}
