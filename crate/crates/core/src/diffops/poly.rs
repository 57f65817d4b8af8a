//! Sparse bivariate polynomials in `(z, w)` over an exact or floating
//! coefficient ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result, Weight};

/// Gaussian rationals `p + i q` with `p, q` rational.
pub type GaussianRational = Complex<BigRational>;

/// Coefficient ring for [`BivariatePoly`].
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_ratio(num: i64, den: i64) -> Self;
    /// The weight `k` as a coefficient. Exact rings need an exact weight.
    fn from_weight(k: &Weight) -> Result<Self>;
    /// Numeric value, NaN when the coefficient is not a number.
    fn to_complex(&self) -> Complex64;
    /// Size used in residual reports.
    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }
    /// Text for coefficients with no numeric value.
    fn symbolic_label(&self) -> Option<String> {
        None
    }
}

impl Coefficient for GaussianRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    fn from_weight(k: &Weight) -> Result<Self> {
        match k.exact() {
            Some(q) => Ok(Complex::new(q.clone(), BigRational::zero())),
            None => BigRational::from_float(k.k())
                .map(|q| Complex::new(q, BigRational::zero()))
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("weight {} has no rational value", k.k()))
                }),
        }
    }

    fn to_complex(&self) -> Complex64 {
        let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        Complex64::new(f(&self.re), f(&self.im))
    }
}

impl Coefficient for Complex64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn from_weight(k: &Weight) -> Result<Self> {
        Ok(Complex64::new(k.k(), 0.0))
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }
}

/// Polynomial in a formal weight `k` with Gaussian rational coefficients;
/// entry `j` multiplies `k^j`. Trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightPoly(Vec<GaussianRational>);

impl WeightPoly {
    /// The formal symbol `k`.
    pub fn k() -> Self {
        WeightPoly(vec![GaussianRational::zero(), GaussianRational::one()])
    }

    pub fn coefficients(&self) -> &[GaussianRational] {
        &self.0
    }

    fn trimmed(mut v: Vec<GaussianRational>) -> Self {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        WeightPoly(v)
    }

    /// Value at a numeric weight.
    pub fn eval(&self, k: &GaussianRational) -> GaussianRational {
        self.0
            .iter()
            .rev()
            .fold(GaussianRational::zero(), |acc, c| {
                acc * k.clone() + c.clone()
            })
    }
}

impl Zero for WeightPoly {
    fn zero() -> Self {
        WeightPoly(Vec::new())
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl One for WeightPoly {
    fn one() -> Self {
        WeightPoly(vec![GaussianRational::one()])
    }
}

impl Add for WeightPoly {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let get = |v: &Vec<GaussianRational>, i: usize| {
            v.get(i).cloned().unwrap_or_else(GaussianRational::zero)
        };
        Self::trimmed((0..n).map(|i| get(&self.0, i) + get(&o.0, i)).collect())
    }
}

impl Neg for WeightPoly {
    type Output = Self;

    fn neg(self) -> Self {
        WeightPoly(self.0.into_iter().map(|c| -c).collect())
    }
}

impl Sub for WeightPoly {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for WeightPoly {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![GaussianRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::trimmed(v)
    }
}

impl Coefficient for WeightPoly {
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::trimmed(vec![GaussianRational::from_ratio(num, den)])
    }

    /// Always the formal symbol; the numeric weight is ignored.
    fn from_weight(_k: &Weight) -> Result<Self> {
        Ok(Self::k())
    }

    fn to_complex(&self) -> Complex64 {
        match self.0.len() {
            0 => Complex64::new(0.0, 0.0),
            1 => self.0[0].to_complex(),
            _ => Complex64::new(f64::NAN, f64::NAN),
        }
    }

    fn magnitude(&self) -> f64 {
        self.0
            .iter()
            .map(|c| c.to_complex().norm())
            .fold(0.0, f64::max)
    }

    fn symbolic_label(&self) -> Option<String> {
        if self.0.len() < 2 {
            return None;
        }
        let parts = self
            .0
            .iter()
            .enumerate()
            .map(|(j, c)| (c.to_complex(), power("k", j as u32)))
            .filter(|(c, _)| *c != Complex64::new(0.0, 0.0))
            .collect();
        Some(join_terms(parts))
    }
}

/// Map from exponents `(p, q)` of `z^p w^q` to nonzero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariatePoly<C: Coefficient> {
    terms: BTreeMap<(u32, u32), C>,
}

impl<C: Coefficient> Default for BivariatePoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> BivariatePoly<C> {
    pub fn zero() -> Self {
        BivariatePoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn monomial(c: C, p: u32, q: u32) -> Self {
        let mut s = Self::zero();
        s.add_term(p, q, c);
        s
    }

    pub fn z() -> Self {
        Self::monomial(C::one(), 1, 0)
    }

    pub fn w() -> Self {
        Self::monomial(C::one(), 0, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), C)>>(it: I) -> Self {
        let mut s = Self::zero();
        for ((p, q), c) in it {
            s.add_term(p, q, c);
        }
        s
    }

    pub fn add_term(&mut self, p: u32, q: u32, c: C) {
        if c.is_zero() {
            return;
        }
        let key = (p, q);
        let sum = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn coeff(&self, p: u32, q: u32) -> C {
        self.terms.get(&(p, q)).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &C)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(p, q)| p + q).max()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        for (&(p, q), c) in &o.terms {
            s.add_term(p, q, c.clone());
        }
        s
    }

    pub fn neg(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&e, c)| (e, -c.clone())))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(&e, c)| (e, c.clone() * s.clone())))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut s = Self::zero();
        for (&(p1, q1), c1) in &self.terms {
            for (&(p2, q2), c2) in &o.terms {
                s.add_term(p1 + p2, q1 + q2, c1.clone() * c2.clone());
            }
        }
        s
    }

    fn scaled_exponent(c: &C, e: u32) -> C {
        (0..e).fold(C::zero(), |acc, _| acc + c.clone())
    }

    pub fn partial_z(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((p, _), _)| *p > 0)
                .map(|(&(p, q), c)| ((p - 1, q), Self::scaled_exponent(c, p))),
        )
    }

    pub fn partial_w(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((_, q), _)| *q > 0)
                .map(|(&(p, q), c)| ((p, q - 1), Self::scaled_exponent(c, q))),
        )
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&(p, q), c)| c.to_complex() * z.powu(p) * w.powu(q))
            .sum()
    }

    /// Same polynomial over `Complex64`.
    pub fn to_float(&self) -> BivariatePoly<Complex64> {
        BivariatePoly::from_terms(self.terms.iter().map(|(&e, c)| (e, c.to_complex())))
    }

    /// Largest `|coefficient|`.
    pub fn max_abs(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.magnitude())
            .fold(0.0, f64::max)
    }
}

/// Writes a coefficient `c` multiplying a monomial body. Rationals print as
/// `3/2`, one-half as `½`.
fn fmt_coeff(c: Complex64, body: &str) -> (bool, String) {
    let tidy = |x: f64| -> String {
        if (x - x.round()).abs() < 1e-12 {
            format!("{}", x.round() as i64)
        } else if (x - 0.5).abs() < 1e-12 {
            "½".to_string()
        } else {
            let r = BigRational::from_float(x).map(|q| q.abs());
            match r {
                Some(q) if q.denom() < &BigInt::from(1000) => {
                    format!("{}/{}", q.numer(), q.denom())
                }
                _ => format!("{x}"),
            }
        }
    };
    if c.im == 0.0 {
        let neg = c.re < 0.0;
        let a = c.re.abs();
        let s = if (a - 1.0).abs() < 1e-15 && !body.is_empty() {
            body.to_string()
        } else {
            format!("{}{}", tidy(a), body)
        };
        (neg, s)
    } else if c.re == 0.0 {
        let neg = c.im < 0.0;
        let a = c.im.abs();
        let s = if (a - 1.0).abs() < 1e-15 {
            format!("i{body}")
        } else {
            format!("{}i{}", tidy(a), body)
        };
        (neg, s)
    } else {
        (
            false,
            format!(
                "({}{}{}i){}",
                c.re,
                if c.im < 0.0 { "-" } else { "+" },
                c.im.abs(),
                body
            ),
        )
    }
}

fn power(var: &str, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        2 => format!("{var}²"),
        3 => format!("{var}³"),
        _ => format!("{var}^{e}"),
    }
}

/// Renders `terms` (coefficient, body) as a signed sum.
pub(crate) fn join_terms(parts: Vec<(Complex64, String)>) -> String {
    let mut out = String::new();
    for (c, body) in parts {
        let (neg, s) = fmt_coeff(c, &body);
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&s);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl<C: Coefficient> BivariatePoly<C> {
    /// Terms in display order: by total degree, then descending power of `z`.
    pub(crate) fn display_parts(&self) -> Vec<(Complex64, String)> {
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(p, q)| (p + q, std::cmp::Reverse(p)));
        keys.into_iter()
            .map(|(p, q)| {
                let c = &self.terms[&(p, q)];
                let body = format!("{}{}", power("z", p), power("w", q));
                match c.symbolic_label() {
                    Some(l) if l.contains(' ') => {
                        (Complex64::new(1.0, 0.0), format!("({l}){body}"))
                    }
                    Some(l) => (Complex64::new(1.0, 0.0), format!("{l}{body}")),
                    None => (c.to_complex(), body),
                }
            })
            .collect()
    }
}

impl<C: Coefficient> fmt::Display for BivariatePoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_terms(self.display_parts()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type Q = BivariatePoly<GaussianRational>;

    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    #[test]
    fn examples() {
        let z2w = Q::monomial(q(1, 1), 2, 1);
        assert_eq!(z2w.partial_z(), Q::monomial(q(2, 1), 1, 1));
        let s = Q::z().add(&Q::w());
        let d = Q::z().sub(&Q::w());
        let expect = Q::from_terms([((2, 0), q(1, 1)), ((0, 2), q(-1, 1))]);
        assert_eq!(s.mul(&d), expect);
        let p3 = Q::from_terms([((3, 0), q(1, 1)), ((1, 1), q(3, 1))]);
        assert_eq!(p3.partial_w(), Q::monomial(q(3, 1), 1, 0));
    }

    #[test]
    fn zero_terms_are_dropped() {
        let p = Q::z().sub(&Q::z());
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn weight_polys() {
        let k = WeightPoly::k();
        let two_k = k.clone() + k.clone();
        assert_eq!(two_k.symbolic_label().unwrap(), "2k");
        let sq = (k.clone() + WeightPoly::one()) * (k.clone() - WeightPoly::one());
        assert_eq!(sq.symbolic_label().unwrap(), "-1 + k²");
        assert!((k.clone() - k).is_zero());
        let at = sq.eval(&GaussianRational::from_ratio(3, 2));
        assert_eq!(at, GaussianRational::from_ratio(5, 4));
        let p =
            BivariatePoly::from_terms([((0, 1), two_k), ((2, 0), WeightPoly::from_ratio(1, 2))]);
        assert_eq!(p.to_string(), "2kw + ½z²");
    }

    #[test]
    fn display() {
        let p = Q::from_terms([((2, 0), q(1, 2)), ((0, 1), q(3, 1)), ((1, 1), q(-1, 1))]);
        assert_eq!(p.to_string(), "3w + ½z² - zw");
    }

    fn arb_poly() -> impl Strategy<Value = Q> {
        proptest::collection::vec(((0u32..4, 0u32..4), -5i64..6, 1i64..4), 0..6)
            .prop_map(|v| Q::from_terms(v.into_iter().map(|(e, n, d)| (e, q(n, d)))))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        }

        #[test]
        fn leibniz(a in arb_poly(), b in arb_poly()) {
            let lhs = a.mul(&b).partial_z();
            let rhs = a.partial_z().mul(&b).add(&a.mul(&b.partial_z()));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
