//! SU(1,1) and Jacobi group elements, the holomorphic action on `C × D1`
//! and the multiplier of that action on coherent state vectors.
//!
//! Group law: `(g1, a1, t1) ∘ (g2, a2, t2) = (g1 g2, g2⁻¹·a1 + a2,
//! t1 + t2 + Im(g2⁻¹·a1 conj(a2)))` with `g⁻¹·a = conj(A) a - B conj(a)` for
//! `g = (A, B)`. With this law [`jacobi_act`] is a left action:
//! `act(h1, act(h2, x)) = act(compose(h1, h2), x)`, and `e^{it} λ(h, x)`
//! (see [`full_multiplier`]) is a cocycle for it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cjson::JsonComplex;
use crate::numerics::{artanh_ratio, cs_si, one_minus_norm_sqr, tanh_ratio, wrap_angle};
use crate::{Error, Result, Weight, BOUNDARY_EPS, SU11_EPS};

/// Point of the open unit disk.
///
/// Besides `w` the point stores `1 - |w|^2` separately. Points produced by
/// the rapidity map, the Cayley transform or a Möbius map get that defect
/// from a cancellation free formula, so it stays accurate when `|w|` rounds
/// to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "JsonComplex", try_from = "JsonComplex")]
pub struct DiskPoint {
    w: Complex64,
    defect: f64,
}

impl DiskPoint {
    /// Rejects `|w| >= 1 - BOUNDARY_EPS`.
    pub fn new(w: Complex64) -> Result<Self> {
        Self::with_margin(w, BOUNDARY_EPS)
    }

    pub fn with_margin(w: Complex64, eps: f64) -> Result<Self> {
        let r = w.norm();
        if !r.is_finite() || r >= 1.0 - eps {
            return Err(Error::OutsideDisk(r));
        }
        Ok(DiskPoint {
            w,
            defect: one_minus_norm_sqr(w),
        })
    }

    /// Builds a point whose defect `1 - |w|^2` is known independently.
    pub(crate) fn with_defect(w: Complex64, defect: f64) -> Result<Self> {
        if !(defect.is_finite() && defect > 0.0 && w.norm().is_finite()) {
            return Err(Error::OutsideDisk(w.norm()));
        }
        Ok(DiskPoint { w, defect })
    }

    /// Same as `with_defect`, but enforcing the boundary margin on the defect.
    pub(crate) fn with_defect_checked(w: Complex64, defect: f64) -> Result<Self> {
        let min_defect = BOUNDARY_EPS * (2.0 - BOUNDARY_EPS);
        if !(defect.is_finite() && defect > min_defect) {
            return Err(Error::OutsideDisk(w.norm()));
        }
        Self::with_defect(w, defect)
    }

    pub fn origin() -> Self {
        DiskPoint {
            w: Complex64::new(0.0, 0.0),
            defect: 1.0,
        }
    }

    /// `w = (z/|z|) tanh|z|`.
    pub fn from_rapidity(z: Complex64) -> Self {
        let r = z.norm();
        let w = z * tanh_ratio(r);
        // 1 - tanh^2 r = 1 / cosh^2 r
        let defect = 1.0 / r.cosh().powi(2);
        DiskPoint { w, defect }
    }

    /// Inverse of [`DiskPoint::from_rapidity`].
    pub fn rapidity(&self) -> Complex64 {
        let r = self.w.norm();
        if r < 0.5 {
            return self.w * artanh_ratio(r);
        }
        // artanh r = ln((1 + r)/sqrt(1 - r^2))
        let rap = ((1.0 + r) / self.defect.sqrt()).ln();
        self.w * (rap / r)
    }

    /// `eta = ln(1 - |w|^2)`.
    pub fn eta(&self) -> f64 {
        self.defect.ln()
    }

    pub fn value(&self) -> Complex64 {
        self.w
    }

    /// `1 - |w|^2`.
    pub fn defect(&self) -> f64 {
        self.defect
    }

    pub fn norm(&self) -> f64 {
        self.w.norm()
    }
}

impl From<DiskPoint> for JsonComplex {
    fn from(p: DiskPoint) -> Self {
        JsonComplex(p.w)
    }
}

impl TryFrom<JsonComplex> for DiskPoint {
    type Error = Error;

    fn try_from(c: JsonComplex) -> Result<Self> {
        DiskPoint::new(c.0)
    }
}

/// Point `(z, w)` of the coherent state manifold `C × D1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiCSPoint {
    #[serde(with = "crate::cjson::complex")]
    pub z: Complex64,
    pub w: DiskPoint,
}

impl JacobiCSPoint {
    pub fn new(z: Complex64, w: Complex64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidArgument("z must be finite".into()));
        }
        Ok(JacobiCSPoint {
            z,
            w: DiskPoint::new(w)?,
        })
    }

    pub fn from_parts(z: Complex64, w: DiskPoint) -> Self {
        JacobiCSPoint { z, w }
    }

    pub fn origin() -> Self {
        JacobiCSPoint {
            z: Complex64::new(0.0, 0.0),
            w: DiskPoint::origin(),
        }
    }

    pub fn w(&self) -> Complex64 {
        self.w.value()
    }
}

/// Element `g = [[a, b], [conj(b), conj(a)]]` of SU(1,1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SU11Matrix {
    #[serde(with = "crate::cjson::complex")]
    pub a: Complex64,
    #[serde(with = "crate::cjson::complex")]
    pub b: Complex64,
}

impl SU11Matrix {
    /// Checks `|a|^2 - |b|^2 = 1` to `SU11_EPS`, relative when `|a| > 1`.
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let g = SU11Matrix { a, b };
        let det = g.det();
        if !det.is_finite() || (det - 1.0).abs() > SU11_EPS * a.norm_sqr().max(1.0) {
            return Err(Error::NotSU11(det));
        }
        Ok(g)
    }

    /// Rescales `(a, b)` so the determinant is exactly one.
    pub fn renormalized(a: Complex64, b: Complex64) -> Result<Self> {
        let det = a.norm_sqr() - b.norm_sqr();
        if !(det.is_finite() && det > 0.0) {
            return Err(Error::NotSU11(det));
        }
        let s = det.sqrt();
        Ok(SU11Matrix { a: a / s, b: b / s })
    }

    pub fn identity() -> Self {
        SU11Matrix {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// Diagonal element `diag(e^{i phi}, e^{-i phi})`.
    pub fn rotation(phi: f64) -> Self {
        SU11Matrix {
            a: Complex64::from_polar(1.0, phi),
            b: Complex64::new(0.0, 0.0),
        }
    }

    pub fn det(&self) -> f64 {
        self.a.norm_sqr() - self.b.norm_sqr()
    }

    pub fn compose(&self, other: &SU11Matrix) -> SU11Matrix {
        SU11Matrix {
            a: self.a * other.a + self.b * other.b.conj(),
            b: self.a * other.b + self.b * other.a.conj(),
        }
    }

    pub fn inverse(&self) -> SU11Matrix {
        SU11Matrix {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    /// `g·alpha = a alpha + b conj(alpha)`.
    pub fn act_alpha(&self, alpha: Complex64) -> Complex64 {
        self.a * alpha + self.b * alpha.conj()
    }

    /// `g⁻¹·alpha = conj(a) alpha - b conj(alpha)`.
    pub fn inverse_act_alpha(&self, alpha: Complex64) -> Complex64 {
        self.a.conj() * alpha - self.b * alpha.conj()
    }

    pub fn to_array(&self) -> [[Complex64; 2]; 2] {
        [[self.a, self.b], [self.b.conj(), self.a.conj()]]
    }

    pub fn max_abs_diff(&self, other: &SU11Matrix) -> f64 {
        (self.a - other.a).norm().max((self.b - other.b).norm())
    }
}

/// Element `(g, alpha, t)` of the Jacobi group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiElement {
    pub g: SU11Matrix,
    #[serde(with = "crate::cjson::complex")]
    pub alpha: Complex64,
    pub t: f64,
}

impl JacobiElement {
    pub fn new(g: SU11Matrix, alpha: Complex64, t: f64) -> Self {
        JacobiElement { g, alpha, t }
    }

    pub fn identity() -> Self {
        JacobiElement {
            g: SU11Matrix::identity(),
            alpha: Complex64::new(0.0, 0.0),
            t: 0.0,
        }
    }

    /// Pure displacement `(1, alpha, 0)`.
    pub fn displacement(alpha: Complex64) -> Self {
        JacobiElement::new(SU11Matrix::identity(), alpha, 0.0)
    }

    pub fn max_abs_diff(&self, other: &JacobiElement) -> f64 {
        self.g
            .max_abs_diff(&other.g)
            .max((self.alpha - other.alpha).norm())
            .max((self.t - other.t).abs())
    }
}

pub fn compose(h1: &JacobiElement, h2: &JacobiElement) -> JacobiElement {
    let moved = h2.g.inverse_act_alpha(h1.alpha);
    JacobiElement {
        g: h1.g.compose(&h2.g),
        alpha: moved + h2.alpha,
        t: h1.t + h2.t + (moved * h2.alpha.conj()).im,
    }
}

pub fn inverse(h: &JacobiElement) -> JacobiElement {
    JacobiElement {
        g: h.g.inverse(),
        alpha: -h.g.act_alpha(h.alpha),
        t: -h.t,
    }
}

/// `g·w = (a w + b) / (conj(b) w + conj(a))`.
pub fn mobius_act(g: &SU11Matrix, w: &DiskPoint) -> Result<DiskPoint> {
    let wv = w.value();
    let den = g.b.conj() * wv + g.a.conj();
    let w1 = (g.a * wv + g.b) / den;
    // 1 - |g·w|^2 = (1 - |w|^2) / |conj(b) w + conj(a)|^2
    DiskPoint::with_defect_checked(w1, w.defect() / den.norm_sqr())
}

/// Action of the Jacobi group on `C × D1`:
/// `z1 = (alpha - conj(alpha) w + z) / (conj(b) w + conj(a))`, `w1 = g·w`.
pub fn jacobi_act(h: &JacobiElement, x: &JacobiCSPoint) -> Result<JacobiCSPoint> {
    let w = x.w();
    let den = h.g.b.conj() * w + h.g.a.conj();
    let z1 = (h.alpha - h.alpha.conj() * w + x.z) / den;
    Ok(JacobiCSPoint {
        z: z1,
        w: mobius_act(&h.g, &x.w)?,
    })
}

/// `(conj(a) + conj(b) w)^{-2k}` on the principal branch.
pub fn automorphy_factor(g: &SU11Matrix, w: Complex64, k: &Weight) -> Complex64 {
    let d = g.a.conj() + g.b.conj() * w;
    match k.two_k_integer() {
        Some(n) if n.abs() < i32::MAX as i64 => d.powi(-(n as i32)),
        _ => (-2.0 * k.k() * d.ln()).exp(),
    }
}

/// True when the principal branch of `(conj(a) + conj(b) w)^{-2k}` is not the
/// continuation along `w_s = s w`, `s ∈ [0, 1]`, from `w = 0`. Irrelevant
/// when `2k` is an integer.
pub fn branch_crossing(g: &SU11Matrix, w: Complex64) -> bool {
    let a_bar = g.a.conj();
    let ratio = 1.0 + g.b.conj() * w / a_bar;
    // |conj(b) w / conj(a)| < 1, so the ratio never crosses the cut itself.
    let total = a_bar.arg() + ratio.arg();
    total > std::f64::consts::PI || total <= -std::f64::consts::PI
}

/// Multiplier `lambda(h, x)` in `S(g) D(alpha) e_{z,w} = lambda e_{h·x}`,
/// built from `alpha_0 = (z + conj(z) w)/(1 - |w|^2)` and
/// `alpha_2 = a (alpha + alpha_0) + b conj(alpha + alpha_0)`.
///
/// The central parameter `t` is not included; see [`full_multiplier`].
pub fn cocycle(h: &JacobiElement, x: &JacobiCSPoint, k: &Weight) -> Complex64 {
    let w = x.w();
    let z = x.z;
    let alpha0 = (z + z.conj() * w) / x.w.defect();
    let alpha1 = h.alpha + alpha0;
    let alpha2 = h.g.act_alpha(alpha1);
    let den = h.g.b.conj() * w + h.g.a.conj();
    let z1 = (h.alpha - h.alpha.conj() * w + z) / den;
    if k.two_k_integer().is_none() && branch_crossing(&h.g, w) {
        log::warn!(
            "principal branch of the automorphy factor differs from the continuation from w = 0"
        );
    }
    let theta = (h.alpha * alpha0.conj()).im;
    automorphy_factor(&h.g, w, k)
        * (z / 2.0 * alpha0.conj() - z1 / 2.0 * alpha2.conj()).exp()
        * Complex64::from_polar(1.0, theta)
}

/// `lambda = (conj(a) + conj(b) w)^{-2k} exp(-l1)` with
/// `l1 = (conj(b) z^2 + (conj(a) conj(alpha) + conj(b) alpha)(2z + z0)) / (2(conj(a) + conj(b) w))`
/// and `z0 = alpha - conj(alpha) w`.
pub fn cocycle_closed_form(h: &JacobiElement, x: &JacobiCSPoint, k: &Weight) -> Complex64 {
    let (a, b, al) = (h.g.a, h.g.b, h.alpha);
    let (z, w) = (x.z, x.w());
    let z0 = al - al.conj() * w;
    let den = a.conj() + b.conj() * w;
    let l1 =
        (b.conj() * z * z + (a.conj() * al.conj() + b.conj() * al) * (2.0 * z + z0)) / (2.0 * den);
    automorphy_factor(&h.g, w, k) * (-l1).exp()
}

/// Same multiplier with the completed square
/// `l1 = conj(b)(z + z0)^2 / (2(conj(a) + conj(b) w)) + conj(alpha)(z + z0/2)`.
pub fn cocycle_completed_square(h: &JacobiElement, x: &JacobiCSPoint, k: &Weight) -> Complex64 {
    let (a, b, al) = (h.g.a, h.g.b, h.alpha);
    let (z, w) = (x.z, x.w());
    let z0 = al - al.conj() * w;
    let den = a.conj() + b.conj() * w;
    let l1 = b.conj() * (z + z0) * (z + z0) / (2.0 * den) + al.conj() * (z + z0 / 2.0);
    automorphy_factor(&h.g, w, k) * (-l1).exp()
}

/// `e^{it} lambda(h, x)`, the multiplier including the central phase. It
/// satisfies `m(h1 h2, x) = m(h1, h2·x) m(h2, x)`.
pub fn full_multiplier(h: &JacobiElement, x: &JacobiCSPoint, k: &Weight) -> Complex64 {
    Complex64::from_polar(1.0, h.t) * cocycle(h, x, k)
}

/// `exp(theta K0-like generator)`: `a = cs + i theta si/x`, `b = z si/x`
/// with `x^2 = |z|^2 - theta^2`. This is the exponential of
/// `[[i theta, z], [conj(z), -i theta]]`.
pub fn su11_exp(z: Complex64, theta: f64) -> SU11Matrix {
    let (cs, si) = cs_si(z.norm_sqr() - theta * theta);
    SU11Matrix {
        a: Complex64::new(cs, theta * si),
        b: z * si,
    }
}

/// `S(z2) S(z1) = S(z3) e^{i theta_s K0-part}`: returns `w3 = (w1 + w2)/(1 + conj(w2) w1)`
/// and the angle with `e^{i theta_s} = (1 + w2 conj(w1))/(1 + w1 conj(w2))`.
pub fn su11_product_with_phase(z1: Complex64, z2: Complex64) -> (DiskPoint, f64) {
    let p1 = DiskPoint::from_rapidity(z1);
    let p2 = DiskPoint::from_rapidity(z2);
    let (w1, w2) = (p1.value(), p2.value());
    let den = 1.0 + w2.conj() * w1;
    let w3 = (w1 + w2) / den;
    let defect = p1.defect() * p2.defect() / den.norm_sqr();
    let phase = (1.0 + w2 * w1.conj()) / (1.0 + w1 * w2.conj());
    let w3 = DiskPoint::with_defect(w3, defect).unwrap_or_else(|_| DiskPoint::origin());
    (w3, wrap_angle(phase.arg()))
}

/// `w(z) = (z/|z|) tanh|z|`.
pub fn w_of_z(z: Complex64) -> DiskPoint {
    DiskPoint::from_rapidity(z)
}

/// Inverse of [`w_of_z`].
pub fn z_of_w(w: &DiskPoint) -> Complex64 {
    w.rapidity()
}

/// `eta = ln(1 - |w|^2)`.
pub fn eta_of_w(w: &DiskPoint) -> f64 {
    w.eta()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn element(zr: f64, zi: f64, th: f64, ar: f64, ai: f64, t: f64) -> JacobiElement {
        JacobiElement::new(su11_exp(c(zr, zi), th), c(ar, ai), t)
    }

    fn arb_element() -> impl Strategy<Value = JacobiElement> {
        (
            -1.0..1.0f64,
            -1.0..1.0f64,
            -2.0..2.0f64,
            -1.5..1.5f64,
            -1.5..1.5f64,
            -3.0..3.0f64,
        )
            .prop_map(|(a, b, c_, d, e, f)| element(a, b, c_, d, e, f))
    }

    fn arb_point() -> impl Strategy<Value = JacobiCSPoint> {
        (-1.5..1.5f64, -1.5..1.5f64, 0.0..0.7f64, -3.2..3.2f64).prop_map(|(a, b, r, p)| {
            JacobiCSPoint::new(c(a, b), Complex64::from_polar(r, p)).unwrap()
        })
    }

    #[test]
    fn disk_point_rejects_boundary() {
        assert!(DiskPoint::new(c(1.0, 0.0)).is_err());
        assert!(DiskPoint::new(c(0.0, 1.0 - 1e-13)).is_err());
        assert!(DiskPoint::new(c(0.6, 0.6)).is_ok());
        assert!(DiskPoint::new(c(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn su11_check() {
        assert!(SU11Matrix::new(c(2.0, 0.0), c(0.0, 3f64.sqrt())).is_ok());
        assert!(SU11Matrix::new(c(2.0, 0.0), c(0.0, 1.0)).is_err());
        let g = SU11Matrix::renormalized(c(2.0, 1.0), c(0.5, -0.3)).unwrap();
        assert!((g.det() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mobius_examples() {
        let w = DiskPoint::new(c(0.3, 0.0)).unwrap();
        let same = mobius_act(&SU11Matrix::identity(), &w).unwrap();
        assert!((same.value() - c(0.3, 0.0)).norm() < 1e-16);
        // velocity addition
        let (t, w1) = (0.4f64, 0.25f64);
        let g = SU11Matrix::new(c(t.cosh(), 0.0), c(t.sinh(), 0.0)).unwrap();
        let r = mobius_act(&g, &DiskPoint::new(c(w1, 0.0)).unwrap()).unwrap();
        let w2 = t.tanh();
        assert!((r.value().re - (w1 + w2) / (1.0 + w1 * w2)).abs() < 1e-15);
    }

    #[test]
    fn jacobi_act_examples() {
        let x = JacobiCSPoint::new(c(0.2, -0.1), c(0.3, 0.4)).unwrap();
        let al = c(0.5, 0.7);
        let y = jacobi_act(&JacobiElement::displacement(al), &x).unwrap();
        assert!((y.z - (al - al.conj() * x.w() + x.z)).norm() < 1e-15);
        assert_eq!(y.w(), x.w());
        let y = jacobi_act(&JacobiElement::identity(), &x).unwrap();
        assert!((y.z - x.z).norm() < 1e-16);
    }

    #[test]
    fn cocycle_examples() {
        let k = Weight::strict(1.5).unwrap();
        let x = JacobiCSPoint::new(c(0.4, 0.3), c(-0.2, 0.5)).unwrap();
        let one = cocycle(&JacobiElement::identity(), &x, &k);
        assert!((one - 1.0).norm() < 1e-14);
        let al = c(0.6, -0.8);
        let v = cocycle(
            &JacobiElement::displacement(al),
            &JacobiCSPoint::origin(),
            &k,
        );
        assert!((v - (-al.norm_sqr() / 2.0).exp()).norm() < 1e-15);
    }

    #[test]
    fn su11_exp_examples() {
        assert!(su11_exp(c(0.0, 0.0), 0.0).max_abs_diff(&SU11Matrix::identity()) < 1e-16);
        let g = su11_exp(c(0.7, 0.0), 0.0);
        assert!((g.a - c(0.7f64.cosh(), 0.0)).norm() < 1e-15);
        assert!((g.b - c(0.7f64.sinh(), 0.0)).norm() < 1e-15);
        let g = su11_exp(c(0.0, 0.0), std::f64::consts::FRAC_PI_2);
        assert!((g.a - c(0.0, 1.0)).norm() < 1e-15);
        assert!(g.b.norm() < 1e-16);
    }

    #[test]
    fn su11_exp_matches_matrix_series() {
        let (z, th) = (c(0.4, -0.9), 0.6);
        let x = nalgebra::Matrix2::new(c(0.0, th), z, z.conj(), c(0.0, -th));
        let mut term = nalgebra::Matrix2::<Complex64>::identity();
        let mut sum = term;
        for j in 1..40 {
            term = term * x / Complex64::new(j as f64, 0.0);
            sum += term;
        }
        let g = su11_exp(z, th);
        assert!((sum[(0, 0)] - g.a).norm() < 1e-14);
        assert!((sum[(0, 1)] - g.b).norm() < 1e-14);
        assert!((sum[(1, 0)] - g.b.conj()).norm() < 1e-14);
    }

    #[test]
    fn rapidity_examples() {
        let w = w_of_z(c(0.0, 0.0));
        assert_eq!(w.value(), c(0.0, 0.0));
        assert_eq!(w.eta(), 0.0);
        let w = w_of_z(c(1.0, 0.0));
        assert!((w.value().re - 0.761_594_155_955_764_9).abs() < 1e-15);
        let z = c(-12.0, 14.0);
        let back = z_of_w(&w_of_z(z));
        assert!((back - z).norm() < 1e-12 * z.norm());
        let eta = eta_of_w(&w_of_z(z));
        assert!((eta + 2.0 * z.norm().cosh().ln()).abs() < 1e-12 * eta.abs());
    }

    #[test]
    fn product_with_phase_examples() {
        let (w3, th) = su11_product_with_phase(c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(w3.value(), c(0.0, 0.0));
        assert_eq!(th, 0.0);
        let (w3, th) = su11_product_with_phase(c(0.3, 0.0), c(-0.8, 0.0));
        assert!((w3.value() - c((-0.5f64).tanh(), 0.0)).norm() < 1e-15);
        assert_eq!(th, 0.0);
    }

    #[test]
    fn product_with_phase_matches_matrix_product() {
        let (z1, z2) = (c(0.3, 0.5), c(-0.6, 0.2));
        let g = su11_exp(z2, 0.0).compose(&su11_exp(z1, 0.0));
        let (w3, th) = su11_product_with_phase(z1, z2);
        // g = S(w3) diag(e^{i th/2}, e^{-i th/2}), up to the sign convention of the angle.
        assert!((g.b / g.a.conj() - w3.value()).norm() < 1e-14);
        assert!((g.a / g.a.conj() - Complex64::from_polar(1.0, th)).norm() < 1e-14);
    }

    proptest! {
        #[test]
        fn group_axioms(h1 in arb_element(), h2 in arb_element(), h3 in arb_element()) {
            let l = compose(&compose(&h1, &h2), &h3);
            let r = compose(&h1, &compose(&h2, &h3));
            prop_assert!(l.max_abs_diff(&r) < 1e-12 * (1.0 + l.alpha.norm() + l.t.abs()));
            let e = JacobiElement::identity();
            prop_assert!(compose(&e, &h1).max_abs_diff(&h1) < 1e-12);
            prop_assert!(compose(&h1, &e).max_abs_diff(&h1) < 1e-12);
            prop_assert!(compose(&h1, &inverse(&h1)).max_abs_diff(&e) < 1e-12);
            prop_assert!(compose(&inverse(&h1), &h1).max_abs_diff(&e) < 1e-12);
            prop_assert!(inverse(&inverse(&h1)).max_abs_diff(&h1) < 1e-13);
        }

        #[test]
        fn action_is_left_action(h1 in arb_element(), h2 in arb_element(), x in arb_point()) {
            let lhs = jacobi_act(&h1, &jacobi_act(&h2, &x).unwrap()).unwrap();
            let rhs = jacobi_act(&compose(&h1, &h2), &x).unwrap();
            prop_assert!((lhs.z - rhs.z).norm() < 1e-10 * (1.0 + lhs.z.norm()));
            prop_assert!((lhs.w() - rhs.w()).norm() < 1e-12);
            prop_assert!(lhs.w.norm() < 1.0);
            prop_assert!((lhs.w.defect() - (1.0 - lhs.w().norm_sqr())).abs() < 1e-12);
            let w1 = mobius_act(&h1.g, &x.w).unwrap();
            prop_assert!((jacobi_act(&h1, &x).unwrap().w() - w1.value()).norm() < 1e-15);
        }

        #[test]
        fn multiplier_forms_agree(h in arb_element(), x in arb_point(), two_k in 2u32..6) {
            let k = Weight::strict(two_k as f64 / 2.0).unwrap();
            let l1 = cocycle(&h, &x, &k);
            let l2 = cocycle_closed_form(&h, &x, &k);
            let l3 = cocycle_completed_square(&h, &x, &k);
            prop_assert!((l1 - l2).norm() < 1e-10 * l1.norm().max(1.0));
            prop_assert!((l1 - l3).norm() < 1e-10 * l1.norm().max(1.0));
        }

        #[test]
        fn full_multiplier_is_cocycle(h1 in arb_element(), h2 in arb_element(), x in arb_point()) {
            let k = Weight::strict(1.5).unwrap();
            let lhs = full_multiplier(&compose(&h1, &h2), &x, &k);
            let rhs = full_multiplier(&h1, &jacobi_act(&h2, &x).unwrap(), &k) * full_multiplier(&h2, &x, &k);
            prop_assert!((lhs - rhs).norm() < 1e-9 * lhs.norm().max(1.0));
        }

        #[test]
        fn su11_exp_has_unit_determinant(zr in -3.0..3.0f64, zi in -3.0..3.0f64, th in -3.0..3.0f64) {
            let g = su11_exp(c(zr, zi), th);
            prop_assert!((g.det() - 1.0).abs() < 1e-12 * g.a.norm_sqr().max(1.0));
        }

        #[test]
        fn rapidity_roundtrip(r in 0.0..20.0f64, phi in -3.2..3.2f64) {
            let z = Complex64::from_polar(r, phi);
            let w = w_of_z(z);
            prop_assert!((z_of_w(&w) - z).norm() < 1e-12 * r.max(1.0));
            prop_assert!((w.eta() + 2.0 * r.cosh().ln()).abs() < 1e-12 * w.eta().abs().max(1.0));
        }

        #[test]
        fn product_phase_is_unimodular(a in -2.0..2.0f64, b in -2.0..2.0f64, cc in -2.0..2.0f64, d in -2.0..2.0f64) {
            let (w3, th) = su11_product_with_phase(c(a, b), c(cc, d));
            prop_assert!(w3.norm() < 1.0);
            prop_assert!(th > -std::f64::consts::PI && th <= std::f64::consts::PI);
            let g = su11_exp(c(cc, d), 0.0).compose(&su11_exp(c(a, b), 0.0));
            prop_assert!((g.b / g.a.conj() - w3.value()).norm() < 1e-12);
        }
    }
}
