//! The Siegel-Jacobi upper half plane picture `H1 × C` with coordinates
//! `(v, u)` and its relation to the bounded picture `(z, w)`.
//!
//! Cayley map `w = (v - i)/(v + i)`, `z = 2iu/(v + i)`; it intertwines the
//! real Jacobi group `SL2(R) ⋉ H(R)` with the group acting on the disk.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{DiskPoint, JacobiCSPoint, JacobiElement, SU11Matrix};
use crate::kernel::{metric, MetricComponents};
use crate::numerics::{cauchy_derivative, hessian_fd};
use crate::{Error, Result, Weight, BOUNDARY_EPS};

type C = Complex64;

const I: C = C::new(0.0, 1.0);

/// Point `(v, u)` with `Im v > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperHalfPoint {
    #[serde(with = "crate::cjson::complex")]
    pub v: C,
    #[serde(with = "crate::cjson::complex")]
    pub u: C,
}

impl UpperHalfPoint {
    pub fn new(v: C, u: C) -> Result<Self> {
        if !(v.im > BOUNDARY_EPS) || !v.re.is_finite() || !(u.re.is_finite() && u.im.is_finite()) {
            return Err(Error::OutsideHalfPlane(v.im));
        }
        Ok(UpperHalfPoint { v, u })
    }

    pub fn ez(&self) -> EZCoords {
        let y = self.v.im;
        let p = self.u.im / y;
        EZCoords {
            x: self.v.re,
            y,
            p,
            q: self.u.re - p * self.v.re,
        }
    }
}

/// Eichler-Zagier coordinates `v = x + iy`, `u = p v + q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EZCoords {
    pub x: f64,
    pub y: f64,
    pub p: f64,
    pub q: f64,
}

impl EZCoords {
    pub fn point(&self) -> Result<UpperHalfPoint> {
        let v = C::new(self.x, self.y);
        UpperHalfPoint::new(v, v * self.p + self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SL2Matrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Tolerance on `ad - bc = 1`.
pub const SL2_EPS: f64 = 1e-12;

impl SL2Matrix {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let m = SL2Matrix { a, b, c, d };
        let det = m.det();
        if !((det - 1.0).abs() <= SL2_EPS) {
            return Err(Error::NotSL2(det));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        SL2Matrix {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn compose(&self, o: &SL2Matrix) -> SL2Matrix {
        SL2Matrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> SL2Matrix {
        SL2Matrix {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn mobius(&self, v: C) -> C {
        (v * self.a + self.b) / (v * self.c + self.d)
    }

    pub fn max_abs_diff(&self, o: &SL2Matrix) -> f64 {
        [self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d]
            .iter()
            .fold(0.0, |m, x| m.max(x.abs()))
    }
}

pub fn cayley_to_disk(p: &UpperHalfPoint) -> Result<JacobiCSPoint> {
    let den = p.v + I;
    let w = (p.v - I) / den;
    // 1 - |w|^2 = 4 Im v / |v + i|^2
    let defect = 4.0 * p.v.im / den.norm_sqr();
    Ok(JacobiCSPoint::from_parts(
        2.0 * I * p.u / den,
        DiskPoint::with_defect(w, defect)?,
    ))
}

pub fn cayley_to_half_plane(x: &JacobiCSPoint) -> Result<UpperHalfPoint> {
    let w = x.w();
    let one_minus = 1.0 - w;
    let v = I * (1.0 + w) / one_minus;
    // Im v = (1 - |w|^2) / |1 - w|^2
    let v = C::new(v.re, x.w.defect() / one_minus.norm_sqr());
    UpperHalfPoint::new(v, x.z / one_minus)
}

/// `C^{-1} M C` with `C = [[i, i], [-1, 1]]`, as `(α, β)` with
/// `2α = a + d + i(b - c)`, `2β = a - d - i(b + c)`.
pub fn sl2_to_su11(m: &SL2Matrix) -> Result<SU11Matrix> {
    let alpha = C::new(m.a + m.d, m.b - m.c) * 0.5;
    let beta = C::new(m.a - m.d, -(m.b + m.c)) * 0.5;
    SU11Matrix::new(alpha, beta)
}

pub fn su11_to_sl2(g: &SU11Matrix) -> Result<SL2Matrix> {
    let (al, be) = (g.a, g.b);
    SL2Matrix::new(al.re + be.re, al.im - be.im, -al.im - be.im, al.re - be.re)
}

/// `C^{-1} M C` by explicit 2x2 complex products.
pub fn cayley_conjugate(m: &SL2Matrix) -> [[C; 2]; 2] {
    let r = |x: f64| C::new(x, 0.0);
    let c = [[I, I], [r(-1.0), r(1.0)]];
    // det C = 2i
    let det = I * 2.0;
    let c_inv = [[r(1.0) / det, -I / det], [r(1.0) / det, I / det]];
    let mm = [[r(m.a), r(m.b)], [r(m.c), r(m.d)]];
    let mul = |x: [[C; 2]; 2], y: [[C; 2]; 2]| -> [[C; 2]; 2] {
        std::array::from_fn(|i| std::array::from_fn(|j| x[i][0] * y[0][j] + x[i][1] * y[1][j]))
    };
    mul(mul(c_inv, mm), c)
}

/// Iwasawa coordinates: `M = [[1, x], [0, 1]] diag(√y, 1/√y) [[cos θ, sin θ], [-sin θ, cos θ]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Iwasawa {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Iwasawa {
    pub fn reassemble(&self) -> SL2Matrix {
        let n = SL2Matrix {
            a: 1.0,
            b: self.x,
            c: 0.0,
            d: 1.0,
        };
        let s = self.y.sqrt();
        let a = SL2Matrix {
            a: s,
            b: 0.0,
            c: 0.0,
            d: 1.0 / s,
        };
        let (sn, cs) = self.theta.sin_cos();
        let k = SL2Matrix {
            a: cs,
            b: sn,
            c: -sn,
            d: cs,
        };
        n.compose(&a).compose(&k)
    }
}

pub fn iwasawa(m: &SL2Matrix) -> Iwasawa {
    let r2 = m.c * m.c + m.d * m.d;
    Iwasawa {
        x: (m.a * m.c + m.b * m.d) / r2,
        y: 1.0 / r2,
        theta: (-m.c).atan2(m.d),
    }
}

/// `(M, (l1, l2), κ)` in `SL2(R) ⋉ H(R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealJacobiElement {
    pub m: SL2Matrix,
    pub l1: f64,
    pub l2: f64,
    pub kappa: f64,
}

impl RealJacobiElement {
    pub fn identity() -> Self {
        RealJacobiElement {
            m: SL2Matrix::identity(),
            l1: 0.0,
            l2: 0.0,
            kappa: 0.0,
        }
    }

    /// `g g' = (M M', X M' + X', κ + κ' + det(X M'; X'))` with `X = (l1, l2)`.
    pub fn compose(&self, o: &RealJacobiElement) -> RealJacobiElement {
        let xm1 = self.l1 * o.m.a + self.l2 * o.m.c;
        let xm2 = self.l1 * o.m.b + self.l2 * o.m.d;
        RealJacobiElement {
            m: self.m.compose(&o.m),
            l1: xm1 + o.l1,
            l2: xm2 + o.l2,
            kappa: self.kappa + o.kappa + xm1 * o.l2 - xm2 * o.l1,
        }
    }

    /// The element acting on the disk picture through the Cayley map:
    /// `g = C^{-1} M C`, `α = l2 + i l1`, `t = κ`.
    pub fn to_complex(&self) -> Result<JacobiElement> {
        Ok(JacobiElement::new(
            sl2_to_su11(&self.m)?,
            C::new(self.l2, self.l1),
            self.kappa,
        ))
    }

    pub fn from_complex(h: &JacobiElement) -> Result<RealJacobiElement> {
        Ok(RealJacobiElement {
            m: su11_to_sl2(&h.g)?,
            l1: h.alpha.im,
            l2: h.alpha.re,
            kappa: h.t,
        })
    }
}

/// `v1 = (a v + b)/(c v + d)`, `u1 = (u + l1 v + l2)/(c v + d)`.
pub fn xj1_action(g: &RealJacobiElement, p: &UpperHalfPoint) -> Result<UpperHalfPoint> {
    let den = p.v * g.m.c + g.m.d;
    let v1 = g.m.mobius(p.v);
    // Im v1 = Im v / |c v + d|^2
    let v1 = C::new(v1.re, p.v.im / den.norm_sqr());
    UpperHalfPoint::new(v1, (p.u + p.v * g.l1 + g.l2) / den)
}

/// Hermitian components of the invariant metric on `H1 × C`:
/// `k/(2y²)|dv|² + |B|²/y` with `B = du - (Im u / y) dv`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerndtForm {
    pub g_vv: f64,
    #[serde(with = "crate::cjson::complex")]
    pub g_vu: C,
    pub g_uu: f64,
}

impl BerndtForm {
    pub fn det(&self) -> f64 {
        self.g_vv * self.g_uu - self.g_vu.norm_sqr()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.g_vv > 0.0 && self.det() > 0.0
    }

    pub fn max_abs_diff(&self, o: &BerndtForm) -> f64 {
        (self.g_vv - o.g_vv)
            .abs()
            .max((self.g_vu - o.g_vu).norm())
            .max((self.g_uu - o.g_uu).abs())
    }
}

pub fn berndt_form_at(p: &UpperHalfPoint, k: &Weight) -> BerndtForm {
    let y = p.v.im;
    let r = p.u.im / y;
    BerndtForm {
        g_vv: k.k() / (2.0 * y * y) + r * r / y,
        g_vu: C::new(-r / y, 0.0),
        g_uu: 1.0 / y,
    }
}

/// Pulls the disk metric back through the Cayley map; the Jacobian is
/// obtained by Cauchy integrals of the holomorphic map.
pub fn pullback_metric(p: &UpperHalfPoint) -> impl Fn(&Weight) -> Result<BerndtForm> + '_ {
    move |k: &Weight| {
        let r = 0.25 * p.v.im.min(1.0);
        let zw = |v: C, u: C| ((2.0 * I * u) / (v + I), (v - I) / (v + I));
        let d = |f: &dyn Fn(C) -> C, at: C| cauchy_derivative(f, at, 1, r, 32);
        let dz_dv = d(&|s| zw(s, p.u).0, p.v);
        let dw_dv = d(&|s| zw(s, p.u).1, p.v);
        let dz_du = d(&|s| zw(p.v, s).0, p.u);
        let g: MetricComponents = metric(&cayley_to_disk(p)?, k);
        let m = g.matrix();
        // rows of the Jacobian: d(z, w)/dv and d(z, w)/du
        let jac = [[dz_dv, dw_dv], [dz_du, C::new(0.0, 0.0)]];
        let h = |a: usize, b: usize| -> C {
            let mut s = C::new(0.0, 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    s += jac[a][i] * m[i][j] * jac[b][j].conj();
                }
            }
            s
        };
        Ok(BerndtForm {
            g_vv: h(0, 0).re,
            g_vu: h(0, 1),
            g_uu: h(1, 1).re,
        })
    }
}

/// Real metric in the coordinates `(x, y, p, q)` obtained by substituting
/// `v = x + iy`, `u = p v + q` into the hermitian form.
pub fn ez_metric_from_form(ez: &EZCoords, k: &Weight) -> Result<[[f64; 4]; 4]> {
    let p = ez.point()?;
    let f = berndt_form_at(&p, k);
    // differentials of v and u along x, y, p, q
    let dv = [C::new(1.0, 0.0), I, C::new(0.0, 0.0), C::new(0.0, 0.0)];
    let du = [C::new(ez.p, 0.0), I * ez.p, p.v, C::new(1.0, 0.0)];
    Ok(std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let s = dv[i] * dv[j].conj() * f.g_vv
                + dv[i] * du[j].conj() * f.g_vu
                + du[i] * dv[j].conj() * f.g_vu.conj()
                + du[i] * du[j].conj() * f.g_uu;
            s.re
        })
    }))
}

/// `k/(2y²)(dx² + dy²) + ((x² + y²) dp² + dq² + 2x dp dq)/y`.
pub fn ez_metric(ez: &EZCoords, k: &Weight) -> [[f64; 4]; 4] {
    let (x, y) = (ez.x, ez.y);
    let s = k.k() / (2.0 * y * y);
    [
        [s, 0.0, 0.0, 0.0],
        [0.0, s, 0.0, 0.0],
        [0.0, 0.0, (x * x + y * y) / y, x / y],
        [0.0, 0.0, x / y, 1.0 / y],
    ]
}

/// `f' = -(λ/2) log Im v + 2πμ (Im u)² / Im v`, the real form of
/// `-(λ/2) log((v - v̄)/2i) - iπμ (u - ū)²/(v - v̄)`.
pub fn kahler_berndt_potential(p: &UpperHalfPoint, lambda: f64, mu: f64) -> f64 {
    let y = p.v.im;
    -0.5 * lambda * y.ln() + 2.0 * PI * mu * p.u.im * p.u.im / y
}

/// `∂_a ∂_b̄` of the potential by a finite difference Hessian in the real coordinates.
pub fn berndt_potential_form(p: &UpperHalfPoint, lambda: f64, mu: f64) -> Result<BerndtForm> {
    let f = |x: [f64; 4]| -> f64 {
        match UpperHalfPoint::new(C::new(x[0], x[1]), C::new(x[2], x[3])) {
            Ok(q) => kahler_berndt_potential(&q, lambda, mu),
            Err(_) => f64::NAN,
        }
    };
    let h = hessian_fd(f, [p.v.re, p.v.im, p.u.re, p.u.im], 1e-3 * p.v.im.min(1.0));
    let mixed = |a: usize, b: usize| -> C {
        let (xa, ya, xb, yb) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
        C::new(h[xa][xb] + h[ya][yb], h[xa][yb] - h[ya][xb]) * 0.25
    };
    Ok(BerndtForm {
        g_vv: mixed(0, 0).re,
        g_vu: mixed(0, 1),
        g_uu: mixed(1, 1).re,
    })
}

/// Fits `(λ, μ)` so that `∂∂̄ f'` matches the form at `p`: `g_vv`
/// at `Im u = 0` fixes `λ`, `g_uu` fixes `μ`.
pub fn fit_berndt_parameters(p: &UpperHalfPoint, k: &Weight) -> Result<(f64, f64)> {
    let target = berndt_form_at(p, k);
    let unit_l = berndt_potential_form(p, 1.0, 0.0)?;
    let unit_m = berndt_potential_form(p, 0.0, 1.0)?;
    let mu = target.g_uu / unit_m.g_uu;
    let lambda = (target.g_vv - mu * unit_m.g_vv) / unit_l.g_vv;
    Ok((lambda, mu))
}
