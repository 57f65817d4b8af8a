use num_complex::Complex64;

use super::hermite::{pn_poly, pn_via_hermite};
use super::BasisIndex;
use crate::algebra::JacobiCSPoint;
use crate::{Error, Result, Weight};

/// `sqrt(Gamma(m + q) / (m! Gamma(q)))` for the SU(1,1) factor with `q = 2k'`.
pub fn factor_coefficient(m: usize, two_kp: f64) -> f64 {
    (0..m)
        .map(|j| ((j as f64 + two_kp) / (j + 1) as f64).sqrt())
        .product()
}

fn checked_two_kp(k: &Weight) -> Result<f64> {
    let kp = k.k_prime();
    if kp <= 0.0 {
        return Err(Error::InvalidWeight {
            k: k.k(),
            reason: "the factor weight k - 1/4 must be positive".into(),
        });
    }
    Ok(2.0 * kp)
}

/// `f_{n,m}(z, w) = sqrt(Gamma(m + 2k')/(m! Gamma(2k'))) w^m P_n(z, w) / sqrt(n!)`.
pub fn basis_function(idx: BasisIndex, x: &JacobiCSPoint, k: &Weight) -> Result<Complex64> {
    let two_kp = checked_two_kp(k)?;
    let norm_n: f64 = (1..=idx.n).map(|j| (j as f64).sqrt()).product();
    Ok(
        factor_coefficient(idx.m, two_kp) * x.w().powu(idx.m as u32) * pn_poly(idx.n, x.z, x.w())
            / norm_n,
    )
}

/// Same basis function through the Hermite polynomial representation of `P_n`.
pub fn basis_function_hermite(idx: BasisIndex, x: &JacobiCSPoint, k: &Weight) -> Result<Complex64> {
    let two_kp = checked_two_kp(k)?;
    let fact: f64 = (1..=idx.n).map(|j| j as f64).product();
    Ok(factor_coefficient(idx.m, two_kp)
        * x.w().powu(idx.m as u32)
        * pn_via_hermite(idx.n, x.z, x.w())
        / fact.sqrt())
}

/// `P_n(z, w)/sqrt(n!)` for `n = 0..=n_cut`.
pub fn boson_factor_values(z: Complex64, w: Complex64, n_cut: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n_cut + 1);
    let mut norm = 1.0f64;
    for n in 0..=n_cut {
        if n > 0 {
            norm *= (n as f64).sqrt();
        }
        out.push(pn_poly(n, z, w) / norm);
    }
    out
}

/// `sqrt(Gamma(m + 2k')/(m! Gamma(2k'))) w^m` for `m = 0..=m_cut`.
pub fn su11_factor_values(w: Complex64, two_kp: f64, m_cut: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(m_cut + 1);
    let mut v = Complex64::new(1.0, 0.0);
    for m in 0..=m_cut {
        out.push(v);
        v *= w * ((m as f64 + two_kp) / (m + 1) as f64).sqrt();
    }
    out
}

/// Logarithm of `K(z, w; zeta, omega)` in the holomorphic variables
/// `zeta = conj(z')`, `omega = conj(w')`, principal branch of the power.
pub fn kernel_log_holomorphic(
    z: Complex64,
    w: Complex64,
    zeta: Complex64,
    omega: Complex64,
    k: &Weight,
) -> Complex64 {
    let d = 1.0 - w * omega;
    -2.0 * k.k() * d.ln() + (2.0 * zeta * z + z * z * omega + zeta * zeta * w) / (2.0 * d)
}

/// `K(z, w; zeta, omega) = (1 - w omega)^{-2k} exp((2 zeta z + z^2 omega + zeta^2 w)/(2(1 - w omega)))`.
pub fn kernel_holomorphic(
    z: Complex64,
    w: Complex64,
    zeta: Complex64,
    omega: Complex64,
    k: &Weight,
) -> Complex64 {
    let d = 1.0 - w * omega;
    let e = ((2.0 * zeta * z + z * z * omega + zeta * zeta * w) / (2.0 * d)).exp();
    let p = match k.two_k_integer() {
        Some(n) if n < i32::MAX as i64 => d.powi(-(n as i32)),
        _ => (-2.0 * k.k() * d.ln()).exp(),
    };
    p * e
}

/// `ln K(x; conj(y))`, finite for any size of `z`.
pub fn kernel_log(x: &JacobiCSPoint, y: &JacobiCSPoint, k: &Weight) -> Complex64 {
    kernel_log_holomorphic(x.z, x.w(), y.z.conj(), y.w().conj(), k)
}

/// `K(x; conj(y)) = (e_{conj x}, e_{conj y})`. Above `|z| = 30` the value is
/// formed from [`kernel_log`].
pub fn kernel_closed(x: &JacobiCSPoint, y: &JacobiCSPoint, k: &Weight) -> Complex64 {
    if x.z.norm() > 30.0 || y.z.norm() > 30.0 {
        kernel_log(x, y, k).exp()
    } else {
        kernel_holomorphic(x.z, x.w(), y.z.conj(), y.w().conj(), k)
    }
}

/// [`kernel_closed`] with an overflow error instead of an infinite value.
pub fn kernel_checked(x: &JacobiCSPoint, y: &JacobiCSPoint, k: &Weight) -> Result<Complex64> {
    let l = kernel_log(x, y, k);
    if l.re > 709.0 {
        return Err(Error::KernelOverflow(l.re));
    }
    Ok(l.exp())
}

/// `sum_{n <= n_cut, m <= m_cut} f_{n,m}(x) conj(f_{n,m}(y))`.
pub fn kernel_truncated(
    x: &JacobiCSPoint,
    y: &JacobiCSPoint,
    k: &Weight,
    n_cut: usize,
    m_cut: usize,
) -> Result<Complex64> {
    let two_kp = checked_two_kp(k)?;
    let bx = boson_factor_values(x.z, x.w(), n_cut);
    let by = boson_factor_values(y.z, y.w(), n_cut);
    let sx = su11_factor_values(x.w(), two_kp, m_cut);
    let sy = su11_factor_values(y.w(), two_kp, m_cut);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..=n_cut {
        for m in 0..=m_cut {
            acc += bx[n] * sx[m] * (by[n] * sy[m]).conj();
        }
    }
    let tail = (bx[n_cut] * by[n_cut].conj()).norm() + (sx[m_cut] * sy[m_cut].conj()).norm();
    log::debug!("kernel_truncated: last term magnitude {tail:e} at cutoffs ({n_cut}, {m_cut})");
    Ok(acc)
}
