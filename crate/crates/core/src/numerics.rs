//! Scalar helpers shared by the other modules: the `cs`/`si` pair with its
//! removable singularity, numerically safe `tanh`/`artanh` ratios, angle
//! wrapping and derivative stencils.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Below this `|lambda|` the power series in `lambda` is used.
const LAMBDA_SERIES: f64 = 1e-8;
/// Below this radius `tanh r / r` and `artanh r / r` use their Taylor series.
const RADIUS_SERIES: f64 = 1e-4;

/// Returns `(cs(x), si(x)/x)` for `lambda = |z|^2 - theta^2`.
///
/// For `lambda > 0` these are `(cosh x, sinh x / x)` with `x = sqrt(lambda)`,
/// for `lambda < 0` they are `(cos x, sin x / x)` with `x = sqrt(-lambda)`.
/// Both are entire functions of `lambda`.
pub fn cs_si(lambda: f64) -> (f64, f64) {
    if lambda.abs() < LAMBDA_SERIES {
        // cs = sum lambda^n/(2n)!, si/x = sum lambda^n/(2n+1)!
        let mut cs = 0.0;
        let mut si = 0.0;
        let mut term_c = 1.0;
        let mut term_s = 1.0;
        for n in 0..6 {
            cs += term_c;
            si += term_s;
            let n = n as f64;
            term_c *= lambda / ((2.0 * n + 1.0) * (2.0 * n + 2.0));
            term_s *= lambda / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
        }
        (cs, si)
    } else if lambda > 0.0 {
        let x = lambda.sqrt();
        (x.cosh(), x.sinh() / x)
    } else {
        let x = (-lambda).sqrt();
        (x.cos(), x.sin() / x)
    }
}

/// `tanh(r) / r`, continuous at `r = 0`.
pub fn tanh_ratio(r: f64) -> f64 {
    if r < RADIUS_SERIES {
        let r2 = r * r;
        1.0 - r2 / 3.0 + 2.0 * r2.powi(2) / 15.0 - 17.0 * r2.powi(3) / 315.0
            + 62.0 * r2.powi(4) / 2835.0
            - 1382.0 * r2.powi(5) / 155925.0
    } else {
        r.tanh() / r
    }
}

/// `sinh(r) / r`, continuous at `r = 0`.
pub fn sinh_ratio(r: f64) -> f64 {
    cs_si(r * r).1
}

/// `artanh(r) / r` for `0 <= r < 1`, continuous at `r = 0`.
pub fn artanh_ratio(r: f64) -> f64 {
    if r < RADIUS_SERIES {
        let r2 = r * r;
        1.0 + r2 / 3.0 + r2.powi(2) / 5.0 + r2.powi(3) / 7.0 + r2.powi(4) / 9.0 + r2.powi(5) / 11.0
    } else {
        r.atanh() / r
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut t = a % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// `1 - |w|^2` computed as `(1 - |w|)(1 + |w|)`.
pub fn one_minus_norm_sqr(w: Complex64) -> f64 {
    let r = w.norm();
    (1.0 - r) * (1.0 + r)
}

/// `n`-th derivative of a holomorphic function by the trapezoidal rule on a
/// circle of the given radius (Cauchy's integral formula).
pub fn cauchy_derivative<F>(f: F, z0: Complex64, order: u32, radius: f64, nodes: usize) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let phi = 2.0 * PI * j as f64 / nodes as f64;
        let e = Complex64::from_polar(1.0, phi);
        acc += f(z0 + radius * e) * e.powi(-(order as i32));
    }
    let fact: f64 = (1..=order).map(f64::from).product();
    acc * fact / (nodes as f64 * radius.powi(order as i32))
}

/// Fourth order central difference for `f'(x)`.
pub fn central_diff<F>(f: F, x: f64, h: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Fourth order central difference for a complex valued function of a real variable.
pub fn central_diff_c<F>(f: F, x: f64, h: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    (-f(x + 2.0 * h) + f(x + h) * 8.0 - f(x - h) * 8.0 + f(x - 2.0 * h)) / (12.0 * h)
}

/// Fourth order finite difference Hessian of a real function on `R^D`.
#[allow(clippy::needless_range_loop)]
pub fn hessian_fd<const D: usize, F>(f: F, x: [f64; D], h: f64) -> [[f64; D]; D]
where
    F: Fn([f64; D]) -> f64,
{
    let shifted = |i: usize, a: f64, j: usize, b: f64| {
        let mut y = x;
        y[i] += a;
        y[j] += b;
        f(y)
    };
    let c = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
    let mut out = [[0.0; D]; D];
    for i in 0..D {
        let f0 = f(x);
        let diag = -shifted(i, 2.0 * h, i, 0.0) + 16.0 * shifted(i, h, i, 0.0) - 30.0 * f0
            + 16.0 * shifted(i, -h, i, 0.0)
            - shifted(i, -2.0 * h, i, 0.0);
        out[i][i] = diag / (12.0 * h * h);
        for j in (i + 1)..D {
            let mut acc = 0.0;
            for &(si, ci) in &c {
                for &(sj, cj) in &c {
                    acc += ci * cj * shifted(i, si * h, j, sj * h);
                }
            }
            let v = acc / (144.0 * h * h);
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    out
}

/// `ln Gamma(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, &c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Rising factorial `(x)_m = x (x+1) ... (x+m-1)`.
pub fn pochhammer(x: f64, m: usize) -> f64 {
    (0..m).map(|j| x + j as f64).product()
}

/// `n!` as a float.
pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|j| j as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cs_si_branches_are_continuous() {
        for &l in &[-2e-8, -5e-9, 0.0, 5e-9, 2e-8] {
            let (c, s) = cs_si(l);
            let x = l.abs().sqrt();
            let (ce, se) = if l >= 0.0 {
                (x.cosh(), if x > 0.0 { x.sinh() / x } else { 1.0 })
            } else {
                (x.cos(), x.sin() / x)
            };
            assert!((c - ce).abs() < 1e-15);
            assert!((s - se).abs() < 1e-15);
        }
        let (c, s) = cs_si(-(PI / 2.0).powi(2));
        assert!(c.abs() < 1e-15);
        assert!((s - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn ratios_match_direct_evaluation() {
        for &r in &[1e-6, 5e-5, 9.9e-5, 1e-4, 0.3] {
            assert!((tanh_ratio(r) - r.tanh() / r).abs() < 1e-15);
            assert!((artanh_ratio(r) - r.atanh() / r).abs() < 1e-15);
        }
        assert_eq!(tanh_ratio(0.0), 1.0);
        assert_eq!(artanh_ratio(0.0), 1.0);
    }

    #[test]
    fn angle_wrapping() {
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(0.5) - 0.5).abs() < 1e-15);
        assert!((wrap_angle(-7.0) - (-7.0 + 2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn cauchy_derivative_of_exp() {
        let z0 = Complex64::new(0.3, -0.4);
        for n in 0..4 {
            let d = cauchy_derivative(|z| z.exp(), z0, n, 0.5, 64);
            assert!((d - z0.exp()).norm() < 1e-13);
        }
    }

    #[test]
    fn hessian_of_quadratic_form() {
        let f = |x: [f64; 3]| x[0] * x[0] + 3.0 * x[0] * x[1] - x[2] * x[2] * 0.5 + x[1].sin();
        let h = hessian_fd(f, [0.2, 0.4, -1.0], 1e-3);
        assert!((h[0][0] - 2.0).abs() < 1e-8);
        assert!((h[0][1] - 3.0).abs() < 1e-8);
        assert!((h[1][1] + 0.4f64.sin()).abs() < 1e-8);
        assert!((h[2][2] + 1.0).abs() < 1e-8);
        assert!(h[0][2].abs() < 1e-8);
    }

    #[test]
    fn ln_gamma_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-13);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-13);
        assert!((ln_gamma(0.5) - PI.sqrt().ln()).abs() < 1e-13);
        assert!((ln_gamma(10.5) - (1133278.3889487856f64).ln()).abs() < 1e-12);
    }
}
