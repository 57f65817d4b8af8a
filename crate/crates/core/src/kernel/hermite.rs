use num_complex::Complex64;

/// `H_n(x) = n! sum_m (-1)^m (2x)^{n-2m} / (m! (n-2m)!)`.
pub fn hermite_poly(n: usize, x: Complex64) -> Complex64 {
    // Horner in u = (2x)^2 over the coefficients c_m, highest power first.
    let u = 4.0 * x * x;
    let mut c = 1.0f64;
    let mut acc = Complex64::new(0.0, 0.0);
    let half = n / 2;
    let mut coeffs = Vec::with_capacity(half + 1);
    for m in 0..=half {
        coeffs.push(c);
        let a = (n - 2 * m) as f64;
        if m < half {
            c *= -a * (a - 1.0) / (m + 1) as f64;
        }
    }
    for &cm in &coeffs {
        acc = acc * u + cm;
    }
    if n % 2 == 1 {
        acc * 2.0 * x
    } else {
        acc
    }
}

/// `P_n(z, w) = n! sum_j (w/2)^j z^{n-2j} / (j! (n-2j)!)`.
pub fn pn_poly(n: usize, z: Complex64, w: Complex64) -> Complex64 {
    let half = n / 2;
    let mut c = 1.0f64;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut wpow = Complex64::new(1.0, 0.0);
    for j in 0..=half {
        acc += c * wpow * z.powu((n - 2 * j) as u32);
        let a = (n - 2 * j) as f64;
        c *= a * (a - 1.0) / (2.0 * (j + 1) as f64);
        wpow *= w;
    }
    acc
}

/// `(i/sqrt 2)^n w^{n/2} H_n(-i z / sqrt(2w))`, with `z^n` at `w = 0`.
pub fn pn_via_hermite(n: usize, z: Complex64, w: Complex64) -> Complex64 {
    if w.norm() == 0.0 {
        return z.powu(n as u32);
    }
    let sw = w.sqrt();
    let x = Complex64::new(0.0, -1.0) * z / (std::f64::consts::SQRT_2 * sw);
    let pre = (Complex64::new(0.0, 1.0) * sw / std::f64::consts::SQRT_2).powu(n as u32);
    pre * hermite_poly(n, x)
}

/// Truncated Mehler sum `sum_{n <= cutoff} (s/2)^n / n! H_n(x) H_n(y)`.
pub fn mehler_sum(x: Complex64, y: Complex64, s: Complex64, cutoff: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut pre = Complex64::new(1.0, 0.0);
    for n in 0..=cutoff {
        acc += pre * hermite_poly(n, x) * hermite_poly(n, y);
        pre *= s / (2.0 * (n + 1) as f64);
    }
    acc
}

/// `(1 - s^2)^{-1/2} exp((2xys - (x^2 + y^2) s^2)/(1 - s^2))`.
pub fn mehler_closed(x: Complex64, y: Complex64, s: Complex64) -> Complex64 {
    let d = 1.0 - s * s;
    ((2.0 * x * y * s - (x * x + y * y) * s * s) / d).exp() / d.sqrt()
}
