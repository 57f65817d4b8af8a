//! Parsing of complex numbers and small vectors given on the command line.

use num_complex::Complex64;

/// Accepts `1.5`, `-2i`, `i`, `0.3+0.4i`, `1e-3-2.5e-1i` and the pair form `0.3,0.4`.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    if let Some((a, b)) = t.split_once(',') {
        return Ok(Complex64::new(real(a)?, real(b)?));
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(real(&t)?, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (real(&body[..i])?, imag(&body[i..])?),
        None => (0.0, imag(body)?),
    };
    Ok(Complex64::new(re, im))
}

fn real(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .parse()
        .map_err(|_| format!("cannot parse `{s}` as a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn imag(s: &str) -> Result<f64, String> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real(s),
    }
}

/// Comma separated reals, e.g. an SL(2,R) matrix `a,b,c,d`.
pub fn reals(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|p| real(p.trim())).collect()
}
