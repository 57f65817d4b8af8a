use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// How strictly the weight is validated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// `2k` must be an integer `>= 2`.
    #[default]
    Strict,
    /// Any real `k > 3/4`.
    Relaxed,
}

impl FromStr for WeightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "strict" => Ok(WeightMode::Strict),
            "relaxed" => Ok(WeightMode::Relaxed),
            other => Err(Error::Parse(format!("unknown weight mode '{other}'"))),
        }
    }
}

/// Weight `k` of the discrete series representation, the lowest eigenvalue of `K0`.
///
/// The SU(1,1) factor of the Fock space carries the shifted weight
/// `k' = k - 1/4`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    k: f64,
    exact: Option<BigRational>,
    mode: WeightMode,
}

impl Weight {
    pub fn new(k: f64, mode: WeightMode) -> Result<Self> {
        let exact = BigRational::from_float(k);
        Self::build(k, exact, mode)
    }

    pub fn strict(k: f64) -> Result<Self> {
        Self::new(k, WeightMode::Strict)
    }

    pub fn relaxed(k: f64) -> Result<Self> {
        Self::new(k, WeightMode::Relaxed)
    }

    /// Weight from an exact rational value.
    pub fn from_rational(k: BigRational, mode: WeightMode) -> Result<Self> {
        let kf = k.to_f64().unwrap_or(f64::NAN);
        Self::build(kf, Some(k), mode)
    }

    /// Parses `"3/2"`, `"1.5"` or `"2"`.
    pub fn parse(s: &str, mode: WeightMode) -> Result<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid weight '{s}'")))?;
            let den: BigInt = den
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid weight '{s}'")))?;
            if den.is_zero() {
                return Err(Error::Parse(format!("invalid weight '{s}'")));
            }
            return Self::from_rational(BigRational::new(num, den), mode);
        }
        let k: f64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("invalid weight '{s}'")))?;
        Self::new(k, mode)
    }

    fn build(k: f64, exact: Option<BigRational>, mode: WeightMode) -> Result<Self> {
        if !k.is_finite() || k <= 0.0 {
            return Err(Error::InvalidWeight {
                k,
                reason: "k must be a positive finite number".into(),
            });
        }
        match mode {
            WeightMode::Strict => {
                let two_k = exact
                    .as_ref()
                    .map(|e| e * BigRational::from_integer(2.into()));
                let integral = two_k.as_ref().is_some_and(|t| t.is_integer());
                if !integral || k < 1.0 {
                    return Err(Error::InvalidWeight {
                        k,
                        reason: "strict mode requires 2k to be an integer >= 2".into(),
                    });
                }
            }
            WeightMode::Relaxed => {
                if k <= 0.75 {
                    return Err(Error::InvalidWeight {
                        k,
                        reason: "relaxed mode requires k > 3/4".into(),
                    });
                }
            }
        }
        Ok(Weight { k, exact, mode })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Weight of the SU(1,1) factor, `k - 1/4`.
    pub fn k_prime(&self) -> f64 {
        self.k - 0.25
    }

    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    /// Integer value of `2k` when it has one.
    pub fn two_k_integer(&self) -> Option<i64> {
        let e = self.exact.as_ref()?;
        let t = e * BigRational::from_integer(2.into());
        if t.is_integer() {
            t.to_integer().to_i64()
        } else {
            None
        }
    }

    /// True when `2k` is an integer while `2k' = 2k - 1/2` is not, which is
    /// always the case in strict mode.
    pub fn factor_weight_is_fractional(&self) -> bool {
        self.two_k_integer().is_some()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(e) if e.denom().is_one() => write!(f, "{}", e.numer()),
            Some(e) if e.denom().bits() <= 16 => write!(f, "{}/{}", e.numer(), e.denom()),
            _ => write!(f, "{}", self.k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_mode_bounds() {
        assert!(Weight::strict(1.0).is_ok());
        assert!(Weight::strict(1.5).is_ok());
        assert!(Weight::strict(0.5).is_err());
        assert!(Weight::strict(1.2).is_err());
        assert!(Weight::strict(-1.0).is_err());
    }

    #[test]
    fn relaxed_mode_bounds() {
        assert!(Weight::relaxed(0.8).is_ok());
        assert!(Weight::relaxed(0.75).is_err());
        assert!(Weight::relaxed(1.2).is_ok());
    }

    #[test]
    fn parse_fraction() {
        let w = Weight::parse("3/2", WeightMode::Strict).unwrap();
        assert_eq!(w.k(), 1.5);
        assert_eq!(w.to_string(), "3/2");
        assert_eq!(w.two_k_integer(), Some(3));
        assert!((w.k_prime() - 1.25).abs() < 1e-15);
        assert!(Weight::parse("3/0", WeightMode::Strict).is_err());
        assert!(Weight::parse("abc", WeightMode::Strict).is_err());
    }
}
