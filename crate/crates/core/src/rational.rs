//! Exact rational helpers shared by the symbolic layer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Coeff = BigRational;

pub fn int(v: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(numer: i64, denom: i64) -> Coeff {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

pub fn binomial_q(n: usize, k: usize) -> Coeff {
    BigRational::from_integer(BigInt::from(binomial(n, k)))
}

/// Formats as `p/q`, always with an explicit denominator.
pub fn format_coeff(c: &Coeff) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_coeff(s: &str) -> Result<Coeff> {
    let s = s.trim();
    let bad = || Error::input(None, format!("invalid rational coefficient {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(p))
        }
    }
}

pub fn to_f64(c: &Coeff) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

/// Rounds `x` to the nearest multiple of `resolution` (a power of ten such as 1e-12)
/// and returns the exact rational value of that grid point.
pub fn approximate(x: f64, resolution: f64) -> Coeff {
    let scale = (1.0 / resolution).round();
    let numer = (x * scale).round();
    let numer = BigInt::from(numer as i128);
    let denom = BigInt::from(scale as i128);
    BigRational::new(numer, denom)
}

pub fn half() -> Coeff {
    ratio(1, 2)
}
