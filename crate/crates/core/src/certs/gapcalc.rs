use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::to_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapRegime {
    ByM,
    ByN,
}

impl FromStr for GapRegime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "by_m" => Ok(GapRegime::ByM),
            "by_n" => Ok(GapRegime::ByN),
            other => Err(Error::InvalidRegime(format!("unknown regime {other:?}"))),
        }
    }
}

/// An exponent, exact when it is rational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exponent {
    pub exact: Option<String>,
    pub value: f64,
    #[serde(skip)]
    pub rational: Option<BigRational>,
}

impl Exponent {
    fn exact(q: BigRational) -> Self {
        Self { exact: Some(q.to_string()), value: to_f64(&q), rational: Some(q) }
    }

    fn approx(value: f64) -> Self {
        Self { exact: None, value, rational: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub regime: GapRegime,
    pub r_edge: usize,
    pub eps: String,
    pub k_exponent: Exponent,
    pub gap_exponent: Exponent,
}

/// Parses a decimal (`0.125`), fraction (`1/8`) or integer into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidRegime(format!("cannot parse {s:?} as a rational"));
    if let Some((a, b)) = s.split_once('/') {
        let a = BigInt::from_str(a.trim()).map_err(|_| bad())?;
        let b = BigInt::from_str(b.trim()).map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let q = BigRational::new(num, den);
    Ok(if neg { -q } else { q })
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exponents of the hardness gap for the hypergraph Dense-vs-Random problem.
///
/// `by_m` measures in the number of hyperedges: `k = m^{1/(4-4eps)}` and gap
/// `1/(2-eps) - 1/(4-4eps) - 1/(2r)`. `by_n` measures in the number of
/// vertices: `k = n^{1/sqrt r}` and gap `1 - 2/sqrt r + 1/r - eps/r^{3/2}`,
/// exact when `r` is a perfect square.
pub fn hardness_gap_calculator(r_edge: usize, eps: &BigRational, regime: GapRegime) -> Result<GapReport> {
    if r_edge < 2 {
        return Err(Error::InvalidRegime(format!("r = {r_edge} must be at least 2")));
    }
    if *eps < BigRational::zero() {
        return Err(Error::InvalidRegime("eps must be non-negative".into()));
    }
    let r = r_edge as i64;
    let (k_exponent, gap_exponent) = match regime {
        GapRegime::ByM => {
            if *eps >= BigRational::new(BigInt::one(), BigInt::from(r)) {
                return Err(Error::InvalidRegime(format!("eps must be below 1/r = 1/{r}")));
            }
            let k = BigRational::one() / (q(4) - q(4) * eps);
            let gap = BigRational::one() / (q(2) - eps) - &k - BigRational::new(BigInt::one(), BigInt::from(2 * r));
            (Exponent::exact(k), Exponent::exact(gap))
        }
        GapRegime::ByN => {
            let root = (r_edge as u64).sqrt();
            if root * root == r_edge as u64 {
                let sr = q(root as i64);
                let k = BigRational::one() / &sr;
                let gap = BigRational::one() - q(2) / &sr + BigRational::new(BigInt::one(), BigInt::from(r))
                    - eps / (q(r) * &sr);
                (Exponent::exact(k), Exponent::exact(gap))
            } else {
                let sr = (r as f64).sqrt();
                let e = to_f64(eps);
                (Exponent::approx(1.0 / sr), Exponent::approx(1.0 - 2.0 / sr + 1.0 / r as f64 - e / sr.powi(3)))
            }
        }
    };
    Ok(GapReport { regime, r_edge, eps: eps.to_string(), k_exponent, gap_exponent })
}
