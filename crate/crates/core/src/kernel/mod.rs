//! Exact arithmetic kernel: integer matrices, rational polynomials,
//! characteristic polynomials, real-root isolation and certified
//! dominant-root moduli.

mod matrix;
mod poly;
pub(crate) mod radius;
mod sturm;
pub(crate) mod zpoly;

use alloc::vec::Vec;
use core::fmt;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use matrix::IntegerMatrix;
pub(crate) use poly::totient;
pub use poly::UnivariatePolynomial;
pub use radius::{
    circle_census, dominant_modulus, dominant_modulus_with, CircleCensus, RadiusConfig,
    RadiusEstimate, RadiusMethod,
};
pub use sturm::{cauchy_bound, count_real_roots_in, refine_root, sturm_real_roots, RootInterval};

use num_integer::Integer;
use num_traits::{One, Signed};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelError {
    NotSquare {
        rows: usize,
        cols: usize,
    },
    ShapeMismatch {
        expected: usize,
        found: usize,
    },
    ZeroPolynomial,
    ConstantPolynomial,
    EmptyInterval,
    NonPositiveTolerance,
    EmptyList,
    NonPositiveEntry {
        index: usize,
    },
    ToleranceNotReached {
        lower: BigRational,
        upper: BigRational,
    },
    Inconsistent(&'static str),
}

impl fmt::Display for KernelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelError::NotSquare { rows, cols } => {
                write!(f, "matrix is {}x{}, expected square", rows, cols)
            }
            KernelError::ShapeMismatch { expected, found } => {
                write!(f, "shape mismatch: expected {}, found {}", expected, found)
            }
            KernelError::ZeroPolynomial => f.write_str("zero polynomial"),
            KernelError::ConstantPolynomial => f.write_str("polynomial is constant"),
            KernelError::EmptyInterval => f.write_str("interval has lo > hi"),
            KernelError::NonPositiveTolerance => f.write_str("tolerance must be positive"),
            KernelError::EmptyList => f.write_str("empty list"),
            KernelError::NonPositiveEntry { index } => {
                write!(f, "entry {} is not a positive integer", index)
            }
            KernelError::ToleranceNotReached { lower, upper } => write!(
                f,
                "tolerance not reached within the iteration budget; best bracket [{}, {}]",
                lower, upper
            ),
            KernelError::Inconsistent(what) => write!(f, "internal consistency failure: {}", what),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for KernelError {}

/// Least common multiple of a nonempty list of positive integers.
pub fn lcm_all(values: &[BigInt]) -> Result<BigInt, KernelError> {
    if values.is_empty() {
        return Err(KernelError::EmptyList);
    }
    let mut acc = BigInt::one();
    for (index, v) in values.iter().enumerate() {
        if !v.is_positive() {
            return Err(KernelError::NonPositiveEntry { index });
        }
        acc = acc.lcm(v);
    }
    Ok(acc)
}

/// `lcm_all` for machine integers.
pub fn lcm_all_u64(values: &[u64]) -> Result<u64, KernelError> {
    let big: Vec<BigInt> = values.iter().map(|&v| BigInt::from(v)).collect();
    let l = lcm_all(&big)?;
    Ok(num_traits::ToPrimitive::to_u64(&l).expect("lcm of u64 values overflowed"))
}

/// Parses `p/q`, an integer, or a plain decimal like `1e-9` / `0.25` into an
/// exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let mut all = alloc::string::String::from(int_part);
    all.push_str(frac_part);
    let n: BigInt = if all.is_empty() {
        BigInt::from(0)
    } else {
        all.parse().ok()?
    };
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(n);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::Pow::pow(&ten, scale as u32));
    } else {
        r /= BigRational::from_integer(num_traits::Pow::pow(&ten, (-scale) as u32));
    }
    Some(if neg { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lcm_examples() {
        let v = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(lcm_all(&v(&[1, 2])).unwrap(), BigInt::from(2));
        assert_eq!(lcm_all(&v(&[1])).unwrap(), BigInt::from(1));
        assert_eq!(lcm_all(&v(&[4, 6])).unwrap(), BigInt::from(12));
        assert_eq!(lcm_all(&[]), Err(KernelError::EmptyList));
        assert_eq!(
            lcm_all(&v(&[3, 0])),
            Err(KernelError::NonPositiveEntry { index: 1 })
        );
    }

    #[test]
    fn rational_parsing() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(parse_rational("1e-9"), Some(r(1, 1_000_000_000)));
        assert_eq!(parse_rational("-3/6"), Some(r(-1, 2)));
        assert_eq!(parse_rational("0.25"), Some(r(1, 4)));
        assert_eq!(parse_rational("2.5e1"), Some(r(25, 1)));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1/0"), None);
    }
}
