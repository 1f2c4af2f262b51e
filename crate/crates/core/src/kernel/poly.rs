use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::zpoly::ZPoly;

/// Univariate polynomial with exact rational coefficients, ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnivariatePolynomial {
    coeffs: Vec<BigRational>,
}

impl UnivariatePolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UnivariatePolynomial { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(
            coeffs
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect(),
        )
    }

    pub fn zero() -> Self {
        UnivariatePolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_integers(&[1])
    }

    /// `x`
    pub fn x() -> Self {
        Self::from_integers(&[0, 1])
    }

    /// `x - root`
    pub fn linear(root: BigRational) -> Self {
        Self::new(vec![-root, BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// Integer coefficients, if every coefficient is integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let Some(da) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if da < dd {
            return (Self::zero(), self.clone());
        }
        let lead_inv = d.coeffs[dd].recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); da - dd + 1];
        for k in (0..=da - dd).rev() {
            let c = &r[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().is_none_or(|d| d == 0) {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Number of times `d` divides `self` exactly, and the cofactor.
    pub fn divide_out(&self, d: &Self) -> (u32, Self) {
        let mut count = 0;
        let mut cur = self.clone();
        if d.degree().is_none_or(|k| k == 0) || cur.is_zero() {
            return (0, cur);
        }
        loop {
            let (q, r) = cur.div_rem(d);
            if !r.is_zero() {
                return (count, cur);
            }
            count += 1;
            cur = q;
        }
    }

    /// The `n`-th cyclotomic polynomial, as the Moebius product of `x^d - 1`.
    pub fn cyclotomic(n: u32) -> Self {
        assert!(n >= 1, "cyclotomic index must be positive");
        let x_pow_minus_one = |d: u32| {
            let mut c = vec![0i64; d as usize + 1];
            c[0] = -1;
            c[d as usize] = 1;
            Self::from_integers(&c)
        };
        let mut num = Self::one();
        let mut den = Self::one();
        for d in 1..=n {
            if n.is_multiple_of(d) {
                match moebius(n / d) {
                    1 => num = &num * &x_pow_minus_one(d),
                    -1 => den = &den * &x_pow_minus_one(d),
                    _ => {}
                }
            }
        }
        num.div_rem(&den).0
    }

    pub(crate) fn to_zpoly(&self) -> ZPoly {
        ZPoly::from_rationals(&self.coeffs)
    }
}

impl Add for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn add(self, rhs: &UnivariatePolynomial) -> UnivariatePolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UnivariatePolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn sub(self, rhs: &UnivariatePolynomial) -> UnivariatePolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UnivariatePolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn mul(self, rhs: &UnivariatePolynomial) -> UnivariatePolynomial {
        if self.is_zero() || rhs.is_zero() {
            return UnivariatePolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UnivariatePolynomial::new(out)
    }
}

impl Neg for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn neg(self) -> UnivariatePolynomial {
        UnivariatePolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for UnivariatePolynomial {
            type Output = UnivariatePolynomial;
            fn $m(self, rhs: UnivariatePolynomial) -> UnivariatePolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn neg(self) -> UnivariatePolynomial {
        -&self
    }
}

impl fmt::Display for UnivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag.is_one();
            if !unit || k == 0 {
                write!(f, "{}", mag)?;
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{}", k)?,
            }
        }
        Ok(())
    }
}

fn moebius(mut n: u32) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Euler's totient.
pub(crate) fn totient(mut n: u32) -> u32 {
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn display_is_readable() {
        let p = UnivariatePolynomial::from_integers(&[1, -1, -1, 1]);
        assert_eq!(p.to_string(), "x^3 - x^2 - x + 1");
        assert_eq!(
            UnivariatePolynomial::from_integers(&[-2, 1]).to_string(),
            "x - 2"
        );
    }

    #[test]
    fn cyclotomic_small_cases() {
        assert_eq!(
            UnivariatePolynomial::cyclotomic(1),
            UnivariatePolynomial::from_integers(&[-1, 1])
        );
        assert_eq!(
            UnivariatePolynomial::cyclotomic(2),
            UnivariatePolynomial::from_integers(&[1, 1])
        );
        assert_eq!(
            UnivariatePolynomial::cyclotomic(6),
            UnivariatePolynomial::from_integers(&[1, -1, 1])
        );
        assert_eq!(
            UnivariatePolynomial::cyclotomic(12),
            UnivariatePolynomial::from_integers(&[1, 0, -1, 0, 1])
        );
    }

    #[test]
    fn divide_out_counts_multiplicity() {
        let p = UnivariatePolynomial::from_integers(&[1, -1, -1, 1]);
        let (k, rest) = p.divide_out(&UnivariatePolynomial::from_integers(&[-1, 1]));
        assert_eq!(k, 2);
        assert_eq!(rest, UnivariatePolynomial::from_integers(&[1, 1]));
    }

    #[test]
    fn gcd_and_squarefree() {
        let p = UnivariatePolynomial::from_integers(&[1, -1, -1, 1]);
        assert_eq!(
            p.squarefree_part(),
            UnivariatePolynomial::from_integers(&[-1, 0, 1])
        );
        let a = UnivariatePolynomial::from_integers(&[-1, 0, 1]);
        let b = UnivariatePolynomial::from_integers(&[2, -2]);
        assert_eq!(a.gcd(&b), UnivariatePolynomial::from_integers(&[-1, 1]));
    }
}
