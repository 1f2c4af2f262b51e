//! Dense integer polynomials used internally by the root-counting machinery.
//!
//! Everything here works over `Z[x]` with primitive-part normalisation so the
//! Sturm and Cauchy-index chains never leave the integers. Scaling by a
//! positive constant never changes a sign, which is all those chains need.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ZPoly(Vec<BigInt>);

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ZPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        ZPoly(Vec::new())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> &BigInt {
        self.0
            .last()
            .expect("leading coefficient of the zero polynomial")
    }

    /// Clears denominators of a rational coefficient list and returns the
    /// primitive integer polynomial with the same roots and the same sign
    /// pattern (the multiplier is positive).
    pub fn from_rationals(coeffs: &[BigRational]) -> Self {
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let ints = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::new(ints).primitive()
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.0
            .iter()
            .cloned()
            .map(BigRational::from_integer)
            .collect()
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the positive content. Signs are preserved.
    pub fn primitive(self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self;
        }
        ZPoly(self.0.into_iter().map(|c| c / &g).collect())
    }

    /// Primitive part normalised to a positive leading coefficient.
    pub fn normalized(self) -> Self {
        let p = self.primitive();
        if !p.is_zero() && p.lc().is_negative() {
            -p
        } else {
            p
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// Polynomial with the roots negated: `p(-x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Lowest-order nonzero index (multiplicity of the root at zero).
    pub fn zero_root_multiplicity(&self) -> usize {
        self.0.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.0[k.min(self.0.len())..].to_vec())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.0.get(k).cloned().unwrap_or_default();
            let b = other.0.get(k).cloned().unwrap_or_default();
            out.push(a + b);
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.0.iter().map(|x| x * c).collect())
    }

    /// `v^deg * p(u/v)`, an integer with the sign of `p(u/v)` when `v > 0`.
    pub fn eval_homogeneous(&self, u: &BigInt, v: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut vpow = BigInt::one();
        for c in self.0.iter().rev() {
            acc = acc * u + c * &vpow;
            vpow *= v;
        }
        // Horner above multiplies the leading term by v^0 and the constant by v^deg.
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        self.eval_homogeneous(x.numer(), x.denom())
            .cmp(&BigInt::zero())
    }

    /// Sign immediately to the right of `x`.
    pub fn sign_right_of(&self, x: &BigRational) -> Ordering {
        let mut f = self.clone();
        while !f.is_zero() {
            let s = f.sign_at(x);
            if s != Ordering::Equal {
                return s;
            }
            f = f.derivative();
        }
        Ordering::Equal
    }

    /// Sign immediately to the left of `x`.
    pub fn sign_left_of(&self, x: &BigRational) -> Ordering {
        let mut f = self.clone();
        let mut flip = false;
        while !f.is_zero() {
            let s = f.sign_at(x);
            if s != Ordering::Equal {
                return if flip { s.reverse() } else { s };
            }
            f = f.derivative();
            flip = !flip;
        }
        Ordering::Equal
    }

    pub fn sign_at_pos_inf(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else {
            self.lc().cmp(&BigInt::zero())
        }
    }

    pub fn sign_at_neg_inf(&self) -> Ordering {
        match self.degree() {
            None => Ordering::Equal,
            Some(d) if d % 2 == 0 => self.sign_at_pos_inf(),
            Some(_) => self.sign_at_pos_inf().reverse(),
        }
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn prem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo-division by zero polynomial");
        let Some(da) = self.degree() else {
            return Self::zero();
        };
        if da < db {
            return self.clone();
        }
        let lb = b.lc().clone();
        let mut r = self.0.clone();
        let mut steps = da - db + 1;
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1;
            let lr = r[k].clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (j, bc) in b.0.iter().enumerate() {
                r[k - db + j] -= &lr * bc;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            steps -= 1;
        }
        // Leading zeros may have skipped steps; restore the full multiplier.
        let mut out = Self::new(r);
        for _ in 0..steps {
            out = out.scale(&lb);
        }
        out
    }

    /// A positive multiple of `-(a rem b)`, made primitive. This is the step
    /// of every Sturm-like sequence.
    pub fn neg_rem_positive(&self, b: &Self) -> Self {
        let da = self.degree().unwrap_or(0);
        let db = b.degree().expect("remainder by zero polynomial");
        let r = self.prem(b);
        let odd_power = da >= db && (da - db + 1) % 2 == 1;
        let multiplier_negative = odd_power && b.lc().is_negative();
        let r = if multiplier_negative { r } else { -r };
        r.primitive()
    }

    /// Primitive gcd with positive leading coefficient (primitive PRS).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone().normalized(), other.clone().normalized());
        if a.degree() < b.degree() {
            core::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b).normalized();
            a = b;
            b = r;
        }
        a.normalized()
    }

    /// Exact division over `Q[x]`, rescaled to the primitive integer quotient.
    /// Returns `None` when `b` does not divide `self`.
    pub fn div_exact(&self, b: &Self) -> Option<Self> {
        let db = b.degree()?;
        let Some(da) = self.degree() else {
            return Some(Self::zero());
        };
        if da < db {
            return None;
        }
        let mut r: Vec<BigRational> = self.to_rationals();
        let lb = BigRational::from_integer(b.lc().clone());
        let mut q = vec![BigRational::zero(); da - db + 1];
        for k in (0..=da - db).rev() {
            let c = &r[k + db] / &lb;
            if !c.is_zero() {
                for (j, bc) in b.0.iter().enumerate() {
                    r[k + j] -= &c * BigRational::from_integer(bc.clone());
                }
            }
            q[k] = c;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_rationals(&q))
    }

    /// `p / gcd(p, p')`, primitive with positive leading coefficient.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().is_none_or(|d| d == 0) {
            return self.clone().normalized();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g)
            .expect("gcd divides its argument")
            .normalized()
    }

    pub fn max_bits(&self) -> u64 {
        self.0.iter().map(|c| c.bits()).max().unwrap_or(0)
    }
}

impl core::ops::Neg for ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        ZPoly(self.0.into_iter().map(|c| -c).collect())
    }
}

/// A Sturm-like chain `f0, f1, f2 = -rem(f0, f1), ...` up to positive factors.
pub(crate) fn remainder_chain(f0: ZPoly, f1: ZPoly) -> Vec<ZPoly> {
    let mut chain = vec![f0];
    if f1.is_zero() {
        return chain;
    }
    chain.push(f1);
    loop {
        let n = chain.len();
        let next = chain[n - 2].neg_rem_positive(&chain[n - 1]);
        if next.is_zero() {
            break;
        }
        chain.push(next);
    }
    chain
}

pub(crate) fn sign_variations<I: IntoIterator<Item = Ordering>>(signs: I) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for s in signs {
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Cauchy index of `q/p` over the whole real line, `deg q < deg p`.
pub(crate) fn cauchy_index(p: &ZPoly, q: &ZPoly) -> i64 {
    if q.is_zero() {
        return 0;
    }
    let chain = remainder_chain(p.clone(), q.clone());
    let at_neg = sign_variations(chain.iter().map(ZPoly::sign_at_neg_inf));
    let at_pos = sign_variations(chain.iter().map(ZPoly::sign_at_pos_inf));
    at_neg as i64 - at_pos as i64
}

/// Number of roots of `h` in the open right half-plane. `h` must have no roots
/// on the imaginary axis.
pub(crate) fn right_half_plane_roots(h: &ZPoly) -> usize {
    let Some(m) = h.degree() else {
        return 0;
    };
    if m == 0 {
        return 0;
    }
    // a_0 w^m + a_1 w^{m-1} + ... with a_j = coeff[m - j].
    let a = |j: usize| -> BigInt { h.0[m - j].clone() };
    let mut even = vec![BigInt::zero(); m + 1];
    let mut odd = vec![BigInt::zero(); m + 1];
    for j in 0..=m {
        let sign = if (j / 2) % 2 == 0 { 1 } else { -1 };
        let c = a(j) * BigInt::from(sign);
        if j % 2 == 0 {
            even[m - j] = c;
        } else {
            odd[m - j] = c;
        }
    }
    let index = cauchy_index(&ZPoly::new(even), &ZPoly::new(odd));
    let k = (m as i64 - index) / 2;
    debug_assert!((m as i64 - index) % 2 == 0 && k >= 0);
    k as usize
}

/// Number of distinct real roots of a polynomial (Sturm over the whole line).
pub(crate) fn count_real_roots(p: &ZPoly) -> usize {
    let Some(d) = p.degree() else {
        return 0;
    };
    if d == 0 {
        return 0;
    }
    let sq = p.squarefree_part();
    let chain = remainder_chain(sq.clone(), sq.derivative());
    let at_neg = sign_variations(chain.iter().map(ZPoly::sign_at_neg_inf));
    let at_pos = sign_variations(chain.iter().map(ZPoly::sign_at_pos_inf));
    at_neg - at_pos
}
