//! Sparse multivariate polynomials over the integers.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modular::{convolve_exact, Field};

/// Variable names used by `Display` when there are at most five variables.
pub const VARIABLE_NAMES: [&str; 5] = ["x", "y", "z", "w", "v"];

/// Below this many term pairs a product is formed term by term.
const SCHOOLBOOK_PAIRS: usize = 4096;
/// Largest dense Kronecker image handed to the NTT.
const MAX_PACKED_LEN: usize = 1 << 26;

/// Integer polynomial in a fixed number of variables. Terms are keyed by
/// exponent vector; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        Self::monomial(nvars, alloc::vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    /// The variable `x_i`.
    ///
    /// # Panics
    /// If `i >= nvars`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = alloc::vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, BigInt::one())
    }

    /// # Panics
    /// If the exponent vector does not have `nvars` entries.
    pub fn monomial(nvars: usize, exponents: Vec<u32>, c: BigInt) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        MultiPoly { nvars, terms }
    }

    /// Sums the given terms; repeated exponents are combined.
    ///
    /// # Panics
    /// If an exponent vector does not have `nvars` entries.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Terms in increasing lexicographic order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exponents: &[u32]) -> BigInt {
        self.terms
            .get(exponents)
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Highest power of `x_i`; `None` for zero.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Leading term in lex order (`x_0 > x_1 > …`).
    pub fn leading_term(&self) -> Option<(&[u32], &BigInt)> {
        self.terms
            .iter()
            .next_back()
            .map(|(e, c)| (e.as_slice(), c))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Positive gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides every coefficient by `c`, which must divide all of them.
    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, x)| {
                    debug_assert!((x % c).is_zero());
                    (e.clone(), x / c)
                })
                .collect(),
        }
    }

    /// Content removed and sign fixed so the lex-leading coefficient is
    /// positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading_term().is_some_and(|(_, x)| x.is_negative()) {
            c = -c;
        }
        self.div_scalar_exact(&c)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert_eq!(self.nvars, d.nvars, "variable count mismatch");
        let (lde, ldc) = d.leading_term()?;
        let (lde, ldc) = (lde.to_vec(), ldc.clone());
        let mut r = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((re, rc)) = r.leading_term() {
            if re.iter().zip(&lde).any(|(a, b)| a < b) {
                return None;
            }
            let (qc, rem) = rc.div_rem(&ldc);
            if !rem.is_zero() {
                return None;
            }
            let qe: Vec<u32> = re.iter().zip(&lde).map(|(a, b)| a - b).collect();
            for (de, dc) in &d.terms {
                let e: Vec<u32> = de.iter().zip(&qe).map(|(a, b)| a + b).collect();
                r.add_term(e, -(dc * &qc));
            }
            q.add_term(qe, qc);
        }
        Some(q)
    }

    /// Coefficients of `self` as a polynomial in `x_i` (ascending powers);
    /// each coefficient keeps all variables with `x_i` set to exponent 0.
    pub fn to_univariate(&self, i: usize) -> Vec<MultiPoly> {
        let deg = match self.degree_in(i) {
            None => return Vec::new(),
            Some(d) => d as usize,
        };
        let mut out = alloc::vec![Self::zero(self.nvars); deg + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = core::mem::replace(&mut e2[i], 0) as usize;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    /// Inverse of [`MultiPoly::to_univariate`].
    pub fn from_univariate(nvars: usize, i: usize, coeffs: &[MultiPoly]) -> Self {
        let mut p = Self::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (e, x) in &c.terms {
                let mut e2 = e.clone();
                e2[i] += k as u32;
                p.add_term(e2, x.clone());
            }
        }
        p
    }

    /// Substitutes `values[j]` for `x_j`. All values share a variable count,
    /// which becomes the variable count of the result.
    ///
    /// # Panics
    /// If `values.len() != self.nvars()` or `values` is empty.
    pub fn substitute(&self, values: &[MultiPoly]) -> MultiPoly {
        substitute_all(core::slice::from_ref(self), values).remove(0)
    }

    /// Value at an integer point.
    ///
    /// # Panics
    /// If `point.len() != self.nvars()`.
    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars, "one value per variable");
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                t *= num_traits::pow(x.clone(), k as usize);
            }
            acc += t;
        }
        acc
    }

    /// Coefficients reduced modulo the field prime, in term order and
    /// Montgomery form.
    pub(crate) fn residues(&self, field: &Field) -> Vec<u64> {
        self.terms.values().map(|c| field.from_bigint(c)).collect()
    }

    /// Value at a point of `F_p`, with inputs and output in Montgomery form.
    pub(crate) fn eval_mod(&self, field: &Field, point: &[u64]) -> u64 {
        self.eval_mod_with(field, &self.residues(field), point)
    }

    /// [`MultiPoly::eval_mod`] with precomputed [`MultiPoly::residues`].
    pub(crate) fn eval_mod_with(&self, field: &Field, residues: &[u64], point: &[u64]) -> u64 {
        let powers: Vec<Vec<u64>> = point
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let top = self.degree_in(i).unwrap_or(0) as usize;
                let mut row = Vec::with_capacity(top + 1);
                row.push(field.one());
                for k in 0..top {
                    row.push(field.mul(row[k], x));
                }
                row
            })
            .collect();
        let mut acc = 0u64;
        for (e, &c) in self.terms.keys().zip(residues) {
            let mut t = c;
            for (row, &k) in powers.iter().zip(e) {
                if k > 0 {
                    t = field.mul(t, row[k as usize]);
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }

    /// Formats with the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [&'a str]) -> impl fmt::Display + 'a {
        Named { poly: self, names }
    }

    fn max_coeff_bits(&self) -> u64 {
        self.terms.values().map(|c| c.bits()).max().unwrap_or(0)
    }
}

/// [`MultiPoly::substitute`] for several polynomials, sharing the products
/// of powers between them.
///
/// # Panics
/// If `values` is empty or some polynomial has a variable count other than
/// `values.len()`.
pub fn substitute_all(polys: &[MultiPoly], values: &[MultiPoly]) -> Vec<MultiPoly> {
    let m = values[0].nvars;
    let mut cache = PowerCache::new(values);
    polys
        .iter()
        .map(|p| {
            assert_eq!(values.len(), p.nvars, "one value per variable");
            let mut out = MultiPoly::zero(m);
            for (e, c) in &p.terms {
                let mono = cache.monomial(e);
                out = &out + &mono.scale(c);
            }
            out
        })
        .collect()
}

/// Memoised products of powers of the substituted values.
struct PowerCache<'a> {
    values: &'a [MultiPoly],
    powers: Vec<Vec<MultiPoly>>,
    monomials: BTreeMap<Vec<u32>, MultiPoly>,
}

impl<'a> PowerCache<'a> {
    fn new(values: &'a [MultiPoly]) -> Self {
        let m = values[0].nvars;
        PowerCache {
            values,
            powers: values
                .iter()
                .map(|_| alloc::vec![MultiPoly::one(m)])
                .collect(),
            monomials: BTreeMap::new(),
        }
    }

    fn power(&mut self, j: usize, k: u32) -> MultiPoly {
        while self.powers[j].len() <= k as usize {
            let next = &self.powers[j][self.powers[j].len() - 1] * &self.values[j];
            self.powers[j].push(next);
        }
        self.powers[j][k as usize].clone()
    }

    fn monomial(&mut self, e: &[u32]) -> MultiPoly {
        if let Some(p) = self.monomials.get(e) {
            return p.clone();
        }
        // peel off the last nonzero exponent and reuse the shorter prefix
        let last = match e.iter().rposition(|&k| k > 0) {
            None => return MultiPoly::one(self.values[0].nvars),
            Some(j) => j,
        };
        let mut prefix = e.to_vec();
        prefix[last] = 0;
        let head = self.monomial(&prefix);
        let p = if head.is_constant() && head.coeff(&alloc::vec![0; head.nvars]).is_one() {
            self.power(last, e[last])
        } else {
            &head * &self.power(last, e[last])
        };
        self.monomials.insert(e.to_vec(), p.clone());
        p
    }
}

struct Named<'a> {
    poly: &'a MultiPoly,
    names: &'a [&'a str],
}

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mag = c.abs();
            let mut first = true;
            if !mag.is_one() || e.iter().all(|&x| x == 0) {
                write!(f, "{}", mag)?;
                first = false;
            }
            for (i, &p) in e.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                match self.names.get(i) {
                    Some(n) => f.write_str(n)?,
                    None => write!(f, "x{}", i)?,
                }
                if p > 1 {
                    write!(f, "^{}", p)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nvars <= VARIABLE_NAMES.len() {
            write!(f, "{}", self.display_with(&VARIABLE_NAMES))
        } else {
            write!(f, "{}", self.display_with(&[]))
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        if self.len().saturating_mul(rhs.len()) > SCHOOLBOOK_PAIRS {
            if let Some(p) = mul_packed(self, rhs) {
                return p;
            }
        }
        mul_schoolbook(self, rhs)
    }
}

fn mul_schoolbook(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let mut out = MultiPoly::zero(a.nvars);
    for (ea, ca) in &a.terms {
        for (eb, cb) in &b.terms {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            out.add_term(e, ca * cb);
        }
    }
    out
}

/// Kronecker packing into one dense index, exact convolution over word
/// primes, CRT back to integers. For two homogeneous factors the last
/// variable is implied by the total degree and is left out of the packing.
fn mul_packed(a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
    let n = a.nvars;
    let implied = if n >= 2 && a.is_homogeneous() && b.is_homogeneous() {
        Some(a.total_degree()? + b.total_degree()?)
    } else {
        None
    };
    let packed = if implied.is_some() { n - 1 } else { n };
    let mut strides = Vec::with_capacity(packed);
    let mut radices = Vec::with_capacity(packed);
    let mut len: usize = 1;
    for i in 0..packed {
        let r = (a.degree_in(i)? + b.degree_in(i)? + 1) as usize;
        strides.push(len);
        radices.push(r);
        len = len.checked_mul(r)?;
        if len > MAX_PACKED_LEN {
            return None;
        }
    }
    let index = |e: &[u32]| -> usize { (0..packed).map(|i| e[i] as usize * strides[i]).sum() };
    let pa: Vec<(usize, &BigInt)> = a.terms.iter().map(|(e, c)| (index(e), c)).collect();
    let pb: Vec<(usize, &BigInt)> = b.terms.iter().map(|(e, c)| (index(e), c)).collect();
    let shorter = a.len().min(b.len()) as u64;
    let bound_bits =
        a.max_coeff_bits() + b.max_coeff_bits() + (64 - shorter.leading_zeros() as u64) + 1;
    let conv = convolve_exact(&pa, &pb, len, bound_bits);
    let mut terms = BTreeMap::new();
    for (idx, c) in conv {
        let mut e = alloc::vec![0u32; n];
        let mut rest = idx;
        for i in 0..packed {
            e[i] = (rest % radices[i]) as u32;
            rest /= radices[i];
        }
        if let Some(d) = implied {
            let s: u32 = e[..packed].iter().sum();
            e[n - 1] = d - s;
        }
        terms.insert(e, c);
    }
    Some(MultiPoly { nvars: n, terms })
}
