//! Word-size prime fields: Montgomery arithmetic, NTT convolution and CRT
//! reconstruction for exact big-coefficient products.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

/// Montgomery form modulo an odd prime `p < 2^62`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Field {
    pub p: u64,
    /// `-p^{-1} mod 2^64`
    pinv: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl Field {
    pub fn new(p: u64) -> Self {
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Field {
            p,
            pinv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pinv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    pub fn from_mont(&self, a: u64) -> u64 {
        self.reduce(a as u128)
    }

    pub fn one(&self) -> u64 {
        self.to_mont(1)
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    /// Residue of a big integer, in Montgomery form.
    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        let (sign, mag) = x.to_u64_digits();
        let mut acc = 0u64;
        let base = self.to_mont(((1u128 << 64) % self.p as u128) as u64);
        for d in mag.iter().rev() {
            acc = self.add(self.mul(acc, base), self.to_mont(*d));
        }
        if sign == Sign::Minus {
            self.sub(0, acc)
        } else {
            acc
        }
    }
}

fn mulmod_plain(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_plain(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_plain(acc, b, m);
        }
        b = mulmod_plain(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = powmod_plain(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_plain(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Largest exponent `k` with `2^k | p − 1` for the NTT primes.
pub(crate) const NTT_TWO_ADICITY: u32 = 32;

/// The first `count` primes of the form `c·2^32 + 1` below `2^62`,
/// descending.
pub(crate) fn ntt_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c: u64 = (1u64 << 30) - 1;
    while out.len() < count && c > 0 {
        let p = (c << NTT_TWO_ADICITY) + 1;
        if is_prime_u64(p) {
            out.push(p);
        }
        c -= 1;
    }
    out
}

/// Primitive `len`-th root of unity (Montgomery form), `len` a power of two.
fn root_of_unity(f: &Field, len: usize) -> u64 {
    let p = f.p;
    let mut g = 3u64;
    // a quadratic non-residue has the full 2-power order
    while powmod_plain(g, (p - 1) / 2, p) != p - 1 {
        g += 1;
    }
    f.pow(f.to_mont(g), (p - 1) / len as u64)
}

fn ntt(f: &Field, a: &mut [u64], invert: bool) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    if n < 2 {
        return;
    }
    let mut w = root_of_unity(f, n);
    if invert {
        w = f.inv(w);
    }
    // twiddles for the full length; level `len` uses every (n/len)-th one
    let mut ws = Vec::with_capacity(n / 2);
    let mut cur = f.one();
    for _ in 0..n / 2 {
        ws.push(cur);
        cur = f.mul(cur, w);
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = n / len;
        for block in a.chunks_exact_mut(len) {
            let (lo, hi) = block.split_at_mut(half);
            for (k, (u, v)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                let t = f.mul(*v, ws[k * step]);
                *v = f.sub(*u, t);
                *u = f.add(*u, t);
            }
        }
        len <<= 1;
    }
    if invert {
        let ninv = f.inv(f.to_mont(n as u64));
        for x in a.iter_mut() {
            *x = f.mul(*x, ninv);
        }
    }
}

/// Acyclic convolution of sparse integer vectors given as `(index, value)`
/// pairs, exact as long as every output coefficient is below `2^bound_bits`
/// in absolute value. Returns the nonzero outputs.
pub(crate) fn convolve_exact(
    a: &[(usize, &BigInt)],
    b: &[(usize, &BigInt)],
    out_len: usize,
    bound_bits: u64,
) -> Vec<(usize, BigInt)> {
    let size = out_len.next_power_of_two();
    assert!(
        size.trailing_zeros() <= NTT_TWO_ADICITY,
        "convolution too long for the NTT primes"
    );
    let primes = ntt_primes((bound_bits as usize + 2) / 61 + 1);
    let fields: Vec<Field> = primes.iter().map(|&p| Field::new(p)).collect();
    let mut residues: Vec<Vec<u64>> = Vec::with_capacity(fields.len());
    for f in &fields {
        let mut fa = alloc::vec![0u64; size];
        let mut fb = alloc::vec![0u64; size];
        for &(i, x) in a {
            fa[i] = f.from_bigint(x);
        }
        for &(i, x) in b {
            fb[i] = f.from_bigint(x);
        }
        ntt(f, &mut fa, false);
        ntt(f, &mut fb, false);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = f.mul(*x, *y);
        }
        ntt(f, &mut fa, true);
        for x in fa.iter_mut() {
            *x = f.from_mont(*x);
        }
        residues.push(fa);
    }
    let crt = Crt::new(&primes);
    let mut out = Vec::new();
    let mut digits = alloc::vec![0u64; primes.len()];
    for i in 0..out_len {
        if residues.iter().all(|r| r[i] == 0) {
            continue;
        }
        for (d, r) in digits.iter_mut().zip(&residues) {
            *d = r[i];
        }
        let v = crt.reconstruct(&digits);
        if !v.is_zero() {
            out.push((i, v));
        }
    }
    out
}

/// Garner reconstruction into the symmetric range.
pub(crate) struct Crt {
    primes: Vec<u64>,
    fields: Vec<Field>,
    /// `radix[i][j] = p_j mod p_i` in Montgomery form, `j < i`
    radix: Vec<Vec<u64>>,
    /// `(p_0 ⋯ p_{i−1})^{-1} mod p_i`, Montgomery form
    inverses: Vec<u64>,
    modulus: BigInt,
    half: BigInt,
}

impl Crt {
    pub fn new(primes: &[u64]) -> Self {
        let fields: Vec<Field> = primes.iter().map(|&p| Field::new(p)).collect();
        let mut radix = Vec::with_capacity(primes.len());
        let mut inverses = Vec::with_capacity(primes.len());
        for (i, f) in fields.iter().enumerate() {
            let row: Vec<u64> = primes[..i].iter().map(|&q| f.to_mont(q)).collect();
            let prod = row.iter().fold(f.one(), |acc, &q| f.mul(acc, q));
            inverses.push(f.inv(prod));
            radix.push(row);
        }
        let modulus: BigInt = primes.iter().fold(BigUint::one(), |acc, &p| acc * p).into();
        let half = &modulus >> 1;
        Crt {
            primes: primes.to_vec(),
            fields,
            radix,
            inverses,
            modulus,
            half,
        }
    }

    /// `residues` in plain (non-Montgomery) form.
    pub fn reconstruct(&self, residues: &[u64]) -> BigInt {
        let k = self.primes.len();
        let mut mixed = alloc::vec![0u64; k];
        for i in 0..k {
            let f = &self.fields[i];
            // Horner evaluation of the mixed-radix prefix modulo p_i
            let mut acc = 0u64;
            for j in (0..i).rev() {
                acc = f.add(f.mul(acc, self.radix[i][j]), f.to_mont(mixed[j]));
            }
            let diff = f.sub(f.to_mont(residues[i]), acc);
            mixed[i] = f.from_mont(f.mul(diff, self.inverses[i]));
        }
        let mut v = BigInt::zero();
        for i in (0..k).rev() {
            v = v * self.primes[i] + mixed[i];
        }
        if v > self.half {
            v -= &self.modulus;
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_have_the_right_shape() {
        for p in ntt_primes(5) {
            assert!(is_prime_u64(p));
            assert_eq!((p - 1) % (1u64 << 32), 0);
            assert!(p < 1u64 << 62);
        }
        assert!(!is_prime_u64(561));
        assert!(is_prime_u64(1_000_000_007));
    }

    #[test]
    fn montgomery_roundtrip() {
        let f = Field::new(ntt_primes(1)[0]);
        let a = f.to_mont(123_456_789);
        let b = f.to_mont(987_654_321);
        assert_eq!(
            f.from_mont(f.mul(a, b)),
            mulmod_plain(123_456_789, 987_654_321, f.p)
        );
        assert_eq!(f.from_mont(f.mul(a, f.inv(a))), 1);
        let big = BigInt::from(-5) * BigInt::from(f.p) - 7;
        assert_eq!(f.from_mont(f.from_bigint(&big)), f.p - 7);
    }

    #[test]
    fn convolution_matches_schoolbook() {
        let a: Vec<BigInt> = (0..50)
            .map(|i| BigInt::from(i * i - 300) << (i * 3))
            .collect();
        let b: Vec<BigInt> = (0..40).map(|i| BigInt::from(17 - i) << (i * 5)).collect();
        let mut want = alloc::vec![BigInt::zero(); 89];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                want[i + j] += x * y;
            }
        }
        let pa: Vec<(usize, &BigInt)> = a.iter().enumerate().collect();
        let pb: Vec<(usize, &BigInt)> = b.iter().enumerate().collect();
        let got = convolve_exact(&pa, &pb, 89, 420);
        let mut dense = alloc::vec![BigInt::zero(); 89];
        for (i, v) in got {
            dense[i] = v;
        }
        assert_eq!(dense, want);
    }
}
