//! Multivariate integer gcd: recursive content / primitive part with
//! subresultant remainder sequences in the main variable, plus a fast
//! modular certificate of coprimality for homogeneous inputs.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::modular::{ntt_primes, Field};
use super::multipoly::MultiPoly;

/// Gcd normalised to a positive lex-leading coefficient; zero only when
/// both inputs are zero.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    normalize(gcd_rec(a, b))
}

/// Gcd of a list; zero for an empty or all-zero list.
pub fn gcd_all(polys: &[MultiPoly]) -> MultiPoly {
    let nvars = polys.first().map_or(0, |p| p.nvars());
    let mut g = MultiPoly::zero(nvars);
    for p in polys {
        g = gcd_rec(&g, p);
        if g.is_constant() && !g.is_zero() {
            break;
        }
    }
    normalize(g)
}

/// Gcd of the nonzero entries of a list of homogeneous polynomials, trying
/// the modular certificate before the exact computation.
pub fn gcd_homogeneous(polys: &[MultiPoly]) -> MultiPoly {
    let nonzero: Vec<MultiPoly> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    let nvars = polys.first().map_or(0, |p| p.nvars());
    if nonzero.len() >= 2 && certify_coprime(&nonzero) {
        let c = nonzero
            .iter()
            .fold(BigInt::zero(), |g, p| g.gcd(&p.content()));
        return MultiPoly::constant(nvars, c);
    }
    gcd_all(&nonzero)
}

fn normalize(g: MultiPoly) -> MultiPoly {
    match g.leading_term() {
        Some((_, c)) if c.is_negative() => -&g,
        _ => g,
    }
}

/// Highest-index variable occurring in `p`.
fn main_var(p: &MultiPoly) -> Option<usize> {
    (0..p.nvars())
        .rev()
        .find(|&i| p.degree_in(i).is_some_and(|d| d > 0))
}

fn gcd_rec(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let nvars = a.nvars();
    let v = match (main_var(a), main_var(b)) {
        (None, None) => return MultiPoly::constant(nvars, a.content().gcd(&b.content())),
        (x, y) => x.max(y).unwrap(),
    };
    let da = a.degree_in(v).unwrap();
    let db = b.degree_in(v).unwrap();
    if da == 0 {
        return gcd_rec(a, &content_in(b, v));
    }
    if db == 0 {
        return gcd_rec(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd_rec(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = subresultant_gcd(pa.to_univariate(v), pb.to_univariate(v));
    let g = MultiPoly::from_univariate(nvars, v, &g);
    let g = g.div_exact(&content_in(&g, v)).expect("content divides");
    &c * &g
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `x_v`.
fn content_in(p: &MultiPoly, v: usize) -> MultiPoly {
    let coeffs = p.to_univariate(v);
    let mut g = MultiPoly::zero(p.nvars());
    let mut nonzero = coeffs.iter().filter(|c| !c.is_zero());
    for c in nonzero.by_ref() {
        g = gcd_rec(&g, c);
        if g.is_constant() {
            break;
        }
    }
    if g.is_constant() {
        let mut k = g.content();
        for c in nonzero {
            k = k.gcd(&c.content());
        }
        return MultiPoly::constant(p.nvars(), k);
    }
    normalize(g)
}

type Upoly = Vec<MultiPoly>;

fn trim(p: &mut Upoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Pseudo-remainder `lc(b)^(deg a − deg b + 1)·a mod b`.
fn prem(a: &Upoly, b: &Upoly) -> Upoly {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.clone();
    trim(&mut r);
    let mut e = (a.len() - 1 - db + 1) as i64;
    while r.len() > db {
        let dr = r.len() - 1;
        let t = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[j + shift] = &r[j + shift] - &(&t * bc);
        }
        debug_assert!(r[dr].is_zero());
        trim(&mut r);
        e -= 1;
    }
    if e > 0 && !r.is_empty() {
        let f = lb.pow(e as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

/// Last nonzero subresultant of two primitive univariate polynomials with
/// polynomial coefficients (the gcd up to a content factor).
fn subresultant_gcd(mut a: Upoly, mut b: Upoly) -> Upoly {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        core::mem::swap(&mut a, &mut b);
    }
    let nvars = a[0].nvars();
    let mut g = MultiPoly::one(nvars);
    let mut h = MultiPoly::one(nvars);
    loop {
        let delta = (a.len() - b.len()) as u32;
        let r = prem(&a, &b);
        if r.is_empty() {
            return b;
        }
        if r.len() == 1 {
            return alloc::vec![MultiPoly::one(nvars)];
        }
        let divisor = &g * &h.pow(delta);
        a = b;
        b = r
            .iter()
            .map(|c| {
                c.div_exact(&divisor)
                    .expect("subresultant division is exact")
            })
            .collect();
        g = a[a.len() - 1].clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant division is exact")
        };
    }
}

/// Deterministic splitmix64 stream for the certificate's random points.
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

const CERTIFICATE_ATTEMPTS: usize = 3;

/// `true` only when the homogeneous polynomials provably share no
/// non-constant factor: restricted to a random line `P + tQ` over `F_p`
/// they have gcd 1, and one of them does not vanish at `Q` modulo `p`, so
/// any common factor would keep its full degree on that line.
pub(crate) fn certify_coprime(polys: &[MultiPoly]) -> bool {
    if polys.iter().any(|p| !p.is_homogeneous()) {
        return false;
    }
    let nvars = polys[0].nvars();
    let primes = ntt_primes(CERTIFICATE_ATTEMPTS);
    let mut rng = SplitMix(0x5EED_CAFE);
    for &p in &primes {
        let f = Field::new(p);
        let pt: Vec<u64> = (0..nvars).map(|_| f.to_mont(rng.next() % p)).collect();
        let dir: Vec<u64> = (0..nvars).map(|_| f.to_mont(rng.next() % p)).collect();
        if polys.iter().all(|q| q.eval_mod(&f, &dir) == 0) {
            continue;
        }
        let mut g: Option<Vec<u64>> = None;
        for q in polys {
            let r = restrict_to_line(&f, q, &pt, &dir);
            g = Some(match g {
                None => r,
                Some(g) => upoly_gcd_mod(&f, g, r),
            });
            if g.as_ref().is_some_and(|g| g.len() == 1 && g[0] != 0) {
                return true;
            }
        }
    }
    false
}

/// Coefficients in `t` of `q(P + tQ)` (Montgomery form), by evaluation at
/// `deg + 1` points and Newton interpolation.
fn restrict_to_line(f: &Field, q: &MultiPoly, pt: &[u64], dir: &[u64]) -> Vec<u64> {
    let d = q.total_degree().unwrap_or(0) as usize;
    let residues = q.residues(f);
    let nodes: Vec<u64> = (0..=d as u64).map(|k| f.to_mont(k)).collect();
    let values: Vec<u64> = nodes
        .iter()
        .map(|&t| {
            let x: Vec<u64> = pt
                .iter()
                .zip(dir)
                .map(|(&a, &b)| f.add(a, f.mul(t, b)))
                .collect();
            q.eval_mod_with(f, &residues, &x)
        })
        .collect();
    let mut out = interpolate(f, &nodes, &values);
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

/// Newton interpolation, returning monomial-basis coefficients.
fn interpolate(f: &Field, xs: &[u64], ys: &[u64]) -> Vec<u64> {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = f.sub(coef[i], coef[i - 1]);
            let den = f.sub(xs[i], xs[i - j]);
            coef[i] = f.mul(num, f.inv(den));
        }
    }
    let mut poly = alloc::vec![0u64; n];
    for i in (0..n).rev() {
        // poly = poly·(t − xs[i]) + coef[i]
        let mut next = alloc::vec![0u64; n];
        for k in 0..n - 1 {
            next[k + 1] = f.add(next[k + 1], poly[k]);
            next[k] = f.sub(next[k], f.mul(poly[k], xs[i]));
        }
        next[0] = f.add(next[0], coef[i]);
        poly = next;
    }
    poly
}

fn upoly_gcd_mod(f: &Field, mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
    let strip = |v: &mut Vec<u64>| {
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
    };
    strip(&mut a);
    strip(&mut b);
    loop {
        if b.len() == 1 && b[0] == 0 {
            return a;
        }
        if a.len() < b.len() {
            core::mem::swap(&mut a, &mut b);
            continue;
        }
        let inv = f.inv(*b.last().unwrap());
        while a.len() >= b.len() && !(a.len() == 1 && a[0] == 0) {
            let q = f.mul(*a.last().unwrap(), inv);
            let shift = a.len() - b.len();
            for (j, &bc) in b.iter().enumerate() {
                a[j + shift] = f.sub(a[j + shift], f.mul(q, bc));
            }
            a.pop();
            if a.is_empty() {
                a.push(0);
            }
            strip(&mut a);
            if a.len() < b.len() {
                break;
            }
        }
        core::mem::swap(&mut a, &mut b);
    }
}
