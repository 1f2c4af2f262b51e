use alloc::vec::Vec;
use core::cmp::Ordering;

use num_rational::BigRational;
use num_traits::Zero;

use super::zpoly::{remainder_chain, sign_variations, ZPoly};
use super::{KernelError, UnivariatePolynomial};

/// Closed rational interval holding exactly one real root. `lo == hi` when
/// the root is rational and was hit exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

pub(crate) struct SturmChain {
    pub poly: ZPoly,
    chain: Vec<ZPoly>,
}

impl SturmChain {
    /// Chain for the squarefree part of `p`.
    pub fn new(p: &ZPoly) -> Self {
        let poly = p.squarefree_part();
        let chain = remainder_chain(poly.clone(), poly.derivative());
        SturmChain { poly, chain }
    }

    fn variations_right_of(&self, x: &BigRational) -> usize {
        sign_variations(self.chain.iter().map(|f| f.sign_right_of(x)))
    }

    fn variations_left_of(&self, x: &BigRational) -> usize {
        sign_variations(self.chain.iter().map(|f| f.sign_left_of(x)))
    }

    /// Distinct roots in the open interval `(a, b)`.
    pub fn count_open(&self, a: &BigRational, b: &BigRational) -> usize {
        if a >= b {
            return 0;
        }
        self.variations_right_of(a) - self.variations_left_of(b)
    }

    pub fn is_root(&self, x: &BigRational) -> bool {
        self.poly.sign_at(x) == Ordering::Equal
    }

    /// Isolating intervals for every real root in `[lo, hi]`, ascending.
    pub fn isolate(&self, lo: &BigRational, hi: &BigRational) -> Vec<RootInterval> {
        let mut out = Vec::new();
        if self.poly.degree().is_none_or(|d| d == 0) {
            return out;
        }
        if self.is_root(lo) {
            out.push(RootInterval {
                lo: lo.clone(),
                hi: lo.clone(),
            });
        }
        if lo < hi {
            self.isolate_open(lo.clone(), hi.clone(), &mut out);
            if self.is_root(hi) {
                out.push(RootInterval {
                    lo: hi.clone(),
                    hi: hi.clone(),
                });
            }
        }
        out
    }

    /// Pushes isolating intervals for roots in the open interval `(a, b)`.
    /// Every emitted non-degenerate interval has non-root endpoints.
    fn isolate_open(&self, a: BigRational, b: BigRational, out: &mut Vec<RootInterval>) {
        let mut stack = alloc::vec![(a, b)];
        let mut found = Vec::new();
        let two = BigRational::from_integer(2.into());
        while let Some((a, b)) = stack.pop() {
            let n = self.count_open(&a, &b);
            if n == 0 {
                continue;
            }
            let a_root = self.is_root(&a);
            let b_root = self.is_root(&b);
            if n == 1 && !a_root && !b_root {
                found.push(RootInterval { lo: a, hi: b });
                continue;
            }
            let m = (&a + &b) / &two;
            if self.is_root(&m) {
                found.push(RootInterval {
                    lo: m.clone(),
                    hi: m.clone(),
                });
            }
            stack.push((a, m.clone()));
            stack.push((m, b));
        }
        found.sort_by(|x, y| x.lo.cmp(&y.lo));
        // neighbours may share a (non-root) split point; pull them apart
        for i in 1..found.len() {
            while found[i - 1].hi >= found[i].lo {
                let left = self.halve(&found[i - 1]);
                let right = self.halve(&found[i]);
                found[i - 1] = left;
                found[i] = right;
            }
        }
        out.extend(found);
    }

    /// One sign-guided bisection step on an isolating interval.
    fn halve(&self, iv: &RootInterval) -> RootInterval {
        if iv.lo == iv.hi {
            return iv.clone();
        }
        let m = (&iv.lo + &iv.hi) / BigRational::from_integer(2.into());
        let s = self.poly.sign_at(&m);
        if s == Ordering::Equal {
            RootInterval {
                lo: m.clone(),
                hi: m,
            }
        } else if s == self.poly.sign_at(&iv.lo) {
            RootInterval {
                lo: m,
                hi: iv.hi.clone(),
            }
        } else {
            RootInterval {
                lo: iv.lo.clone(),
                hi: m,
            }
        }
    }

    /// Shrinks an isolating interval (non-root endpoints) to width `<= tol`.
    pub fn refine(&self, iv: &RootInterval, tol: &BigRational) -> RootInterval {
        let mut lo = iv.lo.clone();
        let mut hi = iv.hi.clone();
        let two = BigRational::from_integer(2.into());
        let s_lo = self.poly.sign_at(&lo);
        while &(&hi - &lo) > tol {
            let m = (&lo + &hi) / &two;
            let s = self.poly.sign_at(&m);
            if s == Ordering::Equal {
                return RootInterval {
                    lo: m.clone(),
                    hi: m,
                };
            }
            if s == s_lo {
                lo = m;
            } else {
                hi = m;
            }
        }
        RootInterval { lo, hi }
    }
}

/// Isolates every real root of `p` in `[lo, hi]` with Sturm sequences on the
/// squarefree part of `p`.
pub fn sturm_real_roots(
    p: &UnivariatePolynomial,
    lo: &BigRational,
    hi: &BigRational,
) -> Result<Vec<RootInterval>, KernelError> {
    if lo > hi {
        return Err(KernelError::EmptyInterval);
    }
    if p.is_zero() {
        return Err(KernelError::ZeroPolynomial);
    }
    Ok(SturmChain::new(&p.to_zpoly()).isolate(lo, hi))
}

/// Shrinks an isolating interval from [`sturm_real_roots`] to width `<= tol`.
pub fn refine_root(
    p: &UnivariatePolynomial,
    interval: &RootInterval,
    tol: &BigRational,
) -> Result<RootInterval, KernelError> {
    if p.is_zero() {
        return Err(KernelError::ZeroPolynomial);
    }
    if interval.lo == interval.hi {
        return Ok(interval.clone());
    }
    Ok(SturmChain::new(&p.to_zpoly()).refine(interval, tol))
}

/// Number of distinct real roots of `p` in the closed interval `[lo, hi]`.
pub fn count_real_roots_in(
    p: &UnivariatePolynomial,
    lo: &BigRational,
    hi: &BigRational,
) -> Result<usize, KernelError> {
    if lo > hi {
        return Err(KernelError::EmptyInterval);
    }
    if p.is_zero() {
        return Err(KernelError::ZeroPolynomial);
    }
    let chain = SturmChain::new(&p.to_zpoly());
    if chain.poly.degree().is_none_or(|d| d == 0) {
        return Ok(0);
    }
    let ends = usize::from(chain.is_root(lo)) + usize::from(lo != hi && chain.is_root(hi));
    Ok(chain.count_open(lo, hi) + ends)
}

/// Cauchy-type bound: every root has modulus `< 1 + max |a_k / a_n|`.
pub fn cauchy_bound(p: &UnivariatePolynomial) -> Result<BigRational, KernelError> {
    let lead = p.leading().ok_or(KernelError::ZeroPolynomial)?;
    let mut m = BigRational::zero();
    for c in &p.coeffs()[..p.coeffs().len() - 1] {
        let r = num_traits::Signed::abs(&(c / lead));
        if r > m {
            m = r;
        }
    }
    Ok(m + BigRational::from_integer(1.into()))
}
