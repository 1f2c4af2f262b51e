//! Degree recursions for compositions of point reflections driven by an
//! N-periodic successor function.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::companion::{build_companion, CompanionError};
use crate::kernel::{
    circle_census, dominant_modulus, KernelError, RadiusEstimate, UnivariatePolynomial,
};

/// Value of a successor: a later reflection index, or never.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Successor {
    Finite(u64),
    Infinity,
}

impl fmt::Display for Successor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Successor::Finite(v) => write!(f, "{}", v),
            Successor::Infinity => f.write_str("inf"),
        }
    }
}

/// τ on `1..=N`, extended by `τ(k + N) = τ(k) + N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SuccessorFunction {
    period: u64,
    successors: Vec<Successor>,
}

/// A violated admissibility condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ZeroPeriod,
    WrongLength { period: u64, found: usize },
    TooClose { k: u64, value: u64 },
    NotInjective { k1: u64, k2: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroPeriod => f.write_str("period N must be positive"),
            Violation::WrongLength { period, found } => {
                write!(f, "expected {} successor values, found {}", period, found)
            }
            Violation::TooClose { k, value } => {
                write!(f, "tau({}) = {} violates tau(k) >= k + 2", k, value)
            }
            Violation::NotInjective { k1, k2 } => write!(
                f,
                "tau({}) and tau({}) agree modulo N, so the extension is not injective",
                k1, k2
            ),
        }
    }
}

impl SuccessorFunction {
    /// Unchecked; see [`SuccessorFunction::validate`].
    pub fn new(period: u64, successors: Vec<Successor>) -> Self {
        SuccessorFunction { period, successors }
    }

    /// `τ ≡ ∞` with period `n`.
    pub fn infinity(n: u64) -> Self {
        SuccessorFunction::new(n, alloc::vec![Successor::Infinity; n as usize])
    }

    /// Period one with `τ(k) = k + shift`.
    pub fn constant_shift(shift: u64) -> Self {
        SuccessorFunction::new(1, alloc::vec![Successor::Finite(1 + shift)])
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn successors(&self) -> &[Successor] {
        &self.successors
    }

    /// Lists every violated condition; empty means admissible.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.period == 0 {
            out.push(Violation::ZeroPeriod);
            return out;
        }
        if self.successors.len() as u64 != self.period {
            out.push(Violation::WrongLength {
                period: self.period,
                found: self.successors.len(),
            });
            return out;
        }
        for (k, v) in self.finite() {
            if v < k + 2 {
                out.push(Violation::TooClose { k, value: v });
            }
        }
        let fin: Vec<(u64, u64)> = self.finite().collect();
        for (i, &(k1, v1)) in fin.iter().enumerate() {
            for &(k2, v2) in &fin[i + 1..] {
                if v1 % self.period == v2 % self.period {
                    out.push(Violation::NotInjective { k1, k2 });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    /// `(k, τ(k))` for finite values with `k` in `1..=N`.
    pub fn finite(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.successors
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match s {
                Successor::Finite(v) => Some((i as u64 + 1, *v)),
                Successor::Infinity => None,
            })
    }

    /// Extended τ at any `k >= 1`.
    pub fn tau(&self, k: u64) -> Successor {
        assert!(k >= 1 && self.period > 0);
        let r = (k - 1) % self.period;
        match self.successors[r as usize] {
            Successor::Finite(v) => Successor::Finite(v + (k - 1 - r)),
            Successor::Infinity => Successor::Infinity,
        }
    }

    /// The shift `τ(k) - k` of the unique `k` with `τ(k) ≡ j` in the
    /// periodic pattern, ignoring whether `k >= 1`.
    pub fn incoming_shift(&self, j: u64) -> Option<u64> {
        let n = self.period;
        self.finite()
            .find(|&(_, v)| v % n == j % n)
            .map(|(k, v)| v - k)
    }

    /// `τ⁻¹(j)`, or `None` when empty. Indices below 1 never match.
    pub fn preimage(&self, j: u64) -> Option<u64> {
        let s = self.incoming_shift(j)?;
        if j > s {
            Some(j - s)
        } else {
            None
        }
    }
}

impl fmt::Display for SuccessorFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={}; tau: ", self.period)?;
        for (i, s) in self.successors.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}->{}", i + 1, s)?;
        }
        Ok(())
    }
}

/// Every admissible τ with `1 <= N <= max_period` and finite values at most
/// `max_value`, with `∞` allowed everywhere.
pub fn enumerate_admissible(max_period: u64, max_value: u64) -> Vec<SuccessorFunction> {
    let mut out = Vec::new();
    for n in 1..=max_period {
        let options: Vec<Successor> = core::iter::once(Successor::Infinity)
            .chain((3..=max_value).map(Successor::Finite))
            .collect();
        let mut idx = alloc::vec![0usize; n as usize];
        loop {
            let tau = SuccessorFunction::new(n, idx.iter().map(|&i| options[i]).collect());
            if tau.violations().is_empty() {
                out.push(tau);
            }
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < options.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
    }
    out
}

/// `x' = prev * x + feedback * t_back` for the d-update and the t-update.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecursionCoefficients {
    pub d: (i64, i64),
    pub t: (i64, i64),
}

/// Coefficients of the second-degree recursion.
pub const DEGREE_TWO: RecursionCoefficients = RecursionCoefficients {
    d: (2, -3),
    t: (1, -2),
};

/// Coefficients of the first-degree recursion.
pub const DEGREE_ONE: RecursionCoefficients = RecursionCoefficients {
    d: (2, -3),
    t: (1, -2),
};

/// Initial degree of both sequences.
pub const SEED_DEGREE: i64 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeTrace {
    pub d1: Vec<BigInt>,
    pub d2: Vec<BigInt>,
    pub t1: Vec<BigInt>,
    pub t2: Vec<BigInt>,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecursionError {
    InvalidTau(Vec<Violation>),
    TraceTooShort { needed: usize, found: usize },
    Companion(CompanionError),
    Kernel(KernelError),
}

impl fmt::Display for RecursionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecursionError::InvalidTau(v) => {
                f.write_str("invalid successor function: ")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{}", x)?;
                }
                Ok(())
            }
            RecursionError::TraceTooShort { needed, found } => write!(
                f,
                "trace has {} steps, classification needs at least {}",
                found, needed
            ),
            RecursionError::Companion(e) => write!(f, "{}", e),
            RecursionError::Kernel(e) => write!(f, "{}", e),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for RecursionError {}

impl From<KernelError> for RecursionError {
    fn from(e: KernelError) -> Self {
        RecursionError::Kernel(e)
    }
}

impl From<CompanionError> for RecursionError {
    fn from(e: CompanionError) -> Self {
        RecursionError::Companion(e)
    }
}

/// Runs one (d, t) pair of sequences from the seed `(3, 0)`.
pub fn run_sequence(
    tau: &SuccessorFunction,
    coeffs: RecursionCoefficients,
    steps: usize,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut d = Vec::with_capacity(steps + 1);
    let mut t = Vec::with_capacity(steps + 1);
    d.push(BigInt::from(SEED_DEGREE));
    t.push(BigInt::zero());
    for i in 0..steps {
        let back = match tau.preimage(i as u64 + 1) {
            Some(k) => t[k as usize].clone(),
            None => BigInt::zero(),
        };
        let dn = &d[i] * coeffs.d.0 + &back * coeffs.d.1;
        let tn = &d[i] * coeffs.t.0 + &back * coeffs.t.1;
        d.push(dn);
        t.push(tn);
    }
    (d, t)
}

pub fn run_recursion(tau: &SuccessorFunction, steps: usize) -> Result<DegreeTrace, RecursionError> {
    tau.validate().map_err(RecursionError::InvalidTau)?;
    let (d1, t1) = run_sequence(tau, DEGREE_ONE, steps);
    let (d2, t2) = run_sequence(tau, DEGREE_TWO, steps);
    Ok(DegreeTrace {
        d1,
        d2,
        t1,
        t2,
        steps,
    })
}

/// First and second degree sequences agree entrywise.
pub fn check_equality(trace: &DegreeTrace) -> bool {
    trace.d1 == trace.d2 && trace.t1 == trace.t2
}

/// Index of the first entry with a nonpositive degree or a negative t-value.
pub fn check_realizability(trace: &DegreeTrace) -> Result<(), usize> {
    let n = trace
        .d1
        .len()
        .max(trace.d2.len())
        .max(trace.t1.len())
        .max(trace.t2.len());
    for i in 0..n {
        let bad_d = [&trace.d1, &trace.d2]
            .iter()
            .any(|s| s.get(i).is_some_and(|x| !x.is_positive()));
        let bad_t = [&trace.t1, &trace.t2]
            .iter()
            .any(|s| s.get(i).is_some_and(|x| x.is_negative()));
        if bad_d || bad_t {
            return Err(i);
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrowthClass {
    Bounded,
    Polynomial { degree: u32 },
    Exponential { rate: RadiusEstimate },
}

impl fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthClass::Bounded => f.write_str("bounded"),
            GrowthClass::Polynomial { degree } => write!(f, "polynomial of degree {}", degree),
            GrowthClass::Exponential { rate } => {
                write!(f, "exponential, rate in [{}, {}]", rate.lower, rate.upper)
            }
        }
    }
}

/// Number of companion blocks a trace must cover for classification.
pub const CLASSIFY_BLOCKS: usize = 4;

/// Classifies growth of the second-degree sequence.
///
/// Bounded when two block state vectors of the trace coincide. Otherwise the
/// local minimal polynomial of the seed block decides: a root outside the
/// unit circle gives exponential growth, and otherwise all roots are zero or
/// roots of unity and the largest cyclotomic multiplicity `m` gives
/// polynomial growth of degree `m - 1`.
pub fn classify_growth(
    trace: &DegreeTrace,
    tau: &SuccessorFunction,
) -> Result<GrowthClass, RecursionError> {
    let system = build_companion(tau)?;
    let c = system.c as usize;
    let needed = CLASSIFY_BLOCKS * c;
    if trace.steps < needed || trace.d2.len() < needed + 1 || trace.t2.len() < needed + 1 {
        return Err(RecursionError::TraceTooShort {
            needed,
            found: trace.steps,
        });
    }
    let blocks: Vec<Vec<BigInt>> = (0..trace.steps / c)
        .map(|i| system.block_from(&trace.d2, &trace.t2, i))
        .collect();
    for (i, a) in blocks.iter().enumerate() {
        if blocks[i + 1..].contains(a) {
            return Ok(GrowthClass::Bounded);
        }
    }
    let mu = system.m.local_minimal_polynomial(&blocks[0])?;
    if mu.degree().is_none_or(|d| d == 0) {
        return Ok(GrowthClass::Bounded);
    }
    let census = circle_census(&mu, &BigRational::one())?;
    if census.outside > 0 {
        let mut tol = BigRational::new(1.into(), BigInt::from(1u64 << 40));
        loop {
            let rate = dominant_modulus(&mu, &tol)?;
            if rate.lower > BigRational::one() {
                return Ok(GrowthClass::Exponential { rate });
            }
            tol /= BigInt::from(1u64 << 20);
        }
    }
    let m = max_unit_root_multiplicity(&mu);
    Ok(if m <= 1 {
        GrowthClass::Bounded
    } else {
        GrowthClass::Polynomial { degree: m - 1 }
    })
}

/// Largest multiplicity of a root of unity in a monic integer polynomial
/// whose nonzero roots all lie on the unit circle.
fn max_unit_root_multiplicity(p: &UnivariatePolynomial) -> u32 {
    let mut rest = p.clone();
    let (_, r) = rest.divide_out(&UnivariatePolynomial::x());
    rest = r;
    let mut best = 0;
    let mut k = 1u32;
    while rest.degree().is_some_and(|d| d > 0) {
        let deg = rest.degree().unwrap() as u32;
        if crate::kernel::totient(k) <= deg {
            let (count, r) = rest.divide_out(&UnivariatePolynomial::cyclotomic(k));
            best = best.max(count);
            rest = r;
        }
        k += 1;
        assert!(
            k <= 4 * deg * deg + 8,
            "non-cyclotomic factor left on the unit circle"
        );
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[BigInt]) -> Vec<i64> {
        xs.iter()
            .map(|x| num_traits::ToPrimitive::to_i64(x).unwrap())
            .collect()
    }

    #[test]
    fn preimage_of_shift_two() {
        let tau = SuccessorFunction::constant_shift(2);
        assert_eq!(tau.preimage(1), None);
        assert_eq!(tau.preimage(2), None);
        assert_eq!(tau.preimage(3), Some(1));
        assert_eq!(tau.preimage(10), Some(8));
    }

    #[test]
    fn extension_is_shift_equivariant() {
        let tau = SuccessorFunction::new(2, alloc::vec![Successor::Finite(4), Successor::Infinity]);
        assert_eq!(tau.tau(1), Successor::Finite(4));
        assert_eq!(tau.tau(3), Successor::Finite(6));
        assert_eq!(tau.tau(4), Successor::Infinity);
        assert_eq!(tau.preimage(6), Some(3));
        assert_eq!(tau.preimage(5), None);
    }

    #[test]
    fn bounded_trace() {
        let t = run_recursion(&SuccessorFunction::constant_shift(2), 8).unwrap();
        assert_eq!(ints(&t.d2), [3, 6, 12, 15, 12, 6, 3, 6, 12]);
        assert_eq!(ints(&t.t2), [0, 3, 6, 6, 3, 0, 0, 3, 6]);
    }

    #[test]
    fn realizability_flags_first_bad_index() {
        let mut t = run_recursion(&SuccessorFunction::infinity(1), 6).unwrap();
        assert_eq!(check_realizability(&t), Ok(()));
        t.t1[4] = BigInt::from(-1);
        t.d2[5] = BigInt::zero();
        assert_eq!(check_realizability(&t), Err(4));
    }
}
