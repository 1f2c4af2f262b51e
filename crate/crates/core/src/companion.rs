//! Block transition matrix of the degree recursion and spectral radii.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::kernel::{
    dominant_modulus, lcm_all_u64, IntegerMatrix, KernelError, RadiusEstimate, UnivariatePolynomial,
};
use crate::recursion::{
    check_realizability, run_sequence, SuccessorFunction, Violation, DEGREE_TWO,
};

/// Largest block period accepted by [`build_companion`].
pub const MAX_BLOCK_PERIOD: u64 = 256;

/// Relative agreement required between spectral radius and growth ratio.
pub const RATIO_AGREEMENT: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompanionError {
    InvalidTau(Vec<Violation>),
    TooLarge { c: u64 },
    Inconsistent { block: usize },
    Kernel(KernelError),
}

impl fmt::Display for CompanionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompanionError::InvalidTau(v) => {
                write!(f, "invalid successor function ({} violations)", v.len())
            }
            CompanionError::TooLarge { c } => write!(
                f,
                "block period C = {} exceeds the supported maximum {}",
                c, MAX_BLOCK_PERIOD
            ),
            CompanionError::Inconsistent { block } => write!(
                f,
                "internal consistency failure: companion evolution disagrees with the recursion at block {}",
                block
            ),
            CompanionError::Kernel(e) => write!(f, "{}", e),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CompanionError {}

impl From<KernelError> for CompanionError {
    fn from(e: KernelError) -> Self {
        CompanionError::Kernel(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompanionSystem {
    pub c: u64,
    pub m: IntegerMatrix,
    pub tau: SuccessorFunction,
}

/// `C = lcm(N, τ(k) - k)` over finite values.
pub fn period_constant(tau: &SuccessorFunction) -> Result<u64, CompanionError> {
    tau.validate().map_err(CompanionError::InvalidTau)?;
    let mut values = alloc::vec![tau.period()];
    values.extend(tau.finite().map(|(k, v)| v - k));
    Ok(lcm_all_u64(&values)?)
}

impl CompanionSystem {
    /// Block vector `v⁽ⁱ⁾ = (d_{C+iC}, …, d_{1+iC}, t_{C+iC}, …, t_{1+iC})`.
    pub fn block_from(&self, d: &[BigInt], t: &[BigInt], i: usize) -> Vec<BigInt> {
        let c = self.c as usize;
        let mut v = Vec::with_capacity(2 * c);
        v.extend((1..=c).rev().map(|a| d[a + i * c].clone()));
        v.extend((1..=c).rev().map(|a| t[a + i * c].clone()));
        v
    }

    /// `v⁽⁰⁾, M v⁽⁰⁾, …` for `blocks` blocks.
    pub fn evolve(&self, seed: &[BigInt], blocks: usize) -> Result<Vec<Vec<BigInt>>, KernelError> {
        let mut out = Vec::with_capacity(blocks);
        if blocks == 0 {
            return Ok(out);
        }
        out.push(seed.to_vec());
        for _ in 1..blocks {
            let next = self.m.mul_vec(out.last().unwrap())?;
            out.push(next);
        }
        Ok(out)
    }

    /// Seed block `v⁽⁰⁾` from the recursion.
    pub fn seed(&self) -> Vec<BigInt> {
        let c = self.c as usize;
        let (d, t) = run_sequence(&self.tau, DEGREE_TWO, c);
        self.block_from(&d, &t, 0)
    }
}

/// Unrolls one block of the recursion into a `2C × 2C` matrix and checks it
/// against three blocks of the direct recursion.
pub fn build_companion(tau: &SuccessorFunction) -> Result<CompanionSystem, CompanionError> {
    let c = period_constant(tau)?;
    if c > MAX_BLOCK_PERIOD {
        return Err(CompanionError::TooLarge { c });
    }
    let cu = c as usize;
    let n = 2 * cu;
    let unit = |pos: usize| {
        let mut v = alloc::vec![BigInt::zero(); n];
        v[pos] = BigInt::from(1);
        v
    };
    let old_d = |a: usize| cu - a;
    let old_t = |a: usize| n - a;
    let combine = |x: &[BigInt], cx: i64, y: &[BigInt], cy: i64| -> Vec<BigInt> {
        x.iter().zip(y).map(|(p, q)| p * cx + q * cy).collect()
    };

    let mut new_d: Vec<Vec<BigInt>> = Vec::with_capacity(cu + 1);
    let mut new_t: Vec<Vec<BigInt>> = Vec::with_capacity(cu + 1);
    new_d.push(Vec::new());
    new_t.push(Vec::new());
    for a in 1..=cu {
        let prev = if a == 1 {
            unit(old_d(cu))
        } else {
            new_d[a - 1].clone()
        };
        // C is a multiple of N, so index a + (i+1)C has the residue of a
        let back = match tau.incoming_shift(a as u64) {
            None => alloc::vec![BigInt::zero(); n],
            Some(s) => {
                let s = s as usize;
                if a > s {
                    new_t[a - s].clone()
                } else {
                    unit(old_t(a + cu - s))
                }
            }
        };
        new_d.push(combine(&prev, DEGREE_TWO.d.0, &back, DEGREE_TWO.d.1));
        new_t.push(combine(&prev, DEGREE_TWO.t.0, &back, DEGREE_TWO.t.1));
    }
    let mut m = IntegerMatrix::zeros(n, n);
    for a in 1..=cu {
        for (j, x) in new_d[a].iter().enumerate() {
            m.set(old_d(a), j, x.clone());
        }
        for (j, x) in new_t[a].iter().enumerate() {
            m.set(old_t(a), j, x.clone());
        }
    }
    let system = CompanionSystem {
        c,
        m,
        tau: tau.clone(),
    };

    let (d, t) = run_sequence(tau, DEGREE_TWO, 4 * cu);
    let evolved = system.evolve(&system.block_from(&d, &t, 0), 4)?;
    for (i, v) in evolved.iter().enumerate() {
        if *v != system.block_from(&d, &t, i) {
            return Err(CompanionError::Inconsistent { block: i });
        }
    }
    Ok(system)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DynamicalDegree {
    pub c: u64,
    pub char_poly: UnivariatePolynomial,
    /// Spectral radius of `M`, the growth factor over one block of `C` steps.
    pub spectral_radius: RadiusEstimate,
    /// `ρ(M)^(1/C)`, growth per reflection.
    pub per_step_rate: f64,
    /// `ρ(M)^(N/C)`, growth per application of the full N-fold composite.
    pub composite_rate: f64,
    /// `(d⁽ᵐ⁺ᶜ⁾ / d⁽ᵐ⁾)^(1/C)`, absent when `d⁽ᵐ⁾ <= 0`.
    pub growth_ratio: Option<f64>,
    pub ratio_index: usize,
    pub ratio_agrees: bool,
    /// First index where the trace stops being realizable.
    pub realizability_warning: Option<usize>,
}

/// Spectral radius of the companion matrix next to the empirical growth ratio
/// of the second-degree sequence.
pub fn dynamical_degree(
    tau: &SuccessorFunction,
    tol: &BigRational,
) -> Result<DynamicalDegree, CompanionError> {
    let system = build_companion(tau)?;
    let char_poly = system.m.char_poly()?;
    let spectral_radius = dominant_modulus(&char_poly, tol)?;

    let c = system.c as usize;
    let steps = (64 * c).max(256);
    let (d, t) = run_sequence(tau, DEGREE_TWO, steps);
    let m = steps - c;
    let growth_ratio = if d[m] > BigInt::zero() {
        BigRational::new(d[m + c].clone(), d[m].clone())
            .to_f64()
            .map(|r| libm::pow(r, 1.0 / c as f64))
    } else {
        None
    };
    let rho = spectral_radius.midpoint_f64();
    let per_step_rate = libm::pow(rho, 1.0 / c as f64);
    let composite_rate = libm::pow(rho, tau.period() as f64 / c as f64);
    let ratio_agrees = growth_ratio
        .is_some_and(|r| (r - per_step_rate).abs() <= RATIO_AGREEMENT * per_step_rate.max(1.0));
    let trace = crate::recursion::DegreeTrace {
        d1: d.clone(),
        d2: d,
        t1: t.clone(),
        t2: t,
        steps,
    };
    Ok(DynamicalDegree {
        c: system.c,
        char_poly,
        spectral_radius,
        per_step_rate,
        composite_rate,
        growth_ratio,
        ratio_index: m,
        ratio_agrees,
        realizability_warning: check_realizability(&trace).err(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recursion::Successor;

    #[test]
    fn doubling_matrix() {
        let sys = build_companion(&SuccessorFunction::infinity(1)).unwrap();
        assert_eq!(sys.c, 1);
        assert_eq!(sys.m, IntegerMatrix::from_rows(&[&[2, 0], &[1, 0]]));
    }

    #[test]
    fn period_constants() {
        assert_eq!(
            period_constant(&SuccessorFunction::constant_shift(2)).unwrap(),
            2
        );
        assert_eq!(period_constant(&SuccessorFunction::infinity(1)).unwrap(), 1);
        let tau =
            SuccessorFunction::new(2, alloc::vec![Successor::Finite(4), Successor::Finite(5)]);
        assert_eq!(period_constant(&tau).unwrap(), 6);
    }
}
