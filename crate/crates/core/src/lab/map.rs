use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::gcd::gcd_homogeneous;
use super::multipoly::{substitute_all, MultiPoly, VARIABLE_NAMES};
use super::LabError;
use crate::kernel::radius::simplest_between;
use crate::kernel::{RadiusEstimate, RadiusMethod};

/// Largest supported number of homogeneous coordinates.
pub const MAX_COORDINATES: usize = 5;

/// Default bound on `deg f · deg f^k` before computing the next iterate.
pub const DEFAULT_DEGREE_CAP: u64 = 4096;

/// A rational self-map of `P^n`: `n + 1` homogeneous components of equal
/// degree without a common factor, normalised to integer content 1 and a
/// positive lex-leading coefficient in the first nonzero component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMapPn {
    components: Vec<MultiPoly>,
    degree: u32,
}

impl RationalMapPn {
    /// Validates and reduces. Components must each have one variable per
    /// component.
    pub fn new(components: Vec<MultiPoly>) -> Result<Self, LabError> {
        let k = components.len();
        if !(2..=MAX_COORDINATES).contains(&k) {
            return Err(LabError::ComponentCount { found: k });
        }
        let mut degree = None;
        for (i, c) in components.iter().enumerate() {
            if c.nvars() != k {
                return Err(LabError::VariableCount {
                    component: i,
                    expected: k,
                    found: c.nvars(),
                });
            }
            if !c.is_homogeneous() {
                return Err(LabError::NonHomogeneous { component: i });
            }
            if let Some(d) = c.total_degree() {
                match degree {
                    None => degree = Some(d),
                    Some(e) if e != d => {
                        return Err(LabError::DegreeMismatch {
                            component: i,
                            expected: e,
                            found: d,
                        })
                    }
                    _ => {}
                }
            }
        }
        if degree.is_none() {
            return Err(LabError::AllZero);
        }
        let (components, _) = reduce_components(&components);
        let degree = components
            .iter()
            .find_map(|c| c.total_degree())
            .unwrap_or(0);
        Ok(RationalMapPn { components, degree })
    }

    pub fn identity(n: usize) -> Self {
        RationalMapPn {
            components: (0..=n).map(|i| MultiPoly::var(n + 1, i)).collect(),
            degree: 1,
        }
    }

    /// Ambient dimension `n`.
    pub fn dimension(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    /// First Cremona degree.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Same point of projective space of component tuples.
    pub fn is_proportional_to(&self, other: &Self) -> bool {
        if self.components.len() != other.components.len() {
            return false;
        }
        let pivot = match self.components.iter().position(|c| !c.is_zero()) {
            None => return false,
            Some(i) => i,
        };
        let (_, a) = self.components[pivot].leading_term().unwrap();
        let (e, _) = self.components[pivot].leading_term().unwrap();
        let b = other.components[pivot].coeff(e);
        if b.is_zero() {
            return false;
        }
        self.components
            .iter()
            .zip(&other.components)
            .all(|(x, y)| x.scale(&b) == y.scale(a))
    }
}

impl fmt::Display for RationalMapPn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" : ")?;
            }
            write!(f, "{}", c.display_with(&VARIABLE_NAMES))?;
        }
        f.write_str("]")
    }
}

/// Divides homogeneous components by their gcd (integer content included)
/// and fixes the overall sign. Returns the reduced tuple and the removed
/// factor.
pub fn reduce_components(components: &[MultiPoly]) -> (Vec<MultiPoly>, MultiPoly) {
    let g = gcd_homogeneous(components);
    if g.is_zero() {
        return (components.to_vec(), g);
    }
    let mut out: Vec<MultiPoly> = if g.is_constant() {
        let c = g.content();
        components.iter().map(|p| p.div_scalar_exact(&c)).collect()
    } else {
        components
            .iter()
            .map(|p| p.div_exact(&g).expect("gcd divides every component"))
            .collect()
    };
    let negative = out
        .iter()
        .find_map(|c| c.leading_term())
        .is_some_and(|(_, c)| c.is_negative());
    if negative {
        out = out.iter().map(|c| -c).collect();
    }
    (out, g)
}

/// A composite together with the degree of the cancelled common factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composite {
    pub map: RationalMapPn,
    pub cancelled_degree: u32,
}

/// `f ∘ g` with the common factor of the substituted components removed.
pub fn compose(f: &RationalMapPn, g: &RationalMapPn) -> Result<RationalMapPn, LabError> {
    compose_detailed(f, g).map(|c| c.map)
}

pub fn compose_detailed(f: &RationalMapPn, g: &RationalMapPn) -> Result<Composite, LabError> {
    if f.components.len() != g.components.len() {
        return Err(LabError::DimensionMismatch {
            left: f.dimension(),
            right: g.dimension(),
        });
    }
    let raw = substitute_all(&f.components, &g.components);
    if raw.iter().all(|c| c.is_zero()) {
        return Err(LabError::ZeroComposite);
    }
    let (components, common) = reduce_components(&raw);
    let degree = components
        .iter()
        .find_map(|c| c.total_degree())
        .unwrap_or(0);
    Ok(Composite {
        map: RationalMapPn { components, degree },
        cancelled_degree: common.total_degree().unwrap_or(0),
    })
}

/// `deg₁(f^i)` for `i = 0..=m`, with `degrees[0] = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence {
    pub degrees: Vec<u64>,
    /// Interval spanned by the last ratio and the log-regression slope.
    pub growth: RadiusEstimate,
    /// The cap stopped the iteration before `m`.
    pub truncated: bool,
}

/// Degrees of `f, f², …, f^m`. An iterate whose degree bound
/// `deg f · deg f^k` exceeds `cap` is not computed; the sequence so far is
/// returned with `truncated` set.
pub fn iterate_degrees(f: &RationalMapPn, m: usize, cap: u64) -> Result<DegreeSequence, LabError> {
    if m == 0 {
        return Err(LabError::ZeroIterations);
    }
    let mut degrees = alloc::vec![1u64];
    let mut truncated = false;
    let mut current: Option<RationalMapPn> = None;
    for _ in 0..m {
        let prev = degrees[degrees.len() - 1];
        if u64::from(f.degree) * prev > cap {
            truncated = true;
            break;
        }
        let next = match &current {
            None => f.clone(),
            Some(h) => compose(f, h)?,
        };
        degrees.push(u64::from(next.degree));
        current = Some(next);
    }
    let growth = growth_interval(&degrees);
    Ok(DegreeSequence {
        degrees,
        growth,
        truncated,
    })
}

/// Simplest rational within relative distance `1e-12` of `x > 0`.
fn snap(x: f64) -> BigRational {
    let r = |y: f64| BigRational::from_float(y).unwrap_or_else(BigRational::zero);
    simplest_between(&r(x * (1.0 - 1e-12)), &r(x * (1.0 + 1e-12)))
}

fn growth_interval(degrees: &[u64]) -> RadiusEstimate {
    let k = degrees.len();
    if k < 2 || degrees.contains(&0) {
        return RadiusEstimate::exact(
            BigRational::from_integer(1.into()),
            RadiusMethod::GrowthRatio,
        );
    }
    let last = BigRational::new(degrees[k - 1].into(), degrees[k - 2].into());
    let n = k as f64;
    let mean_x = (n - 1.0) / 2.0;
    let logs: Vec<f64> = degrees.iter().map(|&d| libm::log(d as f64)).collect();
    let mean_y = logs.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, y) in logs.iter().enumerate() {
        let dx = i as f64 - mean_x;
        num += dx * (y - mean_y);
        den += dx * dx;
    }
    let regression = snap(libm::exp(num / den));
    let (lower, upper) = if last <= regression {
        (last, regression)
    } else {
        (regression, last)
    };
    RadiusEstimate {
        lower,
        upper,
        method: RadiusMethod::GrowthRatio,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Submultiplicativity {
    pub holds: bool,
    /// `deg₁(f ∘ g)`
    pub lhs: u64,
    /// `deg₁(f) · deg₁(g)`
    pub rhs: u64,
}

pub fn submultiplicativity_check(
    f: &RationalMapPn,
    g: &RationalMapPn,
) -> Result<Submultiplicativity, LabError> {
    let lhs = u64::from(compose(f, g)?.degree);
    let rhs = u64::from(f.degree) * u64::from(g.degree);
    Ok(Submultiplicativity {
        holds: lhs <= rhs,
        lhs,
        rhs,
    })
}

/// Degree of the closure of `t ↦ (1 : t^{a_1} : … : t^{a_n})`: the Laurent
/// span `max(0, a) − min(0, a)` counts parameter values on a generic
/// hyperplane, and the map from the parameter is `gcd(a)`-to-one.
pub fn orbit_closure_degree(exponents: &[i64]) -> Result<u64, LabError> {
    if exponents.is_empty() {
        return Err(LabError::EmptyExponents);
    }
    let g = exponents.iter().fold(0i64, |g, a| g.gcd(a));
    if g == 0 {
        return Err(LabError::ConstantOrbit);
    }
    let hi = exponents.iter().copied().fold(0, i64::max);
    let lo = exponents.iter().copied().fold(0, i64::min);
    Ok(((hi - lo) / g) as u64)
}
