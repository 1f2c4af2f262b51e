use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::map::{iterate_degrees, reduce_components, RationalMapPn, MAX_COORDINATES};
use super::multipoly::{MultiPoly, VARIABLE_NAMES};
use super::LabError;

/// A one-parameter family of self-maps of `P^n`. Components are integer
/// polynomials in the `n + 1` coordinates followed by the parameter `s`,
/// homogeneous of a common degree in the coordinates. A family with
/// rational coefficients in `s` is the same projective family after
/// clearing denominators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricMap {
    components: Vec<MultiPoly>,
    degree: u32,
}

/// The map at one parameter value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fiber {
    /// every component vanishes identically
    Vanishing,
    Map {
        map: RationalMapPn,
        /// degree of the factor shared by all specialised components
        cancelled_degree: u32,
    },
}

impl ParametricMap {
    pub fn new(components: Vec<MultiPoly>) -> Result<Self, LabError> {
        let k = components.len();
        if !(2..=MAX_COORDINATES).contains(&k) {
            return Err(LabError::ComponentCount { found: k });
        }
        let mut degree = None;
        for (i, c) in components.iter().enumerate() {
            if c.nvars() != k + 1 {
                return Err(LabError::VariableCount {
                    component: i,
                    expected: k + 1,
                    found: c.nvars(),
                });
            }
            let mut degs = c.terms().map(|(e, _)| e[..k].iter().sum::<u32>());
            let d = match degs.next() {
                None => continue,
                Some(d) => d,
            };
            if degs.any(|x| x != d) {
                return Err(LabError::NonHomogeneous { component: i });
            }
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
        let degree = degree.ok_or(LabError::AllZero)?;
        Ok(ParametricMap { components, degree })
    }

    /// The family with no dependence on `s`.
    pub fn constant(map: &RationalMapPn) -> Self {
        let k = map.components().len();
        let components = map
            .components()
            .iter()
            .map(|c| {
                MultiPoly::from_terms(
                    k + 1,
                    c.terms().map(|(e, x)| {
                        let mut e2 = e.to_vec();
                        e2.push(0);
                        (e2, x.clone())
                    }),
                )
            })
            .collect();
        ParametricMap {
            components,
            degree: map.degree(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    /// Degree in the coordinates before specialisation.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Substitutes `s = p/q` and clears the denominator `q^K`, `K` the
    /// largest power of `s` present.
    pub fn specialize(&self, s: &BigRational) -> Fiber {
        let k = self.components.len();
        let top = (0..self.components.len())
            .filter_map(|i| self.components[i].degree_in(k))
            .max()
            .unwrap_or(0);
        let (p, q) = (s.numer(), s.denom());
        let raw: Vec<MultiPoly> = self
            .components
            .iter()
            .map(|c| {
                MultiPoly::from_terms(
                    k,
                    c.terms().map(|(e, x)| {
                        let j = e[k];
                        let w = x
                            * num_traits::pow(p.clone(), j as usize)
                            * num_traits::pow(q.clone(), (top - j) as usize);
                        (e[..k].to_vec(), w)
                    }),
                )
            })
            .collect();
        if raw.iter().all(|c| c.is_zero()) {
            return Fiber::Vanishing;
        }
        let (components, common) = reduce_components(&raw);
        let degree = components
            .iter()
            .find_map(|c| c.total_degree())
            .unwrap_or(0);
        let map = RationalMapPn::new(components)
            .expect("reduced specialisation of a validated family is a valid map");
        debug_assert_eq!(map.degree(), degree);
        Fiber::Map {
            map,
            cancelled_degree: common.total_degree().unwrap_or(0),
        }
    }
}

impl fmt::Display for ParametricMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.components.len();
        let mut names: Vec<&str> = VARIABLE_NAMES[..k].to_vec();
        names.push("s");
        f.write_str("[")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" : ")?;
            }
            write!(f, "{}", c.display_with(&names))?;
        }
        f.write_str("]")
    }
}

/// Per-point flags of a scan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScanFlags {
    /// the specialised map is identically zero
    pub vanishing: bool,
    /// the specialised components share a factor
    pub common_factor: bool,
    /// an iterate landed in the indeterminacy locus
    pub zero_composite: bool,
    /// the degree cap stopped the iteration
    pub capped: bool,
}

impl ScanFlags {
    pub fn is_degenerate(&self) -> bool {
        self.vanishing || self.common_factor || self.zero_composite || self.capped
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub s: BigRational,
    /// `deg₁(f_s^iterate)`, absent when no map could be formed
    pub degree: Option<u64>,
    /// `deg₁(f_s)`
    pub fiber_degree: Option<u32>,
    pub flags: ScanFlags,
}

/// Specialises at each grid point in order and records the degree of the
/// `iterate`-th iterate.
pub fn family_degree_scan(
    fam: &ParametricMap,
    grid: &[BigRational],
    iterate: usize,
    cap: u64,
) -> Result<Vec<ScanRow>, LabError> {
    if grid.is_empty() {
        return Err(LabError::EmptyGrid);
    }
    if iterate == 0 {
        return Err(LabError::ZeroIterations);
    }
    Ok(grid
        .iter()
        .map(|s| scan_point(fam, s, iterate, cap))
        .collect())
}

fn scan_point(fam: &ParametricMap, s: &BigRational, iterate: usize, cap: u64) -> ScanRow {
    let mut flags = ScanFlags::default();
    let (map, cancelled) = match fam.specialize(s) {
        Fiber::Vanishing => {
            flags.vanishing = true;
            return ScanRow {
                s: s.clone(),
                degree: None,
                fiber_degree: None,
                flags,
            };
        }
        Fiber::Map {
            map,
            cancelled_degree,
        } => (map, cancelled_degree),
    };
    flags.common_factor = cancelled > 0;
    let degree = match iterate_degrees(&map, iterate, cap) {
        Ok(seq) if seq.truncated => {
            flags.capped = true;
            None
        }
        Ok(seq) => seq.degrees.last().copied(),
        Err(_) => {
            flags.zero_composite = true;
            None
        }
    };
    ScanRow {
        s: s.clone(),
        degree,
        fiber_degree: Some(map.degree()),
        flags,
    }
}

/// Indices of rows whose degree is below the largest scanned degree.
pub fn drop_points(rows: &[ScanRow]) -> Vec<usize> {
    let max = rows.iter().filter_map(|r| r.degree).max();
    rows.iter()
        .enumerate()
        .filter(|(_, r)| match (r.degree, max) {
            (Some(d), Some(m)) => d < m,
            _ => false,
        })
        .map(|(i, _)| i)
        .collect()
}

/// `count` evenly spaced rationals from `lo` to `hi` inclusive.
pub fn rational_grid(lo: &BigRational, hi: &BigRational, count: usize) -> Vec<BigRational> {
    match count {
        0 => Vec::new(),
        1 => alloc::vec![lo.clone()],
        _ => {
            let step = (hi - lo) / BigRational::from_integer(BigInt::from(count - 1));
            (0..count)
                .map(|i| lo + &step * BigRational::from_integer(BigInt::from(i)))
                .collect()
        }
    }
}
