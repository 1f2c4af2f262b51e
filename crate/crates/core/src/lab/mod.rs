//! Birational maps of projective space given by integer polynomials:
//! composition with base-locus cancellation, degree sequences, orbit
//! closures of diagonal one-parameter subgroups and degree scans over
//! one-parameter families.

mod family;
mod gcd;
mod map;
mod modular;
mod multipoly;

use core::fmt;

pub use family::{
    drop_points, family_degree_scan, rational_grid, Fiber, ParametricMap, ScanFlags, ScanRow,
};
pub use gcd::{gcd, gcd_all, gcd_homogeneous};
pub use map::{
    compose, compose_detailed, iterate_degrees, orbit_closure_degree, reduce_components,
    submultiplicativity_check, Composite, DegreeSequence, RationalMapPn, Submultiplicativity,
    DEFAULT_DEGREE_CAP,
};
pub use multipoly::{substitute_all, MultiPoly, VARIABLE_NAMES};

use crate::text::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabError {
    Syntax(ParseError),
    /// fewer than two components, or more than the supported five
    ComponentCount {
        found: usize,
    },
    VariableCount {
        component: usize,
        expected: usize,
        found: usize,
    },
    NonHomogeneous {
        component: usize,
    },
    DegreeMismatch {
        component: usize,
        expected: u32,
        found: u32,
    },
    AllZero,
    DimensionMismatch {
        left: usize,
        right: usize,
    },
    /// the inner map lands in the indeterminacy locus of the outer one
    ZeroComposite,
    ZeroIterations,
    EmptyGrid,
    EmptyExponents,
    ConstantOrbit,
}

impl fmt::Display for LabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabError::Syntax(e) => write!(f, "{}", e),
            LabError::ComponentCount { found } => {
                write!(f, "a map needs between 2 and 5 components, found {}", found)
            }
            LabError::VariableCount {
                component,
                expected,
                found,
            } => write!(
                f,
                "component {} has {} variables, expected {}",
                component, found, expected
            ),
            LabError::NonHomogeneous { component } => {
                write!(f, "component {} is not homogeneous", component)
            }
            LabError::DegreeMismatch {
                component,
                expected,
                found,
            } => write!(
                f,
                "component {} has degree {}, expected {}",
                component, found, expected
            ),
            LabError::AllZero => f.write_str("all components are zero"),
            LabError::DimensionMismatch { left, right } => write!(
                f,
                "maps live on projective spaces of different dimension ({} and {})",
                left, right
            ),
            LabError::ZeroComposite => f.write_str(
                "composite is identically zero: the inner map lands in the indeterminacy locus of the outer map",
            ),
            LabError::ZeroIterations => f.write_str("iteration count must be at least 1"),
            LabError::EmptyGrid => f.write_str("grid is empty"),
            LabError::EmptyExponents => f.write_str("exponent list is empty"),
            LabError::ConstantOrbit => f.write_str("all exponents are zero, the orbit is a point"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for LabError {}

impl From<ParseError> for LabError {
    fn from(e: ParseError) -> Self {
        LabError::Syntax(e)
    }
}
