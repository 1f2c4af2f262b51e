//! Serializable reports, one per subcommand. Big integers and rationals are
//! carried as decimal strings so that JSON round-trips exactly.

use dyndeg_core::kernel::{BigRational, RadiusEstimate, RadiusMethod};
use dyndeg_core::recursion::SuccessorFunction;
use serde::{Deserialize, Serialize};

/// `p/q`, always with an explicit denominator.
pub fn rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// 12 significant digits, `.` separator, exponent form outside
/// `[1e-4, 1e15)`.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{}", x);
    }
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..15).contains(&mag) {
        return format!("{:.11e}", x);
    }
    let s = format!("{:.*}", (11 - mag).max(0) as usize, x);
    // rounding can carry into a new leading digit
    let digits = s
        .bytes()
        .filter(u8::is_ascii_digit)
        .skip_while(|&b| b == b'0')
        .count();
    if digits > 12 && s.contains('.') {
        format!("{:.*}", (10 - mag).max(0) as usize, x)
    } else {
        s
    }
}

pub fn tau_text(tau: &SuccessorFunction) -> String {
    let values: Vec<String> = tau
        .successors()
        .iter()
        .enumerate()
        .map(|(i, v)| format!("{}->{}", i + 1, v))
        .collect();
    format!("N={}; tau: {}", tau.period(), values.join(", "))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: String,
    pub upper: String,
    pub method: String,
}

impl From<&RadiusEstimate> for Interval {
    fn from(r: &RadiusEstimate) -> Self {
        Interval {
            lower: rational(&r.lower),
            upper: rational(&r.upper),
            method: match r.method {
                RadiusMethod::Graeffe => "graeffe",
                RadiusMethod::Sturm => "sturm",
                RadiusMethod::GrowthRatio => "growth-ratio",
            }
            .to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub i: usize,
    pub d1: String,
    pub d2: String,
    pub t1: String,
    pub t2: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompanionSummary {
    pub block_period: u64,
    pub char_poly: String,
    pub spectral_radius: Interval,
    /// growth per reflection, `ρ^(1/C)`
    pub per_step_rate: f64,
    /// growth per application of the N-fold composite, `ρ^(N/C)`
    pub dynamical_degree: f64,
    pub growth_ratio: Option<f64>,
    pub ratio_agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthSummary {
    /// `bounded`, `polynomial` or `exponential`
    pub class: String,
    pub polynomial_degree: Option<u32>,
    pub rate: Option<Interval>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReflectReport {
    pub tau: String,
    pub steps: usize,
    pub trace: Vec<TraceRow>,
    pub equality: bool,
    pub first_unrealizable: Option<usize>,
    pub companion: Option<CompanionSummary>,
    pub growth: Option<GrowthSummary>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    /// `map i` for listed maps, `random k` for generated pairs
    pub left: String,
    pub right: String,
    /// `deg₁(f∘g)`, absent when the composite is identically zero
    pub composite_degree: Option<u64>,
    pub bound: u64,
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComposeReport {
    pub maps: Vec<String>,
    pub iterations: usize,
    pub cap: u64,
    /// `deg₁(f^k)` for `k = 0, 1, …`
    pub degrees: Vec<u64>,
    pub growth: Interval,
    pub truncated: bool,
    pub seed: u64,
    pub pairs: Vec<PairRow>,
    pub random_pairs: Vec<(String, String)>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRowReport {
    pub s: String,
    pub degree: Option<u64>,
    pub fiber_degree: Option<u32>,
    pub flags: Vec<String>,
    pub drop: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub family: String,
    pub grid: (String, String, usize),
    pub iterate: usize,
    pub cap: u64,
    pub rows: Vec<ScanRowReport>,
    pub drops: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub step: usize,
    pub event: String,
    pub h11: u64,
    pub h22: u64,
    pub n_plus: u64,
    pub n_minus: u64,
    pub signature: i64,
    pub formula_holds: bool,
    pub added: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerReport {
    pub script: String,
    pub rows: Vec<LedgerRow>,
    pub formula_holds: bool,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentitiesReport {
    pub pullback: Vec<Vec<String>>,
    pub pullback_is_involution: bool,
    /// `[d_prev, d_back, t_prev, t_back]`
    pub derived_degree_two: [i64; 4],
    pub derived_degree_one: [i64; 4],
    pub used_degree_two: [i64; 4],
    pub used_degree_one: [i64; 4],
    pub coefficients_match: bool,
    pub identities: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Report {
    Reflect(ReflectReport),
    Compose(ComposeReport),
    Scan(ScanReport),
    Ledger(LedgerReport),
    Identities(IdentitiesReport),
}

impl Report {
    pub fn warnings(&self) -> &[String] {
        match self {
            Report::Reflect(r) => &r.warnings,
            Report::Compose(r) => &r.warnings,
            Report::Scan(r) => &r.warnings,
            Report::Ledger(r) => &r.warnings,
            Report::Identities(r) => &r.warnings,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12(2.0), "2.00000000000");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(1234.5), "1234.50000000");
        assert_eq!(sig12(9.9999999999999), "10.0000000000");
        assert_eq!(sig12(-0.5), "-0.500000000000");
        assert_eq!(sig12(1e20), "1.00000000000e20");
    }
}
