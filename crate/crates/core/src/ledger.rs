//! Hodge profile and degree-4 intersection-form signature along a tower of
//! blow-ups over a fourfold.

use alloc::vec::Vec;
use core::fmt;
use core::num::NonZeroU32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HodgeProfile {
    pub h11: u64,
    pub h22: u64,
}

impl HodgeProfile {
    /// `h22 − 2·h11 + 2`.
    pub fn signature(&self) -> i64 {
        self.h22 as i64 - 2 * self.h11 as i64 + 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    CubicFourfold,
    P4,
    Custom { h11: u64, h22: u64 },
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::CubicFourfold => f.write_str("cubic"),
            Preset::P4 => f.write_str("p4"),
            Preset::Custom { h11, h22 } => write!(f, "custom {} {}", h11, h22),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlowupEvent {
    Point,
    Curve,
    Surface { h11: NonZeroU32 },
}

impl BlowupEvent {
    /// Surface with `h^{1,1}(S) = h11`; `None` for zero.
    pub fn surface(h11: u32) -> Option<Self> {
        NonZeroU32::new(h11).map(|h11| BlowupEvent::Surface { h11 })
    }

    /// `(Δh22, Δn_plus, Δn_minus)`.
    pub fn deltas(&self) -> (u64, u64, u64) {
        match *self {
            BlowupEvent::Point => (1, 0, 1),
            BlowupEvent::Curve => (2, 1, 1),
            BlowupEvent::Surface { h11 } => {
                let r = u64::from(h11.get());
                (r, r - 1, 1)
            }
        }
    }
}

impl fmt::Display for BlowupEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlowupEvent::Point => f.write_str("point"),
            BlowupEvent::Curve => f.write_str("curve"),
            BlowupEvent::Surface { h11 } => write!(f, "surface {}", h11),
        }
    }
}

/// Cycle on the blow-up center pulled back to the exceptional divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PulledBack {
    /// the center itself, a point
    Point,
    /// a point of the center curve
    PointOnCurve,
    /// the center curve
    Curve,
    /// the `k`-th curve class of a basis of `H^{1,1}` of the center surface
    CurveOnSurface(u32),
}

/// An added degree-4 class: pulled-back cycle cut by `H_E^power`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AddedClass {
    pub pulled_back: PulledBack,
    pub hyperplane_power: u32,
}

impl fmt::Display for AddedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pulled_back {
            PulledBack::Point => f.write_str("p^*(point)")?,
            PulledBack::PointOnCurve => f.write_str("p^*(point on C)")?,
            PulledBack::Curve => f.write_str("p^*(C)")?,
            PulledBack::CurveOnSurface(k) => write!(f, "p^*(curve_{} on S)", k)?,
        }
        write!(f, " . H_E^{}", self.hyperplane_power)
    }
}

fn added_classes(event: &BlowupEvent) -> Vec<AddedClass> {
    let c = |pulled_back, hyperplane_power| AddedClass {
        pulled_back,
        hyperplane_power,
    };
    match *event {
        // E is a P^3-bundle over a point
        BlowupEvent::Point => alloc::vec![c(PulledBack::Point, 1)],
        // P^2-bundle over a curve
        BlowupEvent::Curve => alloc::vec![c(PulledBack::PointOnCurve, 0), c(PulledBack::Curve, 1)],
        // P^1-bundle over a surface
        BlowupEvent::Surface { h11 } => (1..=h11.get())
            .map(|k| c(PulledBack::CurveOnSurface(k), 0))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LedgerEntry {
    pub event: BlowupEvent,
    pub added: Vec<AddedClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignatureLedger {
    pub profile: HodgeProfile,
    pub n_plus: u64,
    pub n_minus: u64,
    pub history: Vec<LedgerEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LedgerError {
    NegativeCount { h11: u64, h22: u64 },
}

impl fmt::Display for LedgerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LedgerError::NegativeCount { h11, h22 } => write!(
                f,
                "profile h11={} h22={} gives a negative n_plus or n_minus",
                h11, h22
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for LedgerError {}

/// Coefficient of `t^k` in `((1 − t^{d−1}) / (1 − t))^6`, i.e. in
/// `(1 + t + … + t^{d−2})^6`.
fn jacobian_coefficient(d: u64, k: u64) -> u64 {
    if d < 2 {
        return 0;
    }
    let mut poly = alloc::vec![1u64];
    for _ in 0..6 {
        let mut next = alloc::vec![0u64; poly.len() + d as usize - 2];
        for (i, &c) in poly.iter().enumerate() {
            for j in 0..=(d as usize - 2) {
                next[i + j] += c;
            }
        }
        poly = next;
    }
    poly.get(k as usize).copied().unwrap_or(0)
}

/// Middle Hodge numbers `(h^{4,0}, h^{3,1}, h^{2,2})` of a smooth degree-`d`
/// fourfold hypersurface in `P^5`, from the Jacobian ring: the primitive
/// part of `h^{4−q,q}` is the coefficient of `t^{(q+1)d − 6}`.
pub fn hypersurface_middle_hodge(d: u64) -> (u64, u64, u64) {
    let prim = |q: u64| {
        let deg = (q + 1) * d;
        if deg < 6 {
            0
        } else {
            jacobian_coefficient(d, deg - 6)
        }
    };
    (prim(0), prim(1), prim(2) + 1)
}

/// Topological Euler characteristic of a smooth degree-`d` fourfold
/// hypersurface: `((1 − d)^6 − 1)/d + 6`.
pub fn hypersurface_euler(d: u64) -> i64 {
    let d = d as i64;
    ((1 - d).pow(6) - 1) / d + 6
}

impl Preset {
    pub fn profile(&self) -> HodgeProfile {
        match *self {
            Preset::CubicFourfold => HodgeProfile {
                h11: 1,
                h22: hypersurface_middle_hodge(3).2,
            },
            // a hyperplane in P^5
            Preset::P4 => HodgeProfile {
                h11: 1,
                h22: hypersurface_middle_hodge(1).2,
            },
            Preset::Custom { h11, h22 } => HodgeProfile { h11, h22 },
        }
    }
}

pub fn new_ledger(preset: Preset) -> Result<SignatureLedger, LedgerError> {
    let profile = preset.profile();
    let (h11, h22) = (profile.h11, profile.h22);
    let sig = profile.signature();
    let h = h22 as i64;
    // h22 + sig = 2(h22 - h11 + 1) is always even
    let plus = (h + sig) / 2;
    let minus = (h - sig) / 2;
    if plus < 0 || minus < 0 {
        return Err(LedgerError::NegativeCount { h11, h22 });
    }
    Ok(SignatureLedger {
        profile,
        n_plus: plus as u64,
        n_minus: minus as u64,
        history: Vec::new(),
    })
}

pub fn apply_blowup(ledger: &SignatureLedger, event: BlowupEvent) -> SignatureLedger {
    let (dh22, dp, dm) = event.deltas();
    let mut out = ledger.clone();
    out.profile.h22 += dh22;
    out.profile.h11 += 1;
    out.n_plus += dp;
    out.n_minus += dm;
    out.history.push(LedgerEntry {
        event,
        added: added_classes(&event),
    });
    out
}

/// Folds [`apply_blowup`] over `events`.
pub fn apply_all(ledger: &SignatureLedger, events: &[BlowupEvent]) -> SignatureLedger {
    events
        .iter()
        .fold(ledger.clone(), |l, e| apply_blowup(&l, *e))
}

/// Incremental bookkeeping agrees with the closed signature formula.
pub fn check_formula(ledger: &SignatureLedger) -> bool {
    ledger.n_plus + ledger.n_minus == ledger.profile.h22
        && ledger.n_plus as i64 - ledger.n_minus as i64 == ledger.profile.signature()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_profile() {
        assert_eq!(hypersurface_middle_hodge(3), (0, 1, 21));
        let l = new_ledger(Preset::CubicFourfold).unwrap();
        assert_eq!((l.n_plus, l.n_minus), (21, 0));
    }

    #[test]
    fn labels() {
        let l = apply_blowup(&new_ledger(Preset::P4).unwrap(), BlowupEvent::Curve);
        assert_eq!(l.history[0].added.len(), 2);
        assert_eq!(
            alloc::format!("{}", l.history[0].added[1]),
            "p^*(C) . H_E^1"
        );
    }
}
