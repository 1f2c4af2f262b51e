//! Seeded generators for random maps and blow-up scripts.

use dyndeg_core::kernel::BigInt;
use dyndeg_core::lab::{MultiPoly, RationalMapPn};
use dyndeg_core::ledger::{BlowupEvent, Preset};
use dyndeg_core::text::EventScript;
use rand::Rng;

/// Largest absolute value of a random map coefficient.
pub const COEFF_BOUND: i64 = 3;

fn monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    if nvars == 1 {
        return vec![vec![d]];
    }
    (0..=d)
        .flat_map(|k| {
            monomials(nvars - 1, d - k)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, k);
                    rest
                })
        })
        .collect()
}

fn random_form<R: Rng>(rng: &mut R, nvars: usize, d: u32) -> MultiPoly {
    let mons = monomials(nvars, d);
    loop {
        let p = MultiPoly::from_terms(
            nvars,
            mons.iter().map(|m| {
                (
                    m.clone(),
                    BigInt::from(rng.gen_range(-COEFF_BOUND..=COEFF_BOUND)),
                )
            }),
        );
        if !p.is_zero() {
            return p;
        }
    }
}

/// Self-map of `P^n` of degree at most `max_degree` before reduction, with
/// coefficients in `-3..=3` and no zero component.
pub fn random_map<R: Rng>(rng: &mut R, n: usize, max_degree: u32) -> RationalMapPn {
    let d = rng.gen_range(1..=max_degree);
    let comps = (0..=n).map(|_| random_form(rng, n + 1, d)).collect();
    RationalMapPn::new(comps).expect("nonzero homogeneous components of equal degree")
}

/// Surfaces get `h^{1,1}` in `1..=max_surface_h11`.
pub fn random_script<R: Rng>(
    rng: &mut R,
    preset: Preset,
    len: usize,
    max_surface_h11: u32,
) -> EventScript {
    let events = (0..len)
        .map(|_| match rng.gen_range(0..3) {
            0 => BlowupEvent::Point,
            1 => BlowupEvent::Curve,
            _ => BlowupEvent::surface(rng.gen_range(1..=max_surface_h11)).expect("positive"),
        })
        .collect();
    EventScript { preset, events }
}
