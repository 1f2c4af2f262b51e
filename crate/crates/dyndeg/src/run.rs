//! Builds reports from parsed inputs.

use anyhow::{Context, Result};
use dyndeg_core::companion::{build_companion, dynamical_degree};
use dyndeg_core::intersection::{derive_recursion_coefficients, is_involution, pullback_matrix};
use dyndeg_core::kernel::BigRational;
use dyndeg_core::lab::{
    compose, drop_points, family_degree_scan, iterate_degrees, rational_grid, LabError,
    ParametricMap, RationalMapPn,
};
use dyndeg_core::ledger::{apply_blowup, check_formula, new_ledger, SignatureLedger};
use dyndeg_core::recursion::{
    check_equality, check_realizability, classify_growth, run_recursion, GrowthClass,
    RecursionCoefficients, SuccessorFunction, CLASSIFY_BLOCKS, DEGREE_ONE, DEGREE_TWO,
};
use dyndeg_core::text::{format_event_script, EventScript};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::input::GridSpec;
use crate::random::random_map;
use crate::report::*;

pub fn reflect(tau: &SuccessorFunction, steps: usize, tol: &BigRational) -> Result<ReflectReport> {
    let trace = run_recursion(tau, steps)?;
    let mut warnings = Vec::new();
    let equality = check_equality(&trace);
    if !equality {
        warnings.push("first and second degree sequences differ".to_string());
    }
    let first_unrealizable = check_realizability(&trace).err();
    if let Some(i) = first_unrealizable {
        warnings.push(format!("trace is not realizable from step {}", i));
    }
    let trace_rows = (0..=steps)
        .map(|i| TraceRow {
            i,
            d1: trace.d1[i].to_string(),
            d2: trace.d2[i].to_string(),
            t1: trace.t1[i].to_string(),
            t2: trace.t2[i].to_string(),
        })
        .collect();

    let (companion, growth) = match build_companion(tau) {
        Ok(system) => {
            let dd = dynamical_degree(tau, tol)?;
            if !dd.ratio_agrees {
                warnings
                    .push("growth ratio does not match the companion spectral radius".to_string());
            }
            let companion = CompanionSummary {
                block_period: dd.c,
                char_poly: dd.char_poly.to_string(),
                spectral_radius: (&dd.spectral_radius).into(),
                per_step_rate: dd.per_step_rate,
                dynamical_degree: dd.composite_rate,
                growth_ratio: dd.growth_ratio,
                ratio_agrees: dd.ratio_agrees,
            };
            let needed = CLASSIFY_BLOCKS * system.c as usize;
            let long;
            let t = if steps >= needed {
                &trace
            } else {
                long = run_recursion(tau, needed)?;
                &long
            };
            let growth = match classify_growth(t, tau)? {
                GrowthClass::Bounded => GrowthSummary {
                    class: "bounded".into(),
                    polynomial_degree: None,
                    rate: None,
                },
                GrowthClass::Polynomial { degree } => GrowthSummary {
                    class: "polynomial".into(),
                    polynomial_degree: Some(degree),
                    rate: None,
                },
                GrowthClass::Exponential { rate } => GrowthSummary {
                    class: "exponential".into(),
                    polynomial_degree: None,
                    rate: Some((&rate).into()),
                },
            };
            (Some(companion), Some(growth))
        }
        Err(e) => {
            warnings.push(format!("no companion analysis: {}", e));
            (None, None)
        }
    };
    Ok(ReflectReport {
        tau: tau_text(tau),
        steps,
        trace: trace_rows,
        equality,
        first_unrealizable,
        companion,
        growth,
        warnings,
    })
}

fn pair_row(f: &RationalMapPn, g: &RationalMapPn, left: String, right: String) -> Result<PairRow> {
    let bound = u64::from(f.degree()) * u64::from(g.degree());
    let composite_degree = match compose(f, g) {
        Ok(c) => Some(u64::from(c.degree())),
        Err(LabError::ZeroComposite) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(PairRow {
        left,
        right,
        composite_degree,
        bound,
        holds: composite_degree.map(|d| d <= bound),
    })
}

/// Iterates the first map; the pair table covers every ordered pair of
/// listed maps of equal dimension, then `random_pairs` seeded pairs of
/// degree ≤ 2 self-maps of the plane.
pub fn compose_maps(
    maps: &[RationalMapPn],
    iterations: usize,
    cap: u64,
    seed: u64,
    random_pairs: usize,
) -> Result<ComposeReport> {
    let f = &maps[0];
    let seq = iterate_degrees(f, iterations, cap).context("iterating the first map")?;
    let mut warnings = Vec::new();
    if seq.truncated {
        warnings.push(format!(
            "degree cap {} reached after {} of {} iterations",
            cap,
            seq.degrees.len() - 1,
            iterations
        ));
    }
    let mut pairs = Vec::new();
    for (i, f) in maps.iter().enumerate() {
        for (j, g) in maps.iter().enumerate() {
            if f.dimension() == g.dimension() {
                pairs.push(pair_row(f, g, format!("map {}", i), format!("map {}", j))?);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut generated = Vec::new();
    for k in 0..random_pairs {
        let f = random_map(&mut rng, 2, 2);
        let g = random_map(&mut rng, 2, 2);
        pairs.push(pair_row(
            &f,
            &g,
            format!("random {} f", k),
            format!("random {} g", k),
        )?);
        generated.push((f.to_string(), g.to_string()));
    }
    let violations = pairs.iter().filter(|p| p.holds == Some(false)).count();
    if violations > 0 {
        warnings.push(format!(
            "{} pairs violate deg(f∘g) <= deg f · deg g",
            violations
        ));
    }
    Ok(ComposeReport {
        maps: maps.iter().map(|m| m.to_string()).collect(),
        iterations,
        cap,
        degrees: seq.degrees,
        growth: (&seq.growth).into(),
        truncated: seq.truncated,
        seed,
        pairs,
        random_pairs: generated,
        warnings,
    })
}

pub fn scan(fam: &ParametricMap, grid: &GridSpec, iterate: usize, cap: u64) -> Result<ScanReport> {
    let points = rational_grid(&grid.lo, &grid.hi, grid.count);
    let rows = family_degree_scan(fam, &points, iterate, cap)?;
    let drops = drop_points(&rows);
    let mut warnings = Vec::new();
    let out: Vec<ScanRowReport> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut flags = Vec::new();
            for (set, name) in [
                (r.flags.vanishing, "vanishing"),
                (r.flags.common_factor, "common-factor"),
                (r.flags.zero_composite, "zero-composite"),
                (r.flags.capped, "capped"),
            ] {
                if set {
                    flags.push(name.to_string());
                }
            }
            ScanRowReport {
                s: rational(&r.s),
                degree: r.degree,
                fiber_degree: r.fiber_degree,
                flags,
                drop: drops.contains(&i),
            }
        })
        .collect();
    for (name, count) in [
        (
            "vanishing",
            rows.iter().filter(|r| r.flags.vanishing).count(),
        ),
        (
            "zero-composite",
            rows.iter().filter(|r| r.flags.zero_composite).count(),
        ),
        ("capped", rows.iter().filter(|r| r.flags.capped).count()),
    ] {
        if count > 0 {
            warnings.push(format!("{} grid points flagged {}", count, name));
        }
    }
    Ok(ScanReport {
        family: fam.to_string(),
        grid: (rational(&grid.lo), rational(&grid.hi), grid.count),
        iterate,
        cap,
        drops: drops.iter().map(|&i| out[i].s.clone()).collect(),
        rows: out,
        warnings,
    })
}

fn ledger_row(step: usize, event: String, l: &SignatureLedger) -> LedgerRow {
    LedgerRow {
        step,
        event,
        h11: l.profile.h11,
        h22: l.profile.h22,
        n_plus: l.n_plus,
        n_minus: l.n_minus,
        signature: l.profile.signature(),
        formula_holds: check_formula(l),
        added: l
            .history
            .last()
            .filter(|_| step > 0)
            .map(|e| e.added.iter().map(|a| a.to_string()).collect())
            .unwrap_or_default(),
    }
}

pub fn ledger(script: &EventScript) -> Result<LedgerReport> {
    let mut l = new_ledger(script.preset)?;
    let mut rows = vec![ledger_row(0, format!("start {}", script.preset), &l)];
    for (i, e) in script.events.iter().enumerate() {
        l = apply_blowup(&l, *e);
        rows.push(ledger_row(i + 1, e.to_string(), &l));
    }
    let formula_holds = rows.iter().all(|r| r.formula_holds);
    let warnings = rows
        .iter()
        .filter(|r| !r.formula_holds)
        .map(|r| format!("signature formula fails after step {}", r.step))
        .collect();
    Ok(LedgerReport {
        script: format_event_script(script),
        rows,
        formula_holds,
        warnings,
    })
}

fn flat(c: RecursionCoefficients) -> [i64; 4] {
    [c.d.0, c.d.1, c.t.0, c.t.1]
}

pub fn identities() -> Result<IdentitiesReport> {
    let m = pullback_matrix();
    let derived = derive_recursion_coefficients()?;
    let pullback = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect();
    let pullback_is_involution = is_involution(&m);
    let coefficients_match = derived.degree_two == DEGREE_TWO && derived.degree_one == DEGREE_ONE;
    let mut warnings = Vec::new();
    if !pullback_is_involution {
        warnings.push("pull-back matrix does not square to the identity".to_string());
    }
    if !coefficients_match {
        warnings.push("derived coefficients differ from those used by the recursion".to_string());
    }
    Ok(IdentitiesReport {
        pullback,
        pullback_is_involution,
        derived_degree_two: flat(derived.degree_two),
        derived_degree_one: flat(derived.degree_one),
        used_degree_two: flat(DEGREE_TWO),
        used_degree_one: flat(DEGREE_ONE),
        coefficients_match,
        identities: derived.identities,
        warnings,
    })
}
