//! Text and CSV renderings. JSON goes straight through serde.

use std::fmt::Write as _;

use anyhow::Result;

use crate::report::*;

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

fn interval(i: &Interval) -> String {
    format!("[{}, {}] ({})", i.lower, i.upper, i.method)
}

pub fn text(report: &Report) -> String {
    let mut s = String::new();
    let w = &mut s;
    match report {
        Report::Reflect(r) => {
            let _ = writeln!(w, "tau: {}", r.tau);
            let _ = writeln!(w, "steps: {}", r.steps);
            let _ = writeln!(
                w,
                "{:>5} {:>20} {:>20} {:>20} {:>20}",
                "i", "d1", "d2", "t1", "t2"
            );
            for t in &r.trace {
                let _ = writeln!(
                    w,
                    "{:>5} {:>20} {:>20} {:>20} {:>20}",
                    t.i, t.d1, t.d2, t.t1, t.t2
                );
            }
            let _ = writeln!(w, "equality d1 = d2, t1 = t2: {}", r.equality);
            let _ = writeln!(
                w,
                "realizable: {}",
                r.first_unrealizable
                    .map_or_else(|| "yes".to_string(), |i| format!("no, from step {}", i))
            );
            if let Some(c) = &r.companion {
                let _ = writeln!(w, "block period C: {}", c.block_period);
                let _ = writeln!(w, "characteristic polynomial: {}", c.char_poly);
                let _ = writeln!(w, "spectral radius: {}", interval(&c.spectral_radius));
                let _ = writeln!(w, "rate per reflection: {}", sig12(c.per_step_rate));
                let _ = writeln!(w, "dynamical degree: {}", sig12(c.dynamical_degree));
                let _ = writeln!(
                    w,
                    "observed ratio: {} (agrees: {})",
                    c.growth_ratio.map_or_else(|| "-".to_string(), sig12),
                    c.ratio_agrees
                );
            }
            if let Some(g) = &r.growth {
                let detail = match (&g.polynomial_degree, &g.rate) {
                    (Some(d), _) => format!(" of degree {}", d),
                    (_, Some(rate)) => format!(", rate {}", interval(rate)),
                    _ => String::new(),
                };
                let _ = writeln!(w, "growth: {}{}", g.class, detail);
            }
        }
        Report::Compose(r) => {
            for (i, m) in r.maps.iter().enumerate() {
                let _ = writeln!(w, "map {}: {}", i, m);
            }
            let _ = writeln!(w, "iterations: {} (cap {})", r.iterations, r.cap);
            let degrees: Vec<String> = r.degrees[1..].iter().map(u64::to_string).collect();
            let _ = writeln!(w, "degrees: {}", degrees.join(", "));
            let _ = writeln!(w, "growth: {}", interval(&r.growth));
            if r.truncated {
                let _ = writeln!(w, "truncated by the degree cap");
            }
            if !r.pairs.is_empty() {
                let _ = writeln!(
                    w,
                    "{:<14} {:<14} {:>9} {:>6} {:>6}",
                    "f", "g", "deg(f∘g)", "bound", "holds"
                );
                for p in &r.pairs {
                    let _ = writeln!(
                        w,
                        "{:<14} {:<14} {:>9} {:>6} {:>6}",
                        p.left,
                        p.right,
                        opt(&p.composite_degree),
                        p.bound,
                        opt(&p.holds)
                    );
                }
            }
            for (k, (f, g)) in r.random_pairs.iter().enumerate() {
                let _ = writeln!(w, "random {}: f = {}, g = {}", k, f, g);
            }
        }
        Report::Scan(r) => {
            let _ = writeln!(w, "family: {}", r.family);
            let _ = writeln!(
                w,
                "grid: {}:{}:{}, iterate {}",
                r.grid.0, r.grid.1, r.grid.2, r.iterate
            );
            let _ = writeln!(
                w,
                "{:>24} {:>7} {:>6} {:>5}  flags",
                "s", "degree", "fiber", "drop"
            );
            for row in &r.rows {
                let _ = writeln!(
                    w,
                    "{:>24} {:>7} {:>6} {:>5}  {}",
                    row.s,
                    opt(&row.degree),
                    opt(&row.fiber_degree),
                    row.drop,
                    row.flags.join(",")
                );
            }
            let _ = writeln!(
                w,
                "drops: {}",
                if r.drops.is_empty() {
                    "none".to_string()
                } else {
                    r.drops.join(", ")
                }
            );
        }
        Report::Ledger(r) => {
            let _ = writeln!(
                w,
                "{:>5} {:<12} {:>6} {:>6} {:>7} {:>7} {:>9}  formula",
                "step", "event", "h11", "h22", "n_plus", "n_minus", "signature"
            );
            for row in &r.rows {
                let _ = writeln!(
                    w,
                    "{:>5} {:<12} {:>6} {:>6} {:>7} {:>7} {:>9}  {}",
                    row.step,
                    row.event,
                    row.h11,
                    row.h22,
                    row.n_plus,
                    row.n_minus,
                    row.signature,
                    row.formula_holds
                );
            }
            let _ = writeln!(w, "signature formula holds throughout: {}", r.formula_holds);
        }
        Report::Identities(r) => {
            let _ = writeln!(w, "pull-back matrix:");
            for row in &r.pullback {
                let _ = writeln!(w, "  {}", row.join(" "));
            }
            let _ = writeln!(w, "squares to the identity: {}", r.pullback_is_involution);
            for id in &r.identities {
                let _ = writeln!(w, "{}", id);
            }
            let _ = writeln!(
                w,
                "degree-2 coefficients: derived {:?}, used {:?}",
                r.derived_degree_two, r.used_degree_two
            );
            let _ = writeln!(
                w,
                "degree-1 coefficients: derived {:?}, used {:?}",
                r.derived_degree_one, r.used_degree_one
            );
            let _ = writeln!(w, "coefficients match: {}", r.coefficients_match);
        }
    }
    for warning in report.warnings() {
        let _ = writeln!(w, "warning: {}", warning);
    }
    s
}

fn table<I, R>(header: &[&str], rows: I) -> Result<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(header)?;
    for r in rows {
        wtr.write_record(r)?;
    }
    Ok(String::from_utf8(wtr.into_inner()?)?)
}

/// `# key,value` with CSV quoting of the value.
fn meta(out: &mut String, key: &str, value: &dyn ToString) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record([key.to_string(), value.to_string()])?;
    out.push_str("# ");
    out.push_str(&String::from_utf8(wtr.into_inner()?)?);
    Ok(())
}

/// Summary lines start with `#`; tables follow with a header row. Reports
/// with two tables separate them by a blank line.
pub fn csv(report: &Report) -> Result<String> {
    let mut out = String::new();
    let w = &mut out;
    match report {
        Report::Reflect(r) => {
            meta(w, "tau", &r.tau)?;
            meta(w, "equality", &r.equality)?;
            meta(w, "first_unrealizable", &opt(&r.first_unrealizable))?;
            if let Some(c) = &r.companion {
                meta(w, "block_period", &c.block_period)?;
                meta(w, "spectral_radius_lower", &c.spectral_radius.lower)?;
                meta(w, "spectral_radius_upper", &c.spectral_radius.upper)?;
                meta(w, "per_step_rate", &sig12(c.per_step_rate))?;
                meta(w, "dynamical_degree", &sig12(c.dynamical_degree))?;
            }
            if let Some(g) = &r.growth {
                meta(w, "growth", &g.class)?;
            }
            out += &table(
                &["i", "d1", "d2", "t1", "t2"],
                r.trace.iter().map(|t| {
                    [
                        t.i.to_string(),
                        t.d1.clone(),
                        t.d2.clone(),
                        t.t1.clone(),
                        t.t2.clone(),
                    ]
                }),
            )?;
        }
        Report::Compose(r) => {
            meta(w, "growth_lower", &r.growth.lower)?;
            meta(w, "growth_upper", &r.growth.upper)?;
            meta(w, "truncated", &r.truncated)?;
            out += &table(
                &["k", "degree"],
                r.degrees
                    .iter()
                    .enumerate()
                    .map(|(k, d)| [k.to_string(), d.to_string()]),
            )?;
            out.push('\n');
            out += &table(
                &["f", "g", "composite_degree", "bound", "holds"],
                r.pairs.iter().map(|p| {
                    [
                        p.left.clone(),
                        p.right.clone(),
                        opt(&p.composite_degree),
                        p.bound.to_string(),
                        opt(&p.holds),
                    ]
                }),
            )?;
        }
        Report::Scan(r) => {
            meta(w, "iterate", &r.iterate)?;
            out += &table(
                &["s", "degree", "fiber_degree", "flags", "drop"],
                r.rows.iter().map(|row| {
                    [
                        row.s.clone(),
                        opt(&row.degree),
                        opt(&row.fiber_degree),
                        row.flags.join("|"),
                        row.drop.to_string(),
                    ]
                }),
            )?;
        }
        Report::Ledger(r) => {
            meta(w, "formula_holds", &r.formula_holds)?;
            out += &table(
                &[
                    "step",
                    "event",
                    "h11",
                    "h22",
                    "n_plus",
                    "n_minus",
                    "signature",
                    "formula_holds",
                ],
                r.rows.iter().map(|row| {
                    [
                        row.step.to_string(),
                        row.event.clone(),
                        row.h11.to_string(),
                        row.h22.to_string(),
                        row.n_plus.to_string(),
                        row.n_minus.to_string(),
                        row.signature.to_string(),
                        row.formula_holds.to_string(),
                    ]
                }),
            )?;
        }
        Report::Identities(r) => {
            let fmt4 = |a: &[i64; 4]| a.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
            out += &table(
                &["name", "value"],
                [
                    [
                        "pullback_is_involution".to_string(),
                        r.pullback_is_involution.to_string(),
                    ],
                    [
                        "derived_degree_two".to_string(),
                        fmt4(&r.derived_degree_two),
                    ],
                    [
                        "derived_degree_one".to_string(),
                        fmt4(&r.derived_degree_one),
                    ],
                    ["used_degree_two".to_string(), fmt4(&r.used_degree_two)],
                    ["used_degree_one".to_string(), fmt4(&r.used_degree_one)],
                    [
                        "coefficients_match".to_string(),
                        r.coefficients_match.to_string(),
                    ],
                ],
            )?;
        }
    }
    Ok(out)
}
