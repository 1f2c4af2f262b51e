//! Reading maps, families, grids and scripts from files or inline text.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use dyndeg_core::kernel::{BigInt, BigRational};
use dyndeg_core::lab::{LabError, ParametricMap, RationalMapPn};
use dyndeg_core::text::{parse_map, parse_parametric_map, ParseError};
use num_traits::Zero;

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Non-blank lines with `#` comments removed, paired with their 1-based
/// line numbers.
pub fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect()
}

fn relocate(e: LabError, line: usize) -> anyhow::Error {
    match e {
        LabError::Syntax(p) => anyhow::Error::new(ParseError {
            line: p.line + line - 1,
            ..p
        }),
        other => anyhow::Error::new(other).context(format!("line {}", line)),
    }
}

/// One map per line.
pub fn parse_map_list(text: &str) -> Result<Vec<RationalMapPn>> {
    let maps = content_lines(text)
        .into_iter()
        .map(|(n, l)| parse_map(l).map_err(|e| relocate(e, n)))
        .collect::<Result<Vec<_>>>()?;
    if maps.is_empty() {
        bail!("no map found in input");
    }
    Ok(maps)
}

/// Exactly one family per input.
pub fn parse_family(text: &str) -> Result<ParametricMap> {
    let lines = content_lines(text);
    match lines.as_slice() {
        [(n, l)] => parse_parametric_map(l).map_err(|e| relocate(e, *n)),
        [] => bail!("no family found in input"),
        [_, (n, _), ..] => bail!("line {}: a family file holds a single map", n),
    }
}

/// `p`, `p/q` or a decimal such as `-0.25`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            bail!("'{}' is not a rational number", s);
        }
        let mut n: BigInt = digits
            .parse()
            .map_err(|_| anyhow::anyhow!("'{}' is not a rational number", s))?;
        if neg {
            n = -n;
        }
        return Ok(BigRational::new(
            n,
            num_traits::pow(BigInt::from(10), frac.len()),
        ));
    }
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse()
            .map_err(|_| anyhow::anyhow!("'{}' is not a rational number", s))
    };
    let (p, q) = (int(p)?, int(q)?);
    if q.is_zero() {
        bail!("'{}' has a zero denominator", s);
    }
    Ok(BigRational::new(p, q))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub lo: BigRational,
    pub hi: BigRational,
    pub count: usize,
}

impl std::str::FromStr for GridSpec {
    type Err = anyhow::Error;

    /// `lo:hi:count`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, count] = parts.as_slice() else {
            bail!("grid must look like lo:hi:count, got '{}'", s);
        };
        let count: usize = count
            .trim()
            .parse()
            .with_context(|| format!("grid count '{}' is not a non-negative integer", count))?;
        Ok(GridSpec {
            lo: parse_rational(lo)?,
            hi: parse_rational(hi)?,
            count,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        assert_eq!(parse_rational("-0.25").unwrap(), r(-1, 4));
        assert_eq!(parse_rational("3/6").unwrap(), r(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), r(-7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn grid_spec() {
        let g: GridSpec = "-1:1:201".parse().unwrap();
        assert_eq!(g.count, 201);
        assert!("1:2".parse::<GridSpec>().is_err());
    }

    #[test]
    fn comment_lines_keep_numbers() {
        let text = "# a\n\n[x : y] # identity\n";
        assert_eq!(content_lines(text), [(3, "[x : y] ")]);
        let err = parse_map_list("# c\n[x : y\n").unwrap_err();
        assert!(format!("{}", err).starts_with("line 2,"), "{}", err);
    }
}
