//! Parsers for the text inputs: successor specs, polynomial maps and
//! blow-up event scripts. Errors carry 1-based line and column.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::lab::{LabError, MultiPoly, ParametricMap, RationalMapPn};
use crate::ledger::{BlowupEvent, Preset};
use crate::recursion::{Successor, SuccessorFunction};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParseError {}

/// Line and column of byte offset `pos`.
fn locate(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn error_at(text: &str, pos: usize, message: impl Into<String>) -> ParseError {
    let (line, column) = locate(text, pos);
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Byte cursor over ASCII-oriented input.
struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&alloc::format!("'{}'", c)))
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let found = match self.peek() {
            None => "end of input".to_string(),
            Some(c) => alloc::format!("'{}'", c),
        };
        error_at(
            self.text,
            self.pos,
            alloc::format!("expected {}, found {}", wanted, found),
        )
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos > start {
            Some(&self.text[start..self.pos])
        } else {
            None
        }
    }

    fn integer_u64(&mut self, what: &str) -> Result<u64, ParseError> {
        let start = self.pos;
        match self.digits() {
            None => Err(self.unexpected(what)),
            Some(d) => d
                .parse()
                .map_err(|_| error_at(self.text, start, alloc::format!("{} is too large", what))),
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }
}

// ---------------------------------------------------------------- maps

/// All names a polynomial may use, in coordinate order, then the parameter.
const NAMES: [char; 6] = ['x', 'y', 'z', 'w', 'v', 's'];
const PARAMETER: usize = 5;

struct RawTerm {
    coeff: BigInt,
    /// (name index, exponent, byte offset)
    factors: Vec<(usize, u32, usize)>,
}

fn parse_term(cur: &mut Cursor<'_>, negative: bool) -> Result<RawTerm, ParseError> {
    cur.skip_ws();
    let start = cur.pos;
    let mut coeff = match cur.digits() {
        Some(d) => d.parse::<BigInt>().expect("digits parse"),
        None => BigInt::from(1),
    };
    let has_number = cur.pos > start;
    if negative {
        coeff = -coeff;
    }
    let mut factors = Vec::new();
    loop {
        cur.skip_ws();
        let save = cur.pos;
        let starred = cur.eat('*');
        cur.skip_ws();
        let at = cur.pos;
        match cur.peek().and_then(|c| NAMES.iter().position(|&n| n == c)) {
            Some(idx) => {
                cur.bump();
                let mut exp = 1u32;
                if cur.eat('^') {
                    let p = cur.pos;
                    let e = cur.integer_u64("an exponent")?;
                    exp = u32::try_from(e)
                        .map_err(|_| error_at(cur.text, p, "exponent is too large"))?;
                }
                factors.push((idx, exp, at));
            }
            None => {
                if starred {
                    return Err(cur.unexpected("a variable (x, y, z, w, v or s)"));
                }
                cur.pos = save;
                break;
            }
        }
    }
    if !has_number && factors.is_empty() {
        return Err(cur.unexpected("a term"));
    }
    Ok(RawTerm { coeff, factors })
}

fn parse_poly(cur: &mut Cursor<'_>) -> Result<Vec<RawTerm>, ParseError> {
    let mut terms = Vec::new();
    let mut negative = if cur.eat('-') {
        true
    } else {
        cur.eat('+');
        false
    };
    loop {
        terms.push(parse_term(cur, negative)?);
        if cur.eat('+') {
            negative = false;
        } else if cur.eat('-') {
            negative = true;
        } else {
            break;
        }
    }
    Ok(terms)
}

/// Components as raw terms; the caller decides which names are allowed.
fn parse_components(text: &str) -> Result<Vec<Vec<RawTerm>>, ParseError> {
    let mut cur = Cursor::new(text);
    cur.expect('[')?;
    let mut comps = alloc::vec![parse_poly(&mut cur)?];
    while cur.eat(':') {
        comps.push(parse_poly(&mut cur)?);
    }
    if comps.len() < 2 {
        return Err(cur.unexpected("':'"));
    }
    cur.expect(']')?;
    if !cur.at_end() {
        return Err(cur.unexpected("end of input"));
    }
    Ok(comps)
}

fn build_polys(
    text: &str,
    comps: Vec<Vec<RawTerm>>,
    parametric: bool,
) -> Result<Vec<MultiPoly>, LabError> {
    let k = comps.len();
    if k > PARAMETER {
        return Err(LabError::ComponentCount { found: k });
    }
    let nvars = if parametric { k + 1 } else { k };
    let mut out = Vec::with_capacity(k);
    for comp in comps {
        let mut terms = Vec::with_capacity(comp.len());
        for t in comp {
            let mut e = alloc::vec![0u32; nvars];
            for (idx, exp, at) in t.factors {
                let slot = if idx == PARAMETER {
                    if !parametric {
                        return Err(error_at(
                            text,
                            at,
                            "the parameter s is only allowed in families",
                        )
                        .into());
                    }
                    k
                } else if idx < k {
                    idx
                } else {
                    return Err(error_at(
                        text,
                        at,
                        alloc::format!(
                            "variable {} is not a coordinate of P^{}",
                            NAMES[idx],
                            k - 1
                        ),
                    )
                    .into());
                };
                e[slot] += exp;
            }
            terms.push((e, t.coeff));
        }
        out.push(MultiPoly::from_terms(nvars, terms));
    }
    Ok(out)
}

/// Parses `[p_0 : … : p_n]` over the coordinates `x, y, z, w, v` (the first
/// `n + 1` of them), checks homogeneity and degrees, and reduces.
pub fn parse_map(text: &str) -> Result<RationalMapPn, LabError> {
    let comps = parse_components(text)?;
    RationalMapPn::new(build_polys(text, comps, false)?)
}

/// Like [`parse_map`], with the parameter `s` allowed in coefficients.
pub fn parse_parametric_map(text: &str) -> Result<ParametricMap, LabError> {
    let comps = parse_components(text)?;
    ParametricMap::new(build_polys(text, comps, true)?)
}

// ---------------------------------------------------------------- τ specs

/// Parses `N=<n>; tau: 1-><v>, 2-><v>, …` where each value is a positive
/// integer or `inf`. Every index `1..=N` must appear once; admissibility is
/// left to [`SuccessorFunction::validate`].
pub fn parse_tau_spec(text: &str) -> Result<SuccessorFunction, ParseError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    if !cur.eat('N') {
        return Err(cur.unexpected("'N'"));
    }
    cur.expect('=')?;
    let n_pos = cur.pos;
    let n = cur.integer_u64("the period N")?;
    if n == 0 {
        return Err(error_at(text, n_pos, "period N must be positive"));
    }
    cur.expect(';')?;
    cur.skip_ws();
    if !cur.text[cur.pos..].starts_with("tau") {
        return Err(cur.unexpected("'tau'"));
    }
    cur.pos += 3;
    cur.expect(':')?;
    let mut slots: Vec<Option<Successor>> = alloc::vec![None; n as usize];
    loop {
        cur.skip_ws();
        let k_pos = cur.pos;
        let k = cur.integer_u64("an index")?;
        if k == 0 || k > n {
            return Err(error_at(
                text,
                k_pos,
                alloc::format!("index {} is outside 1..={}", k, n),
            ));
        }
        cur.expect('-')?;
        cur.expect('>')?;
        cur.skip_ws();
        let value = if cur.text[cur.pos..].starts_with("inf") {
            cur.pos += 3;
            Successor::Infinity
        } else if cur.text[cur.pos..].starts_with('∞') {
            cur.pos += '∞'.len_utf8();
            Successor::Infinity
        } else {
            Successor::Finite(cur.integer_u64("a successor value or 'inf'")?)
        };
        let slot = &mut slots[k as usize - 1];
        if slot.is_some() {
            return Err(error_at(
                text,
                k_pos,
                alloc::format!("index {} given twice", k),
            ));
        }
        *slot = Some(value);
        if !cur.eat(',') {
            break;
        }
    }
    if !cur.at_end() {
        return Err(cur.unexpected("',' or end of input"));
    }
    let mut successors = Vec::with_capacity(n as usize);
    for (i, s) in slots.into_iter().enumerate() {
        match s {
            Some(s) => successors.push(s),
            None => {
                return Err(error_at(
                    text,
                    cur.pos,
                    alloc::format!("index {} has no value", i + 1),
                ))
            }
        }
    }
    Ok(SuccessorFunction::new(n, successors))
}

// ---------------------------------------------------------------- scripts

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventScript {
    pub preset: Preset,
    pub events: Vec<BlowupEvent>,
}

/// One command per line: a first `start cubic | p4 | custom <h11> <h22>`
/// line, then `point`, `curve` or `surface <h11>` lines. `#` starts a
/// comment; blank lines are ignored.
pub fn parse_event_script(text: &str) -> Result<EventScript, ParseError> {
    let mut preset = None;
    let mut events = Vec::new();
    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let line_start = offset;
        offset += raw.len();
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<(usize, &str)> = split_words(content);
        let Some(&(col0, head)) = words.first() else {
            continue;
        };
        let at = |i: usize| line_start + words.get(i).map_or(content.trim_end().len(), |w| w.0);
        let number = |i: usize, what: &str| -> Result<u64, ParseError> {
            match words.get(i) {
                None => Err(error_at(text, at(i), alloc::format!("missing {}", what))),
                Some(&(_, w)) => w.parse().map_err(|_| {
                    error_at(
                        text,
                        at(i),
                        alloc::format!("{} must be a nonnegative integer, found '{}'", what, w),
                    )
                }),
            }
        };
        let expect_len = |n: usize| -> Result<(), ParseError> {
            if words.len() > n {
                Err(error_at(
                    text,
                    at(n),
                    alloc::format!("unexpected '{}'", words[n].1),
                ))
            } else {
                Ok(())
            }
        };
        if preset.is_none() {
            if head != "start" {
                return Err(error_at(text, line_start + col0, "script must begin with 'start cubic', 'start p4' or 'start custom <h11> <h22>'"));
            }
            let which = words.get(1).map(|w| w.1);
            preset = Some(match which {
                Some("cubic") => {
                    expect_len(2)?;
                    Preset::CubicFourfold
                }
                Some("p4") => {
                    expect_len(2)?;
                    Preset::P4
                }
                Some("custom") => {
                    let h11 = number(2, "h11")?;
                    let h22 = number(3, "h22")?;
                    expect_len(4)?;
                    Preset::Custom { h11, h22 }
                }
                _ => return Err(error_at(text, at(1), "expected 'cubic', 'p4' or 'custom'")),
            });
            continue;
        }
        let event = match head {
            "point" => {
                expect_len(1)?;
                BlowupEvent::Point
            }
            "curve" => {
                expect_len(1)?;
                BlowupEvent::Curve
            }
            "surface" => {
                let h = number(1, "h11 of the surface")?;
                expect_len(2)?;

                u32::try_from(h)
                    .ok()
                    .and_then(BlowupEvent::surface)
                    .ok_or_else(|| error_at(text, at(1), "surface h11 must be at least 1"))?
            }
            "start" => {
                return Err(error_at(
                    text,
                    line_start + col0,
                    "'start' may appear only once",
                ))
            }
            other => {
                return Err(error_at(
                    text,
                    line_start + col0,
                    alloc::format!(
                        "unknown event '{}', expected point, curve or surface",
                        other
                    ),
                ))
            }
        };
        events.push(event);
    }
    match preset {
        Some(preset) => Ok(EventScript { preset, events }),
        None => Err(error_at(
            text,
            text.len(),
            "empty script, expected a 'start' line",
        )),
    }
}

fn split_words(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        if c.is_whitespace() {
            if let Some(st) = start.take() {
                out.push((st, &s[st..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push((st, &s[st..]));
    }
    out
}

/// Renders an event script that [`parse_event_script`] reads back.
pub fn format_event_script(script: &EventScript) -> String {
    let mut out = alloc::format!("start {}\n", script.preset);
    for e in &script.events {
        out.push_str(&alloc::format!("{}\n", e));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_errors_have_positions() {
        let e = parse_map("[x*y : y*w : x^2]").unwrap_err();
        match e {
            LabError::Syntax(p) => assert_eq!((p.line, p.column), (1, 10)),
            other => panic!("{:?}", other),
        }
        let e = parse_map("[x +  : y]").unwrap_err();
        assert!(
            matches!(e, LabError::Syntax(ParseError { column: 7, .. })),
            "{:?}",
            e
        );
        assert!(matches!(
            parse_map("[x^2 : y : z]"),
            Err(LabError::DegreeMismatch { .. })
        ));
        assert!(matches!(
            parse_map("[x^2 + y : y^2 : z^2]"),
            Err(LabError::NonHomogeneous { component: 0 })
        ));
        assert!(matches!(parse_map("[s*x : y]"), Err(LabError::Syntax(_))));
    }

    #[test]
    fn terms() {
        let m = parse_map("[2x^2 - 3*x*y : +y ^ 2: -0*x^2 + z*z]").unwrap();
        assert_eq!(alloc::format!("{}", m), "[2*x^2 - 3*x*y : y^2 : z^2]");
        assert!(parse_map("[0 : 0]").is_err());
        assert!(parse_map("[x : y").is_err());
        assert!(parse_map("[x : y] z").is_err());
    }

    #[test]
    fn tau_specs() {
        let t = parse_tau_spec("N=2; tau: 2->inf, 1->5").unwrap();
        assert_eq!(alloc::format!("{}", t), "N=2; tau: 1->5, 2->inf");
        assert_eq!(parse_tau_spec(&alloc::format!("{}", t)).unwrap(), t);
        assert!(parse_tau_spec("N=2; tau: 1->5").is_err());
        assert!(parse_tau_spec("N=1; tau: 1->4, 1->5").is_err());
        let e = parse_tau_spec("N=1; tau: 1->x").unwrap_err();
        assert_eq!((e.line, e.column), (1, 14));
    }

    #[test]
    fn scripts() {
        let s = parse_event_script("start cubic\npoint # blow up a point\n\nsurface 3\n").unwrap();
        assert_eq!(s.preset, Preset::CubicFourfold);
        assert_eq!(
            s.events,
            [BlowupEvent::Point, BlowupEvent::surface(3).unwrap()]
        );
        assert_eq!(parse_event_script(&format_event_script(&s)).unwrap(), s);
        let e = parse_event_script("start p4\nsurface 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 9));
        assert!(parse_event_script("point\n").is_err());
        assert!(parse_event_script("start custom 1\n").is_err());
        let c = parse_event_script("start custom 2 5").unwrap();
        assert_eq!(c.preset, Preset::Custom { h11: 2, h22: 5 });
        assert_eq!(parse_event_script(&format_event_script(&c)).unwrap(), c);
    }
}
