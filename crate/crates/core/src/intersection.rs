//! Divisor classes on the resolved reflection and formal degree-2 cycle
//! symbols, used to re-derive the recursion coefficients.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::kernel::IntegerMatrix;
use crate::recursion::RecursionCoefficients;

/// `h H̃ + e Ẽ + f F̃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct DivisorClass {
    pub h: i64,
    pub e: i64,
    pub f: i64,
}

impl DivisorClass {
    pub const H: DivisorClass = DivisorClass { h: 1, e: 0, f: 0 };
    pub const E: DivisorClass = DivisorClass { h: 0, e: 1, f: 0 };
    pub const F: DivisorClass = DivisorClass { h: 0, e: 0, f: 1 };
    /// `Ỹ = H̃ − 2Ẽ − F̃`.
    pub const Y: DivisorClass = DivisorClass { h: 1, e: -2, f: -1 };

    pub const fn new(h: i64, e: i64, f: i64) -> Self {
        DivisorClass { h, e, f }
    }

    pub fn as_array(&self) -> [i64; 3] {
        [self.h, self.e, self.f]
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.h + o.h, self.e + o.e, self.f + o.f)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.h - o.h, self.e - o.e, self.f - o.f)
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass::new(-self.h, -self.e, -self.f)
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, c: DivisorClass) -> DivisorClass {
        DivisorClass::new(self * c.h, self * c.e, self * c.f)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &[(self.h, "H"), (self.e, "E"), (self.f, "F")])
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[(i64, &str)]) -> fmt::Result {
    let mut first = true;
    for &(c, name) in terms {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 { "-" } else { "+" };
        if first {
            if c < 0 {
                f.write_str("-")?;
            }
        } else {
            write!(f, " {} ", sign)?;
        }
        if c.abs() != 1 {
            write!(f, "{}*", c.abs())?;
        }
        f.write_str(name)?;
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Symmetric degree-2 symbols, in increasing rewrite order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    HH,
    EE,
    HE,
    HF,
    EF,
    FF,
}

impl Symbol {
    pub const ALL: [Symbol; 6] = [
        Symbol::HH,
        Symbol::EE,
        Symbol::HE,
        Symbol::HF,
        Symbol::EF,
        Symbol::FF,
    ];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::HH => "H.H",
            Symbol::EE => "E.E",
            Symbol::HE => "H.E",
            Symbol::HF => "H.F",
            Symbol::EF => "E.F",
            Symbol::FF => "F.F",
        }
    }
}

/// Integer combination of the six symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct QuadraticCycleExpression {
    coeffs: [i64; 6],
}

impl QuadraticCycleExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn symbol(s: Symbol) -> Self {
        let mut e = Self::zero();
        e.coeffs[s.index()] = 1;
        e
    }

    pub fn from_terms(terms: &[(i64, Symbol)]) -> Self {
        let mut e = Self::zero();
        for &(c, s) in terms {
            e.coeffs[s.index()] += c;
        }
        e
    }

    pub fn coeff(&self, s: Symbol) -> i64 {
        self.coeffs[s.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Symbols with nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = Symbol> + '_ {
        Symbol::ALL.into_iter().filter(|s| self.coeff(*s) != 0)
    }

    /// Symmetric bilinear product of two classes.
    pub fn product(a: DivisorClass, b: DivisorClass) -> Self {
        Self::from_terms(&[
            (a.h * b.h, Symbol::HH),
            (a.e * b.e, Symbol::EE),
            (a.f * b.f, Symbol::FF),
            (a.h * b.e + a.e * b.h, Symbol::HE),
            (a.h * b.f + a.f * b.h, Symbol::HF),
            (a.e * b.f + a.f * b.e, Symbol::EF),
        ])
    }

    fn substitute(&self, s: Symbol, rhs: &QuadraticCycleExpression) -> Self {
        let c = self.coeff(s);
        let mut out = *self;
        out.coeffs[s.index()] = 0;
        out + c * *rhs
    }
}

impl Add for QuadraticCycleExpression {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut c = self.coeffs;
        for (x, y) in c.iter_mut().zip(o.coeffs) {
            *x += y;
        }
        QuadraticCycleExpression { coeffs: c }
    }
}

impl Sub for QuadraticCycleExpression {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-1) * o
    }
}

impl Mul<QuadraticCycleExpression> for i64 {
    type Output = QuadraticCycleExpression;
    fn mul(self, e: QuadraticCycleExpression) -> QuadraticCycleExpression {
        QuadraticCycleExpression {
            coeffs: e.coeffs.map(|c| self * c),
        }
    }
}

impl fmt::Display for QuadraticCycleExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i64, &str)> = Symbol::ALL
            .iter()
            .map(|s| (self.coeff(*s), s.name()))
            .collect();
        write_terms(f, &terms)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    FourfoldLevel,
    AssumptionLevel,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::FourfoldLevel => "fourfold-level",
            Provenance::AssumptionLevel => "assumption-level",
        })
    }
}

/// `lhs → rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Symbol,
    pub rhs: QuadraticCycleExpression,
    pub provenance: Provenance,
    pub label: &'static str,
}

impl Rule {
    /// Orients the relation `expr ≡ 0` on its largest symbol, which must
    /// carry a unit coefficient.
    pub fn orient(
        expr: QuadraticCycleExpression,
        provenance: Provenance,
        label: &'static str,
    ) -> Result<Rule, IntersectionError> {
        let lhs = expr
            .support()
            .last()
            .ok_or(IntersectionError::TrivialRelation(label))?;
        let c = expr.coeff(lhs);
        if c.abs() != 1 {
            return Err(IntersectionError::NonUnitLeading(label));
        }
        let rest = expr - c * QuadraticCycleExpression::symbol(lhs);
        Ok(Rule {
            lhs,
            rhs: (-c) * rest,
            provenance,
            label,
        })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {}  [{}: {}]",
            self.lhs.name(),
            self.rhs,
            self.provenance,
            self.label
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntersectionError {
    TrivialRelation(&'static str),
    NonUnitLeading(&'static str),
    NonTerminating,
    NonConfluent { symbol: Symbol },
    Undetermined(QuadraticCycleExpression),
}

impl fmt::Display for IntersectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntersectionError::TrivialRelation(l) => {
                write!(f, "relation '{}' is identically zero", l)
            }
            IntersectionError::NonUnitLeading(l) => {
                write!(f, "relation '{}' cannot be oriented over the integers", l)
            }
            IntersectionError::NonTerminating => f.write_str("rule set does not terminate"),
            IntersectionError::NonConfluent { symbol } => write!(
                f,
                "rule set is not confluent: {} reduces differently under different rule orders",
                symbol.name()
            ),
            IntersectionError::Undetermined(e) => write!(
                f,
                "reduced expression {} still contains symbols other than H.H and E.E",
                e
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for IntersectionError {}

/// Oriented rewrite rules, checked for termination and confluence on
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSet {
    rules: Vec<Rule>,
}

impl RelationSet {
    pub fn new(rules: Vec<Rule>) -> Result<Self, IntersectionError> {
        let set = RelationSet { rules };
        set.check_terminating()?;
        set.check_confluent()?;
        Ok(set)
    }

    pub fn empty() -> Self {
        RelationSet { rules: Vec::new() }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// `H̃·Ẽ ≡ 0` and `σ*H̃·Ỹ ≡ 0`, the latter expanded through the pull-back
    /// matrix.
    pub fn fourfold_level() -> Self {
        RelationSet::new(fourfold_rules()).expect("fourfold rules are confluent")
    }

    /// `F·D = 0` and `E·F = 0`.
    pub fn assumption_level() -> Self {
        RelationSet::new(assumption_rules()).expect("assumption rules are confluent")
    }

    /// Fourfold-level rules followed by assumption-level rules.
    pub fn full() -> Self {
        let mut rules = fourfold_rules();
        rules.extend(assumption_rules());
        RelationSet::new(rules).expect("combined rules are confluent")
    }

    /// The same rules applied in the order given by `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        RelationSet {
            rules: perm.iter().map(|&i| self.rules[i].clone()).collect(),
        }
    }

    fn check_terminating(&self) -> Result<(), IntersectionError> {
        // the dependency graph lhs -> rhs symbols must be acyclic
        let mut state = [0u8; 6];
        fn visit(s: Symbol, rules: &[Rule], state: &mut [u8; 6]) -> Result<(), IntersectionError> {
            match state[s.index()] {
                1 => return Err(IntersectionError::NonTerminating),
                2 => return Ok(()),
                _ => {}
            }
            state[s.index()] = 1;
            for r in rules.iter().filter(|r| r.lhs == s) {
                for t in r.rhs.support() {
                    visit(t, rules, state)?;
                }
            }
            state[s.index()] = 2;
            Ok(())
        }
        for s in Symbol::ALL {
            visit(s, &self.rules, &mut state)?;
        }
        Ok(())
    }

    fn check_confluent(&self) -> Result<(), IntersectionError> {
        let n = self.rules.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let reference: Vec<QuadraticCycleExpression> = Symbol::ALL
            .iter()
            .map(|s| self.reduce_in_order(QuadraticCycleExpression::symbol(*s)))
            .collect();
        // Heap's algorithm over all rule orders; reduction is linear, so
        // comparing on the basis symbols covers every expression.
        let mut c = alloc::vec![0usize; n];
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                let alt = self.permuted(&perm);
                for (s, want) in Symbol::ALL.iter().zip(&reference) {
                    if alt.reduce_in_order(QuadraticCycleExpression::symbol(*s)) != *want {
                        return Err(IntersectionError::NonConfluent { symbol: *s });
                    }
                }
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        Ok(())
    }

    fn reduce_in_order(&self, mut e: QuadraticCycleExpression) -> QuadraticCycleExpression {
        loop {
            match self.rules.iter().find(|r| e.coeff(r.lhs) != 0) {
                Some(r) => e = e.substitute(r.lhs, &r.rhs),
                None => return e,
            }
        }
    }

    /// Rewrites until no rule applies.
    pub fn reduce(&self, e: QuadraticCycleExpression) -> QuadraticCycleExpression {
        self.reduce_in_order(e)
    }
}

fn fourfold_rules() -> Vec<Rule> {
    let he = Rule {
        lhs: Symbol::HE,
        rhs: QuadraticCycleExpression::zero(),
        provenance: Provenance::FourfoldLevel,
        label: "H.E = 0",
    };
    let sigma_h_y = QuadraticCycleExpression::product(pullback(DivisorClass::H), DivisorClass::Y);
    let ff = Rule::orient(sigma_h_y, Provenance::FourfoldLevel, "sigma*H.Y = 0")
        .expect("sigma*H.Y has a unit F.F coefficient");
    alloc::vec![he, ff]
}

fn assumption_rules() -> Vec<Rule> {
    alloc::vec![
        Rule {
            lhs: Symbol::HF,
            rhs: QuadraticCycleExpression::zero(),
            provenance: Provenance::AssumptionLevel,
            label: "F.D = 0",
        },
        Rule {
            lhs: Symbol::EF,
            rhs: QuadraticCycleExpression::zero(),
            provenance: Provenance::AssumptionLevel,
            label: "E.F = 0",
        },
    ]
}

/// Columns are the pull-backs of `H̃, Ẽ, F̃`.
pub fn pullback_matrix() -> IntegerMatrix {
    IntegerMatrix::from_rows(&[&[2, 1, 0], &[-3, -2, 0], &[-1, -1, 1]])
}

/// `σ*` on a class.
pub fn pullback(c: DivisorClass) -> DivisorClass {
    let m = pullback_matrix();
    let v = m
        .mul_vec(&[c.h.into(), c.e.into(), c.f.into()])
        .expect("3x3 times 3");
    let g = |x: &BigInt| num_traits::ToPrimitive::to_i64(x).expect("pull-back overflow");
    DivisorClass::new(g(&v[0]), g(&v[1]), g(&v[2]))
}

/// True iff `m² = I`.
pub fn is_involution(m: &IntegerMatrix) -> bool {
    m.is_square()
        && m.mul(m)
            .is_ok_and(|sq| sq == IntegerMatrix::identity(m.rows()))
}

pub fn involution_check() -> bool {
    is_involution(&pullback_matrix())
}

/// `c·c` reduced by `rules`.
pub fn expand_square(c: DivisorClass, rules: &RelationSet) -> QuadraticCycleExpression {
    rules.reduce(QuadraticCycleExpression::product(c, c))
}

/// Degree-1 symbols `H̃·h, Ẽ·h, F̃·h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LinearCycleExpression {
    pub h: i64,
    pub e: i64,
    pub f: i64,
}

impl LinearCycleExpression {
    pub fn dot_h(c: DivisorClass) -> Self {
        LinearCycleExpression {
            h: c.h,
            e: c.e,
            f: c.f,
        }
    }

    /// Applies `F·h = 0`.
    pub fn reduce(self) -> Self {
        LinearCycleExpression { f: 0, ..self }
    }
}

impl fmt::Display for LinearCycleExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &[(self.h, "H.h"), (self.e, "E.h"), (self.f, "F.h")])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedCoefficients {
    pub degree_two: RecursionCoefficients,
    pub degree_one: RecursionCoefficients,
    /// Human-readable identities behind the coefficients.
    pub identities: Vec<String>,
}

fn read_quadratic(e: QuadraticCycleExpression) -> Result<(i64, i64), IntersectionError> {
    if e.support().any(|s| s != Symbol::HH && s != Symbol::EE) {
        return Err(IntersectionError::Undetermined(e));
    }
    // H.H is the previous degree; E.E = Y.Y of the predecessor = -t
    Ok((e.coeff(Symbol::HH), -e.coeff(Symbol::EE)))
}

/// Reduces `(σ*H̃)²`, `−Ỹ²`, `σ*H̃·h` and `Ỹ·h` under all rules and reads
/// off the recursion coefficients.
pub fn derive_recursion_coefficients() -> Result<DerivedCoefficients, IntersectionError> {
    let mut rules = fourfold_rules();
    rules.extend(assumption_rules());
    let full = RelationSet::new(rules)?;
    let fourfold = RelationSet::new(fourfold_rules())?;

    let sigma_h = pullback(DivisorClass::H);
    let d_expr = expand_square(sigma_h, &full);
    let t_expr = (-1) * expand_square(DivisorClass::Y, &full);
    let d2 = read_quadratic(d_expr)?;
    let t2 = read_quadratic(t_expr)?;

    let d_lin = LinearCycleExpression::dot_h(sigma_h).reduce();
    let t_lin = LinearCycleExpression::dot_h(DivisorClass::Y).reduce();
    // E.h = Y.h of the predecessor = t directly
    let d1 = (d_lin.h, d_lin.e);
    let t1 = (t_lin.h, t_lin.e);

    let mut identities = Vec::new();
    for r in full.rules() {
        identities.push(alloc::format!("rule {}", r));
    }
    identities.push(alloc::format!(
        "(sigma*H)^2 = {}  (fourfold-level)",
        expand_square(sigma_h, &fourfold)
    ));
    identities.push(alloc::format!(
        "-Y^2 = {}  (fourfold-level)",
        (-1) * expand_square(DivisorClass::Y, &fourfold)
    ));
    identities.push(alloc::format!("(sigma*H)^2 = {}  (all rules)", d_expr));
    identities.push(alloc::format!("-Y^2 = {}  (all rules)", t_expr));
    identities.push(alloc::format!("sigma*H.h = {}", d_lin));
    identities.push(alloc::format!("Y.h = {}", t_lin));

    Ok(DerivedCoefficients {
        degree_two: RecursionCoefficients { d: d2, t: t2 },
        degree_one: RecursionCoefficients { d: d1, t: t1 },
        identities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ff_rule_is_derived() {
        let rules = fourfold_rules();
        assert_eq!(rules[1].lhs, Symbol::FF);
        assert_eq!(
            rules[1].rhs,
            QuadraticCycleExpression::from_terms(&[
                (-2, Symbol::HH),
                (7, Symbol::HE),
                (3, Symbol::HF),
                (-6, Symbol::EE),
                (-5, Symbol::EF),
            ])
        );
    }

    #[test]
    fn cyclic_rules_are_rejected() {
        let a = Rule {
            lhs: Symbol::HE,
            rhs: QuadraticCycleExpression::symbol(Symbol::EF),
            provenance: Provenance::FourfoldLevel,
            label: "a",
        };
        let b = Rule {
            lhs: Symbol::EF,
            rhs: QuadraticCycleExpression::symbol(Symbol::HE),
            provenance: Provenance::FourfoldLevel,
            label: "b",
        };
        assert_eq!(
            RelationSet::new(alloc::vec![a, b]),
            Err(IntersectionError::NonTerminating)
        );
    }

    #[test]
    fn conflicting_rules_are_rejected() {
        let a = Rule {
            lhs: Symbol::HE,
            rhs: QuadraticCycleExpression::zero(),
            provenance: Provenance::FourfoldLevel,
            label: "a",
        };
        let b = Rule {
            lhs: Symbol::HE,
            rhs: QuadraticCycleExpression::symbol(Symbol::HH),
            provenance: Provenance::AssumptionLevel,
            label: "b",
        };
        assert!(matches!(
            RelationSet::new(alloc::vec![a, b]),
            Err(IntersectionError::NonConfluent { .. })
        ));
    }

    #[test]
    fn display() {
        let e = QuadraticCycleExpression::from_terms(&[(2, Symbol::HH), (-1, Symbol::HF)]);
        assert_eq!(alloc::format!("{}", e), "2*H.H - H.F");
        assert_eq!(alloc::format!("{}", DivisorClass::Y), "H - 2*E - F");
        assert_eq!(alloc::format!("{}", QuadraticCycleExpression::zero()), "0");
    }
}
