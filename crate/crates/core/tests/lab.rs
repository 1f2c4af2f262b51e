use dyndeg_core::kernel::{BigInt, BigRational, UnivariatePolynomial};
use dyndeg_core::lab::{
    compose, compose_detailed, drop_points, family_degree_scan, gcd, gcd_all, gcd_homogeneous,
    iterate_degrees, orbit_closure_degree, rational_grid, reduce_components,
    submultiplicativity_check, substitute_all, LabError, MultiPoly, ParametricMap, RationalMapPn,
    DEFAULT_DEGREE_CAP,
};
use dyndeg_core::text::{parse_map, parse_parametric_map};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sigma() -> RationalMapPn {
    parse_map("[y*z : x*z : x*y]").unwrap()
}

fn linear_forms(nvars: usize, rows: &[&[i64]]) -> Vec<MultiPoly> {
    rows.iter()
        .map(|r| {
            MultiPoly::from_terms(
                nvars,
                r.iter().enumerate().map(|(i, &c)| {
                    let mut e = vec![0; nvars];
                    e[i] = 1;
                    (e, BigInt::from(c))
                }),
            )
        })
        .collect()
}

/// `[v*w : u*w : u*v]` for linear forms `u, v, w`, multiplied out directly.
fn sigma_of(forms: &[MultiPoly]) -> Vec<MultiPoly> {
    vec![
        &forms[1] * &forms[2],
        &forms[0] * &forms[2],
        &forms[0] * &forms[1],
    ]
}

const GENERIC_ROWS: [&[i64]; 3] = [&[1, 2, -1], &[3, -1, 1], &[-2, 1, 2]];

fn generic() -> RationalMapPn {
    RationalMapPn::new(sigma_of(&linear_forms(3, &GENERIC_ROWS))).unwrap()
}

fn upoly_of(c: &MultiPoly, args: &[UnivariatePolynomial]) -> UnivariatePolynomial {
    let mut acc = UnivariatePolynomial::zero();
    for (e, coeff) in c.terms() {
        let mut t = UnivariatePolynomial::from_bigints(std::slice::from_ref(coeff));
        for (u, &k) in args.iter().zip(e) {
            t = &t * &u.pow(k);
        }
        acc = &acc + &t;
    }
    acc
}

/// Degree of `f^k` from the unreduced k-fold composite restricted to random
/// lines: the components have degree `d^k` and the common factor shows up
/// as the univariate gcd on a general line.
fn line_oracle_degree(f: &RationalMapPn, k: u32, rng: &mut ChaCha8Rng) -> Option<u64> {
    let n = f.components().len();
    let full = u64::from(f.degree()).pow(k);
    let mut best: Option<u64> = None;
    for _ in 0..4 {
        let mut u: Vec<UnivariatePolynomial> = (0..n)
            .map(|_| {
                UnivariatePolynomial::from_integers(&[
                    rng.gen_range(-50..=50),
                    rng.gen_range(-50..=50),
                ])
            })
            .collect();
        for _ in 0..k {
            u = f.components().iter().map(|c| upoly_of(c, &u)).collect();
        }
        let mut g = UnivariatePolynomial::zero();
        for p in &u {
            g = if g.is_zero() {
                p.clone()
            } else if p.is_zero() {
                g
            } else {
                g.gcd(p)
            };
        }
        if g.is_zero() {
            return None;
        }
        let e = g.degree().unwrap() as u64;
        best = Some(best.map_or(e, |b: u64| b.min(e)));
    }
    best.map(|e| full - e)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn parse_examples() {
    let s = sigma();
    assert_eq!(s.degree(), 2);
    assert_eq!(s.dimension(), 2);
    let id = parse_map("[x : y : z]").unwrap();
    assert_eq!(id, RationalMapPn::identity(2));
    assert!(matches!(
        parse_map("[x^2 : y : z]"),
        Err(LabError::DegreeMismatch { .. })
    ));
    assert!(matches!(
        parse_map("[x^2 + y : y^2 : z^2]"),
        Err(LabError::NonHomogeneous { .. })
    ));
    assert!(matches!(parse_map("[x * : y]"), Err(LabError::Syntax(_))));
    // common factors and content are removed on construction
    let m = parse_map("[2x^2 : 2x*y : 2x*z]").unwrap();
    assert_eq!(m, RationalMapPn::identity(2));
}

#[test]
fn sigma_squared_is_identity() {
    let s = sigma();
    let raw = substitute_all(s.components(), s.components());
    let x = MultiPoly::var(3, 0);
    let y = MultiPoly::var(3, 1);
    let z = MultiPoly::var(3, 2);
    let xyz = &(&x * &y) * &z;
    assert_eq!(raw, vec![&xyz * &x, &xyz * &y, &xyz * &z]);
    let c = compose_detailed(&s, &s).unwrap();
    assert_eq!(c.map, RationalMapPn::identity(2));
    assert_eq!(c.cancelled_degree, 3);
    assert_eq!(line_oracle_degree(&s, 2, &mut rng(1)), Some(1));
}

#[test]
fn identity_is_neutral() {
    let id = RationalMapPn::identity(2);
    for f in [sigma(), generic()] {
        assert_eq!(compose(&f, &id).unwrap(), f);
        assert_eq!(compose(&id, &f).unwrap(), f);
    }
}

#[test]
fn sigma_after_generic_linear_keeps_degree() {
    let forms = linear_forms(3, &GENERIC_ROWS);
    let l = RationalMapPn::new(forms.clone()).unwrap();
    let c = compose_detailed(&sigma(), &l).unwrap();
    assert_eq!(c.map.degree(), 2);
    assert_eq!(c.cancelled_degree, 0);
    assert!(c
        .map
        .is_proportional_to(&RationalMapPn::new(sigma_of(&forms)).unwrap()));
    assert_eq!(line_oracle_degree(&c.map, 1, &mut rng(2)), Some(2));
}

#[test]
fn iterate_examples() {
    let s = iterate_degrees(&sigma(), 5, DEFAULT_DEGREE_CAP).unwrap();
    assert_eq!(s.degrees, [1, 2, 1, 2, 1, 2]);
    assert!(!s.truncated);
    let id = iterate_degrees(&RationalMapPn::identity(2), 3, DEFAULT_DEGREE_CAP).unwrap();
    assert_eq!(id.degrees, [1, 1, 1, 1]);
    assert_eq!(id.growth.lower, BigRational::one());
    assert_eq!(id.growth.upper, BigRational::one());
    let g = generic();
    let seq = iterate_degrees(&g, 3, DEFAULT_DEGREE_CAP).unwrap();
    assert_eq!(seq.degrees, [1, 2, 4, 8]);
    let mut r = rng(3);
    for k in 1..=3 {
        assert_eq!(
            line_oracle_degree(&g, k, &mut r),
            Some(seq.degrees[k as usize])
        );
    }
    let two = BigRational::from_integer(2.into());
    assert!(seq.growth.lower <= two && two <= seq.growth.upper);
    assert_eq!(iterate_degrees(&g, 0, 10), Err(LabError::ZeroIterations));
}

#[test]
fn degree_cap_truncates() {
    let seq = iterate_degrees(&generic(), 6, 10).unwrap();
    assert!(seq.truncated);
    assert_eq!(seq.degrees, [1, 2, 4, 8]);
}

#[test]
fn submultiplicativity_examples() {
    let s = submultiplicativity_check(&sigma(), &sigma()).unwrap();
    assert_eq!((s.holds, s.lhs, s.rhs), (true, 1, 4));
    let g = generic();
    let other = RationalMapPn::new(sigma_of(&linear_forms(
        3,
        &[&[2, -1, 1], &[1, 1, 3], &[-1, 2, 1]],
    )))
    .unwrap();
    let s = submultiplicativity_check(&g, &other).unwrap();
    assert_eq!((s.holds, s.lhs, s.rhs), (true, 4, 4));
    let s = submultiplicativity_check(&g, &RationalMapPn::identity(2)).unwrap();
    assert_eq!((s.lhs, s.rhs), (2, 2));
}

#[test]
fn composite_into_indeterminacy_is_an_error() {
    let g = parse_map("[x : 0 : 0]").unwrap();
    assert_eq!(compose(&sigma(), &g), Err(LabError::ZeroComposite));
    let p1 = parse_map("[x : y]").unwrap();
    assert!(matches!(
        compose(&sigma(), &p1),
        Err(LabError::DimensionMismatch { .. })
    ));
}

#[test]
fn gcd_examples() {
    let f = parse_map("[x : y : z]").unwrap();
    let x = &f.components()[0];
    let y = &f.components()[1];
    let z = &f.components()[2];
    let a = &(x + y) * &(y - z);
    let b = &(x + y) * &(x + z);
    assert_eq!(gcd(&a, &b), x + y);
    assert_eq!(gcd_all(&[a.clone(), b.clone(), &(x + y) * z]), x + y);
    assert_eq!(gcd_homogeneous(&[a.clone(), b]), x + y);
    assert_eq!(gcd(&a, &MultiPoly::zero(3)), a);
}

/// Nonzero roots of a random combination of `1, t^{a_1}, …, t^{a_n}`,
/// divided by the number of roots of unity fixing the parametrisation.
fn orbit_oracle(exponents: &[i64], rng: &mut ChaCha8Rng) -> u64 {
    let mut votes = std::collections::BTreeMap::new();
    let lo = exponents.iter().copied().fold(0, i64::min);
    for _ in 0..5 {
        let hi = exponents.iter().copied().fold(0, i64::max);
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        coeffs[(-lo) as usize] += BigInt::from(rng.gen_range(1..=1000));
        for &a in exponents {
            coeffs[(a - lo) as usize] += BigInt::from(rng.gen_range(1..=1000));
        }
        let p = UnivariatePolynomial::from_bigints(&coeffs);
        let val = p.coeffs().iter().take_while(|c| c.is_zero()).count() as u64;
        let roots = p.degree().unwrap() as u64 - val;
        let l = exponents
            .iter()
            .filter(|&&a| a != 0)
            .fold(1i64, |l, a| l.lcm(&a.abs()));
        let fiber = (0..l)
            .filter(|j| exponents.iter().all(|a| (j * a).rem_euclid(l) == 0))
            .count() as u64;
        *votes.entry(roots / fiber).or_insert(0) += 1;
    }
    votes.into_iter().max_by_key(|&(_, v)| v).unwrap().0
}

#[test]
fn orbit_examples() {
    let mut r = rng(4);
    for (e, want) in [
        (&[1i64, 2, 3, 4][..], 4),
        (&[1, 1, 1, 1], 1),
        (&[-2, 1], 3),
        (&[2, 4], 2),
        (&[0, 3], 1),
    ] {
        assert_eq!(orbit_closure_degree(e), Ok(want));
        assert_eq!(orbit_oracle(e, &mut r), want);
    }
    assert_eq!(
        orbit_closure_degree(&[0, 0, 0]),
        Err(LabError::ConstantOrbit)
    );
    assert_eq!(orbit_closure_degree(&[]), Err(LabError::EmptyExponents));
}

fn base_point_family() -> ParametricMap {
    // u = x + y + 2z, v = s x + y − z, w = s x + 2y + z
    let x = MultiPoly::var(4, 0);
    let y = MultiPoly::var(4, 1);
    let z = MultiPoly::var(4, 2);
    let s = MultiPoly::var(4, 3);
    let two = BigInt::from(2);
    let u = &(&x + &y) + &z.scale(&two);
    let v = &(&(&s * &x) + &y) - &z;
    let w = &(&(&s * &x) + &y.scale(&two)) + &z;
    ParametricMap::new(sigma_of(&[u, v, w])).unwrap()
}

#[test]
fn base_point_family_drops_once() {
    let fam = base_point_family();
    let text = "[s^2*x^2 + 3s*x*y + 2y^2 - y*z - z^2 : s*x^2 + s*x*y + 2s*x*z + 2x*y + x*z + 2y^2 + 5y*z + 2z^2 : s*x^2 + s*x*y + 2s*x*z + x*y - x*z + y^2 + y*z - 2z^2]";
    assert_eq!(parse_parametric_map(text).unwrap(), fam);
    let grid = rational_grid(&-BigRational::one(), &BigRational::one(), 201);
    let rows = family_degree_scan(&fam, &grid, 2, DEFAULT_DEGREE_CAP).unwrap();
    let drops = drop_points(&rows);
    assert_eq!(drops, [100]);
    assert!(rows[100].s.is_zero());
    assert_eq!(rows[100].degree, Some(3));
    assert!(rows
        .iter()
        .enumerate()
        .all(|(i, r)| i == 100 || r.degree == Some(4)));
    assert!(rows.iter().all(|r| !r.flags.is_degenerate()));
    // the drop agrees with the line oracle on the special fibre
    let special = match fam.specialize(&BigRational::zero()) {
        dyndeg_core::lab::Fiber::Map { map, .. } => map,
        other => panic!("{:?}", other),
    };
    assert_eq!(line_oracle_degree(&special, 2, &mut rng(5)), Some(3));
}

#[test]
fn degenerate_fibres_are_flagged() {
    let fam = parse_parametric_map("[s*x : s*y]").unwrap();
    let rows =
        family_degree_scan(&fam, &[BigRational::zero(), BigRational::one()], 1, 100).unwrap();
    assert!(rows[0].flags.vanishing && rows[0].degree.is_none());
    assert_eq!(rows[1].degree, Some(1));
    let fam = parse_parametric_map("[x^2 + s*y^2 : x*y]").unwrap();
    let rows =
        family_degree_scan(&fam, &[BigRational::zero(), BigRational::one()], 1, 100).unwrap();
    assert!(rows[0].flags.common_factor);
    assert_eq!(rows[0].degree, Some(1));
    assert_eq!(rows[1].degree, Some(2));
    assert!(!rows[1].flags.common_factor);
}

#[test]
fn constant_family_is_constant() {
    let fam = ParametricMap::constant(&generic());
    let grid = rational_grid(
        &BigRational::from_integer((-2).into()),
        &BigRational::from_integer(3.into()),
        11,
    );
    let rows = family_degree_scan(&fam, &grid, 3, DEFAULT_DEGREE_CAP).unwrap();
    assert!(rows.iter().all(|r| r.degree == Some(8)));
    assert!(drop_points(&rows).is_empty());
    assert_eq!(
        family_degree_scan(&fam, &[], 1, 10),
        Err(LabError::EmptyGrid)
    );
}

fn monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    if nvars == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for k in 0..=d {
        for mut rest in monomials(nvars - 1, d - k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

fn random_component(nvars: usize, d: u32) -> impl Strategy<Value = MultiPoly> {
    let mons = monomials(nvars, d);
    proptest::collection::vec(-3i64..=3, mons.len())
        .prop_filter("not all zero", |c| c.iter().any(|&x| x != 0))
        .prop_map(move |c| {
            MultiPoly::from_terms(
                nvars,
                mons.iter().cloned().zip(c.into_iter().map(BigInt::from)),
            )
        })
}

/// Degree ≤ 2 self-maps of the plane with coefficients in {−3..3}.
fn random_map() -> impl Strategy<Value = RationalMapPn> {
    (1u32..=2).prop_flat_map(|d| {
        proptest::collection::vec(random_component(3, d), 3)
            .prop_filter_map("valid map", |c| RationalMapPn::new(c).ok())
    })
}

fn random_poly(nvars: usize, max_deg: u32) -> impl Strategy<Value = MultiPoly> {
    (0..=max_deg).prop_flat_map(move |d| random_component(nvars, d))
}

/// Not necessarily homogeneous.
fn mixed_poly() -> impl Strategy<Value = MultiPoly> {
    (random_poly(3, 2), random_poly(3, 1)).prop_map(|(a, b)| &a + &b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_is_associative(f in random_map(), g in random_map(), h in random_map()) {
        let left = compose(&f, &g).and_then(|fg| compose(&fg, &h));
        let right = compose(&g, &h).and_then(|gh| compose(&f, &gh));
        match (left, right) {
            (Ok(a), Ok(b)) => {
                prop_assert!(a.is_proportional_to(&b));
                prop_assert_eq!(a, b);
            }
            (Err(LabError::ZeroComposite), _) | (_, Err(LabError::ZeroComposite)) => {}
            (a, b) => prop_assert!(false, "{:?} {:?}", a, b),
        }
    }

    #[test]
    fn content_reduction_is_idempotent(f in random_map(), factor in random_poly(3, 2), k in 1i64..=6) {
        prop_assume!(factor.is_homogeneous());
        let raw: Vec<MultiPoly> = f.components().iter().map(|c| (&factor * c).scale(&BigInt::from(k))).collect();
        let (once, g) = reduce_components(&raw);
        let (twice, g2) = reduce_components(&once);
        prop_assert_eq!(&once, &twice);
        prop_assert!(g2.is_constant());
        let planted = factor.scale(&BigInt::from(k));
        prop_assert!(g == planted || g == -&planted);
        prop_assert!(RationalMapPn::new(raw).unwrap().is_proportional_to(&f));
    }

    #[test]
    fn iterates_are_submultiplicative(f in random_map()) {
        if let Ok(seq) = iterate_degrees(&f, 4, DEFAULT_DEGREE_CAP) {
            let d1 = seq.degrees[1];
            for w in seq.degrees.windows(2) {
                prop_assert!(w[1] <= d1 * w[0]);
            }
        }
    }

    #[test]
    fn iterate_degrees_match_line_oracle(f in random_map(), seed in any::<u64>()) {
        if let Ok(seq) = iterate_degrees(&f, 3, DEFAULT_DEGREE_CAP) {
            let mut r = rng(seed);
            for k in 1..=3u32 {
                prop_assert_eq!(line_oracle_degree(&f, k, &mut r), Some(seq.degrees[k as usize]));
            }
        }
    }

    #[test]
    fn gcd_recovers_planted_factor(a in mixed_poly(), b in mixed_poly(), c in mixed_poly()) {
        let g = gcd(&(&a * &c), &(&b * &c));
        let want = &c * &gcd(&a, &b);
        prop_assert!(g == want || g == -&want, "{} vs {}", g, want);
    }

    #[test]
    fn certificate_agrees_with_exact_gcd(a in random_component(3, 2), b in random_component(3, 2), c in random_component(3, 1)) {
        let polys = [&a * &c, &b * &c];
        prop_assert_eq!(gcd_homogeneous(&polys), gcd_all(&polys));
        let plain = [a, b];
        prop_assert_eq!(gcd_homogeneous(&plain), gcd_all(&plain));
    }

    #[test]
    fn large_products_evaluate_correctly(a in random_component(3, 2), b in random_component(3, 2), ea in 10u32..20, eb in 5u32..15, p in proptest::array::uniform3(-20i64..=20)) {
        let x = a.pow(ea);
        let y = b.pow(eb);
        let pt: Vec<BigInt> = p.iter().map(|&v| BigInt::from(v)).collect();
        prop_assert_eq!((&x * &y).eval(&pt), x.eval(&pt) * y.eval(&pt));
        prop_assert_eq!(x.eval(&pt), num_traits::pow(a.eval(&pt), ea as usize));
    }

    #[test]
    fn display_parse_roundtrip(f in random_map()) {
        let text = f.to_string();
        prop_assert_eq!(parse_map(&text).unwrap(), f);
    }

    #[test]
    fn orbit_degree_matches_root_count(e in proptest::collection::vec(-9i64..=9, 1..=4), seed in any::<u64>()) {
        prop_assume!(e.iter().any(|&a| a != 0));
        prop_assert_eq!(orbit_closure_degree(&e).unwrap(), orbit_oracle(&e, &mut rng(seed)));
    }
}
