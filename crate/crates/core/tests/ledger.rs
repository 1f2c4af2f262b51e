use dyndeg_core::ledger::{
    apply_all, apply_blowup, check_formula, hypersurface_euler, hypersurface_middle_hodge,
    new_ledger, BlowupEvent, LedgerError, Preset, SignatureLedger,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn counts(l: &SignatureLedger) -> (u64, u64) {
    (l.n_plus, l.n_minus)
}

#[test]
fn hodge_oracle_matches_euler_characteristic() {
    // b0 = b2 = b6 = b8 = 1 and odd Betti numbers vanish, so chi = 4 + b4
    for d in 1..=8 {
        let (h40, h31, h22) = hypersurface_middle_hodge(d);
        let b4 = 2 * h40 + 2 * h31 + h22;
        assert_eq!(hypersurface_euler(d), 4 + b4 as i64, "degree {}", d);
    }
    assert_eq!(hypersurface_middle_hodge(3).2, 21);
    assert_eq!(hypersurface_middle_hodge(1).2, 1);
}

#[test]
fn presets() {
    let cubic = new_ledger(Preset::CubicFourfold).unwrap();
    assert_eq!((cubic.profile.h11, cubic.profile.h22), (1, 21));
    assert_eq!(counts(&cubic), (21, 0));
    assert_eq!(counts(&new_ledger(Preset::P4).unwrap()), (1, 0));
    assert_eq!(
        counts(&new_ledger(Preset::Custom { h11: 2, h22: 2 }).unwrap()),
        (1, 1)
    );
    assert_eq!(
        new_ledger(Preset::Custom { h11: 0, h22: 0 }),
        Err(LedgerError::NegativeCount { h11: 0, h22: 0 })
    );
}

#[test]
fn single_events_on_the_cubic() {
    let cubic = new_ledger(Preset::CubicFourfold).unwrap();
    let p = apply_blowup(&cubic, BlowupEvent::Point);
    assert_eq!((counts(&p), p.profile.h22, p.profile.h11), ((21, 1), 22, 2));
    let c = apply_blowup(&cubic, BlowupEvent::Curve);
    assert_eq!((counts(&c), c.profile.h22), ((22, 1), 23));
    let s = apply_blowup(&cubic, BlowupEvent::surface(7).unwrap());
    assert_eq!((counts(&s), s.profile.h22), ((27, 1), 28));
    assert_eq!(s.history[0].added.len(), 7);
    assert!(BlowupEvent::surface(0).is_none());
    for l in [&cubic, &p, &c, &s] {
        assert!(check_formula(l));
    }
    let mut bad = cubic.clone();
    bad.n_plus += 1;
    assert!(!check_formula(&bad));
}

fn random_event(rng: &mut ChaCha8Rng) -> BlowupEvent {
    match rng.gen_range(0..3) {
        0 => BlowupEvent::Point,
        1 => BlowupEvent::Curve,
        _ => BlowupEvent::surface(rng.gen_range(1..=30)).unwrap(),
    }
}

#[test]
fn seeded_sequences_keep_the_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for preset in [
        Preset::CubicFourfold,
        Preset::P4,
        Preset::Custom { h11: 2, h22: 2 },
    ] {
        for _ in 0..50 {
            let start = new_ledger(preset).unwrap();
            let mut l = start.clone();
            let mut h22 = start.profile.h22;
            for step in 0..50 {
                let e = random_event(&mut rng);
                let next = apply_blowup(&l, e);
                h22 += match e {
                    BlowupEvent::Point => 1,
                    BlowupEvent::Curve => 2,
                    BlowupEvent::Surface { h11 } => u64::from(h11.get()),
                };
                assert!(check_formula(&next), "{} after {} events", preset, step + 1);
                assert_eq!(next.profile.h22, h22);
                assert_eq!(next.n_minus, l.n_minus + 1);
                assert_eq!(next.profile.h11, l.profile.h11 + 1);
                l = next;
            }
        }
    }
}

fn event() -> impl Strategy<Value = BlowupEvent> {
    prop_oneof![
        Just(BlowupEvent::Point),
        Just(BlowupEvent::Curve),
        (1u32..=40).prop_map(|r| BlowupEvent::surface(r).unwrap()),
    ]
}

proptest! {
    #[test]
    fn truncations_compose(a in proptest::collection::vec(event(), 0..30), b in proptest::collection::vec(event(), 0..30)) {
        let start = new_ledger(Preset::CubicFourfold).unwrap();
        let both: Vec<BlowupEvent> = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(apply_all(&apply_all(&start, &a), &b), apply_all(&start, &both));
    }

    #[test]
    fn every_prefix_checks(events in proptest::collection::vec(event(), 0..50)) {
        let mut l = new_ledger(Preset::P4).unwrap();
        for e in events {
            l = apply_blowup(&l, e);
            prop_assert!(check_formula(&l));
            prop_assert_eq!(l.n_plus + l.n_minus, l.profile.h22);
        }
    }
}
