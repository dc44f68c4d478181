use dax_core::examples;
use dax_core::groupring::RingElement;
use dax_core::groups::{Group, GroupModel};
use dax_core::homotopy::{
    change_whisker, concat, mu3_track, realize, reverse, sheet_flip, time, verify_plan, whitney_plan, DoublePoint,
    Track,
};
use dax_core::isotopy::{
    affine_act, fq_based, is_free_isotopic, product_entry, self_homotopy, stab_table, CosetClass, Decision,
};
use dax_core::manifold::{phi, ClosurePolicy, ManifoldScenario, Pi3Generator};
use dax_core::random;
use dax_core::target::reduce_to_a;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn models() -> Vec<Group> {
    vec![
        GroupModel::free(&["g", "h"]).unwrap().into(),
        GroupModel::abelian(&[0, 3], None).unwrap().into(),
        GroupModel::permutation(3, vec![vec![1, 0, 2], vec![1, 2, 0]], Some(&["a", "r"])).unwrap().into(),
        GroupModel::direct_product(vec![
            GroupModel::free(&["g"]).unwrap(),
            GroupModel::abelian(&[2], Some(&["t"])).unwrap(),
        ])
        .unwrap()
        .into(),
    ]
}

fn setup(seed: u64) -> (ChaCha8Rng, Group) {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let ms = models();
    let g = ms[r.gen_range(0..ms.len())].clone();
    (r, g)
}

fn free_track(group: &Group, r: &mut ChaCha8Rng) -> Track {
    let core = random::element(group, r, 3);
    random::track(group, r, 7, core)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn mu3_ignores_order_times_and_flips(seed in any::<u64>()) {
        let (mut r, g) = setup(seed);
        let h = random::based_track(&g, &mut r, 8);
        let mut pts = h.points().to_vec();
        pts.shuffle(&mut r);
        let n = pts.len() as i64;
        let mut slots: Vec<i64> = (1..=n).collect();
        slots.shuffle(&mut r);
        let moved: Vec<DoublePoint> = pts
            .iter()
            .zip(slots)
            .map(|(p, s)| {
                let q = if r.gen_bool(0.5) { sheet_flip(p) } else { p.clone() };
                DoublePoint { time: time(s, 2 * n + 1), ..q }
            })
            .collect();
        prop_assert_eq!(mu3_track(&Track::based(&g, moved).unwrap()), mu3_track(&h));
    }

    #[test]
    fn concat_reverse_whisker_identities(seed in any::<u64>()) {
        let (mut r, g) = setup(seed);
        let j = free_track(&g, &mut r);
        let h = free_track(&g, &mut r);
        let c = concat(&j, &h).unwrap();
        prop_assert_eq!(c.core(), &j.core().multiply(h.core()).unwrap());
        prop_assert_eq!(mu3_track(&c), &mu3_track(&j) + &mu3_track(&h).conjugate(j.core()).unwrap());
        let rj = reverse(&j);
        prop_assert_eq!(rj.core(), &j.core().invert());
        prop_assert_eq!(mu3_track(&rj), mu3_track(&j).negate().conjugate(&j.core().invert()).unwrap());
        let loop_ = concat(&j, &rj).unwrap();
        prop_assert!(mu3_track(&loop_).is_zero() && loop_.is_based());
        prop_assert_eq!(reverse(&rj), j.clone());
        let w = random::element(&g, &mut r, 3);
        prop_assert_eq!(mu3_track(&change_whisker(&j, &w).unwrap()), mu3_track(&j).conjugate(&w).unwrap());
    }

    #[test]
    fn planner_succeeds_exactly_on_vanishing_tracks(seed in any::<u64>()) {
        let (mut r, g) = setup(seed);
        let h = random::based_track(&g, &mut r, 6);
        // half the cases are made cancellable by appending the reverse
        let h = if r.gen_bool(0.5) { concat(&h, &reverse(&h)).unwrap() } else { h };
        match whitney_plan(&h) {
            Ok(plan) => {
                prop_assert!(mu3_track(&h).is_zero());
                prop_assert!(verify_plan(&h, &plan));
            }
            Err(o) => prop_assert_eq!(o.mu3, mu3_track(&h)),
        }
    }

    #[test]
    fn realize_inverts_mu3(seed in any::<u64>()) {
        let (mut r, g) = setup(seed);
        let x = random::ring_element(&g, &mut r, 8, 10);
        prop_assert_eq!(mu3_track(&realize(&x)), reduce_to_a(&x));
    }

    #[test]
    fn tracks_round_trip_through_json(seed in any::<u64>()) {
        let (mut r, g) = setup(seed);
        let h = free_track(&g, &mut r);
        let text = h.to_json().to_string();
        let back = Track::from_json(&serde_json::from_str(&text).unwrap(), &g).unwrap();
        prop_assert_eq!(back, h);
    }

    #[test]
    fn phi_is_linear_in_generator_data(seed in any::<u64>()) {
        let (mut r, g) = setup(seed);
        let gen = Pi3Generator {
            label: "A".into(),
            mu3: random::ring_element(&g, &mut r, 4, 5),
            lambda_u: random::ring_element(&g, &mut r, 4, 5),
        };
        let doubled = Pi3Generator { mu3: &gen.mu3 + &gen.mu3, lambda_u: &gen.lambda_u + &gen.lambda_u, ..gen.clone() };
        let x = random::element(&g, &mut r, 3);
        let v = phi(&gen, &x).unwrap();
        prop_assert_eq!(phi(&doubled, &x).unwrap(), &v + &v);
    }

    #[test]
    fn phi_on_abelian_models_only_translates_lambda(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let g: Group = GroupModel::abelian(&[0, 0, 4], None).unwrap().into();
        let gen = Pi3Generator {
            label: "A".into(),
            mu3: random::ring_element(&g, &mut r, 4, 5),
            lambda_u: random::ring_element(&g, &mut r, 4, 5),
        };
        let s = random::element(&g, &mut r, 3);
        let t = random::element(&g, &mut r, 3);
        let direct = &reduce_to_a(&gen.mu3) + &reduce_to_a(&gen.lambda_u.left_mul(&s.multiply(&t).unwrap()).unwrap());
        let shifted = Pi3Generator { lambda_u: gen.lambda_u.left_mul(&t).unwrap(), ..gen.clone() };
        prop_assert_eq!(phi(&gen, &s.multiply(&t).unwrap()).unwrap(), direct.clone());
        prop_assert_eq!(phi(&shifted, &s).unwrap(), direct);
    }

    #[test]
    fn image_ignores_generator_and_closure_order(seed in any::<u64>()) {
        let (mut r, g) = setup(seed);
        let gens: Vec<Pi3Generator> = (0..3)
            .map(|i| Pi3Generator {
                label: format!("A{i}"),
                mu3: random::ring_element(&g, &mut r, 3, 3),
                lambda_u: random::ring_element(&g, &mut r, 3, 3),
            })
            .collect();
        let mut closure: Vec<_> = (0..4).map(|_| random::element(&g, &mut r, 2)).collect();
        let a = ManifoldScenario::new(g.clone(), gens.clone(), false, ClosurePolicy::Explicit(closure.clone()), None).unwrap();
        let mut shuffled = gens;
        shuffled.shuffle(&mut r);
        closure.shuffle(&mut r);
        let b = ManifoldScenario::new(g.clone(), shuffled, false, ClosurePolicy::Explicit(closure), None).unwrap();
        let (ia, ib) = (a.phi_image().unwrap(), b.phi_image().unwrap());
        prop_assert!(*ia == *ib);
        let x = random::aclass(&g, &mut r, 5, 5);
        prop_assert_eq!(ia.reduce(&x), ib.reduce(&x));
        prop_assert_eq!(ia.contains(&x), ib.contains(&x));
    }

    #[test]
    fn based_invariant_is_well_defined(seed in any::<u64>()) {
        let (mut r, g) = setup(seed);
        let gens: Vec<Pi3Generator> = (0..2)
            .map(|i| Pi3Generator {
                label: format!("A{i}"),
                mu3: random::ring_element(&g, &mut r, 2, 2),
                lambda_u: random::ring_element(&g, &mut r, 2, 2),
            })
            .collect();
        let sc = ManifoldScenario::new(g.clone(), gens, false, ClosurePolicy::Ball(1), None).unwrap();
        let image = sc.phi_image().unwrap();
        let coeffs: Vec<_> = image.values().iter().map(|_| r.gen_range(-3i64..=3).into()).collect();
        let v = image.combination(&coeffs);
        let h = random::based_track(&g, &mut r, 6);
        let h2 = concat(&h, &realize(&v.lift())).unwrap();
        let (a, b) = (fq_based(&h, &sc).unwrap(), fq_based(&h2, &sc).unwrap());
        prop_assert_eq!(a.representative(), b.representative());
        prop_assert!(a == b);
    }

    #[test]
    fn affine_action_composes(seed in any::<u64>(), which in 0usize..7) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let sc = &examples::all()[which];
        let table = stab_table(sc).unwrap();
        let entries: Vec<_> = table.entries().collect();
        let image = sc.phi_image().unwrap();
        let s = entries.choose(&mut r).unwrap();
        let t = entries.choose(&mut r).unwrap();
        let a = random::aclass(sc.group(), &mut r, 4, 5);
        let st = product_entry(s, t).unwrap();
        let left = CosetClass::new(&affine_act(&st, &a).unwrap(), image.clone());
        let right = CosetClass::new(&affine_act(s, &affine_act(t, &a).unwrap()).unwrap(), image.clone());
        prop_assert!(left == right);
        if let Some(tabled) = table.get(&st.s) {
            prop_assert!(CosetClass::new(&affine_act(&tabled, &a).unwrap(), image) == left);
        }
    }

    #[test]
    fn free_relation_is_symmetric_and_transitive(seed in any::<u64>(), which in 0usize..7) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let sc = &examples::all()[which];
        let table = stab_table(sc).unwrap();
        let entries: Vec<_> = table.entries().collect();
        let h1 = random::based_track(sc.group(), &mut r, 4);
        let j1 = self_homotopy(entries.choose(&mut r).unwrap()).unwrap();
        let h2 = concat(&j1, &h1).unwrap();
        let j2 = self_homotopy(entries.choose(&mut r).unwrap()).unwrap();
        let h3 = concat(&j2, &h2).unwrap();
        prop_assert_eq!(is_free_isotopic(&h1, &h2, sc).unwrap(), Decision::Yes);
        prop_assert_eq!(is_free_isotopic(&h2, &h1, sc).unwrap(), Decision::Yes);
        prop_assert_eq!(is_free_isotopic(&h2, &h3, sc).unwrap(), Decision::Yes);
        let composed = table.get(&j2.core().multiply(j1.core()).unwrap()).is_some();
        if composed {
            prop_assert_eq!(is_free_isotopic(&h1, &h3, sc).unwrap(), Decision::Yes);
        }
    }
}

#[test]
fn bundled_scenario_models_are_consistent() {
    for sc in examples::all() {
        let report = sc.validate();
        assert!(report.is_consistent(), "{:?}: {report}", sc.name);
        assert_eq!(sc.phi_image().unwrap().group(), sc.group());
    }
}

#[test]
fn ring_element_round_trip_with_big_coefficients() {
    let g: Group = GroupModel::free(&["g"]).unwrap().into();
    let big: num_bigint::BigInt = "123456789012345678901234567890".parse().unwrap();
    let x = RingElement::monomial(big, &g.parse("g^3").unwrap());
    assert_eq!(RingElement::from_json(&x.to_json(), &g).unwrap(), x);
}
