//! Random inputs for self-tests and property checks.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::groupring::RingElement;
use crate::groups::{Group, GroupElement};
use crate::homotopy::{time, DoublePoint, Track};
use crate::target::{reduce_to_a, AClass};

/// A uniform element for finite groups; otherwise a random word of length at
/// most `max_len` in the generators and their inverses.
pub fn element<R: Rng + ?Sized>(group: &Group, rng: &mut R, max_len: usize) -> GroupElement {
    if let Ok(all) = group.enumerate() {
        if let Some(g) = all.choose(rng) {
            return g.clone();
        }
    }
    let gens = group.generators();
    let mut g = group.identity();
    if gens.is_empty() {
        return g;
    }
    for _ in 0..rng.gen_range(0..=max_len) {
        let x = gens.choose(rng).expect("nonempty");
        let x = if rng.gen_bool(0.5) { x.clone() } else { x.invert() };
        g = g.multiply(&x).expect("same model");
    }
    g
}

/// Up to `max_support` terms with coefficients in `[-max_coef, max_coef]`.
pub fn ring_element<R: Rng + ?Sized>(group: &Group, rng: &mut R, max_support: usize, max_coef: i64) -> RingElement {
    let mut x = RingElement::zero(group);
    for _ in 0..rng.gen_range(0..=max_support) {
        let c = rng.gen_range(-max_coef..=max_coef);
        x = &x + &RingElement::monomial(BigInt::from(c), &element(group, rng, 4));
    }
    x
}

pub fn aclass<R: Rng + ?Sized>(group: &Group, rng: &mut R, max_support: usize, max_coef: i64) -> AClass {
    reduce_to_a(&ring_element(group, rng, max_support, max_coef))
}

/// A track with up to `max_points` points at shuffled distinct times.
pub fn track<R: Rng + ?Sized>(group: &Group, rng: &mut R, max_points: usize, core: GroupElement) -> Track {
    let n = rng.gen_range(0..=max_points);
    let mut slots: Vec<i64> = (1..=n as i64).collect();
    slots.shuffle(rng);
    let points = slots
        .into_iter()
        .map(|i| {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            DoublePoint::new(sign, element(group, rng, 3), time(i, n as i64 + 1))
        })
        .collect();
    Track::new(core, points).expect("distinct times in (0, 1)")
}

pub fn based_track<R: Rng + ?Sized>(group: &Group, rng: &mut R, max_points: usize) -> Track {
    track(group, rng, max_points, group.identity())
}
