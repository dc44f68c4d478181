//! Randomized consistency checks over the bundled scenarios.

use dax_core::examples;
use dax_core::homotopy::{concat, mu3_track, realize, reverse, verify_plan, whitney_plan};
use dax_core::isotopy::{fq_based, is_free_isotopic, self_homotopy, stab_table, Decision};
use dax_core::random;
use dax_core::target::reduce_to_a;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub struct Report {
    pub seed: u64,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({"seed": self.seed, "checks": self.checks, "failures": self.failures})
    }

    pub fn summary(&self) -> String {
        let mut out = format!("seed {}: {} checks, {} failures", self.seed, self.checks, self.failures.len());
        for f in &self.failures {
            out.push_str("\n  ");
            out.push_str(f);
        }
        out
    }
}

pub fn run(seed: u64, cases: usize) -> Report {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let scenarios = examples::all();
    let mut report = Report { seed, checks: 0, failures: Vec::new() };
    let mut check = |ok: bool, what: String| {
        report.checks += 1;
        if !ok {
            report.failures.push(what);
        }
    };
    for i in 0..cases {
        let sc = &scenarios[i % scenarios.len()];
        let name = sc.name.as_deref().unwrap_or("?");
        let g = sc.group();

        let x = random::ring_element(g, &mut r, 8, 10);
        check(reduce_to_a(&(&x + &x.bar())).is_zero(), format!("{name}: x + bar x != 0 for {x}"));
        check(mu3_track(&realize(&x)) == reduce_to_a(&x), format!("{name}: mu3(realize({x})) != [{x}]"));

        let h = random::based_track(g, &mut r, 6);
        let t = if r.gen_bool(0.5) { concat(&h, &reverse(&h)).expect("same model") } else { h.clone() };
        match whitney_plan(&t) {
            Ok(plan) => check(verify_plan(&t, &plan), format!("{name}: plan for {t} fails verification")),
            Err(o) => check(!o.mu3.is_zero(), format!("{name}: planner rejected {t}")),
        }

        let image = sc.phi_image().expect("bundled closure resolves");
        let coeffs: Vec<_> = image.values().iter().map(|_| r.gen_range(-3i64..=3).into()).collect();
        let v = image.combination(&coeffs);
        let h2 = concat(&h, &realize(&v.lift())).expect("same model");
        check(
            fq_based(&h, sc).ok() == fq_based(&h2, sc).ok(),
            format!("{name}: fq changes under a self-homotopy for {h}"),
        );

        if let Ok(table) = stab_table(sc) {
            let entries: Vec<_> = table.entries().collect();
            let e = entries.choose(&mut r).expect("identity is tabled");
            let moved = concat(&self_homotopy(e).expect("valid entry"), &h).expect("same model");
            check(
                is_free_isotopic(&h, &moved, sc).ok() == Some(Decision::Yes),
                format!("{name}: concatenating the self-homotopy for {} is not detected", e.s),
            );
        }
    }
    report
}
