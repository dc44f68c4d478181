mod input;
mod selftest;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dax_core::groupring::RingElement;
use dax_core::groups::Group;
use dax_core::homotopy::{mu3_track, realize, whitney_plan, Track};
use dax_core::isotopy::{
    fq_based, free_witness, is_based_isotopic, orbit_canonical, stab_table, validate_based_selfhomotopy, Decision,
};
use dax_core::manifold::ManifoldScenario;
use dax_core::target::{reduce_to_a, AClass};
use dax_core::{examples, Error};
use serde_json::{json, Value};

use input::{infer_free_group, load_group, load_scenario, Diagnostic, Shape, Source};

/// Isotopy invariants of 2-spheres in 5-manifolds from algebraic data.
///
/// Inputs are file paths, `-` for stdin, or inline JSON. Exit status is 0 on
/// success or YES, 1 on an obstruction, NO, UNKNOWN or failed validation, and
/// 2 on invalid input.
#[derive(Parser)]
#[command(name = "dax", version)]
struct Cli {
    /// Scenario file, or `builtin:<name>` for a bundled one.
    #[arg(long, global = true)]
    scenario: Option<String>,
    /// Group model for scenario-free commands; defaults to the scenario's
    /// group, or the free group on the symbols used.
    #[arg(long, global = true)]
    group: Option<String>,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Seed for `selftest`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a group ring element into the obstruction group.
    Reduce { input: String },
    /// Self-intersection invariant of a track.
    Mu3 { track: String },
    /// A based track realizing a group ring element.
    Realize { input: String },
    /// Whitney cancellation plan, or the obstruction.
    Whitney { track: String },
    /// The isotopy invariant of one track, or a decision for two.
    Fq {
        #[arg(long, conflicts_with = "free")]
        based: bool,
        #[arg(long)]
        free: bool,
        track: String,
        other: Option<String>,
    },
    /// Consistency report for the scenario, optionally checking a based
    /// self-homotopy.
    Validate { track: Option<String> },
    /// Canonical representative of the orbit of a class.
    Orbit { class: String },
    /// List bundled scenarios, or print one.
    Examples { name: Option<String> },
    /// Randomized consistency checks.
    Selftest {
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

/// A command's answer: the payload and whether it is a positive result.
struct Answer {
    payload: Value,
    pretty: String,
    ok: bool,
}

impl Answer {
    fn ok(payload: Value, pretty: impl Into<String>) -> Self {
        Answer { payload, pretty: pretty.into(), ok: true }
    }

    fn decision(d: Decision, mut payload: Value, detail: String) -> Self {
        payload["decision"] = json!(d.as_str());
        let pretty = if detail.is_empty() { d.to_string() } else { format!("{d} {detail}") };
        Answer { payload, pretty, ok: d == Decision::Yes }
    }
}

struct Ctx {
    scenario: Option<ManifoldScenario>,
    group: Option<Group>,
}

impl Ctx {
    fn scenario(&self, command: &str) -> Result<&ManifoldScenario, Diagnostic> {
        self.scenario.as_ref().ok_or_else(|| Diagnostic::plain(format!("`{command}` needs --scenario")))
    }

    /// Reads documents of the given shapes against the resolved group.
    fn read(&self, args: &[(&str, Shape)]) -> Result<(Group, Vec<(Source, Value)>), Diagnostic> {
        let mut docs = Vec::new();
        for (arg, _) in args {
            let src = Source::read(arg)?;
            let value = src.json()?;
            docs.push((src, value));
        }
        let group = match (&self.group, &self.scenario) {
            (Some(g), _) => g.clone(),
            (None, Some(sc)) => sc.group().clone(),
            (None, None) => {
                let refs: Vec<(&Source, &Value, Shape)> =
                    docs.iter().zip(args).map(|((s, v), (_, shape))| (s, v, *shape)).collect();
                infer_free_group(&refs)?
            }
        };
        Ok((group, docs))
    }

    fn track(&self, arg: &str) -> Result<Track, Diagnostic> {
        let (group, docs) = self.read(&[(arg, Shape::Track)])?;
        let (src, value) = &docs[0];
        Track::from_json(value, &group).map_err(|e| src.diagnose(&e))
    }

    fn tracks(&self, a: &str, b: &str) -> Result<(Track, Track), Diagnostic> {
        let (group, docs) = self.read(&[(a, Shape::Track), (b, Shape::Track)])?;
        let parse = |i: usize| Track::from_json(&docs[i].1, &group).map_err(|e| docs[i].0.diagnose(&e));
        Ok((parse(0)?, parse(1)?))
    }

    fn ring(&self, arg: &str) -> Result<RingElement, Diagnostic> {
        let (group, docs) = self.read(&[(arg, Shape::Ring)])?;
        let (src, value) = &docs[0];
        RingElement::from_json(value, &group).map_err(|e| src.diagnose(&e))
    }

    fn class(&self, arg: &str) -> Result<AClass, Diagnostic> {
        let (group, docs) = self.read(&[(arg, Shape::Class)])?;
        let (src, value) = &docs[0];
        AClass::from_json_lenient(value, &group).map_err(|e| src.diagnose(&e))
    }
}

fn lib(err: Error) -> Diagnostic {
    Diagnostic::plain(err.to_string())
}

fn run(cli: &Cli) -> Result<Answer, Diagnostic> {
    let scenario = cli.scenario.as_deref().map(load_scenario).transpose()?;
    let group = cli.group.as_deref().map(load_group).transpose()?;
    let ctx = Ctx { scenario, group };
    match &cli.command {
        Command::Reduce { input } => {
            let a = reduce_to_a(&ctx.ring(input)?);
            Ok(Answer::ok(a.to_json(), a.to_string()))
        }
        Command::Mu3 { track } => {
            let a = mu3_track(&ctx.track(track)?);
            Ok(Answer::ok(a.to_json(), a.to_string()))
        }
        Command::Realize { input } => {
            let t = realize(&ctx.ring(input)?);
            Ok(Answer::ok(t.to_json(), t.to_string()))
        }
        Command::Whitney { track } => {
            let t = ctx.track(track)?;
            Ok(match whitney_plan(&t) {
                Ok(plan) => {
                    let mut lines = Vec::new();
                    for p in &plan.pairs {
                        let flip = if p.flip { " after flipping q" } else { "" };
                        lines.push(format!("pair {} {} at {}{flip}", p.p, p.q, p.time));
                    }
                    for c in &plan.cusps {
                        lines.push(format!("cusp at {} of sign {:+}", c.index, c.sign));
                    }
                    if lines.is_empty() {
                        lines.push("nothing to cancel".into());
                    }
                    Answer::ok(plan.to_json(), lines.join("\n"))
                }
                Err(obs) => Answer {
                    payload: json!({"obstruction": obs.mu3.to_json()}),
                    pretty: format!("obstruction {}", obs.mu3),
                    ok: false,
                },
            })
        }
        Command::Fq { free, track, other, .. } => {
            let sc = ctx.scenario("fq")?;
            match (other, free) {
                (None, false) => {
                    let c = fq_based(&ctx.track(track)?, sc).map_err(lib)?;
                    Ok(Answer::ok(c.to_json(), c.to_string()))
                }
                (None, true) => {
                    let table = stab_table(sc).map_err(lib)?;
                    let o = orbit_canonical(&mu3_track(&ctx.track(track)?), &table, sc).map_err(lib)?;
                    let pretty = o.canonical.to_string();
                    Ok(Answer::ok(o.to_json(), pretty))
                }
                (Some(b), false) => {
                    let (h1, h2) = ctx.tracks(track, b)?;
                    let d = is_based_isotopic(&h1, &h2, sc).map_err(lib)?;
                    Ok(Answer::decision(d, json!({}), String::new()))
                }
                (Some(b), true) => {
                    let (h1, h2) = ctx.tracks(track, b)?;
                    let table = stab_table(sc).map_err(lib)?;
                    let image = sc.phi_image().map_err(lib)?;
                    let w = free_witness(&mu3_track(&h1), &mu3_track(&h2), &table, &image).map_err(lib)?;
                    let d = Decision::from_search(w.is_some(), table.is_complete() && image.is_complete());
                    Ok(match w {
                        Some(e) => {
                            let detail = format!("via s = {}", e.s);
                            Answer::decision(d, json!({"witness": e.to_json()}), detail)
                        }
                        None => Answer::decision(d, json!({}), String::new()),
                    })
                }
            }
        }
        Command::Validate { track } => {
            let sc = ctx.scenario("validate")?;
            let report = sc.validate();
            let mut payload = report.to_json();
            let mut pretty = report.to_string();
            let mut ok = report.is_consistent();
            if let Some(t) = track {
                let d = validate_based_selfhomotopy(&ctx.track(t)?, sc).map_err(lib)?;
                payload["self_homotopy"] = json!(d.as_str());
                pretty = format!("{pretty}\nself-homotopy: {d}");
                ok &= d == Decision::Yes;
            }
            Ok(Answer { payload, pretty, ok })
        }
        Command::Orbit { class } => {
            let sc = ctx.scenario("orbit")?;
            let table = stab_table(sc).map_err(lib)?;
            let o = orbit_canonical(&ctx.class(class)?, &table, sc).map_err(lib)?;
            let pretty = format!("{} (witness {})", o.canonical, o.witness);
            Ok(Answer::ok(o.to_json(), pretty))
        }
        Command::Examples { name: None } => {
            let list: Vec<Value> =
                examples::all().iter().map(|sc| json!({"name": sc.name, "description": sc.description})).collect();
            let pretty = examples::all()
                .iter()
                .map(|sc| {
                    format!("{:<18}{}", sc.name.as_deref().unwrap_or(""), sc.description.as_deref().unwrap_or(""))
                })
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Answer::ok(Value::Array(list), pretty))
        }
        Command::Examples { name: Some(name) } => {
            let text =
                examples::text(name).ok_or_else(|| Diagnostic::plain(format!("no bundled scenario named `{name}`")))?;
            let value: Value = serde_json::from_str(text).expect("bundled scenarios are JSON");
            Ok(Answer::ok(value, text.trim_end()))
        }
        Command::Selftest { cases } => {
            let report = selftest::run(cli.seed, *cases);
            let ok = report.failures.is_empty();
            let pretty = report.summary();
            Ok(Answer { payload: report.to_json(), pretty, ok })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(answer) => {
            if cli.pretty {
                println!("{}", answer.pretty);
            } else {
                println!("{}", answer.payload);
            }
            ExitCode::from(if answer.ok { 0 } else { 1 })
        }
        Err(diag) => {
            eprintln!("{diag}");
            ExitCode::from(2)
        }
    }
}
