//! Isotopy decisions: the based invariant as a coset of the φ-image, the
//! stabilizer table with its affine action `s.a = U_s + s a s^-1`, and free
//! isotopy as equality of orbits.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::{Group, GroupElement};
use crate::homotopy::{mu3_track, realize, Track};
use crate::manifold::{ManifoldScenario, PhiImage, StabEntry, StabilizerSpec};
use crate::target::AClass;

/// Tri-state answer. `No` is only given when the relevant data is flagged
/// complete; a failed search over truncated data gives `Unknown`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

impl Decision {
    pub fn from_search(found: bool, complete: bool) -> Self {
        match (found, complete) {
            (true, _) => Decision::Yes,
            (false, true) => Decision::No,
            (false, false) => Decision::Unknown,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Yes => "YES",
            Decision::No => "NO",
            Decision::Unknown => "UNKNOWN",
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An element of the quotient of the obstruction group by the φ-image,
/// held by its canonical representative.
#[derive(Clone, Debug)]
pub struct CosetClass {
    representative: AClass,
    subgroup: Arc<PhiImage>,
}

impl CosetClass {
    pub fn new(a: &AClass, subgroup: Arc<PhiImage>) -> Self {
        CosetClass { representative: subgroup.reduce(a), subgroup }
    }

    pub fn representative(&self) -> &AClass {
        &self.representative
    }

    pub fn subgroup(&self) -> &PhiImage {
        &self.subgroup
    }

    pub fn is_complete(&self) -> bool {
        self.subgroup.is_complete()
    }

    pub fn is_zero(&self) -> bool {
        self.representative.is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!({"representative": self.representative.to_json(), "complete": self.is_complete()})
    }
}

impl PartialEq for CosetClass {
    fn eq(&self, other: &Self) -> bool {
        self.representative.group() == other.representative.group()
            && match self.representative.checked_sub(&other.representative) {
                Ok(d) => self.subgroup.contains(&d),
                Err(_) => false,
            }
    }
}

impl fmt::Display for CosetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.representative)
    }
}

fn require_based(h: &Track) -> Result<()> {
    if h.is_based() {
        Ok(())
    } else {
        Err(Error::NotBased(format!("track has core {}", h.core())))
    }
}

/// The based invariant of the endpoint of `h`: `[mu3(h)]` modulo the φ-image.
pub fn fq_based(h: &Track, scenario: &ManifoldScenario) -> Result<CosetClass> {
    require_based(h)?;
    scenario.group().check(h.group())?;
    Ok(CosetClass::new(&mu3_track(h), scenario.phi_image()?))
}

/// Membership in the φ-image as a decision.
pub fn image_decision(a: &AClass, image: &PhiImage) -> Decision {
    Decision::from_search(image.contains(a), image.is_complete())
}

pub fn is_based_isotopic(h1: &Track, h2: &Track, scenario: &ManifoldScenario) -> Result<Decision> {
    require_based(h1)?;
    require_based(h2)?;
    scenario.group().check(h1.group())?;
    scenario.group().check(h2.group())?;
    let image = scenario.phi_image()?;
    Ok(image_decision(&(&mu3_track(h1) - &mu3_track(h2)), &image))
}

/// Whether a based self-homotopy is compatible with the scenario: its
/// invariant must lie in the φ-image.
pub fn validate_based_selfhomotopy(j: &Track, scenario: &ManifoldScenario) -> Result<Decision> {
    require_based(j)?;
    scenario.group().check(j.group())?;
    Ok(image_decision(&mu3_track(j), &*scenario.phi_image()?))
}

/// Stabilizer elements with their translations, sorted by element. Always
/// contains the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabTable {
    entries: BTreeMap<GroupElement, AClass>,
    complete: bool,
}

impl StabTable {
    pub fn new(group: &Group, entries: impl IntoIterator<Item = StabEntry>, complete: bool) -> Self {
        let mut map: BTreeMap<GroupElement, AClass> = entries.into_iter().map(|e| (e.s, e.u)).collect();
        map.entry(group.identity()).or_insert_with(|| AClass::zero(group));
        StabTable { entries: map, complete }
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, s: &GroupElement) -> Option<StabEntry> {
        self.entries.get(s).map(|u| StabEntry { s: s.clone(), u: u.clone() })
    }

    pub fn entries(&self) -> impl Iterator<Item = StabEntry> + '_ {
        self.entries.iter().map(|(s, u)| StabEntry { s: s.clone(), u: u.clone() })
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self.entries().map(|e| e.to_json()).collect();
        json!({"complete": self.complete, "entries": entries})
    }
}

/// `U_{s^-1} = -s^-1 U_s s`.
pub fn inverse_entry(e: &StabEntry) -> Result<StabEntry> {
    let si = e.s.invert();
    Ok(StabEntry { u: e.u.conjugate(&si)?.negate(), s: si })
}

/// `U_{sr} = U_s + s U_r s^-1`.
pub fn product_entry(s: &StabEntry, r: &StabEntry) -> Result<StabEntry> {
    Ok(StabEntry { s: s.s.multiply(&r.s)?, u: s.u.checked_add(&r.u.conjugate(&s.s)?)? })
}

/// All products of at most `depth` generators and their inverses, with
/// translations propagated by the cocycle rule. Reaching one element twice
/// with translations that differ outside the φ-image is an error.
pub fn stab_closure(generators: &[StabEntry], depth: u32, scenario: &ManifoldScenario) -> Result<StabTable> {
    let group = scenario.group();
    let image = scenario.phi_image()?;
    let mut letters = Vec::with_capacity(2 * generators.len());
    for g in generators {
        group.check(g.s.group())?;
        group.check(g.u.group())?;
        letters.push(g.clone());
        letters.push(inverse_entry(g)?);
    }
    let mut table: BTreeMap<GroupElement, AClass> = BTreeMap::new();
    table.insert(group.identity(), AClass::zero(group));
    let mut frontier = VecDeque::from([StabEntry::identity(group)]);
    for _ in 0..depth {
        let mut next = VecDeque::new();
        for x in &frontier {
            for l in &letters {
                let y = product_entry(x, l)?;
                match table.get(&y.s) {
                    Some(first) => {
                        if !image.contains(&first.checked_sub(&y.u)?) {
                            return Err(Error::InconsistentCocycle {
                                element: y.s.to_string(),
                                first: first.to_string(),
                                second: y.u.to_string(),
                            });
                        }
                    }
                    None => {
                        table.insert(y.s.clone(), y.u.clone());
                        next.push_back(y);
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(StabTable { entries: table, complete: false })
}

/// The stabilizer table described by the scenario.
pub fn stab_table(scenario: &ManifoldScenario) -> Result<StabTable> {
    let group = scenario.group();
    match scenario.stabilizer().ok_or(Error::MissingStabilizer)? {
        StabilizerSpec::FullTrivial { radius } => {
            let (elems, complete) = match group.enumerate() {
                Ok(all) => (all, true),
                Err(_) => (group.ball(*radius), false),
            };
            let zero = AClass::zero(group);
            Ok(StabTable::new(group, elems.into_iter().map(|s| StabEntry { s, u: zero.clone() }), complete))
        }
        StabilizerSpec::Table { entries, complete } => Ok(StabTable::new(group, entries.iter().cloned(), *complete)),
        StabilizerSpec::Generated { generators, depth, complete } => {
            let mut table = stab_closure(generators, *depth, scenario)?;
            table.complete = *complete;
            Ok(table)
        }
    }
}

/// `s.a = U_s + s a s^-1`.
pub fn affine_act(entry: &StabEntry, a: &AClass) -> Result<AClass> {
    entry.u.checked_add(&a.conjugate(&entry.s)?)
}

/// The first tabled entry carrying `a1` to `a2` modulo the φ-image.
pub fn free_witness(a1: &AClass, a2: &AClass, table: &StabTable, image: &PhiImage) -> Result<Option<StabEntry>> {
    for e in table.entries() {
        if image.contains(&a2.checked_sub(&affine_act(&e, a1)?)?) {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// Whether some tabled `s` carries `a1` to `a2` modulo the φ-image.
pub fn is_free_related(a1: &AClass, a2: &AClass, table: &StabTable, image: &PhiImage) -> Result<Decision> {
    let found = free_witness(a1, a2, table, image)?.is_some();
    Ok(Decision::from_search(found, table.is_complete() && image.is_complete()))
}

pub fn is_free_isotopic(h1: &Track, h2: &Track, scenario: &ManifoldScenario) -> Result<Decision> {
    scenario.group().check(h1.group())?;
    scenario.group().check(h2.group())?;
    let table = stab_table(scenario)?;
    is_free_related(&mu3_track(h1), &mu3_track(h2), &table, &*scenario.phi_image()?)
}

/// An orbit of the affine action, held by the least reduced representative
/// over the table.
#[derive(Clone, Debug)]
pub struct OrbitClass {
    pub canonical: CosetClass,
    /// The stabilizer element attaining the minimum.
    pub witness: GroupElement,
    pub complete: bool,
}

impl PartialEq for OrbitClass {
    fn eq(&self, other: &Self) -> bool {
        self.canonical.representative == other.canonical.representative
    }
}

impl OrbitClass {
    pub fn to_json(&self) -> Value {
        json!({
            "canonical": self.canonical.representative.to_json(),
            "witness": self.witness.to_string(),
            "complete": self.complete,
        })
    }
}

pub fn orbit_canonical(a: &AClass, table: &StabTable, scenario: &ManifoldScenario) -> Result<OrbitClass> {
    let image = scenario.phi_image()?;
    let mut best: Option<(AClass, GroupElement)> = None;
    for e in table.entries() {
        let r = image.reduce(&affine_act(&e, a)?);
        if best.as_ref().map_or(true, |(b, _)| &r < b) {
            best = Some((r, e.s));
        }
    }
    let (rep, witness) = best.expect("table contains the identity");
    Ok(OrbitClass {
        canonical: CosetClass { representative: rep, subgroup: image.clone() },
        witness,
        complete: table.is_complete() && image.is_complete(),
    })
}

/// The subgroup traced by based self-homotopies: the invariants of the
/// realized tracks for each φ-value. Agrees with the φ-image by construction
/// of the geometric action; kept as an independent computation.
pub fn self_homotopy_subgroup(scenario: &ManifoldScenario) -> Result<PhiImage> {
    let image = scenario.phi_image()?;
    let classes: Vec<AClass> = image.values().iter().map(|v| mu3_track(&realize(&v.value.lift()))).collect();
    PhiImage::from_classes(scenario.group(), &classes, image.is_complete())
}

/// A self-homotopy realizing the translation of a tabled entry: its core is
/// `s` and its invariant is `U_s`.
pub fn self_homotopy(entry: &StabEntry) -> Result<Track> {
    let based = realize(&entry.u.lift());
    Track::new(entry.s.clone(), based.points().to_vec())
}
