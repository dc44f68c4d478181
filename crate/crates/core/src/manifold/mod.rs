//! The algebraic model of an ambient 5-manifold and a fixed based embedded
//! sphere: fundamental group, `pi_3` generator data and stabilizer data.
//!
//! The indeterminacy homomorphism sends a `pi_3` class `A` to
//! `mu3(A) + [lambda(A, U)]`. On translates `g . A` of the generators it
//! evaluates to `g mu3(A) g^-1 + [g lambda(A, U)]`; its image over a closure
//! set of group elements spans the subgroup [`PhiImage`].

mod schema;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groupring::{check_quadratic_relation, check_skew_hermitian, RingElement};
use crate::groups::{Group, GroupElement, GroupModel};
use crate::intlinalg::LatticeBasis;
use crate::report::{Check, ValidationReport};
use crate::target::{reduce_to_a, AClass, PairClass};
use schema::{RawClosure, RawEntry, RawScenario, RawStabilizer};

/// A generator `A_i` of `pi_3 N` as a module over the fundamental group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi3Generator {
    pub label: String,
    /// A group ring lift of `mu3(A_i)`; reduced on use.
    pub mu3: RingElement,
    /// `lambda(A_i, [U])`.
    pub lambda_u: RingElement,
}

/// A stabilizer element `s` with its translation `U_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabEntry {
    pub s: GroupElement,
    pub u: AClass,
}

impl StabEntry {
    pub fn identity(group: &Group) -> Self {
        StabEntry { s: group.identity(), u: AClass::zero(group) }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"s": self.s.to_string(), "U_s": self.u.to_json()})
    }
}

/// Group elements `g` over which translates `g . A_i` are formed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosurePolicy {
    All,
    Explicit(Vec<GroupElement>),
    Ball(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabilizerSpec {
    /// Every element stabilizes with `U_s = 0`. On infinite groups the search
    /// is truncated to the ball of the given radius.
    FullTrivial {
        radius: u32,
    },
    Table {
        entries: Vec<StabEntry>,
        complete: bool,
    },
    Generated {
        generators: Vec<StabEntry>,
        depth: u32,
        complete: bool,
    },
}

pub const DEFAULT_TRIVIAL_RADIUS: u32 = 2;

/// The validated scenario. Immutable once built.
#[derive(Debug)]
pub struct ManifoldScenario {
    pub name: Option<String>,
    pub description: Option<String>,
    group: Group,
    generators: Vec<Pi3Generator>,
    pi3_complete: bool,
    closure: ClosurePolicy,
    stabilizer: Option<StabilizerSpec>,
    lambda3: Option<BTreeMap<(String, String), RingElement>>,
    image: OnceLock<Result<Arc<PhiImage>>>,
}

impl Clone for ManifoldScenario {
    fn clone(&self) -> Self {
        ManifoldScenario {
            name: self.name.clone(),
            description: self.description.clone(),
            group: self.group.clone(),
            generators: self.generators.clone(),
            pi3_complete: self.pi3_complete,
            closure: self.closure.clone(),
            stabilizer: self.stabilizer.clone(),
            lambda3: self.lambda3.clone(),
            image: OnceLock::new(),
        }
    }
}

fn parse_pair_key(key: &str) -> Result<(String, String)> {
    let inner = key
        .trim()
        .strip_prefix('(')
        .and_then(|k| k.strip_suffix(')'))
        .ok_or_else(|| Error::Schema(format!("lambda3_table key `{key}` must look like \"(A1,A2)\"")))?;
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| Error::Schema(format!("lambda3_table key `{key}` must name two labels")))?;
    Ok((a.trim().to_string(), b.trim().to_string()))
}

impl ManifoldScenario {
    pub fn new(
        group: Group,
        generators: Vec<Pi3Generator>,
        pi3_complete: bool,
        closure: ClosurePolicy,
        stabilizer: Option<StabilizerSpec>,
    ) -> Result<Self> {
        let mut labels = BTreeSet::new();
        for gen in &generators {
            if !labels.insert(gen.label.clone()) {
                return Err(Error::Schema(format!("duplicate pi3 generator label `{}`", gen.label)));
            }
            group.check(gen.mu3.group())?;
            group.check(gen.lambda_u.group())?;
        }
        if let ClosurePolicy::All = closure {
            if !group.is_finite() {
                return Err(Error::ClosureUnresolvable(
                    "closure mode `all` needs a finite group; use `ball` or `explicit`".into(),
                ));
            }
        }
        if let Some(StabilizerSpec::Table { entries, .. }) = &stabilizer {
            let mut seen = BTreeSet::new();
            for e in entries {
                if !seen.insert(e.s.clone()) {
                    return Err(Error::Schema(format!("stabilizer table lists `{}` twice", e.s)));
                }
            }
        }
        Ok(ManifoldScenario {
            name: None,
            description: None,
            group,
            generators,
            pi3_complete,
            closure,
            stabilizer,
            lambda3: None,
            image: OnceLock::new(),
        })
    }

    pub fn with_lambda3(mut self, table: BTreeMap<(String, String), RingElement>) -> Self {
        self.lambda3 = Some(table);
        self
    }

    /// Parses and validates a scenario document.
    pub fn load(text: &str) -> Result<Self> {
        let raw: RawScenario = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_raw(raw)
    }

    pub fn from_value(value: &serde_json::Value) -> Result<Self> {
        let raw: RawScenario = serde_json::from_value(value.clone()).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawScenario) -> Result<Self> {
        let group: Group = GroupModel::from_json(&raw.group)?.into();
        let generators = raw
            .pi3
            .generators
            .iter()
            .map(|g| {
                Ok(Pi3Generator {
                    label: g.label.clone(),
                    mu3: RingElement::from_json(&g.mu3, &group)?,
                    lambda_u: RingElement::from_json(&g.lambda_u, &group)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let closure = match raw.closure {
            RawClosure::All => ClosurePolicy::All,
            RawClosure::Ball { radius } => ClosurePolicy::Ball(radius),
            RawClosure::Explicit { elements } => {
                ClosurePolicy::Explicit(elements.iter().map(|e| group.parse(e)).collect::<Result<Vec<_>>>()?)
            }
        };
        let entries = |raw: &[RawEntry]| -> Result<Vec<StabEntry>> {
            raw.iter()
                .map(|e| Ok(StabEntry { s: group.parse(&e.s)?, u: AClass::from_json_lenient(&e.u_s, &group)? }))
                .collect()
        };
        let stabilizer = match raw.stabilizer {
            None => None,
            Some(RawStabilizer::FullTrivial { radius }) => {
                Some(StabilizerSpec::FullTrivial { radius: radius.unwrap_or(DEFAULT_TRIVIAL_RADIUS) })
            }
            Some(RawStabilizer::Table { complete, entries: e }) => {
                Some(StabilizerSpec::Table { entries: entries(&e)?, complete })
            }
            Some(RawStabilizer::Generated { depth, generators, complete }) => {
                Some(StabilizerSpec::Generated { generators: entries(&generators)?, depth, complete })
            }
        };
        let mut scenario = Self::new(group.clone(), generators, raw.pi3.complete, closure, stabilizer)?;
        scenario.name = raw.name;
        scenario.description = raw.description;
        if let Some(table) = raw.lambda3_table {
            let mut parsed = BTreeMap::new();
            for (key, value) in table {
                parsed.insert(parse_pair_key(&key)?, RingElement::from_json(&value, &group)?);
            }
            scenario.lambda3 = Some(parsed);
        }
        Ok(scenario)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn generators(&self) -> &[Pi3Generator] {
        &self.generators
    }

    pub fn closure(&self) -> &ClosurePolicy {
        &self.closure
    }

    pub fn stabilizer(&self) -> Option<&StabilizerSpec> {
        self.stabilizer.as_ref()
    }

    pub fn lambda3(&self) -> Option<&BTreeMap<(String, String), RingElement>> {
        self.lambda3.as_ref()
    }

    /// Whether a negative membership in the φ-image is conclusive: the
    /// closure runs over the whole group or the document asserts completeness.
    pub fn image_complete(&self) -> bool {
        self.pi3_complete || matches!(self.closure, ClosurePolicy::All)
    }

    /// The closure set, deduplicated, in serialization order.
    pub fn closure_set(&self) -> Result<Vec<GroupElement>> {
        let mut set: Vec<GroupElement> = match &self.closure {
            ClosurePolicy::All => self
                .group
                .enumerate()
                .map_err(|_| Error::ClosureUnresolvable("closure mode `all` on an infinite group".into()))?,
            ClosurePolicy::Explicit(elems) => elems.clone(),
            ClosurePolicy::Ball(r) => self.group.ball(*r),
        };
        set.sort();
        set.dedup();
        Ok(set)
    }

    /// The subgroup of the obstruction group generated by φ over all
    /// generators and closure elements. Computed once and cached.
    pub fn phi_image(&self) -> Result<Arc<PhiImage>> {
        self.image
            .get_or_init(|| {
                let closure = self.closure_set()?;
                let mut values = Vec::new();
                for gen in &self.generators {
                    for g in &closure {
                        values.push(PhiValue { label: gen.label.clone(), g: g.clone(), value: phi(gen, g)? });
                    }
                }
                PhiImage::from_values(&self.group, values, self.image_complete()).map(Arc::new)
            })
            .clone()
    }

    /// Consistency report over the stabilizer cocycle, the skew-hermitian
    /// `lambda_3` table and the quadratic relation for each generator.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let image = match self.phi_image() {
            Ok(image) => image,
            Err(e) => {
                report.push(Check::Cocycle, "phi_image", e.to_string());
                return report;
            }
        };
        match &self.stabilizer {
            Some(StabilizerSpec::Table { entries, .. }) => {
                report.extend(cocycle_report(&self.group, entries, &image));
            }
            Some(StabilizerSpec::Generated { generators, depth, .. }) => {
                if let Err(e) = crate::isotopy::stab_closure(generators, *depth, self) {
                    report.push(Check::Cocycle, "stab_closure", e.to_string());
                }
            }
            _ => {}
        }
        if let Some(table) = &self.lambda3 {
            report.extend(check_skew_hermitian(table));
            for gen in &self.generators {
                let key = (gen.label.clone(), gen.label.clone());
                if let Some(laa) = table.get(&key) {
                    match check_quadratic_relation(laa, &gen.mu3) {
                        Ok(mut r) => {
                            for v in &mut r.violations {
                                v.at = format!("{} at {}", gen.label, v.at);
                            }
                            report.extend(r);
                        }
                        Err(e) => report.push(Check::QuadraticRelation, gen.label.clone(), e.to_string()),
                    }
                }
            }
        }
        report
    }
}

/// Checks `U_{sr} = U_s + s U_r s^-1` modulo the φ-image for every pair of
/// tabled elements whose product is tabled. The identity is implicitly tabled
/// with `U_1 = 0` unless listed.
pub fn cocycle_report(group: &Group, entries: &[StabEntry], image: &PhiImage) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut table: BTreeMap<GroupElement, AClass> = entries.iter().map(|e| (e.s.clone(), e.u.clone())).collect();
    table.entry(group.identity()).or_insert_with(|| AClass::zero(group));
    for (s, us) in &table {
        for (r, ur) in &table {
            let Ok(sr) = s.multiply(r) else { continue };
            let Some(usr) = table.get(&sr) else { continue };
            let Ok(conj) = ur.conjugate(s) else { continue };
            let defect = usr - &(us + &conj);
            if !image.contains(&defect) {
                report.push(
                    Check::Cocycle,
                    format!("({s}, {r})"),
                    format!("U_(sr) - U_s - s U_r s^-1 = {defect} is not in the indeterminacy subgroup"),
                );
            }
        }
    }
    report
}

/// `phi(g . A) = g mu3(A) g^-1 + [g lambda(A, U)]`.
pub fn phi(gen: &Pi3Generator, g: &GroupElement) -> Result<AClass> {
    let conj = reduce_to_a(&gen.mu3).conjugate(g)?;
    let trans = reduce_to_a(&gen.lambda_u.left_mul(g)?);
    conj.checked_add(&trans)
}

/// One φ-value with its provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiValue {
    pub label: String,
    pub g: GroupElement,
    pub value: AClass,
}

/// The φ-image as an integer lattice over the pair classes supporting its
/// generators; involution coordinates carry modulus 2.
#[derive(Clone, Debug)]
pub struct PhiImage {
    group: Group,
    coords: Vec<PairClass>,
    index: BTreeMap<PairClass, usize>,
    values: Vec<PhiValue>,
    lattice: LatticeBasis,
    complete: bool,
}

impl PhiImage {
    pub fn from_values(group: &Group, values: Vec<PhiValue>, complete: bool) -> Result<Self> {
        let coords: Vec<PairClass> = values
            .iter()
            .flat_map(|v| v.value.coordinates().into_iter().map(|(c, _)| c))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: BTreeMap<PairClass, usize> = coords.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let moduli: Vec<u64> = coords.iter().map(|c| if c.is_involution() { 2 } else { 0 }).collect();
        let mut image = PhiImage {
            group: group.clone(),
            coords,
            index,
            values: Vec::new(),
            lattice: LatticeBasis::new(&[], &moduli)?,
            complete,
        };
        let vectors: Vec<Vec<BigInt>> =
            values.iter().map(|v| image.vector(&v.value).expect("support lies in the coordinates")).collect();
        image.lattice = LatticeBasis::new(&vectors, &moduli)?;
        image.values = values;
        Ok(image)
    }

    /// Builds the subgroup generated by arbitrary classes.
    pub fn from_classes(group: &Group, classes: &[AClass], complete: bool) -> Result<Self> {
        let values = classes
            .iter()
            .enumerate()
            .map(|(i, a)| PhiValue { label: format!("#{i}"), g: group.identity(), value: a.clone() })
            .collect();
        Self::from_values(group, values, complete)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn coordinates(&self) -> &[PairClass] {
        &self.coords
    }

    pub fn lattice(&self) -> &LatticeBasis {
        &self.lattice
    }

    /// The φ-values spanning the subgroup.
    pub fn values(&self) -> &[PhiValue] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.lattice.rank() == self.coords.iter().filter(|c| c.is_involution()).count()
    }

    /// Coordinates of `a`, or `None` when its support leaves the lattice's
    /// coordinates.
    pub fn vector(&self, a: &AClass) -> Option<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.coords.len()];
        for (class, _) in a.coordinates() {
            let i = *self.index.get(&class)?;
            v[i] = a.coefficient(&class);
        }
        Some(v)
    }

    fn from_vector(&self, v: &[BigInt]) -> AClass {
        let mut a = AClass::zero(&self.group);
        for (class, c) in self.coords.iter().zip(v) {
            a.add_term(class.representative(), c);
        }
        a
    }

    pub fn contains(&self, a: &AClass) -> bool {
        match self.vector(a) {
            Some(v) => self.lattice.contains(&v).expect("dimension matches"),
            None => false,
        }
    }

    /// Integer combination of [`values`](Self::values) equal to `a`, when `a`
    /// is in the subgroup.
    pub fn certificate(&self, a: &AClass) -> Option<Vec<BigInt>> {
        let v = self.vector(a)?;
        let mut c = self.lattice.certificate(&v).expect("dimension matches")?;
        c.truncate(self.values.len());
        Some(c)
    }

    /// Canonical representative of the coset `a + image`.
    pub fn reduce(&self, a: &AClass) -> AClass {
        let mut outside = a.clone();
        let mut v = vec![BigInt::zero(); self.coords.len()];
        for (class, _) in a.coordinates() {
            if let Some(&i) = self.index.get(&class) {
                let c = a.coefficient(&class);
                outside.add_term(class.representative(), &(-&c));
                v[i] = c;
            }
        }
        let reduced = self.lattice.reduce(&v).expect("dimension matches");
        &outside + &self.from_vector(&reduced)
    }

    /// `sum c_i value_i`.
    pub fn combination(&self, coeffs: &[BigInt]) -> AClass {
        let mut acc = AClass::zero(&self.group);
        for (v, c) in self.values.iter().zip(coeffs) {
            acc = &acc + &v.value.scale(c);
        }
        acc
    }
}

impl PartialEq for PhiImage {
    /// Equality of subgroups, by mutual membership of generators.
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group
            && self.values.iter().all(|v| other.contains(&v.value))
            && other.values.iter().all(|v| self.contains(&v.value))
    }
}
