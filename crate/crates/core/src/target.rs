//! The obstruction group: the group ring modulo `g + g^-1` and `1`.
//!
//! A basis of the quotient is indexed by pair classes `{g, g^-1}` with
//! `g != 1`. The representative of a class is the smaller of the two elements
//! in serialization order; a term `c * g^-1` contributes `-c` at the
//! representative `g`. Involutions (`g = g^-1`) give 2-torsion coordinates,
//! stored separately from the integer ones.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groupring::{bigint_to_json, write_term, RingElement};
use crate::groups::{Form, Group, GroupElement};

/// Basis index `{g, g^-1}` of the obstruction group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairClass {
    representative: GroupElement,
    involution: bool,
}

impl PairClass {
    /// The class of `g` and the sign relating `g` to the class representative;
    /// `None` for the identity, which is zero in the quotient.
    pub fn of(g: &GroupElement) -> Option<(PairClass, i8)> {
        if g.is_identity() {
            return None;
        }
        let gi = g.invert();
        match g.cmp(&gi) {
            Ordering::Equal => Some((PairClass { representative: g.clone(), involution: true }, 1)),
            Ordering::Less => Some((PairClass { representative: g.clone(), involution: false }, 1)),
            Ordering::Greater => Some((PairClass { representative: gi, involution: false }, -1)),
        }
    }

    pub fn representative(&self) -> &GroupElement {
        &self.representative
    }

    pub fn is_involution(&self) -> bool {
        self.involution
    }
}

/// Coefficient of an obstruction class at one basis index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficient {
    Integer(BigInt),
    /// The nonzero element of `Z/2`.
    Mod2,
}

/// A canonically reduced element of the obstruction group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AClass {
    group: Group,
    int_part: BTreeMap<Form, BigInt>,
    mod2_part: BTreeSet<Form>,
}

impl AClass {
    pub fn zero(group: &Group) -> Self {
        AClass { group: group.clone(), int_part: BTreeMap::new(), mod2_part: BTreeSet::new() }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn is_zero(&self) -> bool {
        self.int_part.is_empty() && self.mod2_part.is_empty()
    }

    /// Adds `c * g` to the class.
    pub fn add_term(&mut self, g: &GroupElement, c: &BigInt) {
        let Some((class, sign)) = PairClass::of(g) else { return };
        let form = class.representative.form().clone();
        if class.involution {
            if c.is_odd() && !self.mod2_part.remove(&form) {
                self.mod2_part.insert(form);
            }
        } else {
            let delta = if sign > 0 { c.clone() } else { -c };
            let slot = self.int_part.entry(form.clone()).or_default();
            *slot += delta;
            if slot.is_zero() {
                self.int_part.remove(&form);
            }
        }
    }

    /// Nonzero coordinates in serialization order of their representatives.
    pub fn coordinates(&self) -> Vec<(PairClass, Coefficient)> {
        let mut out: Vec<(PairClass, Coefficient)> = self
            .int_part
            .iter()
            .map(|(f, c)| {
                (
                    PairClass { representative: self.group.element(f.clone()), involution: false },
                    Coefficient::Integer(c.clone()),
                )
            })
            .chain(self.mod2_part.iter().map(|f| {
                (PairClass { representative: self.group.element(f.clone()), involution: true }, Coefficient::Mod2)
            }))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Integer coefficient at `class` (0 or 1 for involution classes).
    pub fn coefficient(&self, class: &PairClass) -> BigInt {
        let f = class.representative.form();
        if class.involution {
            if self.mod2_part.contains(f) {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        } else {
            self.int_part.get(f).cloned().unwrap_or_default()
        }
    }

    /// The canonical lift `sum c * rep` to the group ring.
    pub fn lift(&self) -> RingElement {
        let mut x = RingElement::zero(&self.group);
        for (f, c) in &self.int_part {
            x.add_term(f.clone(), c.clone());
        }
        for f in &self.mod2_part {
            x.add_term(f.clone(), BigInt::one());
        }
        x
    }

    pub fn checked_add(&self, other: &AClass) -> Result<AClass> {
        self.group.check(&other.group)?;
        let mut out = self.clone();
        for (f, c) in &other.int_part {
            let slot = out.int_part.entry(f.clone()).or_default();
            *slot += c;
            if slot.is_zero() {
                out.int_part.remove(f);
            }
        }
        for f in &other.mod2_part {
            if !out.mod2_part.remove(f) {
                out.mod2_part.insert(f.clone());
            }
        }
        Ok(out)
    }

    pub fn negate(&self) -> AClass {
        AClass {
            group: self.group.clone(),
            int_part: self.int_part.iter().map(|(f, c)| (f.clone(), -c)).collect(),
            mod2_part: self.mod2_part.clone(),
        }
    }

    pub fn checked_sub(&self, other: &AClass) -> Result<AClass> {
        self.checked_add(&other.negate())
    }

    pub fn scale(&self, k: &BigInt) -> AClass {
        let mut out = AClass::zero(&self.group);
        if k.is_zero() {
            return out;
        }
        out.int_part = self.int_part.iter().map(|(f, c)| (f.clone(), c * k)).collect();
        if k.is_odd() {
            out.mod2_part = self.mod2_part.clone();
        }
        out
    }

    /// The class of `s x s^-1` for any lift `x`.
    pub fn conjugate(&self, s: &GroupElement) -> Result<AClass> {
        self.group.check(s.group())?;
        if s.is_identity() {
            return Ok(self.clone());
        }
        Ok(reduce_to_a(&self.lift().conjugate(s)?))
    }

    /// Wire format: `{"int_part": [[coef, "rep"]], "mod2_part": ["rep"]}`.
    pub fn to_json(&self) -> Value {
        let ints: Vec<Value> =
            self.int_part.iter().map(|(f, c)| json!([bigint_to_json(c), self.group.model().format(f)])).collect();
        let mods: Vec<Value> = self.mod2_part.iter().map(|f| json!(self.group.model().format(f))).collect();
        json!({"int_part": ints, "mod2_part": mods})
    }

    /// Accepts any element strings; integer terms are reduced as ring terms
    /// and every `mod2_part` entry must name an involution.
    pub fn from_json(value: &Value, group: &Group) -> Result<AClass> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Schema("obstruction class must be an object with int_part and mod2_part".into()))?;
        for key in obj.keys() {
            if key != "int_part" && key != "mod2_part" {
                return Err(Error::Schema(format!("unexpected field `{key}` in obstruction class")));
            }
        }
        let mut out = AClass::zero(group);
        if let Some(ints) = obj.get("int_part") {
            let x = RingElement::from_json(ints, group)?;
            out = reduce_to_a(&x);
        }
        if let Some(mods) = obj.get("mod2_part") {
            let items =
                mods.as_array().ok_or_else(|| Error::Schema("`mod2_part` must be a list of element strings".into()))?;
            for item in items {
                let text = item.as_str().ok_or_else(|| Error::Schema("`mod2_part` entries must be strings".into()))?;
                let g = group.parse(text)?;
                if !g.is_involution() {
                    return Err(Error::Schema(format!("`{text}` in mod2_part is not an involution")));
                }
                out.add_term(&g, &BigInt::one());
            }
        }
        Ok(out)
    }

    /// Parses either the class wire format or a bare ring element, which is
    /// reduced.
    pub fn from_json_lenient(value: &Value, group: &Group) -> Result<AClass> {
        if value.is_array() {
            Ok(reduce_to_a(&RingElement::from_json(value, group)?))
        } else {
            AClass::from_json(value, group)
        }
    }
}

/// Reduction of a group ring element into the obstruction group. Linear over `Z`.
pub fn reduce_to_a(x: &RingElement) -> AClass {
    let mut out = AClass::zero(x.group());
    for (g, c) in x.terms() {
        out.add_term(&g, c);
    }
    out
}

impl Ord for AClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.int_part.cmp(&other.int_part).then_with(|| self.mod2_part.cmp(&other.mod2_part))
    }
}

impl PartialOrd for AClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for AClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (class, coef) in self.coordinates() {
            let rep = class.representative();
            match coef {
                Coefficient::Integer(c) => write_term(f, first, &c, &format!("{{{rep}}}"))?,
                Coefficient::Mod2 => write_term(f, first, &BigInt::one(), &format!("{{{rep}}}_2"))?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for &AClass {
    type Output = AClass;
    fn add(self, rhs: &AClass) -> AClass {
        self.checked_add(rhs).expect("classes over different group models")
    }
}

impl Sub for &AClass {
    type Output = AClass;
    fn sub(self, rhs: &AClass) -> AClass {
        self.checked_sub(rhs).expect("classes over different group models")
    }
}

impl Neg for &AClass {
    type Output = AClass;
    fn neg(self) -> AClass {
        self.negate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupModel;
    use proptest::prelude::*;

    fn group(json: Value) -> Group {
        GroupModel::from_json(&json).unwrap().into()
    }

    fn r(g: &Group, terms: &[(i64, &str)]) -> RingElement {
        RingElement::from_terms(g, terms.iter().map(|&(c, w)| (c, g.parse(w).unwrap()))).unwrap()
    }

    #[test]
    fn relation_one_is_zero() {
        let g = group(json!({"kind": "free", "symbols": ["g"]}));
        assert!(reduce_to_a(&RingElement::one(&g)).is_zero());
    }

    #[test]
    fn relation_g_plus_g_inverse() {
        let g = group(json!({"kind": "free", "symbols": ["g"]}));
        assert!(reduce_to_a(&r(&g, &[(1, "g"), (1, "g^-1")])).is_zero());
    }

    #[test]
    fn sign_convention() {
        let g = group(json!({"kind": "free", "symbols": ["g"]}));
        let a = reduce_to_a(&r(&g, &[(3, "g"), (-2, "g^-1")]));
        let (class, _) = PairClass::of(&g.parse("g").unwrap()).unwrap();
        assert_eq!(a.coefficient(&class), BigInt::from(5));
        assert_eq!(a.coordinates().len(), 1);
    }

    #[test]
    fn involution_doubles_vanish() {
        let z2 = group(json!({"kind": "finite_abelian", "moduli": [2]}));
        assert!(reduce_to_a(&r(&z2, &[(2, "t")])).is_zero());
        let one = reduce_to_a(&r(&z2, &[(3, "t")]));
        assert_eq!(one.coordinates()[0].1, Coefficient::Mod2);
    }

    #[test]
    fn group_operations() {
        let g = group(json!({"kind": "free", "symbols": ["g", "h"]}));
        let a = reduce_to_a(&r(&g, &[(5, "g"), (1, "h g")]));
        assert!((&a + &(-&a)).is_zero());
        let z2 = group(json!({"kind": "finite_abelian", "moduli": [2]}));
        let t = reduce_to_a(&r(&z2, &[(1, "t")]));
        assert!((&t + &t).is_zero());
        let five = reduce_to_a(&r(&g, &[(5, "g")]));
        let two = reduce_to_a(&r(&g, &[(-2, "g")]));
        assert_eq!(&five + &two, reduce_to_a(&r(&g, &[(3, "g")])));
    }

    #[test]
    fn conjugation() {
        let g = group(json!({"kind": "free", "symbols": ["g", "h"]}));
        let a = reduce_to_a(&r(&g, &[(1, "g")]));
        assert_eq!(a.conjugate(&g.identity()).unwrap(), a);
        assert_eq!(a.conjugate(&g.parse("h").unwrap()).unwrap(), reduce_to_a(&r(&g, &[(1, "h g h^-1")])));
        let ab = group(json!({"kind": "abelian", "moduli": [0, 3], "symbols": ["x", "y"]}));
        let b = reduce_to_a(&r(&ab, &[(2, "x y"), (1, "y^2")]));
        assert_eq!(b.conjugate(&ab.parse("x^3 y").unwrap()).unwrap(), b);
    }

    #[test]
    fn wire_format() {
        let g = group(json!({"kind": "direct_product", "factors": [
            {"kind": "free", "symbols": ["g", "h"]}, {"kind": "finite_abelian", "moduli": [2]}]}));
        let a = reduce_to_a(&r(&g, &[(3, "g"), (-2, "h^-1"), (1, "t"), (1, "g t")]));
        let v = a.to_json();
        assert_eq!(v, json!({"int_part": [[3, "g"], [1, "g t"], [2, "h"]], "mod2_part": ["t"]}));
        assert_eq!(AClass::from_json(&v, &g).unwrap(), a);
        assert!(AClass::from_json(&json!({"mod2_part": ["g"]}), &g).is_err());
        assert_eq!(a.to_string(), "{t}_2 + 3{g} + {g t} + 2{h}");
    }

    fn z4() -> Group {
        group(json!({"kind": "finite_abelian", "moduli": [4]}))
    }

    fn s3() -> Group {
        group(json!({"kind": "permutation", "degree": 3, "generators": [[1, 0, 2], [0, 2, 1]], "symbols": ["a", "b"]}))
    }

    fn ring(g: &Group, spec: &[(i64, Vec<(usize, i64)>)]) -> RingElement {
        let syms: Vec<String> = g.model().symbols().to_vec();
        RingElement::from_terms(
            g,
            spec.iter().map(|(c, w)| {
                let word: Vec<(&str, i64)> = w.iter().map(|&(s, e)| (syms[s % syms.len()].as_str(), e)).collect();
                (*c, g.normalize(&word).unwrap())
            }),
        )
        .unwrap()
    }

    fn spec_strategy() -> impl Strategy<Value = Vec<(i64, Vec<(usize, i64)>)>> {
        prop::collection::vec((-6i64..=6, prop::collection::vec((0usize..4, -3i64..=3), 0..5)), 0..6)
    }

    proptest! {
        #[test]
        fn reduction_is_linear(a in spec_strategy(), b in spec_strategy()) {
            for g in [s3(), z4(), group(json!({"kind": "free", "symbols": ["g", "h"]}))] {
                let (x, y) = (ring(&g, &a), ring(&g, &b));
                prop_assert_eq!(reduce_to_a(&(&x + &y)), &reduce_to_a(&x) + &reduce_to_a(&y));
                prop_assert!(reduce_to_a(&(&x + &x.bar())).is_zero());
            }
        }

        #[test]
        fn conjugation_commutes_with_reduction(a in spec_strategy(), w in prop::collection::vec((0usize..4, -3i64..=3), 0..5)) {
            for g in [s3(), z4(), group(json!({"kind": "free", "symbols": ["g", "h"]}))] {
                let x = ring(&g, &a);
                let syms: Vec<String> = g.model().symbols().to_vec();
                let word: Vec<(&str, i64)> = w.iter().map(|&(s, e)| (syms[s % syms.len()].as_str(), e)).collect();
                let s = g.normalize(&word).unwrap();
                prop_assert_eq!(reduce_to_a(&x.conjugate(&s).unwrap()), reduce_to_a(&x).conjugate(&s).unwrap());
                let a = reduce_to_a(&x);
                prop_assert_eq!(AClass::from_json(&a.to_json(), &g).unwrap(), a);
            }
        }
    }
}
