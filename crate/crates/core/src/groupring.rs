//! Exact arithmetic in the integral group ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::groups::{Form, Group, GroupElement};
use crate::report::{Check, ValidationReport};

/// A finitely supported integer combination of group elements. Zero
/// coefficients are never stored and terms iterate in serialization order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    group: Group,
    terms: BTreeMap<Form, BigInt>,
}

impl RingElement {
    pub fn zero(group: &Group) -> Self {
        RingElement { group: group.clone(), terms: BTreeMap::new() }
    }

    pub fn one(group: &Group) -> Self {
        Self::from_element(&group.identity())
    }

    pub fn from_element(g: &GroupElement) -> Self {
        Self::monomial(BigInt::one(), g)
    }

    pub fn monomial(coef: impl Into<BigInt>, g: &GroupElement) -> Self {
        let mut x = Self::zero(g.group());
        x.add_term(g.form().clone(), coef.into());
        x
    }

    /// Builds `sum c_i g_i`, merging repeated elements.
    pub fn from_terms<C: Into<BigInt>>(
        group: &Group,
        terms: impl IntoIterator<Item = (C, GroupElement)>,
    ) -> Result<Self> {
        let mut x = Self::zero(group);
        for (c, g) in terms {
            group.check(g.group())?;
            x.add_term(g.into_form(), c.into());
        }
        Ok(x)
    }

    pub(crate) fn add_term(&mut self, form: Form, coef: BigInt) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(form);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of group elements with nonzero coefficient.
    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (GroupElement, &BigInt)> + '_ {
        self.terms.iter().map(|(f, c)| (self.group.element(f.clone()), c))
    }

    #[cfg(test)]
    pub(crate) fn raw_terms(&self) -> &BTreeMap<Form, BigInt> {
        &self.terms
    }

    pub fn coefficient(&self, g: &GroupElement) -> BigInt {
        self.terms.get(g.form()).cloned().unwrap_or_default()
    }

    pub fn checked_add(&self, other: &RingElement) -> Result<RingElement> {
        self.group.check(&other.group)?;
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(f.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &RingElement) -> Result<RingElement> {
        self.checked_add(&other.neg_ref())
    }

    /// Convolution product `sum x_g y_h (gh)`.
    pub fn checked_mul(&self, other: &RingElement) -> Result<RingElement> {
        self.group.check(&other.group)?;
        let m = self.group.model();
        let mut out = Self::zero(&self.group);
        for (f, c) in &self.terms {
            for (g, d) in &other.terms {
                out.add_term(m.mul(f, g), c * d);
            }
        }
        Ok(out)
    }

    fn neg_ref(&self) -> RingElement {
        RingElement { group: self.group.clone(), terms: self.terms.iter().map(|(f, c)| (f.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> RingElement {
        if k.is_zero() {
            return Self::zero(&self.group);
        }
        RingElement { group: self.group.clone(), terms: self.terms.iter().map(|(f, c)| (f.clone(), c * k)).collect() }
    }

    /// The involution `sum x_g g^-1`.
    pub fn bar(&self) -> RingElement {
        let m = self.group.model();
        let mut out = Self::zero(&self.group);
        for (f, c) in &self.terms {
            out.add_term(m.inv(f), c.clone());
        }
        out
    }

    /// `g * self`.
    pub fn left_mul(&self, g: &GroupElement) -> Result<RingElement> {
        self.group.check(g.group())?;
        let m = self.group.model();
        let mut out = Self::zero(&self.group);
        for (f, c) in &self.terms {
            out.add_term(m.mul(g.form(), f), c.clone());
        }
        Ok(out)
    }

    /// `s * self * s^-1`.
    pub fn conjugate(&self, s: &GroupElement) -> Result<RingElement> {
        self.group.check(s.group())?;
        let m = self.group.model();
        let si = m.inv(s.form());
        let mut out = Self::zero(&self.group);
        for (f, c) in &self.terms {
            out.add_term(m.mul(&m.mul(s.form(), f), &si), c.clone());
        }
        Ok(out)
    }

    /// Wire format: `[[coefficient, "element"], ...]`; `[]` is zero.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms().map(|(g, c)| Value::Array(vec![bigint_to_json(c), Value::String(g.to_string())])).collect(),
        )
    }

    pub fn from_json(value: &Value, group: &Group) -> Result<RingElement> {
        let items = value
            .as_array()
            .ok_or_else(|| Error::Schema("ring element must be a list of [coefficient, element] pairs".into()))?;
        let mut out = Self::zero(group);
        for item in items {
            let pair = item
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Schema("ring element term must be a [coefficient, element] pair".into()))?;
            let coef = bigint_from_json(&pair[0])?;
            let text = pair[1]
                .as_str()
                .ok_or_else(|| Error::Schema("ring element term must name its element as a string".into()))?;
            let g = group.parse(text)?;
            out.add_term(g.into_form(), coef);
        }
        Ok(out)
    }
}

pub(crate) fn bigint_to_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(c.to_string()),
    }
}

pub(crate) fn bigint_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::Schema(format!("coefficient {n} is not an integer")))
            }
        }
        Value::String(s) => s.trim().parse().map_err(|_| Error::Schema(format!("coefficient `{s}` is not an integer"))),
        _ => Err(Error::Schema("coefficient must be an integer".into())),
    }
}

pub(crate) fn write_term(f: &mut fmt::Formatter<'_>, first: bool, c: &BigInt, body: &str) -> fmt::Result {
    let sep = match (first, c.is_negative()) {
        (true, true) => "-",
        (true, false) => "",
        (false, true) => " - ",
        (false, false) => " + ",
    };
    let mag = c.abs();
    if mag.is_one() {
        write!(f, "{sep}{body}")
    } else {
        write!(f, "{sep}{mag}{body}")
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (g, c)) in self.terms().enumerate() {
            write_term(f, i == 0, c, &format!("[{g}]"))?;
        }
        Ok(())
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.checked_add(rhs).expect("ring elements over different group models")
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self.checked_sub(rhs).expect("ring elements over different group models")
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.checked_mul(rhs).expect("ring elements over different group models")
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.neg_ref()
    }
}

/// Reports every pair of labels where `lambda(j, i) != -bar(lambda(i, j))`.
/// A missing transpose entry is read as zero.
pub fn check_skew_hermitian(table: &BTreeMap<(String, String), RingElement>) -> ValidationReport {
    let mut report = ValidationReport::default();
    for ((i, j), lij) in table {
        let key_t = (j.clone(), i.clone());
        // each unordered pair is inspected once, from its smaller key
        if i > j && table.contains_key(&key_t) {
            continue;
        }
        let expected = -&lij.bar();
        let zero = RingElement::zero(lij.group());
        let lji = table.get(&key_t).unwrap_or(&zero);
        if lji.group() != lij.group() {
            report.push(Check::SkewHermitian, format!("({i},{j})"), "entries over different group models");
            continue;
        }
        if *lji != expected {
            report.push(
                Check::SkewHermitian,
                format!("({i},{j})"),
                format!("lambda({j},{i}) = {lji} but -bar(lambda({i},{j})) = {expected}"),
            );
        }
    }
    report
}

/// Checks `lambda(A, A) = mu(A) - bar(mu(A))` away from the identity
/// coefficient, which the relation does not constrain.
pub fn check_quadratic_relation(lambda_aa: &RingElement, mu_lift: &RingElement) -> Result<ValidationReport> {
    let expected = mu_lift.checked_sub(&mu_lift.bar())?;
    let diff = lambda_aa.checked_sub(&expected)?;
    let mut report = ValidationReport::default();
    for (g, _) in diff.terms() {
        if g.is_identity() {
            continue;
        }
        report.push(
            Check::QuadraticRelation,
            g.to_string(),
            format!(
                "lambda(A,A) has coefficient {} but mu(A) - bar(mu(A)) has {}",
                lambda_aa.coefficient(&g),
                expected.coefficient(&g)
            ),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupModel;
    use proptest::prelude::*;

    fn free(symbols: &[&str]) -> Group {
        GroupModel::free(symbols).unwrap().into()
    }

    fn r(g: &Group, terms: &[(i64, &str)]) -> RingElement {
        RingElement::from_terms(g, terms.iter().map(|&(c, w)| (c, g.parse(w).unwrap()))).unwrap()
    }

    #[test]
    fn addition_prunes_zero() {
        let g = free(&["g", "h"]);
        assert!((&r(&g, &[(1, "g")]) + &r(&g, &[(-1, "g")])).is_zero());
        assert_eq!(&r(&g, &[(2, "g"), (1, "h")]) + &r(&g, &[(1, "h")]), r(&g, &[(2, "g"), (2, "h")]));
        let s = &r(&g, &[(1, "g")]) + &r(&g, &[(1, "g^-1")]);
        assert_eq!(s.support_len(), 2);
    }

    #[test]
    fn multiplication() {
        let g = free(&["g", "h"]);
        assert_eq!(&r(&g, &[(1, "g")]) * &r(&g, &[(1, "h")]), r(&g, &[(1, "g h")]));
        let x = free(&["g"]);
        let lhs = &r(&x, &[(1, "1"), (1, "g")]) * &r(&x, &[(1, "1"), (-1, "g")]);
        assert_eq!(lhs, r(&x, &[(1, "1"), (-1, "g^2")]));
        assert!((&lhs * &RingElement::zero(&x)).is_zero());
    }

    #[test]
    fn mismatched_models() {
        let a = RingElement::one(&free(&["g"]));
        let b = RingElement::one(&free(&["h"]));
        assert_eq!(a.checked_add(&b).unwrap_err(), Error::ModelMismatch);
        assert_eq!(a.checked_mul(&b).unwrap_err(), Error::ModelMismatch);
    }

    #[test]
    fn bar_examples() {
        let g = free(&["g", "h"]);
        assert_eq!(r(&g, &[(2, "g"), (1, "h")]).bar(), r(&g, &[(2, "g^-1"), (1, "h^-1")]));
        assert_eq!(RingElement::one(&g).bar(), RingElement::one(&g));
        assert_eq!(r(&g, &[(1, "g"), (-1, "g^-1")]).bar(), r(&g, &[(1, "g^-1"), (-1, "g")]));
    }

    #[test]
    fn skew_hermitian_examples() {
        let g = free(&["g"]);
        let key = |a: &str, b: &str| (a.to_string(), b.to_string());
        let good = BTreeMap::from([(key("1", "2"), r(&g, &[(1, "g")])), (key("2", "1"), r(&g, &[(-1, "g^-1")]))]);
        assert!(check_skew_hermitian(&good).is_consistent());
        let bad = BTreeMap::from([(key("1", "2"), r(&g, &[(1, "g")])), (key("2", "1"), r(&g, &[(1, "g")]))]);
        let rep = check_skew_hermitian(&bad);
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].at, "(1,2)");
        assert!(check_skew_hermitian(&BTreeMap::new()).is_consistent());
    }

    #[test]
    fn quadratic_relation_examples() {
        let g = free(&["g"]);
        assert!(check_quadratic_relation(&r(&g, &[(1, "g"), (-1, "g^-1")]), &r(&g, &[(1, "g")]))
            .unwrap()
            .is_consistent());
        assert!(check_quadratic_relation(&RingElement::zero(&g), &r(&g, &[(3, "1")])).unwrap().is_consistent());
        let rep = check_quadratic_relation(&r(&g, &[(1, "g")]), &RingElement::zero(&g)).unwrap();
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].at, "g");
    }

    #[test]
    fn wire_format() {
        let g = free(&["g", "h"]);
        let x = RingElement::from_json(&serde_json::json!([[2, "g"], [-1, "h^-1"]]), &g).unwrap();
        assert_eq!(x.to_json(), serde_json::json!([[2, "g"], [-1, "h^-1"]]));
        assert!(RingElement::from_json(&serde_json::json!([]), &g).unwrap().is_zero());
        let big = RingElement::from_json(&serde_json::json!([["123456789012345678901234567890", "g"]]), &g).unwrap();
        assert_eq!(RingElement::from_json(&big.to_json(), &g).unwrap(), big);
    }

    fn element_strategy() -> impl Strategy<Value = Vec<(i64, Vec<(usize, i64)>)>> {
        prop::collection::vec((-5i64..=5, prop::collection::vec((0usize..2, -2i64..=2), 0..4)), 0..5)
    }

    fn build(g: &Group, terms: &[(i64, Vec<(usize, i64)>)]) -> RingElement {
        let syms = ["g", "h"];
        RingElement::from_terms(
            g,
            terms
                .iter()
                .map(|(c, w)| (*c, g.normalize(&w.iter().map(|&(s, e)| (syms[s], e)).collect::<Vec<_>>()).unwrap())),
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn ring_axioms(a in element_strategy(), b in element_strategy(), c in element_strategy()) {
            let g = free(&["g", "h"]);
            let (x, y, z) = (build(&g, &a), build(&g, &b), build(&g, &c));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &RingElement::one(&g), x.clone());
            prop_assert_eq!((&x * &y).bar(), &y.bar() * &x.bar());
            prop_assert_eq!(x.bar().bar(), x.clone());
            let p = &x * &y;
            prop_assert!(p.raw_terms().values().all(|c| !c.is_zero()));
            prop_assert!((&x + &y).raw_terms().values().all(|c| !c.is_zero()));
        }
    }
}
