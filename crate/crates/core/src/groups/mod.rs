//! Group models with a solved word problem.
//!
//! Every supported model stores elements in a canonical [`Form`]; two words
//! denote the same element exactly when their canonical forms agree. The
//! derived ordering on forms is the serialization order used wherever a
//! deterministic representative is needed (pair-class representatives,
//! orbit minima, output term order).

mod json;
mod word;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

pub use word::parse_word;

/// Canonical form of a group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    /// Freely reduced word, run-length encoded as `(generator, exponent)` with
    /// adjacent generators distinct and exponents nonzero.
    Word(Vec<(u32, i64)>),
    /// Exponent vector; torsion coordinates reduced to `[0, m)`.
    Vector(Vec<i64>),
    /// Row index into a multiplication table.
    Index(u32),
    /// Image tuple of a permutation.
    Perm(Vec<u32>),
    /// Componentwise element of a direct product.
    Tuple(Vec<Form>),
}

impl Form {
    fn rank(&self) -> u8 {
        match self {
            Form::Word(_) => 0,
            Form::Vector(_) => 1,
            Form::Index(_) => 2,
            Form::Perm(_) => 3,
            Form::Tuple(_) => 4,
        }
    }
}

fn letter_code(gen: u32, exp: i64) -> u64 {
    2 * u64::from(gen) + u64::from(exp < 0)
}

fn letters(word: &[(u32, i64)]) -> impl Iterator<Item = u64> + '_ {
    word.iter().flat_map(|&(g, e)| std::iter::repeat(letter_code(g, e)).take(e.unsigned_abs() as usize))
}

/// 0, 1, -1, 2, -2, ... in that order.
fn zigzag(x: i64) -> u64 {
    match x.cmp(&0) {
        Ordering::Equal => 0,
        Ordering::Greater => 2 * (x as u64) - 1,
        Ordering::Less => 2 * x.unsigned_abs(),
    }
}

impl Ord for Form {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Form::Word(a), Form::Word(b)) => {
                let la: u64 = a.iter().map(|&(_, e)| e.unsigned_abs()).sum();
                let lb: u64 = b.iter().map(|&(_, e)| e.unsigned_abs()).sum();
                la.cmp(&lb).then_with(|| letters(a).cmp(letters(b)))
            }
            (Form::Vector(a), Form::Vector(b)) => a.iter().map(|&x| zigzag(x)).cmp(b.iter().map(|&x| zigzag(x))),
            (Form::Index(a), Form::Index(b)) => a.cmp(b),
            (Form::Perm(a), Form::Perm(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
            (Form::Tuple(a), Form::Tuple(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Form {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Kind {
    Free { rank: u32 },
    Abelian { moduli: Vec<u64> },
    Permutation { degree: u32, generators: Vec<Vec<u32>> },
    Table { table: Vec<Vec<u32>>, identity: u32, inverses: Vec<u32> },
    Product(Vec<GroupModel>),
}

/// Shortest-word representatives for permutation groups, computed on demand.
#[derive(Default)]
struct WordCache(OnceLock<BTreeMap<Form, Vec<(usize, i64)>>>);

impl Clone for WordCache {
    fn clone(&self) -> Self {
        WordCache::default()
    }
}

impl fmt::Debug for WordCache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("WordCache")
    }
}

impl PartialEq for WordCache {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for WordCache {}

/// A group model: one of the supported classes together with its generator
/// symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupModel {
    kind: Kind,
    symbols: Vec<String>,
    lookup: HashMap<String, Form>,
    words: WordCache,
}

impl GroupModel {
    fn build(kind: Kind, symbols: Vec<String>) -> Result<Self> {
        for s in &symbols {
            word::check_symbol(s)?;
        }
        let mut lookup = HashMap::new();
        match &kind {
            Kind::Product(factors) => {
                for (i, factor) in factors.iter().enumerate() {
                    for sym in &factor.symbols {
                        let local = factor.lookup[sym].clone();
                        let mut parts: Vec<Form> = factors.iter().map(|f| f.identity_form()).collect();
                        parts[i] = local;
                        if lookup.insert(sym.clone(), Form::Tuple(parts)).is_some() {
                            return Err(Error::InvalidModel(format!("symbol `{sym}` appears in more than one factor")));
                        }
                    }
                }
            }
            _ => {
                for (i, sym) in symbols.iter().enumerate() {
                    let form = match &kind {
                        Kind::Free { .. } => Form::Word(vec![(i as u32, 1)]),
                        Kind::Abelian { moduli } => {
                            let mut v = vec![0; moduli.len()];
                            v[i] = if moduli[i] == 1 { 0 } else { 1 };
                            Form::Vector(v)
                        }
                        Kind::Permutation { generators, .. } => Form::Perm(generators[i].clone()),
                        Kind::Table { .. } => Form::Index(i as u32),
                        Kind::Product(_) => unreachable!(),
                    };
                    if lookup.insert(sym.clone(), form).is_some() {
                        return Err(Error::InvalidModel(format!("duplicate symbol `{sym}`")));
                    }
                }
            }
        }
        Ok(GroupModel { kind, symbols, lookup, words: WordCache::default() })
    }

    fn default_symbols(prefix: &str, n: usize) -> Vec<String> {
        if n == 1 && prefix == "t" {
            return vec!["t".into()];
        }
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn check_symbol_count(symbols: &[String], n: usize) -> Result<()> {
        if symbols.len() != n {
            return Err(Error::InvalidModel(format!("expected {n} symbols, got {}", symbols.len())));
        }
        Ok(())
    }

    /// Free group on the given symbols.
    pub fn free(symbols: &[&str]) -> Result<Self> {
        let symbols: Vec<String> = symbols.iter().map(|s| s.to_string()).collect();
        Self::build(Kind::Free { rank: symbols.len() as u32 }, symbols)
    }

    /// Finitely generated abelian group `Z/m1 x ... x Z/mk`, where a modulus
    /// of 0 denotes a free `Z` coordinate.
    pub fn abelian(moduli: &[u64], symbols: Option<&[&str]>) -> Result<Self> {
        let symbols: Vec<String> = match symbols {
            Some(s) => s.iter().map(|s| s.to_string()).collect(),
            None => Self::default_symbols("t", moduli.len()),
        };
        Self::check_symbol_count(&symbols, moduli.len())?;
        Self::build(Kind::Abelian { moduli: moduli.to_vec() }, symbols)
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        Self::build(Kind::Abelian { moduli: vec![] }, vec![]).expect("trivial model")
    }

    /// Subgroup of the symmetric group on `degree` letters generated by the
    /// given image tuples. Products compose right to left: `(a*b)(i) = a(b(i))`.
    pub fn permutation(degree: u32, generators: Vec<Vec<u32>>, symbols: Option<&[&str]>) -> Result<Self> {
        for (k, g) in generators.iter().enumerate() {
            if g.len() != degree as usize {
                return Err(Error::InvalidModel(format!(
                    "generator {k} has length {} but degree is {degree}",
                    g.len()
                )));
            }
            let seen: BTreeSet<u32> = g.iter().copied().collect();
            if seen.len() != g.len() || g.iter().any(|&x| x >= degree) {
                return Err(Error::InvalidModel(format!("generator {k} is not a permutation")));
            }
        }
        let symbols: Vec<String> = match symbols {
            Some(s) => s.iter().map(|s| s.to_string()).collect(),
            None => Self::default_symbols("p", generators.len()),
        };
        Self::check_symbol_count(&symbols, generators.len())?;
        Self::build(Kind::Permutation { degree, generators }, symbols)
    }

    /// Finite group given by its full multiplication table; `symbols[i]` names
    /// element `i`.
    pub fn finite_table(table: Vec<Vec<u32>>, identity: u32, symbols: Option<&[&str]>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidModel("empty multiplication table".into()));
        }
        if identity as usize >= n {
            return Err(Error::InvalidModel("identity index out of range".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidModel(format!("row {i} has length {}", row.len())));
            }
            let seen: BTreeSet<u32> = row.iter().copied().collect();
            if seen.len() != n || row.iter().any(|&x| x as usize >= n) {
                return Err(Error::InvalidModel(format!("row {i} is not a permutation of the elements")));
            }
        }
        let e = identity as usize;
        for i in 0..n {
            if table[e][i] as usize != i || table[i][e] as usize != i {
                return Err(Error::InvalidModel(format!("element {identity} is not a two-sided identity")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b] as usize;
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c] as usize] {
                        return Err(Error::InvalidModel(format!("table is not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let inverses: Vec<u32> = (0..n).map(|a| table[a].iter().position(|&x| x == identity).unwrap() as u32).collect();
        let symbols: Vec<String> = match symbols {
            Some(s) => s.iter().map(|s| s.to_string()).collect(),
            None => (0..n).map(|i| format!("e{i}")).collect(),
        };
        Self::check_symbol_count(&symbols, n)?;
        Self::build(Kind::Table { table, identity, inverses }, symbols)
    }

    /// Direct product of the given models; generator symbols must be distinct
    /// across factors.
    pub fn direct_product(factors: Vec<GroupModel>) -> Result<Self> {
        let symbols = factors.iter().flat_map(|f| f.symbols.clone()).collect();
        Self::build(Kind::Product(factors), symbols)
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub(crate) fn symbol_form(&self, sym: &str) -> Option<&Form> {
        self.lookup.get(sym)
    }

    pub(crate) fn identity_form(&self) -> Form {
        match &self.kind {
            Kind::Free { .. } => Form::Word(vec![]),
            Kind::Abelian { moduli } => Form::Vector(vec![0; moduli.len()]),
            Kind::Permutation { degree, .. } => Form::Perm((0..*degree).collect()),
            Kind::Table { identity, .. } => Form::Index(*identity),
            Kind::Product(fs) => Form::Tuple(fs.iter().map(|f| f.identity_form()).collect()),
        }
    }

    /// Whether `form` has the shape of a canonical form of this model.
    pub(crate) fn owns(&self, form: &Form) -> bool {
        match (&self.kind, form) {
            (Kind::Free { rank }, Form::Word(w)) => {
                w.iter().all(|&(g, e)| g < *rank && e != 0) && w.windows(2).all(|p| p[0].0 != p[1].0)
            }
            (Kind::Abelian { moduli }, Form::Vector(v)) => {
                v.len() == moduli.len() && v.iter().zip(moduli).all(|(&x, &m)| m == 0 || (x >= 0 && (x as u64) < m))
            }
            (Kind::Permutation { degree, .. }, Form::Perm(p)) => p.len() == *degree as usize,
            (Kind::Table { table, .. }, Form::Index(i)) => (*i as usize) < table.len(),
            (Kind::Product(fs), Form::Tuple(parts)) => {
                fs.len() == parts.len() && fs.iter().zip(parts).all(|(f, p)| f.owns(p))
            }
            _ => false,
        }
    }

    pub(crate) fn mul(&self, a: &Form, b: &Form) -> Form {
        match (&self.kind, a, b) {
            (Kind::Free { .. }, Form::Word(x), Form::Word(y)) => {
                let mut out = x.clone();
                for &(g, e) in y {
                    push_letter(&mut out, g, e);
                }
                Form::Word(out)
            }
            (Kind::Abelian { moduli }, Form::Vector(x), Form::Vector(y)) => Form::Vector(
                x.iter()
                    .zip(y)
                    .zip(moduli)
                    .map(|((&p, &q), &m)| reduce_mod(p.checked_add(q).expect("exponent overflow"), m))
                    .collect(),
            ),
            (Kind::Permutation { .. }, Form::Perm(x), Form::Perm(y)) => {
                Form::Perm(y.iter().map(|&i| x[i as usize]).collect())
            }
            (Kind::Table { table, .. }, Form::Index(x), Form::Index(y)) => Form::Index(table[*x as usize][*y as usize]),
            (Kind::Product(fs), Form::Tuple(x), Form::Tuple(y)) => {
                Form::Tuple(fs.iter().zip(x.iter().zip(y)).map(|(f, (p, q))| f.mul(p, q)).collect())
            }
            _ => panic!("form does not belong to this model"),
        }
    }

    pub(crate) fn inv(&self, a: &Form) -> Form {
        match (&self.kind, a) {
            (Kind::Free { .. }, Form::Word(x)) => Form::Word(x.iter().rev().map(|&(g, e)| (g, -e)).collect()),
            (Kind::Abelian { moduli }, Form::Vector(x)) => {
                Form::Vector(x.iter().zip(moduli).map(|(&p, &m)| reduce_mod(-p, m)).collect())
            }
            (Kind::Permutation { .. }, Form::Perm(x)) => {
                let mut out = vec![0; x.len()];
                for (i, &xi) in x.iter().enumerate() {
                    out[xi as usize] = i as u32;
                }
                Form::Perm(out)
            }
            (Kind::Table { inverses, .. }, Form::Index(x)) => Form::Index(inverses[*x as usize]),
            (Kind::Product(fs), Form::Tuple(x)) => Form::Tuple(fs.iter().zip(x).map(|(f, p)| f.inv(p)).collect()),
            _ => panic!("form does not belong to this model"),
        }
    }

    pub(crate) fn pow(&self, a: &Form, exp: i64) -> Form {
        match (&self.kind, a) {
            (Kind::Free { .. }, Form::Word(x)) if x.len() == 1 => {
                let (g, e) = x[0];
                let e = e.checked_mul(exp).expect("exponent overflow");
                Form::Word(if e == 0 { vec![] } else { vec![(g, e)] })
            }
            (Kind::Abelian { moduli }, Form::Vector(x)) => Form::Vector(
                x.iter()
                    .zip(moduli)
                    .map(|(&p, &m)| reduce_mod(p.checked_mul(exp).expect("exponent overflow"), m))
                    .collect(),
            ),
            _ => {
                let base = if exp < 0 { self.inv(a) } else { a.clone() };
                let mut e = exp.unsigned_abs();
                let mut acc = self.identity_form();
                let mut sq = base;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = self.mul(&acc, &sq);
                    }
                    e >>= 1;
                    if e > 0 {
                        sq = self.mul(&sq, &sq);
                    }
                }
                acc
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        match &self.kind {
            Kind::Free { rank } => *rank == 0,
            Kind::Abelian { moduli } => moduli.iter().all(|&m| m > 0),
            Kind::Permutation { .. } | Kind::Table { .. } => true,
            Kind::Product(fs) => fs.iter().all(|f| f.is_finite()),
        }
    }

    /// Whether conjugation is trivial in this model.
    pub fn is_abelian(&self) -> bool {
        match &self.kind {
            Kind::Free { rank } => *rank <= 1,
            Kind::Abelian { .. } => true,
            Kind::Product(fs) => fs.iter().all(|f| f.is_abelian()),
            Kind::Permutation { .. } | Kind::Table { .. } => {
                let gens: Vec<&Form> = self.lookup.values().collect();
                gens.iter().all(|a| gens.iter().all(|b| self.mul(a, b) == self.mul(b, a)))
            }
        }
    }

    fn closure_forms(&self) -> Vec<Form> {
        let id = self.identity_form();
        let mut seen: BTreeSet<Form> = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        let gens: Vec<&Form> = self.lookup.values().collect();
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = self.mul(&x, g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub(crate) fn enumerate_forms(&self) -> Result<Vec<Form>> {
        if !self.is_finite() {
            return Err(Error::InfiniteGroup);
        }
        let mut all = match &self.kind {
            Kind::Free { .. } => vec![Form::Word(vec![])],
            Kind::Abelian { moduli } => {
                let mut acc: Vec<Vec<i64>> = vec![vec![]];
                for &m in moduli {
                    acc = acc
                        .into_iter()
                        .flat_map(|v| {
                            (0..m as i64).map(move |x| {
                                let mut w = v.clone();
                                w.push(x);
                                w
                            })
                        })
                        .collect();
                }
                acc.into_iter().map(Form::Vector).collect()
            }
            Kind::Table { table, .. } => (0..table.len() as u32).map(Form::Index).collect(),
            Kind::Permutation { .. } => self.closure_forms(),
            Kind::Product(fs) => {
                let mut acc: Vec<Vec<Form>> = vec![vec![]];
                for f in fs {
                    let elems = f.enumerate_forms()?;
                    acc = acc
                        .into_iter()
                        .flat_map(|v| {
                            elems.iter().map(move |x| {
                                let mut w = v.clone();
                                w.push(x.clone());
                                w
                            })
                        })
                        .collect();
                }
                acc.into_iter().map(Form::Tuple).collect()
            }
        };
        all.sort();
        Ok(all)
    }

    /// All elements of word length at most `radius` in the generators and
    /// their inverses.
    pub(crate) fn ball_forms(&self, radius: u32) -> Vec<Form> {
        let id = self.identity_form();
        let mut steps: Vec<Form> = Vec::new();
        for g in self.lookup.values() {
            steps.push(g.clone());
            steps.push(self.inv(g));
        }
        steps.sort();
        steps.dedup();
        let mut seen: BTreeSet<Form> = BTreeSet::from([id.clone()]);
        let mut frontier = vec![id];
        for _ in 0..radius {
            let mut next = Vec::new();
            for x in &frontier {
                for s in &steps {
                    let y = self.mul(x, s);
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        seen.into_iter().collect()
    }

    /// A word `(symbol index, exponent)` for a permutation element.
    fn permutation_word(&self, form: &Form) -> Vec<(usize, i64)> {
        let map = self.words.0.get_or_init(|| {
            let id = self.identity_form();
            let mut steps: Vec<(usize, i64, Form)> = Vec::new();
            for (i, sym) in self.symbols.iter().enumerate() {
                let g = self.lookup[sym].clone();
                steps.push((i, 1, g.clone()));
                steps.push((i, -1, self.inv(&g)));
            }
            let mut words: BTreeMap<Form, Vec<(usize, i64)>> = BTreeMap::from([(id.clone(), vec![])]);
            let mut queue = VecDeque::from([id]);
            while let Some(x) = queue.pop_front() {
                let wx = words[&x].clone();
                for (i, e, s) in &steps {
                    let y = self.mul(&x, s);
                    if !words.contains_key(&y) {
                        let mut wy = wx.clone();
                        match wy.last_mut() {
                            Some(last) if last.0 == *i => last.1 += e,
                            _ => wy.push((*i, *e)),
                        }
                        wy.retain(|&(_, e)| e != 0);
                        words.insert(y.clone(), wy);
                        queue.push_back(y);
                    }
                }
            }
            words
        });
        map.get(form).cloned().unwrap_or_default()
    }

    pub(crate) fn format(&self, form: &Form) -> String {
        let parts = self.format_parts(form);
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }

    fn format_parts(&self, form: &Form) -> Vec<String> {
        let tok = |sym: &str, e: i64| if e == 1 { sym.to_string() } else { format!("{sym}^{e}") };
        match (&self.kind, form) {
            (Kind::Free { .. }, Form::Word(w)) => w.iter().map(|&(g, e)| tok(&self.symbols[g as usize], e)).collect(),
            (Kind::Abelian { .. }, Form::Vector(v)) => {
                v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| tok(&self.symbols[i], x)).collect()
            }
            (Kind::Permutation { .. }, Form::Perm(_)) => {
                self.permutation_word(form).into_iter().map(|(i, e)| tok(&self.symbols[i], e)).collect()
            }
            (Kind::Table { identity, .. }, Form::Index(i)) => {
                if i == identity {
                    vec![]
                } else {
                    vec![self.symbols[*i as usize].clone()]
                }
            }
            (Kind::Product(fs), Form::Tuple(parts)) => {
                fs.iter().zip(parts).flat_map(|(f, p)| f.format_parts(p)).collect()
            }
            _ => vec!["<foreign>".to_string()],
        }
    }
}

fn push_letter(out: &mut Vec<(u32, i64)>, g: u32, e: i64) {
    if let Some(last) = out.last_mut() {
        if last.0 == g {
            last.1 = last.1.checked_add(e).expect("exponent overflow");
            if last.1 == 0 {
                out.pop();
            }
            return;
        }
    }
    if e != 0 {
        out.push((g, e));
    }
}

fn reduce_mod(x: i64, m: u64) -> i64 {
    if m == 0 {
        x
    } else {
        x.rem_euclid(m as i64)
    }
}

/// Shared handle to a group model. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct Group(Arc<GroupModel>);

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Group {}

impl From<GroupModel> for Group {
    fn from(model: GroupModel) -> Self {
        Group(Arc::new(model))
    }
}

impl Group {
    pub fn model(&self) -> &GroupModel {
        &self.0
    }

    pub(crate) fn check(&self, other: &Group) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ModelMismatch)
        }
    }

    pub(crate) fn element(&self, form: Form) -> GroupElement {
        debug_assert!(self.0.owns(&form));
        GroupElement { group: self.clone(), form }
    }

    pub fn identity(&self) -> GroupElement {
        self.element(self.0.identity_form())
    }

    /// Canonical form of the word `sym1^e1 sym2^e2 ...`.
    pub fn normalize<S: AsRef<str>>(&self, word: &[(S, i64)]) -> Result<GroupElement> {
        let mut acc = self.0.identity_form();
        for (sym, exp) in word {
            let sym = sym.as_ref();
            if sym == "1" {
                continue;
            }
            let g = self.0.symbol_form(sym).ok_or_else(|| Error::UnknownGenerator(sym.to_string()))?;
            acc = self.0.mul(&acc, &self.0.pow(g, *exp));
        }
        Ok(self.element(acc))
    }

    /// Parses the element wire format, e.g. `"g h^-1 g^2"`; `"1"` is the identity.
    pub fn parse(&self, text: &str) -> Result<GroupElement> {
        let word = parse_word(text)?;
        self.normalize(&word)
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        self.0.symbols.iter().map(|s| self.element(self.0.lookup[s].clone())).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_abelian(&self) -> bool {
        self.0.is_abelian()
    }

    /// All elements in serialization order.
    pub fn enumerate(&self) -> Result<Vec<GroupElement>> {
        Ok(self.0.enumerate_forms()?.into_iter().map(|f| self.element(f)).collect())
    }

    /// Elements of word length at most `radius`, in serialization order.
    pub fn ball(&self, radius: u32) -> Vec<GroupElement> {
        self.0.ball_forms(radius).into_iter().map(|f| self.element(f)).collect()
    }

    pub fn order(&self) -> Option<usize> {
        self.0.enumerate_forms().ok().map(|v| v.len())
    }
}

/// An element of a group model, always stored in canonical form.
#[derive(Clone, Debug)]
pub struct GroupElement {
    group: Group,
    form: Form,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.form == other.form && self.group == other.group
    }
}

impl Eq for GroupElement {}

impl std::hash::Hash for GroupElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.form.hash(state)
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.form.cmp(&other.form)
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl GroupElement {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub(crate) fn into_form(self) -> Form {
        self.form
    }

    pub fn is_identity(&self) -> bool {
        self.form == self.group.0.identity_form()
    }

    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        self.group.check(&other.group)?;
        Ok(self.group.element(self.group.0.mul(&self.form, &other.form)))
    }

    pub fn invert(&self) -> GroupElement {
        self.group.element(self.group.0.inv(&self.form))
    }

    pub fn pow(&self, exp: i64) -> GroupElement {
        self.group.element(self.group.0.pow(&self.form, exp))
    }

    /// `by * self * by^-1`.
    pub fn conjugate_by(&self, by: &GroupElement) -> Result<GroupElement> {
        self.group.check(&by.group)?;
        let m = &self.group.0;
        Ok(self.group.element(m.mul(&m.mul(&by.form, &self.form), &m.inv(&by.form))))
    }

    /// `g^2 = 1` and `g != 1`.
    pub fn is_involution(&self) -> bool {
        !self.is_identity() && self.group.0.mul(&self.form, &self.form) == self.group.0.identity_form()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.group.0.format(&self.form))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free2() -> Group {
        GroupModel::free(&["g", "h"]).unwrap().into()
    }

    fn s3() -> Group {
        GroupModel::permutation(3, vec![vec![1, 0, 2], vec![0, 2, 1]], Some(&["a", "b"])).unwrap().into()
    }

    #[test]
    fn free_reduction() {
        let g = free2();
        let w = g.parse("g g^-1 h").unwrap();
        assert_eq!(w, g.parse("h").unwrap());
        assert_eq!(g.parse("g h h^-1 g^-1").unwrap(), g.identity());
        assert_eq!(g.parse("g^2 h g^-2").unwrap().to_string(), "g^2 h g^-2");
    }

    #[test]
    fn cyclic_exponent_reduction() {
        let z4: Group = GroupModel::abelian(&[4], None).unwrap().into();
        assert_eq!(z4.parse("t^5").unwrap(), z4.parse("t").unwrap());
        let t = z4.parse("t").unwrap();
        assert_eq!(t.multiply(&t).unwrap().to_string(), "t^2");
        assert_eq!(t.invert().to_string(), "t^3");
    }

    #[test]
    fn free_abelian_commutes() {
        let z2: Group = GroupModel::abelian(&[0, 0], Some(&["g", "h"])).unwrap().into();
        assert_eq!(z2.parse("g h g^-1").unwrap(), z2.parse("h").unwrap());
    }

    #[test]
    fn transposition_product_in_s3() {
        // points 1,2,3 are stored as 0,1,2; (12) = [1,0,2], (13) = [2,1,0]
        let s3: Group =
            GroupModel::permutation(3, vec![vec![1, 0, 2], vec![2, 1, 0]], Some(&["x", "y"])).unwrap().into();
        let p = s3.parse("x y").unwrap();
        // (132): 1 -> 3 -> 2 -> 1
        assert_eq!(p.form(), &Form::Perm(vec![2, 0, 1]));
    }

    #[test]
    fn inverse_of_product_in_free_group() {
        let g = free2();
        let gh = g.parse("g h").unwrap();
        assert_eq!(gh.invert(), g.parse("h^-1 g^-1").unwrap());
        assert_eq!(g.identity().invert(), g.identity());
    }

    #[test]
    fn involutions() {
        let z2: Group = GroupModel::abelian(&[2], None).unwrap().into();
        assert!(z2.parse("t").unwrap().is_involution());
        assert!(!z2.identity().is_involution());
        let f = free2();
        assert!(!f.parse("g h^-1").unwrap().is_involution());
        assert_eq!(s3().enumerate().unwrap().iter().filter(|x| x.is_involution()).count(), 3);
    }

    #[test]
    fn enumeration() {
        let z2: Group = GroupModel::abelian(&[2], None).unwrap().into();
        let all = z2.enumerate().unwrap();
        assert_eq!(all.len(), 2);
        assert!(all[0].is_identity());
        assert_eq!(all[1].to_string(), "t");
        assert_eq!(s3().enumerate().unwrap().len(), 6);
        let z: Group = GroupModel::free(&["x"]).unwrap().into();
        assert_eq!(z.enumerate().unwrap_err(), Error::InfiniteGroup);
    }

    #[test]
    fn unknown_generator() {
        assert_eq!(free2().parse("g k").unwrap_err(), Error::UnknownGenerator("k".into()));
    }

    #[test]
    fn permutation_words_round_trip() {
        let s3 = s3();
        for x in s3.enumerate().unwrap() {
            assert_eq!(s3.parse(&x.to_string()).unwrap(), x);
        }
    }

    #[test]
    fn table_model_validation() {
        let z3 = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let g: Group = GroupModel::finite_table(z3, 0, Some(&["e", "r", "s"])).unwrap().into();
        assert_eq!(g.parse("r r").unwrap().to_string(), "s");
        assert_eq!(g.parse("r^3").unwrap(), g.identity());
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(GroupModel::finite_table(bad, 0, None).is_err());
    }

    #[test]
    fn product_model() {
        let f = GroupModel::free(&["g", "h"]).unwrap();
        let z2 = GroupModel::abelian(&[2], None).unwrap();
        let p: Group = GroupModel::direct_product(vec![f, z2]).unwrap().into();
        let x = p.parse("g t h t").unwrap();
        assert_eq!(x, p.parse("g h").unwrap());
        assert!(p.parse("t").unwrap().is_involution());
        assert_eq!(p.parse(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn ball_sizes_in_free_group() {
        assert_eq!(free2().ball(3).len(), 1 + 4 + 12 + 36);
    }

    #[test]
    fn serialization_order_prefers_positive_letters() {
        let f = free2();
        assert!(f.parse("g").unwrap() < f.parse("g^-1").unwrap());
        assert!(f.identity() < f.parse("h^-1").unwrap());
        assert!(f.parse("h^-1").unwrap() < f.parse("g g").unwrap());
        let z: Group = GroupModel::abelian(&[0], None).unwrap().into();
        assert!(z.parse("t").unwrap() < z.parse("t^-1").unwrap());
    }
}
