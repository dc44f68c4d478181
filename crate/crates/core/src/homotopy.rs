//! Homotopy tracks as signed, group-labelled double points in time, their
//! self-intersection invariant, and the Whitney cancellation planner.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groupring::RingElement;
use crate::groups::{Group, GroupElement};
use crate::target::{AClass, PairClass};

/// A double point of a generic track.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublePoint {
    /// `+1` or `-1`.
    pub sign: i8,
    pub element: GroupElement,
    pub time: BigRational,
}

impl DoublePoint {
    pub fn new(sign: i8, element: GroupElement, time: BigRational) -> Self {
        DoublePoint { sign, element, time }
    }
}

/// Exchanging the two sheets at `p`: `(e, g, t) -> (-e, g^-1, t)`.
pub fn sheet_flip(p: &DoublePoint) -> DoublePoint {
    DoublePoint { sign: -p.sign, element: p.element.invert(), time: p.time.clone() }
}

/// The double point data of a homotopy. `core` is the class traced by the
/// basepoint; it is the identity for based homotopies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Track {
    core: GroupElement,
    points: Vec<DoublePoint>,
}

fn in_unit_interval(t: &BigRational) -> bool {
    t.is_positive() && t < &BigRational::one()
}

impl Track {
    pub fn new(core: GroupElement, points: Vec<DoublePoint>) -> Result<Self> {
        let mut times = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            core.group().check(p.element.group())?;
            if p.sign != 1 && p.sign != -1 {
                return Err(Error::InvalidTrack(format!("point {i}: sign must be +1 or -1, got {}", p.sign)));
            }
            if !in_unit_interval(&p.time) {
                return Err(Error::InvalidTrack(format!("point {i}: time {} is not in (0, 1)", p.time)));
            }
            times.push(&p.time);
        }
        times.sort();
        if let Some(w) = times.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidTrack(format!("two double points share the time {}", w[0])));
        }
        Ok(Track { core, points })
    }

    pub fn based(group: &Group, points: Vec<DoublePoint>) -> Result<Self> {
        Track::new(group.identity(), points)
    }

    pub fn empty(group: &Group) -> Self {
        Track { core: group.identity(), points: Vec::new() }
    }

    pub fn group(&self) -> &Group {
        self.core.group()
    }

    pub fn core(&self) -> &GroupElement {
        &self.core
    }

    pub fn points(&self) -> &[DoublePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_based(&self) -> bool {
        self.core.is_identity()
    }

    /// Wire format `{"core": "s", "points": [[sign, "element", "num/den"]]}`.
    pub fn to_json(&self) -> Value {
        let points: Vec<Value> =
            self.points.iter().map(|p| json!([p.sign, p.element.to_string(), p.time.to_string()])).collect();
        json!({"core": self.core.to_string(), "points": points})
    }

    /// Also accepts a bare list of points (a based track), and times written
    /// as decimals or JSON numbers.
    pub fn from_json(value: &Value, group: &Group) -> Result<Self> {
        let (core, points) = match value {
            Value::Array(points) => (group.identity(), points),
            Value::Object(obj) => {
                for key in obj.keys() {
                    if key != "core" && key != "points" {
                        return Err(Error::Schema(format!("unexpected field `{key}` in track")));
                    }
                }
                let core = match obj.get("core") {
                    None => group.identity(),
                    Some(Value::String(s)) => group.parse(s)?,
                    Some(_) => return Err(Error::Schema("track `core` must be an element string".into())),
                };
                let points = obj
                    .get("points")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Schema("track needs a `points` list".into()))?;
                (core, points)
            }
            _ => return Err(Error::Schema("track must be an object or a list of points".into())),
        };
        let mut parsed = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            let bad = || Error::Schema(format!("track point {i} must be [sign, \"element\", time]"));
            let items = p.as_array().filter(|a| a.len() == 3).ok_or_else(bad)?;
            let sign = match items[0].as_i64() {
                Some(1) => 1,
                Some(-1) => -1,
                _ => match items[0].as_str() {
                    Some("+") | Some("+1") => 1,
                    Some("-") | Some("-1") => -1,
                    _ => return Err(Error::Schema(format!("track point {i}: sign must be +1 or -1"))),
                },
            };
            let element = group.parse(items[1].as_str().ok_or_else(bad)?)?;
            let time = parse_time(&items[2]).map_err(|e| Error::Schema(format!("track point {i}: {e}")))?;
            parsed.push(DoublePoint { sign, element, time });
        }
        Track::new(core, parsed)
    }
}

impl fmt::Display for Track {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "core {}: [", self.core)?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({}, {}, {})", if p.sign > 0 { "+" } else { "-" }, p.element, p.time)?;
        }
        write!(f, "]")
    }
}

/// Parses `"num/den"`, a decimal string such as `"0.25"` or `"2.5e-1"`, or a
/// JSON number, exactly.
pub fn parse_time(value: &Value) -> std::result::Result<BigRational, String> {
    let text = match value {
        Value::String(s) => s.trim().to_string(),
        Value::Number(n) => n.to_string(),
        _ => return Err("time must be a string or number".into()),
    };
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator in `{text}`"))?;
        let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator in `{text}`"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in `{text}`"));
        }
        return Ok(BigRational::new(n, d));
    }
    parse_decimal(&text).ok_or_else(|| format!("cannot read `{text}` as a time"))
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let lower = text.to_ascii_lowercase();
    let (mantissa, exp) = match lower.split_once('e') {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (lower.as_str(), 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int}{frac}0").parse::<BigInt>().ok()? / 10;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10u8);
    let mut q = BigRational::from_integer(all);
    if scale >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -q } else { q })
}

/// `mu3(H) = [sum e_p g_p]`. Ignores times and core.
pub fn mu3_track(h: &Track) -> AClass {
    let mut out = AClass::zero(h.group());
    for p in &h.points {
        out.add_term(&p.element, &BigInt::from(p.sign));
    }
    out
}

/// Rebasing along `w`: every element and the core are conjugated by `w`.
pub fn change_whisker(h: &Track, w: &GroupElement) -> Result<Track> {
    h.group().check(w.group())?;
    let points = h
        .points
        .iter()
        .map(|p| Ok(DoublePoint { element: p.element.conjugate_by(w)?, ..p.clone() }))
        .collect::<Result<Vec<_>>>()?;
    Ok(Track { core: h.core.conjugate_by(w)?, points })
}

/// `j` followed by `h`. Times of `j` go to the first half and those of `h`
/// to the second; the elements of `h` are conjugated by the core of `j`.
pub fn concat(j: &Track, h: &Track) -> Result<Track> {
    j.group().check(h.group())?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut points: Vec<DoublePoint> =
        j.points.iter().map(|p| DoublePoint { time: &p.time * &half, ..p.clone() }).collect();
    for p in &h.points {
        points.push(DoublePoint {
            sign: p.sign,
            element: p.element.conjugate_by(&j.core)?,
            time: &half + &p.time * &half,
        });
    }
    Ok(Track { core: j.core.multiply(&h.core)?, points })
}

/// The track run backwards: `(e, g, t) -> (-e, c^-1 g c, 1 - t)` for core `c`,
/// and the core is inverted.
pub fn reverse(h: &Track) -> Track {
    let ci = h.core.invert();
    let one = BigRational::one();
    let points = h
        .points
        .iter()
        .map(|p| DoublePoint {
            sign: -p.sign,
            element: p.element.conjugate_by(&ci).expect("same model"),
            time: &one - &p.time,
        })
        .collect();
    Track { core: ci, points }
}

/// A based track with `mu3 = [x]`: `|c|` points of sign `sign(c)` for each
/// term `c g`, at times `i / (n + 1)`.
pub fn realize(x: &RingElement) -> Track {
    let n: BigInt = x.terms().map(|(_, c)| c.abs()).sum();
    let denom = BigInt::from(1) + &n;
    let mut points = Vec::new();
    let mut i = BigInt::zero();
    for (g, c) in x.terms() {
        let sign = if c.is_positive() { 1 } else { -1 };
        let mut k = BigInt::zero();
        while &k < &c.abs() {
            i += 1;
            k += 1;
            points.push(DoublePoint { sign, element: g.clone(), time: BigRational::new(i.clone(), denom.clone()) });
        }
    }
    Track { core: x.group().identity(), points }
}

/// Two double points cancelled by a Whitney move at a common time. When
/// `flip` is set, the sheets at `q` are exchanged first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlannedPair {
    pub p: usize,
    pub q: usize,
    pub time: BigRational,
    pub flip: bool,
}

/// A double point with trivial group element cancelled against a cusp.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cusp {
    pub index: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CancellationPlan {
    pub pairs: Vec<PlannedPair>,
    pub cusps: Vec<Cusp>,
}

impl CancellationPlan {
    pub fn to_json(&self) -> Value {
        let pairs: Vec<Value> = self
            .pairs
            .iter()
            .map(|p| json!({"p": p.p, "q": p.q, "time": p.time.to_string(), "flip": p.flip}))
            .collect();
        let cusps: Vec<Value> = self.cusps.iter().map(|c| json!({"index": c.index, "sign": c.sign})).collect();
        json!({"pairs": pairs, "cusps": cusps})
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Schema(format!("plan: {what}"));
        let index =
            |v: Option<&Value>, what: &str| v.and_then(Value::as_u64).map(|i| i as usize).ok_or_else(|| bad(what));
        let mut plan = CancellationPlan::default();
        for p in value.get("pairs").and_then(Value::as_array).ok_or_else(|| bad("missing `pairs`"))? {
            plan.pairs.push(PlannedPair {
                p: index(p.get("p"), "pair needs index `p`")?,
                q: index(p.get("q"), "pair needs index `q`")?,
                time: parse_time(p.get("time").ok_or_else(|| bad("pair needs `time`"))?).map_err(|e| bad(&e))?,
                flip: p.get("flip").and_then(Value::as_bool).ok_or_else(|| bad("pair needs boolean `flip`"))?,
            });
        }
        for c in value.get("cusps").and_then(Value::as_array).ok_or_else(|| bad("missing `cusps`"))? {
            let sign = match c.get("sign").and_then(Value::as_i64) {
                Some(1) => 1,
                Some(-1) => -1,
                _ => return Err(bad("cusp sign must be +1 or -1")),
            };
            plan.cusps.push(Cusp { index: index(c.get("index"), "cusp needs `index`")?, sign });
        }
        Ok(plan)
    }
}

/// Returned by [`whitney_plan`] when `mu3` does not vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub mu3: AClass,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "self-intersection invariant {} does not vanish", self.mu3)
    }
}

impl std::error::Error for Obstruction {}

impl From<Obstruction> for Error {
    fn from(o: Obstruction) -> Self {
        Error::NonVanishingObstruction(o.mu3.to_string())
    }
}

/// Pairs up the double points of a track with vanishing `mu3` for Whitney
/// moves, using sheet flips where needed; identity points left over are
/// cancelled by cusps.
pub fn whitney_plan(h: &Track) -> std::result::Result<CancellationPlan, Obstruction> {
    let mu = mu3_track(h);
    if !mu.is_zero() {
        return Err(Obstruction { mu3: mu });
    }
    let pts = &h.points;
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| pts[a].time.cmp(&pts[b].time));

    let mut identity = Vec::new();
    let mut classes: BTreeMap<PairClass, Vec<usize>> = BTreeMap::new();
    for &i in &order {
        match PairClass::of(&pts[i].element) {
            None => identity.push(i),
            Some((class, _)) => classes.entry(class).or_default().push(i),
        }
    }

    let mut pairs: Vec<(usize, usize, bool)> = Vec::new();
    let mut cusps = Vec::new();
    let split = |idx: &[usize], sign_of: &dyn Fn(usize) -> i8| {
        let (pos, neg): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| sign_of(i) > 0);
        (pos, neg)
    };

    let (pos, neg) = split(&identity, &|i| pts[i].sign);
    let n = pos.len().min(neg.len());
    for k in 0..n {
        pairs.push(ordered(pos[k], neg[k], false, pts));
    }
    for &i in pos[n..].iter().chain(&neg[n..]) {
        cusps.push(Cusp { index: i, sign: -pts[i].sign });
    }

    for (class, idx) in &classes {
        if class.is_involution() {
            let (pos, neg) = split(idx, &|i| pts[i].sign);
            let n = pos.len().min(neg.len());
            for k in 0..n {
                pairs.push(ordered(pos[k], neg[k], false, pts));
            }
            let rest: Vec<usize> = pos[n..].iter().chain(&neg[n..]).copied().collect();
            debug_assert!(rest.len() % 2 == 0);
            for c in rest.chunks(2) {
                pairs.push((c[0], c[1], true));
            }
        } else {
            let rep = class.representative();
            let sigma = |i: usize| if &pts[i].element == rep { pts[i].sign } else { -pts[i].sign };
            let mut open: [std::collections::VecDeque<usize>; 2] = Default::default();
            for &i in idx {
                let s = usize::from(sigma(i) < 0);
                match open[1 - s].pop_front() {
                    Some(p) => pairs.push((p, i, pts[p].element != pts[i].element)),
                    None => open[s].push_back(i),
                }
            }
            debug_assert!(open[0].is_empty() && open[1].is_empty());
        }
    }

    pairs.sort_by(|a, b| pts[a.0].time.cmp(&pts[b.0].time));
    let k = BigInt::from(pairs.len() + 1);
    let pairs = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (p, q, flip))| PlannedPair { p, q, time: BigRational::new(BigInt::from(i + 1), k.clone()), flip })
        .collect();
    cusps.sort_by_key(|c| c.index);
    Ok(CancellationPlan { pairs, cusps })
}

fn ordered(a: usize, b: usize, flip: bool, pts: &[DoublePoint]) -> (usize, usize, bool) {
    if pts[a].time <= pts[b].time {
        (a, b, flip)
    } else {
        (b, a, flip)
    }
}

/// Checks a plan against a track: every point is used once, pairs cancel
/// after the recorded flips, cusps sit at identity points with opposite sign,
/// and the common times are distinct and in `(0, 1)`.
pub fn verify_plan(h: &Track, plan: &CancellationPlan) -> bool {
    let pts = &h.points;
    let mut used = vec![false; pts.len()];
    let mut take = |i: usize| i < used.len() && !std::mem::replace(&mut used[i], true);
    for pair in &plan.pairs {
        if pair.p == pair.q || !take(pair.p) || !take(pair.q) {
            return false;
        }
        let q = if pair.flip { sheet_flip(&pts[pair.q]) } else { pts[pair.q].clone() };
        if q.element != pts[pair.p].element || q.sign != -pts[pair.p].sign {
            return false;
        }
        if !in_unit_interval(&pair.time) {
            return false;
        }
    }
    for cusp in &plan.cusps {
        if !take(cusp.index) {
            return false;
        }
        let p = &pts[cusp.index];
        if !p.element.is_identity() || cusp.sign != -p.sign {
            return false;
        }
    }
    let mut times: Vec<&BigRational> = plan.pairs.iter().map(|p| &p.time).collect();
    times.sort();
    if times.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    used.into_iter().all(|u| u)
}

/// Exact rational `num / den`.
pub fn time(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
