//! Basic open sets of the four topology families and the operations on
//! them: membership, canonical neighbourhoods, refinement, translation and
//! Hausdorff separation.
//!
//! * `tau_0`: nonzero points are isolated; the whole space is the only
//!   neighbourhood of zero.
//! * `tau_c`: at `x` the sets `↑x \ (↑x₁ ∪ … ∪ ↑xⱼ)` with every `xᵢ ⊋ x`.
//! * `tau_fc2` (n = 2): `tau_c` everywhere except at zero, where a basic set
//!   additionally drops the singletons `{b}` for `b` in some `B` that differs
//!   from A by a finite set.
//! * `tau_fcn` (n ≥ 3): `↑x₀` for a fixed `x₀` of rank `n − 2` carries a copy
//!   of `tau_fc2` transported by `s ↦ x₀ ∪ s`; every other point keeps its
//!   `tau_c` base.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::almost::AlmostSet;
use crate::error::{Error, Result};
use crate::expr::SetExpr;
use crate::pattern::{is_empty, subset_of};
use crate::point::{Code, Point, Universe};
use crate::text::Cursor;

/// `↑anchor \ (↑e₁ ∪ … ∪ ↑eⱼ)` with every `eᵢ` strictly above the anchor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UpMinus {
    anchor: Point,
    excluded: Vec<Point>,
}

impl UpMinus {
    pub fn new(anchor: Point, excluded: Vec<Point>) -> Result<Self> {
        if let Some(e) = excluded.iter().find(|e| !anchor.lt(e)) {
            return Err(Error::InvalidExclusion { anchor, excluded: e.clone() });
        }
        Ok(Self { anchor, excluded })
    }

    /// The full up-set `↑anchor`.
    pub fn up(anchor: Point) -> Self {
        Self { anchor, excluded: Vec::new() }
    }

    pub fn anchor(&self) -> &Point {
        &self.anchor
    }

    pub fn excluded(&self) -> &[Point] {
        &self.excluded
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.anchor.leq(p) && !self.excluded.iter().any(|e| e.leq(p))
    }

    fn parse_from(cur: &mut Cursor<'_>) -> Result<Self> {
        cur.expect('(')?;
        cur.keyword("upminus")?;
        let anchor = cur.point()?;
        let excluded = cur.point_list()?;
        let um = UpMinus::new(anchor, excluded).or_else(|e| cur.err(e.to_string()))?;
        cur.expect(')')?;
        Ok(um)
    }
}

impl fmt::Display for UpMinus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(upminus {} [", self.anchor)?;
        for (i, e) in self.excluded.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("])")
    }
}

/// The order isomorphism `s ↦ anchor ∪ s` from `exp_2` over the codes
/// outside `anchor` onto `↑anchor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transport {
    anchor: Point,
}

impl Transport {
    pub fn new(anchor: Point) -> Self {
        Self { anchor }
    }

    pub fn anchor(&self) -> &Point {
        &self.anchor
    }

    pub fn lift(&self, s: &Point) -> Option<Point> {
        if s.codes().iter().any(|&c| self.anchor.contains(c)) {
            return None;
        }
        Some(self.anchor.join(s))
    }

    pub fn lower(&self, p: &Point) -> Option<Point> {
        if !self.anchor.leq(p) {
            return None;
        }
        Some(Point::new(p.minus(&self.anchor)))
    }
}

/// Finite parameterisation of one basic open set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OpenDescriptor {
    Whole,
    Iso(Point),
    UpMinus(UpMinus),
    /// `base \ {anchor ∪ {b} : b ∈ B}` where `base` is anchored at the
    /// transport anchor (zero for `tau_fc2`).
    FcZero { base: UpMinus, b: AlmostSet },
}

impl OpenDescriptor {
    pub fn up_minus(anchor: Point, excluded: Vec<Point>) -> Result<Self> {
        Ok(OpenDescriptor::UpMinus(UpMinus::new(anchor, excluded)?))
    }

    pub fn fc_zero(base: UpMinus, b: AlmostSet) -> Result<Self> {
        if !b.is_almost_a() {
            return Err(Error::NotAlmostA(b.to_string()));
        }
        Ok(OpenDescriptor::FcZero { base, b })
    }

    pub fn contains(&self, u: &Universe, p: &Point) -> bool {
        match self {
            OpenDescriptor::Whole => true,
            OpenDescriptor::Iso(q) => p == q,
            OpenDescriptor::UpMinus(um) => um.contains(p),
            OpenDescriptor::FcZero { base, b } => {
                base.contains(p)
                    && match Transport::new(base.anchor.clone()).lower(p) {
                        Some(s) if s.rank() == 1 => !b.contains(u, s.codes()[0]),
                        _ => true,
                    }
            }
        }
    }

    /// The point the descriptor is a neighbourhood of.
    pub fn anchor(&self) -> Point {
        match self {
            OpenDescriptor::Whole => Point::zero(),
            OpenDescriptor::Iso(p) => p.clone(),
            OpenDescriptor::UpMinus(um) => um.anchor.clone(),
            OpenDescriptor::FcZero { base, .. } => base.anchor.clone(),
        }
    }

    /// Exclusion generators of the underlying up-set difference.
    pub fn excluded(&self) -> &[Point] {
        match self {
            OpenDescriptor::UpMinus(um) | OpenDescriptor::FcZero { base: um, .. } => &um.excluded,
            _ => &[],
        }
    }

    pub fn support(&self) -> BTreeSet<Code> {
        let mut out = BTreeSet::new();
        match self {
            OpenDescriptor::Whole => {}
            OpenDescriptor::Iso(p) => out.extend(p.codes()),
            OpenDescriptor::UpMinus(um) => collect_up_minus(um, &mut out),
            OpenDescriptor::FcZero { base, b } => {
                collect_up_minus(base, &mut out);
                out.extend(b.edits());
            }
        }
        out
    }

    pub fn max_rank(&self) -> usize {
        match self {
            OpenDescriptor::Whole => 0,
            OpenDescriptor::Iso(p) => p.rank(),
            OpenDescriptor::UpMinus(um) | OpenDescriptor::FcZero { base: um, .. } => {
                um.excluded.iter().map(Point::rank).max().unwrap_or(0).max(um.anchor.rank())
            }
        }
    }

    pub fn as_set(&self) -> SetExpr {
        SetExpr::Open(self.clone())
    }

    pub(crate) fn parse_from(cur: &mut Cursor<'_>) -> Result<Self> {
        cur.expect('(')?;
        let head = cur.word()?;
        let d = match head {
            "whole" => OpenDescriptor::Whole,
            "iso" => OpenDescriptor::Iso(cur.point()?),
            "upminus" => {
                let anchor = cur.point()?;
                let excluded = cur.point_list()?;
                OpenDescriptor::up_minus(anchor, excluded).or_else(|e| cur.err(e.to_string()))?
            }
            "fczero" => {
                let base = UpMinus::parse_from(cur)?;
                let b = AlmostSet::parse_from(cur)?;
                OpenDescriptor::fc_zero(base, b).or_else(|e| cur.err(e.to_string()))?
            }
            other => return cur.err(format!("unknown descriptor head '{other}'")),
        };
        cur.expect(')')?;
        Ok(d)
    }
}

fn collect_up_minus(um: &UpMinus, out: &mut BTreeSet<Code>) {
    out.extend(um.anchor.codes());
    for e in &um.excluded {
        out.extend(e.codes());
    }
}

impl fmt::Display for OpenDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpenDescriptor::Whole => f.write_str("(whole)"),
            OpenDescriptor::Iso(p) => write!(f, "(iso {p})"),
            OpenDescriptor::UpMinus(um) => write!(f, "{um}"),
            OpenDescriptor::FcZero { base, b } => write!(f, "(fczero {base} {b})"),
        }
    }
}

impl FromStr for OpenDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor::new(s);
        let d = OpenDescriptor::parse_from(&mut cur)?;
        cur.finish()?;
        Ok(d)
    }
}

impl Serialize for OpenDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OpenDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TopologyKind {
    #[serde(rename = "tau_0")]
    Tau0,
    #[serde(rename = "tau_c")]
    TauC,
    #[serde(rename = "tau_fc2")]
    TauFc2,
    #[serde(rename = "tau_fcn")]
    TauFcN,
}

impl TopologyKind {
    pub fn name(self) -> &'static str {
        match self {
            TopologyKind::Tau0 => "tau_0",
            TopologyKind::TauC => "tau_c",
            TopologyKind::TauFc2 => "tau_fc2",
            TopologyKind::TauFcN => "tau_fcn",
        }
    }

    pub fn is_fc(self) -> bool {
        matches!(self, TopologyKind::TauFc2 | TopologyKind::TauFcN)
    }
}

impl FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau_0" => Ok(TopologyKind::Tau0),
            "tau_c" => Ok(TopologyKind::TauC),
            "tau_fc2" => Ok(TopologyKind::TauFc2),
            "tau_fcn" => Ok(TopologyKind::TauFcN),
            other => Err(Error::InvalidTopology(format!("unknown topology '{other}'"))),
        }
    }
}

/// A topology family instantiated over a universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TopologyRepr", into = "TopologyRepr")]
pub struct Topology {
    kind: TopologyKind,
    universe: Universe,
    anchor: Point,
}

#[derive(Serialize, Deserialize)]
struct TopologyRepr {
    kind: TopologyKind,
    universe: Universe,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    anchor: Option<Point>,
}

impl TryFrom<TopologyRepr> for Topology {
    type Error = Error;

    fn try_from(r: TopologyRepr) -> Result<Self> {
        Topology::new(r.kind, r.universe, r.anchor)
    }
}

impl From<Topology> for TopologyRepr {
    fn from(t: Topology) -> Self {
        let anchor = (t.kind == TopologyKind::TauFcN).then_some(t.anchor);
        TopologyRepr { kind: t.kind, universe: t.universe, anchor }
    }
}

impl Topology {
    /// `anchor` is only meaningful for `tau_fcn`; it defaults to
    /// `{0, 1, …, n − 3}`.
    pub fn new(kind: TopologyKind, universe: Universe, anchor: Option<Point>) -> Result<Self> {
        let n = universe.n;
        let anchor = match kind {
            TopologyKind::Tau0 | TopologyKind::TauC => {
                if anchor.as_ref().is_some_and(|a| !a.is_zero()) {
                    return Err(Error::InvalidTopology(format!("{} takes no anchor", kind.name())));
                }
                Point::zero()
            }
            TopologyKind::TauFc2 => {
                if n != 2 {
                    return Err(Error::InvalidTopology(format!("tau_fc2 requires n = 2, got n = {n}")));
                }
                if anchor.as_ref().is_some_and(|a| !a.is_zero()) {
                    return Err(Error::InvalidTopology("tau_fc2 is anchored at zero".into()));
                }
                Point::zero()
            }
            TopologyKind::TauFcN => {
                if n < 3 {
                    return Err(Error::InvalidTopology(format!("tau_fcn requires n ≥ 3, got n = {n}")));
                }
                let a = anchor.unwrap_or_else(|| Point::new(0..(n as Code - 2)));
                if a.rank() != n - 2 {
                    return Err(Error::InvalidTopology(format!("tau_fcn anchor {a} must have rank n − 2 = {}", n - 2)));
                }
                a
            }
        };
        Ok(Self { kind, universe, anchor })
    }

    pub fn tau_0(u: Universe) -> Self {
        Self { kind: TopologyKind::Tau0, universe: u, anchor: Point::zero() }
    }

    pub fn tau_c(u: Universe) -> Self {
        Self { kind: TopologyKind::TauC, universe: u, anchor: Point::zero() }
    }

    pub fn tau_fc2(u: Universe) -> Result<Self> {
        Self::new(TopologyKind::TauFc2, u, None)
    }

    pub fn tau_fcn(u: Universe, anchor: Option<Point>) -> Result<Self> {
        Self::new(TopologyKind::TauFcN, u, anchor)
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn n(&self) -> usize {
        self.universe.n
    }

    pub fn is_t1(&self) -> bool {
        self.kind != TopologyKind::Tau0
    }

    /// The point whose base carries the colour-sensitive removal.
    pub fn fc_anchor(&self) -> Option<&Point> {
        self.kind.is_fc().then_some(&self.anchor)
    }

    pub fn transport(&self) -> Option<Transport> {
        self.fc_anchor().map(|a| Transport::new(a.clone()))
    }

    pub fn support(&self) -> Vec<Code> {
        self.anchor.codes().to_vec()
    }

    pub fn name(&self) -> String {
        match self.kind {
            TopologyKind::TauFcN => format!("tau_fcn(n={}, x={})", self.n(), self.anchor),
            k => format!("{}(n={})", k.name(), self.n()),
        }
    }

    /// Checks that `d` is a member of the neighbourhood base at `at`.
    pub fn check_basic(&self, d: &OpenDescriptor, at: &Point) -> Result<()> {
        let mismatch = || Error::DescriptorMismatch { descriptor: format!("{d} at {at}"), topology: self.name() };
        self.universe.check(at)?;
        if d.excluded().iter().any(|e| e.rank() > self.n()) {
            return Err(mismatch());
        }
        let ok = match (self.kind, d) {
            (TopologyKind::Tau0, OpenDescriptor::Whole) => at.is_zero(),
            (TopologyKind::Tau0, OpenDescriptor::Iso(p)) => p == at && !at.is_zero(),
            (TopologyKind::TauC, OpenDescriptor::UpMinus(um)) => um.anchor() == at,
            (k, OpenDescriptor::UpMinus(um)) if k.is_fc() => um.anchor() == at && at != &self.anchor,
            (k, OpenDescriptor::FcZero { base, b }) if k.is_fc() => {
                base.anchor() == at && at == &self.anchor && b.is_almost_a()
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(mismatch())
        }
    }

    /// A basic neighbourhood of `p` built from exclusion generators and, at
    /// the colour-sensitive anchor, a set `B` (default A).
    pub fn canonical_base(&self, p: &Point, excluded: &[Point], b: Option<&AlmostSet>) -> Result<OpenDescriptor> {
        self.universe.check(p)?;
        for e in excluded {
            self.universe.check(e)?;
        }
        match self.kind {
            TopologyKind::Tau0 => {
                if !excluded.is_empty() || b.is_some() {
                    return Err(Error::Precondition("tau_0 neighbourhoods take no parameters".into()));
                }
                Ok(if p.is_zero() { OpenDescriptor::Whole } else { OpenDescriptor::Iso(p.clone()) })
            }
            _ if self.fc_anchor() == Some(p) => {
                let b = b.cloned().unwrap_or_else(AlmostSet::a);
                OpenDescriptor::fc_zero(UpMinus::new(p.clone(), excluded.to_vec())?, b)
            }
            _ => {
                if let Some(b) = b {
                    return Err(Error::Precondition(format!("{b} is only accepted at the colour-sensitive anchor")));
                }
                OpenDescriptor::up_minus(p.clone(), excluded.to_vec())
            }
        }
    }

    /// The smallest basic neighbourhood of `x` that matters for sets
    /// supported on `support`: it excludes `↑(x ∪ {c})` for every support
    /// code `c` outside `x`, and at the colour-sensitive anchor drops the
    /// transported singletons over A. Its members other than `x` are exactly
    /// the points `x ∪ D` with `D` nonempty and disjoint from the support
    /// (minus the removed singleton extensions).
    pub fn minimal_neighborhood(&self, x: &Point, support: &[Code]) -> OpenDescriptor {
        if self.kind == TopologyKind::Tau0 {
            return if x.is_zero() { OpenDescriptor::Whole } else { OpenDescriptor::Iso(x.clone()) };
        }
        let excluded: Vec<Point> = if x.rank() < self.n() {
            support.iter().filter(|&&c| !x.contains(c)).map(|&c| x.with(c)).collect()
        } else {
            Vec::new()
        };
        let base = UpMinus { anchor: x.clone(), excluded };
        if self.fc_anchor() == Some(x) {
            OpenDescriptor::FcZero { base, b: AlmostSet::a() }
        } else {
            OpenDescriptor::UpMinus(base)
        }
    }

    /// Disjoint basic neighbourhoods of two distinct points.
    pub fn hausdorff_separate(&self, p: &Point, q: &Point) -> Result<(OpenDescriptor, OpenDescriptor)> {
        if p == q {
            return Err(Error::SamePoint(p.clone()));
        }
        self.universe.check(p)?;
        self.universe.check(q)?;
        if self.kind == TopologyKind::Tau0 {
            if p.is_zero() || q.is_zero() {
                let other = if p.is_zero() { q } else { p };
                return Err(Error::NotT1(Point::zero(), other.clone()));
            }
            return Ok((OpenDescriptor::Iso(p.clone()), OpenDescriptor::Iso(q.clone())));
        }
        let (ep, eq) = if p.lt(q) {
            (vec![q.clone()], vec![])
        } else if q.lt(p) {
            (vec![], vec![p.clone()])
        } else {
            let j = p.join(q);
            if j.rank() <= self.n() {
                (vec![j.clone()], vec![j])
            } else {
                (vec![], vec![])
            }
        };
        let u = self.canonical_base(p, &ep, None)?;
        let v = self.canonical_base(q, &eq, None)?;
        if !is_empty(&self.universe, &SetExpr::and([u.as_set(), v.as_set()])) {
            return Err(Error::Precondition(format!("{u} and {v} are not disjoint")));
        }
        Ok((u, v))
    }
}

/// A basic set around `p` inside `a ∩ b`.
pub fn refine(u: &Universe, a: &OpenDescriptor, b: &OpenDescriptor, p: &Point) -> Result<OpenDescriptor> {
    if !a.contains(u, p) || !b.contains(u, p) {
        return Err(Error::Precondition(format!("{p} is not in both {a} and {b}")));
    }
    match (a, b) {
        (OpenDescriptor::Iso(_), _) | (_, OpenDescriptor::Iso(_)) => return Ok(OpenDescriptor::Iso(p.clone())),
        (OpenDescriptor::Whole, other) | (other, OpenDescriptor::Whole) => return Ok(other.clone()),
        _ => {}
    }
    let mut excluded = BTreeSet::new();
    let mut bs: Vec<&AlmostSet> = Vec::new();
    for d in [a, b] {
        for e in d.excluded() {
            let lifted = p.join(e);
            if lifted.rank() <= u.n {
                excluded.insert(lifted);
            }
        }
        if let OpenDescriptor::FcZero { base, b } = d {
            if base.anchor() == p {
                bs.push(b);
            }
        }
    }
    let base = UpMinus::new(p.clone(), excluded.into_iter().collect())?;
    match bs.split_first() {
        None => Ok(OpenDescriptor::UpMinus(base)),
        Some((first, rest)) => {
            let mut b = (*first).clone();
            for other in rest {
                b = b.union(other)?;
            }
            OpenDescriptor::fc_zero(base, b)
        }
    }
}

/// The exact image `{e ∩ q : q ∈ d}` as a finite point set.
pub fn translate(u: &Universe, e: &Point, d: &OpenDescriptor) -> SetExpr {
    let image = e.subsets().into_iter().filter(|t| {
        let mut parts = vec![d.as_set(), SetExpr::up(t.clone())];
        parts.extend(e.minus(t).into_iter().map(|c| SetExpr::not(SetExpr::up(Point::singleton(c)))));
        !is_empty(u, &SetExpr::and(parts))
    });
    SetExpr::pts(image)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomFailure {
    pub axiom: String,
    pub point: Point,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaseAxiomReport {
    pub topology: String,
    pub points: usize,
    pub neighborhoods: usize,
    pub checks: usize,
    pub failures: Vec<AxiomFailure>,
    /// A pair of points that no two disjoint basic sets separate.
    pub non_t1: Option<(Point, Point)>,
}

impl BaseAxiomReport {
    pub fn passes_bp1_to_bp3(&self) -> bool {
        self.failures.iter().all(|f| f.axiom == "BP4")
    }

    pub fn passes(&self) -> bool {
        self.failures.is_empty() && self.non_t1.is_none()
    }
}

/// Neighbourhoods of `p` drawn from the sample: the plain base set, up to
/// `budget` exclusion variants and, at the colour-sensitive anchor, a few
/// variants of `B`.
fn sample_neighborhoods(topo: &Topology, p: &Point, sample: &[Point], budget: usize) -> Vec<OpenDescriptor> {
    let mut out = Vec::new();
    let Ok(plain) = topo.canonical_base(p, &[], None) else {
        return out;
    };
    out.push(plain);
    if topo.kind() == TopologyKind::Tau0 {
        return out;
    }
    let above: Vec<&Point> = sample.iter().filter(|q| p.lt(q)).collect();
    if !above.is_empty() {
        let stride = (above.len() / budget.max(1)).max(1);
        let picks: Vec<&Point> = above.iter().step_by(stride).take(budget).copied().collect();
        let mut sets: Vec<Vec<Point>> = picks.iter().map(|q| vec![(*q).clone()]).collect();
        sets.extend(picks.windows(2).map(|w| vec![w[0].clone(), w[1].clone()]));
        for excl in sets.into_iter().take(budget) {
            if let Ok(d) = topo.canonical_base(p, &excl, None) {
                out.push(d);
            }
        }
    }
    if topo.fc_anchor() == Some(p) {
        let codes: BTreeSet<Code> = sample.iter().flat_map(|q| q.codes().iter().copied()).collect();
        let u = topo.universe();
        let extra = codes.iter().copied().find(|&c| !u.in_a(c) && !p.contains(c));
        let dropped = codes.iter().copied().find(|&c| u.in_a(c) && !p.contains(c));
        let mut variants = Vec::new();
        if let Some(c) = extra {
            variants.push(AlmostSet::a().with_added(c));
        }
        if let Some(c) = dropped {
            variants.push(AlmostSet::a().with_removed(c));
        }
        for b in variants {
            if let Ok(d) = topo.canonical_base(p, &[], Some(&b)) {
                out.push(d);
            }
        }
    }
    out
}

/// Checks the neighbourhood-system axioms on a finite sample:
/// BP1 every point has basic sets and lies in each of them; BP2 two basic
/// sets at a point contain a third (via [`refine`]); BP3 a point inside a
/// basic set has a basic set of its own inside it; BP4 distinct points have
/// disjoint basic sets.
pub fn check_base_axioms(topo: &Topology, sample: &[Point], budget: usize) -> BaseAxiomReport {
    let u = topo.universe();
    let mut failures = Vec::new();
    let mut checks = 0usize;
    let mut neighborhoods = 0usize;
    let mut fail = |axiom: &str, point: &Point, detail: String| {
        failures.push(AxiomFailure { axiom: axiom.to_string(), point: point.clone(), detail });
    };

    for p in sample {
        let nbhds = sample_neighborhoods(topo, p, sample, budget);
        neighborhoods += nbhds.len();
        checks += 1;
        if nbhds.is_empty() {
            fail("BP1", p, "no basic neighbourhood".into());
            continue;
        }
        for d in &nbhds {
            checks += 1;
            if let Err(e) = topo.check_basic(d, p) {
                fail("BP1", p, e.to_string());
            } else if !d.contains(u, p) {
                fail("BP1", p, format!("{d} does not contain its point"));
            }
        }
        for (i, a) in nbhds.iter().enumerate() {
            for b in &nbhds[i..] {
                checks += 1;
                match refine(u, a, b, p) {
                    Ok(w) => {
                        let inside = SetExpr::and([a.as_set(), b.as_set()]);
                        if topo.check_basic(&w, p).is_err() || !w.contains(u, p) || !subset_of(u, &w.as_set(), &inside) {
                            fail("BP2", p, format!("{w} is not a basic set inside {a} ∩ {b}"));
                        }
                    }
                    Err(e) => fail("BP2", p, e.to_string()),
                }
            }
        }
        for d in &nbhds {
            for q in sample.iter().filter(|q| d.contains(u, q)) {
                checks += 1;
                let own = topo.canonical_base(q, &[], None).and_then(|c| refine(u, &c, d, q));
                match own {
                    Ok(v) if topo.check_basic(&v, q).is_ok() && subset_of(u, &v.as_set(), &d.as_set()) => {}
                    Ok(v) => fail("BP3", q, format!("{v} is not a basic set of {q} inside {d}")),
                    Err(e) => fail("BP3", q, e.to_string()),
                }
            }
        }
    }

    let mut non_t1 = None;
    for (i, p) in sample.iter().enumerate() {
        for q in &sample[i + 1..] {
            checks += 1;
            match topo.hausdorff_separate(p, q) {
                Ok((a, b)) => {
                    if topo.check_basic(&a, p).is_err() || topo.check_basic(&b, q).is_err() {
                        fail("BP4", p, format!("separation of {p} and {q} used non-basic sets"));
                    }
                }
                Err(Error::NotT1(x, y)) => {
                    non_t1.get_or_insert((x, y));
                }
                Err(e) => fail("BP4", p, format!("{p} / {q}: {e}")),
            }
        }
    }

    BaseAxiomReport { topology: topo.name(), points: sample.len(), neighborhoods, checks, failures, non_t1 }
}
