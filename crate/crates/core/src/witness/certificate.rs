//! Certificates: finite payloads plus a script of assertions that a
//! verifier re-derives from the payload and then evaluates with nothing but
//! membership and emptiness tests.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::almost::AlmostSet;
use crate::error::{Error, Result};
use crate::expr::SetExpr;
use crate::pattern::{codes_union, is_empty, patterns, support_vec};
use crate::point::{Code, Color, Point, Universe};
use crate::topology::{OpenDescriptor, Topology, UpMinus};

pub const CERT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Subcover,
    SeparationPair,
    SeparateContinuityModulus,
    JointDiscontinuity,
    ClosedDiscrete,
    AccumulationPoint,
    RegularityShrink,
    TopRankCover,
    CollectionwiseExpansion,
    SeparatorFunction,
    NeighborhoodInUpset,
    IsolatedPoint,
}

/// One checkable claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Assertion {
    Member { set: SetExpr, point: Point, expect: bool },
    Empty { set: SetExpr },
    NonEmpty { set: SetExpr },
    /// `left ∩ right` lies in `set` exactly when `expect`.
    Meet { left: Point, right: Point, set: SetExpr, expect: bool },
    /// `open` belongs to the neighbourhood base at `anchor`.
    Basic { anchor: Point, open: OpenDescriptor },
}

impl Assertion {
    pub fn holds(&self, topo: &Topology) -> bool {
        let u = topo.universe();
        match self {
            Assertion::Member { set, point, expect } => u.check(point).is_ok() && set.member(u, point) == *expect,
            Assertion::Empty { set } => is_empty(u, set),
            Assertion::NonEmpty { set } => !is_empty(u, set),
            Assertion::Meet { left, right, set, expect } => set.member(u, &left.meet(right)) == *expect,
            Assertion::Basic { anchor, open } => topo.check_basic(open, anchor).is_ok() && open.contains(u, anchor),
        }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Member { set, point, expect } => write!(f, "member({point}, {set}) = {expect}"),
            Assertion::Empty { set } => write!(f, "empty({set})"),
            Assertion::NonEmpty { set } => write!(f, "nonempty({set})"),
            Assertion::Meet { left, right, set, expect } => write!(f, "member({left} ∩ {right}, {set}) = {expect}"),
            Assertion::Basic { anchor, open } => write!(f, "basic({open} at {anchor})"),
        }
    }
}

/// Zero-neighbourhood bounds used by the convergence part of a joint
/// discontinuity certificate, with the index past which both sequences
/// stay inside.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexBound {
    pub support: Code,
    pub edits: Code,
    pub from: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Subcover { cover: Vec<OpenDescriptor>, chosen: Vec<usize> },
    SeparationPair { p: Point, q: Point, u: OpenDescriptor, v: OpenDescriptor },
    SeparateContinuityModulus { a: Point, b: Point, w: OpenDescriptor, v: OpenDescriptor, image: Vec<Point> },
    JointDiscontinuity {
        anchor: Point,
        w: OpenDescriptor,
        a: Vec<Code>,
        b: Vec<Code>,
        c: Vec<Code>,
        bounds: Vec<IndexBound>,
    },
    ClosedDiscrete { set: SetExpr },
    AccumulationPoint { set: SetExpr, point: Point },
    RegularityShrink { u: OpenDescriptor, v: OpenDescriptor },
    TopRankCover { u: OpenDescriptor, generators: Vec<Point> },
    CollectionwiseExpansion { family: Vec<SetExpr>, expanded: Vec<SetExpr> },
    SeparatorFunction { x1: Point, x2: Point },
    NeighborhoodInUpset { x: Point, v: OpenDescriptor },
    IsolatedPoint { set: SetExpr, point: Point, v: OpenDescriptor },
}

impl Payload {
    pub fn kind(&self) -> Kind {
        match self {
            Payload::Subcover { .. } => Kind::Subcover,
            Payload::SeparationPair { .. } => Kind::SeparationPair,
            Payload::SeparateContinuityModulus { .. } => Kind::SeparateContinuityModulus,
            Payload::JointDiscontinuity { .. } => Kind::JointDiscontinuity,
            Payload::ClosedDiscrete { .. } => Kind::ClosedDiscrete,
            Payload::AccumulationPoint { .. } => Kind::AccumulationPoint,
            Payload::RegularityShrink { .. } => Kind::RegularityShrink,
            Payload::TopRankCover { .. } => Kind::TopRankCover,
            Payload::CollectionwiseExpansion { .. } => Kind::CollectionwiseExpansion,
            Payload::SeparatorFunction { .. } => Kind::SeparatorFunction,
            Payload::NeighborhoodInUpset { .. } => Kind::NeighborhoodInUpset,
            Payload::IsolatedPoint { .. } => Kind::IsolatedPoint,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: u32,
    pub kind: Kind,
    pub topology: Topology,
    pub payload: Payload,
    pub script: Vec<Assertion>,
}

/// Why a certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rejection {
    Version(u32),
    KindMismatch,
    MalformedPayload(String),
    /// The script is not the one the payload determines; the index of the
    /// first assertion that differs (the derived length if one is a prefix).
    Binding(usize),
    /// The assertion at this index evaluated false.
    Assertion(usize),
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::Version(v) => write!(f, "unsupported certificate version {v}"),
            Rejection::KindMismatch => f.write_str("kind tag does not match the payload"),
            Rejection::MalformedPayload(m) => write!(f, "malformed payload: {m}"),
            Rejection::Binding(i) => write!(f, "assertion {i} does not match the payload"),
            Rejection::Assertion(i) => write!(f, "assertion {i} failed"),
        }
    }
}

impl Certificate {
    pub fn new(topology: &Topology, payload: Payload) -> Result<Self> {
        let script = derive_script(topology, &payload)?;
        Ok(Self { version: CERT_VERSION, kind: payload.kind(), topology: topology.clone(), payload, script })
    }

    /// Re-derives the script and evaluates every assertion in order.
    pub fn verify(&self) -> Result<(), Rejection> {
        if self.version != CERT_VERSION {
            return Err(Rejection::Version(self.version));
        }
        if self.kind != self.payload.kind() {
            return Err(Rejection::KindMismatch);
        }
        let expected = derive_script(&self.topology, &self.payload).map_err(|e| Rejection::MalformedPayload(e.to_string()))?;
        if expected != self.script {
            let i = expected.iter().zip(&self.script).position(|(a, b)| a != b);
            return Err(Rejection::Binding(i.unwrap_or(expected.len().min(self.script.len()))));
        }
        match self.script.iter().position(|a| !a.holds(&self.topology)) {
            Some(i) => Err(Rejection::Assertion(i)),
            None => Ok(()),
        }
    }

    pub fn verifies(&self) -> bool {
        self.verify().is_ok()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialise")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Representatives of every pattern over `support` together with their
/// smallest relevant basic neighbourhood. Any colour-preserving permutation
/// fixing the support maps neighbourhoods to neighbourhoods, so a claim
/// about these finitely many points carries over to every point.
pub fn probes(topo: &Topology, support: &[Code]) -> Vec<(Point, OpenDescriptor)> {
    let u = topo.universe();
    let support = codes_union([support, topo.support().as_slice()]);
    patterns(u, &support, u.n)
        .into_iter()
        .map(|pat| {
            let x = pat.instantiate(u, &support);
            let local = codes_union([support.as_slice(), x.codes()]);
            let v = topo.minimal_neighborhood(&x, &local);
            (x, v)
        })
        .collect()
}

fn support_of(sets: &[&SetExpr]) -> Vec<Code> {
    let vecs: Vec<Vec<Code>> = sets.iter().map(|s| support_vec(s)).collect();
    codes_union(vecs.iter().map(Vec::as_slice))
}

fn point_set(p: &Point) -> SetExpr {
    SetExpr::point(p.clone())
}

/// Points `x0 ∪ {a_k, b_k}` and `x0 ∪ {a_k, c_k}`.
pub fn discontinuity_pair(anchor: &Point, a: Code, b: Code, c: Code) -> (Point, Point) {
    (anchor.join(&Point::new([a, b])), anchor.join(&Point::new([a, c])))
}

/// The smallest zero neighbourhood (transported to the anchor) whose
/// exclusions use codes below `support` and whose `B` differs from A only by
/// codes below `edits`.
pub fn bounded_zero_neighborhood(u: &Universe, anchor: &Point, support: Code, edits: Code) -> Result<OpenDescriptor> {
    let excluded: Vec<Point> =
        (0..support).filter(|c| !anchor.contains(*c)).map(|c| anchor.with(c)).filter(|p| p.rank() <= u.n).collect();
    let mut b = AlmostSet::a();
    for c in (0..edits).filter(|&c| u.color(c) == Color::NotA) {
        b = b.with_added(c);
    }
    OpenDescriptor::fc_zero(UpMinus::new(anchor.clone(), excluded)?, b)
}

/// The bounds must enumerate the full grid `0..=S × 0..=E` in row-major
/// order, each with the least index past which every code is at least the
/// support bound.
fn check_bound_grid(anchor: &Point, a: &[Code], b: &[Code], c: &[Code], bounds: &[IndexBound]) -> Result<()> {
    let max_s = bounds.iter().map(|x| x.support).max().unwrap_or(0);
    let max_e = bounds.iter().map(|x| x.edits).max().unwrap_or(0);
    let grid = (0..=max_s).flat_map(|s| (0..=max_e).map(move |e| (s, e)));
    if bounds.len() as u64 != (u64::from(max_s) + 1) * (u64::from(max_e) + 1) {
        return Err(malformed("bounds do not form a full grid"));
    }
    for (bound, (s, e)) in bounds.iter().zip(grid) {
        if (bound.support, bound.edits) != (s, e) {
            return Err(malformed(format!("bound ({}, {}) out of grid order", bound.support, bound.edits)));
        }
        let least = (0..a.len()).find(|&k| a[k] >= s && b[k] >= s && c[k] >= s);
        if least != Some(bound.from) {
            return Err(malformed(format!("index {} is not the least index for support bound {s}", bound.from)));
        }
    }
    if [a, b, c].iter().any(|seq| seq.iter().any(|x| anchor.contains(*x))) {
        return Err(malformed("sequence codes must avoid the anchor"));
    }
    Ok(())
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

/// The script a payload determines. Fails on payloads that are not even
/// well formed.
pub fn derive_script(topo: &Topology, payload: &Payload) -> Result<Vec<Assertion>> {
    let u = topo.universe();
    let mut script = Vec::new();
    match payload {
        Payload::Subcover { cover, chosen } => {
            let distinct: std::collections::BTreeSet<String> = cover.iter().map(ToString::to_string).collect();
            if distinct.len() != cover.len() {
                return Err(malformed("cover repeats a member"));
            }
            if chosen.windows(2).any(|w| w[0] >= w[1]) {
                return Err(malformed("chosen indices are not strictly increasing"));
            }
            for d in cover {
                script.push(Assertion::Basic { anchor: d.anchor(), open: d.clone() });
            }
            let mut members = Vec::new();
            for &i in chosen {
                let d = cover.get(i).ok_or_else(|| malformed(format!("index {i} outside the cover")))?;
                members.push(d.as_set());
            }
            script.push(Assertion::Empty { set: SetExpr::not(SetExpr::or(members)) });
        }
        Payload::SeparationPair { p, q, u: du, v: dv } => {
            script.push(Assertion::Basic { anchor: p.clone(), open: du.clone() });
            script.push(Assertion::Basic { anchor: q.clone(), open: dv.clone() });
            script.push(Assertion::Empty { set: SetExpr::and([du.as_set(), dv.as_set()]) });
        }
        Payload::SeparateContinuityModulus { a, b, w, v, image } => {
            if image.iter().any(|t| !t.leq(a)) || image.windows(2).any(|w| w[0] >= w[1]) {
                return Err(malformed("image must list subsets of a in order"));
            }
            script.push(Assertion::Basic { anchor: b.clone(), open: v.clone() });
            script.push(Assertion::Member { set: w.as_set(), point: a.meet(b), expect: true });
            for t in a.subsets() {
                let mut parts = vec![v.as_set(), SetExpr::up(t.clone())];
                parts.extend(a.minus(&t).into_iter().map(|c| SetExpr::not(SetExpr::up(Point::singleton(c)))));
                let fibre = SetExpr::and(parts);
                if image.contains(&t) {
                    script.push(Assertion::NonEmpty { set: fibre });
                    script.push(Assertion::Member { set: w.as_set(), point: t, expect: true });
                } else {
                    script.push(Assertion::Empty { set: fibre });
                }
            }
        }
        Payload::JointDiscontinuity { anchor, w, a, b, c, bounds } => {
            if a.len() != b.len() || a.len() != c.len() {
                return Err(malformed("sequence lengths differ"));
            }
            let depth = a.len();
            script.push(Assertion::Basic { anchor: anchor.clone(), open: w.clone() });
            let pairs: Vec<(Point, Point)> =
                (0..depth).map(|k| discontinuity_pair(anchor, a[k], b[k], c[k])).collect();
            for (uk, vk) in &pairs {
                script.push(Assertion::Meet { left: uk.clone(), right: vk.clone(), set: w.as_set(), expect: false });
            }
            check_bound_grid(anchor, a, b, c, bounds)?;
            for bound in bounds {
                let nbhd = bounded_zero_neighborhood(u, anchor, bound.support, bound.edits)?;
                script.push(Assertion::Basic { anchor: anchor.clone(), open: nbhd.clone() });
                for (uk, vk) in &pairs[bound.from..] {
                    script.push(Assertion::Member { set: nbhd.as_set(), point: uk.clone(), expect: true });
                    script.push(Assertion::Member { set: nbhd.as_set(), point: vk.clone(), expect: true });
                }
            }
        }
        Payload::ClosedDiscrete { set } => {
            let support = support_of(&[set]);
            // a member outside the finitely many support points has
            // infinitely many pattern twins
            let finite_part = SetExpr::pts(u.points_over(&support));
            script.push(Assertion::NonEmpty { set: set.clone().minus(finite_part) });
            for (x, v) in probes(topo, &support) {
                script.push(Assertion::Basic { anchor: x.clone(), open: v.clone() });
                script.push(Assertion::Empty { set: SetExpr::and([v.as_set(), set.clone(), SetExpr::not(point_set(&x))]) });
            }
        }
        Payload::AccumulationPoint { set, point } => {
            let support = codes_union([support_of(&[set]).as_slice(), point.codes(), topo.support().as_slice()]);
            let v = topo.minimal_neighborhood(point, &support);
            script.push(Assertion::Empty { set: SetExpr::and([set.clone(), SetExpr::lev(u.n - 1)]) });
            script.push(Assertion::Basic { anchor: point.clone(), open: v.clone() });
            script.push(Assertion::NonEmpty { set: SetExpr::and([v.as_set(), set.clone(), SetExpr::not(point_set(point))]) });
        }
        Payload::RegularityShrink { u: du, v: dv } => {
            let zero = Point::zero();
            script.push(Assertion::Basic { anchor: zero.clone(), open: du.clone() });
            script.push(Assertion::Basic { anchor: zero, open: dv.clone() });
            script.push(Assertion::Empty { set: dv.as_set().minus(du.as_set()) });
            let support = support_of(&[&du.as_set(), &dv.as_set()]);
            for (x, nx) in probes(topo, &support) {
                if !du.contains(u, &x) {
                    script.push(Assertion::Member { set: du.as_set(), point: x, expect: false });
                    script.push(Assertion::Empty { set: SetExpr::and([nx.as_set(), dv.as_set()]) });
                }
            }
        }
        Payload::TopRankCover { u: du, generators } => {
            script.push(Assertion::Basic { anchor: Point::zero(), open: du.clone() });
            let mut cover = vec![du.as_set()];
            cover.extend(generators.iter().cloned().map(SetExpr::up));
            script.push(Assertion::Empty { set: SetExpr::rank_eq(u.n).minus(SetExpr::or(cover)) });
        }
        Payload::CollectionwiseExpansion { family, expanded } => {
            if family.len() != expanded.len() {
                return Err(malformed("family and expansion differ in length"));
            }
            for (f, e) in family.iter().zip(expanded) {
                script.push(Assertion::Empty { set: f.clone().minus(e.clone()) });
            }
            for i in 0..expanded.len() {
                for j in i + 1..expanded.len() {
                    script.push(Assertion::Empty { set: SetExpr::and([expanded[i].clone(), expanded[j].clone()]) });
                }
            }
            let refs: Vec<&SetExpr> = family.iter().chain(expanded).collect();
            let all_probes = probes(topo, &support_of(&refs));
            for e in expanded {
                for (x, v) in &all_probes {
                    if e.member(u, x) {
                        script.push(Assertion::Empty { set: v.as_set().minus(e.clone()) });
                    }
                }
            }
        }
        Payload::SeparatorFunction { x1, x2 } => {
            let up = SetExpr::up(x2.clone());
            script.push(Assertion::Member { set: up.clone(), point: x1.clone(), expect: false });
            script.push(Assertion::Member { set: up.clone(), point: x2.clone(), expect: true });
            let support = codes_union([x1.codes(), x2.codes()]);
            for (x, v) in probes(topo, &support) {
                script.push(Assertion::Basic { anchor: x.clone(), open: v.clone() });
                let inside = up.member(u, &x);
                let escape = if inside { v.as_set().minus(up.clone()) } else { SetExpr::and([v.as_set(), up.clone()]) };
                script.push(Assertion::Empty { set: escape });
            }
        }
        Payload::NeighborhoodInUpset { x, v } => {
            script.push(Assertion::Basic { anchor: x.clone(), open: v.clone() });
            script.push(Assertion::Empty { set: v.as_set().minus(SetExpr::up(x.clone())) });
        }
        Payload::IsolatedPoint { set, point, v } => {
            script.push(Assertion::Basic { anchor: point.clone(), open: v.clone() });
            script.push(Assertion::Member { set: set.clone(), point: point.clone(), expect: true });
            script.push(Assertion::Empty { set: SetExpr::and([v.as_set(), set.clone(), SetExpr::not(point_set(point))]) });
        }
    }
    Ok(script)
}
