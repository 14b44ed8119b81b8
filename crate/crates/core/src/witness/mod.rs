//! Constructive procedures that return verifiable certificates.

mod certificate;

pub use certificate::{
    bounded_zero_neighborhood, derive_script, discontinuity_pair, probes, Assertion, Certificate, IndexBound, Kind,
    Payload, Rejection, CERT_VERSION,
};

use std::collections::BTreeSet;

use crate::almost::AlmostSet;
use crate::closure::{analysis_support, closure, is_closed, limit_points, regular_open_defect};
use crate::error::{Error, Result};
use crate::expr::SetExpr;
use crate::pattern::{codes_union, find_member, finite_members, is_empty, pattern_table_over, subset_of};
use crate::point::{Code, Color, Point};
use crate::topology::{refine, translate, OpenDescriptor, Topology, TopologyKind, UpMinus};

fn require_t1(topo: &Topology) -> Result<()> {
    if topo.is_t1() {
        Ok(())
    } else {
        Err(Error::NotT1(Point::zero(), Point::singleton(0)))
    }
}

fn require_fc(topo: &Topology) -> Result<&Point> {
    topo.fc_anchor().ok_or_else(|| Error::Precondition(format!("{} has no colour-sensitive anchor", topo.name())))
}

/// A basic neighbourhood of `x` inside `↑x`.
pub fn neighborhood_in_upset(topo: &Topology, x: &Point) -> Result<Certificate> {
    require_t1(topo)?;
    let v = topo.canonical_base(x, &[], None)?;
    Certificate::new(topo, Payload::NeighborhoodInUpset { x: x.clone(), v })
}

/// Disjoint basic neighbourhoods of two distinct points.
pub fn separation_pair(topo: &Topology, p: &Point, q: &Point) -> Result<Certificate> {
    let (u, v) = topo.hausdorff_separate(p, q)?;
    Certificate::new(topo, Payload::SeparationPair { p: p.clone(), q: q.clone(), u, v })
}

/// The indicator of `↑x2`, oriented so that `x1 ∉ ↑x2`.
pub fn separator_function(topo: &Topology, x1: &Point, x2: &Point) -> Result<Certificate> {
    require_t1(topo)?;
    if x1 == x2 {
        return Err(Error::SamePoint(x1.clone()));
    }
    topo.universe().check(x1)?;
    topo.universe().check(x2)?;
    let (x1, x2) = if x2.leq(x1) { (x2, x1) } else { (x1, x2) };
    Certificate::new(topo, Payload::SeparatorFunction { x1: x1.clone(), x2: x2.clone() })
}

/// A point of `s` isolated in `s`: the representative of a member pattern
/// of maximal rank.
pub fn isolated_point_of(topo: &Topology, s: &SetExpr) -> Result<Certificate> {
    let u = topo.universe();
    let support = analysis_support(topo, s);
    let table = pattern_table_over(u, s, &support);
    let best = table.members().max_by_key(|p| p.rank()).ok_or(Error::EmptySet)?;
    let point = best.instantiate(u, &support);
    let local = codes_union([support.as_slice(), point.codes()]);
    let v = topo.minimal_neighborhood(&point, &local);
    Certificate::new(topo, Payload::IsolatedPoint { set: s.clone(), point, v })
}

/// A basic neighbourhood `V` of `b` with `a · V ⊆ W`.
pub fn separate_continuity_modulus(topo: &Topology, a: &Point, b: &Point, w: &OpenDescriptor) -> Result<Certificate> {
    let u = topo.universe();
    u.check(a)?;
    u.check(b)?;
    let ab = a.meet(b);
    if !w.contains(u, &ab) {
        return Err(Error::Precondition(format!("{a} ∩ {b} = {ab} is not in {w}")));
    }
    let excluded: Vec<Point> = if topo.is_t1() {
        a.minus(b).into_iter().map(|c| b.with(c)).filter(|p| p.rank() <= u.n).collect()
    } else {
        Vec::new()
    };
    let mut v = topo.canonical_base(b, &excluded, None)?;
    if w.contains(u, b) && topo.check_basic(w, b).is_ok() {
        v = refine(u, &v, w, b)?;
    }
    let mut image = match translate(u, a, &v) {
        SetExpr::Pts(ps) => ps,
        other => unreachable!("translate returns a point set, got {other}"),
    };
    image.sort();
    if let Some(bad) = image.iter().find(|t| !w.contains(u, t)) {
        return Err(Error::Precondition(format!("{a} · {v} reaches {bad} outside {w}")));
    }
    Certificate::new(topo, Payload::SeparateContinuityModulus { a: a.clone(), b: b.clone(), w: w.clone(), v, image })
}

/// Sequences `u_k = x0 ∪ {a_k, b_k}` and `v_k = x0 ∪ {a_k, c_k}` that both
/// converge to the anchor while every product `x0 ∪ {a_k}` stays outside
/// the anchor neighbourhood that removes the transported image of A.
pub fn joint_discontinuity_certificate(topo: &Topology, depth: usize, support_bound: Code, edit_bound: Code) -> Result<Certificate> {
    let anchor = require_fc(topo)?.clone();
    let u = topo.universe();
    let free = |color: Color, count: usize| -> Vec<Code> {
        (0..).filter(|&c| !anchor.contains(c) && u.color(c) == color).take(count).collect()
    };
    let a = free(Color::InA, depth);
    let others = free(Color::NotA, 2 * depth);
    let b: Vec<Code> = others.iter().step_by(2).copied().collect();
    let c: Vec<Code> = others.iter().skip(1).step_by(2).copied().collect();
    let w = OpenDescriptor::fc_zero(UpMinus::up(anchor.clone()), AlmostSet::a())?;
    let mut bounds = Vec::new();
    for s in 0..=support_bound {
        for e in 0..=edit_bound {
            let from = (0..depth)
                .find(|&k| a[k] >= s && b[k] >= s && c[k] >= s)
                .ok_or_else(|| Error::Precondition(format!("depth {depth} too small for support bound {s}")))?;
            bounds.push(IndexBound { support: s, edits: e, from });
        }
    }
    Certificate::new(topo, Payload::JointDiscontinuity { anchor, w, a, b, c, bounds })
}

/// The transported singleton image of A: infinite, closed and discrete.
pub fn closed_discrete_witness(topo: &Topology) -> Result<Certificate> {
    let anchor = require_fc(topo)?.clone();
    Certificate::new(topo, Payload::ClosedDiscrete { set: SetExpr::cyl(anchor, AlmostSet::a()) })
}

/// An accumulation point of an infinite family of top-rank points.
pub fn accumulation_point(topo: &Topology, s: &SetExpr) -> Result<Certificate> {
    let u = topo.universe();
    if let Some(low) = find_member(u, &SetExpr::and([s.clone(), SetExpr::lev(u.n - 1)])) {
        return Err(Error::NotTopRank(low));
    }
    if finite_members(u, s).is_some() {
        return Err(Error::FiniteSet);
    }
    let limit = limit_points(topo, s)?;
    let point = find_member(u, &limit).ok_or_else(|| Error::Precondition("no accumulation point".into()))?;
    Certificate::new(topo, Payload::AccumulationPoint { set: s.clone(), point })
}

/// A finite subcover, read off the exclusion data: take a member containing
/// zero, then recurse into every excluded up-set.
pub fn extract_finite_subcover(topo: &Topology, cover: &[OpenDescriptor]) -> Result<Certificate> {
    if topo.kind() != TopologyKind::TauC {
        return Err(Error::Precondition(format!("{} is not the compact family", topo.name())));
    }
    let u = topo.universe();
    for d in cover {
        topo.check_basic(d, &d.anchor())?;
    }
    let union = SetExpr::or(cover.iter().map(OpenDescriptor::as_set));
    if let Some(p) = find_member(u, &SetExpr::not(union)) {
        return Err(Error::NotCover(p));
    }
    let mut chosen = BTreeSet::new();
    let mut seen = BTreeSet::new();
    let mut pending = vec![Point::zero()];
    while let Some(x) = pending.pop() {
        if !seen.insert(x.clone()) {
            continue;
        }
        let (i, d) = cover
            .iter()
            .enumerate()
            .find(|(_, d)| d.contains(u, &x))
            .ok_or_else(|| Error::NotCover(x.clone()))?;
        chosen.insert(i);
        for e in d.excluded() {
            let next = x.join(e);
            if next.rank() <= u.n {
                pending.push(next);
            }
        }
    }
    Certificate::new(topo, Payload::Subcover { cover: cover.to_vec(), chosen: chosen.into_iter().collect() })
}

/// A zero neighbourhood `V ⊆ U` with `cl(V) ⊆ U`. Basic sets of the compact
/// family are clopen, so `V = U` works; at the colour-sensitive anchor no
/// shrink exists and the error carries the regular-open defect.
pub fn regularity_shrink(topo: &Topology, u_set: &OpenDescriptor) -> Result<Certificate> {
    require_t1(topo)?;
    let zero = Point::zero();
    topo.check_basic(u_set, &zero)?;
    let u = topo.universe();
    let v = u_set.clone();
    let cl = closure(topo, &v.as_set())?;
    if !subset_of(u, &cl, &u_set.as_set()) {
        let witness = match regular_open_defect(topo, &u_set.as_set())? {
            Some(w) => w,
            None => find_member(u, &cl.minus(u_set.as_set())).expect("closure leaves U"),
        };
        return Err(Error::NotRegular { witness });
    }
    Certificate::new(topo, Payload::RegularityShrink { u: u_set.clone(), v })
}

/// Up-sets that together with a zero neighbourhood cover the top rank.
pub fn top_rank_cover(topo: &Topology, u_set: &OpenDescriptor) -> Result<Certificate> {
    require_t1(topo)?;
    topo.check_basic(u_set, &Point::zero())?;
    let generators = u_set.excluded().to_vec();
    Certificate::new(topo, Payload::TopRankCover { u: u_set.clone(), generators })
}

/// Pairwise disjoint open expansions of a discrete family of disjoint closed
/// sets in rank one. Only the member that reaches zero grows, by a zero
/// neighbourhood that avoids the (finite) other members.
pub fn collectionwise_expand(topo: &Topology, family: &[SetExpr]) -> Result<Certificate> {
    let u = topo.universe();
    if topo.kind() != TopologyKind::TauC || u.n != 1 {
        return Err(Error::Precondition("expansion is defined for tau_c with n = 1".into()));
    }
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            if let Some(p) = find_member(u, &SetExpr::and([family[i].clone(), family[j].clone()])) {
                return Err(Error::NotDisjoint(i, j, p));
            }
        }
    }
    let zero = Point::zero();
    let mut reaching = Vec::new();
    for (i, f) in family.iter().enumerate() {
        if closure(topo, f)?.member(u, &zero) {
            reaching.push(i);
        }
    }
    if let [i, j, ..] = reaching[..] {
        return Err(Error::NotDiscrete(i, j));
    }
    for f in family {
        if !is_closed(topo, f)? {
            let p = find_member(u, &closure(topo, f)?.minus(f.clone())).expect("closure differs");
            return Err(Error::NotClosed(p));
        }
    }
    let mut expanded = family.to_vec();
    if let Some(&s0) = reaching.first() {
        let mut excluded = BTreeSet::new();
        for (j, f) in family.iter().enumerate() {
            if j != s0 {
                let pts = finite_members(u, f).ok_or_else(|| Error::Precondition(format!("member {j} is infinite")))?;
                excluded.extend(pts);
            }
        }
        let nbhd = OpenDescriptor::up_minus(zero, excluded.into_iter().collect())?;
        expanded[s0] = SetExpr::or([family[s0].clone(), nbhd.as_set()]);
    }
    for (i, e) in expanded.iter().enumerate() {
        for f in expanded.iter().skip(i + 1) {
            debug_assert!(is_empty(u, &SetExpr::and([e.clone(), f.clone()])));
        }
    }
    Certificate::new(topo, Payload::CollectionwiseExpansion { family: family.to_vec(), expanded })
}
