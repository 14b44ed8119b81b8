//! Limit points, closure and interior of definable sets.
//!
//! Outside `tau_0`, a point `x` is a limit point of `s` exactly when some
//! `x ∪ D` lies in `s` for a nonempty `D` of codes beyond the support
//! (and beyond `x`). At the colour-sensitive anchor a lone A-coloured `D`
//! does not count, since every basic set there removes those points. The
//! answer depends only on the pattern of `x`, so the limit set is a finite
//! union of pattern classes, each expressible with `up`, `lev` and `cyl`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::almost::AlmostSet;
use crate::error::{Error, Result};
use crate::expr::SetExpr;
use crate::pattern::{codes_union, equivalent, find_member, pattern_table_over, support_vec, Pattern};
use crate::point::{Code, Point};
use crate::topology::{OpenDescriptor, Topology, TopologyKind, UpMinus};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LimitRule {
    /// The rule of the topology as defined.
    #[default]
    Exact,
    /// Ignores the colour-sensitive removal at the anchor, as if the
    /// topology were `tau_c`. Used as a negative control.
    ColorBlind,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitAnalysis {
    pub limit: SetExpr,
    /// False only if some class with two or more fresh codes split by
    /// colour; `limit` is then an upper bound.
    pub exact: bool,
    pub support: Vec<Code>,
    pub classes: usize,
}

/// The support the limit computation works over: the set's codes plus the
/// codes of the colour-sensitive anchor.
pub fn analysis_support(topo: &Topology, s: &SetExpr) -> Vec<Code> {
    let own = support_vec(s);
    let anchor = topo.support();
    codes_union([own.as_slice(), anchor.as_slice()])
}

pub fn analyze_limits(topo: &Topology, s: &SetExpr, rule: LimitRule) -> LimitAnalysis {
    let u = topo.universe();
    let support = analysis_support(topo, s);
    if topo.kind() == TopologyKind::Tau0 {
        let zero = Point::zero();
        let others = s.clone().minus(SetExpr::point(zero.clone()));
        let limit = if find_member(u, &others).is_some() { SetExpr::point(zero) } else { SetExpr::empty() };
        let classes = usize::from(limit != SetExpr::empty());
        return LimitAnalysis { limit, exact: true, support, classes };
    }

    let table = pattern_table_over(u, s, &support);
    let member: HashMap<&Pattern, bool> = table.entries.iter().map(|(p, m)| (p, *m)).collect();
    let anchor = match rule {
        LimitRule::Exact => topo.fc_anchor(),
        LimitRule::ColorBlind => None,
    };
    let n = u.n;
    let is_limit = |pat: &Pattern| {
        let at_anchor = pat.fresh() == 0 && Some(&pat.subset) == anchor;
        (1..=n - pat.rank()).any(|d| {
            (0..=d).any(|da| {
                if at_anchor && da == 1 && d == 1 {
                    return false;
                }
                let ext = Pattern { subset: pat.subset.clone(), fresh_a: pat.fresh_a + da, fresh_n: pat.fresh_n + d - da };
                member.get(&ext).copied().unwrap_or(false)
            })
        })
    };

    // (subset, fresh count) -> [(fresh A count, is limit)]
    type Group = ((Point, usize), Vec<(usize, bool)>);
    let mut groups: Vec<Group> = Vec::new();
    for (pat, _) in &table.entries {
        let key = (pat.subset.clone(), pat.fresh());
        let flag = (pat.fresh_a, is_limit(pat));
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, flags)) => flags.push(flag),
            None => groups.push((key, vec![flag])),
        }
    }

    let mut points = Vec::new();
    let mut parts = Vec::new();
    let mut exact = true;
    let mut classes = 0;
    for ((subset, f), flags) in groups {
        if !flags.iter().any(|(_, m)| *m) {
            continue;
        }
        classes += 1;
        if f == 0 {
            points.push(subset);
        } else if flags.iter().all(|(_, m)| *m) {
            parts.push(class_expr(&support, &subset, f, None));
        } else if f == 1 {
            for (fa, m) in flags {
                if m {
                    let b = if fa == 1 { AlmostSet::a() } else { AlmostSet::co_a() };
                    parts.push(class_expr(&support, &subset, 1, Some(b)));
                }
            }
        } else {
            exact = false;
            parts.push(class_expr(&support, &subset, f, None));
        }
    }
    if !points.is_empty() {
        parts.insert(0, SetExpr::pts(points));
    }
    let limit = match parts.len() {
        0 => SetExpr::empty(),
        1 => parts.pop().expect("one part"),
        _ => SetExpr::or(parts),
    };
    LimitAnalysis { limit, exact, support, classes }
}

/// Points whose support part is `subset` and that carry `f` further codes,
/// optionally with the single further code drawn from `colour`.
fn class_expr(support: &[Code], subset: &Point, f: usize, colour: Option<AlmostSet>) -> SetExpr {
    let mut parts = vec![SetExpr::up(subset.clone())];
    parts.extend(
        support.iter().filter(|&&c| !subset.contains(c)).map(|&c| SetExpr::not(SetExpr::up(Point::singleton(c)))),
    );
    parts.push(SetExpr::rank_eq(subset.rank() + f));
    if let Some(b) = colour {
        parts.push(SetExpr::cyl(subset.clone(), b));
    }
    SetExpr::and(parts)
}

pub fn limit_points(topo: &Topology, s: &SetExpr) -> Result<SetExpr> {
    let a = analyze_limits(topo, s, LimitRule::Exact);
    if a.exact {
        Ok(a.limit)
    } else {
        Err(Error::Inexact)
    }
}

pub fn closure_with(topo: &Topology, s: &SetExpr, rule: LimitRule) -> Result<SetExpr> {
    let a = analyze_limits(topo, s, rule);
    if !a.exact {
        return Err(Error::Inexact);
    }
    Ok(if a.limit == SetExpr::empty() { s.clone() } else { SetExpr::or([s.clone(), a.limit]) })
}

pub fn closure(topo: &Topology, s: &SetExpr) -> Result<SetExpr> {
    closure_with(topo, s, LimitRule::Exact)
}

pub fn interior(topo: &Topology, s: &SetExpr) -> Result<SetExpr> {
    Ok(SetExpr::not(closure(topo, &SetExpr::not(s.clone()))?))
}

/// The smallest basic set at `x` relevant to `s`, under the given rule.
pub fn relevant_neighborhood(topo: &Topology, s: &SetExpr, x: &Point, rule: LimitRule) -> OpenDescriptor {
    let support = codes_union([analysis_support(topo, s).as_slice(), x.codes()]);
    let v = topo.minimal_neighborhood(x, &support);
    match (rule, v) {
        (LimitRule::ColorBlind, OpenDescriptor::FcZero { base, .. }) => OpenDescriptor::UpMinus(base),
        (_, v) => v,
    }
}

/// A point of `s` other than `x` inside every neighbourhood pattern of `x`,
/// found through the minimal neighbourhood rather than the class table.
pub fn limit_witness(topo: &Topology, s: &SetExpr, x: &Point) -> Option<Point> {
    let v = relevant_neighborhood(topo, s, x, LimitRule::Exact);
    find_member(topo.universe(), &SetExpr::and([v.as_set(), s.clone(), SetExpr::not(SetExpr::point(x.clone()))]))
}

pub fn is_limit_point(topo: &Topology, s: &SetExpr, x: &Point) -> bool {
    limit_witness(topo, s, x).is_some()
}

pub fn is_interior_point(topo: &Topology, s: &SetExpr, x: &Point) -> bool {
    let v = relevant_neighborhood(topo, s, x, LimitRule::Exact);
    find_member(topo.universe(), &v.as_set().minus(s.clone())).is_none()
}

pub fn is_closed(topo: &Topology, s: &SetExpr) -> Result<bool> {
    Ok(equivalent(topo.universe(), &closure(topo, s)?, s))
}

pub fn is_open(topo: &Topology, s: &SetExpr) -> Result<bool> {
    Ok(equivalent(topo.universe(), &interior(topo, s)?, s))
}

/// For an open `s`, a point of `int(cl(s)) \ s`, or `None` when `s` is
/// regular open.
pub fn regular_open_defect(topo: &Topology, s: &SetExpr) -> Result<Option<Point>> {
    let u = topo.universe();
    let int = interior(topo, s)?;
    if let Some(p) = find_member(u, &s.clone().minus(int)) {
        return Err(Error::NotOpen(p));
    }
    let reg = interior(topo, &closure(topo, s)?)?;
    Ok(find_member(u, &reg.minus(s.clone())))
}

/// The plain up-set `↑x` as an open descriptor, valid away from the anchor.
pub fn up_open(x: &Point) -> OpenDescriptor {
    OpenDescriptor::UpMinus(UpMinus::up(x.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::Universe;

    fn e(s: &str) -> SetExpr {
        s.parse().unwrap()
    }

    fn p(s: &str) -> Point {
        s.parse().unwrap()
    }

    fn fc2() -> Topology {
        Topology::tau_fc2(Universe::with_rank(2)).unwrap()
    }

    fn tc(n: usize) -> Topology {
        Topology::tau_c(Universe::with_rank(n))
    }

    #[test]
    fn singleton_a_image_is_closed_under_fc() {
        let t = fc2();
        let s = e("(cyl {} (almost A + [] - []))");
        assert!(!is_limit_point(&t, &s, &Point::zero()));
        assert!(is_closed(&t, &s).unwrap());
    }

    #[test]
    fn singleton_a_image_accumulates_under_tau_c() {
        let t = tc(2);
        let s = e("(cyl {} (almost A + [] - []))");
        assert!(is_limit_point(&t, &s, &Point::zero()));
        let cl = closure(&t, &s).unwrap();
        assert!(equivalent(t.universe(), &cl, &SetExpr::or([s, SetExpr::point(Point::zero())])));
    }

    #[test]
    fn colour_blind_rule_reports_the_tau_c_answer() {
        let t = fc2();
        let s = e("(cyl {} (almost A + [] - []))");
        let blind = analyze_limits(&t, &s, LimitRule::ColorBlind);
        assert!(blind.limit.member(t.universe(), &Point::zero()));
    }

    #[test]
    fn up_set_is_closed_and_open() {
        let t = tc(2);
        let s = e("(up {1})");
        assert!(is_closed(&t, &s).unwrap());
        assert!(is_open(&t, &s).unwrap());
    }

    #[test]
    fn level_one_closure_is_everything_in_rank_two() {
        let t = tc(2);
        let cl = closure(&t, &e("(lev 0)")).unwrap();
        assert!(equivalent(t.universe(), &cl, &e("(lev 0)")));
        let cl = closure(&t, &e("(not (lev 1))")).unwrap();
        assert!(equivalent(t.universe(), &cl, &SetExpr::everything()));
    }

    #[test]
    fn tau_0_closure_adds_zero() {
        let t = Topology::tau_0(Universe::with_rank(2));
        let cl = closure(&t, &e("(pts {3})")).unwrap();
        assert!(equivalent(t.universe(), &cl, &e("(pts {} {3})")));
        assert!(equivalent(t.universe(), &closure(&t, &e("(pts {})")).unwrap(), &e("(pts {})")));
    }

    #[test]
    fn class_table_agrees_with_neighbourhood_route() {
        let u = Universe::with_rank(2);
        let t = fc2();
        let sets = ["(cyl {} (almost A + [] - []))", "(up {1})", "(and (lev 1) (not (pts {})))", "(pts {1 2} {4})"];
        for src in sets {
            let s = e(src);
            let l = limit_points(&t, &s).unwrap();
            for x in u.points_over(&[0, 1, 2, 3, 4, 5, 6, 7]) {
                assert_eq!(l.member(&u, &x), is_limit_point(&t, &s, &x), "{src} at {x}");
            }
        }
    }

    #[test]
    fn fc_anchor_base_is_not_regular_open() {
        let t = fc2();
        let u = OpenDescriptor::fc_zero(UpMinus::up(Point::zero()), AlmostSet::a()).unwrap();
        let w = regular_open_defect(&t, &u.as_set()).unwrap().expect("defect");
        assert_eq!(w.rank(), 1);
        assert!(t.universe().in_a(w.codes()[0]));
        assert_eq!(regular_open_defect(&tc(2), &e("(up {1})")).unwrap(), None);
    }

    #[test]
    fn non_open_input_is_rejected() {
        assert!(matches!(regular_open_defect(&tc(2), &e("(pts {1})")), Err(Error::NotOpen(_))));
        let _ = p("{1}");
    }
}
