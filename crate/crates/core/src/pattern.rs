//! Finite-support semantics.
//!
//! Membership of a point in a [`SetExpr`] depends only on which support codes
//! the point contains and on how many of its remaining ("fresh") codes are
//! in A and outside A. A [`Pattern`] names one such class; instantiating
//! every admissible pattern with canonical fresh codes decides emptiness,
//! equivalence and everything built on them.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::expr::SetExpr;
use crate::point::{Code, Color, Point, Universe};

/// One orbit of points relative to a support set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pattern {
    /// The support codes the point contains.
    pub subset: Point,
    pub fresh_a: usize,
    pub fresh_n: usize,
}

impl Pattern {
    pub fn fresh(&self) -> usize {
        self.fresh_a + self.fresh_n
    }

    pub fn rank(&self) -> usize {
        self.subset.rank() + self.fresh()
    }

    /// The pattern of `p` relative to `support`.
    pub fn of(u: &Universe, support: &[Code], p: &Point) -> Pattern {
        let mut subset = Vec::new();
        let (mut fresh_a, mut fresh_n) = (0, 0);
        for &c in p.codes() {
            if support.binary_search(&c).is_ok() {
                subset.push(c);
            } else if u.in_a(c) {
                fresh_a += 1;
            } else {
                fresh_n += 1;
            }
        }
        Pattern { subset: Point::from_sorted_unchecked(subset), fresh_a, fresh_n }
    }

    /// Canonical representative: the smallest codes of each colour above
    /// every support code.
    pub fn instantiate(&self, u: &Universe, support: &[Code]) -> Point {
        let floor = support.last().copied();
        let mut codes = self.subset.codes().to_vec();
        codes.extend(u.a.fresh(Color::InA, floor, self.fresh_a, &[]));
        codes.extend(u.a.fresh(Color::NotA, floor, self.fresh_n, &[]));
        Point::new(codes)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} +{}A +{}N)", self.subset, self.fresh_a, self.fresh_n)
    }
}

/// Every pattern over `support` of rank at most `max_rank`, ordered by
/// rank, then support subset, then more A-coloured fresh codes first.
pub fn patterns(u: &Universe, support: &[Code], max_rank: usize) -> Vec<Pattern> {
    let max_rank = max_rank.min(u.n);
    let probe = Universe { n: max_rank, a: u.a.clone() };
    let mut out = Vec::new();
    for subset in probe.points_over(support) {
        let room = max_rank - subset.rank();
        for fresh in 0..=room {
            for fresh_a in (0..=fresh).rev() {
                out.push(Pattern { subset: subset.clone(), fresh_a, fresh_n: fresh - fresh_a });
            }
        }
    }
    out.sort_by(|a, b| a.rank().cmp(&b.rank()).then_with(|| a.subset.cmp(&b.subset)).then_with(|| b.fresh_a.cmp(&a.fresh_a)));
    out
}

pub fn support_vec(s: &SetExpr) -> Vec<Code> {
    s.support().into_iter().collect()
}

/// Membership of every pattern, evaluated on canonical instantiations.
#[derive(Clone, Debug)]
pub struct PatternTable {
    pub support: Vec<Code>,
    pub entries: Vec<(Pattern, bool)>,
}

impl PatternTable {
    pub fn members(&self) -> impl Iterator<Item = &Pattern> {
        self.entries.iter().filter(|(_, m)| *m).map(|(p, _)| p)
    }

    pub fn get(&self, pattern: &Pattern) -> Option<bool> {
        self.entries.iter().find(|(p, _)| p == pattern).map(|(_, m)| *m)
    }
}

pub fn pattern_table(u: &Universe, s: &SetExpr) -> PatternTable {
    pattern_table_over(u, s, &support_vec(s))
}

/// Pattern table relative to a support that must contain `s.support()`.
pub fn pattern_table_over(u: &Universe, s: &SetExpr, support: &[Code]) -> PatternTable {
    let nnf = s.to_nnf();
    let entries = patterns(u, support, u.n)
        .into_iter()
        .map(|pat| {
            let m = nnf.member(u, &pat.instantiate(u, support));
            (pat, m)
        })
        .collect();
    PatternTable { support: support.to_vec(), entries }
}

/// A member of `s`, or `None` when `s` is empty. The witness is the canonical
/// instantiation of the first member pattern.
pub fn find_member(u: &Universe, s: &SetExpr) -> Option<Point> {
    let support = support_vec(s);
    let nnf = s.to_nnf();
    patterns(u, &support, u.n)
        .into_iter()
        .map(|pat| pat.instantiate(u, &support))
        .find(|p| nnf.member(u, p))
}

pub fn is_empty(u: &Universe, s: &SetExpr) -> bool {
    find_member(u, s).is_none()
}

/// A point in exactly one of the two sets, or `None` when they are equal.
pub fn difference_witness(u: &Universe, a: &SetExpr, b: &SetExpr) -> Option<Point> {
    let xor = SetExpr::or([a.clone().minus(b.clone()), b.clone().minus(a.clone())]);
    find_member(u, &xor)
}

pub fn equivalent(u: &Universe, a: &SetExpr, b: &SetExpr) -> bool {
    difference_witness(u, a, b).is_none()
}

/// `a ⊆ b`.
pub fn subset_of(u: &Universe, a: &SetExpr, b: &SetExpr) -> bool {
    is_empty(u, &a.clone().minus(b.clone()))
}

/// Enumerates the members of a set known to be finite (all member patterns
/// have no fresh codes). Returns `None` when the set is infinite.
pub fn finite_members(u: &Universe, s: &SetExpr) -> Option<Vec<Point>> {
    let table = pattern_table(u, s);
    let mut out = Vec::new();
    for pat in table.members() {
        if pat.fresh() > 0 {
            return None;
        }
        out.push(pat.subset.clone());
    }
    Some(out)
}

pub fn codes_union<'a>(parts: impl IntoIterator<Item = &'a [Code]>) -> Vec<Code> {
    let set: BTreeSet<Code> = parts.into_iter().flat_map(|p| p.iter().copied()).collect();
    set.into_iter().collect()
}
