//! Brute-force semantics on a finite window of codes.
//!
//! The window holds the base codes `0..m` plus a few reserved pad codes of
//! each colour beyond `m`. Pads stand in for the infinitely many codes a
//! finite neighbourhood cannot block: in the window, the smallest basic set
//! of `x` contains exactly the points `x ∪ D` with `D` a nonempty set of pads
//! (minus the transported A-coloured singleton extensions at the
//! colour-sensitive anchor). Everything here evaluates membership point by
//! point and never touches the symbolic closure code.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::SetExpr;
use crate::point::{Code, Color, Point, Universe};
use crate::topology::{Topology, TopologyKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub m: u32,
    pub pad_a: usize,
    pub pad_n: usize,
}

impl Window {
    pub fn new(m: u32, pad_a: usize, pad_n: usize) -> Self {
        Self { m, pad_a, pad_n }
    }

    pub fn pads(&self, u: &Universe) -> Vec<Code> {
        let floor = self.m.checked_sub(1);
        let mut pads = u.a.fresh(Color::InA, floor, self.pad_a, &[]);
        pads.extend(u.a.fresh(Color::NotA, floor, self.pad_n, &[]));
        pads.sort_unstable();
        pads
    }

    pub fn codes(&self, u: &Universe) -> Vec<Code> {
        let mut codes: Vec<Code> = (0..self.m).collect();
        codes.extend(self.pads(u));
        codes
    }

    pub fn points(&self, u: &Universe) -> Vec<Point> {
        let mut pts = u.points_over(&self.codes(u));
        pts.sort();
        pts
    }

    fn check_codes(&self, codes: impl IntoIterator<Item = Code>) -> Result<()> {
        match codes.into_iter().find(|&c| c >= self.m) {
            Some(code) => Err(Error::SupportOverflow { code, window: self.m }),
            None => Ok(()),
        }
    }
}

/// Membership of every window point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleTable {
    pub window: Window,
    pub rows: BTreeMap<Point, bool>,
}

impl OracleTable {
    pub fn members(&self) -> BTreeSet<Point> {
        self.rows.iter().filter(|(_, m)| **m).map(|(p, _)| p.clone()).collect()
    }

    pub fn get(&self, p: &Point) -> bool {
        self.rows.get(p).copied().unwrap_or(false)
    }
}

pub fn oracle_membership_table(u: &Universe, s: &SetExpr, w: Window) -> Result<OracleTable> {
    w.check_codes(s.support())?;
    let rows = w.points(u).into_iter().map(|p| {
        let m = s.member(u, &p);
        (p, m)
    });
    Ok(OracleTable { window: w, rows: rows.collect() })
}

/// The smallest neighbourhood of `x` as seen inside the window.
pub fn window_neighborhood(topo: &Topology, w: Window, x: &Point) -> Vec<Point> {
    let u = topo.universe();
    if topo.kind() == TopologyKind::Tau0 {
        return if x.is_zero() { w.points(u) } else { vec![x.clone()] };
    }
    let pads: Vec<Code> = w.pads(u).into_iter().filter(|c| !x.contains(*c)).collect();
    let at_anchor = topo.fc_anchor() == Some(x);
    let mut out = Vec::new();
    for mask in 0u32..(1 << pads.len()) {
        let extra: Vec<Code> = (0..pads.len()).filter(|i| mask & (1 << i) != 0).map(|i| pads[i]).collect();
        if x.rank() + extra.len() > u.n {
            continue;
        }
        if at_anchor && extra.len() == 1 && u.in_a(extra[0]) {
            continue;
        }
        out.push(x.join(&Point::new(extra)));
    }
    out
}

fn check_topology(topo: &Topology, w: Window) -> Result<()> {
    w.check_codes(topo.support())
}

pub fn oracle_limit_points(topo: &Topology, s: &SetExpr, w: Window) -> Result<BTreeSet<Point>> {
    check_topology(topo, w)?;
    let table = oracle_membership_table(topo.universe(), s, w)?;
    Ok(limit_from_table(topo, &table))
}

fn limit_from_table(topo: &Topology, table: &OracleTable) -> BTreeSet<Point> {
    table
        .rows
        .keys()
        .filter(|x| window_neighborhood(topo, table.window, x).iter().any(|y| y != *x && table.get(y)))
        .cloned()
        .collect()
}

pub fn oracle_closure(topo: &Topology, s: &SetExpr, w: Window) -> Result<BTreeSet<Point>> {
    check_topology(topo, w)?;
    let table = oracle_membership_table(topo.universe(), s, w)?;
    let mut out = table.members();
    out.extend(limit_from_table(topo, &table));
    Ok(out)
}

pub fn oracle_interior(topo: &Topology, s: &SetExpr, w: Window) -> Result<BTreeSet<Point>> {
    check_topology(topo, w)?;
    let table = oracle_membership_table(topo.universe(), s, w)?;
    Ok(table
        .rows
        .keys()
        .filter(|x| window_neighborhood(topo, w, x).iter().all(|y| table.get(y)))
        .cloned()
        .collect())
}

/// Symmetric difference between a symbolic set and an oracle point set,
/// restricted to the window.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agreement {
    pub points: usize,
    pub only_symbolic: Vec<Point>,
    pub only_oracle: Vec<Point>,
}

impl Agreement {
    pub fn agrees(&self) -> bool {
        self.only_symbolic.is_empty() && self.only_oracle.is_empty()
    }
}

pub fn compare(u: &Universe, symbolic: &SetExpr, oracle: &BTreeSet<Point>, w: Window) -> Agreement {
    let mut report = Agreement::default();
    for p in w.points(u) {
        report.points += 1;
        match (symbolic.member(u, &p), oracle.contains(&p)) {
            (true, false) => report.only_symbolic.push(p),
            (false, true) => report.only_oracle.push(p),
            _ => {}
        }
    }
    report
}

/// Whether enlarging the padding leaves the oracle limit set unchanged on
/// the points of the smaller window.
pub fn padding_stable(topo: &Topology, s: &SetExpr, small: Window, large: Window) -> Result<bool> {
    let a = oracle_limit_points(topo, s, small)?;
    let b = oracle_limit_points(topo, s, large)?;
    let shared: BTreeSet<Point> = small.points(topo.universe()).into_iter().collect();
    Ok(a == b.intersection(&shared).cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> SetExpr {
        s.parse().unwrap()
    }

    fn p(s: &str) -> Point {
        s.parse().unwrap()
    }

    #[test]
    fn cylinder_table_marks_even_singletons_and_the_a_pad() {
        let u = Universe::with_rank(2);
        let w = Window::new(6, 1, 1);
        assert_eq!(w.pads(&u), vec![6, 7]);
        let t = oracle_membership_table(&u, &e("(cyl {} (almost A + [] - []))"), w).unwrap();
        let expected: BTreeSet<Point> = [0, 2, 4, 6].into_iter().map(Point::singleton).collect();
        assert_eq!(t.members(), expected);
    }

    #[test]
    fn contradiction_table_is_all_false() {
        let u = Universe::with_rank(2);
        let t = oracle_membership_table(&u, &e("(and (up {1}) (not (up {1})))"), Window::new(4, 1, 1)).unwrap();
        assert!(t.members().is_empty());
        let t = oracle_membership_table(&u, &e("(up {1})"), Window::new(4, 1, 1)).unwrap();
        assert!(t.members().iter().all(|q| q.contains(1)));
        assert_eq!(t.members().len(), 6);
    }

    #[test]
    fn limit_examples() {
        let u = Universe::with_rank(2);
        let w = Window::new(6, 1, 1);
        let tc = Topology::tau_c(u.clone());
        let fc = Topology::tau_fc2(u).unwrap();
        let zero: BTreeSet<Point> = [Point::zero()].into();
        assert_eq!(oracle_limit_points(&tc, &e("(cyl {} (almost ALL + [] - []))"), w).unwrap(), zero);
        assert!(oracle_limit_points(&fc, &e("(cyl {} (almost A + [] - []))"), w).unwrap().is_empty());
        assert_eq!(oracle_limit_points(&tc, &e("(up {1})"), w).unwrap(), [p("{1}")].into());
    }

    #[test]
    fn support_overflow_is_reported() {
        let u = Universe::with_rank(2);
        assert_eq!(
            oracle_membership_table(&u, &e("(up {9})"), Window::new(6, 1, 1)),
            Err(Error::SupportOverflow { code: 9, window: 6 })
        );
    }

    #[test]
    fn identical_sets_agree() {
        let u = Universe::with_rank(2);
        let w = Window::new(5, 1, 1);
        let s = e("(or (up {1}) (pts {2}))");
        let t = oracle_membership_table(&u, &s, w).unwrap();
        assert!(compare(&u, &s, &t.members(), w).agrees());
        assert!(!compare(&u, &e("(up {1})"), &t.members(), w).agrees());
    }
}
