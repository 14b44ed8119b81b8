//! Definable subsets of the space: finite Boolean combinations of up-sets,
//! finite point sets, rank levels, one-free-coordinate cylinders and basic
//! open descriptors.
//!
//! Text grammar (canonical printing is exactly what [`fmt::Display`] emits):
//!
//! ```text
//! (up {1 3})  (pts {2} {1 2})  (lev 1)  (cyl {} (almost A + [] - []))
//! (open (upminus {} [{1}]))  (not e)  (and e1 e2 ...)  (or e1 e2 ...)
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::almost::AlmostSet;
use crate::error::{Error, Result};
use crate::point::{Code, Point, Universe};
use crate::text::Cursor;
use crate::topology::OpenDescriptor;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SetExpr {
    /// `↑x`: every point containing `x`.
    Up(Point),
    /// A finite set of points.
    Pts(Vec<Point>),
    /// `exp_k`: points of rank at most `k`.
    Lev(usize),
    /// Points `F ∪ {c}` with `c ∉ F` and `c ∈ B`.
    Cyl(Point, AlmostSet),
    Open(OpenDescriptor),
    Not(Box<SetExpr>),
    And(Vec<SetExpr>),
    Or(Vec<SetExpr>),
}

impl SetExpr {
    pub fn up(x: Point) -> Self {
        SetExpr::Up(x)
    }

    pub fn pts(points: impl IntoIterator<Item = Point>) -> Self {
        SetExpr::Pts(points.into_iter().collect())
    }

    pub fn point(p: Point) -> Self {
        SetExpr::Pts(vec![p])
    }

    pub fn lev(k: usize) -> Self {
        SetExpr::Lev(k)
    }

    pub fn cyl(f: Point, b: AlmostSet) -> Self {
        SetExpr::Cyl(f, b)
    }

    pub fn open(d: OpenDescriptor) -> Self {
        SetExpr::Open(d)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: SetExpr) -> Self {
        SetExpr::Not(Box::new(e))
    }

    pub fn and(es: impl IntoIterator<Item = SetExpr>) -> Self {
        SetExpr::And(es.into_iter().collect())
    }

    pub fn or(es: impl IntoIterator<Item = SetExpr>) -> Self {
        SetExpr::Or(es.into_iter().collect())
    }

    pub fn empty() -> Self {
        SetExpr::Or(Vec::new())
    }

    pub fn everything() -> Self {
        SetExpr::And(Vec::new())
    }

    /// Points of rank exactly `k`.
    pub fn rank_eq(k: usize) -> Self {
        if k == 0 {
            SetExpr::Lev(0)
        } else {
            SetExpr::and([SetExpr::Lev(k), SetExpr::not(SetExpr::Lev(k - 1))])
        }
    }

    /// `self \ other`.
    pub fn minus(self, other: SetExpr) -> Self {
        SetExpr::and([self, SetExpr::not(other)])
    }

    pub fn member(&self, u: &Universe, p: &Point) -> bool {
        match self {
            SetExpr::Up(x) => x.leq(p),
            SetExpr::Pts(ps) => ps.contains(p),
            SetExpr::Lev(k) => p.rank() <= *k,
            SetExpr::Cyl(f, b) => {
                p.rank() == f.rank() + 1 && f.leq(p) && {
                    let extra = p.minus(f);
                    b.contains(u, extra[0])
                }
            }
            SetExpr::Open(d) => d.contains(u, p),
            SetExpr::Not(e) => !e.member(u, p),
            SetExpr::And(es) => es.iter().all(|e| e.member(u, p)),
            SetExpr::Or(es) => es.iter().any(|e| e.member(u, p)),
        }
    }

    /// Codes outside of which membership depends only on colours.
    pub fn support(&self) -> BTreeSet<Code> {
        let mut out = BTreeSet::new();
        self.collect_support(&mut out);
        out
    }

    fn collect_support(&self, out: &mut BTreeSet<Code>) {
        match self {
            SetExpr::Up(x) => out.extend(x.codes()),
            SetExpr::Pts(ps) => {
                for p in ps {
                    out.extend(p.codes());
                }
            }
            SetExpr::Lev(_) => {}
            SetExpr::Cyl(f, b) => {
                out.extend(f.codes());
                out.extend(b.edits());
            }
            SetExpr::Open(d) => out.extend(d.support()),
            SetExpr::Not(e) => e.collect_support(out),
            SetExpr::And(es) | SetExpr::Or(es) => {
                for e in es {
                    e.collect_support(out);
                }
            }
        }
    }

    /// Negation-normal form: `Not` only wraps atoms.
    pub fn to_nnf(&self) -> SetExpr {
        self.nnf(false)
    }

    fn nnf(&self, negate: bool) -> SetExpr {
        match (self, negate) {
            (SetExpr::Not(e), _) => e.nnf(!negate),
            (SetExpr::And(es), false) => SetExpr::And(es.iter().map(|e| e.nnf(false)).collect()),
            (SetExpr::And(es), true) => SetExpr::Or(es.iter().map(|e| e.nnf(true)).collect()),
            (SetExpr::Or(es), false) => SetExpr::Or(es.iter().map(|e| e.nnf(false)).collect()),
            (SetExpr::Or(es), true) => SetExpr::And(es.iter().map(|e| e.nnf(true)).collect()),
            (atom, false) => atom.clone(),
            (atom, true) => SetExpr::not(atom.clone()),
        }
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            SetExpr::Not(e) => !matches!(**e, SetExpr::Not(_) | SetExpr::And(_) | SetExpr::Or(_)),
            SetExpr::And(es) | SetExpr::Or(es) => es.iter().all(SetExpr::is_nnf),
            _ => true,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            SetExpr::Not(e) => 1 + e.size(),
            SetExpr::And(es) | SetExpr::Or(es) => 1 + es.iter().map(SetExpr::size).sum::<usize>(),
            _ => 1,
        }
    }

    pub(crate) fn parse_from(cur: &mut Cursor<'_>) -> Result<Self> {
        cur.expect('(')?;
        let head = cur.word()?;
        let e = match head {
            "up" => SetExpr::Up(cur.point()?),
            "pts" => {
                let mut ps = Vec::new();
                while cur.peek() == Some('{') {
                    ps.push(cur.point()?);
                }
                SetExpr::Pts(ps)
            }
            "lev" => SetExpr::Lev(cur.number()? as usize),
            "cyl" => {
                let f = cur.point()?;
                let b = AlmostSet::parse_from(cur)?;
                SetExpr::Cyl(f, b)
            }
            "open" => SetExpr::Open(OpenDescriptor::parse_from(cur)?),
            "not" => SetExpr::not(SetExpr::parse_from(cur)?),
            "and" | "or" => {
                let mut es = Vec::new();
                while cur.peek() == Some('(') {
                    es.push(SetExpr::parse_from(cur)?);
                }
                if head == "and" {
                    SetExpr::And(es)
                } else {
                    SetExpr::Or(es)
                }
            }
            other => return cur.err(format!("unknown set expression head '{other}'")),
        };
        cur.expect(')')?;
        Ok(e)
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetExpr::Up(x) => write!(f, "(up {x})"),
            SetExpr::Pts(ps) => {
                f.write_str("(pts")?;
                for p in ps {
                    write!(f, " {p}")?;
                }
                f.write_str(")")
            }
            SetExpr::Lev(k) => write!(f, "(lev {k})"),
            SetExpr::Cyl(p, b) => write!(f, "(cyl {p} {b})"),
            SetExpr::Open(d) => write!(f, "(open {d})"),
            SetExpr::Not(e) => write!(f, "(not {e})"),
            SetExpr::And(es) | SetExpr::Or(es) => {
                f.write_str(if matches!(self, SetExpr::And(_)) { "(and" } else { "(or" })?;
                for e in es {
                    write!(f, " {e}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for SetExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor::new(s);
        let e = SetExpr::parse_from(&mut cur)?;
        cur.finish()?;
        Ok(e)
    }
}

impl Serialize for SetExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SetExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
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
    fn member_examples() {
        let u = Universe::with_rank(2);
        assert!(e("(cyl {} (almost A + [] - []))").member(&u, &p("{4}")));
        assert!(!e("(cyl {} (almost A + [] - []))").member(&u, &p("{3}")));
        assert!(e("(and (up {1}) (not (up {1 2})))").member(&u, &p("{1 3}")));
        assert!(!e("(lev 1)").member(&u, &p("{1 2}")));
    }

    #[test]
    fn support_examples() {
        let codes = |s: &str| e(s).support().into_iter().collect::<Vec<_>>();
        assert_eq!(codes("(up {3 5})"), vec![3, 5]);
        assert_eq!(codes("(cyl {} (almost A + [9] - [2]))"), vec![2, 9]);
        assert_eq!(codes("(or (up {1}) (pts {2 4}))"), vec![1, 2, 4]);
    }

    #[test]
    fn canonical_text_round_trips() {
        for s in [
            "(up {1 3})",
            "(pts {2} {1 2})",
            "(pts {})",
            "(pts)",
            "(lev 1)",
            "(cyl {} (almost A + [] - []))",
            "(cyl {5} (almost CoA + [2 4] - [7]))",
            "(open (upminus {} [{1} {2}]))",
            "(open (fczero (upminus {} [{3}]) (almost A + [] - [])))",
            "(open (whole))",
            "(open (iso {4}))",
            "(not (and (up {1}) (up {2}) (up {3})))",
            "(or)",
            "(and)",
        ] {
            assert_eq!(e(s).to_string(), s);
        }
    }

    #[test]
    fn parse_errors_report_position() {
        match "(up {1} extra)".parse::<SetExpr>() {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 8),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!("(foo {1})".parse::<SetExpr>().is_err());
        assert!("(up {1}".parse::<SetExpr>().is_err());
    }

    #[test]
    fn nnf_pushes_negation_to_atoms() {
        let x = e("(not (and (up {1}) (or (lev 1) (not (up {2})))))");
        let n = x.to_nnf();
        assert!(n.is_nnf());
        assert_eq!(n.to_string(), "(or (not (up {1})) (and (not (lev 1)) (up {2})))");
    }
}
