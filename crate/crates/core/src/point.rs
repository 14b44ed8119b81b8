//! Points of the semilattice: finite sets of at most `n` index codes under
//! intersection, together with the universe configuration they live in.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::text::{write_codes, Cursor};

/// An index code standing for one element of the countable universe.
pub type Code = u32;

/// A finite subset of the index universe, kept sorted and duplicate free.
///
/// The empty point is the semilattice zero. Whether a point respects the
/// rank bound is a property of the [`Universe`] it is used in, checked by
/// [`Universe::check`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Point(Vec<Code>);

impl Point {
    pub fn zero() -> Self {
        Point(Vec::new())
    }

    /// Builds a point from arbitrary codes, sorting and deduplicating them.
    pub fn new(codes: impl IntoIterator<Item = Code>) -> Self {
        let mut v: Vec<Code> = codes.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Point(v)
    }

    pub(crate) fn from_sorted_unchecked(v: Vec<Code>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Point(v)
    }

    pub fn singleton(c: Code) -> Self {
        Point(vec![c])
    }

    pub fn codes(&self) -> &[Code] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: Code) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    /// The semilattice operation: set intersection.
    pub fn meet(&self, other: &Point) -> Point {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(self.0.len().min(other.0.len()));
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        Point(out)
    }

    /// Set union. Not a semilattice operation of the space; used to name the
    /// least common upper bound when it exists.
    pub fn join(&self, other: &Point) -> Point {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Point::new(v)
    }

    /// Natural partial order: `self ≤ other` iff `self · other = self`.
    pub fn leq(&self, other: &Point) -> bool {
        let mut j = 0;
        for &c in &self.0 {
            while j < other.0.len() && other.0[j] < c {
                j += 1;
            }
            if j == other.0.len() || other.0[j] != c {
                return false;
            }
            j += 1;
        }
        true
    }

    pub fn lt(&self, other: &Point) -> bool {
        self.rank() < other.rank() && self.leq(other)
    }

    pub fn with(&self, c: Code) -> Point {
        let mut v = self.0.clone();
        v.push(c);
        Point::new(v)
    }

    /// Codes of `self` that are not in `other`.
    pub fn minus(&self, other: &Point) -> Vec<Code> {
        self.0.iter().copied().filter(|c| !other.contains(*c)).collect()
    }

    pub fn max_code(&self) -> Option<Code> {
        self.0.last().copied()
    }

    /// All subsets of this point, smallest rank first.
    pub fn subsets(&self) -> Vec<Point> {
        let k = self.0.len();
        let mut out: Vec<Point> = (0u32..(1 << k))
            .map(|mask| Point(self.0.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &c)| c).collect()))
            .collect();
        out.sort();
        out
    }
}

/// Rank first, then lexicographic: zero is the least point.
impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor::new(s);
        let p = cur.point()?;
        cur.finish()?;
        Ok(p)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

/// Colour of a code with respect to the distinguished set A.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    InA,
    NotA,
}

/// The distinguished infinite, co-infinite set A: a parity class with
/// finitely many codes added or removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColorSet {
    parity: Parity,
    added: BTreeSet<Code>,
    removed: BTreeSet<Code>,
}

impl ColorSet {
    pub fn new(parity: Parity, added: BTreeSet<Code>, removed: BTreeSet<Code>) -> Result<Self> {
        let matches = |c: &Code| c.is_multiple_of(2) == (parity == Parity::Even);
        if let Some(c) = added.iter().find(|c| matches(c)) {
            return Err(Error::Precondition(format!("code {c} is already in the {parity:?} base")));
        }
        if let Some(c) = removed.iter().find(|c| !matches(c)) {
            return Err(Error::Precondition(format!("code {c} is not in the {parity:?} base")));
        }
        Ok(Self { parity, added, removed })
    }

    pub fn even() -> Self {
        Self { parity: Parity::Even, added: BTreeSet::new(), removed: BTreeSet::new() }
    }

    pub fn odd() -> Self {
        Self { parity: Parity::Odd, added: BTreeSet::new(), removed: BTreeSet::new() }
    }

    pub fn contains(&self, c: Code) -> bool {
        if self.added.contains(&c) {
            return true;
        }
        if self.removed.contains(&c) {
            return false;
        }
        c.is_multiple_of(2) == (self.parity == Parity::Even)
    }

    pub fn color(&self, c: Code) -> Color {
        if self.contains(c) {
            Color::InA
        } else {
            Color::NotA
        }
    }

    /// The first `count` codes of `color` strictly above `floor` (or from 0
    /// when `floor` is `None`) that are not in `avoid`.
    pub fn fresh(&self, color: Color, floor: Option<Code>, count: usize, avoid: &[Code]) -> Vec<Code> {
        let start = floor.map_or(0, |f| f + 1);
        (start..)
            .filter(|&c| self.color(c) == color && !avoid.contains(&c))
            .take(count)
            .collect()
    }
}

impl fmt::Display for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.parity {
            Parity::Even => "even",
            Parity::Odd => "odd",
        };
        if self.added.is_empty() && self.removed.is_empty() {
            return f.write_str(name);
        }
        write!(f, "(almost {name} + ")?;
        write_codes(f, self.added.iter().copied())?;
        f.write_str(" - ")?;
        write_codes(f, self.removed.iter().copied())?;
        f.write_str(")")
    }
}

impl FromStr for ColorSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor::new(s);
        let parse_parity = |cur: &mut Cursor<'_>| -> Result<Parity> {
            match cur.word()? {
                "even" => Ok(Parity::Even),
                "odd" => Ok(Parity::Odd),
                other => cur.err(format!("expected 'even' or 'odd', found '{other}'")),
            }
        };
        let set = if cur.eat('(') {
            cur.keyword("almost")?;
            let parity = parse_parity(&mut cur)?;
            cur.expect('+')?;
            let added = cur.code_set()?;
            cur.expect('-')?;
            let removed = cur.code_set()?;
            cur.expect(')')?;
            ColorSet::new(parity, added, removed)?
        } else {
            let parity = parse_parity(&mut cur)?;
            ColorSet { parity, added: BTreeSet::new(), removed: BTreeSet::new() }
        };
        cur.finish()?;
        Ok(set)
    }
}

impl Serialize for ColorSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ColorSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Global configuration: the rank bound `n` and the distinguished set A.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Universe {
    pub n: usize,
    pub a: ColorSet,
}

impl Universe {
    pub fn new(n: usize, a: ColorSet) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("rank bound n must be positive".into()));
        }
        Ok(Self { n, a })
    }

    /// Rank bound `n` with A = even codes.
    pub fn with_rank(n: usize) -> Self {
        Self::new(n, ColorSet::even()).expect("n must be positive")
    }

    pub fn check(&self, p: &Point) -> Result<()> {
        if p.rank() > self.n {
            Err(Error::RankExceeded { point: p.clone(), n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn point(&self, codes: impl IntoIterator<Item = Code>) -> Result<Point> {
        let p = Point::new(codes);
        self.check(&p)?;
        Ok(p)
    }

    pub fn in_a(&self, c: Code) -> bool {
        self.a.contains(c)
    }

    pub fn color(&self, c: Code) -> Color {
        self.a.color(c)
    }

    /// Every point of rank at most `n` over the given codes.
    pub fn points_over(&self, codes: &[Code]) -> Vec<Point> {
        let mut sorted = codes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut out = vec![Point::zero()];
        let mut frontier = vec![Point::zero()];
        for _ in 0..self.n {
            let mut next = Vec::new();
            for p in &frontier {
                let floor = p.max_code();
                for &c in sorted.iter().filter(|&&c| floor.is_none_or(|m| c > m)) {
                    next.push(p.with(c));
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(codes: &[Code]) -> Point {
        Point::new(codes.iter().copied())
    }

    #[test]
    fn meet_examples() {
        assert_eq!(p(&[1, 3]).meet(&p(&[3, 5])), p(&[3]));
        assert_eq!(p(&[1, 3]).meet(&Point::zero()), Point::zero());
        assert_eq!(p(&[2, 4]).meet(&p(&[2, 4])), p(&[2, 4]));
    }

    #[test]
    fn leq_examples() {
        assert!(p(&[1]).leq(&p(&[1, 2])));
        assert!(!p(&[1, 2]).leq(&p(&[1])));
        assert!(Point::zero().leq(&p(&[4, 9])));
    }

    #[test]
    fn rank_examples() {
        let u = Universe::with_rank(3);
        assert_eq!(Point::zero().rank(), 0);
        assert_eq!(p(&[7]).rank(), 1);
        assert_eq!(u.point([1, 4, 9]).unwrap().rank(), 3);
        assert!(u.point([1, 2, 3, 4]).is_err());
    }

    #[test]
    fn point_text_forms() {
        assert_eq!("{}".parse::<Point>().unwrap(), Point::zero());
        assert_eq!("{1 3}".parse::<Point>().unwrap(), p(&[1, 3]));
        assert_eq!("{1,3}".parse::<Point>().unwrap(), p(&[1, 3]));
        assert_eq!(p(&[1, 3]).to_string(), "{1 3}");
        assert!("{3 1}".parse::<Point>().is_err());
        assert!("{1 1}".parse::<Point>().is_err());
    }

    #[test]
    fn color_sets() {
        let a: ColorSet = "(almost even + [3] - [4])".parse().unwrap();
        assert!(a.contains(3) && !a.contains(4) && a.contains(6) && !a.contains(5));
        assert_eq!(a.to_string(), "(almost even + [3] - [4])");
        assert!("(almost even + [2] - [])".parse::<ColorSet>().is_err());
        assert_eq!(ColorSet::even().fresh(Color::InA, Some(3), 2, &[]), vec![4, 6]);
        assert_eq!(ColorSet::even().fresh(Color::NotA, None, 2, &[1]), vec![3, 5]);
    }

    #[test]
    fn window_point_count() {
        // 1 + 8 + 28 + 56
        assert_eq!(Universe::with_rank(3).points_over(&(0..8).collect::<Vec<_>>()).len(), 93);
    }
}
