//! Decidable sets of codes that differ from a named base by finitely many
//! edits.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::point::{Code, Color, Universe};
use crate::text::{write_codes, Cursor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlmostBase {
    A,
    CoA,
    All,
    None,
}

impl AlmostBase {
    fn name(self) -> &'static str {
        match self {
            AlmostBase::A => "A",
            AlmostBase::CoA => "CoA",
            AlmostBase::All => "ALL",
            AlmostBase::None => "NONE",
        }
    }

    /// Whether a code of the given colour belongs to the base.
    pub fn admits(self, color: Color) -> bool {
        match self {
            AlmostBase::A => color == Color::InA,
            AlmostBase::CoA => color == Color::NotA,
            AlmostBase::All => true,
            AlmostBase::None => false,
        }
    }
}

/// `base ∪ added \ removed`, with `added` and `removed` disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlmostSet {
    base: AlmostBase,
    added: BTreeSet<Code>,
    removed: BTreeSet<Code>,
}

impl AlmostSet {
    pub fn new(base: AlmostBase, added: BTreeSet<Code>, removed: BTreeSet<Code>) -> Result<Self> {
        if let Some(c) = added.intersection(&removed).next() {
            return Err(Error::Precondition(format!("code {c} is both added and removed")));
        }
        Ok(Self { base, added, removed })
    }

    pub fn base(base: AlmostBase) -> Self {
        Self { base, added: BTreeSet::new(), removed: BTreeSet::new() }
    }

    pub fn a() -> Self {
        Self::base(AlmostBase::A)
    }

    pub fn co_a() -> Self {
        Self::base(AlmostBase::CoA)
    }

    pub fn all() -> Self {
        Self::base(AlmostBase::All)
    }

    pub fn none() -> Self {
        Self::base(AlmostBase::None)
    }

    pub fn base_kind(&self) -> AlmostBase {
        self.base
    }

    pub fn added(&self) -> &BTreeSet<Code> {
        &self.added
    }

    pub fn removed(&self) -> &BTreeSet<Code> {
        &self.removed
    }

    pub fn contains(&self, u: &Universe, c: Code) -> bool {
        if self.added.contains(&c) {
            true
        } else if self.removed.contains(&c) {
            false
        } else {
            self.base.admits(u.color(c))
        }
    }

    /// Codes whose membership may deviate from the base colour rule.
    pub fn edits(&self) -> impl Iterator<Item = Code> + '_ {
        self.added.iter().chain(self.removed.iter()).copied()
    }

    /// Finite symmetric difference with A. A and its complement are both
    /// infinite, so only the A base qualifies.
    pub fn is_almost_a(&self) -> bool {
        self.base == AlmostBase::A
    }

    /// Union of two sets with the same base.
    pub fn union(&self, other: &AlmostSet) -> Result<AlmostSet> {
        if self.base != other.base {
            return Err(Error::Precondition(format!("cannot union {self} with {other}: bases differ")));
        }
        let added: BTreeSet<Code> = self.added.union(&other.added).copied().collect();
        let removed: BTreeSet<Code> = self.removed.intersection(&other.removed).copied().collect();
        AlmostSet::new(self.base, added, removed)
    }

    pub fn with_added(&self, c: Code) -> AlmostSet {
        let mut s = self.clone();
        s.removed.remove(&c);
        s.added.insert(c);
        s
    }

    pub fn with_removed(&self, c: Code) -> AlmostSet {
        let mut s = self.clone();
        s.added.remove(&c);
        s.removed.insert(c);
        s
    }

    pub(crate) fn parse_from(cur: &mut Cursor<'_>) -> Result<Self> {
        cur.expect('(')?;
        cur.keyword("almost")?;
        let at_base = cur.word()?;
        let base = match at_base {
            "A" => AlmostBase::A,
            "CoA" => AlmostBase::CoA,
            "ALL" => AlmostBase::All,
            "NONE" => AlmostBase::None,
            other => return cur.err(format!("unknown almost-set base '{other}'")),
        };
        cur.expect('+')?;
        let added = cur.code_set()?;
        cur.expect('-')?;
        let removed = cur.code_set()?;
        cur.expect(')')?;
        AlmostSet::new(base, added, removed)
    }
}

impl fmt::Display for AlmostSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(almost {} + ", self.base.name())?;
        write_codes(f, self.added.iter().copied())?;
        f.write_str(" - ")?;
        write_codes(f, self.removed.iter().copied())?;
        f.write_str(")")
    }
}

impl FromStr for AlmostSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor::new(s);
        let a = AlmostSet::parse_from(&mut cur)?;
        cur.finish()?;
        Ok(a)
    }
}

impl Serialize for AlmostSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AlmostSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
