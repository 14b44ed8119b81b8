use thiserror::Error;

use crate::point::Point;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("point {point} has rank above the bound n = {n}")]
    RankExceeded { point: Point, n: usize },

    #[error("excluded point {excluded} is not strictly above the anchor {anchor}")]
    InvalidExclusion { anchor: Point, excluded: Point },

    #[error("almost-set {0} does not differ from A by a finite set")]
    NotAlmostA(String),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("descriptor {descriptor} is not a basic open set of {topology}")]
    DescriptorMismatch { descriptor: String, topology: String },

    #[error("topology is not T1: {0} and {1} cannot be separated")]
    NotT1(Point, Point),

    #[error("the two points must be distinct, got {0} twice")]
    SamePoint(Point),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("open family does not cover the space; {0} is uncovered")]
    NotCover(Point),

    #[error("limit set is not expressible exactly in the atom algebra")]
    Inexact,

    #[error("set is not open; {0} is in the set but not in its interior")]
    NotOpen(Point),

    #[error("set is not closed; {0} is a limit point outside the set")]
    NotClosed(Point),

    #[error("family members {0} and {1} intersect at {2}")]
    NotDisjoint(usize, usize, Point),

    #[error("family is not discrete: members {0} and {1} both reach zero")]
    NotDiscrete(usize, usize),

    #[error("code {code} lies outside the window of {window} base codes")]
    SupportOverflow { code: u32, window: u32 },

    #[error("neighbourhood cannot be shrunk: {witness} lies in int(cl(U)) but not in U")]
    NotRegular { witness: Point },

    #[error("set is empty")]
    EmptySet,

    #[error("set is finite")]
    FiniteSet,

    #[error("set is not inside the top rank; {0} has lower rank")]
    NotTopRank(Point),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
