//! Seeded generators for points, set expressions, descriptors, covers and
//! discrete families. Every generator is a pure function of its RNG state,
//! so a fixed seed reproduces the corpus byte for byte.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::almost::{AlmostBase, AlmostSet};
use crate::expr::SetExpr;
use crate::point::{Code, Point, Universe};
use crate::topology::{OpenDescriptor, Topology, UpMinus};
use crate::witness::Certificate;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A sorted pool of `size` distinct codes below `limit`.
pub fn code_pool(rng: &mut impl Rng, size: usize, limit: Code) -> Vec<Code> {
    let mut all: Vec<Code> = (0..limit).collect();
    all.shuffle(rng);
    let mut pool: Vec<Code> = all.into_iter().take(size).collect();
    pool.sort_unstable();
    pool
}

/// A point of rank at most `max_rank` over the pool.
pub fn point_from(rng: &mut impl Rng, pool: &[Code], max_rank: usize) -> Point {
    let k = rng.gen_range(0..=max_rank.min(pool.len()));
    Point::new(pool.choose_multiple(rng, k).copied())
}

pub fn point(rng: &mut impl Rng, u: &Universe, limit: Code) -> Point {
    let pool: Vec<Code> = (0..limit).collect();
    point_from(rng, &pool, u.n)
}

fn almost_set(rng: &mut impl Rng, pool: &[Code]) -> AlmostSet {
    let base = *[AlmostBase::A, AlmostBase::CoA, AlmostBase::All, AlmostBase::None].choose(rng).expect("nonempty");
    let mut added = BTreeSet::new();
    let mut removed = BTreeSet::new();
    for &c in pool {
        match rng.gen_range(0..6) {
            0 => {
                added.insert(c);
            }
            1 => {
                removed.insert(c);
            }
            _ => {}
        }
    }
    AlmostSet::new(base, added, removed).expect("disjoint edits")
}

fn almost_a(rng: &mut impl Rng, pool: &[Code]) -> AlmostSet {
    let mut b = AlmostSet::a();
    for &c in pool {
        match rng.gen_range(0..5) {
            0 => b = b.with_added(c),
            1 => b = b.with_removed(c),
            _ => {}
        }
    }
    b
}

/// Exclusion generators strictly above `anchor`, drawn from the pool.
pub fn exclusions(rng: &mut impl Rng, u: &Universe, anchor: &Point, pool: &[Code], max: usize) -> Vec<Point> {
    let free: Vec<Code> = pool.iter().copied().filter(|c| !anchor.contains(*c)).collect();
    if free.is_empty() || anchor.rank() >= u.n {
        return Vec::new();
    }
    let count = rng.gen_range(0..=max);
    let mut out = BTreeSet::new();
    for _ in 0..count {
        let room = u.n - anchor.rank();
        let k = rng.gen_range(1..=room.min(free.len()));
        let extra = Point::new(free.choose_multiple(rng, k).copied());
        out.insert(anchor.join(&extra));
    }
    out.into_iter().collect()
}

/// A descriptor valid as a set (not tied to a topology).
pub fn descriptor(rng: &mut impl Rng, u: &Universe, pool: &[Code]) -> OpenDescriptor {
    let anchor = point_from(rng, pool, u.n.saturating_sub(1));
    let excl = exclusions(rng, u, &anchor, pool, 3);
    let base = UpMinus::new(anchor.clone(), excl).expect("generated exclusions lie above the anchor");
    match rng.gen_range(0..6) {
        0 => OpenDescriptor::Iso(anchor),
        1 => OpenDescriptor::Whole,
        2 => OpenDescriptor::FcZero { base, b: almost_a(rng, pool) },
        _ => OpenDescriptor::UpMinus(base),
    }
}

/// A basic neighbourhood of `x` in `topo` with data from the pool.
pub fn basic_neighborhood(rng: &mut impl Rng, topo: &Topology, x: &Point, pool: &[Code]) -> OpenDescriptor {
    let u = topo.universe();
    let excl = if topo.is_t1() { exclusions(rng, u, x, pool, 3) } else { Vec::new() };
    let b = (topo.fc_anchor() == Some(x)).then(|| almost_a(rng, pool));
    topo.canonical_base(x, &excl, b.as_ref()).expect("generated data is valid")
}

pub fn zero_neighborhood(rng: &mut impl Rng, topo: &Topology, pool: &[Code]) -> OpenDescriptor {
    basic_neighborhood(rng, topo, &Point::zero(), pool)
}

fn atom(rng: &mut impl Rng, u: &Universe, pool: &[Code]) -> SetExpr {
    match rng.gen_range(0..9) {
        0 | 1 => SetExpr::up(point_from(rng, pool, u.n)),
        2 => {
            let k = rng.gen_range(0..=3);
            SetExpr::pts((0..k).map(|_| point_from(rng, pool, u.n)).collect::<BTreeSet<_>>())
        }
        3 => SetExpr::lev(rng.gen_range(0..u.n)),
        4 | 5 => SetExpr::cyl(point_from(rng, pool, u.n.saturating_sub(1)), almost_set(rng, pool)),
        _ => SetExpr::open(descriptor(rng, u, pool)),
    }
}

fn expr_at(rng: &mut impl Rng, u: &Universe, pool: &[Code], depth: usize) -> SetExpr {
    if depth == 0 || rng.gen_bool(0.35) {
        return atom(rng, u, pool);
    }
    match rng.gen_range(0..5) {
        0 => SetExpr::not(expr_at(rng, u, pool, depth - 1)),
        1 | 2 => {
            let k = rng.gen_range(2..=3);
            SetExpr::and((0..k).map(|_| expr_at(rng, u, pool, depth - 1)).collect::<Vec<_>>())
        }
        _ => {
            let k = rng.gen_range(2..=3);
            SetExpr::or((0..k).map(|_| expr_at(rng, u, pool, depth - 1)).collect::<Vec<_>>())
        }
    }
}

/// A random expression whose support has at most `max_support` codes, all
/// below `limit`.
pub fn expr(rng: &mut impl Rng, u: &Universe, max_support: usize, limit: Code) -> SetExpr {
    let size = rng.gen_range(1..=max_support);
    let pool = code_pool(rng, size, limit);
    expr_at(rng, u, &pool, 3)
}

/// A descriptor cover of the whole space under `tau_c`, built top-down from
/// a zero neighbourhood and padded with redundant members, then shuffled.
pub fn tau_c_cover(rng: &mut impl Rng, u: &Universe, pool: &[Code]) -> Vec<OpenDescriptor> {
    let mut cover = Vec::new();
    let mut pending = vec![Point::zero()];
    let mut seen = BTreeSet::new();
    while let Some(x) = pending.pop() {
        if !seen.insert(x.clone()) {
            continue;
        }
        let excl = exclusions(rng, u, &x, pool, 2);
        pending.extend(excl.iter().cloned());
        cover.push(OpenDescriptor::UpMinus(UpMinus::new(x, excl).expect("valid exclusions")));
    }
    for _ in 0..rng.gen_range(0..=3) {
        let x = point_from(rng, pool, u.n);
        let excl = exclusions(rng, u, &x, pool, 2);
        cover.push(OpenDescriptor::UpMinus(UpMinus::new(x, excl).expect("valid exclusions")));
    }
    let mut seen = BTreeSet::new();
    cover.retain(|d| seen.insert(d.to_string()));
    cover.shuffle(rng);
    cover
}

/// The closure of the singleton image of A minus some codes: closed in
/// `tau_c` at n = 1 and infinite.
pub fn closed_pi_a(removed: impl IntoIterator<Item = Code>) -> SetExpr {
    let mut b = AlmostSet::a();
    for c in removed {
        b = b.with_removed(c);
    }
    SetExpr::or([SetExpr::cyl(Point::zero(), b), SetExpr::point(Point::zero())])
}

/// A pairwise disjoint family of closed sets in rank one: a few finite sets
/// of singletons and, when `with_infinite`, one closed copy of the singleton
/// image of A.
pub fn discrete_family(rng: &mut impl Rng, with_infinite: bool) -> Vec<SetExpr> {
    let pool = code_pool(rng, 8, 16);
    let mut family = Vec::new();
    let mut used = Vec::new();
    let mut codes = pool.clone();
    codes.shuffle(rng);
    let members = rng.gen_range(1..=3);
    for chunk in codes.chunks(3).take(members) {
        let k = rng.gen_range(1..=chunk.len());
        let pts: Vec<Point> = chunk[..k].iter().map(|&c| Point::singleton(c)).collect();
        used.extend_from_slice(&chunk[..k]);
        family.push(SetExpr::pts(pts));
    }
    if with_infinite {
        let at = rng.gen_range(0..=family.len());
        family.insert(at, closed_pi_a(used));
    }
    family
}

/// Every one-code mutation of a certificate's payload, as JSON text: each
/// numeric code (inside a canonical text form or as a bare number) is
/// replaced in turn by its successor.
pub fn one_code_mutations(cert: &Certificate) -> Vec<String> {
    let mut value = serde_json::to_value(cert).expect("certificates serialise");
    let mut out = Vec::new();
    let mut paths = Vec::new();
    collect_leaves(&value["payload"], &mut Vec::new(), &mut paths);
    for path in paths {
        let original = lookup(&value["payload"], &path).clone();
        let variants: Vec<serde_json::Value> = match &original {
            serde_json::Value::String(s) => bump_each_number(s).into_iter().map(serde_json::Value::String).collect(),
            serde_json::Value::Number(n) => n.as_u64().map(|x| serde_json::Value::from(x + 1)).into_iter().collect(),
            _ => Vec::new(),
        };
        for v in variants {
            *lookup_mut(&mut value["payload"], &path) = v;
            out.push(value.to_string());
        }
        *lookup_mut(&mut value["payload"], &path) = original;
    }
    out
}

#[derive(Clone)]
enum Step {
    Key(String),
    Index(usize),
}

fn collect_leaves(v: &serde_json::Value, prefix: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
    match v {
        serde_json::Value::Object(map) => {
            for (k, child) in map {
                if k == "kind" {
                    continue;
                }
                prefix.push(Step::Key(k.clone()));
                collect_leaves(child, prefix, out);
                prefix.pop();
            }
        }
        serde_json::Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                prefix.push(Step::Index(i));
                collect_leaves(child, prefix, out);
                prefix.pop();
            }
        }
        serde_json::Value::String(_) | serde_json::Value::Number(_) => out.push(prefix.clone()),
        _ => {}
    }
}

fn lookup<'a>(v: &'a serde_json::Value, path: &[Step]) -> &'a serde_json::Value {
    path.iter().fold(v, |v, s| match s {
        Step::Key(k) => &v[k.as_str()],
        Step::Index(i) => &v[*i],
    })
}

fn lookup_mut<'a>(v: &'a mut serde_json::Value, path: &[Step]) -> &'a mut serde_json::Value {
    path.iter().fold(v, |v, s| match s {
        Step::Key(k) => &mut v[k.as_str()],
        Step::Index(i) => &mut v[*i],
    })
}

/// One string per maximal digit run, with that run incremented.
fn bump_each_number(s: &str) -> Vec<String> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: u64 = s[start..i].parse().expect("digit run");
            out.push(format!("{}{}{}", &s[..start], n + 1, &s[i..]));
        } else {
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let u = Universe::with_rank(2);
        let a: Vec<String> = (0..5).map(|_| ()).scan(rng(7), |r, _| Some(expr(r, &u, 6, 16).to_string())).collect();
        let b: Vec<String> = (0..5).map(|_| ()).scan(rng(7), |r, _| Some(expr(r, &u, 6, 16).to_string())).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn digit_runs_are_bumped_one_at_a_time() {
        assert_eq!(bump_each_number("{1 19}"), vec!["{2 19}".to_string(), "{1 20}".to_string()]);
        assert!(bump_each_number("(whole)").is_empty());
    }

    #[test]
    fn expressions_respect_support_bounds() {
        let u = Universe::with_rank(3);
        let mut r = rng(1);
        for _ in 0..200 {
            let s = expr(&mut r, &u, 6, 16);
            let sup = s.support();
            assert!(sup.len() <= 6 && sup.iter().all(|&c| c < 16), "{s}");
        }
    }
}
