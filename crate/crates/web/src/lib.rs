//! WebAssembly bindings for the browser demo. Every export takes plain
//! strings and numbers and returns a JSON document, or throws the error
//! message as a string.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use expn_core::closure::{analyze_limits, closure, interior, LimitRule};
use expn_core::expr::SetExpr;
use expn_core::point::{Code, Point, Universe};
use expn_core::topology::{OpenDescriptor, Topology, TopologyKind};
use expn_core::witness::{self, discontinuity_pair, Payload};

/// Largest window the grid view will draw.
pub const MAX_WINDOW: u32 = 24;

#[derive(Debug, Serialize)]
pub struct Cell {
    pub point: String,
    pub i: Option<Code>,
    pub j: Option<Code>,
    pub in_set: bool,
    pub in_result: bool,
}

/// The rank ≤ 2 slice of a window: the zero, the diagonal of singletons
/// and the pairs above it.
#[derive(Debug, Serialize)]
pub struct Grid {
    pub topology: String,
    pub window: u32,
    pub set: String,
    pub result: String,
    pub exact: bool,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Serialize)]
pub struct Step {
    pub k: usize,
    pub x: String,
    pub y: String,
    pub meet: String,
    pub meet_in_w: bool,
}

#[derive(Debug, Serialize)]
pub struct Sequence {
    pub topology: String,
    pub verified: bool,
    pub support_bound: Code,
    pub w: String,
    pub anchor: String,
    pub steps: Vec<Step>,
}

pub fn topology(kind: &str, n: usize) -> Result<Topology, String> {
    let kind: TopologyKind = kind.parse().map_err(|e: expn_core::error::Error| e.to_string())?;
    let u = Universe::new(n, expn_core::point::ColorSet::even()).map_err(|e| e.to_string())?;
    Topology::new(kind, u, None).map_err(|e| e.to_string())
}

/// A point with its row and column in the grid.
type Slot = (Point, Option<Code>, Option<Code>);

fn slice(window: u32, n: usize) -> Result<Vec<Slot>, String> {
    if window == 0 || window > MAX_WINDOW {
        return Err(format!("window must be between 1 and {MAX_WINDOW}"));
    }
    let mut out = vec![(Point::zero(), None, None)];
    for i in 0..window {
        if n >= 1 {
            out.push((Point::singleton(i), Some(i), Some(i)));
        }
        if n >= 2 {
            out.extend(((i + 1)..window).map(|j| (Point::new([i, j]), Some(i), Some(j))));
        }
    }
    Ok(out)
}

fn paint(topo: &Topology, window: u32, set: &SetExpr, result: &SetExpr, exact: bool) -> Result<Grid, String> {
    let u = topo.universe();
    let cells = slice(window, topo.n())?
        .into_iter()
        .map(|(p, i, j)| Cell { in_set: set.member(u, &p), in_result: result.member(u, &p), point: p.to_string(), i, j })
        .collect();
    Ok(Grid { topology: topo.name(), window, set: set.to_string(), result: result.to_string(), exact, cells })
}

/// Applies `op` (`set`, `closure`, `interior` or `limit`) to `expr` and
/// paints the result over the window.
pub fn grid(kind: &str, n: usize, window: u32, expr: &str, op: &str) -> Result<Grid, String> {
    let topo = topology(kind, n)?;
    let s: SetExpr = expr.parse().map_err(|e: expn_core::error::Error| e.to_string())?;
    let analysis = analyze_limits(&topo, &s, LimitRule::Exact);
    let result = match op {
        "set" => s.clone(),
        "closure" => closure(&topo, &s).map_err(|e| e.to_string())?,
        "interior" => interior(&topo, &s).map_err(|e| e.to_string())?.to_nnf(),
        "limit" => analysis.limit.clone(),
        other => return Err(format!("unknown operation {other}")),
    };
    paint(&topo, window, &s, &result, analysis.exact)
}

/// The minimal basic neighbourhood of `x` that excludes the extensions of
/// `x` by each code in `avoid`, or the descriptor given in `descriptor`.
pub fn neighborhood(kind: &str, n: usize, window: u32, x: &str, avoid: &str, descriptor: &str) -> Result<Grid, String> {
    let topo = topology(kind, n)?;
    let d: OpenDescriptor = if descriptor.trim().is_empty() {
        let x: Point = x.parse().map_err(|e: expn_core::error::Error| e.to_string())?;
        topo.universe().check(&x).map_err(|e| e.to_string())?;
        let avoid = avoid
            .split([' ', ','])
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<Code>().map_err(|e| format!("bad code {t}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        topo.minimal_neighborhood(&x, &avoid)
    } else {
        descriptor.parse().map_err(|e: expn_core::error::Error| e.to_string())?
    };
    let set = d.as_set();
    paint(&topo, window, &set, &set, true)
}

/// The pairs of a verified joint-discontinuity certificate: both points of
/// each pair enter every neighbourhood of the anchor, their meets never
/// enter `w`. Short sequences only reach neighbourhoods with small support,
/// so the support bound shrinks with the depth.
pub fn joint_sequence(kind: &str, n: usize, depth: usize) -> Result<Sequence, String> {
    let topo = topology(kind, n)?;
    if depth == 0 {
        return Err("depth must be positive".into());
    }
    let support_bound = (2 * (depth as Code - 1)).min(8);
    let cert =
        witness::joint_discontinuity_certificate(&topo, depth, support_bound, 8).map_err(|e| e.to_string())?;
    let verified = cert.verifies();
    let Payload::JointDiscontinuity { anchor, w, a, b, c, .. } = &cert.payload else {
        return Err("unexpected certificate payload".into());
    };
    let u = topo.universe();
    let steps = (0..a.len())
        .map(|k| {
            let (x, y) = discontinuity_pair(anchor, a[k], b[k], c[k]);
            let meet = x.meet(&y);
            Step { k, meet_in_w: w.contains(u, &meet), x: x.to_string(), y: y.to_string(), meet: meet.to_string() }
        })
        .collect();
    Ok(Sequence { topology: topo.name(), verified, support_bound, w: w.to_string(), anchor: anchor.to_string(), steps })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string())).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = windowGrid)]
pub fn window_grid_js(kind: &str, n: usize, window: u32, expr: &str, op: &str) -> Result<String, JsValue> {
    to_js(grid(kind, n, window, expr, op))
}

#[wasm_bindgen(js_name = neighborhoodGrid)]
pub fn neighborhood_js(kind: &str, n: usize, window: u32, x: &str, avoid: &str, descriptor: &str) -> Result<String, JsValue> {
    to_js(neighborhood(kind, n, window, x, avoid, descriptor))
}

#[wasm_bindgen(js_name = jointSequence)]
pub fn joint_sequence_js(kind: &str, n: usize, depth: usize) -> Result<String, JsValue> {
    to_js(joint_sequence(kind, n, depth))
}
