//! Property suites over one topology, assembled into a deterministic JSON
//! report.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::almost::{AlmostBase, AlmostSet};
use crate::closure::{closure, interior, is_closed, is_open, limit_points, regular_open_defect};
use crate::corpus;
use crate::error::{Error, Result};
use crate::expr::SetExpr;
use crate::oracle::{compare, oracle_closure, oracle_interior, oracle_limit_points, padding_stable, Window};
use crate::point::{Code, ColorSet, Point, Universe};
use crate::topology::{check_base_axioms, Topology, TopologyKind};
use crate::witness::{self, Certificate};

pub const REPORT_SCHEMA: &str = "expn-report/1";

/// Selectable suite groups, in report order.
pub const SUITES: [&str; 9] =
    ["laws", "axioms", "points", "continuity", "compactness", "fc", "zero", "collectionwise", "oracle"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub topology: TopologyKind,
    pub n: usize,
    pub a: ColorSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Point>,
    pub window: u32,
    pub pads: (usize, usize),
    pub depth: usize,
    pub seed: u64,
    pub samples: usize,
    /// Suite groups to run; empty means all of [`SUITES`].
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            topology: TopologyKind::TauC,
            n: 2,
            a: ColorSet::even(),
            anchor: None,
            window: 16,
            pads: (1, 1),
            depth: 25,
            seed: corpus::DEFAULT_SEED,
            samples: 50,
            suites: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn build_topology(&self) -> Result<Topology> {
        let u = Universe::new(self.n, self.a.clone())?;
        let topo = Topology::new(self.topology, u, self.anchor.clone())?;
        if topo.support().iter().any(|&c| c >= self.window) {
            return Err(Error::InvalidTopology(format!("anchor codes must lie below the window size {}", self.window)));
        }
        Ok(topo)
    }

    pub fn validate(&self) -> Result<Topology> {
        if let Some(bad) = self.suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
            return Err(Error::InvalidTopology(format!("unknown suite {bad}; expected one of {}", SUITES.join(", "))));
        }
        self.build_topology()
    }

    fn wants(&self, suite: &str) -> bool {
        self.suites.is_empty() || self.suites.iter().any(|s| s == suite)
    }

    pub fn window(&self) -> Window {
        Window::new(self.window, self.pads.0, self.pads.1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub verdict: Verdict,
    pub cases: usize,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<Certificate>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub config: RunConfig,
    pub topology: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }
}

struct Check {
    name: &'static str,
    cases: usize,
    failures: Vec<String>,
    certificates: Vec<Certificate>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Self { name, cases: 0, failures: Vec::new(), certificates: Vec::new() }
    }

    fn case(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    /// Records a certificate outcome; keeps the first verifying one.
    fn cert(&mut self, label: impl FnOnce() -> String, c: Result<Certificate>) {
        self.cases += 1;
        match c {
            Ok(c) => match c.verify() {
                Ok(()) => {
                    if self.certificates.is_empty() {
                        self.certificates.push(c);
                    }
                }
                Err(r) => self.failures.push(format!("{}: {r}", label())),
            },
            Err(e) => self.failures.push(format!("{}: {e}", label())),
        }
    }

    fn finish(self) -> CheckResult {
        let verdict = if self.failures.is_empty() { Verdict::Pass } else { Verdict::Fail };
        let detail = match self.failures.first() {
            None => format!("{} cases", self.cases),
            Some(first) => format!("{} of {} cases failed; first: {first}", self.failures.len(), self.cases),
        };
        CheckResult { name: self.name.into(), verdict, cases: self.cases, detail, certificates: self.certificates }
    }
}

fn skip(name: &str, why: &str) -> CheckResult {
    CheckResult { name: name.into(), verdict: Verdict::Skip, cases: 0, detail: why.into(), certificates: Vec::new() }
}

fn base_codes(topo: &Topology, count: Code) -> Vec<Code> {
    let mut codes: Vec<Code> = (0..count).collect();
    codes.extend(topo.support());
    codes.sort_unstable();
    codes.dedup();
    codes
}

fn semilattice_laws(topo: &Topology) -> CheckResult {
    let mut check = Check::new("semilattice_laws");
    let pts = topo.universe().points_over(&base_codes(topo, 6));
    for a in &pts {
        check.case(a.meet(a) == *a, || format!("idempotence at {a}"));
        for b in &pts {
            check.case(a.meet(b) == b.meet(a), || format!("commutativity at {a}, {b}"));
            check.case(a.leq(b) == (a.meet(b) == *a), || format!("order at {a}, {b}"));
            for c in pts.iter().step_by(7) {
                check.case(a.meet(&b.meet(c)) == a.meet(b).meet(c), || format!("associativity at {a}, {b}, {c}"));
            }
        }
    }
    check.finish()
}

fn base_axioms(topo: &Topology) -> CheckResult {
    let sample = topo.universe().points_over(&base_codes(topo, 6));
    let report = check_base_axioms(topo, &sample, 3);
    let mut detail = format!("{} points, {} neighbourhoods, {} checks", report.points, report.neighborhoods, report.checks);
    if let Some((p, q)) = &report.non_t1 {
        detail.push_str(&format!("; not T1: {p} and {q} are inseparable"));
    }
    let ok = report.failures.is_empty() && (report.non_t1.is_some() != topo.is_t1());
    if let Some(f) = report.failures.first() {
        detail = format!("{} failures; first: {} at {}: {}", report.failures.len(), f.axiom, f.point, f.detail);
    }
    CheckResult {
        name: "base_axioms".into(),
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        cases: report.checks,
        detail,
        certificates: Vec::new(),
    }
}

fn point_structure(topo: &Topology, cfg: &RunConfig) -> Vec<CheckResult> {
    if !topo.is_t1() {
        return vec![skip("point_structure", "needs a T1 topology")];
    }
    let u = topo.universe();
    let mut r = corpus::rng(cfg.seed ^ 0x01);
    let mut nbhd = Check::new("neighbourhood_in_upset");
    let mut clopen = Check::new("upsets_clopen");
    let mut sep = Check::new("separator_function");
    let mut iso = Check::new("isolated_point");
    for _ in 0..cfg.samples {
        let x = corpus::point(&mut r, u, cfg.window);
        nbhd.cert(|| format!("at {x}"), witness::neighborhood_in_upset(topo, &x));
        let up = SetExpr::up(x.clone());
        let ok = is_closed(topo, &up).unwrap_or(false) && is_open(topo, &up).unwrap_or(false);
        clopen.case(ok, || format!("up {x} is not clopen"));
        let y = corpus::point(&mut r, u, cfg.window);
        if x != y {
            sep.cert(|| format!("{x} / {y}"), witness::separator_function(topo, &x, &y));
        }
        let s = corpus::expr(&mut r, u, 6, cfg.window);
        if crate::pattern::find_member(u, &s).is_some() {
            iso.cert(|| format!("in {s}"), witness::isolated_point_of(topo, &s));
        }
    }
    vec![nbhd.finish(), clopen.finish(), sep.finish(), iso.finish()]
}

fn continuity(topo: &Topology, cfg: &RunConfig) -> CheckResult {
    let u = topo.universe();
    let mut r = corpus::rng(cfg.seed ^ 0x02);
    let mut check = Check::new("separate_continuity");
    let mut tries = 0;
    while check.cases < cfg.samples && tries < cfg.samples * 20 {
        tries += 1;
        let pool = corpus::code_pool(&mut r, 6, cfg.window.min(16));
        let a = corpus::point_from(&mut r, &pool, u.n);
        let b = corpus::point_from(&mut r, &pool, u.n);
        let ab = a.meet(&b);
        let w = corpus::basic_neighborhood(&mut r, topo, &ab, &pool);
        check.cert(|| format!("a = {a}, b = {b}, W = {w}"), witness::separate_continuity_modulus(topo, &a, &b, &w));
    }
    check.finish()
}

fn compactness(topo: &Topology, cfg: &RunConfig) -> Vec<CheckResult> {
    if topo.kind() != TopologyKind::TauC {
        return vec![skip("finite_subcover", "only the compact family"), skip("clopen_base", "only the compact family")];
    }
    let u = topo.universe();
    let mut r = corpus::rng(cfg.seed ^ 0x03);
    let mut cover = Check::new("finite_subcover");
    let mut clopen = Check::new("clopen_base");
    for _ in 0..cfg.samples {
        let pool = corpus::code_pool(&mut r, 6, cfg.window.min(16));
        let c = corpus::tau_c_cover(&mut r, u, &pool);
        cover.cert(|| format!("cover of {} members", c.len()), witness::extract_finite_subcover(topo, &c));
        let x = corpus::point_from(&mut r, &pool, u.n);
        let d = corpus::basic_neighborhood(&mut r, topo, &x, &pool);
        let defect = regular_open_defect(topo, &d.as_set());
        clopen.case(matches!(defect, Ok(None)), || format!("{d}: {defect:?}"));
    }
    vec![cover.finish(), clopen.finish()]
}

fn fc_witnesses(topo: &Topology, cfg: &RunConfig) -> Vec<CheckResult> {
    let Some(anchor) = topo.fc_anchor().cloned() else {
        return vec![skip("colour_witnesses", "needs a colour-sensitive anchor")];
    };
    let u = topo.universe();
    let mut joint = Check::new("joint_discontinuity");
    joint.cert(|| format!("depth {}", cfg.depth), witness::joint_discontinuity_certificate(topo, cfg.depth, 8, 8));
    let mut cd = Check::new("closed_discrete");
    cd.cert(|| "transported image of A".into(), witness::closed_discrete_witness(topo));
    let mut acc = Check::new("accumulation_point");
    let mut r = corpus::rng(cfg.seed ^ 0x04);
    let free: Vec<Code> = (0..cfg.window).filter(|c| !anchor.contains(*c)).collect();
    let bases = [AlmostBase::A, AlmostBase::CoA, AlmostBase::All];
    for _ in 0..cfg.samples {
        let f = anchor.with(*free.choose(&mut r).expect("window has free codes"));
        let s = SetExpr::cyl(f, AlmostSet::base(*bases.choose(&mut r).expect("nonempty")));
        acc.cert(|| format!("{s}"), witness::accumulation_point(topo, &s));
    }
    let mut defect = Check::new("regular_open_defect");
    for _ in 0..cfg.samples {
        let mut b = AlmostSet::a();
        for &c in free.choose_multiple(&mut r, 2) {
            b = if u.in_a(c) { b.with_removed(c) } else { b.with_added(c) };
        }
        let res = topo.canonical_base(&anchor, &[], Some(&b)).and_then(|d| regular_open_defect(topo, &d.as_set()));
        defect.case(matches!(res, Ok(Some(_))), || format!("B = {b}: {res:?}"));
    }
    vec![joint.finish(), cd.finish(), acc.finish(), defect.finish()]
}

fn zero_neighbourhoods(topo: &Topology, cfg: &RunConfig) -> Vec<CheckResult> {
    if !topo.is_t1() {
        return vec![skip("regularity", "needs a T1 topology"), skip("top_rank_cover", "needs a T1 topology")];
    }
    let mut r = corpus::rng(cfg.seed ^ 0x05);
    let mut reg = Check::new("regularity");
    let mut top = Check::new("top_rank_cover");
    let zero = Point::zero();
    let colour_at_zero = topo.fc_anchor() == Some(&zero);
    for _ in 0..cfg.samples {
        let pool = corpus::code_pool(&mut r, 6, cfg.window.min(16));
        let d = corpus::zero_neighborhood(&mut r, topo, &pool);
        if colour_at_zero {
            let res = witness::regularity_shrink(topo, &d);
            reg.case(matches!(res, Err(Error::NotRegular { .. })), || format!("{d}: expected a defect, got {res:?}"));
        } else {
            reg.cert(|| format!("{d}"), witness::regularity_shrink(topo, &d));
        }
        top.cert(|| format!("{d}"), witness::top_rank_cover(topo, &d));
    }
    vec![reg.finish(), top.finish()]
}

fn collectionwise(topo: &Topology, cfg: &RunConfig) -> CheckResult {
    if topo.kind() != TopologyKind::TauC || topo.n() != 1 {
        return skip("collectionwise_expansion", "defined for tau_c with n = 1");
    }
    let mut r = corpus::rng(cfg.seed ^ 0x06);
    let mut check = Check::new("collectionwise_expansion");
    for i in 0..cfg.samples {
        let family = corpus::discrete_family(&mut r, i % 5 != 4);
        check.cert(|| format!("family of {}", family.len()), witness::collectionwise_expand(topo, &family));
    }
    let pair = [
        SetExpr::cyl(Point::zero(), AlmostSet::a()),
        SetExpr::cyl(Point::zero(), AlmostSet::co_a()),
    ];
    let rejected = matches!(witness::collectionwise_expand(topo, &pair), Err(Error::NotDiscrete(0, 1)));
    check.case(rejected, || "A and its complement were not rejected".into());
    check.finish()
}

fn oracle(topo: &Topology, cfg: &RunConfig) -> CheckResult {
    let u = topo.universe();
    let w = cfg.window();
    let mut r = corpus::rng(cfg.seed ^ 0x07);
    let mut check = Check::new("oracle_agreement");
    for _ in 0..cfg.samples {
        let s = corpus::expr(&mut r, u, 6, cfg.window);
        let pairs = [
            (limit_points(topo, &s), oracle_limit_points(topo, &s, w), "limit"),
            (closure(topo, &s), oracle_closure(topo, &s, w), "closure"),
            (interior(topo, &s), oracle_interior(topo, &s, w), "interior"),
        ];
        for (sym, orc, what) in pairs {
            match (sym, orc) {
                (Ok(sym), Ok(orc)) => {
                    let a = compare(u, &sym, &orc, w);
                    check.case(a.agrees(), || format!("{what} of {s}: {a:?}"));
                }
                (a, b) => check.case(false, || format!("{what} of {s}: {a:?} / {b:?}")),
            }
        }
        let large = Window::new(w.m, w.pad_a + 2, w.pad_n + 2);
        let stable = padding_stable(topo, &s, w, large);
        check.case(matches!(stable, Ok(true)), || format!("padding changes the limit set of {s}"));
    }
    check.finish()
}

/// Runs every suite that applies to the configured topology.
pub fn run_suite(cfg: &RunConfig) -> Result<Report> {
    let topo = cfg.validate()?;
    let mut checks = Vec::new();
    for suite in SUITES.iter().filter(|s| cfg.wants(s)) {
        match *suite {
            "laws" => checks.push(semilattice_laws(&topo)),
            "axioms" => checks.push(base_axioms(&topo)),
            "points" => checks.extend(point_structure(&topo, cfg)),
            "continuity" => checks.push(continuity(&topo, cfg)),
            "compactness" => checks.extend(compactness(&topo, cfg)),
            "fc" => checks.extend(fc_witnesses(&topo, cfg)),
            "zero" => checks.extend(zero_neighbourhoods(&topo, cfg)),
            "collectionwise" => checks.push(collectionwise(&topo, cfg)),
            _ => checks.push(oracle(&topo, cfg)),
        }
    }
    let passed = checks.iter().all(|c| c.verdict != Verdict::Fail);
    Ok(Report { schema: REPORT_SCHEMA.into(), config: cfg.clone(), topology: topo.name(), passed, checks })
}
