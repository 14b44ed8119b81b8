//! Acceptance run: one PASS/FAIL line per criterion. Built without the
//! libtest harness so the lines always print.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use expn_core::almost::{AlmostBase, AlmostSet};
use expn_core::closure::{
    closure, closure_with, interior, is_closed, is_open, limit_points, regular_open_defect, LimitRule,
};
use expn_core::corpus::{self, one_code_mutations};
use expn_core::error::Error;
use expn_core::expr::SetExpr;
use expn_core::oracle::{compare, oracle_closure, oracle_interior, oracle_limit_points, padding_stable, Window};
use expn_core::pattern::{is_empty, subset_of};
use expn_core::point::{Code, Point, Universe};
use expn_core::topology::{check_base_axioms, OpenDescriptor, Topology};
use expn_core::witness::{self, derive_script, Certificate, Payload};

const LAW_BUDGET: Duration = Duration::from_secs(10);
const ORACLE_BUDGET: Duration = Duration::from_secs(300);
const SEED: u64 = corpus::DEFAULT_SEED;

type Criterion = (&'static str, fn() -> Outcome);

/// Outcome of one criterion: failures (empty means pass) and a summary.
struct Outcome {
    failures: Vec<String>,
    summary: String,
}

impl Outcome {
    fn new() -> Self {
        Self { failures: Vec::new(), summary: String::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn cert(&mut self, label: impl FnOnce() -> String, c: Result<Certificate, Error>) -> Option<Certificate> {
        match c {
            Ok(c) => match c.verify() {
                Ok(()) => Some(c),
                Err(r) => {
                    self.failures.push(format!("{}: {r}", label()));
                    None
                }
            },
            Err(e) => {
                self.failures.push(format!("{}: {e}", label()));
                None
            }
        }
    }
}

fn u(n: usize) -> Universe {
    Universe::with_rank(n)
}

fn tau_c(n: usize) -> Topology {
    Topology::tau_c(u(n))
}

fn tau_fc2() -> Topology {
    Topology::tau_fc2(u(2)).unwrap()
}

fn tau_fc3() -> Topology {
    Topology::tau_fcn(u(3), None).unwrap()
}

fn window_codes() -> Vec<Code> {
    (0..8).collect()
}

fn semilattice_laws() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let pts = u(3).points_over(&window_codes());
    let mut triples = 0usize;
    for a in &pts {
        o.check(a.meet(a) == *a, || format!("idempotence at {a}"));
        for b in &pts {
            o.check(a.meet(b) == b.meet(a), || format!("commutativity at {a} {b}"));
            let subset = a.codes().iter().all(|c| b.contains(*c));
            o.check(a.leq(b) == subset && subset == (a.meet(b) == *a), || format!("order at {a} {b}"));
            for c in &pts {
                triples += 1;
                if a.meet(&b.meet(c)) != a.meet(b).meet(c) {
                    o.failures.push(format!("associativity at {a} {b} {c}"));
                }
            }
        }
    }
    let took = start.elapsed();
    o.check(took < LAW_BUDGET, || format!("took {took:?}, budget {LAW_BUDGET:?}"));
    o.summary = format!("{} points, {triples} triples, {took:.2?}", pts.len());
    o
}

fn base_axioms() -> Outcome {
    let mut o = Outcome::new();
    let mut lines = Vec::new();
    for topo in [tau_c(1), tau_c(2), tau_c(3), tau_fc2()] {
        let sample = topo.universe().points_over(&window_codes());
        let r = check_base_axioms(&topo, &sample, 4);
        o.check(r.passes(), || format!("{}: {:?} {:?}", topo.name(), r.failures.first(), r.non_t1));
        lines.push(format!("{} {} checks", topo.name(), r.checks));
    }
    let t0 = Topology::tau_0(u(2));
    let r = check_base_axioms(&t0, &t0.universe().points_over(&window_codes()), 4);
    o.check(r.passes_bp1_to_bp3(), || format!("tau_0 BP1-3: {:?}", r.failures.first()));
    o.check(r.non_t1.as_ref().is_some_and(|(p, _)| p.is_zero()), || "tau_0 not flagged non-T1".into());
    lines.push(format!("tau_0 non-T1 witness {:?}", r.non_t1));
    o.summary = lines.join("; ");
    o
}

fn point_structure() -> Outcome {
    let mut o = Outcome::new();
    let mut counts = [0usize; 4];
    for topo in [tau_c(2), tau_fc2(), tau_fc3()] {
        let uu = topo.universe().clone();
        let mut r = corpus::rng(SEED ^ 3);
        for i in 0..200 {
            let x = corpus::point(&mut r, &uu, 16);
            if o.cert(|| format!("{} nbhd at {x}", topo.name()), witness::neighborhood_in_upset(&topo, &x)).is_some() {
                counts[0] += 1;
            }
            let up = SetExpr::up(x.clone());
            let clopen = is_closed(&topo, &up).unwrap_or(false) && is_open(&topo, &up).unwrap_or(false);
            o.check(clopen, || format!("{}: up {x} not clopen", topo.name()));
            counts[1] += usize::from(clopen);
            if i < 100 {
                let mut y = corpus::point(&mut r, &uu, 16);
                while y == x {
                    y = corpus::point(&mut r, &uu, 16);
                }
                if o.cert(|| format!("separator {x} {y}"), witness::separator_function(&topo, &x, &y)).is_some() {
                    counts[2] += 1;
                }
            }
        }
        let mut made = 0;
        while made < 200 {
            let s = corpus::expr(&mut r, &uu, 6, 16);
            if is_empty(&uu, &s) {
                continue;
            }
            made += 1;
            if o.cert(|| format!("isolated point of {s}"), witness::isolated_point_of(&topo, &s)).is_some() {
                counts[3] += 1;
            }
        }
    }
    o.summary = format!(
        "tau_c(2), tau_fc2, tau_fcn(3): {} nbhd certs, {} clopen up-sets, {} separators, {} isolated points",
        counts[0], counts[1], counts[2], counts[3]
    );
    o
}

fn compactness() -> Outcome {
    let mut o = Outcome::new();
    let mut covers = 0;
    let mut opens = 0;
    for n in [2, 3] {
        let topo = tau_c(n);
        let uu = topo.universe().clone();
        let mut r = corpus::rng(SEED ^ 4 ^ n as u64);
        for _ in 0..100 {
            let pool = corpus::code_pool(&mut r, 6, 16);
            let cover = corpus::tau_c_cover(&mut r, &uu, &pool);
            if let Some(c) = o.cert(|| format!("cover {cover:?}"), witness::extract_finite_subcover(&topo, &cover)) {
                let Payload::Subcover { chosen, .. } = &c.payload else { unreachable!() };
                let union = SetExpr::or(chosen.iter().map(|&i| cover[i].as_set()));
                o.check(is_empty(&uu, &SetExpr::not(union)), || "subcover leaves a gap".into());
                covers += 1;
            }
            let x = corpus::point_from(&mut r, &pool, n);
            let d = corpus::basic_neighborhood(&mut r, &topo, &x, &pool);
            let defect = regular_open_defect(&topo, &d.as_set());
            o.check(matches!(defect, Ok(None)), || format!("{d}: {defect:?}"));
            opens += 1;
        }
    }
    o.summary = format!("{covers} subcovers verified, {opens} basic opens regular");
    o
}

fn colour_witnesses() -> Outcome {
    let mut o = Outcome::new();
    let mut notes = Vec::new();
    for topo in [tau_fc2(), tau_fc3()] {
        let c = o.cert(|| format!("{} joint", topo.name()), witness::joint_discontinuity_certificate(&topo, 25, 8, 8));
        if let Some(c) = c {
            notes.push(format!("{} joint: {} assertions", topo.name(), c.script.len()));
        }
        if o.cert(|| format!("{} closed discrete", topo.name()), witness::closed_discrete_witness(&topo)).is_some() {
            let anchor = topo.fc_anchor().unwrap().clone();
            let lim = limit_points(&topo, &SetExpr::cyl(anchor, AlmostSet::a())).unwrap();
            o.check(is_empty(topo.universe(), &lim), || "limit set of the image of A is not empty".into());
        }
    }
    let topo = tau_fc2();
    let uu = topo.universe().clone();
    let mut r = corpus::rng(SEED ^ 5);
    let bases = [AlmostBase::A, AlmostBase::CoA, AlmostBase::All];
    let mut accumulated = 0;
    for _ in 0..50 {
        let k = r.gen_range(1..=2);
        let mut parts: Vec<SetExpr> = (0..k)
            .map(|_| {
                let mut b = AlmostSet::base(*bases.choose(&mut r).unwrap());
                for c in corpus::code_pool(&mut r, 2, 16) {
                    b = if r.gen_bool(0.5) { b.with_added(c) } else { b.with_removed(c) };
                }
                SetExpr::cyl(Point::singleton(r.gen_range(0..16)), b)
            })
            .collect();
        if r.gen_bool(0.5) {
            parts.push(SetExpr::pts([Point::new([r.gen_range(0..8), r.gen_range(8..16)])]));
        }
        let s = SetExpr::or(parts);
        if let Some(c) = o.cert(|| format!("accumulation in {s}"), witness::accumulation_point(&topo, &s)) {
            let Payload::AccumulationPoint { point, .. } = &c.payload else { unreachable!() };
            o.check(limit_points(&topo, &s).unwrap().member(&uu, point), || format!("{point} not a limit of {s}"));
            accumulated += 1;
        }
    }
    let mut defects = 0;
    for _ in 0..100 {
        let mut b = AlmostSet::a();
        for c in corpus::code_pool(&mut r, 3, 24) {
            b = if uu.in_a(c) { b.with_removed(c) } else { b.with_added(c) };
        }
        let d = topo.canonical_base(&Point::zero(), &[], Some(&b)).unwrap();
        match regular_open_defect(&topo, &d.as_set()) {
            Ok(Some(w)) => {
                let inside = interior(&topo, &closure(&topo, &d.as_set()).unwrap()).unwrap().member(&uu, &w);
                o.check(inside && !d.contains(&uu, &w), || format!("bad defect witness {w} for {d}"));
                defects += 1;
            }
            other => o.failures.push(format!("{d}: expected a defect, got {other:?}")),
        }
    }
    notes.push(format!("{accumulated} accumulation points, {defects} defects"));
    o.summary = notes.join("; ");
    o
}

fn regularity() -> Outcome {
    let mut o = Outcome::new();
    let mut shrunk = 0;
    for n in [2, 3] {
        let topo = tau_c(n);
        let mut r = corpus::rng(SEED ^ 6 ^ n as u64);
        for _ in 0..100 {
            let pool = corpus::code_pool(&mut r, 6, 16);
            let d = corpus::zero_neighborhood(&mut r, &topo, &pool);
            if let Some(c) = o.cert(|| format!("shrink {d}"), witness::regularity_shrink(&topo, &d)) {
                let Payload::RegularityShrink { v, .. } = &c.payload else { unreachable!() };
                let cl = closure(&topo, &v.as_set()).unwrap();
                o.check(subset_of(topo.universe(), &cl, &d.as_set()), || format!("cl({v}) escapes {d}"));
                shrunk += 1;
            }
        }
    }
    let fc = tau_fc2();
    let d = fc.canonical_base(&Point::zero(), &[], None).unwrap();
    let failure = witness::regularity_shrink(&fc, &d);
    let witness_ok = match &failure {
        Err(Error::NotRegular { witness }) => !d.contains(fc.universe(), witness) && witness.rank() == 1,
        _ => false,
    };
    o.check(witness_ok, || format!("tau_fc2 expected failure, got {failure:?}"));
    o.summary = format!("{shrunk} tau_c shrinks certified; tau_fc2 fails as expected: {failure:?}");
    o
}

fn top_rank() -> Outcome {
    let mut o = Outcome::new();
    let mut done = 0;
    for topo in [tau_c(2), tau_c(3), tau_fc2()] {
        let mut r = corpus::rng(SEED ^ 7);
        for _ in 0..100 {
            let pool = corpus::code_pool(&mut r, 6, 16);
            let d = corpus::zero_neighborhood(&mut r, &topo, &pool);
            if o.cert(|| format!("{} cover {d}", topo.name()), witness::top_rank_cover(&topo, &d)).is_some() {
                done += 1;
            }
        }
    }
    o.summary = format!("{done} top-rank covers verified");
    o
}

fn collectionwise() -> Outcome {
    let mut o = Outcome::new();
    let topo = tau_c(1);
    let mut r = corpus::rng(SEED ^ 8);
    let mut infinite = 0;
    let mut done = 0;
    for i in 0..50 {
        let with_infinite = i % 5 != 4;
        let family = corpus::discrete_family(&mut r, with_infinite);
        if o.cert(|| format!("family {family:?}"), witness::collectionwise_expand(&topo, &family)).is_some() {
            done += 1;
            infinite += usize::from(with_infinite);
        }
    }
    let pair = [SetExpr::cyl(Point::zero(), AlmostSet::a()), SetExpr::cyl(Point::zero(), AlmostSet::co_a())];
    let rejected = witness::collectionwise_expand(&topo, &pair);
    o.check(rejected == Err(Error::NotDiscrete(0, 1)), || format!("pair not rejected: {rejected:?}"));
    o.summary = format!("{done} expansions ({infinite} with an infinite member); A / co-A pair rejected");
    o
}

fn oracle_block(o: &mut Outcome, topo: &Topology, w: Window, stable: Window, count: usize, seed: u64) -> usize {
    let uu = topo.universe().clone();
    let mut r = corpus::rng(seed);
    let mut agreed = 0;
    for _ in 0..count {
        let s = corpus::expr(&mut r, &uu, 6, w.m);
        let checks = [
            ("limit", limit_points(topo, &s).unwrap(), oracle_limit_points(topo, &s, w).unwrap()),
            ("closure", closure(topo, &s).unwrap(), oracle_closure(topo, &s, w).unwrap()),
            ("interior", interior(topo, &s).unwrap(), oracle_interior(topo, &s, w).unwrap()),
        ];
        let mut all = true;
        for (what, sym, orc) in checks {
            let a = compare(&uu, &sym, &orc, w);
            if !a.agrees() {
                all = false;
                o.failures.push(format!("{} {what} of {s}: {a:?}", topo.name()));
            }
        }
        let st = padding_stable(topo, &s, w, stable);
        o.check(st == Ok(true), || format!("{} padding changes {s}: {st:?}", topo.name()));
        agreed += usize::from(all);
    }
    agreed
}

fn oracle_equivalence() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let mut parts = Vec::new();
    let base = Window::new(16, 1, 1);
    let wide = Window::new(16, 3, 3);
    for (i, topo) in [tau_c(2), tau_fc2(), Topology::tau_0(u(2))].into_iter().enumerate() {
        let agreed = oracle_block(&mut o, &topo, base, wide, 1000, SEED ^ 90 ^ i as u64);
        parts.push(format!("{} {agreed}/1000", topo.name()));
    }
    for (i, topo) in [tau_c(3), tau_fc3()].into_iter().enumerate() {
        let agreed = oracle_block(&mut o, &topo, wide, Window::new(16, 4, 4), 200, SEED ^ 95 ^ i as u64);
        parts.push(format!("{} {agreed}/200 at pads 3/3", topo.name()));
    }
    let took = start.elapsed();
    o.check(took < ORACLE_BUDGET, || format!("took {took:?}, budget {ORACLE_BUDGET:?}"));
    o.summary = format!("{}; {took:.1?}", parts.join(", "));
    o
}

fn certificate_corpus() -> Vec<Certificate> {
    let mut out = Vec::new();
    let c2 = tau_c(2);
    let fc = tau_fc2();
    let fc3 = tau_fc3();
    let p = |s: &str| s.parse::<Point>().unwrap();
    let d = |s: &str| s.parse::<OpenDescriptor>().unwrap();
    let e = |s: &str| s.parse::<SetExpr>().unwrap();
    let mut r = corpus::rng(SEED ^ 10);
    for topo in [&c2, &fc, &fc3] {
        out.push(witness::neighborhood_in_upset(topo, &p("{1}")).unwrap());
        out.push(witness::separator_function(topo, &p("{1 2}"), &p("{1 3}")).unwrap());
        out.push(witness::separation_pair(topo, &p("{0}"), &p("{0 4}")).unwrap());
        out.push(witness::isolated_point_of(topo, &e("(or (up {3}) (pts {1 5}))")).unwrap());
        out.push(witness::top_rank_cover(topo, &topo.canonical_base(&Point::zero(), &[p("{2}")], None).unwrap()).unwrap());
        let uu = topo.universe().clone();
        for _ in 0..3 {
            let pool = corpus::code_pool(&mut r, 5, 12);
            let a = corpus::point_from(&mut r, &pool, uu.n);
            let b = corpus::point_from(&mut r, &pool, uu.n);
            let w = corpus::basic_neighborhood(&mut r, topo, &a.meet(&b), &pool);
            out.push(witness::separate_continuity_modulus(topo, &a, &b, &w).unwrap());
        }
    }
    for topo in [&fc, &fc3] {
        out.push(witness::joint_discontinuity_certificate(topo, 12, 6, 4).unwrap());
        out.push(witness::closed_discrete_witness(topo).unwrap());
    }
    out.push(witness::accumulation_point(&fc, &e("(cyl {5} (almost ALL + [] - []))")).unwrap());
    let cover = [d("(upminus {} [{1} {2}])"), d("(upminus {1} [])"), d("(upminus {2} [])"), d("(upminus {3} [])")];
    out.push(witness::extract_finite_subcover(&c2, &cover).unwrap());
    out.push(witness::regularity_shrink(&c2, &d("(upminus {} [{1} {2 3}])")).unwrap());
    let c1 = tau_c(1);
    out.push(witness::collectionwise_expand(&c1, &[corpus::closed_pi_a([2]), e("(pts {2} {5})")]).unwrap());
    out
}

fn negative_controls() -> Outcome {
    let mut o = Outcome::new();
    let certs = certificate_corpus();
    let mut mutations = 0;
    for c in &certs {
        o.check(c.verifies(), || format!("{:?} does not verify before tampering", c.kind));
        for text in one_code_mutations(c) {
            mutations += 1;
            if let Ok(t) = Certificate::from_json(&text) {
                o.check(!t.verifies(), || format!("{:?} tamper accepted: {text}", c.kind));
            }
        }
    }
    // consistent tampering: the script is re-derived, so only the
    // assertions themselves can reject it
    let mut semantic = 0;
    let fc = tau_fc2();
    let mut joint = witness::joint_discontinuity_certificate(&fc, 25, 8, 8).unwrap();
    if let Payload::JointDiscontinuity { b, c, .. } = &mut joint.payload {
        b[7] = c[7];
    }
    joint.script = derive_script(&joint.topology, &joint.payload).unwrap();
    o.check(!joint.verifies(), || "b_k = c_k tamper accepted".into());
    semantic += 1;
    let mut cd = witness::closed_discrete_witness(&fc).unwrap();
    cd.payload = Payload::ClosedDiscrete { set: SetExpr::cyl(Point::zero(), AlmostSet::co_a()) };
    cd.script = derive_script(&cd.topology, &cd.payload).unwrap();
    o.check(!cd.verifies(), || "co-A closed discrete tamper accepted".into());
    semantic += 1;

    let s = SetExpr::cyl(Point::zero(), AlmostSet::a());
    let w = Window::new(16, 1, 1);
    let blind = closure_with(&fc, &s, LimitRule::ColorBlind).unwrap();
    let caught = !compare(fc.universe(), &blind, &oracle_closure(&fc, &s, w).unwrap(), w).agrees();
    o.check(caught, || "colour-blind rule not caught".into());
    let honest = closure(&fc, &s).unwrap();
    o.check(compare(fc.universe(), &honest, &oracle_closure(&fc, &s, w).unwrap(), w).agrees(), || {
        "honest rule disagrees".into()
    });
    o.summary = format!(
        "{} certificates, {mutations} one-code mutations rejected, {semantic} consistent tampers rejected, colour-blind rule caught: {caught}",
        certs.len()
    );
    o
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let criteria: [Criterion; 10] = [
        ("semilattice laws", semilattice_laws),
        ("base axioms", base_axioms),
        ("point structure", point_structure),
        ("compactness", compactness),
        ("colour-sensitive counterexamples", colour_witnesses),
        ("regularity", regularity),
        ("top-rank cover", top_rank),
        ("collectionwise expansion", collectionwise),
        ("oracle equivalence", oracle_equivalence),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let verdict = if outcome.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict} {name}: {} [{:.1?}]", i + 1, outcome.summary, start.elapsed());
        for f in outcome.failures.iter().take(5) {
            println!("    {f}");
        }
        failed += usize::from(!outcome.failures.is_empty());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
