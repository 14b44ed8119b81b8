use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use expn_core::closure::{analyze_limits, closure, interior, LimitRule};
use expn_core::corpus;
use expn_core::error::Error;
use expn_core::expr::SetExpr;
use expn_core::oracle::{compare, oracle_closure, oracle_interior, oracle_limit_points, Agreement};
use expn_core::pattern::find_member;
use expn_core::point::Point;
use expn_core::suite::{run_suite, RunConfig, Verdict};
use expn_core::topology::{OpenDescriptor, Topology, TopologyKind};
use expn_core::witness::{self, Certificate, Rejection};

use crate::{EvalArgs, Opts, WitnessArgs, WitnessKind};

/// A failed command and its exit status: 1 for a failed check, 2 for bad
/// input.
#[derive(Debug)]
pub enum Failure {
    Check(String),
    Input(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Check(m) => write!(f, "check failed: {m}"),
            Failure::Input(m) => write!(f, "invalid input: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::RankExceeded { .. }
            | Error::InvalidExclusion { .. }
            | Error::NotAlmostA(_)
            | Error::InvalidTopology(_)
            | Error::DescriptorMismatch { .. }
            | Error::SupportOverflow { .. } => Failure::Input(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Parses `text`, pointing at the offending byte on failure.
fn parse<T: FromStr<Err = Error>>(what: &str, text: &str) -> Result<T, Failure> {
    text.parse().map_err(|e| match e {
        Error::Parse { pos, msg } => {
            Failure::Input(format!("cannot parse {what} at byte {pos}: {msg}\n  {text}\n  {:>width$}", "^", width = pos + 1))
        }
        other => other.into(),
    })
}

fn required<'a>(what: &str, v: &'a Option<String>) -> Result<&'a str, Failure> {
    v.as_deref().ok_or_else(|| Failure::Input(format!("this witness needs --{what}")))
}

fn config(opts: &Opts, suites: Vec<String>) -> RunConfig {
    let n = opts.n.unwrap_or(if opts.topology == TopologyKind::TauFcN { 3 } else { 2 });
    RunConfig {
        topology: opts.topology,
        n,
        a: opts.a.clone(),
        anchor: opts.anchor.clone(),
        window: opts.window,
        pads: opts.pads,
        depth: opts.depth,
        seed: opts.seed,
        samples: opts.samples,
        suites,
    }
}

fn topology(opts: &Opts) -> Result<Topology, Failure> {
    Ok(config(opts, Vec::new()).build_topology()?)
}

fn emit(opts: &Opts, text: &str) -> Outcome {
    match &opts.out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

pub fn check(opts: &Opts, suites: Vec<String>) -> Outcome {
    let report = run_suite(&config(opts, suites))?;
    for c in &report.checks {
        let verdict = match c.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skip => "SKIP",
        };
        if c.detail == format!("{} cases", c.cases) {
            eprintln!("{verdict} {} ({} cases)", c.name, c.cases);
        } else {
            eprintln!("{verdict} {} ({} cases) {}", c.name, c.cases, c.detail);
        }
    }
    emit(opts, &report.to_json())?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<_> = report.checks.iter().filter(|c| c.verdict == Verdict::Fail).map(|c| c.name.as_str()).collect();
        Err(Failure::Check(failed.join(", ")))
    }
}

pub fn witness(opts: &Opts, args: &WitnessArgs) -> Outcome {
    let topo = topology(opts)?;
    let point = |what: &str, v: &Option<String>| -> Result<Point, Failure> { parse(what, required(what, v)?) };
    let set = || -> Result<SetExpr, Failure> { parse("set", required("set", &args.set)?) };
    let opens = || -> Result<Vec<OpenDescriptor>, Failure> {
        if args.opens.is_empty() {
            return Err(Failure::Input("this witness needs --open".into()));
        }
        args.opens.iter().map(|d| parse("open", d)).collect()
    };
    let cert = match args.kind {
        WitnessKind::JointDiscontinuity => {
            witness::joint_discontinuity_certificate(&topo, opts.depth, args.support_bound, args.edit_bound)
        }
        WitnessKind::ClosedDiscrete => witness::closed_discrete_witness(&topo),
        WitnessKind::AccumulationPoint => witness::accumulation_point(&topo, &set()?),
        WitnessKind::IsolatedPoint => witness::isolated_point_of(&topo, &set()?),
        WitnessKind::Subcover => witness::extract_finite_subcover(&topo, &opens()?),
        WitnessKind::SeparationPair => witness::separation_pair(&topo, &point("p", &args.p)?, &point("q", &args.q)?),
        WitnessKind::SeparatorFunction => {
            witness::separator_function(&topo, &point("p", &args.p)?, &point("q", &args.q)?)
        }
        WitnessKind::SeparateContinuity => {
            let w = opens()?.remove(0);
            witness::separate_continuity_modulus(&topo, &point("p", &args.p)?, &point("q", &args.q)?, &w)
        }
        WitnessKind::RegularityShrink => witness::regularity_shrink(&topo, &opens()?[0]),
        WitnessKind::TopRankCover => witness::top_rank_cover(&topo, &opens()?[0]),
        WitnessKind::Collectionwise => {
            let family = args.member.iter().map(|m| parse("member", m)).collect::<Result<Vec<SetExpr>, _>>()?;
            witness::collectionwise_expand(&topo, &family)
        }
        WitnessKind::NeighborhoodInUpset => witness::neighborhood_in_upset(&topo, &point("p", &args.p)?),
    }?;
    cert.verify().map_err(|r| Failure::Check(format!("produced certificate does not verify: {r}")))?;
    eprintln!("{:?} certificate with {} assertions verifies", cert.kind, cert.script.len());
    emit(opts, &cert.to_json())
}

pub fn verify(file: &Path) -> Outcome {
    let text = fs::read_to_string(file).map_err(|e| Failure::Input(format!("cannot read {}: {e}", file.display())))?;
    let cert = Certificate::from_json(&text)
        .map_err(|e| Failure::Input(format!("{} is not a certificate: {e}", file.display())))?;
    match cert.verify() {
        Ok(()) => {
            println!("ok: {:?} certificate, {} assertions hold", cert.kind, cert.script.len());
            Ok(())
        }
        Err(Rejection::Assertion(i)) => {
            println!("rejected: assertion {i} failed: {}", cert.script[i]);
            Err(Failure::Check(format!("assertion {i} of {} failed", file.display())))
        }
        Err(Rejection::Binding(i)) => {
            match cert.script.get(i) {
                Some(a) => println!("rejected: assertion {i} does not follow from the payload: {a}"),
                None => println!("rejected: assertion {i} missing from the script"),
            }
            Err(Failure::Check(format!("assertion {i} of {} failed", file.display())))
        }
        Err(r) => {
            println!("rejected: {r}");
            Err(Failure::Check(r.to_string()))
        }
    }
}

pub fn eval(opts: &Opts, args: &EvalArgs) -> Outcome {
    let topo = topology(opts)?;
    let u = topo.universe();
    let s: SetExpr = parse("expression", &args.expr)?;
    let any = args.member.is_some() || args.closure || args.interior || args.limit || args.empty;
    if !any {
        println!("{s}");
    }
    if let Some(text) = &args.member {
        let p: Point = parse("point", text)?;
        u.check(&p)?;
        println!("{}", s.member(u, &p));
    }
    if args.empty {
        match find_member(u, &s) {
            None => println!("empty"),
            Some(w) => println!("nonempty, witness {w}"),
        }
    }
    if args.limit {
        let a = analyze_limits(&topo, &s, LimitRule::Exact);
        println!("limit: {}", a.limit);
        println!("exact: {}", a.exact);
    }
    if args.closure {
        println!("closure: {}", closure(&topo, &s)?);
        println!("exact: true");
    }
    if args.interior {
        println!("interior: {}", interior(&topo, &s)?.to_nnf());
        println!("exact: true");
    }
    Ok(())
}

fn describe(what: &str, a: &Agreement) -> String {
    if a.agrees() {
        format!("{what}: agree on {} points", a.points)
    } else {
        format!("{what}: DISAGREE, symbolic only {:?}, oracle only {:?}", a.only_symbolic, a.only_oracle)
    }
}

fn compare_one(topo: &Topology, s: &SetExpr, w: expn_core::oracle::Window) -> Result<Vec<(String, bool)>, Failure> {
    let u = topo.universe();
    let analysis = analyze_limits(topo, s, LimitRule::Exact);
    let rows = [
        ("limit", compare(u, &analysis.limit, &oracle_limit_points(topo, s, w)?, w)),
        ("closure", compare(u, &closure(topo, s)?, &oracle_closure(topo, s, w)?, w)),
        ("interior", compare(u, &interior(topo, s)?, &oracle_interior(topo, s, w)?, w)),
    ];
    Ok(rows.iter().map(|(what, a)| (describe(what, a), a.agrees())).collect())
}

pub fn oracle_compare(opts: &Opts, expr: Option<&str>) -> Outcome {
    let cfg = config(opts, Vec::new());
    let topo = cfg.build_topology()?;
    let w = cfg.window();
    if let Some(text) = expr {
        let s: SetExpr = parse("expression", text)?;
        let rows = compare_one(&topo, &s, w)?;
        for (line, _) in &rows {
            println!("{line}");
        }
        return if rows.iter().all(|(_, ok)| *ok) { Ok(()) } else { Err(Failure::Check("oracle disagreement".into())) };
    }
    let mut rng = corpus::rng(opts.seed);
    let mut bad = 0;
    for _ in 0..opts.samples {
        let s = corpus::expr(&mut rng, topo.universe(), 6, opts.window);
        for (line, ok) in compare_one(&topo, &s, w)? {
            if !ok {
                bad += 1;
                println!("{s}\n  {line}");
            }
        }
    }
    println!("{}: {} expressions, window {} pads {}/{}, {bad} disagreements", topo.name(), opts.samples, w.m, w.pad_a, w.pad_n);
    if bad == 0 {
        Ok(())
    } else {
        Err(Failure::Check(format!("{bad} disagreements")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn engine_errors_map_to_exit_codes() {
        assert_eq!(Failure::from(Error::InvalidTopology("x".into())).code(), 2);
        assert_eq!(Failure::from(Error::NotRegular { witness: Point::singleton(0) }).code(), 1);
    }

    #[test]
    fn parse_errors_carry_a_caret() {
        let Err(Failure::Input(msg)) = parse::<SetExpr>("expression", "(up {1") else { panic!() };
        let caret = msg.lines().last().unwrap();
        assert_eq!(caret.trim_start(), "^");
    }
}
