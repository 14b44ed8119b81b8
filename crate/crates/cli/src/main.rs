use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use expn_core::corpus::DEFAULT_SEED;
use expn_core::point::{ColorSet, Point};
use expn_core::topology::TopologyKind;

mod commands;

/// Property suites, certificates and oracle comparison for the finite-subset
/// semilattice topologies.
#[derive(Parser, Debug)]
#[command(name = "expn", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// tau_0, tau_c, tau_fc2 or tau_fcn.
    #[arg(long, global = true, default_value = "tau_c")]
    topology: TopologyKind,
    /// Rank bound; defaults to 3 for tau_fcn and 2 otherwise.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Anchor of the colour-sensitive zero set for tau_fcn.
    #[arg(long, global = true)]
    anchor: Option<Point>,
    /// Base codes of the oracle window.
    #[arg(long, global = true, default_value_t = 16)]
    window: u32,
    /// Pad counts per colour, as `a,b`.
    #[arg(long, global = true, default_value = "1,1", value_parser = parse_pads)]
    pads: (usize, usize),
    /// The colour class A: `even`, `odd` or `(almost even + [..] - [..])`.
    #[arg(long = "A", global = true, default_value = "even")]
    a: ColorSet,
    /// Sequence length for discontinuity certificates.
    #[arg(long, global = true, default_value_t = 25)]
    depth: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Random cases per sampled check.
    #[arg(long, global = true, default_value_t = 50)]
    samples: usize,
    /// Write the report or certificate here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the property suites and emit a JSON report.
    Check {
        /// Restrict to these suite groups (comma separated).
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
    },
    /// Produce a certificate and write it as JSON.
    Witness(WitnessArgs),
    /// Re-verify a certificate file.
    Verify { file: PathBuf },
    /// Evaluate queries on a set expression.
    Eval(EvalArgs),
    /// Compare the symbolic engine against window enumeration.
    OracleCompare {
        /// Expression to compare; a seeded random corpus when omitted.
        expr: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WitnessKind {
    JointDiscontinuity,
    ClosedDiscrete,
    AccumulationPoint,
    Subcover,
    SeparationPair,
    SeparatorFunction,
    SeparateContinuity,
    RegularityShrink,
    TopRankCover,
    Collectionwise,
    NeighborhoodInUpset,
    IsolatedPoint,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    kind: WitnessKind,
    /// Set expression for accumulation-point and isolated-point.
    #[arg(long)]
    set: Option<String>,
    /// Basic open descriptor; repeat for a subcover.
    #[arg(long = "open")]
    opens: Vec<String>,
    /// Family member for collectionwise; repeat per member.
    #[arg(long)]
    member: Vec<String>,
    /// First point (x, p or a depending on the kind).
    #[arg(long)]
    p: Option<String>,
    /// Second point (q or b depending on the kind).
    #[arg(long)]
    q: Option<String>,
    /// Largest support code of the zero neighbourhoods covered.
    #[arg(long, default_value_t = 8)]
    support_bound: u32,
    /// Largest edit code of the zero neighbourhoods covered.
    #[arg(long, default_value_t = 8)]
    edit_bound: u32,
}

#[derive(Args, Debug)]
struct EvalArgs {
    expr: String,
    /// Test membership of this point.
    #[arg(long)]
    member: Option<String>,
    #[arg(long)]
    closure: bool,
    #[arg(long)]
    interior: bool,
    #[arg(long)]
    limit: bool,
    #[arg(long)]
    empty: bool,
}

fn parse_pads(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two counts `a,b`, got `{s}`"))?;
    let count = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad pad count `{t}`: {e}"));
    Ok((count(a)?, count(b)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { suite } => commands::check(&cli.opts, suite),
        Command::Witness(args) => commands::witness(&cli.opts, &args),
        Command::Verify { file } => commands::verify(&file),
        Command::Eval(args) => commands::eval(&cli.opts, &args),
        Command::OracleCompare { expr } => commands::oracle_compare(&cli.opts, expr.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pads_parse_as_two_counts() {
        assert_eq!(parse_pads("1,1"), Ok((1, 1)));
        assert_eq!(parse_pads(" 3, 4"), Ok((3, 4)));
        assert!(parse_pads("3").is_err());
        assert!(parse_pads("a,1").is_err());
    }

    #[test]
    fn flags_are_accepted_after_the_subcommand() {
        let cli = Cli::try_parse_from(["expn", "check", "--topology", "tau_fcn", "--pads", "3,3", "--suite", "fc,zero"]).unwrap();
        assert_eq!(cli.opts.topology, TopologyKind::TauFcN);
        assert_eq!(cli.opts.pads, (3, 3));
        assert!(matches!(cli.command, Command::Check { ref suite } if suite.len() == 2));
    }
}
