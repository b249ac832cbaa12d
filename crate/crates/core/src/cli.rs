//! The `approachkit` command line.
//!
//! Every command prints a JSON document to stdout holding the full run
//! configuration, its hash and the result. With `--out DIR` the same document
//! and any CSV tables are also written to files named after the command and
//! the first twelve hex digits of the configuration hash. CSV files start with
//! `#` comment lines carrying the configuration.
//!
//! Exit codes: 0 on success, 2 when a check finds the target not approachable,
//! 1 on any error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::conditions::{
    default_q_grid, dual_condition, one_shot_halfspace, primal_condition_orthant, ConditionReport, NatureSearch, Verdict,
};
use crate::error::{Error, Result};
use crate::game::{GameSpec, Monitoring};
use crate::geometry::{simplex_grid, Point, SimplexVector, TargetSet};
use crate::kohlberg::{auxiliary_game, auxiliary_urc, concavify, nr_vertices, supporting_vector, u_grid, SimultaneousGames};
use crate::lifting::{hidden_halfspace_demo, lift_polytope};
use crate::monitoring::{flag_grid, has_urc_property};
use crate::report::report;
use crate::strategies::{monte_carlo, run_block_signals, run_blackwell, run_observed_flags, BlockSchedule, NaturePolicy, SimOptions, Trace};

#[derive(Parser, Debug)]
#[command(name = "approachkit", version, about = "Approachability checks and simulations for repeated vector-payoff games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Dual condition: for every flag, some action keeps the compatible payoffs in the target.
    CheckDual(CheckArgs),
    /// Primal condition for an orthant: every containing half-space of the surrogate game.
    CheckPrimal(PrimalArgs),
    /// One-shot approachability of a half-space.
    CheckHalfspace(CheckArgs),
    /// Upper-right-corner property on grids.
    Urc(UrcArgs),
    /// Run a strategy against a Nature policy.
    Simulate(SimulateArgs),
    /// Lift a polytope target to the nonpositive orthant.
    Lift(LiftArgs),
    /// Incomplete-information pipeline for two simultaneous games.
    Kohlberg(KohlbergArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct GameArgs {
    /// Game description (JSON).
    #[arg(long)]
    pub game: PathBuf,
    /// Signal law to use: the file's own, full monitoring, or none.
    #[arg(long, value_enum, default_value_t = MonitoringArg::Spec)]
    pub monitoring: MonitoringArg,
    /// Directory for artifacts.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MonitoringArg {
    Full,
    Dark,
    Spec,
}

impl From<MonitoringArg> for Monitoring {
    fn from(m: MonitoringArg) -> Self {
        match m {
            MonitoringArg::Full => Monitoring::Full,
            MonitoringArg::Dark => Monitoring::Dark,
            MonitoringArg::Spec => Monitoring::Spec,
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct CheckArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameArgs,
    /// Target set (JSON).
    #[arg(long)]
    pub target: PathBuf,
    /// Denominator of the grid over Nature's mixed actions.
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct PrimalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub check: CheckArgs,
    /// Denominator of the direction grid.
    #[arg(long, default_value_t = 32)]
    pub q_grid: usize,
    /// Search Nature over this simplex grid instead of exactly.
    #[arg(long)]
    pub nature_grid: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct UrcArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameArgs,
    #[arg(long, default_value_t = 20)]
    pub grid: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyArg {
    Blackwell,
    ObservedFlags,
    Block,
}

#[derive(Args, Debug, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameArgs,
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long, value_enum, default_value_t = StrategyArg::Blackwell)]
    pub strategy: StrategyArg,
    /// `best-response`, `fixed:0.5,0.5` or `script:1,0;0,1`.
    #[arg(long, default_value = "best-response")]
    pub nature: String,
    #[arg(long, default_value_t = 10_000)]
    pub horizon: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub replications: usize,
    #[arg(long, default_value_t = 1.5)]
    pub length_exponent: f64,
    #[arg(long, default_value_t = 1.0)]
    pub length_scale: f64,
    #[arg(long, default_value_t = 0.25)]
    pub exploration_exponent: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct LiftArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameArgs,
    #[arg(long)]
    pub target: PathBuf,
    /// Lifted direction to test for a hidden half-space, e.g. `0.5,0.5`.
    #[arg(long)]
    pub q: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct KohlbergArgs {
    /// Simultaneous games (JSON).
    #[arg(long)]
    pub games: PathBuf,
    /// Number of points on the `p` grid.
    #[arg(long, default_value_t = 33)]
    pub grid: usize,
    /// Values of `p` whose supporting orthant is checked.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.25, 0.5, 0.75, 1.0])]
    pub check: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a command produced.
pub struct Outcome {
    pub document: Value,
    pub csv: Vec<(String, String)>,
    pub not_approachable: bool,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn load_game(args: &GameArgs) -> Result<GameSpec> {
    let text = read(&args.game)?;
    let spec = GameSpec::from_json_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", args.game.display())))?;
    Ok(spec.with_monitoring(args.monitoring.into()))
}

fn load_target(path: &Path) -> Result<TargetSet> {
    let t: TargetSet = serde_json::from_str(&read(path)?).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    t.validate()?;
    Ok(t)
}

fn parse_vector(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| Error::Invalid(format!("bad number {v:?}: {e}"))))
        .collect()
}

/// Parses `best-response`, `fixed:w,...` or `script:w,...;w,...`.
pub fn parse_nature(s: &str) -> Result<NaturePolicy> {
    if s == "best-response" {
        return Ok(NaturePolicy::BestResponse);
    }
    if let Some(rest) = s.strip_prefix("fixed:") {
        return Ok(NaturePolicy::fixed(SimplexVector::new(parse_vector(rest)?)?));
    }
    if let Some(rest) = s.strip_prefix("script:") {
        let ys = rest.split(';').map(|p| SimplexVector::new(parse_vector(p)?)).collect::<Result<Vec<_>>>()?;
        return NaturePolicy::script(ys);
    }
    Err(Error::Invalid(format!("unknown nature policy {s:?}")))
}

fn orthant_corner(target: &TargetSet) -> Result<Point> {
    match target {
        TargetSet::Orthant { a } => Ok(a.clone()),
        _ => Err(Error::Invalid("this command needs an orthant target".into())),
    }
}

fn condition(report: ConditionReport) -> Result<Outcome> {
    let not_approachable = report.verdict == Verdict::NotApproachable;
    Ok(Outcome { document: serde_json::to_value(&report)?, csv: Vec::new(), not_approachable })
}

fn check_dual(args: &CheckArgs) -> Result<Outcome> {
    let spec = load_game(&args.game)?;
    let target = load_target(&args.target)?;
    condition(dual_condition(&spec, &target, &simplex_grid(spec.num_nature_actions(), args.grid))?)
}

fn check_primal(args: &PrimalArgs) -> Result<Outcome> {
    let spec = load_game(&args.check.game)?;
    let a = orthant_corner(&load_target(&args.check.target)?)?;
    let search = match args.nature_grid {
        Some(denom) => NatureSearch::Grid(simplex_grid(spec.num_nature_actions(), denom)),
        None => NatureSearch::Exact,
    };
    condition(primal_condition_orthant(&spec, &a, &q_grid(spec.dim, args.q_grid), &search, 1e-7)?)
}

fn q_grid(dim: usize, denom: usize) -> Vec<Point> {
    simplex_grid(dim, denom).into_iter().map(|q| Point::new(q.weights().to_vec())).collect()
}

fn check_halfspace(args: &CheckArgs) -> Result<Outcome> {
    let spec = load_game(&args.game)?;
    match load_target(&args.target)? {
        TargetSet::HalfSpace { a, b } => condition(one_shot_halfspace(&spec, &a, b)?),
        _ => Err(Error::Invalid("check-halfspace needs a half-space target".into())),
    }
}

fn urc(args: &UrcArgs) -> Result<Outcome> {
    let spec = load_game(&args.game)?;
    let r = has_urc_property(&spec, &simplex_grid(spec.num_player_actions(), args.grid), &flag_grid(&spec, args.grid)?, 1e-7)?;
    Ok(Outcome { document: serde_json::to_value(&r)?, csv: Vec::new(), not_approachable: false })
}

fn simulate(args: &SimulateArgs) -> Result<Outcome> {
    let spec = load_game(&args.game)?;
    let target = load_target(&args.target)?;
    let nature = parse_nature(&args.nature)?;
    if args.replications == 0 {
        return Err(Error::Invalid("replications must be at least 1".into()));
    }
    let schedule = BlockSchedule {
        length_exponent: args.length_exponent,
        length_scale: args.length_scale,
        exploration_exponent: args.exploration_exponent,
    };
    let opts = SimOptions::default();
    let run = |seed: u64| -> Result<Trace> {
        match args.strategy {
            StrategyArg::Blackwell => run_blackwell(&spec, &target, &nature, args.horizon, seed, &opts),
            StrategyArg::ObservedFlags => run_observed_flags(&spec, &orthant_corner(&target)?, &nature, args.horizon, seed, &opts),
            StrategyArg::Block => {
                run_block_signals(&spec, &orthant_corner(&target)?, &schedule, &nature, args.horizon, seed, &opts)
            }
        }
    };
    let traces = monte_carlo(args.replications, args.seed, run)?;
    let summary = report(&traces)?;
    let mut csv: Vec<(String, String)> = traces.iter().map(|t| (format!("trace-seed{}", t.header.seed), t.to_csv())).collect();
    csv.push(("quantiles".into(), summary.to_csv()));
    let summaries: Vec<_> = traces.iter().map(Trace::summary).collect();
    Ok(Outcome {
        document: json!({
            "payoff_bound": spec.payoff_bound(),
            "violations": summary.total_violations,
            "step_failures": summary.step_failures,
            "schedule": summary.schedule,
            "runs": summaries,
        }),
        csv,
        not_approachable: false,
    })
}

fn lift(args: &LiftArgs) -> Result<Outcome> {
    let spec = load_game(&args.game)?;
    let target = load_target(&args.target)?;
    let lifted = lift_polytope(&spec, &target)?;
    let dual = dual_condition(&lifted.lifted, &lifted.target(), &simplex_grid(spec.num_nature_actions(), 32))?;
    let hidden = match &args.q {
        Some(q) => Some(hidden_halfspace_demo(&lifted, &Point::new(parse_vector(q)?))?),
        None => None,
    };
    Ok(Outcome {
        document: json!({ "lifted": lifted.lifted, "dual": dual, "hidden_halfspace": hidden }),
        csv: Vec::new(),
        not_approachable: false,
    })
}

fn kohlberg(args: &KohlbergArgs) -> Result<Outcome> {
    let games: SimultaneousGames =
        serde_json::from_str(&read(&args.games)?).map_err(|e| Error::Invalid(format!("{}: {e}", args.games.display())))?;
    games.validate()?;
    let nr = nr_vertices(&games)?;
    let aux = auxiliary_game(&games, &nr)?;
    let urc = auxiliary_urc(&aux, 1e-7)?;
    let samples = u_grid(&aux, args.grid)?;
    let cav = concavify(&samples)?;
    let mut u_csv = String::from("p,u,cav_u\n");
    for (p, u) in &samples {
        u_csv.push_str(&format!("{p},{u},{}\n", cav.eval(*p)?));
    }
    let mut hull_csv = String::from("p,cav_u\n");
    for (p, v) in &cav.hull {
        hull_csv.push_str(&format!("{p},{v}\n"));
    }
    let mut a_csv = String::from("p,a1,a2,primal_margin,passes\n");
    let mut checks = Vec::new();
    for &p in &args.check {
        let a = supporting_vector(&cav, p)?;
        let r = primal_condition_orthant(&aux, &a, &default_q_grid(2), &NatureSearch::Exact, 1e-7)?;
        a_csv.push_str(&format!("{p},{},{},{},{}\n", a.coords[0], a.coords[1], r.margin, r.passes()));
        checks.push(json!({ "p": p, "a_p": a, "primal": r }));
    }
    Ok(Outcome {
        document: json!({
            "non_revealing_vertices": nr.vertices,
            "auxiliary_game": aux,
            "urc": urc,
            "cav_u_hull": cav.hull,
            "supporting_orthants": checks,
        }),
        csv: vec![("u".into(), u_csv), ("hull".into(), hull_csv), ("supporting".into(), a_csv)],
        not_approachable: false,
    })
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckDual(_) => "check-dual",
            Command::CheckPrimal(_) => "check-primal",
            Command::CheckHalfspace(_) => "check-halfspace",
            Command::Urc(_) => "urc",
            Command::Simulate(_) => "simulate",
            Command::Lift(_) => "lift",
            Command::Kohlberg(_) => "kohlberg",
        }
    }

    fn out_dir(&self) -> Option<&Path> {
        match self {
            Command::CheckDual(a) | Command::CheckHalfspace(a) => a.game.out.as_deref(),
            Command::CheckPrimal(a) => a.check.game.out.as_deref(),
            Command::Urc(a) => a.game.out.as_deref(),
            Command::Simulate(a) => a.game.out.as_deref(),
            Command::Lift(a) => a.game.out.as_deref(),
            Command::Kohlberg(a) => a.out.as_deref(),
        }
    }

    fn input_paths(&self) -> Vec<&Path> {
        match self {
            Command::CheckDual(a) | Command::CheckHalfspace(a) => vec![&a.game.game, &a.target],
            Command::CheckPrimal(a) => vec![&a.check.game.game, &a.check.target],
            Command::Urc(a) => vec![&a.game.game],
            Command::Simulate(a) => vec![&a.game.game, &a.target],
            Command::Lift(a) => vec![&a.game.game, &a.target],
            Command::Kohlberg(a) => vec![&a.games],
        }
    }

    pub fn execute(&self) -> Result<Outcome> {
        match self {
            Command::CheckDual(a) => check_dual(a),
            Command::CheckPrimal(a) => check_primal(a),
            Command::CheckHalfspace(a) => check_halfspace(a),
            Command::Urc(a) => urc(a),
            Command::Simulate(a) => simulate(a),
            Command::Lift(a) => lift(a),
            Command::Kohlberg(a) => kohlberg(a),
        }
    }
}

/// The configuration record: parsed arguments plus the contents of every
/// input file.
pub fn config_record(command: &Command) -> Result<Value> {
    let mut inputs = serde_json::Map::new();
    for p in command.input_paths() {
        let text = read(p)?;
        let value: Value = serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
        inputs.insert(p.display().to_string(), value);
    }
    Ok(json!({ "args": command, "inputs": inputs }))
}

pub fn config_hash(config: &Value) -> String {
    hex::encode(Sha256::digest(config.to_string().as_bytes()))
}

/// Runs a command, writes artifacts, and returns the exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<u8> {
    let config = config_record(&cli.command)?;
    let hash = config_hash(&config);
    let outcome = cli.command.execute()?;
    let document = json!({
        "command": cli.command.name(),
        "config": config,
        "config_hash": hash,
        "not_approachable": outcome.not_approachable,
        "result": outcome.document,
    });
    let text = serde_json::to_string_pretty(&document)?;
    writeln!(stdout, "{text}").map_err(|e| Error::Invalid(format!("stdout: {e}")))?;
    if let Some(dir) = cli.command.out_dir() {
        fs::create_dir_all(dir).map_err(|e| Error::Invalid(format!("{}: {e}", dir.display())))?;
        let stem = format!("{}-{}", cli.command.name(), &hash[..12]);
        let write = |name: String, body: String| {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
        };
        write(format!("{stem}.json"), format!("{text}\n"))?;
        let preamble = format!("# config_hash: {hash}\n# config: {config}\n");
        for (name, body) in outcome.csv {
            write(format!("{stem}-{name}.csv"), format!("{preamble}{body}"))?;
        }
    }
    Ok(if outcome.not_approachable { 2 } else { 0 })
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match run(&cli, &mut stdout) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nature_policies_parse() {
        assert_eq!(parse_nature("best-response").unwrap(), NaturePolicy::BestResponse);
        assert_eq!(parse_nature("fixed:0.25,0.75").unwrap(), NaturePolicy::fixed(SimplexVector::new(vec![0.25, 0.75]).unwrap()));
        match parse_nature("script:1,0;0,1").unwrap() {
            NaturePolicy::Script { ys } => assert_eq!(ys.len(), 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_nature("fixed:0.5,0.6").is_err());
        assert!(parse_nature("random").is_err());
    }

    #[test]
    fn arguments_parse() {
        let cli = Cli::try_parse_from(["approachkit", "check-dual", "--game", "g.json", "--target", "t.json", "--monitoring", "dark"]).unwrap();
        match &cli.command {
            Command::CheckDual(a) => {
                assert_eq!(a.game.monitoring, MonitoringArg::Dark);
                assert_eq!(a.grid, 32);
            }
            other => panic!("{other:?}"),
        }
        let v = serde_json::to_value(&cli.command).unwrap();
        assert_eq!(v["command"], "check-dual");
        assert_eq!(v["monitoring"], "dark");
    }
}
