//! Command-line front end. The `oppmcn` binary only calls [`main`].

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::audit::audit;
use crate::engine::{run, Mode, RunOutput};
use crate::error::{Result, SimError};
use crate::metrics::aggregate;
use crate::replay::{parse_trace, replay, ReplayConfig};
use crate::report::{format_table, write_runs_csv, write_summary_csv, RunRow};
use crate::scenarios::{self, build, parse_overrides, Override, TRIAL_SCENARIOS};
use crate::sched::Phase;

#[derive(Debug, Parser)]
#[command(name = "oppmcn", version, about = "Opportunistic multi-hop cellular uplink simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario in one mode (or all modes) over a set of seeds.
    Run(RunArgs),
    /// Run every mode on each chosen scenario.
    Matrix(MatrixArgs),
    /// Feed a link-quality trace through both schedulers.
    Replay(ReplayArgs),
    /// Print the built-in scenario ids.
    ListScenarios,
    /// Check an override file against the built-in scenarios.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// Seeds 0..N.
    #[arg(long, default_value_t = 20, conflicts_with = "seed_list")]
    pub seeds: u64,
    /// Explicit comma-separated seeds.
    #[arg(long, value_delimiter = ',')]
    pub seed_list: Option<Vec<u64>>,
}

impl SeedArgs {
    fn list(&self) -> Vec<u64> {
        self.seed_list.clone().unwrap_or_else(|| (0..self.seeds).collect())
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Scenario override file (`dotted.key = value` lines).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory for runs.csv, summary.csv, table.txt and logs/.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write per-run decision logs under `<out>/logs`.
    #[arg(long)]
    pub logs: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub scenario: String,
    /// CC, OppCC, MCN, OppMCN or `all`.
    #[arg(long, default_value = "all")]
    pub mode: String,
    #[command(flatten)]
    pub seeds: SeedArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    /// Comma-separated scenario ids; defaults to the trial scenarios.
    #[arg(long, value_delimiter = ',')]
    pub scenarios: Option<Vec<String>>,
    #[command(flatten)]
    pub seeds: SeedArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PhaseArg {
    Active,
    Paused,
}

impl From<PhaseArg> for Phase {
    fn from(p: PhaseArg) -> Self {
        match p {
            PhaseArg::Active => Phase::Active,
            PhaseArg::Paused => Phase::Paused,
        }
    }
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub trace: PathBuf,
    /// D2D parameter overrides, e.g. `rssi_thr=-70,nb_rx=7`.
    #[arg(long, default_value = "")]
    pub d2d: String,
    /// Cellular parameter overrides, e.g. `itbs_thr=18,rsrp_thr=-80`.
    #[arg(long, default_value = "")]
    pub cell: String,
    #[arg(long, value_enum, default_value = "paused")]
    pub d2d_initial: PhaseArg,
    #[arg(long, value_enum, default_value = "paused")]
    pub cell_initial: PhaseArg,
    /// Emit an `observe` record after every sample.
    #[arg(long)]
    pub observe: bool,
    /// Write the log here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Only check this scenario.
    #[arg(long)]
    pub scenario: Option<String>,
}

/// Parses `k=v,k=v` over the serialized form of `base`.
pub fn apply_params<T: Serialize + DeserializeOwned>(base: &T, spec: &str) -> Result<T> {
    let mut doc = serde_json::to_value(base).map_err(|e| SimError::Override {
        key: spec.into(),
        msg: e.to_string(),
    })?;
    for item in spec.split(',') {
        let Some(parsed) = Override::parse_line(item) else {
            continue;
        };
        let o = parsed.map_err(|msg| SimError::Override {
            key: item.trim().into(),
            msg,
        })?;
        let slot = doc.get_mut(&o.key).ok_or_else(|| SimError::Override {
            key: o.key.clone(),
            msg: "unknown parameter".into(),
        })?;
        *slot = o.value;
    }
    serde_json::from_value(doc).map_err(|e| SimError::Override {
        key: spec.into(),
        msg: e.to_string(),
    })
}

fn load_overrides(path: Option<&Path>) -> Result<Vec<Override>> {
    match path {
        None => Ok(Vec::new()),
        Some(p) => parse_overrides(&fs::read_to_string(p)?),
    }
}

fn parse_modes(spec: &str) -> Result<Vec<Mode>> {
    if spec.eq_ignore_ascii_case("all") {
        return Ok(Mode::ALL.to_vec());
    }
    spec.split(',').map(str::parse).collect()
}

/// Runs every `(scenario, mode, seed)` job in parallel, audits each run and
/// returns the outputs in job order.
pub fn execute(
    ids: &[String],
    modes: &[Mode],
    seeds: &[u64],
    overrides: &[Override],
) -> Result<Vec<RunOutput>> {
    let scenarios = ids
        .iter()
        .map(|id| build(id, overrides))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, Mode, u64)> = (0..scenarios.len())
        .flat_map(|i| modes.iter().flat_map(move |&m| seeds.iter().map(move |&s| (i, m, s))))
        .collect();
    jobs.par_iter()
        .map(|&(i, mode, seed)| {
            let sc = &scenarios[i];
            let out = run(sc, mode, seed)?;
            let report = audit(&out, &sc.d2d_scheduler, &sc.cell_scheduler);
            if let Some(first) = report.violations.first() {
                return Err(SimError::Invariant {
                    t: out.result.total_time,
                    what: format!("{} {mode} seed {seed}: {first}", sc.id),
                });
            }
            Ok(out)
        })
        .collect()
}

/// Writes `runs.csv`, `summary.csv` (groups of two or more seeds),
/// `table.txt` and optionally `logs/`. Returns the table text, if any.
pub fn write_outputs(outs: &[RunOutput], dir: Option<&Path>, logs: bool) -> Result<Option<String>> {
    let results: Vec<_> = outs.iter().map(|o| o.result.clone()).collect();
    let rows: Vec<RunRow> = results.iter().map(RunRow::from).collect();
    let mut groups: BTreeMap<(&str, Mode), usize> = BTreeMap::new();
    for r in &results {
        *groups.entry((r.scenario.as_str(), r.mode)).or_default() += 1;
    }
    let multi_seed = !groups.is_empty() && groups.values().all(|&n| n >= 2);
    let aggs = if multi_seed { Some(aggregate(&results)?) } else { None };
    let table = aggs.as_deref().map(format_table);

    let Some(dir) = dir else {
        return Ok(table);
    };
    fs::create_dir_all(dir)?;
    write_runs_csv(fs::File::create(dir.join("runs.csv"))?, &rows)?;
    if let Some(aggs) = &aggs {
        write_summary_csv(fs::File::create(dir.join("summary.csv"))?, aggs)?;
    }
    if let Some(t) = &table {
        fs::write(dir.join("table.txt"), t)?;
    }
    if logs {
        let ldir = dir.join("logs");
        fs::create_dir_all(&ldir)?;
        for o in outs {
            let r = &o.result;
            let stem = format!("{}.{}.{}", r.scenario, r.mode, r.seed);
            o.logs.d2d.write_to(fs::File::create(ldir.join(format!("{stem}.d2d.log")))?)?;
            o.logs.cell.write_to(fs::File::create(ldir.join(format!("{stem}.cell.log")))?)?;
        }
    }
    Ok(table)
}

fn print_rows(outs: &[RunOutput]) -> Result<()> {
    let rows: Vec<RunRow> = outs.iter().map(|o| RunRow::from(&o.result)).collect();
    write_runs_csv(std::io::stdout().lock(), &rows)
}

pub fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(a) => {
            let overrides = load_overrides(a.output.config.as_deref())?;
            let modes = parse_modes(&a.mode)?;
            let outs = execute(std::slice::from_ref(&a.scenario), &modes, &a.seeds.list(), &overrides)?;
            match write_outputs(&outs, a.output.out.as_deref(), a.output.logs)? {
                Some(t) => print!("{t}"),
                None => print_rows(&outs)?,
            }
        }
        Command::Matrix(a) => {
            let overrides = load_overrides(a.output.config.as_deref())?;
            let ids = a
                .scenarios
                .unwrap_or_else(|| TRIAL_SCENARIOS.iter().map(|s| s.to_string()).collect());
            let outs = execute(&ids, &Mode::ALL, &a.seeds.list(), &overrides)?;
            match write_outputs(&outs, a.output.out.as_deref(), a.output.logs)? {
                Some(t) => print!("{t}"),
                None => print_rows(&outs)?,
            }
        }
        Command::Replay(a) => {
            let defaults = ReplayConfig::default();
            let cfg = ReplayConfig {
                d2d: apply_params(&defaults.d2d, &a.d2d)?,
                cell: apply_params(&defaults.cell, &a.cell)?,
                d2d_initial: a.d2d_initial.into(),
                cell_initial: a.cell_initial.into(),
                observe_records: a.observe,
            };
            let samples = parse_trace(&fs::read_to_string(&a.trace)?)?;
            let out = replay(&samples, &cfg)?;
            match a.out {
                Some(p) => fs::write(p, out.to_text())?,
                None => std::io::stdout().lock().write_all(out.to_text().as_bytes())?,
            }
            if out.dropped_grants > 0 {
                eprintln!("dropped {} grants that arrived while paused", out.dropped_grants);
            }
        }
        Command::ListScenarios => {
            for (id, desc) in scenarios::list() {
                println!("{id:<14} {desc}");
            }
        }
        Command::Validate(a) => {
            let overrides = parse_overrides(&fs::read_to_string(&a.config)?)?;
            let ids: Vec<String> = match a.scenario {
                Some(id) => vec![id],
                None => scenarios::SCENARIO_IDS.iter().map(|s| s.to_string()).collect(),
            };
            for id in &ids {
                build(id, &overrides)?;
                println!("{id}: ok ({} overrides)", overrides.len());
            }
        }
    }
    Ok(())
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error ({}): {e}", e.category());
            e.exit_code()
        }
    }
}
