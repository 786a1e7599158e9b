//! Command-line front end: read a string set, pick penalty parameters, solve,
//! and report in the column layout Set / P / A / B / γ / OR_P / MOR.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::advisor::{advise, AdvisorReport, ChainCase, LambdaSource};
use crate::analysis::{build_report, decode_with, occurrence_report_with, DecodeMode, DecodedOutcome, OccurrenceReport};
use crate::error::Error;
use crate::hamiltonian::{build_hamiltonian, HamiltonianKind, PenaltyParams};
use crate::instance::CspInstance;
use crate::model::Assignment;
use crate::sampler::{
    anneal_reads, solve_decomposed, solve_exhaustive, AnnealSchedule, SampleSet, MAX_TIES,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianArg {
    /// Mismatch-count objective (H).
    #[default]
    Standard,
    /// Code-point distance objective (H').
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverArg {
    /// Multi-read simulated annealing.
    #[default]
    Sa,
    /// Exhaustive enumeration of the whole model.
    Exact,
    /// Exhaustive enumeration of each position separately.
    Decomposed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
}

/// Solve a closest string instance through its QUBO formulation.
#[derive(Debug, Clone, Parser)]
#[command(name = "csp-qubo", version, about)]
pub struct RunConfig {
    /// String set, one string per line; blank lines and `#` comments ignored.
    pub input: PathBuf,

    #[arg(long, value_enum, default_value_t)]
    pub hamiltonian: HamiltonianArg,

    /// Penalty multiplier A. Defaults to the rounded-up midpoint of the advised range.
    #[arg(short = 'A', long = "lagrange-a")]
    pub a: Option<f64>,

    /// Objective multiplier B.
    #[arg(short = 'B', long = "lagrange-b", default_value_t = 1.0)]
    pub b: f64,

    #[arg(long, default_value_t = 100)]
    pub num_reads: usize,

    #[arg(long, value_enum, default_value_t)]
    pub solver: SolverArg,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Which penalty minimum bounds the advised range of A.
    #[arg(long, value_enum, default_value_t)]
    pub lambda_source: LambdaSource,

    #[arg(long, value_enum, default_value_t)]
    pub output: OutputFormat,

    /// Split the strings into substrings of this width and solve each separately.
    #[arg(long)]
    pub window: Option<usize>,

    /// Override the automatic chain-strength classification.
    #[arg(long, value_enum)]
    pub chain_case: Option<ChainCase>,

    /// Reject positions with more than one active selector, even for equal symbols.
    #[arg(long)]
    pub strict: bool,

    /// Label for the Set column; defaults to the input file stem.
    #[arg(long)]
    pub label: Option<String>,
}

impl RunConfig {
    /// Defaults for `input`, as if no flag had been passed.
    pub fn for_input(input: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            hamiltonian: HamiltonianArg::default(),
            a: None,
            b: 1.0,
            num_reads: 100,
            solver: SolverArg::default(),
            seed: 0,
            lambda_source: LambdaSource::default(),
            output: OutputFormat::default(),
            window: None,
            chain_case: None,
            strict: false,
            label: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}{source}", .line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Input {
        line: Option<usize>,
        #[source]
        source: Error,
    },

    #[error("{num_vars} variables exceed the exhaustive limit of {limit}; try --solver decomposed")]
    TooManyVariables { num_vars: usize, limit: usize },

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Model(#[from] Error),
}

/// Parses the text format accepted by [`ingest`].
pub fn parse_strings(text: &str) -> Result<CspInstance, CliError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    CspInstance::new(lines.iter().map(|&(_, l)| l)).map_err(|source| {
        let line = match source {
            Error::LengthMismatch { index: Some(k), .. } | Error::ZeroLength { index: k } => {
                Some(lines[k - 1].0)
            }
            _ => None,
        };
        CliError::Input { line, source }
    })
}

pub fn ingest(path: &Path) -> Result<CspInstance, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_strings(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InstanceSummary {
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunParams {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub num_reads: usize,
    pub seed: u64,
    pub window: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub string: String,
    #[serde(rename = "N")]
    pub count: usize,
    #[serde(rename = "OR")]
    pub ratio: f64,
}

/// Everything one run produces. For the exact solvers the "reads" are the
/// tied ground states, so `results` gives how they split across strings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub set: String,
    pub instance: InstanceSummary,
    pub hamiltonian: HamiltonianArg,
    pub advisor: AdvisorReport,
    pub solver: SolverArg,
    pub params: RunParams,
    pub results: Vec<ResultRow>,
    #[serde(rename = "MOR")]
    pub mor: f64,
    pub invalid_count: usize,
    /// Denominator of the occurrence ratios.
    pub total: usize,
    pub min_energy: f64,
    /// Decoded lowest-energy solution.
    #[serde(rename = "P")]
    pub p: Option<String>,
    #[serde(rename = "OR_P")]
    pub or_p: f64,
    pub truncated: bool,
}

fn kind_of(arg: HamiltonianArg) -> HamiltonianKind {
    match arg {
        HamiltonianArg::Standard => HamiltonianKind::Standard,
        HamiltonianArg::Numeric => HamiltonianKind::numeric(),
    }
}

/// Consecutive `(start, width)` windows covering positions `1..=m`.
fn windows(m: usize, width: Option<usize>) -> Vec<(usize, usize)> {
    let w = width.unwrap_or(m);
    (0..m.div_ceil(w))
        .map(|j| (j * w + 1, w.min(m - j * w)))
        .collect()
}

fn check_config(config: &RunConfig, instance: &CspInstance) -> Result<(), CliError> {
    if config.num_reads == 0 {
        return Err(CliError::Config("--num-reads must be at least 1".into()));
    }
    if let Some(w) = config.window {
        if w == 0 || w > instance.m() {
            return Err(CliError::Config(format!(
                "--window must lie in 1..={}, got {w}",
                instance.m()
            )));
        }
    }
    Ok(())
}

pub fn run(config: &RunConfig) -> Result<RunReport, CliError> {
    let instance = ingest(&config.input)?;
    let set = config.label.clone().unwrap_or_else(|| {
        config
            .input
            .file_stem()
            .map_or_else(|| "-".into(), |s| s.to_string_lossy().into_owned())
    });
    run_instance(config, &instance, set)
}

/// Same as [`run`] on an already loaded instance.
pub fn run_instance(config: &RunConfig, instance: &CspInstance, set: String) -> Result<RunReport, CliError> {
    check_config(config, instance)?;
    let advisor = advise(instance, config.b, config.window, config.chain_case)?;
    let a = match config.a {
        Some(a) => a,
        None => advisor
            .a_range(config.lambda_source)
            .map_or((2.0 * config.b).ceil(), |r| r.default_a()),
    };
    let params = PenaltyParams::new(a, config.b)?;
    let kind = kind_of(config.hamiltonian);
    let mode = if config.strict {
        DecodeMode::StrictOneHot
    } else {
        DecodeMode::SameSymbol
    };

    let parts = windows(instance.m(), config.window);
    let outcome = match config.solver {
        SolverArg::Sa => run_sa(config, instance, &parts, params, &kind, mode)?,
        SolverArg::Exact => run_exact(instance, &parts, params, &kind, mode)?,
        SolverArg::Decomposed => {
            let positions = windows(instance.m(), Some(1));
            let solution = solve_decomposed(instance, params, &kind)?;
            let optima: Vec<(CspInstance, Vec<Assignment>)> = positions
                .iter()
                .zip(solution.block_optima)
                .map(|(&(start, width), optima)| Ok((instance.window(start, width)?, optima)))
                .collect::<Result<_, Error>>()?;
            let mut out = combine_ground_states(&optima, mode)?;
            out.min_energy = solution.energy;
            out.truncated |= solution.truncated;
            out
        }
    };

    let report = outcome.report;
    let mut results: Vec<ResultRow> = report
        .per_string
        .iter()
        .map(|(s, o)| ResultRow {
            string: s.clone(),
            count: o.count,
            ratio: o.ratio,
        })
        .collect();
    results.sort_by(|x, y| y.count.cmp(&x.count).then_with(|| x.string.cmp(&y.string)));
    let or_p = outcome.p.as_deref().map_or(0.0, |p| report.ratio_of(p));

    Ok(RunReport {
        set,
        instance: InstanceSummary {
            n: instance.n(),
            m: instance.m(),
        },
        hamiltonian: config.hamiltonian,
        advisor,
        solver: config.solver,
        params: RunParams {
            a,
            b: config.b,
            num_reads: config.num_reads,
            seed: config.seed,
            window: config.window,
        },
        results,
        mor: report.mor,
        invalid_count: report.invalid_count,
        total: report.num_reads,
        min_energy: outcome.min_energy,
        p: outcome.p,
        or_p,
        truncated: outcome.truncated,
    })
}

struct Outcome {
    report: OccurrenceReport,
    min_energy: f64,
    p: Option<String>,
    truncated: bool,
}

fn run_sa(
    config: &RunConfig,
    instance: &CspInstance,
    parts: &[(usize, usize)],
    params: PenaltyParams,
    kind: &HamiltonianKind,
    mode: DecodeMode,
) -> Result<Outcome, CliError> {
    let full_model = build_hamiltonian(instance, params, kind)?;
    // each window anneals on its own; read r of the run is the concatenation
    // of read r from every window
    let mut per_window = Vec::with_capacity(parts.len());
    for (j, &(start, width)) in parts.iter().enumerate() {
        let sub = instance.window(start, width)?;
        let model = build_hamiltonian(&sub, params, kind)?;
        let schedule = AnnealSchedule::for_model(&model);
        per_window.push(anneal_reads(
            &model,
            config.num_reads,
            &schedule,
            config.seed.wrapping_add(j as u64),
        )?);
    }
    let reads: Vec<Assignment> = (0..config.num_reads)
        .map(|r| Assignment::concat(per_window.iter().map(|w| &w[r])))
        .collect();
    let samples = SampleSet::from_reads(&full_model, &reads)?;
    let report = occurrence_report_with(&samples, instance, mode)?;

    let mut p = None;
    for record in &samples.records {
        if let DecodedOutcome::Valid(s) = decode_with(&record.assignment, instance, mode)? {
            p = Some(s);
            break;
        }
    }
    Ok(Outcome {
        report,
        min_energy: samples.lowest().map_or(full_model.offset(), |r| r.energy),
        p,
        truncated: false,
    })
}

fn run_exact(
    instance: &CspInstance,
    parts: &[(usize, usize)],
    params: PenaltyParams,
    kind: &HamiltonianKind,
    mode: DecodeMode,
) -> Result<Outcome, CliError> {
    let mut solved = Vec::with_capacity(parts.len());
    let mut energy = 0.0;
    let mut truncated = false;
    for &(start, width) in parts {
        let sub = instance.window(start, width)?;
        let model = build_hamiltonian(&sub, params, kind)?;
        let solution = solve_exhaustive(&model).map_err(|e| match e {
            Error::TooManyVariables { num_vars, limit } => CliError::TooManyVariables { num_vars, limit },
            other => other.into(),
        })?;
        energy += solution.energy;
        truncated |= solution.truncated;
        solved.push((sub, solution.optima));
    }
    let mut out = combine_ground_states(&solved, mode)?;
    out.min_energy = energy;
    out.truncated |= truncated;
    Ok(out)
}

/// Occurrence statistics over every combination of per-part ground states.
/// Each part contributes its decoded substrings; a combination is valid only
/// if all its parts are. `P` joins the first optimum of each part.
fn combine_ground_states(
    parts: &[(CspInstance, Vec<Assignment>)],
    mode: DecodeMode,
) -> Result<Outcome, CliError> {
    let mut combos: BTreeMap<String, usize> = BTreeMap::from([(String::new(), 1)]);
    let mut total = 1usize;
    let mut truncated = false;
    let mut p = Some(String::new());
    for (sub, optima) in parts {
        let mut local: BTreeMap<String, usize> = BTreeMap::new();
        for (k, a) in optima.iter().enumerate() {
            let decoded = decode_with(a, sub, mode)?;
            if k == 0 {
                p = match (p, decoded.as_valid()) {
                    (Some(prefix), Some(s)) => Some(prefix + s),
                    _ => None,
                };
            }
            if let DecodedOutcome::Valid(s) = decoded {
                *local.entry(s).or_default() += 1;
            }
        }
        total = total.saturating_mul(optima.len());
        let mut next: BTreeMap<String, usize> = BTreeMap::new();
        for (prefix, &c) in &combos {
            for (s, &d) in &local {
                next.insert(format!("{prefix}{s}"), c.saturating_mul(d));
            }
        }
        if next.len() > MAX_TIES {
            let mut ranked: Vec<_> = next.into_iter().collect();
            ranked.sort_by(|x, y| y.1.cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
            ranked.truncate(MAX_TIES);
            next = ranked.into_iter().collect();
            truncated = true;
        }
        combos = next;
    }
    let valid: usize = combos.values().sum();
    let report = build_report(total, combos, total.saturating_sub(valid), BTreeMap::new());
    Ok(Outcome {
        report,
        min_energy: 0.0,
        p,
        truncated,
    })
}

pub fn render(report: &RunReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => render_json(report),
        OutputFormat::Table => render_table(report),
    }
}

pub fn render_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |v| v.to_string())
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

pub fn render_table(report: &RunReport) -> String {
    let adv = &report.advisor;
    let mut out = String::new();
    let _ = writeln!(out, "instance     n = {}, m = {}", report.instance.n, report.instance.m);
    let _ = writeln!(
        out,
        "model        {} Hamiltonian, solver {}",
        value_name(report.hamiltonian),
        value_name(report.solver)
    );
    let _ = writeln!(
        out,
        "A range      paper λ = {}: {}   exact λ = {}: {}",
        fmt_opt(adv.lambda_paper),
        adv.a_range_paper.map_or("-".into(), |r| r.to_string()),
        adv.lambda_exact,
        adv.a_range_exact.map_or("-".into(), |r| r.to_string()),
    );
    let _ = writeln!(
        out,
        "chain        {}, spread {:.3}, γ = {} (advisory)",
        adv.chain_case.label(),
        adv.symbol_spread,
        adv.gamma_suggested
    );
    let _ = writeln!(
        out,
        "P16          up to {} strings per position, {} with {} positions embedded",
        adv.capacity_p16,
        adv.max_strings_for_window,
        report.params.window.unwrap_or(report.instance.m)
    );
    let _ = writeln!(out, "min energy   {}", report.min_energy);
    let _ = writeln!(out);

    let p = report.p.as_deref().unwrap_or("-");
    let header = ["Set", "P", "A", "B", "γ", "OR_P", "MOR"];
    let row = [
        report.set.clone(),
        p.to_string(),
        report.params.a.to_string(),
        report.params.b.to_string(),
        adv.gamma_suggested.to_string(),
        report.or_p.to_string(),
        report.mor.to_string(),
    ];
    let widths: Vec<usize> = header
        .iter()
        .zip(&row)
        .map(|(h, r)| h.chars().count().max(r.chars().count()))
        .collect();
    for line in [header.map(String::from).to_vec(), row.to_vec()] {
        let cells: Vec<String> = line
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    let _ = writeln!(out);

    let string_width = report
        .results
        .iter()
        .map(|r| r.string.chars().count())
        .max()
        .unwrap_or(0)
        .max("(invalid)".len());
    let _ = writeln!(out, "{:<string_width$}  {:>8}  OR", "string", "N");
    for r in &report.results {
        let _ = writeln!(out, "{:<string_width$}  {:>8}  {}", r.string, r.count, r.ratio);
    }
    let _ = writeln!(out, "{:<string_width$}  {:>8}", "(invalid)", report.invalid_count);
    let _ = writeln!(out, "{:<string_width$}  {:>8}", "(total)", report.total);
    if report.truncated {
        let _ = writeln!(out, "note: tied ground states were capped at {MAX_TIES}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_skips_blanks_and_comments() {
        let inst = parse_strings("# set 1\naaa\n\n  aaa  \nddd\n").unwrap();
        assert_eq!(inst.strings().len(), 3);
        assert_eq!(inst.m(), 3);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_strings("ab\nabc\n") {
            Err(CliError::Input {
                line: Some(2),
                source: Error::LengthMismatch { .. },
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_strings("# header\n\nab\n\nabc\n") {
            Err(CliError::Input { line: Some(5), .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_strings("\n"),
            Err(CliError::Input {
                line: None,
                source: Error::EmptySet
            })
        ));
    }

    #[test]
    fn window_layout() {
        assert_eq!(windows(6, None), vec![(1, 6)]);
        assert_eq!(windows(6, Some(4)), vec![(1, 4), (5, 2)]);
        assert_eq!(windows(3, Some(1)), vec![(1, 1), (2, 1), (3, 1)]);
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            ingest(Path::new("/nonexistent/strings.txt")),
            Err(CliError::Io { .. })
        ));
    }
}
