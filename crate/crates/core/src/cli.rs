//! Command-line configuration and the end-to-end run.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::Parser;

use crate::analyzer::{analyze, Analysis, AnalysisParams};
use crate::declare::MeasureKind;
use crate::discovery::{read_specification, DiscoveryParams, ThresholdBasis};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::log_io::{parse_csv, parse_xes, CsvMapping, EventLog, LogStats};
use crate::report::{rank, write_outputs, OutputPaths};

/// Finds statistically significant behavioural differences between two
/// variant logs and reports them as Declare rules.
#[derive(Parser, Clone, Debug, PartialEq)]
#[command(name = "declare-variants", version)]
pub struct RunConfig {
    /// Log of variant A (.xes or .csv).
    #[arg(long)]
    pub log_a: PathBuf,
    /// Log of variant B (.xes or .csv).
    #[arg(long)]
    pub log_b: PathBuf,
    /// JSON specification of variant A; discovered from the log if absent.
    #[arg(long)]
    pub model_a: Option<PathBuf>,
    /// JSON specification of variant B; discovered from the log if absent.
    #[arg(long)]
    pub model_b: Option<PathBuf>,
    /// support or confidence.
    #[arg(long, default_value = "confidence")]
    pub measure: MeasureKind,
    /// Minimum measure a rule must reach in at least one variant.
    #[arg(long, default_value_t = 0.0)]
    pub m_min: f64,
    /// Minimum difference between the variants' measures.
    #[arg(long, default_value_t = 0.01)]
    pub m_diff_min: f64,
    /// Iterations of the permutation test.
    #[arg(long, default_value_t = 1000)]
    pub permutations: u64,
    /// Significance level.
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    /// Statements written to the text report.
    #[arg(long, default_value_t = 10)]
    pub top_n: usize,
    /// Discovery threshold on Support.
    #[arg(long, default_value_t = 0.5)]
    pub support_min: f64,
    /// Discovery threshold on Confidence.
    #[arg(long, default_value_t = 0.0)]
    pub confidence_min: f64,
    /// Denominator of the discovery Support threshold: activation or event.
    #[arg(long, default_value = "activation")]
    pub discovery_basis: ThresholdBasis,
    /// Seed of the permutation test; drawn at random when absent.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory receiving the text and CSV reports.
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
    /// Worker threads; 0 uses every available core, 1 runs sequentially.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, default_value = "case")]
    pub csv_case_column: String,
    #[arg(long, default_value = "activity")]
    pub csv_activity_column: String,
    /// Column ordering the events of a case; defaults to `timestamp` if present.
    #[arg(long)]
    pub csv_order_column: Option<String>,
    /// Log more (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

impl RunConfig {
    pub fn analysis_params(&self) -> AnalysisParams {
        AnalysisParams {
            measure: self.measure,
            m_min: self.m_min,
            m_diff_min: self.m_diff_min,
            permutations: self.permutations,
            alpha: self.alpha,
            seed: self.seed,
            execution: Execution::with_workers(self.workers),
        }
    }

    pub fn discovery_params(&self) -> DiscoveryParams {
        DiscoveryParams {
            support_min: self.support_min,
            confidence_min: self.confidence_min,
            basis: self.discovery_basis,
        }
    }

    pub fn csv_mapping(&self) -> CsvMapping {
        CsvMapping {
            case: self.csv_case_column.clone(),
            activity: self.csv_activity_column.clone(),
            order: self.csv_order_column.clone(),
        }
    }
}

/// Reads a log, choosing the parser from the file extension.
pub fn load_log(path: &Path, mapping: &CsvMapping) -> Result<EventLog> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("xes") => parse_xes(path),
        Some("csv") => parse_csv(path, mapping),
        _ => Err(Error::InvalidParameter(format!(
            "{}: unsupported log format (expected .xes or .csv)",
            path.display()
        ))),
    }
}

/// What a run did, printed at its end.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub stats: (LogStats, LogStats),
    pub models_given: (bool, bool),
    pub analysis: Analysis,
    pub outputs: OutputPaths,
    pub parse_time: Duration,
    pub report_time: Duration,
    pub total_time: Duration,
}

/// Parses, analyses and writes the reports.
pub fn run(config: &RunConfig) -> Result<RunSummary> {
    let started = Instant::now();
    let params = config.analysis_params();
    params.validate()?;
    let discovery = config.discovery_params();
    discovery.validate()?;

    let mapping = config.csv_mapping();
    let log_a = load_log(&config.log_a, &mapping)?;
    let log_b = load_log(&config.log_b, &mapping)?;
    let spec_a = config
        .model_a
        .as_ref()
        .map(read_specification)
        .transpose()?;
    let spec_b = config
        .model_b
        .as_ref()
        .map(read_specification)
        .transpose()?;
    let parse_time = started.elapsed();

    let analysis = analyze(
        &log_a,
        &log_b,
        spec_a.as_ref(),
        spec_b.as_ref(),
        &params,
        &discovery,
    )?;
    if analysis.union_size == 0 {
        return Err(Error::Degenerate(
            "no rule was discovered or provided for either variant".into(),
        ));
    }

    let report_started = Instant::now();
    let statements = rank(&analysis.significant);
    let outputs = write_outputs(&statements, &config.out_dir, config.top_n)?;
    let report_time = report_started.elapsed();

    Ok(RunSummary {
        stats: (log_a.stats(), log_b.stats()),
        models_given: (spec_a.is_some(), spec_b.is_some()),
        analysis,
        outputs,
        parse_time,
        report_time,
        total_time: started.elapsed(),
    })
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.analysis;
        let p = &a.params;
        writeln!(f, "seed: {}", a.seed)?;
        for (label, s) in [("A", &self.stats.0), ("B", &self.stats.1)] {
            writeln!(
                f,
                "log {label}: {} traces ({} distinct), {} events, {} activities",
                s.total_traces, s.distinct_traces, s.total_events, s.distinct_events
            )?;
        }
        for (label, given, size) in [
            ("A", self.models_given.0, a.spec_sizes.0),
            ("B", self.models_given.1, a.spec_sizes.1),
        ] {
            let origin = if given { "loaded" } else { "discovered" };
            writeln!(f, "specification {label}: {size} rules ({origin})")?;
        }
        writeln!(f, "merged specification: {} rules", a.union_size)?;
        writeln!(
            f,
            "pruned: {} below minimum difference, {} below minimum measure, {} redundant",
            a.pruned.min_difference, a.pruned.min_interest, a.pruned.redundancy
        )?;
        writeln!(
            f,
            "tested: {} rules, {} permutations, {} measure",
            a.tested.len(),
            p.permutations,
            p.measure
        )?;
        writeln!(f, "significant (p <= {}): {}", p.alpha, a.significant.len())?;
        let secs = |d: Duration| d.as_secs_f64();
        writeln!(
            f,
            "time: parse {:.3}s, discovery {:.3}s, preprocessing {:.3}s, permutation test {:.3}s, report {:.3}s, total {:.3}s",
            secs(self.parse_time),
            secs(a.timings.discovery),
            secs(a.timings.preprocessing),
            secs(a.timings.permutation),
            secs(self.report_time),
            secs(self.total_time)
        )?;
        writeln!(f, "text report: {}", self.outputs.text.display())?;
        writeln!(f, "csv report: {}", self.outputs.csv.display())
    }
}
