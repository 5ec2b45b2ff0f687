//! Statistically significant differences between two variant logs.
//!
//! The pipeline merges and measures both specifications, prunes rules with
//! small or uninteresting differences and redundant rules, encodes the
//! traces, and runs a permutation test on what remains.

mod encode;
mod oracle;
mod permutation;
mod table;

use std::time::{Duration, Instant};

pub use encode::{encode_logs, shuffle_once, EncodedLog, EncodedTrace};
pub use oracle::{exact_pvalue, DEFAULT_POOL_LIMIT};
pub use permutation::{permutation_test, PermutationOutcome};
pub use table::{
    aggregate, hierarchical_simplification, prune_thresholds, Measurement, MeasurementTable,
    PruneCounts,
};

use crate::declare::{MeasureKind, Ratio, Rule};
use crate::discovery::{discover, DiscoveryParams, Specification};
use crate::error::{check_unit, Error, Result};
use crate::exec::Execution;
use crate::log_io::EventLog;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalysisParams {
    pub measure: MeasureKind,
    pub m_min: f64,
    pub m_diff_min: f64,
    pub permutations: u64,
    pub alpha: f64,
    /// Drawn from the OS when absent; the seed used is reported back.
    pub seed: Option<u64>,
    pub execution: Execution,
}

impl Default for AnalysisParams {
    fn default() -> Self {
        AnalysisParams {
            measure: MeasureKind::Confidence,
            m_min: 0.0,
            m_diff_min: 0.01,
            permutations: 1000,
            alpha: 0.01,
            seed: None,
            execution: Execution::default(),
        }
    }
}

impl AnalysisParams {
    pub fn validate(&self) -> Result<()> {
        check_unit("m_min", self.m_min)?;
        check_unit("m_diff_min", self.m_diff_min)?;
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::ThresholdOutOfRange {
                name: "alpha",
                value: self.alpha,
                expected: "(0, 1)",
            });
        }
        if self.permutations == 0 {
            return Err(Error::InvalidParameter(
                "the number of permutations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// A tested rule with everything reported about it.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleResult {
    pub rule: Rule,
    pub measure_a: Ratio,
    pub measure_b: Ratio,
    pub diff: f64,
    pub exceedances: u64,
    pub p_value: f64,
}

impl RuleResult {
    pub fn counter(&self) -> u64 {
        self.exceedances + 1
    }
}

/// Wall-clock time spent in each phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Timings {
    pub discovery: Duration,
    pub preprocessing: Duration,
    pub permutation: Duration,
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub seed: u64,
    pub params: AnalysisParams,
    pub spec_sizes: (usize, usize),
    /// Size of the merged specification before pruning.
    pub union_size: usize,
    pub pruned: PruneCounts,
    /// Measurements of the rules that went through the permutation test.
    pub table: MeasurementTable,
    pub outcome: PermutationOutcome,
    /// Every tested rule, in table order.
    pub tested: Vec<RuleResult>,
    /// Tested rules with `p_value ≤ α`, in table order.
    pub significant: Vec<RuleResult>,
    pub timings: Timings,
}

/// Runs the full pipeline. Missing specifications are discovered from their
/// log with `discovery`.
pub fn analyze(
    log_a: &EventLog,
    log_b: &EventLog,
    spec_a: Option<&Specification>,
    spec_b: Option<&Specification>,
    params: &AnalysisParams,
    discovery: &DiscoveryParams,
) -> Result<Analysis> {
    params.validate()?;
    for log in [log_a, log_b] {
        if log.is_empty() {
            return Err(Error::Degenerate(format!(
                "variant log {:?} has no traces",
                log.source_id()
            )));
        }
    }
    if !log_a
        .alphabet()
        .iter()
        .any(|x| log_b.activity_id(x).is_some())
    {
        log::warn!(
            "the activity alphabets of {:?} and {:?} are disjoint",
            log_a.source_id(),
            log_b.source_id()
        );
    }
    let seed = params.seed.unwrap_or_else(rand::random);
    let exec = params.execution;

    let started = Instant::now();
    let discovered;
    let (spec_a, spec_b) = match (spec_a, spec_b) {
        (Some(a), Some(b)) => (a, b),
        (a, b) => {
            let run = |log: &EventLog, given: Option<&Specification>| match given {
                Some(s) => Ok(s.clone()),
                None => discover(log, discovery, exec),
            };
            discovered = (run(log_a, a)?, run(log_b, b)?);
            (&discovered.0, &discovered.1)
        }
    };
    let discovery_time = started.elapsed();

    let started = Instant::now();
    let table = aggregate(spec_a, spec_b, log_a, log_b, params.measure, exec);
    let union_size = table.len();
    let (table, mut pruned) = prune_thresholds(table, params.m_min, params.m_diff_min);
    let (table, redundancy) = hierarchical_simplification(table);
    pruned.redundancy = redundancy;
    if table.is_empty() {
        log::warn!("no rule left to test after pruning");
    }
    let rules: Vec<Rule> = table.rules().cloned().collect();
    let (enc_a, enc_b) = encode_logs(log_a, log_b, &rules, exec);
    let preprocessing_time = started.elapsed();

    let started = Instant::now();
    let outcome = permutation_test(&enc_a, &enc_b, &table, params.permutations, seed, exec);
    let permutation_time = started.elapsed();

    let tested: Vec<RuleResult> = table
        .rows()
        .iter()
        .enumerate()
        .map(|(i, m)| RuleResult {
            rule: m.rule.clone(),
            measure_a: m.a,
            measure_b: m.b,
            diff: m.diff(),
            exceedances: outcome.exceedances(i),
            p_value: outcome.p_value(i),
        })
        .collect();
    let significant = tested
        .iter()
        .filter(|r| r.p_value <= params.alpha)
        .cloned()
        .collect();

    Ok(Analysis {
        seed,
        params: *params,
        spec_sizes: (spec_a.len(), spec_b.len()),
        union_size,
        pruned,
        table,
        outcome,
        tested,
        significant,
        timings: Timings {
            discovery: discovery_time,
            preprocessing: preprocessing_time,
            permutation: permutation_time,
        },
    })
}
