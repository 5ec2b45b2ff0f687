//! Per-trace caches of rule evaluations, and random re-partitions of them.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::declare::{evaluate_variant, MeasureKind, Ratio, Rule, RuleTotals, TraceEvaluation};
use crate::exec::Execution;
use crate::log_io::EventLog;

/// Evaluations of every rule of the encoded set on one distinct trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedTrace {
    evaluations: Vec<TraceEvaluation>,
    length: usize,
}

impl EncodedTrace {
    pub fn new(evaluations: Vec<TraceEvaluation>, length: usize) -> Self {
        EncodedTrace {
            evaluations,
            length,
        }
    }

    /// Indexed like the rules of the owning [`EncodedLog`].
    pub fn evaluations(&self) -> &[TraceEvaluation] {
        &self.evaluations
    }

    pub fn length(&self) -> usize {
        self.length
    }
}

/// A log reduced to its rule evaluations: distinct traces with multiplicity.
#[derive(Clone, Debug)]
pub struct EncodedLog {
    rules: Arc<[Rule]>,
    entries: Vec<(Arc<EncodedTrace>, u64)>,
}

impl EncodedLog {
    pub fn new(rules: Arc<[Rule]>, entries: Vec<(Arc<EncodedTrace>, u64)>) -> Self {
        debug_assert!(entries
            .iter()
            .all(|(t, _)| t.evaluations.len() == rules.len()));
        EncodedLog { rules, entries }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn entries(&self) -> &[(Arc<EncodedTrace>, u64)] {
        &self.entries
    }

    /// Number of traces, counting multiplicity.
    pub fn len(&self) -> u64 {
        self.entries.iter().map(|(_, n)| n).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn totals(&self, rule_index: usize) -> RuleTotals {
        let template = self.rules[rule_index].template();
        let mut totals = RuleTotals::new(template.arity() == 1, template.is_mutual());
        for (trace, n) in &self.entries {
            totals.add(&trace.evaluations[rule_index], trace.length, *n);
        }
        totals
    }

    pub fn measure(&self, rule_index: usize, kind: MeasureKind) -> Ratio {
        self.totals(rule_index).measure(kind)
    }

    /// Expands the entries into one item per trace.
    fn pooled(&self) -> impl Iterator<Item = &Arc<EncodedTrace>> {
        self.entries
            .iter()
            .flat_map(|(t, n)| std::iter::repeat_n(t, *n as usize))
    }
}

/// Encodes both logs against `rules`.
pub fn encode_logs(
    log_a: &EventLog,
    log_b: &EventLog,
    rules: &[Rule],
    exec: Execution,
) -> (EncodedLog, EncodedLog) {
    let rules: Arc<[Rule]> = rules.into();
    (
        encode_log(log_a, &rules, exec),
        encode_log(log_b, &rules, exec),
    )
}

fn encode_log(log: &EventLog, rules: &Arc<[Rule]>, exec: Execution) -> EncodedLog {
    let ids: Vec<(Option<u32>, Option<u32>)> = rules
        .iter()
        .map(|r| {
            (
                log.activity_id(r.activator()),
                r.target().and_then(|t| log.activity_id(t)),
            )
        })
        .collect();
    let entries = exec.map(log.variants(), |v| {
        let evaluations = rules
            .iter()
            .zip(&ids)
            .map(|(r, &(a, b))| evaluate_variant(r.template(), a, b, v.events()))
            .collect();
        (
            Arc::new(EncodedTrace::new(evaluations, v.len())),
            v.multiplicity(),
        )
    });
    EncodedLog::new(rules.clone(), entries)
}

/// One uniformly random split of a pool of `n` items into `k` for side A
/// and `n - k` for side B. Only the smaller side is drawn; the rest of
/// the pool is the other side.
pub(crate) struct Partition<'a> {
    pub drawn: &'a [u32],
    pub drawn_is_a: bool,
}

/// Draws a uniformly random subset from `pool`, a Fisher-Yates pass
/// truncated to the size of the smaller side. The pool is permuted in place.
pub(crate) fn draw_partition<'a, R: Rng + ?Sized>(
    pool: &'a mut [u32],
    k: usize,
    rng: &mut R,
) -> Partition<'a> {
    debug_assert!(k <= pool.len());
    let other = pool.len() - k;
    let drawn_is_a = k <= other;
    let amount = if drawn_is_a { k } else { other };
    let (drawn, _) = pool.partial_shuffle(rng, amount);
    Partition { drawn, drawn_is_a }
}

/// Re-partitions the pooled traces of both logs at random, keeping the size
/// of each side. Trace evaluations are moved, never recomputed.
pub fn shuffle_once<R: Rng + ?Sized>(
    enc_a: &EncodedLog,
    enc_b: &EncodedLog,
    rng: &mut R,
) -> (EncodedLog, EncodedLog) {
    let pool: Vec<&Arc<EncodedTrace>> = enc_a.pooled().chain(enc_b.pooled()).collect();
    let mut idx: Vec<u32> = (0..pool.len() as u32).collect();
    let k = enc_a.len() as usize;
    let part = draw_partition(&mut idx, k, rng);
    let mut in_drawn = vec![false; pool.len()];
    for &i in part.drawn {
        in_drawn[i as usize] = true;
    }
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (i, trace) in pool.into_iter().enumerate() {
        if in_drawn[i] == part.drawn_is_a {
            a.push(trace);
        } else {
            b.push(trace);
        }
    }
    (
        EncodedLog::new(enc_a.rules.clone(), collapse(a)),
        EncodedLog::new(enc_a.rules.clone(), collapse(b)),
    )
}

/// Groups consecutive pointers to the same trace into one entry.
fn collapse(traces: Vec<&Arc<EncodedTrace>>) -> Vec<(Arc<EncodedTrace>, u64)> {
    let mut out: Vec<(Arc<EncodedTrace>, u64)> = Vec::new();
    for t in traces {
        match out.last_mut() {
            Some((last, n)) if Arc::ptr_eq(last, t) => *n += 1,
            _ => out.push((t.clone(), 1)),
        }
    }
    out
}
