//! Event logs: parsing from XES and CSV, and descriptive statistics.
//!
//! An [`EventLog`] is a multiset of traces. Identical event sequences are
//! collapsed on construction into a single [`TraceVariant`] carrying its
//! multiplicity, since every measure downstream only depends on the distinct
//! sequence and how often it occurs. Activities are interned per log: a
//! variant stores indices into the log's sorted alphabet.

mod csv;
mod xes;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

pub use self::csv::{parse_csv, parse_csv_reader, write_csv, CsvMapping};
pub use self::xes::{parse_xes, parse_xes_str, write_xes};

/// An activity label. Equality is exact text match.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Activity(Arc<str>);

impl Activity {
    pub fn new(name: &str) -> Self {
        Activity(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&*self.0, f)
    }
}

impl fmt::Display for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Activity {
    fn from(name: &str) -> Self {
        Activity::new(name)
    }
}

impl From<String> for Activity {
    fn from(name: String) -> Self {
        Activity(Arc::from(name))
    }
}

/// A finite sequence of events, identified by their activity labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Trace(Vec<Activity>);

impl Trace {
    pub fn new(events: Vec<Activity>) -> Self {
        Trace(events)
    }

    pub fn events(&self) -> &[Activity] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: AsRef<str>> FromIterator<S> for Trace {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Trace(
            iter.into_iter()
                .map(|s| Activity::new(s.as_ref()))
                .collect(),
        )
    }
}

/// A distinct trace of a log together with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceVariant {
    events: Vec<u32>,
    multiplicity: u64,
}

impl TraceVariant {
    /// Event sequence as indices into the owning log's alphabet.
    pub fn events(&self) -> &[u32] {
        &self.events
    }

    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// A multiset of traces over a finite alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventLog {
    source_id: String,
    alphabet: Vec<Activity>,
    variants: Vec<TraceVariant>,
}

impl EventLog {
    /// Builds a log from traces in any order; duplicates are collapsed.
    pub fn from_traces<I>(source_id: impl Into<String>, traces: I) -> Self
    where
        I: IntoIterator<Item = Trace>,
    {
        let mut counts: BTreeMap<Trace, u64> = BTreeMap::new();
        for trace in traces {
            *counts.entry(trace).or_insert(0) += 1;
        }
        Self::from_counts(source_id, counts)
    }

    /// Builds a log from distinct traces and their multiplicities. Entries
    /// with zero multiplicity are dropped; repeated traces are merged.
    pub fn from_counts<I>(source_id: impl Into<String>, counts: I) -> Self
    where
        I: IntoIterator<Item = (Trace, u64)>,
    {
        let mut merged: BTreeMap<Trace, u64> = BTreeMap::new();
        for (trace, n) in counts {
            if n > 0 {
                *merged.entry(trace).or_insert(0) += n;
            }
        }
        let alphabet: Vec<Activity> = merged
            .keys()
            .flat_map(|t| t.events().iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let variants = merged
            .into_iter()
            .map(|(trace, multiplicity)| TraceVariant {
                events: trace
                    .events()
                    .iter()
                    .map(|a| alphabet.binary_search(a).expect("activity in alphabet") as u32)
                    .collect(),
                multiplicity,
            })
            .collect();
        EventLog {
            source_id: source_id.into(),
            alphabet,
            variants,
        }
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    /// Distinct activity labels, sorted.
    pub fn alphabet(&self) -> &[Activity] {
        &self.alphabet
    }

    pub fn activity_id(&self, activity: &Activity) -> Option<u32> {
        self.alphabet.binary_search(activity).ok().map(|i| i as u32)
    }

    pub fn activity(&self, id: u32) -> &Activity {
        &self.alphabet[id as usize]
    }

    pub fn variants(&self) -> &[TraceVariant] {
        &self.variants
    }

    /// Distinct traces with their multiplicities, in a deterministic order.
    pub fn traces(&self) -> impl Iterator<Item = (Trace, u64)> + '_ {
        self.variants
            .iter()
            .map(|v| (self.materialize(v), v.multiplicity))
    }

    pub fn materialize(&self, variant: &TraceVariant) -> Trace {
        Trace(
            variant
                .events
                .iter()
                .map(|&id| self.alphabet[id as usize].clone())
                .collect(),
        )
    }

    /// Number of traces counting multiplicity, `|L|`.
    pub fn len(&self) -> u64 {
        self.variants.iter().map(|v| v.multiplicity).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.variants.is_empty()
    }

    pub fn total_events(&self) -> u64 {
        self.variants
            .iter()
            .map(|v| v.multiplicity * v.events.len() as u64)
            .sum()
    }

    pub fn stats(&self) -> LogStats {
        stats(self)
    }
}

/// Descriptive statistics of a log.
#[derive(Clone, Debug, PartialEq)]
pub struct LogStats {
    pub total_traces: u64,
    pub distinct_traces: usize,
    pub total_events: u64,
    pub distinct_events: usize,
    pub min_length: usize,
    pub avg_length: f64,
    pub max_length: usize,
}

impl LogStats {
    /// Share of distinct traces over all traces, in percent.
    pub fn distinct_trace_percent(&self) -> f64 {
        if self.total_traces == 0 {
            0.0
        } else {
            100.0 * self.distinct_traces as f64 / self.total_traces as f64
        }
    }
}

pub fn stats(log: &EventLog) -> LogStats {
    let total_traces = log.len();
    let total_events = log.total_events();
    let min_length = log
        .variants
        .iter()
        .map(TraceVariant::len)
        .min()
        .unwrap_or(0);
    let max_length = log
        .variants
        .iter()
        .map(TraceVariant::len)
        .max()
        .unwrap_or(0);
    let avg_length = if total_traces == 0 {
        0.0
    } else {
        total_events as f64 / total_traces as f64
    };
    LogStats {
        total_traces,
        distinct_traces: log.variants.len(),
        total_events,
        distinct_events: log.alphabet.len(),
        min_length,
        avg_length,
        max_length,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(s: &str) -> Trace {
        s.chars().map(|c| c.to_string()).collect()
    }

    #[test]
    fn duplicates_collapse() {
        let log = EventLog::from_traces("t", vec![trace("ab"), trace("ab")]);
        assert_eq!(log.variants().len(), 1);
        assert_eq!(log.len(), 2);
        assert_eq!(
            log.alphabet(),
            &[Activity::new("a"), Activity::new("b")][..]
        );
        let (t, n) = log.traces().next().unwrap();
        assert_eq!(t, trace("ab"));
        assert_eq!(n, 2);
    }

    #[test]
    fn stats_of_two_identical_traces() {
        let log = EventLog::from_traces("t", vec![trace("ab"), trace("ab")]);
        let s = log.stats();
        assert_eq!(s.total_traces, 2);
        assert_eq!(s.distinct_traces, 1);
        assert_eq!(s.total_events, 4);
        assert_eq!(s.distinct_events, 2);
        assert_eq!((s.min_length, s.max_length), (2, 2));
        assert_eq!(s.avg_length, 2.0);
    }

    #[test]
    fn stats_of_empty_log() {
        let log = EventLog::from_traces("t", Vec::new());
        let s = log.stats();
        assert_eq!(s.total_traces, 0);
        assert_eq!(s.avg_length, 0.0);
        assert_eq!(s.distinct_trace_percent(), 0.0);
    }

    #[test]
    fn zero_multiplicity_dropped() {
        let log = EventLog::from_counts("t", vec![(trace("a"), 0), (trace("b"), 3)]);
        assert_eq!(log.len(), 3);
        assert_eq!(log.alphabet(), &[Activity::new("b")][..]);
    }

    #[test]
    fn total_events_sums_multiplicity_times_length() {
        let log = EventLog::from_counts("t", vec![(trace("abc"), 2), (trace("a"), 5)]);
        assert_eq!(log.stats().total_events, 2 * 3 + 5);
        assert!((log.stats().avg_length - 11.0 / 7.0).abs() < 1e-12);
    }
}
