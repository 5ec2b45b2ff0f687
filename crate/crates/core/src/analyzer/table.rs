//! Reference measurements of the merged specification and the pruning
//! criteria applied to them.

use std::collections::{BTreeSet, HashMap};

use crate::declare::{generalizations, log_measure, MeasureKind, Ratio, Rule};
use crate::discovery::Specification;
use crate::exec::Execution;
use crate::log_io::EventLog;

/// Measures of one rule in both variants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measurement {
    pub rule: Rule,
    pub a: Ratio,
    pub b: Ratio,
}

impl Measurement {
    /// `|e_A − e_B|`.
    pub fn diff(&self) -> f64 {
        self.a.abs_diff(self.b)
    }
}

/// Per-rule measures `E_A`, `E_B` and their difference, one row per rule,
/// sorted by rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementTable {
    measure: MeasureKind,
    rows: Vec<Measurement>,
}

impl MeasurementTable {
    pub fn new(measure: MeasureKind, rows: impl IntoIterator<Item = Measurement>) -> Self {
        let mut rows: Vec<Measurement> = rows.into_iter().collect();
        rows.sort_by(|x, y| x.rule.cmp(&y.rule));
        rows.dedup_by(|later, first| later.rule == first.rule);
        MeasurementTable { measure, rows }
    }

    pub fn measure(&self) -> MeasureKind {
        self.measure
    }

    pub fn rows(&self) -> &[Measurement] {
        &self.rows
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.rows.iter().map(|m| &m.rule)
    }

    pub fn get(&self, rule: &Rule) -> Option<&Measurement> {
        self.rows
            .binary_search_by(|m| m.rule.cmp(rule))
            .ok()
            .map(|i| &self.rows[i])
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn retain(self, keep: impl Fn(&Measurement) -> bool) -> (Self, usize) {
        let before = self.rows.len();
        let rows: Vec<Measurement> = self.rows.into_iter().filter(|m| keep(m)).collect();
        let removed = before - rows.len();
        (
            MeasurementTable {
                measure: self.measure,
                rows,
            },
            removed,
        )
    }
}

/// Merges both specifications and measures every rule of the union on both
/// logs, whichever specification it came from.
pub fn aggregate(
    spec_a: &Specification,
    spec_b: &Specification,
    log_a: &EventLog,
    log_b: &EventLog,
    measure: MeasureKind,
    exec: Execution,
) -> MeasurementTable {
    let union: Vec<Rule> = spec_a
        .iter_rules()
        .chain(spec_b.iter_rules())
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let rows = exec.map(&union, |rule| Measurement {
        rule: rule.clone(),
        a: log_measure(rule, log_a, measure),
        b: log_measure(rule, log_b, measure),
    });
    MeasurementTable::new(measure, rows)
}

/// Rules removed by each pruning criterion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PruneCounts {
    pub min_difference: usize,
    pub min_interest: usize,
    pub redundancy: usize,
}

/// Drops rules whose difference is below `m_diff_min`, then rules below
/// `m_min` in both variants. Returns the surviving table and how many rules
/// each criterion removed.
pub fn prune_thresholds(
    table: MeasurementTable,
    m_min: f64,
    m_diff_min: f64,
) -> (MeasurementTable, PruneCounts) {
    let (table, min_difference) = table.retain(|m| m.diff() >= m_diff_min);
    let (table, min_interest) = table.retain(|m| !(m.a.value() < m_min && m.b.value() < m_min));
    (
        table,
        PruneCounts {
            min_difference,
            min_interest,
            redundancy: 0,
        },
    )
}

/// Removes every rule that entails another rule of the table with an equal
/// measure in at least one variant, keeping the more general one. The test
/// is made against the table as given, so removals do not cascade.
pub fn hierarchical_simplification(table: MeasurementTable) -> (MeasurementTable, usize) {
    let index: HashMap<&Rule, &Measurement> = table.rows.iter().map(|m| (&m.rule, m)).collect();
    let redundant: BTreeSet<Rule> = table
        .rows
        .iter()
        .filter(|m| {
            generalizations(&m.rule).iter().any(|g| {
                index
                    .get(g)
                    .is_some_and(|general| general.a == m.a || general.b == m.b)
            })
        })
        .map(|m| m.rule.clone())
        .collect();
    drop(index);
    table.retain(|m| !redundant.contains(&m.rule))
}
