//! The permutation test over encoded logs.
//!
//! Each iteration draws a random re-partition of the pooled traces and
//! recomputes every rule's measures from the cached per-trace counts. The
//! pooled traces are grouped into classes (one per distinct trace of
//! either log) so an iteration only sums the rows of the classes it drew.

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::encode::{draw_partition, EncodedLog};
use super::table::MeasurementTable;
use crate::declare::measure::cmp_fractions;
use crate::declare::{MeasureKind, Ratio, RuleTotals, Totals};
use crate::exec::Execution;

/// Per-rule outcome of the test, indexed like the tested table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationOutcome {
    permutations: u64,
    exceedances: Vec<u64>,
}

impl PermutationOutcome {
    pub fn new(permutations: u64, exceedances: Vec<u64>) -> Self {
        PermutationOutcome {
            permutations,
            exceedances,
        }
    }

    pub fn permutations(&self) -> u64 {
        self.permutations
    }

    /// Iterations whose shuffled difference reached the observed one.
    pub fn exceedances(&self, rule_index: usize) -> u64 {
        self.exceedances[rule_index]
    }

    /// The counter `C(r)`, which starts at 1.
    pub fn counter(&self, rule_index: usize) -> u64 {
        self.exceedances[rule_index] + 1
    }

    /// `C(r) / π`, in `[1/π, (π+1)/π]`.
    pub fn p_value(&self, rule_index: usize) -> f64 {
        self.counter(rule_index) as f64 / self.permutations as f64
    }

    pub fn len(&self) -> usize {
        self.exceedances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exceedances.is_empty()
    }
}

/// Runs `permutations` iterations with per-iteration RNG streams derived from
/// `seed`, so the outcome does not depend on `exec`.
///
/// # Panics
/// If the encoded logs and the table do not list the same rules.
pub fn permutation_test(
    enc_a: &EncodedLog,
    enc_b: &EncodedLog,
    table: &MeasurementTable,
    permutations: u64,
    seed: u64,
    exec: Execution,
) -> PermutationOutcome {
    assert!(
        enc_a.rules().iter().eq(table.rules()) && enc_b.rules().iter().eq(table.rules()),
        "encoded logs and measurement table disagree on the rule set"
    );
    let rules = table.len();
    if rules == 0 || permutations == 0 {
        return PermutationOutcome::new(permutations, vec![0; rules]);
    }
    let classes = Classes::new(enc_a, enc_b);
    let observed: Vec<(u128, u128)> = table
        .rows()
        .iter()
        .map(|m| m.a.abs_diff_parts(m.b))
        .collect();
    let kind = table.measure();
    let base = ChaCha8Rng::seed_from_u64(seed);

    let run = exec.fold_range(
        permutations,
        || Scratch::new(&classes),
        |s, i| {
            let mut rng = base.clone();
            rng.set_stream(i);
            s.iterate(&classes, &observed, kind, &mut rng);
        },
        |mut x, y| {
            for (e, f) in x.exceedances.iter_mut().zip(&y.exceedances) {
                *e += f;
            }
            x
        },
    );
    PermutationOutcome::new(permutations, run.exceedances)
}

/// Counter layout of one class row: trace length, then four counters per
/// rule (forward activations and satisfactions, backward activations and
/// satisfactions).
const PER_RULE: usize = 4;

struct Classes {
    /// Class id of every pooled trace, side A first.
    pool: Vec<u32>,
    size_a: usize,
    width: usize,
    rows: Vec<u64>,
    /// Sum of all rows weighted by multiplicity.
    total: Vec<u64>,
    unary: Vec<bool>,
    mutual: Vec<bool>,
}

impl Classes {
    fn new(enc_a: &EncodedLog, enc_b: &EncodedLog) -> Self {
        let rules = enc_a.rules();
        let width = 1 + PER_RULE * rules.len();
        let entries: Vec<_> = enc_a.entries().iter().chain(enc_b.entries()).collect();
        let mut rows = Vec::with_capacity(entries.len() * width);
        let mut total = vec![0u64; width];
        let mut pool = Vec::with_capacity((enc_a.len() + enc_b.len()) as usize);
        for (class, (trace, n)) in entries.into_iter().enumerate() {
            let start = rows.len();
            rows.push(trace.length() as u64);
            for e in trace.evaluations() {
                let back = e.backward.unwrap_or_default();
                rows.extend([
                    e.forward.activations as u64,
                    e.forward.satisfactions as u64,
                    back.activations as u64,
                    back.satisfactions as u64,
                ]);
            }
            for (t, r) in total.iter_mut().zip(&rows[start..]) {
                *t += n * r;
            }
            pool.extend(std::iter::repeat_n(class as u32, *n as usize));
        }
        Classes {
            pool,
            size_a: enc_a.len() as usize,
            width,
            rows,
            total,
            unary: rules.iter().map(|r| r.template().arity() == 1).collect(),
            mutual: rules.iter().map(|r| r.template().is_mutual()).collect(),
        }
    }

    fn row(&self, class: u32) -> &[u64] {
        let start = class as usize * self.width;
        &self.rows[start..start + self.width]
    }

    fn measure(&self, sums: &[u64], traces: u64, rule: usize, kind: MeasureKind) -> Ratio {
        let c = &sums[1 + PER_RULE * rule..1 + PER_RULE * (rule + 1)];
        let totals = RuleTotals {
            forward: Totals {
                activations: c[0],
                satisfactions: c[1],
            },
            backward: self.mutual[rule].then_some(Totals {
                activations: c[2],
                satisfactions: c[3],
            }),
            events: sums[0],
            traces,
            activated_traces: 0,
            unary: self.unary[rule],
        };
        totals.measure(kind)
    }
}

struct Scratch {
    pool: Vec<u32>,
    counts: Vec<u64>,
    touched: Vec<u32>,
    drawn: Vec<u64>,
    rest: Vec<u64>,
    exceedances: Vec<u64>,
}

impl Scratch {
    fn new(classes: &Classes) -> Self {
        Scratch {
            pool: classes.pool.clone(),
            counts: vec![0; classes.rows.len() / classes.width],
            touched: Vec::new(),
            drawn: vec![0; classes.width],
            rest: vec![0; classes.width],
            exceedances: vec![0; classes.unary.len()],
        }
    }

    fn iterate(
        &mut self,
        classes: &Classes,
        observed: &[(u128, u128)],
        kind: MeasureKind,
        rng: &mut ChaCha8Rng,
    ) {
        self.pool.copy_from_slice(&classes.pool);
        let part = draw_partition(&mut self.pool, classes.size_a, rng);
        for &c in part.drawn {
            if self.counts[c as usize] == 0 {
                self.touched.push(c);
            }
            self.counts[c as usize] += 1;
        }
        self.drawn.fill(0);
        for &c in &self.touched {
            let w = std::mem::take(&mut self.counts[c as usize]);
            for (s, r) in self.drawn.iter_mut().zip(classes.row(c)) {
                *s += w * r;
            }
        }
        self.touched.clear();
        for ((r, t), d) in self.rest.iter_mut().zip(&classes.total).zip(&self.drawn) {
            *r = t - d;
        }
        let n_drawn = part.drawn.len() as u64;
        let n_rest = classes.pool.len() as u64 - n_drawn;
        let ((sa, na), (sb, nb)) = if part.drawn_is_a {
            ((&self.drawn, n_drawn), (&self.rest, n_rest))
        } else {
            ((&self.rest, n_rest), (&self.drawn, n_drawn))
        };
        for (rule, &(en, ed)) in observed.iter().enumerate() {
            let ma = classes.measure(sa, na, rule, kind);
            let mb = classes.measure(sb, nb, rule, kind);
            let (n, d) = ma.abs_diff_parts(mb);
            if cmp_fractions((n, d), (en, ed)) != Ordering::Less {
                self.exceedances[rule] += 1;
            }
        }
    }
}
