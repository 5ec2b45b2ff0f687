//! Exact p-values by enumerating every re-partition of a small pool.
//!
//! This is a reference for the Monte-Carlo test. It shares no measure code
//! with it: measures are recomputed here in floating point straight from
//! the trace evaluations.

use super::encode::{EncodedLog, EncodedTrace};
use crate::declare::MeasureKind;
use crate::error::{Error, Result};

pub const DEFAULT_POOL_LIMIT: usize = 15;

/// Differences within this distance of the threshold count as reaching it.
const TOLERANCE: f64 = 1e-9;

/// Fraction of all splits of the pooled traces into sides of the original
/// sizes whose measure difference for rule `rule_index` is at least
/// `e_diff`. Every pooled trace is a distinct item, so duplicate traces
/// weigh by their multiplicity.
pub fn exact_pvalue(
    enc_a: &EncodedLog,
    enc_b: &EncodedLog,
    rule_index: usize,
    kind: MeasureKind,
    e_diff: f64,
    limit: usize,
) -> Result<f64> {
    let pool: Vec<&EncodedTrace> = [enc_a, enc_b]
        .into_iter()
        .flat_map(|e| {
            e.entries()
                .iter()
                .flat_map(|(t, n)| std::iter::repeat_n(&**t, *n as usize))
        })
        .collect();
    let n = pool.len();
    if n > limit || n >= 64 {
        return Err(Error::PoolTooLarge { size: n, limit });
    }
    let k = enc_a.len() as usize;
    let template = enc_a.rules()[rule_index].template();
    let unary = template.arity() == 1;
    let mutual = template.is_mutual();

    let side_measure = |mask: u64, in_side: bool| -> f64 {
        let (mut fa, mut fs, mut ba, mut bs, mut events, mut traces) =
            (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for (i, t) in pool.iter().enumerate() {
            if (mask >> i & 1 == 1) != in_side {
                continue;
            }
            let e = t.evaluations()[rule_index];
            fa += e.forward.activations as f64;
            fs += e.forward.satisfactions as f64;
            if let Some(b) = e.backward {
                ba += b.activations as f64;
                bs += b.satisfactions as f64;
            }
            events += t.length() as f64;
            traces += 1.0;
        }
        let ratio = |num: f64, den: f64| if den == 0.0 { 0.0 } else { num / den };
        let part = |act: f64, sat: f64| match kind {
            MeasureKind::Confidence => ratio(sat, act),
            MeasureKind::Support if unary => ratio(sat, traces),
            MeasureKind::Support => ratio(sat, events),
        };
        let forward = part(fa, fs);
        if mutual {
            forward.min(part(ba, bs))
        } else {
            forward
        }
    };

    let (mut hits, mut total) = (0u64, 0u64);
    for mask in Combinations::new(n, k) {
        let diff = (side_measure(mask, true) - side_measure(mask, false)).abs();
        if diff >= e_diff - TOLERANCE {
            hits += 1;
        }
        total += 1;
    }
    Ok(hits as f64 / total as f64)
}

/// All `n`-bit masks with exactly `k` bits set, in increasing order.
struct Combinations {
    next: Option<u64>,
    n: usize,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        debug_assert!(k <= n && n < 64);
        Combinations {
            next: Some((1u64 << k) - 1),
            n,
        }
    }
}

impl Iterator for Combinations {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            // Gosper's hack: the next larger integer with the same popcount.
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let succ = (((r ^ cur) >> 2) / c) | r;
            (succ >> self.n == 0).then_some(succ)
        };
        Some(cur)
    }
}
