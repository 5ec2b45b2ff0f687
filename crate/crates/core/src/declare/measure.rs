//! Support and Confidence of rules on logs.
//!
//! Measures are exact fractions built from integer sums of per-trace counts,
//! so they can be recomputed from cached trace evaluations and compared
//! without rounding.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::eval::{evaluate_variant, TraceEvaluation};
use super::Rule;
use crate::error::Error;
use crate::log_io::EventLog;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MeasureKind {
    Support,
    #[default]
    Confidence,
}

impl MeasureKind {
    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Support => "support",
            MeasureKind::Confidence => "confidence",
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "support" => Ok(MeasureKind::Support),
            "confidence" => Ok(MeasureKind::Confidence),
            other => Err(Error::InvalidParameter(format!(
                "unknown measure {other:?} (expected support or confidence)"
            ))),
        }
    }
}

/// A non-negative fraction `num / den`. A zero denominator stands for the
/// value 0.
#[derive(Clone, Copy, Debug, Default)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };

    pub fn new(num: u64, den: u64) -> Self {
        if den == 0 {
            Ratio::ZERO
        } else {
            Ratio { num, den }
        }
    }

    pub fn numer(self) -> u64 {
        self.num
    }

    pub fn denom(self) -> u64 {
        self.den
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `|self - other|` as the nearest `f64`.
    pub fn abs_diff(self, other: Ratio) -> f64 {
        let (n, d) = self.abs_diff_parts(other);
        n as f64 / d as f64
    }

    /// `|self - other|` as an unreduced fraction.
    pub fn abs_diff_parts(self, other: Ratio) -> (u128, u128) {
        let l = self.num as u128 * other.den as u128;
        let r = other.num as u128 * self.den as u128;
        (l.abs_diff(r), self.den as u128 * other.den as u128)
    }

    pub fn min(self, other: Ratio) -> Ratio {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Activation and satisfaction sums of one rule direction over a log.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Totals {
    pub activations: u64,
    pub satisfactions: u64,
}

/// Everything a log measure needs: per-direction sums plus the number of
/// events and traces of the log.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RuleTotals {
    pub forward: Totals,
    pub backward: Option<Totals>,
    pub events: u64,
    pub traces: u64,
    /// Traces with at least one activation, in either direction.
    pub activated_traces: u64,
    pub unary: bool,
}

impl RuleTotals {
    pub fn new(unary: bool, mutual: bool) -> Self {
        RuleTotals {
            backward: mutual.then(Totals::default),
            unary,
            ..Default::default()
        }
    }

    /// Adds one trace of length `len`, `multiplicity` times.
    pub fn add(&mut self, eval: &TraceEvaluation, len: usize, multiplicity: u64) {
        self.forward.activations += multiplicity * eval.forward.activations as u64;
        self.forward.satisfactions += multiplicity * eval.forward.satisfactions as u64;
        if let (Some(total), Some(part)) = (self.backward.as_mut(), eval.backward) {
            total.activations += multiplicity * part.activations as u64;
            total.satisfactions += multiplicity * part.satisfactions as u64;
        }
        self.events += multiplicity * len as u64;
        self.traces += multiplicity;
        if eval.activations() > 0 {
            self.activated_traces += multiplicity;
        }
    }

    /// Confidence is satisfied over activated; Support is satisfied over all
    /// events (per trace for unary templates). Mutual templates take the
    /// smaller of their two directions, which keeps every measure
    /// monotone along entailment.
    pub fn measure(&self, kind: MeasureKind) -> Ratio {
        let part = |t: Totals| match kind {
            MeasureKind::Confidence => Ratio::new(t.satisfactions, t.activations),
            MeasureKind::Support if self.unary => Ratio::new(t.satisfactions, self.traces),
            MeasureKind::Support => Ratio::new(t.satisfactions, self.events),
        };
        let fwd = part(self.forward);
        match self.backward {
            Some(b) => fwd.min(part(b)),
            None => fwd,
        }
    }
}

/// Sums the evaluations of `rule` over every trace of `log`.
pub fn log_totals(rule: &Rule, log: &EventLog) -> RuleTotals {
    let template = rule.template();
    let a = log.activity_id(rule.activator());
    let b = rule.target().and_then(|t| log.activity_id(t));
    let mut totals = RuleTotals::new(template.arity() == 1, template.is_mutual());
    for v in log.variants() {
        let eval = evaluate_variant(template, a, b, v.events());
        totals.add(&eval, v.len(), v.multiplicity());
    }
    totals
}

pub fn log_measure(rule: &Rule, log: &EventLog, kind: MeasureKind) -> Ratio {
    log_totals(rule, log).measure(kind)
}

pub fn log_confidence(rule: &Rule, log: &EventLog) -> Ratio {
    log_measure(rule, log, MeasureKind::Confidence)
}

pub fn log_support(rule: &Rule, log: &EventLog) -> Ratio {
    log_measure(rule, log, MeasureKind::Support)
}

/// Orders `|a - b|` against `|c - d|` exactly.
pub fn cmp_abs_diff((a, b): (Ratio, Ratio), (c, d): (Ratio, Ratio)) -> Ordering {
    cmp_fractions(a.abs_diff_parts(b), c.abs_diff_parts(d))
}

/// Compares `x.0 / x.1` with `y.0 / y.1` exactly; denominators are positive.
pub(crate) fn cmp_fractions(x: (u128, u128), y: (u128, u128)) -> Ordering {
    mul_wide(x.0, y.1).cmp(&mul_wide(y.0, x.1))
}

/// Full 256-bit product as `(high, low)`.
fn mul_wide(x: u128, y: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (x1, x0) = (x >> 64, x & MASK);
    let (y1, y0) = (y >> 64, y & MASK);
    let p00 = x0 * y0;
    let p01 = x0 * y1;
    let p10 = x1 * y0;
    let p11 = x1 * y1;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let low = (p00 & MASK) | (mid << 64);
    let high = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (high, low)
}
