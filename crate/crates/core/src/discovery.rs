//! Exhaustive Declare discovery and specification files.
//!
//! Discovery instantiates every template on the log's alphabet, measures the
//! candidates and keeps those above two thresholds. Specifications can also
//! be written by hand and loaded from JSON:
//!
//! ```json
//! {
//!   "source_log": "sepsis_old.xes",
//!   "constraints": [
//!     { "template": "Response", "parameters": ["ER Triage", "LacticAcid"],
//!       "support": 0.04, "confidence": 0.83 },
//!     { "template": "Participation", "parameters": ["Admission NC"] }
//!   ]
//! }
//! ```
//!
//! `support` and `confidence` are optional on input.

use std::collections::BTreeSet;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::declare::{log_totals, MeasureKind, Ratio, Rule, RuleTotals, Template};
use crate::error::{check_unit, Error, Result};
use crate::exec::Execution;
use crate::log_io::{Activity, EventLog};

/// Which quantities the discovery thresholds are compared against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ThresholdBasis {
    /// Support is the share of satisfied activations, and confidence scales
    /// it by the share of traces with at least one activation.
    #[default]
    Activation,
    /// The same event-level Support and Confidence used by the analysis.
    Event,
}

impl FromStr for ThresholdBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "activation" => Ok(ThresholdBasis::Activation),
            "event" => Ok(ThresholdBasis::Event),
            other => Err(Error::InvalidParameter(format!(
                "unknown discovery basis {other:?} (expected activation or event)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscoveryParams {
    pub support_min: f64,
    pub confidence_min: f64,
    pub basis: ThresholdBasis,
}

impl Default for DiscoveryParams {
    fn default() -> Self {
        DiscoveryParams {
            support_min: 0.5,
            confidence_min: 0.0,
            basis: ThresholdBasis::default(),
        }
    }
}

impl DiscoveryParams {
    pub fn validate(&self) -> Result<()> {
        check_unit("support_min", self.support_min)?;
        check_unit("confidence_min", self.confidence_min)
    }
}

/// A rule with the measures it had on the log it was discovered from.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecifiedRule {
    pub rule: Rule,
    pub support: Option<f64>,
    pub confidence: Option<f64>,
}

/// A set of rules, sorted and free of duplicates.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Specification {
    source_log: String,
    rules: Vec<SpecifiedRule>,
}

impl Specification {
    /// Duplicate rules keep their first annotation.
    pub fn new(
        source_log: impl Into<String>,
        rules: impl IntoIterator<Item = SpecifiedRule>,
    ) -> Self {
        let mut rules: Vec<SpecifiedRule> = rules.into_iter().collect();
        rules.sort_by(|a, b| a.rule.cmp(&b.rule));
        rules.dedup_by(|later, first| later.rule == first.rule);
        Specification {
            source_log: source_log.into(),
            rules,
        }
    }

    /// A specification without measure annotations.
    pub fn from_rules(
        source_log: impl Into<String>,
        rules: impl IntoIterator<Item = Rule>,
    ) -> Self {
        Specification::new(
            source_log,
            rules.into_iter().map(|rule| SpecifiedRule {
                rule,
                support: None,
                confidence: None,
            }),
        )
    }

    pub fn source_log(&self) -> &str {
        &self.source_log
    }

    pub fn rules(&self) -> &[SpecifiedRule] {
        &self.rules
    }

    pub fn iter_rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().map(|r| &r.rule)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

/// Every unary template per activity and every binary template per ordered
/// pair of distinct activities: `2·|Σ| + 11·|Σ|·(|Σ|−1)` rules.
pub fn candidate_rules(alphabet: &[Activity]) -> Result<Vec<Rule>> {
    let alphabet: BTreeSet<&Activity> = alphabet.iter().collect();
    if alphabet.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    let n = alphabet.len();
    let mut rules = Vec::with_capacity(2 * n + 11 * n * (n - 1));
    for &a in &alphabet {
        for t in Template::UNARY {
            rules.push(Rule::unary(t, a.clone()));
        }
    }
    for &a in &alphabet {
        for &b in &alphabet {
            if a == b {
                continue;
            }
            for t in Template::ALL.into_iter().filter(|t| t.arity() == 2) {
                rules.push(Rule::binary(t, a.clone(), b.clone()));
            }
        }
    }
    Ok(rules)
}

fn passes(totals: &RuleTotals, params: &DiscoveryParams) -> bool {
    let (support, confidence) = match params.basis {
        ThresholdBasis::Event => (
            totals.measure(MeasureKind::Support).value(),
            totals.measure(MeasureKind::Confidence).value(),
        ),
        ThresholdBasis::Activation => {
            let support = totals.measure(MeasureKind::Confidence);
            let coverage = Ratio::new(totals.activated_traces, totals.traces);
            (support.value(), support.value() * coverage.value())
        }
    };
    support >= params.support_min && confidence >= params.confidence_min
}

/// Candidate rules meeting both thresholds, annotated with their
/// event-level Support and Confidence on `log`.
pub fn discover(
    log: &EventLog,
    params: &DiscoveryParams,
    exec: Execution,
) -> Result<Specification> {
    params.validate()?;
    let candidates = candidate_rules(log.alphabet())?;
    let kept = exec.map(&candidates, |rule| {
        let totals = log_totals(rule, log);
        passes(&totals, params).then(|| SpecifiedRule {
            rule: rule.clone(),
            support: Some(totals.measure(MeasureKind::Support).value()),
            confidence: Some(totals.measure(MeasureKind::Confidence).value()),
        })
    });
    Ok(Specification::new(
        log.source_id(),
        kept.into_iter().flatten(),
    ))
}

#[derive(Serialize, Deserialize)]
struct SpecFile {
    #[serde(default)]
    source_log: String,
    constraints: Vec<ConstraintEntry>,
}

#[derive(Serialize, Deserialize)]
struct ConstraintEntry {
    template: String,
    parameters: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    support: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    confidence: Option<f64>,
}

impl TryFrom<ConstraintEntry> for SpecifiedRule {
    type Error = Error;

    fn try_from(entry: ConstraintEntry) -> Result<Self> {
        let template: Template = entry.template.parse()?;
        let mut params = entry.parameters.into_iter();
        let (activator, target) = match (params.next(), params.next(), params.next()) {
            (Some(a), b, None) => (Activity::from(a), b.map(Activity::from)),
            (first, second, third) => {
                let got = [first, second, third].iter().flatten().count() + params.count();
                return Err(Error::ArityMismatch {
                    template: template.name().to_string(),
                    expected: template.arity(),
                    got,
                });
            }
        };
        if let Some(s) = entry.support {
            check_unit("support", s)?;
        }
        if let Some(c) = entry.confidence {
            check_unit("confidence", c)?;
        }
        Ok(SpecifiedRule {
            rule: Rule::new(template, activator, target)?,
            support: entry.support,
            confidence: entry.confidence,
        })
    }
}

pub fn read_specification(path: impl AsRef<Path>) -> Result<Specification> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    specification_from_json(&text)
}

pub fn specification_from_json(text: &str) -> Result<Specification> {
    let file: SpecFile = serde_json::from_str(text)?;
    let rules = file
        .constraints
        .into_iter()
        .map(SpecifiedRule::try_from)
        .collect::<Result<Vec<_>>>()?;
    Ok(Specification::new(file.source_log, rules))
}

pub fn specification_to_json(spec: &Specification) -> String {
    let file = SpecFile {
        source_log: spec.source_log.clone(),
        constraints: spec
            .rules
            .iter()
            .map(|r| ConstraintEntry {
                template: r.rule.template().name().to_string(),
                parameters: std::iter::once(r.rule.activator())
                    .chain(r.rule.target())
                    .map(|a| a.to_string())
                    .collect(),
                support: r.support,
                confidence: r.confidence,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("specification serializes")
}

pub fn write_specification(spec: &Specification, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, specification_to_json(spec) + "\n").map_err(|e| Error::io(path, e))
}
