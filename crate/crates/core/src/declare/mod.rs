//! Declare templates, rules, event-level evaluation and log measures.

mod eval;
mod hierarchy;
pub(crate) mod measure;

use std::fmt;
use std::str::FromStr;

pub use self::eval::{evaluate_trace, evaluate_variant, Counts, TraceEvaluation};
pub use self::hierarchy::{direct_generalizations, entails, generalizations};
pub use self::measure::{
    cmp_abs_diff, log_confidence, log_measure, log_support, log_totals, MeasureKind, Ratio,
    RuleTotals, Totals,
};

use crate::error::{Error, Result};
use crate::log_io::Activity;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Template {
    Participation,
    AtMostOne,
    RespondedExistence,
    Response,
    AlternateResponse,
    ChainResponse,
    Precedence,
    AlternatePrecedence,
    ChainPrecedence,
    CoExistence,
    Succession,
    AlternateSuccession,
    ChainSuccession,
}

impl Template {
    pub const ALL: [Template; 13] = [
        Template::Participation,
        Template::AtMostOne,
        Template::RespondedExistence,
        Template::Response,
        Template::AlternateResponse,
        Template::ChainResponse,
        Template::Precedence,
        Template::AlternatePrecedence,
        Template::ChainPrecedence,
        Template::CoExistence,
        Template::Succession,
        Template::AlternateSuccession,
        Template::ChainSuccession,
    ];

    pub const UNARY: [Template; 2] = [Template::Participation, Template::AtMostOne];

    pub fn name(self) -> &'static str {
        match self {
            Template::Participation => "Participation",
            Template::AtMostOne => "AtMostOne",
            Template::RespondedExistence => "RespondedExistence",
            Template::Response => "Response",
            Template::AlternateResponse => "AlternateResponse",
            Template::ChainResponse => "ChainResponse",
            Template::Precedence => "Precedence",
            Template::AlternatePrecedence => "AlternatePrecedence",
            Template::ChainPrecedence => "ChainPrecedence",
            Template::CoExistence => "CoExistence",
            Template::Succession => "Succession",
            Template::AlternateSuccession => "AlternateSuccession",
            Template::ChainSuccession => "ChainSuccession",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Template::Participation | Template::AtMostOne => 1,
            _ => 2,
        }
    }

    /// Templates whose activations come from both parameters. Their
    /// evaluation keeps the two directions apart.
    pub fn is_mutual(self) -> bool {
        matches!(
            self,
            Template::CoExistence
                | Template::Succession
                | Template::AlternateSuccession
                | Template::ChainSuccession
        )
    }

    fn valid_names() -> String {
        Template::ALL
            .iter()
            .map(|t| t.name())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Template {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Template::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::UnknownTemplate {
                name: s.to_string(),
                valid: Template::valid_names(),
            })
    }
}

/// A template instantiated on activities.
///
/// `activator` and `target` are the template's first and second parameter
/// in the usual notation: for `Precedence(a, b)` it is `b` that activates
/// the rule, but `a` is still stored as `activator`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    template: Template,
    activator: Activity,
    target: Option<Activity>,
}

impl Rule {
    pub fn new(template: Template, activator: Activity, target: Option<Activity>) -> Result<Self> {
        let got = 1 + target.is_some() as usize;
        if got != template.arity() {
            return Err(Error::ArityMismatch {
                template: template.name().to_string(),
                expected: template.arity(),
                got,
            });
        }
        if target.as_ref() == Some(&activator) {
            return Err(Error::SelfRule {
                template: template.name().to_string(),
                activity: activator.to_string(),
            });
        }
        Ok(Rule {
            template,
            activator,
            target,
        })
    }

    /// # Panics
    /// If `template` is binary.
    pub fn unary(template: Template, a: impl Into<Activity>) -> Self {
        Rule::new(template, a.into(), None).expect("unary template")
    }

    /// # Panics
    /// If `template` is unary or `a == b`.
    pub fn binary(template: Template, a: impl Into<Activity>, b: impl Into<Activity>) -> Self {
        Rule::new(template, a.into(), Some(b.into())).expect("binary template, distinct activities")
    }

    pub fn template(&self) -> Template {
        self.template
    }

    pub fn activator(&self) -> &Activity {
        &self.activator
    }

    pub fn target(&self) -> Option<&Activity> {
        self.target.as_ref()
    }

    /// Same parameters, different template of the same arity.
    pub(crate) fn with_template(&self, template: Template) -> Rule {
        debug_assert_eq!(template.arity(), self.template.arity());
        Rule {
            template,
            activator: self.activator.clone(),
            target: self.target.clone(),
        }
    }

    /// Key used when a total, readable order is needed.
    pub fn sort_key(&self) -> (&'static str, &str, &str) {
        (
            self.template.name(),
            self.activator.as_str(),
            self.target.as_ref().map_or("", |t| t.as_str()),
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.target {
            Some(t) => write!(f, "{}({}, {})", self.template, self.activator, t),
            None => write!(f, "{}({})", self.template, self.activator),
        }
    }
}
