//! Subsumption between Declare templates, lifted to entailment between rules.

use super::{Rule, Template};

/// Rules directly entailed by `rule`, one step up the hierarchy.
pub fn direct_generalizations(rule: &Rule) -> Vec<Rule> {
    use Template::*;
    let same = |t: Template| rule.with_template(t);
    let swapped = |t: Template| {
        let target = rule.target().expect("binary rule").clone();
        Rule::binary(t, target, rule.activator().clone())
    };
    match rule.template() {
        ChainSuccession => vec![
            same(ChainResponse),
            same(ChainPrecedence),
            same(AlternateSuccession),
        ],
        AlternateSuccession => vec![
            same(AlternateResponse),
            same(AlternatePrecedence),
            same(Succession),
        ],
        Succession => vec![same(Response), same(Precedence), same(CoExistence)],
        CoExistence => vec![same(RespondedExistence), swapped(RespondedExistence)],
        ChainResponse => vec![same(AlternateResponse)],
        AlternateResponse => vec![same(Response)],
        Response => vec![same(RespondedExistence)],
        ChainPrecedence => vec![same(AlternatePrecedence)],
        AlternatePrecedence => vec![same(Precedence)],
        Precedence => vec![swapped(RespondedExistence)],
        RespondedExistence | Participation | AtMostOne => Vec::new(),
    }
}

/// Every rule strictly entailed by `rule`, without duplicates, closest first.
pub fn generalizations(rule: &Rule) -> Vec<Rule> {
    let mut out: Vec<Rule> = Vec::new();
    let mut frontier = vec![rule.clone()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for r in &frontier {
            for g in direct_generalizations(r) {
                if !out.contains(&g) {
                    out.push(g.clone());
                    next.push(g);
                }
            }
        }
        frontier = next;
    }
    out
}

/// Whether every trace satisfying `specific` also satisfies `general`.
/// Reflexive.
pub fn entails(specific: &Rule, general: &Rule) -> bool {
    specific == general || generalizations(specific).contains(general)
}
