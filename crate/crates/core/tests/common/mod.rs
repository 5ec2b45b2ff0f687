//! Test-side oracles, written from the verbal template semantics with
//! quantifier-style full scans and no shared code with the library.

#![allow(dead_code)]

use declare_variants::declare::{Rule, Template};
use declare_variants::log_io::{EventLog, Trace};

/// `(activations, satisfactions)` of the first parameter's activations and,
/// for mutual templates, of the second's.
pub type NaiveCounts = ((u32, u32), Option<(u32, u32)>);

/// Evaluates `template` on `trace` by scanning every position for every
/// activation.
pub fn naive_eval(template: Template, trace: &[&str], a: &str, b: &str) -> NaiveCounts {
    use Template::*;
    let n = trace.len();
    let has = |x: &str| trace.contains(&x);

    // Some event of `target` after `i` with no `blocker` strictly between.
    let later = |i: usize, target: &str, blocker: Option<&str>| {
        (i + 1..n).any(|j| {
            trace[j] == target && blocker.is_none_or(|k| (i + 1..j).all(|m| trace[m] != k))
        })
    };
    let earlier = |i: usize, target: &str, blocker: Option<&str>| {
        (0..i).any(|j| {
            trace[j] == target && blocker.is_none_or(|k| (j + 1..i).all(|m| trace[m] != k))
        })
    };
    let scan = |activator: &str, sat: &dyn Fn(usize) -> bool| {
        let positions: Vec<usize> = (0..n).filter(|&i| trace[i] == activator).collect();
        let s = positions.iter().filter(|&&i| sat(i)).count();
        (positions.len() as u32, s as u32)
    };

    let response = || scan(a, &|i| later(i, b, None));
    let alt_response = || scan(a, &|i| later(i, b, Some(a)));
    let chain_response = || scan(a, &|i| i + 1 < n && trace[i + 1] == b);
    let precedence = || scan(b, &|i| earlier(i, a, None));
    let alt_precedence = || scan(b, &|i| earlier(i, a, Some(b)));
    let chain_precedence = || scan(b, &|i| i > 0 && trace[i - 1] == a);

    match template {
        Participation => ((1, has(a) as u32), None),
        AtMostOne => (
            (1, (trace.iter().filter(|&&e| e == a).count() <= 1) as u32),
            None,
        ),
        RespondedExistence => (scan(a, &|_| has(b)), None),
        Response => (response(), None),
        AlternateResponse => (alt_response(), None),
        ChainResponse => (chain_response(), None),
        Precedence => (precedence(), None),
        AlternatePrecedence => (alt_precedence(), None),
        ChainPrecedence => (chain_precedence(), None),
        CoExistence => (scan(a, &|_| has(b)), Some(scan(b, &|_| has(a)))),
        Succession => (response(), Some(precedence())),
        AlternateSuccession => (alt_response(), Some(alt_precedence())),
        ChainSuccession => (chain_response(), Some(chain_precedence())),
    }
}

/// Confidence from naive counts: satisfied over activated, per direction,
/// the smaller direction for mutual templates. Zero when never activated.
pub fn naive_confidence(rule: &Rule, log: &EventLog) -> f64 {
    let a = rule.activator().as_str();
    let b = rule.target().map_or("", |t| t.as_str());
    let (mut fa, mut fs, mut ba, mut bs) = (0u64, 0u64, 0u64, 0u64);
    let mut mutual = false;
    for (trace, n) in log.traces() {
        let names: Vec<&str> = trace.events().iter().map(|e| e.as_str()).collect();
        let ((x, y), back) = naive_eval(rule.template(), &names, a, b);
        fa += n * x as u64;
        fs += n * y as u64;
        if let Some((x, y)) = back {
            mutual = true;
            ba += n * x as u64;
            bs += n * y as u64;
        }
    }
    let ratio = |s: u64, a: u64| if a == 0 { 0.0 } else { s as f64 / a as f64 };
    let fwd = ratio(fs, fa);
    if mutual || rule.template().is_mutual() {
        fwd.min(ratio(bs, ba))
    } else {
        fwd
    }
}

/// A log from `(word, multiplicity)` pairs; each character is an activity.
pub fn char_log(id: &str, entries: &[(&str, u64)]) -> EventLog {
    EventLog::from_counts(id, entries.iter().map(|(s, n)| (char_trace(s), *n)))
}

pub fn char_trace(word: &str) -> Trace {
    word.chars().map(|c| c.to_string()).collect()
}

/// Every rule over `activities`: unary templates per activity, binary
/// templates per ordered pair of distinct activities.
pub fn all_rules(activities: &[&str]) -> Vec<Rule> {
    let mut out = Vec::new();
    for t in Template::ALL {
        for &x in activities {
            if t.arity() == 1 {
                out.push(Rule::unary(t, x));
                continue;
            }
            for &y in activities {
                if x != y {
                    out.push(Rule::binary(t, x, y));
                }
            }
        }
    }
    out
}

/// Every word of length `1..=max_len` over `alphabet`.
pub fn all_words(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
