//! Ranked natural-language statements and the text and CSV outputs.

use std::cmp::Ordering;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::analyzer::RuleResult;
use crate::declare::{cmp_abs_diff, Ratio, Rule, Template};
use crate::error::{Error, Result};

pub const TEXT_FILE: &str = "differences.txt";
pub const CSV_FILE: &str = "differences.csv";

/// A significant difference, ranked and put into words.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceStatement {
    pub rank: usize,
    pub rule: Rule,
    pub measure_a: Ratio,
    pub measure_b: Ratio,
    pub diff: f64,
    pub exceedances: u64,
    pub p_value: f64,
    pub text: String,
}

/// Sorts by difference, then by the larger of the two measures, both
/// descending, then by template (in declaration order, unary templates
/// first) and parameter names. Ranks start at 1.
pub fn rank(results: &[RuleResult]) -> Vec<DifferenceStatement> {
    let mut sorted: Vec<&RuleResult> = results.iter().collect();
    sorted.sort_by(|x, y| {
        cmp_abs_diff((y.measure_a, y.measure_b), (x.measure_a, x.measure_b))
            .then_with(|| {
                let top = |r: &RuleResult| r.measure_a.max(r.measure_b);
                top(y).cmp(&top(x))
            })
            .then_with(|| x.rule.cmp(&y.rule))
    });
    sorted
        .into_iter()
        .enumerate()
        .map(|(i, r)| DifferenceStatement {
            rank: i + 1,
            rule: r.rule.clone(),
            measure_a: r.measure_a,
            measure_b: r.measure_b,
            diff: r.diff,
            exceedances: r.exceedances,
            p_value: r.p_value,
            text: sentence(&r.rule, r.measure_a.value(), r.measure_b.value(), r.diff),
        })
        .collect()
}

/// The sentence describing how `rule` differs between measures `e_a` and
/// `e_b` of variants A and B.
pub fn render_nl(rule: &Rule, e_a: f64, e_b: f64) -> String {
    sentence(rule, e_a, e_b, (e_a - e_b).abs())
}

fn sentence(rule: &Rule, e_a: f64, e_b: f64, diff: f64) -> String {
    let (more, less) = match e_a.partial_cmp(&e_b) {
        Some(Ordering::Less) => ("B", "A"),
        _ => ("A", "B"),
    };
    let phrase = phrase(rule);
    if e_a.min(e_b) == 0.0 && e_a.max(e_b) > 0.0 {
        format!("It happens only in Variant {more} that {phrase}.")
    } else {
        format!(
            "In Variant {more}, it is {:.1}% more likely than in Variant {less} that {phrase}.",
            diff * 100.0
        )
    }
}

/// The verbal reading of a rule.
pub fn phrase(rule: &Rule) -> String {
    use Template::*;
    let a = rule.activator();
    let b = rule.target().map_or("", |t| t.as_str());
    match rule.template() {
        Participation => format!("{a} occurs in a process instance"),
        AtMostOne => format!("{a} may occur at most once in a process instance"),
        RespondedExistence => format!("if {a} occurs, also {b} occurs"),
        Response => format!("if {a} occurs, {b} will occur afterwards"),
        AlternateResponse => format!(
            "if {a} occurs, {b} will occur afterwards without any other occurrence of {a} in between"
        ),
        ChainResponse => format!("if {a} occurs, {b} will occur immediately afterwards"),
        Precedence => format!("{b} occurs only if preceded by {a}"),
        AlternatePrecedence => format!(
            "each time {b} occurs, it is preceded by {a} without any other occurrence of {b} in between"
        ),
        ChainPrecedence => format!("if {b} occurs, {a} occurred immediately beforehand"),
        CoExistence => format!("if {a} occurs, also {b} occurs, and vice versa"),
        Succession => format!("{a} occurs if and only if it is followed by {b}"),
        AlternateSuccession => format!(
            "{a} and {b} occur if and only if the latter follows the former, and they alternate each other"
        ),
        ChainSuccession => format!(
            "{a} and {b} occur if and only if the latter immediately follows the former"
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputPaths {
    pub text: PathBuf,
    pub csv: PathBuf,
}

/// Writes the `top_n` first sentences, one per line, and a CSV with every
/// statement. Creates `out_dir` if needed.
pub fn write_outputs(
    statements: &[DifferenceStatement],
    out_dir: impl AsRef<Path>,
    top_n: usize,
) -> Result<OutputPaths> {
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let paths = OutputPaths {
        text: out_dir.join(TEXT_FILE),
        csv: out_dir.join(CSV_FILE),
    };

    let mut text = String::new();
    for s in statements.iter().take(top_n) {
        text.push_str(&s.text);
        text.push('\n');
    }
    fs::write(&paths.text, text).map_err(|e| Error::io(&paths.text, e))?;

    let file = fs::File::create(&paths.csv).map_err(|e| Error::io(&paths.csv, e))?;
    let mut w = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::Always)
        .from_writer(file);
    w.write_record([
        "rank",
        "template",
        "activator",
        "target",
        "measure_A",
        "measure_B",
        "abs_diff",
        "exceedance_count",
        "p_value",
        "statement",
    ])?;
    for s in statements {
        w.write_record([
            s.rank.to_string(),
            s.rule.template().name().to_string(),
            s.rule.activator().to_string(),
            s.rule.target().map_or_else(String::new, |t| t.to_string()),
            format!("{:.3}", s.measure_a.value()),
            format!("{:.3}", s.measure_b.value()),
            format!("{:.3}", s.diff),
            s.exceedances.to_string(),
            s.p_value.to_string(),
            s.text.clone(),
        ])?;
    }
    let mut file = w
        .into_inner()
        .map_err(|e| Error::io(&paths.csv, e.into_error()))?;
    file.flush().map_err(|e| Error::io(&paths.csv, e))?;
    Ok(paths)
}
