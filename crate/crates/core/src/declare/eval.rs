use super::{Rule, Template};
use crate::log_io::Trace;

/// Activation and satisfaction counts of one rule direction on one trace.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Counts {
    pub activations: u32,
    pub satisfactions: u32,
}

impl Counts {
    fn new(activations: u32, satisfactions: u32) -> Self {
        Counts {
            activations,
            satisfactions,
        }
    }
}

/// Evaluation of a rule on a single trace.
///
/// Single-direction templates only fill `forward`. Mutual templates
/// (CoExistence and the Succession family) report the activations of their
/// first parameter in `forward` and of their second in `backward`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct TraceEvaluation {
    pub forward: Counts,
    pub backward: Option<Counts>,
}

impl TraceEvaluation {
    /// `A(r, t)`, summed over both directions.
    pub fn activations(&self) -> u32 {
        self.forward.activations + self.backward.map_or(0, |c| c.activations)
    }

    /// `S(r, t)`, summed over both directions.
    pub fn satisfactions(&self) -> u32 {
        self.forward.satisfactions + self.backward.map_or(0, |c| c.satisfactions)
    }

    fn single(c: Counts) -> Self {
        TraceEvaluation {
            forward: c,
            backward: None,
        }
    }

    fn pair(forward: Counts, backward: Counts) -> Self {
        TraceEvaluation {
            forward,
            backward: Some(backward),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sym {
    A,
    B,
    Other,
}

pub fn evaluate_trace(rule: &Rule, trace: &Trace) -> TraceEvaluation {
    let a = rule.activator();
    let b = rule.target();
    let events = trace.events();
    evaluate(rule.template(), events.len(), |i| {
        let e = &events[i];
        if e == a {
            Sym::A
        } else if Some(e) == b {
            Sym::B
        } else {
            Sym::Other
        }
    })
}

/// Evaluates a template on an interned trace. `a` and `b` are the
/// parameters' ids in the trace's alphabet, `None` when absent from it.
pub fn evaluate_variant(
    template: Template,
    a: Option<u32>,
    b: Option<u32>,
    events: &[u32],
) -> TraceEvaluation {
    evaluate(template, events.len(), |i| {
        let e = Some(events[i]);
        if e == a {
            Sym::A
        } else if b.is_some() && e == b {
            Sym::B
        } else {
            Sym::Other
        }
    })
}

fn evaluate(template: Template, len: usize, sym: impl Fn(usize) -> Sym) -> TraceEvaluation {
    use Template::*;
    match template {
        Participation => {
            let present = (0..len).any(|i| sym(i) == Sym::A);
            TraceEvaluation::single(Counts::new(1, present as u32))
        }
        AtMostOne => {
            let n = (0..len).filter(|&i| sym(i) == Sym::A).count();
            TraceEvaluation::single(Counts::new(1, (n <= 1) as u32))
        }
        RespondedExistence => TraceEvaluation::single(co_occurrence(len, &sym).0),
        Response => TraceEvaluation::single(response(len, &sym)),
        AlternateResponse => TraceEvaluation::single(alternate_response(len, &sym)),
        ChainResponse => TraceEvaluation::single(chain_response(len, &sym)),
        Precedence => TraceEvaluation::single(precedence(len, &sym)),
        AlternatePrecedence => TraceEvaluation::single(alternate_precedence(len, &sym)),
        ChainPrecedence => TraceEvaluation::single(chain_precedence(len, &sym)),
        CoExistence => {
            let (fwd, bwd) = co_occurrence(len, &sym);
            TraceEvaluation::pair(fwd, bwd)
        }
        Succession => TraceEvaluation::pair(response(len, &sym), precedence(len, &sym)),
        AlternateSuccession => TraceEvaluation::pair(
            alternate_response(len, &sym),
            alternate_precedence(len, &sym),
        ),
        ChainSuccession => {
            TraceEvaluation::pair(chain_response(len, &sym), chain_precedence(len, &sym))
        }
    }
}

/// Each `a` is satisfied iff some `b` occurs anywhere, and vice versa.
fn co_occurrence(len: usize, sym: &impl Fn(usize) -> Sym) -> (Counts, Counts) {
    let (mut na, mut nb) = (0u32, 0u32);
    for i in 0..len {
        match sym(i) {
            Sym::A => na += 1,
            Sym::B => nb += 1,
            Sym::Other => {}
        }
    }
    (
        Counts::new(na, if nb > 0 { na } else { 0 }),
        Counts::new(nb, if na > 0 { nb } else { 0 }),
    )
}

fn response(len: usize, sym: &impl Fn(usize) -> Sym) -> Counts {
    let mut c = Counts::default();
    let mut b_later = false;
    for i in (0..len).rev() {
        match sym(i) {
            Sym::A => {
                c.activations += 1;
                c.satisfactions += b_later as u32;
            }
            Sym::B => b_later = true,
            Sym::Other => {}
        }
    }
    c
}

/// The first of {a, b} after each `a` must be `b`.
fn alternate_response(len: usize, sym: &impl Fn(usize) -> Sym) -> Counts {
    let mut c = Counts::default();
    let mut next = Sym::Other;
    for i in (0..len).rev() {
        match sym(i) {
            Sym::A => {
                c.activations += 1;
                c.satisfactions += (next == Sym::B) as u32;
                next = Sym::A;
            }
            Sym::B => next = Sym::B,
            Sym::Other => {}
        }
    }
    c
}

fn chain_response(len: usize, sym: &impl Fn(usize) -> Sym) -> Counts {
    let mut c = Counts::default();
    for i in 0..len {
        if sym(i) == Sym::A {
            c.activations += 1;
            c.satisfactions += (i + 1 < len && sym(i + 1) == Sym::B) as u32;
        }
    }
    c
}

fn precedence(len: usize, sym: &impl Fn(usize) -> Sym) -> Counts {
    let mut c = Counts::default();
    let mut a_before = false;
    for i in 0..len {
        match sym(i) {
            Sym::B => {
                c.activations += 1;
                c.satisfactions += a_before as u32;
            }
            Sym::A => a_before = true,
            Sym::Other => {}
        }
    }
    c
}

/// The last of {a, b} before each `b` must be `a`.
fn alternate_precedence(len: usize, sym: &impl Fn(usize) -> Sym) -> Counts {
    let mut c = Counts::default();
    let mut prev = Sym::Other;
    for i in 0..len {
        match sym(i) {
            Sym::B => {
                c.activations += 1;
                c.satisfactions += (prev == Sym::A) as u32;
                prev = Sym::B;
            }
            Sym::A => prev = Sym::A,
            Sym::Other => {}
        }
    }
    c
}

fn chain_precedence(len: usize, sym: &impl Fn(usize) -> Sym) -> Counts {
    let mut c = Counts::default();
    for i in 0..len {
        if sym(i) == Sym::B {
            c.activations += 1;
            c.satisfactions += (i > 0 && sym(i - 1) == Sym::A) as u32;
        }
    }
    c
}
