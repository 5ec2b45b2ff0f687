mod common;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{all_rules, char_trace};
use declare_variants::analyzer::{
    aggregate, encode_logs, hierarchical_simplification, permutation_test, prune_thresholds,
    shuffle_once, Measurement, MeasurementTable,
};
use declare_variants::declare::{entails, log_measure, log_totals, MeasureKind, Ratio, Rule};
use declare_variants::discovery::{discover, DiscoveryParams, Specification, ThresholdBasis};
use declare_variants::log_io::{
    parse_csv, parse_xes, write_csv, write_xes, CsvMapping, EventLog, Trace,
};
use declare_variants::Execution;

fn word(alphabet: &'static str, max_len: usize) -> impl Strategy<Value = String> {
    let chars: Vec<char> = alphabet.chars().collect();
    prop::collection::vec(prop::sample::select(chars), 1..=max_len)
        .prop_map(|cs| cs.into_iter().collect())
}

fn log(alphabet: &'static str, max_traces: usize) -> impl Strategy<Value = EventLog> {
    prop::collection::vec((word(alphabet, 6), 1u64..4), 1..=max_traces).prop_map(|entries| {
        EventLog::from_counts("prop", entries.iter().map(|(w, n)| (char_trace(w), *n)))
    })
}

fn kind() -> impl Strategy<Value = MeasureKind> {
    prop_oneof![Just(MeasureKind::Confidence), Just(MeasureKind::Support)]
}

fn rules_abc() -> Vec<Rule> {
    all_rules(&["a", "b", "c"])
}

/// A table over a random subset of rules with measures in quarters, so
/// equal measures along entailment are common.
fn table() -> impl Strategy<Value = MeasurementTable> {
    let rules = rules_abc();
    let n = rules.len();
    prop::collection::vec((any::<bool>(), 0u64..=4, 0u64..=4), n).prop_map(move |cells| {
        let rows = rules
            .iter()
            .zip(cells)
            .filter(|(_, (keep, _, _))| *keep)
            .map(|(r, (_, a, b))| Measurement {
                rule: r.clone(),
                a: Ratio::new(a, 4),
                b: Ratio::new(b, 4),
            });
        MeasurementTable::new(MeasureKind::Confidence, rows)
    })
}

/// Maps every encoded trace back to the raw trace it was computed from.
fn raw_traces(
    enc: &declare_variants::analyzer::EncodedLog,
    log: &EventLog,
    into: &mut HashMap<usize, Trace>,
) {
    for ((t, n), v) in enc.entries().iter().zip(log.variants()) {
        assert_eq!(*n, v.multiplicity());
        into.insert(Arc::as_ptr(t) as usize, log.materialize(v));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn encoded_measures_equal_direct_measures(la in log("abcd", 6), lb in log("abce", 6), k in kind()) {
        let rules = all_rules(&["a", "b", "d", "e"]);
        let (ea, eb) = encode_logs(&la, &lb, &rules, Execution::sequential());
        for (i, r) in rules.iter().enumerate() {
            prop_assert_eq!(ea.measure(i, k), log_measure(r, &la, k), "{} on A", r);
            prop_assert_eq!(eb.measure(i, k), log_measure(r, &lb, k), "{} on B", r);
        }
    }

    #[test]
    fn shuffles_conserve_traces_and_measures(
        la in log("abc", 5),
        lb in log("abd", 5),
        seed in any::<u64>(),
        k in kind(),
    ) {
        let rules = all_rules(&["a", "b", "c", "d"]);
        let (ea, eb) = encode_logs(&la, &lb, &rules, Execution::sequential());
        let mut raw = HashMap::new();
        raw_traces(&ea, &la, &mut raw);
        raw_traces(&eb, &lb, &mut raw);

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (sa, sb) = shuffle_once(&ea, &eb, &mut rng);
        prop_assert_eq!((sa.len(), sb.len()), (la.len(), lb.len()));

        let rebuild = |enc: &declare_variants::analyzer::EncodedLog| {
            EventLog::from_counts(
                "shuffled",
                enc.entries().iter().map(|(t, n)| (raw[&(Arc::as_ptr(t) as usize)].clone(), *n)),
            )
        };
        let (ra, rb) = (rebuild(&sa), rebuild(&sb));
        let mut pooled: Vec<(Trace, u64)> = la.traces().chain(lb.traces()).collect();
        let mut moved: Vec<(Trace, u64)> = ra.traces().chain(rb.traces()).collect();
        let expand = |v: &mut Vec<(Trace, u64)>| {
            let mut out: Vec<Trace> = v
                .drain(..)
                .flat_map(|(t, n)| std::iter::repeat_n(t, n as usize))
                .collect();
            out.sort();
            out
        };
        prop_assert_eq!(expand(&mut pooled), expand(&mut moved));

        for (i, r) in rules.iter().enumerate() {
            prop_assert_eq!(sa.measure(i, k), log_measure(r, &ra, k), "{} on shuffled A", r);
            prop_assert_eq!(sb.measure(i, k), log_measure(r, &rb, k), "{} on shuffled B", r);
            let (ta, tb) = (log_totals(r, &la), log_totals(r, &lb));
            let (ua, ub) = (sa.totals(i), sb.totals(i));
            prop_assert_eq!(
                ta.forward.activations + tb.forward.activations,
                ua.forward.activations + ub.forward.activations
            );
            prop_assert_eq!(ta.events + tb.events, ua.events + ub.events);
        }
    }

    #[test]
    fn p_values_are_bounded(
        la in log("abc", 5),
        lb in log("abc", 5),
        permutations in 1u64..300,
        seed in any::<u64>(),
    ) {
        let spec = Specification::from_rules("p", rules_abc());
        let table = aggregate(&spec, &spec, &la, &lb, MeasureKind::Confidence, Execution::sequential());
        let rules: Vec<Rule> = table.rules().cloned().collect();
        let (ea, eb) = encode_logs(&la, &lb, &rules, Execution::sequential());
        let out = permutation_test(&ea, &eb, &table, permutations, seed, Execution::sequential());
        let pi = permutations as f64;
        for i in 0..out.len() {
            prop_assert!(out.exceedances(i) <= permutations);
            prop_assert_eq!(out.counter(i), out.exceedances(i) + 1);
            let p = out.p_value(i);
            prop_assert!(p >= 1.0 / pi && p <= (pi + 1.0) / pi, "p = {}", p);
            // A rule whose measures are equal is matched by every split
            // that leaves it unchanged, including the identity split.
            if table.rows()[i].diff() == 0.0 {
                prop_assert_eq!(out.exceedances(i), permutations);
            }
        }
    }

    #[test]
    fn threshold_pruning_matches_brute_force(
        t in table(),
        m_min_q in 0u32..=8,
        m_diff_q in 0u32..=8,
    ) {
        // Thresholds fall between quarters so no measure sits on one.
        let m_min = m_min_q as f64 / 8.0 + 1.0 / 64.0;
        let m_diff_min = m_diff_q as f64 / 8.0 + 1.0 / 64.0;
        let expected: BTreeSet<Rule> = t
            .rows()
            .iter()
            .filter(|m| {
                let (a, b) = (m.a.value(), m.b.value());
                (a - b).abs() >= m_diff_min && (a >= m_min || b >= m_min)
            })
            .map(|m| m.rule.clone())
            .collect();
        let before = t.len();
        let (pruned, counts) = prune_thresholds(t, m_min, m_diff_min);
        let got: BTreeSet<Rule> = pruned.rules().cloned().collect();
        prop_assert_eq!(&got, &expected);
        prop_assert_eq!(counts.min_difference + counts.min_interest, before - got.len());
    }

    #[test]
    fn simplification_matches_brute_force(t in table()) {
        let rows = t.rows().to_vec();
        let expected: BTreeSet<Rule> = rows
            .iter()
            .filter(|m| {
                !rows.iter().any(|g| {
                    g.rule != m.rule && entails(&m.rule, &g.rule) && (g.a == m.a || g.b == m.b)
                })
            })
            .map(|m| m.rule.clone())
            .collect();
        let (simplified, removed) = hierarchical_simplification(t);
        let got: BTreeSet<Rule> = simplified.rules().cloned().collect();
        prop_assert_eq!(removed, rows.len() - got.len());
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn measures_are_monotone_along_entailment(l in log("abc", 6), k in kind()) {
        let rules = rules_abc();
        for r in &rules {
            for g in rules.iter().filter(|g| *g != r && entails(r, g)) {
                let (mr, mg) = (log_measure(r, &l, k), log_measure(g, &l, k));
                prop_assert!(mr <= mg, "{} = {} > {} = {}", r, mr, g, mg);
            }
        }
    }

    #[test]
    fn discovery_is_anti_monotone_in_its_thresholds(
        l in log("abc", 6),
        s in 0u32..=10,
        ds in 0u32..=5,
        c in 0u32..=10,
        dc in 0u32..=5,
        event_basis in any::<bool>(),
    ) {
        let basis = if event_basis { ThresholdBasis::Event } else { ThresholdBasis::Activation };
        let loose = DiscoveryParams {
            support_min: s as f64 / 10.0,
            confidence_min: c as f64 / 10.0,
            basis,
        };
        let strict = DiscoveryParams {
            support_min: ((s + ds) as f64 / 10.0).min(1.0),
            confidence_min: ((c + dc) as f64 / 10.0).min(1.0),
            basis,
        };
        let rules = |p: &DiscoveryParams| -> BTreeSet<Rule> {
            discover(&l, p, Execution::sequential()).unwrap().iter_rules().cloned().collect()
        };
        let (wide, narrow) = (rules(&loose), rules(&strict));
        prop_assert!(narrow.is_subset(&wide));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn csv_and_xes_round_trip(
        entries in prop::collection::vec(
            (prop::collection::vec(prop::sample::select(vec!["a", "b c", "d,e", "\"q\"", "<x&y>", "é"]), 1..6), 1u64..4),
            1..6,
        ),
    ) {
        let traces: Vec<(Trace, u64)> = entries
            .iter()
            .map(|(evs, n)| (evs.iter().copied().collect::<Trace>(), *n))
            .collect();
        let original = EventLog::from_counts("round-trip", traces);
        let dir = tempfile::tempdir().unwrap();

        let csv_path = dir.path().join("log.csv");
        write_csv(&original, &csv_path).unwrap();
        let from_csv = parse_csv(&csv_path, &CsvMapping::default()).unwrap();
        prop_assert_eq!(from_csv.traces().collect::<Vec<_>>(), original.traces().collect::<Vec<_>>());

        let xes_path = dir.path().join("log.xes");
        write_xes(&original, &xes_path).unwrap();
        let from_xes = parse_xes(&xes_path).unwrap();
        prop_assert_eq!(from_xes.traces().collect::<Vec<_>>(), original.traces().collect::<Vec<_>>());
        prop_assert_eq!(from_xes.len(), original.len());
    }
}
