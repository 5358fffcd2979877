//! Reference engines: explicit enumeration, trace replay and backward
//! reachability.

mod common;

use common::*;
use farcheck_core::oracles::{
    backward_reach, explicit_reach, replay_trace, BackwardConfig, ExplicitError, ReplayError, DEFAULT_STATE_LIMIT,
};
use farcheck_core::{check, Config, Solver, Step, Trace, Verdict, VerdictKind};

// Reachable-state counts of a separate hand-written BFS (tools/explicit_oracle.py).
const SAFE_STATE_COUNTS: [(&str, usize, usize); 4] = [
    ("dekker", 2, 12),
    ("dekker", 3, 36),
    ("mux_sem", 2, 8),
    ("mux_sem", 3, 20),
];

fn steps(trace: &[(&str, &[usize])]) -> Vec<Step> {
    trace
        .iter()
        .map(|(t, ps)| Step {
            transition: t.to_string(),
            params: ps.to_vec(),
        })
        .collect()
}

fn trace(model: &str, n: usize, s: &[(&str, &[usize])]) -> Trace {
    Trace {
        model: model.into(),
        nprocs: n,
        steps: steps(s),
    }
}

#[test]
fn explicit_state_counts() {
    for (name, n, states) in SAFE_STATE_COUNTS {
        let rep = explicit_reach(&model(name), n, DEFAULT_STATE_LIMIT).unwrap();
        assert_eq!(rep.verdict.kind(), VerdictKind::Safe, "{name} at {n}");
        assert_eq!(rep.states, states, "{name} at {n}");
    }
}

#[test]
fn explicit_finds_shortest_violations() {
    // The same BFS gives shortest violations of four steps at N = 2 and 3.
    for name in ["broken_dekker", "broken_mux_sem"] {
        for n in [2, 3] {
            let sys = model(name);
            let rep = explicit_reach(&sys, n, DEFAULT_STATE_LIMIT).unwrap();
            let Verdict::Unsafe { trace } = &rep.verdict else { panic!("{name}") };
            assert_eq!(trace.len(), 4, "{name} at {n}");
            assert_eq!(replay_trace(&sys, trace, n), Ok(true));
        }
    }
}

#[test]
fn explicit_needs_enough_processes() {
    let err = explicit_reach(&model("dekker"), 1, DEFAULT_STATE_LIMIT).unwrap_err();
    assert_eq!(err, ExplicitError::TooFewProcs { need: 2, got: 1 });
    assert_eq!(
        explicit_reach(&model("dekker"), 3, 10).unwrap_err(),
        ExplicitError::StateLimit(10)
    );
}

#[test]
fn explicit_is_deterministic() {
    for name in CORPUS {
        let sys = model(name);
        let a = explicit_reach(&sys, 3, DEFAULT_STATE_LIMIT).unwrap();
        let b = explicit_reach(&sys, 3, DEFAULT_STATE_LIMIT).unwrap();
        assert_eq!(a.states, b.states);
        assert_eq!(a.verdict, b.verdict);
    }
}

#[test]
fn replay_cases() {
    let sys = model("dekker");
    assert_eq!(replay_trace(&sys, &trace("dekker", 2, &[]), 2), Ok(false));
    assert_eq!(
        replay_trace(&sys, &trace("dekker", 2, &[("enter", &[0])]), 2),
        Err(ReplayError::Disabled {
            step: 0,
            name: "enter".into()
        })
    );
    // enter(0) needs turn = 0, which some initial state provides
    let ok = trace("dekker", 2, &[("req", &[0]), ("enter", &[0]), ("exit", &[0, 1])]);
    assert_eq!(replay_trace(&sys, &ok, 2), Ok(false));
    let bad = trace("dekker", 2, &[("req", &[0]), ("jump", &[0])]);
    assert!(matches!(replay_trace(&sys, &bad, 2), Err(ReplayError::UnknownTransition { step: 1, .. })));
    let bad = trace("dekker", 2, &[("exit", &[0, 0])]);
    assert!(matches!(replay_trace(&sys, &bad, 2), Err(ReplayError::BadParams { step: 0, .. })));
    let bad = trace("dekker", 2, &[("req", &[2])]);
    assert!(matches!(replay_trace(&sys, &bad, 2), Err(ReplayError::BadParams { step: 0, .. })));

    let broken = model("broken_dekker");
    let t = trace(
        "broken_dekker",
        2,
        &[("req", &[0]), ("req", &[1]), ("enter", &[0]), ("enter", &[1])],
    );
    assert_eq!(replay_trace(&broken, &t, 2), Ok(true));
}

#[test]
fn backward_agrees_with_far() {
    for name in CORPUS {
        let sys = model(name);
        let solver = Solver::new(&sys.sig);
        let far = check(&sys, &solver, &Config::default());
        let back = backward_reach(&sys, &solver, &BackwardConfig::default());
        assert_eq!(far.verdict.kind(), back.verdict.kind(), "{name}: {}", back.verdict.token());
        match &back.verdict {
            Verdict::Unsafe { trace } => assert_eq!(replay_trace(&sys, trace, trace.nprocs), Ok(true), "{name}"),
            Verdict::Safe { invariant } => {
                farcheck_core::engine::audit_invariant(&sys, &solver, invariant).unwrap();
                farcheck_core::engine::audit_explicit(&sys, invariant, 3).unwrap();
            }
            Verdict::Inconclusive { .. } => unreachable!(),
        }
    }
}

#[test]
fn backward_budget() {
    let sys = model("german_ish2");
    let cfg = BackwardConfig {
        max_steps: 2,
        ..BackwardConfig::default()
    };
    let rep = backward_reach(&sys, &Solver::new(&sys.sig), &cfg);
    assert_eq!(rep.verdict.kind(), VerdictKind::Inconclusive);
}

#[test]
fn soundness_triangle() {
    for name in CORPUS {
        let sys = model(name);
        let far = check(&sys, &Solver::new(&sys.sig), &Config::default()).verdict.kind();
        for n in [2, 3] {
            let ex = explicit_reach(&sys, n, DEFAULT_STATE_LIMIT).unwrap().verdict.kind();
            if far == VerdictKind::Safe {
                assert_eq!(ex, VerdictKind::Safe, "{name} at {n}");
            }
            if ex == VerdictKind::Unsafe {
                assert_eq!(far, VerdictKind::Unsafe, "{name} at {n}");
            }
        }
    }
}
