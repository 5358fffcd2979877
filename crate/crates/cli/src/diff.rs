//! Differential mode: the unwinding engine, backward reachability and
//! explicit enumeration on one model, checked against each other.
//!
//! Conclusive verdicts must respect three rules: FAR and backward agree,
//! a FAR safe verdict implies explicit safety at every size tried, and an
//! explicit violation at any size is found by both symbolic engines. An
//! inconclusive symbolic verdict contradicts nothing.

use std::fmt::Write as _;

use farcheck_core::engine::Outcome;
use farcheck_core::oracles::{backward_reach, explicit_reach, BackwardConfig, DEFAULT_STATE_LIMIT};
use farcheck_core::{check, Config, CoreSystem, Solver, Verdict, VerdictKind};

use crate::{exit, verdict_code};

/// Instance sizes the explicit oracle runs at.
pub const EXPLICIT_SIZES: [usize; 2] = [2, 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineVerdict {
    pub kind: VerdictKind,
    /// `SAFE`, `UNSAFE` or `INCONCLUSIVE(reason)`.
    pub token: String,
}

impl EngineVerdict {
    pub fn of(kind: VerdictKind) -> Self {
        EngineVerdict {
            kind,
            token: kind.to_string(),
        }
    }
}

impl From<&Verdict> for EngineVerdict {
    fn from(v: &Verdict) -> Self {
        EngineVerdict {
            kind: v.kind(),
            token: v.token(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExplicitResult {
    Verdict { kind: VerdictKind, states: usize },
    /// The oracle could not run at this size.
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffReport {
    pub far: EngineVerdict,
    pub backward: EngineVerdict,
    pub explicit: Vec<(usize, ExplicitResult)>,
}

impl DiffReport {
    /// Every broken rule, in a fixed order.
    pub fn conflicts(&self) -> Vec<String> {
        use VerdictKind::*;
        let mut out = Vec::new();
        let (far, back) = (self.far.kind, self.backward.kind);
        if far != Inconclusive && back != Inconclusive && far != back {
            out.push(format!("far is {far} but backward is {back}"));
        }
        for (n, r) in &self.explicit {
            let ExplicitResult::Verdict { kind, .. } = r else { continue };
            match kind {
                Unsafe => {
                    for (name, v) in [("far", far), ("backward", back)] {
                        if v == Safe {
                            out.push(format!("{name} is SAFE but explicit finds a violation at {n} processes"));
                        }
                    }
                }
                Safe | Inconclusive => {}
            }
        }
        out
    }

    pub fn is_consistent(&self) -> bool {
        self.conflicts().is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_consistent() {
            verdict_code(self.far.kind)
        } else {
            exit::INCONSISTENT
        }
    }

    /// Line-oriented report; the first line is the FAR verdict token.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.far.token);
        let _ = writeln!(s, "far: {}", self.far.token);
        let _ = writeln!(s, "backward: {}", self.backward.token);
        for (n, r) in &self.explicit {
            let _ = match r {
                ExplicitResult::Verdict { kind, states } => writeln!(s, "explicit({n}): {kind} ({states} states)"),
                ExplicitResult::Skipped(why) => writeln!(s, "explicit({n}): skipped ({why})"),
            };
        }
        let conflicts = self.conflicts();
        if conflicts.is_empty() {
            let _ = writeln!(s, "CONSISTENT");
        } else {
            let _ = writeln!(s, "INCONSISTENT");
            for c in conflicts {
                let _ = writeln!(s, "  {c}");
            }
        }
        s
    }
}

pub fn explicit_results(sys: &CoreSystem) -> Vec<(usize, ExplicitResult)> {
    EXPLICIT_SIZES
        .iter()
        .map(|&n| {
            let r = match explicit_reach(sys, n, DEFAULT_STATE_LIMIT) {
                Ok(rep) => ExplicitResult::Verdict {
                    kind: rep.verdict.kind(),
                    states: rep.states,
                },
                Err(e) => ExplicitResult::Skipped(e.to_string()),
            };
            (n, r)
        })
        .collect()
}

/// Runs all three engines. The FAR outcome is returned for its artifacts.
pub fn run_diff(sys: &CoreSystem, solver: &Solver, config: &Config) -> (DiffReport, Outcome) {
    let outcome = check(sys, solver, config);
    let bc = BackwardConfig {
        max_steps: config.max_steps,
        timeout: config.timeout,
        ..BackwardConfig::default()
    };
    let backward = backward_reach(sys, solver, &bc);
    let report = DiffReport {
        far: (&outcome.verdict).into(),
        backward: (&backward.verdict).into(),
        explicit: explicit_results(sys),
    };
    (report, outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(far: VerdictKind, backward: VerdictKind, explicit: &[VerdictKind]) -> DiffReport {
        DiffReport {
            far: EngineVerdict::of(far),
            backward: EngineVerdict::of(backward),
            explicit: explicit
                .iter()
                .zip(EXPLICIT_SIZES)
                .map(|(&kind, n)| (n, ExplicitResult::Verdict { kind, states: 1 }))
                .collect(),
        }
    }

    use VerdictKind::*;

    #[test]
    fn agreement_is_consistent() {
        assert!(report(Safe, Safe, &[Safe, Safe]).is_consistent());
        assert!(report(Unsafe, Unsafe, &[Unsafe, Unsafe]).is_consistent());
        // A bug needing more processes than the explicit sizes.
        assert!(report(Unsafe, Unsafe, &[Safe, Safe]).is_consistent());
    }

    #[test]
    fn injected_wrong_verdict_is_flagged() {
        let r = report(Safe, Unsafe, &[Unsafe, Unsafe]);
        assert_eq!(r.exit_code(), exit::INCONSISTENT);
        assert_eq!(r.conflicts().len(), 3);
        assert!(r.render().contains("\nINCONSISTENT\n"));
        assert_eq!(report(Unsafe, Safe, &[Safe, Safe]).exit_code(), exit::INCONSISTENT);
    }

    #[test]
    fn inconclusive_contradicts_nothing() {
        let r = report(Inconclusive, Unsafe, &[Unsafe, Unsafe]);
        assert!(r.is_consistent());
        assert_eq!(r.exit_code(), exit::INCONCLUSIVE);
    }

    #[test]
    fn first_line_is_the_far_token() {
        let r = report(Safe, Safe, &[Safe, Safe]);
        assert_eq!(r.render().lines().next(), Some("SAFE"));
    }
}
