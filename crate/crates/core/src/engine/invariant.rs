//! Re-checking a claimed invariant `Θ = ⋁ worlds` after a safe verdict.

use thiserror::Error;

use crate::logic::World;
use crate::oracles::Instance;
use crate::solver::Solver;
use crate::system::CoreSystem;
use crate::transitions::{LimitError, Semantics};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AuditFailure {
    #[error("init does not entail the invariant")]
    Init,
    #[error("world {world} meets the unsafe cube")]
    Unsafe { world: usize },
    #[error("world {world} is not closed under `{transition}`")]
    NotInductive { world: usize, transition: String },
    #[error("at {n} processes: {msg}")]
    Explicit { n: usize, msg: String },
    #[error(transparent)]
    Limit(#[from] LimitError),
}

/// Symbolic audit: init entails some world, no world meets unsafe, and the
/// post-image of each world by each enabled transition is entailed by one
/// world. The last condition is sufficient for `Θ ∧ τ ⊨ Θ'`.
pub fn audit_invariant(sys: &CoreSystem, solver: &Solver, worlds: &[World]) -> Result<(), AuditFailure> {
    let mut sem = Semantics::new(sys, solver);
    // a check, not a search: no reason to bound cube width
    sem.arity_cap = u8::MAX;
    let init = World::init();
    let mut init_ok = false;
    for w in worlds {
        let Some(clauses) = sys.world_clauses(w) else { continue };
        let mut holds = true;
        for c in clauses {
            if solver.sat_cube_in(sys, c, &init).map_err(LimitError::from)?.is_sat() {
                holds = false;
                break;
            }
        }
        if holds {
            init_ok = true;
            break;
        }
    }
    if !init_ok {
        return Err(AuditFailure::Init);
    }
    for (i, w) in worlds.iter().enumerate() {
        if solver.sat_cube_in(sys, &sys.unsafe_cube, w).map_err(LimitError::from)?.is_sat() {
            return Err(AuditFailure::Unsafe { world: i });
        }
        for (tau, t) in sys.transitions.iter().enumerate() {
            if !sem.enabled(w, tau)? {
                continue;
            }
            let mut closed = false;
            for target in worlds {
                if sem.post_entails(w, tau, target)? {
                    closed = true;
                    break;
                }
            }
            if !closed {
                return Err(AuditFailure::NotInductive {
                    world: i,
                    transition: t.name.clone(),
                });
            }
        }
    }
    Ok(())
}

/// Audit by enumeration of every state of the `n`-process instance:
/// initial states satisfy `Θ`, `Θ` has no unsafe state, and every successor
/// of a `Θ` state satisfies `Θ`.
pub fn audit_explicit(sys: &CoreSystem, worlds: &[World], n: usize) -> Result<(), AuditFailure> {
    let inst = Instance::new(sys, n);
    let theta = |s: &crate::state::ConcreteState| worlds.iter().any(|w| inst.world(s, w));
    let fail = |msg: String| AuditFailure::Explicit { n, msg };
    for s in inst.all_states() {
        let in_theta = theta(&s);
        if inst.init(&s) && !in_theta {
            return Err(fail(format!("initial state {} is outside the invariant", s.display(&sys.sig))));
        }
        if !in_theta {
            continue;
        }
        if inst.is_unsafe(&s) {
            return Err(fail(format!("unsafe state {} is inside the invariant", s.display(&sys.sig))));
        }
        for (tau, ps, next) in inst.successors(&s) {
            if !theta(&next) {
                return Err(fail(format!(
                    "{} -{}{:?}-> {} leaves the invariant",
                    s.display(&sys.sig),
                    sys.transitions[tau].name,
                    ps,
                    next.display(&sys.sig)
                )));
            }
        }
    }
    Ok(())
}
