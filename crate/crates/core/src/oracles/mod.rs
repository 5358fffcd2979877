//! Reference engines for differential checking: symbolic backward
//! reachability and explicit-state breadth-first search.

pub mod backward;
pub mod explicit;

pub use backward::{backward_reach, BackwardConfig, BackwardReport, BACKWARD_ARITY_CAP};
pub use explicit::{explicit_reach, replay_trace, DEFAULT_STATE_LIMIT, ExplicitError, ExplicitReport, Instance, ReplayError};

use itertools::Itertools;

use crate::logic::{Cube, World};
use crate::solver::{Solver, SolverError};
use crate::system::CoreSystem;
use crate::trace::{Step, Trace};

/// Turns a chain of bad cubes into a concrete run.
///
/// `start` must be satisfiable with init, and each `(τ, c)` in `chain` must
/// be such that the previous cube lies in the pre-image of `c` by `τ`. The
/// run starts in the solver's model of `init ∧ start` and picks, at each
/// step, the first parameter tuple whose successor satisfies the next cube.
/// Returns `None` if the chain is not realizable, which signals a bug.
pub fn concretize(
    sys: &CoreSystem,
    solver: &Solver,
    start: &Cube,
    chain: &[(usize, Cube)],
) -> Result<Option<Trace>, SolverError> {
    let Some(model) = solver.sat_cube_in(sys, start, &World::init())?.model() else {
        return Ok(None);
    };
    let mut s = model.state;
    let n = s.nprocs;
    let inst = Instance::new(sys, n);
    let mut steps = Vec::new();
    for (tau, next) in chain {
        let t = &sys.transitions[*tau];
        let found = (0..n).permutations(t.nparams as usize).find_map(|ps| {
            if !inst.enabled(&s, t, &ps) {
                return None;
            }
            let succ = inst.fire(&s, t, &ps);
            inst.cube(&succ, next).then_some((ps, succ))
        });
        let Some((params, succ)) = found else {
            return Ok(None);
        };
        steps.push(Step {
            transition: t.name.clone(),
            params,
        });
        s = succ;
    }
    if !inst.is_unsafe(&s) {
        return Ok(None);
    }
    Ok(Some(Trace {
        model: sys.name.clone(),
        nprocs: n,
        steps,
    }))
}
