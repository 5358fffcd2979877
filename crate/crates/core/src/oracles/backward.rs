//! Backward reachability from the unsafe cube.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use crate::logic::{reduce, Cube, World};
use crate::solver::Solver;
use crate::system::CoreSystem;
use crate::transitions::Semantics;
use crate::verdict::Verdict;

/// Backward search keeps every pre-image cube, so it meets wider cubes than
/// the unwinding engine does; german_ish2 needs five processes.
pub const BACKWARD_ARITY_CAP: u8 = 8;

#[derive(Clone, Debug)]
pub struct BackwardConfig {
    /// Cubes popped from the frontier before giving up.
    pub max_steps: u64,
    pub timeout: Option<Duration>,
    pub arity_cap: u8,
}

impl Default for BackwardConfig {
    fn default() -> Self {
        BackwardConfig {
            max_steps: 100_000,
            timeout: None,
            arity_cap: BACKWARD_ARITY_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BackwardReport {
    pub verdict: Verdict,
    /// Cubes kept in the visited set at the end.
    pub visited: usize,
    /// Cubes popped from the frontier.
    pub steps: u64,
}

struct Node {
    cube: Cube,
    /// Transition and successor node this cube is a pre-image of.
    parent: Option<(usize, usize)>,
}

/// Explores `⋃ pre*(unsafe)` with the smallest cubes first. On a safe
/// verdict the invariant is `⊤` minus every visited cube.
pub fn backward_reach(sys: &CoreSystem, solver: &Solver, config: &BackwardConfig) -> BackwardReport {
    let started = Instant::now();
    let mut sem = Semantics::new(sys, solver);
    sem.arity_cap = config.arity_cap;
    let mut nodes: Vec<Node> = vec![Node {
        cube: sys.unsafe_cube.clone(),
        parent: None,
    }];
    let mut frontier = BinaryHeap::new();
    frontier.push(Reverse((sys.unsafe_cube.nprocs(), 0usize)));
    let mut visited: Vec<Cube> = Vec::new();
    let mut steps = 0u64;

    let inconclusive = |reason: String, visited: &Vec<Cube>, steps| BackwardReport {
        verdict: Verdict::Inconclusive { reason },
        visited: visited.len(),
        steps,
    };

    while let Some(Reverse((_, id))) = frontier.pop() {
        if steps >= config.max_steps {
            return inconclusive(format!("step budget of {} exhausted", config.max_steps), &visited, steps);
        }
        if config.timeout.is_some_and(|t| started.elapsed() >= t) {
            return inconclusive("timeout".into(), &visited, steps);
        }
        steps += 1;
        let cube = nodes[id].cube.clone();
        if cube.is_bottom() || visited.iter().any(|v| v.subsumes(&cube)) {
            continue;
        }
        match solver.sat_cube_in(sys, &cube, &World::init()) {
            Err(e) => return inconclusive(e.to_string(), &visited, steps),
            Ok(r) if r.is_sat() => {
                let mut chain = Vec::new();
                let mut cur = id;
                while let Some((tau, succ)) = nodes[cur].parent {
                    chain.push((tau, nodes[succ].cube.clone()));
                    cur = succ;
                }
                return match super::concretize(sys, solver, &cube, &chain) {
                    Ok(Some(trace)) => BackwardReport {
                        verdict: Verdict::Unsafe { trace },
                        visited: visited.len(),
                        steps,
                    },
                    Ok(None) => panic!("backward counterexample is not realizable"),
                    Err(e) => inconclusive(e.to_string(), &visited, steps),
                };
            }
            Ok(_) => {}
        }
        visited.retain(|v| !cube.subsumes(v));
        visited.push(cube.clone());
        for tau in 0..sys.transitions.len() {
            let pre = match sem.pre_image(&cube, tau) {
                Ok(p) => p,
                Err(e) => return inconclusive(e.to_string(), &visited, steps),
            };
            for p in pre {
                if visited.iter().any(|v| v.subsumes(&p)) {
                    continue;
                }
                let key = p.nprocs();
                nodes.push(Node {
                    cube: p,
                    parent: Some((tau, id)),
                });
                frontier.push(Reverse((key, nodes.len() - 1)));
            }
        }
    }
    let mut invariant = World::top();
    for c in reduce(visited.iter().cloned()) {
        invariant = invariant.strengthen(&c);
    }
    BackwardReport {
        verdict: Verdict::Safe {
            invariant: vec![invariant],
        },
        visited: visited.len(),
        steps,
    }
}
