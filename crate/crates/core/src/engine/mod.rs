//! The unwinding engine.
//!
//! The graph starts with the root ε (world init), the unsafe vertex β
//! (world ⊤, bad part {unsafe}) and the sink ω (world ⊥). Vertices are
//! popped from a priority queue and extended with every transition; each new
//! edge into a vertex with a bad part is closed by a cover, a bad-part
//! propagation or a refinement.

mod dot;
mod graph;
mod invariant;
mod unwind;

use std::time::{Duration, Instant};

use serde::Serialize;

pub use dot::export_dot;
pub use graph::{Bad, BadRef, Graph, Vertex, VertexId, BETA, EPSILON, OMEGA};
pub use invariant::{audit_explicit, audit_invariant, AuditFailure};

use crate::logic::World;
use crate::solver::Solver;
use crate::system::CoreSystem;
use crate::transitions::DEFAULT_ARITY_CAP;
use crate::verdict::{Verdict, VerdictKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum QueueOrder {
    /// Fewest processes in the world's clauses first, then insertion order.
    #[default]
    Procs,
    Fifo,
}

#[derive(Clone, Debug)]
pub struct Config {
    /// Closed edges before giving up.
    pub max_steps: u64,
    pub timeout: Option<Duration>,
    pub queue_order: QueueOrder,
    pub arity_cap: u8,
    /// Re-check each touched edge after every rule application.
    pub audit_edges: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_steps: 100_000,
            timeout: None,
            queue_order: QueueOrder::Procs,
            arity_cap: DEFAULT_ARITY_CAP,
            audit_edges: false,
        }
    }
}

/// Counters reported by `--stats`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub verdict: VerdictKind,
    /// All vertices, including ε, β and ω.
    pub vertices_created: usize,
    pub edges: usize,
    pub covers: u64,
    /// Vertices created by refinement.
    pub refines: u64,
    /// Edges closed by adding a bad part to their source.
    pub bad_propagations: u64,
    pub solver_calls: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug)]
pub struct Outcome {
    pub verdict: Verdict,
    pub stats: Stats,
    pub graph: Graph,
}

pub fn check(sys: &CoreSystem, solver: &Solver, config: &Config) -> Outcome {
    let started = Instant::now();
    let calls_before = solver.calls();
    let mut far = unwind::Far::new(sys, solver, config);
    let verdict = match far.run() {
        Ok(None) => Verdict::Safe {
            invariant: extract_invariant(&far.graph),
        },
        Ok(Some(w)) => match crate::oracles::concretize(sys, solver, &w.start, &w.chain) {
            Ok(Some(trace)) => Verdict::Unsafe { trace },
            Ok(None) => panic!("unwinding counterexample is not realizable"),
            Err(e) => Verdict::Inconclusive { reason: e.to_string() },
        },
        Err(unwind::Stop::Budget(reason)) => Verdict::Inconclusive { reason },
        Err(unwind::Stop::Limit(e)) => Verdict::Inconclusive { reason: e.to_string() },
    };
    let stats = Stats {
        verdict: verdict.kind(),
        vertices_created: far.graph.vertices.len(),
        edges: far.graph.edges.len(),
        covers: far.counters.covers,
        refines: far.counters.refines,
        bad_propagations: far.counters.bad_propagations,
        solver_calls: solver.calls() - calls_before,
        elapsed_ms: started.elapsed().as_millis() as u64,
    };
    Outcome {
        verdict,
        stats,
        graph: far.graph,
    }
}

/// Worlds of the vertices reachable from ε, ω excluded.
pub fn extract_invariant(g: &Graph) -> Vec<World> {
    g.reachable()
        .into_iter()
        .filter(|&v| v != OMEGA)
        .map(|v| g.world(v).clone())
        .collect()
}
