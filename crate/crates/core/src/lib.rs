//! Parameterized safety checking for array-based transition systems.
//!
//! A system is parsed from `.fcub` source by [`frontend`], checked by the
//! unwinding engine in [`engine`], and cross-checked by the reference
//! engines in [`oracles`].

pub mod engine;
pub mod frontend;
pub mod logic;
pub mod oracles;
pub mod solver;
pub mod state;
pub mod system;
pub mod trace;
pub mod transitions;
pub mod verdict;

pub use engine::{check, Config, Outcome, QueueOrder, Stats};
pub use frontend::{elaborate, load, parse, FrontendError, Pos, SystemAst};
pub use logic::{Base, Cube, Literal, Signature, Sort, Term, World};
pub use solver::{SatResult, Solver, SolverError};
pub use state::ConcreteState;
pub use system::{CoreSystem, Transition};
pub use trace::{Step, Trace, TraceError};
pub use transitions::{LimitError, Semantics};
pub use verdict::{Verdict, VerdictKind};
