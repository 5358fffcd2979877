//! Engine outcomes.

use std::fmt;

use crate::logic::World;
use crate::trace::Trace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The disjunction of `invariant` is an inductive invariant excluding
    /// the unsafe states. Engines without a symbolic invariant return an
    /// empty list.
    Safe { invariant: Vec<World> },
    Unsafe { trace: Trace },
    Inconclusive { reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictKind {
    Safe,
    Unsafe,
    Inconclusive,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Safe => "SAFE",
            VerdictKind::Unsafe => "UNSAFE",
            VerdictKind::Inconclusive => "INCONCLUSIVE",
        })
    }
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::Safe { .. } => VerdictKind::Safe,
            Verdict::Unsafe { .. } => VerdictKind::Unsafe,
            Verdict::Inconclusive { .. } => VerdictKind::Inconclusive,
        }
    }

    pub fn trace(&self) -> Option<&Trace> {
        match self {
            Verdict::Unsafe { trace } => Some(trace),
            _ => None,
        }
    }

    /// `SAFE`, `UNSAFE` or `INCONCLUSIVE(<reason>)`.
    pub fn token(&self) -> String {
        match self {
            Verdict::Inconclusive { reason } => format!("INCONCLUSIVE({reason})"),
            v => v.kind().to_string(),
        }
    }
}
