//! Worlds: the formulas attached to unwinding vertices.

use std::fmt;

use itertools::Itertools;

use super::cube::Cube;
use super::term::Signature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    /// The initial-state formula of the system.
    Init,
    Top,
    Bottom,
}

/// `base && ¬c1 && ... && ¬ck`, each `¬ci` read as a universally
/// quantified clause. The cube set is kept subsumption-reduced and sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World {
    base: Base,
    negated: Vec<Cube>,
}

impl World {
    pub fn init() -> World {
        World {
            base: Base::Init,
            negated: Vec::new(),
        }
    }

    pub fn top() -> World {
        World {
            base: Base::Top,
            negated: Vec::new(),
        }
    }

    pub fn bottom() -> World {
        World {
            base: Base::Bottom,
            negated: Vec::new(),
        }
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn is_bottom(&self) -> bool {
        self.base == Base::Bottom
    }

    pub fn negated_cubes(&self) -> &[Cube] {
        &self.negated
    }

    /// Conjoins `¬cube`. Members subsumed by `cube` are dropped; if an
    /// existing member already subsumes `cube` the world is unchanged.
    pub fn strengthen(&self, cube: &Cube) -> World {
        if self.is_bottom() || cube.is_bottom() {
            return self.clone();
        }
        if cube.is_empty() && cube.nprocs() == 0 {
            return World::bottom();
        }
        if self.negated.iter().any(|c| c.subsumes(cube)) {
            return self.clone();
        }
        let mut negated: Vec<Cube> = self
            .negated
            .iter()
            .filter(|c| !cube.subsumes(c))
            .cloned()
            .collect();
        negated.push(cube.clone());
        negated.sort();
        World {
            base: self.base,
            negated,
        }
    }

    /// Whether `¬cube` already follows syntactically from this world.
    pub fn excludes(&self, cube: &Cube) -> bool {
        self.is_bottom() || self.negated.iter().any(|c| c.subsumes(cube))
    }

    /// Syntactic entailment `self ⊨ other`: the base is at least as strong
    /// and every clause of `other` is implied by a clause of `self`.
    pub fn implies(&self, other: &World) -> bool {
        let base_ok = match (self.base, other.base) {
            (Base::Bottom, _) => return true,
            (_, Base::Bottom) => false,
            (_, Base::Top) => true,
            (Base::Init, Base::Init) => true,
            (Base::Top, Base::Init) => false,
        };
        base_ok && other.negated.iter().all(|c| self.excludes(c))
    }

    /// Fewest bound processes among the clauses (0 for clause-free worlds).
    pub fn min_procs(&self) -> u8 {
        self.negated.iter().map(|c| c.nprocs()).min().unwrap_or(0)
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> WorldDisplay<'a> {
        WorldDisplay { sig, world: self }
    }
}

pub struct WorldDisplay<'a> {
    sig: &'a Signature,
    world: &'a World,
}

impl fmt::Display for WorldDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.world.base {
            Base::Bottom => return write!(f, "⊥"),
            Base::Init => parts.push("init".to_string()),
            Base::Top => {}
        }
        parts.extend(
            self.world
                .negated
                .iter()
                .map(|c| format!("¬({})", c.display(self.sig))),
        );
        if parts.is_empty() {
            write!(f, "⊤")
        } else {
            write!(f, "{}", parts.iter().join(" && "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::term::{Literal, Sort, Term, BOOL, TRUE};

    fn crit_sig() -> (Signature, crate::logic::ArrayId) {
        let mut sig = Signature::new();
        let crit = sig.add_array("crit", Sort::Enum(BOOL));
        (sig, crit)
    }

    #[test]
    fn strengthen_with_unsafe() {
        let (sig, crit) = crit_sig();
        let c = |p| Literal::eq(Term::Array(crit, p), Term::Const(TRUE));
        let unsafe_cube = Cube::canonical(2, [c(0), c(1)]);
        let w = World::top().strengthen(&unsafe_cube);
        assert_eq!(w.display(&sig).to_string(), "¬(∃p0,p1. crit[p0] = true && crit[p1] = true)");
        assert_eq!(w.strengthen(&unsafe_cube), w);
        // a more general clause replaces the subsumed one
        let one = Cube::canonical(1, [c(0)]);
        let w2 = w.strengthen(&one);
        assert_eq!(w2.negated_cubes(), std::slice::from_ref(&one));
        assert!(w2.implies(&w));
        assert!(!w.implies(&w2));
    }

    #[test]
    fn base_ordering() {
        assert!(World::init().implies(&World::top()));
        assert!(!World::top().implies(&World::init()));
        assert!(World::bottom().implies(&World::init()));
        assert_eq!(World::top().display(&Signature::new()).to_string(), "⊤");
    }
}
