//! The elaborated core system.

use crate::logic::{ArrayId, ConstId, Cube, GlobalId, Literal, Signature, World, Base};

/// Value expression on the right of an update. Reads refer to the pre-state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Const(ConstId),
    Param(u8),
    Global(GlobalId),
    Array(ArrayId, Index),
}

/// Array index inside an update value: a transition parameter, or the cell
/// being updated (the case index `j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Index {
    Param(u8),
    Here,
}

/// Case-form array update: `a'[j] = v_i` for the first arm with `j = p_i`,
/// otherwise `default`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArrayUpdate {
    Keep,
    Cases { arms: Vec<(u8, Value)>, default: Value },
}

impl ArrayUpdate {
    /// Value assigned to the cell selected by `matches(param)`.
    pub fn value_for(&self, matches: impl Fn(u8) -> bool) -> Option<Value> {
        match self {
            ArrayUpdate::Keep => None,
            ArrayUpdate::Cases { arms, default } => Some(
                arms.iter()
                    .find(|(p, _)| matches(*p))
                    .map(|(_, v)| *v)
                    .unwrap_or(*default),
            ),
        }
    }
}

/// A guarded command over `nparams` distinct process parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub name: String,
    pub nparams: u8,
    /// Guard over the parameters; `Proc(i)` is parameter `i`. Normalized but
    /// not canonicalized, since parameter positions are meaningful.
    pub guard: Cube,
    /// One entry per global; `None` is the identity update.
    pub globals: Vec<Option<Value>>,
    /// One entry per array.
    pub arrays: Vec<ArrayUpdate>,
}

/// `∀ distinct p0..p(n-1). lits`. Literals without process variables hold
/// unconditionally.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InitFormula {
    pub nparams: u8,
    pub lits: Vec<Literal>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreSystem {
    pub name: String,
    pub sig: Signature,
    pub init: InitFormula,
    /// Cubes whose negations conjoin to `init`.
    pub init_cubes: Vec<Cube>,
    pub unsafe_cube: Cube,
    pub transitions: Vec<Transition>,
}

impl CoreSystem {
    pub fn new(
        name: impl Into<String>,
        sig: Signature,
        init: InitFormula,
        unsafe_cube: Cube,
        transitions: Vec<Transition>,
    ) -> CoreSystem {
        let mut init_cubes: Vec<Cube> = init
            .lits
            .iter()
            .map(|l| {
                let neg = sig.negate(l);
                if l.procs().next().is_none() {
                    Cube::from_literals(0, [neg])
                } else {
                    Cube::canonical(init.nparams, [neg])
                }
            })
            .collect();
        init_cubes.sort();
        init_cubes.dedup();
        CoreSystem {
            name: name.into(),
            sig,
            init,
            init_cubes,
            unsafe_cube,
            transitions,
        }
    }

    /// Universal clauses (as cubes to exclude) that make up `w`, or `None`
    /// for the bottom world.
    pub fn world_clauses<'a>(&'a self, w: &'a World) -> Option<Vec<&'a Cube>> {
        let mut out: Vec<&Cube> = Vec::new();
        match w.base() {
            Base::Bottom => return None,
            Base::Init => out.extend(self.init_cubes.iter()),
            Base::Top => {}
        }
        out.extend(w.negated_cubes().iter());
        Some(out)
    }

    /// Largest parameter count among unsafe and the transitions.
    pub fn max_arity(&self) -> u8 {
        self.transitions
            .iter()
            .map(|t| t.nparams)
            .chain(std::iter::once(self.unsafe_cube.nprocs()))
            .max()
            .unwrap_or(0)
    }

    pub fn transition_index(&self, name: &str) -> Option<usize> {
        self.transitions.iter().position(|t| t.name == name)
    }
}
