//! Transition semantics over cubes and worlds: enabledness, post-image
//! entailment and intersection, and exact pre-images.

use thiserror::Error;

use crate::logic::{reduce, Cube, Literal, Term, World};
use crate::solver::{Query, SatResult, Solver, SolverError};
use crate::system::{CoreSystem, Index, Transition, Value};

pub const DEFAULT_ARITY_CAP: u8 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LimitError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("pre-image cube with {found} processes exceeds the arity cap of {cap}")]
    Arity { cap: u8, found: u8 },
}

/// `∃X. τ(X, X') ∧ bad(X')` as a set of cubes.
///
/// Every way of identifying the transition's parameters with the bad cube's
/// variables (or keeping them apart as new variables) yields one candidate;
/// primed reads are replaced by the update values, which is exact because the
/// case conditions only compare the updated index with parameters. The
/// result is canonical, free of syntactic bottoms, and subsumption-reduced.
pub fn pre_image(t: &Transition, bad: &Cube) -> Vec<Cube> {
    if bad.is_bottom() || t.guard.is_bottom() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut sigma = vec![0u8; t.nparams as usize];
    let mut taken = vec![false; bad.nprocs() as usize];
    identify(t, bad, 0, 0, &mut sigma, &mut taken, &mut out);
    reduce(out)
}

fn identify(
    t: &Transition,
    bad: &Cube,
    param: usize,
    fresh: u8,
    sigma: &mut [u8],
    taken: &mut [bool],
    out: &mut Vec<Cube>,
) {
    if param == sigma.len() {
        let total = bad.nprocs() + fresh;
        let guard = t.guard.literals().iter().map(|l| l.map_procs(|p| sigma[p as usize]));
        let post = bad.literals().iter().map(|l| substitute_primed(t, sigma, l));
        let c = Cube::from_literals(total, guard.chain(post).collect::<Vec<_>>());
        if !c.is_bottom() {
            out.push(c.canonicalize());
        }
        return;
    }
    for q in 0..bad.nprocs() {
        if !taken[q as usize] {
            taken[q as usize] = true;
            sigma[param] = q;
            identify(t, bad, param + 1, fresh, sigma, taken, out);
            taken[q as usize] = false;
        }
    }
    sigma[param] = bad.nprocs() + fresh;
    identify(t, bad, param + 1, fresh + 1, sigma, taken, out);
}

fn substitute_primed(t: &Transition, sigma: &[u8], l: &Literal) -> Literal {
    let term = |x: Term| match x {
        Term::Global(g) => match t.globals[g.0 as usize] {
            None => x,
            Some(v) => value_term(v, sigma, None),
        },
        Term::Array(a, q) => match t.arrays[a.0 as usize].value_for(|p| sigma[p as usize] == q) {
            None => x,
            Some(v) => value_term(v, sigma, Some(q)),
        },
        _ => x,
    };
    Literal::new(term(l.lhs), l.polarity, term(l.rhs))
}

fn value_term(v: Value, sigma: &[u8], here: Option<u8>) -> Term {
    match v {
        Value::Const(c) => Term::Const(c),
        Value::Param(i) => Term::Proc(sigma[i as usize]),
        Value::Global(g) => Term::Global(g),
        Value::Array(a, Index::Param(i)) => Term::Array(a, sigma[i as usize]),
        Value::Array(a, Index::Here) => Term::Array(a, here.expect("case index outside an array update")),
    }
}

/// Transition judgments against a fixed system and solver.
#[derive(Clone, Copy)]
pub struct Semantics<'a> {
    pub sys: &'a CoreSystem,
    pub solver: &'a Solver,
    pub arity_cap: u8,
}

impl<'a> Semantics<'a> {
    pub fn new(sys: &'a CoreSystem, solver: &'a Solver) -> Self {
        Semantics {
            sys,
            solver,
            arity_cap: DEFAULT_ARITY_CAP,
        }
    }

    pub fn transition(&self, index: usize) -> &'a Transition {
        &self.sys.transitions[index]
    }

    /// Some state of `w` can fire `τ`.
    pub fn enabled(&self, w: &World, tau: usize) -> Result<bool, LimitError> {
        let t = self.transition(tau);
        let Some(clauses) = self.sys.world_clauses(w) else {
            return Ok(false);
        };
        if t.guard.is_bottom() {
            return Ok(false);
        }
        let q = Query {
            nconsts: t.nparams,
            lits: t.guard.literals(),
            clauses,
        };
        Ok(self.solver.sat(&q)?.is_sat())
    }

    /// Pre-image restricted to satisfiable cubes, with the arity cap applied.
    pub fn pre_image(&self, bad: &Cube, tau: usize) -> Result<Vec<Cube>, LimitError> {
        let mut out = Vec::new();
        for c in pre_image(self.transition(tau), bad) {
            if self.solver.sat_cube_in(self.sys, &c, &World::top())?.is_sat() {
                if c.nprocs() > self.arity_cap {
                    return Err(LimitError::Arity {
                        cap: self.arity_cap,
                        found: c.nprocs(),
                    });
                }
                out.push(c);
            }
        }
        Ok(out)
    }

    /// Sat iff some state of `w` reaches `bad` by `τ`; the model is a
    /// pre-state witness over the matching pre-image cube's variables.
    pub fn post_intersects_bad(&self, w: &World, tau: usize, bad: &Cube) -> Result<SatResult, LimitError> {
        for c in self.pre_image(bad, tau)? {
            let r = self.solver.sat_cube_in(self.sys, &c, w)?;
            if r.is_sat() {
                return Ok(r);
            }
        }
        Ok(SatResult::Unsat)
    }

    /// `w ∧ τ ⊨ target'`. Vacuously true when `τ` is disabled in `w`.
    pub fn post_entails(&self, w: &World, tau: usize, target: &World) -> Result<bool, LimitError> {
        let Some(clauses) = self.sys.world_clauses(target) else {
            return Ok(!self.enabled(w, tau)?);
        };
        for c in clauses {
            if self.post_intersects_bad(w, tau, c)?.is_sat() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
