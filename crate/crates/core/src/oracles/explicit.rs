//! Explicit-state semantics of a fixed-size instance and breadth-first
//! reachability over it.
//!
//! Everything here works on [`ConcreteState`]s directly from the
//! [`CoreSystem`] definition; no solver or cube machinery is involved.

use std::collections::HashMap;

use itertools::Itertools;
use thiserror::Error;

use crate::logic::{Cube, Literal, Sort, Term, World, Base};
use crate::state::ConcreteState;
use crate::system::{ArrayUpdate, CoreSystem, Index, Transition, Value};
use crate::trace::{Step, Trace};
use crate::verdict::Verdict;

pub const DEFAULT_STATE_LIMIT: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExplicitError {
    #[error("instance needs at least {need} processes, got {got}")]
    TooFewProcs { need: usize, got: usize },
    #[error("reachable state count exceeds the limit of {0}")]
    StateLimit(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("step {step}: unknown transition `{name}`")]
    UnknownTransition { step: usize, name: String },
    #[error("step {step}: bad parameters for `{name}`")]
    BadParams { step: usize, name: String },
    #[error("step {step}: transition `{name}` is disabled")]
    Disabled { step: usize, name: String },
}

/// The instance of a system with `n` processes.
#[derive(Clone, Copy)]
pub struct Instance<'a> {
    pub sys: &'a CoreSystem,
    pub n: usize,
}

impl<'a> Instance<'a> {
    pub fn new(sys: &'a CoreSystem, n: usize) -> Self {
        Instance { sys, n }
    }

    fn term(&self, s: &ConcreteState, t: Term, asg: &[usize]) -> usize {
        match t {
            Term::Global(g) => s.globals[g.0 as usize] as usize,
            Term::Array(a, p) => s.arrays[a.0 as usize][asg[p as usize]] as usize,
            Term::Proc(p) => asg[p as usize],
            Term::Const(c) => self.sys.sig.const_index(c) as usize,
        }
    }

    pub fn literal(&self, s: &ConcreteState, l: &Literal, asg: &[usize]) -> bool {
        (self.term(s, l.lhs, asg) == self.term(s, l.rhs, asg)) == l.is_positive()
    }

    /// The cube holds under this particular assignment of its variables.
    pub fn cube_at(&self, s: &ConcreteState, c: &Cube, asg: &[usize]) -> bool {
        !c.is_bottom() && c.literals().iter().all(|l| self.literal(s, l, asg))
    }

    /// Some injective assignment of the cube's variables satisfies it.
    pub fn cube(&self, s: &ConcreteState, c: &Cube) -> bool {
        !c.is_bottom()
            && (0..self.n)
                .permutations(c.nprocs() as usize)
                .any(|asg| self.cube_at(s, c, &asg))
    }

    pub fn init(&self, s: &ConcreteState) -> bool {
        let init = &self.sys.init;
        (0..self.n)
            .permutations(init.nparams as usize)
            .all(|asg| init.lits.iter().all(|l| self.literal(s, l, &asg)))
    }

    pub fn world(&self, s: &ConcreteState, w: &World) -> bool {
        match w.base() {
            Base::Bottom => return false,
            Base::Init if !self.init(s) => return false,
            _ => {}
        }
        w.negated_cubes().iter().all(|c| !self.cube(s, c))
    }

    pub fn is_unsafe(&self, s: &ConcreteState) -> bool {
        self.cube(s, &self.sys.unsafe_cube)
    }

    pub fn enabled(&self, s: &ConcreteState, t: &Transition, params: &[usize]) -> bool {
        self.cube_at(s, &t.guard, params)
    }

    fn value(&self, s: &ConcreteState, v: Value, params: &[usize], here: usize) -> u8 {
        match v {
            Value::Const(c) => self.sys.sig.const_index(c),
            Value::Param(i) => params[i as usize] as u8,
            Value::Global(g) => s.globals[g.0 as usize],
            Value::Array(a, Index::Param(i)) => s.arrays[a.0 as usize][params[i as usize]],
            Value::Array(a, Index::Here) => s.arrays[a.0 as usize][here],
        }
    }

    /// Successor by `t` with the given parameters; the guard is not checked.
    pub fn fire(&self, s: &ConcreteState, t: &Transition, params: &[usize]) -> ConcreteState {
        let mut next = s.clone();
        for (g, upd) in t.globals.iter().enumerate() {
            if let Some(v) = upd {
                next.globals[g] = self.value(s, *v, params, 0);
            }
        }
        for (a, upd) in t.arrays.iter().enumerate() {
            if let ArrayUpdate::Cases { .. } = upd {
                for j in 0..self.n {
                    let v = upd.value_for(|p| params[p as usize] == j).expect("case update");
                    next.arrays[a][j] = self.value(s, v, params, j);
                }
            }
        }
        next
    }

    /// Enabled moves in a fixed order: transitions in declaration order,
    /// parameter tuples lexicographically.
    pub fn successors<'s>(
        &'s self,
        s: &'s ConcreteState,
    ) -> impl Iterator<Item = (usize, Vec<usize>, ConcreteState)> + 's {
        self.sys.transitions.iter().enumerate().flat_map(move |(ti, t)| {
            (0..self.n)
                .permutations(t.nparams as usize)
                .filter(move |ps| self.enabled(s, t, ps))
                .map(move |ps| {
                    let next = self.fire(s, t, &ps);
                    (ti, ps, next)
                })
        })
    }

    fn domain(&self, sort: Sort) -> u8 {
        match sort {
            Sort::Proc => self.n as u8,
            Sort::Enum(ty) => self.sys.sig.type_size(ty) as u8,
        }
    }

    /// Every state of the instance, in lexicographic order.
    pub fn all_states(&self) -> Vec<ConcreteState> {
        self.enumerate(false)
    }

    /// States satisfying init, in lexicographic order.
    pub fn initial_states(&self) -> Vec<ConcreteState> {
        self.enumerate(true)
    }

    fn enumerate(&self, only_init: bool) -> Vec<ConcreteState> {
        let sig = &self.sys.sig;
        let ng = sig.globals.len();
        let n = self.n;
        let mut sizes: Vec<u8> = sig.globals.iter().map(|d| self.domain(d.sort)).collect();
        for d in &sig.arrays {
            sizes.extend(std::iter::repeat_n(self.domain(d.sort), n));
        }
        let slot = |t: Term, asg: &[usize]| -> Option<usize> {
            match t {
                Term::Global(g) => Some(g.0 as usize),
                Term::Array(a, p) => Some(ng + a.0 as usize * n + asg[p as usize]),
                _ => None,
            }
        };
        // init literal instances, grouped by the last slot they read
        let mut checks: Vec<Vec<(Literal, Vec<usize>)>> = vec![Vec::new(); sizes.len()];
        let mut dead = false;
        if only_init {
            let init = &self.sys.init;
            for asg in (0..n).permutations(init.nparams as usize) {
                for l in &init.lits {
                    match [slot(l.lhs, &asg), slot(l.rhs, &asg)].into_iter().flatten().max() {
                        Some(last) => checks[last].push((*l, asg.clone())),
                        None => dead |= !self.literal(&self.blank(), l, &asg),
                    }
                }
            }
        }
        if dead {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut vals = vec![0u8; sizes.len()];
        self.fill(0, &sizes, &checks, &mut vals, &mut out);
        out
    }

    fn blank(&self) -> ConcreteState {
        let sig = &self.sys.sig;
        ConcreteState {
            nprocs: self.n,
            globals: vec![0; sig.globals.len()],
            arrays: vec![vec![0; self.n]; sig.arrays.len()],
        }
    }

    fn state_of(&self, vals: &[u8]) -> ConcreteState {
        let ng = self.sys.sig.globals.len();
        ConcreteState {
            nprocs: self.n,
            globals: vals[..ng].to_vec(),
            arrays: vals[ng..].chunks(self.n.max(1)).map(|c| c.to_vec()).collect(),
        }
    }

    fn fill(
        &self,
        i: usize,
        sizes: &[u8],
        checks: &[Vec<(Literal, Vec<usize>)>],
        vals: &mut Vec<u8>,
        out: &mut Vec<ConcreteState>,
    ) {
        if i == sizes.len() {
            out.push(self.state_of(vals));
            return;
        }
        for v in 0..sizes[i] {
            vals[i] = v;
            if !checks[i].is_empty() {
                // unassigned slots are never read by these checks
                let s = self.state_of(vals);
                if !checks[i].iter().all(|(l, asg)| self.literal(&s, l, asg)) {
                    continue;
                }
            }
            self.fill(i + 1, sizes, checks, vals, out);
        }
    }
}

/// Result of breadth-first exploration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitReport {
    pub verdict: Verdict,
    /// Distinct states discovered.
    pub states: usize,
}

/// Breadth-first reachability at a fixed number of processes. An unsafe
/// verdict carries a shortest trace.
pub fn explicit_reach(sys: &CoreSystem, n: usize, limit: usize) -> Result<ExplicitReport, ExplicitError> {
    let need = sys.max_arity() as usize;
    if n < need.max(1) {
        return Err(ExplicitError::TooFewProcs { need: need.max(1), got: n });
    }
    let inst = Instance::new(sys, n);
    let mut index: HashMap<ConcreteState, usize> = HashMap::new();
    let mut states: Vec<ConcreteState> = Vec::new();
    let mut parent: Vec<Option<(usize, usize, Vec<usize>)>> = Vec::new();

    let trace_to = |i: usize, parent: &[Option<(usize, usize, Vec<usize>)>]| {
        let mut steps = Vec::new();
        let mut cur = i;
        while let Some((p, t, ps)) = &parent[cur] {
            steps.push(Step {
                transition: sys.transitions[*t].name.clone(),
                params: ps.clone(),
            });
            cur = *p;
        }
        steps.reverse();
        Trace {
            model: sys.name.clone(),
            nprocs: n,
            steps,
        }
    };

    for s in inst.initial_states() {
        if index.contains_key(&s) {
            continue;
        }
        if states.len() >= limit {
            return Err(ExplicitError::StateLimit(limit));
        }
        index.insert(s.clone(), states.len());
        states.push(s);
        parent.push(None);
        if inst.is_unsafe(states.last().unwrap()) {
            let trace = trace_to(states.len() - 1, &parent);
            return Ok(ExplicitReport {
                verdict: Verdict::Unsafe { trace },
                states: states.len(),
            });
        }
    }
    let mut head = 0;
    while head < states.len() {
        let cur = states[head].clone();
        for (t, ps, next) in inst.successors(&cur) {
            if index.contains_key(&next) {
                continue;
            }
            if states.len() >= limit {
                return Err(ExplicitError::StateLimit(limit));
            }
            let unsafe_ = inst.is_unsafe(&next);
            index.insert(next.clone(), states.len());
            states.push(next);
            parent.push(Some((head, t, ps)));
            if unsafe_ {
                let trace = trace_to(states.len() - 1, &parent);
                return Ok(ExplicitReport {
                    verdict: Verdict::Unsafe { trace },
                    states: states.len(),
                });
            }
        }
        head += 1;
    }
    Ok(ExplicitReport {
        verdict: Verdict::Safe { invariant: Vec::new() },
        states: states.len(),
    })
}

/// Whether firing the trace from some initial state of the `n`-process
/// instance ends in an unsafe state.
pub fn replay_trace(sys: &CoreSystem, trace: &Trace, n: usize) -> Result<bool, ReplayError> {
    let inst = Instance::new(sys, n);
    let mut resolved = Vec::with_capacity(trace.steps.len());
    for (k, step) in trace.steps.iter().enumerate() {
        let Some(ti) = sys.transition_index(&step.transition) else {
            return Err(ReplayError::UnknownTransition {
                step: k,
                name: step.transition.clone(),
            });
        };
        let t = &sys.transitions[ti];
        let ok = step.params.len() == t.nparams as usize
            && step.params.iter().all(|&p| p < n)
            && step.params.iter().all_unique();
        if !ok {
            return Err(ReplayError::BadParams {
                step: k,
                name: step.transition.clone(),
            });
        }
        resolved.push(t);
    }
    let mut furthest: Option<usize> = None;
    let mut completed = false;
    for init in inst.initial_states() {
        let mut s = init;
        let mut stuck = None;
        for (k, (t, step)) in resolved.iter().zip(&trace.steps).enumerate() {
            if !inst.enabled(&s, t, &step.params) {
                stuck = Some(k);
                break;
            }
            s = inst.fire(&s, t, &step.params);
        }
        match stuck {
            None => {
                if inst.is_unsafe(&s) {
                    return Ok(true);
                }
                completed = true;
            }
            Some(k) => furthest = Some(furthest.map_or(k, |f: usize| f.max(k))),
        }
    }
    if completed || trace.steps.is_empty() {
        return Ok(false);
    }
    let k = furthest.unwrap_or(0);
    Err(ReplayError::Disabled {
        step: k,
        name: trace.steps[k].transition.clone(),
    })
}
