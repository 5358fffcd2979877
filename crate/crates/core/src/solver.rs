//! Decision procedure for the cube fragment.
//!
//! A query is a conjunction of ground literals over `nconsts` pairwise
//! distinct process constants together with universally quantified clauses
//! `∀ distinct x. ¬c(x)`. Satisfiability is decided over the smallest
//! relevant domain: the constants plus one fresh "elsewhere" process per
//! proc-sorted global that points outside them. Clauses are instantiated over
//! that domain and the remaining finite-domain problem is solved by
//! propagation and case splitting.
//!
//! Dropping processes that no term refers to only removes clause instances,
//! so a model over a larger instance restricts to one over this domain; the
//! procedure is therefore exact for the fragment.

use std::collections::BTreeSet;
use std::io::Write;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use itertools::Itertools;
use thiserror::Error;

use crate::logic::{Cube, GlobalId, Literal, Signature, Sort, Term, World};
use crate::state::ConcreteState;
use crate::system::CoreSystem;

pub const DEFAULT_BRANCH_BUDGET: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("solver case-split budget of {0} branches exhausted")]
    ResourceLimit(u64),
}

#[derive(Clone, Debug)]
pub struct Query<'a> {
    pub nconsts: u8,
    pub lits: &'a [Literal],
    /// Cubes whose negations are universally quantified over the domain.
    pub clauses: Vec<&'a Cube>,
}

/// A satisfying assignment. Process constants are `0..nconsts`; any further
/// processes of `state` are the fresh values of proc-sorted globals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub nconsts: u8,
    pub state: ConcreteState,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    Unsat,
    Sat(Model),
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }

    pub fn model(self) -> Option<Model> {
        match self {
            SatResult::Sat(m) => Some(m),
            SatResult::Unsat => None,
        }
    }
}

pub struct Solver {
    sig: Signature,
    budget: u64,
    calls: AtomicU64,
    dump: Option<Mutex<Box<dyn Write + Send>>>,
}

impl std::fmt::Debug for Solver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Solver")
            .field("budget", &self.budget)
            .field("calls", &self.calls())
            .finish()
    }
}

impl Solver {
    pub fn new(sig: &Signature) -> Solver {
        Solver {
            sig: sig.clone(),
            budget: DEFAULT_BRANCH_BUDGET,
            calls: AtomicU64::new(0),
            dump: None,
        }
    }

    pub fn with_budget(mut self, branches: u64) -> Solver {
        self.budget = branches;
        self
    }

    /// Every query and its result is written to `out` as one JSON object per
    /// line.
    pub fn with_dump(mut self, out: Box<dyn Write + Send>) -> Solver {
        self.dump = Some(Mutex::new(out));
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    /// Syntactic pre-test: a complementary pair, or an equality chain that
    /// identifies two distinct values. `false` is non-committal.
    pub fn trivial_unsat(lits: &[Literal]) -> bool {
        let mut terms: Vec<Term> = Vec::new();
        let mut parent: Vec<usize> = Vec::new();
        fn index(t: Term, terms: &mut Vec<Term>, parent: &mut Vec<usize>) -> usize {
            match terms.iter().position(|x| *x == t) {
                Some(i) => i,
                None => {
                    terms.push(t);
                    parent.push(parent.len());
                    terms.len() - 1
                }
            }
        }
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for l in lits {
            let a = index(l.lhs, &mut terms, &mut parent);
            let b = index(l.rhs, &mut terms, &mut parent);
            if l.is_positive() {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        for l in lits.iter().filter(|l| !l.is_positive()) {
            let a = index(l.lhs, &mut terms, &mut parent);
            let b = index(l.rhs, &mut terms, &mut parent);
            if find(&mut parent, a) == find(&mut parent, b) {
                return true;
            }
        }
        let mut value_of: Vec<Option<Term>> = vec![None; terms.len()];
        for (i, t) in terms.iter().enumerate() {
            if t.is_value() {
                let r = find(&mut parent, i);
                match value_of[r] {
                    Some(v) if v != *t => return true,
                    _ => value_of[r] = Some(*t),
                }
            }
        }
        false
    }

    pub fn sat(&self, q: &Query) -> Result<SatResult, SolverError> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let res = self.solve(q);
        if let Some(dump) = &self.dump {
            let result = match &res {
                Ok(SatResult::Sat(_)) => "sat",
                Ok(SatResult::Unsat) => "unsat",
                Err(_) => "limit",
            };
            let rec = serde_json::json!({
                "consts": q.nconsts,
                "lits": q.lits.iter().map(|l| l.display(&self.sig).to_string()).collect::<Vec<_>>(),
                "clauses": q.clauses.iter().map(|c| c.display(&self.sig).to_string()).collect::<Vec<_>>(),
                "result": result,
            });
            if let Ok(mut out) = dump.lock() {
                let _ = writeln!(out, "{rec}");
            }
        }
        res
    }

    /// `cube ∧ w` with the cube's variables as constants.
    pub fn sat_cube_in(&self, sys: &CoreSystem, cube: &Cube, w: &World) -> Result<SatResult, SolverError> {
        if cube.is_bottom() {
            return Ok(SatResult::Unsat);
        }
        let Some(clauses) = sys.world_clauses(w) else {
            return Ok(SatResult::Unsat);
        };
        self.sat(&Query {
            nconsts: cube.nprocs(),
            lits: cube.literals(),
            clauses,
        })
    }

    /// Whether `lits ⊨ w` when the `nconsts` constants are the only
    /// processes: each clause of `w` (init's included) is instantiated on
    /// injective tuples of constants, with no fresh witnesses. Over larger
    /// domains this over-approximates entailment; the engine's own checks go
    /// through exact pre-images instead.
    pub fn entails_world(
        &self,
        sys: &CoreSystem,
        nconsts: u8,
        lits: &[Literal],
        w: &World,
    ) -> Result<bool, SolverError> {
        let Some(clauses) = sys.world_clauses(w) else {
            let q = Query { nconsts, lits, clauses: Vec::new() };
            return Ok(!self.sat(&q)?.is_sat());
        };
        for c in clauses {
            for tuple in (0..nconsts).permutations(c.nprocs() as usize) {
                let mut all: Vec<Literal> = lits.to_vec();
                all.extend(c.literals().iter().map(|l| l.map_procs(|p| tuple[p as usize])));
                let q = Query { nconsts, lits: &all, clauses: Vec::new() };
                if self.sat(&q)?.is_sat() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn solve(&self, q: &Query) -> Result<SatResult, SolverError> {
        if Self::trivial_unsat(q.lits) {
            return Ok(SatResult::Unsat);
        }
        let mut refd: BTreeSet<GlobalId> = BTreeSet::new();
        let all_lits = q.lits.iter().chain(q.clauses.iter().flat_map(|c| c.literals()));
        for l in all_lits {
            for t in [l.lhs, l.rhs] {
                if let Term::Global(g) = t {
                    if self.sig.global_sort(g) == Sort::Proc {
                        refd.insert(g);
                    }
                }
            }
        }
        // A proc global needs at least one process to point at, so an
        // otherwise empty domain gets one fresh element.
        if q.nconsts == 0 && refd.is_empty() {
            refd.extend(self.sig.proc_globals().next());
        }
        let mut search = Search {
            sig: &self.sig,
            q,
            refd: refd.into_iter().collect(),
            procvals: Vec::new(),
            left: self.budget,
            budget: self.budget,
        };
        search.procvals = vec![0; search.refd.len()];
        Ok(match search.split_procs(0, 0)? {
            Some(state) => SatResult::Sat(Model {
                nconsts: q.nconsts,
                state,
            }),
            None => SatResult::Unsat,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ground {
    Slot(usize),
    Val(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Atom {
    Is { slot: usize, val: u8, pos: bool },
    Same { a: usize, b: usize, pos: bool },
}

impl Atom {
    fn negated(self) -> Atom {
        match self {
            Atom::Is { slot, val, pos } => Atom::Is { slot, val, pos: !pos },
            Atom::Same { a, b, pos } => Atom::Same { a, b, pos: !pos },
        }
    }

    fn truth(&self, dom: &[u32]) -> Option<bool> {
        match *self {
            Atom::Is { slot, val, pos } => {
                let d = dom[slot];
                if d == 1 << val {
                    Some(pos)
                } else if d & (1 << val) == 0 {
                    Some(!pos)
                } else {
                    None
                }
            }
            Atom::Same { a, b, pos } => {
                let (da, db) = (dom[a], dom[b]);
                if da & db == 0 {
                    Some(!pos)
                } else if da == db && da.count_ones() == 1 {
                    Some(pos)
                } else {
                    None
                }
            }
        }
    }

    /// Narrows domains so the atom can only be true.
    fn enforce(&self, dom: &mut [u32]) {
        match *self {
            Atom::Is { slot, val, pos: true } => dom[slot] &= 1 << val,
            Atom::Is { slot, val, pos: false } => dom[slot] &= !(1 << val),
            Atom::Same { a, b, pos: true } => {
                let x = dom[a] & dom[b];
                dom[a] = x;
                dom[b] = x;
            }
            Atom::Same { a, b, pos: false } => {
                if dom[a].count_ones() == 1 {
                    dom[b] &= !dom[a];
                }
                if dom[b].count_ones() == 1 {
                    dom[a] &= !dom[b];
                }
            }
        }
    }

    fn slots(&self) -> [usize; 2] {
        match *self {
            Atom::Is { slot, .. } => [slot, slot],
            Atom::Same { a, b, .. } => [a, b],
        }
    }
}

enum Grounded {
    Decided(bool),
    Atom(Atom),
}

struct Search<'a> {
    sig: &'a Signature,
    q: &'a Query<'a>,
    refd: Vec<GlobalId>,
    procvals: Vec<u8>,
    left: u64,
    budget: u64,
}

impl Search<'_> {
    fn spend(&mut self) -> Result<(), SolverError> {
        if self.left == 0 {
            return Err(SolverError::ResourceLimit(self.budget));
        }
        self.left -= 1;
        Ok(())
    }

    /// Case split over the values of referenced proc globals: a constant, an
    /// already introduced fresh process, or one new fresh process.
    fn split_procs(&mut self, i: usize, fresh: u8) -> Result<Option<ConcreteState>, SolverError> {
        let k = self.q.nconsts;
        if i == self.refd.len() {
            return self.solve_enums((k + fresh) as usize);
        }
        for v in 0..=(k + fresh) {
            self.spend()?;
            self.procvals[i] = v;
            let next = if v == k + fresh { fresh + 1 } else { fresh };
            if let Some(s) = self.split_procs(i + 1, next)? {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }

    fn proc_value(&self, g: GlobalId) -> u8 {
        let i = self.refd.binary_search(&g).expect("referenced proc global");
        self.procvals[i]
    }

    fn slot_of_cell(&self, a: usize, d: u8, n: usize) -> usize {
        self.sig.globals.len() + a * n + d as usize
    }

    fn ground_term(&self, t: Term, asg: &[u8], n: usize) -> Ground {
        match t {
            Term::Global(g) => match self.sig.global_sort(g) {
                Sort::Proc => Ground::Val(self.proc_value(g)),
                Sort::Enum(_) => Ground::Slot(g.0 as usize),
            },
            Term::Array(a, p) => Ground::Slot(self.slot_of_cell(a.0 as usize, asg[p as usize], n)),
            Term::Proc(p) => Ground::Val(asg[p as usize]),
            Term::Const(c) => Ground::Val(self.sig.const_index(c)),
        }
    }

    fn ground(&self, l: &Literal, asg: &[u8], n: usize) -> Grounded {
        let pos = l.is_positive();
        match (self.ground_term(l.lhs, asg, n), self.ground_term(l.rhs, asg, n)) {
            (Ground::Val(a), Ground::Val(b)) => Grounded::Decided((a == b) == pos),
            (Ground::Slot(s), Ground::Val(v)) | (Ground::Val(v), Ground::Slot(s)) => {
                Grounded::Atom(Atom::Is { slot: s, val: v, pos })
            }
            (Ground::Slot(a), Ground::Slot(b)) if a == b => Grounded::Decided(pos),
            (Ground::Slot(a), Ground::Slot(b)) => Grounded::Atom(Atom::Same { a, b, pos }),
        }
    }

    fn solve_enums(&mut self, n: usize) -> Result<Option<ConcreteState>, SolverError> {
        let sig = self.sig;
        let identity: Vec<u8> = (0..self.q.nconsts).collect();
        let mut clauses: Vec<Vec<Atom>> = Vec::new();
        for l in self.q.lits {
            match self.ground(l, &identity, n) {
                Grounded::Decided(true) => {}
                Grounded::Decided(false) => return Ok(None),
                Grounded::Atom(a) => clauses.push(vec![a]),
            }
        }
        for cube in &self.q.clauses {
            'tuples: for tuple in (0..n as u8).permutations(cube.nprocs() as usize) {
                let mut clause = Vec::new();
                for l in cube.literals() {
                    match self.ground(l, &tuple, n) {
                        Grounded::Decided(false) => continue 'tuples,
                        Grounded::Decided(true) => {}
                        Grounded::Atom(a) => clause.push(a.negated()),
                    }
                }
                if clause.is_empty() {
                    return Ok(None);
                }
                clauses.push(clause);
            }
        }

        let nslots = sig.globals.len() + sig.arrays.len() * n;
        let mut dom = vec![0u32; nslots];
        for (g, d) in sig.globals.iter().enumerate() {
            if let Sort::Enum(ty) = d.sort {
                dom[g] = full(sig.type_size(ty));
            }
        }
        for (a, d) in sig.arrays.iter().enumerate() {
            let size = match d.sort {
                Sort::Enum(ty) => sig.type_size(ty),
                Sort::Proc => unreachable!("proc-valued arrays are rejected at elaboration"),
            };
            for cell in 0..n {
                dom[self.slot_of_cell(a, cell as u8, n)] = full(size);
            }
        }

        let Some(dom) = self.csp(&clauses, dom)? else {
            return Ok(None);
        };
        let low = |d: u32| if d == 0 { 0 } else { d.trailing_zeros() as u8 };
        let globals = sig
            .globals
            .iter()
            .enumerate()
            .map(|(g, d)| match d.sort {
                Sort::Proc => {
                    let id = GlobalId(g as u16);
                    if self.refd.contains(&id) {
                        self.proc_value(id)
                    } else {
                        0
                    }
                }
                Sort::Enum(_) => low(dom[g]),
            })
            .collect();
        let arrays = (0..sig.arrays.len())
            .map(|a| (0..n).map(|c| low(dom[self.slot_of_cell(a, c as u8, n)])).collect())
            .collect();
        Ok(Some(ConcreteState {
            nprocs: n,
            globals,
            arrays,
        }))
    }

    fn csp(&mut self, clauses: &[Vec<Atom>], mut dom: Vec<u32>) -> Result<Option<Vec<u32>>, SolverError> {
        if !propagate(clauses, &mut dom) {
            return Ok(None);
        }
        let Some(slot) = pick_slot(clauses, &dom) else {
            return Ok(Some(dom));
        };
        let mut bits = dom[slot];
        while bits != 0 {
            let v = bits.trailing_zeros();
            bits &= bits - 1;
            self.spend()?;
            let mut next = dom.clone();
            next[slot] = 1 << v;
            if let Some(d) = self.csp(clauses, next)? {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }
}

fn full(size: usize) -> u32 {
    if size >= 32 {
        u32::MAX
    } else {
        (1u32 << size) - 1
    }
}

/// Unit propagation to a fixpoint. Returns false on conflict.
fn propagate(clauses: &[Vec<Atom>], dom: &mut [u32]) -> bool {
    loop {
        let mut changed = false;
        for clause in clauses {
            let mut unknown = None;
            let mut count = 0;
            let mut sat = false;
            for atom in clause {
                match atom.truth(dom) {
                    Some(true) => {
                        sat = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        count += 1;
                        unknown = Some(*atom);
                    }
                }
            }
            if sat {
                continue;
            }
            match (count, unknown) {
                (0, _) => return false,
                (1, Some(atom)) => {
                    let [a, b] = atom.slots();
                    let before = (dom[a], dom[b]);
                    atom.enforce(dom);
                    if dom[a] == 0 || dom[b] == 0 {
                        return false;
                    }
                    if (dom[a], dom[b]) != before {
                        changed = true;
                    }
                }
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

fn pick_slot(clauses: &[Vec<Atom>], dom: &[u32]) -> Option<usize> {
    for clause in clauses {
        if clause.iter().any(|a| a.truth(dom) == Some(true)) {
            continue;
        }
        for atom in clause.iter().filter(|a| a.truth(dom).is_none()) {
            for s in atom.slots() {
                if dom[s].count_ones() > 1 {
                    return Some(s);
                }
            }
        }
    }
    None
}
