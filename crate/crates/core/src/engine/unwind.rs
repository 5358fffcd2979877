//! The main loop, edge unwinding and edge closing.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::rc::Rc;
use std::time::Instant;

use super::graph::{BadRef, Graph, VertexId, BETA, EPSILON, OMEGA};
use super::{Config, QueueOrder};
use crate::logic::{Cube, CubeId, World};
use crate::solver::Solver;
use crate::system::CoreSystem;
use crate::transitions::{LimitError, Semantics};

/// Why a run stopped without a verdict.
#[derive(Debug)]
pub(super) enum Stop {
    Budget(String),
    Limit(LimitError),
}

impl From<LimitError> for Stop {
    fn from(e: LimitError) -> Self {
        Stop::Limit(e)
    }
}

impl From<crate::solver::SolverError> for Stop {
    fn from(e: crate::solver::SolverError) -> Self {
        Stop::Limit(e.into())
    }
}

/// A cube satisfiable with init together with the bads it leads through.
pub(super) struct Witness {
    pub start: Cube,
    pub chain: Vec<(usize, Cube)>,
}

enum Closed {
    Covered(VertexId),
    Bad(Vec<(Cube, BadRef)>),
    Refined(World),
}

#[derive(Default, Debug, Clone)]
pub(super) struct Counters {
    pub steps: u64,
    pub covers: u64,
    pub refines: u64,
    pub bad_propagations: u64,
}

pub(super) struct Far<'a> {
    pub sys: &'a CoreSystem,
    pub solver: &'a Solver,
    sem: Semantics<'a>,
    cfg: &'a Config,
    pub graph: Graph,
    queue: BinaryHeap<Reverse<(u8, u64, VertexId)>>,
    seq: u64,
    pub counters: Counters,
    started: Instant,
    worlds: HashMap<World, u32>,
    pre_cache: HashMap<(CubeId, usize), Rc<Vec<Cube>>>,
    hit_cache: HashMap<(u32, usize, CubeId), bool>,
}

impl<'a> Far<'a> {
    pub fn new(sys: &'a CoreSystem, solver: &'a Solver, cfg: &'a Config) -> Self {
        let mut sem = Semantics::new(sys, solver);
        sem.arity_cap = cfg.arity_cap;
        Far {
            sys,
            solver,
            sem,
            cfg,
            graph: Graph::new(&sys.unsafe_cube),
            queue: BinaryHeap::new(),
            seq: 0,
            counters: Counters::default(),
            started: Instant::now(),
            worlds: HashMap::new(),
            pre_cache: HashMap::new(),
            hit_cache: HashMap::new(),
        }
    }

    fn push(&mut self, v: VertexId) {
        let key = match self.cfg.queue_order {
            QueueOrder::Procs => self.graph.world(v).min_procs(),
            QueueOrder::Fifo => 0,
        };
        self.queue.push(Reverse((key, self.seq, v)));
        self.seq += 1;
    }

    /// Runs to a verdict. `Ok(None)` is safe.
    pub fn run(&mut self) -> Result<Option<Witness>, Stop> {
        if self.solver.sat_cube_in(self.sys, &self.sys.unsafe_cube, &World::init())?.is_sat() {
            return Ok(Some(Witness {
                start: self.sys.unsafe_cube.clone(),
                chain: Vec::new(),
            }));
        }
        self.push(EPSILON);
        while let Some(Reverse((_, _, v))) = self.queue.pop() {
            for tau in 0..self.sys.transitions.len() {
                let w = self.graph.world(v).clone();
                if self.sem.enabled(&w, tau)? {
                    self.graph.set_edge(v, tau, BETA);
                    if let Some(wit) = self.unwind(v, tau)? {
                        return Ok(Some(wit));
                    }
                } else {
                    self.graph.set_edge(v, tau, OMEGA);
                }
            }
        }
        Ok(None)
    }

    fn step(&mut self) -> Result<(), Stop> {
        if self.counters.steps >= self.cfg.max_steps {
            return Err(Stop::Budget(format!("step budget of {} exhausted", self.cfg.max_steps)));
        }
        if self.cfg.timeout.is_some_and(|t| self.started.elapsed() >= t) {
            return Err(Stop::Budget("timeout".into()));
        }
        self.counters.steps += 1;
        Ok(())
    }

    /// Unwinds the edge `v -τ->` and everything it triggers, depth first.
    fn unwind(&mut self, v: VertexId, tau: usize) -> Result<Option<Witness>, Stop> {
        // Targets already tried for an edge during one chain of covers; a
        // cover never sends an edge back to one of them.
        let mut stack: Vec<(VertexId, usize, Vec<VertexId>)> = vec![(v, tau, Vec::new())];
        while let Some((v, tau, mut tried)) = stack.pop() {
            let Some(t) = self.graph.target(v, tau) else { continue };
            if self.graph.is_bad(v) || !self.graph.is_bad(t) {
                continue;
            }
            self.step()?;
            tried.push(t);
            match self.close(v, tau, t, &tried)? {
                Closed::Covered(u) => {
                    self.counters.covers += 1;
                    self.graph.set_edge(v, tau, u);
                    stack.push((v, tau, tried));
                }
                Closed::Bad(cubes) => {
                    if v == EPSILON {
                        let (start, origin) = cubes.into_iter().next().expect("nonempty bad set");
                        return Ok(Some(self.witness(start, tau, origin)));
                    }
                    self.counters.bad_propagations += 1;
                    for (c, origin) in cubes {
                        self.graph.add_bad(v, &c, Some((tau, origin)));
                    }
                    let incoming: Vec<(VertexId, usize)> = self.graph.incoming[v].iter().copied().collect();
                    for (u, t2) in incoming.into_iter().rev() {
                        stack.push((u, t2, Vec::new()));
                    }
                }
                Closed::Refined(world) => {
                    self.counters.refines += 1;
                    let nv = self.graph.add_vertex(world, Some((v, tau)));
                    self.graph.set_edge(v, tau, nv);
                    self.push(nv);
                }
            }
            if self.cfg.audit_edges {
                self.audit_edge(v, tau)?;
            }
        }
        Ok(None)
    }

    fn witness(&self, start: Cube, tau: usize, origin: BadRef) -> Witness {
        let mut chain = vec![(tau, self.graph.bad_cube(origin).clone())];
        let mut cur = origin;
        while let Some((t, next)) = self.graph.bads[cur.0].origin {
            chain.push((t, self.graph.bad_cube(next).clone()));
            cur = next;
        }
        Witness { start, chain }
    }

    fn close(&mut self, v: VertexId, tau: usize, target: VertexId, tried: &[VertexId]) -> Result<Closed, Stop> {
        let wv = self.graph.world(v).clone();
        let wt = self.graph.world(target).clone();
        for u in 0..self.graph.vertices.len() {
            if u == OMEGA || tried.contains(&u) {
                continue;
            }
            let wu = self.graph.world(u).clone();
            if wu.implies(&wt) && self.post_entails(&wv, tau, &wu)? {
                return Ok(Closed::Covered(u));
            }
        }

        let bads: Vec<BadRef> = self.graph.vertices[target].bads.clone();
        let mut found = Vec::new();
        for b in &bads {
            let cube = self.graph.bad_cube(*b).clone();
            for p in self.pre(&cube, tau)?.iter() {
                if self.solver.sat_cube_in(self.sys, p, &wv)?.is_sat() {
                    found.push((p.clone(), *b));
                }
            }
        }
        if !found.is_empty() {
            return Ok(Closed::Bad(found));
        }

        let mut world = wt.clone();
        for b in &bads {
            let cube = self.graph.bad_cube(*b).clone();
            let g = self.generalize(&wv, tau, &wt, &cube)?;
            world = world.strengthen(&g);
        }
        Ok(Closed::Refined(world))
    }

    /// Greedily drops literals of `bad`, in canonical order, while the
    /// smaller cube stays unreachable from `wv` by `τ` and is not already
    /// excluded by `wt`.
    fn generalize(&mut self, wv: &World, tau: usize, wt: &World, bad: &Cube) -> Result<Cube, Stop> {
        let n = bad.nprocs();
        let mut kept: Vec<crate::logic::Literal> = bad.literals().to_vec();
        for lit in bad.literals() {
            let trial: Vec<_> = kept.iter().copied().filter(|l| l != lit).collect();
            let cand = Cube::from_literals(n, trial.iter().copied()).compact();
            if cand.is_empty() || wt.excludes(&cand) {
                continue;
            }
            if !self.hits(wv, tau, &cand)? {
                kept = trial;
            }
        }
        let g = Cube::from_literals(n, kept).compact();
        Ok(if wt.excludes(&g) { bad.clone() } else { g })
    }

    fn pre(&mut self, cube: &Cube, tau: usize) -> Result<Rc<Vec<Cube>>, Stop> {
        let id = self.graph.cubes.intern(cube);
        if let Some(p) = self.pre_cache.get(&(id, tau)) {
            return Ok(p.clone());
        }
        let p = Rc::new(self.sem.pre_image(cube, tau)?);
        self.pre_cache.insert((id, tau), p.clone());
        Ok(p)
    }

    fn world_key(&mut self, w: &World) -> u32 {
        let next = self.worlds.len() as u32;
        *self.worlds.entry(w.clone()).or_insert(next)
    }

    /// Some state of `w` reaches `cube` by `τ`.
    fn hits(&mut self, w: &World, tau: usize, cube: &Cube) -> Result<bool, Stop> {
        let key = (self.world_key(w), tau, self.graph.cubes.intern(cube));
        if let Some(&r) = self.hit_cache.get(&key) {
            return Ok(r);
        }
        let mut r = false;
        for p in self.pre(cube, tau)?.iter() {
            if self.solver.sat_cube_in(self.sys, p, w)?.is_sat() {
                r = true;
                break;
            }
        }
        self.hit_cache.insert(key, r);
        Ok(r)
    }

    pub fn post_entails(&mut self, w: &World, tau: usize, target: &World) -> Result<bool, Stop> {
        let Some(clauses) = self.sys.world_clauses(target) else {
            return Ok(!self.sem.enabled(w, tau)?);
        };
        let clauses: Vec<Cube> = clauses.into_iter().cloned().collect();
        for c in &clauses {
            if self.hits(w, tau, c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Edges into non-bad vertices other than β and ω must be sound, and
    /// sink edges must carry disabled transitions.
    pub fn audit_edge(&mut self, v: VertexId, tau: usize) -> Result<(), Stop> {
        let Some(t) = self.graph.target(v, tau) else { return Ok(()) };
        let wv = self.graph.world(v).clone();
        let ok = match t {
            OMEGA => !self.sem.enabled(&wv, tau)?,
            BETA => true,
            _ if self.graph.is_bad(t) => true,
            _ => {
                let wt = self.graph.world(t).clone();
                self.post_entails(&wv, tau, &wt)?
            }
        };
        assert!(
            ok,
            "unsound edge {} -{}-> {}",
            self.graph.name(v),
            self.sys.transitions[tau].name,
            self.graph.name(t)
        );
        Ok(())
    }
}
