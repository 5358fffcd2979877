//! The unwinding graph: vertices annotated with worlds and bad parts, and
//! transition-labelled edges.

use std::collections::{BTreeMap, BTreeSet};

use crate::logic::{CubeId, CubeTable, World};

pub type VertexId = usize;

/// The root, whose world is init.
pub const EPSILON: VertexId = 0;
/// The unsafe vertex: world `⊤`, bad part `{unsafe}`.
pub const BETA: VertexId = 1;
/// The sink: world `⊥`.
pub const OMEGA: VertexId = 2;

/// Index into the bad arena.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BadRef(pub usize);

/// A bad cube at some vertex. `origin` is the transition and the successor
/// bad whose pre-image produced it; the unsafe cube at β has none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bad {
    pub cube: CubeId,
    pub vertex: VertexId,
    pub origin: Option<(usize, BadRef)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub world: World,
    pub bads: Vec<BadRef>,
    /// The edge whose refinement created this vertex.
    pub parent: Option<(VertexId, usize)>,
}

#[derive(Debug)]
pub struct Graph {
    pub vertices: Vec<Vertex>,
    /// At most one edge per (source, transition).
    pub edges: BTreeMap<(VertexId, usize), VertexId>,
    pub incoming: Vec<BTreeSet<(VertexId, usize)>>,
    pub bads: Vec<Bad>,
    pub cubes: CubeTable,
}

impl Graph {
    /// The three initial vertices and no edges.
    pub fn new(unsafe_cube: &crate::logic::Cube) -> Graph {
        let mut g = Graph {
            vertices: Vec::new(),
            edges: BTreeMap::new(),
            incoming: Vec::new(),
            bads: Vec::new(),
            cubes: CubeTable::new(),
        };
        g.add_vertex(World::init(), None);
        g.add_vertex(World::top(), None);
        g.add_vertex(World::bottom(), None);
        let u = g.cubes.intern(unsafe_cube);
        g.bads.push(Bad {
            cube: u,
            vertex: BETA,
            origin: None,
        });
        g.vertices[BETA].bads.push(BadRef(0));
        g
    }

    pub fn add_vertex(&mut self, world: World, parent: Option<(VertexId, usize)>) -> VertexId {
        self.vertices.push(Vertex {
            world,
            bads: Vec::new(),
            parent,
        });
        self.incoming.push(BTreeSet::new());
        self.vertices.len() - 1
    }

    pub fn world(&self, v: VertexId) -> &World {
        &self.vertices[v].world
    }

    pub fn is_bad(&self, v: VertexId) -> bool {
        !self.vertices[v].bads.is_empty()
    }

    pub fn target(&self, v: VertexId, tau: usize) -> Option<VertexId> {
        self.edges.get(&(v, tau)).copied()
    }

    /// Adds or redirects the edge of `v` labelled `tau`.
    pub fn set_edge(&mut self, v: VertexId, tau: usize, target: VertexId) {
        if let Some(old) = self.edges.insert((v, tau), target) {
            self.incoming[old].remove(&(v, tau));
        }
        self.incoming[target].insert((v, tau));
    }

    pub fn bad_cube(&self, b: BadRef) -> &crate::logic::Cube {
        self.cubes.get(self.bads[b.0].cube)
    }

    /// Adds a bad cube to `v` unless an existing bad subsumes it; existing
    /// bads subsumed by the new one are dropped.
    pub fn add_bad(&mut self, v: VertexId, cube: &crate::logic::Cube, origin: Option<(usize, BadRef)>) -> bool {
        let existing = &self.vertices[v].bads;
        if existing.iter().any(|b| self.bad_cube(*b).subsumes(cube)) {
            return false;
        }
        let keep: Vec<BadRef> = existing
            .iter()
            .copied()
            .filter(|b| !cube.subsumes(self.bad_cube(*b)))
            .collect();
        let id = self.cubes.intern(cube);
        self.bads.push(Bad {
            cube: id,
            vertex: v,
            origin,
        });
        let r = BadRef(self.bads.len() - 1);
        self.vertices[v].bads = keep;
        self.vertices[v].bads.push(r);
        true
    }

    /// Vertices reachable from ε, in increasing id order.
    pub fn reachable(&self) -> Vec<VertexId> {
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![EPSILON];
        seen[EPSILON] = true;
        while let Some(v) = stack.pop() {
            for (_, &t) in self.edges.range((v, 0)..(v + 1, 0)) {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        (0..self.vertices.len()).filter(|v| seen[*v]).collect()
    }

    pub fn name(&self, v: VertexId) -> String {
        match v {
            EPSILON => "ε".into(),
            BETA => "β".into(),
            OMEGA => "ω".into(),
            k => format!("v{}", k - 2),
        }
    }
}
