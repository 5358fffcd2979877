use std::collections::HashMap;

use super::cube::Cube;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeId(pub u32);

/// Hash-consing store for canonical cubes. Identities are dense and
/// assigned in insertion order, so they are stable across identical runs.
#[derive(Debug, Default)]
pub struct CubeTable {
    ids: HashMap<Cube, CubeId>,
    cubes: Vec<Cube>,
}

impl CubeTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, cube: &Cube) -> CubeId {
        if let Some(id) = self.ids.get(cube) {
            return *id;
        }
        let id = CubeId(self.cubes.len() as u32);
        self.cubes.push(cube.clone());
        self.ids.insert(cube.clone(), id);
        id
    }

    pub fn get(&self, id: CubeId) -> &Cube {
        &self.cubes[id.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_stable() {
        let mut t = CubeTable::new();
        let a = t.intern(&Cube::top(1));
        let b = t.intern(&Cube::top(2));
        assert_eq!(t.intern(&Cube::top(1)), a);
        assert_ne!(a, b);
        assert_eq!(t.get(b), &Cube::top(2));
    }
}
