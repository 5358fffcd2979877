//! Cubes: existentially closed conjunctions of literals over pairwise
//! distinct process variables.

use std::fmt;

use itertools::Itertools;

use super::term::{Literal, Polarity, Signature, Term};

/// `∃p0..p(n-1) distinct. l1 && ... && lk`.
///
/// Literals are duplicate-free and sorted. A cube whose literals are
/// contradictory is collapsed to the distinguished bottom cube.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cube {
    bottom: bool,
    nprocs: u8,
    lits: Vec<Literal>,
}

/// Above this arity canonicalization only permutes variables that share a
/// structural signature instead of trying every permutation.
const EXHAUSTIVE_LIMIT: u8 = 5;

impl Cube {
    pub fn bottom() -> Cube {
        Cube {
            bottom: true,
            nprocs: 0,
            lits: Vec::new(),
        }
    }

    /// The cube with no literals over `nprocs` variables.
    pub fn top(nprocs: u8) -> Cube {
        Cube {
            bottom: false,
            nprocs,
            lits: Vec::new(),
        }
    }

    /// Builds a normalized cube: literals oriented, syntactically decided
    /// literals removed, duplicates dropped, and obvious contradictions
    /// (complementary pairs, one term equal to two values) mapped to bottom.
    /// Variable numbering is kept as given; see [`Cube::canonicalize`].
    pub fn from_literals(nprocs: u8, lits: impl IntoIterator<Item = Literal>) -> Cube {
        let mut out = Vec::new();
        for l in lits {
            let l = Literal::new(l.lhs, l.polarity, l.rhs);
            debug_assert!(l.procs().all(|p| p < nprocs), "unbound process variable");
            match l.trivial_value() {
                Some(true) => {}
                Some(false) => return Cube::bottom(),
                None => out.push(l),
            }
        }
        out.sort();
        out.dedup();

        // term = value bindings; values sort after every non-value term so a
        // binding always has the value on the right.
        let mut bound: Vec<(Term, Term)> = Vec::new();
        for l in &out {
            if l.is_positive() && l.rhs.is_value() {
                match bound.iter().find(|(t, _)| *t == l.lhs) {
                    Some((_, v)) if *v != l.rhs => return Cube::bottom(),
                    Some(_) => {}
                    None => bound.push((l.lhs, l.rhs)),
                }
            }
        }
        let mut conflict = false;
        out.retain(|l| {
            if l.polarity == Polarity::Neq {
                if let Some((_, v)) = bound.iter().find(|(t, _)| *t == l.lhs) {
                    if *v == l.rhs {
                        conflict = true;
                    } else if l.rhs.is_value() {
                        return false;
                    }
                }
            }
            true
        });
        if conflict {
            return Cube::bottom();
        }
        // complementary pairs between non-value terms
        for l in out.iter().filter(|l| l.polarity == Polarity::Neq) {
            let pos = Literal::new(l.lhs, Polarity::Eq, l.rhs);
            if out.binary_search(&pos).is_ok() {
                return Cube::bottom();
            }
        }
        Cube {
            bottom: false,
            nprocs,
            lits: out,
        }
    }

    /// Normalized and canonical.
    pub fn canonical(nprocs: u8, lits: impl IntoIterator<Item = Literal>) -> Cube {
        Cube::from_literals(nprocs, lits).canonicalize()
    }

    pub fn is_bottom(&self) -> bool {
        self.bottom
    }

    pub fn nprocs(&self) -> u8 {
        self.nprocs
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn used_procs(&self) -> Vec<bool> {
        let mut used = vec![false; self.nprocs as usize];
        for p in self.lits.iter().flat_map(|l| l.procs()) {
            used[p as usize] = true;
        }
        used
    }

    fn renamed(&self, perm: &[u8]) -> Vec<Literal> {
        let mut lits: Vec<Literal> = self
            .lits
            .iter()
            .map(|l| l.map_procs(|p| perm[p as usize]))
            .collect();
        lits.sort();
        lits
    }

    /// Lexicographically least variant of this cube under renaming of its
    /// bound variables.
    pub fn canonicalize(&self) -> Cube {
        if self.bottom || self.nprocs <= 1 {
            return self.clone();
        }
        let n = self.nprocs;
        let mut best: Option<Vec<Literal>> = None;
        let mut consider = |perm: &[u8]| {
            let lits = self.renamed(perm);
            if best.as_ref().is_none_or(|b| lits < *b) {
                best = Some(lits);
            }
        };
        if n <= EXHAUSTIVE_LIMIT {
            for order in (0..n).permutations(n as usize) {
                consider(&order);
            }
        } else {
            for perm in self.signature_permutations() {
                consider(&perm);
            }
        }
        Cube {
            bottom: false,
            nprocs: n,
            lits: best.expect("at least one permutation"),
        }
    }

    /// Permutations that send variables with smaller structural signatures to
    /// smaller indices. The signature of a variable is the sorted list of its
    /// literals with itself and all other variables anonymized, so the candidate
    /// set is invariant under renaming.
    fn signature_permutations(&self) -> Vec<Vec<u8>> {
        const ME: u8 = u8::MAX;
        const OTHER: u8 = u8::MAX - 1;
        let n = self.nprocs as usize;
        let sigs: Vec<Vec<Literal>> = (0..self.nprocs)
            .map(|v| {
                let mut s: Vec<Literal> = self
                    .lits
                    .iter()
                    .filter(|l| l.procs().any(|p| p == v))
                    .map(|l| l.map_procs(|p| if p == v { ME } else { OTHER }))
                    .collect();
                s.sort();
                s
            })
            .collect();
        let mut vars: Vec<u8> = (0..self.nprocs).collect();
        vars.sort_by(|a, b| sigs[*a as usize].cmp(&sigs[*b as usize]).then(a.cmp(b)));
        let groups: Vec<Vec<u8>> = vars
            .iter()
            .chunk_by(|v| &sigs[**v as usize])
            .into_iter()
            .map(|(_, g)| g.copied().collect())
            .collect();
        let per_group: Vec<Vec<Vec<u8>>> = groups
            .iter()
            .map(|g| g.iter().copied().permutations(g.len()).collect())
            .collect();
        let mut out = Vec::new();
        for choice in per_group.iter().map(|g| g.iter()).multi_cartesian_product() {
            let mut perm = vec![0u8; n];
            let mut next = 0u8;
            for order in choice {
                for &old in order {
                    perm[old as usize] = next;
                    next += 1;
                }
            }
            out.push(perm);
        }
        if out.is_empty() {
            out.push((0..self.nprocs).collect());
        }
        out
    }

    /// Applies a renaming of bound variables into `nprocs` fresh variables.
    /// Identifying two variables contradicts their distinctness, which yields
    /// bottom.
    pub fn substitute(&self, map: &[u8], nprocs: u8) -> Cube {
        if self.bottom {
            return Cube::bottom();
        }
        assert_eq!(map.len(), self.nprocs as usize, "mapping must cover every variable");
        if !map.iter().all_unique() {
            return Cube::bottom();
        }
        Cube::from_literals(nprocs, self.lits.iter().map(|l| l.map_procs(|p| map[p as usize])))
    }

    /// Drops variables that occur in no literal and renumbers the rest.
    pub fn compact(&self) -> Cube {
        if self.bottom {
            return Cube::bottom();
        }
        let used = self.used_procs();
        let mut map = vec![0u8; self.nprocs as usize];
        let mut next = 0u8;
        for (i, u) in used.iter().enumerate() {
            if *u {
                map[i] = next;
                next += 1;
            }
        }
        Cube::canonical(next, self.lits.iter().map(|l| l.map_procs(|p| map[p as usize])))
    }

    /// Sub-cube without the literal at `index`, compacted.
    pub fn without(&self, index: usize) -> Cube {
        let mut lits = self.lits.clone();
        lits.remove(index);
        Cube::from_literals(self.nprocs, lits).compact()
    }

    /// True when some injective renaming of `self`'s variables into
    /// `specific`'s variables maps every literal of `self` into `specific`.
    /// Then `specific` entails `self`.
    pub fn subsumes(&self, specific: &Cube) -> bool {
        if specific.bottom {
            return true;
        }
        if self.bottom
            || self.nprocs > specific.nprocs
            || self.lits.len() > specific.lits.len()
        {
            return false;
        }
        // literals grouped by the highest variable they mention
        let mut by_last: Vec<Vec<&Literal>> = vec![Vec::new(); self.nprocs as usize];
        for l in &self.lits {
            match l.procs().max() {
                Some(p) => by_last[p as usize].push(l),
                None => {
                    if specific.lits.binary_search(l).is_err() {
                        return false;
                    }
                }
            }
        }
        let mut map = vec![0u8; self.nprocs as usize];
        let mut used = vec![false; specific.nprocs as usize];
        embed(0, &by_last, specific, &mut map, &mut used)
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> CubeDisplay<'a> {
        CubeDisplay { sig, cube: self }
    }
}

fn embed(
    var: usize,
    by_last: &[Vec<&Literal>],
    specific: &Cube,
    map: &mut [u8],
    used: &mut [bool],
) -> bool {
    if var == map.len() {
        return true;
    }
    for target in 0..specific.nprocs {
        if used[target as usize] {
            continue;
        }
        map[var] = target;
        let ok = by_last[var]
            .iter()
            .all(|l| specific.lits.binary_search(&l.map_procs(|p| map[p as usize])).is_ok());
        if ok {
            used[target as usize] = true;
            if embed(var + 1, by_last, specific, map, used) {
                return true;
            }
            used[target as usize] = false;
        }
    }
    false
}

/// Removes bottom cubes, duplicates, and cubes subsumed by another member.
/// The result is sorted.
pub fn reduce(cubes: impl IntoIterator<Item = Cube>) -> Vec<Cube> {
    let mut all: Vec<Cube> = cubes.into_iter().filter(|c| !c.is_bottom()).collect();
    all.sort_by(|a, b| {
        (a.nprocs, a.lits.len())
            .cmp(&(b.nprocs, b.lits.len()))
            .then_with(|| a.cmp(b))
    });
    all.dedup();
    let mut kept: Vec<Cube> = Vec::new();
    for c in all {
        if !kept.iter().any(|k| k.subsumes(&c)) {
            kept.push(c);
        }
    }
    kept.sort();
    kept
}

pub struct CubeDisplay<'a> {
    sig: &'a Signature,
    cube: &'a Cube,
}

impl fmt::Display for CubeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cube.bottom {
            return write!(f, "⊥");
        }
        if self.cube.nprocs > 0 {
            let vars = (0..self.cube.nprocs).map(|p| format!("p{p}")).join(",");
            write!(f, "∃{vars}. ")?;
        }
        if self.cube.lits.is_empty() {
            return write!(f, "true");
        }
        let body = self.cube.lits.iter().map(|l| l.display(self.sig).to_string()).join(" && ");
        write!(f, "{body}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::term::{ArrayId, GlobalId, Sort, BOOL, FALSE, TRUE};

    pub(crate) fn dekker_sig() -> (Signature, GlobalId, ArrayId, ArrayId) {
        let mut sig = Signature::new();
        let turn = sig.add_global("turn", Sort::Proc);
        let want = sig.add_array("want", Sort::Enum(BOOL));
        let crit = sig.add_array("crit", Sort::Enum(BOOL));
        (sig, turn, want, crit)
    }

    fn is_true(a: ArrayId, p: u8) -> Literal {
        Literal::eq(Term::Array(a, p), Term::Const(TRUE))
    }

    fn is_false(a: ArrayId, p: u8) -> Literal {
        Literal::eq(Term::Array(a, p), Term::Const(FALSE))
    }

    #[test]
    fn symmetric_cube_sorts() {
        let (_, _, _, crit) = dekker_sig();
        let c = Cube::from_literals(2, [is_true(crit, 1), is_true(crit, 0)]);
        let canon = c.canonicalize();
        assert_eq!(canon.literals(), &[is_true(crit, 0), is_true(crit, 1)]);
    }

    #[test]
    fn swapped_variants_agree() {
        let (_, _, want, crit) = dekker_sig();
        let a = Cube::from_literals(2, [is_true(want, 1), is_true(crit, 0)]);
        let b = Cube::from_literals(2, [is_true(want, 0), is_true(crit, 1)]);
        assert_eq!(a.canonicalize(), b.canonicalize());
    }

    #[test]
    fn contradictory_enum_global_is_bottom() {
        let mut sig = Signature::new();
        let ty = sig.add_type("t", &["A", "B", "C"]);
        let x = sig.add_global("x", Sort::Enum(ty));
        let a = Term::Const(sig.constructor(ty, 0));
        let b = Term::Const(sig.constructor(ty, 1));
        let c = Cube::from_literals(1, [Literal::eq(Term::Global(x), a), Literal::eq(Term::Global(x), b)]);
        assert!(c.is_bottom());
        let c = Cube::from_literals(1, [Literal::eq(Term::Global(x), a), Literal::neq(Term::Global(x), a)]);
        assert!(c.is_bottom());
        let c = Cube::from_literals(1, [Literal::eq(Term::Global(x), a), Literal::neq(Term::Global(x), b)]);
        assert_eq!(c.literals(), &[Literal::eq(Term::Global(x), a)]);
    }

    #[test]
    fn turn_bound_to_two_processes_is_bottom() {
        let (_, turn, _, _) = dekker_sig();
        let c = Cube::from_literals(
            2,
            [Literal::eq(Term::Global(turn), Term::Proc(0)), Literal::eq(Term::Global(turn), Term::Proc(1))],
        );
        assert!(c.is_bottom());
    }

    #[test]
    fn renaming_keeps_distinctness() {
        let (_, _, _, crit) = dekker_sig();
        let unsafe_cube = Cube::canonical(2, [is_true(crit, 0), is_true(crit, 1)]);
        let renamed = unsafe_cube.substitute(&[2, 1], 3);
        assert_eq!(renamed.literals(), &[is_true(crit, 1), is_true(crit, 2)]);
        assert!(unsafe_cube.substitute(&[0, 0], 1).is_bottom());
    }

    #[test]
    fn identifying_phi1_variables_is_bottom() {
        let (_, turn, want, crit) = dekker_sig();
        let phi1 = Cube::from_literals(
            2,
            [
                is_true(crit, 0),
                is_true(want, 1),
                Literal::eq(Term::Global(turn), Term::Proc(1)),
                is_false(crit, 1),
            ],
        );
        assert!(phi1.substitute(&[0, 0], 1).is_bottom());
    }

    #[test]
    fn subsumption_examples() {
        let (_, _, want, crit) = dekker_sig();
        let one = Cube::canonical(1, [is_true(crit, 0)]);
        let two = Cube::canonical(2, [is_true(crit, 0), is_true(crit, 1)]);
        let three = Cube::canonical(3, [is_true(crit, 0), is_true(crit, 1), is_true(want, 2)]);
        assert!(one.subsumes(&two));
        assert!(two.subsumes(&three));
        assert!(!two.subsumes(&one));
        let w = Cube::canonical(1, [is_true(want, 0)]);
        assert!(!w.subsumes(&one));
    }

    #[test]
    fn reduce_keeps_general_members() {
        let (_, _, want, crit) = dekker_sig();
        let one = Cube::canonical(1, [is_true(crit, 0)]);
        let two = Cube::canonical(2, [is_true(crit, 0), is_true(want, 1)]);
        let w = Cube::canonical(1, [is_true(want, 0)]);
        let r = reduce([two.clone(), one.clone(), Cube::bottom(), w.clone(), one.clone()]);
        assert_eq!(r.len(), 2);
        assert!(r.contains(&one) && r.contains(&w));
    }

    #[test]
    fn compact_drops_unused_variables() {
        let (_, _, _, crit) = dekker_sig();
        let c = Cube::from_literals(3, [is_true(crit, 2)]);
        let k = c.compact();
        assert_eq!(k.nprocs(), 1);
        assert_eq!(k.literals(), &[is_true(crit, 0)]);
    }

    #[test]
    fn rendering() {
        let (sig, turn, want, crit) = dekker_sig();
        let c = Cube::canonical(
            2,
            [is_true(crit, 0), is_true(want, 1), Literal::eq(Term::Global(turn), Term::Proc(1))],
        );
        assert_eq!(
            c.display(&sig).to_string(),
            "∃p0,p1. turn = p0 && want[p0] = true && crit[p1] = true"
        );
        assert_eq!(Cube::bottom().display(&sig).to_string(), "⊥");
    }

    #[test]
    fn large_cubes_use_signature_classes() {
        let (_, _, want, crit) = dekker_sig();
        let lits = [is_true(crit, 5), is_true(crit, 3), is_true(want, 0), is_true(want, 4), is_false(crit, 1), is_false(want, 2)];
        let c = Cube::from_literals(6, lits);
        let rotated = c.substitute(&[1, 2, 3, 4, 5, 0], 6);
        assert_eq!(c.canonicalize(), rotated.canonicalize());
        assert_eq!(c.canonicalize(), c.canonicalize().canonicalize());
    }
}
