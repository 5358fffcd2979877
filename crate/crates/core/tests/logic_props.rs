//! Invariants of the cube and world operations, checked by proptest over
//! seeded random signatures and against concrete 3-process states.

mod common;

use common::*;
use farcheck_core::oracles::Instance;
use farcheck_core::{Cube, Solver, World};
use itertools::Itertools;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonicalize_is_idempotent_and_renaming_invariant(seed in any::<u64>(), k in 0u8..=3) {
        let mut r = rng(seed);
        let sig = random_signature(&mut r);
        let c = random_cube(&mut r, &sig, k, 5);
        let canon = c.canonicalize();
        prop_assert_eq!(&canon.canonicalize(), &canon);
        for perm in (0..k).permutations(k as usize) {
            prop_assert_eq!(&c.substitute(&perm, k).canonicalize(), &canon);
        }
    }

    #[test]
    fn canonical_form_is_equivalent(seed in any::<u64>(), k in 0u8..=3) {
        let mut r = rng(seed);
        let sig = random_signature(&mut r);
        let c = random_cube(&mut r, &sig, k, 4);
        let sys = bare_system(sig);
        let inst = Instance::new(&sys, 3);
        let canon = c.canonicalize();
        for s in inst.all_states() {
            prop_assert_eq!(inst.cube(&s, &c), inst.cube(&s, &canon));
        }
    }

    #[test]
    fn subsumption_is_sound(seed in any::<u64>(), k in 0u8..=3) {
        let mut r = rng(seed);
        let sig = random_signature(&mut r);
        let specific = random_cube(&mut r, &sig, k, 5);
        prop_assume!(!specific.is_bottom());
        // Dropping literals gives a more general cube.
        let general = Cube::from_literals(k, specific.literals().iter().copied().step_by(2)).compact();
        prop_assert!(general.subsumes(&specific));
        let other = random_cube(&mut r, &sig, k, 3);
        let sys = bare_system(sig);
        let inst = Instance::new(&sys, 3);
        for s in inst.all_states() {
            if inst.cube(&s, &specific) {
                prop_assert!(inst.cube(&s, &general));
            }
            if other.subsumes(&specific) && inst.cube(&s, &specific) {
                prop_assert!(inst.cube(&s, &other));
            }
        }
    }

    #[test]
    fn substitute_renames_semantically(seed in any::<u64>(), k in 1u8..=3) {
        let mut r = rng(seed);
        let sig = random_signature(&mut r);
        let c = random_cube(&mut r, &sig, k, 4);
        let sys = bare_system(sig);
        let inst = Instance::new(&sys, 3);
        let rev: Vec<u8> = (0..k).rev().collect();
        let renamed = c.substitute(&rev, k);
        for s in inst.all_states() {
            for asg in (0..3usize).permutations(k as usize) {
                let back: Vec<usize> = (0..k as usize).map(|i| asg[k as usize - 1 - i]).collect();
                prop_assert_eq!(inst.cube_at(&s, &c, &asg), inst.cube_at(&s, &renamed, &back));
            }
        }
        // Identifying two variables contradicts distinctness.
        let mut collapse: Vec<u8> = (0..k).collect();
        collapse[0] = k - 1;
        if k > 1 {
            prop_assert!(c.substitute(&collapse, k).is_bottom());
        }
    }

    #[test]
    fn strengthen_excludes_exactly_the_cube(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sig = random_signature(&mut r);
        let cubes: Vec<Cube> = (0..3).map(|_| random_cube(&mut r, &sig, 2, 2).compact()).collect();
        let sys = bare_system(sig);
        let inst = Instance::new(&sys, 3);
        let mut w = World::top();
        for c in &cubes {
            prop_assume!(!c.is_bottom() && !c.is_empty());
            let before = w.clone();
            w = w.strengthen(c);
            prop_assert!(w.excludes(c));
            prop_assert!(w.implies(&before));
            for s in inst.all_states() {
                prop_assert_eq!(inst.world(&s, &w), inst.world(&s, &before) && !inst.cube(&s, c));
            }
        }
    }

    #[test]
    fn solver_agrees_with_enumeration(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sig = random_signature(&mut r);
        let nconsts = rand::Rng::gen_range(&mut r, 0u8..=3);
        let lits = random_literals(&mut r, &sig, nconsts, 4);
        let clauses: Vec<Cube> = (0..rand::Rng::gen_range(&mut r, 0..=2))
            .map(|_| {
                let k = rand::Rng::gen_range(&mut r, 0u8..=2);
                random_cube(&mut r, &sig, k, 2).compact()
            })
            .filter(|c| !c.is_bottom())
            .collect();
        let sys = bare_system(sig.clone());
        let solver = Solver::new(&sig);
        let q = farcheck_core::solver::Query { nconsts, lits: &lits, clauses: clauses.iter().collect() };
        let res = solver.sat(&q).unwrap();
        prop_assert_eq!(res.is_sat(), brute_sat(&sys, nconsts, &lits, &clauses));
        if Solver::trivial_unsat(&lits) {
            prop_assert!(!res.is_sat());
        }
        if let Some(m) = res.model() {
            let inst = Instance::new(&sys, m.state.nprocs);
            let asg: Vec<usize> = (0..nconsts as usize).collect();
            prop_assert!(satisfies(&inst, &m.state, &asg, &lits, &clauses), "model does not satisfy the query");
        }
    }
}
