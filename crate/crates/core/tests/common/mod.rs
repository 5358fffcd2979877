//! Shared helpers for the integration tests: corpus loading and seeded
//! random signatures, literals and cubes.
#![allow(dead_code)]

use std::path::PathBuf;

use farcheck_core::logic::{ArrayId, ConstId, GlobalId, Polarity};
use farcheck_core::system::InitFormula;
use farcheck_core::{load, CoreSystem, Cube, Literal, Signature, Sort, Term};
use rand::seq::SliceRandom;
use rand::Rng;

pub const CORPUS: [&str; 8] = [
    "dekker",
    "broken_dekker",
    "mux_sem",
    "broken_mux_sem",
    "german_ish",
    "broken_german_ish",
    "german_ish2",
    "broken_german_ish2",
];

pub const SAFE_MODELS: [&str; 4] = ["dekker", "mux_sem", "german_ish", "german_ish2"];
pub const MUTANTS: [&str; 4] = ["broken_dekker", "broken_mux_sem", "broken_german_ish", "broken_german_ish2"];

pub fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

pub fn model(name: &str) -> CoreSystem {
    let path = models_dir().join(format!("{name}.fcub"));
    let src = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    load(&src, name).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// A system over `sig` with no constraints, for evaluating formulas.
pub fn bare_system(sig: Signature) -> CoreSystem {
    CoreSystem::new(
        "random",
        sig,
        InitFormula {
            nparams: 0,
            lits: Vec::new(),
        },
        Cube::top(0),
        Vec::new(),
    )
}

/// Up to two enum globals over types of two or three constructors, up to
/// one proc global and up to two enum arrays.
pub fn random_signature(rng: &mut impl Rng) -> Signature {
    let mut sig = Signature::new();
    let mut types = vec![farcheck_core::logic::BOOL];
    let names = ["A", "B", "C"];
    for t in 0..rng.gen_range(0..=2) {
        let size = rng.gen_range(2..=3);
        let cons: Vec<String> = (0..size).map(|i| format!("{}{t}", names[i])).collect();
        let refs: Vec<&str> = cons.iter().map(|s| s.as_str()).collect();
        let ty = sig.add_type(&format!("t{t}"), &refs);
        types.push(ty);
        sig.add_global(&format!("g{t}"), Sort::Enum(ty));
    }
    if rng.gen_bool(0.5) {
        sig.add_global("ptr", Sort::Proc);
    }
    for a in 0..rng.gen_range(0..=2) {
        let ty = *types.choose(rng).unwrap();
        sig.add_array(&format!("a{a}"), Sort::Enum(ty));
    }
    sig
}

fn terms_of(sig: &Signature, sort: Sort, k: u8) -> Vec<Term> {
    let mut out = Vec::new();
    for (i, g) in sig.globals.iter().enumerate() {
        if g.sort == sort {
            out.push(Term::Global(GlobalId(i as u16)));
        }
    }
    for (i, a) in sig.arrays.iter().enumerate() {
        if a.sort == sort {
            out.extend((0..k).map(|p| Term::Array(ArrayId(i as u16), p)));
        }
    }
    match sort {
        Sort::Proc => out.extend((0..k).map(Term::Proc)),
        Sort::Enum(ty) => out.extend(sig.types[ty.0 as usize].constructors.iter().map(|c| Term::Const(*c))),
    }
    out
}

/// A well-sorted literal over `k` process variables, or `None` when the
/// signature has no variable term at all.
pub fn random_literal(rng: &mut impl Rng, sig: &Signature, k: u8) -> Option<Literal> {
    let mut vars: Vec<Term> = Vec::new();
    vars.extend((0..sig.globals.len()).map(|i| Term::Global(GlobalId(i as u16))));
    for i in 0..sig.arrays.len() {
        vars.extend((0..k).map(|p| Term::Array(ArrayId(i as u16), p)));
    }
    vars.extend((0..k).map(Term::Proc));
    let lhs = *vars.choose(rng)?;
    let sort = sig.sort_of(&lhs);
    let rhs = *terms_of(sig, sort, k).choose(rng)?;
    let pol = if rng.gen_bool(0.6) { Polarity::Eq } else { Polarity::Neq };
    Some(sig.normalize_literal(Literal::new(lhs, pol, rhs)))
}

pub fn random_literals(rng: &mut impl Rng, sig: &Signature, k: u8, max: usize) -> Vec<Literal> {
    let n = rng.gen_range(0..=max);
    (0..n).filter_map(|_| random_literal(rng, sig, k)).collect()
}

/// A cube over `k` variables, not canonicalized, every variable used when
/// the signature allows it.
pub fn random_cube(rng: &mut impl Rng, sig: &Signature, k: u8, max_lits: usize) -> Cube {
    let mut lits = random_literals(rng, sig, k, max_lits);
    for p in 0..k {
        if !lits.iter().any(|l| l.procs().any(|q| q == p)) {
            let arrays: Vec<usize> = (0..sig.arrays.len()).collect();
            if let Some(&a) = arrays.choose(rng) {
                let Sort::Enum(ty) = sig.arrays[a].sort else { continue };
                let c = sig.types[ty.0 as usize].constructors.choose(rng).copied().unwrap_or(ConstId(0));
                lits.push(Literal::eq(Term::Array(ArrayId(a as u16), p), Term::Const(c)));
            }
        }
    }
    Cube::from_literals(k, lits)
}

/// `lits ∧ ⋀ ¬clauses` by enumeration. A model can always be cut down to
/// the constants plus the values of the proc globals, so domains larger
/// than that need not be tried.
pub fn brute_sat(sys: &CoreSystem, nconsts: u8, lits: &[Literal], clauses: &[Cube]) -> bool {
    let extra = sys.sig.proc_globals().count();
    let asg: Vec<usize> = (0..nconsts as usize).collect();
    (nconsts as usize..=nconsts as usize + extra).any(|n| {
        let inst = farcheck_core::oracles::Instance::new(sys, n);
        inst.all_states().iter().any(|s| satisfies(&inst, s, &asg, lits, clauses))
    })
}

pub fn satisfies(
    inst: &farcheck_core::oracles::Instance,
    s: &farcheck_core::ConcreteState,
    asg: &[usize],
    lits: &[Literal],
    clauses: &[Cube],
) -> bool {
    lits.iter().all(|l| inst.literal(s, l, asg)) && clauses.iter().all(|c| !inst.cube(s, c))
}

/// Compares `⋁ pre_image(bad, τ)` with the one-step predecessors of `bad`
/// over every state of the `n`-process instance.
pub fn preimage_discrepancies(sys: &CoreSystem, tau: usize, bad: &Cube, n: usize) -> Vec<String> {
    let t = &sys.transitions[tau];
    let pre = farcheck_core::transitions::pre_image(t, bad);
    let inst = farcheck_core::oracles::Instance::new(sys, n);
    let mut out = Vec::new();
    for s in inst.all_states() {
        use itertools::Itertools;
        let truth = (0..n)
            .permutations(t.nparams as usize)
            .any(|ps| inst.enabled(&s, t, &ps) && inst.cube(&inst.fire(&s, t, &ps), bad));
        let symbolic = pre.iter().any(|c| inst.cube(&s, c));
        if truth != symbolic {
            out.push(format!(
                "{} by {}: state {} has predecessor={truth} but pre-image={symbolic}",
                bad.display(&sys.sig),
                t.name,
                s.display(&sys.sig)
            ));
        }
    }
    out
}
