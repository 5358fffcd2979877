//! Name resolution, sort checking and desugaring into the core fragment.

use std::collections::HashMap;

use super::ast::*;
use super::{FrontendError, Pos};
use crate::logic::{Cube, Literal, Polarity, Signature, Sort, Term, BOOL};
use crate::system::{ArrayUpdate, CoreSystem, Index, InitFormula, Transition, Value};

/// Enum values are stored as bitmask domains in the solver.
const MAX_CONSTRUCTORS: usize = 32;
/// Bound process variables are `u8`, and cube canonicalization is
/// exponential in their number.
const MAX_PARAMS: usize = 8;

pub(super) fn lower(ast: &SystemAst, name: &str) -> Result<CoreSystem, FrontendError> {
    let sig = signature(ast)?;
    let Some(init) = &ast.init else {
        return Err(FrontendError::syntax(Pos { line: 1, col: 1 }, "missing `init` declaration"));
    };
    let Some(unsafe_decl) = &ast.unsafe_decl else {
        return Err(FrontendError::syntax(Pos { line: 1, col: 1 }, "missing `unsafe` declaration"));
    };

    let scope = Scope::new(&sig, &init.params, None)?;
    let mut init_lits = Vec::new();
    for l in &init.lits {
        let lit = scope.literal(l)?;
        match lit.trivial_value() {
            Some(true) => {}
            Some(false) => {
                return Err(FrontendError::Unsupported {
                    pos: l.pos,
                    msg: "init is unsatisfiable".into(),
                })
            }
            None => init_lits.push(lit),
        }
    }
    init_lits.sort();
    init_lits.dedup();
    let init_formula = InitFormula {
        nparams: init.params.len() as u8,
        lits: init_lits,
    };

    let scope = Scope::new(&sig, &unsafe_decl.params, None)?;
    let lits = unsafe_decl.lits.iter().map(|l| scope.literal(l)).collect::<Result<Vec<_>, _>>()?;
    let unsafe_cube = Cube::canonical(unsafe_decl.params.len() as u8, lits);

    let mut transitions: Vec<Transition> = Vec::new();
    for t in &ast.transitions {
        if transitions.iter().any(|u| u.name == t.name.name) {
            return Err(dup(&t.name));
        }
        transitions.push(transition(&sig, t)?);
    }
    Ok(CoreSystem::new(name, sig, init_formula, unsafe_cube, transitions))
}

fn dup(id: &Ident) -> FrontendError {
    FrontendError::Duplicate {
        pos: id.pos,
        name: id.name.clone(),
    }
}

fn signature(ast: &SystemAst) -> Result<Signature, FrontendError> {
    let mut sig = Signature::new();
    let mut seen: Vec<&str> = vec!["bool", "proc", "true", "false"];
    let claim = |id: &Ident, seen: &[&str]| -> Result<(), FrontendError> {
        if seen.contains(&id.name.as_str()) {
            return Err(dup(id));
        }
        Ok(())
    };
    for td in &ast.types {
        claim(&td.name, &seen)?;
        seen.push(&td.name.name);
        if td.constructors.len() > MAX_CONSTRUCTORS {
            return Err(FrontendError::Unsupported {
                pos: td.name.pos,
                msg: format!("type `{}` has more than {MAX_CONSTRUCTORS} constructors", td.name.name),
            });
        }
        for c in &td.constructors {
            claim(c, &seen)?;
            seen.push(&c.name);
        }
        let names: Vec<&str> = td.constructors.iter().map(|c| c.name.as_str()).collect();
        sig.add_type(&td.name.name, &names);
    }
    let sort = |sig: &Signature, id: &Ident| -> Result<Sort, FrontendError> {
        match id.name.as_str() {
            "proc" => Ok(Sort::Proc),
            "bool" => Ok(Sort::Enum(BOOL)),
            n => sig
                .types
                .iter()
                .position(|t| t.name == n)
                .map(|i| Sort::Enum(crate::logic::TypeId(i as u16)))
                .ok_or_else(|| FrontendError::Name {
                    pos: id.pos,
                    name: n.to_string(),
                }),
        }
    };
    for g in &ast.globals {
        claim(&g.name, &seen)?;
        seen.push(&g.name.name);
        let s = sort(&sig, &g.sort)?;
        sig.add_global(&g.name.name, s);
    }
    for a in &ast.arrays {
        claim(&a.name, &seen)?;
        seen.push(&a.name.name);
        let s = sort(&sig, &a.sort)?;
        if s == Sort::Proc {
            return Err(FrontendError::Unsupported {
                pos: a.sort.pos,
                msg: format!("array `{}` has proc-valued elements", a.name.name),
            });
        }
        sig.add_array(&a.name.name, s);
    }
    Ok(sig)
}

/// Names visible inside one declaration: the signature, the declaration's
/// process parameters, and optionally a case binder.
struct Scope<'a> {
    sig: &'a Signature,
    params: HashMap<&'a str, u8>,
    binder: Option<&'a str>,
}

/// A resolved term. `Here` is an array read at the case binder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Resolved {
    Term(Term),
    Here(crate::logic::ArrayId),
}

impl<'a> Scope<'a> {
    fn new(sig: &'a Signature, params: &'a [Ident], binder: Option<&'a Ident>) -> Result<Self, FrontendError> {
        if params.len() > MAX_PARAMS {
            return Err(FrontendError::Unsupported {
                pos: params[MAX_PARAMS].pos,
                msg: format!("more than {MAX_PARAMS} process parameters"),
            });
        }
        let mut map = HashMap::new();
        for (i, p) in params.iter().chain(binder).enumerate() {
            let n = p.name.as_str();
            let taken = map.contains_key(n)
                || sig.find_global(n).is_some()
                || sig.find_array(n).is_some()
                || sig.find_const(n).is_some()
                || sig.types.iter().any(|t| t.name == n)
                || n == "proc";
            if taken {
                return Err(dup(p));
            }
            map.insert(n, i as u8);
        }
        if let Some(b) = binder {
            map.remove(b.name.as_str());
        }
        Ok(Scope {
            sig,
            params: map,
            binder: binder.map(|b| b.name.as_str()),
        })
    }

    fn param(&self, id: &Ident) -> Result<u8, FrontendError> {
        if let Some(&i) = self.params.get(id.name.as_str()) {
            return Ok(i);
        }
        if self.sig.find_global(&id.name).is_some() {
            return Err(FrontendError::Unsupported {
                pos: id.pos,
                msg: format!("array index `{}` must be a process parameter", id.name),
            });
        }
        Err(FrontendError::Name {
            pos: id.pos,
            name: id.name.clone(),
        })
    }

    fn resolve(&self, t: &TermAst) -> Result<Resolved, FrontendError> {
        match t {
            TermAst::Name(id) => {
                let n = id.name.as_str();
                if let Some(&i) = self.params.get(n) {
                    Ok(Resolved::Term(Term::Proc(i)))
                } else if let Some(g) = self.sig.find_global(n) {
                    Ok(Resolved::Term(Term::Global(g)))
                } else if let Some(c) = self.sig.find_const(n) {
                    Ok(Resolved::Term(Term::Const(c)))
                } else if self.sig.find_array(n).is_some() {
                    Err(FrontendError::sort(id.pos, format!("array `{n}` used without an index")))
                } else if Some(n) == self.binder {
                    Err(FrontendError::sort(
                        id.pos,
                        format!("case index `{n}` may only be used as an array index"),
                    ))
                } else {
                    Err(FrontendError::Name {
                        pos: id.pos,
                        name: n.to_string(),
                    })
                }
            }
            TermAst::Index(arr, idx) => {
                let Some(a) = self.sig.find_array(&arr.name) else {
                    if self.sig.find_global(&arr.name).is_some() || self.sig.find_const(&arr.name).is_some() {
                        return Err(FrontendError::sort(arr.pos, format!("`{}` is not an array", arr.name)));
                    }
                    return Err(FrontendError::Name {
                        pos: arr.pos,
                        name: arr.name.clone(),
                    });
                };
                if Some(idx.name.as_str()) == self.binder {
                    return Ok(Resolved::Here(a));
                }
                Ok(Resolved::Term(Term::Array(a, self.param(idx)?)))
            }
        }
    }

    fn sort(&self, r: Resolved) -> Sort {
        match r {
            Resolved::Term(t) => self.sig.sort_of(&t),
            Resolved::Here(a) => self.sig.array_sort(a),
        }
    }

    fn term(&self, t: &TermAst) -> Result<Term, FrontendError> {
        match self.resolve(t)? {
            Resolved::Term(t) => Ok(t),
            Resolved::Here(_) => Err(FrontendError::sort(
                t.pos(),
                "case index may only appear in update values",
            )),
        }
    }

    fn literal(&self, l: &LitAst) -> Result<Literal, FrontendError> {
        let a = self.term(&l.lhs)?;
        let b = self.term(&l.rhs)?;
        self.check_sorts(self.sig.sort_of(&a), self.sig.sort_of(&b), l.pos)?;
        let pol = if l.eq { Polarity::Eq } else { Polarity::Neq };
        Ok(self.sig.normalize_literal(Literal::new(a, pol, b)))
    }

    fn check_sorts(&self, a: Sort, b: Sort, pos: Pos) -> Result<(), FrontendError> {
        if a != b {
            return Err(FrontendError::sort(
                pos,
                format!("cannot compare {} with {}", self.sort_name(a), self.sort_name(b)),
            ));
        }
        Ok(())
    }

    fn sort_name(&self, s: Sort) -> String {
        match s {
            Sort::Proc => "proc".into(),
            Sort::Enum(t) => self.sig.types[t.0 as usize].name.clone(),
        }
    }

    /// Resolves an update value of the expected sort.
    fn value(&self, t: &TermAst, expected: Sort) -> Result<Value, FrontendError> {
        let r = self.resolve(t)?;
        self.check_sorts(expected, self.sort(r), t.pos())?;
        Ok(match r {
            Resolved::Here(a) => Value::Array(a, Index::Here),
            Resolved::Term(Term::Const(c)) => Value::Const(c),
            Resolved::Term(Term::Proc(i)) => Value::Param(i),
            Resolved::Term(Term::Global(g)) => Value::Global(g),
            Resolved::Term(Term::Array(a, i)) => Value::Array(a, Index::Param(i)),
        })
    }
}

fn transition(sig: &Signature, t: &TransitionAst) -> Result<Transition, FrontendError> {
    let scope = Scope::new(sig, &t.params, None)?;
    let nparams = t.params.len() as u8;
    let guard = t.guard.iter().map(|l| scope.literal(l)).collect::<Result<Vec<_>, _>>()?;
    let guard = Cube::from_literals(nparams, guard);

    let mut globals: Vec<Option<Value>> = vec![None; sig.globals.len()];
    let mut assigned_globals = vec![false; sig.globals.len()];
    // Per array: indexed assignments so far, or a case update.
    let mut arrays: Vec<Option<ArrayUpdate>> = vec![None; sig.arrays.len()];
    let mut from_case = vec![false; sig.arrays.len()];

    let array_of = |id: &Ident| -> Result<crate::logic::ArrayId, FrontendError> {
        sig.find_array(&id.name).ok_or_else(|| {
            if sig.find_global(&id.name).is_some() {
                FrontendError::sort(id.pos, format!("`{}` is not an array", id.name))
            } else {
                FrontendError::Name {
                    pos: id.pos,
                    name: id.name.clone(),
                }
            }
        })
    };

    for u in &t.updates {
        match u {
            UpdateAst::Assign { target, value } => {
                let Some(g) = sig.find_global(&target.name) else {
                    if sig.find_array(&target.name).is_some() {
                        return Err(FrontendError::sort(
                            target.pos,
                            format!("array `{}` assigned without an index", target.name),
                        ));
                    }
                    return Err(FrontendError::Name {
                        pos: target.pos,
                        name: target.name.clone(),
                    });
                };
                if std::mem::replace(&mut assigned_globals[g.0 as usize], true) {
                    return Err(dup(target));
                }
                let v = scope.value(value, sig.global_sort(g))?;
                globals[g.0 as usize] = (v != Value::Global(g)).then_some(v);
            }
            UpdateAst::IndexAssign { array, index, value } => {
                let a = array_of(array)?;
                let p = scope.param(index)?;
                let v = scope.value(value, sig.array_sort(a))?;
                if from_case[a.0 as usize] {
                    return Err(dup(array));
                }
                let slot = arrays[a.0 as usize].get_or_insert(ArrayUpdate::Cases {
                    arms: Vec::new(),
                    default: Value::Array(a, Index::Here),
                });
                let ArrayUpdate::Cases { arms, .. } = slot else { unreachable!() };
                if arms.iter().any(|(q, _)| *q == p) {
                    return Err(dup(array));
                }
                arms.push((p, v));
            }
            UpdateAst::Case {
                array,
                index,
                arms,
                default,
            } => {
                let a = array_of(array)?;
                if arrays[a.0 as usize].is_some() {
                    return Err(dup(array));
                }
                let inner = Scope::new(sig, &t.params, Some(index))?;
                let mut out: Vec<(u8, Value)> = Vec::new();
                for (cond, val) in arms {
                    let p = case_condition(&inner, index, cond)?;
                    if out.iter().any(|(q, _)| *q == p) {
                        return Err(FrontendError::Duplicate {
                            pos: cond.pos,
                            name: format!("{} = {}", index.name, t.params[p as usize].name),
                        });
                    }
                    out.push((p, inner.value(val, sig.array_sort(a))?));
                }
                let default = inner.value(default, sig.array_sort(a))?;
                arrays[a.0 as usize] = Some(ArrayUpdate::Cases { arms: out, default });
                from_case[a.0 as usize] = true;
            }
        }
    }

    let arrays = arrays
        .into_iter()
        .enumerate()
        .map(|(i, u)| simplify(crate::logic::ArrayId(i as u16), u.unwrap_or(ArrayUpdate::Keep)))
        .collect();
    Ok(Transition {
        name: t.name.name.clone(),
        nparams,
        guard,
        globals,
        arrays,
    })
}

/// A case condition must be `j = p` (either orientation) for a parameter `p`.
fn case_condition(scope: &Scope, binder: &Ident, cond: &LitAst) -> Result<u8, FrontendError> {
    let is_binder = |t: &TermAst| matches!(t, TermAst::Name(id) if id.name == binder.name);
    let other = match (&cond.lhs, &cond.rhs) {
        (l, r) if is_binder(l) => r,
        (l, r) if is_binder(r) => l,
        _ => {
            return Err(FrontendError::Unsupported {
                pos: cond.pos,
                msg: format!("case conditions must have the form `{} = p`", binder.name),
            })
        }
    };
    match other {
        TermAst::Name(id) if cond.eq => scope.param(id),
        _ => Err(FrontendError::Unsupported {
            pos: cond.pos,
            msg: format!("case conditions must have the form `{} = p`", binder.name),
        }),
    }
}

/// Drops arms that rewrite a cell to itself when the default is the identity,
/// and collapses an identity case to [`ArrayUpdate::Keep`].
fn simplify(a: crate::logic::ArrayId, u: ArrayUpdate) -> ArrayUpdate {
    match u {
        ArrayUpdate::Cases { arms, default } if default == Value::Array(a, Index::Here) => {
            let mut kept: Vec<(u8, Value)> = Vec::new();
            for (p, v) in arms {
                // Earlier arms shadow later ones for the same parameter.
                if v != Value::Array(a, Index::Param(p)) && !kept.iter().any(|(q, _)| *q == p) {
                    kept.push((p, v));
                }
            }
            if kept.is_empty() {
                ArrayUpdate::Keep
            } else {
                ArrayUpdate::Cases { arms: kept, default }
            }
        }
        u => u,
    }
}
