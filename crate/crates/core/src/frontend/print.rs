//! Pretty-printer from [`CoreSystem`] back to `.fcub` source.
//!
//! Elaborating the output yields the same system again.

use std::fmt::Write;

use crate::logic::{Literal, Polarity, Signature, Sort, Term};
use crate::system::{ArrayUpdate, CoreSystem, Index, Value};

pub fn print(sys: &CoreSystem) -> String {
    let sig = &sys.sig;
    let names = Names::new(sig);
    let mut out = String::new();
    for ty in sig.types.iter().skip(1) {
        let cs: Vec<&str> = ty.constructors.iter().map(|&c| sig.const_name(c)).collect();
        writeln!(out, "type {} = {}", ty.name, cs.join(" | ")).unwrap();
    }
    for g in &sig.globals {
        writeln!(out, "var {} : {}", g.name, sort_name(sig, g.sort)).unwrap();
    }
    for a in &sig.arrays {
        writeln!(out, "array {}[proc] : {}", a.name, sort_name(sig, a.sort)).unwrap();
    }
    writeln!(
        out,
        "\ninit ({}) {{ {} }}",
        names.params(sys.init.nparams),
        names.conj(sig, &sys.init.lits, false)
    )
    .unwrap();
    writeln!(
        out,
        "\nunsafe ({}) {{ {} }}",
        names.params(sys.unsafe_cube.nprocs()),
        names.conj(sig, sys.unsafe_cube.literals(), sys.unsafe_cube.is_bottom())
    )
    .unwrap();
    for t in &sys.transitions {
        writeln!(
            out,
            "\ntransition {}({})\nrequires {{ {} }}\n{{",
            t.name,
            names.params(t.nparams),
            names.conj(sig, t.guard.literals(), t.guard.is_bottom())
        )
        .unwrap();
        for (i, v) in t.globals.iter().enumerate() {
            if let Some(v) = v {
                writeln!(out, "  {} := {};", sig.globals[i].name, names.value(sig, *v)).unwrap();
            }
        }
        for (i, u) in t.arrays.iter().enumerate() {
            if let ArrayUpdate::Cases { arms, default } = u {
                let j = &names.binder;
                write!(out, "  {}[{j}] := case", sig.arrays[i].name).unwrap();
                for (p, v) in arms {
                    write!(out, " | {j} = {} : {}", names.param(*p), names.value(sig, *v)).unwrap();
                }
                writeln!(out, " | _ : {};", names.value(sig, *default)).unwrap();
            }
        }
        writeln!(out, "}}").unwrap();
    }
    out
}

fn sort_name(sig: &Signature, s: Sort) -> &str {
    match s {
        Sort::Proc => "proc",
        Sort::Enum(t) => &sig.types[t.0 as usize].name,
    }
}

/// Parameter and case-binder names that cannot collide with declared names.
struct Names {
    prefix: String,
    binder: String,
}

impl Names {
    fn new(sig: &Signature) -> Names {
        let declared: Vec<&str> = sig
            .globals
            .iter()
            .chain(&sig.arrays)
            .map(|d| d.name.as_str())
            .chain(sig.consts.iter().map(|c| c.name.as_str()))
            .chain(sig.types.iter().map(|t| t.name.as_str()))
            .collect();
        let mut prefix = String::from("p");
        while declared.iter().any(|n| {
            n.strip_prefix(prefix.as_str())
                .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
        }) {
            prefix.push('_');
        }
        let mut binder = String::from("j");
        while declared.contains(&binder.as_str()) || binder.starts_with(&prefix) {
            binder.push('_');
        }
        Names { prefix, binder }
    }

    fn param(&self, i: u8) -> String {
        format!("{}{i}", self.prefix)
    }

    fn params(&self, n: u8) -> String {
        (0..n).map(|i| self.param(i)).collect::<Vec<_>>().join(" ")
    }

    fn term(&self, sig: &Signature, t: Term) -> String {
        match t {
            Term::Global(g) => sig.globals[g.0 as usize].name.clone(),
            Term::Array(a, p) => format!("{}[{}]", sig.arrays[a.0 as usize].name, self.param(p)),
            Term::Proc(p) => self.param(p),
            Term::Const(c) => sig.const_name(c).to_string(),
        }
    }

    fn conj(&self, sig: &Signature, lits: &[Literal], bottom: bool) -> String {
        if bottom {
            return "true = false".into();
        }
        lits.iter()
            .map(|l| {
                let op = if l.polarity == Polarity::Eq { "=" } else { "<>" };
                format!("{} {op} {}", self.term(sig, l.lhs), self.term(sig, l.rhs))
            })
            .collect::<Vec<_>>()
            .join(" && ")
    }

    fn value(&self, sig: &Signature, v: Value) -> String {
        match v {
            Value::Const(c) => sig.const_name(c).to_string(),
            Value::Param(i) => self.param(i),
            Value::Global(g) => sig.globals[g.0 as usize].name.clone(),
            Value::Array(a, Index::Param(i)) => format!("{}[{}]", sig.arrays[a.0 as usize].name, self.param(i)),
            Value::Array(a, Index::Here) => format!("{}[{}]", sig.arrays[a.0 as usize].name, self.binder),
        }
    }
}
