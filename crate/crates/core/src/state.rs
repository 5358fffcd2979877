//! Finite-instance states.

use std::fmt;

use crate::logic::{Signature, Sort};

/// A state of the instance with `nprocs` processes. Enum values are stored as
/// constructor positions, proc values as process indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConcreteState {
    pub nprocs: usize,
    pub globals: Vec<u8>,
    pub arrays: Vec<Vec<u8>>,
}

impl ConcreteState {
    pub fn display<'a>(&'a self, sig: &'a Signature) -> StateDisplay<'a> {
        StateDisplay { sig, state: self }
    }
}

pub struct StateDisplay<'a> {
    sig: &'a Signature,
    state: &'a ConcreteState,
}

impl fmt::Display for StateDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |sort: Sort, v: u8| match sort {
            Sort::Proc => format!("#{v}"),
            Sort::Enum(ty) => self.sig.const_name(self.sig.constructor(ty, v)).to_string(),
        };
        let mut first = true;
        for (d, v) in self.sig.globals.iter().zip(&self.state.globals) {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}={}", d.name, show(d.sort, *v))?;
        }
        for (d, cells) in self.sig.arrays.iter().zip(&self.state.arrays) {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let vals: Vec<String> = cells.iter().map(|v| show(d.sort, *v)).collect();
            write!(f, "{}=[{}]", d.name, vals.join(","))?;
        }
        Ok(())
    }
}
