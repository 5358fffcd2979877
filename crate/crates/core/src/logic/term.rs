//! Sorts, signatures, terms and literals.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeId(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstId(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GlobalId(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArrayId(pub u16);

/// The built-in boolean type. Its constructors are `false` (0) and `true` (1).
pub const BOOL: TypeId = TypeId(0);
pub const FALSE: ConstId = ConstId(0);
pub const TRUE: ConstId = ConstId(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Proc,
    Enum(TypeId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumType {
    pub name: String,
    pub constructors: Vec<ConstId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constructor {
    pub name: String,
    pub ty: TypeId,
    /// Position inside the owning type; this is the value used by the solver
    /// and the explicit-state semantics.
    pub index: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub sort: Sort,
}

/// Declared symbols of a system: enumerated types, globals, and
/// process-indexed arrays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub types: Vec<EnumType>,
    pub consts: Vec<Constructor>,
    pub globals: Vec<VarDecl>,
    pub arrays: Vec<VarDecl>,
}

impl Default for Signature {
    fn default() -> Self {
        Self::new()
    }
}

impl Signature {
    pub fn new() -> Self {
        let mut sig = Signature {
            types: Vec::new(),
            consts: Vec::new(),
            globals: Vec::new(),
            arrays: Vec::new(),
        };
        sig.add_type("bool", &["false", "true"]);
        sig
    }

    pub fn add_type(&mut self, name: &str, constructors: &[&str]) -> TypeId {
        let ty = TypeId(self.types.len() as u16);
        let mut ids = Vec::with_capacity(constructors.len());
        for (i, c) in constructors.iter().enumerate() {
            let id = ConstId(self.consts.len() as u16);
            self.consts.push(Constructor {
                name: c.to_string(),
                ty,
                index: i as u8,
            });
            ids.push(id);
        }
        self.types.push(EnumType {
            name: name.to_string(),
            constructors: ids,
        });
        ty
    }

    pub fn add_global(&mut self, name: &str, sort: Sort) -> GlobalId {
        self.globals.push(VarDecl {
            name: name.to_string(),
            sort,
        });
        GlobalId(self.globals.len() as u16 - 1)
    }

    pub fn add_array(&mut self, name: &str, sort: Sort) -> ArrayId {
        self.arrays.push(VarDecl {
            name: name.to_string(),
            sort,
        });
        ArrayId(self.arrays.len() as u16 - 1)
    }

    pub fn global_sort(&self, g: GlobalId) -> Sort {
        self.globals[g.0 as usize].sort
    }

    pub fn array_sort(&self, a: ArrayId) -> Sort {
        self.arrays[a.0 as usize].sort
    }

    pub fn const_type(&self, c: ConstId) -> TypeId {
        self.consts[c.0 as usize].ty
    }

    pub fn const_index(&self, c: ConstId) -> u8 {
        self.consts[c.0 as usize].index
    }

    pub fn const_name(&self, c: ConstId) -> &str {
        &self.consts[c.0 as usize].name
    }

    pub fn constructor(&self, ty: TypeId, index: u8) -> ConstId {
        self.types[ty.0 as usize].constructors[index as usize]
    }

    pub fn type_size(&self, ty: TypeId) -> usize {
        self.types[ty.0 as usize].constructors.len()
    }

    pub fn sort_of(&self, t: &Term) -> Sort {
        match *t {
            Term::Global(g) => self.global_sort(g),
            Term::Array(a, _) => self.array_sort(a),
            Term::Proc(_) => Sort::Proc,
            Term::Const(c) => Sort::Enum(self.const_type(c)),
        }
    }

    pub fn find_global(&self, name: &str) -> Option<GlobalId> {
        self.globals
            .iter()
            .position(|d| d.name == name)
            .map(|i| GlobalId(i as u16))
    }

    pub fn find_array(&self, name: &str) -> Option<ArrayId> {
        self.arrays
            .iter()
            .position(|d| d.name == name)
            .map(|i| ArrayId(i as u16))
    }

    pub fn find_const(&self, name: &str) -> Option<ConstId> {
        self.consts
            .iter()
            .position(|d| d.name == name)
            .map(|i| ConstId(i as u16))
    }

    /// Proc-sorted globals, in declaration order.
    pub fn proc_globals(&self) -> impl Iterator<Item = GlobalId> + '_ {
        self.globals
            .iter()
            .enumerate()
            .filter(|(_, d)| d.sort == Sort::Proc)
            .map(|(i, _)| GlobalId(i as u16))
    }

    /// Negation of a literal. For two-constructor types `t <> c` is rewritten
    /// to `t = c'` so that literal sets stay in a single normal form.
    pub fn negate(&self, lit: &Literal) -> Literal {
        let flipped = Literal::new(lit.lhs, lit.polarity.flip(), lit.rhs);
        self.normalize_literal(flipped)
    }

    pub fn normalize_literal(&self, lit: Literal) -> Literal {
        if lit.polarity == Polarity::Neq {
            if let Term::Const(c) = lit.rhs {
                let ty = self.const_type(c);
                if self.type_size(ty) == 2 {
                    let other = self.constructor(ty, 1 - self.const_index(c));
                    return Literal::new(lit.lhs, Polarity::Eq, Term::Const(other));
                }
            }
        }
        lit
    }
}

/// A term of the cube language. Process variables are positional
/// (`Proc(i)` is the i-th bound variable of the enclosing cube).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Global(GlobalId),
    Array(ArrayId, u8),
    Proc(u8),
    Const(ConstId),
}

impl Term {
    pub fn proc_var(&self) -> Option<u8> {
        match *self {
            Term::Array(_, p) | Term::Proc(p) => Some(p),
            _ => None,
        }
    }

    pub fn map_procs(&self, f: impl Fn(u8) -> u8) -> Term {
        match *self {
            Term::Array(a, p) => Term::Array(a, f(p)),
            Term::Proc(p) => Term::Proc(f(p)),
            t => t,
        }
    }

    /// Terms whose value is fixed syntactically: constructors and bound
    /// process variables (which are pairwise distinct).
    pub fn is_value(&self) -> bool {
        matches!(self, Term::Proc(_) | Term::Const(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Eq,
    Neq,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Eq => Polarity::Neq,
            Polarity::Neq => Polarity::Eq,
        }
    }
}

/// `lhs = rhs` or `lhs <> rhs`, oriented so that `lhs <= rhs`.
///
/// Field order gives the canonical literal ordering: variable, index,
/// polarity, then right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub lhs: Term,
    pub polarity: Polarity,
    pub rhs: Term,
}

impl Literal {
    pub fn new(a: Term, polarity: Polarity, b: Term) -> Literal {
        let (lhs, rhs) = if a <= b { (a, b) } else { (b, a) };
        Literal { lhs, polarity, rhs }
    }

    pub fn eq(a: Term, b: Term) -> Literal {
        Literal::new(a, Polarity::Eq, b)
    }

    pub fn neq(a: Term, b: Term) -> Literal {
        Literal::new(a, Polarity::Neq, b)
    }

    pub fn is_positive(&self) -> bool {
        self.polarity == Polarity::Eq
    }

    /// Truth value when it is decided by syntax alone.
    pub fn trivial_value(&self) -> Option<bool> {
        let same = if self.lhs == self.rhs {
            Some(true)
        } else if self.lhs.is_value() && self.rhs.is_value() {
            Some(false)
        } else {
            None
        };
        same.map(|s| s == self.is_positive())
    }

    pub fn map_procs(&self, f: impl Fn(u8) -> u8 + Copy) -> Literal {
        Literal::new(self.lhs.map_procs(f), self.polarity, self.rhs.map_procs(f))
    }

    pub fn procs(&self) -> impl Iterator<Item = u8> {
        self.lhs.proc_var().into_iter().chain(self.rhs.proc_var())
    }
}

pub struct TermDisplay<'a> {
    pub sig: &'a Signature,
    pub term: &'a Term,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self.term {
            Term::Global(g) => write!(f, "{}", self.sig.globals[g.0 as usize].name),
            Term::Array(a, p) => write!(f, "{}[p{}]", self.sig.arrays[a.0 as usize].name, p),
            Term::Proc(p) => write!(f, "p{p}"),
            Term::Const(c) => write!(f, "{}", self.sig.const_name(c)),
        }
    }
}

pub struct LiteralDisplay<'a> {
    pub sig: &'a Signature,
    pub lit: &'a Literal,
}

impl fmt::Display for LiteralDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.lit.polarity {
            Polarity::Eq => "=",
            Polarity::Neq => "<>",
        };
        write!(
            f,
            "{} {} {}",
            TermDisplay {
                sig: self.sig,
                term: &self.lit.lhs
            },
            op,
            TermDisplay {
                sig: self.sig,
                term: &self.lit.rhs
            }
        )
    }
}

impl Literal {
    pub fn display<'a>(&'a self, sig: &'a Signature) -> LiteralDisplay<'a> {
        LiteralDisplay { sig, lit: self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_is_canonical() {
        let a = Literal::eq(Term::Proc(0), Term::Global(GlobalId(0)));
        let b = Literal::eq(Term::Global(GlobalId(0)), Term::Proc(0));
        assert_eq!(a, b);
        assert_eq!(a.lhs, Term::Global(GlobalId(0)));
    }

    #[test]
    fn trivial_values() {
        assert_eq!(Literal::eq(Term::Proc(0), Term::Proc(1)).trivial_value(), Some(false));
        assert_eq!(Literal::neq(Term::Proc(0), Term::Proc(1)).trivial_value(), Some(true));
        assert_eq!(Literal::eq(TRUE_T, TRUE_T).trivial_value(), Some(true));
        assert_eq!(Literal::eq(TRUE_T, FALSE_T).trivial_value(), Some(false));
        assert_eq!(
            Literal::eq(Term::Global(GlobalId(0)), TRUE_T).trivial_value(),
            None
        );
    }

    const TRUE_T: Term = Term::Const(TRUE);
    const FALSE_T: Term = Term::Const(FALSE);

    #[test]
    fn negation_of_binary_enum_flips_constructor() {
        let mut sig = Signature::new();
        let crit = sig.add_array("crit", Sort::Enum(BOOL));
        let l = Literal::eq(Term::Array(crit, 0), TRUE_T);
        assert_eq!(sig.negate(&l), Literal::eq(Term::Array(crit, 0), FALSE_T));
        let ty = sig.add_type("st", &["A", "B", "C"]);
        let x = sig.add_global("x", Sort::Enum(ty));
        let a = Term::Const(sig.constructor(ty, 0));
        let l = Literal::eq(Term::Global(x), a);
        assert_eq!(sig.negate(&l), Literal::neq(Term::Global(x), a));
    }
}
