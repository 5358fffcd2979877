//! Surface syntax tree for `.fcub` files.

use super::Pos;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDecl {
    pub name: Ident,
    pub constructors: Vec<Ident>,
}

/// `var x : sort` or `array a[proc] : sort`. The sort is `bool`, `proc`, or
/// the name of a declared type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDeclAst {
    pub name: Ident,
    pub sort: Ident,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermAst {
    Name(Ident),
    Index(Ident, Ident),
}

impl TermAst {
    pub fn pos(&self) -> Pos {
        match self {
            TermAst::Name(i) | TermAst::Index(i, _) => i.pos,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LitAst {
    pub lhs: TermAst,
    pub eq: bool,
    pub rhs: TermAst,
    pub pos: Pos,
}

/// `init (ps) { conj }` or `unsafe (ps) { conj }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantDecl {
    pub params: Vec<Ident>,
    pub lits: Vec<LitAst>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UpdateAst {
    /// `x := t;`
    Assign { target: Ident, value: TermAst },
    /// `a[p] := t;`
    IndexAssign { array: Ident, index: Ident, value: TermAst },
    /// `a[j] := case | j = p : t | ... | _ : t;`
    Case {
        array: Ident,
        index: Ident,
        arms: Vec<(LitAst, TermAst)>,
        default: TermAst,
    },
}

impl UpdateAst {
    pub fn target(&self) -> &Ident {
        match self {
            UpdateAst::Assign { target, .. } => target,
            UpdateAst::IndexAssign { array, .. } | UpdateAst::Case { array, .. } => array,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionAst {
    pub name: Ident,
    pub params: Vec<Ident>,
    pub guard: Vec<LitAst>,
    pub updates: Vec<UpdateAst>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SystemAst {
    pub types: Vec<TypeDecl>,
    pub globals: Vec<VarDeclAst>,
    pub arrays: Vec<VarDeclAst>,
    pub init: Option<QuantDecl>,
    pub unsafe_decl: Option<QuantDecl>,
    pub transitions: Vec<TransitionAst>,
}
