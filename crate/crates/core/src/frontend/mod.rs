//! Input language: lexing, parsing, elaboration to [`CoreSystem`], and
//! pretty-printing back to source.

pub mod ast;
mod elaborate;
mod lexer;
mod parser;
mod print;

use std::fmt;

use thiserror::Error;

pub use ast::SystemAst;
pub use print::print;

use crate::system::CoreSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrontendError {
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: undeclared identifier `{name}`")]
    Name { pos: Pos, name: String },
    #[error("{pos}: sort error: {msg}")]
    Sort { pos: Pos, msg: String },
    #[error("{pos}: duplicate declaration of `{name}`")]
    Duplicate { pos: Pos, name: String },
    #[error("{pos}: unsupported: {msg}")]
    Unsupported { pos: Pos, msg: String },
}

impl FrontendError {
    pub(crate) fn syntax(pos: Pos, msg: impl Into<String>) -> Self {
        FrontendError::Syntax { pos, msg: msg.into() }
    }

    pub(crate) fn sort(pos: Pos, msg: impl Into<String>) -> Self {
        FrontendError::Sort { pos, msg: msg.into() }
    }

    pub fn pos(&self) -> Pos {
        match self {
            FrontendError::Syntax { pos, .. }
            | FrontendError::Name { pos, .. }
            | FrontendError::Sort { pos, .. }
            | FrontendError::Duplicate { pos, .. }
            | FrontendError::Unsupported { pos, .. } => *pos,
        }
    }
}

/// Parses and validates a source file. Name and sort errors are reported
/// here, so a successful [`parse`] always elaborates.
pub fn parse(src: &str) -> Result<SystemAst, FrontendError> {
    let ast = parser::parse_syntax(src)?;
    elaborate::lower(&ast, "")?;
    Ok(ast)
}

pub fn elaborate(ast: &SystemAst, name: &str) -> Result<CoreSystem, FrontendError> {
    elaborate::lower(ast, name)
}

/// `parse` followed by `elaborate`.
pub fn load(src: &str, name: &str) -> Result<CoreSystem, FrontendError> {
    let ast = parser::parse_syntax(src)?;
    elaborate::lower(&ast, name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Cube, Literal, Term, FALSE, TRUE};
    use crate::system::{ArrayUpdate, Index, Value};

    const DEKKER: &str = include_str!("../../../../models/dekker.fcub");

    #[test]
    fn dekker_shape() {
        let ast = parse(DEKKER).unwrap();
        assert_eq!(ast.globals.len(), 1);
        assert_eq!(ast.globals[0].name.name, "turn");
        assert_eq!(ast.globals[0].sort.name, "proc");
        let arrays: Vec<&str> = ast.arrays.iter().map(|a| a.name.name.as_str()).collect();
        assert_eq!(arrays, ["want", "crit"]);
        let ts: Vec<&str> = ast.transitions.iter().map(|t| t.name.name.as_str()).collect();
        assert_eq!(ts, ["req", "enter", "exit"]);
    }

    #[test]
    fn empty_input() {
        let e = parse("").unwrap_err();
        assert!(matches!(&e, FrontendError::Syntax { msg, .. } if msg.starts_with("expected declaration")), "{e}");
        assert!(parse("  (* nothing *) ").is_err());
    }

    #[test]
    fn undeclared_array() {
        let src = DEKKER.replace("requires { want[p] = false }", "requires { flag[p] = false }");
        match parse(&src).unwrap_err() {
            FrontendError::Name { name, pos } => {
                assert_eq!(name, "flag");
                assert_eq!(pos.line, 12);
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn exit_elaborates_to_case_form() {
        let sys = load(DEKKER, "dekker").unwrap();
        let want = sys.sig.find_array("want").unwrap();
        let crit = sys.sig.find_array("crit").unwrap();
        let exit = &sys.transitions[2];
        assert_eq!(exit.nparams, 2);
        assert_eq!(
            exit.guard,
            Cube::from_literals(2, [Literal::eq(Term::Array(crit, 0), Term::Const(TRUE))])
        );
        assert_eq!(
            exit.arrays[want.0 as usize],
            ArrayUpdate::Cases {
                arms: vec![(0, Value::Const(FALSE))],
                default: Value::Array(want, Index::Here)
            }
        );
        assert_eq!(
            exit.arrays[crit.0 as usize],
            ArrayUpdate::Cases {
                arms: vec![(0, Value::Const(FALSE))],
                default: Value::Array(crit, Index::Here)
            }
        );
        assert_eq!(exit.globals, vec![Some(Value::Param(1))]);
    }

    #[test]
    fn no_updates_is_identity() {
        let src = DEKKER.replace("  want[p] := true;\n", "");
        let sys = load(&src, "x").unwrap();
        let req = &sys.transitions[0];
        assert!(req.globals.iter().all(Option::is_none));
        assert!(req.arrays.iter().all(|u| *u == ArrayUpdate::Keep));
        // an explicit self-assignment is the same thing
        let src = DEKKER.replace("  want[p] := true;\n", "  turn := turn;\n  want[p] := want[p];\n");
        assert_eq!(load(&src, "x").unwrap().transitions[0], *req);
    }

    #[test]
    fn unsafe_is_distinct_pair() {
        let sys = load(DEKKER, "dekker").unwrap();
        assert_eq!(sys.unsafe_cube.nprocs(), 2);
        assert_eq!(
            sys.unsafe_cube.display(&sys.sig).to_string(),
            "∃p0,p1. crit[p0] = true && crit[p1] = true"
        );
    }

    #[test]
    fn diagnostics() {
        let cases: &[(&str, &str)] = &[
            ("var x : proc\nvar x : bool", "duplicate"),
            ("type t = A | B\ntype u = B | C", "duplicate"),
            ("var x : color", "undeclared"),
            ("array a[proc] : proc", "unsupported"),
            ("var x : bool\ninit (p) { x = p }\nunsafe () { x = true }", "sort"),
            ("var x : bool\ninit () { x = true || x = false }", "unsupported"),
            ("array a[proc] : bool\ninit (p) { forall_other q. a[q] = true }", "unsupported"),
            ("var x : bool\ninit () { x = true }\ninit () { x = false }", "duplicate"),
            ("var x : bool\nunsafe () { x = true }", "missing `init`"),
            (
                "var x : bool\narray a[proc] : bool\ninit () { x = true }\nunsafe () { x = true }\n\
                 transition t(p) requires { } { a[j] := case | j = x : true | _ : a[j]; }",
                "unsupported",
            ),
            ("var x : bool\nvar y bool", "syntax"),
        ];
        for (src, want) in cases {
            let e = parse(src).unwrap_err().to_string();
            assert!(e.contains(want), "{src:?}: {e}");
        }
    }

    #[test]
    fn two_valued_neq_is_normalized() {
        let src = DEKKER.replace("requires { want[p] = false }", "requires { want[p] <> true }");
        assert_eq!(load(&src, "dekker").unwrap(), load(DEKKER, "dekker").unwrap());
    }

    #[test]
    fn print_fixpoint_on_dekker() {
        let sys = load(DEKKER, "dekker").unwrap();
        let printed = print(&sys);
        let again = load(&printed, "dekker").unwrap();
        assert_eq!(again, sys);
        assert_eq!(print(&again), printed);
    }

    #[test]
    fn case_syntax_matches_indexed_assignment() {
        let src = DEKKER.replace(
            "  want[p1] := false;\n",
            "  want[j] := case | j = p1 : false | _ : want[j];\n",
        );
        assert_eq!(load(&src, "dekker").unwrap(), load(DEKKER, "dekker").unwrap());
    }
}
