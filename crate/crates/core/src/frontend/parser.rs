//! Recursive descent parser for `.fcub` sources.

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::{FrontendError, Pos};

const KEYWORDS: &[&str] = &["type", "var", "array", "init", "unsafe", "transition", "requires", "case"];

pub fn parse_syntax(src: &str) -> Result<SystemAst, FrontendError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
    };
    p.file()
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> Pos {
        self.toks[self.pos].pos
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, FrontendError> {
        Err(FrontendError::syntax(
            self.here(),
            format!("expected {expected}, found {}", self.peek().describe()),
        ))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), FrontendError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            self.fail(&tok.describe())
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), FrontendError> {
        if self.at_keyword(kw) {
            self.next();
            Ok(())
        } else {
            self.fail(&format!("`{kw}`"))
        }
    }

    fn ident(&mut self) -> Result<Ident, FrontendError> {
        match self.peek().clone() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                let pos = self.next().pos;
                Ok(Ident { name, pos })
            }
            _ => self.fail("identifier"),
        }
    }

    fn file(&mut self) -> Result<SystemAst, FrontendError> {
        let mut ast = SystemAst::default();
        if *self.peek() == Tok::Eof {
            return self.fail("declaration");
        }
        while *self.peek() != Tok::Eof {
            let pos = self.here();
            let kw = match self.peek() {
                Tok::Ident(s) => s.clone(),
                _ => return self.fail("declaration"),
            };
            match kw.as_str() {
                "type" => {
                    self.next();
                    ast.types.push(self.type_decl()?);
                }
                "var" => {
                    self.next();
                    let name = self.ident()?;
                    self.expect(Tok::Colon)?;
                    let sort = self.ident()?;
                    ast.globals.push(VarDeclAst { name, sort });
                }
                "array" => {
                    self.next();
                    let name = self.ident()?;
                    self.expect(Tok::LBracket)?;
                    let idx = self.ident()?;
                    if idx.name != "proc" {
                        return Err(FrontendError::sort(idx.pos, "arrays must be indexed by `proc`"));
                    }
                    self.expect(Tok::RBracket)?;
                    self.expect(Tok::Colon)?;
                    let sort = self.ident()?;
                    ast.arrays.push(VarDeclAst { name, sort });
                }
                "init" | "unsafe" => {
                    self.next();
                    let decl = self.quant_decl(pos)?;
                    let slot = if kw == "init" { &mut ast.init } else { &mut ast.unsafe_decl };
                    if slot.is_some() {
                        return Err(FrontendError::Duplicate { pos, name: kw });
                    }
                    *slot = Some(decl);
                }
                "transition" => {
                    self.next();
                    ast.transitions.push(self.transition()?);
                }
                _ => return self.fail("declaration"),
            }
        }
        Ok(ast)
    }

    fn type_decl(&mut self) -> Result<TypeDecl, FrontendError> {
        let name = self.ident()?;
        self.expect(Tok::Eq)?;
        let mut constructors = vec![self.ident()?];
        while *self.peek() == Tok::Bar {
            self.next();
            constructors.push(self.ident()?);
        }
        Ok(TypeDecl { name, constructors })
    }

    fn params(&mut self) -> Result<Vec<Ident>, FrontendError> {
        self.expect(Tok::LParen)?;
        let mut out = Vec::new();
        while *self.peek() != Tok::RParen {
            if *self.peek() == Tok::Comma && !out.is_empty() {
                self.next();
            }
            out.push(self.ident()?);
        }
        self.next();
        Ok(out)
    }

    fn quant_decl(&mut self, pos: Pos) -> Result<QuantDecl, FrontendError> {
        let params = self.params()?;
        let lits = self.conj()?;
        Ok(QuantDecl { params, lits, pos })
    }

    fn conj(&mut self) -> Result<Vec<LitAst>, FrontendError> {
        self.expect(Tok::LBrace)?;
        let mut lits = Vec::new();
        if *self.peek() != Tok::RBrace {
            lits.push(self.lit()?);
            loop {
                match self.peek() {
                    Tok::And => {
                        self.next();
                        lits.push(self.lit()?);
                    }
                    Tok::Or => {
                        return Err(FrontendError::Unsupported {
                            pos: self.here(),
                            msg: "disjunctions are not supported; split the declaration instead".into(),
                        })
                    }
                    _ => break,
                }
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(lits)
    }

    fn lit(&mut self) -> Result<LitAst, FrontendError> {
        if let Tok::Ident(s) = self.peek() {
            if s == "forall_other" || s == "forall" || s == "exists" {
                return Err(FrontendError::Unsupported {
                    pos: self.here(),
                    msg: "quantified guards are not supported".into(),
                });
            }
        }
        let pos = self.here();
        let lhs = self.term()?;
        let eq = match self.peek() {
            Tok::Eq => true,
            Tok::Neq => false,
            _ => return self.fail("`=` or `<>`"),
        };
        self.next();
        let rhs = self.term()?;
        Ok(LitAst { lhs, eq, rhs, pos })
    }

    fn term(&mut self) -> Result<TermAst, FrontendError> {
        let name = self.ident()?;
        if *self.peek() == Tok::LBracket {
            self.next();
            let idx = self.ident()?;
            self.expect(Tok::RBracket)?;
            Ok(TermAst::Index(name, idx))
        } else {
            Ok(TermAst::Name(name))
        }
    }

    fn transition(&mut self) -> Result<TransitionAst, FrontendError> {
        let name = self.ident()?;
        let params = self.params()?;
        self.keyword("requires")?;
        let guard = self.conj()?;
        self.expect(Tok::LBrace)?;
        let mut updates = Vec::new();
        while *self.peek() != Tok::RBrace {
            updates.push(self.update()?);
        }
        self.next();
        Ok(TransitionAst {
            name,
            params,
            guard,
            updates,
        })
    }

    fn update(&mut self) -> Result<UpdateAst, FrontendError> {
        let target = self.ident()?;
        let upd = if *self.peek() == Tok::LBracket {
            self.next();
            let index = self.ident()?;
            self.expect(Tok::RBracket)?;
            self.expect(Tok::Assign)?;
            if self.at_keyword("case") {
                self.next();
                let mut arms = Vec::new();
                loop {
                    self.expect(Tok::Bar)?;
                    if *self.peek() == Tok::Underscore {
                        self.next();
                        self.expect(Tok::Colon)?;
                        let default = self.term()?;
                        break UpdateAst::Case {
                            array: target,
                            index,
                            arms,
                            default,
                        };
                    }
                    let cond = self.lit()?;
                    self.expect(Tok::Colon)?;
                    arms.push((cond, self.term()?));
                }
            } else {
                UpdateAst::IndexAssign {
                    array: target,
                    index,
                    value: self.term()?,
                }
            }
        } else {
            self.expect(Tok::Assign)?;
            UpdateAst::Assign {
                target,
                value: self.term()?,
            }
        };
        self.expect(Tok::Semi)?;
        Ok(upd)
    }
}
