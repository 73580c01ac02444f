use std::sync::Arc;

use super::lexer::{tokenize, Tok, Token};
use crate::colour::Colour;
use crate::error::{Error, Result};
use crate::term::{logic, Signature, SymKind, Sym, Term};
use crate::types::Ty;

const QUANTIFIERS: [&str; 3] = ["forall", "exists", "exists1"];

/// Recursive-descent parser over a token stream.
pub(crate) struct Parser<'s> {
    toks: Vec<Token>,
    pos: usize,
    sig: &'s Signature,
    scope: Vec<(String, Ty)>,
    end: (usize, usize),
}

impl<'s> Parser<'s> {
    pub(crate) fn new(src: &str, first_line: usize, sig: &'s Signature) -> Result<Self> {
        let toks = tokenize(src, first_line)?;
        let lines = src.split('\n').count().max(1);
        let last_len = src.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0);
        Ok(Parser {
            toks,
            pos: 0,
            sig,
            scope: Vec::new(),
            end: (first_line + lines - 1, last_len + 1),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn position(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(t) => (t.line, t.column),
            None => self.end,
        }
    }

    pub(crate) fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.position();
        Err(Error::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T> {
        match self.peek() {
            Some(t) => self.error(format!("expected {}, found {}", wanted, t.describe())),
            None => self.error(format!("expected {}, found end of input", wanted)),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.unexpected("an identifier"),
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }

    pub(crate) fn eat_tilde(&mut self) -> bool {
        self.eat(&Tok::Tilde)
    }

    pub(crate) fn eat_caret(&mut self) -> bool {
        self.eat(&Tok::Caret)
    }

    pub(crate) fn eat_comma(&mut self) -> bool {
        self.eat(&Tok::Comma)
    }

    pub(crate) fn label(&mut self) -> Result<String> {
        self.ident()
    }

    pub(crate) fn ty(&mut self) -> Result<Ty> {
        let dom = match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let ty = self.ty()?;
                self.expect(Tok::RParen)?;
                ty
            }
            Some(Tok::Ident(s)) if s == "e" => {
                self.pos += 1;
                Ty::E
            }
            Some(Tok::Ident(s)) if s == "t" => {
                self.pos += 1;
                Ty::T
            }
            _ => return self.unexpected("a type"),
        };
        if self.eat(&Tok::Arrow) {
            Ok(Ty::arrow(dom, self.ty()?))
        } else {
            Ok(dom)
        }
    }

    fn starts_binder(&self) -> bool {
        match self.peek() {
            Some(Tok::Backslash) => true,
            Some(Tok::Ident(s)) => QUANTIFIERS.contains(&s.as_str()) && matches!(self.peek_at(1), Some(Tok::Ident(_))),
            _ => false,
        }
    }

    /// Parses `x:τ, y:τ, ... .`, defaulting binder types to `e`.
    fn binders(&mut self) -> Result<Vec<(String, Ty)>> {
        let mut out = Vec::new();
        loop {
            let name = self.ident()?;
            let ty = if self.eat(&Tok::Colon) { self.ty()? } else { Ty::E };
            out.push((name, ty));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::Dot)?;
        Ok(out)
    }

    pub(crate) fn term(&mut self) -> Result<Term> {
        if !self.starts_binder() {
            return self.implication();
        }
        let kind = match self.peek() {
            Some(Tok::Backslash) => {
                self.pos += 1;
                "\\".to_string()
            }
            _ => self.ident()?,
        };
        let binders = self.binders()?;
        let n = binders.len();
        self.scope.extend(binders.iter().cloned());
        let body = self.term();
        self.scope.truncate(self.scope.len() - n);
        let mut body = body?;
        for (name, ty) in binders.into_iter().rev() {
            body = match kind.as_str() {
                "\\" => Term::abs(&name, ty, body),
                "forall" => Term::forall(&name, ty, body),
                "exists" => Term::exists(&name, ty, body),
                _ => self.exists1(&name, ty, body)?,
            };
        }
        Ok(body)
    }

    /// `exists1 x. R & S` abbreviates
    /// `exists x. R & (forall y. R[y/x] => y = x) & S`.
    fn exists1(&self, name: &str, ty: Ty, body: Term) -> Result<Term> {
        let (restriction, scope) = match body.spine() {
            (Term::Const(s), args) if &*s.name == logic::AND && args.len() == 2 => (args[0].clone(), args[1].clone()),
            _ => return self.error("`exists1` expects a body of the form `restriction & scope`"),
        };
        let other = format!("{}'", name);
        let moved = restriction.shift(1, 1);
        let unique = Term::forall(
            &other,
            ty.clone(),
            Term::imp(moved, Term::eq(Term::Bound(0), Term::Bound(1), ty.clone())),
        );
        Ok(Term::exists(name, ty, Term::and(restriction, Term::and(unique, scope))))
    }

    fn operand(&mut self, next: fn(&mut Self) -> Result<Term>) -> Result<Term> {
        if self.starts_binder() {
            self.term()
        } else {
            next(self)
        }
    }

    fn implication(&mut self) -> Result<Term> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.operand(Self::implication)?;
            Ok(Term::imp(lhs, rhs))
        } else if self.eat(&Tok::RevImplies) {
            let rhs = self.operand(Self::implication)?;
            Ok(Term::rimp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Term> {
        let lhs = self.conjunction()?;
        if self.eat(&Tok::Bar) {
            let rhs = self.operand(Self::disjunction)?;
            Ok(Term::or(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn conjunction(&mut self) -> Result<Term> {
        let lhs = self.equality()?;
        if self.eat(&Tok::Amp) {
            let rhs = self.operand(Self::conjunction)?;
            Ok(Term::and(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn equality(&mut self) -> Result<Term> {
        let lhs = self.unary()?;
        if self.eat(&Tok::Equals) {
            let rhs = self.operand(Self::unary)?;
            let ty = self.type_in_scope(&lhs)?;
            Ok(Term::eq(lhs, rhs, ty))
        } else {
            Ok(lhs)
        }
    }

    fn unary(&mut self) -> Result<Term> {
        if self.eat(&Tok::Tilde) {
            let arg = self.operand(Self::unary)?;
            Ok(Term::not(arg))
        } else {
            self.application()
        }
    }

    fn type_in_scope(&self, t: &Term) -> Result<Ty> {
        let mut ctx: Vec<Ty> = self.scope.iter().map(|(_, ty)| ty.clone()).collect();
        t.infer(&mut ctx)
    }

    fn application(&mut self) -> Result<Term> {
        let is_eq = matches!(self.peek(), Some(Tok::Ident(s)) if s == logic::EQ)
            && !self.scope.iter().any(|(n, _)| n == logic::EQ);
        if is_eq {
            return self.eq_call();
        }
        let mut head = self.atom()?;
        while self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let args = self.args()?;
            head = Term::apps(head, args);
        }
        Ok(head)
    }

    fn args(&mut self) -> Result<Vec<Term>> {
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return self.error("empty argument list");
        }
        loop {
            args.push(self.term()?);
            if self.eat(&Tok::RParen) {
                return Ok(args);
            }
            self.expect(Tok::Comma)?;
        }
    }

    /// `eq(a, b)` written prefix.
    fn eq_call(&mut self) -> Result<Term> {
        self.pos += 1;
        self.expect(Tok::LParen)?;
        let args = self.args()?;
        if args.len() != 2 {
            return self.error("`eq` takes two arguments");
        }
        let ty = self.type_in_scope(&args[0])?;
        let mut it = args.into_iter();
        let (a, b) = (it.next().unwrap(), it.next().unwrap());
        Ok(Term::eq(a, b, ty))
    }

    fn atom(&mut self) -> Result<Term> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::Ident(_)) => {
                let (line, column) = self.position();
                let name = self.ident()?;
                let colour = self.colour_suffix()?;
                let label = if self.eat(&Tok::Caret) { Some(self.ident()?) } else { None };
                self.resolve(&name, colour, label, line, column)
            }
            _ => self.unexpected("a term"),
        }
    }

    fn colour_suffix(&mut self) -> Result<Option<Colour>> {
        if !self.eat(&Tok::At) {
            return Ok(None);
        }
        if self.eat(&Tok::Question) {
            return Ok(Some(Colour::var(&self.ident()?)));
        }
        match self.ident()?.as_str() {
            "p" => Ok(Some(Colour::P)),
            "s" => Ok(Some(Colour::S)),
            other => self.error(format!("unknown colour `{}` (expected p, s or ?Name)", other)),
        }
    }

    fn resolve(&self, name: &str, colour: Option<Colour>, label: Option<String>, line: usize, column: usize) -> Result<Term> {
        if let Some(depth) = self.scope.iter().rev().position(|(n, _)| n == name) {
            if colour.is_some() || label.is_some() {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: format!("bound variable `{}` cannot carry a colour or tag", name),
                });
            }
            return Ok(Term::Bound(depth as u32));
        }
        let (kind, ty) = match self.sig.lookup(name) {
            Some((kind, ty)) => (kind, ty.clone()),
            None => match builtin_type(name) {
                Some(ty) => (SymKind::Const, ty),
                None => return Err(Error::UndeclaredSymbol(name.to_string())),
            },
        };
        let sym = Sym {
            name: Arc::from(name),
            ty,
            colour,
            label: label.map(|l| Arc::from(l.as_str())),
        };
        Ok(match kind {
            SymKind::Const => Term::Const(sym),
            SymKind::Var => Term::Free(sym),
        })
    }
}

fn builtin_type(name: &str) -> Option<Ty> {
    let tt = Ty::curried([Ty::T, Ty::T], Ty::T);
    match name {
        logic::AND | logic::OR | logic::IMP | logic::RIMP => Some(tt),
        logic::NOT => Some(Ty::arrow(Ty::T, Ty::T)),
        _ => None,
    }
}

/// Parses a term, type-checks it and returns its beta-normal eta-long form.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    parse_term_at(text, 1, sig)
}

pub(crate) fn parse_term_at(text: &str, first_line: usize, sig: &Signature) -> Result<Term> {
    let mut p = Parser::new(text, first_line, sig)?;
    let t = p.term()?;
    p.expect_end()?;
    t.ty()?;
    Ok(t.normalize())
}

pub fn parse_type(text: &str) -> Result<Ty> {
    let sig = Signature::new();
    let mut p = Parser::new(text, 1, &sig)?;
    let ty = p.ty()?;
    p.expect_end()?;
    Ok(ty)
}
