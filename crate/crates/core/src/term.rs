//! Coloured simply typed lambda terms.
//!
//! Bound variables are de Bruijn indices; binders keep a name hint that the
//! printer uses. Constants and free variables carry their type, an optional
//! colour and an optional occurrence label (used only while loading problems).

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::colour::{Colour, ColourStore};
use crate::error::{Error, Result};
use crate::types::Ty;

/// Names of the logical constants. They behave like ordinary constants of the
/// signature but are always available.
pub mod logic {
    pub const AND: &str = "and";
    pub const OR: &str = "or";
    pub const NOT: &str = "not";
    pub const IMP: &str = "imp";
    /// Reversed implication, `a <= b`.
    pub const RIMP: &str = "rimp";
    pub const EQ: &str = "eq";
    pub const FORALL: &str = "forall";
    pub const EXISTS: &str = "exists";

    pub const ALL: [&str; 8] = [AND, OR, NOT, IMP, RIMP, EQ, FORALL, EXISTS];

    pub fn is_builtin(name: &str) -> bool {
        ALL.contains(&name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sym {
    pub name: Arc<str>,
    pub ty: Ty,
    pub colour: Option<Colour>,
    pub label: Option<Arc<str>>,
}

impl Sym {
    pub fn new(name: &str, ty: Ty) -> Self {
        Sym {
            name: Arc::from(name),
            ty,
            colour: None,
            label: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binder {
    pub hint: Arc<str>,
    pub ty: Ty,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Const(Sym),
    Free(Sym),
    Bound(u32),
    Abs(Binder, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
}

/// One step of a position inside a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Fun,
    Arg,
    Body,
}

pub type Path = Vec<Step>;

impl Term {
    pub fn constant(name: &str, ty: Ty) -> Term {
        Term::Const(Sym::new(name, ty))
    }

    pub fn free(name: &str, ty: Ty) -> Term {
        Term::Free(Sym::new(name, ty))
    }

    pub fn coloured(self, colour: Option<Colour>) -> Term {
        match self {
            Term::Const(mut s) => {
                s.colour = colour;
                Term::Const(s)
            }
            Term::Free(mut s) => {
                s.colour = colour;
                Term::Free(s)
            }
            other => other,
        }
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps<I: IntoIterator<Item = Term>>(head: Term, args: I) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn abs(hint: &str, ty: Ty, body: Term) -> Term {
        Term::Abs(
            Binder {
                hint: Arc::from(hint),
                ty,
            },
            Arc::new(body),
        )
    }

    fn binary(name: &str, a: Term, b: Term) -> Term {
        let ty = Ty::curried([Ty::T, Ty::T], Ty::T);
        Term::apps(Term::constant(name, ty), [a, b])
    }

    pub fn and(a: Term, b: Term) -> Term {
        Term::binary(logic::AND, a, b)
    }

    pub fn or(a: Term, b: Term) -> Term {
        Term::binary(logic::OR, a, b)
    }

    pub fn imp(a: Term, b: Term) -> Term {
        Term::binary(logic::IMP, a, b)
    }

    pub fn rimp(a: Term, b: Term) -> Term {
        Term::binary(logic::RIMP, a, b)
    }

    pub fn not(a: Term) -> Term {
        Term::app(Term::constant(logic::NOT, Ty::arrow(Ty::T, Ty::T)), a)
    }

    pub fn eq(a: Term, b: Term, ty: Ty) -> Term {
        let eq_ty = Ty::curried([ty.clone(), ty], Ty::T);
        Term::apps(Term::constant(logic::EQ, eq_ty), [a, b])
    }

    /// `quant(\x:ty. body)` where `quant` is `forall` or `exists`.
    pub fn quant(quant: &str, hint: &str, ty: Ty, body: Term) -> Term {
        let q_ty = Ty::arrow(Ty::arrow(ty.clone(), Ty::T), Ty::T);
        Term::app(Term::constant(quant, q_ty), Term::abs(hint, ty, body))
    }

    pub fn forall(hint: &str, ty: Ty, body: Term) -> Term {
        Term::quant(logic::FORALL, hint, ty, body)
    }

    pub fn exists(hint: &str, ty: Ty, body: Term) -> Term {
        Term::quant(logic::EXISTS, hint, ty, body)
    }

    pub fn sym(&self) -> Option<&Sym> {
        match self {
            Term::Const(s) | Term::Free(s) => Some(s),
            _ => None,
        }
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(&**a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// Outer binders and the body beneath them.
    pub fn strip_abs(&self) -> (Vec<&Binder>, &Term) {
        let mut binders = Vec::new();
        let mut cur = self;
        while let Term::Abs(b, body) = cur {
            binders.push(b);
            cur = body;
        }
        (binders, cur)
    }

    /// Name of the constant heading this term, if any.
    pub fn head_const(&self) -> Option<&str> {
        match self.spine().0 {
            Term::Const(s) => Some(&s.name),
            _ => None,
        }
    }

    pub fn is_flex(&self) -> bool {
        matches!(self.strip_abs().1.spine().0, Term::Free(_))
    }

    /// Adds `d` to every bound index `>= cutoff`.
    pub fn shift(&self, d: i64, cutoff: u32) -> Term {
        if d == 0 {
            return self.clone();
        }
        match self {
            Term::Bound(i) if *i >= cutoff => Term::Bound((*i as i64 + d) as u32),
            Term::Abs(b, body) => Term::Abs(b.clone(), Arc::new(body.shift(d, cutoff + 1))),
            Term::App(f, a) => Term::app(f.shift(d, cutoff), a.shift(d, cutoff)),
            _ => self.clone(),
        }
    }

    /// Substitutes `arg` for the outermost loose index of `self` (the body of
    /// an abstraction) and lowers the remaining loose indices.
    pub fn instantiate(&self, arg: &Term) -> Term {
        fn go(t: &Term, arg: &Term, depth: u32) -> Term {
            match t {
                Term::Bound(k) if *k == depth => arg.shift(depth as i64, 0),
                Term::Bound(k) if *k > depth => Term::Bound(k - 1),
                Term::Abs(b, body) => Term::Abs(b.clone(), Arc::new(go(body, arg, depth + 1))),
                Term::App(f, a) => Term::app(go(f, arg, depth), go(a, arg, depth)),
                _ => t.clone(),
            }
        }
        go(self, arg, 0)
    }

    pub fn has_loose_bound(&self) -> bool {
        fn go(t: &Term, depth: u32) -> bool {
            match t {
                Term::Bound(k) => *k >= depth,
                Term::Abs(_, body) => go(body, depth + 1),
                Term::App(f, a) => go(f, depth) || go(a, depth),
                _ => false,
            }
        }
        go(self, 0)
    }

    pub fn beta_normal(&self) -> Term {
        match self {
            Term::App(f, a) => {
                let f = f.beta_normal();
                match f {
                    Term::Abs(_, body) => body.instantiate(a).beta_normal(),
                    f => Term::app(f, a.beta_normal()),
                }
            }
            Term::Abs(b, body) => Term::Abs(b.clone(), Arc::new(body.beta_normal())),
            _ => self.clone(),
        }
    }

    /// Eta-expands a beta-normal term in the context `ctx` (innermost binder
    /// last) to eta-long form.
    pub fn eta_long_in(&self, ctx: &mut Vec<Ty>) -> Term {
        if let Term::Abs(b, body) = self {
            ctx.push(b.ty.clone());
            let body = body.eta_long_in(ctx);
            ctx.pop();
            return Term::Abs(b.clone(), Arc::new(body));
        }
        let (head, args) = self.spine();
        let head_ty = match head {
            Term::Const(s) | Term::Free(s) => s.ty.clone(),
            Term::Bound(i) => match ctx.len().checked_sub(*i as usize + 1) {
                Some(pos) => ctx[pos].clone(),
                None => return self.clone(),
            },
            _ => return self.clone(),
        };
        let (arg_tys, _) = head_ty.split();
        let missing: Vec<Ty> = arg_tys.iter().skip(args.len()).cloned().collect();
        let k = missing.len();
        let mut new_args: Vec<Term> = args
            .iter()
            .map(|a| a.eta_long_in(ctx).shift(k as i64, 0))
            .collect();
        ctx.extend(missing.iter().cloned());
        for j in 0..k {
            new_args.push(Term::Bound((k - 1 - j) as u32).eta_long_in(ctx));
        }
        ctx.truncate(ctx.len() - k);
        let mut out = Term::apps(head.shift(k as i64, 0), new_args);
        for ty in missing.into_iter().rev() {
            out = Term::abs("x", ty, out);
        }
        out
    }

    /// Beta-normal, eta-long form of a closed (or context-free) term.
    pub fn normalize(&self) -> Term {
        self.normalize_in(&mut Vec::new())
    }

    pub fn normalize_in(&self, ctx: &mut Vec<Ty>) -> Term {
        self.beta_normal().eta_long_in(ctx)
    }

    /// Infers the type of the term, with `ctx` typing loose bound indices.
    pub fn infer(&self, ctx: &mut Vec<Ty>) -> Result<Ty> {
        match self {
            Term::Const(s) | Term::Free(s) => Ok(s.ty.clone()),
            Term::Bound(i) => ctx
                .len()
                .checked_sub(*i as usize + 1)
                .map(|pos| ctx[pos].clone())
                .ok_or_else(|| Error::UndeclaredSymbol(format!("#{}", i))),
            Term::Abs(b, body) => {
                ctx.push(b.ty.clone());
                let body_ty = body.infer(ctx);
                ctx.pop();
                Ok(Ty::arrow(b.ty.clone(), body_ty?))
            }
            Term::App(f, a) => {
                let f_ty = f.infer(ctx)?;
                let a_ty = a.infer(ctx)?;
                match f_ty.as_arrow() {
                    Some((dom, cod)) if *dom == a_ty => Ok(cod.clone()),
                    Some((dom, _)) => Err(Error::mismatch(
                        crate::syntax::print_term(self),
                        dom,
                        a_ty,
                    )),
                    None => Err(Error::mismatch(
                        crate::syntax::print_term(self),
                        format!("function type taking {}", a_ty),
                        f_ty,
                    )),
                }
            }
        }
    }

    pub fn ty(&self) -> Result<Ty> {
        self.infer(&mut Vec::new())
    }

    pub fn for_each_sym<'a>(&'a self, f: &mut impl FnMut(&'a Term, &'a Sym)) {
        match self {
            Term::Const(s) | Term::Free(s) => f(self, s),
            Term::Abs(_, body) => body.for_each_sym(f),
            Term::App(g, a) => {
                g.for_each_sym(f);
                a.for_each_sym(f);
            }
            Term::Bound(_) => {}
        }
    }

    /// Rebuilds the term with every symbol passed through `f`.
    pub fn map_syms(&self, f: &mut impl FnMut(&Term) -> Term) -> Term {
        match self {
            Term::Const(_) | Term::Free(_) => f(self),
            Term::Abs(b, body) => Term::Abs(b.clone(), Arc::new(body.map_syms(f))),
            Term::App(g, a) => Term::app(g.map_syms(f), a.map_syms(f)),
            Term::Bound(_) => self.clone(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.for_each_sym(&mut |t, s| {
            if matches!(t, Term::Free(_)) {
                out.insert(s.name.clone());
            }
        });
        out
    }

    /// Free variables with their types, first occurrence wins.
    pub fn free_var_types(&self) -> BTreeMap<Arc<str>, Ty> {
        let mut out = BTreeMap::new();
        self.for_each_sym(&mut |t, s| {
            if matches!(t, Term::Free(_)) {
                out.entry(s.name.clone()).or_insert_with(|| s.ty.clone());
            }
        });
        out
    }

    pub fn constants(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.for_each_sym(&mut |t, s| {
            if matches!(t, Term::Const(_)) {
                out.insert(s.name.clone());
            }
        });
        out
    }

    pub fn occurs_free(&self, name: &str) -> bool {
        let mut found = false;
        self.for_each_sym(&mut |t, s| {
            if matches!(t, Term::Free(_)) && &*s.name == name {
                found = true;
            }
        });
        found
    }

    pub fn colour_vars(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.for_each_sym(&mut |_, s| {
            if let Some(Colour::Var(v)) = &s.colour {
                out.insert(v.clone());
            }
        });
        out
    }

    pub fn map_colours(&self, f: &mut impl FnMut(Option<&Colour>) -> Option<Colour>) -> Term {
        self.map_syms(&mut |t| match t {
            Term::Const(s) => {
                let mut s = s.clone();
                s.colour = f(s.colour.as_ref());
                Term::Const(s)
            }
            Term::Free(s) => {
                let mut s = s.clone();
                s.colour = f(s.colour.as_ref());
                Term::Free(s)
            }
            other => other.clone(),
        })
    }

    pub fn erase_colours(&self) -> Term {
        self.map_colours(&mut |_| None)
    }

    /// Replaces every colour by its representative in `store`.
    pub fn resolve_colours(&self, store: &ColourStore) -> Term {
        self.map_colours(&mut |c| c.map(|c| store.find(c)))
    }

    pub fn strip_labels(&self) -> Term {
        self.map_syms(&mut |t| match t {
            Term::Const(s) => Term::Const(Sym { label: None, ..s.clone() }),
            Term::Free(s) => Term::Free(Sym { label: None, ..s.clone() }),
            other => other.clone(),
        })
    }

    /// Paths of every labelled symbol occurrence.
    pub fn label_paths(&self) -> BTreeMap<Arc<str>, Vec<Path>> {
        fn go(t: &Term, path: &mut Path, out: &mut BTreeMap<Arc<str>, Vec<Path>>) {
            match t {
                Term::Const(s) | Term::Free(s) => {
                    if let Some(l) = &s.label {
                        out.entry(l.clone()).or_default().push(path.clone());
                    }
                }
                Term::Abs(_, body) => {
                    path.push(Step::Body);
                    go(body, path, out);
                    path.pop();
                }
                Term::App(f, a) => {
                    path.push(Step::Fun);
                    go(f, path, out);
                    path.pop();
                    path.push(Step::Arg);
                    go(a, path, out);
                    path.pop();
                }
                Term::Bound(_) => {}
            }
        }
        let mut out = BTreeMap::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Subterm at `path` and the number of binders crossed to reach it.
    pub fn at_path(&self, path: &[Step]) -> Option<(&Term, u32)> {
        let mut cur = self;
        let mut crossed = 0;
        for step in path {
            cur = match (step, cur) {
                (Step::Fun, Term::App(f, _)) => f,
                (Step::Arg, Term::App(_, a)) => a,
                (Step::Body, Term::Abs(_, body)) => {
                    crossed += 1;
                    body
                }
                _ => return None,
            };
        }
        Some((cur, crossed))
    }

    /// Replaces the subterm at `path`.
    pub fn replace_at(&self, path: &[Step], with: &Term) -> Option<Term> {
        let Some((step, rest)) = path.split_first() else {
            return Some(with.clone());
        };
        match (step, self) {
            (Step::Fun, Term::App(f, a)) => Some(Term::App(Arc::new(f.replace_at(rest, with)?), a.clone())),
            (Step::Arg, Term::App(f, a)) => Some(Term::App(f.clone(), Arc::new(a.replace_at(rest, with)?))),
            (Step::Body, Term::Abs(b, body)) => Some(Term::Abs(b.clone(), Arc::new(body.replace_at(rest, with)?))),
            _ => None,
        }
    }

    /// Number of symbol and bound-variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Abs(_, body) => body.size(),
            Term::App(f, a) => f.size() + a.size(),
            _ => 1,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Abs(_, body) => body.depth(),
            Term::App(..) => {
                let (_, args) = self.spine();
                1 + args.iter().map(|a| a.depth()).max().unwrap_or(0)
            }
            _ => 1,
        }
    }
}

fn eq_terms(a: &Term, b: &Term, colours: bool) -> bool {
    match (a, b) {
        (Term::Const(x), Term::Const(y)) | (Term::Free(x), Term::Free(y)) => {
            x.name == y.name && x.ty == y.ty && (!colours || x.colour == y.colour)
        }
        (Term::Bound(i), Term::Bound(j)) => i == j,
        (Term::Abs(x, bx), Term::Abs(y, by)) => x.ty == y.ty && eq_terms(bx, by, colours),
        (Term::App(f, x), Term::App(g, y)) => eq_terms(f, g, colours) && eq_terms(x, y, colours),
        _ => false,
    }
}

/// Equality modulo renaming of bound variables; colours must agree.
pub fn alpha_equal(a: &Term, b: &Term) -> bool {
    eq_terms(a, b, true)
}

/// Alpha-equality ignoring colour annotations.
pub fn colour_erased_equal(a: &Term, b: &Term) -> bool {
    eq_terms(a, b, false)
}

pub fn beta_eta_normalize(t: &Term) -> Term {
    t.normalize()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymKind {
    Const,
    Var,
}

/// Declared constants and free variables with their types.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    consts: BTreeMap<Arc<str>, Ty>,
    vars: BTreeMap<Arc<str>, Ty>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_const(&mut self, name: &str, ty: Ty) -> Result<()> {
        self.check_fresh(name)?;
        self.consts.insert(Arc::from(name), ty);
        Ok(())
    }

    pub fn declare_var(&mut self, name: &str, ty: Ty) -> Result<()> {
        self.check_fresh(name)?;
        self.vars.insert(Arc::from(name), ty);
        Ok(())
    }

    fn check_fresh(&self, name: &str) -> Result<()> {
        if logic::is_builtin(name) || self.lookup(name).is_some() {
            return Err(Error::DuplicateSymbol(name.to_string()));
        }
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Option<(SymKind, &Ty)> {
        if let Some(ty) = self.consts.get(name) {
            return Some((SymKind::Const, ty));
        }
        self.vars.get(name).map(|ty| (SymKind::Var, ty))
    }

    pub fn consts(&self) -> impl Iterator<Item = (&Arc<str>, &Ty)> {
        self.consts.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = (&Arc<str>, &Ty)> {
        self.vars.iter()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.lookup(name).is_some()
    }
}

/// Whether `ty` is a legal type for the logical constant `name`.
pub fn builtin_type_ok(name: &str, ty: &Ty) -> bool {
    let tt = || Ty::curried([Ty::T, Ty::T], Ty::T);
    match name {
        logic::AND | logic::OR | logic::IMP | logic::RIMP => *ty == tt(),
        logic::NOT => *ty == Ty::arrow(Ty::T, Ty::T),
        logic::EQ => {
            let (args, res) = ty.split();
            args.len() == 2 && args[0] == args[1] && res == Ty::T
        }
        logic::FORALL | logic::EXISTS => match ty.as_arrow() {
            Some((dom, cod)) => *cod == Ty::T && dom.as_arrow().map(|(_, r)| *r == Ty::T).unwrap_or(false),
            None => false,
        },
        _ => false,
    }
}

/// Type of `t`, checking every symbol against `sig`.
pub fn type_of(t: &Term, sig: &Signature) -> Result<Ty> {
    let mut err = None;
    t.for_each_sym(&mut |term, s| {
        if err.is_some() {
            return;
        }
        if matches!(term, Term::Const(_)) && logic::is_builtin(&s.name) {
            if !builtin_type_ok(&s.name, &s.ty) {
                err = Some(Error::mismatch(&*s.name, "a logical constant type", &s.ty));
            }
            return;
        }
        let expected_kind = if matches!(term, Term::Const(_)) {
            SymKind::Const
        } else {
            SymKind::Var
        };
        match sig.lookup(&s.name) {
            None => err = Some(Error::UndeclaredSymbol(s.name.to_string())),
            Some((kind, _)) if kind != expected_kind => err = Some(Error::UndeclaredSymbol(s.name.to_string())),
            Some((_, ty)) if *ty != s.ty => err = Some(Error::mismatch(&*s.name, ty, &s.ty)),
            _ => {}
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    t.ty()
}
