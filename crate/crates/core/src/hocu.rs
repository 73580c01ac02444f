//! Higher-order coloured unification.
//!
//! A bounded Huet-style pre-unification procedure. Terms are kept in
//! beta-normal eta-long form; flex-rigid pairs are solved by imitation and
//! projection bindings, rigid-rigid pairs are decomposed, and the colours of
//! matching heads are unified in a [`ColourStore`]. Search is depth-first with
//! iterative deepening on the binding-generation depth of variables.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use crate::colour::{Colour, ColourStore};
use crate::error::{Error, Result};
use crate::subst::ColouredSubstitution;
use crate::syntax::print_term;
use crate::term::{alpha_equal, logic, Signature, Sym, Term};
use crate::types::Ty;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }
}

/// What to do with flex-flex pairs left once no flex-rigid pair remains.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FlexFlexPolicy {
    /// Keep them as solved constraints attached to the solution.
    #[default]
    Retain,
    /// Discard solutions that still have flex-flex pairs.
    Reject,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_depth: usize,
    pub max_solutions: usize,
    pub flex_flex: FlexFlexPolicy,
    /// Search nodes visited over all deepening rounds. Depth alone does not
    /// bound the width of the search tree.
    pub max_steps: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_depth: 12,
            max_solutions: 64,
            flex_flex: FlexFlexPolicy::Retain,
            max_steps: 20_000,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct UnifyOptions {
    pub limits: SearchLimits,
    /// Equations in which a rigid-rigid head clash at type `t` is recorded
    /// instead of failing the branch. The caller must then establish the
    /// equation by other means.
    pub deferrable: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub subst: ColouredSubstitution,
    pub flex_flex: Vec<Equation>,
    /// Equations whose clash was deferred.
    pub deferred: BTreeSet<usize>,
    key: String,
}

impl Solution {
    /// Canonical printed form, used for ordering and deduplication.
    pub fn key(&self) -> &str {
        &self.key
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnifyResult {
    pub solutions: Vec<Solution>,
    /// False when the depth bound cut some branch or the solution cap was hit.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Clash {
    #[error("head clash: {0} vs {1}")]
    Head(String, String),
    #[error(transparent)]
    Colour(#[from] crate::colour::ColourClash),
}

/// Result of [`simplify`]: the flex pairs left after decomposition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Simplified {
    pub flex_rigid: Vec<Equation>,
    pub flex_flex: Vec<Equation>,
    pub colours: ColourStore,
}

#[derive(Clone, Debug)]
struct VarInfo {
    ty: Ty,
    colour: Option<Colour>,
    depth: usize,
}

#[derive(Clone, Debug)]
struct Pair {
    eq: usize,
    ctx: Vec<Ty>,
    lhs: Term,
    rhs: Term,
}

fn flex_head(t: &Term) -> Option<&Sym> {
    match t.spine().0 {
        Term::Free(s) => Some(s),
        _ => None,
    }
}

fn close_over(ctx: &[Ty], body: Term) -> Term {
    ctx.iter().rev().fold(body, |acc, ty| Term::abs("x", ty.clone(), acc))
}

fn replace_free(t: &Term, name: &str, with: &Term) -> Term {
    t.map_syms(&mut |occ| match occ {
        Term::Free(s) if &*s.name == name => with.clone(),
        other => other.clone(),
    })
}

#[derive(Clone, Debug)]
struct State {
    pairs: Vec<Pair>,
    subst: BTreeMap<Arc<str>, Term>,
    vars: BTreeMap<Arc<str>, VarInfo>,
    colours: ColourStore,
    deferred: BTreeSet<usize>,
    next_var: usize,
    next_colour: usize,
}

impl State {
    fn fresh_var(&mut self, ty: Ty, colour: Option<Colour>, depth: usize) -> Sym {
        self.next_var += 1;
        let name: Arc<str> = Arc::from(format!("_H{}", self.next_var).as_str());
        self.vars.insert(
            name.clone(),
            VarInfo {
                ty: ty.clone(),
                colour: colour.clone(),
                depth,
            },
        );
        Sym {
            name,
            ty,
            colour,
            label: None,
        }
    }

    fn fresh_colour(&mut self) -> Colour {
        self.next_colour += 1;
        Colour::var(&format!("_u{}", self.next_colour))
    }

    /// Colour given to symbols introduced by a binding for a variable
    /// annotated with `colour`.
    fn inherited(&mut self, colour: &Option<Colour>) -> Option<Colour> {
        match colour.as_ref().map(|c| self.colours.find(c)) {
            Some(c) if c.is_const() => Some(c),
            Some(_) => Some(self.fresh_colour()),
            None => None,
        }
    }

    /// Decomposes rigid-rigid pairs and orients flex-rigid pairs so the flex
    /// side is on the left. On success only flex pairs remain.
    fn simplify(&mut self, deferrable: &BTreeSet<usize>) -> std::result::Result<(), Clash> {
        let mut work: VecDeque<Pair> = std::mem::take(&mut self.pairs).into();
        let mut done = Vec::new();
        while let Some(mut pair) = work.pop_front() {
            while let (Term::Abs(b, l), Term::Abs(_, r)) = (&pair.lhs, &pair.rhs) {
                pair.ctx.push(b.ty.clone());
                let (l, r) = ((**l).clone(), (**r).clone());
                pair.lhs = l;
                pair.rhs = r;
            }
            let lflex = flex_head(&pair.lhs).is_some();
            let rflex = flex_head(&pair.rhs).is_some();
            match (lflex, rflex) {
                (true, true) => {
                    if !alpha_equal(&pair.lhs, &pair.rhs) {
                        done.push(pair);
                    }
                }
                (true, false) => done.push(pair),
                (false, true) => {
                    std::mem::swap(&mut pair.lhs, &mut pair.rhs);
                    done.push(pair);
                }
                (false, false) => {
                    let (lh, largs) = pair.lhs.spine();
                    let (rh, rargs) = pair.rhs.spine();
                    let same = match (lh, rh) {
                        (Term::Const(a), Term::Const(b)) => a.name == b.name && a.ty == b.ty,
                        (Term::Bound(i), Term::Bound(j)) => i == j,
                        _ => false,
                    };
                    if !same || largs.len() != rargs.len() {
                        let at_t = pair.lhs.infer(&mut pair.ctx.clone()).map(|ty| ty == Ty::T).unwrap_or(false);
                        if at_t && deferrable.contains(&pair.eq) {
                            self.deferred.insert(pair.eq);
                            continue;
                        }
                        return Err(Clash::Head(print_term(lh), print_term(rh)));
                    }
                    if let (Term::Const(a), Term::Const(b)) = (lh, rh) {
                        self.colours.unify_opt(a.colour.as_ref(), b.colour.as_ref())?;
                    }
                    let subpairs: Vec<Pair> = largs
                        .iter()
                        .zip(&rargs)
                        .map(|(l, r)| Pair {
                            eq: pair.eq,
                            ctx: pair.ctx.clone(),
                            lhs: (*l).clone(),
                            rhs: (*r).clone(),
                        })
                        .collect();
                    for p in subpairs.into_iter().rev() {
                        work.push_front(p);
                    }
                }
            }
        }
        self.pairs = done;
        Ok(())
    }

    /// Imitation and projection bindings for the flex-rigid pair.
    fn bindings(&mut self, pair: &Pair) -> Vec<Term> {
        let flex = flex_head(&pair.lhs).expect("flex side").clone();
        let info = self.vars.get(&flex.name).cloned().unwrap_or(VarInfo {
            ty: flex.ty.clone(),
            colour: flex.colour.clone(),
            depth: 0,
        });
        let (arg_tys, _) = info.ty.split();
        let n = arg_tys.len();
        let depth = info.depth + 1;
        let (rigid_head, _) = pair.rhs.spine();
        let mut out = Vec::new();

        let own = info.colour.as_ref().map(|c| self.colours.find(c)).filter(Colour::is_const);

        if let Term::Const(h) = rigid_head {
            let head_colour = h.colour.as_ref().map(|c| self.colours.find(c));
            let pruned = matches!((&own, &head_colour), (Some(a), Some(b)) if b.is_const() && a != b);
            if !pruned {
                let colour = if logic::is_builtin(&h.name) {
                    None
                } else {
                    self.inherited(&info.colour)
                };
                let head = Term::Const(Sym {
                    name: h.name.clone(),
                    ty: h.ty.clone(),
                    colour,
                    label: None,
                });
                out.push(self.partial_binding(head, &h.ty, &arg_tys, &info, depth));
            }
        }
        let target = pair.rhs.infer(&mut pair.ctx.clone()).ok();
        for (j, ty_j) in arg_tys.iter().enumerate() {
            if target.as_ref().is_some_and(|t| ty_j.target() != t) {
                continue;
            }
            let head = Term::Bound((n - 1 - j) as u32);
            // the head is a binder of the binding itself, hence already in scope
            out.push(self.partial_binding(head, ty_j, &arg_tys, &info, depth));
        }
        out
    }

    /// `\x1..xn. head(H1(x1..xn), ..., Hk(x1..xn))` for a head of type
    /// `head_ty`, in eta-long form.
    fn partial_binding(&mut self, head: Term, head_ty: &Ty, arg_tys: &[Ty], info: &VarInfo, depth: usize) -> Term {
        let n = arg_tys.len();
        let (head_args, _) = head_ty.split();
        let xs: Vec<Term> = (0..n).map(|j| Term::Bound((n - 1 - j) as u32)).collect();
        let mut args = Vec::new();
        for sigma in head_args {
            let h_ty = Ty::curried(arg_tys.iter().cloned(), sigma);
            let colour = self.inherited(&info.colour);
            let h = self.fresh_var(h_ty, colour, depth);
            args.push(Term::apps(Term::Free(h), xs.iter().cloned()));
        }
        let body = Term::apps(head, args);
        let mut t = body;
        for ty in arg_tys.iter().rev() {
            t = Term::abs("x", ty.clone(), t);
        }
        t.normalize()
    }

    fn bind(&mut self, var: &Arc<str>, term: Term) {
        for pair in &mut self.pairs {
            if pair.lhs.occurs_free(var) || pair.rhs.occurs_free(var) {
                let mut ctx = pair.ctx.clone();
                pair.lhs = replace_free(&pair.lhs, var, &term).normalize_in(&mut ctx);
                pair.rhs = replace_free(&pair.rhs, var, &term).normalize_in(&mut ctx);
            }
        }
        for v in self.subst.values_mut() {
            if v.occurs_free(var) {
                *v = replace_free(v, var, &term).normalize();
            }
        }
        self.subst.insert(var.clone(), term);
    }
}

struct Search<'a> {
    opts: &'a UnifyOptions,
    originals: &'a [Arc<str>],
    input_colours: &'a BTreeSet<Arc<str>>,
    limit: usize,
    steps: usize,
    cut: bool,
    truncated: bool,
    found: BTreeMap<String, Solution>,
}

impl Search<'_> {
    fn run(&mut self, mut st: State) {
        self.steps += 1;
        if self.found.len() >= self.opts.limits.max_solutions || self.steps > self.opts.limits.max_steps {
            self.truncated = true;
            return;
        }
        if st.simplify(&self.opts.deferrable).is_err() {
            return;
        }
        let next = st
            .pairs
            .iter()
            .position(|p| flex_head(&p.lhs).is_some() && flex_head(&p.rhs).is_none());
        let Some(i) = next else {
            if self.opts.limits.flex_flex == FlexFlexPolicy::Reject && !st.pairs.is_empty() {
                return;
            }
            if let Some(sol) = self.finish(&st) {
                self.found.entry(sol.key.clone()).or_insert(sol);
            }
            return;
        };
        let pair = st.pairs[i].clone();
        let var = flex_head(&pair.lhs).expect("flex").name.clone();
        let depth = st.vars.get(&var).map(|v| v.depth).unwrap_or(0);
        if depth >= self.limit {
            self.cut = true;
            return;
        }
        for binding in st.bindings(&pair) {
            let mut next = st.clone();
            next.bind(&var, binding);
            self.run(next);
            if self.truncated {
                return;
            }
        }
    }

    fn finish(&self, st: &State) -> Option<Solution> {
        let mut store = st.colours.clone();
        // unresolved colours inside the value of a constant-coloured variable
        // take that colour
        for var in self.originals {
            let (Some(info), Some(value)) = (st.vars.get(var), st.subst.get(var)) else {
                continue;
            };
            let Some(c) = info.colour.as_ref().map(|c| store.find(c)).filter(Colour::is_const) else {
                continue;
            };
            for cv in value.colour_vars() {
                store.unify(&Colour::Var(cv), &c).ok()?;
            }
        }

        let mut terms: BTreeMap<Arc<str>, Term> = BTreeMap::new();
        for var in self.originals {
            if let Some(v) = st.subst.get(var) {
                terms.insert(var.clone(), v.resolve_colours(&store));
            }
        }
        let mut flex_flex: Vec<Equation> = st
            .pairs
            .iter()
            .map(|p| {
                Equation::new(
                    close_over(&p.ctx, p.lhs.clone()).resolve_colours(&store),
                    close_over(&p.ctx, p.rhs.clone()).resolve_colours(&store),
                )
            })
            .collect();
        let mut colours = BTreeMap::new();
        for cv in self.input_colours {
            let c = store.find(&Colour::Var(cv.clone()));
            if c != Colour::Var(cv.clone()) {
                colours.insert(cv.clone(), c);
            }
        }

        // canonical names for fresh variables and fresh colour variables
        let mut var_names: BTreeMap<Arc<str>, Arc<str>> = BTreeMap::new();
        let mut colour_names: BTreeMap<Arc<str>, Arc<str>> = BTreeMap::new();
        let mut visit = |t: &Term| {
            t.for_each_sym(&mut |occ, s| {
                if matches!(occ, Term::Free(_)) && !self.originals.contains(&s.name) && !var_names.contains_key(&s.name) {
                    let fresh = Arc::from(format!("_H{}", var_names.len() + 1).as_str());
                    var_names.insert(s.name.clone(), fresh);
                }
                if let Some(Colour::Var(v)) = &s.colour {
                    if !self.input_colours.contains(v) && !colour_names.contains_key(v) {
                        let fresh = Arc::from((colour_names.len() + 1).to_string().as_str());
                        colour_names.insert(v.clone(), fresh);
                    }
                }
            });
        };
        for t in terms.values() {
            visit(t);
        }
        for e in &flex_flex {
            visit(&e.lhs);
            visit(&e.rhs);
        }
        for c in colours.values() {
            if let Colour::Var(v) = c {
                if !self.input_colours.contains(v) && !colour_names.contains_key(v) {
                    let fresh = Arc::from((colour_names.len() + 1).to_string().as_str());
                    colour_names.insert(v.clone(), fresh);
                }
            }
        }
        let rename_colour = |c: &Colour| match c {
            Colour::Var(v) => colour_names.get(v).map(|n| Colour::Var(n.clone())).unwrap_or_else(|| c.clone()),
            other => other.clone(),
        };
        let rename = |t: &Term| -> Term {
            t.map_syms(&mut |occ| match occ {
                Term::Free(s) => {
                    let mut s = s.clone();
                    if let Some(n) = var_names.get(&s.name) {
                        s.name = n.clone();
                    }
                    s.colour = s.colour.as_ref().map(rename_colour);
                    Term::Free(s)
                }
                Term::Const(s) => {
                    let mut s = s.clone();
                    s.colour = s.colour.as_ref().map(rename_colour);
                    Term::Const(s)
                }
                other => other.clone(),
            })
        };
        for t in terms.values_mut() {
            *t = rename(t);
        }
        for e in &mut flex_flex {
            e.lhs = rename(&e.lhs);
            e.rhs = rename(&e.rhs);
        }
        for c in colours.values_mut() {
            *c = rename_colour(c);
        }

        let subst = ColouredSubstitution { terms, colours };
        let mut key = subst.to_string();
        for e in &flex_flex {
            key.push_str(&format!(" | {} =?= {}", e.lhs, e.rhs));
        }
        if !st.deferred.is_empty() {
            key.push_str(&format!(" | deferred {:?}", st.deferred));
        }
        Some(Solution {
            subst,
            flex_flex,
            deferred: st.deferred.clone(),
            key,
        })
    }
}

fn collect_vars(t: &Term, vars: &mut BTreeMap<Arc<str>, VarInfo>, order: &mut Vec<Arc<str>>) -> Result<()> {
    let mut err = None;
    t.for_each_sym(&mut |occ, s| {
        if !matches!(occ, Term::Free(_)) {
            return;
        }
        match vars.get_mut(&s.name) {
            Some(info) => {
                if info.ty != s.ty {
                    err.get_or_insert(Error::mismatch(&*s.name, &info.ty, &s.ty));
                }
                // a constant colour on any occurrence constrains the variable
                if !info.colour.as_ref().is_some_and(Colour::is_const) && s.colour.as_ref().is_some_and(Colour::is_const) {
                    info.colour = s.colour.clone();
                }
            }
            None => {
                vars.insert(
                    s.name.clone(),
                    VarInfo {
                        ty: s.ty.clone(),
                        colour: s.colour.clone(),
                        depth: 0,
                    },
                );
                order.push(s.name.clone());
            }
        }
    });
    err.map_or(Ok(()), Err)
}

/// Enumerates coloured unifiers of `system` within `limits`.
pub fn unify(system: &[Equation], sig: &Signature, limits: &SearchLimits) -> Result<UnifyResult> {
    let opts = UnifyOptions {
        limits: limits.clone(),
        deferrable: BTreeSet::new(),
    };
    unify_with(system, sig, &opts)
}

pub fn unify_with(system: &[Equation], sig: &Signature, opts: &UnifyOptions) -> Result<UnifyResult> {
    if opts.limits.max_depth == 0 {
        return Err(Error::Invalid("search depth must be at least 1".into()));
    }
    let mut vars = BTreeMap::new();
    let mut order = Vec::new();
    let mut input_colours = BTreeSet::new();
    let mut pairs = Vec::new();
    for (i, eq) in system.iter().enumerate() {
        let (lt, rt) = (eq.lhs.ty()?, eq.rhs.ty()?);
        if lt != rt {
            return Err(Error::mismatch(format!("{} = {}", eq.lhs, eq.rhs), lt, rt));
        }
        for side in [&eq.lhs, &eq.rhs] {
            if side.has_loose_bound() {
                return Err(Error::Invalid(format!("equation side {} is not closed", side)));
            }
            collect_vars(side, &mut vars, &mut order)?;
            input_colours.extend(side.colour_vars());
        }
        pairs.push(Pair {
            eq: i,
            ctx: Vec::new(),
            lhs: eq.lhs.normalize(),
            rhs: eq.rhs.normalize(),
        });
    }
    for name in vars.keys() {
        if let Some((crate::term::SymKind::Const, _)) = sig.lookup(name) {
            return Err(Error::Invalid(format!("`{}` is declared as a constant", name)));
        }
    }
    let init = State {
        pairs,
        subst: BTreeMap::new(),
        vars,
        colours: ColourStore::new(),
        deferred: BTreeSet::new(),
        next_var: 0,
        next_colour: 0,
    };
    let mut result = BTreeMap::new();
    let mut complete = false;
    let mut steps = 0;
    for limit in 1..=opts.limits.max_depth {
        let mut search = Search {
            opts,
            originals: &order,
            input_colours: &input_colours,
            limit,
            steps,
            cut: false,
            truncated: false,
            found: BTreeMap::new(),
        };
        search.run(init.clone());
        steps = search.steps;
        if search.truncated {
            // a cut-short round may miss solutions of the previous one
            result.extend(search.found);
            while result.len() > opts.limits.max_solutions {
                result.pop_last();
            }
            break;
        }
        result = search.found;
        if !search.cut {
            complete = true;
            break;
        }
    }
    Ok(UnifyResult {
        solutions: result.into_values().collect(),
        complete,
    })
}

/// One round of decomposition on closed equations.
pub fn simplify(system: &[Equation]) -> std::result::Result<Simplified, Clash> {
    let mut st = State {
        pairs: system
            .iter()
            .enumerate()
            .map(|(i, e)| Pair {
                eq: i,
                ctx: Vec::new(),
                lhs: e.lhs.normalize(),
                rhs: e.rhs.normalize(),
            })
            .collect(),
        subst: BTreeMap::new(),
        vars: BTreeMap::new(),
        colours: ColourStore::new(),
        deferred: BTreeSet::new(),
        next_var: 0,
        next_colour: 0,
    };
    st.simplify(&BTreeSet::new())?;
    let mut out = Simplified {
        colours: st.colours.clone(),
        ..Default::default()
    };
    for p in st.pairs {
        let eq = Equation::new(close_over(&p.ctx, p.lhs.clone()), close_over(&p.ctx, p.rhs.clone()));
        if flex_head(&p.rhs).is_some() {
            out.flex_flex.push(eq);
        } else {
            out.flex_rigid.push(eq);
        }
    }
    Ok(out)
}

/// Imitation and projection bindings for a closed flex-rigid equation
/// (flex side on the left). Fresh variables are named `_H1, _H2, ...`.
pub fn generate_bindings(eq: &Equation) -> Vec<(Arc<str>, Term)> {
    let mut st = State {
        pairs: vec![Pair {
            eq: 0,
            ctx: Vec::new(),
            lhs: eq.lhs.normalize(),
            rhs: eq.rhs.normalize(),
        }],
        subst: BTreeMap::new(),
        vars: BTreeMap::new(),
        colours: ColourStore::new(),
        deferred: BTreeSet::new(),
        next_var: 0,
        next_colour: 0,
    };
    if st.simplify(&BTreeSet::new()).is_err() {
        return Vec::new();
    }
    let Some(pair) = st.pairs.first().cloned() else {
        return Vec::new();
    };
    let Some(var) = flex_head(&pair.lhs).map(|s| s.name.clone()) else {
        return Vec::new();
    };
    if flex_head(&pair.rhs).is_some() {
        return Vec::new();
    }
    st.bindings(&pair).into_iter().map(|b| (var.clone(), b)).collect()
}

/// Whether every coloured symbol occurrence of `t` carries `c` once the
/// colour part of `sub` is applied. Uncoloured symbols are exempt.
pub fn is_monochrome(t: &Term, c: &Colour, sub: &ColouredSubstitution) -> bool {
    let mut ok = true;
    t.for_each_sym(&mut |_, s| {
        if let Some(col) = &s.colour {
            if sub.colour(col) != *c {
                ok = false;
            }
        }
    });
    ok
}
