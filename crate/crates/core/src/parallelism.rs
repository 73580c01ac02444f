//! Ellipsis resolution by parallelism.
//!
//! Source and target semantics must both be instances of one property `A`
//! applied to their parallel elements:
//! `SSem = A(SP1, ..., SPn)` and `TSem = A(TP1, ..., TPn)`.
//! Solving this pair of equations with coloured unification fixes the
//! values of the target anaphors, and each solution is a reading.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::colour::Colour;
use crate::error::{Error, Result};
use crate::hocu::{unify_with, Equation, SearchLimits, Solution, UnifyOptions};
use crate::subst::{apply, ColouredSubstitution};
use crate::syntax::print_plain;
use crate::syntax::problem::{is_quantifier_type, type_raise, DiscourseProblem, OccurrenceTag, ParallelElement, RelationMode};
use crate::tableau::{check_relation, ProofResult, ProofStatus, TableauLimits};
use crate::term::{colour_erased_equal, logic, Step, Sym, Term};
use crate::types::Ty;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReadingLabel {
    Strict,
    Sloppy,
    Mixed,
}

impl ReadingLabel {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "strict" => Some(ReadingLabel::Strict),
            "sloppy" => Some(ReadingLabel::Sloppy),
            "mixed" => Some(ReadingLabel::Mixed),
            _ => None,
        }
    }
}

impl fmt::Display for ReadingLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReadingLabel::Strict => "strict",
            ReadingLabel::Sloppy => "sloppy",
            ReadingLabel::Mixed => "mixed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reading {
    pub label: ReadingLabel,
    /// The target with the solution applied, in normal form.
    pub target: Term,
    pub witness: ColouredSubstitution,
    /// Present when the reading needed a relation proof.
    pub proof: Option<ProofResult>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub problem: String,
    /// Name given to the parallelism property.
    pub a_var: Arc<str>,
    pub equations: Vec<Equation>,
    /// Unifier solutions that survived the relation check.
    pub solutions: Vec<Solution>,
    pub readings: Vec<Reading>,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("underdetermined: `{variable}` is left unconstrained")]
    Underdetermined { variable: String },
    #[error("no solution{}", if *.complete { "" } else { " within the search limits" })]
    NoSolution { complete: bool },
    #[error(transparent)]
    Input(#[from] Error),
}

/// The equations of a problem together with what is needed to read them back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSystem {
    pub equations: Vec<Equation>,
    pub a_var: Arc<str>,
    /// The problem after colour annotation.
    pub annotated: DiscourseProblem,
}

struct Annotator<'a> {
    p: &'a DiscourseProblem,
    taken: BTreeSet<Arc<str>>,
    next: usize,
    vars: BTreeMap<Arc<str>, Option<Colour>>,
}

impl Annotator<'_> {
    fn fresh(&mut self) -> Colour {
        loop {
            self.next += 1;
            let name = format!("_a{}", self.next);
            if !self.taken.contains(name.as_str()) {
                return Colour::var(&name);
            }
        }
    }

    fn colour_sym(&mut self, s: &Sym, is_var: bool, primary_names: &BTreeSet<Arc<str>>) -> Result<Option<Colour>> {
        if logic::is_builtin(&s.name) {
            return Ok(None);
        }
        if is_var {
            if let Some(a) = self.p.anaphor(&s.name) {
                return Ok(Some(a.colour.clone()));
            }
            if let Some(c) = self.vars.get(&s.name) {
                return Ok(c.clone());
            }
            let c = match &s.colour {
                Some(c) => c.clone(),
                None => self.fresh(),
            };
            self.vars.insert(s.name.clone(), Some(c.clone()));
            return Ok(Some(c));
        }
        let tag = s.label.as_ref().and_then(|l| self.p.tags.get(l).map(|t| (l, *t)));
        let from_tag = match tag {
            Some((_, OccurrenceTag::Primary)) => Some(Colour::P),
            Some((_, OccurrenceTag::FullNp)) => Some(Colour::S),
            Some((_, OccurrenceTag::Pronoun)) => None,
            None => None,
        };
        match (&s.colour, from_tag, tag) {
            (Some(explicit), Some(implied), Some((label, t))) if explicit.is_const() && *explicit != implied => Err(Error::ConflictingTags {
                label: label.to_string(),
                first: t.to_string(),
                second: format!("@{}", explicit),
            }),
            (Some(explicit), _, _) => Ok(Some(explicit.clone())),
            (None, Some(implied), _) => Ok(Some(implied)),
            (None, None, _) if s.label.is_none() && primary_names.contains(&s.name) => Ok(Some(Colour::P)),
            (None, None, _) => Ok(Some(self.fresh())),
        }
    }

    fn colour_term(&mut self, t: &Term, primary_names: &BTreeSet<Arc<str>>) -> Result<Term> {
        let mut err = None;
        let out = t.map_syms(&mut |occ| {
            let (s, is_var) = match occ {
                Term::Const(s) => (s, false),
                Term::Free(s) => (s, true),
                other => return other.clone(),
            };
            let colour = match self.colour_sym(s, is_var, primary_names) {
                Ok(c) => c,
                Err(e) => {
                    err.get_or_insert(e);
                    None
                }
            };
            let mut s = s.clone();
            s.colour = colour;
            if is_var {
                Term::Free(s)
            } else {
                Term::Const(s)
            }
        });
        err.map_or(Ok(out), Err)
    }
}

fn term_element_constants(p: &DiscourseProblem, source: bool) -> BTreeSet<Arc<str>> {
    let mut out = BTreeSet::new();
    for pair in &p.parallels {
        let e = if source { &pair.source } else { &pair.target };
        if let ParallelElement::Term(t) = e {
            out.extend(t.constants().into_iter().filter(|c| !logic::is_builtin(c)));
        }
    }
    out
}

/// Assigns colours to every symbol of source and target: primary occurrences
/// get `p`, full noun phrases `s`, anaphor variables their declared colour,
/// and everything else a fresh colour variable. Logical constants stay
/// uncoloured. Constants of parallel elements given as terms count as
/// primary wherever they occur unlabelled on their side.
pub fn annotate_colours(p: &DiscourseProblem) -> Result<DiscourseProblem> {
    let mut out = p.clone();
    if !p.coloured {
        out.source = p.source.erase_colours();
        out.target = p.target.erase_colours();
        for pair in &mut out.parallels {
            for e in [&mut pair.source, &mut pair.target] {
                if let ParallelElement::Term(t) = e {
                    *t = t.erase_colours();
                }
            }
        }
        return Ok(out);
    }
    let mut taken = p.source.colour_vars();
    taken.extend(p.target.colour_vars());
    for a in &p.anaphors {
        if let Colour::Var(v) = &a.colour {
            taken.insert(v.clone());
        }
    }
    let mut ann = Annotator {
        p,
        taken,
        next: 0,
        vars: BTreeMap::new(),
    };
    let (src_primary, tgt_primary) = (term_element_constants(p, true), term_element_constants(p, false));
    out.source = ann.colour_term(&p.source, &src_primary)?;
    out.target = ann.colour_term(&p.target, &tgt_primary)?;
    let everything: BTreeSet<Arc<str>> = src_primary.union(&tgt_primary).cloned().collect();
    for pair in &mut out.parallels {
        for e in [&mut pair.source, &mut pair.target] {
            if let ParallelElement::Term(t) = e {
                *t = ann.colour_term(t, &everything)?;
            }
        }
    }
    Ok(out)
}

fn fresh_property_name(p: &DiscourseProblem) -> Arc<str> {
    let mut taken = p.source.free_vars();
    taken.extend(p.target.free_vars());
    let taken_by = |n: &str| taken.contains(n) || p.signature.contains(n);
    let name = std::iter::once("A".to_string())
        .chain((1..).map(|i| format!("A{}", i)))
        .find(|n| !taken_by(n))
        .expect("unbounded name supply");
    Arc::from(name.as_str())
}

/// Builds `SSem = A(SPs)` and `TSem = A(TPs)` after colour annotation,
/// type-raising entity elements paired with quantifiers.
pub fn build_equations(p: &DiscourseProblem) -> Result<EquationSystem> {
    let annotated = annotate_colours(p)?;
    let sps = annotated.source_elements()?;
    let tps = annotated.target_elements()?;
    let mut src_args = Vec::new();
    let mut tgt_args = Vec::new();
    let mut tys = Vec::new();
    for (sp, tp) in sps.into_iter().zip(tps) {
        let (a, b) = (sp.ty()?, tp.ty()?);
        let (sp, tp, ty) = if a == b {
            (sp, tp, a)
        } else if a == Ty::E && is_quantifier_type(&b) {
            (type_raise(&sp), tp, b)
        } else if b == Ty::E && is_quantifier_type(&a) {
            (sp, type_raise(&tp), a)
        } else {
            return Err(Error::mismatch(format!("parallel pair {} ~ {}", sp, tp), a, b));
        };
        src_args.push(sp);
        tgt_args.push(tp);
        tys.push(ty);
    }
    let a_var = fresh_property_name(&annotated);
    let mut a_sym = Sym::new(&a_var, Ty::curried(tys, Ty::T));
    if annotated.coloured {
        let mut taken = annotated.source.colour_vars();
        taken.extend(annotated.target.colour_vars());
        let name = (1..)
            .map(|i| format!("_a{}", i))
            .find(|n| !taken.contains(n.as_str()))
            .expect("unbounded name supply");
        a_sym.colour = Some(Colour::var(&name));
    }
    let a = Term::Free(a_sym);
    let ssem = annotated.source.normalize();
    let tsem = annotated.target.normalize();
    let lhs_s = Term::apps(a.clone(), src_args).normalize();
    let lhs_t = Term::apps(a, tgt_args).normalize();
    for side in [&ssem, &tsem, &lhs_s, &lhs_t] {
        let ty = side.ty()?;
        if ty != Ty::T {
            return Err(Error::mismatch(print_plain(side), Ty::T, ty));
        }
    }
    Ok(EquationSystem {
        equations: vec![Equation::new(ssem, lhs_s), Equation::new(tsem, lhs_t)],
        a_var,
        annotated,
    })
}

fn param_at(body: &Term, path: &[Step], n: usize) -> Option<usize> {
    let (t, crossed) = body.at_path(path)?;
    match t {
        Term::Bound(k) if *k >= crossed && ((*k - crossed) as usize) < n => Some(n - 1 - (*k - crossed) as usize),
        _ => None,
    }
}

/// Labels a reading by what the value of the property variable puts at the
/// source's anaphoric positions: its parameters everywhere gives sloppy, the
/// original antecedents everywhere gives strict. Problems without tagged
/// source anaphors fall back on the values of the target anaphors.
pub fn classify_reading(witness: &ColouredSubstitution, annotated: &DiscourseProblem, a_var: &str) -> ReadingLabel {
    let Some(a) = witness.get(a_var) else {
        return ReadingLabel::Strict;
    };
    let n = annotated.parallels.len();
    let (_, body) = a.strip_abs();
    let paths = annotated.source.label_paths();

    for pair in &annotated.parallels {
        if let ParallelElement::Occurrence(l) = &pair.source {
            for path in paths.get(l).into_iter().flatten() {
                if param_at(body, path, n).is_none() {
                    return ReadingLabel::Mixed;
                }
            }
        }
    }

    let mut sloppy = 0;
    let mut strict = 0;
    let mut other = 0;
    for (label, tag) in &annotated.tags {
        if !matches!(tag, OccurrenceTag::Pronoun | OccurrenceTag::FullNp) {
            continue;
        }
        for path in paths.get(label).into_iter().flatten() {
            let original = annotated.source.at_path(path).map(|(t, _)| t);
            if param_at(body, path, n).is_some() {
                sloppy += 1;
            } else {
                match (body.at_path(path), original) {
                    (Some((t, _)), Some(o)) if colour_erased_equal(&t.strip_labels(), &o.strip_labels()) => strict += 1,
                    _ => other += 1,
                }
            }
        }
    }
    if sloppy + strict + other > 0 {
        return match (sloppy, strict, other) {
            (_, 0, 0) => ReadingLabel::Sloppy,
            (0, _, 0) => ReadingLabel::Strict,
            _ => ReadingLabel::Mixed,
        };
    }

    let sps: Vec<Term> = annotated.source_elements().unwrap_or_default();
    let tps: Vec<Term> = annotated.target_elements().unwrap_or_default();
    let matches_any = |v: &Term, set: &[Term]| {
        set.iter().any(|e| {
            colour_erased_equal(&v.strip_labels(), &e.strip_labels()) || colour_erased_equal(&v.strip_labels(), &type_raise(e).normalize().strip_labels())
        })
    };
    // a property anaphor can mention a parallel constant without equalling it
    let mentions = |v: &Term, set: &[Term]| {
        let names = v.constants();
        set.iter().any(|e| matches!(e.strip_labels(), Term::Const(c) if names.contains(&c.name)))
    };
    let (mut sl, mut st) = (0, 0);
    for an in &annotated.anaphors {
        if let Some(v) = witness.get(&an.name) {
            if matches_any(v, &tps) {
                sl += 1;
            } else if matches_any(v, &sps) {
                st += 1;
            } else {
                match (mentions(v, &tps), mentions(v, &sps)) {
                    (true, false) => sl += 1,
                    (false, true) => st += 1,
                    (true, true) => {
                        sl += 1;
                        st += 1;
                    }
                    _ => {}
                }
            }
        }
    }
    match (sl, st) {
        (0, _) => ReadingLabel::Strict,
        (_, 0) => ReadingLabel::Sloppy,
        _ => ReadingLabel::Mixed,
    }
}

fn mentions_any(t: &Term, names: &BTreeSet<Arc<str>>) -> Option<Arc<str>> {
    t.free_vars().into_iter().find(|v| names.contains(v))
}

/// Solves the parallelism equations of `p` and returns its readings.
pub fn solve_discourse(p: &DiscourseProblem, limits: &SearchLimits) -> std::result::Result<Resolution, SolveError> {
    solve_discourse_with(p, limits, &TableauLimits::default())
}

pub fn solve_discourse_with(p: &DiscourseProblem, limits: &SearchLimits, tableau: &TableauLimits) -> std::result::Result<Resolution, SolveError> {
    let sys = build_equations(p)?;
    let relational = p.relation != RelationMode::Identity;
    let opts = UnifyOptions {
        limits: limits.clone(),
        deferrable: if relational { [1].into_iter().collect() } else { BTreeSet::new() },
    };
    let res = unify_with(&sys.equations, &sys.annotated.signature, &opts)?;
    let mut watched: BTreeSet<Arc<str>> = p.anaphors.iter().map(|a| a.name.clone()).collect();
    watched.insert(sys.a_var.clone());

    let mut complete = res.complete;
    let mut solutions = Vec::new();
    let mut readings: Vec<Reading> = Vec::new();
    let mut seen = BTreeSet::new();
    let tsem = &sys.equations[1].lhs;
    for sol in res.solutions {
        for e in &sol.flex_flex {
            if let Some(v) = mentions_any(&e.lhs, &watched).or_else(|| mentions_any(&e.rhs, &watched)) {
                return Err(SolveError::Underdetermined { variable: v.to_string() });
            }
        }
        let mut witness = sol.subst.clone();
        let mut proof = None;
        if sol.deferred.contains(&1) {
            let lhs = apply(&sys.equations[1].rhs, &sol.subst)?;
            let rhs = apply(tsem, &sol.subst)?;
            let residual: BTreeMap<Arc<str>, Ty> = lhs.free_var_types().into_iter().chain(rhs.free_var_types()).collect();
            if residual.values().any(|ty| !ty.is_base() || *ty == Ty::T) {
                continue;
            }
            let pr = check_relation(&lhs, &rhs, p.relation, &p.axioms, tableau);
            match pr.status {
                ProofStatus::Proved => {}
                ProofStatus::ResourceOut => {
                    complete = false;
                    continue;
                }
                ProofStatus::Failed => continue,
            }
            for (v, ty) in &residual {
                let value = pr.resolve(&Term::free(v, ty.clone()));
                let unresolved = value.free_vars().into_iter().any(|w| !residual.contains_key(&w));
                if !unresolved && !matches!(&value, Term::Free(s) if s.name == *v) {
                    witness.bind(v, value);
                }
            }
            proof = Some(pr);
        }
        let target = apply(tsem, &witness)?;
        let label = classify_reading(&witness, &sys.annotated, &sys.a_var);
        // colours exist to rule out mixed readings; any left are dropped
        if p.coloured && label == ReadingLabel::Mixed {
            continue;
        }
        let a_value = witness.get(&sys.a_var).map(print_plain).unwrap_or_default();
        let key = (a_value, print_plain(&target));
        solutions.push(sol);
        if !seen.insert(key) {
            continue;
        }
        readings.push(Reading {
            label,
            target,
            witness,
            proof,
        });
    }
    if readings.is_empty() {
        return Err(SolveError::NoSolution { complete });
    }
    Ok(Resolution {
        problem: p.name.clone(),
        a_var: sys.a_var,
        equations: sys.equations,
        solutions,
        readings,
        complete,
    })
}
