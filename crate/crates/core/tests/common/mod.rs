//! Shared helpers for the integration tests: a first-order model of small
//! unification problems with a brute-force solver, a random system generator,
//! and an independent checker for tableau traces.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::Arc;

use ellipsis_core::hocu::{unify, Equation, FlexFlexPolicy, SearchLimits, Solution};
use ellipsis_core::syntax::{load_problem, DiscourseProblem};
use ellipsis_core::tableau::{ProofResult, ProofStatus, ProofStep, Rule, SignedFormula};
use ellipsis_core::term::{alpha_equal, logic, Signature, Term};
use ellipsis_core::{Colour, ColouredSubstitution, Ty};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus(name: &str) -> DiscourseProblem {
    load_problem(&corpus_dir().join(format!("{}.prob", name))).expect("corpus problem loads")
}

pub fn corpus_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "prob").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names
}

// ---------------------------------------------------------------------------
// First-order model
//
// Every variable has type e^n -> e over the signature a, b : e, f : e -> e,
// g : e -> e -> e, so a value is a tree over those constants and the
// variable's parameters.

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fo {
    A,
    B,
    F(Box<Fo>),
    G(Box<Fo>, Box<Fo>),
    Arg(usize),
    Var(String, Vec<Fo>),
}

/// A value for a variable of arity `params`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Value {
    pub params: usize,
    pub body: Fo,
}

pub type Env = BTreeMap<String, Value>;

impl Fo {
    pub fn f(a: Fo) -> Fo {
        Fo::F(Box::new(a))
    }

    pub fn g(a: Fo, b: Fo) -> Fo {
        Fo::G(Box::new(a), Box::new(b))
    }

    pub fn size(&self) -> usize {
        match self {
            Fo::A | Fo::B | Fo::Arg(_) => 1,
            Fo::F(a) => 1 + a.size(),
            Fo::G(a, b) => 1 + a.size() + b.size(),
            Fo::Var(_, args) => 1 + args.iter().map(Fo::size).sum::<usize>(),
        }
    }

    fn replace_args(&self, args: &[Fo]) -> Fo {
        match self {
            Fo::Arg(i) => args[*i].clone(),
            Fo::A | Fo::B => self.clone(),
            Fo::F(a) => Fo::f(a.replace_args(args)),
            Fo::G(a, b) => Fo::g(a.replace_args(args), b.replace_args(args)),
            Fo::Var(v, xs) => Fo::Var(v.clone(), xs.iter().map(|x| x.replace_args(args)).collect()),
        }
    }

    /// Replaces every bound variable by its value, recursively.
    pub fn eval(&self, env: &Env) -> Fo {
        match self {
            Fo::A | Fo::B | Fo::Arg(_) => self.clone(),
            Fo::F(a) => Fo::f(a.eval(env)),
            Fo::G(a, b) => Fo::g(a.eval(env), b.eval(env)),
            Fo::Var(v, xs) => {
                let args: Vec<Fo> = xs.iter().map(|x| x.eval(env)).collect();
                match env.get(v) {
                    Some(val) => val.body.replace_args(&args).eval(env),
                    None => Fo::Var(v.clone(), args),
                }
            }
        }
    }

    pub fn vars(&self, out: &mut BTreeMap<String, usize>) {
        match self {
            Fo::A | Fo::B | Fo::Arg(_) => {}
            Fo::F(a) => a.vars(out),
            Fo::G(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Fo::Var(v, xs) => {
                out.insert(v.clone(), xs.len());
                xs.iter().for_each(|x| x.vars(out));
            }
        }
    }
}

/// All trees of at most `max` nodes over the constants and `params` parameters.
pub fn enumerate(params: usize, max: usize) -> Vec<Fo> {
    let mut by_size: Vec<Vec<Fo>> = vec![Vec::new(); max + 1];
    if max == 0 {
        return Vec::new();
    }
    by_size[1].push(Fo::A);
    by_size[1].push(Fo::B);
    by_size[1].extend((0..params).map(Fo::Arg));
    for n in 2..=max {
        let mut here: Vec<Fo> = by_size[n - 1].iter().map(|a| Fo::f(a.clone())).collect();
        for i in 1..n - 1 {
            let j = n - 1 - i;
            for a in &by_size[i] {
                for b in &by_size[j] {
                    here.push(Fo::g(a.clone(), b.clone()));
                }
            }
        }
        by_size[n] = here;
    }
    by_size.into_iter().flatten().collect()
}

/// Type of a variable of arity `n`.
pub fn var_ty(n: usize) -> Ty {
    Ty::curried(std::iter::repeat(Ty::E).take(n), Ty::E)
}

pub fn signature(vars: &BTreeMap<String, usize>) -> Signature {
    let mut sig = Signature::new();
    sig.declare_const("a", Ty::E).unwrap();
    sig.declare_const("b", Ty::E).unwrap();
    sig.declare_const("f", var_ty(1)).unwrap();
    sig.declare_const("g", var_ty(2)).unwrap();
    for (v, n) in vars {
        sig.declare_var(v, var_ty(*n)).unwrap();
    }
    sig
}

/// Colours for the library translation: one per constant symbol and one per
/// variable name.
#[derive(Clone, Debug, Default)]
pub struct Colouring {
    pub constants: BTreeMap<&'static str, Colour>,
    pub vars: BTreeMap<String, Colour>,
}

/// Translates a tree with `params` enclosing binders into a library term.
pub fn to_term(t: &Fo, params: usize, colours: &Colouring) -> Term {
    let c = |name: &'static str, n: usize| Term::constant(name, var_ty(n)).coloured(colours.constants.get(name).cloned());
    match t {
        Fo::A => c("a", 0),
        Fo::B => c("b", 0),
        Fo::F(a) => Term::app(c("f", 1), to_term(a, params, colours)),
        Fo::G(a, b) => Term::apps(c("g", 2), [to_term(a, params, colours), to_term(b, params, colours)]),
        Fo::Arg(i) => Term::Bound((params - 1 - i) as u32),
        Fo::Var(v, xs) => Term::apps(
            Term::free(v, var_ty(xs.len())).coloured(colours.vars.get(v).cloned()),
            xs.iter().map(|x| to_term(x, params, colours)),
        ),
    }
}

/// Reads a library value back, if it lies inside the first-order fragment.
pub fn from_term(t: &Term) -> Option<Value> {
    let (binders, body) = t.strip_abs();
    if binders.iter().any(|b| b.ty != Ty::E) {
        return None;
    }
    let params = binders.len();
    fn go(t: &Term, params: usize) -> Option<Fo> {
        let (head, args) = t.spine();
        let args: Option<Vec<Fo>> = args.into_iter().map(|a| go(a, params)).collect();
        let mut args = args?;
        match head {
            Term::Const(s) => match (&*s.name, args.len()) {
                ("a", 0) => Some(Fo::A),
                ("b", 0) => Some(Fo::B),
                ("f", 1) => Some(Fo::f(args.remove(0))),
                ("g", 2) => {
                    let b = args.remove(1);
                    Some(Fo::g(args.remove(0), b))
                }
                _ => None,
            },
            Term::Bound(k) if args.is_empty() && (*k as usize) < params => Some(Fo::Arg(params - 1 - *k as usize)),
            Term::Free(s) => Some(Fo::Var(s.name.to_string(), args)),
            _ => None,
        }
    }
    Some(Value {
        params,
        body: go(body, params)?,
    })
}

/// A system of equations between first-order trees of type e.
#[derive(Clone, Debug)]
pub struct System {
    pub equations: Vec<(Fo, Fo)>,
    pub colours: Colouring,
}

impl System {
    pub fn vars(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for (l, r) in &self.equations {
            l.vars(&mut out);
            r.vars(&mut out);
        }
        out
    }

    pub fn to_equations(&self) -> Vec<Equation> {
        self.equations
            .iter()
            .map(|(l, r)| Equation::new(to_term(l, 0, &self.colours), to_term(r, 0, &self.colours)))
            .collect()
    }

    pub fn holds(&self, env: &Env) -> bool {
        self.equations.iter().all(|(l, r)| l.eval(env) == r.eval(env))
    }

    pub fn solve(&self, limits: &SearchLimits) -> ellipsis_core::hocu::UnifyResult {
        unify(&self.to_equations(), &signature(&self.vars()), limits).expect("well-formed system")
    }
}

pub fn test_limits() -> SearchLimits {
    SearchLimits {
        max_depth: 6,
        max_solutions: 64,
        flex_flex: FlexFlexPolicy::Retain,
        max_steps: 3_000,
    }
}

fn random_tree(rng: &mut StdRng, vars: &[(&str, usize)], depth: usize) -> Fo {
    let leaf = depth == 0 || rng.gen_bool(0.35);
    if leaf {
        return match rng.gen_range(0..3) {
            0 => Fo::A,
            1 => Fo::B,
            _ => {
                let (v, n) = vars[rng.gen_range(0..vars.len())];
                if n == 0 {
                    Fo::Var(v.into(), Vec::new())
                } else {
                    Fo::A
                }
            }
        };
    }
    match rng.gen_range(0..4) {
        0 => Fo::f(random_tree(rng, vars, depth - 1)),
        1 => Fo::g(random_tree(rng, vars, depth - 1), random_tree(rng, vars, depth - 1)),
        _ => {
            let (v, n) = vars[rng.gen_range(0..vars.len())];
            Fo::Var(v.into(), (0..n).map(|_| random_tree(rng, vars, depth - 1)).collect())
        }
    }
}

fn random_value(rng: &mut StdRng, params: usize) -> Value {
    let pool = enumerate(params, 3);
    Value {
        params,
        body: pool[rng.gen_range(0..pool.len())].clone(),
    }
}

/// A random system over `F : e -> e` and, optionally, `X : e` and
/// `K : e -> e -> e`. Most systems are built to be solvable by fixing hidden
/// values and evaluating one side.
pub fn random_system(rng: &mut StdRng, allow_binary: bool) -> System {
    let mut vars: Vec<(&str, usize)> = vec![("F", 1)];
    if rng.gen_bool(0.5) {
        vars.push(("X", 0));
    }
    if allow_binary && rng.gen_bool(0.3) {
        vars.push(("K", 2));
    }
    let hidden: Env = vars
        .iter()
        .map(|(v, n)| (v.to_string(), random_value(rng, *n)))
        .collect();
    let count = rng.gen_range(1..=2);
    let mut equations = Vec::new();
    for _ in 0..count {
        let lhs = random_tree(rng, &vars, 3);
        let rhs = if rng.gen_bool(0.75) {
            lhs.eval(&hidden)
        } else {
            random_tree(rng, &vars, 2)
        };
        equations.push((lhs, rhs));
    }
    System {
        equations,
        colours: Colouring::default(),
    }
}

/// Colours every constant symbol and every variable at random.
pub fn random_colouring(rng: &mut StdRng, sys: &System) -> Colouring {
    let pick = |rng: &mut StdRng, name: &str| match rng.gen_range(0..4) {
        0 => Colour::P,
        1 => Colour::S,
        _ => Colour::var(&format!("c{}", name)),
    };
    let mut c = Colouring::default();
    for name in ["a", "b", "f", "g"] {
        let col = pick(rng, name);
        c.constants.insert(name, col);
    }
    for v in sys.vars().keys() {
        let col = pick(rng, v);
        c.vars.insert(v.clone(), col);
    }
    c
}

/// Ground solutions with every value of at most `max` nodes, by enumeration.
pub fn brute_force(sys: &System, max: usize) -> BTreeSet<Env> {
    let vars: Vec<(String, usize)> = sys.vars().into_iter().collect();
    let pools: Vec<Vec<Fo>> = vars.iter().map(|(_, n)| enumerate(*n, max)).collect();
    let mut out = BTreeSet::new();
    let mut env = Env::new();
    fn go(i: usize, vars: &[(String, usize)], pools: &[Vec<Fo>], env: &mut Env, sys: &System, out: &mut BTreeSet<Env>) {
        if i == vars.len() {
            if sys.holds(env) {
                out.insert(env.clone());
            }
            return;
        }
        for v in &pools[i] {
            env.insert(
                vars[i].0.clone(),
                Value {
                    params: vars[i].1,
                    body: v.clone(),
                },
            );
            go(i + 1, vars, pools, env, sys, out);
        }
        env.remove(&vars[i].0);
    }
    go(0, &vars, &pools, &mut env, sys, &mut out);
    out
}

/// A unifier solution in first-order form: values for the bound original
/// variables, the remaining flex-flex pairs, and the variables left open.
pub struct FoSolution {
    pub env: Env,
    pub flex_flex: Vec<(Value, Value)>,
    pub open: BTreeMap<String, usize>,
}

pub fn fo_solution(sys: &System, sol: &Solution) -> Option<FoSolution> {
    let originals = sys.vars();
    let mut env = Env::new();
    let mut open = BTreeMap::new();
    for (v, n) in &originals {
        match sol.subst.get(v) {
            Some(t) => {
                let val = from_term(t)?;
                val.body.vars(&mut open);
                env.insert(v.clone(), val);
            }
            None => {
                open.insert(v.clone(), *n);
            }
        }
    }
    let mut flex_flex = Vec::new();
    for e in &sol.flex_flex {
        let (l, r) = (from_term(&e.lhs)?, from_term(&e.rhs)?);
        l.body.vars(&mut open);
        r.body.vars(&mut open);
        flex_flex.push((l, r));
    }
    Some(FoSolution { env, flex_flex, open })
}

/// Ground instances (every value at most `max` nodes) of a unifier solution.
/// Returns `None` when the instance space is too large to walk.
pub fn instances(sys: &System, sol: &FoSolution, max: usize, budget: usize) -> Option<BTreeSet<Env>> {
    let open: Vec<(String, usize)> = sol.open.iter().map(|(k, v)| (k.clone(), *v)).collect();
    let pools: Vec<Vec<Fo>> = open.iter().map(|(_, n)| enumerate(*n, max)).collect();
    let total = pools.iter().try_fold(1usize, |acc, p| acc.checked_mul(p.len()))?;
    if total > budget {
        return None;
    }
    let originals = sys.vars();
    let mut out = BTreeSet::new();
    let mut theta = Env::new();
    fn go(
        i: usize,
        open: &[(String, usize)],
        pools: &[Vec<Fo>],
        theta: &mut Env,
        sol: &FoSolution,
        originals: &BTreeMap<String, usize>,
        max: usize,
        out: &mut BTreeSet<Env>,
    ) {
        if i == open.len() {
            let ff_ok = sol.flex_flex.iter().all(|(l, r)| l.body.eval(theta) == r.body.eval(theta));
            if !ff_ok {
                return;
            }
            let mut ground = Env::new();
            for (v, n) in originals {
                let val = match sol.env.get(v) {
                    Some(val) => Value {
                        params: val.params,
                        body: val.body.eval(theta),
                    },
                    None => theta[v].clone(),
                };
                if val.body.size() > max {
                    return;
                }
                debug_assert_eq!(val.params, *n);
                ground.insert(v.clone(), val);
            }
            out.insert(ground);
            return;
        }
        for v in &pools[i] {
            theta.insert(
                open[i].0.clone(),
                Value {
                    params: open[i].1,
                    body: v.clone(),
                },
            );
            go(i + 1, open, pools, theta, sol, originals, max, out);
        }
        theta.remove(&open[i].0);
    }
    go(0, &open, &pools, &mut theta, sol, &originals, max, &mut out);
    Some(out)
}

// ---------------------------------------------------------------------------
// Colour checks

/// Every coloured symbol of `t` carries exactly the constant colour `c` once
/// the solution's colour bindings are applied.
pub fn monochrome(t: &Term, c: &Colour, sub: &ColouredSubstitution) -> bool {
    let mut ok = true;
    t.for_each_sym(&mut |_, s| {
        if logic::is_builtin(&s.name) {
            return;
        }
        if let Some(col) = &s.colour {
            if sub.colour(col) != *c {
                ok = false;
            }
        }
    });
    ok
}

// ---------------------------------------------------------------------------
// Tableau trace checker

fn builtin_args<'a>(f: &'a Term, name: &str) -> Option<Vec<&'a Term>> {
    let (head, args) = f.spine();
    match head {
        Term::Const(s) if &*s.name == name => Some(args),
        _ => None,
    }
}

fn quantifier_body<'a>(f: &'a Term, name: &str) -> Option<&'a Term> {
    let args = builtin_args(f, name)?;
    match args.as_slice() {
        [Term::Abs(_, body)] => Some(body),
        _ => None,
    }
}

fn sf(positive: bool, t: &Term) -> (bool, Term) {
    (positive, t.clone())
}

/// Components of a propositional formula and whether it is conjunctive.
fn components(f: &SignedFormula) -> Option<(Vec<(bool, Term)>, bool)> {
    let pos = f.positive;
    let t = &f.formula;
    if let Some(a) = builtin_args(t, logic::NOT) {
        return Some((vec![sf(!pos, a[0])], true));
    }
    // (connective, polarity of the left part, of the right part, alpha when positive)
    let table = [
        (logic::AND, pos, pos, true),
        (logic::OR, pos, pos, false),
        (logic::IMP, !pos, pos, false),
        (logic::RIMP, pos, !pos, false),
    ];
    for (name, pa, pb, alpha_if_pos) in table {
        if let Some(args) = builtin_args(t, name) {
            if args.len() != 2 {
                return None;
            }
            return Some((vec![sf(pa, args[0]), sf(pb, args[1])], pos == alpha_if_pos));
        }
    }
    None
}

fn same(a: &(bool, Term), b: &SignedFormula) -> bool {
    a.0 == b.positive && alpha_equal(&a.1.normalize(), &b.formula.normalize())
}

fn resolve(t: &Term, subst: &BTreeMap<Arc<str>, Term>) -> Term {
    let mut cur = t.clone();
    for _ in 0..64 {
        let next = cur.map_syms(&mut |occ| match occ {
            Term::Free(s) => subst.get(&s.name).cloned().unwrap_or_else(|| occ.clone()),
            other => other.clone(),
        });
        if next == cur {
            return cur.normalize();
        }
        cur = next;
    }
    cur.normalize()
}

/// Replays a proof trace and checks every step against the rules. For proved
/// results it also checks that every leaf branch is closed by a complementary
/// pair under the final substitution.
pub fn check_trace(res: &ProofResult) -> Result<(), String> {
    let mut nodes: BTreeMap<usize, SignedFormula> = BTreeMap::new();
    let mut on_branch: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut split: BTreeSet<usize> = BTreeSet::new();
    let mut closed: BTreeSet<usize> = BTreeSet::new();
    let mut constants_seen: BTreeSet<Arc<str>> = BTreeSet::new();
    let note_constants = |f: &SignedFormula, seen: &mut BTreeSet<Arc<str>>| seen.extend(f.formula.constants());

    for (i, step) in res.trace.iter().enumerate() {
        let at = |msg: String| format!("step {}: {}", i, msg);
        match step {
            ProofStep::Root { nodes: roots } => {
                let set = on_branch.entry(0).or_default();
                for (id, f, _) in roots {
                    nodes.insert(*id, f.clone());
                    set.insert(*id);
                    note_constants(f, &mut constants_seen);
                }
            }
            ProofStep::Expand {
                branch,
                from,
                rule,
                added,
                witness,
            } => {
                let set = on_branch.get(branch).ok_or_else(|| at(format!("unknown branch {}", branch)))?;
                if split.contains(branch) || closed.contains(branch) {
                    return Err(at(format!("branch {} is no longer open", branch)));
                }
                if !set.contains(from) {
                    return Err(at(format!("node {} is not on branch {}", from, branch)));
                }
                let src = &nodes[from];
                let expected: Vec<(bool, Term)> = match rule {
                    Rule::Alpha => {
                        let (parts, alpha) = components(src).ok_or_else(|| at("alpha on a non-compound formula".into()))?;
                        if !alpha {
                            return Err(at("alpha rule on a beta formula".into()));
                        }
                        parts
                    }
                    Rule::Gamma | Rule::Delta => {
                        let w = witness.as_ref().ok_or_else(|| at("quantifier step without witness".into()))?;
                        let universal = (src.positive, quantifier_body(&src.formula, logic::FORALL).is_some());
                        let body = quantifier_body(&src.formula, logic::FORALL)
                            .or_else(|| quantifier_body(&src.formula, logic::EXISTS))
                            .ok_or_else(|| at("quantifier rule on a non-quantified formula".into()))?;
                        let is_gamma = universal.0 == universal.1;
                        if is_gamma != (*rule == Rule::Gamma) {
                            return Err(at("gamma and delta confused".into()));
                        }
                        if *rule == Rule::Gamma {
                            if !matches!(w, Term::Free(_)) {
                                return Err(at("gamma witness is not a variable".into()));
                            }
                        } else {
                            let (head, _) = w.spine();
                            let Term::Const(s) = head else {
                                return Err(at("skolem term has no constant head".into()));
                            };
                            if constants_seen.contains(&s.name) {
                                return Err(at(format!("skolem constant {} is not fresh", s.name)));
                            }
                        }
                        vec![(src.positive, body.instantiate(w))]
                    }
                };
                if expected.len() != added.len() || !expected.iter().zip(added).all(|(e, (_, f))| same(e, f)) {
                    return Err(at(format!("added formulas do not follow from node {}", from)));
                }
                let set = on_branch.get_mut(branch).unwrap();
                for (id, f) in added {
                    nodes.insert(*id, f.clone());
                    set.insert(*id);
                    note_constants(f, &mut constants_seen);
                }
            }
            ProofStep::Split { branch, from, left, right } => {
                let set = on_branch.get(branch).cloned().ok_or_else(|| at(format!("unknown branch {}", branch)))?;
                if split.contains(branch) || closed.contains(branch) {
                    return Err(at(format!("branch {} is no longer open", branch)));
                }
                if !set.contains(from) {
                    return Err(at(format!("node {} is not on branch {}", from, branch)));
                }
                let (parts, alpha) = components(&nodes[from]).ok_or_else(|| at("split of a non-compound formula".into()))?;
                if alpha {
                    return Err(at("split of an alpha formula".into()));
                }
                if !same(&parts[0], &left.2) || !same(&parts[1], &right.2) {
                    return Err(at(format!("split halves do not follow from node {}", from)));
                }
                split.insert(*branch);
                for (b, id, f) in [left, right] {
                    let mut s = set.clone();
                    s.insert(*id);
                    nodes.insert(*id, f.clone());
                    on_branch.insert(*b, s);
                }
            }
            ProofStep::Close { branch, pos, neg, .. } => {
                let set = on_branch.get(branch).ok_or_else(|| at(format!("unknown branch {}", branch)))?;
                if !set.contains(pos) || !set.contains(neg) {
                    return Err(at(format!("closing nodes are not on branch {}", branch)));
                }
                let (p, n) = (&nodes[pos], &nodes[neg]);
                let ok = if pos == neg {
                    !p.positive
                        && builtin_args(&p.formula, logic::EQ).is_some_and(|args| {
                            args.len() == 2 && alpha_equal(&resolve(args[0], &res.substitution), &resolve(args[1], &res.substitution))
                        })
                } else {
                    p.positive && !n.positive && alpha_equal(&resolve(&p.formula, &res.substitution), &resolve(&n.formula, &res.substitution))
                };
                if res.status == ProofStatus::Proved && !ok {
                    return Err(at(format!("branch {} is not closed under the final substitution", branch)));
                }
                closed.insert(*branch);
            }
        }
    }
    if res.status == ProofStatus::Proved {
        for b in on_branch.keys() {
            if !split.contains(b) && !closed.contains(b) {
                return Err(format!("branch {} is left open", b));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Random typed lambda terms

pub fn et() -> Ty {
    Ty::arrow(Ty::E, Ty::T)
}

/// Constants and free variables available to the generator. Binder hints
/// deliberately reuse these names to exercise renaming in the printer.
pub fn symbols() -> (Vec<(&'static str, Ty)>, Vec<(&'static str, Ty)>) {
    let consts = vec![
        ("a", Ty::E),
        ("b", Ty::E),
        ("f", Ty::arrow(Ty::E, Ty::E)),
        ("g", Ty::curried([Ty::E, Ty::E], Ty::E)),
        ("p", et()),
        ("r", Ty::curried([Ty::E, Ty::E], Ty::T)),
        ("q", Ty::arrow(et(), Ty::T)),
    ];
    let vars = vec![("X", Ty::E), ("F", Ty::arrow(Ty::E, Ty::E)), ("P", et())];
    (consts, vars)
}

pub fn term_signature() -> Signature {
    let (consts, vars) = symbols();
    let mut sig = Signature::new();
    for (c, ty) in consts {
        sig.declare_const(c, ty).unwrap();
    }
    for (v, ty) in vars {
        sig.declare_var(v, ty).unwrap();
    }
    sig
}

const HINTS: [&str; 5] = ["x", "y", "X", "a", "P"];

pub struct Gen {
    pub rng: StdRng,
    pub colours: bool,
}

impl Gen {
    pub fn colour(&mut self) -> Option<Colour> {
        if !self.colours {
            return None;
        }
        match self.rng.gen_range(0..4) {
            0 => Some(Colour::P),
            1 => Some(Colour::S),
            2 => Some(Colour::var("c")),
            _ => None,
        }
    }

    pub fn atom(&mut self, ty: &Ty, ctx: &[Ty]) -> Option<Term> {
        let (consts, vars) = symbols();
        let mut options: Vec<Term> = Vec::new();
        for (i, t) in ctx.iter().rev().enumerate() {
            if t == ty {
                options.push(Term::Bound(i as u32));
            }
        }
        for (c, t) in consts {
            if &t == ty {
                let col = self.colour();
                options.push(Term::constant(c, t).coloured(col));
            }
        }
        for (v, t) in vars {
            if &t == ty {
                let col = self.colour();
                options.push(Term::free(v, t).coloured(col));
            }
        }
        if options.is_empty() {
            return None;
        }
        let i = self.rng.gen_range(0..options.len());
        Some(options.swap_remove(i))
    }

    pub fn term(&mut self, ty: &Ty, ctx: &mut Vec<Ty>, depth: usize) -> Term {
        if depth == 0 || self.rng.gen_bool(0.25) {
            if let Some(t) = self.atom(ty, ctx) {
                return t;
            }
        }
        let depth = depth.saturating_sub(1);
        if let Some((from, to)) = ty.as_arrow() {
            if self.rng.gen_bool(0.7) || depth == 0 {
                let hint = HINTS[self.rng.gen_range(0..HINTS.len())];
                ctx.push(from.clone());
                let body = self.term(to, ctx, depth);
                ctx.pop();
                return Term::abs(hint, from.clone(), body);
            }
        }
        if *ty == Ty::T {
            match self.rng.gen_range(0..6) {
                0 => return Term::and(self.term(&Ty::T, ctx, depth), self.term(&Ty::T, ctx, depth)),
                1 => return Term::not(self.term(&Ty::T, ctx, depth)),
                2 => {
                    let hint = HINTS[self.rng.gen_range(0..HINTS.len())];
                    ctx.push(Ty::E);
                    let body = self.term(&Ty::T, ctx, depth);
                    ctx.pop();
                    return Term::forall(hint, Ty::E, body);
                }
                _ => {}
            }
        }
        // an application, possibly a beta-redex
        let arg_ty = if self.rng.gen_bool(0.7) { Ty::E } else { et() };
        let fun_ty = Ty::arrow(arg_ty.clone(), ty.clone());
        let fun = if self.rng.gen_bool(0.4) {
            let hint = HINTS[self.rng.gen_range(0..HINTS.len())];
            ctx.push(arg_ty.clone());
            let body = self.term(ty, ctx, depth);
            ctx.pop();
            Term::abs(hint, arg_ty.clone(), body)
        } else {
            match self.atom(&fun_ty, ctx) {
                Some(f) => f,
                None => return self.atom(ty, ctx).unwrap_or_else(|| self.term(ty, ctx, 0)),
            }
        };
        let arg = self.term(&arg_ty, ctx, depth);
        Term::app(fun, arg)
    }
}

pub fn random_term(seed: u64, colours: bool) -> (Term, Ty) {
    let mut g = Gen {
        rng: StdRng::seed_from_u64(seed),
        colours,
    };
    let tys = [Ty::E, Ty::T, et(), Ty::arrow(Ty::E, Ty::E)];
    let ty = tys[g.rng.gen_range(0..tys.len())].clone();
    let t = g.term(&ty, &mut Vec::new(), 5);
    (t, ty)
}

// ---------------------------------------------------------------------------
// Propositional formulas with a truth-table oracle

pub const ATOMS: [&str; 3] = ["a", "b", "c"];

#[derive(Clone, Debug)]
pub enum Prop {
    Atom(usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Imp(Box<Prop>, Box<Prop>),
    Rimp(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn random(rng: &mut StdRng, depth: usize) -> Prop {
        if depth == 0 || rng.gen_bool(0.3) {
            return Prop::Atom(rng.gen_range(0..ATOMS.len()));
        }
        let kind = rng.gen_range(0..5);
        let a = Box::new(Prop::random(rng, depth - 1));
        if kind == 0 {
            return Prop::Not(a);
        }
        let b = Box::new(Prop::random(rng, depth - 1));
        match kind {
            1 => Prop::And(a, b),
            2 => Prop::Or(a, b),
            3 => Prop::Imp(a, b),
            _ => Prop::Rimp(a, b),
        }
    }

    pub fn eval(&self, v: u8) -> bool {
        match self {
            Prop::Atom(i) => v & (1 << i) != 0,
            Prop::Not(a) => !a.eval(v),
            Prop::And(a, b) => a.eval(v) && b.eval(v),
            Prop::Or(a, b) => a.eval(v) || b.eval(v),
            Prop::Imp(a, b) => !a.eval(v) || b.eval(v),
            Prop::Rimp(a, b) => a.eval(v) || !b.eval(v),
        }
    }

    pub fn valid(&self) -> bool {
        (0..8).all(|v| self.eval(v))
    }

    pub fn term(&self) -> Term {
        match self {
            Prop::Atom(i) => Term::constant(ATOMS[*i], Ty::T),
            Prop::Not(a) => Term::not(a.term()),
            Prop::And(a, b) => Term::and(a.term(), b.term()),
            Prop::Or(a, b) => Term::or(a.term(), b.term()),
            Prop::Imp(a, b) => Term::imp(a.term(), b.term()),
            Prop::Rimp(a, b) => Term::rimp(a.term(), b.term()),
        }
    }
}
