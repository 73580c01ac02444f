//! Free-variable analytic tableau prover.
//!
//! Proves a goal from axioms by refutation: the root holds the axioms and the
//! negated goal. Branches close when a positive and a negative literal unify
//! under the global substitution. Closure choices are backtracking points,
//! so a binding made to close one branch can be revised when a later branch
//! cannot be closed under it.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::syntax::problem::RelationMode;
use crate::syntax::print_term;
use crate::term::{logic, Sym, Term};
use crate::types::Ty;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableauLimits {
    /// Total expansion and closure steps, backtracking included.
    pub max_nodes: usize,
    /// Instances of each universal formula per branch.
    pub gamma_limit: usize,
}

impl Default for TableauLimits {
    fn default() -> Self {
        TableauLimits {
            max_nodes: 5000,
            gamma_limit: 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProofStatus {
    Proved,
    Failed,
    ResourceOut,
}

impl fmt::Display for ProofStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProofStatus::Proved => "proved",
            ProofStatus::Failed => "failed",
            ProofStatus::ResourceOut => "resource-out",
        })
    }
}

/// A formula asserted (`positive`) or denied on a branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedFormula {
    pub positive: bool,
    pub formula: Term,
}

impl SignedFormula {
    pub fn new(positive: bool, formula: Term) -> Self {
        SignedFormula { positive, formula }
    }
}

impl fmt::Display for SignedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", print_term(&self.formula))
        } else {
            write!(f, "~({})", print_term(&self.formula))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Axiom,
    Goal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Conjunctive decomposition, double negation included.
    Alpha,
    /// Universal instantiation with a fresh free variable.
    Gamma,
    /// Existential instantiation with a skolem term.
    Delta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofStep {
    Root {
        nodes: Vec<(usize, SignedFormula, Origin)>,
    },
    Expand {
        branch: usize,
        from: usize,
        rule: Rule,
        added: Vec<(usize, SignedFormula)>,
        /// Instantiation term for gamma and delta steps.
        witness: Option<Term>,
    },
    Split {
        branch: usize,
        from: usize,
        left: (usize, usize, SignedFormula),
        right: (usize, usize, SignedFormula),
    },
    /// `pos` and `neg` are node ids; they coincide for a denied reflexive
    /// equation.
    Close {
        branch: usize,
        pos: usize,
        neg: usize,
        bindings: Vec<(Arc<str>, Term)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofResult {
    pub status: ProofStatus,
    /// Triangular substitution: bound values may mention other bound variables.
    pub substitution: BTreeMap<Arc<str>, Term>,
    pub trace: Vec<ProofStep>,
}

impl ProofResult {
    /// Bindings made by each closure, in trace order.
    pub fn closures(&self) -> Vec<(usize, Vec<(Arc<str>, Term)>)> {
        self.trace
            .iter()
            .filter_map(|s| match s {
                ProofStep::Close { branch, bindings, .. } => Some((*branch, bindings.clone())),
                _ => None,
            })
            .collect()
    }

    /// Fully applies the substitution to `t`.
    pub fn resolve(&self, t: &Term) -> Term {
        resolve(t, &self.substitution).normalize()
    }

    /// Numbered-line rendering of the trace, one indentation level per split.
    pub fn render_trace(&self) -> String {
        let mut numbers: BTreeMap<usize, usize> = BTreeMap::new();
        let mut depth: BTreeMap<usize, usize> = BTreeMap::new();
        depth.insert(0, 0);
        let mut out = String::new();
        let line = |numbers: &mut BTreeMap<usize, usize>, out: &mut String, indent: usize, id: usize, f: &SignedFormula, note: String| {
            let n = numbers.len() + 1;
            numbers.insert(id, n);
            out.push_str(&format!("{}({}) {}   [{}]\n", "  ".repeat(indent), n, f, note));
        };
        // the right half of a split is shown when its branch is first worked on
        let mut pending: BTreeMap<usize, (usize, &SignedFormula, usize)> = BTreeMap::new();
        let open = |branch: usize,
                    pending: &mut BTreeMap<usize, (usize, &SignedFormula, usize)>,
                    numbers: &mut BTreeMap<usize, usize>,
                    out: &mut String,
                    depth: &BTreeMap<usize, usize>| {
            if let Some((id, f, src)) = pending.remove(&branch) {
                let indent = depth.get(&branch).copied().unwrap_or(0);
                out.push_str(&format!("{}branch {}:\n", "  ".repeat(indent), branch));
                line(numbers, out, indent, id, f, format!("from {}", src));
            }
        };
        for step in &self.trace {
            let branch = match step {
                ProofStep::Root { .. } => None,
                ProofStep::Expand { branch, .. } | ProofStep::Split { branch, .. } | ProofStep::Close { branch, .. } => Some(*branch),
            };
            if let Some(b) = branch {
                open(b, &mut pending, &mut numbers, &mut out, &depth);
            }
            match step {
                ProofStep::Root { nodes } => {
                    for (id, f, origin) in nodes {
                        let note = match origin {
                            Origin::Axiom => "axiom",
                            Origin::Goal => "negated goal",
                        };
                        line(&mut numbers, &mut out, 0, *id, f, note.into());
                    }
                }
                ProofStep::Expand {
                    branch,
                    from,
                    rule,
                    added,
                    witness,
                } => {
                    let indent = depth.get(branch).copied().unwrap_or(0);
                    let src = numbers.get(from).copied().unwrap_or(0);
                    for (id, f) in added {
                        let note = match (rule, witness) {
                            (Rule::Alpha, _) => format!("from {}", src),
                            (Rule::Gamma, Some(w)) => format!("from {} with {}", src, print_term(w)),
                            (Rule::Delta, Some(w)) => format!("from {} with skolem {}", src, print_term(w)),
                            (_, None) => format!("from {}", src),
                        };
                        line(&mut numbers, &mut out, indent, *id, f, note);
                    }
                }
                ProofStep::Split { branch, from, left, right } => {
                    let indent = depth.get(branch).copied().unwrap_or(0);
                    let src = numbers.get(from).copied().unwrap_or(0);
                    out.push_str(&format!("{}split {} into branches {} and {}\n", "  ".repeat(indent), src, left.0, right.0));
                    depth.insert(left.0, indent + 1);
                    depth.insert(right.0, indent + 1);
                    out.push_str(&format!("{}branch {}:\n", "  ".repeat(indent + 1), left.0));
                    line(&mut numbers, &mut out, indent + 1, left.1, &left.2, format!("from {}", src));
                    pending.insert(right.0, (right.1, &right.2, src));
                }
                ProofStep::Close { branch, pos, neg, bindings } => {
                    let indent = depth.get(branch).copied().unwrap_or(0);
                    let b: Vec<String> = bindings.iter().map(|(v, t)| format!("{} <- {}", v, print_term(t))).collect();
                    out.push_str(&format!(
                        "{}* branch {} closed by {} and {} with {{{}}}\n",
                        "  ".repeat(indent),
                        branch,
                        numbers.get(pos).copied().unwrap_or(0),
                        numbers.get(neg).copied().unwrap_or(0),
                        b.join(", ")
                    ));
                }
            }
        }
        let rest: Vec<usize> = pending.keys().copied().collect();
        for b in rest {
            open(b, &mut pending, &mut numbers, &mut out, &depth);
        }
        out.push_str(&format!("status: {}\n", self.status));
        out
    }
}

/// Applies a triangular substitution exhaustively (no normalization).
pub fn resolve(t: &Term, subst: &BTreeMap<Arc<str>, Term>) -> Term {
    t.map_syms(&mut |occ| match occ {
        Term::Free(s) => match subst.get(&s.name) {
            Some(v) => resolve(v, subst),
            None => occ.clone(),
        },
        other => other.clone(),
    })
}

#[derive(Clone, Debug)]
struct Node {
    id: usize,
    sf: SignedFormula,
    goal: bool,
}

#[derive(Clone, Debug)]
struct Lit {
    id: usize,
    positive: bool,
    atom: Term,
}

#[derive(Clone, Debug)]
struct Branch {
    id: usize,
    todo: VecDeque<Node>,
    lits: Vec<Lit>,
    /// Literals whose pairings have all been tried.
    checked: usize,
    betas: Vec<Node>,
    gammas: Vec<(Node, usize)>,
}

enum Kind {
    Atom,
    Alpha(Vec<SignedFormula>),
    Beta(SignedFormula, SignedFormula),
    Gamma(Ty, Term),
    Delta(Ty, Term),
}

fn classify(sf: &SignedFormula) -> Kind {
    let (head, args) = sf.formula.spine();
    let name = match head {
        Term::Const(s) if logic::is_builtin(&s.name) => &*s.name,
        _ => return Kind::Atom,
    };
    let p = sf.positive;
    let s = |pos: bool, t: &Term| SignedFormula::new(pos, t.clone());
    match (name, args.as_slice(), p) {
        (logic::NOT, [a], _) => Kind::Alpha(vec![s(!p, a)]),
        (logic::AND, [a, b], true) => Kind::Alpha(vec![s(true, a), s(true, b)]),
        (logic::AND, [a, b], false) => Kind::Beta(s(false, a), s(false, b)),
        (logic::OR, [a, b], true) => Kind::Beta(s(true, a), s(true, b)),
        (logic::OR, [a, b], false) => Kind::Alpha(vec![s(false, a), s(false, b)]),
        (logic::IMP, [a, b], true) => Kind::Beta(s(false, a), s(true, b)),
        (logic::IMP, [a, b], false) => Kind::Alpha(vec![s(true, a), s(false, b)]),
        // a <= b is a | ~b
        (logic::RIMP, [a, b], true) => Kind::Beta(s(true, a), s(false, b)),
        (logic::RIMP, [a, b], false) => Kind::Alpha(vec![s(false, a), s(true, b)]),
        (logic::FORALL | logic::EXISTS, [Term::Abs(bd, body)], _) => {
            let universal = (name == logic::FORALL) == p;
            if universal {
                Kind::Gamma(bd.ty.clone(), (**body).clone())
            } else {
                Kind::Delta(bd.ty.clone(), (**body).clone())
            }
        }
        _ => Kind::Atom,
    }
}

fn walk<'a>(mut t: &'a Term, subst: &'a BTreeMap<Arc<str>, Term>) -> &'a Term {
    while let Term::Free(s) = t {
        match subst.get(&s.name) {
            Some(v) => t = v,
            None => break,
        }
    }
    t
}

fn occurs(var: &str, t: &Term, subst: &BTreeMap<Arc<str>, Term>) -> bool {
    let mut found = false;
    t.for_each_sym(&mut |occ, s| {
        if found || !matches!(occ, Term::Free(_)) {
            return;
        }
        if &*s.name == var {
            found = true;
        } else if let Some(v) = subst.get(&s.name) {
            found = occurs(var, v, subst);
        }
    });
    found
}

struct Prover<'a> {
    limits: &'a TableauLimits,
    /// Predicates a relation variable may be instantiated to.
    relation_preds: BTreeSet<Arc<str>>,
    used_names: BTreeSet<Arc<str>>,
    var_prefix: String,
    sk_prefix: String,
    next_var: usize,
    next_sk: usize,
    next_node: usize,
    next_branch: usize,
    steps: usize,
    exhausted: bool,
    /// Instances allowed per universal formula in the current round.
    gamma_limit: usize,
    /// Whether some branch stopped only because of `gamma_limit`.
    gamma_blocked: bool,
    trace: Vec<ProofStep>,
}

impl Prover<'_> {
    fn node(&mut self, sf: SignedFormula, goal: bool) -> Node {
        self.next_node += 1;
        Node {
            id: self.next_node,
            sf,
            goal,
        }
    }

    fn tick(&mut self) -> bool {
        self.steps += 1;
        if self.steps > self.limits.max_nodes {
            self.exhausted = true;
        }
        !self.exhausted
    }

    fn unify(&self, a: &Term, b: &Term, subst: &mut BTreeMap<Arc<str>, Term>, added: &mut Vec<(Arc<str>, Term)>) -> bool {
        let a = walk(a, subst).clone();
        let b = walk(b, subst).clone();
        match (&a, &b) {
            (Term::Free(x), Term::Free(y)) if x.name == y.name => true,
            (Term::Free(x), t) | (t, Term::Free(x)) => {
                if x.ty != t.ty().unwrap_or_else(|_| x.ty.clone()) || t.has_loose_bound() || occurs(&x.name, t, subst) {
                    return false;
                }
                if x.ty == Ty::T {
                    // a relation variable stands for an atom over an axiom predicate
                    let ok = matches!(t.spine().0, Term::Const(h) if !logic::is_builtin(&h.name) && self.relation_preds.contains(&h.name));
                    if !ok {
                        return false;
                    }
                }
                subst.insert(x.name.clone(), t.clone());
                added.push((x.name.clone(), t.clone()));
                true
            }
            (Term::Const(x), Term::Const(y)) => x.name == y.name && x.ty == y.ty,
            (Term::Bound(i), Term::Bound(j)) => i == j,
            (Term::App(f1, a1), Term::App(f2, a2)) => self.unify(f1, f2, subst, added) && self.unify(a1, a2, subst, added),
            (Term::Abs(b1, t1), Term::Abs(b2, t2)) => b1.ty == b2.ty && self.unify(t1, t2, subst, added),
            _ => false,
        }
    }

    fn fresh_var(&mut self, ty: Ty) -> Term {
        loop {
            self.next_var += 1;
            let name = format!("{}{}", self.var_prefix, self.next_var);
            if !self.used_names.contains(name.as_str()) {
                return Term::free(&name, ty);
            }
        }
    }

    fn skolem(&mut self, ty: Ty, formula: &Term) -> Term {
        let args: Vec<(Arc<str>, Ty)> = formula.free_var_types().into_iter().collect();
        let name = loop {
            self.next_sk += 1;
            let name = format!("{}{}", self.sk_prefix, self.next_sk);
            if !self.used_names.contains(name.as_str()) {
                break name;
            }
        };
        let sk_ty = Ty::curried(args.iter().map(|(_, t)| t.clone()), ty);
        Term::apps(
            Term::constant(&name, sk_ty),
            args.into_iter().map(|(n, t)| Term::free(&n, t)),
        )
    }

    /// Expands non-branching formulas until only literals, betas and gammas
    /// remain in the branch.
    fn saturate(&mut self, br: &mut Branch) -> bool {
        while let Some(n) = br.todo.pop_front() {
            if !self.tick() {
                return false;
            }
            match classify(&n.sf) {
                Kind::Atom => br.lits.push(Lit {
                    id: n.id,
                    positive: n.sf.positive,
                    atom: n.sf.formula.clone(),
                }),
                Kind::Alpha(parts) => {
                    let nodes: Vec<Node> = parts.into_iter().map(|sf| self.node(sf, n.goal)).collect();
                    self.trace.push(ProofStep::Expand {
                        branch: br.id,
                        from: n.id,
                        rule: Rule::Alpha,
                        added: nodes.iter().map(|m| (m.id, m.sf.clone())).collect(),
                        witness: None,
                    });
                    for m in nodes.into_iter().rev() {
                        br.todo.push_front(m);
                    }
                }
                Kind::Delta(ty, body) => {
                    let sk = self.skolem(ty, &n.sf.formula);
                    let inst = SignedFormula::new(n.sf.positive, body.instantiate(&sk).normalize());
                    let m = self.node(inst, n.goal);
                    self.trace.push(ProofStep::Expand {
                        branch: br.id,
                        from: n.id,
                        rule: Rule::Delta,
                        added: vec![(m.id, m.sf.clone())],
                        witness: Some(sk),
                    });
                    br.todo.push_front(m);
                }
                Kind::Beta(..) => br.betas.push(n),
                Kind::Gamma(..) => br.gammas.push((n, 0)),
            }
        }
        true
    }

    fn instantiate_gamma(&mut self, br: &mut Branch, k: usize) {
        br.gammas[k].1 += 1;
        let n = br.gammas[k].0.clone();
        let Kind::Gamma(ty, body) = classify(&n.sf) else {
            unreachable!("gamma formula")
        };
        let v = self.fresh_var(ty);
        let inst = SignedFormula::new(n.sf.positive, body.instantiate(&v).normalize());
        let m = self.node(inst, n.goal);
        self.trace.push(ProofStep::Expand {
            branch: br.id,
            from: n.id,
            rule: Rule::Gamma,
            added: vec![(m.id, m.sf.clone())],
            witness: Some(v),
        });
        br.todo.push_back(m);
    }

    fn solve(&mut self, mut open: Vec<Branch>, subst: BTreeMap<Arc<str>, Term>) -> Option<BTreeMap<Arc<str>, Term>> {
        let Some(mut br) = open.pop() else {
            return Some(subst);
        };
        let mark = self.trace.len();
        loop {
            if !self.saturate(&mut br) {
                break;
            }
            // closure attempts on pairs involving a new literal
            let lits = br.lits.clone();
            for j in br.checked..lits.len() {
                for i in 0..=j {
                    let (a, b) = (&lits[i], &lits[j]);
                    let candidate = if i == j {
                        match (a.positive, a.atom.spine()) {
                            (false, (Term::Const(h), args)) if &*h.name == logic::EQ && args.len() == 2 => Some((a.id, a.id, args[0].clone(), args[1].clone())),
                            _ => None,
                        }
                    } else if a.positive != b.positive {
                        let (p, n) = if a.positive { (a, b) } else { (b, a) };
                        Some((p.id, n.id, p.atom.clone(), n.atom.clone()))
                    } else {
                        None
                    };
                    let Some((pos, neg, l, r)) = candidate else { continue };
                    if !self.tick() {
                        self.trace.truncate(mark);
                        return None;
                    }
                    let mut s2 = subst.clone();
                    let mut added = Vec::new();
                    if !self.unify(&l, &r, &mut s2, &mut added) {
                        continue;
                    }
                    let ground = added.is_empty();
                    let before = self.trace.len();
                    self.trace.push(ProofStep::Close {
                        branch: br.id,
                        pos,
                        neg,
                        bindings: added,
                    });
                    if let Some(done) = self.solve(open.clone(), s2) {
                        return Some(done);
                    }
                    self.trace.truncate(before);
                    if ground || self.exhausted {
                        self.trace.truncate(mark);
                        return None;
                    }
                }
            }
            br.checked = lits.len();

            if let Some(k) = br.gammas.iter().position(|(_, uses)| *uses == 0) {
                self.instantiate_gamma(&mut br, k);
                continue;
            }
            if !br.betas.is_empty() {
                let k = br.betas.iter().position(|n| n.goal).unwrap_or(0);
                let n = br.betas.remove(k);
                let Kind::Beta(l, r) = classify(&n.sf) else {
                    unreachable!("beta formula")
                };
                let (lid, rid) = (self.next_branch + 1, self.next_branch + 2);
                self.next_branch += 2;
                let (ln, rn) = (self.node(l, n.goal), self.node(r, n.goal));
                self.trace.push(ProofStep::Split {
                    branch: br.id,
                    from: n.id,
                    left: (lid, ln.id, ln.sf.clone()),
                    right: (rid, rn.id, rn.sf.clone()),
                });
                let mut right = br.clone();
                right.id = rid;
                right.todo.push_back(rn);
                br.id = lid;
                br.todo.push_back(ln);
                open.push(right);
                continue;
            }
            let next = br
                .gammas
                .iter()
                .enumerate()
                .filter(|(_, (_, uses))| *uses < self.gamma_limit)
                .min_by_key(|(_, (_, uses))| *uses)
                .map(|(k, _)| k);
            match next {
                Some(k) => {
                    if !self.tick() {
                        break;
                    }
                    self.instantiate_gamma(&mut br, k);
                }
                None => {
                    if !br.gammas.is_empty() {
                        self.gamma_blocked = true;
                    }
                    break;
                }
            }
        }
        self.trace.truncate(mark);
        None
    }
}

fn prepare(t: &Term) -> Term {
    t.erase_colours().strip_labels().normalize()
}

/// Attempts to refute the axioms together with the negated goal.
pub fn prove(axioms: &[Term], goal: &Term, limits: &TableauLimits) -> ProofResult {
    let axioms: Vec<Term> = axioms.iter().map(prepare).collect();
    let goal = prepare(goal);
    let mut used = BTreeSet::new();
    let mut preds = BTreeSet::new();
    for a in &axioms {
        a.for_each_sym(&mut |occ, s| {
            used.insert(s.name.clone());
            if matches!(occ, Term::Const(_)) && s.ty.target() == &Ty::T && !logic::is_builtin(&s.name) {
                preds.insert(s.name.clone());
            }
        });
    }
    goal.for_each_sym(&mut |_, s| {
        used.insert(s.name.clone());
    });
    // Rounds of increasing gamma limit keep early wrong closures cheap.
    let mut steps = 0;
    let mut last = None;
    for gamma_limit in 1..=limits.gamma_limit.max(1) {
        let mut prover = Prover {
            limits,
            relation_preds: preds.clone(),
            used_names: used.clone(),
            var_prefix: "v".into(),
            sk_prefix: "sk".into(),
            next_var: 0,
            next_sk: 0,
            next_node: 0,
            next_branch: 0,
            steps,
            exhausted: false,
            gamma_limit,
            gamma_blocked: false,
            trace: Vec::new(),
        };
        let result = prover.run(&axioms, &goal);
        steps = prover.steps;
        let retry = result.status == ProofStatus::Failed && prover.gamma_blocked;
        last = Some(result);
        if !retry {
            break;
        }
    }
    last.expect("at least one round")
}

impl Prover<'_> {
    fn run(&mut self, axioms: &[Term], goal: &Term) -> ProofResult {
        let mut root = Branch {
            id: 0,
            todo: VecDeque::new(),
            lits: Vec::new(),
            checked: 0,
            betas: Vec::new(),
            gammas: Vec::new(),
        };
        let mut nodes = Vec::new();
        for a in axioms {
            let n = self.node(SignedFormula::new(true, a.clone()), false);
            nodes.push((n.id, n.sf.clone(), Origin::Axiom));
            root.todo.push_back(n);
        }
        let n = self.node(SignedFormula::new(false, goal.clone()), true);
        nodes.push((n.id, n.sf.clone(), Origin::Goal));
        root.todo.push_back(n);
        self.trace.push(ProofStep::Root { nodes });

        let outcome = self.solve(vec![root], BTreeMap::new());
        let (status, substitution) = match outcome {
            Some(s) => (ProofStatus::Proved, s),
            None if self.exhausted => (ProofStatus::ResourceOut, BTreeMap::new()),
            None if self.gamma_blocked && self.gamma_limit >= self.limits.gamma_limit => (ProofStatus::ResourceOut, BTreeMap::new()),
            None => (ProofStatus::Failed, BTreeMap::new()),
        };
        let mut trace = std::mem::take(&mut self.trace);
        if status != ProofStatus::Proved {
            trace.truncate(1);
        }
        ProofResult {
            status,
            substitution,
            trace,
        }
    }
}

/// Name of the relation variable in common-generalization goals.
pub fn relation_variable(lhs: &Term, rhs: &Term) -> Arc<str> {
    let mut taken = lhs.free_vars();
    taken.extend(rhs.free_vars());
    taken.extend(lhs.constants());
    taken.extend(rhs.constants());
    let name = std::iter::once("Y".to_string())
        .chain((1..).map(|i| format!("Y{}", i)))
        .find(|n| !taken.contains(n.as_str()))
        .expect("unbounded name supply");
    Arc::from(name.as_str())
}

/// `\exists x1..xn. (body => y)` for `\exists x1..xn. body`.
fn generalize(t: &Term, y: &Term) -> Term {
    match t.spine() {
        (Term::Const(h), args) if &*h.name == logic::EXISTS && args.len() == 1 => {
            if let Term::Abs(b, body) = args[0] {
                return Term::exists(&b.hint, b.ty.clone(), generalize(body, &y.shift(1, 0)));
            }
            Term::imp(t.clone(), y.clone())
        }
        _ => Term::imp(t.clone(), y.clone()),
    }
}

/// The formula whose proof establishes `mode` between `lhs` and `rhs`.
pub fn relation_goal(lhs: &Term, rhs: &Term, mode: RelationMode) -> Term {
    match mode {
        RelationMode::Identity => Term::eq(lhs.clone(), rhs.clone(), Ty::T),
        RelationMode::Entail => Term::imp(lhs.clone(), rhs.clone()),
        RelationMode::CommonGen => {
            let y = Term::Free(Sym::new(&relation_variable(lhs, rhs), Ty::T));
            Term::and(generalize(lhs, &y), generalize(rhs, &y))
        }
    }
}

pub fn check_relation(lhs: &Term, rhs: &Term, mode: RelationMode, axioms: &[Term], limits: &TableauLimits) -> ProofResult {
    prove(axioms, &relation_goal(lhs, rhs, mode), limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;
    use crate::term::Signature;

    fn sig() -> Signature {
        let mut sig = Signature::new();
        for c in ["a", "b"] {
            sig.declare_const(c, Ty::T).unwrap();
        }
        for c in ["j", "m", "p"] {
            sig.declare_const(c, Ty::E).unwrap();
        }
        for c in ["cr", "ins", "ar", "col", "nasty"] {
            sig.declare_const(c, Ty::curried([Ty::E, Ty::E], Ty::T)).unwrap();
        }
        sig.declare_const("po", Ty::arrow(Ty::E, Ty::T)).unwrap();
        sig.declare_var("y", Ty::E).unwrap();
        sig
    }

    fn t(s: &str) -> Term {
        parse_term(s, &sig()).unwrap()
    }

    #[test]
    fn tautology_is_proved() {
        let r = prove(&[], &t("a => a"), &TableauLimits::default());
        assert_eq!(r.status, ProofStatus::Proved);
        assert_eq!(r.closures().len(), 1);
    }

    #[test]
    fn distinct_atoms_fail() {
        let r = prove(&[], &t("a => b"), &TableauLimits::default());
        assert_eq!(r.status, ProofStatus::Failed);
    }

    #[test]
    fn entailment_binds_the_free_pronoun() {
        let axioms = [t("forall x. forall z. cr(x, z) => ins(x, z)")];
        let r = check_relation(&t("cr(p, m)"), &t("ins(p, y)"), RelationMode::Entail, &axioms, &TableauLimits::default());
        assert_eq!(r.status, ProofStatus::Proved);
        assert_eq!(r.resolve(&t("y")), t("m"));
    }

    #[test]
    fn common_generalization_of_arrest_and_collar() {
        let axioms = [
            t("forall x. forall z. ar(x, z) => nasty(x, z)"),
            t("forall x. forall z. col(x, z) => nasty(x, z)"),
        ];
        let lhs = t("exists x. po(x) & ar(x, p)");
        let rhs = t("exists x. po(x) & col(x, p)");
        let r = check_relation(&lhs, &rhs, RelationMode::CommonGen, &axioms, &TableauLimits::default());
        assert_eq!(r.status, ProofStatus::Proved, "{}", r.render_trace());
        let y = r.substitution.get("Y").expect("Y bound");
        assert_eq!(y.head_const(), Some("nasty"));
        let resolved = r.resolve(y);
        assert_eq!(resolved.spine().1[1], &t("p"));
    }

    #[test]
    fn relation_variable_only_takes_axiom_atoms() {
        // po occurs in no axiom, so Y cannot become po(...)
        let lhs = t("po(j)");
        let rhs = t("po(m)");
        let r = check_relation(&lhs, &rhs, RelationMode::CommonGen, &[], &TableauLimits::default());
        assert_eq!(r.status, ProofStatus::Failed);
    }

    #[test]
    fn tiny_budget_is_resource_out() {
        let axioms = [t("forall x. forall z. cr(x, z) => ins(x, z)")];
        let limits = TableauLimits {
            max_nodes: 3,
            gamma_limit: 2,
        };
        let r = check_relation(&t("cr(p, m)"), &t("ins(p, y)"), RelationMode::Entail, &axioms, &limits);
        assert_eq!(r.status, ProofStatus::ResourceOut);
    }

    #[test]
    fn trace_renders_numbered_lines() {
        let r = prove(&[t("a")], &t("a | b"), &TableauLimits::default());
        let text = r.render_trace();
        assert!(text.starts_with("(1) a   [axiom]"), "{}", text);
        assert!(text.contains("closed by"));
    }
}
