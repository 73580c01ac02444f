//! Reader for discourse problem files.
//!
//! A problem file is a sequence of bracketed sections:
//!
//! ```text
//! [signature]
//! const j, p : e
//! const l : e -> e -> t
//! var R : e -> t
//! [source]
//! l(j^sp, wife_of(j^his))
//! [target]
//! R(p^tp)
//! [parallel]
//! ^sp ~ ^tp
//! [anaphors]
//! R @s
//! [colours]
//! his pronoun
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::parser::{parse_term_at, Parser};
use crate::colour::Colour;
use crate::error::{Error, Result};
use crate::expect::{parse_expectations, Expectations};
use crate::term::{Signature, SymKind, Term};
use crate::types::Ty;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OccurrenceTag {
    Primary,
    Pronoun,
    FullNp,
}

impl OccurrenceTag {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "primary" => Some(OccurrenceTag::Primary),
            "pronoun" => Some(OccurrenceTag::Pronoun),
            "fullnp" => Some(OccurrenceTag::FullNp),
            _ => None,
        }
    }
}

impl fmt::Display for OccurrenceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OccurrenceTag::Primary => "primary",
            OccurrenceTag::Pronoun => "pronoun",
            OccurrenceTag::FullNp => "fullnp",
        })
    }
}

/// Logical relation required between source and target when syntactic
/// identity fails on a variable-free residue.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RelationMode {
    #[default]
    Identity,
    Entail,
    CommonGen,
}

impl RelationMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "identity" => Some(RelationMode::Identity),
            "entail" | "entailment" => Some(RelationMode::Entail),
            "common-gen" | "common-generalization" => Some(RelationMode::CommonGen),
            _ => None,
        }
    }
}

impl fmt::Display for RelationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationMode::Identity => "identity",
            RelationMode::Entail => "entail",
            RelationMode::CommonGen => "common-gen",
        })
    }
}

/// One side of a parallel pair: a tagged occurrence or an explicit term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParallelElement {
    Occurrence(Arc<str>),
    Term(Term),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelPair {
    pub source: ParallelElement,
    pub target: ParallelElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Anaphor {
    pub name: Arc<str>,
    pub colour: Colour,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscourseProblem {
    pub name: String,
    pub signature: Signature,
    pub source: Term,
    pub target: Term,
    pub parallels: Vec<ParallelPair>,
    pub anaphors: Vec<Anaphor>,
    /// Tag per occurrence label. Labels used in `[parallel]` default to primary.
    pub tags: BTreeMap<Arc<str>, OccurrenceTag>,
    pub axioms: Vec<Term>,
    pub relation: RelationMode,
    /// When false, annotation leaves every symbol uncoloured.
    pub coloured: bool,
    pub expect: Option<Expectations>,
    pub expect_no_colours: Option<Expectations>,
}

impl DiscourseProblem {
    fn element(&self, e: &ParallelElement, in_source: bool) -> Result<Term> {
        match e {
            ParallelElement::Term(t) => Ok(t.clone()),
            ParallelElement::Occurrence(label) => {
                let side = if in_source { &self.source } else { &self.target };
                let paths = side.label_paths();
                let path = paths
                    .get(label)
                    .and_then(|ps| ps.first())
                    .ok_or_else(|| Error::DanglingOccurrenceTag(label.to_string()))?;
                let (occ, _) = side.at_path(path).expect("label path is valid");
                Ok(occ.clone())
            }
        }
    }

    /// Source parallel elements, as they occur (colours included).
    pub fn source_elements(&self) -> Result<Vec<Term>> {
        self.parallels.iter().map(|p| self.element(&p.source, true)).collect()
    }

    pub fn target_elements(&self) -> Result<Vec<Term>> {
        self.parallels.iter().map(|p| self.element(&p.target, false)).collect()
    }

    pub fn anaphor(&self, name: &str) -> Option<&Anaphor> {
        self.anaphors.iter().find(|a| &*a.name == name)
    }

    /// Expectations that apply to the current colouring mode.
    pub fn expectations(&self) -> Option<&Expectations> {
        if self.coloured {
            self.expect.as_ref()
        } else {
            self.expect_no_colours.as_ref()
        }
    }

    /// The same problem with colouring switched off.
    pub fn without_colours(&self) -> DiscourseProblem {
        DiscourseProblem {
            coloured: false,
            ..self.clone()
        }
    }
}

/// Type-raises `t : e` to `\P:e->t. P(t)`.
pub fn type_raise(t: &Term) -> Term {
    let prop = Ty::arrow(Ty::E, Ty::T);
    Term::abs("P", prop, Term::app(Term::Bound(0), t.shift(1, 0)))
}

/// Whether `ty` is the type of a generalized quantifier, `(e -> t) -> t`.
pub fn is_quantifier_type(ty: &Ty) -> bool {
    *ty == Ty::arrow(Ty::arrow(Ty::E, Ty::T), Ty::T)
}

struct Section<'a> {
    name: String,
    header_line: usize,
    lines: Vec<(usize, &'a str)>,
}

impl Section<'_> {
    fn text(&self) -> (String, usize) {
        let first = self.lines.first().map(|(n, _)| *n).unwrap_or(self.header_line + 1);
        let text: Vec<&str> = self.lines.iter().map(|(_, l)| *l).collect();
        (text.join("\n"), first)
    }

    /// Non-blank lines with comments removed.
    fn content(&self) -> Vec<(usize, &str)> {
        self.lines
            .iter()
            .map(|(n, l)| (*n, strip_comment(l).trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect()
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

const SECTIONS: [&str; 10] = [
    "signature",
    "source",
    "target",
    "parallel",
    "anaphors",
    "colours",
    "axioms",
    "relation",
    "expect",
    "expect no-colours",
];

fn split_sections(text: &str) -> Result<Vec<Section<'_>>> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = strip_comment(raw).trim();
        if trimmed.starts_with('[') {
            let Some(inner) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) else {
                return Err(syntax(line_no, 1, "malformed section header"));
            };
            let name = inner.split_whitespace().collect::<Vec<_>>().join(" ");
            if !SECTIONS.contains(&name.as_str()) {
                return Err(syntax(line_no, 1, format!("unknown section [{}]", name)));
            }
            if sections.iter().any(|s| s.name == name) {
                return Err(syntax(line_no, 1, format!("duplicate section [{}]", name)));
            }
            sections.push(Section {
                name,
                header_line: line_no,
                lines: Vec::new(),
            });
            continue;
        }
        match sections.last_mut() {
            Some(s) => s.lines.push((line_no, raw)),
            None if trimmed.is_empty() => {}
            None => return Err(syntax(line_no, 1, "content before the first section header")),
        }
    }
    Ok(sections)
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn parse_signature(section: &Section) -> Result<Signature> {
    let mut sig = Signature::new();
    for (n, line) in section.content() {
        let (kind, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let kind = match kind {
            "const" => SymKind::Const,
            "var" => SymKind::Var,
            other => return Err(syntax(n, 1, format!("expected `const` or `var`, found `{}`", other))),
        };
        let Some((names, ty_text)) = rest.split_once(':') else {
            return Err(syntax(n, 1, "expected `NAME, ... : TYPE`"));
        };
        let empty = Signature::new();
        let mut p = Parser::new(ty_text, n, &empty)?;
        let ty = p.ty()?;
        p.expect_end()?;
        for name in names.split(',').map(str::trim) {
            let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
            if !valid {
                return Err(syntax(n, 1, format!("invalid symbol name `{}`", name)));
            }
            match kind {
                SymKind::Const => sig.declare_const(name, ty.clone())?,
                SymKind::Var => sig.declare_var(name, ty.clone())?,
            }
        }
    }
    Ok(sig)
}

fn parse_elements(p: &mut Parser) -> Result<Vec<ParallelElement>> {
    let mut out = Vec::new();
    loop {
        if p.eat_caret() {
            out.push(ParallelElement::Occurrence(Arc::from(p.label()?.as_str())));
        } else {
            let t = p.term()?;
            t.ty()?;
            out.push(ParallelElement::Term(t.normalize()));
        }
        if !p.eat_comma() {
            return Ok(out);
        }
    }
}

fn parse_parallel(section: &Section, sig: &Signature) -> Result<Vec<ParallelPair>> {
    let mut sources = Vec::new();
    let mut targets = Vec::new();
    for (n, line) in section.content() {
        let mut p = Parser::new(line, n, sig)?;
        let src = parse_elements(&mut p)?;
        if !p.eat_tilde() {
            return p.error("expected `~` between source and target elements");
        }
        let tgt = parse_elements(&mut p)?;
        p.expect_end()?;
        sources.extend(src);
        targets.extend(tgt);
    }
    if sources.len() != targets.len() {
        return Err(Error::ArityMismatch {
            source_len: sources.len(),
            target_len: targets.len(),
        });
    }
    if sources.is_empty() {
        return Err(Error::Invalid("at least one parallel pair is required".into()));
    }
    Ok(sources
        .into_iter()
        .zip(targets)
        .map(|(source, target)| ParallelPair { source, target })
        .collect())
}

fn parse_anaphors(section: &Section, sig: &Signature) -> Result<Vec<Anaphor>> {
    let mut out: Vec<Anaphor> = Vec::new();
    for (n, line) in section.content() {
        let (name, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let colour = match rest.trim() {
            "" | "@s" => Colour::S,
            "@p" => Colour::P,
            c => match c.strip_prefix("@?") {
                Some(v) if !v.is_empty() => Colour::var(v),
                _ => return Err(syntax(n, name.len() + 2, format!("invalid anaphor colour `{}`", c))),
            },
        };
        match sig.lookup(name) {
            Some((SymKind::Var, _)) => {}
            Some(_) => return Err(Error::Invalid(format!("anaphor `{}` is a constant, not a variable", name))),
            None => return Err(Error::UndeclaredSymbol(name.to_string())),
        }
        if out.iter().any(|a| &*a.name == name) {
            return Err(Error::Invalid(format!("anaphor `{}` declared twice", name)));
        }
        out.push(Anaphor {
            name: Arc::from(name),
            colour,
        });
    }
    Ok(out)
}

fn parse_axiom_lines(lines: &[(usize, &str)], sig: &Signature, base: Option<&Path>, depth: usize, out: &mut Vec<Term>) -> Result<()> {
    for &(n, line) in lines {
        if let Some(file) = line.strip_prefix("include ") {
            if depth > 8 {
                return Err(Error::Invalid("axiom includes nested too deeply".into()));
            }
            let path: PathBuf = match base {
                Some(dir) => dir.join(file.trim()),
                None => PathBuf::from(file.trim()),
            };
            out.extend(load_axioms_nested(&path, sig, depth + 1)?);
            continue;
        }
        let t = parse_term_at(line, n, sig)?;
        check_axiom(&t, sig)?;
        out.push(t);
    }
    Ok(())
}

fn check_axiom(t: &Term, sig: &Signature) -> Result<()> {
    let ty = crate::term::type_of(t, sig)?;
    if ty != Ty::T {
        return Err(Error::mismatch(t, Ty::T, ty));
    }
    if let Some(v) = t.free_vars().into_iter().next() {
        return Err(Error::Invalid(format!("axiom mentions free variable `{}`", v)));
    }
    Ok(())
}

fn load_axioms_nested(path: &Path, sig: &Signature, depth: usize) -> Result<Vec<Term>> {
    let text = read(path)?;
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let mut out = Vec::new();
    parse_axiom_lines(&lines, sig, path.parent(), depth, &mut out).map_err(|e| in_file(path, e))?;
    Ok(out)
}

/// Reads an axiom file: one closed formula of type `t` per line.
pub fn load_axioms(path: &Path, sig: &Signature) -> Result<Vec<Term>> {
    load_axioms_nested(path, sig, 0)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Io { .. } => e,
        other => Error::Io {
            path: path.display().to_string(),
            message: other.to_string(),
        },
    }
}

/// Parses problem text. `base` resolves `include` lines in `[axioms]`.
pub fn parse_problem(text: &str, name: &str, base: Option<&Path>) -> Result<DiscourseProblem> {
    let sections = split_sections(text)?;
    let get = |n: &str| sections.iter().find(|s| s.name == n);
    let require = |n: &str| get(n).ok_or_else(|| Error::MissingSection(n.to_string()));

    let sig = parse_signature(require("signature")?)?;
    let term_section = |n: &str| -> Result<Term> {
        let s = require(n)?;
        let (text, first) = s.text();
        if s.content().is_empty() {
            return Err(syntax(s.header_line, 1, format!("section [{}] is empty", n)));
        }
        let t = parse_term_at(&text, first, &sig)?;
        let ty = crate::term::type_of(&t, &sig)?;
        if ty != Ty::T {
            return Err(Error::mismatch(format!("[{}]", n), Ty::T, ty));
        }
        Ok(t)
    };
    let source = term_section("source")?;
    let target = term_section("target")?;
    let parallels = parse_parallel(require("parallel")?, &sig)?;
    let anaphors = match get("anaphors") {
        Some(s) => parse_anaphors(s, &sig)?,
        None => Vec::new(),
    };

    let mut tags: BTreeMap<Arc<str>, OccurrenceTag> = BTreeMap::new();
    if let Some(s) = get("colours") {
        for (n, line) in s.content() {
            let mut words = line.split_whitespace();
            let (Some(label), Some(tag), None) = (words.next(), words.next(), words.next()) else {
                return Err(syntax(n, 1, "expected `LABEL primary|pronoun|fullnp`"));
            };
            let label = label.trim_start_matches('^');
            let Some(tag) = OccurrenceTag::parse(tag) else {
                return Err(syntax(n, label.len() + 2, format!("unknown tag `{}`", tag)));
            };
            if let Some(prev) = tags.insert(Arc::from(label), tag) {
                if prev != tag {
                    return Err(Error::ConflictingTags {
                        label: label.to_string(),
                        first: prev.to_string(),
                        second: tag.to_string(),
                    });
                }
            }
        }
    }
    let mut labels: BTreeSet<Arc<str>> = source.label_paths().into_keys().collect();
    labels.extend(target.label_paths().into_keys());
    for label in tags.keys() {
        if !labels.contains(label) {
            return Err(Error::DanglingOccurrenceTag(label.to_string()));
        }
    }
    for pair in &parallels {
        for e in [&pair.source, &pair.target] {
            if let ParallelElement::Occurrence(label) = e {
                match tags.get(label) {
                    Some(OccurrenceTag::Primary) | None => {
                        tags.insert(label.clone(), OccurrenceTag::Primary);
                    }
                    Some(other) => {
                        return Err(Error::ConflictingTags {
                            label: label.to_string(),
                            first: OccurrenceTag::Primary.to_string(),
                            second: other.to_string(),
                        })
                    }
                }
            }
        }
    }

    let mut axioms = Vec::new();
    if let Some(s) = get("axioms") {
        parse_axiom_lines(&s.content(), &sig, base, 0, &mut axioms)?;
    }
    let relation = match get("relation") {
        None => RelationMode::Identity,
        Some(s) => match s.content().as_slice() {
            [(n, line)] => RelationMode::parse(line).ok_or_else(|| syntax(*n, 1, format!("unknown relation `{}`", line)))?,
            _ => return Err(syntax(s.header_line, 1, "[relation] takes exactly one line")),
        },
    };
    let expect = get("expect").map(|s| parse_expectations(&s.content(), &sig)).transpose()?;
    let expect_no_colours = get("expect no-colours")
        .map(|s| parse_expectations(&s.content(), &sig))
        .transpose()?;

    let problem = DiscourseProblem {
        name: name.to_string(),
        signature: sig,
        source,
        target,
        parallels,
        anaphors,
        tags,
        axioms,
        relation,
        coloured: true,
        expect,
        expect_no_colours,
    };
    validate(&problem)?;
    Ok(problem)
}

fn validate(p: &DiscourseProblem) -> Result<()> {
    let sps = p.source_elements()?;
    let tps = p.target_elements()?;
    for (sp, tp) in sps.iter().zip(&tps) {
        let (a, b) = (sp.ty()?, tp.ty()?);
        let raisable = (a == Ty::E && is_quantifier_type(&b)) || (b == Ty::E && is_quantifier_type(&a));
        if a != b && !raisable {
            return Err(Error::mismatch(format!("parallel pair {} ~ {}", sp, tp), a, b));
        }
        for e in [sp, tp] {
            if e.has_loose_bound() {
                return Err(Error::Invalid(format!("parallel element {} is not closed", e)));
            }
        }
    }
    let mut free = p.source.free_vars();
    free.extend(p.target.free_vars());
    for a in &p.anaphors {
        if !free.contains(&a.name) {
            return Err(Error::Invalid(format!(
                "anaphor `{}` does not occur in the source or target",
                a.name
            )));
        }
    }
    Ok(())
}

/// Loads and validates a problem file.
pub fn load_problem(path: &Path) -> Result<DiscourseProblem> {
    let text = read(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    parse_problem(&text, &name, path.parent())
}
