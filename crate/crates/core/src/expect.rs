//! Expected outcomes attached to problem files, and their checking.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::parallelism::{ReadingLabel, Resolution, SolveError};
use crate::syntax::parser::parse_term_at;
use crate::syntax::print_plain;
use crate::tableau::ProofStatus;
use crate::term::{colour_erased_equal, Signature, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    Readings(usize),
    Solutions(usize),
    Reading { label: ReadingLabel, target: Term },
    /// Some surviving solution binds the variable to this term (colours ignored).
    Binding { var: String, term: Term },
    /// The `binding` lines for this variable list all its values.
    ExactBindings(String),
    Proved,
    NoSolution,
    Underdetermined,
}

pub type Expectations = Vec<Expectation>;

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Readings(n) => write!(f, "readings {}", n),
            Expectation::Solutions(n) => write!(f, "solutions {}", n),
            Expectation::Reading { label, target } => write!(f, "reading {} {}", label, print_plain(target)),
            Expectation::Binding { var, term } => write!(f, "binding {} {}", var, print_plain(term)),
            Expectation::ExactBindings(v) => write!(f, "exact-bindings {}", v),
            Expectation::Proved => f.write_str("proved"),
            Expectation::NoSolution => f.write_str("no-solution"),
            Expectation::Underdetermined => f.write_str("underdetermined"),
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column: 1,
        message: message.into(),
    }
}

/// Parses `[expect]` lines. Each line is one of `readings N`, `solutions N`,
/// `reading strict|sloppy|mixed TERM`, `binding VAR TERM`,
/// `exact-bindings VAR`, `proved`, `no-solution`, `underdetermined`.
pub fn parse_expectations(lines: &[(usize, &str)], sig: &Signature) -> Result<Expectations> {
    let mut out = Vec::new();
    for &(n, line) in lines {
        let (word, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let offset = line.len() - rest.len();
        let count = |rest: &str| rest.parse::<usize>().map_err(|_| syntax(n, format!("expected a count, found `{}`", rest)));
        let term_at = |text: &str| {
            parse_term_at(text, n, sig).map_err(|e| match e {
                Error::Syntax { line, column, message } => Error::Syntax {
                    line,
                    column: column + offset,
                    message,
                },
                other => other,
            })
        };
        let exp = match word {
            "readings" => Expectation::Readings(count(rest)?),
            "solutions" => Expectation::Solutions(count(rest)?),
            "reading" => {
                let (label, term) = rest.split_once(char::is_whitespace).ok_or_else(|| syntax(n, "expected `reading LABEL TERM`"))?;
                let label = ReadingLabel::parse(label).ok_or_else(|| syntax(n, format!("unknown reading label `{}`", label)))?;
                Expectation::Reading {
                    label,
                    target: term_at(term.trim())?,
                }
            }
            "binding" => {
                let (var, term) = rest.split_once(char::is_whitespace).ok_or_else(|| syntax(n, "expected `binding VAR TERM`"))?;
                Expectation::Binding {
                    var: var.to_string(),
                    term: term_at(term.trim())?,
                }
            }
            "exact-bindings" if !rest.is_empty() => Expectation::ExactBindings(rest.to_string()),
            "proved" if rest.is_empty() => Expectation::Proved,
            "no-solution" if rest.is_empty() => Expectation::NoSolution,
            "underdetermined" if rest.is_empty() => Expectation::Underdetermined,
            _ => return Err(syntax(n, format!("unknown expectation `{}`", line))),
        };
        out.push(exp);
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdict {
    pub failures: Vec<String>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn bindings_of(res: &Resolution, var: &str) -> Vec<Term> {
    let name = if var == "A" { &*res.a_var } else { var };
    let mut out: Vec<Term> = Vec::new();
    let values = res
        .solutions
        .iter()
        .filter_map(|s| s.subst.get(name))
        .chain(res.readings.iter().filter_map(|r| r.witness.get(name)));
    for t in values {
        if !out.iter().any(|u| colour_erased_equal(u, t)) {
            out.push(t.clone());
        }
    }
    out
}

/// Checks `exps` against the outcome of solving a problem.
pub fn check(exps: &[Expectation], outcome: &std::result::Result<Resolution, SolveError>) -> Verdict {
    let mut failures = Vec::new();
    let mut fail = |e: &Expectation, why: String| failures.push(format!("{}: {}", e, why));
    for e in exps {
        let res = match (e, outcome) {
            (Expectation::NoSolution, Err(SolveError::NoSolution { .. })) => continue,
            (Expectation::Underdetermined, Err(SolveError::Underdetermined { .. })) => continue,
            (_, Err(err)) => {
                fail(e, err.to_string());
                continue;
            }
            (_, Ok(res)) => res,
        };
        match e {
            Expectation::Readings(n) => {
                if res.readings.len() != *n {
                    fail(e, format!("found {}", res.readings.len()));
                }
            }
            Expectation::Solutions(n) => {
                if res.solutions.len() != *n {
                    fail(e, format!("found {}", res.solutions.len()));
                }
            }
            Expectation::Reading { label, target } => {
                let hit = res
                    .readings
                    .iter()
                    .any(|r| r.label == *label && colour_erased_equal(&r.target, target));
                if !hit {
                    let found: Vec<String> = res
                        .readings
                        .iter()
                        .map(|r| format!("{} {}", r.label, print_plain(&r.target)))
                        .collect();
                    fail(e, format!("readings were [{}]", found.join("; ")));
                }
            }
            Expectation::Binding { var, term } => {
                if !bindings_of(res, var).iter().any(|t| colour_erased_equal(t, term)) {
                    fail(e, "no such binding".into());
                }
            }
            Expectation::ExactBindings(var) => {
                let expected: Vec<&Term> = exps
                    .iter()
                    .filter_map(|x| match x {
                        Expectation::Binding { var: v, term } if v == var => Some(term),
                        _ => None,
                    })
                    .collect();
                let found = bindings_of(res, var);
                let extra: BTreeSet<String> = found
                    .iter()
                    .filter(|t| !expected.iter().any(|u| colour_erased_equal(t, u)))
                    .map(print_plain)
                    .collect();
                if !extra.is_empty() {
                    fail(e, format!("unexpected values {:?}", extra));
                }
            }
            Expectation::Proved => {
                let ok = !res.readings.is_empty()
                    && res
                        .readings
                        .iter()
                        .all(|r| r.proof.as_ref().is_some_and(|p| p.status == ProofStatus::Proved));
                if !ok {
                    fail(e, "some reading lacks a proof".into());
                }
            }
            Expectation::NoSolution | Expectation::Underdetermined => {
                fail(e, format!("found {} readings", res.readings.len()));
            }
        }
    }
    Verdict { failures }
}
