//! Coloured substitutions: a term part for free variables and a colour part
//! for colour variables.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::colour::Colour;
use crate::error::{Error, Result};
use crate::term::Term;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ColouredSubstitution {
    pub terms: BTreeMap<Arc<str>, Term>,
    pub colours: BTreeMap<Arc<str>, Colour>,
}

impl ColouredSubstitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.colours.is_empty()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.terms.get(var)
    }

    pub fn bind(&mut self, var: &str, term: Term) {
        self.terms.insert(Arc::from(var), term);
    }

    pub fn bind_colour(&mut self, var: &str, colour: Colour) {
        self.colours.insert(Arc::from(var), colour);
    }

    /// Follows the colour part until reaching a constant or an unbound variable.
    pub fn colour(&self, c: &Colour) -> Colour {
        let mut cur = c.clone();
        let mut steps = 0;
        while let Colour::Var(v) = &cur {
            match self.colours.get(v) {
                Some(next) if steps <= self.colours.len() => {
                    cur = next.clone();
                    steps += 1;
                }
                _ => break,
            }
        }
        cur
    }

    /// Colour part applied to the annotations of a term.
    pub fn apply_colours(&self, t: &Term) -> Term {
        if self.colours.is_empty() {
            return t.clone();
        }
        t.map_colours(&mut |c| c.map(|c| self.colour(c)))
    }

    /// Restriction to the given variables (term part only).
    pub fn restrict<'a, I: IntoIterator<Item = &'a str>>(&self, vars: I) -> ColouredSubstitution {
        let mut out = ColouredSubstitution {
            terms: BTreeMap::new(),
            colours: self.colours.clone(),
        };
        for v in vars {
            if let Some(t) = self.terms.get(v) {
                out.terms.insert(Arc::from(v), t.clone());
            }
        }
        out
    }

    pub fn erase_colours(&self) -> ColouredSubstitution {
        ColouredSubstitution {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.erase_colours())).collect(),
            colours: BTreeMap::new(),
        }
    }
}

impl fmt::Display for ColouredSubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (v, t) in &self.terms {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{} <- {}", v, t)?;
        }
        for (v, c) in &self.colours {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "?{} <- {}", v, c)?;
        }
        write!(f, "}}")
    }
}

/// Simultaneous substitution of the term part, followed by the colour part.
///
/// Range terms must be closed with respect to bound variables. Because bound
/// variables are nameless, a free variable of a range term can never be
/// captured by a binder of `t`; the printer renames binders where needed.
/// The result is not normalized.
pub fn substitute(t: &Term, sub: &ColouredSubstitution) -> Result<Term> {
    for (var, range) in &sub.terms {
        if range.has_loose_bound() {
            return Err(Error::Invalid(format!("binding for `{}` has loose bound variables", var)));
        }
    }
    let mut err = None;
    let replaced = t.map_syms(&mut |occ| match occ {
        Term::Free(s) => match sub.terms.get(&s.name) {
            Some(range) => {
                match range.ty() {
                    Ok(ty) if ty == s.ty => {}
                    Ok(ty) => {
                        err.get_or_insert(Error::mismatch(&*s.name, &s.ty, ty));
                    }
                    Err(e) => {
                        err.get_or_insert(e);
                    }
                }
                range.clone()
            }
            None => occ.clone(),
        },
        other => other.clone(),
    });
    match err {
        Some(e) => Err(e),
        None => Ok(sub.apply_colours(&replaced)),
    }
}

/// Substitutes and normalizes.
pub fn apply(t: &Term, sub: &ColouredSubstitution) -> Result<Term> {
    Ok(substitute(t, sub)?.normalize())
}
