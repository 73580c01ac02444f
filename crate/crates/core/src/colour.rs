//! Colours and the colour-constraint store used during unification.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Colour annotation on a constant or free-variable occurrence.
///
/// `P` marks primary occurrences, `S` secondary ones. Colour variables unify
/// with anything; the two constants only unify with themselves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Colour {
    P,
    S,
    Var(Arc<str>),
}

impl Colour {
    pub fn var(name: &str) -> Colour {
        Colour::Var(Arc::from(name))
    }

    pub fn is_const(&self) -> bool {
        !matches!(self, Colour::Var(_))
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colour::P => write!(f, "p"),
            Colour::S => write!(f, "s"),
            Colour::Var(v) => write!(f, "?{}", v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("colour clash: {0} vs {1}")]
pub struct ColourClash(pub Colour, pub Colour);

/// Union-find style store over colour variables.
///
/// Each bound variable points at another colour (variable or constant);
/// `find` follows the chain to the representative.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColourStore {
    links: BTreeMap<Arc<str>, Colour>,
}

impl ColourStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn find(&self, c: &Colour) -> Colour {
        let mut cur = c.clone();
        while let Colour::Var(v) = &cur {
            match self.links.get(v) {
                Some(next) => cur = next.clone(),
                None => break,
            }
        }
        cur
    }

    pub fn unify(&mut self, a: &Colour, b: &Colour) -> Result<(), ColourClash> {
        let ra = self.find(a);
        let rb = self.find(b);
        match (&ra, &rb) {
            _ if ra == rb => Ok(()),
            (Colour::Var(v), _) => {
                self.links.insert(v.clone(), rb);
                Ok(())
            }
            (_, Colour::Var(v)) => {
                self.links.insert(v.clone(), ra);
                Ok(())
            }
            _ => Err(ColourClash(ra, rb)),
        }
    }

    /// Unifies two optional annotations; an absent colour is unconstrained.
    pub fn unify_opt(&mut self, a: Option<&Colour>, b: Option<&Colour>) -> Result<(), ColourClash> {
        match (a, b) {
            (Some(a), Some(b)) => self.unify(a, b),
            _ => Ok(()),
        }
    }

    pub fn is_bound(&self, var: &str) -> bool {
        self.links.contains_key(var)
    }
}

/// Standalone colour unification against a store.
pub fn colour_unify(a: &Colour, b: &Colour, store: &ColourStore) -> Result<ColourStore, ColourClash> {
    let mut next = store.clone();
    next.unify(a, b)?;
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_constants_unify() {
        assert!(colour_unify(&Colour::P, &Colour::P, &ColourStore::new()).is_ok());
    }

    #[test]
    fn distinct_constants_clash() {
        let err = colour_unify(&Colour::P, &Colour::S, &ColourStore::new()).unwrap_err();
        assert_eq!(err, ColourClash(Colour::P, Colour::S));
    }

    #[test]
    fn variable_binding_is_transitive() {
        let a = Colour::var("A");
        let store = colour_unify(&a, &Colour::S, &ColourStore::new()).unwrap();
        assert_eq!(store.find(&a), Colour::S);
        assert!(colour_unify(&a, &Colour::P, &store).is_err());
    }

    #[test]
    fn variable_chains_resolve() {
        let mut store = ColourStore::new();
        store.unify(&Colour::var("A"), &Colour::var("B")).unwrap();
        store.unify(&Colour::var("B"), &Colour::var("C")).unwrap();
        store.unify(&Colour::var("C"), &Colour::P).unwrap();
        assert_eq!(store.find(&Colour::var("A")), Colour::P);
        assert!(store.unify(&Colour::var("A"), &Colour::S).is_err());
    }
}
