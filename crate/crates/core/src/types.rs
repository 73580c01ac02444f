//! Simple types over the two base types `e` (entities) and `t` (truth values).

use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ty {
    E,
    T,
    Arrow(Arc<Ty>, Arc<Ty>),
}

impl Ty {
    pub fn arrow(from: Ty, to: Ty) -> Ty {
        Ty::Arrow(Arc::new(from), Arc::new(to))
    }

    /// Builds `a1 -> ... -> an -> result`.
    pub fn curried<I>(args: I, result: Ty) -> Ty
    where
        I: IntoIterator<Item = Ty>,
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter()
            .rev()
            .fold(result, |acc, arg| Ty::arrow(arg, acc))
    }

    pub fn is_base(&self) -> bool {
        !matches!(self, Ty::Arrow(..))
    }

    /// Splits `a1 -> ... -> an -> b` (with `b` a base type) into `([a1..an], b)`.
    pub fn split(&self) -> (Vec<Ty>, Ty) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Ty::Arrow(a, b) = cur {
            args.push((**a).clone());
            cur = b;
        }
        (args, cur.clone())
    }

    pub fn target(&self) -> &Ty {
        let mut cur = self;
        while let Ty::Arrow(_, b) = cur {
            cur = b;
        }
        cur
    }

    pub fn arity(&self) -> usize {
        let mut n = 0;
        let mut cur = self;
        while let Ty::Arrow(_, b) = cur {
            n += 1;
            cur = b;
        }
        n
    }

    /// Domain and codomain of an arrow type.
    pub fn as_arrow(&self) -> Option<(&Ty, &Ty)> {
        match self {
            Ty::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::E => write!(f, "e"),
            Ty::T => write!(f, "t"),
            Ty::Arrow(a, b) => {
                if a.is_base() {
                    write!(f, "{} -> {}", a, b)
                } else {
                    write!(f, "({}) -> {}", a, b)
                }
            }
        }
    }
}
