use std::collections::BTreeSet;
use std::fmt;

use crate::term::{logic, Term};
use crate::types::Ty;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrintOptions {
    pub colours: bool,
}

impl Default for PrintOptions {
    fn default() -> Self {
        PrintOptions { colours: true }
    }
}

// Precedence levels, loosest first.
const BINDER: u8 = 0;
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const EQ: u8 = 4;
const NOT: u8 = 5;
const ATOM: u8 = 6;

const RESERVED: [&str; 11] = [
    "forall", "exists", "exists1", "and", "or", "not", "imp", "rimp", "eq", "e", "t",
];

struct Printer {
    opts: PrintOptions,
    taken: BTreeSet<String>,
    names: Vec<String>,
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Printer {
    fn fresh_name(&self, hint: &str) -> String {
        let base: String = if valid_ident(hint) && !RESERVED.contains(&hint) {
            hint.trim_end_matches(|c: char| c.is_ascii_digit()).to_string()
        } else {
            "x".to_string()
        };
        let base = if base.is_empty() || RESERVED.contains(&base.as_str()) { "x".to_string() } else { base };
        let clash = |n: &str| self.taken.contains(n) || self.names.iter().any(|m| m == n);
        if valid_ident(hint) && !RESERVED.contains(&hint) && !clash(hint) {
            return hint.to_string();
        }
        if !clash(&base) {
            return base;
        }
        (1..)
            .map(|i| format!("{}{}", base, i))
            .find(|n| !clash(n))
            .expect("unbounded name supply")
    }

    fn binder(&mut self, out: &mut String, hint: &str, ty: &Ty, body: &Term, quant: Option<&str>) {
        let name = self.fresh_name(hint);
        match quant {
            Some(q) => out.push_str(q),
            None => out.push('\\'),
        }
        if quant.is_some() {
            out.push(' ');
        }
        out.push_str(&name);
        out.push(':');
        out.push_str(&ty.to_string());
        out.push_str(". ");
        self.names.push(name);
        self.term(out, body, BINDER);
        self.names.pop();
    }

    fn wrap(&mut self, out: &mut String, level: u8, min: u8, f: impl FnOnce(&mut Self, &mut String)) {
        if level < min {
            out.push('(');
            f(self, out);
            out.push(')');
        } else {
            f(self, out);
        }
    }

    fn symbol(&self, out: &mut String, t: &Term) {
        let s = t.sym().expect("symbol");
        out.push_str(&s.name);
        if self.opts.colours {
            if let Some(c) = &s.colour {
                out.push('@');
                out.push_str(&c.to_string());
            }
            if let Some(l) = &s.label {
                out.push('^');
                out.push_str(l);
            }
        }
    }

    fn term(&mut self, out: &mut String, t: &Term, min: u8) {
        match t {
            Term::Const(_) | Term::Free(_) => self.symbol(out, t),
            Term::Bound(i) => {
                let name = self
                    .names
                    .len()
                    .checked_sub(*i as usize + 1)
                    .map(|k| self.names[k].clone())
                    .unwrap_or_else(|| format!("#{}", i));
                out.push_str(&name);
            }
            Term::Abs(b, body) => {
                self.wrap(out, BINDER, min, |p, out| p.binder(out, &b.hint, &b.ty, body, None));
            }
            Term::App(..) => self.app(out, t, min),
        }
    }

    fn infix(&mut self, out: &mut String, op: &str, level: u8, lhs_min: u8, rhs_min: u8, a: &Term, b: &Term, min: u8) {
        self.wrap(out, level, min, |p, out| {
            p.term(out, a, lhs_min);
            out.push(' ');
            out.push_str(op);
            out.push(' ');
            p.term(out, b, rhs_min);
        });
    }

    fn app(&mut self, out: &mut String, t: &Term, min: u8) {
        let (head, args) = t.spine();
        let logical = match head {
            Term::Const(s) if s.colour.is_none() || !self.opts.colours => Some(&*s.name),
            _ => None,
        };
        match (logical, args.as_slice()) {
            (Some(logic::IMP), [a, b]) => return self.infix(out, "=>", IMP, OR, IMP, a, b, min),
            (Some(logic::RIMP), [a, b]) => return self.infix(out, "<=", IMP, OR, IMP, a, b, min),
            (Some(logic::OR), [a, b]) => return self.infix(out, "|", OR, AND, OR, a, b, min),
            (Some(logic::AND), [a, b]) => return self.infix(out, "&", AND, EQ, AND, a, b, min),
            (Some(logic::EQ), [a, b]) => return self.infix(out, "=", EQ, NOT, NOT, a, b, min),
            (Some(logic::NOT), [a]) => {
                return self.wrap(out, NOT, min, |p, out| {
                    out.push('~');
                    p.term(out, a, NOT);
                })
            }
            (Some(q @ (logic::FORALL | logic::EXISTS)), [Term::Abs(b, body)]) => {
                return self.wrap(out, BINDER, min, |p, out| p.binder(out, &b.hint, &b.ty, body, Some(q)));
            }
            _ => {}
        }
        self.wrap(out, ATOM, min, |p, out| {
            p.term(out, head, ATOM);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                p.term(out, a, BINDER);
            }
            out.push(')');
        });
    }
}

/// Renders a term in the concrete syntax accepted by the parser.
pub fn print_term_with(t: &Term, opts: PrintOptions) -> String {
    let mut taken = BTreeSet::new();
    t.for_each_sym(&mut |_, s| {
        taken.insert(s.name.to_string());
    });
    let mut p = Printer {
        opts,
        taken,
        names: Vec::new(),
    };
    let mut out = String::new();
    p.term(&mut out, t, BINDER);
    out
}

pub fn print_term(t: &Term) -> String {
    print_term_with(t, PrintOptions::default())
}

/// Printed form without colour annotations or occurrence tags.
pub fn print_plain(t: &Term) -> String {
    print_term_with(t, PrintOptions { colours: false })
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}
