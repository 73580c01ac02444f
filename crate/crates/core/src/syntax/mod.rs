//! Concrete syntax: terms, types and problem files.

pub mod lexer;
pub(crate) mod parser;
pub mod printer;
pub mod problem;

pub use parser::{parse_term, parse_type};
pub use printer::{print_plain, print_term, print_term_with, PrintOptions};
pub use problem::{load_axioms, load_problem, parse_problem, DiscourseProblem, OccurrenceTag, RelationMode};
