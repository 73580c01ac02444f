mod common;

use std::time::{Duration, Instant};

use common::*;
use ellipsis_core::expect::check;
use ellipsis_core::hocu::SearchLimits;
use ellipsis_core::parallelism::{build_equations, solve_discourse};
use ellipsis_core::term::Term;
use ellipsis_core::Colour;

#[test]
fn every_problem_meets_its_expectations() {
    for name in corpus_names() {
        let p = corpus(&name);
        for problem in [p.clone(), p.without_colours()] {
            let Some(exps) = problem.expectations() else {
                continue;
            };
            let outcome = solve_discourse(&problem, &SearchLimits::default());
            let verdict = check(exps, &outcome);
            assert!(verdict.passed(), "{} (coloured: {}): {:?}", name, problem.coloured, verdict.failures);
        }
    }
}

#[test]
fn both_equations_share_the_parallelism_variable() {
    for name in corpus_names() {
        let p = corpus(&name);
        let sys = build_equations(&p).unwrap();
        assert_eq!(sys.equations.len(), 2, "{}", name);
        let heads: Vec<&Term> = sys.equations.iter().map(|e| e.rhs.spine().0).collect();
        for h in &heads {
            match h {
                Term::Free(s) => assert_eq!(s.name, sys.a_var, "{}", name),
                other => panic!("{}: rhs head {:?} is not the parallelism variable", name, other),
            }
        }
        assert_eq!(heads[0], heads[1], "{}: A differs in type or colour", name);
        let arity = |t: &Term| t.spine().1.len();
        assert_eq!(arity(&sys.equations[0].rhs), p.parallels.len(), "{}", name);
        assert_eq!(arity(&sys.equations[1].rhs), p.parallels.len(), "{}", name);
    }
}

/// No reading puts a primary occurrence of a source parallel element into
/// the value of the parallelism variable.
#[test]
fn primary_occurrences_stay_out_of_a() {
    for name in corpus_names() {
        let p = corpus(&name);
        let sys = build_equations(&p).unwrap();
        let sps: Vec<Term> = sys.annotated.source_elements().unwrap();
        let Ok(res) = solve_discourse(&p, &SearchLimits::default()) else {
            continue;
        };
        for sol in &res.solutions {
            let Some(a) = sol.subst.get(&res.a_var) else { continue };
            for sp in &sps {
                let Term::Const(sp) = sp else { continue };
                a.for_each_sym(&mut |_, s| {
                    let primary = s.colour.as_ref().is_some_and(|c| sol.subst.colour(c) == Colour::P);
                    assert!(!(s.name == sp.name && primary), "{}: A <- {} contains {}@p", name, a, sp.name);
                });
            }
        }
    }
}

/// Anaphors with a constant colour receive monochrome values.
#[test]
fn anaphor_values_are_monochrome() {
    for name in corpus_names() {
        let p = corpus(&name);
        let Ok(res) = solve_discourse(&p, &SearchLimits::default()) else {
            continue;
        };
        for sol in &res.solutions {
            for an in &p.anaphors {
                let c = sol.subst.colour(&an.colour);
                if !c.is_const() {
                    continue;
                }
                if let Some(v) = sol.subst.get(&an.name) {
                    assert!(monochrome(v, &c, &sol.subst), "{}: {} <- {} is not {}-monochrome", name, an.name, v, c);
                }
            }
        }
    }
}

#[test]
fn uncoloured_runs_never_lose_solutions() {
    for name in corpus_names() {
        let p = corpus(&name);
        let count = |problem| solve_discourse(problem, &SearchLimits::default()).map(|r| r.solutions.len()).unwrap_or(0);
        let coloured = count(&p);
        let plain = count(&p.without_colours());
        assert!(plain >= coloured, "{}: {} < {}", name, plain, coloured);
    }
}

#[test]
fn solving_is_deterministic() {
    for name in corpus_names() {
        let p = corpus(&name);
        let a = solve_discourse(&p, &SearchLimits::default());
        let b = solve_discourse(&p, &SearchLimits::default());
        assert_eq!(a, b, "{}", name);
    }
}

#[test]
fn each_problem_solves_quickly() {
    for name in corpus_names() {
        let p = corpus(&name);
        let start = Instant::now();
        let _ = solve_discourse(&p, &SearchLimits::default());
        assert!(start.elapsed() < Duration::from_secs(1), "{} took {:?}", name, start.elapsed());
    }
}
