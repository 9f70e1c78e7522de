//! Small bundled subshifts used by tests, docs and the CLI.

use crate::gfunction::GFunction;
use crate::presentation::SoficPresentation;
use crate::ratio::{self, Rational};
use crate::symbolic::Alphabet;

fn binary() -> Alphabet {
    Alphabet::new(["0", "1"]).expect("valid alphabet")
}

fn build(states: &[&str], edges: &[(usize, usize, usize)]) -> SoficPresentation {
    let names = states.iter().map(|s| s.to_string()).collect();
    SoficPresentation::new(binary(), names, edges).expect("valid example")
}

/// One state `*` with loops on 0 and 1.
pub fn full_shift() -> SoficPresentation {
    build(&["*"], &[(0, 0, 0), (0, 1, 0)])
}

/// No two consecutive 1s: A→A on 0, A→B on 1, B→A on 0.
pub fn golden_mean() -> SoficPresentation {
    build(&["A", "B"], &[(0, 0, 0), (0, 1, 1), (1, 0, 0)])
}

/// Runs of 1s between 0s have even length: E→E on 0, E→O on 1, O→E on 1.
pub fn even_shift() -> SoficPresentation {
    build(&["E", "O"], &[(0, 0, 0), (0, 1, 1), (1, 1, 0)])
}

/// A reducible shift without property (D): zeros, one burst `1x`, then zeros
/// forever. Nothing on the left can force a `1` after a `0`.
pub fn single_burst() -> SoficPresentation {
    build(&["pre", "mid", "post"], &[(0, 0, 0), (0, 1, 1), (1, 0, 2), (1, 1, 2), (2, 0, 2)])
}

/// Golden mean with `g(A,0) = g(A,1) = 1/2`, `g(B,0) = 1`.
pub fn golden_mean_g() -> GFunction {
    GFunction::from_named(
        golden_mean(),
        &[("A", "0", ratio::frac(1, 2)), ("A", "1", ratio::frac(1, 2)), ("B", "0", ratio::one())],
    )
    .expect("valid example")
}

/// Bernoulli(1/2) on the full 2-shift.
pub fn uniform_full_g() -> GFunction {
    bernoulli(ratio::frac(1, 2))
}

/// Bernoulli measure with `P(1) = p` on the full 2-shift.
pub fn bernoulli(p: Rational) -> GFunction {
    GFunction::from_named(full_shift(), &[("*", "0", ratio::one() - &p), ("*", "1", p)]).expect("valid example")
}

/// Even shift with row `(1/2, 1/2)` at E and `(0, 1)` at O; the rows differ,
/// so pasts ending in an unsynchronized run of 1s stay unresolved.
pub fn even_g() -> GFunction {
    GFunction::from_named(
        even_shift(),
        &[("E", "0", ratio::frac(1, 2)), ("E", "1", ratio::frac(1, 2)), ("O", "1", ratio::one())],
    )
    .expect("valid example")
}

/// The bundled g-functions by name.
pub fn bundled_g() -> Vec<(&'static str, GFunction)> {
    vec![("full", uniform_full_g()), ("golden-mean", golden_mean_g()), ("even", even_g())]
}
