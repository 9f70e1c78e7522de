//! Residually defined g-functions carried by weighted Shannon graphs.
//!
//! A past is resolved when every state it can end in carries the same
//! outgoing weight row; `g` is defined exactly on resolved pasts.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::limit;
use crate::presentation::{SoficPresentation, StateSet};
use crate::ratio::{self, Rational};
use crate::shannon::OmegaCalculus;
use crate::symbolic::{EventuallyPeriodicPast, Past, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GFunction {
    pres: SoficPresentation,
    weights: Vec<Vec<Option<Rational>>>,
}

/// Candidate end states of a past and, when they agree, their common row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolveResult {
    pub candidates: StateSet,
    /// Indexed by symbol; zero where no edge leaves the candidates.
    pub agreed_weights: Option<Vec<Rational>>,
}

impl ResolveResult {
    pub fn is_resolved(&self) -> bool {
        self.agreed_weights.is_some()
    }
}

/// Cylinder values `μ^(g)(past)(a)` for all continuations up to `depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderTable {
    pub past: Past,
    pub depth: usize,
    pub values: BTreeMap<Word, Rational>,
}

impl GFunction {
    /// `weights[q][σ]` must be `Some` exactly on edges; rows sum to one and the
    /// presented subshift must have property (D).
    pub fn new(pres: SoficPresentation, weights: Vec<Vec<Option<Rational>>>) -> Result<Self> {
        let g = GFunction::unchecked(pres, weights)?;
        let report = OmegaCalculus::new(&g.pres).check_property_d();
        if let Some((b, s)) = report.counterexample {
            return Err(Error::PropertyDFailed(format!(
                "`{}` after `{}` is never forced",
                g.pres.alphabet().name(s),
                g.pres.alphabet().render(&b)
            )));
        }
        Ok(g)
    }

    /// Validates weights only. Property (D) is the caller's responsibility.
    pub(crate) fn unchecked(pres: SoficPresentation, weights: Vec<Vec<Option<Rational>>>) -> Result<Self> {
        let k = pres.alphabet().len();
        if weights.len() != pres.num_states() || weights.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidArgument("weight table shape does not match the presentation".into()));
        }
        for (q, row) in weights.iter().enumerate() {
            let mut sum = ratio::zero();
            for (s, w) in row.iter().enumerate() {
                let name = || format!("{} {}", pres.state_name(q), pres.alphabet().name(s));
                match (pres.next(q, s), w) {
                    (Some(_), None) => return Err(Error::InvalidArgument(format!("missing weight on edge {}", name()))),
                    (None, Some(_)) => return Err(Error::InvalidArgument(format!("weight on missing edge {}", name()))),
                    (_, Some(w)) => {
                        if *w < ratio::zero() || *w > ratio::one() {
                            return Err(Error::InvariantViolation(format!("weight {} outside [0,1] at {}", ratio::format(w), name())));
                        }
                        sum += w;
                    }
                    _ => {}
                }
            }
            if !sum.is_one() {
                return Err(Error::InvariantViolation(format!(
                    "weights leaving `{}` sum to {}, not 1",
                    pres.state_name(q),
                    ratio::format(&sum)
                )));
            }
        }
        Ok(GFunction { pres, weights })
    }

    /// Equal weights on the edges leaving each state.
    pub fn uniform(pres: SoficPresentation) -> Result<Self> {
        let weights = (0..pres.num_states())
            .map(|q| {
                let out = (0..pres.alphabet().len()).filter(|&s| pres.next(q, s).is_some()).count();
                (0..pres.alphabet().len())
                    .map(|s| pres.next(q, s).map(|_| ratio::frac(1, out as i64)))
                    .collect()
            })
            .collect();
        GFunction::new(pres, weights)
    }

    /// Builds from `(state, symbol, weight)` triples named as in `pres`.
    pub fn from_named(pres: SoficPresentation, entries: &[(&str, &str, Rational)]) -> Result<Self> {
        let mut weights = vec![vec![None; pres.alphabet().len()]; pres.num_states()];
        for (q, s, w) in entries {
            let q = pres.state_index(q)?;
            let s = pres.alphabet().index(s)?;
            weights[q][s] = Some(w.clone());
        }
        GFunction::new(pres, weights)
    }

    pub fn presentation(&self) -> &SoficPresentation {
        &self.pres
    }

    pub fn weight(&self, q: usize, symbol: usize) -> Option<&Rational> {
        self.weights[q][symbol].as_ref()
    }

    /// The outgoing row of `q` with zeros on missing edges.
    pub fn row(&self, q: usize) -> Vec<Rational> {
        self.weights[q].iter().map(|w| w.clone().unwrap_or_else(ratio::zero)).collect()
    }

    pub fn weights(&self) -> &[Vec<Option<Rational>>] {
        &self.weights
    }

    /// The common row of a candidate set, if all rows coincide.
    pub fn agreed_row(&self, set: &StateSet) -> Option<Vec<Rational>> {
        let mut it = set.iter();
        let first = self.row(it.next()?);
        it.all(|q| self.row(q) == first).then_some(first)
    }

    pub fn candidates(&self, past: &Past) -> Result<StateSet> {
        let all = self.pres.all_states();
        let set = match past {
            // Every state lies in some T_∞(x⁻), so the union over the limit
            // family of f_w(S) is f_w(Q).
            Past::Finite(w) => self.pres.image_word(&all, w),
            Past::Periodic(p) => {
                let step = |s: &StateSet, a: usize| Some(self.pres.image(s, a)).filter(|t| !t.is_empty());
                limit::periodic_limit(&all, p, &step).unwrap_or_default()
            }
        };
        if set.is_empty() {
            return Err(Error::NotAdmissible(past.render(self.pres.alphabet())));
        }
        Ok(set)
    }

    pub fn resolve(&self, past: &Past) -> Result<ResolveResult> {
        let candidates = self.candidates(past)?;
        let agreed_weights = self.agreed_row(&candidates);
        Ok(ResolveResult {
            candidates,
            agreed_weights,
        })
    }

    pub fn g_eval(&self, past: &Past, symbol: usize) -> Result<Rational> {
        if symbol >= self.pres.alphabet().len() {
            return Err(Error::InvalidArgument(format!("symbol index {symbol} out of range")));
        }
        let r = self.resolve(past)?;
        r.agreed_weights
            .map(|row| row[symbol].clone())
            .ok_or_else(|| Error::Undefined(past.render(self.pres.alphabet())))
    }

    /// `∏ g((past, a_[1,k)), a_k)`; zero once a factor vanishes.
    pub fn mu_g_cylinder(&self, past: &Past, a: &[usize]) -> Result<Rational> {
        let set = self.candidates(past)?;
        self.cylinder_from(&set, a)
            .ok_or_else(|| Error::Undefined(past.render(self.pres.alphabet())))
    }

    /// `None` when an intermediate candidate set disagrees.
    pub(crate) fn cylinder_from(&self, set: &StateSet, a: &[usize]) -> Option<Rational> {
        let mut value = ratio::one();
        let mut cur = set.clone();
        for &s in a {
            let row = self.agreed_row(&cur)?;
            value *= &row[s];
            if value.is_zero() {
                return Some(value);
            }
            cur = self.pres.image(&cur, s);
        }
        Some(value)
    }

    pub fn cylinder_table(&self, past: &Past, depth: usize) -> Result<CylinderTable> {
        let set = self.candidates(past)?;
        let mut values = BTreeMap::new();
        for n in 0..=depth {
            for w in self.pres.words_from(&set, n) {
                let v = self
                    .cylinder_from(&set, &w)
                    .ok_or_else(|| Error::Undefined(past.extended(&w).render(self.pres.alphabet())))?;
                values.insert(w, v);
            }
        }
        Ok(CylinderTable {
            past: past.clone(),
            depth,
            values,
        })
    }

    /// Finite check of membership in `E(g)` for the point `past · forward`:
    /// along every coordinate of the period, the tail and the window, the past
    /// resolves, the next symbol has positive weight, and every continuation of
    /// length at most `depth` resolves too.
    pub fn eg_membership(&self, past: &EventuallyPeriodicPast, forward: &Word, depth: usize) -> Result<bool> {
        let start = self.candidates(&Past::Periodic(past.clone()))?;
        if self.pres.image_word(&start, forward).is_empty() {
            return Err(Error::NotAdmissible(Past::Periodic(past.extended(forward)).render(self.pres.alphabet())));
        }
        let cycle = past.cycle();
        let periodic = EventuallyPeriodicPast::new(Word::empty(), cycle.clone())?;
        let mut cur = self.candidates(&Past::Periodic(periodic))?;
        // Each past along the point with the symbol that follows it.
        let mut checks: Vec<(StateSet, Option<usize>)> = Vec::new();
        for &s in cycle.iter().chain(past.tail().iter()).chain(forward.iter()) {
            checks.push((cur.clone(), Some(s)));
            cur = self.pres.image(&cur, s);
        }
        checks.push((cur, None));
        for (set, next) in checks {
            let Some(row) = self.agreed_row(&set) else { return Ok(false) };
            if let Some(s) = next {
                if row[s].is_zero() {
                    return Ok(false);
                }
            }
            for k in 1..=depth {
                for w in self.pres.words_from(&set, k) {
                    if self.agreed_row(&self.pres.image_word(&set, &w)).is_none() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Candidate sets reachable by finite pasts, with a shortest witness.
    pub fn reachable_candidates(&self) -> BTreeMap<StateSet, Word> {
        let step = |s: &StateSet, a: usize| Some(self.pres.image(s, a)).filter(|t| !t.is_empty());
        limit::reachable(&self.pres.all_states(), self.pres.alphabet().len(), &step)
    }

    /// Distinct values `g(x⁻, σ)` over resolved pasts and admissible `σ`.
    pub fn range(&self) -> BTreeSet<Rational> {
        let mut out = BTreeSet::new();
        for set in self.reachable_candidates().keys() {
            if let Some(row) = self.agreed_row(set) {
                for (s, w) in row.into_iter().enumerate() {
                    if self.pres.readable(set, s) {
                        out.insert(w);
                    }
                }
            }
        }
        out
    }

    /// A shortest finite past on which `self` and `other` disagree, comparing
    /// symbols by name: languages differ, one is resolved and the other is not,
    /// or the rows differ. Periodic pasts reach the same candidate sets as long
    /// enough finite ones, so this covers them too.
    pub fn first_disagreement(&self, other: &GFunction) -> Option<Word> {
        let a = self.pres.alphabet();
        let b = other.pres.alphabet();
        if a.names() != b.names() {
            return Some(Word::empty());
        }
        let start = (self.pres.all_states(), other.pres.all_states());
        let step = |p: &(StateSet, StateSet), s: usize| {
            let n = (self.pres.image(&p.0, s), other.pres.image(&p.1, s));
            (!n.0.is_empty() || !n.1.is_empty()).then_some(n)
        };
        let reach = limit::reachable(&start, a.len(), &step);
        let mut bad: Vec<&Word> = reach
            .iter()
            .filter(|((x, y), _)| {
                x.is_empty() != y.is_empty() || self.agreed_row(x) != other.agreed_row(y)
            })
            .map(|(_, w)| w)
            .collect();
        bad.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        bad.first().map(|w| (*w).clone())
    }

    pub fn equivalent(&self, other: &GFunction) -> bool {
        self.first_disagreement(other).is_none()
    }
}
