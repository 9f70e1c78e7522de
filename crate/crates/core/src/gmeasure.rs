//! Stationary g-measures of weighted Shannon graphs, their verification and
//! trajectory sampling.

use std::collections::BTreeMap;

use num_bigint::{BigInt, RandBigInt};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gfunction::GFunction;
use crate::linalg;
use crate::presentation::StateSet;
use crate::ratio::{self, Rational};
use crate::symbolic::{Alphabet, Word};

/// `π` with `πP = π` for the vertex chain `P(V, τ(σ)V) = g(V, σ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StationaryVertexLaw {
    pub values: Vec<Rational>,
}

/// Cylinder values of a shift-invariant measure on all words up to `depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftMeasureTable {
    pub alphabet: Alphabet,
    pub depth: usize,
    pub values: BTreeMap<Word, Rational>,
}

impl ShiftMeasureTable {
    /// `None` beyond the table depth; words absent from the table have value 0.
    pub fn value(&self, w: &[usize]) -> Option<Rational> {
        if w.len() > self.depth {
            return None;
        }
        Some(self.values.get(&Word::new(w.to_vec())).cloned().unwrap_or_else(ratio::zero))
    }

    /// Words `a` (with `|a| < depth`) where `value(a)` differs from
    /// `Σ_σ value(σa)` or from `Σ_σ value(aσ)`, plus the empty word if it is not 1.
    pub fn shift_invariance_violations(&self) -> Vec<Word> {
        let k = self.alphabet.len();
        let mut out = Vec::new();
        if self.value(&[]) != Some(ratio::one()) {
            out.push(Word::empty());
        }
        for n in 0..self.depth {
            for a in Word::all(k, n) {
                let v = self.value(&a).expect("within depth");
                let left: Rational = (0..k).map(|s| self.value(&a.prepended(s)).expect("within depth")).sum();
                let right: Rational = (0..k).map(|s| self.value(&a.pushed(s)).expect("within depth")).sum();
                if v != left || v != right {
                    out.push(a);
                }
            }
        }
        out
    }
}

/// A cylinder `aα` where `value(aα) ≠ value(a) · g(a, α)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub prefix: Word,
    pub symbol: usize,
    pub expected: Rational,
    pub found: Rational,
}

impl Violation {
    pub fn cylinder(&self) -> Word {
        self.prefix.pushed(self.symbol)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub depth: usize,
    pub checked: usize,
    pub violations: Vec<Violation>,
    /// Admissible prefixes at which `g` is not resolved.
    pub unresolved: Vec<Word>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn stationary_law(g: &GFunction) -> Result<StationaryVertexLaw> {
    let pres = g.presentation();
    let n = pres.num_states();
    let mut p = vec![vec![ratio::zero(); n]; n];
    for (q, s, t) in pres.edges() {
        let w = g.weight(q, s).expect("weights on edges");
        p[q][t] += w;
    }
    if !strongly_connected(&p) {
        return Err(Error::Reducible("positive-weight vertex graph is not strongly connected".into()));
    }
    // Rows of (Pᵀ − I), the last replaced by the normalization Σπ = 1.
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { &p[j][i] - ratio::one() } else { p[j][i].clone() })
                .collect()
        })
        .collect();
    let mut b = vec![ratio::zero(); n];
    a[n - 1] = vec![ratio::one(); n];
    b[n - 1] = ratio::one();
    let values = linalg::solve(a, b).ok_or_else(|| Error::Reducible("singular stationary system".into()))?;
    Ok(StationaryVertexLaw { values })
}

fn strongly_connected(p: &[Vec<Rational>]) -> bool {
    let n = p.len();
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(q) = stack.pop() {
            for t in 0..n {
                let w = if forward { &p[q][t] } else { &p[t][q] };
                if !w.is_zero() && !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen.into_iter().all(|x| x)
    };
    reach(true) && reach(false)
}

/// Pushes a mass vector over states along `σ`, weighting by `g`.
pub(crate) fn push_mass(g: &GFunction, mass: &[Rational], symbol: usize) -> Vec<Rational> {
    let pres = g.presentation();
    let mut out = vec![ratio::zero(); mass.len()];
    for (q, m) in mass.iter().enumerate() {
        if m.is_zero() {
            continue;
        }
        if let (Some(t), Some(w)) = (pres.next(q, symbol), g.weight(q, symbol)) {
            out[t] += m * w;
        }
    }
    out
}

/// The table of `value(a) = Σ_V π(V) ∏ g` over admissible words up to `depth`.
pub fn stationary_g_measure(g: &GFunction, depth: usize) -> Result<ShiftMeasureTable> {
    let pi = stationary_law(g)?;
    let pres = g.presentation();
    let mut values = BTreeMap::new();
    let mut stack = vec![(Word::empty(), pres.all_states(), pi.values)];
    while let Some((w, set, mass)) = stack.pop() {
        values.insert(w.clone(), mass.iter().sum());
        if w.len() == depth {
            continue;
        }
        for s in 0..pres.alphabet().len() {
            let next: StateSet = pres.image(&set, s);
            if !next.is_empty() {
                stack.push((w.pushed(s), next, push_mass(g, &mass, s)));
            }
        }
    }
    Ok(ShiftMeasureTable {
        alphabet: pres.alphabet().clone(),
        depth,
        values,
    })
}

/// Checks `value(aα) = value(a) · g(a, α)` for every admissible `a` with
/// `|a| ≤ depth` at which `g` resolves; other prefixes are listed separately.
pub fn verify_g_measure(g: &GFunction, table: &ShiftMeasureTable, depth: usize) -> Result<VerifyReport> {
    let pres = g.presentation();
    if table.alphabet.names() != pres.alphabet().names() {
        return Err(Error::DomainMismatch("table alphabet differs from the g-function's".into()));
    }
    if table.depth < depth + 1 {
        return Err(Error::DepthTooSmall {
            needed: depth + 1,
            found: table.depth,
        });
    }
    let mut report = VerifyReport {
        depth,
        checked: 0,
        violations: Vec::new(),
        unresolved: Vec::new(),
    };
    for n in 0..=depth {
        for a in crate::symbolic::language_words(pres, n) {
            let Some(row) = g.agreed_row(&pres.image_word(&pres.all_states(), &a)) else {
                report.unresolved.push(a);
                continue;
            };
            let base = table.value(&a).expect("within depth");
            for (s, w) in row.iter().enumerate() {
                report.checked += 1;
                let expected = &base * w;
                let found = table.value(&a.pushed(s)).expect("within depth");
                if expected != found {
                    report.violations.push(Violation {
                        prefix: a.clone(),
                        symbol: s,
                        expected,
                        found,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// A trajectory of `length` symbols from `start`, reproducible from `seed`.
/// Draws are exact: each step picks a uniform integer below the row's common
/// denominator.
pub fn sample_path(g: &GFunction, start: usize, seed: u64, length: usize) -> Result<Word> {
    let pres = g.presentation();
    if length == 0 {
        return Err(Error::InvalidArgument("sample length must be at least 1".into()));
    }
    if start >= pres.num_states() {
        return Err(Error::UnknownState(start.to_string()));
    }
    let rows: Vec<(BigInt, Vec<BigInt>)> = (0..pres.num_states())
        .map(|q| {
            let row = g.row(q);
            let denom = row.iter().fold(BigInt::one(), |d, w| d * w.denom());
            let cumulative = row
                .iter()
                .scan(ratio::zero(), |acc, w| {
                    *acc += w;
                    Some((&*acc * Rational::from_integer(denom.clone())).to_integer())
                })
                .collect();
            (denom, cumulative)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = start;
    let mut out = Vec::with_capacity(length);
    for _ in 0..length {
        let (denom, cumulative) = &rows[q];
        let u = rng.gen_bigint_range(&BigInt::zero(), denom);
        let s = cumulative.iter().position(|c| u < *c).expect("row sums to one");
        out.push(s);
        q = pres.next(q, s).expect("positive weight on an edge");
    }
    Ok(Word::new(out))
}
