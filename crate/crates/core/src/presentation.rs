//! Right-resolving labeled graphs ("Shannon graphs") and state sets.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::symbolic::{Alphabet, Word};

/// A sorted set of state indices of one presentation. A state set denotes the
/// union of the follower sets of its members.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateSet(Vec<usize>);

impl StateSet {
    pub fn new<I: IntoIterator<Item = usize>>(states: I) -> Self {
        let mut v: Vec<usize> = states.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        StateSet(v)
    }

    pub fn singleton(q: usize) -> Self {
        StateSet(vec![q])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.0.binary_search(&q).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.iter().all(|q| other.contains(q))
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        StateSet::new(self.iter().chain(other.iter()))
    }
}

/// A finite right-resolving labeled graph: at most one edge per
/// (state, symbol). Every state has an incoming and an outgoing edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoficPresentation {
    alphabet: Alphabet,
    states: Vec<String>,
    next: Vec<Vec<Option<usize>>>,
}

impl SoficPresentation {
    /// Builds a presentation from `(source, symbol, target)` triples and
    /// checks that it is right-resolving and essential.
    pub fn new(alphabet: Alphabet, states: Vec<String>, edges: &[(usize, usize, usize)]) -> Result<Self> {
        let pres = Self::raw(alphabet, states, edges)?;
        if let Some(q) = pres.inessential_states().into_iter().next() {
            return Err(Error::NotEssential(pres.states[q].clone()));
        }
        if pres.states.is_empty() {
            return Err(Error::EmptyLanguage);
        }
        Ok(pres)
    }

    /// Like [`SoficPresentation::new`] but removes inessential states instead
    /// of rejecting them.
    pub fn trimmed(alphabet: Alphabet, states: Vec<String>, edges: &[(usize, usize, usize)]) -> Result<Self> {
        let raw = Self::raw(alphabet, states, edges)?;
        let mut alive = vec![true; raw.states.len()];
        loop {
            let mut has_in = vec![false; raw.states.len()];
            let mut has_out = vec![false; raw.states.len()];
            for (q, row) in raw.next.iter().enumerate() {
                for &t in row.iter().flatten() {
                    if alive[q] && alive[t] {
                        has_out[q] = true;
                        has_in[t] = true;
                    }
                }
            }
            let mut changed = false;
            for q in 0..alive.len() {
                if alive[q] && !(has_in[q] && has_out[q]) {
                    alive[q] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let kept: Vec<usize> = (0..alive.len()).filter(|&q| alive[q]).collect();
        if kept.is_empty() {
            return Err(Error::EmptyLanguage);
        }
        let remap: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let names = kept.iter().map(|&q| raw.states[q].clone()).collect();
        let mut new_edges = Vec::new();
        for &q in &kept {
            for (s, t) in raw.next[q].iter().enumerate() {
                if let Some(t) = t.and_then(|t| remap.get(&t)) {
                    new_edges.push((remap[&q], s, *t));
                }
            }
        }
        Self::new(raw.alphabet, names, &new_edges)
    }

    fn raw(alphabet: Alphabet, states: Vec<String>, edges: &[(usize, usize, usize)]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for s in &states {
            if !seen.insert(s.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate state name `{s}`")));
            }
        }
        let mut next = vec![vec![None; alphabet.len()]; states.len()];
        for &(q, s, t) in edges {
            if q >= states.len() || t >= states.len() || s >= alphabet.len() {
                return Err(Error::InvalidArgument(format!("edge ({q}, {s}, {t}) out of range")));
            }
            if next[q][s].is_some() {
                return Err(Error::NotRightResolving {
                    state: states[q].clone(),
                    symbol: alphabet.name(s).to_string(),
                });
            }
            next[q][s] = Some(t);
        }
        Ok(SoficPresentation { alphabet, states, next })
    }

    fn inessential_states(&self) -> Vec<usize> {
        let mut has_in = vec![false; self.states.len()];
        for row in &self.next {
            for &t in row.iter().flatten() {
                has_in[t] = true;
            }
        }
        (0..self.states.len())
            .filter(|&q| !has_in[q] || self.next[q].iter().all(Option::is_none))
            .collect()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_edges(&self) -> usize {
        self.next.iter().map(|r| r.iter().flatten().count()).sum()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    /// `τ(σ)q`, the end of the `σ`-edge leaving `q`.
    pub fn next(&self, q: usize, symbol: usize) -> Option<usize> {
        self.next[q][symbol]
    }

    pub fn follow(&self, q: usize, word: &[usize]) -> Option<usize> {
        word.iter().try_fold(q, |q, &s| self.next(q, s))
    }

    /// `(source, symbol, target)` in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.next
            .iter()
            .enumerate()
            .flat_map(|(q, row)| row.iter().enumerate().filter_map(move |(s, t)| t.map(|t| (q, s, t))))
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::new(0..self.states.len())
    }

    /// `f_σ(S)`: end states of the `σ`-edges leaving `S`.
    pub fn image(&self, set: &StateSet, symbol: usize) -> StateSet {
        StateSet::new(set.iter().filter_map(|q| self.next(q, symbol)))
    }

    pub fn image_word(&self, set: &StateSet, word: &[usize]) -> StateSet {
        word.iter().fold(set.clone(), |s, &a| self.image(&s, a))
    }

    pub fn readable(&self, set: &StateSet, symbol: usize) -> bool {
        set.iter().any(|q| self.next(q, symbol).is_some())
    }

    pub fn is_admissible(&self, word: &[usize]) -> bool {
        word.iter().all(|&s| s < self.alphabet.len()) && !self.image_word(&self.all_states(), word).is_empty()
    }

    pub fn require_admissible(&self, word: &[usize]) -> Result<()> {
        if self.is_admissible(word) {
            Ok(())
        } else {
            Err(Error::NotAdmissible(self.alphabet.render(word)))
        }
    }

    /// Labels of length-`n` paths leaving `set`, in canonical order.
    pub fn words_from(&self, set: &StateSet, n: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        let mut stack = vec![(Word::empty(), set.clone())];
        while let Some((w, s)) = stack.pop() {
            if w.len() == n {
                out.insert(w);
                continue;
            }
            for a in 0..self.alphabet.len() {
                let t = self.image(&s, a);
                if !t.is_empty() {
                    stack.push((w.pushed(a), t));
                }
            }
        }
        out
    }

    pub fn render_set(&self, set: &StateSet) -> String {
        let names: Vec<&str> = set.iter().map(|q| self.state_name(q)).collect();
        format!("{{{}}}", names.join(","))
    }

}

/// Decides equality of the finite-word languages of two presentations by
/// exploring pairs of reachable state sets. Symbols are matched by name.
pub fn same_language(p: &SoficPresentation, q: &SoficPresentation) -> bool {
    let mut names: BTreeSet<&str> = p.alphabet().names().iter().map(String::as_str).collect();
    names.extend(q.alphabet().names().iter().map(String::as_str));
    let lookup = |pres: &SoficPresentation, n: &str| pres.alphabet().index(n).ok();
    let symbols: Vec<(Option<usize>, Option<usize>)> =
        names.iter().map(|n| (lookup(p, n), lookup(q, n))).collect();
    let start = (p.all_states(), q.all_states());
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((a, b)) = queue.pop_front() {
        for &(sp, sq) in &symbols {
            let na = sp.map(|s| p.image(&a, s)).unwrap_or_default();
            let nb = sq.map(|s| q.image(&b, s)).unwrap_or_default();
            if na.is_empty() != nb.is_empty() {
                return false;
            }
            if !na.is_empty() && seen.insert((na.clone(), nb.clone())) {
                queue.push_back((na, nb));
            }
        }
    }
    true
}
