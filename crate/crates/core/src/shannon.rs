//! The ω-calculus of a sofic presentation.
//!
//! Everything is driven by the left-limit family 𝒜: the state sets
//! `T_∞(x⁻)` reached along left-infinite admissible pasts. For a word `a`,
//! the *collection* `{f_a(S) : S ∈ 𝒜} ∖ {∅}` records what every admissible
//! left-infinite continuation of `a` can still do, so forced futures are the
//! words readable from every member of that collection.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limit;
use crate::presentation::{SoficPresentation, StateSet};
use crate::symbolic::{EventuallyPeriodicPast, Word};

/// A set of state sets: the possible current-state sets after a past.
pub type Collection = BTreeSet<StateSet>;

/// 𝒜 with an eventually periodic witness past for each member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSetFamily {
    members: Vec<StateSet>,
    witnesses: Vec<EventuallyPeriodicPast>,
}

impl StateSetFamily {
    pub fn members(&self) -> &[StateSet] {
        &self.members
    }

    pub fn witnesses(&self) -> &[EventuallyPeriodicPast] {
        &self.witnesses
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StateSet, &EventuallyPeriodicPast)> {
        self.members.iter().zip(&self.witnesses)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn collection(&self) -> Collection {
        self.members.iter().cloned().collect()
    }
}

/// Merges states with identical forward contexts (Moore refinement).
pub fn follower_separate(pres: &SoficPresentation) -> SoficPresentation {
    let class = follower_classes(pres);
    let count = class.iter().max().map_or(0, |m| m + 1);
    if count == pres.num_states() {
        return pres.clone();
    }
    let reps: Vec<usize> = (0..count)
        .map(|c| class.iter().position(|&k| k == c).expect("class nonempty"))
        .collect();
    let names = reps.iter().map(|&q| pres.state_name(q).to_string()).collect();
    let class = &class;
    let edges: Vec<(usize, usize, usize)> = reps
        .iter()
        .enumerate()
        .flat_map(|(c, &q)| {
            (0..pres.alphabet().len()).filter_map(move |s| pres.next(q, s).map(|t| (c, s, class[t])))
        })
        .collect();
    SoficPresentation::new(pres.alphabet().clone(), names, &edges).expect("quotient of an essential graph")
}

/// Class index per state; classes are numbered by their smallest member.
pub(crate) fn follower_classes(pres: &SoficPresentation) -> Vec<usize> {
    let n = pres.num_states();
    let k = pres.alphabet().len();
    let mut class = vec![0usize; n];
    let mut count = 1;
    loop {
        let sigs: Vec<(usize, Vec<Option<usize>>)> = (0..n)
            .map(|q| (class[q], (0..k).map(|s| pres.next(q, s).map(|t| class[t])).collect()))
            .collect();
        let mut ids: BTreeMap<&(usize, Vec<Option<usize>>), usize> = BTreeMap::new();
        let mut next_class = vec![0; n];
        let mut order = Vec::new();
        for (q, sig) in sigs.iter().enumerate() {
            let len = ids.len();
            let id = *ids.entry(sig).or_insert_with(|| {
                order.push(q);
                len
            });
            next_class[q] = id;
        }
        let new_count = ids.len();
        class = next_class;
        if new_count == count {
            return class;
        }
        count = new_count;
    }
}

/// Computes 𝒜 = { T_∞(x⁻) } together with witness pasts.
pub fn limit_family(pres: &SoficPresentation) -> StateSetFamily {
    let step = |s: &StateSet, a: usize| Some(pres.image(s, a)).filter(|t| !t.is_empty());
    let found = limit::limits(&pres.all_states(), pres.alphabet().len(), &step, &|_, _| true);
    let (members, witnesses) = found.into_iter().unzip();
    StateSetFamily { members, witnesses }
}

/// Precomputed ω-calculus for one presentation.
#[derive(Clone, Debug)]
pub struct OmegaCalculus<'a> {
    pres: &'a SoficPresentation,
    family: StateSetFamily,
    top: Collection,
}

impl<'a> OmegaCalculus<'a> {
    pub fn new(pres: &'a SoficPresentation) -> Self {
        let family = limit_family(pres);
        let top = family.collection();
        OmegaCalculus { pres, family, top }
    }

    pub fn presentation(&self) -> &SoficPresentation {
        self.pres
    }

    pub fn family(&self) -> &StateSetFamily {
        &self.family
    }

    /// The collection after 𝒜: images under `σ` with empty sets dropped.
    pub fn step(&self, c: &Collection, symbol: usize) -> Option<Collection> {
        let out: Collection = c
            .iter()
            .map(|s| self.pres.image(s, symbol))
            .filter(|s| !s.is_empty())
            .collect();
        (!out.is_empty()).then_some(out)
    }

    /// Like [`OmegaCalculus::step`] but only when every member can read `σ`;
    /// this is the transition of the common-future automaton.
    pub fn forced_step(&self, c: &Collection, symbol: usize) -> Option<Collection> {
        if !self.is_forced(c, symbol) {
            return None;
        }
        Some(c.iter().map(|s| self.pres.image(s, symbol)).collect())
    }

    pub fn is_forced(&self, c: &Collection, symbol: usize) -> bool {
        !c.is_empty() && c.iter().all(|s| self.pres.readable(s, symbol))
    }

    pub fn collection_after(&self, word: &[usize]) -> Result<Collection> {
        limit::run(&self.top, word, &|c: &Collection, s| self.step(c, s))
            .ok_or_else(|| Error::NotAdmissible(self.pres.alphabet().render(word)))
    }

    /// The collection reached along an eventually periodic past.
    pub fn past_collection(&self, past: &EventuallyPeriodicPast) -> Result<Collection> {
        limit::periodic_limit(&self.top, past, &|c: &Collection, s| self.step(c, s))
            .ok_or_else(|| Error::NotAdmissible(past.render(self.pres.alphabet())))
    }

    /// `T_∞(x⁻)`: the state set reached along an eventually periodic past.
    pub fn past_state_set(&self, past: &EventuallyPeriodicPast) -> Result<StateSet> {
        let step = |s: &StateSet, a: usize| Some(self.pres.image(s, a)).filter(|t| !t.is_empty());
        limit::periodic_limit(&self.pres.all_states(), past, &step)
            .ok_or_else(|| Error::NotAdmissible(past.render(self.pres.alphabet())))
    }

    /// Words of length `n` readable from every member of `c`.
    pub fn common_words(&self, c: &Collection, n: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        let mut stack = vec![(Word::empty(), c.clone())];
        while let Some((w, cur)) = stack.pop() {
            if w.len() == n {
                out.insert(w);
                continue;
            }
            for s in 0..self.pres.alphabet().len() {
                if let Some(next) = self.forced_step(&cur, s) {
                    stack.push((w.pushed(s), next));
                }
            }
        }
        out
    }

    /// `ω⁺ₙ(a)`.
    pub fn omega_plus(&self, a: &Word, n: usize) -> Result<BTreeSet<Word>> {
        let c = self.collection_after(a)?;
        Ok(self.common_words(&c, n))
    }

    pub fn omega_past(&self, past: &EventuallyPeriodicPast, n: usize, mode: OmegaMode) -> Result<BTreeSet<Word>> {
        match mode {
            OmegaMode::Omega => Ok(self.common_words(&self.past_collection(past)?, n)),
            OmegaMode::OmegaInfinity => Ok(self.omega_infinity(past, n)?.words),
        }
    }

    /// Length-`n` prefixes of `Ω⁺∞(x⁻)` with the detected stabilization depth.
    pub fn omega_infinity(&self, past: &EventuallyPeriodicPast, n: usize) -> Result<OmegaInfinity> {
        let d = self.past_collection(past)?;
        let (live, rounds) = self.live_collections(&d);
        let words = self
            .common_words(&d, n)
            .into_iter()
            .filter(|b| {
                limit::run(&d, b, &|c: &Collection, s| self.forced_step(c, s)).is_some_and(|c| live.contains(&c))
            })
            .collect();
        Ok(OmegaInfinity {
            words,
            stabilization: n + rounds,
        })
    }

    /// Common-future collections reachable from `start` that admit an infinite
    /// common future, and the number of pruning rounds until that set repeated.
    fn live_collections(&self, start: &Collection) -> (BTreeSet<Collection>, usize) {
        let k = self.pres.alphabet().len();
        let reach: Vec<Collection> = limit::reachable(start, k, &|c: &Collection, s| self.forced_step(c, s))
            .into_keys()
            .collect();
        let mut live: BTreeSet<Collection> = reach.iter().cloned().collect();
        let mut rounds = 0;
        loop {
            let next: BTreeSet<Collection> = live
                .iter()
                .filter(|c| (0..k).any(|s| self.forced_step(c, s).is_some_and(|n| live.contains(&n))))
                .cloned()
                .collect();
            if next == live {
                return (live, rounds);
            }
            live = next;
            rounds += 1;
        }
    }

    /// Shortest (then least) `a` with `σ ∈ ω⁺₁(ab)`, if any exists.
    pub fn property_d_witness(&self, b: &Word, symbol: usize) -> Option<Word> {
        let reach = limit::reachable(&self.top, self.pres.alphabet().len(), &|c: &Collection, s| self.step(c, s));
        reach
            .into_iter()
            .filter(|(c, _)| {
                limit::run(c, b, &|c: &Collection, s| self.step(c, s)).is_some_and(|cb| self.is_forced(&cb, symbol))
            })
            .map(|(_, a)| a)
            .min_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)))
    }

    /// Searches `|a| ≤ bound` directly through `ω⁺₁`.
    pub fn bounded_property_d_witness(&self, b: &Word, symbol: usize, bound: usize) -> Option<Word> {
        (0..=bound).find_map(|len| {
            Word::all(self.pres.alphabet().len(), len).into_iter().find(|a| {
                self.omega_plus(&a.concat(b), 1)
                    .is_ok_and(|w| w.contains(&Word::single(symbol)))
            })
        })
    }

    /// Exact property-(D) decision over the lattice of collection sets.
    pub fn check_property_d(&self) -> PropertyDReport {
        let k = self.pres.alphabet().len();
        let step = |c: &Collection, s| self.step(c, s);
        let reach: BTreeSet<Collection> = limit::reachable(&self.top, k, &step).into_keys().collect();
        let zstep = |z: &BTreeSet<Collection>, s: usize| {
            let next: BTreeSet<Collection> = z.iter().filter_map(|c| step(c, s)).collect();
            (!next.is_empty()).then_some(next)
        };
        let zs = limit::reachable(&reach, k, &zstep);
        let mut counterexample = None;
        'outer: for (z, b) in &zs {
            for s in 0..k {
                let admissible = z.iter().any(|c| c.iter().any(|set| self.pres.readable(set, s)));
                let good = z.iter().any(|c| self.is_forced(c, s));
                if admissible && !good {
                    counterexample = Some((b.clone(), s));
                    break 'outer;
                }
            }
        }
        let holds = counterexample.is_none();
        let mut certificates = Vec::new();
        if holds {
            let bound = self.pres.num_states();
            'cert: for len in 0..=bound {
                for b in crate::symbolic::language_words(self.pres, len) {
                    for s in 0..k {
                        if !self.pres.is_admissible(&b.pushed(s)) {
                            continue;
                        }
                        let a = self.property_d_witness(&b, s).expect("property (D) holds");
                        certificates.push(Certificate { b: b.clone(), symbol: s, a });
                        if certificates.len() >= MAX_CERTIFICATES {
                            break 'cert;
                        }
                    }
                }
            }
        }
        PropertyDReport {
            holds,
            certificates,
            counterexample,
            lattice_states: zs.len(),
        }
    }

    /// `a_k ∈ ω⁺₁(a_[0,k))` for a word `a` of length `k + 1`.
    pub fn e_window_membership(&self, a: &Word, k: usize) -> Result<bool> {
        if a.len() != k + 1 {
            return Err(Error::InvalidArgument(format!("window must have length {}", k + 1)));
        }
        self.pres.require_admissible(a)?;
        let head = a.slice(0, k);
        let c = self.collection_after(&head)?;
        Ok(self.is_forced(&c, a[k]))
    }

    /// The presenting graph 𝓖_D: vertices are the common-future collections of
    /// synchronized eventually periodic pasts, merged when their futures agree.
    pub fn build_gd(&self, depth: usize) -> Result<GdGraph> {
        if depth == 0 {
            return Err(Error::InvalidArgument("depth must be at least 1".into()));
        }
        let report = self.check_property_d();
        if let Some((b, s)) = &report.counterexample {
            return Err(Error::PropertyDFailed(format!(
                "no left extension forces `{}` after `{}`",
                self.pres.alphabet().name(*s),
                self.pres.alphabet().render(b)
            )));
        }
        let k = self.pres.alphabet().len();
        let step = |c: &Collection, s| self.step(c, s);
        let allow = |c: &Collection, s| self.is_forced(c, s);
        let candidates = limit::limits(&self.top, k, &step, &allow);
        let mut live = BTreeSet::new();
        for c in candidates.keys() {
            if !live.contains(c) {
                live.extend(self.live_collections(c).0);
            }
        }
        let vertices: Vec<(&Collection, &EventuallyPeriodicPast)> =
            candidates.iter().filter(|(c, _)| live.contains(*c)).collect();
        let index: BTreeMap<&Collection, usize> = vertices.iter().enumerate().map(|(i, (c, _))| (*c, i)).collect();
        let mut edges = Vec::new();
        for (i, (c, _)) in vertices.iter().enumerate() {
            for s in 0..k {
                if let Some(j) = self.forced_step(c, s).and_then(|n| index.get(&n).copied()) {
                    edges.push((i, s, j));
                }
            }
        }
        let names: Vec<String> = (0..vertices.len()).map(|i| format!("c{i}")).collect();
        let raw = SoficPresentation::new(self.pres.alphabet().clone(), names, &edges)?;
        let class = follower_classes(&raw);
        let count = class.iter().max().map_or(0, |m| m + 1);
        let mut reps = vec![usize::MAX; count];
        for (q, &c) in class.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = q;
            }
        }
        let names = (0..count).map(|c| format!("V{c}")).collect();
        let edges: Vec<(usize, usize, usize)> = raw.edges().filter(|(q, _, _)| reps[class[*q]] == *q).map(|(q, s, t)| (class[q], s, class[t])).collect();
        let presentation = SoficPresentation::new(self.pres.alphabet().clone(), names, &edges)?;
        let truncations = reps
            .iter()
            .map(|&q| presentation.words_from(&StateSet::singleton(class[q]), depth))
            .collect();
        let witnesses = reps.iter().map(|&q| vertices[q].1.clone()).collect();
        Ok(GdGraph {
            presentation,
            truncations,
            witnesses,
            depth,
        })
    }
}

const MAX_CERTIFICATES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaMode {
    Omega,
    OmegaInfinity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaInfinity {
    pub words: BTreeSet<Word>,
    /// `M` such that the prefix set equals `⋂_{n ≤ m ≤ M} ω⁺ₘ(x⁻)_[1,n]`.
    pub stabilization: usize,
}

/// `σ ∈ ω⁺₁(ab)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub b: Word,
    pub symbol: usize,
    pub a: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyDReport {
    pub holds: bool,
    pub certificates: Vec<Certificate>,
    /// `(b, σ)` with `bσ` admissible but no left extension forcing `σ`.
    pub counterexample: Option<(Word, usize)>,
    pub lattice_states: usize,
}

#[derive(Clone, Debug)]
pub struct GdGraph {
    pub presentation: SoficPresentation,
    /// Length-`depth` prefixes of each vertex's future set.
    pub truncations: Vec<BTreeSet<Word>>,
    /// A synchronized past leading to each vertex.
    pub witnesses: Vec<EventuallyPeriodicPast>,
    pub depth: usize,
}

pub fn omega_plus(pres: &SoficPresentation, a: &Word, n: usize) -> Result<BTreeSet<Word>> {
    OmegaCalculus::new(pres).omega_plus(a, n)
}

pub fn omega_past(
    pres: &SoficPresentation,
    past: &EventuallyPeriodicPast,
    n: usize,
    mode: OmegaMode,
) -> Result<BTreeSet<Word>> {
    OmegaCalculus::new(pres).omega_past(past, n, mode)
}

pub fn check_property_d(pres: &SoficPresentation) -> PropertyDReport {
    OmegaCalculus::new(pres).check_property_d()
}

pub fn build_gd(pres: &SoficPresentation, depth: usize) -> Result<GdGraph> {
    OmegaCalculus::new(pres).build_gd(depth)
}

pub fn e_window_membership(pres: &SoficPresentation, a: &Word, k: usize) -> Result<bool> {
    OmegaCalculus::new(pres).e_window_membership(a, k)
}
