//! Finite vertex sets of the measure Shannon graph.
//!
//! A vertex is a probability measure on one-sided sequences given by an
//! initial distribution on the states of a weighted carrier graph. Reading
//! `σ` conditions on the first symbol and shifts.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gfunction::GFunction;
use crate::gmeasure::push_mass;
use crate::limit;
use crate::linalg::Basis;
use crate::presentation::SoficPresentation;
use crate::ratio::{self, Rational};
use crate::symbolic::{Alphabet, EventuallyPeriodicPast, Word};

#[derive(Clone, Debug)]
pub struct MeasureVertex {
    carrier: Arc<GFunction>,
    initial: Vec<Rational>,
}

impl MeasureVertex {
    pub fn new(carrier: Arc<GFunction>, initial: Vec<Rational>) -> Result<Self> {
        if initial.len() != carrier.presentation().num_states() {
            return Err(Error::InvalidArgument("initial distribution has the wrong length".into()));
        }
        if initial.iter().any(|p| *p < ratio::zero()) {
            return Err(Error::InvariantViolation("negative initial mass".into()));
        }
        let total: Rational = initial.iter().sum();
        if !total.is_one() {
            return Err(Error::InvariantViolation(format!(
                "initial distribution sums to {}, not 1",
                ratio::format(&total)
            )));
        }
        Ok(MeasureVertex { carrier, initial })
    }

    /// The future law started at state `q`.
    pub fn point_mass(carrier: Arc<GFunction>, q: usize) -> Self {
        let mut initial = vec![ratio::zero(); carrier.presentation().num_states()];
        initial[q] = ratio::one();
        MeasureVertex { carrier, initial }
    }

    pub fn carrier(&self) -> &Arc<GFunction> {
        &self.carrier
    }

    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.carrier.presentation().alphabet()
    }

    /// `μ(C(a))`.
    pub fn cylinder(&self, a: &[usize]) -> Rational {
        a.iter()
            .fold(self.initial.clone(), |m, &s| push_mass(&self.carrier, &m, s))
            .iter()
            .sum()
    }

    /// `τ(σ)μ`, the conditional law given `C(σ)`, shifted.
    pub fn tau(&self, symbol: usize) -> Result<MeasureVertex> {
        let moved = push_mass(&self.carrier, &self.initial, symbol);
        let mass: Rational = moved.iter().sum();
        if mass.is_zero() {
            return Err(Error::ZeroMass(format!("C({})", self.alphabet().name(symbol))));
        }
        Ok(MeasureVertex {
            carrier: self.carrier.clone(),
            initial: moved.into_iter().map(|m| m / &mass).collect(),
        })
    }

    /// Nonzero cylinder values up to `depth`, including the empty word.
    pub fn cylinder_table(&self, depth: usize) -> BTreeMap<Word, Rational> {
        let mut out = BTreeMap::new();
        let mut stack = vec![(Word::empty(), self.initial.clone())];
        while let Some((w, mass)) = stack.pop() {
            let v: Rational = mass.iter().sum();
            if v.is_zero() {
                continue;
            }
            out.insert(w.clone(), v);
            if w.len() < depth {
                for s in 0..self.alphabet().len() {
                    stack.push((w.pushed(s), push_mass(&self.carrier, &mass, s)));
                }
            }
        }
        out
    }
}

fn require_same_alphabet(a: &Alphabet, b: &Alphabet) -> Result<()> {
    if a.names() != b.names() {
        return Err(Error::DomainMismatch("measures live on different alphabets".into()));
    }
    Ok(())
}

/// `d_k(μ, ν) = max_{a ∈ Σ^k} |μ(C(a)) − ν(C(a))|`.
pub fn dk_distance(mu: &MeasureVertex, nu: &MeasureVertex, k: usize) -> Result<Rational> {
    require_same_alphabet(mu.alphabet(), nu.alphabet())?;
    let mut best = ratio::zero();
    let mut stack = vec![(0usize, mu.initial.clone(), nu.initial.clone())];
    while let Some((n, m, v)) = stack.pop() {
        if n == k {
            let d = ratio::abs_diff(&m.iter().sum(), &v.iter().sum());
            if d > best {
                best = d;
            }
            continue;
        }
        for s in 0..mu.alphabet().len() {
            stack.push((n + 1, push_mass(&mu.carrier, &m, s), push_mass(&nu.carrier, &v, s)));
        }
    }
    Ok(best)
}

/// Exact equality of two measures on all cylinders. The difference of the two
/// weighted automata is explored until its reachable span stops growing.
pub fn same_measure(mu: &MeasureVertex, nu: &MeasureVertex) -> bool {
    if mu.alphabet().names() != nu.alphabet().names() {
        return false;
    }
    let split = mu.initial.len();
    let start: Vec<Rational> = mu.initial.iter().cloned().chain(nu.initial.iter().map(|x| -x)).collect();
    let mut basis = Basis::default();
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        if !basis.insert(v.clone()) {
            continue;
        }
        if !v.iter().sum::<Rational>().is_zero() {
            return false;
        }
        for s in 0..mu.alphabet().len() {
            let a = push_mass(&mu.carrier, &v[..split], s);
            let b = push_mass(&nu.carrier, &v[split..], s);
            queue.push_back(a.into_iter().chain(b).collect());
        }
    }
    true
}

/// Named measure vertices over one carrier.
#[derive(Clone, Debug)]
pub struct VertexSet {
    carrier: Arc<GFunction>,
    names: Vec<String>,
    vertices: Vec<MeasureVertex>,
}

impl VertexSet {
    pub fn new(carrier: Arc<GFunction>, entries: Vec<(String, Vec<Rational>)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("vertex set is empty".into()));
        }
        let mut names = Vec::new();
        let mut vertices = Vec::new();
        for (name, initial) in entries {
            if names.contains(&name) {
                return Err(Error::InvalidArgument(format!("duplicate vertex `{name}`")));
            }
            vertices.push(MeasureVertex::new(carrier.clone(), initial)?);
            names.push(name);
        }
        Ok(VertexSet {
            carrier,
            names,
            vertices,
        })
    }

    pub fn carrier(&self) -> &Arc<GFunction> {
        &self.carrier
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.carrier.presentation().alphabet()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertices(&self) -> &[MeasureVertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &MeasureVertex {
        &self.vertices[i]
    }

    pub fn index_of(&self, mu: &MeasureVertex) -> Option<usize> {
        self.vertices.iter().position(|v| same_measure(v, mu))
    }

    /// `trans[i][σ]`: the index of `τ(σ)μ_i` when `μ_i(C(σ)) > 0`.
    pub fn transitions(&self) -> Result<Vec<Vec<Option<usize>>>> {
        let k = self.alphabet().len();
        let mut out = Vec::with_capacity(self.len());
        for (i, v) in self.vertices.iter().enumerate() {
            let mut row = Vec::with_capacity(k);
            for s in 0..k {
                if v.cylinder(&[s]).is_zero() {
                    row.push(None);
                    continue;
                }
                let t = v.tau(s)?;
                let j = self.index_of(&t).ok_or_else(|| {
                    Error::NotTransitionComplete(format!("τ({}) of `{}` is not in the set", self.alphabet().name(s), self.names[i]))
                })?;
                row.push(Some(j));
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Index of the first vertex with the same measure, per vertex.
    fn measure_classes(&self) -> Vec<usize> {
        (0..self.len())
            .map(|i| (0..=i).find(|&j| same_measure(&self.vertices[i], &self.vertices[j])).expect("reflexive"))
            .collect()
    }
}

/// The vertex set read as a Shannon graph: `μ →σ τ(σ)μ`.
#[derive(Clone, Debug)]
struct MeasureGraph {
    trans: Vec<Vec<Option<usize>>>,
    symbols: usize,
}

type Members = BTreeSet<usize>;

impl MeasureGraph {
    fn new(set: &VertexSet) -> Result<Self> {
        Ok(MeasureGraph {
            trans: set.transitions()?,
            symbols: set.alphabet().len(),
        })
    }

    fn all(&self) -> Members {
        (0..self.trans.len()).collect()
    }

    fn image(&self, s: &Members, symbol: usize) -> Option<Members> {
        let out: Members = s.iter().filter_map(|&i| self.trans[i][symbol]).collect();
        (!out.is_empty()).then_some(out)
    }

    fn image_word(&self, s: &Members, w: &[usize]) -> Option<Members> {
        limit::run(s, w, &|m: &Members, a| self.image(m, a))
    }

    fn past_limit(&self, past: &EventuallyPeriodicPast) -> Option<Members> {
        limit::periodic_limit(&self.all(), past, &|m: &Members, a| self.image(m, a))
    }

    /// Every `𝓜(x⁻)` with a witness past.
    fn family(&self) -> BTreeMap<Members, EventuallyPeriodicPast> {
        limit::limits(&self.all(), self.symbols, &|m: &Members, a| self.image(m, a), &|_, _| true)
    }

    fn words(&self, n: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        let mut stack = vec![(Word::empty(), self.all())];
        while let Some((w, m)) = stack.pop() {
            if w.len() == n {
                out.insert(w);
                continue;
            }
            for s in 0..self.symbols {
                if let Some(next) = self.image(&m, s) {
                    stack.push((w.pushed(s), next));
                }
            }
        }
        out
    }
}

/// `𝓜(x⁻)` at resolution `(k, ε)`: vertices within `d_k ≤ ε` of the exact
/// limit of the images `τ(x⁻_(−I,0])𝓜`.
pub fn m_of_past(set: &VertexSet, past: &EventuallyPeriodicPast, k: usize, eps: &Rational) -> Result<Vec<usize>> {
    let graph = MeasureGraph::new(set)?;
    let exact = graph
        .past_limit(past)
        .ok_or_else(|| Error::NotAdmissible(past.render(set.alphabet())))?;
    close_to(set, &exact, k, eps)
}

fn close_to(set: &VertexSet, exact: &Members, k: usize, eps: &Rational) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..set.len() {
        if exact.contains(&i) {
            out.push(i);
            continue;
        }
        for &j in exact {
            if dk_distance(set.vertex(i), set.vertex(j), k)? <= *eps {
                out.push(i);
                break;
            }
        }
    }
    Ok(out)
}

/// Number of distinct length-`n` marginals among `members`.
fn marginal_count(set: &VertexSet, members: &[usize], n: usize) -> Result<usize> {
    let mut reps: Vec<usize> = Vec::new();
    for &i in members {
        let mut new = true;
        for &j in &reps {
            if dk_distance(set.vertex(i), set.vertex(j), n)?.is_zero() {
                new = false;
                break;
            }
        }
        if new {
            reps.push(i);
        }
    }
    Ok(reps.len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PastSample {
    pub past: EventuallyPeriodicPast,
    pub members: Vec<usize>,
    /// Distinct `n`-marginals of `𝓜(x⁻)` for `n = 1..=k`.
    pub marginal_counts: Vec<usize>,
    /// All members are the same measure.
    pub in_d_infinity: bool,
}

impl PastSample {
    /// Membership in `D⁻ₙ` for `1 ≤ n ≤ k`.
    pub fn in_d(&self, n: usize) -> bool {
        self.marginal_counts.get(n - 1) == Some(&1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractivityReport {
    pub k: usize,
    pub eps: Rational,
    pub cond_i: bool,
    /// `(vertex, predecessor, symbol)` with `τ(symbol) predecessor = vertex`.
    pub cond_i_witnesses: Vec<(usize, usize, usize)>,
    pub cond_i_failures: Vec<usize>,
    pub samples: Vec<PastSample>,
    pub cond_ii: bool,
    /// Admissible `k`-words that no synchronizing past ends in.
    pub cond_ii_failures: Vec<Word>,
    pub cond_iii: bool,
    /// `(past, vertex)` with the vertex in `𝓜(past)` but not `ε`-approximated
    /// by synchronizing pasts sharing the last `k` symbols.
    pub cond_iii_failures: Vec<(EventuallyPeriodicPast, usize)>,
}

impl ContractivityReport {
    pub fn holds(&self) -> bool {
        self.cond_i && self.cond_ii && self.cond_iii
    }
}

pub const DEFAULT_K: usize = 4;

pub fn default_eps() -> Rational {
    ratio::frac(1, 1024)
}

/// Checks conditions (I), (II), (III) at resolution `(k, ε)`. When `pasts` is
/// empty, the witness pasts of every `𝓜(x⁻)` are sampled.
pub fn check_residually_contractive(
    set: &VertexSet,
    k: usize,
    eps: &Rational,
    pasts: &[EventuallyPeriodicPast],
) -> Result<ContractivityReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let graph = MeasureGraph::new(set)?;
    let class = set.measure_classes();
    let sync = |m: &Members| m.iter().all(|&i| class[i] == class[*m.iter().next().expect("nonempty")]);

    let mut witnesses = Vec::new();
    let mut failures = Vec::new();
    for v in 0..set.len() {
        let found = (0..set.len())
            .flat_map(|p| (0..graph.symbols).map(move |s| (p, s)))
            .find(|&(p, s)| graph.trans[p][s].is_some_and(|t| class[t] == class[v]));
        match found {
            Some((p, s)) => witnesses.push((v, p, s)),
            None => failures.push(v),
        }
    }

    let family = graph.family();
    let sampled: Vec<EventuallyPeriodicPast> = if pasts.is_empty() {
        family.values().cloned().collect()
    } else {
        pasts.to_vec()
    };
    let mut samples = Vec::new();
    for past in sampled {
        let exact = graph
            .past_limit(&past)
            .ok_or_else(|| Error::NotAdmissible(past.render(set.alphabet())))?;
        let members = close_to(set, &exact, k, eps)?;
        let marginal_counts = (1..=k).map(|n| marginal_count(set, &members, n)).collect::<Result<_>>()?;
        let in_d_infinity = sync(&members.iter().copied().collect());
        samples.push(PastSample {
            past,
            members,
            marginal_counts,
            in_d_infinity,
        });
    }

    // Synchronizing limits reached after reading `w`, from any member of the family.
    let synced_after = |w: &Word| -> Vec<usize> {
        family
            .keys()
            .filter_map(|f| graph.image_word(f, w))
            .filter(|m| sync(m))
            .map(|m| *m.iter().next().expect("nonempty"))
            .collect()
    };

    let cond_ii_failures: Vec<Word> = graph.words(k).into_iter().filter(|w| synced_after(w).is_empty()).collect();

    let mut cond_iii_failures = Vec::new();
    for (members, past) in &family {
        let w = past.suffix(k);
        let targets = synced_after(&w);
        for &m in members {
            let mut ok = false;
            for &t in &targets {
                if dk_distance(set.vertex(t), set.vertex(m), k)? <= *eps {
                    ok = true;
                    break;
                }
            }
            if !ok {
                cond_iii_failures.push((past.clone(), m));
            }
        }
    }

    Ok(ContractivityReport {
        k,
        eps: eps.clone(),
        cond_i: failures.is_empty(),
        cond_i_witnesses: witnesses,
        cond_i_failures: failures,
        samples,
        cond_ii: cond_ii_failures.is_empty(),
        cond_ii_failures,
        cond_iii: cond_iii_failures.is_empty(),
        cond_iii_failures,
    })
}

/// `g_𝓜(x⁻, α) = μ(x⁻)(C(α))`, carried by the graph whose vertices are the
/// measures of the set.
pub fn g_from_m(set: &VertexSet, k: usize, eps: &Rational) -> Result<GFunction> {
    let report = check_residually_contractive(set, k, eps, &[])?;
    if !report.holds() {
        let which: Vec<&str> = [
            (!report.cond_i).then_some("(I)"),
            (!report.cond_ii).then_some("(II)"),
            (!report.cond_iii).then_some("(III)"),
        ]
        .into_iter()
        .flatten()
        .collect();
        return Err(Error::NotContractive(format!("condition {} fails", which.join(", "))));
    }
    let trans = set.transitions()?;
    let edges: Vec<(usize, usize, usize)> = trans
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().filter_map(move |(s, t)| t.map(|t| (i, s, t))))
        .collect();
    let pres = SoficPresentation::new(set.alphabet().clone(), set.names().to_vec(), &edges)?;
    let weights = trans
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(s, t)| t.map(|_| set.vertex(i).cylinder(&[s])))
                .collect()
        })
        .collect();
    GFunction::new(pres, weights)
}

/// `𝓜(g)`: the future laws started at each state, with equal laws merged.
/// Transitions of point masses are point masses, so the set is closed.
/// Zero-weight edges carry no mass and are absent from the measure graph.
pub fn m_from_g(g: &GFunction) -> VertexSet {
    let carrier = Arc::new(g.clone());
    let pres = g.presentation();
    let mut names = Vec::new();
    let mut vertices: Vec<MeasureVertex> = Vec::new();
    for q in 0..pres.num_states() {
        let v = MeasureVertex::point_mass(carrier.clone(), q);
        if !vertices.iter().any(|u| same_measure(u, &v)) {
            names.push(pres.state_name(q).to_string());
            vertices.push(v);
        }
    }
    VertexSet {
        carrier,
        names,
        vertices,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::ratio::frac;

    fn w(s: &str) -> Word {
        Word::new(s.bytes().map(|b| (b - b'0') as usize).collect())
    }

    fn past(cycle: &str, tail: &str) -> EventuallyPeriodicPast {
        EventuallyPeriodicPast::new(w(tail), w(cycle)).unwrap()
    }

    fn bern(p: Rational) -> MeasureVertex {
        MeasureVertex::point_mass(Arc::new(examples::bernoulli(p)), 0)
    }

    #[test]
    fn cylinders_and_tau() {
        let b = bern(frac(1, 2));
        assert_eq!(b.cylinder(&w("01")), frac(1, 4));
        assert!(same_measure(&b.tau(1).unwrap(), &b));
        let gm = Arc::new(examples::golden_mean_g());
        let a = MeasureVertex::point_mass(gm.clone(), 0);
        let bv = MeasureVertex::point_mass(gm, 1);
        assert_eq!(a.cylinder(&w("11")), ratio::zero());
        assert_eq!(a.cylinder(&w("10")), frac(1, 2));
        assert!(same_measure(&a.tau(1).unwrap(), &bv));
        assert!(matches!(bv.tau(1), Err(Error::ZeroMass(_))));
        for x in Word::all(2, 3) {
            let t = a.tau(0).unwrap();
            assert_eq!(t.cylinder(&x) * a.cylinder(&[0]), a.cylinder(&w("0").concat(&x)));
        }
    }

    #[test]
    fn distances() {
        let h = bern(frac(1, 2));
        let t = bern(frac(1, 3));
        assert_eq!(dk_distance(&h, &h, 3).unwrap(), ratio::zero());
        assert_eq!(dk_distance(&h, &t, 1).unwrap(), frac(1, 6));
        // Bernoulli(1/3) gives P(1) = 1/3, so "00" has mass 4/9 against 1/4.
        assert_eq!(dk_distance(&h, &t, 2).unwrap(), frac(7, 36));
        assert!(!same_measure(&h, &t));
    }

    #[test]
    fn golden_mean_vertex_set() {
        let g = examples::golden_mean_g();
        let set = m_from_g(&g);
        assert_eq!(set.names(), &["A".to_string(), "B".to_string()]);
        assert_eq!(m_of_past(&set, &past("0", ""), 4, &default_eps()).unwrap(), vec![0]);
        assert_eq!(m_of_past(&set, &past("0", "1"), 4, &default_eps()).unwrap(), vec![1]);
        let r = check_residually_contractive(&set, 4, &default_eps(), &[]).unwrap();
        assert!(r.holds());
        assert!(r.cond_i_witnesses.contains(&(0, 0, 0)));
        assert!(r.cond_i_witnesses.contains(&(1, 0, 1)));
        let back = g_from_m(&set, 4, &default_eps()).unwrap();
        assert!(back.equivalent(&g));
    }

    #[test]
    fn bernoulli_singleton() {
        let g = examples::uniform_full_g();
        let set = m_from_g(&g);
        assert_eq!(set.len(), 1);
        let r = check_residually_contractive(&set, 4, &default_eps(), &[past("01", "")]).unwrap();
        assert!(r.holds());
        assert!(r.samples[0].in_d_infinity);
        assert!(g_from_m(&set, 4, &default_eps()).unwrap().equivalent(&g));
    }

    #[test]
    fn even_shift_unsynchronized_past() {
        let set = m_from_g(&examples::even_g());
        assert_eq!(set.len(), 2);
        let r = check_residually_contractive(&set, 4, &default_eps(), &[past("1", ""), past("0", "")]).unwrap();
        assert!(r.holds());
        assert!(!r.samples[0].in_d(1));
        assert_eq!(r.samples[0].marginal_counts[0], 2);
        assert!(r.samples[1].in_d_infinity);
    }

    #[test]
    fn incomplete_set_is_rejected() {
        let gm = Arc::new(examples::golden_mean_g());
        let set = VertexSet::new(gm, vec![("A".into(), vec![ratio::one(), ratio::zero()])]).unwrap();
        assert!(matches!(set.transitions(), Err(Error::NotTransitionComplete(_))));
    }
}
