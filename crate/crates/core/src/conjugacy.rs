//! Bipartite codings between presentations and transport of g-functions and
//! g-measures along them.
//!
//! A coding splits each domain symbol `σ` into halves `ψ(σ) = (δ, δ̃)` and each
//! codomain symbol into `ψ̃(σ̃) = (δ̃, δ)`. The conjugacy reads the second half
//! of `σ_i` together with the first half of `σ_{i+1}`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gfunction::GFunction;
use crate::gmeasure::ShiftMeasureTable;
use crate::measure_graph::MeasureVertex;
use crate::presentation::SoficPresentation;
use crate::ratio::{self, Rational};
use crate::symbolic::{language_words, Alphabet, EventuallyPeriodicPast, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteCoding {
    domain: SoficPresentation,
    delta: Alphabet,
    delta_t: Alphabet,
    psi: Vec<(usize, usize)>,
    psi_t: Vec<(usize, usize)>,
    codomain: SoficPresentation,
    /// Codomain state index → (domain state, first half of the next symbol).
    states: Vec<(usize, usize)>,
}

impl BipartiteCoding {
    /// `psi[σ] = (δ, δ̃)` over the domain alphabet, `psi_t[σ̃] = (δ̃, δ)` over
    /// `codomain_alphabet`. Both specification identities are checked.
    pub fn new(
        domain: SoficPresentation,
        delta: Alphabet,
        delta_t: Alphabet,
        codomain_alphabet: Alphabet,
        psi: Vec<(usize, usize)>,
        psi_t: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if delta.names().iter().any(|n| delta_t.index(n).is_ok()) {
            return Err(Error::InvariantViolation("half alphabets are not disjoint".into()));
        }
        if psi.len() != domain.alphabet().len() || psi_t.len() != codomain_alphabet.len() {
            return Err(Error::InvalidArgument("specification does not cover the alphabet".into()));
        }
        let injective = |v: &[(usize, usize)]| v.iter().collect::<BTreeSet<_>>().len() == v.len();
        if !injective(&psi) || !injective(&psi_t) {
            return Err(Error::InvariantViolation("specification is not injective".into()));
        }
        if psi.iter().any(|&(d, e)| d >= delta.len() || e >= delta_t.len())
            || psi_t.iter().any(|&(e, d)| e >= delta_t.len() || d >= delta.len())
        {
            return Err(Error::InvalidArgument("specification uses an unknown half symbol".into()));
        }
        let middles: BTreeSet<(usize, usize)> = language_words(&domain, 2)
            .into_iter()
            .map(|w| (psi[w[0]].1, psi[w[1]].0))
            .collect();
        let images: BTreeSet<(usize, usize)> = psi_t.iter().copied().collect();
        if middles != images {
            return Err(Error::InvariantViolation(
                "specification identity fails: middle halves of 2-blocks differ from ψ̃(Σ̃)".into(),
            ));
        }

        let mut states = Vec::new();
        for q in 0..domain.num_states() {
            let halves: BTreeSet<usize> =
                (0..psi.len()).filter(|&s| domain.next(q, s).is_some()).map(|s| psi[s].0).collect();
            states.extend(halves.into_iter().map(|d| (q, d)));
        }
        let index: BTreeMap<(usize, usize), usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let names = states
            .iter()
            .map(|&(q, d)| format!("{}|{}", domain.state_name(q), delta.name(d)))
            .collect();
        let mut edges = Vec::new();
        for (i, &(q, d)) in states.iter().enumerate() {
            for (st, &(e, d2)) in psi_t.iter().enumerate() {
                let Some(s) = psi.iter().position(|&p| p == (d, e)) else { continue };
                let Some(t) = domain.next(q, s) else { continue };
                if let Some(&j) = index.get(&(t, d2)) {
                    edges.push((i, st, j));
                }
            }
        }
        let codomain = SoficPresentation::new(codomain_alphabet, names, &edges)?;
        let coding = BipartiteCoding {
            domain,
            delta,
            delta_t,
            psi,
            psi_t,
            codomain,
            states,
        };
        let used: BTreeSet<(usize, usize)> = language_words(&coding.domain, 1).into_iter().map(|w| coding.psi[w[0]]).collect();
        let back: BTreeSet<(usize, usize)> = language_words(&coding.codomain, 2)
            .into_iter()
            .map(|w| (coding.psi_t[w[0]].1, coding.psi_t[w[1]].0))
            .collect();
        if used != back {
            return Err(Error::InvariantViolation("reverse specification identity fails".into()));
        }
        Ok(coding)
    }

    fn split(pres: &SoficPresentation, names: impl Fn(usize, usize) -> String) -> Result<Self> {
        let sigma = pres.alphabet();
        let delta = sigma.clone();
        let delta_t = Alphabet::new(sigma.names().iter().map(|n| format!("{n}'")))?;
        let psi = (0..sigma.len()).map(|s| (s, s)).collect();
        let blocks: Vec<Word> = language_words(pres, 2).into_iter().collect();
        let codomain_alphabet = Alphabet::new(blocks.iter().map(|b| names(b[0], b[1])))?;
        let psi_t = blocks.iter().map(|b| (b[0], b[1])).collect();
        BipartiteCoding::new(pres.clone(), delta, delta_t, codomain_alphabet, psi, psi_t)
    }

    /// `ψ(σ) = (σ, σ')`; codomain symbols are named `(a',b)` for 2-blocks `ab`.
    pub fn doubling(pres: &SoficPresentation) -> Result<Self> {
        let sigma = pres.alphabet().clone();
        Self::split(pres, |a, b| format!("({}',{})", sigma.name(a), sigma.name(b)))
    }

    /// Same splitting as [`BipartiteCoding::doubling`] with codomain symbols
    /// named by the 2-blocks themselves, as in the 2-block presentation.
    pub fn higher_block_pair(pres: &SoficPresentation) -> Result<Self> {
        let sigma = pres.alphabet().clone();
        Self::split(pres, |a, b| sigma.render(&[a, b]))
    }

    /// Renames symbols through `names` (in alphabet order), shifting by one.
    pub fn relabel(pres: &SoficPresentation, names: &[&str]) -> Result<Self> {
        let sigma = pres.alphabet();
        if names.len() != sigma.len() {
            return Err(Error::InvalidArgument("relabeling must name every symbol".into()));
        }
        let delta_t = Alphabet::new(["*"])?;
        let delta = if sigma.index("*").is_ok() {
            Alphabet::new(sigma.names().iter().map(|n| format!("{n}.")))?
        } else {
            sigma.clone()
        };
        let psi = (0..sigma.len()).map(|s| (s, 0)).collect();
        let psi_t = (0..sigma.len()).map(|s| (0, s)).collect();
        BipartiteCoding::new(pres.clone(), delta, delta_t, Alphabet::new(names.iter().copied())?, psi, psi_t)
    }

    /// The coding from the codomain back, exchanging the roles of ψ and ψ̃.
    pub fn reverse(&self) -> Result<Self> {
        self.reverse_on(self.codomain.clone())
    }

    /// The reverse coding read on another presentation of the codomain shift.
    fn reverse_on(&self, domain: SoficPresentation) -> Result<Self> {
        if domain.alphabet() != self.codomain.alphabet() {
            return Err(Error::DomainMismatch("reverse coding needs the codomain alphabet".into()));
        }
        BipartiteCoding::new(
            domain,
            self.delta_t.clone(),
            self.delta.clone(),
            self.domain.alphabet().clone(),
            self.psi_t.clone(),
            self.psi.clone(),
        )
    }

    pub fn domain(&self) -> &SoficPresentation {
        &self.domain
    }

    pub fn codomain(&self) -> &SoficPresentation {
        &self.codomain
    }

    pub fn delta(&self) -> &Alphabet {
        &self.delta
    }

    pub fn delta_tilde(&self) -> &Alphabet {
        &self.delta_t
    }

    pub fn psi(&self) -> &[(usize, usize)] {
        &self.psi
    }

    pub fn psi_tilde(&self) -> &[(usize, usize)] {
        &self.psi_t
    }

    /// The domain state and pending half behind a codomain state.
    pub fn codomain_state(&self, i: usize) -> (usize, usize) {
        self.states[i]
    }

    fn code_pair(&self, a: usize, b: usize) -> Option<usize> {
        let key = (self.psi[a].1, self.psi[b].0);
        self.psi_t.iter().position(|&p| p == key)
    }

    fn code(&self, w: &[usize]) -> Option<Word> {
        w.windows(2).map(|p| self.code_pair(p[0], p[1])).collect::<Option<Vec<_>>>().map(Word::new)
    }

    /// The 2-block code `σ̃_i = ψ̃⁻¹(δ̃(σ_i), δ(σ_{i+1}))`.
    pub fn apply_coding(&self, w: &Word) -> Result<Word> {
        if w.len() < 2 {
            return Err(Error::TooShort(w.len()));
        }
        self.domain.require_admissible(w)?;
        Ok(self.code(w).expect("specification identity covers admissible 2-blocks"))
    }

    /// The inverse 2-block code `σ_i = ψ⁻¹(δ(σ̃_{i−1}), δ̃(σ̃_i))`.
    pub fn inverse_coding(&self, w: &Word) -> Result<Word> {
        if w.len() < 2 {
            return Err(Error::TooShort(w.len()));
        }
        self.codomain.require_admissible(w)?;
        let out = w
            .windows(2)
            .map(|p| {
                let key = (self.psi_t[p[0]].1, self.psi_t[p[1]].0);
                self.psi.iter().position(|&q| q == key).expect("reverse identity covers admissible 2-blocks")
            })
            .collect();
        Ok(Word::new(out))
    }

    /// The image of the point `past · forward` with the past ending at
    /// coordinate 0; one forward symbol is consumed by the code.
    pub fn image_point(&self, past: &EventuallyPeriodicPast, forward: &Word) -> Result<(EventuallyPeriodicPast, Word)> {
        if forward.is_empty() {
            return Err(Error::TooShort(0));
        }
        let c = past.cycle();
        let body = c.concat(past.tail()).concat(&forward[..1]);
        let cycle = self.code(&c.pushed(c[0]));
        let tail = self.code(&body);
        let fwd = self.code(forward);
        match (cycle, tail, fwd) {
            (Some(cycle), Some(tail), Some(fwd)) => Ok((EventuallyPeriodicPast::new(tail, cycle)?, fwd)),
            _ => Err(Error::NotAdmissible(past.extended(forward).render(self.domain.alphabet()))),
        }
    }

    fn mass_with_half(&self, g: &GFunction, q: usize, d: usize) -> Rational {
        (0..self.psi.len())
            .filter(|&s| self.psi[s].0 == d)
            .filter_map(|s| g.weight(q, s))
            .sum()
    }

    /// Right side of the transport identity at codomain state `i` and `σ̃`:
    /// `Σ g(q, σ₁) g(τ(σ₁)q, σ₂)` over `σ₁σ₂` coding to `σ̃` with `δ(σ₁) = d`.
    fn joint_mass(&self, g: &GFunction, i: usize, st: usize) -> Rational {
        let (q, d) = self.states[i];
        let (e, d2) = self.psi_t[st];
        let Some(s1) = self.psi.iter().position(|&p| p == (d, e)) else {
            return ratio::zero();
        };
        match (g.weight(q, s1), self.domain.next(q, s1)) {
            (Some(w), Some(t)) => w * self.mass_with_half(g, t, d2),
            _ => ratio::zero(),
        }
    }

    /// The image `g̃` of `g`: at codomain state `(q, d)`,
    /// `g̃(σ̃) · Σ_{δ(σ₁) = d} g(q, σ₁) = Σ g(q, σ₁) g(τ(σ₁)q, σ₂)`.
    pub fn transport_g(&self, g: &GFunction) -> Result<GFunction> {
        if g.presentation() != &self.domain {
            return Err(Error::DomainMismatch("g-function is not carried by the coding's domain".into()));
        }
        let k = self.codomain.alphabet().len();
        let mut weights = vec![vec![None; k]; self.states.len()];
        for (i, &(q, d)) in self.states.iter().enumerate() {
            let den = self.mass_with_half(g, q, d);
            if den.is_zero() {
                return Err(Error::Unresolvable(format!(
                    "no weight leaves `{}` with first half `{}`",
                    self.domain.state_name(q),
                    self.delta.name(d)
                )));
            }
            for (st, slot) in weights[i].iter_mut().enumerate() {
                if self.codomain.next(i, st).is_some() {
                    *slot = Some(self.joint_mass(g, i, st) / &den);
                }
            }
        }
        GFunction::new(self.codomain.clone(), weights)
    }

    /// `(codomain state, σ̃)` pairs where the transport identity fails.
    pub fn identity_failures(&self, g: &GFunction, gt: &GFunction) -> Result<Vec<(usize, usize)>> {
        if g.presentation() != &self.domain || gt.presentation() != &self.codomain {
            return Err(Error::DomainMismatch("g-functions are not carried by the coding".into()));
        }
        let mut out = Vec::new();
        for (i, &(q, d)) in self.states.iter().enumerate() {
            let den = self.mass_with_half(g, q, d);
            for st in 0..self.codomain.alphabet().len() {
                let lhs = gt.weight(i, st).cloned().unwrap_or_else(ratio::zero) * &den;
                if lhs != self.joint_mass(g, i, st) {
                    out.push((i, st));
                }
            }
        }
        Ok(out)
    }

    /// The image table: `value(ã)` sums `value(a)` over `a` coding to `ã`.
    pub fn transport_measure(&self, table: &ShiftMeasureTable) -> Result<ShiftMeasureTable> {
        if table.alphabet.names() != self.domain.alphabet().names() {
            return Err(Error::DomainMismatch("table alphabet differs from the coding's domain".into()));
        }
        if table.depth < 2 {
            return Err(Error::DepthTooSmall {
                needed: 2,
                found: table.depth,
            });
        }
        let mut values: BTreeMap<Word, Rational> = BTreeMap::new();
        values.insert(Word::empty(), table.value(&[]).expect("depth ≥ 0"));
        for (a, v) in &table.values {
            if a.len() < 2 {
                continue;
            }
            match self.code(a) {
                Some(image) => *values.entry(image).or_insert_with(ratio::zero) += v,
                None if v.is_zero() => {}
                None => {
                    return Err(Error::InvariantViolation(format!(
                        "table charges `{}`, which has no image",
                        table.alphabet.render(a)
                    )))
                }
            }
        }
        Ok(ShiftMeasureTable {
            alphabet: self.codomain.alphabet().clone(),
            depth: table.depth - 1,
            values,
        })
    }
}

/// Conjugacy invariants of a g-function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeInvariantReport {
    /// Distinct values of `g` at resolved pasts on admissible symbols.
    pub range: BTreeSet<Rational>,
    /// Distinct future laws `μ₀(x⁻)` as cylinder tables to the given depth.
    pub future_tables: Vec<BTreeMap<Word, Rational>>,
    pub depth: usize,
}

impl RangeInvariantReport {
    /// The cardinality class of both ranges. Weighted graphs only express
    /// finite ranges, so this is always `"finite"`.
    pub fn class(&self) -> &'static str {
        "finite"
    }
}

pub fn range_invariants(g: &GFunction, depth: usize) -> RangeInvariantReport {
    let carrier = std::sync::Arc::new(g.clone());
    let mut tables: Vec<BTreeMap<Word, Rational>> = Vec::new();
    for q in 0..g.presentation().num_states() {
        let t = MeasureVertex::point_mass(carrier.clone(), q).cylinder_table(depth);
        if !tables.contains(&t) {
            tables.push(t);
        }
    }
    tables.sort();
    RangeInvariantReport {
        range: g.range(),
        future_tables: tables,
        depth,
    }
}

/// Bipartite codings whose endpoint presentations match.
#[derive(Clone, Debug)]
pub struct ConjugacyChain {
    steps: Vec<BipartiteCoding>,
}

impl ConjugacyChain {
    pub fn new(steps: Vec<BipartiteCoding>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidArgument("empty chain".into()));
        }
        for (i, pair) in steps.windows(2).enumerate() {
            if pair[0].codomain() != pair[1].domain() {
                return Err(Error::DomainMismatch(format!("step {} does not continue step {}", i + 1, i)));
            }
        }
        Ok(ConjugacyChain { steps })
    }

    pub fn steps(&self) -> &[BipartiteCoding] {
        &self.steps
    }

    /// The chain traversed backwards.
    pub fn reverse(&self) -> Result<Self> {
        // Each reversed step must start on the presentation the previous one built.
        let mut steps: Vec<BipartiteCoding> = Vec::with_capacity(self.steps.len());
        for c in self.steps.iter().rev() {
            let domain = steps.last().map_or_else(|| c.codomain.clone(), |s| s.codomain.clone());
            steps.push(c.reverse_on(domain)?);
        }
        ConjugacyChain::new(steps)
    }

    pub fn transport_g(&self, g: &GFunction) -> Result<GFunction> {
        self.steps.iter().try_fold(g.clone(), |g, c| c.transport_g(&g))
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.steps.iter().try_fold(w.clone(), |w, c| c.apply_coding(&w))
    }

    pub fn transport_measure(&self, table: &ShiftMeasureTable) -> Result<ShiftMeasureTable> {
        self.steps.iter().try_fold(table.clone(), |t, c| c.transport_measure(&t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::gmeasure::{stationary_g_measure, verify_g_measure};
    use crate::ratio::frac;

    fn w(s: &str) -> Word {
        Word::new(s.bytes().map(|b| (b - b'0') as usize).collect())
    }

    #[test]
    fn doubling_codes_pairs() {
        let c = BipartiteCoding::doubling(&examples::full_shift()).unwrap();
        let out = c.apply_coding(&w("01")).unwrap();
        assert_eq!(c.codomain().alphabet().render(&out), "(0',1)");
        let out = c.apply_coding(&w("00")).unwrap();
        assert_eq!(c.codomain().alphabet().render(&out), "(0',0)");
        assert_eq!(c.apply_coding(&w("0")), Err(Error::TooShort(1)));
        for a in language_words(c.domain(), 3) {
            let image = c.apply_coding(&a).unwrap();
            assert_eq!(c.inverse_coding(&image).unwrap(), Word::single(a[1]));
        }
    }

    #[test]
    fn specification_identity_is_enforced() {
        let gm = examples::golden_mean();
        let good = BipartiteCoding::higher_block_pair(&gm).unwrap();
        let mut psi_t = good.psi_tilde().to_vec();
        psi_t.push((1, 1));
        let sigma_t = Alphabet::new(["00", "01", "10", "11"]).unwrap();
        let bad = BipartiteCoding::new(gm, good.delta().clone(), good.delta_tilde().clone(), sigma_t, good.psi().to_vec(), psi_t);
        assert!(matches!(bad, Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn higher_block_codomain_matches_block_presentation() {
        let gm = examples::golden_mean();
        let c = BipartiteCoding::higher_block_pair(&gm).unwrap();
        let hb = crate::symbolic::higher_block(&gm, 2).unwrap();
        assert!(crate::presentation::same_language(c.codomain(), &hb.presentation));
    }

    #[test]
    fn transport_bernoulli_and_golden_mean() {
        let g = examples::uniform_full_g();
        let c = BipartiteCoding::doubling(g.presentation()).unwrap();
        let gt = c.transport_g(&g).unwrap();
        assert_eq!(gt.range(), BTreeSet::from([frac(1, 2)]));
        assert!(c.identity_failures(&g, &gt).unwrap().is_empty());

        let g = examples::golden_mean_g();
        let c = BipartiteCoding::higher_block_pair(g.presentation()).unwrap();
        let gt = c.transport_g(&g).unwrap();
        assert!(c.identity_failures(&g, &gt).unwrap().is_empty());
        assert_eq!(gt.range(), g.range());
        let t = stationary_g_measure(&g, 6).unwrap();
        let tt = c.transport_measure(&t).unwrap();
        assert_eq!(tt.depth, 5);
        assert!(verify_g_measure(&gt, &tt, 4).unwrap().passed());
        assert_eq!(range_invariants(&g, 6).future_tables.len(), 2);
        assert_eq!(range_invariants(&gt, 6).future_tables.len(), 2);
    }

    #[test]
    fn relabel_permutes_weights() {
        let g = examples::golden_mean_g();
        let c = BipartiteCoding::relabel(g.presentation(), &["a", "b"]).unwrap();
        let gt = c.transport_g(&g).unwrap();
        assert_eq!(gt.range(), g.range());
        let a = c.apply_coding(&w("0100")).unwrap();
        assert_eq!(c.codomain().alphabet().render(&a), "baa");
    }

    #[test]
    fn round_trip_is_the_shift() {
        let g = examples::even_g();
        let c = BipartiteCoding::doubling(g.presentation()).unwrap();
        let chain = ConjugacyChain::new(vec![c.clone(), c.reverse().unwrap()]).unwrap();
        assert_eq!(chain.apply(&w("0110")).unwrap(), w("11"));
        let back = chain.transport_g(&g).unwrap();
        assert_eq!(back.first_disagreement(&g), None);
        let t = stationary_g_measure(&g, 4).unwrap();
        assert!(matches!(
            chain.transport_measure(&ShiftMeasureTable { depth: 1, ..t.clone() }),
            Err(Error::DepthTooSmall { .. })
        ));
        assert_eq!(chain.transport_measure(&t).unwrap().depth, 2);
    }

    #[test]
    fn image_points_keep_eg_membership() {
        let g = examples::golden_mean_g();
        let c = BipartiteCoding::doubling(g.presentation()).unwrap();
        let gt = c.transport_g(&g).unwrap();
        let past = EventuallyPeriodicPast::new(w("1"), w("0")).unwrap();
        let (p2, f2) = c.image_point(&past, &w("0100")).unwrap();
        assert_eq!(g.eg_membership(&past, &w("0100"), 2).unwrap(), gt.eg_membership(&p2, &f2, 2).unwrap());
    }
}
