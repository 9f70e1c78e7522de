//! Decreasing filtrations of a finite carrier, scale classes of weights, and
//! the bijection onto chains of normalized restrictions.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gfunction::GFunction;
use crate::ratio::{self, Rational};
use crate::symbolic::{EventuallyPeriodicPast, Past, Word};

/// `F_lo ⊇ … ⊇ F_hi` over carrier elements `0..n`, with `F_lo = F` and
/// `lo ≤ 0 ≤ hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationModel {
    carrier: Vec<String>,
    lo: i64,
    sets: Vec<BTreeSet<usize>>,
}

/// A weight per carrier element.
pub type SigmaFiniteWeights = Vec<Rational>;

/// `μ_i` for `i` in the window, each a probability vector supported on `F_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedChain {
    pub lo: i64,
    pub measures: Vec<Vec<Rational>>,
}

impl NormalizedChain {
    pub fn get(&self, i: i64) -> Option<&[Rational]> {
        usize::try_from(i - self.lo).ok().and_then(|k| self.measures.get(k)).map(Vec::as_slice)
    }
}

impl FiltrationModel {
    pub fn new(carrier: Vec<String>, lo: i64, sets: Vec<BTreeSet<usize>>) -> Result<Self> {
        let hi = lo + sets.len() as i64 - 1;
        if sets.is_empty() || lo > 0 || hi < 0 {
            return Err(Error::InvariantViolation("window must contain 0".into()));
        }
        let n = carrier.len();
        if carrier.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::InvalidArgument("duplicate carrier element".into()));
        }
        if sets.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidArgument("set member outside the carrier".into()));
        }
        if sets[0].len() != n {
            return Err(Error::InvariantViolation("the first set must be the whole carrier".into()));
        }
        for (k, pair) in sets.windows(2).enumerate() {
            if !pair[1].is_subset(&pair[0]) {
                return Err(Error::InvariantViolation(format!(
                    "F_{} is not contained in F_{}",
                    lo + k as i64 + 1,
                    lo + k as i64
                )));
            }
        }
        Ok(FiltrationModel { carrier, lo, sets })
    }

    /// Carrier elements named `0..n`.
    pub fn unnamed(n: usize, lo: i64, sets: Vec<BTreeSet<usize>>) -> Result<Self> {
        FiltrationModel::new((0..n).map(|i| i.to_string()).collect(), lo, sets)
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.sets.len() as i64 - 1
    }

    pub fn set(&self, i: i64) -> &BTreeSet<usize> {
        &self.sets[(i - self.lo) as usize]
    }

    pub fn sets(&self) -> &[BTreeSet<usize>] {
        &self.sets
    }

    fn mass(weights: &[Rational], set: &BTreeSet<usize>) -> Rational {
        set.iter().map(|&x| &weights[x]).sum()
    }

    fn check_len(&self, weights: &[Rational]) -> Result<()> {
        if weights.len() != self.carrier.len() {
            return Err(Error::InvalidArgument("weights do not match the carrier".into()));
        }
        if weights.iter().any(|w| *w < ratio::zero()) {
            return Err(Error::InvariantViolation("negative weight".into()));
        }
        Ok(())
    }

    /// `η[μ] = (μ ↾ F_i / μ(F_i))_i`.
    pub fn eta(&self, weights: &SigmaFiniteWeights) -> Result<NormalizedChain> {
        self.check_len(weights)?;
        let mut measures = Vec::with_capacity(self.sets.len());
        for (k, set) in self.sets.iter().enumerate() {
            let m = Self::mass(weights, set);
            if m.is_zero() {
                return Err(Error::ZeroMass(format!("F_{}", self.lo + k as i64)));
            }
            measures.push(
                (0..weights.len())
                    .map(|x| if set.contains(&x) { &weights[x] / &m } else { ratio::zero() })
                    .collect(),
            );
        }
        Ok(NormalizedChain { lo: self.lo, measures })
    }

    /// Checks the chain conditions: probability vectors on `F_i`,
    /// `μ_i(F_{i+1}) > 0`, and `μ_{i+1} = μ_i ↾ F_{i+1} / μ_i(F_{i+1})`.
    pub fn validate_chain(&self, chain: &NormalizedChain) -> Result<()> {
        if chain.lo != self.lo || chain.measures.len() != self.sets.len() {
            return Err(Error::InvariantViolation("chain window differs from the model".into()));
        }
        for (k, (m, set)) in chain.measures.iter().zip(&self.sets).enumerate() {
            let i = self.lo + k as i64;
            self.check_len(m)?;
            if (0..m.len()).any(|x| !set.contains(&x) && !m[x].is_zero()) || !Self::mass(m, set).is_one() {
                return Err(Error::InvariantViolation(format!("μ_{i} is not a probability on F_{i}")));
            }
            if let Some(next) = self.sets.get(k + 1) {
                let r = Self::mass(m, next);
                if r.is_zero() {
                    return Err(Error::ZeroMass(format!("μ_{i}(F_{})", i + 1)));
                }
                let restricted: Vec<Rational> = (0..m.len())
                    .map(|x| if next.contains(&x) { &m[x] / &r } else { ratio::zero() })
                    .collect();
                if restricted != chain.measures[k + 1] {
                    return Err(Error::InvariantViolation(format!("μ_{} is not the normalized restriction of μ_{i}", i + 1)));
                }
            }
        }
        Ok(())
    }

    /// A representative of `η⁻¹`: `μ ↾ F_0 = μ_0` and
    /// `μ ↾ (F_{−k} ∖ F_{−k+1}) = μ_{−k} ↾ (F_{−k} ∖ F_{−k+1}) / μ_{−k}(F_0)`.
    pub fn eta_inverse(&self, chain: &NormalizedChain) -> Result<SigmaFiniteWeights> {
        self.validate_chain(chain)?;
        let f0 = self.set(0);
        let mut out = vec![ratio::zero(); self.carrier.len()];
        let mu0 = chain.get(0).expect("window contains 0");
        for &x in f0 {
            out[x] = mu0[x].clone();
        }
        for k in 1..=-self.lo {
            let shell: Vec<usize> = self.set(-k).difference(self.set(-k + 1)).copied().collect();
            let mk = chain.get(-k).expect("inside window");
            let m0 = Self::mass(mk, f0);
            if m0.is_zero() {
                return Err(Error::ZeroMass(format!("μ_{}(F_0)", -k)));
            }
            for x in shell {
                out[x] = &mk[x] / &m0;
            }
        }
        Ok(out)
    }
}

/// `μ′ = αμ` for some `α > 0`.
pub fn scale_equivalent(a: &[Rational], b: &[Rational]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some(k) = a.iter().position(|x| !x.is_zero()) else {
        return b.iter().all(Zero::is_zero);
    };
    if b[k].is_zero() {
        return false;
    }
    let alpha = &b[k] / &a[k];
    alpha > ratio::zero() && a.iter().zip(b).all(|(x, y)| x * &alpha == *y)
}

/// The chain `(μ^(g)_i(x_(−∞,i]))_i` of the point `past · forward` on the
/// window `−|forward| ≤ i ≤ 0`, with coordinate 0 at the end of `forward`.
/// The carrier is the set of continuations of length `|forward| + horizon`
/// after the past, and `F_i` keeps those that agree with the point up to `i`.
pub fn g_chain(
    g: &GFunction,
    past: &EventuallyPeriodicPast,
    forward: &Word,
    horizon: usize,
) -> Result<(FiltrationModel, NormalizedChain)> {
    let n = forward.len();
    let base = Past::Periodic(past.clone());
    let start = g.candidates(&base)?;
    let words: Vec<Word> = g.presentation().words_from(&start, n + horizon).into_iter().collect();
    let lo = -(n as i64);
    let mut sets = Vec::with_capacity(n + 1);
    let mut measures = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let prefix = &forward[..j];
        let set: BTreeSet<usize> = (0..words.len()).filter(|&x| words[x].starts_with(prefix)).collect();
        let here = base.extended(prefix);
        let mut m = vec![ratio::zero(); words.len()];
        for &x in &set {
            m[x] = g.mu_g_cylinder(&here, &words[x][j..])?;
        }
        sets.push(set);
        measures.push(m);
    }
    let carrier = words.iter().map(|w| g.presentation().alphabet().render(w)).collect();
    let model = FiltrationModel::new(carrier, lo, sets)?;
    let chain = NormalizedChain { lo, measures };
    model.validate_chain(&chain)?;
    Ok((model, chain))
}
