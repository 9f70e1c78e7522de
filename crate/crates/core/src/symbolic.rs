//! Alphabets, words, pasts and subshift specifications.
//!
//! Words are stored as symbol indices into a closed [`Alphabet`]. Left-infinite
//! pasts are only ever represented as eventually periodic rays
//! `…cycle·cycle·tail`, which is enough to reach every state-set limit a finite
//! presentation can produce.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::presentation::SoficPresentation;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut seen = BTreeSet::new();
        for s in &symbols {
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(Error::InvalidArgument(format!("bad symbol name `{s}`")));
            }
            if !seen.insert(s.as_str()) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn name(&self, symbol: usize) -> &str {
        &self.symbols[symbol]
    }

    pub fn names(&self) -> &[String] {
        &self.symbols
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.symbols
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// True when every symbol name is a single character, in which case words
    /// render without separators.
    pub fn is_compact(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    pub fn render(&self, word: &[usize]) -> String {
        let sep = if self.is_compact() { "" } else { "." };
        word.iter().map(|&s| self.name(s)).collect::<Vec<_>>().join(sep)
    }

    /// Inverse of [`Alphabet::render`]. Compact alphabets read one character
    /// per symbol; otherwise symbols are separated by `.` or whitespace.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::empty());
        }
        let symbols = if self.is_compact() {
            text.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| self.index(&c.to_string()))
                .collect::<Result<Vec<_>>>()?
        } else {
            text.split(|c: char| c == '.' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| self.index(t))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Word(symbols))
    }
}

/// A finite word over symbol indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(symbols: Vec<usize>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(symbol: usize) -> Self {
        Word(vec![symbol])
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<usize> {
        self.0
    }

    pub fn concat(&self, other: &[usize]) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Word(v)
    }

    pub fn pushed(&self, symbol: usize) -> Word {
        self.concat(&[symbol])
    }

    pub fn prepended(&self, symbol: usize) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(symbol);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    /// All words of length `n` over an alphabet of size `k`, in canonical order.
    pub fn all(k: usize, n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| (0..k).map(move |s| w.pushed(s)))
                .collect();
        }
        out
    }
}

impl Deref for Word {
    type Target = [usize];
    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

/// `x⁻ = …cycle·cycle·tail`, with the last symbol of `tail` at coordinate 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventuallyPeriodicPast {
    tail: Word,
    cycle: Word,
}

impl EventuallyPeriodicPast {
    pub fn new(tail: Word, cycle: Word) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidArgument("past cycle must be nonempty".into()));
        }
        Ok(EventuallyPeriodicPast { tail, cycle })
    }

    pub fn tail(&self) -> &Word {
        &self.tail
    }

    pub fn cycle(&self) -> &Word {
        &self.cycle
    }

    /// The past followed by the finite word `w`.
    pub fn extended(&self, w: &[usize]) -> Self {
        EventuallyPeriodicPast {
            tail: self.tail.concat(w),
            cycle: self.cycle.clone(),
        }
    }

    /// The last `n` symbols, oldest first.
    pub fn suffix(&self, n: usize) -> Word {
        let mut rev: Vec<usize> = self.tail.iter().rev().copied().collect();
        let mut c = self.cycle.iter().rev().cycle();
        while rev.len() < n {
            rev.push(*c.next().expect("cycle is nonempty"));
        }
        rev.truncate(n);
        rev.reverse();
        Word(rev)
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        format!("({})^∞·{}", alphabet.render(&self.cycle), alphabet.render(&self.tail))
    }
}

/// A past: either a finite word or an eventually periodic ray.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Past {
    Finite(Word),
    Periodic(EventuallyPeriodicPast),
}

impl Past {
    pub fn extended(&self, w: &[usize]) -> Past {
        match self {
            Past::Finite(a) => Past::Finite(a.concat(w)),
            Past::Periodic(p) => Past::Periodic(p.extended(w)),
        }
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        match self {
            Past::Finite(w) => alphabet.render(w),
            Past::Periodic(p) => p.render(alphabet),
        }
    }
}

impl From<Word> for Past {
    fn from(w: Word) -> Self {
        Past::Finite(w)
    }
}

impl From<EventuallyPeriodicPast> for Past {
    fn from(p: EventuallyPeriodicPast) -> Self {
        Past::Periodic(p)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Clone, Debug)]
pub enum SubshiftSpec {
    Sft { alphabet: Alphabet, forbidden: Vec<Word> },
    Sofic(SoficPresentation),
}

impl SubshiftSpec {
    pub fn sft(alphabet: Alphabet, forbidden: Vec<Word>) -> Result<Self> {
        if forbidden.iter().any(|w| w.is_empty()) {
            return Err(Error::InvalidArgument("forbidden words must be nonempty".into()));
        }
        if forbidden.iter().flat_map(|w| w.iter()).any(|&s| s >= alphabet.len()) {
            return Err(Error::InvalidArgument("forbidden word uses a symbol outside the alphabet".into()));
        }
        Ok(SubshiftSpec::Sft { alphabet, forbidden })
    }

    pub fn presentation(&self) -> Result<SoficPresentation> {
        match self {
            SubshiftSpec::Sofic(p) => Ok(p.clone()),
            SubshiftSpec::Sft { .. } => sft_to_presentation(self),
        }
    }
}

fn contains_forbidden(word: &[usize], forbidden: &[Word]) -> bool {
    forbidden
        .iter()
        .any(|f| f.len() <= word.len() && word.windows(f.len()).any(|w| w == f.symbols()))
}

/// Memory-graph presentation of an SFT: states are the allowed words of length
/// `m − 1` (the empty word when `m = 1`), and `u --σ--> (uσ)[1..]` whenever
/// `uσ` avoids every forbidden word. Inessential states are trimmed.
pub fn sft_to_presentation(spec: &SubshiftSpec) -> Result<SoficPresentation> {
    let (alphabet, forbidden) = match spec {
        SubshiftSpec::Sft { alphabet, forbidden } => (alphabet, forbidden),
        SubshiftSpec::Sofic(p) => return Ok(p.clone()),
    };
    let m = forbidden.iter().map(|w| w.len()).max().unwrap_or(1).max(1);
    let states: Vec<Word> = Word::all(alphabet.len(), m - 1)
        .into_iter()
        .filter(|w| !contains_forbidden(w, forbidden))
        .collect();
    let mut edges = Vec::new();
    for (i, u) in states.iter().enumerate() {
        for s in 0..alphabet.len() {
            let full = u.pushed(s);
            if contains_forbidden(&full, forbidden) {
                continue;
            }
            let target = full.slice(1, full.len());
            if let Some(j) = states.iter().position(|v| *v == target) {
                edges.push((i, s, j));
            }
        }
    }
    let names = states
        .iter()
        .map(|w| if w.is_empty() { "*".to_string() } else { alphabet.render(w) })
        .collect();
    SoficPresentation::trimmed(alphabet.clone(), names, &edges)
}

/// Label sequences of all length-`n` paths.
pub fn language_words(pres: &SoficPresentation, n: usize) -> BTreeSet<Word> {
    pres.words_from(&pres.all_states(), n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// `Γ⁺ₙ(a)` (forward) or `Γ⁻ₙ(a)` (backward).
pub fn extension_set(
    pres: &SoficPresentation,
    a: &Word,
    n: usize,
    direction: Direction,
) -> Result<BTreeSet<Word>> {
    pres.require_admissible(a)?;
    let all = pres.all_states();
    Ok(match direction {
        Direction::Forward => pres.words_from(&pres.image_word(&all, a), n),
        Direction::Backward => language_words(pres, n)
            .into_iter()
            .filter(|b| !pres.image_word(&all, &b.concat(a)).is_empty())
            .collect(),
    })
}

/// The `N`-block presentation together with the block alphabet's meaning.
#[derive(Clone, Debug)]
pub struct HigherBlock {
    pub presentation: SoficPresentation,
    /// `blocks[i]` is the base word carried by block symbol `i`.
    pub blocks: Vec<Word>,
    pub block_len: usize,
}

impl HigherBlock {
    /// The block map `w ↦ (w[i..i+N])ᵢ`.
    pub fn encode(&self, w: &Word) -> Result<Word> {
        if w.len() < self.block_len {
            return Err(Error::TooShort(self.block_len));
        }
        w.windows(self.block_len)
            .map(|b| {
                self.blocks
                    .iter()
                    .position(|x| x.symbols() == b)
                    .ok_or_else(|| Error::NotAdmissible(format!("{w}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word::new)
    }

    /// Inverse of [`HigherBlock::encode`] on block words with consistent overlaps.
    pub fn decode(&self, w: &Word) -> Result<Word> {
        let Some((&first, rest)) = w.split_first() else {
            return Ok(Word::empty());
        };
        let mut out = self.blocks[first].clone();
        let mut prev = first;
        for &b in rest {
            let (p, c) = (&self.blocks[prev], &self.blocks[b]);
            if p[1..] != c[..c.len() - 1] {
                return Err(Error::NotAdmissible(format!("{w}")));
            }
            out = out.pushed(c[c.len() - 1]);
            prev = b;
        }
        Ok(out)
    }
}

/// Higher-block presentation: states are pairs (state, last `N−1` symbols),
/// labels are admissible `N`-blocks.
pub fn higher_block(pres: &SoficPresentation, block_len: usize) -> Result<HigherBlock> {
    if block_len == 0 {
        return Err(Error::InvalidArgument("block length must be at least 1".into()));
    }
    if block_len == 1 {
        return Ok(HigherBlock {
            presentation: pres.clone(),
            blocks: (0..pres.alphabet().len()).map(Word::single).collect(),
            block_len,
        });
    }
    let alpha = pres.alphabet();
    let blocks: Vec<Word> = language_words(pres, block_len).into_iter().collect();
    let block_alphabet = Alphabet::new(blocks.iter().map(|b| alpha.render(b)))?;
    let all = pres.all_states();
    let mut states: Vec<(usize, Word)> = Vec::new();
    for u in language_words(pres, block_len - 1) {
        for q in pres.image_word(&all, &u).iter() {
            states.push((q, u.clone()));
        }
    }
    let mut edges = Vec::new();
    for (i, (q, u)) in states.iter().enumerate() {
        for s in 0..alpha.len() {
            let Some(q2) = pres.next(*q, s) else { continue };
            let block = u.pushed(s);
            let target = (q2, block.slice(1, block.len()));
            let j = states.iter().position(|x| *x == target).expect("target state enumerated");
            let b = blocks.iter().position(|x| *x == block).expect("block admissible");
            edges.push((i, b, j));
        }
    }
    let names = states
        .iter()
        .map(|(q, u)| format!("{}|{}", pres.state_name(*q), alpha.render(u)))
        .collect();
    Ok(HigherBlock {
        presentation: SoficPresentation::trimmed(block_alphabet, names, &edges)?,
        blocks,
        block_len,
    })
}
