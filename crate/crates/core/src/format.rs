//! Text file formats for presentations, forbidden words, weights, codings and
//! measure vertices, plus JSON forms of tables, filtration models and chains.
//!
//! Text formats are line based. `#` starts a comment, blank lines are skipped
//! and fields are separated by whitespace.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::conjugacy::BipartiteCoding;
use crate::error::{Error, Result};
use crate::filtration::{FiltrationModel, NormalizedChain, SigmaFiniteWeights};
use crate::gfunction::GFunction;
use crate::gmeasure::ShiftMeasureTable;
use crate::measure_graph::VertexSet;
use crate::presentation::SoficPresentation;
use crate::ratio::{self, Rational};
use crate::symbolic::{Alphabet, SubshiftSpec, Word};

/// A non-blank line with its comment stripped, split into fields that keep
/// their 1-based column.
struct Line<'a> {
    number: usize,
    fields: Vec<(usize, &'a str)>,
}

impl Line<'_> {
    fn error(&self, field: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.number,
            column: self.fields.get(field).map_or(1, |f| f.0),
            message: message.into(),
        }
    }

    fn at(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    /// `key:` as the first field, if present.
    fn keyword(&self) -> Option<&str> {
        self.fields.first().and_then(|(_, f)| f.strip_suffix(':'))
    }
}

fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut fields = Vec::new();
        let mut start = None;
        for (byte, c) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(byte),
                (true, Some(s)) => {
                    fields.push((content[..s].chars().count() + 1, &content[s..byte]));
                    start = None;
                }
                _ => {}
            }
        }
        if !fields.is_empty() {
            out.push(Line { number: i + 1, fields });
        }
    }
    out
}

fn parse_alphabet_line(line: &Line) -> Result<Alphabet> {
    if line.fields.len() < 2 {
        return Err(line.error(0, "alphabet line lists no symbols"));
    }
    Alphabet::new(line.fields[1..].iter().map(|f| f.1)).map_err(|e| line.error(1, e.to_string()))
}

/// Reads `src symbol dst` edge lines. An optional `alphabet: a b …` line fixes
/// the symbol order; otherwise symbols are sorted by name. States are
/// numbered in order of first appearance.
pub fn parse_presentation(text: &str) -> Result<SoficPresentation> {
    let lines = lines(text);
    let mut alphabet = None;
    let mut states: Vec<String> = Vec::new();
    let mut raw: Vec<(&Line, &str, &str, &str)> = Vec::new();
    for line in &lines {
        if line.keyword() == Some("alphabet") {
            if alphabet.is_some() {
                return Err(line.error(0, "second alphabet line"));
            }
            alphabet = Some((parse_alphabet_line(line)?, line.number));
            continue;
        }
        if line.fields.len() != 3 {
            return Err(line.error(0, format!("expected `src symbol dst`, found {} fields", line.fields.len())));
        }
        let (src, sym, dst) = (line.fields[0].1, line.fields[1].1, line.fields[2].1);
        for name in [src, dst] {
            if !states.iter().any(|s| s == name) {
                states.push(name.to_string());
            }
        }
        raw.push((line, src, sym, dst));
    }
    if raw.is_empty() {
        return Err(Error::Parse {
            line: lines.last().map_or(1, |l| l.number),
            column: 1,
            message: "no edges".into(),
        });
    }
    let alphabet = match alphabet {
        Some((a, _)) => a,
        None => {
            let names: BTreeSet<&str> = raw.iter().map(|r| r.2).collect();
            Alphabet::new(names)?
        }
    };
    let mut seen = BTreeMap::new();
    let mut edges = Vec::with_capacity(raw.len());
    for (line, src, sym, dst) in raw {
        let s = alphabet.index(sym).map_err(|e| line.error(1, e.to_string()))?;
        let q = states.iter().position(|n| n == src).expect("collected above");
        let t = states.iter().position(|n| n == dst).expect("collected above");
        if let Some(first) = seen.insert((q, s), line.number) {
            return Err(line.error(
                1,
                format!("state `{src}` already has an edge labeled `{sym}` (line {first}); presentations must be right-resolving"),
            ));
        }
        edges.push((q, s, t));
    }
    SoficPresentation::new(alphabet, states, &edges)
}

/// Inverse of [`parse_presentation`]: an alphabet line followed by the edges
/// in (state, symbol) order.
pub fn render_presentation(pres: &SoficPresentation) -> String {
    let mut out = format!("alphabet: {}\n", pres.alphabet().names().join(" "));
    for (q, s, t) in pres.edges() {
        out.push_str(&format!("{} {} {}\n", pres.state_name(q), pres.alphabet().name(s), pres.state_name(t)));
    }
    out
}

/// Reads an `alphabet:` line and then one forbidden word per line.
pub fn parse_forbidden(text: &str) -> Result<SubshiftSpec> {
    let lines = lines(text);
    let Some(first) = lines.first() else {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty forbidden-word file".into(),
        });
    };
    if first.keyword() != Some("alphabet") {
        return Err(first.error(0, "the first line must be `alphabet: …`"));
    }
    let alphabet = parse_alphabet_line(first)?;
    let mut words = Vec::new();
    for line in &lines[1..] {
        if line.fields.len() != 1 && alphabet.is_compact() {
            return Err(line.error(1, "one word per line"));
        }
        let text: Vec<&str> = line.fields.iter().map(|f| f.1).collect();
        let w = alphabet.parse_word(&text.join(" ")).map_err(|e| line.error(0, e.to_string()))?;
        if w.is_empty() {
            return Err(line.error(0, "the empty word cannot be forbidden"));
        }
        words.push(w);
    }
    SubshiftSpec::sft(alphabet, words)
}

/// Reads `state symbol weight` lines over `pres`. Every edge needs a weight.
pub fn parse_weights(pres: &SoficPresentation, text: &str) -> Result<GFunction> {
    let k = pres.alphabet().len();
    let mut weights: Vec<Vec<Option<Rational>>> = vec![vec![None; k]; pres.num_states()];
    for line in lines(text) {
        if line.fields.len() != 3 {
            return Err(line.error(0, "expected `state symbol weight`"));
        }
        let q = pres.state_index(line.fields[0].1).map_err(|e| line.error(0, e.to_string()))?;
        let s = pres.alphabet().index(line.fields[1].1).map_err(|e| line.error(1, e.to_string()))?;
        let w = ratio::parse(line.fields[2].1).map_err(|e| line.error(2, e.to_string()))?;
        if pres.next(q, s).is_none() {
            return Err(line.error(1, format!("no edge labeled `{}` leaves `{}`", line.fields[1].1, line.fields[0].1)));
        }
        if weights[q][s].replace(w).is_some() {
            return Err(line.error(0, "weight given twice"));
        }
    }
    GFunction::new(pres.clone(), weights)
}

/// Inverse of [`parse_weights`], in (state, symbol) order.
pub fn render_weights(g: &GFunction) -> String {
    let pres = g.presentation();
    let mut out = String::new();
    for (q, s, _) in pres.edges() {
        let w = g.weight(q, s).expect("weights on edges");
        out.push_str(&format!("{} {} {}\n", pres.state_name(q), pres.alphabet().name(s), ratio::format(w)));
    }
    out
}

/// Reads a bipartite coding of `domain`:
///
/// ```text
/// psi: σ -> δ δ̃
/// psitilde: σ̃ -> δ̃ δ
/// ```
///
/// Half alphabets and the codomain alphabet are the names used, in order of
/// first appearance.
pub fn parse_coding(domain: &SoficPresentation, text: &str) -> Result<BipartiteCoding> {
    fn intern(names: &mut Vec<String>, n: &str) -> usize {
        match names.iter().position(|m| m == n) {
            Some(i) => i,
            None => {
                names.push(n.to_string());
                names.len() - 1
            }
        }
    }
    let mut delta = Vec::new();
    let mut delta_t = Vec::new();
    let mut codomain = Vec::new();
    let mut psi: Vec<Option<(usize, usize)>> = vec![None; domain.alphabet().len()];
    let mut psi_t_named: Vec<(String, usize, usize)> = Vec::new();
    for line in lines(text) {
        let kind = line.keyword();
        if !matches!(kind, Some("psi") | Some("psitilde")) {
            return Err(line.error(0, "expected `psi:` or `psitilde:`"));
        }
        if line.fields.len() != 5 || line.fields[2].1 != "->" {
            return Err(line.error(0, "expected `psi: symbol -> half half`"));
        }
        let (sym, a, b) = (line.fields[1].1, line.fields[3].1, line.fields[4].1);
        if kind == Some("psi") {
            let s = domain.alphabet().index(sym).map_err(|e| line.error(1, e.to_string()))?;
            let d = intern(&mut delta, a);
            let e = intern(&mut delta_t, b);
            if psi[s].replace((d, e)).is_some() {
                return Err(line.error(1, format!("psi of `{sym}` given twice")));
            }
        } else {
            if psi_t_named.iter().any(|(n, _, _)| n == sym) {
                return Err(line.error(1, format!("psitilde of `{sym}` given twice")));
            }
            let e = intern(&mut delta_t, a);
            let d = intern(&mut delta, b);
            intern(&mut codomain, sym);
            psi_t_named.push((sym.to_string(), e, d));
        }
    }
    let psi = psi
        .into_iter()
        .enumerate()
        .map(|(s, p)| {
            p.ok_or_else(|| Error::InvalidArgument(format!("psi of `{}` is missing", domain.alphabet().name(s))))
        })
        .collect::<Result<Vec<_>>>()?;
    let psi_t = psi_t_named.into_iter().map(|(_, e, d)| (e, d)).collect();
    BipartiteCoding::new(
        domain.clone(),
        Alphabet::new(delta)?,
        Alphabet::new(delta_t)?,
        Alphabet::new(codomain)?,
        psi,
        psi_t,
    )
}

/// Inverse of [`parse_coding`].
pub fn render_coding(c: &BipartiteCoding) -> String {
    let mut out = String::new();
    for (s, &(d, e)) in c.psi().iter().enumerate() {
        out.push_str(&format!(
            "psi: {} -> {} {}\n",
            c.domain().alphabet().name(s),
            c.delta().name(d),
            c.delta_tilde().name(e)
        ));
    }
    for (s, &(e, d)) in c.psi_tilde().iter().enumerate() {
        out.push_str(&format!(
            "psitilde: {} -> {} {}\n",
            c.codomain().alphabet().name(s),
            c.delta_tilde().name(e),
            c.delta().name(d)
        ));
    }
    out
}

/// Reads `name state:weight,state:weight,…` lines: each vertex is the measure
/// started from that distribution over the carrier's states.
pub fn parse_vertices(carrier: Arc<GFunction>, text: &str) -> Result<VertexSet> {
    let pres = carrier.presentation();
    let mut entries = Vec::new();
    for line in lines(text) {
        if line.fields.len() != 2 {
            return Err(line.error(0, "expected `name state:weight,…`"));
        }
        let (column, spec) = line.fields[1];
        let mut initial = vec![ratio::zero(); pres.num_states()];
        let mut offset = 0;
        for part in spec.split(',') {
            let col = column + spec[..offset].chars().count();
            offset += part.len() + 1;
            let (state, w) = part.split_once(':').ok_or_else(|| line.at(col, "expected `state:weight`"))?;
            let q = pres.state_index(state).map_err(|e| line.at(col, e.to_string()))?;
            initial[q] += ratio::parse(w).map_err(|e| line.at(col, e.to_string()))?;
        }
        entries.push((line.fields[0].1.to_string(), initial));
    }
    VertexSet::new(carrier, entries)
}

/// Inverse of [`parse_vertices`], listing only states of positive mass.
pub fn render_vertices(set: &VertexSet) -> String {
    let pres = set.carrier().presentation();
    let mut out = String::new();
    for (name, v) in set.names().iter().zip(set.vertices()) {
        let parts: Vec<String> = v
            .initial()
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != ratio::zero())
            .map(|(q, w)| format!("{}:{}", pres.state_name(q), ratio::format(w)))
            .collect();
        out.push_str(&format!("{name} {}\n", parts.join(",")));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    alphabet: Vec<String>,
    depth: usize,
    values: Vec<(String, String)>,
}

/// JSON with `values` as `[word, "p/q"]` pairs in canonical word order.
pub fn table_to_json(table: &ShiftMeasureTable) -> serde_json::Value {
    let json = TableJson {
        alphabet: table.alphabet.names().to_vec(),
        depth: table.depth,
        values: table
            .values
            .iter()
            .map(|(w, v)| (table.alphabet.render(w), ratio::format(v)))
            .collect(),
    };
    serde_json::to_value(json).expect("plain data")
}

pub fn table_from_json(text: &str) -> Result<ShiftMeasureTable> {
    let json: TableJson = serde_json::from_str(text).map_err(json_error)?;
    let alphabet = Alphabet::new(json.alphabet)?;
    let mut values = BTreeMap::new();
    for (w, v) in json.values {
        let word = alphabet.parse_word(&w)?;
        if word.len() > json.depth {
            return Err(Error::InvalidArgument(format!("word `{w}` is longer than the table depth")));
        }
        if values.insert(word, ratio::parse(&v)?).is_some() {
            return Err(Error::InvalidArgument(format!("word `{w}` listed twice")));
        }
    }
    Ok(ShiftMeasureTable {
        alphabet,
        depth: json.depth,
        values,
    })
}

/// A filtration model with optional weights or chain attached.
///
/// ```json
/// {"carrier": ["a", "b"], "lo": 0, "sets": [["a", "b"], ["a"]],
///  "weights": {"a": "1/2", "b": "1"}}
/// ```
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiltrationFile {
    pub carrier: Vec<String>,
    pub lo: i64,
    pub sets: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<BTreeMap<String, String>>>,
}

impl FiltrationFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn model(&self) -> Result<FiltrationModel> {
        let sets = self
            .sets
            .iter()
            .map(|set| set.iter().map(|x| self.element(x)).collect::<Result<BTreeSet<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FiltrationModel::new(self.carrier.clone(), self.lo, sets)
    }

    /// Missing elements weigh zero.
    pub fn weights(&self) -> Result<Option<SigmaFiniteWeights>> {
        self.weights.as_ref().map(|m| self.vector(m)).transpose()
    }

    pub fn chain(&self) -> Result<Option<NormalizedChain>> {
        let Some(chain) = &self.chain else {
            return Ok(None);
        };
        let measures = chain.iter().map(|m| self.vector(m)).collect::<Result<Vec<_>>>()?;
        Ok(Some(NormalizedChain { lo: self.lo, measures }))
    }

    fn element(&self, name: &str) -> Result<usize> {
        self.carrier
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::InvalidArgument(format!("`{name}` is not a carrier element")))
    }

    fn vector(&self, m: &BTreeMap<String, String>) -> Result<Vec<Rational>> {
        let mut v = vec![ratio::zero(); self.carrier.len()];
        for (k, w) in m {
            v[self.element(k)?] = ratio::parse(w)?;
        }
        Ok(v)
    }
}

/// `{element: "p/q"}` over the carrier, omitting zeros.
pub fn weights_to_json(carrier: &[String], weights: &[Rational]) -> serde_json::Value {
    let map: BTreeMap<&str, String> = carrier
        .iter()
        .zip(weights)
        .filter(|(_, w)| **w != ratio::zero())
        .map(|(c, w)| (c.as_str(), ratio::format(w)))
        .collect();
    serde_json::to_value(map).expect("plain data")
}

/// `{"lo": i, "measures": [{element: "p/q"}, …]}`.
pub fn chain_to_json(carrier: &[String], chain: &NormalizedChain) -> serde_json::Value {
    serde_json::json!({
        "lo": chain.lo,
        "measures": chain.measures.iter().map(|m| weights_to_json(carrier, m)).collect::<Vec<_>>(),
    })
}

pub fn words_to_json(alphabet: &Alphabet, words: &BTreeSet<Word>) -> serde_json::Value {
    serde_json::Value::Array(words.iter().map(|w| alphabet.render(w).into()).collect())
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}
