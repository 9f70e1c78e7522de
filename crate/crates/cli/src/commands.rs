//! One function per subcommand. Each loads its inputs, calls the library and
//! renders the result both as JSON and as text.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use gshift::conjugacy::{self, BipartiteCoding};
use gshift::format::{self, FiltrationFile};
use gshift::gfunction::GFunction;
use gshift::gmeasure;
use gshift::measure_graph::{self, VertexSet};
use gshift::ratio;
use gshift::shannon::{OmegaCalculus, OmegaMode};
use gshift::symbolic::{self, Direction};
use gshift::{Alphabet, Error, EventuallyPeriodicPast, Result, SoficPresentation, Word};
use serde_json::{json, Value};

use crate::{GInput, Mode, Resolution, ShiftInput};

pub struct Report {
    /// False when the command's check failed.
    pub ok: bool,
    pub json: Value,
    pub text: String,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report { ok: true, json, text }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn load_shift(input: &ShiftInput) -> Result<SoficPresentation> {
    let text = read(&input.presentation)?;
    if input.forbidden {
        format::parse_forbidden(&text)?.presentation()
    } else {
        format::parse_presentation(&text)
    }
}

fn load_g(input: &GInput) -> Result<GFunction> {
    let pres = load_shift(&input.shift)?;
    format::parse_weights(&pres, &read(&input.weights)?)
}

fn word(pres: &SoficPresentation, text: &str) -> Result<Word> {
    pres.alphabet().parse_word(text)
}

fn lines<'a>(items: impl IntoIterator<Item = &'a Word>, alphabet: &Alphabet) -> String {
    items.into_iter().map(|w| format!("{}\n", shown(alphabet, w))).collect()
}

/// The empty word shows as `ε`.
fn shown(alphabet: &Alphabet, w: &[usize]) -> String {
    if w.is_empty() {
        "ε".into()
    } else {
        alphabet.render(w)
    }
}

pub fn lang(input: &ShiftInput, length: usize) -> Result<Report> {
    let pres = load_shift(input)?;
    let words = symbolic::language_words(&pres, length);
    let json = json!({
        "length": length,
        "count": words.len(),
        "words": format::words_to_json(pres.alphabet(), &words),
    });
    Ok(Report::ok(json, lines(&words, pres.alphabet())))
}

pub fn gamma(input: &ShiftInput, text: &str, length: usize, backward: bool) -> Result<Report> {
    let pres = load_shift(input)?;
    let a = word(&pres, text)?;
    let direction = if backward { Direction::Backward } else { Direction::Forward };
    let words = symbolic::extension_set(&pres, &a, length, direction)?;
    let json = json!({
        "word": pres.alphabet().render(&a),
        "length": length,
        "direction": if backward { "backward" } else { "forward" },
        "words": format::words_to_json(pres.alphabet(), &words),
    });
    Ok(Report::ok(json, lines(&words, pres.alphabet())))
}

pub fn omega(input: &ShiftInput, text: &str, length: usize) -> Result<Report> {
    let pres = load_shift(input)?;
    let a = word(&pres, text)?;
    let words = OmegaCalculus::new(&pres).omega_plus(&a, length)?;
    let json = json!({
        "word": pres.alphabet().render(&a),
        "length": length,
        "words": format::words_to_json(pres.alphabet(), &words),
    });
    Ok(Report::ok(json, lines(&words, pres.alphabet())))
}

pub fn omega_past(input: &ShiftInput, cycle: &str, tail: &str, length: usize, mode: Mode) -> Result<Report> {
    let pres = load_shift(input)?;
    let past = EventuallyPeriodicPast::new(word(&pres, tail)?, word(&pres, cycle)?)?;
    let calc = OmegaCalculus::new(&pres);
    let (words, stabilization) = match mode {
        Mode::Omega => (calc.omega_past(&past, length, OmegaMode::Omega)?, None),
        Mode::OmegaInfinity => {
            let inf = calc.omega_infinity(&past, length)?;
            (inf.words, Some(inf.stabilization))
        }
    };
    let mode = match mode {
        Mode::Omega => OmegaMode::Omega,
        Mode::OmegaInfinity => OmegaMode::OmegaInfinity,
    };
    let mut json = json!({
        "past": past.render(pres.alphabet()),
        "mode": mode,
        "length": length,
        "words": format::words_to_json(pres.alphabet(), &words),
    });
    let mut text = lines(&words, pres.alphabet());
    if let Some(m) = stabilization {
        json["stabilization"] = m.into();
        text = format!("# stabilization {m}\n{text}");
    }
    Ok(Report::ok(json, text))
}

pub fn check_d(input: &ShiftInput) -> Result<Report> {
    let pres = load_shift(input)?;
    let report = OmegaCalculus::new(&pres).check_property_d();
    let abc = pres.alphabet();
    let certificates: Vec<Value> = report
        .certificates
        .iter()
        .map(|c| json!({"b": abc.render(&c.b), "symbol": abc.name(c.symbol), "a": abc.render(&c.a)}))
        .collect();
    let counterexample = report
        .counterexample
        .as_ref()
        .map(|(b, s)| json!({"b": abc.render(b), "symbol": abc.name(*s)}));
    let json = json!({
        "holds": report.holds,
        "lattice_states": report.lattice_states,
        "certificates": certificates,
        "counterexample": counterexample,
    });
    let mut text = String::new();
    match &report.counterexample {
        None => {
            let _ = writeln!(
                text,
                "property (D) holds ({} lattice states, {} certificates)",
                report.lattice_states,
                report.certificates.len()
            );
            for c in &report.certificates {
                let _ = writeln!(text, "{} {} <- {}", shown(abc, &c.b), abc.name(c.symbol), shown(abc, &c.a));
            }
        }
        Some((b, s)) => {
            let _ = writeln!(text, "property (D) fails: `{}` after `{}` is never forced", abc.name(*s), shown(abc, b));
        }
    }
    Ok(Report {
        ok: report.holds,
        json,
        text,
    })
}

pub fn build_gd(input: &ShiftInput, depth: usize) -> Result<Report> {
    let pres = load_shift(input)?;
    let gd = match OmegaCalculus::new(&pres).build_gd(depth) {
        Err(Error::PropertyDFailed(why)) => {
            return Ok(Report {
                ok: false,
                json: json!({"holds": false, "reason": why}),
                text: format!("property (D) fails: {why}\n"),
            })
        }
        other => other?,
    };
    let g = &gd.presentation;
    let abc = g.alphabet();
    let vertices: Vec<Value> = (0..g.num_states())
        .map(|v| {
            json!({
                "name": g.state_name(v),
                "witness": gd.witnesses[v].render(abc),
                "truncation": format::words_to_json(abc, &gd.truncations[v]),
            })
        })
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .map(|(q, s, t)| json!([g.state_name(q), abc.name(s), g.state_name(t)]))
        .collect();
    let json = json!({"holds": true, "depth": depth, "vertices": vertices, "edges": edges});
    let mut text = String::new();
    for v in 0..g.num_states() {
        let _ = writeln!(text, "# {} after {}", g.state_name(v), gd.witnesses[v].render(abc));
    }
    text.push_str(&format::render_presentation(g));
    Ok(Report::ok(json, text))
}

fn table_text(table: &gmeasure::ShiftMeasureTable) -> String {
    table
        .values
        .iter()
        .map(|(w, v)| format!("{} {}\n", shown(&table.alphabet, w), ratio::format(v)))
        .collect()
}

pub fn gmeasure(input: &GInput, depth: usize) -> Result<Report> {
    let g = load_g(input)?;
    let table = gmeasure::stationary_g_measure(&g, depth)?;
    Ok(Report::ok(format::table_to_json(&table), table_text(&table)))
}

pub fn verify_gmeasure(input: &GInput, table: &Path, depth: Option<usize>) -> Result<Report> {
    let g = load_g(input)?;
    let table = format::table_from_json(&read(table)?)?;
    let depth = match depth {
        Some(d) => d,
        None => table.depth.checked_sub(1).ok_or(Error::DepthTooSmall { needed: 1, found: 0 })?,
    };
    let report = gmeasure::verify_g_measure(&g, &table, depth)?;
    let abc = g.presentation().alphabet();
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "cylinder": abc.render(&v.cylinder()),
                "expected": ratio::format(&v.expected),
                "found": ratio::format(&v.found),
            })
        })
        .collect();
    let unresolved: Vec<String> = report.unresolved.iter().map(|w| abc.render(w)).collect();
    let json = json!({
        "passed": report.passed(),
        "depth": depth,
        "checked": report.checked,
        "violations": violations,
        "unresolved": unresolved,
    });
    let mut text = format!(
        "{} ({} checks to depth {}, {} violations, {} unresolved prefixes)\n",
        if report.passed() { "passed" } else { "failed" },
        report.checked,
        depth,
        report.violations.len(),
        report.unresolved.len()
    );
    for v in &report.violations {
        let _ = writeln!(
            text,
            "{} expected {} found {}",
            abc.render(&v.cylinder()),
            ratio::format(&v.expected),
            ratio::format(&v.found)
        );
    }
    Ok(Report {
        ok: report.passed(),
        json,
        text,
    })
}

pub fn sample(input: &GInput, start: Option<&str>, seed: u64, length: usize) -> Result<Report> {
    let g = load_g(input)?;
    let pres = g.presentation();
    let q = match start {
        Some(name) => pres.state_index(name)?,
        None => 0,
    };
    let path = gmeasure::sample_path(&g, q, seed, length)?;
    let abc = pres.alphabet();
    let mut counts: BTreeMap<&str, usize> = abc.names().iter().map(|n| (n.as_str(), 0)).collect();
    for &s in path.iter() {
        *counts.get_mut(abc.name(s)).expect("alphabet symbol") += 1;
    }
    let json = json!({
        "start": pres.state_name(q),
        "seed": seed,
        "length": length,
        "counts": counts,
        "path": abc.render(&path),
    });
    Ok(Report::ok(json, format!("{}\n", abc.render(&path))))
}

fn load_vertices(input: &GInput, vertices: &Path) -> Result<VertexSet> {
    let g = Arc::new(load_g(input)?);
    format::parse_vertices(g, &read(vertices)?)
}

pub fn mgraph_check(input: &GInput, vertices: &Path, res: &Resolution) -> Result<Report> {
    let set = load_vertices(input, vertices)?;
    let eps = ratio::parse(&res.eps)?;
    let report = measure_graph::check_residually_contractive(&set, res.k, &eps, &[])?;
    let abc = set.alphabet();
    let name = |i: usize| set.names()[i].clone();
    let json = json!({
        "holds": report.holds(),
        "k": report.k,
        "eps": ratio::format(&report.eps),
        "condition_i": {
            "holds": report.cond_i,
            "witnesses": report.cond_i_witnesses.iter()
                .map(|&(v, p, s)| json!({"vertex": name(v), "from": name(p), "symbol": abc.name(s)}))
                .collect::<Vec<_>>(),
            "failures": report.cond_i_failures.iter().map(|&v| name(v)).collect::<Vec<_>>(),
        },
        "condition_ii": {
            "holds": report.cond_ii,
            "failures": report.cond_ii_failures.iter().map(|w| abc.render(w)).collect::<Vec<_>>(),
        },
        "condition_iii": {
            "holds": report.cond_iii,
            "failures": report.cond_iii_failures.iter()
                .map(|(p, v)| json!({"past": p.render(abc), "vertex": name(*v)}))
                .collect::<Vec<_>>(),
        },
        "samples": report.samples.iter().map(|s| json!({
            "past": s.past.render(abc),
            "members": s.members.iter().map(|&v| name(v)).collect::<Vec<_>>(),
            "marginal_counts": s.marginal_counts,
            "synchronized": s.in_d_infinity,
        })).collect::<Vec<_>>(),
    });
    let verdict = |b: bool| if b { "holds" } else { "fails" };
    let mut text = String::new();
    let _ = writeln!(text, "k = {}, eps = {}", report.k, ratio::format(&report.eps));
    let _ = writeln!(text, "condition (I) {}", verdict(report.cond_i));
    for &v in &report.cond_i_failures {
        let _ = writeln!(text, "  no predecessor: {}", name(v));
    }
    let _ = writeln!(text, "condition (II) {}", verdict(report.cond_ii));
    for w in &report.cond_ii_failures {
        let _ = writeln!(text, "  unsynchronized window: {}", abc.render(w));
    }
    let _ = writeln!(text, "condition (III) {}", verdict(report.cond_iii));
    for (p, v) in &report.cond_iii_failures {
        let _ = writeln!(text, "  not approximated: {} after {}", name(*v), p.render(abc));
    }
    Ok(Report {
        ok: report.holds(),
        json,
        text,
    })
}

fn weighted_graph(g: &GFunction) -> (Value, String) {
    let pres = g.presentation();
    let abc = pres.alphabet();
    let edges: Vec<Value> = pres
        .edges()
        .map(|(q, s, t)| {
            json!([
                pres.state_name(q),
                abc.name(s),
                pres.state_name(t),
                ratio::format(g.weight(q, s).expect("weights on edges"))
            ])
        })
        .collect();
    let json = json!({"alphabet": abc.names(), "edges": edges});
    let text = format!(
        "# presentation\n{}# weights\n{}",
        format::render_presentation(pres),
        format::render_weights(g)
    );
    (json, text)
}

pub fn g_from_m(input: &GInput, vertices: &Path, res: &Resolution) -> Result<Report> {
    let set = load_vertices(input, vertices)?;
    let eps = ratio::parse(&res.eps)?;
    match measure_graph::g_from_m(&set, res.k, &eps) {
        Err(Error::NotContractive(why)) => Ok(Report {
            ok: false,
            json: json!({"contractive": false, "reason": why}),
            text: format!("not residually contractive: {why}\n"),
        }),
        other => {
            let (json, text) = weighted_graph(&other?);
            Ok(Report::ok(json!({"contractive": true, "g": json}), text))
        }
    }
}

pub fn m_from_g(input: &GInput) -> Result<Report> {
    let g = load_g(input)?;
    let set = measure_graph::m_from_g(&g);
    let pres = g.presentation();
    let vertices: Vec<Value> = set
        .names()
        .iter()
        .zip(set.vertices())
        .map(|(n, v)| {
            let initial: BTreeMap<&str, String> = v
                .initial()
                .iter()
                .enumerate()
                .filter(|(_, w)| **w != ratio::zero())
                .map(|(q, w)| (pres.state_name(q), ratio::format(w)))
                .collect();
            json!({"name": n, "initial": initial})
        })
        .collect();
    Ok(Report::ok(json!({"vertices": vertices}), format::render_vertices(&set)))
}

pub enum CodingSource {
    File(PathBuf),
    Doubling,
    HigherBlock,
}

pub fn transport(input: &GInput, how: CodingSource, table: Option<&Path>, depth: usize) -> Result<Report> {
    let g = load_g(input)?;
    let pres = g.presentation();
    let coding = match how {
        CodingSource::File(path) => format::parse_coding(pres, &read(&path)?)?,
        CodingSource::Doubling => BipartiteCoding::doubling(pres)?,
        CodingSource::HigherBlock => BipartiteCoding::higher_block_pair(pres)?,
    };
    let gt = coding.transport_g(&g)?;
    let failures = coding.identity_failures(&g, &gt)?;
    let before = conjugacy::range_invariants(&g, depth);
    let after = conjugacy::range_invariants(&gt, depth);
    let (graph_json, graph_text) = weighted_graph(&gt);
    let abc = gt.presentation().alphabet();
    let mut ok = failures.is_empty() && before.class() == after.class();
    let mut json = json!({
        "coding": format::render_coding(&coding),
        "g": graph_json,
        "identity_failures": failures.iter()
            .map(|&(q, s)| json!([gt.presentation().state_name(q), abc.name(s)]))
            .collect::<Vec<_>>(),
        "range": {
            "class": [before.class(), after.class()],
            "values": [before.range.len(), after.range.len()],
            "future_laws": [before.future_tables.len(), after.future_tables.len()],
        },
    });
    let mut text = format!("# coding\n{}{graph_text}", format::render_coding(&coding));
    let _ = writeln!(
        text,
        "# identity failures {}, range {} -> {}, future laws {} -> {}",
        failures.len(),
        before.class(),
        after.class(),
        before.future_tables.len(),
        after.future_tables.len()
    );
    if let Some(path) = table {
        let t = format::table_from_json(&read(path)?)?;
        let moved = coding.transport_measure(&t)?;
        let check_depth = moved.depth.checked_sub(1).ok_or(Error::DepthTooSmall { needed: 3, found: t.depth })?;
        let verified = gmeasure::verify_g_measure(&gt, &moved, check_depth)?;
        ok &= verified.passed();
        json["table"] = format::table_to_json(&moved);
        json["table_verified"] = verified.passed().into();
        let _ = writeln!(
            text,
            "# transported table to depth {}: {}",
            moved.depth,
            if verified.passed() { "verified" } else { "violations found" }
        );
        text.push_str(&table_text(&moved));
    }
    Ok(Report { ok, json, text })
}

pub fn eta(path: &Path) -> Result<Report> {
    let file = FiltrationFile::parse(&read(path)?)?;
    let model = file.model()?;
    let carrier = model.carrier();
    let mut json = json!({"lo": model.lo(), "hi": model.hi()});
    let mut text = String::new();
    let render = |v: &[gshift::Rational]| {
        carrier
            .iter()
            .zip(v)
            .map(|(c, w)| format!("{c}:{}", ratio::format(w)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    if let Some(weights) = file.weights()? {
        let chain = model.eta(&weights)?;
        json["chain"] = format::chain_to_json(carrier, &chain);
        for (i, m) in chain.measures.iter().enumerate() {
            let _ = writeln!(text, "mu_{} {}", chain.lo + i as i64, render(m));
        }
    }
    if let Some(chain) = file.chain()? {
        let weights = model.eta_inverse(&chain)?;
        json["weights"] = format::weights_to_json(carrier, &weights);
        let _ = writeln!(text, "weights {}", render(&weights));
    }
    if file.weights.is_none() && file.chain.is_none() {
        return Err(Error::InvalidArgument("the model has neither `weights` nor `chain`".into()));
    }
    Ok(Report::ok(json, text))
}
