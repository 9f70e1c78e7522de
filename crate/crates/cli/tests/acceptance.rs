//! Acceptance checks. Expected values come from brute-force oracles written
//! here, independent of the library's collection and lattice machinery.
//! Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;

use gshift::conjugacy::{range_invariants, BipartiteCoding};
use gshift::filtration::{scale_equivalent, FiltrationModel, NormalizedChain};
use gshift::gfunction::GFunction;
use gshift::gmeasure::{sample_path, stationary_g_measure, verify_g_measure};
use gshift::measure_graph::{check_residually_contractive, g_from_m, m_from_g, same_measure, DEFAULT_K};
use gshift::ratio::{self, frac};
use gshift::shannon::{OmegaCalculus, OmegaMode};
use gshift::symbolic::language_words;
use gshift::{examples, format, EventuallyPeriodicPast, Past, Rational, SoficPresentation, StateSet, Word};
use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn d_examples() -> Vec<(&'static str, SoficPresentation)> {
    vec![
        ("golden-mean", examples::golden_mean()),
        ("even", examples::even_shift()),
        ("full", examples::full_shift()),
    ]
}

fn render(p: &SoficPresentation, w: &[usize]) -> String {
    if w.is_empty() {
        "ε".into()
    } else {
        p.alphabet().render(w)
    }
}

/// `ω⁺ₙ(a)` as the intersection of `Γ⁺ₙ(ca)` over all admissible left
/// extensions `c` of length `2^|Q| + n`.
fn brute_omega(p: &SoficPresentation, a: &[usize], n: usize) -> BTreeSet<Word> {
    let k = p.alphabet().len();
    let len = (1usize << p.num_states()) + n;
    let all = p.all_states();
    let ends: BTreeSet<StateSet> = Word::all(k, len)
        .into_iter()
        .map(|c| p.image_word(&all, &c.concat(a)))
        .filter(|t| !t.is_empty())
        .collect();
    Word::all(k, n)
        .into_iter()
        .filter(|w| !ends.is_empty() && ends.iter().all(|t| !p.image_word(t, w).is_empty()))
        .collect()
}

/// `ω⁺ₘ(x⁻)`: `ω⁺ₘ` of a suffix long enough for the increasing sequence
/// `ω⁺ₘ(cycleᵏ tail)` to have stopped growing.
fn brute_omega_past(p: &SoficPresentation, past: &EventuallyPeriodicPast, m: usize) -> BTreeSet<Word> {
    let reps = (1usize << p.num_states()) + 1;
    brute_omega(p, &past.suffix(past.tail().len() + reps * past.cycle().len()), m)
}

fn prefixes(words: &BTreeSet<Word>, n: usize) -> BTreeSet<Word> {
    words.iter().map(|w| w.slice(0, n)).collect()
}

/// Admissible eventually periodic pasts with cycles of length ≤ 3 and tails
/// of length ≤ 2.
fn sample_pasts(p: &SoficPresentation, want: usize) -> Vec<EventuallyPeriodicPast> {
    let k = p.alphabet().len();
    let mut out = Vec::new();
    for tail_len in 0..=2 {
        for cycle_len in 1..=3 {
            for cycle in Word::all(k, cycle_len) {
                for tail in Word::all(k, tail_len) {
                    let past = EventuallyPeriodicPast::new(tail, cycle.clone()).unwrap();
                    let probe = past.suffix(past.tail().len() + 8 * cycle_len);
                    if p.is_admissible(&probe) && out.len() < want {
                        out.push(past);
                    }
                }
            }
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for (name, p) in d_examples() {
        let calc = OmegaCalculus::new(&p);
        for len in 0..=5 {
            for a in language_words(&p, len) {
                for n in 0..=3 {
                    let got = calc.omega_plus(&a, n).map_err(|e| e.to_string())?;
                    let want = brute_omega(&p, &a, n);
                    ensure(got == want, || format!("{name}: ω⁺_{n}({}) differs from the oracle", render(&p, &a)))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (word, n) pairs on 3 presentations agree exactly"))
}

fn criterion_2() -> Outcome {
    let mut bundled = d_examples();
    bundled.push(("single-burst", examples::single_burst()));
    let mut checked = 0;
    let mut max_m = 0;
    for (name, p) in bundled {
        let calc = OmegaCalculus::new(&p);
        let pasts = sample_pasts(&p, 12);
        ensure(pasts.len() >= 10, || format!("{name}: only {} pasts", pasts.len()))?;
        for past in &pasts {
            for n in 0..=3 {
                let inf = calc.omega_infinity(past, n).map_err(|e| e.to_string())?;
                let via_mode = calc.omega_past(past, n, OmegaMode::OmegaInfinity).map_err(|e| e.to_string())?;
                let big_m = inf.stabilization;
                ensure(big_m >= n, || format!("{name}: stabilization {big_m} < n = {n}"))?;
                let oracle = |upto: usize| {
                    (n..=upto)
                        .map(|m| prefixes(&brute_omega_past(&p, past, m), n))
                        .reduce(|a, b| a.intersection(&b).cloned().collect())
                        .expect("nonempty range")
                };
                let want = oracle(big_m);
                ensure(inf.words == want && via_mode == want, || {
                    format!("{name}: Ω prefixes of {} at n = {n} differ from the oracle", past.render(p.alphabet()))
                })?;
                ensure(oracle(big_m + 3) == want, || {
                    format!("{name}: {} not stable beyond M = {big_m}", past.render(p.alphabet()))
                })?;
                max_m = max_m.max(big_m);
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (past, n) pairs on 4 presentations, M ≤ {max_m}"))
}

/// Shortest `a` with `|a| ≤ bound` and `σ ∈ ω⁺₁(ab)` by the oracle.
fn brute_witness_len(p: &SoficPresentation, b: &Word, s: usize, bound: usize) -> Option<usize> {
    (0..=bound).find(|&len| {
        Word::all(p.alphabet().len(), len)
            .into_iter()
            .any(|a| p.is_admissible(&a.concat(b).pushed(s)) && brute_omega(p, &a.concat(b), 1).contains(&Word::single(s)))
    })
}

fn criterion_3() -> Outcome {
    let mut certs = 0;
    let mut queries = 0;
    for (name, p) in d_examples() {
        let calc = OmegaCalculus::new(&p);
        let report = calc.check_property_d();
        ensure(report.holds && report.counterexample.is_none(), || format!("{name}: property (D) reported failing"))?;
        ensure(!report.certificates.is_empty(), || format!("{name}: no certificates"))?;
        for c in &report.certificates {
            let ab = c.a.concat(&c.b);
            let forced = calc.omega_plus(&ab, 1).map_err(|e| e.to_string())?;
            ensure(forced.contains(&Word::single(c.symbol)), || {
                format!("{name}: certificate a = {} for b = {} does not replay", render(&p, &c.a), render(&p, &c.b))
            })?;
            certs += 1;
        }
        for len in 0..=3 {
            for b in language_words(&p, len) {
                for s in 0..p.alphabet().len() {
                    if !p.is_admissible(&b.pushed(s)) {
                        continue;
                    }
                    let exact = calc.property_d_witness(&b, s).map(|a| a.len());
                    let brute = brute_witness_len(&p, &b, s, 6);
                    ensure(exact == brute, || {
                        format!("{name}: witness lengths for ({}, {s}) differ: {exact:?} vs {brute:?}", render(&p, &b))
                    })?;
                    queries += 1;
                }
            }
        }
    }
    let burst = examples::single_burst();
    let report = OmegaCalculus::new(&burst).check_property_d();
    let (b, s) = report.counterexample.clone().ok_or("single-burst: no counterexample")?;
    ensure(!report.holds && brute_witness_len(&burst, &b, s, 6).is_none(), || {
        "single-burst: brute force finds a witness for the counterexample".into()
    })?;
    Ok(format!(
        "{certs} certificates replay; {queries} (b, σ) queries agree with |a| ≤ 6 brute force; single-burst fails at ({}, {})",
        render(&burst, &b),
        burst.alphabet().name(s)
    ))
}

fn criterion_4() -> Outcome {
    let g = examples::golden_mean_g();
    let table = stationary_g_measure(&g, 7).map_err(|e| e.to_string())?;
    let zero = Word::single(0);
    let one = Word::single(1);
    ensure(table.value(&zero) == Some(frac(2, 3)), || "value(0) ≠ 2/3".into())?;
    ensure(table.value(&one) == Some(frac(1, 3)), || "value(1) ≠ 1/3".into())?;
    let report = verify_g_measure(&g, &table, 6).map_err(|e| e.to_string())?;
    ensure(report.passed(), || format!("{} violations", report.violations.len()))?;
    ensure(table.shift_invariance_violations().is_empty(), || "table is not shift invariant".into())?;
    Ok(format!("value(0) = 2/3, value(1) = 1/3, {} identities checked to depth 6", report.checked))
}

fn criterion_5() -> Outcome {
    let mut vertices = 0;
    for (name, g) in examples::bundled_g() {
        let m = m_from_g(&g);
        let back = g_from_m(&m, DEFAULT_K, &frac(1, 1024)).map_err(|e| format!("{name}: {e}"))?;
        ensure(back == g, || format!("{name}: g_from_M(M_from_g(g)) ≠ g"))?;
        let again = m_from_g(&back);
        ensure(again.names() == m.names(), || format!("{name}: vertex names changed"))?;
        for (i, v) in m.vertices().iter().enumerate() {
            ensure(v.cylinder_table(6) == again.vertex(i).cylinder_table(6), || {
                format!("{name}: cylinder tables of `{}` differ at depth 6", m.names()[i])
            })?;
            vertices += 1;
        }
    }
    Ok(format!("3 g-functions round trip exactly; {vertices} vertex tables identical to depth 6"))
}

fn criterion_6() -> Outcome {
    let mut samples = 0;
    for (name, g) in examples::bundled_g() {
        let set = m_from_g(&g);
        let r = check_residually_contractive(&set, 4, &frac(1, 1024), &[]).map_err(|e| e.to_string())?;
        ensure(r.holds(), || {
            format!("{name}: (I) {} (II) {} (III) {}", r.cond_i, r.cond_ii, r.cond_iii)
        })?;
        ensure(r.cond_i_witnesses.len() == set.len(), || format!("{name}: condition (I) lacks witnesses"))?;
        for &(v, pred, s) in &r.cond_i_witnesses {
            let image = set.vertex(pred).tau(s).map_err(|e| e.to_string())?;
            ensure(same_measure(&image, set.vertex(v)), || format!("{name}: condition (I) witness does not replay"))?;
        }
        samples += r.samples.len();
    }
    Ok(format!("(I), (II), (III) hold at k = 4, ε = 1/1024; (I) replayed exactly; {samples} pasts sampled"))
}

/// Right side of the transport identity at the domain past `x⁻` with next
/// symbol `x₀`, for the codomain symbol `σ̃`.
fn transport_oracle(c: &BipartiteCoding, g: &GFunction, past: &EventuallyPeriodicPast, x0: usize, st: usize) -> Option<Rational> {
    let base = Past::Periodic(past.clone());
    let d = c.psi()[x0].0;
    let (e, d2) = c.psi_tilde()[st];
    let den: Rational = (0..c.psi().len())
        .filter(|&s| c.psi()[s].0 == d)
        .map(|s| g.g_eval(&base, s).ok())
        .sum::<Option<Rational>>()?;
    let Some(s1) = c.psi().iter().position(|&p| p == (d, e)) else {
        return Some(ratio::zero());
    };
    let first = g.g_eval(&base, s1).ok()?;
    if first.is_zero() {
        return Some(ratio::zero());
    }
    let after = base.extended(&[s1]);
    let second: Rational = (0..c.psi().len())
        .filter(|&s| c.psi()[s].0 == d2)
        .map(|s| g.g_eval(&after, s).ok())
        .sum::<Option<Rational>>()?;
    Some(first * second / den)
}

fn criterion_7() -> Outcome {
    let mut identities = 0;
    let mut tables = 0;
    let mut counts = Vec::new();
    for (name, g) in examples::bundled_g() {
        let p = g.presentation().clone();
        for (kind, c) in [
            ("doubling", BipartiteCoding::doubling(&p)),
            ("higher-block", BipartiteCoding::higher_block_pair(&p)),
        ] {
            let c = c.map_err(|e| e.to_string())?;
            let gt = c.transport_g(&g).map_err(|e| e.to_string())?;
            ensure(c.identity_failures(&g, &gt).map_err(|e| e.to_string())?.is_empty(), || {
                format!("{name}/{kind}: identity fails at a vertex")
            })?;
            for past in sample_pasts(&p, 12) {
                if !g.resolve(&Past::Periodic(past.clone())).map_err(|e| e.to_string())?.is_resolved() {
                    continue;
                }
                let probe = past.suffix(past.tail().len() + 8 * past.cycle().len());
                for x0 in (0..p.alphabet().len()).filter(|&x0| p.is_admissible(&probe.pushed(x0))) {
                    let (image, _) = c.image_point(&past, &Word::single(x0)).map_err(|e| e.to_string())?;
                    for st in 0..c.codomain().alphabet().len() {
                        let Some(want) = transport_oracle(&c, &g, &past, x0, st) else { continue };
                        let got = gt.g_eval(&Past::Periodic(image.clone()), st).map_err(|e| e.to_string())?;
                        ensure(got == want, || {
                            format!("{name}/{kind}: g̃ at {} differs from the transport formula", image.render(c.codomain().alphabet()))
                        })?;
                        identities += 1;
                    }
                }
            }
            let table = stationary_g_measure(&g, 7).map_err(|e| e.to_string())?;
            let moved = c.transport_measure(&table).map_err(|e| e.to_string())?;
            let report = verify_g_measure(&gt, &moved, moved.depth - 1).map_err(|e| e.to_string())?;
            ensure(report.passed(), || format!("{name}/{kind}: transported table fails verification"))?;
            tables += 1;
            let before = range_invariants(&g, 4);
            let after = range_invariants(&gt, 4);
            ensure(before.class() == after.class(), || format!("{name}/{kind}: range class changed"))?;
            counts.push(format!(
                "{name}/{kind} values {}→{} laws {}→{}",
                before.range.len(),
                after.range.len(),
                before.future_tables.len(),
                after.future_tables.len()
            ));
        }
    }
    Ok(format!(
        "{identities} past-level identities exact; {tables} transported tables verified; range classes preserved ({})",
        counts.join(", ")
    ))
}

/// `η` computed directly from its definition.
fn eta_oracle(sets: &[BTreeSet<usize>], w: &[Rational]) -> Vec<Vec<Rational>> {
    sets.iter()
        .map(|f| {
            let total: Rational = f.iter().map(|&x| w[x].clone()).sum();
            (0..w.len())
                .map(|x| if f.contains(&x) { &w[x] / &total } else { ratio::zero() })
                .collect()
        })
        .collect()
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let positive = |rng: &mut ChaCha8Rng| frac(rng.gen_range(1..=9), rng.gen_range(1..=9));
    let models = 150;
    for trial in 0..models {
        let n = rng.gen_range(1..=5);
        let lo = -rng.gen_range(0..=2i64);
        let hi = rng.gen_range(0..=2i64);
        let mut sets = vec![(0..n).collect::<BTreeSet<usize>>()];
        for _ in lo..hi {
            let mut next = sets.last().unwrap().clone();
            if next.len() > 1 && rng.gen_bool(0.6) {
                let drop = *next.iter().nth(rng.gen_range(0..next.len())).unwrap();
                next.remove(&drop);
            }
            sets.push(next);
        }
        let model = FiltrationModel::unnamed(n, lo, sets.clone()).map_err(|e| e.to_string())?;
        let w: Vec<Rational> = (0..n).map(|_| positive(&mut rng)).collect();
        let chain = model.eta(&w).map_err(|e| e.to_string())?;
        ensure(chain.measures == eta_oracle(&sets, &w), || format!("model {trial}: η differs from its definition"))?;
        let back = model.eta_inverse(&chain).map_err(|e| e.to_string())?;
        ensure(scale_equivalent(&back, &w), || format!("model {trial}: η⁻¹(η(μ)) is not ∼sc μ"))?;
        ensure(model.eta(&back).map_err(|e| e.to_string())? == chain, || format!("model {trial}: η(η⁻¹(c)) ≠ c"))?;

        let lambda = positive(&mut rng);
        let scaled: Vec<Rational> = w.iter().map(|x| x * &lambda).collect();
        ensure(model.eta(&scaled).map_err(|e| e.to_string())? == chain, || format!("model {trial}: η not scale invariant"))?;
        let other: Vec<Rational> = (0..n).map(|_| positive(&mut rng)).collect();
        let same = model.eta(&other).map_err(|e| e.to_string())? == chain;
        ensure(same == scale_equivalent(&other, &w), || format!("model {trial}: η(μ) = η(μ′) disagrees with ∼sc"))?;

        let given = NormalizedChain { lo, measures: eta_oracle(&sets, &other) };
        let rec = model.eta_inverse(&given).map_err(|e| e.to_string())?;
        ensure(model.eta(&rec).map_err(|e| e.to_string())? == given, || format!("model {trial}: η(η⁻¹(c)) ≠ c for a given chain"))?;
    }
    Ok(format!("{models} random models: η matches its definition, both round trips and scale-class invariance exact"))
}

/// Asymptotic variance of the frequency of `symbol` along the stationary
/// edge chain, from the fundamental matrix `Z = (I − P + 1π)⁻¹`.
fn asymptotic_variance(g: &GFunction, pi_states: &[f64], symbol: usize) -> f64 {
    let p = g.presentation();
    let edges: Vec<(usize, usize, usize, f64)> = p
        .edges()
        .map(|(q, s, t)| (q, s, t, ratio::to_f64(g.weight(q, s).unwrap())))
        .filter(|e| e.3 > 0.0)
        .collect();
    let m = edges.len();
    let pi = DVector::from_iterator(m, edges.iter().map(|e| pi_states[e.0] * e.3));
    let trans = DMatrix::from_fn(m, m, |i, j| if edges[i].2 == edges[j].0 { edges[j].3 } else { 0.0 });
    let f = DVector::from_iterator(m, edges.iter().map(|e| if e.1 == symbol { 1.0 } else { 0.0 }));
    let fbar = f.add_scalar(-pi.dot(&f));
    let ones = DVector::from_element(m, 1.0);
    let z = (DMatrix::identity(m, m) - trans + &ones * pi.transpose()).try_inverse().expect("irreducible chain");
    let zf = z * &fbar;
    (0..m).map(|i| pi[i] * fbar[i] * (2.0 * zf[i] - fbar[i])).sum()
}

fn criterion_9() -> Outcome {
    const STEPS: usize = 100_000;
    const SEEDS: [u64; 3] = [11, 12, 13];
    let mut cases = examples::bundled_g();
    cases.push(("bernoulli-1/5", examples::bernoulli(frac(1, 5))));
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for (name, g) in cases {
        let table = stationary_g_measure(&g, 1).map_err(|e| e.to_string())?;
        let law = gshift::gmeasure::stationary_law(&g).map_err(|e| e.to_string())?;
        let pi: Vec<f64> = law.values.iter().map(ratio::to_f64).collect();
        for seed in SEEDS {
            let path = sample_path(&g, 0, seed, STEPS).map_err(|e| e.to_string())?;
            for s in 0..g.presentation().alphabet().len() {
                let expected = ratio::to_f64(&table.value(&[s]).unwrap());
                let observed = path.iter().filter(|&&x| x == s).count() as f64 / STEPS as f64;
                let se = (asymptotic_variance(&g, &pi, s).max(0.0) / STEPS as f64).sqrt();
                let z = if se > 0.0 { (observed - expected).abs() / se } else { f64::from(u8::from(observed != expected)) * f64::INFINITY };
                ensure(z <= 3.0, || format!("{name} seed {seed} symbol {s}: {observed} vs {expected} is {z:.2} SE"))?;
                worst = worst.max(z);
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} frequencies from 10^5-step paths within 3 SE (largest {worst:.2} SE)"))
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let table: PathBuf = dir.path().join("golden-table.json");
    let t = stationary_g_measure(&examples::golden_mean_g(), 5).map_err(|e| e.to_string())?;
    std::fs::write(&table, format::table_to_json(&t).to_string()).map_err(|e| e.to_string())?;
    let table = table.to_string_lossy().into_owned();
    let (golden, gw, even, ew) = (data("golden.txt"), data("golden.weights"), data("even.txt"), data("even.weights"));
    let (forbidden, burst, vertices) = (data("golden.forbidden"), data("burst.txt"), data("golden.vertices"));
    let (coding, model, chain) = (data("golden.coding"), data("model.json"), data("chain.json"));
    let runs: Vec<Vec<&str>> = vec![
        vec!["lang", &golden, "--length", "5"],
        vec!["lang", &forbidden, "--forbidden", "--length", "5"],
        vec!["gamma", &even, "1", "--length", "3"],
        vec!["gamma", &even, "1", "--length", "3", "--backward"],
        vec!["omega", &even, "01", "--length", "3"],
        vec!["omega", &golden, "11", "--length", "3"],
        vec!["omega-past", &even, "--cycle", "0", "--tail", "1", "--length", "3"],
        vec!["omega-past", &golden, "--cycle", "01", "--length", "2", "--mode", "omega"],
        vec!["check-d", &golden],
        vec!["check-d", &burst],
        vec!["build-gd", &even, "--depth", "3"],
        vec!["gmeasure", &golden, "--weights", &gw, "--depth", "4"],
        vec!["verify-gmeasure", &golden, "--weights", &gw, "--table", &table],
        vec!["sample", &golden, "--weights", &gw, "--seed", "42", "--length", "500"],
        vec!["mgraph-check", &golden, "--weights", &gw, "--vertices", &vertices],
        vec!["g-from-m", &golden, "--weights", &gw, "--vertices", &vertices],
        vec!["m-from-g", &even, "--weights", &ew],
        vec!["transport", &golden, "--weights", &gw, "--doubling", "--table", &table],
        vec!["transport", &even, "--weights", &ew, "--higher-block"],
        vec!["transport", &golden, "--weights", &gw, "--coding", &coding],
        vec!["eta", &model],
        vec!["eta", &chain],
    ];
    let mut commands = BTreeSet::new();
    let mut total = 0;
    for args in &runs {
        for fmt in ["text", "json"] {
            let run = || {
                Command::new(env!("CARGO_BIN_EXE_gshift"))
                    .args(args)
                    .args(["--format", fmt])
                    .output()
                    .expect("binary runs")
            };
            let (a, b) = (run(), run());
            ensure(a.status.code() == b.status.code() && a.stdout == b.stdout && a.stderr == b.stderr, || {
                format!("`gshift {} --format {fmt}` differs between runs", args.join(" "))
            })?;
            ensure(a.status.code().is_some_and(|c| c <= 2) && !(a.stdout.is_empty() && a.stderr.is_empty()), || {
                format!("`gshift {}` produced nothing", args.join(" "))
            })?;
            total += 1;
        }
        commands.insert(args[0]);
    }
    ensure(commands.len() == 14, || format!("only {} commands exercised", commands.len()))?;
    Ok(format!("{total} invocations over all 14 commands byte-identical across two runs"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("omega oracle equivalence", criterion_1),
        ("Omega-infinity prefix identity", criterion_2),
        ("property (D) certificates", criterion_3),
        ("golden-mean g-measure", criterion_4),
        ("measure-graph round trips", criterion_5),
        ("conditions (I)-(III)", criterion_6),
        ("conjugacy transport", criterion_7),
        ("filtration bijection", criterion_8),
        ("sampler statistics", criterion_9),
        ("CLI determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
