//! Limits of monotone set maps along left-infinite pasts.
//!
//! Given a top element and monotone, shrinking transition maps (state sets
//! under `f_σ`, collections of state sets, subsets of a measure-vertex set),
//! the value reached along a growing suffix `x_(−k,0]` decreases and
//! stabilizes. The stabilized values are exactly the `f_t(A)` where
//! `A = f_v(top)` and `f_v(A) = A` for some nonempty `v`, each witnessed by the
//! eventually periodic past `…vvv·t`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::symbolic::{EventuallyPeriodicPast, Word};

/// Applies `step` along `word`; `None` once the value becomes empty.
pub(crate) fn run<T, F>(start: &T, word: &[usize], step: &F) -> Option<T>
where
    T: Clone,
    F: Fn(&T, usize) -> Option<T>,
{
    word.iter().try_fold(start.clone(), |t, &s| step(&t, s))
}

/// The stabilized value along the eventually periodic past, starting from `top`.
pub(crate) fn periodic_limit<T, F>(top: &T, past: &EventuallyPeriodicPast, step: &F) -> Option<T>
where
    T: Ord + Clone,
    F: Fn(&T, usize) -> Option<T>,
{
    let mut seen = BTreeSet::new();
    let mut cur = top.clone();
    loop {
        let next = run(&cur, past.cycle(), step)?;
        if next == cur || !seen.insert(cur.clone()) {
            cur = next;
            break;
        }
        cur = next;
    }
    run(&cur, past.tail(), step)
}

/// Every element reachable from `top`.
pub(crate) fn reachable<T, F>(top: &T, symbols: usize, step: &F) -> BTreeMap<T, Word>
where
    T: Ord + Clone,
    F: Fn(&T, usize) -> Option<T>,
{
    let mut seen = BTreeMap::from([(top.clone(), Word::empty())]);
    let mut queue = VecDeque::from([top.clone()]);
    while let Some(t) = queue.pop_front() {
        let w = seen[&t].clone();
        for s in 0..symbols {
            if let Some(n) = step(&t, s) {
                if !seen.contains_key(&n) {
                    seen.insert(n.clone(), w.pushed(s));
                    queue.push_back(n);
                }
            }
        }
    }
    seen
}

/// All stabilized limits with a witness past for each.
///
/// `allow(value, σ)` restricts which symbols may be read at a given value
/// along the cycle and the tail (the value there is the limit of the past up
/// to that point). Pass `|_, _| true` for the unrestricted family.
pub(crate) fn limits<T, F, G>(top: &T, symbols: usize, step: &F, allow: &G) -> BTreeMap<T, EventuallyPeriodicPast>
where
    T: Ord + Clone,
    F: Fn(&T, usize) -> Option<T>,
    G: Fn(&T, usize) -> bool,
{
    let mut bases: Vec<(T, Word)> = Vec::new();
    for base in reachable(top, symbols, step).into_keys() {
        if let Some(cycle) = idempotent_cycle(top, &base, symbols, step, allow) {
            bases.push((base, cycle));
        }
    }

    let mut out: BTreeMap<T, EventuallyPeriodicPast> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for (base, cycle) in bases {
        if !out.contains_key(&base) {
            let past = EventuallyPeriodicPast::new(Word::empty(), cycle).expect("cycle nonempty");
            out.insert(base.clone(), past.clone());
            queue.push_back((base, past));
        }
    }
    while let Some((t, past)) = queue.pop_front() {
        for s in 0..symbols {
            if !allow(&t, s) {
                continue;
            }
            if let Some(n) = step(&t, s) {
                if !out.contains_key(&n) {
                    let p = past.extended(&[s]);
                    out.insert(n.clone(), p.clone());
                    queue.push_back((n, p));
                }
            }
        }
    }
    out
}

/// Shortest nonempty `v` with `f_v(top) = base` and `f_v(base) = base`,
/// reading only allowed symbols along the `base` component.
fn idempotent_cycle<T, F, G>(top: &T, base: &T, symbols: usize, step: &F, allow: &G) -> Option<Word>
where
    T: Ord + Clone,
    F: Fn(&T, usize) -> Option<T>,
    G: Fn(&T, usize) -> bool,
{
    let mut parent: BTreeMap<(T, T), ((T, T), usize)> = BTreeMap::new();
    let start = (top.clone(), base.clone());
    let mut queue = VecDeque::from([start.clone()]);
    let mut visited = BTreeSet::from([start.clone()]);
    while let Some(node) = queue.pop_front() {
        for s in 0..symbols {
            if !allow(&node.1, s) {
                continue;
            }
            let (Some(a), Some(b)) = (step(&node.0, s), step(&node.1, s)) else {
                continue;
            };
            let n = (a, b);
            if n.0 == *base && n.1 == *base {
                let mut w = vec![s];
                let mut cur = node.clone();
                while cur != start {
                    let (p, sym) = parent[&cur].clone();
                    w.push(sym);
                    cur = p;
                }
                w.reverse();
                return Some(Word::new(w));
            }
            if visited.insert(n.clone()) {
                parent.insert(n.clone(), (node.clone(), s));
                queue.push_back(n);
            }
        }
    }
    None
}
