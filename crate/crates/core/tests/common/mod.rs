#![allow(dead_code)]

pub mod games2d;
pub mod mdp_oracles;

use omegares::{AutomatonBuilder, LassoWord, ParityAutomaton, Priority};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random complete automaton with priorities in `[lo, hi]` and 1..=`branch`
/// successors per (state, letter).
pub fn random_automaton(
    r: &mut ChaCha8Rng,
    states: usize,
    letters: usize,
    lo: Priority,
    hi: Priority,
    branch: usize,
) -> ParityAutomaton {
    let names: Vec<String> = (0..letters).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let mut b = AutomatonBuilder::new("rand").alphabet(&names).bounds(lo, hi).initial("s0");
    for q in 0..states {
        b = b.state(&format!("s{q}"));
    }
    for q in 0..states {
        for l in &names {
            let k = r.gen_range(1..=branch);
            for _ in 0..k {
                let d = r.gen_range(0..states);
                let p = r.gen_range(lo..=hi);
                b = b.trans(&format!("s{q}"), l, p, &format!("s{d}"));
            }
        }
    }
    b.build().unwrap()
}

pub fn random_deterministic(r: &mut ChaCha8Rng, states: usize, letters: usize, lo: Priority, hi: Priority) -> ParityAutomaton {
    random_automaton(r, states, letters, lo, hi, 1)
}

pub fn random_lasso(r: &mut ChaCha8Rng, letters: usize, max_prefix: usize, max_period: usize) -> LassoWord {
    let p = r.gen_range(0..=max_prefix);
    let c = r.gen_range(1..=max_period);
    LassoWord::new(
        (0..p).map(|_| r.gen_range(0..letters)).collect(),
        (0..c).map(|_| r.gen_range(0..letters)).collect(),
    )
    .unwrap()
}

/// Membership by exhaustive search over the run graph: some reachable
/// (state, position) vertex lies on a closed walk whose maximal priority is even.
/// Closed walks are found by exploring (vertex, maximum so far) pairs.
pub fn brute_force_membership(a: &ParityAutomaton, w: &LassoWord) -> bool {
    let pos = w.positions();
    let node = |q: usize, i: usize| q * pos + i;
    let n = a.num_states() * pos;
    let step = |v: usize| -> Vec<(usize, Priority)> {
        let (q, i) = (v / pos, v % pos);
        a.out(q, w.letter_at(i)).iter().map(|t| (node(t.dst, w.next_pos(i)), t.priority)).collect()
    };
    let mut reach = vec![false; n];
    let mut stack = vec![node(a.initial(), 0)];
    reach[stack[0]] = true;
    while let Some(v) = stack.pop() {
        for (u, _) in step(v) {
            if !reach[u] {
                reach[u] = true;
                stack.push(u);
            }
        }
    }
    let top = a.bounds().1 as usize + 1;
    for anchor in (0..n).filter(|&v| reach[v]) {
        let mut seen = vec![false; n * top];
        let mut stack: Vec<(usize, usize)> = step(anchor).into_iter().map(|(u, p)| (u, p as usize)).collect();
        while let Some((v, m)) = stack.pop() {
            if seen[v * top + m] {
                continue;
            }
            seen[v * top + m] = true;
            if v == anchor && m % 2 == 0 {
                return true;
            }
            for (u, p) in step(v) {
                stack.push((u, m.max(p as usize)));
            }
        }
    }
    false
}

/// Solves `a x = b` over the rationals by Gauss-Jordan elimination.
/// Panics if the system is singular.
pub fn solve_exact(mut a: Vec<Vec<omegares::Rat>>, mut b: Vec<omegares::Rat>) -> Vec<omegares::Rat> {
    use num_traits::Zero;
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("singular system");
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col].clone();
        for k in 0..n {
            a[col][k] = &a[col][k] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in 0..n {
                    let d = &f * &a[col][k];
                    a[r][k] -= d;
                }
                let d = &f * &b[col];
                b[r] -= d;
            }
        }
    }
    b
}

/// Maxima of closed walks through `p`, by exploring (state, max so far).
pub fn closed_walk_maxima(a: &omegares::ParityAutomaton, p: usize) -> Vec<u32> {
    let top = a.bounds().1 as usize + 1;
    let mut seen = vec![false; a.num_states() * top];
    let mut stack: Vec<(usize, usize)> = a.transitions().iter().filter(|t| t.src == p).map(|t| (t.dst, t.priority as usize)).collect();
    let mut out = Vec::new();
    while let Some((q, m)) = stack.pop() {
        if seen[q * top + m] {
            continue;
        }
        seen[q * top + m] = true;
        if q == p {
            out.push(m as u32);
        }
        for t in a.transitions().iter().filter(|t| t.src == q) {
            stack.push((t.dst, m.max(t.priority as usize)));
        }
    }
    out
}
