//! Inclusion of parity languages through transition profiles.
//!
//! A profile of a finite word records, for every pair of states, the set of
//! maximal priorities of runs between them. `L(a) ⊆ L(b)` fails iff some
//! reachable pair of state sets and some idempotent pair of profiles make
//! `a` accept and `b` reject the induced lasso.

use std::collections::HashMap;

use crate::automaton::{Letter, ParityAutomaton};
use crate::error::Result;
use crate::limits::Limits;

/// Above this many distinct profiles the search gives up.
const MAX_PROFILES: usize = 100_000;
const MAX_PRIORITY: u32 = 31;
const EVEN: u32 = 0x5555_5555;

type Mask = u32;

/// `{max(x, y) | x ∈ a, y ∈ b}` over priority bit sets.
fn max_product(a: Mask, b: Mask) -> Mask {
    if a == 0 || b == 0 {
        return 0;
    }
    let mut out = 0;
    let mut rest = a;
    while rest != 0 {
        let x = rest.trailing_zeros();
        rest &= rest - 1;
        let at_least = !((1u32 << x) - 1);
        out |= b & at_least & !(1 << x);
        if b & !at_least != 0 || b & (1 << x) != 0 {
            out |= 1 << x;
        }
    }
    out
}

/// Square matrix of priority sets.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Profile {
    n: usize,
    cells: Vec<Mask>,
}

impl Profile {
    fn letter(a: &ParityAutomaton, l: Letter) -> Profile {
        let n = a.num_states();
        let mut cells = vec![0; n * n];
        for t in a.transitions().iter().filter(|t| t.letter == l) {
            cells[t.src * n + t.dst] |= 1 << t.priority;
        }
        Profile { n, cells }
    }

    fn then(&self, other: &Profile) -> Profile {
        let n = self.n;
        let mut cells = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.cells[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    cells[i * n + j] |= max_product(x, other.cells[k * n + j]);
                }
            }
        }
        Profile { n, cells }
    }

    /// States from which the lasso of an idempotent profile has an accepting run.
    fn accepting_sources(&self) -> Vec<bool> {
        let n = self.n;
        let good: Vec<bool> = (0..n).map(|r| self.cells[r * n + r] & EVEN != 0).collect();
        (0..n).map(|p| (0..n).any(|r| good[r] && self.cells[p * n + r] != 0)).collect()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Pair(Profile, Profile);

impl Pair {
    fn then(&self, o: &Pair) -> Pair {
        Pair(self.0.then(&o.0), self.1.then(&o.1))
    }
}

fn word(parents: &[(usize, Letter)], mut i: usize) -> Vec<Letter> {
    let mut w = Vec::new();
    loop {
        let (p, l) = parents[i];
        w.push(l);
        if p == usize::MAX {
            break;
        }
        i = p;
    }
    w.reverse();
    w
}

/// Searches for a lasso in `L(a) \ L(b)`. Returns `None` when the profile
/// budget is exceeded, and `Some(None)` when the inclusion holds.
#[allow(clippy::type_complexity)]
pub fn find_counterexample(
    a: &ParityAutomaton,
    b: &ParityAutomaton,
    limits: &Limits,
) -> Result<Option<Option<(Vec<Letter>, Vec<Letter>)>>> {
    let top = |x: &ParityAutomaton| x.transitions().iter().map(|t| t.priority).max().unwrap_or(0);
    if top(a) > MAX_PRIORITY || top(b) > MAX_PRIORITY {
        return Ok(None);
    }
    let k = a.num_letters();
    let gens: Vec<Pair> = (0..k).map(|l| Pair(Profile::letter(a, l), Profile::letter(b, l))).collect();

    let mut index: HashMap<Pair, usize> = HashMap::new();
    let mut elems: Vec<Pair> = Vec::new();
    let mut parents: Vec<(usize, Letter)> = Vec::new();
    for (l, g) in gens.iter().enumerate() {
        if !index.contains_key(g) {
            index.insert(g.clone(), elems.len());
            elems.push(g.clone());
            parents.push((usize::MAX, l));
        }
    }
    let mut i = 0;
    while i < elems.len() {
        limits.tick()?;
        for (l, g) in gens.iter().enumerate() {
            let next = elems[i].then(g);
            if !index.contains_key(&next) {
                if elems.len() >= MAX_PROFILES {
                    return Ok(None);
                }
                index.insert(next.clone(), elems.len());
                elems.push(next);
                parents.push((i, l));
            }
        }
        i += 1;
    }

    // Reachable pairs of state sets, with a word reaching each.
    let (na, nb) = (a.num_states(), b.num_states());
    let start = (vec![a.initial()], vec![b.initial()]);
    let mut seen: HashMap<(Vec<usize>, Vec<usize>), usize> = HashMap::from([(start.clone(), 0)]);
    let mut sets = vec![start];
    let mut set_parents: Vec<(usize, Letter)> = vec![(usize::MAX, 0)];
    let mut j = 0;
    while j < sets.len() {
        limits.tick()?;
        for l in 0..k {
            let post = |x: &ParityAutomaton, s: &[usize], n: usize| {
                let mut on = vec![false; n];
                for &q in s {
                    for t in x.out(q, l) {
                        on[t.dst] = true;
                    }
                }
                (0..n).filter(|&q| on[q]).collect::<Vec<_>>()
            };
            let next = (post(a, &sets[j].0, na), post(b, &sets[j].1, nb));
            if !seen.contains_key(&next) {
                if sets.len() >= MAX_PROFILES {
                    return Ok(None);
                }
                seen.insert(next.clone(), sets.len());
                sets.push(next);
                set_parents.push((j, l));
            }
        }
        j += 1;
    }

    for (e, elem) in elems.iter().enumerate() {
        limits.tick()?;
        if elem.then(elem) != *elem {
            continue;
        }
        let (acc_a, acc_b) = (elem.0.accepting_sources(), elem.1.accepting_sources());
        for (s, (sa, sb)) in sets.iter().enumerate() {
            if sa.iter().any(|&q| acc_a[q]) && !sb.iter().any(|&q| acc_b[q]) {
                let mut stem = Vec::new();
                let mut at = s;
                while at != 0 {
                    stem.push(set_parents[at].1);
                    at = set_parents[at].0;
                }
                stem.reverse();
                return Ok(Some(Some((stem, word(&parents, e)))));
            }
        }
    }
    Ok(Some(None))
}
