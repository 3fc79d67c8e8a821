//! Complementation: breakpoint construction for coBuchi-like automata, the
//! rank-based construction for Buchi automata and dualisation for
//! deterministic ones.

use std::collections::HashMap;
use std::hash::Hash;

use crate::automaton::{classify_acceptance, AcceptanceClass, Letter, ParityAutomaton, State, Transition};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// A Buchi automaton explored on demand. Successors carry an acceptance mark.
pub trait LazyBuchi {
    type S: Clone + Eq + Hash + Ord;
    fn initial(&self) -> Self::S;
    fn successors(&self, s: &Self::S, letter: Letter, out: &mut Vec<(Self::S, bool)>);
}

/// An explicit automaton viewed as Buchi: even priorities are accepting marks.
pub struct ExplicitBuchi<'a>(pub &'a ParityAutomaton);

impl LazyBuchi for ExplicitBuchi<'_> {
    type S = State;
    fn initial(&self) -> State {
        self.0.initial()
    }
    fn successors(&self, s: &State, letter: Letter, out: &mut Vec<(State, bool)>) {
        out.extend(self.0.out(*s, letter).iter().map(|t| (t.dst, t.priority % 2 == 0)));
    }
}

/// Deterministic breakpoint automaton of a two-priority automaton read as
/// coBuchi (odd transitions must occur finitely often).
///
/// The state is the reachable set together with the subset reached by good
/// transitions only since the last breakpoint. Breakpoints occur finitely often
/// exactly on words of the language, so marking them yields the complement.
pub struct Breakpoint<'a> {
    a: &'a ParityAutomaton,
}

impl<'a> Breakpoint<'a> {
    pub fn new(a: &'a ParityAutomaton) -> Result<Self> {
        let used = a.used_priorities();
        let ok = used.iter().all(|&p| p <= 1) || used.iter().all(|&p| (1..=2).contains(&p));
        let class = classify_acceptance(a);
        if !ok || !(class == AcceptanceClass::CoBuchi || class <= AcceptanceClass::Weak) {
            return Err(Error::NotApplicable(format!(
                "breakpoint construction needs a coBuchi, weak, safety or reachability automaton, got {class}"
            )));
        }
        Ok(Breakpoint { a })
    }
}

impl LazyBuchi for Breakpoint<'_> {
    type S = (BitSet, BitSet);
    fn initial(&self) -> Self::S {
        let s = BitSet::singleton(self.a.num_states(), self.a.initial());
        (s.clone(), s)
    }
    fn successors(&self, (s, o): &Self::S, letter: Letter, out: &mut Vec<(Self::S, bool)>) {
        let n = self.a.num_states();
        let mut s2 = BitSet::new(n);
        for q in s.iter() {
            for t in self.a.out(q, letter) {
                s2.insert(t.dst);
            }
        }
        let mut o2 = BitSet::new(n);
        for q in o.iter() {
            for t in self.a.out(q, letter) {
                if t.priority % 2 == 0 {
                    o2.insert(t.dst);
                }
            }
        }
        if o2.is_empty() {
            out.push(((s2.clone(), s2), true));
        } else {
            out.push(((s2, o2), false));
        }
    }
}

const ABSENT: u8 = u8::MAX;

/// State of the rank-based complement: an initial subset phase, then tight
/// level rankings with a breakpoint set of even-ranked states.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RankState {
    Subset(BitSet),
    Ranked { ranks: Vec<u8>, obligations: BitSet },
}

/// Rank-based complement of a Buchi automaton (priorities in `[1,2]`).
///
/// Ranks are bounded by `2n`; only tight rankings are guessed, after a
/// nondeterministic jump out of the subset phase. An accepting transition
/// leaving an odd-ranked state must strictly decrease the rank.
pub struct RankComplement<'a> {
    a: &'a ParityAutomaton,
}

impl<'a> RankComplement<'a> {
    pub fn new(a: &'a ParityAutomaton) -> Result<Self> {
        if a.bounds() != (1, 2) {
            return Err(Error::NotApplicable("rank-based complementation expects priorities [1,2]".into()));
        }
        if a.num_states() > 120 {
            return Err(Error::ResourceLimit { what: "rank-based complement input states".into(), limit: 120 });
        }
        Ok(RankComplement { a })
    }

    fn post(&self, s: impl Iterator<Item = usize>, letter: Letter) -> BitSet {
        let mut r = BitSet::new(self.a.num_states());
        for q in s {
            for t in self.a.out(q, letter) {
                r.insert(t.dst);
            }
        }
        r
    }

    /// All tight rankings of `dom` with `rank(q) <= bound[q]`.
    fn tight(&self, dom: &[usize], bound: &[u8], out: &mut Vec<Vec<u8>>) {
        let k = dom.len();
        let cap = bound.iter().copied().filter(|&b| b != ABSENT).max().unwrap_or(0);
        let mut r = 1u8;
        let mut cur = vec![ABSENT; self.a.num_states()];
        while (r as usize) < 2 * k && r <= cap {
            let mut counts = vec![0usize; r as usize + 1];
            fill(dom, 0, bound, r, &mut cur, &mut counts, out);
            r += 2;
        }
    }
}

fn fill(
    dom: &[usize],
    i: usize,
    bound: &[u8],
    r: u8,
    cur: &mut Vec<u8>,
    counts: &mut Vec<usize>,
    out: &mut Vec<Vec<u8>>,
) {
    let missing = (1..=r).step_by(2).filter(|&o| counts[o as usize] == 0).count();
    if missing > dom.len() - i {
        return;
    }
    if i == dom.len() {
        out.push(cur.clone());
        return;
    }
    let q = dom[i];
    let hi = bound[q].min(r);
    for v in 0..=hi {
        cur[q] = v;
        counts[v as usize] += 1;
        fill(dom, i + 1, bound, r, cur, counts, out);
        counts[v as usize] -= 1;
    }
    cur[q] = ABSENT;
}

impl LazyBuchi for RankComplement<'_> {
    type S = RankState;
    fn initial(&self) -> RankState {
        RankState::Subset(BitSet::singleton(self.a.num_states(), self.a.initial()))
    }

    fn successors(&self, s: &RankState, letter: Letter, out: &mut Vec<(RankState, bool)>) {
        let n = self.a.num_states();
        match s {
            RankState::Subset(set) => {
                let next = self.post(set.iter(), letter);
                let dom: Vec<usize> = next.iter().collect();
                let cap = (2 * dom.len()).saturating_sub(1).min(2 * n) as u8;
                let mut bound = vec![ABSENT; n];
                for &q in &dom {
                    bound[q] = cap;
                }
                let mut rs = Vec::new();
                self.tight(&dom, &bound, &mut rs);
                out.push((RankState::Subset(next), false));
                for ranks in rs {
                    out.push((RankState::Ranked { ranks, obligations: BitSet::new(n) }, false));
                }
            }
            RankState::Ranked { ranks, obligations } => {
                let mut bound = vec![ABSENT; n];
                for q in 0..n {
                    let g = ranks[q];
                    if g == ABSENT {
                        continue;
                    }
                    for t in self.a.out(q, letter) {
                        let b = if t.priority == 2 && g % 2 == 1 {
                            g - 1
                        } else {
                            g
                        };
                        let e = &mut bound[t.dst];
                        *e = if *e == ABSENT { b } else { (*e).min(b) };
                    }
                }
                let dom: Vec<usize> = (0..n).filter(|&q| bound[q] != ABSENT).collect();
                let mut rs = Vec::new();
                self.tight(&dom, &bound, &mut rs);
                let breakpoint = obligations.is_empty();
                let post_o = self.post(obligations.iter(), letter);
                for r in rs {
                    let mut o = BitSet::new(n);
                    for &q in &dom {
                        if r[q] % 2 == 0 && (breakpoint || post_o.contains(q)) {
                            o.insert(q);
                        }
                    }
                    out.push((RankState::Ranked { ranks: r, obligations: o }, breakpoint));
                }
            }
        }
    }
}

/// Materializes a lazy Buchi automaton over the given alphabet. Missing
/// successors are sent to a rejecting sink.
pub fn materialize<L: LazyBuchi>(
    lazy: &L,
    name: &str,
    alphabet: &[String],
    limits: &Limits,
) -> Result<ParityAutomaton> {
    let mut ids: HashMap<L::S, usize> = HashMap::new();
    let mut order = vec![lazy.initial()];
    ids.insert(lazy.initial(), 0);
    let mut ts = Vec::new();
    let mut sink_needed = false;
    let mut buf = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let s = order[i].clone();
        for l in 0..alphabet.len() {
            buf.clear();
            lazy.successors(&s, l, &mut buf);
            if buf.is_empty() {
                sink_needed = true;
                ts.push((i, l, 1, usize::MAX));
            }
            for (t, acc) in buf.drain(..) {
                let next = ids.len();
                let id = *ids.entry(t.clone()).or_insert_with(|| {
                    order.push(t);
                    next
                });
                limits.check_states("complement states", order.len())?;
                ts.push((i, l, if acc { 2 } else { 1 }, id));
            }
        }
        i += 1;
    }
    let n = order.len();
    let mut names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let sink = n;
    if sink_needed {
        names.push("sink".into());
        for l in 0..alphabet.len() {
            ts.push((sink, l, 1, sink));
        }
    }
    let ts = ts
        .into_iter()
        .map(|(s, l, p, d)| Transition { src: s, letter: l, priority: p, dst: if d == usize::MAX { sink } else { d } })
        .collect();
    ParityAutomaton::new(name.to_string(), alphabet.to_vec(), names, 0, (1, 2), ts)
}

/// Rank-based complement of a Buchi automaton as an explicit automaton.
pub fn complement_buchi(a: &ParityAutomaton, limits: &Limits) -> Result<ParityAutomaton> {
    let rc = RankComplement::new(a)?;
    materialize(&rc, &format!("{}-complement", a.name()), a.alphabet(), limits)
}

/// Deterministic Buchi complement of a coBuchi-like automaton.
pub fn complement_cobuchi(a: &ParityAutomaton, limits: &Limits) -> Result<ParityAutomaton> {
    let bp = Breakpoint::new(a)?;
    materialize(&bp, &format!("{}-complement", a.name()), a.alphabet(), limits)
}

/// Deterministic coBuchi automaton equivalent to a coBuchi-like automaton.
pub fn determinize_cobuchi(a: &ParityAutomaton, limits: &Limits) -> Result<ParityAutomaton> {
    let c = complement_cobuchi(a, limits)?;
    c.map_priorities(|p| p - 1).map(|d| d.with_name(format!("{}-det", a.name())))
}

/// Complement of a deterministic automaton by shifting every priority by one.
pub fn complement_deterministic(a: &ParityAutomaton) -> Result<ParityAutomaton> {
    if !a.is_deterministic() {
        return Err(Error::NotApplicable("automaton is not deterministic".into()));
    }
    let (lo, hi) = a.bounds();
    let shifted: Vec<Transition> = a
        .transitions()
        .iter()
        .map(|t| Transition { priority: if lo == 0 { t.priority + 1 } else { t.priority - 1 }, ..*t })
        .collect();
    let bounds = if lo == 0 { (1, hi + 1) } else { (0, hi - 1) };
    ParityAutomaton::new(
        format!("{}-complement", a.name()),
        a.alphabet().to_vec(),
        a.states().to_vec(),
        a.initial(),
        bounds,
        shifted,
    )
}
