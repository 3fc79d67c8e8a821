//! Stochastic resolvers and the probabilistic automata they induce.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::automaton::{Letter, ParityAutomaton, State, Transition, TransitionId};
use crate::error::{Error, Result};
use crate::rational::{format_rat, Rat};

pub type Memory = usize;

/// A finite-memory stochastic resolver for a fixed automaton.
///
/// `next_move(m, q, a)` is a distribution over the transitions leaving `q` on `a`;
/// `update(m, t)` is the memory after taking transition `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolver {
    memory: Vec<String>,
    initial: Memory,
    states: usize,
    letters: usize,
    transitions: usize,
    moves: Vec<Vec<(TransitionId, Rat)>>,
    updates: Vec<Memory>,
}

impl Resolver {
    /// Builds and validates a resolver. Missing updates are an error; every
    /// `(memory, state, letter)` must carry a distribution summing to exactly one.
    pub fn new(
        a: &ParityAutomaton,
        memory: Vec<String>,
        initial: Memory,
        moves: BTreeMap<(Memory, State, Letter), Vec<(TransitionId, Rat)>>,
        updates: BTreeMap<(Memory, TransitionId), Memory>,
    ) -> Result<Resolver> {
        let (n, k, t) = (a.num_states(), a.num_letters(), a.transitions().len());
        if memory.is_empty() || initial >= memory.len() {
            return Err(Error::InvalidResolver("bad memory set or initial memory".into()));
        }
        let mut mv = vec![Vec::new(); memory.len() * n * k];
        for m in 0..memory.len() {
            for q in 0..n {
                for l in 0..k {
                    let dist = moves.get(&(m, q, l)).ok_or_else(|| {
                        Error::InvalidResolver(format!(
                            "no move for memory `{}` at `{}` on `{}`",
                            memory[m],
                            a.states()[q],
                            a.alphabet()[l]
                        ))
                    })?;
                    let range = a.out_ids(q, l);
                    let mut sum = Rat::zero();
                    let mut seen = BTreeMap::new();
                    for (tid, p) in dist {
                        if !range.contains(tid) {
                            return Err(Error::InvalidResolver(format!(
                                "move for `{}` on `{}` uses a transition not leaving that pair",
                                a.states()[q],
                                a.alphabet()[l]
                            )));
                        }
                        if p.is_negative() || seen.insert(*tid, ()).is_some() {
                            return Err(Error::InvalidResolver("negative or repeated weight".into()));
                        }
                        sum += p;
                    }
                    if !sum.is_one() {
                        return Err(Error::InvalidResolver(format!(
                            "distribution at (`{}`, `{}`, `{}`) sums to {}",
                            memory[m],
                            a.states()[q],
                            a.alphabet()[l],
                            format_rat(&sum)
                        )));
                    }
                    let mut d: Vec<(TransitionId, Rat)> =
                        dist.iter().filter(|(_, p)| !p.is_zero()).cloned().collect();
                    d.sort_by_key(|x| x.0);
                    mv[(m * n + q) * k + l] = d;
                }
            }
        }
        let mut up = vec![0; memory.len() * t];
        for m in 0..memory.len() {
            for tid in 0..t {
                let u = *updates.get(&(m, tid)).ok_or_else(|| {
                    Error::InvalidResolver(format!(
                        "no update for memory `{}` on {}",
                        memory[m],
                        a.describe(&a.transition(tid))
                    ))
                })?;
                if u >= memory.len() {
                    return Err(Error::InvalidResolver("update leaves the memory set".into()));
                }
                up[m * t + tid] = u;
            }
        }
        Ok(Resolver { memory, initial, states: n, letters: k, transitions: t, moves: mv, updates: up })
    }

    /// A memoryless resolver given by a distribution per (state, letter).
    pub fn memoryless(
        a: &ParityAutomaton,
        mut dist: impl FnMut(State, Letter) -> Vec<(TransitionId, Rat)>,
    ) -> Result<Resolver> {
        let mut moves = BTreeMap::new();
        for q in 0..a.num_states() {
            for l in 0..a.num_letters() {
                moves.insert((0, q, l), dist(q, l));
            }
        }
        let updates = (0..a.transitions().len()).map(|t| ((0, t), 0)).collect();
        Resolver::new(a, vec!["m0".into()], 0, moves, updates)
    }

    pub fn memory(&self) -> &[String] {
        &self.memory
    }

    pub fn initial(&self) -> Memory {
        self.initial
    }

    pub fn next_move(&self, m: Memory, q: State, a: Letter) -> &[(TransitionId, Rat)] {
        &self.moves[(m * self.states + q) * self.letters + a]
    }

    pub fn update(&self, m: Memory, t: TransitionId) -> Memory {
        self.updates[m * self.transitions + t]
    }

    /// Checks the resolver was built for an automaton of this shape.
    pub fn check_fits(&self, a: &ParityAutomaton) -> Result<()> {
        if a.num_states() != self.states || a.num_letters() != self.letters || a.transitions().len() != self.transitions {
            return Err(Error::InvalidResolver("resolver does not match the automaton".into()));
        }
        Ok(())
    }

    /// Serializable view: moves as (memory, state, letter, transition, weight).
    pub fn move_table(&self) -> Vec<(Memory, State, Letter, TransitionId, Rat)> {
        let mut out = Vec::new();
        for m in 0..self.memory.len() {
            for q in 0..self.states {
                for l in 0..self.letters {
                    for (t, p) in self.next_move(m, q, l) {
                        out.push((m, q, l, *t, p.clone()));
                    }
                }
            }
        }
        out
    }
}

/// The memoryless resolver that picks uniformly among the available transitions.
pub fn uniform_resolver(a: &ParityAutomaton) -> Resolver {
    Resolver::memoryless(a, |q, l| {
        let r = a.out_ids(q, l);
        let w = Rat::new(1.into(), (r.len() as i64).into());
        r.map(|t| (t, w.clone())).collect()
    })
    .expect("uniform resolver is well formed")
}

/// A parity automaton whose transitions carry probabilities summing to one per
/// (state, letter).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbabilisticParityAutomaton {
    automaton: ParityAutomaton,
    probs: Vec<Rat>,
}

impl ProbabilisticParityAutomaton {
    pub fn new(automaton: ParityAutomaton, probs: Vec<Rat>) -> Result<Self> {
        if probs.len() != automaton.transitions().len() {
            return Err(Error::InvalidAutomaton("one probability per transition expected".into()));
        }
        for q in 0..automaton.num_states() {
            for l in 0..automaton.num_letters() {
                let mut sum = Rat::zero();
                for t in automaton.out_ids(q, l) {
                    if probs[t].is_negative() || probs[t] > Rat::one() {
                        return Err(Error::InvalidAutomaton("probability outside [0,1]".into()));
                    }
                    sum += &probs[t];
                }
                if !sum.is_one() {
                    return Err(Error::InvalidAutomaton(format!(
                        "probabilities from `{}` on `{}` sum to {}",
                        automaton.states()[q],
                        automaton.alphabet()[l],
                        format_rat(&sum)
                    )));
                }
            }
        }
        Ok(ProbabilisticParityAutomaton { automaton, probs })
    }

    pub fn automaton(&self) -> &ParityAutomaton {
        &self.automaton
    }

    pub fn prob(&self, t: TransitionId) -> &Rat {
        &self.probs[t]
    }

    pub fn probs(&self) -> &[Rat] {
        &self.probs
    }

    /// The transitions with positive probability out of `(q, a)`.
    pub fn support(&self, q: State, a: Letter) -> impl Iterator<Item = (Transition, &Rat)> + '_ {
        self.automaton
            .out_ids(q, a)
            .filter(|&t| !self.probs[t].is_zero())
            .map(move |t| (self.automaton.transition(t), &self.probs[t]))
    }
}

/// The automaton over `Q × M` in which the resolver's choices become probabilities.
pub fn resolver_product(a: &ParityAutomaton, r: &Resolver) -> Result<ProbabilisticParityAutomaton> {
    r.check_fits(a)?;
    let mm = r.memory().len();
    let idx = |q: State, m: Memory| q * mm + m;
    let mut names = Vec::with_capacity(a.num_states() * mm);
    for q in 0..a.num_states() {
        for m in 0..mm {
            if mm == 1 {
                names.push(a.states()[q].clone());
            } else {
                names.push(format!("{}@{}", a.states()[q], r.memory()[m]));
            }
        }
    }
    let mut weighted: BTreeMap<Transition, Rat> = BTreeMap::new();
    for q in 0..a.num_states() {
        for m in 0..mm {
            for l in 0..a.num_letters() {
                for (tid, p) in r.next_move(m, q, l) {
                    let t = a.transition(*tid);
                    let pt = Transition {
                        src: idx(q, m),
                        letter: l,
                        priority: t.priority,
                        dst: idx(t.dst, r.update(m, *tid)),
                    };
                    *weighted.entry(pt).or_insert_with(Rat::zero) += p;
                }
            }
        }
    }
    let ts: Vec<Transition> = weighted.keys().cloned().collect();
    let pa = ParityAutomaton::new(
        format!("{}-resolved", a.name()),
        a.alphabet().to_vec(),
        names,
        idx(a.initial(), r.initial()),
        a.bounds(),
        ts,
    )?;
    let probs = pa.transitions().iter().map(|t| weighted[t].clone()).collect();
    ProbabilisticParityAutomaton::new(pa, probs)
}
