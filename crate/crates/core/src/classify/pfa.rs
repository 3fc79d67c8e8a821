use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::automaton::{Letter, ParityAutomaton, State, Transition};
use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::resolver::{ProbabilisticParityAutomaton, Resolver};

/// A probabilistic automaton over finite words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pfa {
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: State,
    accepting: Vec<bool>,
    /// `(src, letter, dst, probability)`, all probabilities positive.
    transitions: Vec<(State, Letter, State, Rat)>,
}

impl Pfa {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        initial: State,
        accepting: Vec<bool>,
        transitions: Vec<(State, Letter, State, Rat)>,
    ) -> Result<Pfa> {
        let bad = |m: String| Err(Error::InvalidAutomaton(m));
        let (n, k) = (states.len(), alphabet.len());
        if n == 0 || k == 0 || initial >= n || accepting.len() != n {
            return bad("a PFA needs states, letters, an initial state and one acceptance flag per state".into());
        }
        let mut sums: BTreeMap<(State, Letter), Rat> = BTreeMap::new();
        let mut seen = BTreeMap::new();
        for (s, l, d, p) in &transitions {
            if *s >= n || *l >= k || *d >= n {
                return bad(format!("PFA transition ({s},{l},{d}) out of range"));
            }
            if !p.is_positive() {
                return bad("PFA probabilities must be positive".into());
            }
            if seen.insert((*s, *l, *d), ()).is_some() {
                return bad(format!("duplicate PFA transition ({s},{l},{d})"));
            }
            *sums.entry((*s, *l)).or_insert_with(Rat::zero) += p;
        }
        for q in 0..n {
            for l in 0..k {
                if sums.get(&(q, l)).is_none_or(|s| !s.is_one()) {
                    return bad(format!("probabilities of `{}` on `{}` do not sum to 1", states[q], alphabet[l]));
                }
            }
        }
        Ok(Pfa { states, alphabet, initial, accepting, transitions })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn is_accepting(&self, q: State) -> bool {
        self.accepting[q]
    }

    pub fn transitions(&self) -> &[(State, Letter, State, Rat)] {
        &self.transitions
    }

    /// Probability of ending in an accepting state after reading `u`.
    pub fn acceptance_probability(&self, u: &[Letter]) -> Result<Rat> {
        let mut dist = vec![Rat::zero(); self.states.len()];
        dist[self.initial] = Rat::one();
        for &l in u {
            if l >= self.alphabet.len() {
                return Err(Error::AlphabetMismatch(format!("letter index {l} outside the PFA alphabet")));
            }
            let mut next = vec![Rat::zero(); self.states.len()];
            for (s, a, d, p) in &self.transitions {
                if *a == l && !dist[*s].is_zero() {
                    next[*d] += &dist[*s] * p;
                }
            }
            dist = next;
        }
        Ok((0..dist.len()).filter(|&q| self.accepting[q]).map(|q| dist[q].clone()).sum())
    }
}

fn fresh_letter(alphabet: &[String], base: &str) -> String {
    if !alphabet.iter().any(|a| a == base) {
        return base.to_string();
    }
    (0..).map(|i| format!("{base}{i}")).find(|c| !alphabet.contains(c)).expect("unbounded")
}

fn fresh_state(states: &[String], base: &str) -> String {
    (0..)
        .map(|i| if i == 0 { base.to_string() } else { format!("{base}{i}") })
        .find(|c| !states.contains(c))
        .expect("unbounded")
}

/// A Buchi automaton with a memoryless resolver.
#[derive(Clone, Debug)]
pub struct PfaReduction {
    pub automaton: ParityAutomaton,
    pub resolver: Resolver,
    pub separator: String,
}

/// Büchi automaton accepting blocks separated by `$` of which infinitely
/// many are accepted by `p` with positive probability. Its resolver follows
/// `p`'s probabilities, so it sees an accepting `$` after a block with the
/// probability that `p` accepts the block.
pub fn pfa_to_buchi(p: &Pfa) -> Result<PfaReduction> {
    let sep = fresh_letter(&p.alphabet, "$");
    let mut alphabet = p.alphabet.clone();
    alphabet.push(sep.clone());
    let s = p.alphabet.len();
    let mut ts: Vec<Transition> =
        p.transitions.iter().map(|&(src, letter, dst, _)| Transition { src, letter, priority: 1, dst }).collect();
    for q in 0..p.states.len() {
        let priority = if p.accepting[q] { 2 } else { 1 };
        ts.push(Transition { src: q, letter: s, priority, dst: p.initial });
    }
    let b = ParityAutomaton::new("pfa-buchi", alphabet, p.states.clone(), p.initial, (1, 2), ts)?;
    let probs: BTreeMap<(State, Letter, State), &Rat> = p.transitions.iter().map(|(a, l, d, r)| ((*a, *l, *d), r)).collect();
    let resolver = Resolver::memoryless(&b, |q, l| {
        b.out_ids(q, l)
            .map(|t| {
                let tr = b.transition(t);
                let w = if l == s { Rat::one() } else { probs[&(q, l, tr.dst)].clone() };
                (t, w)
            })
            .collect()
    })?;
    Ok(PfaReduction { automaton: b, resolver, separator: sep })
}

/// A coBuchi automaton with a memoryless resolver, and the names of the
/// three letters added to the input alphabet.
#[derive(Clone, Debug)]
pub struct PbaReduction {
    pub automaton: ParityAutomaton,
    pub resolver: Resolver,
    pub dollar: String,
    pub left: String,
    pub right: String,
}

/// coBuchi automaton and resolver whose acceptance probability on
/// `$ left w` (or `$ right w`) is `1 - Prob_p(w)/2`.
///
/// After `$` the resolver enters one of two states with probability 1/2
/// each; one of them continues into the dual of `p` on the next letter, the
/// other into an accepting sink.
pub fn pba_to_cobuchi(p: &ProbabilisticParityAutomaton) -> Result<PbaReduction> {
    let pa = p.automaton();
    if pa.transitions().iter().any(|t| t.priority == 0 || t.priority > 2) {
        return Err(Error::NotApplicable("expected a probabilistic Buchi automaton with priorities 1 and 2".into()));
    }
    let mut alphabet = pa.alphabet().to_vec();
    let dollar = fresh_letter(&alphabet, "$");
    alphabet.push(dollar.clone());
    let left = fresh_letter(&alphabet, "a");
    alphabet.push(left.clone());
    let right = fresh_letter(&alphabet, "b");
    alphabet.push(right.clone());
    let (ld, ll, lr) = (pa.num_letters(), pa.num_letters() + 1, pa.num_letters() + 2);

    let mut states = pa.states().to_vec();
    let mut add = |base: &str| {
        let s = fresh_state(&states, base);
        states.push(s);
        states.len() - 1
    };
    let (s, s1, s2, fin, sink) = (add("s"), add("s1"), add("s2"), add("s_fin"), add("sink"));
    let q0 = pa.initial();

    let mut ts: Vec<Transition> = pa
        .transitions()
        .iter()
        .enumerate()
        .filter(|(i, _)| p.prob(*i).is_positive())
        .map(|(_, t)| Transition { priority: t.priority - 1, ..*t })
        .collect();
    let t = |src, letter, priority, dst| Transition { src, letter, priority, dst };
    ts.extend([t(s, ld, 0, s1), t(s, ld, 0, s2), t(s1, ll, 0, q0), t(s1, lr, 0, fin), t(s2, lr, 0, q0), t(s2, ll, 0, fin)]);
    for l in 0..alphabet.len() {
        ts.push(t(fin, l, 0, fin));
        ts.push(t(sink, l, 1, sink));
    }
    for q in 0..states.len() {
        for l in 0..alphabet.len() {
            if !ts.iter().any(|x| x.src == q && x.letter == l) {
                ts.push(t(q, l, 1, sink));
            }
        }
    }
    let c = ParityAutomaton::new("pba-cobuchi", alphabet, states, s, (0, 1), ts)?;

    let half = Rat::new(1.into(), 2.into());
    let resolver = Resolver::memoryless(&c, |q, l| {
        let ids: Vec<usize> = c.out_ids(q, l).collect();
        if q < pa.num_states() && l < ld {
            ids.iter()
                .map(|&i| {
                    let tr = c.transition(i);
                    let orig = Transition { priority: tr.priority + 1, ..tr };
                    let w = pa.transition_id(&orig).map(|j| p.prob(j).clone()).unwrap_or_default();
                    (i, w)
                })
                .collect()
        } else if ids.len() == 2 {
            ids.iter().map(|&i| (i, half.clone())).collect()
        } else {
            ids.iter().map(|&i| (i, Rat::one())).collect()
        }
    })?;
    Ok(PbaReduction { automaton: c, resolver, dollar, left, right })
}
