//! Transition-based parity automata with max-even acceptance.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::graph;

pub type State = usize;
pub type Letter = usize;
pub type Priority = u32;
pub type TransitionId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub src: State,
    pub letter: Letter,
    pub priority: Priority,
    pub dst: State,
}

/// A complete nondeterministic parity automaton over a finite alphabet.
///
/// Transitions are kept sorted by `(src, letter, priority, dst)` so that the
/// outgoing transitions of each `(state, letter)` pair form a contiguous block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityAutomaton {
    name: String,
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: State,
    bounds: (Priority, Priority),
    transitions: Vec<Transition>,
    blocks: Vec<Range<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AcceptanceClass {
    Safety,
    Reachability,
    Weak,
    Buchi,
    CoBuchi,
    Parity,
}

impl fmt::Display for AcceptanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AcceptanceClass::Safety => "safety",
            AcceptanceClass::Reachability => "reachability",
            AcceptanceClass::Weak => "weak",
            AcceptanceClass::Buchi => "buchi",
            AcceptanceClass::CoBuchi => "cobuchi",
            AcceptanceClass::Parity => "parity",
        };
        f.write_str(s)
    }
}

fn check_names(kind: &str, names: &[String]) -> Result<()> {
    if names.is_empty() {
        return Err(Error::InvalidAutomaton(format!("empty {kind} list")));
    }
    let mut seen = BTreeSet::new();
    for n in names {
        if n.is_empty() || n.chars().any(|c| c.is_whitespace() || c == ':' || c == '#') {
            return Err(Error::InvalidAutomaton(format!("bad {kind} name `{n}`")));
        }
        if !seen.insert(n) {
            return Err(Error::InvalidAutomaton(format!("duplicate {kind} `{n}`")));
        }
    }
    Ok(())
}

impl ParityAutomaton {
    /// Validates and builds an automaton. Duplicate transitions are merged.
    pub fn new(
        name: impl Into<String>,
        alphabet: Vec<String>,
        states: Vec<String>,
        initial: State,
        bounds: (Priority, Priority),
        mut transitions: Vec<Transition>,
    ) -> Result<Self> {
        check_names("letter", &alphabet)?;
        check_names("state", &states)?;
        let (lo, hi) = bounds;
        if lo > 1 || lo > hi {
            return Err(Error::InvalidAutomaton(format!("bad priority bounds [{lo},{hi}]")));
        }
        if initial >= states.len() {
            return Err(Error::InvalidAutomaton("initial state out of range".into()));
        }
        for t in &transitions {
            if t.src >= states.len() || t.dst >= states.len() || t.letter >= alphabet.len() {
                return Err(Error::InvalidAutomaton(format!("transition {t:?} out of range")));
            }
            if t.priority < lo || t.priority > hi {
                return Err(Error::InvalidAutomaton(format!(
                    "priority {} outside bounds [{lo},{hi}] on {} {} -> {}",
                    t.priority, states[t.src], alphabet[t.letter], states[t.dst]
                )));
            }
        }
        transitions.sort_unstable();
        transitions.dedup();
        let k = alphabet.len();
        let mut blocks = vec![0..0; states.len() * k];
        let mut i = 0;
        while i < transitions.len() {
            let t = transitions[i];
            let mut j = i;
            while j < transitions.len() && transitions[j].src == t.src && transitions[j].letter == t.letter {
                j += 1;
            }
            blocks[t.src * k + t.letter] = i..j;
            i = j;
        }
        for q in 0..states.len() {
            for a in 0..k {
                if blocks[q * k + a].is_empty() {
                    return Err(Error::InvalidAutomaton(format!(
                        "incomplete: no transition from `{}` on `{}`",
                        states[q], alphabet[a]
                    )));
                }
            }
        }
        Ok(ParityAutomaton { name: name.into(), alphabet, states, initial, bounds, transitions, blocks })
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }
    pub fn states(&self) -> &[String] {
        &self.states
    }
    pub fn num_states(&self) -> usize {
        self.states.len()
    }
    pub fn num_letters(&self) -> usize {
        self.alphabet.len()
    }
    pub fn initial(&self) -> State {
        self.initial
    }
    pub fn bounds(&self) -> (Priority, Priority) {
        self.bounds
    }
    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }
    pub fn transition(&self, id: TransitionId) -> Transition {
        self.transitions[id]
    }

    /// Ids of the transitions leaving `q` on `a`.
    pub fn out_ids(&self, q: State, a: Letter) -> Range<usize> {
        self.blocks[q * self.alphabet.len() + a].clone()
    }

    pub fn out(&self, q: State, a: Letter) -> &[Transition] {
        &self.transitions[self.out_ids(q, a)]
    }

    pub fn transition_id(&self, t: &Transition) -> Option<TransitionId> {
        let r = self.out_ids(t.src, t.letter);
        self.transitions[r.clone()].binary_search(t).ok().map(|i| r.start + i)
    }

    pub fn state_index(&self, name: &str) -> Option<State> {
        self.states.iter().position(|s| s == name)
    }

    pub fn letter_index(&self, name: &str) -> Option<Letter> {
        self.alphabet.iter().position(|s| s == name)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_initial(&self, q: State) -> Self {
        let mut a = self.clone();
        a.initial = q;
        a
    }

    pub fn describe(&self, t: &Transition) -> String {
        format!(
            "{} -{}:{}-> {}",
            self.states[t.src], self.alphabet[t.letter], t.priority, self.states[t.dst]
        )
    }

    /// Successor lists of the underlying graph (one entry per transition).
    pub fn successor_lists(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.states.len()];
        for t in &self.transitions {
            succ[t.src].push(t.dst);
        }
        succ
    }

    pub fn reachable_states(&self) -> Vec<bool> {
        graph::reachable(&self.successor_lists(), &[self.initial], None)
    }

    /// Priorities that occur on transitions out of reachable states.
    pub fn used_priorities(&self) -> BTreeSet<Priority> {
        let r = self.reachable_states();
        self.transitions.iter().filter(|t| r[t.src]).map(|t| t.priority).collect()
    }

    pub fn is_deterministic(&self) -> bool {
        let r = self.reachable_states();
        (0..self.num_states())
            .filter(|&q| r[q])
            .all(|q| (0..self.num_letters()).all(|a| self.out_ids(q, a).len() == 1))
    }

    /// Keeps only reachable states. Returns the new automaton and the map old -> new.
    pub fn restrict_reachable(&self) -> (ParityAutomaton, Vec<Option<State>>) {
        let r = self.reachable_states();
        let mut map = vec![None; self.num_states()];
        let mut names = Vec::new();
        for q in 0..self.num_states() {
            if r[q] {
                map[q] = Some(names.len());
                names.push(self.states[q].clone());
            }
        }
        let ts = self
            .transitions
            .iter()
            .filter(|t| r[t.src])
            .map(|t| Transition {
                src: map[t.src].unwrap(),
                letter: t.letter,
                priority: t.priority,
                dst: map[t.dst].unwrap(),
            })
            .collect();
        let a = ParityAutomaton::new(
            self.name.clone(),
            self.alphabet.clone(),
            names,
            map[self.initial].unwrap(),
            self.bounds,
            ts,
        )
        .expect("reachable restriction stays complete");
        (a, map)
    }

    /// The subautomaton keeping the transitions flagged in `keep`.
    pub fn subautomaton(&self, keep: &[bool]) -> Result<ParityAutomaton> {
        let ts = self
            .transitions
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(t, _)| *t)
            .collect();
        ParityAutomaton::new(
            self.name.clone(),
            self.alphabet.clone(),
            self.states.clone(),
            self.initial,
            self.bounds,
            ts,
        )
    }

    /// Relabels priorities; bounds are recomputed from the result.
    pub fn map_priorities(&self, f: impl Fn(Priority) -> Priority) -> Result<ParityAutomaton> {
        let ts: Vec<Transition> = self
            .transitions
            .iter()
            .map(|t| Transition { priority: f(t.priority), ..*t })
            .collect();
        let lo = f(self.bounds.0).min(ts.iter().map(|t| t.priority).min().unwrap_or(0));
        let hi = f(self.bounds.1).max(ts.iter().map(|t| t.priority).max().unwrap_or(0));
        let lo = if lo > 1 { lo % 2 } else { lo };
        ParityAutomaton::new(
            self.name.clone(),
            self.alphabet.clone(),
            self.states.clone(),
            self.initial,
            (lo, hi.max(lo)),
            ts,
        )
    }

    /// Reorders the alphabet to `order`, which must be a permutation of it.
    pub fn with_alphabet_order(&self, order: &[String]) -> Result<ParityAutomaton> {
        if order == self.alphabet.as_slice() {
            return Ok(self.clone());
        }
        let mut map = HashMap::new();
        for (i, l) in order.iter().enumerate() {
            map.insert(l.as_str(), i);
        }
        if order.len() != self.alphabet.len() || self.alphabet.iter().any(|l| !map.contains_key(l.as_str())) {
            return Err(Error::AlphabetMismatch(format!(
                "{{{}}} vs {{{}}}",
                self.alphabet.join(","),
                order.join(",")
            )));
        }
        let ts = self
            .transitions
            .iter()
            .map(|t| Transition { letter: map[self.alphabet[t.letter].as_str()], ..*t })
            .collect();
        ParityAutomaton::new(
            self.name.clone(),
            order.to_vec(),
            self.states.clone(),
            self.initial,
            self.bounds,
            ts,
        )
    }

    /// Reachable transitions grouped per (state, letter) that have several choices.
    pub fn nondeterministic_pairs(&self) -> Vec<(State, Letter)> {
        let r = self.reachable_states();
        let mut out = Vec::new();
        for q in (0..self.num_states()).filter(|&q| r[q]) {
            for a in 0..self.num_letters() {
                if self.out_ids(q, a).len() > 1 {
                    out.push((q, a));
                }
            }
        }
        out
    }
}

/// Builder addressing states and letters by name.
#[derive(Clone, Debug, Default)]
pub struct AutomatonBuilder {
    name: String,
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: Option<String>,
    bounds: Option<(Priority, Priority)>,
    transitions: Vec<(String, String, Priority, String)>,
    sink: Option<String>,
}

impl AutomatonBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        AutomatonBuilder { name: name.into(), ..Default::default() }
    }

    pub fn alphabet<S: AsRef<str>>(mut self, letters: &[S]) -> Self {
        self.alphabet = letters.iter().map(|s| s.as_ref().to_string()).collect();
        self
    }

    pub fn state(mut self, q: &str) -> Self {
        if !self.states.iter().any(|s| s == q) {
            self.states.push(q.to_string());
        }
        self
    }

    pub fn initial(mut self, q: &str) -> Self {
        self.initial = Some(q.to_string());
        self.state(q)
    }

    pub fn bounds(mut self, lo: Priority, hi: Priority) -> Self {
        self.bounds = Some((lo, hi));
        self
    }

    pub fn trans(mut self, src: &str, letter: &str, priority: Priority, dst: &str) -> Self {
        self = self.state(src).state(dst);
        self.transitions.push((src.to_string(), letter.to_string(), priority, dst.to_string()));
        self
    }

    /// Adds the same transition for several letters.
    pub fn trans_many(mut self, src: &str, letters: &[&str], priority: Priority, dst: &str) -> Self {
        for l in letters {
            self = self.trans(src, l, priority, dst);
        }
        self
    }

    /// Completes missing (state, letter) pairs with a rejecting sink named `sink`.
    pub fn complete_with_sink(mut self, sink: &str) -> Self {
        self.sink = Some(sink.to_string());
        self
    }

    pub fn build(mut self) -> Result<ParityAutomaton> {
        let initial_name = self
            .initial
            .clone()
            .or_else(|| self.states.first().cloned())
            .ok_or_else(|| Error::InvalidAutomaton("no states".into()))?;
        let bounds = match self.bounds {
            Some(b) => b,
            None => {
                let lo = self.transitions.iter().map(|t| t.2).min().unwrap_or(1);
                let hi = self.transitions.iter().map(|t| t.2).max().unwrap_or(1);
                let lo = if lo > 1 { lo % 2 } else { lo };
                (lo, hi.max(1).max(lo))
            }
        };
        if let Some(sink) = self.sink.clone() {
            let reject = if bounds.0 % 2 == 1 { bounds.0 } else { bounds.0 + 1 };
            let mut have: BTreeMap<(String, String), bool> = BTreeMap::new();
            for t in &self.transitions {
                have.insert((t.0.clone(), t.1.clone()), true);
            }
            let states = self.states.clone();
            let mut used_sink = false;
            for q in &states {
                for a in self.alphabet.clone() {
                    if !have.contains_key(&(q.clone(), a.clone())) {
                        self.transitions.push((q.clone(), a.clone(), reject, sink.clone()));
                        used_sink = true;
                    }
                }
            }
            if used_sink && !states.contains(&sink) {
                for a in self.alphabet.clone() {
                    self.transitions.push((sink.clone(), a, reject, sink.clone()));
                }
                self.states.push(sink);
            }
        }
        let sidx = |n: &str| -> Result<State> {
            self.states
                .iter()
                .position(|s| s == n)
                .ok_or_else(|| Error::InvalidAutomaton(format!("unknown state `{n}`")))
        };
        let lidx = |n: &str| -> Result<Letter> {
            self.alphabet
                .iter()
                .position(|s| s == n)
                .ok_or_else(|| Error::InvalidAutomaton(format!("unknown letter `{n}`")))
        };
        let mut ts = Vec::new();
        for (s, l, p, d) in &self.transitions {
            ts.push(Transition { src: sidx(s)?, letter: lidx(l)?, priority: *p, dst: sidx(d)? });
        }
        let init = sidx(&initial_name)?;
        ParityAutomaton::new(self.name, self.alphabet, self.states, init, bounds, ts)
    }
}

fn is_sink_with(a: &ParityAutomaton, q: State, prio: impl Fn(Priority) -> bool) -> bool {
    (0..a.num_letters()).all(|l| a.out(q, l).iter().all(|t| t.dst == q && prio(t.priority)))
}

/// Classifies the acceptance condition by the structure of the reachable part.
///
/// Two-priority automata are read with their natural polarity: in `[1,2]` and in
/// `[0,1]` the even priority is the good one. Safety means every bad transition
/// enters a sink whose loops are all bad; reachability is the dual.
pub fn classify_acceptance(a: &ParityAutomaton) -> AcceptanceClass {
    let (a, _) = a.restrict_reachable();
    let used = a.used_priorities();
    let two_level = used.iter().all(|&p| p <= 2 && p >= 1) || used.iter().all(|&p| p <= 1);
    if !two_level {
        return AcceptanceClass::Parity;
    }
    let good = |p: Priority| p % 2 == 0;
    let safety = a
        .transitions()
        .iter()
        .filter(|t| !good(t.priority))
        .all(|t| is_sink_with(&a, t.dst, |p| !good(p)));
    if safety {
        return AcceptanceClass::Safety;
    }
    let reach = a
        .transitions()
        .iter()
        .filter(|t| good(t.priority))
        .all(|t| is_sink_with(&a, t.dst, good));
    if reach {
        return AcceptanceClass::Reachability;
    }
    if is_weak(&a) {
        return AcceptanceClass::Weak;
    }
    if used.iter().all(|&p| p >= 1) && a.bounds().0 == 1 {
        AcceptanceClass::Buchi
    } else if used.iter().all(|&p| p <= 1) {
        AcceptanceClass::CoBuchi
    } else {
        AcceptanceClass::Buchi
    }
}

/// No strongly connected component contains both a good and a bad transition.
fn is_weak(a: &ParityAutomaton) -> bool {
    let (comp, n) = graph::scc(&a.successor_lists(), None);
    let mut seen: Vec<Option<bool>> = vec![None; n];
    for t in a.transitions() {
        if comp[t.src] == comp[t.dst] {
            let g = t.priority % 2 == 0;
            match seen[comp[t.src]] {
                None => seen[comp[t.src]] = Some(g),
                Some(h) if h != g => return false,
                _ => {}
            }
        }
    }
    true
}

fn require_cobuchi(a: &ParityAutomaton, op: &str) -> Result<()> {
    if a.bounds() != (0, 1) {
        return Err(Error::NotApplicable(format!(
            "{op} expects a coBuchi automaton with priorities [0,1], got [{},{}]",
            a.bounds().0,
            a.bounds().1
        )));
    }
    Ok(())
}

/// Raises to 1 every priority-0 transition that lies on no cycle of priority-0
/// transitions. The language is unchanged.
pub fn priority_reduce(a: &ParityAutomaton) -> Result<ParityAutomaton> {
    require_cobuchi(a, "priority reduction")?;
    let mut succ = vec![Vec::new(); a.num_states()];
    for t in a.transitions().iter().filter(|t| t.priority == 0) {
        succ[t.src].push(t.dst);
    }
    let (comp, _) = graph::scc(&succ, None);
    let ts = a
        .transitions()
        .iter()
        .map(|t| {
            let p = if t.priority == 0 && comp[t.src] == comp[t.dst] { 0 } else { 1 };
            Transition { priority: p, ..*t }
        })
        .collect();
    ParityAutomaton::new(
        a.name().to_string(),
        a.alphabet().to_vec(),
        a.states().to_vec(),
        a.initial(),
        (0, 1),
        ts,
    )
}

fn fresh_name(existing: &[String], base: &str) -> String {
    let mut n = base.to_string();
    while existing.iter().any(|s| s == &n) {
        n.push('\'');
    }
    n
}

/// Redirects every priority-1 transition to a fresh rejecting sink.
///
/// The sink is the last state of the result.
pub fn safe_approximation(a: &ParityAutomaton) -> Result<ParityAutomaton> {
    require_cobuchi(a, "safe approximation")?;
    let bot = a.num_states();
    let mut states = a.states().to_vec();
    states.push(fresh_name(&states, "bot"));
    let mut ts: Vec<Transition> = a
        .transitions()
        .iter()
        .map(|t| if t.priority == 0 { *t } else { Transition { dst: bot, ..*t } })
        .collect();
    for l in 0..a.num_letters() {
        ts.push(Transition { src: bot, letter: l, priority: 1, dst: bot });
    }
    ParityAutomaton::new(
        format!("{}-safe", a.name()),
        a.alphabet().to_vec(),
        states,
        a.initial(),
        (0, 1),
        ts,
    )
}

/// Pairs of states reachable from the initial state on a common finite word.
pub fn coreachability(a: &ParityAutomaton) -> BTreeSet<(State, State)> {
    let n = a.num_states();
    let mut seen = vec![false; n * n];
    let mut stack = vec![(a.initial(), a.initial())];
    seen[a.initial() * n + a.initial()] = true;
    while let Some((p, q)) = stack.pop() {
        for l in 0..a.num_letters() {
            for s in a.out(p, l) {
                for t in a.out(q, l) {
                    let k = s.dst * n + t.dst;
                    if !seen[k] {
                        seen[k] = true;
                        stack.push((s.dst, t.dst));
                    }
                }
            }
        }
    }
    (0..n * n).filter(|&k| seen[k]).map(|k| (k / n, k % n)).collect()
}

/// The transitive closure of coreachability as a partition of the reachable
/// states. `class[q]` is `None` for unreachable states; classes are numbered by
/// their least member.
pub fn weak_coreachability(a: &ParityAutomaton) -> Vec<Option<usize>> {
    let n = a.num_states();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let nx = p[c];
            p[c] = r;
            c = nx;
        }
        r
    }
    let pairs = coreachability(a);
    let mut reach = vec![false; n];
    for &(p, q) in &pairs {
        reach[p] = true;
        reach[q] = true;
        let (rp, rq) = (find(&mut parent, p), find(&mut parent, q));
        if rp != rq {
            parent[rp.max(rq)] = rp.min(rq);
        }
    }
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut class = vec![None; n];
    for q in 0..n {
        if reach[q] {
            let r = find(&mut parent, q);
            let next = ids.len();
            let id = *ids.entry(r).or_insert(next);
            class[q] = Some(id);
        }
    }
    class
}
