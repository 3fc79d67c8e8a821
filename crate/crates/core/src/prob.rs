//! Acceptance probabilities of probabilistic parity automata: exact values on
//! ultimately periodic words, exact prefix distributions and seeded
//! Monte-Carlo estimates.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{Letter, Priority, State};
use crate::error::{Error, Result};
use crate::graph;
use crate::lasso::LassoWord;
use crate::linalg;
use crate::rational::{to_f64, Rat};
use crate::resolver::ProbabilisticParityAutomaton;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainEdge {
    pub src: usize,
    pub dst: usize,
    pub prob: Rat,
    pub priority: Priority,
}

/// The Markov chain of runs on a lasso word, over (state, position) pairs
/// reachable from the initial state at position 0.
#[derive(Clone, Debug)]
pub struct LassoChain {
    pub states: Vec<(State, usize)>,
    pub edges: Vec<ChainEdge>,
    out: Vec<Vec<usize>>,
}

impl LassoChain {
    pub fn new(p: &ProbabilisticParityAutomaton, w: &LassoWord) -> Result<LassoChain> {
        let a = p.automaton();
        w.check_alphabet(a.num_letters())?;
        let mut ids: HashMap<(State, usize), usize> = HashMap::new();
        let mut states = vec![(a.initial(), 0)];
        ids.insert(states[0], 0);
        let mut edges = Vec::new();
        let mut out = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (q, pos) = states[i];
            let next = w.next_pos(pos);
            let mut mine = Vec::new();
            for (t, pr) in p.support(q, w.letter_at(pos)) {
                let key = (t.dst, next);
                let id = *ids.entry(key).or_insert_with(|| {
                    states.push(key);
                    states.len() - 1
                });
                mine.push(edges.len());
                edges.push(ChainEdge { src: i, dst: id, prob: pr.clone(), priority: t.priority });
            }
            out.push(mine);
            i += 1;
        }
        Ok(LassoChain { states, edges, out })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn out(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        self.out.iter().map(|o| o.iter().map(|&e| self.edges[e].dst).collect()).collect()
    }

    /// Bottom strongly connected components with the maximal priority on
    /// their internal edges; `bottom_of[v]` is the component index of `v`.
    pub fn bottom_sccs(&self) -> (Vec<(Vec<usize>, Priority)>, Vec<Option<usize>>) {
        let (comp, k) = graph::scc(&self.successors(), None);
        let mut bottom = vec![true; k];
        let mut top: Vec<Option<Priority>> = vec![None; k];
        for e in &self.edges {
            if comp[e.src] != comp[e.dst] {
                bottom[comp[e.src]] = false;
            } else {
                let t = &mut top[comp[e.src]];
                *t = Some(t.map_or(e.priority, |x| x.max(e.priority)));
            }
        }
        let mut index = vec![None; k];
        let mut out = Vec::new();
        for c in 0..k {
            if bottom[c] {
                let members: Vec<usize> = (0..self.len()).filter(|&v| comp[v] == c).collect();
                let max = top[c].expect("a bottom component of a chain without dead ends has an internal edge");
                index[c] = Some(out.len());
                out.push((members, max));
            }
        }
        (out, comp.iter().map(|&c| index[c]).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottomComponent {
    pub states: Vec<(State, usize)>,
    pub max_priority: Priority,
    pub accepting: bool,
    pub reach: Rat,
}

/// The exact acceptance probability and its split over bottom components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceptanceProbability {
    pub value: Rat,
    pub components: Vec<BottomComponent>,
}

/// Probability that a run on `w` is accepting. A bottom component accepts
/// iff its largest internal priority is even, since every internal edge
/// recurs almost surely.
pub fn lasso_acceptance_probability(p: &ProbabilisticParityAutomaton, w: &LassoWord) -> Result<AcceptanceProbability> {
    let chain = LassoChain::new(p, w)?;
    let (bottoms, bottom_of) = chain.bottom_sccs();
    let transient: Vec<usize> = (0..chain.len()).filter(|&v| bottom_of[v].is_none()).collect();
    let mut slot = vec![usize::MAX; chain.len()];
    for (i, &v) in transient.iter().enumerate() {
        slot[v] = i;
    }
    let n = transient.len();
    let mut a = vec![vec![Rat::zero(); n]; n];
    let mut rhs = vec![vec![Rat::zero(); n]; bottoms.len()];
    for (i, &v) in transient.iter().enumerate() {
        a[i][i] += Rat::one();
        for &e in chain.out(v) {
            let ed = &chain.edges[e];
            match bottom_of[ed.dst] {
                Some(b) => rhs[b][i] += &ed.prob,
                None => a[i][slot[ed.dst]] -= &ed.prob,
            }
        }
    }
    let xs = linalg::solve_many(&a, &rhs)?;
    let mut value = Rat::zero();
    let mut components = Vec::with_capacity(bottoms.len());
    for (b, (members, max)) in bottoms.into_iter().enumerate() {
        let reach = match bottom_of[0] {
            Some(c) if c == b => Rat::one(),
            Some(_) => Rat::zero(),
            None => xs[b][slot[0]].clone(),
        };
        let accepting = max % 2 == 0;
        if accepting {
            value += &reach;
        }
        components.push(BottomComponent {
            states: members.iter().map(|&v| chain.states[v]).collect(),
            max_priority: max,
            accepting,
            reach,
        });
    }
    Ok(AcceptanceProbability { value, components })
}

/// Exact distribution over states after reading `u` from the initial state.
pub fn prefix_state_distribution(p: &ProbabilisticParityAutomaton, u: &[Letter]) -> Result<BTreeMap<State, Rat>> {
    let mut out = BTreeMap::new();
    for ((q, _), m) in prefix_max_priority_distribution(p, u)? {
        *out.entry(q).or_insert_with(Rat::zero) += m;
    }
    Ok(out)
}

/// Exact distribution over (state, largest priority seen so far) after
/// reading `u`; the priority is `None` on the empty word.
pub fn prefix_max_priority_distribution(
    p: &ProbabilisticParityAutomaton,
    u: &[Letter],
) -> Result<BTreeMap<(State, Option<Priority>), Rat>> {
    let a = p.automaton();
    if let Some(&l) = u.iter().find(|&&l| l >= a.num_letters()) {
        return Err(Error::AlphabetMismatch(format!("letter index {l} outside an alphabet of size {}", a.num_letters())));
    }
    let mut dist: BTreeMap<(State, Option<Priority>), Rat> = BTreeMap::new();
    dist.insert((a.initial(), None), Rat::one());
    for &l in u {
        let mut next: BTreeMap<(State, Option<Priority>), Rat> = BTreeMap::new();
        for ((q, m), mass) in dist {
            for (t, pr) in p.support(q, l) {
                let key = (t.dst, Some(m.map_or(t.priority, |x| x.max(t.priority))));
                *next.entry(key).or_insert_with(Rat::zero) += &mass * pr;
            }
        }
        dist = next;
    }
    Ok(dist)
}

/// Two-sided z-value of a 99% normal interval.
const Z99: f64 = 2.575_829_303_549;

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloEstimate {
    pub trials: u64,
    pub accepted: u64,
    pub estimate: f64,
    /// Half-width of a 99% interval around `estimate` (Wilson score with
    /// continuity correction, widened to cover the estimate itself).
    pub radius: f64,
}

/// Result of one sampled run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub accepted: bool,
    /// Step at which the run entered a bottom component, if it did.
    pub absorbed_at: Option<usize>,
}

/// Samples runs of a probabilistic automaton on one lasso word.
#[derive(Clone, Debug)]
pub struct RunSampler {
    chain: LassoChain,
    bottoms: Vec<(Vec<usize>, Priority)>,
    bottom_of: Vec<Option<usize>>,
    probs: Vec<f64>,
    prefix_len: usize,
    period_len: usize,
    num_states: usize,
}

impl RunSampler {
    pub fn new(p: &ProbabilisticParityAutomaton, w: &LassoWord) -> Result<RunSampler> {
        let chain = LassoChain::new(p, w)?;
        let (bottoms, bottom_of) = chain.bottom_sccs();
        let probs = chain.edges.iter().map(|e| to_f64(&e.prob)).collect();
        Ok(RunSampler {
            chain,
            bottoms,
            bottom_of,
            probs,
            prefix_len: w.prefix().len(),
            period_len: w.period().len(),
            num_states: p.automaton().num_states(),
        })
    }

    /// Runs trial `index` for `horizon_periods` periods after the prefix. The
    /// run draws from ChaCha8 stream `index` of `seed`, so longer horizons
    /// extend the same run. It is classified by the bottom component it
    /// enters, or, if it enters none, by the largest priority on the cycle
    /// since the last earlier visit of its final (state, position) pair.
    pub fn trial(&self, seed: u64, index: u64, horizon_periods: usize) -> TrialOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let steps = self.prefix_len + horizon_periods * self.period_len;
        let mut at = 0usize;
        let mut trace: Vec<(usize, Priority)> = Vec::new();
        for step in 0..=steps {
            if let Some(b) = self.bottom_of[at] {
                return TrialOutcome { accepted: self.bottoms[b].1 % 2 == 0, absorbed_at: Some(step) };
            }
            if step == steps {
                break;
            }
            let out = self.chain.out(at);
            let mut x: f64 = rng.gen();
            let mut pick = out[out.len() - 1];
            for &e in out {
                if x < self.probs[e] {
                    pick = e;
                    break;
                }
                x -= self.probs[e];
            }
            trace.push((at, self.chain.edges[pick].priority));
            at = self.chain.edges[pick].dst;
        }
        let start = trace.iter().rposition(|&(v, _)| v == at).unwrap_or(0);
        let accepted = trace[start..].iter().map(|&(_, pr)| pr).max().is_some_and(|m| m % 2 == 0);
        TrialOutcome { accepted, absorbed_at: None }
    }

    pub fn estimate(&self, trials: u64, horizon_periods: usize, seed: u64) -> Result<MonteCarloEstimate> {
        if trials == 0 {
            return Err(Error::InvalidWord("at least one trial is needed".into()));
        }
        if horizon_periods < self.num_states {
            return Err(Error::InvalidWord(format!(
                "horizon of {horizon_periods} periods is below the {} states of the automaton",
                self.num_states
            )));
        }
        let accepted = (0..trials).filter(|&i| self.trial(seed, i, horizon_periods).accepted).count() as u64;
        let (estimate, radius) = wilson(accepted, trials);
        Ok(MonteCarloEstimate { trials, accepted, estimate, radius })
    }
}

/// Estimates the acceptance probability of `p` on `w` from `trials` sampled
/// runs; see [`RunSampler::trial`].
pub fn monte_carlo_estimate(
    p: &ProbabilisticParityAutomaton,
    w: &LassoWord,
    trials: u64,
    horizon_periods: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    RunSampler::new(p, w)?.estimate(trials, horizon_periods, seed)
}

/// Frequency and 99% radius for `k` successes in `n` trials.
fn wilson(k: u64, n: u64) -> (f64, f64) {
    let (kf, nf) = (k as f64, n as f64);
    let phat = kf / nf;
    let z2 = Z99 * Z99;
    let denom = 2.0 * (nf + z2);
    let lo = if k == 0 {
        0.0
    } else {
        let s = (z2 - 2.0 - 1.0 / nf + 4.0 * phat * (nf * (1.0 - phat) + 1.0)).max(0.0).sqrt();
        ((2.0 * nf * phat + z2 - 1.0 - Z99 * s) / denom).max(0.0)
    };
    let hi = if k == n {
        1.0
    } else {
        let s = (z2 + 2.0 - 1.0 / nf + 4.0 * phat * (nf * (1.0 - phat) - 1.0)).max(0.0).sqrt();
        ((2.0 * nf * phat + z2 + 1.0 + Z99 * s) / denom).min(1.0)
    };
    (phat, (phat - lo).max(hi - phat))
}
