//! Deciders for the resolver-based automaton classes and the constructions
//! built around them.

mod convert;
mod hardness;
mod ma;
mod pfa;
mod report;

use std::collections::HashMap;

use crate::automaton::{Letter, ParityAutomaton, State};
use crate::error::{Error, Result};
use crate::lang::inclusion::{equivalent, LanguageRelationVerdict};
use crate::limits::Limits;

pub use convert::{sr_cobuchi_to_ma, SrConversion};
pub use hardness::{build_hardness_instance, build_hardness_instance_unchecked, HardnessInstance, TwoDimEdge, TwoDimParityGame};
pub use ma::{check_ma_certificate, is_ma, ma_certificate_mdp, MaVerdict};
pub use pfa::{pba_to_cobuchi, pfa_to_buchi, Pfa, PbaReduction, PfaReduction};
pub use report::{classify, ClassificationReport, Evidence, ResolverClass, Verdict};

/// A transition that is not language-preserving: two `letter`-successors of
/// `state` with different languages, and a word separating them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdWitness {
    pub state: State,
    pub letter: Letter,
    pub successors: (State, State),
    pub separation: LanguageRelationVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdVerdict {
    pub semantically_deterministic: bool,
    pub witness: Option<SdWitness>,
}

/// Language equivalence of states, cached per unordered pair.
struct StateLanguages<'a> {
    a: &'a ParityAutomaton,
    cache: HashMap<(State, State), LanguageRelationVerdict>,
}

impl<'a> StateLanguages<'a> {
    fn new(a: &'a ParityAutomaton) -> Self {
        StateLanguages { a, cache: HashMap::new() }
    }

    fn equivalent(&mut self, p: State, q: State, limits: &Limits) -> Result<&LanguageRelationVerdict> {
        let key = (p.min(q), p.max(q));
        if !self.cache.contains_key(&key) {
            let v = equivalent(&self.a.with_initial(key.0), &self.a.with_initial(key.1), limits)?;
            self.cache.insert(key, v);
        }
        Ok(&self.cache[&key])
    }
}

/// Every transition from a reachable state leads to a state with the
/// residual language, i.e. all successors on a letter are equivalent.
pub fn is_semantically_deterministic(a: &ParityAutomaton, limits: &Limits) -> Result<SdVerdict> {
    let reach = a.reachable_states();
    let mut langs = StateLanguages::new(a);
    for q in (0..a.num_states()).filter(|&q| reach[q]) {
        for l in 0..a.num_letters() {
            let succ: Vec<State> = a.out(q, l).iter().map(|t| t.dst).collect();
            for &s in &succ[1..] {
                if s == succ[0] {
                    continue;
                }
                let v = langs.equivalent(succ[0], s, limits)?;
                if !v.holds {
                    return Ok(SdVerdict {
                        semantically_deterministic: false,
                        witness: Some(SdWitness { state: q, letter: l, successors: (succ[0], s), separation: v.clone() }),
                    });
                }
            }
        }
    }
    Ok(SdVerdict { semantically_deterministic: true, witness: None })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreSdVerdict {
    pub pre_sd: bool,
    /// A language-equivalent SD subautomaton.
    pub certificate: Option<ParityAutomaton>,
    pub candidates_checked: usize,
}

/// Searches for a language-equivalent semantically deterministic
/// subautomaton, largest candidates first.
pub fn is_pre_sd(a: &ParityAutomaton, limits: &Limits) -> Result<PreSdVerdict> {
    let mut checked = 0;
    for b in Subautomata::new(a, limits)? {
        limits.tick()?;
        let b = b?;
        checked += 1;
        if !is_semantically_deterministic(&b, limits)?.semantically_deterministic {
            continue;
        }
        if equivalent(&b, a, limits)?.holds {
            return Ok(PreSdVerdict { pre_sd: true, certificate: Some(b), candidates_checked: checked });
        }
    }
    Ok(PreSdVerdict { pre_sd: false, certificate: None, candidates_checked: checked })
}

/// Subautomata keeping a nonempty set of transitions at every reachable
/// (state, letter), in order of decreasing size. Pairs that the kept
/// transitions make unreachable keep all their transitions, so every
/// distinct reachable part is produced once.
pub(crate) struct Subautomata<'a> {
    a: &'a ParityAutomaton,
    /// Reachable nondeterministic pairs with the range of their transition ids.
    pairs: Vec<(State, std::ops::Range<usize>)>,
    order: Vec<Vec<u32>>,
    next: usize,
}

impl<'a> Subautomata<'a> {
    pub(crate) fn new(a: &'a ParityAutomaton, limits: &Limits) -> Result<Self> {
        let reach = a.reachable_states();
        let mut pairs = Vec::new();
        for q in (0..a.num_states()).filter(|&q| reach[q]) {
            for l in 0..a.num_letters() {
                let r = a.out_ids(q, l);
                if r.len() > 1 {
                    pairs.push((q, r));
                }
            }
        }
        let bound = 1usize.checked_shl(limits.max_subset_search as u32).unwrap_or(usize::MAX);
        let mut total = 1usize;
        for (_, r) in &pairs {
            total = total
                .checked_mul((1usize << r.len()) - 1)
                .filter(|&t| t <= bound)
                .ok_or_else(|| Error::ResourceLimit { what: "candidate subautomata".into(), limit: bound })?;
        }
        let mut order: Vec<Vec<u32>> = vec![Vec::new()];
        for (_, r) in &pairs {
            let full = (1u32 << r.len()) - 1;
            let mut masks: Vec<u32> = (1..=full).collect();
            masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
            order = order
                .into_iter()
                .flat_map(|prefix| {
                    masks.iter().map(move |&m| {
                        let mut v = prefix.clone();
                        v.push(m);
                        v
                    })
                })
                .collect();
        }
        order.sort_by_key(|v| std::cmp::Reverse(v.iter().map(|m| m.count_ones()).sum::<u32>()));
        Ok(Subautomata { a, pairs, order, next: 0 })
    }

    fn build(&self, masks: &[u32]) -> Result<Option<ParityAutomaton>> {
        let mut keep = vec![true; self.a.transitions().len()];
        for ((_, r), &m) in self.pairs.iter().zip(masks) {
            for (i, t) in r.clone().enumerate() {
                keep[t] = m >> i & 1 == 1;
            }
        }
        let b = self.a.subautomaton(&keep)?;
        let reach = b.reachable_states();
        let full_elsewhere =
            self.pairs.iter().zip(masks).all(|((q, r), &m)| reach[*q] || m == (1u32 << r.len()) - 1);
        Ok(full_elsewhere.then_some(b))
    }
}

impl Iterator for Subautomata<'_> {
    type Item = Result<ParityAutomaton>;

    fn next(&mut self) -> Option<Self::Item> {
        while self.next < self.order.len() {
            let masks = std::mem::take(&mut self.order[self.next]);
            self.next += 1;
            match self.build(&masks) {
                Ok(Some(b)) => return Some(Ok(b)),
                Ok(None) => continue,
                Err(e) => return Some(Err(e)),
            }
        }
        None
    }
}
