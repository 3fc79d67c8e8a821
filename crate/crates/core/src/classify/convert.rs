use std::collections::{BTreeSet, HashMap};

use super::check_ma_certificate;
use crate::automaton::{
    priority_reduce, safe_approximation, weak_coreachability, ParityAutomaton, State, Transition,
};
use crate::error::{Error, Result};
use crate::games::is_history_deterministic;
use crate::lang::{contains, equivalent};
use crate::limits::Limits;

/// Output of the SR-coBuchi to MA conversion.
#[derive(Clone, Debug)]
pub struct SrConversion {
    pub automaton: ParityAutomaton,
    /// Subautomaton whose uniform resolver is almost-surely accepting.
    pub certificate: ParityAutomaton,
    /// States of the input whose safe part is history-deterministic.
    pub safe_deterministic: Vec<State>,
}

/// Converts a coBuchi automaton assumed to be stochastically resolvable into
/// an equivalent MA automaton on a subset of its states.
///
/// Each kept state has one deterministic safe transition per letter where
/// its safe part allows one; otherwise it jumps, with priority 1, to every
/// kept state weakly coreachable with a successor.
pub fn sr_cobuchi_to_ma(input: &ParityAutomaton, limits: &Limits) -> Result<SrConversion> {
    let pruned = prune_to_residuals(input, limits)?;
    let c = &pruned;
    let reduced = priority_reduce(c)?;
    let safe = safe_approximation(&reduced)?;
    let n = c.num_states();

    let mut kept = vec![false; n];
    for (q, k) in kept.iter_mut().enumerate() {
        *k = is_history_deterministic(&safe.with_initial(q), limits)?.history_deterministic;
    }
    let class = weak_coreachability(c);
    let class_members = |x: Option<usize>| -> Vec<State> {
        (0..n).filter(|&s| kept[s] && x.is_some() && class[s] == x).collect()
    };

    // L(safe, p) ⊆ L(safe, q), cached.
    let mut incl: HashMap<(State, State), bool> = HashMap::new();
    let mut included = |p: State, q: State| -> Result<bool> {
        if p == q {
            return Ok(true);
        }
        if let Some(&v) = incl.get(&(p, q)) {
            return Ok(v);
        }
        let v = contains(&safe.with_initial(p), &safe.with_initial(q), limits)?.holds;
        incl.insert((p, q), v);
        Ok(v)
    };

    let init = class_members(class[c.initial()]).first().copied().ok_or_else(|| {
        Error::NotResolvable("no state with a history-deterministic safe part is weakly coreachable to the initial state".into())
    })?;

    let mut ids: HashMap<State, usize> = HashMap::from([(init, 0)]);
    let mut order = vec![init];
    let mut transitions = Vec::new();
    let mut i = 0;
    while i < order.len() {
        limits.tick()?;
        let p = order[i];
        for l in 0..c.num_letters() {
            let safe_succ: BTreeSet<State> =
                reduced.out(p, l).iter().filter(|t| t.priority == 0).map(|t| t.dst).collect();
            let mut chosen = None;
            for &d in safe_succ.iter().filter(|&&d| kept[d]) {
                let mut maximal = true;
                for &o in &safe_succ {
                    if !included(o, d)? {
                        maximal = false;
                        break;
                    }
                }
                if maximal {
                    chosen = Some(d);
                    break;
                }
            }
            let targets: Vec<(State, u32)> = match chosen {
                Some(d) => vec![(d, 0)],
                None => {
                    let classes: BTreeSet<Option<usize>> = c.out(p, l).iter().map(|t| class[t.dst]).collect();
                    let ts: BTreeSet<State> = classes.into_iter().flat_map(class_members).collect();
                    if ts.is_empty() {
                        return Err(Error::NotResolvable(format!(
                            "no kept state is weakly coreachable to a `{}`-successor of `{}`",
                            c.alphabet()[l],
                            c.states()[p]
                        )));
                    }
                    ts.into_iter().map(|d| (d, 1)).collect()
                }
            };
            for (d, priority) in targets {
                let id = *ids.entry(d).or_insert_with(|| {
                    order.push(d);
                    order.len() - 1
                });
                transitions.push(Transition { src: i, letter: l, priority, dst: id });
            }
        }
        i += 1;
    }
    let h = ParityAutomaton::new(
        format!("{}-ma", c.name()),
        c.alphabet().to_vec(),
        order.iter().map(|&q| c.states()[q].clone()).collect(),
        0,
        (0, 1),
        transitions,
    )?;

    // Keep the priority-0 transition where there is one, else all of them.
    let keep: Vec<bool> = h
        .transitions()
        .iter()
        .map(|t| t.priority == 0 || h.out(t.src, t.letter).iter().all(|u| u.priority == 1))
        .collect();
    let certificate = h.subautomaton(&keep)?;

    if h.num_states() > c.num_states() {
        return Err(Error::Internal("conversion grew the state space".into()));
    }
    let eq = equivalent(&h, input, limits)?;
    if !eq.holds {
        let w = eq.counterexample.map(|w| w.display(input.alphabet())).unwrap_or_default();
        return Err(Error::NotResolvable(format!("the converted automaton differs from the input on {w}")));
    }
    if !check_ma_certificate(&h, &certificate, limits)? {
        return Err(Error::NotResolvable("the converted automaton failed its resolvability check".into()));
    }
    let safe_deterministic = (0..n).filter(|&q| kept[q]).collect();
    Ok(SrConversion { automaton: h, certificate, safe_deterministic })
}

/// Removes transitions of reachable states whose target language is strictly
/// smaller than that of another successor on the same letter, until every
/// reachable state is semantically deterministic.
fn prune_to_residuals(c: &ParityAutomaton, limits: &Limits) -> Result<ParityAutomaton> {
    let mut cur = c.clone();
    loop {
        let reach = cur.reachable_states();
        let mut keep = vec![true; cur.transitions().len()];
        let mut incl: HashMap<(State, State), bool> = HashMap::new();
        for q in (0..cur.num_states()).filter(|&q| reach[q]) {
            for l in 0..cur.num_letters() {
                let succ: BTreeSet<State> = cur.out(q, l).iter().map(|t| t.dst).collect();
                if succ.len() < 2 {
                    continue;
                }
                let mut maximal = BTreeSet::new();
                for &d in &succ {
                    let mut all = true;
                    for &o in succ.iter().filter(|&&o| o != d) {
                        let v = match incl.get(&(o, d)) {
                            Some(&v) => v,
                            None => {
                                let v = contains(&cur.with_initial(o), &cur.with_initial(d), limits)?.holds;
                                incl.insert((o, d), v);
                                v
                            }
                        };
                        if !v {
                            all = false;
                            break;
                        }
                    }
                    if all {
                        maximal.insert(d);
                    }
                }
                if maximal.is_empty() {
                    return Err(Error::NotResolvable(format!(
                        "no `{}`-successor of `{}` covers the languages of the others",
                        cur.alphabet()[l],
                        cur.states()[q]
                    )));
                }
                for id in cur.out_ids(q, l).collect::<Vec<_>>() {
                    keep[id] = maximal.contains(&cur.transition(id).dst);
                }
            }
        }
        if keep.iter().all(|&k| k) {
            return Ok(cur);
        }
        cur = cur.subautomaton(&keep)?;
    }
}
