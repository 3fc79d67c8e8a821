use std::collections::HashMap;

use crate::automaton::{classify_acceptance, AcceptanceClass, Letter, ParityAutomaton};
use crate::error::{Error, Result};
use crate::graph;
use crate::lang::complement::{complement_deterministic, Breakpoint, ExplicitBuchi, LazyBuchi, RankComplement};
use crate::lang::membership::lasso_membership;
use crate::lang::to_buchi::parity_to_buchi;
use crate::lasso::LassoWord;
use crate::limits::Limits;

/// Outcome of an inclusion or equivalence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageRelationVerdict {
    pub holds: bool,
    /// A word accepted by the left automaton and rejected by the right one
    /// (for equivalence, by whichever side accepts it).
    pub counterexample: Option<LassoWord>,
    /// For a counterexample, whether the left automaton accepts it.
    pub accepted_by_left: bool,
}

impl LanguageRelationVerdict {
    fn holds() -> Self {
        LanguageRelationVerdict { holds: true, counterexample: None, accepted_by_left: false }
    }
}

/// Searches the product of two lazy Buchi automata for a lasso visiting
/// accepting marks of both sides infinitely often.
pub fn product_nonempty<A: LazyBuchi, B: LazyBuchi>(
    a: &A,
    b: &B,
    letters: usize,
    limits: &Limits,
) -> Result<Option<(Vec<Letter>, Vec<Letter>)>> {
    let mut ids: HashMap<(A::S, B::S), usize> = HashMap::new();
    let mut order: Vec<(A::S, B::S)> = Vec::new();
    // Edges: (target, (letter, mark_a, mark_b)).
    let mut edges: Vec<Vec<(usize, (Letter, bool, bool))>> = Vec::new();
    let edge_budget = limits.max_product_states.saturating_mul(8);
    let mut edge_count = 0usize;
    let start = (a.initial(), b.initial());
    ids.insert(start.clone(), 0);
    order.push(start);
    edges.push(Vec::new());
    let (mut ba, mut bb) = (Vec::new(), Vec::new());
    let mut i = 0;
    while i < order.len() {
        let (sa, sb) = order[i].clone();
        for l in 0..letters {
            ba.clear();
            a.successors(&sa, l, &mut ba);
            if ba.is_empty() {
                continue;
            }
            bb.clear();
            b.successors(&sb, l, &mut bb);
            for (ta, ma) in &ba {
                for (tb, mb) in &bb {
                    let key = (ta.clone(), tb.clone());
                    let id = match ids.get(&key) {
                        Some(&id) => id,
                        None => {
                            let id = order.len();
                            ids.insert(key.clone(), id);
                            order.push(key);
                            edges.push(Vec::new());
                            limits.check_states("inclusion product states", order.len())?;
                            id
                        }
                    };
                    edges[i].push((id, (l, *ma, *mb)));
                    edge_count += 1;
                    if edge_count > edge_budget {
                        return Err(Error::ResourceLimit {
                            what: "inclusion product edges".into(),
                            limit: edge_budget,
                        });
                    }
                }
            }
        }
        i += 1;
    }
    let succ: Vec<Vec<usize>> = edges.iter().map(|es| es.iter().map(|e| e.0).collect()).collect();
    let (comp, ncomp) = graph::scc(&succ, None);
    let mut mark_a = vec![None; ncomp];
    let mut mark_b = vec![None; ncomp];
    for (v, es) in edges.iter().enumerate() {
        for (k, &(w, (_, ma, mb))) in es.iter().enumerate() {
            if comp[v] == comp[w] {
                if ma && mark_a[comp[v]].is_none() {
                    mark_a[comp[v]] = Some((v, k));
                }
                if mb && mark_b[comp[v]].is_none() {
                    mark_b[comp[v]] = Some((v, k));
                }
            }
        }
    }
    for c in 0..ncomp {
        if let (Some((va, ka)), Some((vb, kb))) = (mark_a[c], mark_b[c]) {
            let in_c = |_: usize, w: usize| comp[w] == c;
            let (_, stem) = graph::bfs_path(&edges, 0, |v| v == va, |_, _| true).expect("reachable");
            let (wa, (la, _, _)) = edges[va][ka];
            let (wb, (lb, _, _)) = edges[vb][kb];
            let (_, p1) = graph::bfs_path(&edges, wa, |v| v == vb, in_c).expect("same component");
            let (_, p2) = graph::bfs_path(&edges, wb, |v| v == va, in_c).expect("same component");
            let mut cycle = vec![la];
            cycle.extend(p1.iter().map(|x| x.0));
            cycle.push(lb);
            cycle.extend(p2.iter().map(|x| x.0));
            return Ok(Some((stem.iter().map(|x| x.0).collect(), cycle)));
        }
    }
    Ok(None)
}

fn emptiness_with_complement(
    left: &ParityAutomaton,
    right: &ParityAutomaton,
    limits: &Limits,
) -> Result<Option<(Vec<Letter>, Vec<Letter>)>> {
    let lb = parity_to_buchi(left)?;
    let la = ExplicitBuchi(&lb);
    let k = left.num_letters();
    let class = classify_acceptance(right);
    if right.is_deterministic() {
        let c = parity_to_buchi(&complement_deterministic(right)?)?;
        return product_nonempty(&la, &ExplicitBuchi(&c), k, limits);
    }
    if class <= AcceptanceClass::Weak || class == AcceptanceClass::CoBuchi {
        return product_nonempty(&la, &Breakpoint::new(right)?, k, limits);
    }
    if let Some(found) = super::ramsey::find_counterexample(left, right, limits)? {
        return Ok(found);
    }
    let rb = parity_to_buchi(right)?;
    product_nonempty(&la, &RankComplement::new(&rb)?, k, limits)
}

/// Decides `L(a) ⊆ L(b)`. A counterexample is revalidated by membership.
pub fn contains(a: &ParityAutomaton, b: &ParityAutomaton, limits: &Limits) -> Result<LanguageRelationVerdict> {
    let b = b.with_alphabet_order(a.alphabet())?;
    limits.tick()?;
    match emptiness_with_complement(a, &b, limits)? {
        None => Ok(LanguageRelationVerdict::holds()),
        Some((stem, cycle)) => {
            let w = LassoWord::new(stem, cycle)?;
            if !lasso_membership(a, &w)? || lasso_membership(&b, &w)? {
                return Err(Error::Internal(format!(
                    "inclusion counterexample {} failed revalidation",
                    w.display(a.alphabet())
                )));
            }
            Ok(LanguageRelationVerdict { holds: false, counterexample: Some(w), accepted_by_left: true })
        }
    }
}

/// Decides `L(a) = L(b)`.
pub fn equivalent(a: &ParityAutomaton, b: &ParityAutomaton, limits: &Limits) -> Result<LanguageRelationVerdict> {
    let ab = contains(a, b, limits)?;
    if !ab.holds {
        return Ok(ab);
    }
    let ba = contains(b, a, limits)?;
    if !ba.holds {
        return Ok(LanguageRelationVerdict { accepted_by_left: false, ..ba });
    }
    Ok(LanguageRelationVerdict::holds())
}

/// Whether all `letter`-successors of `q` have the same language.
pub fn successors_equivalent(
    a: &ParityAutomaton,
    q: usize,
    letter: Letter,
    limits: &Limits,
) -> Result<LanguageRelationVerdict> {
    let succ: Vec<usize> = a.out(q, letter).iter().map(|t| t.dst).collect();
    for w in succ.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let v = equivalent(&a.with_initial(w[0]), &a.with_initial(w[1]), limits)?;
        if !v.holds {
            return Ok(v);
        }
    }
    Ok(LanguageRelationVerdict::holds())
}
