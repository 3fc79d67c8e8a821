use crate::automaton::ParityAutomaton;
use crate::error::Result;
use crate::graph;
use crate::lasso::LassoWord;

/// The run graph of an automaton on a lasso: vertices are (state, position).
pub(crate) struct LassoProduct {
    /// Outgoing edges `(target vertex, priority)` per vertex `q * positions + pos`.
    pub edges: Vec<Vec<(usize, u32)>>,
    pub reachable: Vec<bool>,
}

impl LassoProduct {
    pub fn new(a: &ParityAutomaton, w: &LassoWord) -> Result<Self> {
        w.check_alphabet(a.num_letters())?;
        let positions = w.positions();
        let n = a.num_states() * positions;
        let mut edges = vec![Vec::new(); n];
        for q in 0..a.num_states() {
            for pos in 0..positions {
                let np = w.next_pos(pos);
                edges[q * positions + pos] =
                    a.out(q, w.letter_at(pos)).iter().map(|t| (t.dst * positions + np, t.priority)).collect();
            }
        }
        let succ: Vec<Vec<usize>> = edges.iter().map(|es| es.iter().map(|e| e.0).collect()).collect();
        let reachable = graph::reachable(&succ, &[a.initial() * positions], None);
        Ok(LassoProduct { edges, reachable })
    }

    /// Whether some reachable cycle has an even maximal priority.
    pub fn has_accepting_cycle(&self) -> bool {
        let mut evens: Vec<u32> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(v, _)| self.reachable[*v])
            .flat_map(|(_, es)| es.iter().map(|e| e.1))
            .filter(|p| p % 2 == 0)
            .collect();
        evens.sort_unstable();
        evens.dedup();
        evens.into_iter().any(|d| self.cycle_with_max(d))
    }

    /// A reachable cycle using priorities `<= d` and containing `d`.
    fn cycle_with_max(&self, d: u32) -> bool {
        let succ: Vec<Vec<usize>> = self
            .edges
            .iter()
            .map(|es| es.iter().filter(|e| e.1 <= d).map(|e| e.0).collect())
            .collect();
        let (comp, _) = graph::scc(&succ, Some(&self.reachable));
        self.edges.iter().enumerate().any(|(v, es)| {
            self.reachable[v] && es.iter().any(|&(w, p)| p == d && comp[v] == comp[w])
        })
    }
}

/// Decides whether the automaton accepts the ultimately periodic word.
pub fn lasso_membership(a: &ParityAutomaton, w: &LassoWord) -> Result<bool> {
    Ok(LassoProduct::new(a, w)?.has_accepting_cycle())
}
