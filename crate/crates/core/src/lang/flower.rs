use crate::automaton::{Letter, ParityAutomaton, Priority, State};
use crate::error::{Error, Result};
use crate::graph;

/// A state with loops whose maximal priorities are `2·shift + k` for every `k`
/// of the requested span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flower {
    pub state: State,
    pub shift: i64,
    /// One loop per `k`: the realized maximal priority and the loop word.
    pub loops: Vec<(Priority, Vec<Letter>)>,
}

/// For every state, the set of maximal priorities realized by closed walks.
fn loop_maxima(a: &ParityAutomaton) -> Vec<Vec<Priority>> {
    let mut res = vec![Vec::new(); a.num_states()];
    let prios = a.used_priorities();
    for &c in &prios {
        let mut succ = vec![Vec::new(); a.num_states()];
        for t in a.transitions().iter().filter(|t| t.priority <= c) {
            succ[t.src].push(t.dst);
        }
        let (comp, ncomp) = graph::scc(&succ, None);
        let mut has = vec![false; ncomp];
        for t in a.transitions().iter().filter(|t| t.priority == c) {
            if comp[t.src] == comp[t.dst] {
                has[comp[t.src]] = true;
            }
        }
        for q in 0..a.num_states() {
            if has[comp[q]] {
                res[q].push(c);
            }
        }
    }
    res
}

fn loop_word(a: &ParityAutomaton, p: State, c: Priority) -> Vec<Letter> {
    let mut edges = vec![Vec::new(); a.num_states()];
    for t in a.transitions().iter().filter(|t| t.priority <= c) {
        edges[t.src].push((t.dst, t.letter));
    }
    let (comp, _) = graph::scc(&edges.iter().map(|e| e.iter().map(|x| x.0).collect()).collect::<Vec<_>>(), None);
    let e = a
        .transitions()
        .iter()
        .find(|t| t.priority == c && comp[t.src] == comp[p] && comp[t.dst] == comp[p])
        .expect("realizable priority");
    let inside = |_: usize, w: usize| comp[w] == comp[p];
    let (_, to) = graph::bfs_path(&edges, p, |v| v == e.src, inside).unwrap();
    let (_, back) = graph::bfs_path(&edges, e.dst, |v| v == p, inside).unwrap();
    let mut w = to;
    w.push(e.letter);
    w.extend(back);
    w
}

/// Detects a flower for the span `[lo, hi]` in a deterministic automaton.
pub fn detect_flower(a: &ParityAutomaton, span: (Priority, Priority)) -> Result<Option<Flower>> {
    if !a.is_deterministic() {
        return Err(Error::NotApplicable("flower detection expects a deterministic automaton".into()));
    }
    let (lo, hi) = span;
    if lo > hi {
        return Err(Error::NotApplicable("empty span".into()));
    }
    let reach = a.reachable_states();
    let maxima = loop_maxima(a);
    let top = a.bounds().1 as i64;
    for p in (0..a.num_states()).filter(|&p| reach[p]) {
        let shifts = (-(lo as i64) / 2 - 1)..=((top - lo as i64) / 2 + 1);
        for l in shifts {
            let ok = (lo..=hi).all(|k| {
                let v = 2 * l + k as i64;
                v >= 0 && maxima[p].contains(&(v as Priority))
            });
            if ok {
                let loops = (lo..=hi)
                    .map(|k| {
                        let c = (2 * l + k as i64) as Priority;
                        (c, loop_word(a, p, c))
                    })
                    .collect();
                return Ok(Some(Flower { state: p, shift: l, loops }));
            }
        }
    }
    Ok(None)
}
