//! Markov decision processes with Muller objectives given as Zielonka DAGs.
//!
//! A single controller picks edges at controlled vertices; stochastic
//! vertices pick an outgoing edge at random. All analyses are qualitative, so
//! only the support of each distribution matters.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::graph;
use crate::limits::Limits;
use crate::rational::{format_rat, Rat};
use crate::zielonka::{ColorSet, TieBreak, ZielonkaDag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Controlled,
    Stochastic,
}

/// An edge; `prob` is set exactly on edges leaving stochastic vertices and
/// `color: None` marks a blank edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdpEdge {
    pub src: usize,
    pub dst: usize,
    pub color: Option<usize>,
    pub prob: Option<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mdp {
    kind: Vec<VertexKind>,
    labels: Vec<String>,
    edges: Vec<MdpEdge>,
    out: Vec<Vec<usize>>,
    initial: usize,
}

impl Mdp {
    /// Checks that every vertex has an edge, stochastic distributions are
    /// positive and sum to one, and every cycle carries a color.
    pub fn new(kind: Vec<VertexKind>, labels: Vec<String>, edges: Vec<MdpEdge>, initial: usize) -> Result<Mdp> {
        let n = kind.len();
        let bad = |m: String| Err(Error::InvalidMdp(m));
        if labels.len() != n {
            return bad("one label per vertex expected".into());
        }
        if initial >= n {
            return bad("initial vertex out of range".into());
        }
        let mut out = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.src >= n || e.dst >= n {
                return bad(format!("edge {i} leaves the vertex set"));
            }
            match (kind[e.src], &e.prob) {
                (VertexKind::Controlled, Some(_)) => {
                    return bad(format!("edge {i} leaves controlled `{}` with a probability", labels[e.src]))
                }
                (VertexKind::Stochastic, None) => {
                    return bad(format!("edge {i} leaves stochastic `{}` without a probability", labels[e.src]))
                }
                (VertexKind::Stochastic, Some(p)) if !p.is_positive() => {
                    return bad(format!("edge {i} has non-positive probability {}", format_rat(p)))
                }
                _ => {}
            }
            out[e.src].push(i);
        }
        for v in 0..n {
            if out[v].is_empty() {
                return bad(format!("vertex `{}` has no outgoing edge", labels[v]));
            }
            if kind[v] == VertexKind::Stochastic {
                let total: Rat = out[v].iter().map(|&i| edges[i].prob.clone().unwrap()).sum();
                if !total.is_one() {
                    return bad(format!("probabilities at `{}` sum to {}", labels[v], format_rat(&total)));
                }
            }
        }
        let blank: Vec<Vec<usize>> =
            out.iter().map(|o| o.iter().filter(|&&i| edges[i].color.is_none()).map(|&i| edges[i].dst).collect()).collect();
        let (comp, ncomp) = graph::scc(&blank, None);
        let mut size = vec![0usize; ncomp];
        for &c in &comp {
            size[c] += 1;
        }
        for (v, succ) in blank.iter().enumerate() {
            if size[comp[v]] > 1 || succ.contains(&v) {
                return bad(format!("a cycle through `{}` carries no color", labels[v]));
            }
        }
        Ok(Mdp { kind, labels, edges, out, initial })
    }

    pub fn num_vertices(&self) -> usize {
        self.kind.len()
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kind[v]
    }

    pub fn is_controlled(&self, v: usize) -> bool {
        self.kind[v] == VertexKind::Controlled
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[MdpEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &MdpEdge {
        &self.edges[e]
    }

    pub fn out(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// Largest color index used, plus one.
    pub fn color_bound(&self) -> usize {
        self.edges.iter().filter_map(|e| e.color).map(|c| c + 1).max().unwrap_or(0)
    }

    /// The same MDP with every stochastic edge probability replaced by `f(edge)`
    /// (renormalized per vertex). Supports are kept.
    pub fn reweighted(&self, mut f: impl FnMut(usize) -> Rat) -> Result<Mdp> {
        let mut edges = self.edges.clone();
        for v in 0..self.num_vertices() {
            if self.is_controlled(v) {
                continue;
            }
            let w: Vec<Rat> = self.out[v].iter().map(|&e| f(e)).collect();
            if w.iter().any(|x| !x.is_positive()) {
                return Err(Error::InvalidMdp("reweighting must keep probabilities positive".into()));
            }
            let total: Rat = w.iter().cloned().sum();
            for (&e, x) in self.out[v].iter().zip(w) {
                edges[e].prob = Some(x / &total);
            }
        }
        Mdp::new(self.kind.clone(), self.labels.clone(), edges, self.initial)
    }
}

/// A sub-MDP given by live vertices and live edges. Live edges join live
/// vertices; a live stochastic vertex keeps all its edges.
#[derive(Clone, Debug)]
struct Sub {
    v: Vec<bool>,
    e: Vec<bool>,
}

impl Sub {
    fn full(m: &Mdp) -> Sub {
        Sub { v: vec![true; m.num_vertices()], e: vec![true; m.edges.len()] }
    }

    /// Removes vertices and edges until the sub-MDP is closed: controlled
    /// vertices keep a live edge, stochastic vertices keep all of theirs.
    /// Vertices in `keep` are never removed.
    fn close(&mut self, m: &Mdp, keep: Option<&[bool]>) {
        let mut queue: Vec<usize> = (0..m.num_vertices()).filter(|&v| self.v[v]).collect();
        let preds = predecessors(m);
        while let Some(v) = queue.pop() {
            if !self.v[v] || keep.is_some_and(|k| k[v]) {
                continue;
            }
            let dead = match m.kind[v] {
                VertexKind::Controlled => !m.out[v].iter().any(|&e| self.e[e]),
                VertexKind::Stochastic => !m.out[v].iter().all(|&e| self.e[e]),
            };
            if !dead {
                continue;
            }
            self.v[v] = false;
            for &e in &m.out[v] {
                self.e[e] = false;
            }
            for &e in &preds[v] {
                if self.e[e] {
                    self.e[e] = false;
                    queue.push(m.edges[e].src);
                }
            }
        }
    }
}

/// Incoming edge ids per vertex.
fn predecessors(m: &Mdp) -> Vec<Vec<usize>> {
    let mut pred = vec![Vec::new(); m.num_vertices()];
    for (i, e) in m.edges.iter().enumerate() {
        pred[e.dst].push(i);
    }
    pred
}

/// Maximal end components of a closed sub-MDP, each sorted, ordered by their
/// least vertex. Also returns the live edges of the final decomposition.
fn mecs_of(m: &Mdp, mut sub: Sub, limits: &Limits) -> Result<(Vec<Vec<usize>>, Sub)> {
    let n = m.num_vertices();
    loop {
        limits.tick()?;
        sub.close(m, None);
        let succ: Vec<Vec<usize>> = (0..n)
            .map(|v| m.out[v].iter().filter(|&&e| sub.e[e]).map(|&e| m.edges[e].dst).collect())
            .collect();
        let (comp, _) = graph::scc(&succ, Some(&sub.v));
        let mut changed = false;
        for (i, e) in m.edges.iter().enumerate() {
            if sub.e[i] && comp[e.src] != comp[e.dst] {
                sub.e[i] = false;
                changed = true;
            }
        }
        if !changed {
            let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for v in (0..n).filter(|&v| sub.v[v]) {
                groups.entry(comp[v]).or_default().push(v);
            }
            let mut out: Vec<Vec<usize>> = groups.into_values().collect();
            out.sort();
            return Ok((out, sub));
        }
    }
}

/// Maximal end components: vertex sets that the controller can keep the play
/// in forever while visiting all of them, maximal under inclusion.
pub fn mec_decomposition(m: &Mdp, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    Ok(mecs_of(m, Sub::full(m), limits)?.0)
}

/// `M|_X`: the largest sub-MDP in which the controller can keep every colored
/// edge inside `x` with probability one. Blank edges never leave it.
fn restrict(m: &Mdp, x: ColorSet) -> Sub {
    let mut sub = Sub::full(m);
    for (i, e) in m.edges.iter().enumerate() {
        if let Some(c) = e.color {
            if !x.contains(c) {
                sub.e[i] = false;
            }
        }
    }
    sub.close(m, None);
    sub
}

/// A memoryless randomized strategy: each listed controlled vertex plays its
/// edges uniformly at random.
pub type RandomizedStrategy = BTreeMap<usize, Vec<usize>>;

/// Almost-sure reachability inside the whole MDP. Returns the winning set
/// and extends `strategy` (without overwriting) on newly won controlled
/// vertices outside `target` by edges that shorten the distance to it.
fn reach_almost_surely(m: &Mdp, target: &[bool], strategy: &mut RandomizedStrategy) -> Vec<bool> {
    let n = m.num_vertices();
    let preds = predecessors(m);
    let mut alive = vec![true; n];
    loop {
        // Vertices that reach the target with positive probability inside `alive`.
        let mut pos = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| target[v] && alive[v]).collect();
        for &v in &queue {
            pos[v] = true;
        }
        while let Some(u) = queue.pop_front() {
            for &e in &preds[u] {
                let v = m.edges[e].src;
                if alive[v] && !pos[v] {
                    pos[v] = true;
                    queue.push_back(v);
                }
            }
        }
        // Largest subset of `pos` the controller can stay in.
        // Reaching the target ends the game, so target vertices never die.
        let mut sub = Sub { v: pos.clone(), e: m.edges.iter().map(|e| pos[e.src] && pos[e.dst]).collect() };
        sub.close(m, Some(target));
        if sub.v == alive {
            break;
        }
        alive = sub.v;
    }
    // Distance layers for the strategy.
    let mut dist = vec![usize::MAX; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| target[v] && alive[v]).collect();
    for &v in &queue {
        dist[v] = 0;
    }
    while let Some(u) = queue.pop_front() {
        for &e in &preds[u] {
            let v = m.edges[e].src;
            if alive[v] && dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    for v in 0..n {
        if !alive[v] || target[v] || !m.is_controlled(v) || strategy.contains_key(&v) {
            continue;
        }
        let e = m.out[v]
            .iter()
            .copied()
            .find(|&e| dist[m.edges[e].dst] != usize::MAX && dist[m.edges[e].dst] + 1 == dist[v])
            .expect("a vertex at finite distance has a closer successor");
        strategy.insert(v, vec![e]);
    }
    alive
}

/// Vertices from which the controller reaches `target` with probability one.
pub fn almost_sure_reach(m: &Mdp, target: &[bool]) -> Result<Vec<bool>> {
    if target.len() != m.num_vertices() {
        return Err(Error::InvalidMdp("target mask has the wrong length".into()));
    }
    Ok(reach_almost_surely(m, target, &mut RandomizedStrategy::new()))
}

fn check_objective(m: &Mdp, dag: &ZielonkaDag) -> Result<()> {
    dag.validate()?;
    if m.color_bound() > dag.colors() {
        return Err(Error::InvalidMdp(format!(
            "MDP uses color {} but the objective has {} colors",
            m.color_bound() - 1,
            dag.colors()
        )));
    }
    Ok(())
}

/// Winning regions of a Muller MDP and a strategy realizing them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MullerWinVerdict {
    pub almost_sure: Vec<bool>,
    pub positive: Vec<bool>,
    /// Wins almost surely from `almost_sure` and with positive probability
    /// from `positive`.
    pub strategy: RandomizedStrategy,
}

/// The almost-sure winning region by the bottom-up pass over the DAG: for
/// every accepting node `X`, each maximal end component of `M|_X` whose colors
/// escape every child is won, and the region is closed under almost-sure
/// reachability after each addition.
pub fn almost_sure_muller(
    m: &Mdp,
    dag: &ZielonkaDag,
    tie: TieBreak,
    limits: &Limits,
) -> Result<(Vec<bool>, RandomizedStrategy)> {
    check_objective(m, dag)?;
    let n = m.num_vertices();
    let mut win = vec![false; n];
    let mut strategy = RandomizedStrategy::new();
    for node in dag.bottom_up_order(tie) {
        limits.tick()?;
        let nd = dag.node(node);
        if !nd.accepting {
            continue;
        }
        let (mecs, sub) = mecs_of(m, restrict(m, nd.label), limits)?;
        for mec in mecs {
            let mut inside = vec![false; n];
            for &v in &mec {
                inside[v] = true;
            }
            let internal: Vec<usize> =
                (0..m.edges.len()).filter(|&e| sub.e[e] && inside[m.edges[e].src] && inside[m.edges[e].dst]).collect();
            let col = ColorSet::from_colors(internal.iter().filter_map(|&e| m.edges[e].color));
            if nd.children.iter().any(|&c| col.is_subset(dag.node(c).label)) {
                continue;
            }
            for &v in &mec {
                if m.is_controlled(v) && !win[v] {
                    let es: Vec<usize> = internal.iter().copied().filter(|&e| m.edges[e].src == v).collect();
                    strategy.insert(v, es);
                }
            }
            let mut target = win.clone();
            for &v in &mec {
                target[v] = true;
            }
            win = reach_almost_surely(m, &target, &mut strategy);
        }
    }
    strategy.retain(|&v, _| win[v]);
    Ok((win, strategy))
}

/// Vertices that reach the almost-sure region with positive probability,
/// which for prefix-independent objectives is the positive winning region.
pub fn positive_muller(m: &Mdp, dag: &ZielonkaDag, limits: &Limits) -> Result<Vec<bool>> {
    Ok(solve_muller_mdp(m, dag, limits)?.positive)
}

/// Both winning regions, with one strategy for both.
pub fn solve_muller_mdp(m: &Mdp, dag: &ZielonkaDag, limits: &Limits) -> Result<MullerWinVerdict> {
    let (almost_sure, mut strategy) = almost_sure_muller(m, dag, TieBreak::Lexicographic, limits)?;
    let n = m.num_vertices();
    let preds = predecessors(m);
    let mut positive = almost_sure.clone();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| almost_sure[v]).collect();
    while let Some(u) = queue.pop_front() {
        for &e in &preds[u] {
            let v = m.edges[e].src;
            if !positive[v] {
                positive[v] = true;
                if m.is_controlled(v) {
                    strategy.insert(v, vec![e]);
                }
                queue.push_back(v);
            }
        }
    }
    Ok(MullerWinVerdict { almost_sure, positive, strategy })
}

/// Whether following `strategy` from every vertex of `from` wins with
/// probability one (`almost_sure`) or with positive probability. Decided
/// exactly on the induced Markov chain by its bottom strongly connected
/// components. Controlled vertices the strategy leaves open lose.
pub fn check_randomized_strategy(
    m: &Mdp,
    dag: &ZielonkaDag,
    strategy: &RandomizedStrategy,
    from: &[usize],
    almost_sure: bool,
) -> Result<bool> {
    check_objective(m, dag)?;
    let n = m.num_vertices();
    let mut moves: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        moves[v] = if m.is_controlled(v) {
            match strategy.get(&v) {
                Some(es) if !es.is_empty() && es.iter().all(|e| m.out[v].contains(e)) => es.clone(),
                _ => Vec::new(),
            }
        } else {
            m.out[v].clone()
        };
    }
    let succ: Vec<Vec<usize>> = moves.iter().map(|es| es.iter().map(|&e| m.edges[e].dst).collect()).collect();
    let reach = graph::reachable(&succ, from, None);
    if (0..n).any(|v| reach[v] && moves[v].is_empty()) && almost_sure {
        return Ok(false);
    }
    let (comp, ncomp) = graph::scc(&succ, Some(&reach));
    let mut bottom = vec![true; ncomp];
    let mut colors = vec![ColorSet::EMPTY; ncomp];
    let mut has_edge = vec![false; ncomp];
    for v in (0..n).filter(|&v| reach[v]) {
        if moves[v].is_empty() {
            bottom[comp[v]] = false;
        }
        for &e in &moves[v] {
            let w = m.edges[e].dst;
            if comp[w] != comp[v] {
                bottom[comp[v]] = false;
            } else {
                has_edge[comp[v]] = true;
                if let Some(c) = m.edges[e].color {
                    colors[comp[v]].insert(c);
                }
            }
        }
    }
    let good: Vec<bool> = (0..ncomp).map(|c| bottom[c] && has_edge[c] && dag.accepts(colors[c])).collect();
    let bad: Vec<bool> = (0..ncomp).map(|c| bottom[c] && !good[c]).collect();
    for &v in from {
        let r = graph::reachable(&succ, &[v], None);
        let hits = |set: &[bool]| (0..n).any(|w| r[w] && set[comp[w]]);
        let ok = if almost_sure { !hits(&bad) } else { hits(&good) };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::zielonka::zielonka_dag;

    fn ctrl(n: usize) -> Vec<VertexKind> {
        vec![VertexKind::Controlled; n]
    }

    fn edge(src: usize, dst: usize, color: usize) -> MdpEdge {
        MdpEdge { src, dst, color: Some(color), prob: None }
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|v| format!("v{v}")).collect()
    }

    #[test]
    fn self_loop_is_one_mec() {
        let m = Mdp::new(ctrl(1), labels(1), vec![edge(0, 0, 0)], 0).unwrap();
        assert_eq!(mec_decomposition(&m, &Limits::default()).unwrap(), vec![vec![0]]);
    }

    #[test]
    fn two_cycle_with_escape_is_one_mec() {
        let m = Mdp::new(ctrl(3), labels(3), vec![edge(0, 1, 0), edge(1, 0, 0), edge(1, 2, 0), edge(2, 2, 0)], 0)
            .unwrap();
        assert_eq!(mec_decomposition(&m, &Limits::default()).unwrap(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn stochastic_escape_into_trap_is_not_almost_sure() {
        let kind = vec![VertexKind::Stochastic, VertexKind::Controlled, VertexKind::Controlled];
        let edges = vec![
            MdpEdge { src: 0, dst: 1, color: Some(0), prob: Some(rat(1, 2)) },
            MdpEdge { src: 0, dst: 2, color: Some(0), prob: Some(rat(1, 2)) },
            edge(1, 1, 0),
            edge(2, 2, 0),
        ];
        let m = Mdp::new(kind, labels(3), edges, 0).unwrap();
        let win = almost_sure_reach(&m, &[false, true, false]).unwrap();
        assert_eq!(win, vec![false, true, false]);
        assert_eq!(almost_sure_reach(&m, &[true; 3]).unwrap(), vec![true; 3]);
    }

    #[test]
    fn probabilities_must_sum_to_one() {
        let kind = vec![VertexKind::Stochastic];
        let edges = vec![MdpEdge { src: 0, dst: 0, color: Some(0), prob: Some(rat(1, 3)) }];
        assert!(matches!(Mdp::new(kind, labels(1), edges, 0), Err(Error::InvalidMdp(_))));
    }

    #[test]
    fn universal_objective_wins_everywhere() {
        let m = Mdp::new(ctrl(3), labels(3), vec![edge(0, 1, 0), edge(1, 2, 1), edge(2, 0, 0), edge(2, 2, 1)], 0)
            .unwrap();
        let dag = zielonka_dag(2, |_| true, &Limits::default()).unwrap();
        let v = solve_muller_mdp(&m, &dag, &Limits::default()).unwrap();
        assert_eq!(v.almost_sure, vec![true; 3]);
        assert!(check_randomized_strategy(&m, &dag, &v.strategy, &[0, 1, 2], true).unwrap());
    }
}
