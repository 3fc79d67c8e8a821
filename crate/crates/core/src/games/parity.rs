use std::collections::BTreeMap;

use super::{GameArena, Player, SolveResult, Strategy};
use crate::error::{Error, Result};
use crate::limits::Limits;

/// A parity game with priorities on vertices; `None` is below every priority.
#[derive(Clone, Debug)]
pub struct VertexGame {
    pub(crate) owner: Vec<Player>,
    pub(crate) prio: Vec<Option<u32>>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl VertexGame {
    pub fn new(owner: Vec<Player>, prio: Vec<Option<u32>>, mut succ: Vec<Vec<usize>>) -> VertexGame {
        let mut pred = vec![Vec::new(); owner.len()];
        for (v, s) in succ.iter_mut().enumerate() {
            s.sort_unstable();
            s.dedup();
            for &w in s.iter() {
                pred[w].push(v);
            }
        }
        VertexGame { owner, prio, succ, pred }
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    /// Winner of every vertex and, for each vertex won by its owner, a
    /// successor that keeps the play winning. Every vertex needs a successor
    /// and every cycle a priority.
    pub fn solve(&self, limits: &Limits) -> Result<(Vec<Player>, Vec<Option<usize>>)> {
        if let Some(v) = self.succ.iter().position(|s| s.is_empty()) {
            return Err(Error::InvalidGame(format!("vertex {v} has no successor")));
        }
        let mut win = vec![Player::Eve; self.len()];
        let mut strat = vec![None; self.len()];
        let all: Vec<usize> = (0..self.len()).collect();
        self.solve_sub(all, &mut win, &mut strat, limits)?;
        Ok((win, strat))
    }

    fn solve_sub(
        &self,
        mut verts: Vec<usize>,
        win: &mut [Player],
        strat: &mut [Option<usize>],
        limits: &Limits,
    ) -> Result<()> {
        let n = self.len();
        let mut alive = vec![false; n];
        for &v in &verts {
            alive[v] = true;
        }
        loop {
            if verts.is_empty() {
                return Ok(());
            }
            limits.tick()?;
            let Some(d) = verts.iter().filter_map(|&v| self.prio[v]).max() else {
                for &v in &verts {
                    win[v] = Player::Eve;
                    strat[v] = self.succ[v].iter().copied().find(|&w| alive[w]);
                }
                return Ok(());
            };
            let p = Player::of_priority(d);
            let top: Vec<usize> = verts.iter().copied().filter(|&v| self.prio[v] == Some(d)).collect();
            let attr = self.attractor(&verts, &alive, &top, p, strat);
            let sub: Vec<usize> = verts.iter().copied().filter(|&v| !attr[v]).collect();
            self.solve_sub(sub.clone(), win, strat, limits)?;
            let opp_sub: Vec<usize> = sub.iter().copied().filter(|&v| win[v] != p).collect();
            if opp_sub.is_empty() {
                for &v in &verts {
                    if attr[v] {
                        win[v] = p;
                    }
                }
                for &v in &top {
                    if self.owner[v] == p {
                        strat[v] = self.succ[v].iter().copied().find(|&w| alive[w]);
                    }
                }
                return Ok(());
            }
            let lost = self.attractor(&verts, &alive, &opp_sub, p.opponent(), strat);
            for &v in &verts {
                if lost[v] {
                    win[v] = p.opponent();
                    alive[v] = false;
                }
            }
            verts.retain(|&v| !lost[v]);
        }
    }

    /// Attractor of `target` for `p` inside the live vertices; records the
    /// attracting successor for `p`'s vertices outside the target.
    pub(crate) fn attractor(
        &self,
        verts: &[usize],
        alive: &[bool],
        target: &[usize],
        p: Player,
        strat: &mut [Option<usize>],
    ) -> Vec<bool> {
        let mut attr = vec![false; self.len()];
        let mut count = vec![0usize; self.len()];
        for &v in verts {
            count[v] = self.succ[v].iter().filter(|&&w| alive[w]).count();
        }
        let mut queue: Vec<usize> = Vec::new();
        for &t in target {
            if !attr[t] {
                attr[t] = true;
                queue.push(t);
            }
        }
        while let Some(u) = queue.pop() {
            for &v in &self.pred[u] {
                if !alive[v] || attr[v] {
                    continue;
                }
                if self.owner[v] == p {
                    attr[v] = true;
                    strat[v] = Some(u);
                    queue.push(v);
                } else {
                    count[v] -= 1;
                    if count[v] == 0 {
                        attr[v] = true;
                        queue.push(v);
                    }
                }
            }
        }
        attr
    }
}

/// Lowers an arena to a vertex game: every colored edge is split by a vertex
/// carrying its color. Returns the game and the vertex each edge leads to.
pub(crate) fn split_edges(arena: &GameArena, prio_of: impl Fn(usize) -> u32) -> (VertexGame, Vec<usize>) {
    let n = arena.num_vertices();
    let mut owner = arena.owners().to_vec();
    let mut prio = vec![None; n];
    let mut succ = vec![Vec::new(); n];
    let mut entry = Vec::with_capacity(arena.edges().len());
    for e in arena.edges() {
        match e.color {
            Some(c) => {
                let m = owner.len();
                owner.push(Player::Eve);
                prio.push(Some(prio_of(c)));
                succ.push(vec![e.dst]);
                succ[e.src].push(m);
                entry.push(m);
            }
            None => {
                succ[e.src].push(e.dst);
                entry.push(e.dst);
            }
        }
    }
    (VertexGame::new(owner, prio, succ), entry)
}

/// Solves a parity game whose edge colors are max-even priorities.
/// Strategies are positional.
pub fn solve_parity_game(arena: &GameArena, limits: &Limits) -> Result<SolveResult> {
    let (g, entry) = split_edges(arena, |c| c as u32);
    let (win, strat) = g.solve(limits)?;
    let n = arena.num_vertices();
    let mut se = BTreeMap::new();
    let mut sa = BTreeMap::new();
    for v in 0..n {
        let o = arena.owner(v);
        if win[v] != o {
            continue;
        }
        let s = strat[v].ok_or_else(|| Error::Internal(format!("no strategy at vertex {v}")))?;
        let e = arena.out(v).iter().copied().find(|&e| entry[e] == s).expect("successor comes from an edge");
        match o {
            Player::Eve => se.insert(v, e),
            Player::Adam => sa.insert(v, e),
        };
    }
    Ok(SolveResult {
        win_eve: (0..n).map(|v| win[v] == Player::Eve).collect(),
        win_adam: (0..n).map(|v| win[v] == Player::Adam).collect(),
        strategy_eve: Strategy::Positional(se),
        strategy_adam: Strategy::Positional(sa),
    })
}
