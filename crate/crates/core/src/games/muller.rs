use std::collections::{BTreeMap, HashMap};

use super::parity::{split_edges, VertexGame};
use super::{GameArena, GameEdge, MemoryStrategy, Player, SolveResult, Strategy};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::zielonka::ZielonkaDag;

fn check_colors(arena: &GameArena, dag: &ZielonkaDag) -> Result<()> {
    if arena.color_bound() > dag.colors() {
        return Err(Error::InvalidGame(format!(
            "arena uses color {} but the objective has {} colors",
            arena.color_bound() - 1,
            dag.colors()
        )));
    }
    Ok(())
}

/// Eve's winning region for the Muller objective given by `dag`, computed by
/// the Zielonka-tree recursion with attractor decomposition.
pub fn muller_regions(arena: &GameArena, dag: &ZielonkaDag, limits: &Limits) -> Result<Vec<bool>> {
    check_colors(arena, dag)?;
    let (g, _) = split_edges(arena, |c| c as u32);
    let mut win = vec![Player::Eve; g.len()];
    solve_node(&g, (0..g.len()).collect(), dag, 0, &mut win, limits)?;
    Ok(win[..arena.num_vertices()].iter().map(|&p| p == Player::Eve).collect())
}

fn solve_node(
    g: &VertexGame,
    mut verts: Vec<usize>,
    dag: &ZielonkaDag,
    node: usize,
    win: &mut [Player],
    limits: &Limits,
) -> Result<()> {
    let p = if dag.node(node).accepting { Player::Eve } else { Player::Adam };
    let mut alive = vec![false; g.len()];
    for &v in &verts {
        alive[v] = true;
    }
    let mut scratch = vec![None; g.len()];
    'outer: loop {
        if verts.is_empty() {
            return Ok(());
        }
        limits.tick()?;
        for &child in &dag.node(node).children {
            let label = dag.node(child).label;
            let outside: Vec<usize> = verts
                .iter()
                .copied()
                .filter(|&v| matches!(g.prio[v], Some(c) if !label.contains(c as usize)))
                .collect();
            let attr = g.attractor(&verts, &alive, &outside, p, &mut scratch);
            let sub: Vec<usize> = verts.iter().copied().filter(|&v| !attr[v]).collect();
            if sub.is_empty() {
                continue;
            }
            solve_node(g, sub.clone(), dag, child, win, limits)?;
            let opp: Vec<usize> = sub.into_iter().filter(|&v| win[v] != p).collect();
            if !opp.is_empty() {
                let lost = g.attractor(&verts, &alive, &opp, p.opponent(), &mut scratch);
                for &v in &verts {
                    if lost[v] {
                        win[v] = p.opponent();
                        alive[v] = false;
                    }
                }
                verts.retain(|&v| !lost[v]);
                continue 'outer;
            }
        }
        for &v in &verts {
            win[v] = p;
        }
        return Ok(());
    }
}

/// The deterministic parity memory read off the Zielonka tree (the DAG
/// unfolded): one memory state per leaf. Reading color `c` in leaf `m`
/// emits a priority and moves to the next leaf in round-robin order below the
/// deepest node on `m`'s branch containing `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZielonkaTreeMemory {
    leaves: usize,
    step: Vec<Vec<(u32, usize)>>,
}

impl ZielonkaTreeMemory {
    pub fn new(dag: &ZielonkaDag, limits: &Limits) -> Result<ZielonkaTreeMemory> {
        // Unfold: tree node = (dag node, children, depth).
        let mut tnode: Vec<usize> = vec![0];
        let mut tchildren: Vec<Vec<usize>> = vec![Vec::new()];
        let mut depth: Vec<usize> = vec![0];
        let mut stack = vec![0usize];
        while let Some(t) = stack.pop() {
            for &c in &dag.node(tnode[t]).children {
                let id = tnode.len();
                tnode.push(c);
                tchildren.push(Vec::new());
                depth.push(depth[t] + 1);
                tchildren[t].push(id);
                stack.push(id);
                limits.check_states("Zielonka tree nodes", tnode.len())?;
            }
        }
        let height = *depth.iter().max().unwrap_or(&0);
        // Leaves in left-to-right order, with their branches.
        let mut branches: Vec<Vec<usize>> = Vec::new();
        let mut path = vec![0usize];
        fn walk(t: usize, ch: &[Vec<usize>], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if ch[t].is_empty() {
                out.push(path.clone());
                return;
            }
            for &c in &ch[t] {
                path.push(c);
                walk(c, ch, path, out);
                path.pop();
            }
        }
        walk(0, &tchildren, &mut path, &mut branches);
        let leftmost = |mut t: usize| {
            while let Some(&c) = tchildren[t].first() {
                t = c;
            }
            t
        };
        let leaf_index: HashMap<usize, usize> =
            branches.iter().enumerate().map(|(i, b)| (*b.last().unwrap(), i)).collect();
        let mut step = Vec::with_capacity(branches.len());
        for b in &branches {
            let mut row = Vec::with_capacity(dag.colors());
            for c in 0..dag.colors() {
                let k = (0..b.len()).rev().find(|&k| dag.node(tnode[b[k]]).label.contains(c)).unwrap_or(0);
                let n = b[k];
                let acc = dag.node(tnode[n]).accepting;
                let prio = 2 * (height - depth[n]) as u32 + if acc { 0 } else { 1 };
                let next = if k + 1 == b.len() {
                    n
                } else {
                    let kids = &tchildren[n];
                    let i = kids.iter().position(|&x| x == b[k + 1]).unwrap();
                    leftmost(kids[(i + 1) % kids.len()])
                };
                row.push((prio, leaf_index[&next]));
            }
            step.push(row);
        }
        Ok(ZielonkaTreeMemory { leaves: branches.len(), step })
    }

    pub fn leaves(&self) -> usize {
        self.leaves
    }

    /// Priority emitted and next leaf on reading `color` in leaf `m`.
    pub fn step(&self, m: usize, color: usize) -> (u32, usize) {
        self.step[m][color]
    }
}

struct Product {
    game: VertexGame,
    index: HashMap<(usize, usize), usize>,
    /// Product vertex reached by each (arena edge, memory) pair.
    entry: HashMap<(usize, usize), usize>,
}

fn product(arena: &GameArena, mem: &ZielonkaTreeMemory, limits: &Limits) -> Result<Product> {
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut entry = HashMap::new();
    let mut owner = Vec::new();
    let mut prio = Vec::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut order: Vec<(usize, usize)> = Vec::new();
    let mut intern = |key: (usize, usize),
                      owner: &mut Vec<Player>,
                      prio: &mut Vec<Option<u32>>,
                      succ: &mut Vec<Vec<usize>>,
                      order: &mut Vec<(usize, usize)>| {
        *index.entry(key).or_insert_with(|| {
            owner.push(arena.owner(key.0));
            prio.push(None);
            succ.push(Vec::new());
            order.push(key);
            owner.len() - 1
        })
    };
    for v in 0..arena.num_vertices() {
        intern((v, 0), &mut owner, &mut prio, &mut succ, &mut order);
    }
    let mut i = 0;
    while i < order.len() {
        let (v, m) = order[i];
        let here = i;
        i += 1;
        if prio[here].is_some() {
            continue;
        }
        for &e in arena.out(v) {
            let GameEdge { dst, color, .. } = arena.edge(e);
            let target = match color {
                Some(c) => {
                    let (p, m2) = mem.step(m, c);
                    let next = intern((dst, m2), &mut owner, &mut prio, &mut succ, &mut order);
                    let mid = owner.len();
                    owner.push(Player::Eve);
                    prio.push(Some(p));
                    succ.push(vec![next]);
                    // Placeholder key so the mid vertex is skipped when expanded.
                    order.push((usize::MAX, mid));
                    mid
                }
                None => intern((dst, m), &mut owner, &mut prio, &mut succ, &mut order),
            };
            succ[here].push(target);
            entry.insert((e, m), target);
        }
        limits.check_states("Muller product vertices", owner.len())?;
    }
    drop(intern);
    Ok(Product { game: VertexGame::new(owner, prio, succ), index, entry })
}

/// Solves a Muller game. Regions come from the Zielonka-tree recursion and
/// are cross-checked against the parity game on the arena × Zielonka-tree
/// memory, which also yields finite-memory strategies for both players.
pub fn solve_muller_game(arena: &GameArena, dag: &ZielonkaDag, limits: &Limits) -> Result<SolveResult> {
    check_colors(arena, dag)?;
    let regions = muller_regions(arena, dag, limits)?;
    let mem = ZielonkaTreeMemory::new(dag, limits)?;
    let prod = product(arena, &mem, limits)?;
    let (win, strat) = prod.game.solve(limits)?;
    let n = arena.num_vertices();
    for v in 0..n {
        if (win[prod.index[&(v, 0)]] == Player::Eve) != regions[v] {
            return Err(Error::Internal(format!("Muller solvers disagree at `{}`", arena.label(v))));
        }
    }
    let update: Vec<Vec<usize>> = (0..mem.leaves()).map(|m| (0..dag.colors()).map(|c| mem.step(m, c).1).collect()).collect();
    let mut choice_eve = BTreeMap::new();
    let mut choice_adam = BTreeMap::new();
    let mut keys: Vec<(&(usize, usize), &usize)> = prod.index.iter().collect();
    keys.sort();
    for (&(v, m), &pv) in keys {
        let o = arena.owner(v);
        if win[pv] != o {
            continue;
        }
        let s = strat[pv].ok_or_else(|| Error::Internal("missing product strategy".into()))?;
        let e = arena.out(v).iter().copied().find(|&e| prod.entry[&(e, m)] == s).expect("successor comes from an edge");
        match o {
            Player::Eve => choice_eve.insert((v, m), e),
            Player::Adam => choice_adam.insert((v, m), e),
        };
    }
    let mk = |choice| MemoryStrategy { memory: mem.leaves(), initial_memory: 0, update: update.clone(), choice };
    Ok(SolveResult {
        win_adam: regions.iter().map(|w| !w).collect(),
        win_eve: regions,
        strategy_eve: Strategy::FiniteMemory(mk(choice_eve)),
        strategy_adam: Strategy::FiniteMemory(mk(choice_adam)),
    })
}

/// Whether `player`, following `strategy`, wins the Muller game from every
/// vertex in `from` against all opponent behaviours. The strategy is unfolded
/// over its memory and the resulting one-player game solved by the recursion.
pub fn check_muller_strategy(
    arena: &GameArena,
    dag: &ZielonkaDag,
    player: Player,
    strategy: &Strategy,
    from: &[usize],
    limits: &Limits,
) -> Result<bool> {
    let (memory, initial, update, choice): (usize, usize, Vec<Vec<usize>>, BTreeMap<(usize, usize), usize>) =
        match strategy {
            Strategy::Positional(c) => (
                1,
                0,
                vec![vec![0; dag.colors()]],
                c.iter().map(|(&v, &e)| ((v, 0), e)).collect(),
            ),
            Strategy::FiniteMemory(s) => (s.memory, s.initial_memory, s.update.clone(), s.choice.clone()),
        };
    if from.is_empty() {
        return Ok(true);
    }
    if memory == 0 {
        return Ok(false);
    }
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut order: Vec<(usize, usize)> = Vec::new();
    for &v in from {
        let k = (v, initial);
        if !index.contains_key(&k) {
            index.insert(k, order.len());
            order.push(k);
        }
    }
    let mut edges = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let (v, m) = order[i];
        let moves: Vec<usize> = if arena.owner(v) == player {
            match choice.get(&(v, m)) {
                Some(&e) if arena.out(v).contains(&e) => vec![e],
                _ => return Ok(false),
            }
        } else {
            arena.out(v).to_vec()
        };
        for e in moves {
            let GameEdge { dst, color, .. } = arena.edge(e);
            let m2 = match color {
                Some(c) => update[m][c],
                None => m,
            };
            let k = (dst, m2);
            let id = *index.entry(k).or_insert_with(|| {
                order.push(k);
                order.len() - 1
            });
            edges.push(GameEdge { src: i, dst: id, color });
        }
        limits.check_states("strategy unfolding", order.len())?;
        i += 1;
    }
    let owner = vec![player.opponent(); order.len()];
    let labels = order.iter().map(|(v, m)| format!("{}@{m}", arena.label(*v))).collect();
    let g = GameArena::new(owner, labels, edges, 0)?;
    let win = muller_regions(&g, dag, limits)?;
    Ok(from.iter().all(|&v| win[index[&(v, initial)]] == (player == Player::Eve)))
}
