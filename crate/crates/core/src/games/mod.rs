//! Turn-based two-player games on edge-colored arenas.

mod muller;
mod parity;
mod token;

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub use muller::{check_muller_strategy, muller_regions, solve_muller_game, ZielonkaTreeMemory};
pub use parity::{solve_parity_game, VertexGame};
pub use token::{
    build_simulation_game, build_two_token_game, is_history_deterministic, solve_simulation, two_token_colors,
    two_token_eve_dag, HdVerdict, TokenGame,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Eve,
    Adam,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Eve => Player::Adam,
            Player::Adam => Player::Eve,
        }
    }

    /// The player favoured by a priority under max-even parity.
    pub fn of_priority(p: u32) -> Player {
        if p % 2 == 0 {
            Player::Eve
        } else {
            Player::Adam
        }
    }
}

/// An edge; `color: None` is a blank edge ignored by the objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GameEdge {
    pub src: usize,
    pub dst: usize,
    pub color: Option<usize>,
}

/// A game graph whose every vertex has a successor and whose every cycle
/// carries at least one colored edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameArena {
    owner: Vec<Player>,
    labels: Vec<String>,
    edges: Vec<GameEdge>,
    out: Vec<Vec<usize>>,
    initial: usize,
}

impl GameArena {
    pub fn new(owner: Vec<Player>, labels: Vec<String>, edges: Vec<GameEdge>, initial: usize) -> Result<GameArena> {
        let n = owner.len();
        let bad = |m: String| Err(Error::InvalidGame(m));
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
            out[e.src].push(i);
        }
        if let Some(v) = out.iter().position(|o| o.is_empty()) {
            return bad(format!("vertex `{}` has no outgoing edge", labels[v]));
        }
        let blank: Vec<Vec<usize>> =
            out.iter().map(|o| o.iter().filter(|&&i| edges[i].color.is_none()).map(|&i| edges[i].dst).collect()).collect();
        let (comp, ncomp) = crate::graph::scc(&blank, None);
        let mut size = vec![0usize; ncomp];
        for &c in &comp {
            size[c] += 1;
        }
        for (v, succ) in blank.iter().enumerate() {
            if size[comp[v]] > 1 || succ.contains(&v) {
                return bad(format!("a cycle through `{}` carries no color", labels[v]));
            }
        }
        Ok(GameArena { owner, labels, edges, out, initial })
    }

    pub fn num_vertices(&self) -> usize {
        self.owner.len()
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn owners(&self) -> &[Player] {
        &self.owner
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[GameEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> GameEdge {
        self.edges[e]
    }

    pub fn out(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn with_initial(&self, v: usize) -> GameArena {
        GameArena { initial: v, ..self.clone() }
    }

    /// Largest color index used, plus one.
    pub fn color_bound(&self) -> usize {
        self.edges.iter().filter_map(|e| e.color).map(|c| c + 1).max().unwrap_or(0)
    }
}

/// A finite-memory strategy: memory moves on colored edges only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemoryStrategy {
    pub memory: usize,
    pub initial_memory: usize,
    /// `update[m][c]`: memory after an edge of color `c` is taken in memory `m`.
    pub update: Vec<Vec<usize>>,
    /// Chosen edge per (vertex, memory) for the strategy owner's vertices.
    pub choice: BTreeMap<(usize, usize), usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Chosen edge per vertex.
    Positional(BTreeMap<usize, usize>),
    FiniteMemory(MemoryStrategy),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub win_eve: Vec<bool>,
    pub win_adam: Vec<bool>,
    pub strategy_eve: Strategy,
    pub strategy_adam: Strategy,
}

impl SolveResult {
    pub fn winner(&self, v: usize) -> Player {
        if self.win_eve[v] {
            Player::Eve
        } else {
            Player::Adam
        }
    }
}
