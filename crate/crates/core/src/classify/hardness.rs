use crate::automaton::{AutomatonBuilder, ParityAutomaton, Priority};
use crate::error::{Error, Result};
use crate::games::{solve_muller_game, GameArena, GameEdge, Player};
use crate::limits::Limits;
use crate::zielonka::{zielonka_dag_by_max, MAX_COLORS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoDimEdge {
    pub src: usize,
    pub dst: usize,
    pub first: Priority,
    pub second: Priority,
}

/// A game whose edges carry two priorities. Eve wins a play if it satisfies
/// the second parity condition whenever it satisfies the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoDimParityGame {
    owner: Vec<Player>,
    labels: Vec<String>,
    edges: Vec<TwoDimEdge>,
    initial: usize,
}

impl TwoDimParityGame {
    pub fn new(owner: Vec<Player>, labels: Vec<String>, edges: Vec<TwoDimEdge>, initial: usize) -> Result<Self> {
        let n = owner.len();
        let bad = |m: String| Err(Error::InvalidGame(m));
        if labels.len() != n || initial >= n {
            return bad("labels or initial vertex do not match the vertex set".into());
        }
        if let Some(e) = edges.iter().find(|e| e.src >= n || e.dst >= n) {
            return bad(format!("edge {e:?} leaves the vertex set"));
        }
        if let Some(v) = (0..n).find(|&v| !edges.iter().any(|e| e.src == v)) {
            return bad(format!("vertex `{}` has no outgoing edge", labels[v]));
        }
        let g = TwoDimParityGame { owner, labels, edges, initial };
        if g.span() * g.span() > MAX_COLORS {
            return bad("priorities too large for the pair encoding".into());
        }
        Ok(g)
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[TwoDimEdge] {
        &self.edges
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn num_vertices(&self) -> usize {
        self.owner.len()
    }

    fn span(&self) -> usize {
        self.edges.iter().map(|e| e.first.max(e.second)).max().unwrap_or(0) as usize + 1
    }

    /// Solves a Muller game over priority pairs on the given owners and edges;
    /// Eve wins a play whose limit pair `(f, s)` satisfies `eve`.
    fn eve_wins_with(
        &self,
        owner: Vec<Player>,
        edges: &[TwoDimEdge],
        eve: impl Fn(Priority, Priority) -> bool,
        limits: &Limits,
    ) -> Result<bool> {
        let k = self.span();
        let coords: Vec<Vec<Priority>> = (0..k * k).map(|c| vec![(c / k) as Priority, (c % k) as Priority]).collect();
        let dag = zielonka_dag_by_max(&coords, |m| eve(m[0], m[1]), limits)?;
        let edges = edges
            .iter()
            .map(|e| GameEdge { src: e.src, dst: e.dst, color: Some(e.first as usize * k + e.second as usize) })
            .collect();
        let arena = GameArena::new(owner, self.labels.clone(), edges, self.initial)?;
        Ok(solve_muller_game(&arena, &dag, limits)?.win_eve[self.initial])
    }

    pub fn winner(&self, limits: &Limits) -> Result<Player> {
        let eve = self.eve_wins_with(self.owner.clone(), &self.edges, |f, s| f % 2 == 1 || s % 2 == 0, limits)?;
        Ok(if eve { Player::Eve } else { Player::Adam })
    }

    /// Whether the gadget automaton of this game has the language of its
    /// deterministic part. Two conditions on plays from the initial vertex:
    /// every play satisfying the second condition satisfies the first, and a
    /// play satisfying the first but not the second visits an Eve vertex with
    /// at least two outgoing edges.
    pub fn is_good(&self, limits: &Limits) -> Result<bool> {
        let adam = vec![Player::Adam; self.num_vertices()];
        if !self.eve_wins_with(adam.clone(), &self.edges, |f, s| s % 2 == 1 || f % 2 == 0, limits)? {
            return Ok(false);
        }
        // Branching Eve vertices become winning traps.
        let branching = |v: usize| self.owner[v] == Player::Eve && self.edges.iter().filter(|e| e.src == v).count() > 1;
        let mut edges: Vec<TwoDimEdge> = self.edges.iter().filter(|e| !branching(e.src)).copied().collect();
        edges.extend(
            (0..self.num_vertices()).filter(|&v| branching(v)).map(|v| TwoDimEdge { src: v, dst: v, first: 0, second: 0 }),
        );
        self.eve_wins_with(adam, &edges, |f, s| f % 2 == 1 || s % 2 == 0, limits)
    }
}

/// An automaton `h` containing a deterministic part `d`, with `L(d) = L(h)`
/// when the game is good; `h` is then MA iff Eve wins the game.
#[derive(Clone, Debug)]
pub struct HardnessInstance {
    pub h: ParityAutomaton,
    /// The deterministic part of `h` on its own, started where `h`'s copy of
    /// the initial vertex starts in that part.
    pub d: ParityAutomaton,
    /// The letter used as separator before Eve's choices.
    pub separator: String,
}

/// Builds the gadget automaton of a good game; fails on a game that is not good.
pub fn build_hardness_instance(g: &TwoDimParityGame, limits: &Limits) -> Result<HardnessInstance> {
    if !g.is_good(limits)? {
        return Err(Error::NotApplicable("the game is not good: its gadget automaton would not match its deterministic part".into()));
    }
    build_hardness_instance_unchecked(g)
}

/// Builds the gadget automaton without checking that the game is good.
pub fn build_hardness_instance_unchecked(g: &TwoDimParityGame) -> Result<HardnessInstance> {
    let letters: Vec<String> = (0..g.edges.len()).map(|i| format!("e{i}")).collect();
    let mut sep = "$".to_string();
    let mut k = 0;
    while letters.contains(&sep) {
        sep = format!("${k}");
        k += 1;
    }
    let mut alphabet = letters.clone();
    alphabet.push(sep.clone());
    let lab = &g.labels;
    let d_state = |v: usize| format!("{}_D", lab[v]);
    let h_state = |v: usize| format!("{}_H", lab[v]);
    let entry = |v: usize| match g.owner[v] {
        Player::Eve => format!("{}_$", lab[v]),
        Player::Adam => d_state(v),
    };
    let hi = g.edges.iter().map(|e| e.first.max(e.second)).max().unwrap_or(1).max(1);

    // (src, letter, priority, dst) of the deterministic part.
    let mut dpart: Vec<(String, String, Priority, String)> = Vec::new();
    let mut hpart: Vec<(String, String, Priority, String)> = Vec::new();
    for v in 0..g.num_vertices() {
        let out: Vec<usize> = (0..g.edges.len()).filter(|&i| g.edges[i].src == v).collect();
        match g.owner[v] {
            Player::Adam => {
                for &i in &out {
                    let e = g.edges[i];
                    dpart.push((d_state(v), letters[i].clone(), e.first, entry(e.dst)));
                    hpart.push((h_state(v), letters[i].clone(), e.second, h_state(e.dst)));
                }
            }
            Player::Eve => {
                dpart.push((entry(v), sep.clone(), 0, d_state(v)));
                for &i in &out {
                    let e = g.edges[i];
                    let choice = format!("{}_H,{}", lab[v], letters[i]);
                    dpart.push((d_state(v), letters[i].clone(), e.first, entry(e.dst)));
                    hpart.push((h_state(v), sep.clone(), 0, choice.clone()));
                    hpart.push((choice.clone(), letters[i].clone(), e.second, h_state(e.dst)));
                    for &j in out.iter().filter(|&&j| j != i) {
                        let f = g.edges[j];
                        hpart.push((choice.clone(), letters[j].clone(), f.second, entry(f.dst)));
                    }
                }
            }
        }
    }
    let build = |name: &str, init: String, parts: &[&[(String, String, Priority, String)]]| {
        let mut b = AutomatonBuilder::new(name).alphabet(&alphabet).bounds(0, hi).initial(&init);
        for part in parts {
            for (s, l, p, t) in part.iter() {
                b = b.trans(s, l, *p, t);
            }
        }
        b.complete_with_sink("sink").build()
    };
    let h = build("hardness", h_state(g.initial), &[&hpart, &dpart])?;
    let d = build("hardness-det", entry(g.initial), &[&dpart])?;
    Ok(HardnessInstance { h, d, separator: sep })
}
