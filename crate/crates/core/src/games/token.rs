use std::collections::HashMap;

use super::{solve_muller_game, GameArena, GameEdge, MemoryStrategy, Player, Strategy};
use crate::automaton::{Letter, ParityAutomaton, Priority, State};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::zielonka::{zielonka_dag_by_max, ZielonkaDag, MAX_COLORS};

/// A game between automaton tokens, with colors standing for priority
/// vectors (one coordinate per token).
#[derive(Clone, Debug)]
pub struct TokenGame {
    pub arena: GameArena,
    /// `coords[c]`: the priority vector of color `c`.
    pub coords: Vec<Vec<Priority>>,
    /// Eve's objective.
    pub eve_dag: ZielonkaDag,
}

fn joint_bounds(a: &ParityAutomaton, b: &ParityAutomaton) -> (Priority, Priority) {
    let (la, ha) = a.bounds();
    let (lb, hb) = b.bounds();
    (la.min(lb), ha.max(hb))
}

/// All priority vectors of length `dim` over `lo..=hi`, indexed in
/// lexicographic order.
fn vectors(lo: Priority, hi: Priority, dim: u32) -> Result<Vec<Vec<Priority>>> {
    let k = (hi - lo + 1) as usize;
    let total = k.checked_pow(dim).filter(|&t| t <= MAX_COLORS).ok_or(Error::ResourceLimit {
        what: "token game colors".into(),
        limit: MAX_COLORS,
    })?;
    Ok((0..total)
        .map(|mut i| {
            let mut v = vec![0; dim as usize];
            for x in v.iter_mut().rev() {
                *x = lo + (i % k) as Priority;
                i /= k;
            }
            v
        })
        .collect())
}

fn color_of(v: &[Priority], lo: Priority, hi: Priority) -> usize {
    let k = (hi - lo + 1) as usize;
    v.iter().fold(0, |acc, &x| acc * k + (x - lo) as usize)
}

/// Color vectors of the 2-token game: (Eve, token 1, token 2).
pub fn two_token_colors(lo: Priority, hi: Priority) -> Result<Vec<Vec<Priority>>> {
    vectors(lo, hi, 3)
}

/// Eve's 2-token objective: her run accepts, or both of Adam's runs reject.
pub fn two_token_eve_dag(coords: &[Vec<Priority>], limits: &Limits) -> Result<ZielonkaDag> {
    zielonka_dag_by_max(coords, |m| m[0] % 2 == 0 || (m[1] % 2 == 1 && m[2] % 2 == 1), limits)
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum TwoTokenVertex {
    Round(State, State, State),
    Letter(State, State, State, Letter),
    Answered(State, Priority, State, State, Letter),
}

fn same_alphabet(a: &ParityAutomaton, b: &ParityAutomaton) -> Result<ParityAutomaton> {
    let mut x: Vec<&String> = a.alphabet().iter().collect();
    let mut y: Vec<&String> = b.alphabet().iter().collect();
    x.sort();
    y.sort();
    if x != y {
        return Err(Error::AlphabetMismatch(format!(
            "`{}` and `{}` have different alphabets",
            a.name(),
            b.name()
        )));
    }
    b.with_alphabet_order(a.alphabet())
}

/// The 2-token game G2(b; a): Eve's token moves in `b`, Adam's two tokens in
/// `a`. A round is: Adam picks a letter, Eve a `b`-transition, Adam a pair of
/// `a`-transitions; the round-final edge carries the priority triple.
pub fn build_two_token_game(b: &ParityAutomaton, a: &ParityAutomaton, limits: &Limits) -> Result<TokenGame> {
    let b = same_alphabet(a, b)?;
    let (lo, hi) = joint_bounds(a, &b);
    let coords = two_token_colors(lo, hi)?;
    let eve_dag = two_token_eve_dag(&coords, limits)?;
    let mut ids: HashMap<TwoTokenVertex, usize> = HashMap::new();
    let mut order: Vec<TwoTokenVertex> = Vec::new();
    let mut edges = Vec::new();
    let start = TwoTokenVertex::Round(b.initial(), a.initial(), a.initial());
    ids.insert(start.clone(), 0);
    order.push(start);
    let mut i = 0;
    while i < order.len() {
        let mut targets: Vec<(TwoTokenVertex, Option<usize>)> = Vec::new();
        match order[i] {
            TwoTokenVertex::Round(q, p1, p2) => {
                for l in 0..a.num_letters() {
                    targets.push((TwoTokenVertex::Letter(q, p1, p2, l), None));
                }
            }
            TwoTokenVertex::Letter(q, p1, p2, l) => {
                for t in b.out(q, l) {
                    targets.push((TwoTokenVertex::Answered(t.dst, t.priority, p1, p2, l), None));
                }
            }
            TwoTokenVertex::Answered(q, c, p1, p2, l) => {
                for t1 in a.out(p1, l) {
                    for t2 in a.out(p2, l) {
                        let col = color_of(&[c, t1.priority, t2.priority], lo, hi);
                        targets.push((TwoTokenVertex::Round(q, t1.dst, t2.dst), Some(col)));
                    }
                }
            }
        }
        for (t, color) in targets {
            let id = *ids.entry(t.clone()).or_insert_with(|| {
                order.push(t);
                order.len() - 1
            });
            edges.push(GameEdge { src: i, dst: id, color });
        }
        limits.check_states("2-token game vertices", order.len())?;
        i += 1;
    }
    let (sa, sb, al) = (a.states(), b.states(), a.alphabet());
    let owner = order
        .iter()
        .map(|v| match v {
            TwoTokenVertex::Letter(..) => Player::Eve,
            _ => Player::Adam,
        })
        .collect();
    let labels = order
        .iter()
        .map(|v| match *v {
            TwoTokenVertex::Round(q, p1, p2) => format!("round({},{},{})", sb[q], sa[p1], sa[p2]),
            TwoTokenVertex::Letter(q, p1, p2, l) => format!("letter({},{},{},{})", sb[q], sa[p1], sa[p2], al[l]),
            TwoTokenVertex::Answered(q, c, p1, p2, l) => {
                format!("answered({},{},{},{},{})", sb[q], c, sa[p1], sa[p2], al[l])
            }
        })
        .collect();
    Ok(TokenGame { arena: GameArena::new(owner, labels, edges, 0)?, coords, eve_dag })
}

/// Outcome of the history-determinism check.
#[derive(Clone, Debug)]
pub struct HdVerdict {
    pub history_deterministic: bool,
    /// Eve's winning 2-token strategy when the automaton is HD.
    pub strategy: Option<MemoryStrategy>,
    pub game_vertices: usize,
    pub dag_nodes: usize,
}

/// History-determinism via the 2-token game on `a` against itself.
pub fn is_history_deterministic(a: &ParityAutomaton, limits: &Limits) -> Result<HdVerdict> {
    let g = build_two_token_game(a, a, limits)?;
    let res = solve_muller_game(&g.arena, &g.eve_dag, limits)?;
    let hd = res.win_eve[g.arena.initial()];
    let strategy = match (hd, res.strategy_eve) {
        (true, Strategy::FiniteMemory(s)) => Some(s),
        _ => None,
    };
    Ok(HdVerdict {
        history_deterministic: hd,
        strategy,
        game_vertices: g.arena.num_vertices(),
        dag_nodes: g.eve_dag.len(),
    })
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum SimVertex {
    Round(State, State),
    Moved(State, Priority, State, Letter),
}

/// The simulation game of `a` by `b`: Adam moves a token along an
/// `a`-transition (choosing the letter with it), Eve answers in `b` on the same
/// letter. Colors are (Adam's priority, Eve's priority); Eve wins when Adam's
/// run rejects or hers accepts.
pub fn build_simulation_game(a: &ParityAutomaton, b: &ParityAutomaton, limits: &Limits) -> Result<TokenGame> {
    let b = same_alphabet(a, b)?;
    let (lo, hi) = joint_bounds(a, &b);
    let coords = vectors(lo, hi, 2)?;
    let eve_dag = zielonka_dag_by_max(&coords, |m| m[0] % 2 == 1 || m[1] % 2 == 0, limits)?;
    let mut ids: HashMap<SimVertex, usize> = HashMap::new();
    let mut order = vec![SimVertex::Round(a.initial(), b.initial())];
    ids.insert(order[0].clone(), 0);
    let mut edges = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut targets = Vec::new();
        match order[i] {
            SimVertex::Round(p, q) => {
                for l in 0..a.num_letters() {
                    for t in a.out(p, l) {
                        targets.push((SimVertex::Moved(t.dst, t.priority, q, l), None));
                    }
                }
            }
            SimVertex::Moved(p, c, q, l) => {
                for t in b.out(q, l) {
                    targets.push((SimVertex::Round(p, t.dst), Some(color_of(&[c, t.priority], lo, hi))));
                }
            }
        }
        for (t, color) in targets {
            let id = *ids.entry(t.clone()).or_insert_with(|| {
                order.push(t);
                order.len() - 1
            });
            edges.push(GameEdge { src: i, dst: id, color });
        }
        limits.check_states("simulation game vertices", order.len())?;
        i += 1;
    }
    let (sa, sb, al) = (a.states(), b.states(), a.alphabet());
    let owner = order
        .iter()
        .map(|v| match v {
            SimVertex::Round(..) => Player::Adam,
            SimVertex::Moved(..) => Player::Eve,
        })
        .collect();
    let labels = order
        .iter()
        .map(|v| match *v {
            SimVertex::Round(p, q) => format!("round({},{})", sa[p], sb[q]),
            SimVertex::Moved(p, c, q, l) => format!("moved({},{},{},{})", sa[p], c, sb[q], al[l]),
        })
        .collect();
    Ok(TokenGame { arena: GameArena::new(owner, labels, edges, 0)?, coords, eve_dag })
}

/// Whether `b` simulates `a`.
pub fn solve_simulation(a: &ParityAutomaton, b: &ParityAutomaton, limits: &Limits) -> Result<bool> {
    let g = build_simulation_game(a, b, limits)?;
    let res = solve_muller_game(&g.arena, &g.eve_dag, limits)?;
    Ok(res.win_eve[g.arena.initial()])
}
