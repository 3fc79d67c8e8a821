use omegares::classify::{HardnessInstance, TwoDimEdge, TwoDimParityGame};
use omegares::games::Player;
use omegares::lang::lasso_membership;
use omegares::{LassoWord, Limits, ParityAutomaton};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn game(owners: &[Player], edges: &[(usize, usize, u32, u32)]) -> TwoDimParityGame {
    TwoDimParityGame::new(
        owners.to_vec(),
        (0..owners.len()).map(|i| format!("v{i}")).collect(),
        edges.iter().map(|&(src, dst, first, second)| TwoDimEdge { src, dst, first, second }).collect(),
        0,
    )
    .unwrap()
}

/// Closed walks inside `alive` edges, reachable from `start`, with largest
/// first priority even and largest second priority odd (or the reverse when
/// `swap` is set).
pub fn bad_cycle_reachable(g: &TwoDimParityGame, alive: &[bool], start: usize, swap: bool) -> bool {
    let n = g.num_vertices();
    let es = g.edges();
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for (i, e) in es.iter().enumerate() {
            if alive[i] && e.src == v && !seen[e.dst] {
                seen[e.dst] = true;
                stack.push(e.dst);
            }
        }
    }
    let top = es.iter().map(|e| e.first.max(e.second)).max().unwrap();
    for f in (0..=top).filter(|f| f % 2 == 0) {
        for s in (0..=top).filter(|s| s % 2 == 1) {
            let sub: Vec<bool> = (0..es.len())
                .map(|i| {
                    let (a, b) = if swap { (es[i].second, es[i].first) } else { (es[i].first, es[i].second) };
                    alive[i] && seen[es[i].src] && a <= f && b <= s
                })
                .collect();
            // Reachability closure inside `sub` to find strongly connected pairs.
            let reach = |x: usize| {
                let mut r = vec![false; n];
                let mut st = vec![x];
                while let Some(v) = st.pop() {
                    for (i, e) in es.iter().enumerate() {
                        if sub[i] && e.src == v && !r[e.dst] {
                            r[e.dst] = true;
                            st.push(e.dst);
                        }
                    }
                }
                r
            };
            let rs: Vec<Vec<bool>> = (0..n).map(reach).collect();
            let on_cycle = |i: usize| sub[i] && rs[es[i].dst][es[i].src];
            let first = |i: usize| if swap { es[i].second } else { es[i].first };
            let second = |i: usize| if swap { es[i].first } else { es[i].second };
            for i in (0..es.len()).filter(|&i| on_cycle(i) && first(i) == f) {
                for j in (0..es.len()).filter(|&j| on_cycle(j) && second(j) == s) {
                    if rs[es[i].dst][es[j].src] && rs[es[j].dst][es[i].src] {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Eve wins iff some positional choice of hers leaves no reachable bad cycle.
pub fn brute_force_winner(g: &TwoDimParityGame) -> Player {
    let es = g.edges();
    let eve: Vec<usize> = (0..g.num_vertices()).filter(|&v| g.owner(v) == Player::Eve).collect();
    let choices: Vec<Vec<usize>> = eve.iter().map(|&v| (0..es.len()).filter(|&i| es[i].src == v).collect()).collect();
    let total: usize = choices.iter().map(|c| c.len()).product();
    for mut k in 0..total {
        let mut alive: Vec<bool> = es.iter().map(|e| g.owner(e.src) == Player::Adam).collect();
        for c in &choices {
            alive[c[k % c.len()]] = true;
            k /= c.len();
        }
        if !bad_cycle_reachable(g, &alive, g.initial(), false) {
            return Player::Eve;
        }
    }
    Player::Adam
}

pub fn random_game(r: &mut ChaCha8Rng) -> TwoDimParityGame {
    let n = r.gen_range(1..=4);
    let mut owners: Vec<Player> = (0..n).map(|_| if r.gen_bool(0.5) { Player::Eve } else { Player::Adam }).collect();
    owners[0] = Player::Adam;
    let mut edges = Vec::new();
    for v in 0..n {
        let degree = if owners[v] == Player::Eve { 2 } else { r.gen_range(1..=2) };
        for _ in 0..degree {
            edges.push((v, r.gen_range(0..n), r.gen_range(0..=3), r.gen_range(0..=3)));
        }
    }
    game(&owners, &edges)
}

/// No play satisfies the second condition without the first, and plays
/// satisfying only the first pass through an Eve vertex with a choice.
pub fn brute_force_good(g: &TwoDimParityGame) -> bool {
    let es = g.edges();
    let all = vec![true; es.len()];
    let branching =
        |v: usize| g.owner(v) == Player::Eve && es.iter().filter(|e| e.src == v).count() > 1;
    let forced: Vec<bool> = es.iter().map(|e| !branching(e.src)).collect();
    !bad_cycle_reachable(g, &all, g.initial(), true) && !bad_cycle_reachable(g, &forced, g.initial(), false)
}

/// The word of a lasso-shaped play: edge letters, with the separator before
/// each edge leaving an Eve vertex.
pub fn play_word(g: &TwoDimParityGame, a: &ParityAutomaton, sep: &str, stem: &[usize], cycle: &[usize]) -> LassoWord {
    let enc = |edges: &[usize]| -> Vec<usize> {
        let mut out = Vec::new();
        for &i in edges {
            if g.owner(g.edges()[i].src) == Player::Eve {
                out.push(a.letter_index(sep).unwrap());
            }
            out.push(a.letter_index(&format!("e{i}")).unwrap());
        }
        out
    };
    LassoWord::new(enc(stem), enc(cycle)).unwrap()
}

/// A random lasso-shaped play from the initial vertex.
pub fn random_play(g: &TwoDimParityGame, r: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>) {
    let mut at = vec![g.initial()];
    let mut edges = Vec::new();
    loop {
        let v = *at.last().unwrap();
        let out: Vec<usize> = (0..g.edges().len()).filter(|&i| g.edges()[i].src == v).collect();
        let e = out[r.gen_range(0..out.len())];
        edges.push(e);
        let u = g.edges()[e].dst;
        if let Some(k) = at.iter().rposition(|&x| x == u) {
            if at.len() > 6 || r.gen_bool(0.5) {
                return (edges[..k].to_vec(), edges[k..].to_vec());
            }
        }
        at.push(u);
    }
}

pub fn check_gadget_languages(g: &TwoDimParityGame, inst: &HardnessInstance, r: &mut ChaCha8Rng) {
    let l = Limits::default();
    assert!(inst.d.is_deterministic());
    assert!(omegares::lang::contains(&inst.h, &inst.d, &l).unwrap().holds);
    for _ in 0..30 {
        let (stem, cycle) = random_play(g, r);
        let w = play_word(g, &inst.h, &inst.separator, &stem, &cycle);
        assert_eq!(lasso_membership(&inst.h, &w).unwrap(), lasso_membership(&inst.d, &w).unwrap());
    }
}
