mod common;

use std::time::Instant;

use common::mdp_oracles::*;
use common::rng;
use num_traits::One;
use omegares::mdp::{
    almost_sure_muller, almost_sure_reach, check_randomized_strategy, mec_decomposition, positive_muller,
    solve_muller_mdp, Mdp, MdpEdge, VertexKind,
};
use omegares::rational::rat;
use omegares::zielonka::{parity_dag, zielonka_dag, ColorSet, TieBreak};
use omegares::{Limits, Rat};
use rand::Rng;

fn lim() -> Limits {
    Limits::default()
}

#[test]
fn mecs_match_subset_enumeration() {
    let mut r = rng(201);
    for i in 0..100 {
        let m = random_mdp(&mut r, 8, 2, 3, 0.4);
        assert_eq!(mec_decomposition(&m, &lim()).unwrap(), oracle_mecs(&m), "mdp {i}");
    }
}

#[test]
fn almost_sure_reach_matches_pure_strategy_systems() {
    let mut r = rng(203);
    for i in 0..100 {
        let n = r.gen_range(2..=6);
        let m = random_mdp(&mut r, n, 2, 3, 0.5);
        let target: Vec<bool> = (0..n).map(|_| r.gen_bool(0.3)).collect();
        assert_eq!(almost_sure_reach(&m, &target).unwrap(), oracle_almost_sure_reach(&m, &target), "mdp {i}");
    }
    let m = random_mdp(&mut r, 5, 2, 2, 0.5);
    assert_eq!(almost_sure_reach(&m, &[true; 5]).unwrap(), vec![true; 5]);
}

#[test]
fn parity_dag_on_two_priorities() {
    let d = parity_dag(&[1, 2], &lim()).unwrap();
    assert_eq!(d.len(), 2);
    assert!(d.node(0).accepting);
    assert_eq!(d.node(0).children.len(), 1);
    let child = d.node(d.node(0).children[0]);
    assert!(!child.accepting);
    assert_eq!(child.label, ColorSet::singleton(0));
    let empty = zielonka_dag(3, |_| false, &lim()).unwrap();
    assert_eq!(empty.len(), 1);
    assert!(!empty.node(0).accepting);
}

#[test]
fn almost_sure_muller_matches_winning_end_components() {
    let mut r = rng(207);
    let mut mixed = 0;
    for i in 0..200 {
        let n = r.gen_range(2..=6);
        let colors = r.gen_range(2..=4);
        let m = random_mdp_with(&mut r, n, colors, (2, 3), 0.5, if n >= 4 { 2 } else { 0 });
        let (family, dag) = random_family_dag(&mut r, colors);
        let union = oracle_winning_ec_union(&m, |s| family[s.0 as usize]);
        let expected = oracle_almost_sure_reach(&m, &union);
        let v = solve_muller_mdp(&m, &dag, &lim()).unwrap();
        assert_eq!(v.almost_sure, expected, "mdp {i}");
        mixed += usize::from(expected.iter().any(|&w| w) && expected.iter().any(|&w| !w));
        let won: Vec<usize> = (0..n).filter(|&u| v.almost_sure[u]).collect();
        assert!(check_randomized_strategy(&m, &dag, &v.strategy, &won, true).unwrap(), "mdp {i}");
    }
    assert!(mixed >= 40, "only {mixed} instances split the vertices");
}

#[test]
fn muller_regions_match_randomized_support_enumeration() {
    let mut r = rng(211);
    let mut gap = 0;
    for i in 0..200 {
        let n = r.gen_range(3..=7);
        let colors = r.gen_range(2..=4);
        let m = random_mdp_with(&mut r, n, colors, (2, 3), 0.6, 2);
        let (family, dag) = random_family_dag(&mut r, colors);
        let (sure, pos) = oracle_supports(&m, |s| family[s.0 as usize]);
        let v = solve_muller_mdp(&m, &dag, &lim()).unwrap();
        assert_eq!(v.almost_sure, sure, "mdp {i}");
        assert_eq!(v.positive, pos, "mdp {i}");
        gap += usize::from(sure != pos);
        assert_eq!(positive_muller(&m, &dag, &lim()).unwrap(), pos);
        assert!((0..n).all(|u| !v.almost_sure[u] || v.positive[u]));
        let won: Vec<usize> = (0..n).filter(|&u| v.positive[u]).collect();
        assert!(check_randomized_strategy(&m, &dag, &v.strategy, &won, false).unwrap(), "mdp {i}");
    }
    assert!(gap >= 20, "only {gap} instances separate positive from almost-sure winning");
}

/// Almost-sure parity: reach, with probability one, a maximal end component
/// of the sub-MDP with priorities at most `d` that contains an edge of even
/// priority `d`.
fn parity_mdp_oracle(m: &Mdp, prio: &[u32]) -> Vec<bool> {
    let n = m.num_vertices();
    let mut good = vec![false; n];
    let top = prio.iter().copied().max().unwrap_or(0);
    for d in (0..=top).filter(|d| d % 2 == 0) {
        // Prune to the part where the controller avoids priorities above d.
        let mut alive = vec![true; n];
        let ok = |e: &MdpEdge| e.color.map_or(true, |c| prio[c] <= d);
        loop {
            let mut changed = false;
            for v in 0..n {
                if !alive[v] {
                    continue;
                }
                let live = |e: usize| ok(m.edge(e)) && alive[m.edge(e).dst];
                let keep =
                    if m.is_controlled(v) { m.out(v).iter().any(|&e| live(e)) } else { m.out(v).iter().all(|&e| live(e)) };
                if !keep {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let edges: Vec<MdpEdge> = m
            .edges()
            .iter()
            .filter(|e| alive[e.src] && alive[e.dst] && ok(e))
            .cloned()
            .collect();
        // Rebuild the pruned part as its own MDP with a self-loop on dead vertices.
        let mut all = edges.clone();
        for v in (0..n).filter(|&v| !alive[v]) {
            all.push(MdpEdge { src: v, dst: v, color: Some(0), prob: (!m.is_controlled(v)).then(Rat::one) });
        }
        let kind: Vec<VertexKind> = (0..n).map(|v| m.kind(v)).collect();
        let sub = Mdp::new(kind, m.labels().to_vec(), all, 0).unwrap();
        for mec in mec_decomposition(&sub, &lim()).unwrap() {
            if mec.iter().any(|&v| !alive[v]) {
                continue;
            }
            let inside = mask(n, &mec);
            if edges.iter().any(|e| inside[e.src] && inside[e.dst] && e.color.map(|c| prio[c]) == Some(d)) {
                for &v in &mec {
                    good[v] = true;
                }
            }
        }
    }
    oracle_almost_sure_reach(m, &good)
}

#[test]
fn parity_objective_matches_end_component_analysis() {
    let mut r = rng(213);
    for i in 0..100 {
        let n = r.gen_range(2..=6);
        let colors = r.gen_range(1..=4);
        let prio: Vec<u32> = (0..colors as u32).collect();
        let m = random_mdp(&mut r, n, colors, 3, 0.4);
        let dag = parity_dag(&prio, &lim()).unwrap();
        let (win, _) = almost_sure_muller(&m, &dag, TieBreak::Lexicographic, &lim()).unwrap();
        assert_eq!(win, parity_mdp_oracle(&m, &prio), "mdp {i}");
    }
}

#[test]
fn universal_family_wins_everywhere() {
    let mut r = rng(217);
    let m = random_mdp(&mut r, 7, 3, 3, 0.5);
    let dag = zielonka_dag(3, |_| true, &lim()).unwrap();
    assert_eq!(solve_muller_mdp(&m, &dag, &lim()).unwrap().almost_sure, vec![true; 7]);
    let none = zielonka_dag(3, |_| false, &lim()).unwrap();
    let v = solve_muller_mdp(&m, &none, &lim()).unwrap();
    assert!(v.almost_sure.iter().all(|w| !w));
    assert!(v.positive.iter().all(|w| !w));
}

#[test]
fn regions_ignore_the_exact_probabilities() {
    let mut r = rng(219);
    for i in 0..100 {
        let n = r.gen_range(2..=7);
        let colors = r.gen_range(1..=4);
        let m = random_mdp(&mut r, n, colors, 3, 0.6);
        let (_, dag) = random_family_dag(&mut r, colors);
        let w = m.reweighted(|_| rat(r.gen_range(1..=100), 7)).unwrap();
        let a = solve_muller_mdp(&m, &dag, &lim()).unwrap();
        let b = solve_muller_mdp(&w, &dag, &lim()).unwrap();
        assert_eq!((a.almost_sure, a.positive), (b.almost_sure, b.positive), "mdp {i}");
    }
}

#[test]
fn node_order_does_not_change_the_region() {
    let mut r = rng(223);
    for i in 0..100 {
        let n = r.gen_range(2..=10);
        let colors = r.gen_range(1..=5);
        let m = random_mdp(&mut r, n, colors, 3, 0.4);
        let (_, dag) = random_family_dag(&mut r, colors);
        let (a, _) = almost_sure_muller(&m, &dag, TieBreak::Lexicographic, &lim()).unwrap();
        let (b, _) = almost_sure_muller(&m, &dag, TieBreak::ReverseLexicographic, &lim()).unwrap();
        assert_eq!(a, b, "mdp {i}");
    }
}

#[test]
fn simulated_plays_stay_in_the_almost_sure_region() {
    let mut r = rng(227);
    for _ in 0..30 {
        let n = r.gen_range(4..=10);
        let colors = r.gen_range(1..=4);
        let m = random_mdp(&mut r, n, colors, 3, 0.5);
        let (_, dag) = random_family_dag(&mut r, colors);
        let v = solve_muller_mdp(&m, &dag, &lim()).unwrap();
        for start in (0..n).filter(|&u| v.almost_sure[u]) {
            let mut at = start;
            for _ in 0..200 {
                let e = if m.is_controlled(at) {
                    let es = &v.strategy[&at];
                    es[r.gen_range(0..es.len())]
                } else {
                    let out = m.out(at);
                    out[r.gen_range(0..out.len())]
                };
                at = m.edge(e).dst;
                assert!(v.almost_sure[at]);
            }
        }
    }
}

#[test]
fn color_mismatch_is_rejected() {
    let mut r = rng(229);
    let m = random_mdp(&mut r, 4, 3, 2, 0.5);
    let small = zielonka_dag(1, |_| true, &lim()).unwrap();
    if m.color_bound() > 1 {
        assert!(solve_muller_mdp(&m, &small, &lim()).is_err());
    }
}

#[test]
fn solve_time_grows_at_most_linearly_in_dag_size() {
    let mut r = rng(231);
    let m = random_mdp(&mut r, 400, 16, 3, 0.4);
    let time = |k: usize| {
        let prio: Vec<u32> = (0..16).map(|c| (c % k) as u32).collect();
        let dag = parity_dag(&prio, &lim()).unwrap();
        let mut best = f64::MAX;
        for _ in 0..5 {
            let t = Instant::now();
            almost_sure_muller(&m, &dag, TieBreak::Lexicographic, &lim()).unwrap();
            best = best.min(t.elapsed().as_secs_f64());
        }
        (dag.len(), best)
    };
    let (small_nodes, small) = time(2);
    let (large_nodes, large) = time(16);
    assert!(large_nodes >= 8 * small_nodes, "{small_nodes} vs {large_nodes}");
    let bound = 3.0 * (large_nodes as f64 / small_nodes as f64) * small + 0.01;
    assert!(large <= bound, "{large:.4}s for {large_nodes} nodes vs {small:.4}s for {small_nodes}");
}
