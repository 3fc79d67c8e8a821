use num_traits::{One, Zero};
use omegares::graph;
use omegares::mdp::{Mdp, MdpEdge, VertexKind};
use omegares::rational::rat;
use omegares::zielonka::{zielonka_dag, ColorSet, ZielonkaDag};
use omegares::{Limits, Rat};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::solve_exact;

/// Random MDP whose last `sinks` vertices are absorbing with a random color.
/// Edges lean forward and blank edges point strictly forward, so every cycle
/// is colored.
pub fn random_mdp_with(
    r: &mut ChaCha8Rng,
    n: usize,
    colors: usize,
    (max_ctrl, max_stoch): (usize, usize),
    p_stoch: f64,
    sinks: usize,
) -> Mdp {
    let kind: Vec<VertexKind> =
        (0..n).map(|_| if r.gen_bool(p_stoch) { VertexKind::Stochastic } else { VertexKind::Controlled }).collect();
    let mut edges = Vec::new();
    for v in 0..n {
        let stoch = kind[v] == VertexKind::Stochastic;
        if v + sinks >= n {
            let prob = stoch.then(Rat::one);
            edges.push(MdpEdge { src: v, dst: v, color: Some(r.gen_range(0..colors)), prob });
            continue;
        }
        let k = r.gen_range(1..=if stoch { max_stoch } else { max_ctrl });
        let weights: Vec<i64> = (0..k).map(|_| r.gen_range(1..=3)).collect();
        let total: i64 = weights.iter().sum();
        for w in weights {
            let dst = if r.gen_bool(0.7) { r.gen_range(v..n) } else { r.gen_range(0..n) };
            let color = if dst > v && r.gen_bool(0.2) { None } else { Some(r.gen_range(0..colors)) };
            edges.push(MdpEdge { src: v, dst, color, prob: stoch.then(|| rat(w, total)) });
        }
    }
    Mdp::new(kind, (0..n).map(|v| format!("v{v}")).collect(), edges, 0).unwrap()
}

pub fn random_mdp(r: &mut ChaCha8Rng, n: usize, colors: usize, max_out: usize, p_stoch: f64) -> Mdp {
    random_mdp_with(r, n, colors, (max_out, max_out), p_stoch, 0)
}

pub fn random_family_dag(r: &mut ChaCha8Rng, colors: usize) -> (Vec<bool>, ZielonkaDag) {
    let family: Vec<bool> = (0..1usize << colors).map(|_| r.gen_bool(0.5)).collect();
    let f = family.clone();
    (family, zielonka_dag(colors, move |s: ColorSet| f[s.0 as usize], &Limits::default()).unwrap())
}

pub fn mask(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in set {
        m[v] = true;
    }
    m
}

/// A Markov chain: successor distributions plus the color of each step.
pub type Chain = Vec<Vec<(usize, Rat, Option<usize>)>>;

/// Probability of eventually hitting `good`, by the exact linear system.
pub fn hit_probability(chain: &Chain, good: &[bool]) -> Vec<Rat> {
    let n = chain.len();
    let succ: Vec<Vec<usize>> = chain.iter().map(|s| s.iter().map(|t| t.0).collect()).collect();
    let sources: Vec<usize> = (0..n).filter(|&v| good[v]).collect();
    let can = graph::reachable(&graph::reverse(&succ), &sources, None);
    let mut a = vec![vec![Rat::zero(); n]; n];
    let mut b = vec![Rat::zero(); n];
    for v in 0..n {
        a[v][v] = Rat::one();
        if good[v] {
            b[v] = Rat::one();
        } else if can[v] {
            for (w, p, _) in &chain[v] {
                a[v][*w] -= p;
            }
        }
    }
    solve_exact(a, b)
}

/// Chain of the pure strategy `pick` (one edge index per controlled vertex).
pub fn pure_chain(m: &Mdp, pick: &[usize]) -> Chain {
    (0..m.num_vertices())
        .map(|v| {
            if m.is_controlled(v) {
                let e = m.edge(m.out(v)[pick[v]]);
                vec![(e.dst, Rat::one(), e.color)]
            } else {
                m.out(v).iter().map(|&e| (m.edge(e).dst, m.edge(e).prob.clone().unwrap(), m.edge(e).color)).collect()
            }
        })
        .collect()
}

/// Chain of the uniform randomized strategy with support `supp[v]` (edge
/// bitmask) at each controlled vertex.
pub fn support_chain(m: &Mdp, supp: &[usize]) -> Chain {
    (0..m.num_vertices())
        .map(|v| {
            if m.is_controlled(v) {
                let chosen: Vec<usize> =
                    m.out(v).iter().enumerate().filter(|(i, _)| supp[v] >> i & 1 == 1).map(|(_, &e)| e).collect();
                let p = rat(1, chosen.len() as i64);
                chosen.iter().map(|&e| (m.edge(e).dst, p.clone(), m.edge(e).color)).collect()
            } else {
                m.out(v).iter().map(|&e| (m.edge(e).dst, m.edge(e).prob.clone().unwrap(), m.edge(e).color)).collect()
            }
        })
        .collect()
}

/// Calls `f` on every assignment of `0..radix[v]` to the vertices.
pub fn for_each_assignment(radix: &[usize], mut f: impl FnMut(&[usize])) {
    let mut cur = vec![0usize; radix.len()];
    loop {
        f(&cur);
        let mut k = 0;
        while k < radix.len() {
            cur[k] += 1;
            if cur[k] < radix[k] {
                break;
            }
            cur[k] = 0;
            k += 1;
        }
        if k == radix.len() {
            return;
        }
    }
}

/// Almost-sure reachability by enumerating pure memoryless strategies and
/// solving each chain's reachability system.
pub fn oracle_almost_sure_reach(m: &Mdp, target: &[bool]) -> Vec<bool> {
    let n = m.num_vertices();
    let radix: Vec<usize> = (0..n).map(|v| if m.is_controlled(v) { m.out(v).len() } else { 1 }).collect();
    let mut win = vec![false; n];
    for_each_assignment(&radix, |pick| {
        let x = hit_probability(&pure_chain(m, pick), target);
        for v in 0..n {
            win[v] |= x[v].is_one();
        }
    });
    win
}

/// Whether `set` with the given edges is strongly connected.
pub fn strongly_connected(n: usize, set: &[bool], edges: &[(usize, usize)]) -> bool {
    let mut succ = vec![Vec::new(); n];
    for &(a, b) in edges {
        succ[a].push(b);
    }
    let (comp, _) = graph::scc(&succ, Some(set));
    let members: Vec<usize> = (0..n).filter(|&v| set[v]).collect();
    members.iter().all(|&v| comp[v] == comp[members[0]])
}

/// Maximal vertex sets that are end components, by subset enumeration.
pub fn oracle_mecs(m: &Mdp) -> Vec<Vec<usize>> {
    let n = m.num_vertices();
    let mut ecs: Vec<u32> = Vec::new();
    for s in 1u32..1 << n {
        let set: Vec<bool> = (0..n).map(|v| s >> v & 1 == 1).collect();
        let mut edges = Vec::new();
        let mut ok = true;
        for v in (0..n).filter(|&v| set[v]) {
            let inside: Vec<usize> = m.out(v).iter().map(|&e| m.edge(e).dst).filter(|&w| set[w]).collect();
            if inside.is_empty() || (!m.is_controlled(v) && inside.len() != m.out(v).len()) {
                ok = false;
                break;
            }
            edges.extend(inside.into_iter().map(|w| (v, w)));
        }
        if ok && strongly_connected(n, &set, &edges) {
            ecs.push(s);
        }
    }
    let mut out: Vec<Vec<usize>> = ecs
        .iter()
        .filter(|&&s| !ecs.iter().any(|&t| t != s && s & t == s))
        .map(|&s| (0..n).filter(|&v| s >> v & 1 == 1).collect())
        .collect();
    out.sort();
    out
}

/// Union of the vertex sets of all end components (vertex set plus a choice
/// of internal controlled edges) whose color set is in the family.
pub fn oracle_winning_ec_union(m: &Mdp, accepts: impl Fn(ColorSet) -> bool) -> Vec<bool> {
    let n = m.num_vertices();
    let mut union = vec![false; n];
    for s in 1u32..1 << n {
        let set: Vec<bool> = (0..n).map(|v| s >> v & 1 == 1).collect();
        let members: Vec<usize> = (0..n).filter(|&v| set[v]).collect();
        if members.iter().any(|&v| !m.is_controlled(v) && m.out(v).iter().any(|&e| !set[m.edge(e).dst])) {
            continue;
        }
        let internal: Vec<Vec<usize>> = members
            .iter()
            .map(|&v| m.out(v).iter().copied().filter(|&e| set[m.edge(e).dst]).collect())
            .collect();
        if internal.iter().any(|es| es.is_empty()) {
            continue;
        }
        let radix: Vec<usize> = members
            .iter()
            .zip(&internal)
            .map(|(&v, es)| if m.is_controlled(v) { (1 << es.len()) - 1 } else { 1 })
            .collect();
        for_each_assignment(&radix, |pick| {
            let mut edges = Vec::new();
            let mut colors = ColorSet::EMPTY;
            for (k, (&v, es)) in members.iter().zip(&internal).enumerate() {
                for (i, &e) in es.iter().enumerate() {
                    if !m.is_controlled(v) || (pick[k] + 1) >> i & 1 == 1 {
                        edges.push((v, m.edge(e).dst));
                        if let Some(c) = m.edge(e).color {
                            colors.insert(c);
                        }
                    }
                }
            }
            if strongly_connected(n, &set, &edges) && accepts(colors) {
                for &v in &members {
                    union[v] = true;
                }
            }
        });
    }
    union
}

/// Almost-sure and positive winning by enumerating the supports of uniform
/// memoryless strategies; each chain is solved exactly.
pub fn oracle_supports(m: &Mdp, accepts: impl Fn(ColorSet) -> bool) -> (Vec<bool>, Vec<bool>) {
    let n = m.num_vertices();
    let radix: Vec<usize> =
        (0..n).map(|v| if m.is_controlled(v) { (1 << m.out(v).len()) - 1 } else { 1 }).collect();
    let mut sure = vec![false; n];
    let mut pos = vec![false; n];
    for_each_assignment(&radix, |pick| {
        let supp: Vec<usize> = pick.iter().map(|p| p + 1).collect();
        let chain = support_chain(m, &supp);
        let succ: Vec<Vec<usize>> = chain.iter().map(|s| s.iter().map(|t| t.0).collect()).collect();
        let (comp, k) = graph::scc(&succ, None);
        let mut bottom = vec![true; k];
        let mut colors = vec![ColorSet::EMPTY; k];
        for v in 0..n {
            for (w, _, c) in &chain[v] {
                if comp[*w] != comp[v] {
                    bottom[comp[v]] = false;
                } else if let Some(c) = c {
                    colors[comp[v]].insert(*c);
                }
            }
        }
        let good: Vec<bool> = (0..n).map(|v| bottom[comp[v]] && accepts(colors[comp[v]])).collect();
        let x = hit_probability(&chain, &good);
        for v in 0..n {
            sure[v] |= x[v].is_one();
            pos[v] |= !x[v].is_zero();
        }
    });
    (sure, pos)
}
