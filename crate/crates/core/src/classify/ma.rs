use num_traits::One;

use super::Subautomata;
use crate::automaton::ParityAutomaton;
use crate::error::{Error, Result};
use crate::games::{build_two_token_game, Player};
use crate::limits::Limits;
use crate::mdp::{positive_muller, Mdp, MdpEdge, VertexKind};
use crate::rational::Rat;
use crate::zielonka::{zielonka_dag_by_max, ZielonkaDag};

fn check_subautomaton(a: &ParityAutomaton, b: &ParityAutomaton) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidAutomaton(m));
    if a.states() != b.states() || a.alphabet() != b.alphabet() || a.initial() != b.initial() {
        return bad("a certificate must share states, alphabet and initial state with the automaton".into());
    }
    if let Some(t) = b.transitions().iter().find(|t| a.transition_id(t).is_none()) {
        return bad(format!("certificate transition {} is not in the automaton", b.describe(t)));
    }
    Ok(())
}

/// The 2-token game G2(b; a) with Eve's vertices made uniformly random, and
/// Adam's objective: Eve's run rejects while one of his runs accepts.
pub fn ma_certificate_mdp(a: &ParityAutomaton, b: &ParityAutomaton, limits: &Limits) -> Result<(Mdp, ZielonkaDag)> {
    check_subautomaton(a, b)?;
    let g = build_two_token_game(b, a, limits)?;
    let arena = &g.arena;
    let kind: Vec<VertexKind> = (0..arena.num_vertices())
        .map(|v| match arena.owner(v) {
            Player::Eve => VertexKind::Stochastic,
            Player::Adam => VertexKind::Controlled,
        })
        .collect();
    let edges = arena
        .edges()
        .iter()
        .map(|e| {
            let prob = (kind[e.src] == VertexKind::Stochastic)
                .then(|| Rat::one() / Rat::from_integer(arena.out(e.src).len().into()));
            MdpEdge { src: e.src, dst: e.dst, color: e.color, prob }
        })
        .collect();
    let m = Mdp::new(kind, arena.labels().to_vec(), edges, arena.initial())?;
    let dag = zielonka_dag_by_max(&g.coords, |v| v[0] % 2 == 1 && (v[1] % 2 == 0 || v[2] % 2 == 0), limits)?;
    Ok((m, dag))
}

/// Whether resolving `a` uniformly at random among the transitions kept in
/// `b` wins against every adversary: Adam cannot, with positive probability,
/// make one of his two tokens accept while the random run rejects.
pub fn check_ma_certificate(a: &ParityAutomaton, b: &ParityAutomaton, limits: &Limits) -> Result<bool> {
    let (m, dag) = ma_certificate_mdp(a, b, limits)?;
    Ok(!positive_muller(&m, &dag, limits)?[m.initial()])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaVerdict {
    pub memoryless_adversarially_resolvable: bool,
    /// The subautomaton whose uniform resolver is almost-surely accepting.
    pub certificate: Option<ParityAutomaton>,
    pub candidates_checked: usize,
}

/// Searches subautomata, the full automaton first, for one passing
/// [`check_ma_certificate`].
pub fn is_ma(a: &ParityAutomaton, limits: &Limits) -> Result<MaVerdict> {
    let mut checked = 0;
    for b in Subautomata::new(a, limits)? {
        limits.tick()?;
        let b = b?;
        checked += 1;
        if check_ma_certificate(a, &b, limits)? {
            return Ok(MaVerdict { memoryless_adversarially_resolvable: true, certificate: Some(b), candidates_checked: checked });
        }
    }
    Ok(MaVerdict { memoryless_adversarially_resolvable: false, certificate: None, candidates_checked: checked })
}
