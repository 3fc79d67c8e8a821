mod common;

use num_traits::{One, Zero};
use omegares::automaton::classify_acceptance;
use omegares::classify::*;
use omegares::gallery::{gallery, letters, GalleryParams};
use omegares::games::{is_history_deterministic, Player};
use omegares::lang::{equivalent, lasso_membership};
use omegares::mdp::{almost_sure_muller, positive_muller};
use omegares::prob::{lasso_acceptance_probability, monte_carlo_estimate};
use omegares::rational::{rat, to_f64};
use omegares::resolver::{resolver_product, ProbabilisticParityAutomaton, Resolver};
use omegares::zielonka::TieBreak;
use omegares::{AcceptanceClass, AutomatonBuilder, Error, LassoWord, Limits, ParityAutomaton, Rat};
use rand::Rng;

use common::games2d::*;
use common::{random_automaton, random_lasso, rng};

fn fixture(name: &str) -> ParityAutomaton {
    gallery(name, &GalleryParams::default()).unwrap()
}

fn limits() -> Limits {
    Limits::default()
}

/// On `a`, `q0` moves to a state accepting everything or to a rejecting sink.
fn universal_or_empty() -> ParityAutomaton {
    AutomatonBuilder::new("split")
        .alphabet(&["a", "b"])
        .bounds(1, 2)
        .initial("q0")
        .trans("q0", "a", 1, "top")
        .trans("q0", "a", 1, "bot")
        .trans("q0", "b", 1, "top")
        .trans_many("top", &["a", "b"], 2, "top")
        .trans_many("bot", &["a", "b"], 1, "bot")
        .build()
        .unwrap()
}

/// After `a`, `q0` guesses the next letter; both guesses are needed, so no
/// language-preserving pruning exists.
fn guess_next_letter() -> ParityAutomaton {
    AutomatonBuilder::new("guess")
        .alphabet(&["a", "b"])
        .bounds(0, 1)
        .initial("q0")
        .trans("q0", "a", 0, "qa")
        .trans("q0", "a", 0, "qb")
        .trans("q0", "b", 0, "q0")
        .trans("qa", "a", 0, "q0")
        .trans("qb", "b", 0, "q0")
        .complete_with_sink("bot")
        .build()
        .unwrap()
}

fn deterministic_safety() -> ParityAutomaton {
    AutomatonBuilder::new("det-safety")
        .alphabet(&["a", "b"])
        .bounds(0, 1)
        .initial("q0")
        .trans("q0", "a", 0, "q1")
        .trans("q0", "b", 0, "q0")
        .trans("q1", "a", 0, "q0")
        .complete_with_sink("bot")
        .build()
        .unwrap()
}

#[test]
fn semantic_determinism_examples() {
    let l = limits();
    assert!(is_semantically_deterministic(&fixture("fig3-cobuchi-sd"), &l).unwrap().semantically_deterministic);
    assert!(is_semantically_deterministic(&fixture("fig5-buchi-sd"), &l).unwrap().semantically_deterministic);
    let a = universal_or_empty();
    let v = is_semantically_deterministic(&a, &l).unwrap();
    assert!(!v.semantically_deterministic);
    let w = v.witness.unwrap();
    assert_eq!(w.state, a.initial());
    assert_eq!(a.alphabet()[w.letter], "a");
    let sep = w.separation.counterexample.unwrap();
    let (x, y) = w.successors;
    assert_ne!(
        lasso_membership(&a.with_initial(x), &sep).unwrap(),
        lasso_membership(&a.with_initial(y), &sep).unwrap()
    );
}

#[test]
fn pre_semantic_determinism_examples() {
    let l = limits();
    let a = fixture("fig3-cobuchi-sd");
    let v = is_pre_sd(&a, &l).unwrap();
    assert!(v.pre_sd);
    assert_eq!(v.certificate.unwrap(), a);
    assert!(is_pre_sd(&fixture("fig1a-reach"), &l).unwrap().pre_sd);
    let g = guess_next_letter();
    assert!(!is_semantically_deterministic(&g, &l).unwrap().semantically_deterministic);
    let v = is_pre_sd(&g, &l).unwrap();
    assert!(!v.pre_sd);
    assert_eq!(v.candidates_checked, 3);
    // Dropping the empty branch leaves an SD equivalent.
    let v = is_pre_sd(&universal_or_empty(), &l).unwrap();
    assert!(v.pre_sd);
    let cert = v.certificate.unwrap();
    assert!(cert.is_deterministic());
    assert!(equivalent(&cert, &universal_or_empty(), &l).unwrap().holds);
}

#[test]
fn ma_certificate_examples() {
    let l = limits();
    let d = deterministic_safety();
    assert!(check_ma_certificate(&d, &d, &l).unwrap());
    let b = fixture("fig1b-cobuchi");
    assert!(check_ma_certificate(&b, &b, &l).unwrap());
    let a = fixture("fig1a-reach");
    assert!(!check_ma_certificate(&a, &a, &l).unwrap());
    assert!(check_ma_certificate(&a, &d, &l).is_err());
}

#[test]
fn ma_search_examples() {
    let l = limits();
    let b = fixture("fig1b-cobuchi");
    let v = is_ma(&b, &l).unwrap();
    assert!(v.memoryless_adversarially_resolvable);
    assert_eq!(v.certificate.unwrap(), b);
    assert_eq!(v.candidates_checked, 1);
    assert!(!is_ma(&fixture("fig1a-reach"), &l).unwrap().memoryless_adversarially_resolvable);
    let mut r = rng(21);
    for _ in 0..20 {
        let d = random_automaton(&mut r, 3, 2, 0, 3, 1);
        assert!(is_ma(&d, &l).unwrap().memoryless_adversarially_resolvable);
    }
}

#[test]
fn subautomaton_search_respects_its_bound() {
    let l = Limits { max_subset_search: 2, ..Limits::default() };
    let mut r = rng(22);
    let a = random_automaton(&mut r, 4, 2, 0, 1, 3);
    let err = is_ma(&a, &l).err().or_else(|| is_pre_sd(&a, &l).err());
    assert!(matches!(err, Some(Error::ResourceLimit { .. })));
}

fn verdicts(r: &ClassificationReport) -> [Verdict; 6] {
    ResolverClass::ALL.map(|c| r.verdict(c))
}

#[test]
fn classify_fig1a() {
    let r = classify(&fixture("fig1a-reach"), &limits()).unwrap();
    use ResolverClass::*;
    use Verdict::*;
    assert_eq!(r.acceptance, AcceptanceClass::Reachability);
    for (c, v) in [(Hd, No), (Ma, No), (Sr, Yes), (Mr, Yes), (Sd, Yes), (PreSd, Yes)] {
        assert_eq!(r.verdict(c), v, "{c}");
    }
}

#[test]
fn classify_fig3_leaves_resolvability_open() {
    let r = classify(&fixture("fig3-cobuchi-sd"), &limits()).unwrap();
    assert_eq!(r.verdict(ResolverClass::Sd), Verdict::Yes);
    assert_eq!(r.verdict(ResolverClass::Sr), Verdict::Unknown);
    assert_eq!(r.verdict(ResolverClass::Mr), Verdict::Unknown);
    assert!(r.notes.iter().any(|(c, n)| *c == ResolverClass::Sr && n.contains("no decision procedure")));
    // The uniform resolver rejects (ab)^ω almost surely.
    assert!(r.evidence.uniform_failures.iter().all(|(_, p)| p < &Rat::one()));
    assert!(!r.evidence.uniform_failures.is_empty());
}

#[test]
fn classify_deterministic_safety() {
    let r = classify(&deterministic_safety(), &limits()).unwrap();
    assert_eq!(r.acceptance, AcceptanceClass::Safety);
    assert_eq!(verdicts(&r), [Verdict::Yes; 6]);
}

fn implication_lattice_holds(r: &ClassificationReport) -> bool {
    use ResolverClass::*;
    let yes = |c| r.verdict(c) == Verdict::Yes;
    let no = |c| r.verdict(c) == Verdict::No;
    [(Ma, Hd), (Ma, Mr), (Hd, Sr), (Mr, Sr), (Sr, PreSd), (Sd, PreSd)]
        .iter()
        .all(|&(s, b)| !(yes(s) && no(b)) && (!yes(s) || yes(b)))
}

#[test]
fn reports_respect_class_inclusions_and_dispatch_rules() {
    let l = limits();
    let mut r = rng(23);
    let mut by_class = std::collections::BTreeMap::new();
    for case in 0..120 {
        let (lo, hi) = [(0, 1), (1, 2), (0, 2)][case % 3];
        let states = r.gen_range(1..=3);
        let a = random_automaton(&mut r, states, 2, lo, hi, 2);
        let rep = classify(&a, &l).unwrap();
        *by_class.entry(rep.acceptance).or_insert(0) += 1;
        assert!(implication_lattice_holds(&rep), "{:?}", rep.verdicts);
        let hd = rep.verdict(ResolverClass::Hd);
        match rep.acceptance {
            AcceptanceClass::Safety => {
                for c in [ResolverClass::PreSd, ResolverClass::Ma, ResolverClass::Sr, ResolverClass::Mr] {
                    assert_eq!(rep.verdict(c), hd);
                }
                let ma = is_ma(&a, &l).unwrap().memoryless_adversarially_resolvable;
                assert_eq!(Verdict::from(ma), hd);
            }
            AcceptanceClass::Reachability | AcceptanceClass::Weak => {
                let ma = is_ma(&a, &l).unwrap().memoryless_adversarially_resolvable;
                assert_eq!(Verdict::from(ma), hd);
                assert_eq!(rep.verdict(ResolverClass::Ma), hd);
                let pre = rep.verdict(ResolverClass::PreSd);
                assert_eq!(Verdict::from(is_pre_sd(&a, &l).unwrap().pre_sd), pre);
                assert_eq!(rep.verdict(ResolverClass::Sr), pre);
                assert_eq!(rep.verdict(ResolverClass::Mr), pre);
            }
            _ => {
                if hd == Verdict::Yes {
                    assert_eq!(rep.verdict(ResolverClass::Sr), Verdict::Yes);
                }
            }
        }
    }
    assert!(by_class.len() >= 4, "{by_class:?}");
}

#[test]
fn ma_verdict_ignores_the_exact_probabilities() {
    let l = limits();
    let mut r = rng(24);
    let mut seen = [0; 2];
    for _ in 0..40 {
        let a = random_automaton(&mut r, 2, 2, 0, 2, 2);
        let (m, dag) = ma_certificate_mdp(&a, &a, &l).unwrap();
        let pos = positive_muller(&m, &dag, &l).unwrap();
        let (sure, _) = almost_sure_muller(&m, &dag, TieBreak::Lexicographic, &l).unwrap();
        for _ in 0..3 {
            let m2 = m.reweighted(|_| rat(r.gen_range(1..=9), 1)).unwrap();
            assert_eq!(positive_muller(&m2, &dag, &l).unwrap(), pos);
            assert_eq!(almost_sure_muller(&m2, &dag, TieBreak::Lexicographic, &l).unwrap().0, sure);
        }
        seen[pos[m.initial()] as usize] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

fn check_conversion(c: &ParityAutomaton, l: &Limits) -> SrConversion {
    let out = sr_cobuchi_to_ma(c, l).unwrap();
    assert!(out.automaton.num_states() <= c.num_states());
    assert!(equivalent(&out.automaton, c, l).unwrap().holds);
    assert!(check_ma_certificate(&out.automaton, &out.certificate, l).unwrap());
    assert_eq!(out.automaton.bounds(), (0, 1));
    out
}

#[test]
fn conversion_of_fixtures() {
    let l = limits();
    let h = check_conversion(&fixture("fig1b-cobuchi"), &l);
    assert!(h.automaton.num_states() <= 3);
    let h = check_conversion(&fixture("fig4-hd-cobuchi"), &l);
    assert!(h.automaton.num_states() <= 5);
}

#[test]
fn conversion_of_deterministic_automata_keeps_them() {
    let l = limits();
    let mut r = rng(25);
    for _ in 0..30 {
        let d = random_automaton(&mut r, 4, 2, 0, 1, 1);
        let d = omegares::automaton::priority_reduce(&d).unwrap();
        let out = check_conversion(&d, &l);
        let (reach, _) = d.restrict_reachable();
        assert!(out.automaton.num_states() <= reach.num_states());
    }
}

#[test]
fn conversion_of_history_deterministic_automata() {
    let l = limits();
    let mut r = rng(26);
    let mut converted = 0;
    let mut nondet = 0;
    while converted < 40 {
        let a = random_automaton(&mut r, 3, 2, 0, 1, 2);
        if !is_history_deterministic(&a, &l).unwrap().history_deterministic {
            continue;
        }
        let out = check_conversion(&a, &l);
        if !a.is_deterministic() {
            nondet += 1;
        }
        let mut rr = rng(converted);
        for _ in 0..20 {
            let w = random_lasso(&mut rr, 2, 3, 3);
            assert_eq!(lasso_membership(&out.automaton, &w).unwrap(), lasso_membership(&a, &w).unwrap());
        }
        converted += 1;
    }
    assert!(nondet >= 20, "{nondet}");
}

#[test]
fn conversion_rejects_non_cobuchi_input() {
    assert!(sr_cobuchi_to_ma(&fixture("fig5-buchi-sd"), &limits()).is_err());
}

// Hardness gadget.


#[test]
fn goodness_matches_closed_walk_search() {
    let l = limits();
    let mut r = rng(27);
    let mut good = 0;
    for _ in 0..200 {
        let g = random_game(&mut r);
        let expected = brute_force_good(&g);
        assert_eq!(g.is_good(&l).unwrap(), expected);
        good += expected as usize;
    }
    assert!(good >= 40);
}

#[test]
fn two_dimensional_winner_matches_positional_enumeration() {
    let l = limits();
    let mut r = rng(28);
    for _ in 0..200 {
        let g = random_game(&mut r);
        assert_eq!(g.winner(&l).unwrap(), brute_force_winner(&g));
    }
}


#[test]
fn hardness_gadget_examples() {
    let l = limits();
    let mut r = rng(31);
    let g = game(&[Player::Eve], &[(0, 0, 2, 2)]);
    assert_eq!(brute_force_winner(&g), Player::Eve);
    let inst = build_hardness_instance(&g, &l).unwrap();
    check_gadget_languages(&g, &inst, &mut r);
    assert!(is_ma(&inst.h, &l).unwrap().memoryless_adversarially_resolvable);

    // Not good: the (1,2) loop satisfies only the second condition.
    let g = game(&[Player::Eve], &[(0, 0, 2, 1), (0, 0, 1, 2)]);
    assert!(!g.is_good(&l).unwrap());
    assert!(matches!(build_hardness_instance(&g, &l), Err(Error::NotApplicable(_))));
    let inst = build_hardness_instance_unchecked(&g).unwrap();
    let w = play_word(&g, &inst.h, &inst.separator, &[], &[1]);
    assert!(lasso_membership(&inst.h, &w).unwrap() && !lasso_membership(&inst.d, &w).unwrap());
    // Eve wins the game itself by always taking the (1,2) loop.
    assert_eq!(g.winner(&l).unwrap(), Player::Eve);

    // Not good: Adam alone can force the (2,1) loop, which the gadget's
    // nondeterministic part rejects.
    let g = game(&[Player::Adam], &[(0, 0, 2, 1), (0, 0, 2, 2)]);
    assert!(!g.is_good(&l).unwrap());
    let inst = build_hardness_instance_unchecked(&g).unwrap();
    let w = play_word(&g, &inst.h, &inst.separator, &[], &[0]);
    assert!(!lasso_membership(&inst.h, &w).unwrap() && lasso_membership(&inst.d, &w).unwrap());

    // Eve must avoid the (2,1) loop at her vertex; she can.
    let g = game(&[Player::Adam, Player::Eve], &[(0, 1, 2, 2), (1, 0, 0, 0), (1, 1, 2, 1)]);
    assert!(g.is_good(&l).unwrap());
    assert_eq!(g.winner(&l).unwrap(), Player::Eve);
    let inst = build_hardness_instance(&g, &l).unwrap();
    check_gadget_languages(&g, &inst, &mut r);
    assert!(is_ma(&inst.h, &l).unwrap().memoryless_adversarially_resolvable);

    // Both of Eve's edges close a loop satisfying only the first condition.
    let g = game(&[Player::Adam, Player::Eve], &[(0, 1, 0, 0), (1, 0, 2, 1), (1, 0, 2, 1)]);
    assert!(g.is_good(&l).unwrap());
    assert_eq!(g.winner(&l).unwrap(), Player::Adam);
    let inst = build_hardness_instance(&g, &l).unwrap();
    check_gadget_languages(&g, &inst, &mut r);
    assert!(!is_ma(&inst.h, &l).unwrap().memoryless_adversarially_resolvable);
}

#[test]
fn hardness_gadget_is_ma_iff_eve_wins() {
    let l = limits();
    let mut r = rng(29);
    let mut wins = [0; 2];
    let mut tried = 0;
    while wins[0] < 10 || wins[1] < 10 {
        tried += 1;
        assert!(tried < 50_000, "{wins:?}");
        let g = random_game(&mut r);
        if !g.is_good(&l).unwrap() {
            continue;
        }
        let winner = brute_force_winner(&g);
        let inst = build_hardness_instance(&g, &l).unwrap();
        check_gadget_languages(&g, &inst, &mut r);
        let ma = is_ma(&inst.h, &l).unwrap().memoryless_adversarially_resolvable;
        assert_eq!(ma, winner == Player::Eve, "{g:?}");
        wins[(winner == Player::Adam) as usize] += 1;
    }
}

// Undecidability reductions.

fn fixed_word_pfa() -> Pfa {
    // Accepts `xy` with probability 3/4: after x, a 3/4 chance to stay on track.
    let q = |s: &str| s.to_string();
    Pfa::new(
        vec![q("p0"), q("p1"), q("p2"), q("dead")],
        vec![q("x"), q("y")],
        0,
        vec![false, false, true, false],
        vec![
            (0, 0, 1, rat(3, 4)),
            (0, 0, 3, rat(1, 4)),
            (0, 1, 3, rat(1, 1)),
            (1, 1, 2, rat(1, 1)),
            (1, 0, 3, rat(1, 1)),
            (2, 0, 3, rat(1, 1)),
            (2, 1, 3, rat(1, 1)),
            (3, 0, 3, rat(1, 1)),
            (3, 1, 3, rat(1, 1)),
        ],
    )
    .unwrap()
}

fn block_lasso(a: &ParityAutomaton, block: &[&str]) -> LassoWord {
    LassoWord::new(vec![], letters(a, block).unwrap()).unwrap()
}

#[test]
fn pfa_reduction_examples() {
    let p = fixed_word_pfa();
    assert_eq!(p.acceptance_probability(&[0, 1]).unwrap(), rat(3, 4));
    let red = pfa_to_buchi(&p).unwrap();
    assert_eq!(classify_acceptance(&red.automaton), AcceptanceClass::Buchi);
    let prod = resolver_product(&red.automaton, &red.resolver).unwrap();
    let v = lasso_acceptance_probability(&prod, &block_lasso(&red.automaton, &["x", "y", "$"])).unwrap();
    assert_eq!(v.value, Rat::one());
    let v = lasso_acceptance_probability(&prod, &block_lasso(&red.automaton, &["y", "x", "$"])).unwrap();
    assert_eq!(p.acceptance_probability(&[1, 0]).unwrap(), Rat::zero());
    assert_eq!(v.value, Rat::zero());

    let one = Pfa::new(vec!["p".into()], vec!["a".into()], 0, vec![true], vec![(0, 0, 0, rat(1, 1))]).unwrap();
    let red = pfa_to_buchi(&one).unwrap();
    let prod = resolver_product(&red.automaton, &red.resolver).unwrap();
    let w = block_lasso(&red.automaton, &["a", "$"]);
    assert!(lasso_membership(&red.automaton, &w).unwrap());
    assert_eq!(lasso_acceptance_probability(&prod, &w).unwrap().value, Rat::one());
}

#[test]
fn pfa_reduction_renames_a_colliding_separator() {
    let p = Pfa::new(vec!["p".into()], vec!["$".into()], 0, vec![true], vec![(0, 0, 0, rat(1, 1))]).unwrap();
    let red = pfa_to_buchi(&p).unwrap();
    assert_eq!(red.separator, "$0");
    assert_eq!(red.automaton.alphabet(), &["$".to_string(), "$0".to_string()]);
}

#[test]
fn pfa_validation() {
    let bad = Pfa::new(vec!["p".into()], vec!["a".into()], 0, vec![true], vec![(0, 0, 0, rat(1, 2))]);
    assert!(bad.is_err());
}

/// Probabilistic Buchi automaton over {x, y}: on `x` it moves to an
/// accepting loop with probability `c`, otherwise to a rejecting sink.
fn small_pba(c: Rat) -> ProbabilisticParityAutomaton {
    let a = AutomatonBuilder::new("pba")
        .alphabet(&["x", "y"])
        .bounds(1, 2)
        .initial("p")
        .trans("p", "x", 1, "acc")
        .trans("p", "x", 1, "rej")
        .trans("p", "y", 1, "p")
        .trans_many("acc", &["x", "y"], 2, "acc")
        .trans_many("rej", &["x", "y"], 1, "rej")
        .build()
        .unwrap();
    let acc = a.state_index("acc").unwrap();
    let r = Resolver::memoryless(&a, |q, l| {
        let ids: Vec<usize> = a.out_ids(q, l).collect();
        if ids.len() == 2 {
            ids.iter().map(|&t| (t, if a.transition(t).dst == acc { c.clone() } else { Rat::one() - &c })).collect()
        } else {
            vec![(ids[0], Rat::one())]
        }
    })
    .unwrap();
    resolver_product(&a, &r).unwrap()
}

fn reduction_value(p: &ProbabilisticParityAutomaton, w: &LassoWord, left: bool) -> (Rat, Rat) {
    let red = pba_to_cobuchi(p).unwrap();
    let c = &red.automaton;
    let prod = resolver_product(c, &red.resolver).unwrap();
    let d = c.letter_index(&red.dollar).unwrap();
    let side = c.letter_index(if left { &red.left } else { &red.right }).unwrap();
    let mut prefix = vec![d, side];
    prefix.extend(w.prefix());
    let lifted = LassoWord::new(prefix, w.period().to_vec()).unwrap();
    (lasso_acceptance_probability(&prod, &lifted).unwrap().value, lasso_acceptance_probability(p, w).unwrap().value)
}

#[test]
fn pba_reduction_halves_the_acceptance_probability() {
    let half = rat(1, 2);
    for c in [rat(0, 1), rat(1, 1), rat(1, 3), rat(5, 7)] {
        let p = small_pba(c.clone());
        let x = p.automaton().letter_index("x").unwrap();
        let y = p.automaton().letter_index("y").unwrap();
        for w in [LassoWord::new(vec![], vec![x, y]).unwrap(), LassoWord::new(vec![y], vec![y]).unwrap()] {
            for left in [true, false] {
                let (got, prob) = reduction_value(&p, &w, left);
                assert_eq!(got, Rat::one() - &prob * &half);
            }
        }
        let (got, _) = reduction_value(&p, &LassoWord::new(vec![], vec![x, y]).unwrap(), true);
        assert_eq!(got, Rat::one() - c * &half);
    }
}

#[test]
fn pba_reduction_on_random_automata() {
    let mut r = rng(30);
    let half = rat(1, 2);
    for _ in 0..60 {
        let a = random_automaton(&mut r, 3, 2, 1, 2, 2);
        let res = Resolver::memoryless(&a, |q, l| {
            let ids: Vec<usize> = a.out_ids(q, l).collect();
            let ws: Vec<i64> = ids.iter().map(|_| r.gen_range(1..=3)).collect();
            let s: i64 = ws.iter().sum();
            ids.into_iter().zip(ws).map(|(t, w)| (t, rat(w, s))).collect()
        })
        .unwrap();
        let p = resolver_product(&a, &res).unwrap();
        let w = random_lasso(&mut r, 2, 2, 3);
        let (got, prob) = reduction_value(&p, &w, r.gen_bool(0.5));
        assert_eq!(got, Rat::one() - prob * &half);
    }
}

#[test]
fn pba_reduction_monte_carlo_agrees() {
    let c = rat(2, 3);
    let p = small_pba(c.clone());
    let red = pba_to_cobuchi(&p).unwrap();
    let prod = resolver_product(&red.automaton, &red.resolver).unwrap();
    let ca = &red.automaton;
    let w = LassoWord::new(
        vec![ca.letter_index(&red.dollar).unwrap(), ca.letter_index(&red.left).unwrap()],
        vec![ca.letter_index("x").unwrap(), ca.letter_index("y").unwrap()],
    )
    .unwrap();
    let exact = Rat::one() - c / rat(2, 1);
    assert_eq!(lasso_acceptance_probability(&prod, &w).unwrap().value, exact);
    let e = monte_carlo_estimate(&prod, &w, 10_000, ca.num_states(), 7).unwrap();
    assert!((e.estimate - to_f64(&exact)).abs() <= e.radius, "{e:?}");
}

#[test]
fn pba_reduction_renames_colliding_letters() {
    let a = AutomatonBuilder::new("ab")
        .alphabet(&["a", "b", "$"])
        .bounds(1, 2)
        .initial("s")
        .trans_many("s", &["a", "b", "$"], 2, "s")
        .build()
        .unwrap();
    let p = resolver_product(&a, &omegares::resolver::uniform_resolver(&a)).unwrap();
    let red = pba_to_cobuchi(&p).unwrap();
    assert_eq!((red.dollar.as_str(), red.left.as_str(), red.right.as_str()), ("$0", "a0", "b0"));
    assert_eq!(red.automaton.states()[0], "s");
    assert!(red.automaton.states().iter().any(|s| s == "s1"));
}
