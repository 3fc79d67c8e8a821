use std::collections::BTreeMap;

use omegares::classify::{Pfa, TwoDimEdge, TwoDimParityGame};
use omegares::gallery::{fig4_resolver, gallery, GalleryParams, GALLERY_NAMES};
use omegares::games::Player;
use omegares::mdp::{Mdp, MdpEdge, VertexKind};
use omegares::rational::rat;
use omegares::resolver::{resolver_product, uniform_resolver, Resolver};
use omegares::{AutomatonBuilder, LassoWord, ParityAutomaton};
use omegares_cli::doc::*;
use proptest::prelude::*;

fn fixtures() -> Vec<ParityAutomaton> {
    let mut out: Vec<ParityAutomaton> =
        GALLERY_NAMES.iter().map(|n| gallery(n, &GalleryParams::default()).unwrap()).collect();
    for n in 2..=5 {
        out.push(gallery("fig7-mr-buchi", &GalleryParams { n: Some(n), span: None }).unwrap());
    }
    for span in [(0, 3), (1, 4), (2, 5)] {
        out.push(gallery("parity-lang", &GalleryParams { n: None, span: Some(span) }).unwrap());
    }
    out
}

#[test]
fn every_fixture_round_trips() {
    for a in fixtures() {
        let text = write_automaton(&a);
        let back = parse_automaton(&text).unwrap();
        assert_eq!(back, AutomatonDocument::Plain(a.clone()), "{}", a.name());
        assert_eq!(back.write(), text);
    }
}

#[test]
fn probabilistic_documents_round_trip() {
    for a in fixtures() {
        let p = resolver_product(&a, &uniform_resolver(&a)).unwrap();
        let text = write_probabilistic(&p);
        assert!(text.lines().any(|l| l.starts_with("p ")));
        assert_eq!(parse_automaton(&text).unwrap(), AutomatonDocument::Probabilistic(p));
    }
}

/// Two memory states that swap on every transition; uniform moves.
fn flipping(a: &ParityAutomaton) -> Resolver {
    let u = uniform_resolver(a);
    let mut moves = BTreeMap::new();
    for (_, q, l, t, p) in u.move_table() {
        for m in 0..2 {
            moves.entry((m, q, l)).or_insert_with(Vec::new).push((t, p.clone()));
        }
    }
    let updates = (0..2).flat_map(|m| (0..a.transitions().len()).map(move |t| ((m, t), 1 - m))).collect();
    Resolver::new(a, vec!["even".into(), "odd".into()], 0, moves, updates).unwrap()
}

#[test]
fn resolvers_round_trip() {
    let fig4 = gallery("fig4-hd-cobuchi", &GalleryParams::default()).unwrap();
    let mut cases = vec![(fig4.clone(), fig4_resolver(&fig4, &rat(1, 3)).unwrap())];
    for a in fixtures() {
        cases.push((a.clone(), uniform_resolver(&a)));
        cases.push((a.clone(), flipping(&a)));
    }
    for (a, r) in cases {
        let text = write_resolver(&r, &a);
        assert_eq!(parse_resolver(&text, &a).unwrap(), r, "{}", a.name());
        assert_eq!(write_resolver(&parse_resolver(&text, &a).unwrap(), &a), text);
    }
}

#[test]
fn games_pfas_and_mdps_round_trip() {
    let g = TwoDimParityGame::new(
        vec![Player::Adam, Player::Eve],
        vec!["u".into(), "v".into()],
        vec![
            TwoDimEdge { src: 0, dst: 1, first: 2, second: 2 },
            TwoDimEdge { src: 1, dst: 0, first: 0, second: 0 },
            TwoDimEdge { src: 1, dst: 1, first: 2, second: 1 },
        ],
        0,
    )
    .unwrap();
    assert_eq!(parse_game(&write_game(&g)).unwrap(), g);

    let s = |x: &str| x.to_string();
    let pfa = Pfa::new(
        vec![s("p0"), s("p1")],
        vec![s("x")],
        0,
        vec![false, true],
        vec![(0, 0, 0, rat(1, 4)), (0, 0, 1, rat(3, 4)), (1, 0, 1, rat(1, 1))],
    )
    .unwrap();
    assert_eq!(parse_pfa(&write_pfa(&pfa)).unwrap(), pfa);

    let m = Mdp::new(
        vec![VertexKind::Controlled, VertexKind::Stochastic],
        vec![s("c"), s("r")],
        vec![
            MdpEdge { src: 0, dst: 1, color: Some(0), prob: None },
            MdpEdge { src: 0, dst: 0, color: Some(1), prob: None },
            MdpEdge { src: 1, dst: 0, color: None, prob: Some(rat(1, 3)) },
            MdpEdge { src: 1, dst: 1, color: Some(2), prob: Some(rat(2, 3)) },
        ],
        0,
    )
    .unwrap();
    assert_eq!(parse_mdp(&write_mdp(&m)).unwrap(), m);
}

const HEADER: &str = "automaton h\nalphabet a b\nstates q r\ninitial q\nbounds 1 2\n";

fn syntax(text: &str) -> (usize, usize, String) {
    match parse_automaton(text) {
        Err(ParseError::Syntax { line, column, message }) => (line, column, message),
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

#[test]
fn probabilities_not_summing_to_one_name_the_pair() {
    let doc = format!("{HEADER}p q a 1 q 1/2\np q a 1 r 1/3\np q b 1 q 1/1\np r a 2 r 1/1\np r b 2 r 1/1\n");
    let err = parse_automaton(&doc).unwrap_err();
    assert!(matches!(err, ParseError::Semantic(_)));
    let msg = err.to_string();
    assert!(msg.contains("`q`") && msg.contains("`a`") && msg.contains("5/6"), "{msg}");
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let (l, c, m) = syntax(&format!("{HEADER}t q a 1 q\nt q  c 1 q\n"));
    assert_eq!((l, c), (7, 6));
    assert!(m.contains("unknown letter `c`"));

    let (l, c, _) = syntax(&format!("{HEADER}t q a x q\n"));
    assert_eq!((l, c), (6, 7));

    let (l, c, m) = syntax(&format!("{HEADER}t q a 1 q\np q b 1 q 1/1\n"));
    assert_eq!((l, c), (7, 1));
    assert!(m.contains("mixed"));

    let (l, _, m) = syntax("automaton h\nalphabet a\nstates q\nbounds 1 2\n");
    assert_eq!(l, 5);
    assert!(m.contains("`initial`"));

    let (l, c, m) = syntax(&format!("{HEADER}u q a 1 q\n"));
    assert_eq!((l, c), (6, 1));
    assert!(m.contains("unknown keyword"));

    let (l, c, _) = syntax(&format!("{HEADER}t q a 1 q extra\n"));
    assert_eq!((l, c), (6, 11));
}

#[test]
fn incomplete_automata_are_semantic_errors() {
    let err = parse_automaton(&format!("{HEADER}t q a 1 q\n")).unwrap_err();
    assert!(matches!(err, ParseError::Semantic(_)));
    assert!(err.to_string().contains("incomplete"));
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let a = AutomatonBuilder::new("c").alphabet(&["a"]).bounds(0, 1).initial("q").trans("q", "a", 0, "q").build().unwrap();
    let doc = "# an automaton\nautomaton c   # name\n\nalphabet a\nstates q\ninitial q\nbounds 0 1\n  t q a 0 q # loop\n";
    assert_eq!(parse_automaton(doc).unwrap(), AutomatonDocument::Plain(a));
}

#[test]
fn resolver_documents_are_checked_against_the_automaton() {
    let a = gallery("fig1a-reach", &GalleryParams::default()).unwrap();
    let text = write_resolver(&uniform_resolver(&a), &a);
    let renamed = text.replacen("resolver fig1a-reach", "resolver other", 1);
    assert!(matches!(parse_resolver(&renamed, &a), Err(ParseError::Syntax { line: 1, column: 10, .. })));
    let bad_ref = text.replacen("q0:a:1:q_a", "q0:a:2:q_a", 1);
    assert!(matches!(parse_resolver(&bad_ref, &a), Err(ParseError::Syntax { .. })));
    let bad_sum = text.replacen("1/2", "1/3", 1);
    assert!(matches!(parse_resolver(&bad_sum, &a), Err(ParseError::Semantic(_))));
}

#[test]
fn empty_prefix_lasso() {
    let ab = vec!["a".to_string(), "b".to_string()];
    assert_eq!(parse_lasso("$ab", &ab).unwrap(), LassoWord::new(vec![], vec![0, 1]).unwrap());
}

fn arb_automaton() -> impl Strategy<Value = ParityAutomaton> {
    (1usize..5, 1usize..4, 0u32..2, 0u32..4, any::<u64>()).prop_map(|(n, k, lo, extra, seed)| {
        use rand::{Rng, SeedableRng};
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let hi = lo + extra;
        let letters: Vec<String> = (0..k).map(|i| format!("l{i}")).collect();
        let mut b = AutomatonBuilder::new("arb").alphabet(&letters).bounds(lo, hi).initial("s0");
        for q in 0..n {
            b = b.state(&format!("s{q}"));
            for l in &letters {
                for _ in 0..r.gen_range(1..=2) {
                    b = b.trans(&format!("s{q}"), l, r.gen_range(lo..=hi), &format!("s{}", r.gen_range(0..n)));
                }
            }
        }
        b.build().unwrap()
    })
}

proptest! {
    #[test]
    fn random_automata_round_trip(a in arb_automaton()) {
        let text = write_automaton(&a);
        prop_assert_eq!(parse_automaton(&text).unwrap(), AutomatonDocument::Plain(a.clone()));
        let p = resolver_product(&a, &uniform_resolver(&a)).unwrap();
        prop_assert_eq!(parse_automaton(&write_probabilistic(&p)).unwrap(), AutomatonDocument::Probabilistic(p));
    }

    #[test]
    fn random_lassos_round_trip(prefix in prop::collection::vec(0usize..3, 0..5), period in prop::collection::vec(0usize..3, 1..5), dollar in any::<bool>()) {
        let alphabet: Vec<String> =
            if dollar { vec!["$".into(), "x1".into(), "!".into()] } else { vec!["a".into(), "bb".into(), "c".into()] };
        let w = LassoWord::new(prefix, period).unwrap();
        prop_assert_eq!(parse_lasso(&write_lasso(&w, &alphabet), &alphabet).unwrap(), w);
    }
}
