//! Named example automata used throughout the tests and the command line.

use std::collections::BTreeMap;

use crate::automaton::{AutomatonBuilder, ParityAutomaton, Priority};
use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::resolver::Resolver;

pub const GALLERY_NAMES: &[&str] = &[
    "fig1a-reach",
    "fig1b-cobuchi",
    "fig3-cobuchi-sd",
    "fig4-hd-cobuchi",
    "fig5-buchi-sd",
    "fig6-hd-buchi",
    "fig7-mr-buchi",
    "parity-lang",
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GalleryParams {
    /// Alphabet size of `fig7-mr-buchi` (default 2).
    pub n: Option<usize>,
    /// Priority span of `parity-lang` (default `[1,2]`).
    pub span: Option<(Priority, Priority)>,
}

pub fn gallery(name: &str, params: &GalleryParams) -> Result<ParityAutomaton> {
    match name {
        "fig1a-reach" => fig1a(),
        "fig1b-cobuchi" => fig1b(),
        "fig3-cobuchi-sd" => fig3(),
        "fig4-hd-cobuchi" => fig4(),
        "fig5-buchi-sd" => fig5(),
        "fig6-hd-buchi" => fig6(),
        "fig7-mr-buchi" => fig7(params.n.unwrap_or(2)),
        "parity-lang" => {
            let (lo, hi) = params.span.unwrap_or((1, 2));
            parity_language(lo, hi)
        }
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

/// Reachability automaton for "aa or bb occurs"; it guesses the next letter.
fn fig1a() -> Result<ParityAutomaton> {
    AutomatonBuilder::new("fig1a-reach")
        .alphabet(&["a", "b"])
        .bounds(1, 2)
        .initial("q0")
        .trans_many("q0", &["a", "b"], 1, "q_a")
        .trans_many("q0", &["a", "b"], 1, "q_b")
        .trans("q_a", "b", 1, "q0")
        .trans("q_a", "a", 1, "q_f")
        .trans("q_b", "a", 1, "q0")
        .trans("q_b", "b", 1, "q_f")
        .trans_many("q_f", &["a", "b"], 2, "q_f")
        .build()
}

/// coBuchi automaton for "the two-lane graph has an infinite path".
fn fig1b() -> Result<ParityAutomaton> {
    AutomatonBuilder::new("fig1b-cobuchi")
        .alphabet(&["swap", "same", "up", "down"])
        .bounds(0, 1)
        .initial("s")
        .trans("s", "swap", 0, "s")
        .trans_many("s", &["same", "up"], 0, "s_top")
        .trans_many("s", &["same", "down"], 0, "s_bot")
        .trans_many("s_top", &["same", "up"], 0, "s_top")
        .trans("s_top", "swap", 0, "s_bot")
        .trans("s_top", "down", 1, "s")
        .trans_many("s_bot", &["same", "down"], 0, "s_bot")
        .trans("s_bot", "swap", 0, "s_top")
        .trans("s_bot", "up", 1, "s")
        .build()
}

/// Semantically deterministic coBuchi automaton that is not semantically resolvable.
fn fig3() -> Result<ParityAutomaton> {
    AutomatonBuilder::new("fig3-cobuchi-sd")
        .alphabet(&["a", "b"])
        .bounds(0, 1)
        .initial("q0")
        .trans_many("q0", &["a", "b"], 0, "q_a")
        .trans_many("q0", &["a", "b"], 0, "q_b")
        .trans("q_a", "a", 0, "q0")
        .trans("q_a", "b", 1, "q0")
        .trans("q_b", "b", 0, "q0")
        .trans("q_b", "a", 1, "q0")
        .build()
}

/// History-deterministic coBuchi automaton on which no finite-memory resolver is
/// almost-surely accepting.
fn fig4() -> Result<ParityAutomaton> {
    AutomatonBuilder::new("fig4-hd-cobuchi")
        .alphabet(&["x", "a", "b"])
        .bounds(0, 1)
        .initial("q0")
        .trans("q0", "x", 0, "q1")
        .trans("q0", "x", 0, "q0")
        .trans("q0", "b", 1, "q0")
        .trans("q0", "a", 0, "d1")
        .trans("q1", "a", 1, "q0")
        .trans("q1", "x", 0, "q1")
        .trans("q1", "b", 0, "d2")
        .trans_many("d1", &["x", "a"], 0, "d1")
        .trans("d1", "b", 1, "d2")
        .trans("d2", "b", 1, "d2")
        .trans("d2", "a", 1, "d1")
        .trans("d2", "x", 0, "d3")
        .trans("d3", "b", 0, "d2")
        .trans("d3", "x", 0, "d3")
        .trans("d3", "a", 1, "d1")
        .build()
}

/// The memoryless resolver of `fig4-hd-cobuchi` moving from `q0` to `q1` on `x`
/// with probability `mu` and uniform elsewhere.
pub fn fig4_resolver(a: &ParityAutomaton, mu: &Rat) -> Result<Resolver> {
    let q0 = a.state_index("q0").ok_or_else(|| Error::UnknownFixture("q0".into()))?;
    let q1 = a.state_index("q1").ok_or_else(|| Error::UnknownFixture("q1".into()))?;
    let x = a.letter_index("x").ok_or_else(|| Error::UnknownFixture("x".into()))?;
    Resolver::memoryless(a, |q, l| {
        let ids: Vec<_> = a.out_ids(q, l).collect();
        if q == q0 && l == x {
            ids.iter()
                .map(|&t| {
                    let w = if a.transition(t).dst == q1 { mu.clone() } else { Rat::from_integer(1.into()) - mu };
                    (t, w)
                })
                .collect()
        } else {
            let w = Rat::new(1.into(), (ids.len() as i64).into());
            ids.iter().map(|&t| (t, w.clone())).collect()
        }
    })
}

/// Semantically deterministic Buchi automaton on which the uniform resolver sees
/// an accepting transition with probability 1/2^(n+1) per block `Y^n Z`.
fn fig5() -> Result<ParityAutomaton> {
    AutomatonBuilder::new("fig5-buchi-sd")
        .alphabet(&["x", "a", "b", "y", "z"])
        .bounds(1, 2)
        .initial("q0")
        .trans("q0", "x", 1, "q_a")
        .trans("q0", "x", 1, "q_b")
        .trans("q_a", "a", 1, "q_m")
        .trans("q_b", "b", 1, "q_m")
        .trans("q_a", "b", 1, "l1")
        .trans("q_b", "a", 1, "l1")
        .trans("q_m", "z", 2, "q0")
        .trans("q_m", "y", 1, "q0")
        .trans("l1", "y", 1, "l2")
        .trans("l2", "x", 1, "l3")
        .trans_many("l3", &["a", "b"], 1, "l1")
        .trans("l1", "z", 1, "q0")
        .complete_with_sink("sink")
        .build()
}

fn fig6_part(b: AutomatonBuilder, p: &str, other: &str, red: bool) -> AutomatonBuilder {
    let root = format!("q_{p}");
    let oroot = format!("q_{other}");
    let s = |i: u32| format!("{}{i}", p.to_lowercase());
    let (s1, s2, s3, s4) = (s(1), s(2), s(3), s(4));
    let (near_prio, near_dst, far_prio, far_dst) =
        if red { (2, &root, 1, &oroot) } else { (1, &oroot, 2, &root) };
    b.trans_many(&root, &["b", "d"], 1, &root)
        .trans(&root, "a", 1, &s3)
        .trans(&root, "c", 1, &s1)
        .trans(&s1, "c", 1, &s1)
        .trans(&s1, "a", 1, &s3)
        .trans(&s1, "b", 1, &root)
        .trans(&s3, "a", 1, &s3)
        .trans(&s3, "d", 1, &root)
        .trans(&s3, "c", 1, &s2)
        .trans(&s3, "b", 1, &s4)
        .trans(&s2, "c", 1, &s2)
        .trans(&s2, "a", 1, &s3)
        .trans(&s2, "b", 1, &s4)
        .trans(&s4, "b", 1, &s4)
        .trans(&s4, "a", 1, &s3)
        .trans(&s4, "c", 1, &s2)
        .trans(&s1, "d", near_prio, near_dst)
        .trans(&s2, "d", near_prio, near_dst)
        .trans(&s4, "d", far_prio, far_dst)
}

/// History-deterministic Buchi automaton whose only almost-surely accepting
/// resolvers need memory. The letter `d` separates blocks.
fn fig6() -> Result<ParityAutomaton> {
    let b = AutomatonBuilder::new("fig6-hd-buchi")
        .alphabet(&["a", "b", "c", "d"])
        .bounds(1, 2)
        .initial("q0")
        .trans_many("q0", &["a", "b", "d"], 1, "q0")
        .trans("q0", "a", 1, "q3")
        .trans("q0", "c", 1, "q1")
        .trans_many("q1", &["a", "b"], 1, "q0")
        // q1 guesses on `a` like q0, so blocks such as `cabd` reach q_B.
        .trans("q1", "a", 1, "q3")
        .trans("q1", "c", 1, "q1")
        .trans("q1", "d", 1, "q_R")
        .trans_many("q3", &["a", "c"], 1, "q3")
        .trans("q3", "d", 1, "q0")
        .trans("q3", "b", 1, "q2")
        .trans("q2", "b", 1, "q2")
        .trans_many("q2", &["a", "c"], 1, "q3")
        .trans("q2", "d", 1, "q_B");
    let b = fig6_part(b, "R", "B", true);
    let b = fig6_part(b, "B", "R", false);
    b.build()
}

/// Memoryless-resolvable Buchi automaton with `3n+3` states over `{1..n, $, !}`.
fn fig7(n: usize) -> Result<ParityAutomaton> {
    if n < 2 {
        return Err(Error::InvalidAutomaton("fig7-mr-buchi needs n >= 2".into()));
    }
    let digits: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut alphabet = digits.clone();
    alphabet.push("$".into());
    alphabet.push("!".into());
    let mut b = AutomatonBuilder::new(format!("fig7-mr-buchi-{n}"))
        .alphabet(&alphabet)
        .bounds(1, 2)
        .initial("q0")
        .state("r");
    for i in 1..=n {
        let (s, m, f) = (format!("s{i}"), format!("m{i}"), format!("f{i}"));
        b = b.trans("q0", "$", 1, &s);
        for d in &digits {
            let j: usize = d.parse().unwrap();
            b = b.trans(&s, d, 1, if j == i { &m } else { &s });
            b = b.trans(&m, d, 1, &m);
            b = b.trans(&f, d, if j == i { 2 } else { 1 }, "q0");
        }
        b = b.trans(&s, "!", 1, "r").trans(&m, "!", 1, &f);
    }
    for d in &digits {
        b = b.trans("r", d, 1, "q0");
    }
    b.complete_with_sink("sink").build()
}

/// One state over letters `lo..=hi`; letter `c` carries priority `c`.
pub fn parity_language(lo: Priority, hi: Priority) -> Result<ParityAutomaton> {
    if lo > hi {
        return Err(Error::InvalidAutomaton("empty priority span".into()));
    }
    let letters: Vec<String> = (lo..=hi).map(|c| c.to_string()).collect();
    let mut b = AutomatonBuilder::new(format!("parity-lang-{lo}-{hi}"))
        .alphabet(&letters)
        .bounds(if lo <= 1 { lo } else { lo % 2 }, hi.max(1))
        .initial("q");
    for c in lo..=hi {
        b = b.trans("q", &c.to_string(), c, "q");
    }
    b.build()
}

/// Letters by name for convenience in tests.
pub fn letters(a: &ParityAutomaton, names: &[&str]) -> Result<Vec<usize>> {
    let map: BTreeMap<&str, usize> = a.alphabet().iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    names
        .iter()
        .map(|n| map.get(n).copied().ok_or_else(|| Error::AlphabetMismatch(format!("no letter `{n}`"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{classify_acceptance, AcceptanceClass};

    #[test]
    fn fixtures_build_with_expected_classes() {
        let p = GalleryParams::default();
        let expect = [
            ("fig1a-reach", AcceptanceClass::Reachability, 4),
            ("fig1b-cobuchi", AcceptanceClass::CoBuchi, 3),
            ("fig3-cobuchi-sd", AcceptanceClass::CoBuchi, 3),
            ("fig4-hd-cobuchi", AcceptanceClass::CoBuchi, 5),
            ("fig5-buchi-sd", AcceptanceClass::Buchi, 8),
            ("fig6-hd-buchi", AcceptanceClass::Buchi, 14),
            ("fig7-mr-buchi", AcceptanceClass::Buchi, 9),
            ("parity-lang", AcceptanceClass::Buchi, 1),
        ];
        for (name, class, states) in expect {
            let a = gallery(name, &p).unwrap();
            assert_eq!(classify_acceptance(&a), class, "{name}");
            assert_eq!(a.num_states(), states, "{name}");
        }
        assert!(matches!(gallery("nope", &p), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn fig7_state_count() {
        for n in 2..=6 {
            let a = gallery("fig7-mr-buchi", &GalleryParams { n: Some(n), span: None }).unwrap();
            assert_eq!(a.num_states(), 3 * n + 3);
        }
        assert!(gallery("fig7-mr-buchi", &GalleryParams { n: Some(1), span: None }).is_err());
    }

    #[test]
    fn fig4_resolver_weights() {
        let a = gallery("fig4-hd-cobuchi", &GalleryParams::default()).unwrap();
        let r = fig4_resolver(&a, &crate::rational::rat(1, 3)).unwrap();
        let q0 = a.state_index("q0").unwrap();
        let x = a.letter_index("x").unwrap();
        let total: Rat = r.next_move(0, q0, x).iter().map(|(_, p)| p.clone()).sum();
        assert_eq!(total, crate::rational::rat(1, 1));
    }
}
