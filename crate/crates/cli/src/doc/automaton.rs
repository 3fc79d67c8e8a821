use std::fmt::Write;

use omegares::rational::format_rat;
use omegares::resolver::ProbabilisticParityAutomaton;
use omegares::{ParityAutomaton, Rat, Transition};

use super::{names, Document, Line, ParseError};

/// An automaton document: plain (`t` lines) or probabilistic (`p` lines).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutomatonDocument {
    Plain(ParityAutomaton),
    Probabilistic(ProbabilisticParityAutomaton),
}

impl AutomatonDocument {
    pub fn automaton(&self) -> &ParityAutomaton {
        match self {
            AutomatonDocument::Plain(a) => a,
            AutomatonDocument::Probabilistic(p) => p.automaton(),
        }
    }

    pub fn write(&self) -> String {
        match self {
            AutomatonDocument::Plain(a) => write_automaton(a),
            AutomatonDocument::Probabilistic(p) => write_probabilistic(p),
        }
    }
}

const KEYWORDS: [&str; 7] = ["automaton", "alphabet", "states", "initial", "bounds", "t", "p"];

pub fn parse_automaton(text: &str) -> Result<AutomatonDocument, ParseError> {
    let doc = Document::new(text);
    doc.only(&KEYWORDS)?;
    doc.starts_with("automaton")?;
    let name = doc.required("automaton")?.arity(1)?[0].text;
    let alphabet = doc.required("alphabet")?.at_least(1)?;
    let states = doc.required("states")?.at_least(1)?;
    let letter_ix = names(alphabet, "letter")?;
    let state_ix = names(states, "state")?;
    let initial = doc.required("initial")?.arity(1)?[0].lookup(&state_ix, "state")?;
    let b = doc.required("bounds")?.arity(2)?;
    let bounds = (b[0].number("a priority")?, b[1].number("a priority")?);

    let plain: Vec<&Line> = doc.with("t").collect();
    let weighted: Vec<&Line> = doc.with("p").collect();
    if let (Some(_), Some(p)) = (plain.first(), weighted.first()) {
        return Err(p.keyword.err("`t` and `p` lines cannot be mixed"));
    }
    let transition = |l: &Line, arity: usize| -> Result<Transition, ParseError> {
        let a = l.arity(arity)?;
        Ok(Transition {
            src: a[0].lookup(&state_ix, "state")?,
            letter: a[1].lookup(&letter_ix, "letter")?,
            priority: a[2].number("a priority")?,
            dst: a[3].lookup(&state_ix, "state")?,
        })
    };
    let text_of = |ts: &[super::Token]| ts.iter().map(|t| t.text.to_string()).collect::<Vec<_>>();

    if weighted.is_empty() {
        let ts = plain.iter().map(|l| transition(l, 4)).collect::<Result<Vec<_>, _>>()?;
        let a = ParityAutomaton::new(name, text_of(alphabet), text_of(states), initial, bounds, ts)?;
        return Ok(AutomatonDocument::Plain(a));
    }
    let mut ts = Vec::new();
    for l in &weighted {
        let t = transition(l, 5)?;
        if ts.iter().any(|(u, _, _)| *u == t) {
            return Err(l.keyword.err("duplicate transition"));
        }
        ts.push((t, l.args[4].rat()?, l));
    }
    let a = ParityAutomaton::new(name, text_of(alphabet), text_of(states), initial, bounds, ts.iter().map(|x| x.0).collect())?;
    let mut probs = vec![Rat::default(); a.transitions().len()];
    for (t, p, _) in ts {
        probs[a.transition_id(&t).expect("transition was just added")] = p;
    }
    Ok(AutomatonDocument::Probabilistic(ProbabilisticParityAutomaton::new(a, probs)?))
}

fn header(a: &ParityAutomaton) -> String {
    let (lo, hi) = a.bounds();
    format!(
        "automaton {}\nalphabet {}\nstates {}\ninitial {}\nbounds {lo} {hi}\n",
        a.name(),
        a.alphabet().join(" "),
        a.states().join(" "),
        a.states()[a.initial()]
    )
}

/// Canonical form: headers in fixed order, transitions in sorted order.
pub fn write_automaton(a: &ParityAutomaton) -> String {
    let mut out = header(a);
    for t in a.transitions() {
        let _ = writeln!(out, "t {} {} {} {}", a.states()[t.src], a.alphabet()[t.letter], t.priority, a.states()[t.dst]);
    }
    out
}

pub fn write_probabilistic(p: &ProbabilisticParityAutomaton) -> String {
    let a = p.automaton();
    let mut out = header(a);
    for (i, t) in a.transitions().iter().enumerate() {
        let _ = writeln!(
            out,
            "p {} {} {} {} {}",
            a.states()[t.src],
            a.alphabet()[t.letter],
            t.priority,
            a.states()[t.dst],
            format_rat(p.prob(i))
        );
    }
    out
}
