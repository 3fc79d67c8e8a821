use std::fmt::Write;

use omegares::classify::Pfa;
use omegares::rational::format_rat;

use super::{names, Document, ParseError};

/// `pfa`, `alphabet`, `states`, `initial`, optional `accepting <states>`,
/// and `p <src> <letter> <dst> <num>/<den>` lines.
pub fn parse_pfa(text: &str) -> Result<Pfa, ParseError> {
    let doc = Document::new(text);
    doc.only(&["pfa", "alphabet", "states", "initial", "accepting", "p"])?;
    doc.starts_with("pfa")?;
    doc.required("pfa")?.arity(0)?;
    let alphabet = doc.required("alphabet")?.at_least(1)?;
    let states = doc.required("states")?.at_least(1)?;
    let letter_ix = names(alphabet, "letter")?;
    let state_ix = names(states, "state")?;
    let initial = doc.required("initial")?.arity(1)?[0].lookup(&state_ix, "state")?;
    let mut accepting = vec![false; states.len()];
    if let Some(l) = doc.header("accepting")? {
        for t in &l.args {
            accepting[t.lookup(&state_ix, "state")?] = true;
        }
    }
    let mut ts = Vec::new();
    for l in doc.with("p") {
        let a = l.arity(4)?;
        ts.push((
            a[0].lookup(&state_ix, "state")?,
            a[1].lookup(&letter_ix, "letter")?,
            a[2].lookup(&state_ix, "state")?,
            a[3].rat()?,
        ));
    }
    let text = |ts: &[super::Token]| ts.iter().map(|t| t.text.to_string()).collect();
    Ok(Pfa::new(text(states), text(alphabet), initial, accepting, ts)?)
}

pub fn write_pfa(p: &Pfa) -> String {
    let (st, al) = (p.states(), p.alphabet());
    let acc: Vec<&str> = (0..st.len()).filter(|&q| p.is_accepting(q)).map(|q| st[q].as_str()).collect();
    let mut out = format!("pfa\nalphabet {}\nstates {}\ninitial {}\n", al.join(" "), st.join(" "), st[p.initial()]);
    if !acc.is_empty() {
        let _ = writeln!(out, "accepting {}", acc.join(" "));
    }
    for (s, l, d, r) in p.transitions() {
        let _ = writeln!(out, "p {} {} {} {}", st[*s], al[*l], st[*d], format_rat(r));
    }
    out
}
