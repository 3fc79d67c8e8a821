use std::collections::BTreeMap;
use std::fmt::Write;

use omegares::rational::format_rat;
use omegares::resolver::Resolver;
use omegares::{ParityAutomaton, Transition, TransitionId};

use super::{names, Document, ParseError, Token};

/// `src:letter:priority:dst`
fn transition_ref(a: &ParityAutomaton, t: &Transition) -> String {
    format!("{}:{}:{}:{}", a.states()[t.src], a.alphabet()[t.letter], t.priority, a.states()[t.dst])
}

fn parse_ref(a: &ParityAutomaton, tok: &Token) -> Result<TransitionId, ParseError> {
    let parts: Vec<&str> = tok.text.split(':').collect();
    let [src, letter, prio, dst] = parts[..] else {
        return Err(tok.err(format!("expected src:letter:priority:dst, found `{}`", tok.text)));
    };
    let t = (|| {
        Some(Transition {
            src: a.state_index(src)?,
            letter: a.letter_index(letter)?,
            priority: prio.parse().ok()?,
            dst: a.state_index(dst)?,
        })
    })();
    t.and_then(|t| a.transition_id(&t)).ok_or_else(|| tok.err(format!("no transition `{}` in `{}`", tok.text, a.name())))
}

/// Parses a resolver for `a`. An omitted `update` keeps the memory unchanged.
pub fn parse_resolver(text: &str, a: &ParityAutomaton) -> Result<Resolver, ParseError> {
    let doc = Document::new(text);
    doc.only(&["resolver", "memory", "init", "move", "update"])?;
    doc.starts_with("resolver")?;
    let target = doc.required("resolver")?.arity(1)?[0];
    if target.text != a.name() {
        return Err(target.err(format!("resolver is for `{}`, not for `{}`", target.text, a.name())));
    }
    let memory = doc.required("memory")?.at_least(1)?;
    let mem_ix = names(memory, "memory state")?;
    let initial = doc.required("init")?.arity(1)?[0].lookup(&mem_ix, "memory state")?;

    let mut moves: BTreeMap<_, Vec<_>> = BTreeMap::new();
    for l in doc.with("move") {
        let args = l.arity(5)?;
        let m = args[0].lookup(&mem_ix, "memory state")?;
        let q = a.state_index(args[1].text).ok_or_else(|| args[1].err(format!("unknown state `{}`", args[1].text)))?;
        let c = a.letter_index(args[2].text).ok_or_else(|| args[2].err(format!("unknown letter `{}`", args[2].text)))?;
        let t = parse_ref(a, &args[3])?;
        let tr = a.transition(t);
        if (tr.src, tr.letter) != (q, c) {
            return Err(args[3].err("transition does not leave the given state on the given letter"));
        }
        let dist = moves.entry((m, q, c)).or_default();
        if dist.iter().any(|(u, _)| *u == t) {
            return Err(l.keyword.err("duplicate move"));
        }
        dist.push((t, args[4].rat()?));
    }
    let mut updates = BTreeMap::new();
    for l in doc.with("update") {
        let args = l.arity(3)?;
        let m = args[0].lookup(&mem_ix, "memory state")?;
        let t = parse_ref(a, &args[1])?;
        let next = args[2].lookup(&mem_ix, "memory state")?;
        if updates.insert((m, t), next).is_some() {
            return Err(l.keyword.err("duplicate update"));
        }
    }
    for m in 0..memory.len() {
        for t in 0..a.transitions().len() {
            updates.entry((m, t)).or_insert(m);
        }
    }
    let memory = memory.iter().map(|t| t.text.to_string()).collect();
    Ok(Resolver::new(a, memory, initial, moves, updates)?)
}

/// Canonical form: moves in table order, only updates that change the memory.
pub fn write_resolver(r: &Resolver, a: &ParityAutomaton) -> String {
    let mem = r.memory();
    let mut out = format!("resolver {}\nmemory {}\ninit {}\n", a.name(), mem.join(" "), mem[r.initial()]);
    for (m, q, l, t, p) in r.move_table() {
        let tr = a.transition(t);
        let _ = writeln!(
            out,
            "move {} {} {} {} {}",
            mem[m],
            a.states()[q],
            a.alphabet()[l],
            transition_ref(a, &tr),
            format_rat(&p)
        );
    }
    for m in 0..mem.len() {
        for (t, tr) in a.transitions().iter().enumerate() {
            let next = r.update(m, t);
            if next != m {
                let _ = writeln!(out, "update {} {} {}", mem[m], transition_ref(a, tr), mem[next]);
            }
        }
    }
    out
}
