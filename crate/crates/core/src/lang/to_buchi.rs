use crate::automaton::{ParityAutomaton, Priority, State, Transition};
use crate::error::Result;

/// Translates a parity automaton into a language-equivalent Buchi automaton
/// with priorities in `[1,2]`.
///
/// One copy of the state space is kept per even priority `d`; the copy for `d`
/// keeps only transitions of priority at most `d` and marks those of priority
/// exactly `d` as accepting. Runs start in the copy of the largest even priority
/// when that priority is the maximum, otherwise in a non-accepting guessing copy,
/// and may jump once into a lower copy. Missing transitions go to a rejecting sink.
/// Automata already in `[1,2]` are returned unchanged.
pub fn parity_to_buchi(a: &ParityAutomaton) -> Result<ParityAutomaton> {
    let used = a.used_priorities();
    if a.bounds() == (1, 2) {
        return Ok(a.clone());
    }
    if a.bounds().0 == 1 && used.iter().all(|&p| p == 1 || p == 2) {
        let (reach, _) = a.restrict_reachable();
        return ParityAutomaton::new(
            a.name(),
            reach.alphabet().to_vec(),
            reach.states().to_vec(),
            reach.initial(),
            (1, 2),
            reach.transitions().to_vec(),
        );
    }
    let top = *used.iter().max().unwrap_or(&1);
    let evens: Vec<Priority> = used.iter().copied().filter(|p| p % 2 == 0).collect();
    let n = a.num_states();
    let guess = top % 2 == 1;
    // Copy layout: index 0 is the initial copy (guessing copy or the copy of `top`).
    let mut copies: Vec<Option<Priority>> = Vec::new();
    if guess {
        copies.push(None);
        copies.extend(evens.iter().rev().map(|&d| Some(d)));
    } else {
        copies.extend(evens.iter().rev().map(|&d| Some(d)));
    }
    let sink = copies.len() * n;
    let id = |c: usize, q: State| c * n + q;
    let mut names = Vec::with_capacity(sink + 1);
    for c in &copies {
        for q in a.states() {
            names.push(match c {
                None => q.clone(),
                Some(d) => format!("{q}@{d}"),
            });
        }
    }
    let mut ts = Vec::new();
    let mut need_sink = false;
    for (ci, c) in copies.iter().enumerate() {
        for q in 0..n {
            for l in 0..a.num_letters() {
                let mut any = false;
                for t in a.out(q, l) {
                    match c {
                        None => {
                            ts.push(Transition { src: id(ci, q), letter: l, priority: 1, dst: id(ci, t.dst) });
                            any = true;
                        }
                        Some(d) if t.priority <= *d => {
                            let p = if t.priority == *d { 2 } else { 1 };
                            ts.push(Transition { src: id(ci, q), letter: l, priority: p, dst: id(ci, t.dst) });
                            any = true;
                        }
                        Some(_) => {}
                    }
                    if ci == 0 {
                        for cj in 1..copies.len() {
                            ts.push(Transition { src: id(0, q), letter: l, priority: 1, dst: id(cj, t.dst) });
                            any = true;
                        }
                    }
                }
                if !any {
                    ts.push(Transition { src: id(ci, q), letter: l, priority: 1, dst: sink });
                    need_sink = true;
                }
            }
        }
    }
    if need_sink {
        let mut s = "sink".to_string();
        while names.contains(&s) {
            s.push('\'');
        }
        names.push(s);
        for l in 0..a.num_letters() {
            ts.push(Transition { src: sink, letter: l, priority: 1, dst: sink });
        }
    }
    let b = ParityAutomaton::new(
        format!("{}-buchi", a.name()),
        a.alphabet().to_vec(),
        names,
        id(0, a.initial()),
        (1, 2),
        ts,
    )?;
    Ok(b.restrict_reachable().0)
}

/// Upper bound on the number of states produced by [`parity_to_buchi`],
/// including the rejecting sink.
pub fn parity_to_buchi_bound(a: &ParityAutomaton) -> usize {
    let (i, j) = a.bounds();
    a.num_states() * ((j - i).div_ceil(2) as usize + 1) + 1
}
