use std::fmt::Write;

use omegares::classify::{TwoDimEdge, TwoDimParityGame};
use omegares::games::Player;

use super::{names, Document, ParseError};

/// `game`, then `vertex <name> eve|adam` lines, `initial <name>` and
/// `e <src> <dst> <first> <second>` edges.
pub fn parse_game(text: &str) -> Result<TwoDimParityGame, ParseError> {
    let doc = Document::new(text);
    doc.only(&["game", "vertex", "initial", "e"])?;
    doc.starts_with("game")?;
    doc.required("game")?.arity(0)?;
    let mut labels = Vec::new();
    let mut owners = Vec::new();
    for l in doc.with("vertex") {
        let a = l.arity(2)?;
        labels.push(a[0]);
        owners.push(match a[1].text {
            "eve" => Player::Eve,
            "adam" => Player::Adam,
            other => return Err(a[1].err(format!("expected `eve` or `adam`, found `{other}`"))),
        });
    }
    let ix = names(&labels, "vertex")?;
    let initial = doc.required("initial")?.arity(1)?[0].lookup(&ix, "vertex")?;
    let mut edges = Vec::new();
    for l in doc.with("e") {
        let a = l.arity(4)?;
        edges.push(TwoDimEdge {
            src: a[0].lookup(&ix, "vertex")?,
            dst: a[1].lookup(&ix, "vertex")?,
            first: a[2].number("a priority")?,
            second: a[3].number("a priority")?,
        });
    }
    let labels = labels.iter().map(|t| t.text.to_string()).collect();
    Ok(TwoDimParityGame::new(owners, labels, edges, initial)?)
}

pub fn write_game(g: &TwoDimParityGame) -> String {
    let mut out = String::from("game\n");
    let lab = g.labels();
    for v in 0..g.num_vertices() {
        let owner = if g.owner(v) == Player::Eve { "eve" } else { "adam" };
        let _ = writeln!(out, "vertex {} {owner}", lab[v]);
    }
    let _ = writeln!(out, "initial {}", lab[g.initial()]);
    for e in g.edges() {
        let _ = writeln!(out, "e {} {} {} {}", lab[e.src], lab[e.dst], e.first, e.second);
    }
    out
}
