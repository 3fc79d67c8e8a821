use std::fmt::Write;

use omegares::mdp::{Mdp, MdpEdge, VertexKind};
use omegares::rational::format_rat;

use super::{names, Document, ParseError};

/// `mdp`, `vertex <name> controlled|stochastic`, `initial <name>`, and
/// `e <src> <dst> <color>|- [<num>/<den>]` edges; `-` marks a blank edge.
pub fn parse_mdp(text: &str) -> Result<Mdp, ParseError> {
    let doc = Document::new(text);
    doc.only(&["mdp", "vertex", "initial", "e"])?;
    doc.starts_with("mdp")?;
    doc.required("mdp")?.arity(0)?;
    let mut labels = Vec::new();
    let mut kinds = Vec::new();
    for l in doc.with("vertex") {
        let a = l.arity(2)?;
        labels.push(a[0]);
        kinds.push(match a[1].text {
            "controlled" => VertexKind::Controlled,
            "stochastic" => VertexKind::Stochastic,
            other => return Err(a[1].err(format!("expected `controlled` or `stochastic`, found `{other}`"))),
        });
    }
    let ix = names(&labels, "vertex")?;
    let initial = doc.required("initial")?.arity(1)?[0].lookup(&ix, "vertex")?;
    let mut edges = Vec::new();
    for l in doc.with("e") {
        let a = l.args.as_slice();
        if !(3..=4).contains(&a.len()) {
            return Err(l.keyword.err("`e` takes 3 or 4 arguments"));
        }
        let color = match a[2].text {
            "-" => None,
            _ => Some(a[2].number("a color or `-`")?),
        };
        let prob = a.get(3).map(|t| t.rat()).transpose()?;
        edges.push(MdpEdge { src: a[0].lookup(&ix, "vertex")?, dst: a[1].lookup(&ix, "vertex")?, color, prob });
    }
    let labels = labels.iter().map(|t| t.text.to_string()).collect();
    Ok(Mdp::new(kinds, labels, edges, initial)?)
}

pub fn write_mdp(m: &Mdp) -> String {
    let mut out = String::from("mdp\n");
    for v in 0..m.num_vertices() {
        let kind = if m.is_controlled(v) { "controlled" } else { "stochastic" };
        let _ = writeln!(out, "vertex {} {kind}", m.label(v));
    }
    let _ = writeln!(out, "initial {}", m.label(m.initial()));
    for e in m.edges() {
        let color = e.color.map_or("-".to_string(), |c| c.to_string());
        let _ = write!(out, "e {} {} {color}", m.label(e.src), m.label(e.dst));
        if let Some(p) = &e.prob {
            let _ = write!(out, " {}", format_rat(p));
        }
        out.push('\n');
    }
    out
}
