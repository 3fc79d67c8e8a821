use std::collections::HashMap;

use omegares::zielonka::{parity_dag, ColorSet, DagNode, ZielonkaDag};
use omegares::{Limits, Priority};
use serde_json::{json, Value};

use super::ParseError;

/// A DAG read from JSON; the parity forms are expanded once the number of
/// colors is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DagSpec {
    Explicit(ZielonkaDag),
    /// Color `c` has priority `c`.
    Parity,
    /// Color `c` has priority `priorities[c]`.
    Priorities(Vec<Priority>),
}

impl DagSpec {
    pub fn build(&self, colors: usize, limits: &Limits) -> omegares::Result<ZielonkaDag> {
        match self {
            DagSpec::Explicit(d) => Ok(d.clone()),
            DagSpec::Parity => parity_dag(&(0..colors.max(1) as Priority).collect::<Vec<_>>(), limits),
            DagSpec::Priorities(p) => parity_dag(p, limits),
        }
    }
}

fn err(path: &str, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line: 1, column: 1, message: format!("{path}: {}", message.into()) }
}

struct Interner {
    colors: usize,
    nodes: Vec<DagNode>,
    by_label: HashMap<ColorSet, usize>,
}

impl Interner {
    fn node(&mut self, v: &Value, path: &str) -> Result<usize, ParseError> {
        let obj = v.as_object().ok_or_else(|| err(path, "expected an object"))?;
        let cs = obj.get("colors").and_then(Value::as_array).ok_or_else(|| err(path, "missing `colors` array"))?;
        let mut label = ColorSet::EMPTY;
        for c in cs {
            match c.as_u64() {
                Some(c) if (c as usize) < self.colors => label.insert(c as usize),
                _ => return Err(err(path, format!("color {c} outside 0..{}", self.colors))),
            }
        }
        let accepting = obj.get("accepting").and_then(Value::as_bool).ok_or_else(|| err(path, "missing `accepting` flag"))?;
        let empty = Vec::new();
        let kids = match obj.get("children") {
            None => &empty,
            Some(k) => k.as_array().ok_or_else(|| err(path, "`children` must be an array"))?,
        };
        let children =
            kids.iter().enumerate().map(|(i, k)| self.node(k, &format!("{path}.children[{i}]"))).collect::<Result<Vec<_>, _>>()?;
        if let Some(&i) = self.by_label.get(&label) {
            let n = &self.nodes[i];
            if n.accepting != accepting || n.children != children {
                return Err(err(path, "two nodes with the same colors differ"));
            }
            return Ok(i);
        }
        let i = self.nodes.len();
        self.nodes.push(DagNode { label, accepting, children });
        self.by_label.insert(label, i);
        Ok(i)
    }
}

/// `{"colors": k, "root": {"colors": [..], "accepting": b, "children": [..]}}`,
/// `{"parity": true}`, or `{"priorities": [p0, p1, ..]}`. Nodes with equal
/// color sets are shared.
pub fn parse_dag(text: &str) -> Result<DagSpec, ParseError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| ParseError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })?;
    if v.get("parity") == Some(&Value::Bool(true)) {
        return Ok(DagSpec::Parity);
    }
    if let Some(ps) = v.get("priorities") {
        let ps = ps.as_array().ok_or_else(|| err("priorities", "expected an array"))?;
        return ps
            .iter()
            .map(|p| p.as_u64().map(|p| p as Priority).ok_or_else(|| err("priorities", "expected natural numbers")))
            .collect::<Result<_, _>>()
            .map(DagSpec::Priorities);
    }
    let colors = v.get("colors").and_then(Value::as_u64).ok_or_else(|| err("colors", "expected a number of colors"))? as usize;
    let root = v.get("root").ok_or_else(|| err("root", "missing"))?;
    let mut it = Interner { colors, nodes: Vec::new(), by_label: HashMap::new() };
    let r = it.node(root, "root")?;
    // The root is interned last; move it to index 0.
    let swap = |i: usize| if i == r { 0 } else if i == 0 { r } else { i };
    let mut nodes = it.nodes;
    nodes.swap(0, r);
    for n in &mut nodes {
        n.children.iter_mut().for_each(|c| *c = swap(*c));
    }
    Ok(DagSpec::Explicit(ZielonkaDag::from_nodes(colors, nodes)?))
}

pub fn write_dag(d: &ZielonkaDag) -> String {
    fn node(d: &ZielonkaDag, i: usize) -> Value {
        let n = d.node(i);
        let kids: Vec<Value> = n.children.iter().map(|&c| node(d, c)).collect();
        json!({"colors": n.label.to_vec(), "accepting": n.accepting, "children": kids})
    }
    json!({"colors": d.colors(), "root": node(d, 0)}).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_dag_round_trips() {
        let d = parity_dag(&[0, 1, 2, 3], &Limits::default()).unwrap();
        let text = write_dag(&d);
        let DagSpec::Explicit(back) = parse_dag(&text).unwrap() else { panic!("expected an explicit DAG") };
        assert_eq!(back.len(), d.len());
        assert_eq!(write_dag(&back), text);
    }

    #[test]
    fn json_errors_carry_positions() {
        match parse_dag("{\n \"colors\": ,}") {
            Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
