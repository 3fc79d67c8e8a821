//! Zielonka DAGs: the alternating decomposition of a Muller family, with
//! nodes of equal label merged.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::automaton::Priority;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// Hard ceiling imposed by the bitset representation.
pub const MAX_COLORS: usize = 128;

/// A set of colors `0..128`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorSet(pub u128);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    pub fn full(n: usize) -> ColorSet {
        if n >= 128 {
            ColorSet(u128::MAX)
        } else {
            ColorSet((1u128 << n) - 1)
        }
    }

    pub fn singleton(c: usize) -> ColorSet {
        ColorSet(1u128 << c)
    }

    pub fn from_colors(cs: impl IntoIterator<Item = usize>) -> ColorSet {
        let mut s = ColorSet::EMPTY;
        for c in cs {
            s.insert(c);
        }
        s
    }

    pub fn insert(&mut self, c: usize) {
        self.0 |= 1u128 << c;
    }

    pub fn contains(self, c: usize) -> bool {
        self.0 >> c & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: ColorSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & other.0)
    }

    pub fn difference(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let c = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(c)
        })
    }

    /// Sorted member list, used as the lexicographic tie-break key.
    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DagNode {
    pub label: ColorSet,
    pub accepting: bool,
    pub children: Vec<usize>,
}

/// Zielonka DAG over colors `0..colors`; node 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZielonkaDag {
    colors: usize,
    nodes: Vec<DagNode>,
}

/// Ordering among nodes of equal size in [`ZielonkaDag::bottom_up_order`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    Lexicographic,
    ReverseLexicographic,
}

impl ZielonkaDag {
    /// Wraps explicit nodes and runs the structural checks.
    pub fn from_nodes(colors: usize, nodes: Vec<DagNode>) -> Result<ZielonkaDag> {
        let d = ZielonkaDag { colors, nodes };
        d.validate()?;
        Ok(d)
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn universe(&self) -> ColorSet {
        ColorSet::full(self.colors)
    }

    pub fn nodes(&self) -> &[DagNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &DagNode {
        &self.nodes[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Membership of `s` in the represented family.
    pub fn accepts(&self, s: ColorSet) -> bool {
        let mut n = 0;
        'descend: loop {
            for &c in &self.nodes[n].children {
                if s.is_subset(self.nodes[c].label) {
                    n = c;
                    continue 'descend;
                }
            }
            return self.nodes[n].accepting;
        }
    }

    /// Node indices with every child before its parents: increasing label
    /// size, ties broken on the sorted color lists.
    pub fn bottom_up_order(&self, tie: TieBreak) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.nodes.len()).collect();
        idx.sort_by(|&a, &b| {
            let (la, lb) = (self.nodes[a].label, self.nodes[b].label);
            la.len().cmp(&lb.len()).then_with(|| match tie {
                TieBreak::Lexicographic => la.to_vec().cmp(&lb.to_vec()),
                TieBreak::ReverseLexicographic => lb.to_vec().cmp(&la.to_vec()),
            })
        });
        idx
    }

    /// Root covers every color, labels are nonempty and unique, children are
    /// strict, pairwise incomparable subsets of opposite acceptance, and every
    /// node is reachable from the root.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDag(m));
        if self.colors == 0 || self.colors > MAX_COLORS {
            return bad(format!("color count {} outside 1..={}", self.colors, MAX_COLORS));
        }
        if self.nodes.is_empty() {
            return bad("no root".into());
        }
        if self.nodes[0].label != self.universe() {
            return bad("root label is not the full color set".into());
        }
        let mut labels = HashMap::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if n.label.is_empty() || !n.label.is_subset(self.universe()) {
                return bad(format!("node {i} has an empty or out-of-range label"));
            }
            if let Some(j) = labels.insert(n.label, i) {
                return bad(format!("nodes {j} and {i} share the label {:?}", n.label));
            }
            for (k, &c) in n.children.iter().enumerate() {
                let Some(ch) = self.nodes.get(c) else {
                    return bad(format!("node {i} has a dangling child {c}"));
                };
                if ch.label == n.label || !ch.label.is_subset(n.label) {
                    return bad(format!("child {c} is not a strict subset of node {i}"));
                }
                if ch.accepting == n.accepting {
                    return bad(format!("acceptance does not alternate on edge {i} -> {c}"));
                }
                for &d in &n.children[..k] {
                    let other = self.nodes[d].label;
                    if other.is_subset(ch.label) || ch.label.is_subset(other) {
                        return bad(format!("children {d} and {c} of node {i} are comparable"));
                    }
                }
            }
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &c in &self.nodes[v].children {
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return bad(format!("node {i} is unreachable from the root"));
        }
        Ok(())
    }

    /// Structural checks plus agreement with `accepting` on every label and
    /// maximality of children, by rebuilding the DAG from the predicate.
    pub fn validate_against(&self, accepting: impl FnMut(ColorSet) -> bool, limits: &Limits) -> Result<()> {
        self.validate()?;
        let rebuilt = zielonka_dag(self.colors, accepting, limits)?;
        if canonical(self) != canonical(&rebuilt) {
            return Err(Error::InvalidDag("DAG differs from the Zielonka DAG of its family".into()));
        }
        Ok(())
    }
}

fn canonical(d: &ZielonkaDag) -> BTreeMap<ColorSet, (bool, Vec<ColorSet>)> {
    d.nodes
        .iter()
        .map(|n| {
            let mut ch: Vec<ColorSet> = n.children.iter().map(|&c| d.nodes[c].label).collect();
            ch.sort();
            (n.label, (n.accepting, ch))
        })
        .collect()
}

/// Shared worklist: explores labels from the root, merging equal labels.
fn build(
    colors: usize,
    root_accepting: bool,
    mut children_of: impl FnMut(ColorSet, bool) -> Result<Vec<(ColorSet, bool)>>,
    limits: &Limits,
) -> Result<ZielonkaDag> {
    let root = ColorSet::full(colors);
    let mut ids: HashMap<ColorSet, usize> = HashMap::new();
    let mut nodes = vec![DagNode { label: root, accepting: root_accepting, children: Vec::new() }];
    ids.insert(root, 0);
    let mut i = 0;
    while i < nodes.len() {
        limits.tick()?;
        let (label, acc) = (nodes[i].label, nodes[i].accepting);
        let mut kids = children_of(label, acc)?;
        kids.sort_by_key(|k| k.0.to_vec());
        let mut out = Vec::with_capacity(kids.len());
        for (y, ya) in kids {
            let id = *ids.entry(y).or_insert_with(|| {
                nodes.push(DagNode { label: y, accepting: ya, children: Vec::new() });
                nodes.len() - 1
            });
            out.push(id);
        }
        nodes[i].children = out;
        limits.check_states("Zielonka DAG nodes", nodes.len())?;
        i += 1;
    }
    Ok(ZielonkaDag { colors, nodes })
}

/// The Zielonka DAG of the family `{S : accepting(S)}` over `0..colors`.
/// The predicate is memoized on labels; children are found by a top-down
/// search over subsets, so `colors` is bounded by `limits.max_dag_colors`.
pub fn zielonka_dag(
    colors: usize,
    mut accepting: impl FnMut(ColorSet) -> bool,
    limits: &Limits,
) -> Result<ZielonkaDag> {
    if colors == 0 {
        return Err(Error::InvalidDag("empty color set".into()));
    }
    if colors > limits.max_dag_colors.min(MAX_COLORS) {
        return Err(Error::ResourceLimit { what: "Zielonka DAG colors".into(), limit: limits.max_dag_colors });
    }
    let mut memo: HashMap<ColorSet, bool> = HashMap::new();
    let mut pred = move |s: ColorSet| *memo.entry(s).or_insert_with(|| accepting(s));
    let root_acc = pred(ColorSet::full(colors));
    build(
        colors,
        root_acc,
        |x, acc| {
            let members = x.to_vec();
            let n = members.len();
            let mut found: Vec<ColorSet> = Vec::new();
            for size in (1..n).rev() {
                limits.tick()?;
                for comb in Combinations::new(n, size) {
                    let y = ColorSet::from_colors(comb.iter().map(|&k| members[k]));
                    if found.iter().any(|f| y.is_subset(*f)) {
                        continue;
                    }
                    if pred(y) != acc {
                        found.push(y);
                    }
                }
            }
            Ok(found.into_iter().map(|y| (y, !acc)).collect())
        },
        limits,
    )
}

/// Zielonka DAG of a family that depends only on the coordinatewise maxima of
/// a set of color vectors: color `c` is the vector `coords[c]`, and a set is
/// accepting iff `accepting(max vector)`. Children of `X` are the maximal
/// flipped sets among `X ∩ box(m)` for candidate max-vectors `m`.
pub fn zielonka_dag_by_max(
    coords: &[Vec<Priority>],
    accepting: impl Fn(&[Priority]) -> bool,
    limits: &Limits,
) -> Result<ZielonkaDag> {
    let colors = coords.len();
    if colors == 0 {
        return Err(Error::InvalidDag("empty color set".into()));
    }
    if colors > MAX_COLORS {
        return Err(Error::ResourceLimit { what: "Zielonka DAG colors".into(), limit: MAX_COLORS });
    }
    let dim = coords[0].len();
    if coords.iter().any(|v| v.len() != dim) {
        return Err(Error::InvalidDag("color vectors of different dimension".into()));
    }
    let maxvec = |s: ColorSet| -> Vec<Priority> {
        let mut m = vec![0; dim];
        for c in s.iter() {
            for (k, x) in coords[c].iter().enumerate() {
                m[k] = m[k].max(*x);
            }
        }
        m
    };
    let acc_of = |s: ColorSet| accepting(&maxvec(s));
    let root_acc = acc_of(ColorSet::full(colors));
    build(
        colors,
        root_acc,
        |x, acc| {
            let mut values: Vec<Vec<Priority>> = vec![Vec::new(); dim];
            for c in x.iter() {
                for k in 0..dim {
                    values[k].push(coords[c][k]);
                }
            }
            for v in &mut values {
                v.sort_unstable();
                v.dedup();
            }
            let mut cands: Vec<ColorSet> = Vec::new();
            let mut pick = vec![0usize; dim];
            loop {
                let bound: Vec<Priority> = (0..dim).map(|k| values[k][pick[k]]).collect();
                let y = ColorSet::from_colors(x.iter().filter(|&c| (0..dim).all(|k| coords[c][k] <= bound[k])));
                if !y.is_empty() && y != x && acc_of(y) != acc && !cands.contains(&y) {
                    cands.push(y);
                }
                let mut k = 0;
                while k < dim {
                    pick[k] += 1;
                    if pick[k] < values[k].len() {
                        break;
                    }
                    pick[k] = 0;
                    k += 1;
                }
                if k == dim {
                    break;
                }
            }
            let maximal: Vec<(ColorSet, bool)> = cands
                .iter()
                .filter(|y| !cands.iter().any(|z| z != *y && y.is_subset(*z)))
                .map(|&y| (y, !acc))
                .collect();
            Ok(maximal)
        },
        limits,
    )
}

/// The DAG of the max-even parity condition on colors `0..colors`, where
/// color `c` stands for priority `priorities[c]`.
pub fn parity_dag(priorities: &[Priority], limits: &Limits) -> Result<ZielonkaDag> {
    let coords: Vec<Vec<Priority>> = priorities.iter().map(|&p| vec![p]).collect();
    zielonka_dag_by_max(&coords, |m| m[0] % 2 == 0, limits)
}

/// Index combinations of `size` out of `0..n`, in lexicographic order.
struct Combinations {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, size: usize) -> Self {
        Combinations { n, cur: (0..size).collect(), done: size > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let k = self.cur.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cur[i] < self.n - k + i {
                self.cur[i] += 1;
                for j in i + 1..k {
                    self.cur[j] = self.cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
