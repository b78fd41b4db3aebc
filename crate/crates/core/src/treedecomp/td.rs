use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Role of a node in a nice tree decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    Introduce,
    Forget,
    Merge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TdNode {
    /// Sorted, duplicate-free vertex set.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
    pub kind: Option<NodeKind>,
}

/// Rooted tree decomposition. Node ids index into `nodes`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    nodes: Vec<TdNode>,
    root: usize,
}

/// Result of [`validate_td`]. Empty lists mean the property holds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TdDiagnostics {
    /// Problems with the tree itself: bad child ids, cycles, unreachable nodes,
    /// out-of-range vertices.
    pub structure: Vec<String>,
    pub missing_vertices: Vec<usize>,
    pub uncovered_edges: Vec<(usize, usize)>,
    /// Vertices whose bags do not form a connected subtree.
    pub disconnected_vertices: Vec<usize>,
    /// Nodes whose stored kind label does not match their shape.
    pub kind_errors: Vec<(usize, String)>,
}

impl TdDiagnostics {
    /// The three defining properties hold and the tree is well formed.
    pub fn is_valid(&self) -> bool {
        self.structure.is_empty()
            && self.missing_vertices.is_empty()
            && self.uncovered_edges.is_empty()
            && self.disconnected_vertices.is_empty()
    }

    pub fn is_ok(&self) -> bool {
        self.is_valid() && self.kind_errors.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for m in &self.structure {
            let _ = writeln!(s, "structure: {m}");
        }
        if !self.missing_vertices.is_empty() {
            let _ = writeln!(s, "vertices in no bag: {:?}", self.missing_vertices);
        }
        if !self.uncovered_edges.is_empty() {
            let _ = writeln!(s, "edges in no bag: {:?}", self.uncovered_edges);
        }
        if !self.disconnected_vertices.is_empty() {
            let _ = writeln!(s, "vertices with disconnected bags: {:?}", self.disconnected_vertices);
        }
        for (i, m) in &self.kind_errors {
            let _ = writeln!(s, "node {i}: {m}");
        }
        s
    }
}

pub(crate) fn sorted_set(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

pub(crate) fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub(crate) fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::with_capacity(a.len() + b.len()));
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
            j += 1;
        }
    }
    out
}

/// Kind implied by a node's shape, if it is one of the three nice kinds.
pub(crate) fn shape_kind(bag: &[usize], child_bags: &[&[usize]]) -> Option<NodeKind> {
    match child_bags {
        [] => Some(NodeKind::Introduce),
        [c] if bag.len() > c.len() && is_subset(c, bag) => Some(NodeKind::Introduce),
        [c] if bag.len() < c.len() && is_subset(bag, c) => Some(NodeKind::Forget),
        [a, b] if union(a, b) == bag => Some(NodeKind::Merge),
        _ => None,
    }
}

impl TreeDecomposition {
    /// Builds a decomposition; bags are sorted and deduplicated.
    pub fn new(mut nodes: Vec<TdNode>, root: usize) -> Result<Self> {
        if root >= nodes.len() {
            return Err(Error::IndexOutOfRange { index: root, size: nodes.len() });
        }
        for node in &mut nodes {
            node.bag = sorted_set(std::mem::take(&mut node.bag));
        }
        Ok(Self { nodes, root })
    }

    /// Builds a decomposition from bags and kinds-free parent/child lists.
    pub fn from_bags(bags: Vec<Vec<usize>>, children: Vec<Vec<usize>>, root: usize) -> Result<Self> {
        if bags.len() != children.len() {
            return Err(Error::Dimension("one child list per bag required".into()));
        }
        let nodes = bags
            .into_iter()
            .zip(children)
            .map(|(bag, children)| TdNode { bag, children, kind: None })
            .collect();
        Self::new(nodes, root)
    }

    /// Roots an unrooted tree (given by undirected edges) at node `root`.
    /// Several components are joined below a fresh empty root.
    pub fn from_unrooted(bags: Vec<Vec<usize>>, edges: &[(usize, usize)], root: usize) -> Result<Self> {
        let k = bags.len();
        if k == 0 {
            return Self::from_bags(vec![vec![]], vec![vec![]], 0);
        }
        if root >= k {
            return Err(Error::IndexOutOfRange { index: root, size: k });
        }
        let mut adj = vec![Vec::new(); k];
        for &(a, b) in edges {
            if a >= k || b >= k {
                return Err(Error::IndexOutOfRange { index: a.max(b), size: k });
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut children = vec![Vec::new(); k];
        let mut seen = vec![false; k];
        let mut tops = Vec::new();
        for start in std::iter::once(root).chain(0..k) {
            if seen[start] {
                continue;
            }
            tops.push(start);
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        children[v].push(w);
                        stack.push(w);
                    }
                }
            }
        }
        // a graph on k nodes is a forest iff it has k minus #components edges
        if edges.len() + tops.len() != k {
            return Err(Error::Invalid("decomposition edges contain a cycle".into()));
        }
        let mut bags = bags;
        if tops.len() == 1 {
            return Self::from_bags(bags, children, root);
        }
        bags.push(Vec::new());
        children.push(tops);
        Self::from_bags(bags, children, k)
    }

    /// One node holding every vertex.
    pub fn single_bag(n: usize) -> Self {
        Self::from_bags(vec![(0..n).collect()], vec![vec![]], 0).expect("single bag")
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[TdNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &TdNode {
        &self.nodes[i]
    }

    pub fn bag(&self, i: usize) -> &[usize] {
        &self.nodes[i].bag
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.nodes[i].children
    }

    pub fn kind(&self, i: usize) -> Option<NodeKind> {
        self.nodes[i].kind
    }

    /// Largest bag size, `‖T‖_∞`.
    pub fn max_bag(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0)
    }

    /// Largest bag size minus one (zero when every bag is empty).
    pub fn width(&self) -> usize {
        self.max_bag().saturating_sub(1)
    }

    /// Parent of each node reachable from the root (`None` for the root and for
    /// unreachable nodes).
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.nodes.len()];
        for v in self.preorder() {
            for &c in &self.nodes[v].children {
                if c < parent.len() {
                    parent[c] = Some(v);
                }
            }
        }
        parent
    }

    /// Nodes reachable from the root, parents before children. Each node is
    /// visited at most once even when the child lists are malformed.
    pub fn preorder(&self) -> Vec<usize> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        seen[self.root] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &c in self.nodes[v].children.iter().rev() {
                if c < seen.len() && !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        order
    }

    /// Children before parents.
    pub fn postorder(&self) -> Vec<usize> {
        let mut order = self.preorder();
        order.reverse();
        order
    }

    /// Vertices mentioned in any bag, as one more than the largest label.
    pub fn vertex_bound(&self) -> usize {
        self.nodes.iter().filter_map(|n| n.bag.last()).map(|&v| v + 1).max().unwrap_or(0)
    }

    /// Kind implied by the shape of node `i`.
    pub fn shape_kind(&self, i: usize) -> Option<NodeKind> {
        let cb: Vec<&[usize]> = self.nodes[i].children.iter().map(|&c| self.nodes[c].bag.as_slice()).collect();
        shape_kind(&self.nodes[i].bag, &cb)
    }

    /// Recomputes every kind label from the tree shape.
    pub fn relabel(&mut self) {
        for i in 0..self.nodes.len() {
            self.nodes[i].kind = self.shape_kind(i);
        }
    }

    /// Every node carries a kind consistent with its shape.
    pub fn is_nice(&self) -> bool {
        (0..self.nodes.len()).all(|i| self.nodes[i].kind.is_some() && self.shape_kind(i) == self.nodes[i].kind)
    }

    pub fn norm_p(&self, p: f64) -> f64 {
        norm_p(self, p)
    }

    pub fn into_nodes(self) -> (Vec<TdNode>, usize) {
        (self.nodes, self.root)
    }

    /// Writes the PACE `.td` format. Vertices and bags are 1-indexed.
    pub fn to_pace(&self, n: usize) -> String {
        let mut s = format!("s td {} {} {}\n", self.nodes.len(), self.max_bag(), n);
        for (i, node) in self.nodes.iter().enumerate() {
            let _ = write!(s, "b {}", i + 1);
            for &v in &node.bag {
                let _ = write!(s, " {}", v + 1);
            }
            s.push('\n');
        }
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                let _ = writeln!(s, "{} {}", i + 1, c + 1);
            }
        }
        s
    }

    /// Parses the PACE `.td` format and roots the tree at bag 1.
    ///
    /// Returns the decomposition and the vertex count from the header. Kind
    /// labels are recomputed.
    pub fn parse_pace(text: &str) -> Result<(Self, usize)> {
        let mut header: Option<(usize, usize)> = None;
        let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
        let mut edges = Vec::new();
        for line in text.lines() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.is_empty() || toks[0] == "c" {
                continue;
            }
            let num = |t: &str| t.parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}")));
            match toks[0] {
                "s" => {
                    if toks.len() != 5 || toks[1] != "td" {
                        return Err(Error::Parse(format!("bad header {line:?}")));
                    }
                    let nb = num(toks[2])?;
                    header = Some((nb, num(toks[4])?));
                    bags = vec![None; nb];
                }
                "b" => {
                    let (nb, n) = header.ok_or_else(|| Error::Parse("bag before header".into()))?;
                    let id = num(toks.get(1).copied().unwrap_or(""))?;
                    if id == 0 || id > nb {
                        return Err(Error::Parse(format!("bag id {id} out of range")));
                    }
                    let mut bag = Vec::new();
                    for t in &toks[2..] {
                        let v = num(t)?;
                        if v == 0 || v > n {
                            return Err(Error::Parse(format!("vertex {v} out of range")));
                        }
                        bag.push(v - 1);
                    }
                    bags[id - 1] = Some(bag);
                }
                _ => {
                    let (nb, _) = header.ok_or_else(|| Error::Parse("edge before header".into()))?;
                    if toks.len() != 2 {
                        return Err(Error::Parse(format!("bad edge line {line:?}")));
                    }
                    let (a, b) = (num(toks[0])?, num(toks[1])?);
                    if a == 0 || b == 0 || a > nb || b > nb {
                        return Err(Error::Parse(format!("edge {a} {b} out of range")));
                    }
                    edges.push((a - 1, b - 1));
                }
            }
        }
        let (_, n) = header.ok_or_else(|| Error::Parse("missing header".into()))?;
        let bags: Vec<Vec<usize>> = bags
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or_else(|| Error::Parse(format!("bag {} missing", i + 1))))
            .collect::<Result<_>>()?;
        let mut td = Self::from_unrooted(bags, &edges, 0)?;
        td.relabel();
        Ok((td, n))
    }
}

/// `(Σ|B_i|^p)^{1/p}`; `p = ∞` gives the largest bag.
pub fn norm_p(t: &TreeDecomposition, p: f64) -> f64 {
    assert!(p >= 1.0, "norm_p needs p >= 1");
    if p.is_infinite() {
        return t.max_bag() as f64;
    }
    t.nodes.iter().map(|n| (n.bag.len() as f64).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Checks the three tree-decomposition properties of `t` against `g`, the tree
/// shape, and any kind labels present.
pub fn validate_td(g: &Graph, t: &TreeDecomposition) -> TdDiagnostics {
    let mut d = TdDiagnostics::default();
    let k = t.nodes.len();
    let n = g.n();

    let mut parent = vec![usize::MAX; k];
    let mut indeg = vec![0usize; k];
    for (i, node) in t.nodes.iter().enumerate() {
        for &c in &node.children {
            if c >= k {
                d.structure.push(format!("node {i} has child {c} out of range"));
                continue;
            }
            indeg[c] += 1;
            parent[c] = i;
        }
        if let Some(&v) = node.bag.iter().find(|&&v| v >= n) {
            d.structure.push(format!("node {i} holds vertex {v} but the graph has {n}"));
        }
    }
    if indeg[t.root] != 0 {
        d.structure.push(format!("root {} has a parent", t.root));
    }
    for (i, &c) in indeg.iter().enumerate() {
        if c > 1 {
            d.structure.push(format!("node {i} has {c} parents"));
        }
    }
    let reach = t.preorder();
    if reach.len() != k {
        d.structure.push(format!("{} of {k} nodes unreachable from the root", k - reach.len()));
    }
    if !d.structure.is_empty() {
        return d;
    }

    // vertex coverage and connectivity: exactly one node per vertex has a
    // parent lacking it (or is the root)
    let mut count = vec![0usize; n];
    let mut tops = vec![0usize; n];
    for i in 0..k {
        let pb: &[usize] = if i == t.root { &[] } else { &t.nodes[parent[i]].bag };
        for &v in &t.nodes[i].bag {
            count[v] += 1;
            if pb.binary_search(&v).is_err() {
                tops[v] += 1;
            }
        }
    }
    for v in 0..n {
        if count[v] == 0 {
            d.missing_vertices.push(v);
        } else if tops[v] != 1 {
            d.disconnected_vertices.push(v);
        }
    }

    let mut covered: HashSet<(usize, usize)> = HashSet::new();
    let mut mark = vec![usize::MAX; n];
    for (i, node) in t.nodes.iter().enumerate() {
        for &v in &node.bag {
            mark[v] = i;
        }
        for &v in &node.bag {
            for &w in g.neighbors(v) {
                if w > v && mark[w] == i {
                    covered.insert((v, w));
                }
            }
        }
    }
    if covered.len() != g.num_edges() {
        d.uncovered_edges = g.edges().into_iter().filter(|e| !covered.contains(e)).collect();
    }

    for i in 0..k {
        if let Some(kind) = t.nodes[i].kind {
            let actual = t.shape_kind(i);
            if actual != Some(kind) {
                d.kind_errors.push((i, format!("labelled {kind:?} but shape is {actual:?}")));
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_helpers() {
        assert!(is_subset(&[1, 3], &[0, 1, 2, 3]));
        assert!(!is_subset(&[1, 4], &[0, 1, 2, 3]));
        assert_eq!(intersect(&[1, 2, 5], &[2, 5, 7]), vec![2, 5]);
        assert_eq!(union(&[1, 2, 5], &[2, 5, 7]), vec![1, 2, 5, 7]);
    }

    #[test]
    fn single_bag_is_valid() {
        let g = Graph::complete(5);
        let t = TreeDecomposition::single_bag(5);
        assert!(validate_td(&g, &t).is_ok());
        assert_eq!(t.width(), 4);
    }

    #[test]
    fn norms() {
        let t = TreeDecomposition::from_bags(vec![vec![]], vec![vec![]], 0).unwrap();
        assert_eq!(norm_p(&t, 1.0), 0.0);
        let t = TreeDecomposition::from_bags(vec![vec![0, 1, 2], vec![0, 1, 2, 3]], vec![vec![1], vec![]], 0).unwrap();
        assert!((norm_p(&t, 2.0) - 5.0).abs() < 1e-12);
        assert_eq!(norm_p(&t, f64::INFINITY), 4.0);
    }

    #[test]
    fn pace_roundtrip() {
        let t = TreeDecomposition::from_bags(vec![vec![0, 1], vec![1, 2], vec![1, 3]], vec![vec![1, 2], vec![], vec![]], 0)
            .unwrap();
        let text = t.to_pace(4);
        let (back, n) = TreeDecomposition::parse_pace(&text).unwrap();
        assert_eq!(n, 4);
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        assert!(validate_td(&g, &back).is_valid());
        assert_eq!(back.num_nodes(), 3);
    }

    #[test]
    fn cycle_in_edges_rejected() {
        let bags = vec![vec![0], vec![0], vec![0]];
        assert!(TreeDecomposition::from_unrooted(bags, &[(0, 1), (1, 2), (2, 0)], 0).is_err());
    }

    #[test]
    fn forest_joined_under_empty_root() {
        let t = TreeDecomposition::from_unrooted(vec![vec![0], vec![1]], &[], 0).unwrap();
        assert_eq!(t.num_nodes(), 3);
        assert!(t.bag(t.root()).is_empty());
        let g = Graph::empty(2);
        assert!(validate_td(&g, &t).is_valid());
    }
}
