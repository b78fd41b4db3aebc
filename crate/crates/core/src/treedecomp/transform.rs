//! Structural rewrites of tree decompositions.

use super::td::{intersect, is_subset, sorted_set, union, TdNode, TreeDecomposition};
use super::Graph;
use crate::error::{Error, Result};

/// Incrementally assembled decomposition with kinds computed at the end.
#[derive(Default)]
pub(crate) struct Builder {
    bags: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

impl Builder {
    pub(crate) fn push(&mut self, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.bags.push(bag);
        self.children.push(children);
        self.bags.len() - 1
    }

    pub(crate) fn bag(&self, i: usize) -> &[usize] {
        &self.bags[i]
    }

    pub(crate) fn finish(self, root: usize) -> TreeDecomposition {
        let mut t = TreeDecomposition::from_bags(self.bags, self.children, root).expect("builder root in range");
        t.relabel();
        compact(&t)
    }
}

/// Drops unreachable nodes and renumbers the rest in preorder.
fn compact(t: &TreeDecomposition) -> TreeDecomposition {
    let order = t.preorder();
    if order.len() == t.num_nodes() && order.iter().enumerate().all(|(i, &v)| i == v) {
        return t.clone();
    }
    let mut index = vec![usize::MAX; t.num_nodes()];
    for (i, &v) in order.iter().enumerate() {
        index[v] = i;
    }
    let nodes = order
        .iter()
        .map(|&v| {
            let n = t.node(v);
            TdNode {
                bag: n.bag.clone(),
                children: n.children.iter().map(|&c| index[c]).collect(),
                kind: n.kind,
            }
        })
        .collect();
    TreeDecomposition::new(nodes, 0).expect("compacted root")
}

/// Rejects child lists that do not describe a tree hanging from the root.
fn check_tree(t: &TreeDecomposition) -> Result<()> {
    let k = t.num_nodes();
    let mut indeg = vec![0usize; k];
    for i in 0..k {
        for &c in t.children(i) {
            if c >= k {
                return Err(Error::IndexOutOfRange { index: c, size: k });
            }
            indeg[c] += 1;
        }
    }
    if indeg[t.root()] != 0 || indeg.iter().any(|&d| d > 1) || t.preorder().len() != k {
        return Err(Error::Invalid("child lists do not form a rooted tree".into()));
    }
    Ok(())
}

/// Contracts every edge whose parent bag contains the child bag.
///
/// The result has at most `n + 1` nodes and the same width.
pub fn contract_redundant(t: &TreeDecomposition) -> Result<TreeDecomposition> {
    check_tree(t)?;
    let mut out = Builder::default();
    let root = out.push(t.bag(t.root()).to_vec(), Vec::new());
    // (original node, new node) pairs whose children still need placing
    let mut stack = vec![(t.root(), root)];
    while let Some((v, nv)) = stack.pop() {
        let mut pending: Vec<usize> = t.children(v).to_vec();
        let mut kept = Vec::new();
        while let Some(c) = pending.pop() {
            if is_subset(t.bag(c), t.bag(v)) {
                pending.extend_from_slice(t.children(c));
            } else {
                kept.push(c);
            }
        }
        for c in kept {
            let nc = out.push(t.bag(c).to_vec(), Vec::new());
            out.children[nv].push(nc);
            stack.push((c, nc));
        }
    }
    Ok(out.finish(root))
}

/// Rewrites a rooted decomposition into nice form without changing the root
/// bag or the width.
///
/// Each child `C` of a node `B` is capped by a forget node `B ∩ C` when that
/// is smaller, the capped children are combined by binary merge nodes, and an
/// introduce node restores `B` if the merged bag falls short of it.
pub fn to_nice_form(t: &TreeDecomposition) -> Result<TreeDecomposition> {
    check_tree(t)?;
    let mut out = Builder::default();
    let mut top = vec![usize::MAX; t.num_nodes()];
    for v in t.postorder() {
        let b = t.bag(v);
        let mut parts = Vec::with_capacity(t.children(v).len());
        for &c in t.children(v) {
            let id = top[c];
            let inter = intersect(b, out.bag(id));
            parts.push(if inter.len() < out.bag(id).len() { out.push(inter, vec![id]) } else { id });
        }
        let mut acc: Option<usize> = None;
        for p in parts {
            acc = Some(match acc {
                None => p,
                Some(a) => {
                    let u = union(out.bag(a), out.bag(p));
                    out.push(u, vec![a, p])
                }
            });
        }
        top[v] = match acc {
            None => out.push(b.to_vec(), Vec::new()),
            Some(a) if out.bag(a).len() == b.len() => a,
            Some(a) => out.push(b.to_vec(), vec![a]),
        };
    }
    Ok(out.finish(top[t.root()]))
}

/// Shrinks a nice decomposition of width `width` to `O(n / width)` nodes by
/// contracting every original child whose (already processed) bag has at most
/// `2 · width` vertices into its parent. The result is re-niced.
///
/// Bags grow to at most `5 · width + 1` vertices. A width of zero is treated
/// as one.
pub fn compress(t: &TreeDecomposition, width: usize) -> Result<TreeDecomposition> {
    check_tree(t)?;
    let cap = 2 * width.max(1);
    let k = t.num_nodes();
    let mut bags: Vec<Vec<usize>> = (0..k).map(|i| t.bag(i).to_vec()).collect();
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); k];
    for v in t.postorder() {
        let mut bag = std::mem::take(&mut bags[v]);
        let mut ch = Vec::new();
        for &c in t.children(v) {
            if bags[c].len() <= cap {
                bag = union(&bag, &bags[c]);
                ch.append(&mut kids[c]);
            } else {
                ch.push(c);
            }
        }
        bags[v] = bag;
        kids[v] = ch;
    }
    let mut out = Builder::default();
    let mut index = vec![usize::MAX; k];
    let mut stack = vec![t.root()];
    let mut order = Vec::new();
    while let Some(v) = stack.pop() {
        index[v] = out.push(std::mem::take(&mut bags[v]), Vec::new());
        order.push(v);
        stack.extend_from_slice(&kids[v]);
    }
    for &v in &order {
        out.children[index[v]] = kids[v].iter().map(|&c| index[c]).collect();
    }
    let root = index[t.root()];
    to_nice_form(&out.finish(root))
}

/// Full pipeline: contract redundant edges, nice form, compression, nice form
/// again, then forget down to an empty root bag.
pub fn normalize(t: &TreeDecomposition) -> Result<TreeDecomposition> {
    let t = contract_redundant(t)?;
    let t = to_nice_form(&t)?;
    let w = t.width();
    let t = compress(&t, w)?;
    let t = to_nice_form(&t)?;
    Ok(with_empty_root(&t))
}

/// Adds a forget node with an empty bag above a non-empty root.
pub fn with_empty_root(t: &TreeDecomposition) -> TreeDecomposition {
    if t.bag(t.root()).is_empty() {
        return t.clone();
    }
    let (mut nodes, root) = t.clone().into_nodes();
    nodes.push(TdNode { bag: Vec::new(), children: vec![root], kind: None });
    let r = nodes.len() - 1;
    let mut out = TreeDecomposition::new(nodes, r).expect("new root");
    out.relabel();
    compact(&out)
}

/// A map `f: V(G') → V(G)` sending every edge of `G'` to an edge of `G` or to
/// a single vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarseGraining {
    map: Vec<usize>,
    target_n: usize,
    r: usize,
}

impl CoarseGraining {
    /// Checks the edge condition and records the largest fiber size `r`.
    pub fn new(fine: &Graph, coarse: &Graph, map: Vec<usize>) -> Result<Self> {
        if map.len() != fine.n() {
            return Err(Error::Dimension(format!("map has {} entries for {} vertices", map.len(), fine.n())));
        }
        if let Some(&w) = map.iter().find(|&&w| w >= coarse.n()) {
            return Err(Error::IndexOutOfRange { index: w, size: coarse.n() });
        }
        for (u, v) in fine.edges() {
            let (a, b) = (map[u], map[v]);
            if a != b && !coarse.has_edge(a, b) {
                return Err(Error::Invalid(format!("edge {{{u},{v}}} maps to non-edge {{{a},{b}}}")));
            }
        }
        let mut sizes = vec![0usize; coarse.n()];
        for &w in &map {
            sizes[w] += 1;
        }
        Ok(Self { map, target_n: coarse.n(), r: sizes.into_iter().max().unwrap_or(0) })
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect(), target_n: n, r: usize::from(n > 0) }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn target_n(&self) -> usize {
        self.target_n
    }

    /// Vertices of `G'` over each vertex of `G`.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut f = vec![Vec::new(); self.target_n];
        for (v, &w) in self.map.iter().enumerate() {
            f[w].push(v);
        }
        f
    }
}

/// Same tree, each bag replaced by its preimage under `f`.
pub fn preimage(t: &TreeDecomposition, f: &CoarseGraining) -> Result<TreeDecomposition> {
    let fibers = f.fibers();
    let mut nodes = Vec::with_capacity(t.num_nodes());
    for node in t.nodes() {
        let mut bag = Vec::new();
        for &w in &node.bag {
            let fib = fibers.get(w).ok_or(Error::IndexOutOfRange { index: w, size: f.target_n })?;
            bag.extend_from_slice(fib);
        }
        nodes.push(TdNode { bag: sorted_set(bag), children: node.children.clone(), kind: None });
    }
    let mut out = TreeDecomposition::new(nodes, t.root())?;
    out.relabel();
    Ok(out)
}
