use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2la::BitMatrix;

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

/// Serialized form: `{"n": 4, "edges": [[0,1], ...]}`.
#[derive(Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph, ignoring duplicate edges and rejecting loops.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn from_adjacency(a: &BitMatrix) -> Result<Self> {
        if a.rows() != a.cols() {
            return Err(Error::Dimension("adjacency must be square".into()));
        }
        if a != &a.transpose() || !a.diag().is_zero() {
            return Err(Error::Invalid("adjacency must be symmetric with zero diagonal".into()));
        }
        let mut g = Self::empty(a.rows());
        for u in 0..a.rows() {
            for v in a.row(u).ones_iter().filter(|&v| v > u) {
                g.add_edge(u, v)?;
            }
        }
        Ok(g)
    }

    /// Adds `{u, v}`; returns whether it was new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(Error::IndexOutOfRange { index: x, size: n });
            }
        }
        if u == v {
            return Err(Error::Invalid(format!("self-loop at vertex {u}")));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos2 = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos2, u);
                self.m += 1;
                Ok(true)
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if let Ok(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].remove(pos);
            let pos2 = self.adj[v].binary_search(&u).expect("symmetric adjacency");
            self.adj[v].remove(pos2);
            self.m -= 1;
            true
        } else {
            false
        }
    }

    /// Adds the edge if absent, removes it otherwise.
    pub fn toggle_edge(&mut self, u: usize, v: usize) {
        if !self.remove_edge(u, v) {
            self.add_edge(u, v).expect("valid toggle");
        }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.m
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n() {
            for &v in &self.adj[u] {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn adjacency_matrix(&self) -> BitMatrix {
        let n = self.n();
        let mut a = BitMatrix::zeros(n, n);
        for u in 0..n {
            for &v in &self.adj[u] {
                a.set(u, v, true);
            }
        }
        a
    }

    /// Subgraph induced by `vertices`; vertex `i` of the result is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::empty(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && j > i {
                    g.add_edge(i, j).expect("induced edge");
                }
            }
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// BFS distances from `src` (`usize::MAX` when unreachable).
    pub fn bfs(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[src] = 0;
        let mut q = VecDeque::from([src]);
        while let Some(u) = q.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<Self> {
        let edges: Vec<(usize, usize)> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::from_edges(j.n, &edges)
    }

    /// Parses whitespace-separated `u v` pairs; an optional first line `n` or
    /// `n m` fixes the vertex count, otherwise it is one more than the largest label.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut nums: Vec<Vec<usize>> = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
                .collect::<Result<_>>()?;
            nums.push(row);
        }
        let (n, body) = match nums.first() {
            Some(first) if first.len() == 1 => (Some(first[0]), &nums[1..]),
            _ => (None, &nums[..]),
        };
        let mut edges = Vec::new();
        for row in body {
            if row.len() != 2 {
                return Err(Error::Parse("edge lines must hold exactly two vertices".into()));
            }
            edges.push((row[0], row[1]));
        }
        let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
        Self::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges).expect("path")
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n > 2 {
            g.add_edge(n - 1, 0).expect("cycle");
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("complete");
            }
        }
        g
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Self::from_edges(leaves + 1, &edges).expect("star")
    }

    /// `rows × cols` grid; vertex `(r, c)` is `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut g = Self::empty(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    g.add_edge(v, v + 1).expect("grid");
                }
                if r + 1 < rows {
                    g.add_edge(v, v + cols).expect("grid");
                }
            }
        }
        g
    }

    /// Erdős–Rényi `G(n, p)`.
    pub fn random_gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v).expect("gnp");
                }
            }
        }
        g
    }

    /// Random maximal planar graph on `n ≥ 3` vertices: stacked insertions
    /// into random faces followed by `n` random edge flips.
    pub fn random_triangulation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        if n < 3 {
            return Self::complete(n);
        }
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        // both faces of the starting triangle are kept, so every edge borders two faces
        let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 1, 2]];
        let mut g = Self::complete(3);
        for v in 3..n {
            g.add_vertex();
            let f = rng.gen_range(0..faces.len());
            let [a, b, c] = faces[f];
            faces[f] = [a, b, v];
            faces.push([b, c, v]);
            faces.push([c, a, v]);
            for w in [a, b, c] {
                g.add_edge(v, w).expect("fresh vertex");
            }
        }
        let mut by_edge: std::collections::HashMap<(usize, usize), Vec<usize>> = Default::default();
        for (i, f) in faces.iter().enumerate() {
            for k in 0..3 {
                by_edge.entry(key(f[k], f[(k + 1) % 3])).or_default().push(i);
            }
        }
        for _ in 0..n {
            let edges = g.edges();
            let (a, b) = edges[rng.gen_range(0..edges.len())];
            let fs = by_edge[&key(a, b)].clone();
            let (f1, f2) = (fs[0], fs[1]);
            let third = |f: [usize; 3]| f.into_iter().find(|&x| x != a && x != b).expect("triangle");
            let (c, d) = (third(faces[f1]), third(faces[f2]));
            if c == d || g.has_edge(c, d) {
                continue;
            }
            for f in [f1, f2] {
                let t = faces[f];
                for k in 0..3 {
                    by_edge.get_mut(&key(t[k], t[(k + 1) % 3])).expect("edge").retain(|&x| x != f);
                }
            }
            by_edge.remove(&key(a, b));
            g.remove_edge(a, b);
            g.add_edge(c, d).expect("flip");
            faces[f1] = [c, d, a];
            faces[f2] = [c, d, b];
            for f in [f1, f2] {
                let t = faces[f];
                for k in 0..3 {
                    by_edge.entry(key(t[k], t[(k + 1) % 3])).or_default().push(f);
                }
            }
        }
        g
    }
}
