//! Left-right planarity test producing a combinatorial embedding.
//!
//! Iterative formulation of the Brandes left-right algorithm: a DFS
//! orientation computes lowpoints and a nesting order, a second DFS checks the
//! LR-partition constraints with a stack of conflict pairs, and a third DFS
//! places back edges on the side chosen by the partition.

use std::collections::HashMap;

use super::Graph;

const NONE: usize = usize::MAX;

/// Rotation system: `rotation(v)` lists the neighbors of `v` in clockwise order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    rot: Vec<Vec<usize>>,
}

impl Embedding {
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    pub fn n(&self) -> usize {
        self.rot.len()
    }

    /// Faces as cyclic vertex walks. The walk after directed edge `u → v`
    /// continues along `v → w` where `w` follows `u` clockwise around `v`.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut pos: HashMap<(usize, usize), usize> = HashMap::new();
        for (v, r) in self.rot.iter().enumerate() {
            for (i, &w) in r.iter().enumerate() {
                pos.insert((v, w), i);
            }
        }
        let mut seen: HashMap<(usize, usize), bool> = HashMap::new();
        let mut faces = Vec::new();
        for (u, r) in self.rot.iter().enumerate() {
            for &v in r {
                if seen.contains_key(&(u, v)) {
                    continue;
                }
                let mut face = Vec::new();
                let (mut a, mut b) = (u, v);
                while !seen.contains_key(&(a, b)) {
                    seen.insert((a, b), true);
                    face.push(a);
                    let rb = &self.rot[b];
                    let w = rb[(pos[&(b, a)] + 1) % rb.len()];
                    a = b;
                    b = w;
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Checks that the rotation system matches `g` and satisfies Euler's
    /// formula on every component.
    pub fn is_planar_embedding_of(&self, g: &Graph) -> bool {
        if self.rot.len() != g.n() {
            return false;
        }
        for v in 0..g.n() {
            let mut r = self.rot[v].clone();
            r.sort_unstable();
            if r != g.neighbors(v) {
                return false;
            }
        }
        let comps = g.components();
        let isolated = comps.iter().filter(|c| c.len() == 1).count() as i64;
        let f = self.faces().len() as i64;
        g.n() as i64 - g.num_edges() as i64 + f == 2 * comps.len() as i64 - isolated
    }
}

#[derive(Clone, Copy, Default)]
struct Interval {
    low: usize,
    high: usize,
}

impl Interval {
    fn none() -> Self {
        Self { low: NONE, high: NONE }
    }

    fn empty(&self) -> bool {
        self.low == NONE && self.high == NONE
    }
}

#[derive(Clone, Copy)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn none() -> Self {
        Self { left: Interval::none(), right: Interval::none() }
    }

    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct Lr<'a> {
    g: &'a Graph,
    // undirected edge ids per vertex: (neighbor, edge)
    adj: Vec<Vec<(usize, usize)>>,
    src: Vec<usize>,
    dst: Vec<usize>,
    oriented: Vec<bool>,
    out: Vec<Vec<usize>>,
    height: Vec<usize>,
    parent_edge: Vec<usize>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting: Vec<i64>,
    refe: Vec<usize>,
    side: Vec<i8>,
    stack_bottom: Vec<usize>,
    lowpt_edge: Vec<usize>,
    s: Vec<ConflictPair>,
    roots: Vec<usize>,
}

/// Half-edge rotation under construction: `(v, w) → (cw, ccw)` neighbors.
struct Rotation {
    links: HashMap<(usize, usize), (usize, usize)>,
    first: Vec<usize>,
}

impl Rotation {
    fn add_cw(&mut self, start: usize, end: usize, reference: usize) {
        if reference == NONE {
            self.links.insert((start, end), (end, end));
            self.first[start] = end;
            return;
        }
        let cw_ref = self.links[&(start, reference)].0;
        self.links.insert((start, end), (cw_ref, reference));
        self.links.get_mut(&(start, reference)).expect("reference edge").0 = end;
        self.links.get_mut(&(start, cw_ref)).expect("cw edge").1 = end;
    }

    fn add_ccw(&mut self, start: usize, end: usize, reference: usize) {
        if reference == NONE {
            self.add_cw(start, end, NONE);
            return;
        }
        let ccw_ref = self.links[&(start, reference)].1;
        self.add_cw(start, end, ccw_ref);
        if self.first[start] == reference {
            self.first[start] = end;
        }
    }

    fn add_first(&mut self, start: usize, end: usize) {
        let r = self.first[start];
        self.add_ccw(start, end, r);
    }
}

impl<'a> Lr<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.n();
        let mut adj = vec![Vec::new(); n];
        let mut m = 0;
        for (u, v) in g.edges() {
            adj[u].push((v, m));
            adj[v].push((u, m));
            m += 1;
        }
        Self {
            g,
            adj,
            src: vec![NONE; m],
            dst: vec![NONE; m],
            oriented: vec![false; m],
            out: vec![Vec::new(); n],
            height: vec![NONE; n],
            parent_edge: vec![NONE; n],
            lowpt: vec![0; m],
            lowpt2: vec![0; m],
            nesting: vec![0; m],
            refe: vec![NONE; m],
            side: vec![1; m],
            stack_bottom: vec![0; m],
            lowpt_edge: vec![NONE; m],
            s: Vec::new(),
            roots: Vec::new(),
        }
    }

    fn run(mut self) -> Option<Embedding> {
        let n = self.g.n();
        let m = self.src.len();
        if n > 2 && m > 3 * n - 6 {
            return None;
        }
        for v in 0..n {
            if self.height[v] == NONE {
                self.height[v] = 0;
                self.roots.push(v);
                self.orient(v);
            }
        }
        for v in 0..n {
            let mut o = std::mem::take(&mut self.out[v]);
            o.sort_by_key(|&e| self.nesting[e]);
            self.out[v] = o;
        }
        for i in 0..self.roots.len() {
            if !self.test(self.roots[i]) {
                return None;
            }
        }
        for e in 0..m {
            self.nesting[e] *= self.sign(e) as i64;
        }
        let mut rot = Rotation { links: HashMap::with_capacity(2 * m), first: vec![NONE; n] };
        for v in 0..n {
            let mut o = std::mem::take(&mut self.out[v]);
            o.sort_by_key(|&e| self.nesting[e]);
            let mut prev = NONE;
            for &e in &o {
                rot.add_cw(v, self.dst[e], prev);
                prev = self.dst[e];
            }
            self.out[v] = o;
        }
        let mut left_ref = vec![NONE; n];
        let mut right_ref = vec![NONE; n];
        let mut ind = vec![0usize; n];
        for i in 0..self.roots.len() {
            let mut stack = vec![self.roots[i]];
            while let Some(v) = stack.pop() {
                while ind[v] < self.out[v].len() {
                    let ei = self.out[v][ind[v]];
                    ind[v] += 1;
                    let w = self.dst[ei];
                    if ei == self.parent_edge[w] {
                        rot.add_first(w, v);
                        left_ref[v] = w;
                        right_ref[v] = w;
                        stack.push(v);
                        stack.push(w);
                        break;
                    } else if self.side[ei] == 1 {
                        rot.add_cw(w, v, right_ref[w]);
                    } else {
                        rot.add_ccw(w, v, left_ref[w]);
                        left_ref[w] = v;
                    }
                }
            }
        }
        let mut out = vec![Vec::new(); n];
        for (v, r) in out.iter_mut().enumerate() {
            let f = rot.first[v];
            if f == NONE {
                continue;
            }
            let mut w = f;
            loop {
                r.push(w);
                w = rot.links[&(v, w)].0;
                if w == f {
                    break;
                }
            }
        }
        Some(Embedding { rot: out })
    }

    fn orient(&mut self, root: usize) {
        let n = self.g.n();
        let mut ind = vec![0usize; n];
        let mut skip_init = vec![false; self.src.len()];
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            let e = self.parent_edge[v];
            while ind[v] < self.adj[v].len() {
                let (w, id) = self.adj[v][ind[v]];
                if !skip_init[id] {
                    if self.oriented[id] {
                        ind[v] += 1;
                        continue;
                    }
                    self.oriented[id] = true;
                    self.src[id] = v;
                    self.dst[id] = w;
                    self.out[v].push(id);
                    self.lowpt[id] = self.height[v];
                    self.lowpt2[id] = self.height[v];
                    if self.height[w] == NONE {
                        self.parent_edge[w] = id;
                        self.height[w] = self.height[v] + 1;
                        stack.push(v);
                        stack.push(w);
                        skip_init[id] = true;
                        break;
                    }
                    self.lowpt[id] = self.height[w];
                }
                self.nesting[id] = 2 * self.lowpt[id] as i64;
                if self.lowpt2[id] < self.height[v] {
                    self.nesting[id] += 1;
                }
                if e != NONE {
                    if self.lowpt[id] < self.lowpt[e] {
                        self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[id]);
                        self.lowpt[e] = self.lowpt[id];
                    } else if self.lowpt[id] > self.lowpt[e] {
                        self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[id]);
                    } else {
                        self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[id]);
                    }
                }
                ind[v] += 1;
            }
        }
    }

    fn conflicting(&self, i: &Interval, b: usize) -> bool {
        !i.empty() && self.lowpt[i.high] > self.lowpt[b]
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        if p.left.empty() {
            return self.lowpt[p.right.low];
        }
        if p.right.empty() {
            return self.lowpt[p.left.low];
        }
        self.lowpt[p.left.low].min(self.lowpt[p.right.low])
    }

    fn set_ref(&mut self, e: usize, r: usize) {
        if e != NONE {
            self.refe[e] = r;
        }
    }

    fn test(&mut self, root: usize) -> bool {
        let n = self.g.n();
        let mut ind = vec![0usize; n];
        let mut skip_init = vec![false; self.src.len()];
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            let e = self.parent_edge[v];
            let mut skip_final = false;
            while ind[v] < self.out[v].len() {
                let ei = self.out[v][ind[v]];
                let w = self.dst[ei];
                if !skip_init[ei] {
                    self.stack_bottom[ei] = self.s.len();
                    if ei == self.parent_edge[w] {
                        stack.push(v);
                        stack.push(w);
                        skip_init[ei] = true;
                        skip_final = true;
                        break;
                    }
                    self.lowpt_edge[ei] = ei;
                    self.s.push(ConflictPair { left: Interval::none(), right: Interval { low: ei, high: ei } });
                }
                if self.lowpt[ei] < self.height[v] {
                    if ei == self.out[v][0] {
                        self.lowpt_edge[e] = self.lowpt_edge[ei];
                    } else if !self.add_constraints(ei, e) {
                        return false;
                    }
                }
                ind[v] += 1;
            }
            if !skip_final && e != NONE {
                self.remove_back_edges(e);
            }
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair::none();
        loop {
            let mut q = self.s.pop().expect("return edge on stack");
            if !q.left.empty() {
                q.swap();
            }
            if !q.left.empty() {
                return false;
            }
            if self.lowpt[q.right.low] > self.lowpt[e] {
                if p.right.empty() {
                    p.right = q.right;
                } else {
                    self.set_ref(p.right.low, q.right.high);
                }
                p.right.low = q.right.low;
            } else {
                self.set_ref(q.right.low, self.lowpt_edge[e]);
            }
            if self.s.len() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(top) = self.s.last().copied() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.s.pop().expect("nonempty");
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            self.set_ref(p.right.low, q.right.high);
            if q.right.low != NONE {
                p.right.low = q.right.low;
            }
            if p.left.empty() {
                p.left = q.left;
            } else {
                self.set_ref(p.left.low, q.left.high);
            }
            p.left.low = q.left.low;
        }
        if !(p.left.empty() && p.right.empty()) {
            self.s.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.src[e];
        while let Some(top) = self.s.last().copied() {
            if self.lowest(&top) != self.height[u] {
                break;
            }
            let p = self.s.pop().expect("nonempty");
            if p.left.low != NONE {
                self.side[p.left.low] = -1;
            }
        }
        if let Some(mut p) = self.s.pop() {
            while p.left.high != NONE && self.dst[p.left.high] == u {
                p.left.high = self.refe[p.left.high];
            }
            if p.left.high == NONE && p.left.low != NONE {
                self.refe[p.left.low] = p.right.low;
                self.side[p.left.low] = -1;
                p.left.low = NONE;
            }
            while p.right.high != NONE && self.dst[p.right.high] == u {
                p.right.high = self.refe[p.right.high];
            }
            if p.right.high == NONE && p.right.low != NONE {
                self.refe[p.right.low] = p.left.low;
                self.side[p.right.low] = -1;
                p.right.low = NONE;
            }
            self.s.push(p);
        }
        if self.lowpt[e] < self.height[u] {
            let top = *self.s.last().expect("return edge pending");
            let (hl, hr) = (top.left.high, top.right.high);
            self.refe[e] = if hl != NONE && (hr == NONE || self.lowpt[hl] > self.lowpt[hr]) { hl } else { hr };
        }
    }

    /// Resolves relative sides along reference chains into absolute sides.
    fn sign(&mut self, e0: usize) -> i8 {
        let mut stack = vec![e0];
        let mut old: HashMap<usize, usize> = HashMap::new();
        while let Some(e) = stack.pop() {
            let r = self.refe[e];
            if r != NONE {
                stack.push(e);
                stack.push(r);
                old.insert(e, r);
                self.refe[e] = NONE;
            } else if let Some(&r) = old.get(&e) {
                self.side[e] *= self.side[r];
            }
        }
        self.side[e0]
    }
}

/// Planar embedding of `g`, or `None` when `g` is not planar.
pub fn planar_embedding(g: &Graph) -> Option<Embedding> {
    Lr::new(g).run()
}

pub fn is_planar(g: &Graph) -> bool {
    planar_embedding(g).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert!(is_planar(&Graph::complete(4)));
        assert!(!is_planar(&Graph::complete(5)));
        let k33 = Graph::from_edges(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]).unwrap();
        assert!(!is_planar(&k33));
        for g in [Graph::complete(4), Graph::grid(5, 7), Graph::cycle(9), Graph::empty(3), Graph::star(6)] {
            let emb = planar_embedding(&g).unwrap();
            assert!(emb.is_planar_embedding_of(&g));
        }
    }
}
