//! Planar separators with `|A|, |B| ≤ 2n/3` and `|S| ≤ 2√2·√n`.
//!
//! The general route follows Lipton and Tarjan: BFS levels give two thin
//! levels bracketing the median; if the band between them is still too heavy
//! the levels below the band are contracted to one root, the band is
//! triangulated, and a fundamental cycle of the BFS tree splits it. Grids in
//! row-major labelling take a closed-form middle row or column instead.

use std::collections::VecDeque;

use super::planarity::planar_embedding;
use super::Graph;
use crate::error::{Error, Result};

/// Balance constant: both sides hold at most `ALPHA · n` vertices.
pub const ALPHA: f64 = 2.0 / 3.0;
/// Size constant: the separator holds at most `BETA · √n` vertices.
pub const BETA: f64 = 2.0 * std::f64::consts::SQRT_2;

/// Partition `V = A ∪ S ∪ B` with no edge between `A` and `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub a: Vec<usize>,
    pub s: Vec<usize>,
    pub b: Vec<usize>,
}

impl Separation {
    /// Lists every violated invariant for `g`.
    pub fn violations(&self, g: &Graph) -> Vec<String> {
        let n = g.n();
        let mut out = Vec::new();
        let mut side = vec![0u8; n];
        for (tag, set) in [(1u8, &self.a), (2, &self.s), (3, &self.b)] {
            for &v in set {
                if v >= n {
                    out.push(format!("vertex {v} out of range"));
                } else if side[v] != 0 {
                    out.push(format!("vertex {v} in two parts"));
                } else {
                    side[v] = tag;
                }
            }
        }
        if let Some(v) = side.iter().position(|&t| t == 0) {
            out.push(format!("vertex {v} in no part"));
        }
        if let Some((u, v)) = g.edges().into_iter().find(|&(u, v)| side[u] ^ side[v] == 2 && side[u] != 2) {
            out.push(format!("edge {{{u},{v}}} joins A and B"));
        }
        let bound = ALPHA * n as f64 + 1e-9;
        if self.a.len() as f64 > bound || self.b.len() as f64 > bound {
            out.push(format!("parts {} and {} exceed 2n/3 for n = {n}", self.a.len(), self.b.len()));
        }
        if self.s.len() as f64 > BETA * (n as f64).sqrt() + 1e-9 {
            out.push(format!("separator of size {} exceeds 2√2·√n for n = {n}", self.s.len()));
        }
        out
    }
}

/// `(rows, cols)` when `g` is exactly the row-major grid graph of that shape.
pub fn grid_shape(g: &Graph) -> Option<(usize, usize)> {
    let n = g.n();
    if n == 0 {
        return None;
    }
    let nb = g.neighbors(0);
    let cols = match nb {
        [] => 1,
        [1] => {
            if g.num_edges() == n - 1 && (1..n).all(|v| g.has_edge(v - 1, v)) {
                return Some((1, n));
            }
            1
        }
        [1, c] => *c,
        _ => return None,
    };
    if cols == 0 || n % cols != 0 {
        return None;
    }
    let rows = n / cols;
    if g.num_edges() != rows * (cols - 1) + cols * (rows - 1) {
        return None;
    }
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if (c + 1 < cols && !g.has_edge(v, v + 1)) || (r + 1 < rows && !g.has_edge(v, v + cols)) {
                return None;
            }
        }
    }
    Some((rows, cols))
}

/// Middle column (or row, for tall grids) of a row-major grid.
pub fn grid_separator(rows: usize, cols: usize) -> Separation {
    let (mut a, mut s, mut b) = (Vec::new(), Vec::new(), Vec::new());
    if cols >= rows {
        let mid = cols / 2;
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                match c.cmp(&mid) {
                    std::cmp::Ordering::Less => a.push(v),
                    std::cmp::Ordering::Equal => s.push(v),
                    std::cmp::Ordering::Greater => b.push(v),
                }
            }
        }
    } else {
        let mid = rows / 2;
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                match r.cmp(&mid) {
                    std::cmp::Ordering::Less => a.push(v),
                    std::cmp::Ordering::Equal => s.push(v),
                    std::cmp::Ordering::Greater => b.push(v),
                }
            }
        }
    }
    Separation { a, s, b }
}

/// Separator of a planar graph; grids take the closed-form fast path.
pub fn planar_separator(g: &Graph) -> Result<Separation> {
    if let Some((r, c)) = grid_shape(g) {
        return Ok(grid_separator(r, c));
    }
    lipton_tarjan(g)
}

/// Lipton–Tarjan separator without the grid fast path.
pub fn lipton_tarjan(g: &Graph) -> Result<Separation> {
    let n = g.n();
    if planar_embedding(g).is_none() {
        return Err(Error::NotPlanar);
    }
    let comps = g.components();
    let big = comps.iter().position(|c| 3 * c.len() > 2 * n);
    let (sep, mut pieces): (Vec<usize>, Vec<Vec<usize>>) = match big {
        None => (Vec::new(), comps),
        Some(i) => {
            let comp = &comps[i];
            let sub = g.induced(comp);
            let (s, p) = separate_connected(&sub)?;
            let mut pieces: Vec<Vec<usize>> =
                p.into_iter().map(|piece| piece.into_iter().map(|v| comp[v]).collect()).collect();
            pieces.extend(comps.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c.clone()));
            (s.into_iter().map(|v| comp[v]).collect(), pieces)
        }
    };
    pieces.retain(|p| !p.is_empty());
    let (a, b) = split_pieces(n, pieces);
    Ok(trim(g, Separation { a, s: sep, b }))
}

/// Splits pieces, each of size at most `2n/3`, into two groups of size at
/// most `2n/3` each.
fn split_pieces(n: usize, mut pieces: Vec<Vec<usize>>) -> (Vec<usize>, Vec<usize>) {
    pieces.sort_by_key(|p| std::cmp::Reverse(p.len()));
    let (mut a, mut b) = (Vec::new(), Vec::new());
    let mut iter = pieces.into_iter();
    if let Some(first) = iter.next() {
        let first_big = 3 * first.len() > n;
        a.extend(first);
        for p in iter {
            if first_big || 3 * a.len() >= n {
                b.extend(p);
            } else {
                a.extend(p);
            }
        }
    }
    a.sort_unstable();
    b.sort_unstable();
    (a, b)
}

/// Moves separator vertices with no neighbor on one side into that side while
/// the balance bound allows it.
fn trim(g: &Graph, sep: Separation) -> Separation {
    let n = g.n();
    let limit = (2 * n) / 3;
    let mut side = vec![0u8; n];
    sep.a.iter().for_each(|&v| side[v] = 1);
    sep.b.iter().for_each(|&v| side[v] = 3);
    sep.s.iter().for_each(|&v| side[v] = 2);
    let (mut na, mut nb) = (sep.a.len(), sep.b.len());
    let mut keep = Vec::new();
    for &v in &sep.s {
        let touches_a = g.neighbors(v).iter().any(|&w| side[w] == 1);
        let touches_b = g.neighbors(v).iter().any(|&w| side[w] == 3);
        if !touches_b && na < limit && (na <= nb || touches_a) {
            side[v] = 1;
            na += 1;
        } else if !touches_a && nb < limit {
            side[v] = 3;
            nb += 1;
        } else if !touches_b && na < limit {
            side[v] = 1;
            na += 1;
        } else {
            keep.push(v);
        }
    }
    let pick = |t: u8| (0..n).filter(|&v| side[v] == t).collect::<Vec<_>>();
    Separation { a: pick(1), s: keep, b: pick(3) }
}

/// Separator and mutually non-adjacent pieces of a connected planar graph.
fn separate_connected(g: &Graph) -> Result<(Vec<usize>, Vec<Vec<usize>>)> {
    let n = g.n();
    if (n as f64) <= BETA * (n as f64).sqrt() {
        return Ok(((0..n).collect(), Vec::new()));
    }
    let level = g.bfs(0);
    let depth = level.iter().copied().max().unwrap_or(0);
    let mut count = vec![0usize; depth + 1];
    for &l in &level {
        count[l] += 1;
    }
    let size = |l: i64| -> usize {
        if l < 0 || l as usize > depth {
            0
        } else {
            count[l as usize]
        }
    };
    // median level: fewer than n/2 vertices strictly below, at least n/2 up to it
    let mut cum = 0;
    let mut l1 = 0;
    for (l, &c) in count.iter().enumerate() {
        cum += c;
        if 2 * cum >= n {
            l1 = l;
            break;
        }
    }
    let k = cum;
    let l1 = l1 as i64;
    let rk = (k as f64).sqrt();
    let rnk = ((n - k) as f64).sqrt();
    let l0 = (l1 - rk.floor() as i64 - 1..=l1)
        .filter(|&l| size(l) as f64 + 2.0 * (l1 - l) as f64 <= 2.0 * rk + 1e-9)
        .min_by_key(|&l| (size(l) + 2 * (l1 - l) as usize, -l))
        .expect("a thin level below the median exists");
    let l2 = (l1 + 1..=l1 + 2 + rnk.floor() as i64)
        .filter(|&l| size(l) as f64 + 2.0 * (l - l1 - 1) as f64 <= 2.0 * rnk + 1e-9)
        .min_by_key(|&l| (size(l) + 2 * (l - l1 - 1) as usize, l))
        .expect("a thin level above the median exists");

    let lv = |v: usize| level[v] as i64;
    let mut sep: Vec<usize> = (0..n).filter(|&v| lv(v) == l0 || lv(v) == l2).collect();
    let below: Vec<usize> = (0..n).filter(|&v| lv(v) < l0).collect();
    let middle: Vec<usize> = (0..n).filter(|&v| lv(v) > l0 && lv(v) < l2).collect();
    let above: Vec<usize> = (0..n).filter(|&v| lv(v) > l2).collect();
    if 3 * middle.len() <= 2 * n {
        return Ok((sep, vec![below, middle, above]));
    }

    // band graph: contracted root (when levels ≤ l0 exist) plus the middle levels
    let contracted = l0 >= 0;
    let offset = usize::from(contracted);
    let mut index = vec![usize::MAX; n];
    for (i, &v) in middle.iter().enumerate() {
        index[v] = i + offset;
    }
    let hn = middle.len() + offset;
    let mut h = Graph::empty(hn);
    for &v in &middle {
        for &w in g.neighbors(v) {
            if index[w] != usize::MAX && index[v] < index[w] {
                h.add_edge(index[v], index[w])?;
            } else if contracted && lv(w) == l0 {
                h.add_edge(0, index[v])?;
            }
        }
    }
    let root = if contracted { 0 } else { index[0] };
    let weight: Vec<bool> = (0..hn).map(|i| !(contracted && i == 0)).collect();
    let (cycle, inside) = cycle_separator(&h, root, &weight)?;
    let mut on_cycle = vec![false; hn];
    cycle.iter().for_each(|&x| on_cycle[x] = true);
    let mut is_inside = vec![false; hn];
    inside.iter().for_each(|&x| is_inside[x] = true);
    let (mut pin, mut pout) = (Vec::new(), Vec::new());
    for &v in &middle {
        let x = index[v];
        if on_cycle[x] {
            sep.push(v);
        } else if is_inside[x] {
            pin.push(v);
        } else {
            pout.push(v);
        }
    }
    Ok((sep, vec![below, above, pin, pout]))
}

/// Half-edge map of a plane multigraph. `next[h]` is the half-edge after `h`
/// clockwise around its tail; faces follow `h ↦ next[twin(h)]`.
struct Plane {
    tail: Vec<usize>,
    next: Vec<usize>,
    first: Vec<usize>,
}

impl Plane {
    fn head(&self, h: usize) -> usize {
        self.tail[h ^ 1]
    }

    fn face_next(&self, h: usize) -> usize {
        self.next[h ^ 1]
    }

    fn n(&self) -> usize {
        self.first.len()
    }

    fn from_graph(g: &Graph) -> Result<Self> {
        let emb = planar_embedding(g).ok_or(Error::NotPlanar)?;
        let n = g.n();
        let mut tail = Vec::with_capacity(2 * g.num_edges());
        let mut id = std::collections::HashMap::with_capacity(2 * g.num_edges());
        for (u, v) in g.edges() {
            id.insert((u, v), tail.len());
            tail.push(u);
            id.insert((v, u), tail.len());
            tail.push(v);
        }
        let mut next = vec![usize::MAX; tail.len()];
        let mut first = vec![usize::MAX; n];
        for v in 0..n {
            let r = emb.rotation(v);
            for (i, &w) in r.iter().enumerate() {
                let h = id[&(v, w)];
                next[h] = id[&(v, r[(i + 1) % r.len()])];
                if i == 0 {
                    first[v] = h;
                }
            }
        }
        Ok(Self { tail, next, first })
    }

    /// Face orbits as lists of half-edges.
    fn faces(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let mut face_of = vec![usize::MAX; self.tail.len()];
        let mut faces = Vec::new();
        for h0 in 0..self.tail.len() {
            if face_of[h0] != usize::MAX {
                continue;
            }
            let f = faces.len();
            let mut walk = Vec::new();
            let mut h = h0;
            while face_of[h] == usize::MAX {
                face_of[h] = f;
                walk.push(h);
                h = self.face_next(h);
            }
            faces.push(walk);
        }
        (faces, face_of)
    }

    /// Stars every face longer than three with a new vertex; returns the
    /// half-edges from each new vertex back to its face.
    fn triangulate(&mut self) -> Vec<Vec<usize>> {
        let (faces, _) = self.faces();
        let mut added = Vec::new();
        for walk in faces {
            if walk.len() <= 3 {
                continue;
            }
            let d = self.first.len();
            self.first.push(usize::MAX);
            let k = walk.len();
            let base = self.tail.len();
            // half-edge base + 2i: v_i → d, base + 2i + 1: d → v_i
            for &h in &walk {
                self.tail.push(self.tail[h]);
                self.tail.push(d);
                self.next.push(usize::MAX);
                self.next.push(usize::MAX);
            }
            for i in 0..k {
                let hi = walk[i];
                let prev_twin = walk[(i + k - 1) % k] ^ 1;
                let e = base + 2 * i;
                // around v_i: twin(h_{i-1}) → e → h_i
                debug_assert_eq!(self.next[prev_twin], hi);
                self.next[prev_twin] = e;
                self.next[e] = hi;
                // around d: (d → v_{i+1}) → (d → v_i)
                let out_next = base + 2 * ((i + 1) % k) + 1;
                self.next[out_next] = e + 1;
            }
            self.first[d] = base + 1;
            added.push((0..k).map(|i| base + 2 * i + 1).collect());
        }
        added
    }
}

/// Fundamental-cycle separator of a connected plane graph.
///
/// `root` is the BFS root and `weight[v]` marks vertices that count toward the
/// balance. Returns the cycle vertices and the strictly-inside vertices; the
/// inside and outside weights are each at most two thirds of the total when
/// the total is at least three.
fn cycle_separator(h: &Graph, root: usize, weight: &[bool]) -> Result<(Vec<usize>, Vec<usize>)> {
    let hn = h.n();
    if hn <= 2 {
        return Ok(((0..hn).collect(), Vec::new()));
    }
    let mut pl = Plane::from_graph(h)?;
    // BFS tree on the original graph
    let mut parent_h = vec![usize::MAX; hn];
    let mut depth = vec![usize::MAX; hn];
    depth[root] = 0;
    let mut q = VecDeque::from([root]);
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); hn];
    for (hidx, &t) in pl.tail.iter().enumerate() {
        out_edges[t].push(hidx);
    }
    while let Some(v) = q.pop_front() {
        for &he in &out_edges[v] {
            let w = pl.head(he);
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent_h[w] = he;
                q.push_back(w);
            }
        }
    }
    let added = pl.triangulate();
    let total = pl.n();
    let mut is_real = vec![true; total];
    depth.resize(total, usize::MAX);
    parent_h.resize(total, usize::MAX);
    let mut w = weight.to_vec();
    w.resize(total, false);
    for (i, outs) in added.iter().enumerate() {
        let d = hn + i;
        is_real[d] = false;
        // attach to the shallowest face vertex
        let &best = outs.iter().min_by_key(|&&he| depth[pl.head(he)]).expect("face has vertices");
        parent_h[d] = best ^ 1; // half-edge from the face vertex to d
        depth[d] = depth[pl.head(best)] + 1;
    }
    let mut tree_edge = vec![false; pl.tail.len() / 2];
    for v in 0..total {
        if parent_h[v] != usize::MAX {
            tree_edge[parent_h[v] / 2] = true;
        }
    }
    let (faces, face_of) = pl.faces();
    let nf = faces.len();
    // dual tree over non-tree edges, rooted at a face on the root vertex
    let f0 = face_of[pl.first[root]];
    let mut dual_adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nf];
    for e in 0..tree_edge.len() {
        if !tree_edge[e] {
            let (a, b) = (face_of[2 * e], face_of[2 * e + 1]);
            dual_adj[a].push((b, e));
            dual_adj[b].push((a, e));
        }
    }
    let mut dual_parent_edge = vec![usize::MAX; nf];
    let mut tin = vec![usize::MAX; nf];
    let mut tout = vec![0usize; nf];
    let mut order = Vec::with_capacity(nf);
    let mut stack = vec![(f0, 0usize)];
    tin[f0] = 0;
    order.push(f0);
    let mut clock = 1;
    while let Some(&(f, i)) = stack.last() {
        if i < dual_adj[f].len() {
            let (g2, e) = dual_adj[f][i];
            stack.last_mut().expect("nonempty").1 += 1;
            if tin[g2] == usize::MAX {
                tin[g2] = clock;
                clock += 1;
                dual_parent_edge[g2] = e;
                order.push(g2);
                stack.push((g2, 0));
            }
        } else {
            tout[f] = clock;
            stack.pop();
        }
    }
    debug_assert_eq!(order.len(), nf, "non-tree edges span the dual");
    let mut sub_faces = vec![1usize; nf];
    let mut sub_zero = vec![0usize; nf];
    // zero-weight vertices other than the root, counted at a representative face
    let mut rep = vec![usize::MAX; total];
    for v in 0..total {
        if pl.first[v] != usize::MAX {
            rep[v] = face_of[pl.first[v]];
            if !w[v] && v != root {
                sub_zero[rep[v]] += 1;
            }
        }
    }
    for &f in order.iter().rev() {
        let e = dual_parent_edge[f];
        if e != usize::MAX {
            let (a, b) = (face_of[2 * e], face_of[2 * e + 1]);
            let p = if a == f { b } else { a };
            sub_faces[p] += sub_faces[f];
            sub_zero[p] += sub_zero[f];
        }
    }
    let w_total = w.iter().filter(|&&x| x).count();
    let path = |a: usize, b: usize| -> Vec<usize> {
        let (mut x, mut y) = (a, b);
        let (mut left, mut right) = (vec![x], vec![y]);
        while x != y {
            if depth[x] >= depth[y] {
                x = pl.tail[parent_h[x]];
                left.push(x);
            } else {
                y = pl.tail[parent_h[y]];
                right.push(y);
            }
        }
        right.pop();
        left.extend(right.into_iter().rev());
        left
    };
    let inside_sub = |f: usize, g2: usize| tin[f] <= tin[g2] && tin[g2] < tout[f];
    let mut best: Option<(usize, usize, usize)> = None; // (score, edge, child face)
    for f in 0..nf {
        let e = dual_parent_edge[f];
        if e == usize::MAX {
            continue;
        }
        let cyc = path(pl.tail[2 * e], pl.tail[2 * e + 1]);
        let c = cyc.len();
        let fcount = sub_faces[f];
        debug_assert!(fcount + 2 >= c && (fcount + 2 - c) % 2 == 0);
        let interior = (fcount + 2).saturating_sub(c) / 2;
        let mut zero_in = sub_zero[f];
        for &v in &cyc {
            if !w[v] && v != root && inside_sub(f, rep[v]) {
                zero_in -= 1;
            }
        }
        let inside_w = interior - zero_in;
        let cyc_w = cyc.iter().filter(|&&v| w[v]).count();
        let outside_w = w_total - inside_w - cyc_w;
        let score = inside_w.max(outside_w);
        if best.map_or(true, |b| score < b.0) {
            best = Some((score, e, f));
        }
    }
    let (_, e, f) = best.expect("triangulated graph has a non-tree edge");
    let cyc = path(pl.tail[2 * e], pl.tail[2 * e + 1]);
    let mut on_cycle = vec![false; total];
    cyc.iter().for_each(|&v| on_cycle[v] = true);
    let mut inside = vec![false; total];
    for (fi, walk) in faces.iter().enumerate() {
        if inside_sub(f, fi) {
            for &he in walk {
                let v = pl.tail[he];
                if !on_cycle[v] {
                    inside[v] = true;
                }
            }
        }
    }
    let cycle: Vec<usize> = cyc.into_iter().filter(|&v| is_real[v]).collect();
    let ins: Vec<usize> = (0..hn).filter(|&v| inside[v]).collect();
    Ok((cycle, ins))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_detection() {
        assert_eq!(grid_shape(&Graph::grid(3, 5)), Some((3, 5)));
        assert_eq!(grid_shape(&Graph::path(6)), Some((1, 6)));
        assert_eq!(grid_shape(&Graph::cycle(6)), None);
        assert_eq!(grid_shape(&Graph::empty(1)), Some((1, 1)));
    }

    #[test]
    fn path_middle_vertex() {
        let sep = planar_separator(&Graph::path(11)).unwrap();
        assert_eq!(sep.s, vec![5]);
        assert!(sep.violations(&Graph::path(11)).is_empty());
    }

    #[test]
    fn lt_on_grids_and_cycles() {
        for g in [Graph::grid(12, 12), Graph::grid(3, 40), Graph::cycle(50), Graph::path(40), Graph::star(30)] {
            let sep = lipton_tarjan(&g).unwrap();
            assert!(sep.violations(&g).is_empty(), "{:?}", sep.violations(&g));
        }
    }

    #[test]
    fn nonplanar_rejected() {
        let mut g = Graph::complete(5);
        for _ in 0..20 {
            let v = g.add_vertex();
            g.add_edge(v - 1, v).unwrap();
        }
        assert!(matches!(lipton_tarjan(&g), Err(Error::NotPlanar)));
    }
}
