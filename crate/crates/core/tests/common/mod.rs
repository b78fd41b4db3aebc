#![allow(dead_code)]

use num_complex::Complex64;
use treegss::harness::statevec::DenseState;
use treegss::tableau::{Gate, Pauli};

pub type Mat = Vec<Vec<Complex64>>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense matrix of `i^alpha (-1)^beta X^x Z^z` built from Kronecker factors.
pub fn pauli_dense(p: &Pauli) -> Mat {
    let n = p.num_qubits();
    let dim = 1usize << n;
    let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
    let mut phase = c(1.0, 0.0);
    if p.alpha {
        phase *= c(0.0, 1.0);
    }
    if p.beta {
        phase = -phase;
    }
    for col in 0..dim {
        // Z^z first, then X^x.
        let mut amp = phase;
        for q in p.z.ones_iter() {
            if (col >> q) & 1 == 1 {
                amp = -amp;
            }
        }
        let mut row = col;
        for q in p.x.ones_iter() {
            row ^= 1 << q;
        }
        m[row][col] = amp;
    }
    m
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn dagger(a: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn approx_eq(a: &Mat, b: &Mat) -> bool {
    a.iter().zip(b).all(|(r, s)| r.iter().zip(s).all(|(x, y)| (x - y).norm() < 1e-9))
}

/// Unitary of a gate list, assembled column by column from basis states.
pub fn unitary_of(n: usize, gates: &[Gate]) -> Mat {
    let dim = 1usize << n;
    let mut u = vec![vec![c(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        let mut amp = vec![c(0.0, 0.0); dim];
        amp[col] = c(1.0, 0.0);
        let mut s = DenseState::from_amplitudes(amp).unwrap();
        for &g in gates {
            s.apply_gate(g);
        }
        for (row, a) in s.amplitudes().iter().enumerate() {
            u[row][col] = *a;
        }
    }
    u
}

/// Total variation distance between two distributions on the same support.
pub fn tv(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

pub fn empirical(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    counts.iter().map(|&k| k as f64 / total.max(1) as f64).collect()
}

/// Decomposition from eliminating vertices in `order`: each bag is a vertex
/// plus its later neighbours in the filled graph.
pub fn elimination_td(g: &treegss::treedecomp::Graph, order: &[usize]) -> treegss::treedecomp::TreeDecomposition {
    let n = g.n();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut fill: Vec<std::collections::BTreeSet<usize>> =
        (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = vec![Vec::new(); n];
    let mut parent = vec![None; n];
    for &v in order {
        let later: Vec<usize> = fill[v].iter().copied().filter(|&w| pos[w] > pos[v]).collect();
        for &a in &later {
            for &b in &later {
                if a != b {
                    fill[a].insert(b);
                }
            }
        }
        parent[pos[v]] = later.iter().map(|&w| pos[w]).min();
        let mut bag = later;
        bag.push(v);
        bags[pos[v]] = bag;
    }
    // tie disconnected pieces to the last node
    let mut children = vec![Vec::new(); n];
    for i in 0..n.saturating_sub(1) {
        children[parent[i].unwrap_or(n - 1)].push(i);
    }
    treegss::treedecomp::TreeDecomposition::from_bags(bags, children, n - 1).unwrap()
}

/// Random elimination order for `g`, normalized to nice form.
pub fn random_nice_td<R: rand::Rng>(g: &treegss::treedecomp::Graph, rng: &mut R) -> treegss::treedecomp::TreeDecomposition {
    use rand::seq::SliceRandom;
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(rng);
    treegss::treedecomp::normalize(&elimination_td(g, &order)).unwrap()
}

/// The 20-vertex coarse-graining fixture: four 5-cliques `a, b, c, d` with
/// cross edges, and the 4-vertex target (`K4` minus `bc`). Group `i` is
/// vertices `5i..5i+5`.
pub fn coarse_fixture() -> (treegss::treedecomp::Graph, treegss::treedecomp::Graph) {
    // a1..a5, b1..b5, c1..c5, d1..d5 are 0..20; each group is a clique
    let mut fine = treegss::treedecomp::Graph::empty(20);
    for grp in 0..4 {
        for i in 0..5 {
            for j in i + 1..5 {
                fine.add_edge(5 * grp + i, 5 * grp + j).unwrap();
            }
        }
    }
    let (a, b, c, d) = (|i: usize| i - 1, |i: usize| 4 + i, |i: usize| 9 + i, |i: usize| 14 + i);
    let cross = [
        (a(5), b(4)),
        (a(2), b(3)),
        (a(5), d(3)),
        (a(5), c(2)),
        (a(4), c(3)),
        (c(2), d(3)),
        (c(5), d(4)),
        (b(1), d(1)),
        (b(5), d(2)),
        (b(4), d(3)),
    ];
    for (u, v) in cross {
        fine.add_edge(u, v).unwrap();
    }
    let coarse = treegss::treedecomp::Graph::from_edges(4, &[(0, 2), (2, 3), (3, 1), (1, 0), (0, 3)]).unwrap();
    (fine, coarse)
}

/// Random planar layout on `n` qubits: a triangulation with some edges dropped.
pub fn random_layout<R: rand::Rng>(n: usize, rng: &mut R) -> treegss::treedecomp::Graph {
    use treegss::treedecomp::Graph;
    if n < 3 {
        return Graph::path(n);
    }
    let full = Graph::random_triangulation(n, rng);
    let kept: Vec<(usize, usize)> = full.edges().into_iter().filter(|_| rng.gen_bool(0.7)).collect();
    Graph::from_edges(n, &kept).unwrap()
}
