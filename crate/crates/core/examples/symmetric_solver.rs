//! Random solutions of `A x = b` over GF(2) for symmetric `A` with zero
//! diagonal, read as the adjacency matrix of a graph. Planar graphs go
//! through a separator decomposition.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treegss::f2la::{rank, BitVector};
use treegss::planar::{solve_planar_f2, solve_symmetric_f2, SymmetricSystem};
use treegss::treedecomp::Graph;

fn main() -> treegss::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    // path 0-1-2 in the text format
    let sys = SymmetricSystem::parse("3 3\n010\n101\n010\n", "010")?;
    for _ in 0..4 {
        let x = solve_planar_f2(&sys, &mut rng)?.expect("feasible");
        println!("path, b = 010: x = {}", x.to_string01());
    }
    let sys = SymmetricSystem::parse("3 3\n010\n101\n010\n", "100")?;
    println!("path, b = 100: {:?}", solve_planar_f2(&sys, &mut rng)?.map(|x| x.to_string01()));

    let g = Graph::grid(30, 30);
    let a = g.adjacency_matrix();
    let x0 = BitVector::random(g.n(), &mut rng);
    let sys = SymmetricSystem::new(a.clone(), a.mul_vec(&x0)?)?;
    let x = solve_planar_f2(&sys, &mut rng)?.expect("b is in the column space");
    println!(
        "30x30 grid: rank {} of {}, solution checks: {}",
        rank(&a),
        g.n(),
        sys.is_solution(&x)
    );

    // non-planar input falls back to the single-bag decomposition
    let k5 = SymmetricSystem::new(Graph::complete(5).adjacency_matrix(), BitVector::parse01("11000")?)?;
    println!("K5: planar solver says {:?}", solve_planar_f2(&k5, &mut rng).err());
    let x = solve_symmetric_f2(&k5, None, &mut rng)?;
    println!("K5: generic solver gives {:?}", x.map(|x| x.to_string01()));
    Ok(())
}
