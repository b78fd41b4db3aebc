//! Bit-packed GF(2) matrices: the two multiplication kernels, LSP
//! factorization, and affine solution spaces of linear systems.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treegss::f2la::{lsp_factorize, mat_mul_with, rank, solve_linear, BitMatrix, BitVector, MulKernel};

fn main() -> treegss::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [256, 1024] {
        let a = BitMatrix::random(n, n, &mut rng);
        let b = BitMatrix::random(n, n, &mut rng);
        let mut times = Vec::new();
        let mut products = Vec::new();
        for k in [MulKernel::Cubic, MulKernel::FourRussians] {
            let t = Instant::now();
            products.push(mat_mul_with(&a, &b, k)?);
            times.push(t.elapsed().as_secs_f64());
        }
        assert_eq!(products[0], products[1]);
        println!("{n}x{n} product: cubic {:.4}s, four russians {:.4}s", times[0], times[1]);
    }

    // a rank-deficient matrix: 40 random rows combined into 60
    let base = BitMatrix::random(40, 100, &mut rng);
    let mix = BitMatrix::random(60, 40, &mut rng);
    let m = mat_mul_with(&mix, &base, MulKernel::Cubic)?;
    let f = lsp_factorize(&m);
    assert_eq!(f.recompose(), m);
    println!("60x100 matrix of rank {} (LSP rank {})", rank(&m), f.rank);

    let x = BitVector::random(100, &mut rng);
    let d = m.mul_vec(&x)?;
    let space = solve_linear(&m, &d)?.expect("consistent by construction");
    println!("solutions of M x = d: affine space of dimension {}", space.dim());
    assert!(space.contains(&x));
    for _ in 0..3 {
        let y = space.sample_uniform(&mut rng);
        assert_eq!(m.mul_vec(&y)?, d);
    }
    let mut bad = d.clone();
    let outside = (0..60).find(|&i| {
        bad.flip(i);
        let consistent = solve_linear(&m, &bad).map(|s| s.is_some()).unwrap_or(true);
        if consistent {
            bad.flip(i);
        }
        !consistent
    });
    println!("flipping right-hand side bit {outside:?} makes the system inconsistent");
    Ok(())
}
