//! Times the three grid samplers over a range of sides and fits log-log
//! slopes of runtime against the number of qubits. Pass sides as the first
//! argument, e.g. `16:256:*2`; naive
//! is skipped above side 128.

use treegss::harness::bench::{bench_grid, fit_slope, mean_seconds, parse_sides};
use treegss::planar::GridAlgo;

fn main() -> treegss::Result<()> {
    let sides = parse_sides(&std::env::args().nth(1).unwrap_or_else(|| "8:64:*2".into()))?;
    let rows = bench_grid(&sides, &GridAlgo::ALL, 2, 11);
    println!("{:>6} {:>12} {:>12} {:>12}", "side", "naive", "sweep", "recursive");
    for &s in &sides {
        let cell = |a| mean_seconds(&rows, a, s).map_or("-".to_string(), |t| format!("{t:.5}"));
        println!("{s:>6} {:>12} {:>12} {:>12}", cell(GridAlgo::Naive), cell(GridAlgo::Sweep), cell(GridAlgo::Recursive));
    }
    for a in GridAlgo::ALL {
        if let Some(slope) = fit_slope(&rows, a) {
            println!("{:>10}: time ~ n^{slope:.2}", a.name());
        }
    }
    let largest = *sides.last().expect("at least one side");
    for r in rows.iter().filter(|r| r.side == largest && r.trial == 0) {
        println!("side {largest}, {}: peak {} live qubits", r.algo, r.peak_live_qubits);
    }
    Ok(())
}
