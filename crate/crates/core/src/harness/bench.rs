//! Timing runs of the grid samplers.
//!
//! CSV columns, in order: `algo,side,trial,seconds,peak_live_qubits`. Rows
//! are sorted by side, then trial, then algorithm in [`GridAlgo::ALL`]
//! order. Each `(side, trial)` pair draws one random X/Y basis assignment
//! shared by every algorithm, from its own RNG stream.

use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planar::{grid_run, GridAlgo, GridSpec};

/// Naive runs hold the whole grid in one tableau, so larger sides are
/// skipped.
pub const NAIVE_MAX_SIDE: usize = 128;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub algo: String,
    pub side: usize,
    pub trial: usize,
    pub seconds: f64,
    pub peak_live_qubits: usize,
}

/// Stream for one `(side, trial)` pair; the basis draw and the measurement
/// outcomes both come from it.
fn trial_rng(seed: u64, side: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((side as u64) << 20) | trial as u64);
    rng
}

/// Runs every algorithm in `algos` on each side for `trials` trials.
pub fn bench_grid(sides: &[usize], algos: &[GridAlgo], trials: usize, seed: u64) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for &side in sides {
        for trial in 0..trials {
            let spec = GridSpec::random_xy(side, &mut trial_rng(seed, side, trial));
            for algo in GridAlgo::ALL {
                if !algos.contains(&algo) || (algo == GridAlgo::Naive && side > NAIVE_MAX_SIDE) {
                    continue;
                }
                let mut rng = trial_rng(seed, side, trial);
                rng.set_word_pos(1 << 40);
                let start = Instant::now();
                let run = grid_run(&spec, algo, &mut rng);
                let seconds = start.elapsed().as_secs_f64();
                rows.push(BenchRow { algo: algo.name().into(), side, trial, seconds, peak_live_qubits: run.peak_live });
            }
        }
    }
    rows
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

/// Least-squares slope of `log(mean seconds)` against `log(ℓ²)` over the
/// sides where `algo` ran. `None` with fewer than two sides.
pub fn fit_slope(rows: &[BenchRow], algo: GridAlgo) -> Option<f64> {
    let mut sides: Vec<usize> = rows.iter().filter(|r| r.algo == algo.name()).map(|r| r.side).collect();
    sides.sort_unstable();
    sides.dedup();
    let points: Vec<(f64, f64)> = sides
        .iter()
        .map(|&s| {
            let t: Vec<f64> = rows.iter().filter(|r| r.algo == algo.name() && r.side == s).map(|r| r.seconds).collect();
            let mean = t.iter().sum::<f64>() / t.len() as f64;
            (((s * s) as f64).ln(), mean.max(1e-9).ln())
        })
        .collect();
    if points.len() < 2 {
        return None;
    }
    let m = points.len() as f64;
    let (mx, my) = (points.iter().map(|p| p.0).sum::<f64>() / m, points.iter().map(|p| p.1).sum::<f64>() / m);
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}

/// Mean seconds of `algo` at `side`.
pub fn mean_seconds(rows: &[BenchRow], algo: GridAlgo, side: usize) -> Option<f64> {
    let t: Vec<f64> = rows.iter().filter(|r| r.algo == algo.name() && r.side == side).map(|r| r.seconds).collect();
    (!t.is_empty()).then(|| t.iter().sum::<f64>() / t.len() as f64)
}

/// Parses `a:b:*k` (geometric), `a:b:+k` (arithmetic) or a comma list.
pub fn parse_sides(s: &str) -> Result<Vec<usize>> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad side {t:?}")));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, step] => {
            let (a, b) = (num(a)?, num(b)?);
            let (op, k) = step.split_at(1.min(step.len()));
            let k = num(k)?;
            let mut out = Vec::new();
            let mut v = a;
            match op {
                "*" if k >= 2 && a >= 1 => {
                    while v <= b {
                        out.push(v);
                        v *= k;
                    }
                }
                "+" if k >= 1 => {
                    while v <= b {
                        out.push(v);
                        v += k;
                    }
                }
                _ => return Err(Error::Parse(format!("bad step {step:?}"))),
            }
            Ok(out)
        }
        [list] => list.split(',').map(num).collect(),
        _ => Err(Error::Parse(format!("bad side range {s:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_run_and_reproducible_csv() {
        let rows = bench_grid(&[2, 3], &GridAlgo::ALL, 2, 5);
        assert_eq!(rows.len(), 12);
        assert_eq!(rows[0].algo, "naive");
        let strip = |rows: &[BenchRow]| {
            let zeroed: Vec<BenchRow> = rows.iter().cloned().map(|r| BenchRow { seconds: 0.0, ..r }).collect();
            let mut buf = Vec::new();
            write_csv(&zeroed, &mut buf).unwrap();
            String::from_utf8(buf).unwrap()
        };
        let text = strip(&rows);
        assert!(text.starts_with("algo,side,trial,seconds,peak_live_qubits\n"));
        assert_eq!(text, strip(&bench_grid(&[2, 3], &GridAlgo::ALL, 2, 5)));
    }

    #[test]
    fn slope_of_exact_power_law() {
        let rows: Vec<BenchRow> = [4usize, 8, 16]
            .iter()
            .map(|&s| BenchRow { algo: "sweep".into(), side: s, trial: 0, seconds: ((s * s) as f64).powf(1.5), peak_live_qubits: 0 })
            .collect();
        assert!((fit_slope(&rows, GridAlgo::Sweep).unwrap() - 1.5).abs() < 1e-9);
        assert_eq!(fit_slope(&rows, GridAlgo::Naive), None);
    }

    #[test]
    fn side_ranges() {
        assert_eq!(parse_sides("2:512:*2").unwrap(), vec![2, 4, 8, 16, 32, 64, 128, 256, 512]);
        assert_eq!(parse_sides("2:8:+3").unwrap(), vec![2, 5, 8]);
        assert_eq!(parse_sides("3,5").unwrap(), vec![3, 5]);
        assert!(parse_sides("2:9:*1").is_err());
    }
}
