//! Goodness-of-fit checks for sampled outcome histograms.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Cells whose expected count falls below this are pooled.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitReport {
    pub tv_distance: f64,
    pub chi2: f64,
    pub dof: usize,
    pub chi2_p: f64,
}

/// Groups cells, visited in increasing order of `weight`, into bins whose
/// weight reaches [`MIN_EXPECTED`]; a light remainder joins the last bin.
fn pool(weights: &[f64]) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..weights.len()).collect();
    idx.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]));
    let mut bins: Vec<Vec<usize>> = Vec::new();
    let mut cur = Vec::new();
    let mut acc = 0.0;
    for i in idx {
        cur.push(i);
        acc += weights[i];
        if acc >= MIN_EXPECTED {
            bins.push(std::mem::take(&mut cur));
            acc = 0.0;
        }
    }
    if !cur.is_empty() {
        match bins.last_mut() {
            Some(last) => last.extend(cur),
            None => bins.push(cur),
        }
    }
    bins
}

fn upper_tail(chi2: f64, dof: usize) -> f64 {
    if dof == 0 {
        return 1.0;
    }
    1.0 - ChiSquared::new(dof as f64).expect("positive dof").cdf(chi2)
}

/// TV distance and chi-squared test of `counts` against `reference`.
///
/// An observation in a cell of reference probability zero gives `p = 0`.
pub fn stat_tests(counts: &[u64], reference: &[f64]) -> Result<FitReport> {
    if counts.len() != reference.len() {
        return Err(Error::Dimension(format!("{} counts for {} reference cells", counts.len(), reference.len())));
    }
    let total_ref: f64 = reference.iter().sum();
    if (total_ref - 1.0).abs() > 1e-6 {
        return Err(Error::Invalid(format!("reference sums to {total_ref}")));
    }
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return Err(Error::Invalid("no samples".into()));
    }
    let nf = n as f64;
    let tv_distance = 0.5 * counts.iter().zip(reference).map(|(&c, &p)| (c as f64 / nf - p).abs()).sum::<f64>();
    let impossible = counts.iter().zip(reference).any(|(&c, &p)| c > 0 && p <= 1e-12);
    let support: Vec<usize> = (0..reference.len()).filter(|&i| reference[i] > 1e-12).collect();
    let expected: Vec<f64> = support.iter().map(|&i| reference[i] * nf).collect();
    let bins = pool(&expected);
    let chi2: f64 = bins
        .iter()
        .map(|b| {
            let e: f64 = b.iter().map(|&k| expected[k]).sum();
            let o: f64 = b.iter().map(|&k| counts[support[k]] as f64).sum();
            (o - e) * (o - e) / e
        })
        .sum();
    let dof = bins.len().saturating_sub(1);
    let chi2_p = if impossible { 0.0 } else { upper_tail(chi2, dof) };
    Ok(FitReport { tv_distance, chi2, dof, chi2_p })
}

/// Two-sample chi-squared homogeneity test on histograms over the same
/// cells. Returns the TV distance between the empirical distributions and
/// the p-value.
pub fn two_sample_test(a: &[u64], b: &[u64]) -> Result<FitReport> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!("histograms of {} and {} cells", a.len(), b.len())));
    }
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    if na == 0.0 || nb == 0.0 {
        return Err(Error::Invalid("no samples".into()));
    }
    let tv_distance = 0.5 * a.iter().zip(b).map(|(&x, &y)| (x as f64 / na - y as f64 / nb).abs()).sum::<f64>();
    let cells: Vec<usize> = (0..a.len()).filter(|&i| a[i] + b[i] > 0).collect();
    // smaller expected count of each cell across the two rows
    let weight: Vec<f64> = cells.iter().map(|&i| (a[i] + b[i]) as f64 * na.min(nb) / (na + nb)).collect();
    let bins = pool(&weight);
    let mut chi2 = 0.0;
    for bin in &bins {
        let oa: f64 = bin.iter().map(|&k| a[cells[k]] as f64).sum();
        let ob: f64 = bin.iter().map(|&k| b[cells[k]] as f64).sum();
        let tot = oa + ob;
        let (ea, eb) = (tot * na / (na + nb), tot * nb / (na + nb));
        chi2 += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
    }
    let dof = bins.len().saturating_sub(1);
    Ok(FitReport { tv_distance, chi2, dof, chi2_p: upper_tail(chi2, dof) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn draw(reference: &[f64], n: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
        let mut counts = vec![0u64; reference.len()];
        for _ in 0..n {
            let mut u: f64 = rng.gen();
            let mut k = 0;
            while k + 1 < reference.len() && u >= reference[k] {
                u -= reference[k];
                k += 1;
            }
            counts[k] += 1;
        }
        counts
    }

    #[test]
    fn calibrated_on_matching_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let reference = [0.5, 0.2, 0.15, 0.1, 0.04, 0.01];
        let passes = (0..100).filter(|_| stat_tests(&draw(&reference, 2000, &mut rng), &reference).unwrap().chi2_p > 1e-3).count();
        assert!(passes >= 99, "{passes}");
        let two = (0..100)
            .filter(|_| two_sample_test(&draw(&reference, 2000, &mut rng), &draw(&reference, 3000, &mut rng)).unwrap().chi2_p > 1e-3)
            .count();
        assert!(two >= 99, "{two}");
    }

    #[test]
    fn extremes() {
        let r = stat_tests(&[10, 0], &[1.0, 0.0]).unwrap();
        assert_eq!(r.tv_distance, 0.0);
        assert_eq!(r.chi2_p, 1.0);
        let r = stat_tests(&[1000, 0], &[0.5, 0.5]).unwrap();
        assert!((r.tv_distance - 0.5).abs() < 1e-12);
        assert!(r.chi2_p < 1e-10);
        assert_eq!(stat_tests(&[1, 1], &[1.0, 0.0]).unwrap().chi2_p, 0.0);
        assert!(two_sample_test(&[1000, 0], &[0, 1000]).unwrap().chi2_p < 1e-10);
        assert!(stat_tests(&[1], &[0.5]).is_err());
    }
}
