//! Growth-exponent estimation: least squares on log-log complexity data,
//! with a doubling check so a fit is only trusted once the counts have
//! stopped moving under prefix extension.

use super::ComplexityProfile;
use crate::{Error, Result};

/// Result of fitting `log p(n) = slope * log n + intercept`.
///
/// `stable` records whether the two input profiles agreed on every grid
/// point; an unstable fit means the prefix was too short for these lengths
/// and the slope estimates nothing in particular.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub grid: Vec<usize>,
    pub stable: bool,
}

/// Sample lengths `lo, 1.5*lo, 2*lo, 3*lo, 4*lo, ...` up to `hi`. Doubling
/// with midpoints gives log-spaced, weakly correlated samples; the midpoint
/// is skipped at levels where it is not an integer.
pub fn dyadic_grid(lo: usize, hi: usize) -> Vec<usize> {
    let mut grid = Vec::new();
    let mut n = lo.max(1);
    while n <= hi {
        grid.push(n);
        if n % 2 == 0 && n + n / 2 <= hi {
            grid.push(n + n / 2);
        }
        match n.checked_mul(2) {
            Some(next) => n = next,
            None => break,
        }
    }
    grid
}

/// Fit the growth exponent from two profiles of the same spec, the second
/// over a strictly longer prefix. The fit itself uses the longer profile's
/// counts; the shorter one only feeds the stability comparison.
pub fn fit_exponent(
    base: &ComplexityProfile,
    extended: &ComplexityProfile,
    grid: &[usize],
) -> Result<ExponentFit> {
    if base.fingerprint() != extended.fingerprint() {
        return Err(Error::ProfileMismatch(format!(
            "profiles describe different specs: {} vs {}",
            base.fingerprint(),
            extended.fingerprint()
        )));
    }
    if base.origin() != extended.origin() {
        return Err(Error::ProfileMismatch("profiles start at different origins".into()));
    }
    if extended.prefix_len() <= base.prefix_len() {
        return Err(Error::ProfileMismatch(format!(
            "stability needs a strictly longer second prefix ({} vs {})",
            extended.prefix_len(),
            base.prefix_len()
        )));
    }
    if grid.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "{} sample lengths; a slope from fewer than 4 is noise",
            grid.len()
        )));
    }
    let reach = grid.iter().copied().max().expect("grid is nonempty");
    if reach > base.n_max() || reach > extended.n_max() {
        return Err(Error::DegenerateFit(format!(
            "grid reaches length {reach} but the profiles stop at {} and {}",
            base.n_max(),
            extended.n_max()
        )));
    }
    if grid.iter().any(|&n| n == 0) {
        return Err(Error::DegenerateFit("length 0 has no logarithm".into()));
    }

    let stable = grid.iter().all(|&n| base.count(n) == extended.count(n));

    let points: Vec<(f64, f64)> = grid
        .iter()
        .map(|&n| ((n as f64).ln(), (extended.count(n) as f64).ln()))
        .collect();
    let k = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all sample lengths coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    // a flat profile has zero variance to explain, which counts as explained
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };

    Ok(ExponentFit { slope, intercept, r_squared, grid: grid.to_vec(), stable })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shapes() {
        assert_eq!(dyadic_grid(8, 64), vec![8, 12, 16, 24, 32, 48, 64]);
        assert_eq!(dyadic_grid(8, 48), vec![8, 12, 16, 24, 32, 48]);
        assert_eq!(dyadic_grid(3, 20), vec![3, 6, 9, 12, 18]);
        assert_eq!(dyadic_grid(5, 4), Vec::<usize>::new());
    }

    #[test]
    fn exact_power_law_recovers_exponent() {
        // counts n^2 exactly: slope 2, r^2 = 1
        let grid = dyadic_grid(4, 32);
        let counts: Vec<u64> = (1..=32u64).map(|n| n * n).collect();
        let base = ComplexityProfile::for_tests("{}", 100, counts.clone());
        let extended = ComplexityProfile::for_tests("{}", 200, counts);
        let fit = fit_exponent(&base, &extended, &grid).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12, "slope {}", fit.slope);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(fit.stable);
    }

    #[test]
    fn flat_profile_fits_slope_zero() {
        let grid = dyadic_grid(2, 16);
        let base = ComplexityProfile::for_tests("{}", 50, vec![1; 16]);
        let extended = ComplexityProfile::for_tests("{}", 100, vec![1; 16]);
        let fit = fit_exponent(&base, &extended, &grid).unwrap();
        assert!(fit.slope.abs() < 0.05);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn disagreement_marks_the_fit_unstable() {
        let grid = dyadic_grid(2, 16);
        let mut lower: Vec<u64> = (1..=16).map(|n| n + 1).collect();
        let higher = lower.clone();
        lower[15] -= 1;
        let base = ComplexityProfile::for_tests("{}", 50, lower);
        let extended = ComplexityProfile::for_tests("{}", 100, higher);
        let fit = fit_exponent(&base, &extended, &grid).unwrap();
        assert!(!fit.stable);
    }

    #[test]
    fn refuses_thin_or_mismatched_input() {
        let base = ComplexityProfile::for_tests("{}", 50, vec![2; 16]);
        let extended = ComplexityProfile::for_tests("{}", 100, vec![2; 16]);
        assert!(fit_exponent(&base, &extended, &[2, 4, 8]).is_err());
        assert!(fit_exponent(&base, &extended, &[2, 4, 8, 32]).is_err());
        assert!(fit_exponent(&extended, &base, &dyadic_grid(2, 16)).is_err());
        let other = ComplexityProfile::for_tests("{\"m\":2}", 100, vec![2; 16]);
        assert!(fit_exponent(&base, &other, &dyadic_grid(2, 16)).is_err());
    }
}
