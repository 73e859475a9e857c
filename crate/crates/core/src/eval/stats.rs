//! Friedman test, Benjamini–Hochberg adjustment, t-tests and t intervals.

use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("need at least {needed} {what}, got {got}")]
    TooSmall { what: &'static str, needed: usize, got: usize },
    #[error("incomplete blocks, missing (subject, level) cells: {0:?}")]
    Incomplete(Vec<(usize, usize)>),
    #[error("paired samples differ in length ({0} vs {1})")]
    Unpaired(usize, usize),
    #[error("p-value {0} outside [0, 1]")]
    PValueRange(f64),
    #[error("confidence level {0} outside (0, 1)")]
    Level(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub df: f64,
    /// Zero variance: the p-value is reported as 1.
    pub degenerate: bool,
}

fn average_ranks(row: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| row[a].total_cmp(&row[b]));
    let mut ranks = vec![0.0; row.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && row[order[j + 1]] == row[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Rows are subjects (blocks), columns are levels. Ties get average ranks
/// and the statistic is tie-corrected; the p-value is the chi-square
/// approximation with `k − 1` degrees of freedom.
pub fn friedman_test(rows: &[Vec<Option<f64>>]) -> Result<TestResult, StatsError> {
    let n = rows.len();
    if n < 2 {
        return Err(StatsError::TooSmall { what: "subjects", needed: 2, got: n });
    }
    let k = rows.iter().map(Vec::len).max().unwrap_or(0);
    if k < 2 {
        return Err(StatsError::TooSmall { what: "levels", needed: 2, got: k });
    }
    let missing: Vec<(usize, usize)> = rows
        .iter()
        .enumerate()
        .flat_map(|(i, r)| (0..k).filter(move |&j| r.get(j).copied().flatten().is_none()).map(move |j| (i, j)))
        .collect();
    if !missing.is_empty() {
        return Err(StatsError::Incomplete(missing));
    }
    let ranks: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| average_ranks(&r.iter().map(|x| x.expect("checked complete")).collect::<Vec<_>>()))
        .collect();
    let center = (k as f64 + 1.0) / 2.0;
    let between: f64 = (0..k)
        .map(|j| {
            let mean = ranks.iter().map(|r| r[j]).sum::<f64>() / n as f64;
            (mean - center).powi(2)
        })
        .sum::<f64>()
        * n as f64;
    let within: f64 = ranks.iter().flatten().map(|r| (r - center).powi(2)).sum::<f64>() / (n * (k - 1)) as f64;
    let df = (k - 1) as f64;
    if within <= f64::EPSILON {
        return Ok(TestResult { statistic: 0.0, p_value: 1.0, df, degenerate: true });
    }
    let statistic = between / within;
    let p_value = ChiSquared::new(df).expect("positive df").sf(statistic);
    Ok(TestResult { statistic, p_value, df, degenerate: false })
}

/// Step-up Benjamini–Hochberg adjusted p-values, in input order.
pub fn bh_correct(p_values: &[f64]) -> Result<Vec<f64>, StatsError> {
    if let Some(&bad) = p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(StatsError::PValueRange(bad));
    }
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]));
    let mut adjusted = vec![0.0; m];
    let mut running = 1.0f64;
    for (rank, &i) in order.iter().enumerate().rev() {
        running = running.min(p_values[i] * m as f64 / (rank + 1) as f64);
        adjusted[i] = running;
    }
    Ok(adjusted)
}

/// Applies [`bh_correct`] separately within each family label.
pub fn bh_by_family(families: &[String], p_values: &[f64]) -> Result<Vec<f64>, StatsError> {
    if families.len() != p_values.len() {
        return Err(StatsError::Unpaired(families.len(), p_values.len()));
    }
    let mut out = vec![0.0; p_values.len()];
    let mut labels: Vec<&String> = families.iter().collect();
    labels.sort();
    labels.dedup();
    for label in labels {
        let idx: Vec<usize> = (0..families.len()).filter(|&i| &families[i] == label).collect();
        let adj = bh_correct(&idx.iter().map(|&i| p_values[i]).collect::<Vec<_>>())?;
        for (&i, a) in idx.iter().zip(adj) {
            out[i] = a;
        }
    }
    Ok(out)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

fn two_sided(t: f64, df: f64) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df).expect("positive df");
    (2.0 * dist.sf(t.abs())).min(1.0)
}

fn degenerate(diff: f64, df: f64) -> TestResult {
    let statistic = if diff == 0.0 { 0.0 } else { diff.signum() * f64::INFINITY };
    TestResult { statistic, p_value: 1.0, df, degenerate: true }
}

fn need_two(what: &'static str, got: usize) -> Result<(), StatsError> {
    if got < 2 {
        return Err(StatsError::TooSmall { what, needed: 2, got });
    }
    Ok(())
}

pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<TestResult, StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::Unpaired(a.len(), b.len()));
    }
    need_two("pairs", a.len())?;
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let df = (d.len() - 1) as f64;
    let var = sample_variance(&d);
    let md = mean(&d);
    if var <= f64::EPSILON * md.abs().max(1.0) {
        return Ok(degenerate(md, df));
    }
    let statistic = md / (var / d.len() as f64).sqrt();
    Ok(TestResult { statistic, p_value: two_sided(statistic, df), df, degenerate: false })
}

/// Welch's unequal-variance t-test.
pub fn independent_t_test(a: &[f64], b: &[f64]) -> Result<TestResult, StatsError> {
    need_two("samples in the first group", a.len())?;
    need_two("samples in the second group", b.len())?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (va, vb) = (sample_variance(a) / na, sample_variance(b) / nb);
    let diff = mean(a) - mean(b);
    let se2 = va + vb;
    if se2 <= f64::EPSILON {
        return Ok(degenerate(diff, na + nb - 2.0));
    }
    let df = se2.powi(2) / (va.powi(2) / (na - 1.0) + vb.powi(2) / (nb - 1.0));
    let statistic = diff / se2.sqrt();
    Ok(TestResult { statistic, p_value: two_sided(statistic, df), df, degenerate: false })
}

/// Two-sided t interval for the mean.
pub fn confidence_interval(samples: &[f64], level: f64) -> Result<(f64, f64), StatsError> {
    need_two("samples", samples.len())?;
    if !(level > 0.0 && level < 1.0) {
        return Err(StatsError::Level(level));
    }
    let m = mean(samples);
    let se = (sample_variance(samples) / samples.len() as f64).sqrt();
    if se == 0.0 {
        return Ok((m, m));
    }
    let t = StudentsT::new(0.0, 1.0, (samples.len() - 1) as f64).expect("positive df").inverse_cdf(0.5 + level / 2.0);
    Ok((m - t * se, m + t * se))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(data: &[&[f64]]) -> Vec<Vec<Option<f64>>> {
        data.iter().map(|r| r.iter().map(|&x| Some(x)).collect()).collect()
    }

    #[test]
    fn friedman_increasing_rows() {
        let r = friedman_test(&rows(&[&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]])).unwrap();
        assert!((r.statistic - 6.0).abs() < 1e-12);
        assert!((r.p_value - (-3.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn friedman_with_ties_matches_reference() {
        // reference value from an independent implementation
        let r =
            friedman_test(&rows(&[&[1.0, 2.0, 3.0], &[1.0, 1.0, 2.0], &[2.0, 3.0, 1.0], &[3.0, 3.0, 3.0]])).unwrap();
        assert!((r.statistic - 1.272_727_272_727_272_7).abs() < 1e-12);
        assert!((r.p_value - 0.529_213_341_500_050_4).abs() < 1e-9);
    }

    #[test]
    fn friedman_identical_columns() {
        let r = friedman_test(&rows(&[&[0.5, 0.5], &[1.0, 1.0], &[0.0, 0.0]])).unwrap();
        assert_eq!((r.statistic, r.p_value), (0.0, 1.0));
    }

    #[test]
    fn friedman_paper_shape_and_errors() {
        let data: Vec<Vec<Option<f64>>> =
            (0..10).map(|i| (0..7).map(|j| Some(((i * 7 + j * 3) % 5) as f64)).collect()).collect();
        let r = friedman_test(&data).unwrap();
        assert_eq!(r.df, 6.0);
        let mut holes = data.clone();
        holes[2][4] = None;
        holes[7].truncate(6);
        assert_eq!(friedman_test(&holes), Err(StatsError::Incomplete(vec![(2, 4), (7, 6)])));
        assert!(friedman_test(&data[..1]).is_err());
    }

    #[test]
    fn bh_step_up() {
        assert_eq!(bh_correct(&[0.2]).unwrap(), vec![0.2]);
        assert_eq!(bh_correct(&[0.3, 0.3, 0.3]).unwrap(), vec![0.3, 0.3, 0.3]);
        let adj = bh_correct(&[0.01, 0.04, 0.03]).unwrap();
        for (a, e) in adj.iter().zip([0.03, 0.04, 0.04]) {
            assert!((a - e).abs() < 1e-12);
        }
        assert!(bh_correct(&[0.5, 1.2]).is_err());
    }

    #[test]
    fn bh_families_are_separate() {
        let fam: Vec<String> = ["a", "b", "a"].iter().map(|s| s.to_string()).collect();
        let adj = bh_by_family(&fam, &[0.01, 0.01, 0.04]).unwrap();
        assert_eq!(adj, vec![0.02, 0.01, 0.04]);
    }

    #[test]
    fn t_tests_against_reference() {
        let r = paired_t_test(&[12.1, 14.3, 11.8, 15.2, 13.5, 12.9], &[11.4, 13.9, 12.0, 14.1, 12.8, 12.2]).unwrap();
        assert!((r.statistic - 3.178_819_766_028_758).abs() < 1e-9);
        assert!((r.p_value - 0.024_570_697_999_744_946).abs() < 1e-9);
        let r = independent_t_test(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.5, 3.1, 4.8, 6.0, 7.2, 8.1]).unwrap();
        assert!((r.statistic + 1.980_687_240_091_827).abs() < 1e-9);
        assert!((r.p_value - 0.079_572_994_981_436_32).abs() < 1e-6);
    }

    #[test]
    fn degenerate_t() {
        let r = paired_t_test(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((r.statistic, r.p_value, r.degenerate), (0.0, 1.0, true));
        let r = paired_t_test(&[2.0, 3.0], &[1.0, 2.0]).unwrap();
        assert!(r.degenerate && r.p_value == 1.0);
        assert!(paired_t_test(&[1.0], &[1.0]).is_err());
        assert!(paired_t_test(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn intervals() {
        let (lo, hi) = confidence_interval(&[1.0, 2.0, 3.0, 4.0, 5.0], 0.95).unwrap();
        assert!((lo - 1.036_756_838_522_439).abs() < 1e-9);
        assert!((hi - 4.963_243_161_477_56).abs() < 1e-9);
        assert_eq!(confidence_interval(&[7.0; 4], 0.95).unwrap(), (7.0, 7.0));
    }
}
