use super::{EvalError, GroundTruth};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub purity: f64,
    pub ari: f64,
    pub k_found: usize,
    pub k_true: usize,
}

fn check_len(a: usize, b: usize) -> Result<(), EvalError> {
    if a == b {
        Ok(())
    } else {
        Err(EvalError::LengthMismatch { left: a, right: b })
    }
}

fn contingency(found: &[usize], truth: &[usize]) -> HashMap<(usize, usize), u64> {
    let mut table = HashMap::new();
    for (&f, &t) in found.iter().zip(truth) {
        *table.entry((f, t)).or_insert(0) += 1;
    }
    table
}

/// Share of points whose cluster's majority class is their own class.
pub fn purity(found: &[usize], truth: &[usize]) -> Result<f64, EvalError> {
    check_len(found.len(), truth.len())?;
    if found.is_empty() {
        return Ok(1.0);
    }
    let mut best: HashMap<usize, u64> = HashMap::new();
    for ((f, _), &c) in contingency(found, truth).iter() {
        let b = best.entry(*f).or_insert(0);
        *b = (*b).max(c);
    }
    Ok(best.values().sum::<u64>() as f64 / found.len() as f64)
}

fn pairs(m: u64) -> i128 {
    let m = i128::from(m);
    m * (m - 1) / 2
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Adjusted Rand index as a reduced fraction `(numerator, denominator)`.
///
/// With `S = Σ C(n_ij, 2)` over the contingency table, `A`, `B` the same sums
/// over row and column totals and `N = C(n, 2)`:
/// `ARI = (S·N − A·B) / (½(A + B)·N − A·B)`, computed in integers.
/// Returns `(1, 1)` when the denominator vanishes (both partitions trivial).
pub fn ari_fraction(found: &[usize], truth: &[usize]) -> Result<(i128, i128), EvalError> {
    check_len(found.len(), truth.len())?;
    let table = contingency(found, truth);
    let mut rows: HashMap<usize, u64> = HashMap::new();
    let mut cols: HashMap<usize, u64> = HashMap::new();
    for (&(f, t), &c) in &table {
        *rows.entry(f).or_insert(0) += c;
        *cols.entry(t).or_insert(0) += c;
    }
    let s: i128 = table.values().map(|&c| pairs(c)).sum();
    let a: i128 = rows.values().map(|&c| pairs(c)).sum();
    let b: i128 = cols.values().map(|&c| pairs(c)).sum();
    let n = pairs(found.len() as u64);
    let num = 2 * (s * n - a * b);
    let den = (a + b) * n - 2 * a * b;
    if den == 0 {
        return Ok((1, 1));
    }
    let g = gcd(num, den);
    let (num, den) = (num / g, den / g);
    Ok(if den < 0 { (-num, -den) } else { (num, den) })
}

pub fn adjusted_rand_index(found: &[usize], truth: &[usize]) -> Result<f64, EvalError> {
    let (num, den) = ari_fraction(found, truth)?;
    Ok(num as f64 / den as f64)
}

pub fn metrics(cluster_id: &[usize], gt: &GroundTruth) -> Result<MetricReport, EvalError> {
    check_len(cluster_id.len(), gt.len())?;
    let mut found: Vec<usize> = cluster_id.to_vec();
    found.sort_unstable();
    found.dedup();
    Ok(MetricReport {
        purity: purity(cluster_id, &gt.class)?,
        ari: adjusted_rand_index(cluster_id, &gt.class)?,
        k_found: found.len(),
        k_true: gt.num_classes(),
    })
}
