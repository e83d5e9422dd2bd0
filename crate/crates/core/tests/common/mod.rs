//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;
use specht::homcalc::{FormalHomSum, RowStandardTableau, Straightener};
use specht::Partition;

pub fn part(v: &[usize]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

/// Relabels entries to `1..=k` preserving their order and sorts each row.
pub fn compress(rows: Vec<Vec<u16>>) -> RowStandardTableau {
    let mut values: Vec<u16> = rows.iter().flatten().copied().collect();
    values.sort_unstable();
    values.dedup();
    let rank = |v: u16| values.binary_search(&v).unwrap() as u16 + 1;
    RowStandardTableau::from_rows_sorted(rows.into_iter().map(|r| r.into_iter().map(rank).collect()).collect())
}

/// `Σ sign_k Θ_{T_k}` straightened and evaluated at `q = -1`.
pub fn signed_sum_at_minus_one(st: &Straightener, terms: &[(i64, &RowStandardTableau)]) -> FormalHomSum {
    let mut sum = FormalHomSum::from_tableau(terms[0].1).scaled(&specht::qarith::LaurentPoly::constant(terms[0].0));
    for (c, t) in &terms[1..] {
        sum.add_scaled(&FormalHomSum::from_tableau(t), &specht::qarith::LaurentPoly::constant(*c))
            .unwrap();
    }
    st.semistandardize(&sum).unwrap().evaluate_minus_one()
}

/// A random partition of size at most `max_n` with at most `max_rows` rows.
pub fn random_partition(rng: &mut StdRng, max_n: usize, max_rows: usize) -> Partition {
    let rows = rng.gen_range(1..=max_rows);
    let mut parts: Vec<usize> = (0..rows).map(|_| rng.gen_range(1..=max_n / rows.max(1))).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition::new(parts).unwrap()
}

/// Random row-standard rows of the given shape with entries in `1..=k`.
pub fn random_rows(rng: &mut StdRng, shape: &[usize], k: u16) -> Vec<Vec<u16>> {
    shape
        .iter()
        .map(|&len| (0..len).map(|_| rng.gen_range(1..=k)).collect())
        .collect()
}
