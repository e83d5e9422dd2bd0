//! Deciding whether a homomorphism into a permutation module lands in the
//! Specht submodule, and computing the space of all such homomorphisms.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::engine::Straightener;
use super::rules::{compose_psi, killed_by_dominance, lambda_dt};
use super::sum::FormalHomSum;
use super::tableau::{enumerate_tableaux, RowStandardTableau};
use crate::error::{Error, Result};
use crate::partition::Partition;

/// Outcome of checking `ψ_{d,t}∘Φ = 0` for every admissible `(d,t)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub total_pairs: usize,
    pub checked_pairs: Vec<(usize, usize)>,
    pub failed_pairs: Vec<(usize, usize)>,
    pub skipped_by_dominance: Vec<(usize, usize)>,
}

impl KernelReport {
    pub fn passed(&self) -> bool {
        self.failed_pairs.is_empty()
    }
}

/// All `(d,t)` with `1 ≤ d < ℓ(λ)` and `1 ≤ t ≤ λ_{d+1}`.
pub fn psi_pairs(lambda: &Partition) -> Vec<(usize, usize)> {
    let parts = lambda.parts();
    (1..parts.len()).flat_map(|d| (1..=parts[d]).map(move |t| (d, t))).collect()
}

/// `ψ_{d,t}∘Φ` straightened and evaluated at `q = -1`, without the dominance shortcut.
pub fn psi_straightened(st: &Straightener, phi: &FormalHomSum, d: usize, t: usize) -> Result<FormalHomSum> {
    let composed = compose_psi(d, t, phi, false)?;
    Ok(st.semistandardize(&composed)?.evaluate_minus_one())
}

fn check_type(phi: &FormalHomSum, lambda: &Partition) -> Result<()> {
    let mut ty = phi.ty().to_vec();
    while ty.last() == Some(&0) {
        ty.pop();
    }
    if ty != lambda.parts() {
        return Err(Error::Precondition(format!(
            "sum has type {:?}, expected {lambda}",
            phi.ty()
        )));
    }
    Ok(())
}

/// Checks whether the image of `Φ` lies in the Specht submodule of `M^λ`,
/// one `(d,t)` at a time. Pairs killed by dominance are skipped and listed.
pub fn kernel_intersection_check(
    st: &Straightener,
    phi: &FormalHomSum,
    lambda: &Partition,
    parallel: bool,
) -> Result<KernelReport> {
    check_type(phi, lambda)?;
    let pairs = psi_pairs(lambda);
    let (skipped, checked): (Vec<_>, Vec<_>) = pairs.iter().partition(|&&(d, t)| {
        let target = lambda_dt(lambda.parts(), d, t).expect("pair in range");
        killed_by_dominance(phi.shape(), &target)
    });
    let run = |&(d, t): &(usize, usize)| -> Result<Option<(usize, usize)>> {
        let value = psi_straightened(st, phi, d, t)?;
        Ok((!value.is_zero()).then_some((d, t)))
    };
    let outcomes: Vec<Result<Option<(usize, usize)>>> = if parallel {
        checked.par_iter().map(run).collect()
    } else {
        checked.iter().map(run).collect()
    };
    let mut failed = Vec::new();
    for o in outcomes {
        if let Some(p) = o? {
            failed.push(p);
        }
    }
    Ok(KernelReport {
        total_pairs: pairs.len(),
        checked_pairs: checked,
        failed_pairs: failed,
        skipped_by_dominance: skipped,
    })
}

/// A basis of the homomorphisms from `S^μ` to `M^λ` whose image lies in
/// `S^λ`, written in coordinates over the semistandard tableaux (at `q = -1`).
#[derive(Clone, Debug)]
pub struct EhomBasis {
    pub mu: Partition,
    pub lambda: Partition,
    pub tableaux: Vec<RowStandardTableau>,
    pub vectors: Vec<Vec<BigRational>>,
}

impl EhomBasis {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    /// Coordinates of a canonical sum over [`EhomBasis::tableaux`], at `q = -1`.
    pub fn coordinates(&self, phi: &FormalHomSum) -> Result<Vec<BigRational>> {
        let value = phi.evaluate_minus_one();
        let pos: BTreeMap<&RowStandardTableau, usize> =
            self.tableaux.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut v = vec![BigRational::zero(); self.tableaux.len()];
        for (t, c) in value.terms() {
            let i = pos
                .get(t)
                .ok_or_else(|| Error::Precondition(format!("{t} is not a semistandard basis tableau")))?;
            v[*i] = BigRational::from_integer(c.coeff(0));
        }
        Ok(v)
    }

    /// Whether a canonical sum lies in the span of the basis.
    pub fn contains(&self, phi: &FormalHomSum) -> Result<bool> {
        let v = self.coordinates(phi)?;
        let mut rows = self.vectors.clone();
        let r = rank(&rows);
        rows.push(v);
        Ok(rank(&rows) == r)
    }
}

/// Computes the kernel of the map sending `Θ_S` (for semistandard `S`) to all
/// its straightened composites `ψ_{d,t}∘Θ_S`, by exact rational elimination.
pub fn ehom_specht_basis(st: &Straightener, mu: &Partition, lambda: &Partition) -> Result<EhomBasis> {
    if mu.size() != lambda.size() {
        return Err(Error::SizeMismatch(mu.size(), lambda.size()));
    }
    let tableaux = enumerate_tableaux(mu, lambda.parts(), true)?;
    let pairs: Vec<(usize, usize)> = psi_pairs(lambda)
        .into_iter()
        .filter(|&(d, t)| {
            let target = lambda_dt(lambda.parts(), d, t).expect("pair in range");
            !killed_by_dominance(mu.parts(), &target)
        })
        .collect();
    let jobs: Vec<(usize, usize, usize)> = pairs
        .iter()
        .flat_map(|&(d, t)| (0..tableaux.len()).map(move |i| (d, t, i)))
        .collect();
    let images: Vec<Result<FormalHomSum>> = jobs
        .par_iter()
        .map(|&(d, t, i)| psi_straightened(st, &FormalHomSum::from_tableau(&tableaux[i]), d, t))
        .collect();
    let mut rows: BTreeMap<(usize, usize, RowStandardTableau), Vec<BigRational>> = BTreeMap::new();
    for (&(d, t, i), image) in jobs.iter().zip(images) {
        for (u, c) in image?.terms() {
            let row = rows
                .entry((d, t, u.clone()))
                .or_insert_with(|| vec![BigRational::zero(); tableaux.len()]);
            row[i] = BigRational::from_integer(c.coeff(0));
        }
    }
    let matrix: Vec<Vec<BigRational>> = rows.into_values().collect();
    let vectors = nullspace(&matrix, tableaux.len());
    Ok(EhomBasis { mu: mu.clone(), lambda: lambda.clone(), tableaux, vectors })
}

/// Strips the longest common prefix of equal parts.
pub fn row_removal_reduce(mu: &Partition, lambda: &Partition) -> (Partition, Partition) {
    let common = mu
        .parts()
        .iter()
        .zip(lambda.parts())
        .take_while(|(a, b)| a == b)
        .count();
    (
        Partition::from_composition(&mu.parts()[common..]),
        Partition::from_composition(&lambda.parts()[common..]),
    )
}

/// Reduced row echelon form; returns the pivot columns.
fn rref(m: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = BigRational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..ncols {
                    let delta = &f * &m[r][k];
                    m[i][k] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

pub(crate) fn rank(rows: &[Vec<BigRational>]) -> usize {
    let Some(n) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut m = rows.to_vec();
    rref(&mut m, n).len()
}

/// A basis of `{v : m v = 0}`, with integer entries scaled to be primitive.
pub(crate) fn nullspace(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            primitive(v)
        })
        .collect()
}

fn primitive(v: Vec<BigRational>) -> Vec<BigRational> {
    use num_integer::Integer;
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let g = if g.is_zero() { BigInt::one() } else { g };
    ints.into_iter().map(|x| BigRational::from_integer(x / &g)).collect()
}
