//! Solving straightening systems by evaluation and interpolation.
//!
//! The system is solved over the prime field `F_p`, `p = 2^61 - 1`, at a run of
//! pseudo-random points `q`. Every determined unknown is a Laurent polynomial,
//! so its values at enough points pin it down: `q^K f(q)` is interpolated,
//! confirmed at spare points, lifted to symmetric integer coefficients and
//! finally substituted into the equations over `ℤ[q, q⁻¹]`. Any failure along
//! the way returns `None` and the caller falls back to exact elimination over
//! `ℚ(q)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::qarith::LaurentPoly;

const P: u64 = (1 << 61) - 1;

/// Interpolation sizes tried in turn; the exponent window is centred on zero.
const SIZES: [usize; 6] = [16, 32, 64, 128, 256, 512];
/// Points used only to confirm an interpolant.
const SPARE: usize = 3;
/// Points whose pivot pattern disagrees with the first one are skipped; this
/// many in a row means something is off.
const MAX_SKIPS: usize = 8;

fn reduce(x: u128) -> u64 {
    let folded = (x as u64 & P) as u128 + (x >> 61);
    let folded = (folded as u64 & P) + (folded >> 61) as u64;
    if folded >= P {
        folded - P
    } else {
        folded
    }
}

fn mul(a: u64, b: u64) -> u64 {
    reduce(a as u128 * b as u128)
}

fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn pow(mut base: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    acc
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn residue(c: &BigInt) -> u64 {
    let r = c % BigInt::from(P);
    let r = if r.is_negative() { r + BigInt::from(P) } else { r };
    r.to_u64().expect("residue fits")
}

fn lift(c: u64) -> BigInt {
    if c > P / 2 {
        -BigInt::from(P - c)
    } else {
        BigInt::from(c)
    }
}

/// A Laurent polynomial with coefficients reduced mod `p`.
struct Reduced {
    low: i64,
    coeffs: Vec<u64>,
}

impl Reduced {
    fn new(p: &LaurentPoly) -> Self {
        let (low, coeffs) = p.dense();
        Reduced { low, coeffs: coeffs.iter().map(residue).collect() }
    }

    fn eval(&self, q: u64, q_inv: u64) -> u64 {
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = add(mul(acc, q), c);
        }
        let shift = if self.low >= 0 { pow(q, self.low as u64) } else { pow(q_inv, self.low.unsigned_abs()) };
        mul(acc, shift)
    }
}

/// `lhs · unknowns = rhs`, with unknowns and right-hand columns numbered.
pub(crate) struct LaurentSystem {
    pub unknowns: usize,
    pub columns: usize,
    pub equations: Vec<(Vec<(usize, LaurentPoly)>, Vec<(usize, LaurentPoly)>)>,
}

/// Values of the determined unknowns, as sparse maps from right-hand columns.
pub(crate) type Solution = BTreeMap<usize, BTreeMap<usize, LaurentPoly>>;

/// Solution at one point: the determined unknowns (sorted) and their values
/// as dense rows over the right-hand columns.
type PointSolution = (Vec<usize>, Vec<Vec<u64>>);

impl LaurentSystem {
    /// The determined unknowns and their values, or `None` when the modular
    /// route cannot vouch for an answer.
    pub fn solve(&self) -> Option<Solution> {
        let reduced: Vec<(Vec<(usize, Reduced)>, Vec<(usize, Reduced)>)> = self
            .equations
            .iter()
            .map(|(l, r)| {
                (
                    l.iter().map(|(k, c)| (*k, Reduced::new(c))).collect(),
                    r.iter().map(|(k, c)| (*k, Reduced::new(c))).collect(),
                )
            })
            .collect();
        let mut seed = 0x9e37_79b9_7f4a_7c15u64;
        let mut next_point = move || loop {
            seed = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = seed;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^= z >> 31;
            let q = z % P;
            if q > 1 {
                return q;
            }
        };
        let mut points: Vec<u64> = Vec::new();
        let mut values: Vec<Vec<Vec<u64>>> = Vec::new();
        let mut pattern: Option<Vec<usize>> = None;
        let mut skips = 0;
        // Equations that were redundant at the first point are redundant at
        // generic points too, so later points use only the pivot rows; the
        // exact check at the end still sees every equation.
        let mut rows: Vec<usize> = (0..reduced.len()).collect();
        for &size in &SIZES {
            while points.len() < size + SPARE {
                let q = next_point();
                let ((det, vals), used) = self.solve_at(&reduced, &rows, q)?;
                match &pattern {
                    None => {
                        pattern = Some(det);
                        rows = used;
                    }
                    Some(p) if *p != det => {
                        skips += 1;
                        if skips > MAX_SKIPS {
                            return None;
                        }
                        continue;
                    }
                    Some(_) => {}
                }
                points.push(q);
                values.push(vals);
            }
            let det = pattern.as_ref().expect("at least one point");
            if let Some(sol) = self.interpolate(det, &points, &values, size) {
                if self.verify(&sol) {
                    return Some(sol);
                }
            }
        }
        None
    }

    /// Row reduction of the chosen equations at one point, also returning the
    /// equations that gave pivots; `None` when they are inconsistent.
    fn solve_at(
        &self,
        reduced: &[(Vec<(usize, Reduced)>, Vec<(usize, Reduced)>)],
        rows: &[usize],
        q: u64,
    ) -> Option<(PointSolution, Vec<usize>)> {
        let q_inv = inv(q);
        let width = self.unknowns + self.columns;
        let mut pivots: Vec<(usize, Vec<u64>)> = Vec::new();
        let mut pivot_of: Vec<Option<usize>> = vec![None; self.unknowns];
        let mut used = Vec::new();
        for &r in rows {
            let (lhs, rhs) = &reduced[r];
            let mut row = vec![0u64; width];
            for (k, c) in lhs {
                row[*k] = add(row[*k], c.eval(q, q_inv));
            }
            for (k, c) in rhs {
                let j = self.unknowns + k;
                row[j] = add(row[j], c.eval(q, q_inv));
            }
            for col in 0..self.unknowns {
                if row[col] == 0 {
                    continue;
                }
                if let Some(pi) = pivot_of[col] {
                    let factor = row[col];
                    let prow = &pivots[pi].1;
                    for j in col..width {
                        if prow[j] != 0 {
                            row[j] = sub(row[j], mul(factor, prow[j]));
                        }
                    }
                }
            }
            let Some(col) = (0..self.unknowns).find(|&c| row[c] != 0) else {
                if row[self.unknowns..].iter().any(|&v| v != 0) {
                    return None;
                }
                continue;
            };
            let scale = inv(row[col]);
            for v in row.iter_mut().skip(col) {
                *v = mul(*v, scale);
            }
            // Clear the new pivot column from earlier pivot rows.
            for (_, prow) in pivots.iter_mut() {
                let factor = prow[col];
                if factor != 0 {
                    for j in col..width {
                        if row[j] != 0 {
                            prow[j] = sub(prow[j], mul(factor, row[j]));
                        }
                    }
                }
            }
            pivot_of[col] = Some(pivots.len());
            pivots.push((col, row));
            used.push(r);
        }
        let mut det = Vec::new();
        let mut vals = Vec::new();
        let mut order: Vec<&(usize, Vec<u64>)> = pivots.iter().collect();
        order.sort_by_key(|(c, _)| *c);
        for (col, row) in order {
            if row[..self.unknowns].iter().enumerate().all(|(j, &v)| j == *col || v == 0) {
                det.push(*col);
                vals.push(row[self.unknowns..].to_vec());
            }
        }
        Some(((det, vals), used))
    }

    /// Interpolates every determined value from the first `size` points and
    /// checks the result at the spare points.
    fn interpolate(&self, det: &[usize], points: &[u64], values: &[Vec<Vec<u64>>], size: usize) -> Option<Solution> {
        let shift = size / 2;
        let xs = &points[..size];
        let weights: Vec<u64> = points.iter().map(|&q| pow(q, shift as u64)).collect();
        let inverses = difference_inverses(xs);
        let mut sol = Solution::new();
        for (slot, &unknown) in det.iter().enumerate() {
            let mut entry = BTreeMap::new();
            for col in 0..self.columns {
                let ys: Vec<u64> = (0..points.len()).map(|i| mul(values[i][slot][col], weights[i])).collect();
                if ys.iter().all(|&y| y == 0) {
                    continue;
                }
                let coeffs = newton_coefficients(&inverses, &ys[..size]);
                for i in size..points.len() {
                    if newton_eval(xs, &coeffs, points[i]) != ys[i] {
                        return None;
                    }
                }
                let mono = newton_to_monomial(xs, &coeffs);
                let lifted: Vec<BigInt> = mono.into_iter().map(lift).collect();
                let poly = LaurentPoly::from_dense(-(shift as i64), lifted);
                if !poly.is_zero() {
                    entry.insert(col, poly);
                }
            }
            sol.insert(unknown, entry);
        }
        Some(sol)
    }

    /// Substitutes the solution into every equation that only involves
    /// determined unknowns.
    fn verify(&self, sol: &Solution) -> bool {
        for (lhs, rhs) in &self.equations {
            if lhs.iter().any(|(k, _)| !sol.contains_key(k)) {
                continue;
            }
            let mut acc: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
            for (k, c) in lhs {
                for (col, v) in &sol[k] {
                    let e = acc.entry(*col).or_insert_with(LaurentPoly::zero);
                    *e = &*e + &(c * v);
                }
            }
            for (col, c) in rhs {
                let e = acc.entry(*col).or_insert_with(LaurentPoly::zero);
                *e = &*e - c;
            }
            if acc.values().any(|v| !v.is_zero()) {
                return false;
            }
        }
        true
    }
}

/// `1 / (xs[i] - xs[i - j])` at `[j][i]`, shared by every interpolation over
/// the same points.
fn difference_inverses(xs: &[u64]) -> Vec<Vec<u64>> {
    let n = xs.len();
    (0..n)
        .map(|j| (0..n).map(|i| if j == 0 || i < j { 0 } else { inv(sub(xs[i], xs[i - j])) }).collect())
        .collect()
}

fn newton_coefficients(inverses: &[Vec<u64>], ys: &[u64]) -> Vec<u64> {
    let mut c = ys.to_vec();
    for j in 1..ys.len() {
        for i in (j..ys.len()).rev() {
            c[i] = mul(sub(c[i], c[i - 1]), inverses[j][i]);
        }
    }
    c
}

fn newton_eval(xs: &[u64], c: &[u64], x: u64) -> u64 {
    let mut acc = 0;
    for i in (0..c.len()).rev() {
        acc = add(mul(acc, sub(x, xs[i])), c[i]);
    }
    acc
}

fn newton_to_monomial(xs: &[u64], c: &[u64]) -> Vec<u64> {
    let mut poly: Vec<u64> = Vec::with_capacity(c.len());
    for i in (0..c.len()).rev() {
        // poly = poly * (x - xs[i]) + c[i]
        let mut next = vec![0u64; poly.len() + 1];
        for (j, &p) in poly.iter().enumerate() {
            next[j + 1] = add(next[j + 1], p);
            next[j] = sub(next[j], mul(p, xs[i]));
        }
        next[0] = add(next[0], c[i]);
        poly = next;
    }
    while poly.last().is_some_and(|v| v.is_zero()) {
        poly.pop();
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    #[test]
    fn field_arithmetic() {
        assert_eq!(mul(P - 1, P - 1), 1);
        assert_eq!(mul(inv(12345), 12345), 1);
        assert_eq!(lift(P - 3), BigInt::from(-3));
        assert_eq!(residue(&BigInt::from(-3)), P - 3);
    }

    #[test]
    fn interpolation_round_trip() {
        let xs: Vec<u64> = (2..12).collect();
        let target = [5u64, 0, P - 7, 1];
        let ys: Vec<u64> = xs
            .iter()
            .map(|&x| target.iter().rev().fold(0, |acc, &c| add(mul(acc, x), c)))
            .collect();
        let mono = newton_to_monomial(&xs, &newton_coefficients(&difference_inverses(&xs), &ys));
        assert_eq!(mono, target.to_vec());
    }

    #[test]
    fn cyclic_pair_is_solved() {
        // x0 = q x1 + 1, x1 = q^-1 x0 ... made regular: x1 = -q^-2 x0 + q.
        let sys = LaurentSystem {
            unknowns: 2,
            columns: 1,
            equations: vec![
                (vec![(0, lp(&[(0, 1)])), (1, lp(&[(1, -1)]))], vec![(0, lp(&[(0, 1)]))]),
                (vec![(1, lp(&[(0, 1)])), (0, lp(&[(-2, 1)]))], vec![(0, lp(&[(1, 1)]))]),
            ],
        };
        // x0 - q x1 = 1 and x1 + q^-2 x0 = q give x0 = (1 + q^2) / (1 + q^-1)
        // which is not Laurent, so the modular route must decline.
        assert!(sys.solve().is_none());
        let sys = LaurentSystem {
            unknowns: 2,
            columns: 1,
            equations: vec![
                (vec![(0, lp(&[(0, 1)])), (1, lp(&[(1, -1)]))], vec![(0, lp(&[(0, 1)]))]),
                (vec![(1, lp(&[(0, 1)]))], vec![(0, lp(&[(-3, 2), (4, -1)]))]),
            ],
        };
        let sol = sys.solve().unwrap();
        assert_eq!(sol[&1][&0], lp(&[(-3, 2), (4, -1)]));
        assert_eq!(sol[&0][&0], lp(&[(0, 1), (-2, 2), (5, -1)]));
    }

    #[test]
    fn underdetermined_unknowns_are_left_out() {
        let sys = LaurentSystem {
            unknowns: 3,
            columns: 1,
            equations: vec![
                (vec![(0, lp(&[(0, 1)]))], vec![(0, lp(&[(1, 3)]))]),
                (vec![(1, lp(&[(0, 1)])), (2, lp(&[(0, 1)]))], vec![(0, lp(&[(0, 1)]))]),
            ],
        };
        let sol = sys.solve().unwrap();
        assert_eq!(sol.keys().copied().collect::<Vec<_>>(), vec![0]);
    }
}
