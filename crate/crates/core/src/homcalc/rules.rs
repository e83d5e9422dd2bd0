//! The rewriting rules of the calculus: composition with the maps `ψ_{d,t}` and
//! the two straightening moves between adjacent rows.

use num_bigint::BigInt;

use super::sum::FormalHomSum;
use super::tableau::{count_gt, count_in, count_lt, Entry, RowStandardTableau};
use crate::error::{Error, Result};
use crate::partition::dominates_unchecked;
use crate::qarith::{gauss_binom, LaurentPoly};

/// One straightening move: `(variant, row, value)` with a 0-based upper row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub variant: u8,
    pub row: usize,
    pub value: Entry,
}

/// `λ` with `t` added to part `d` and removed from part `d+1` (1-based `d`).
pub fn lambda_dt(lambda: &[usize], d: usize, t: usize) -> Result<Vec<usize>> {
    if d == 0 || d >= lambda.len() {
        return Err(Error::InvalidParams(format!("d={d} out of range for {lambda:?}")));
    }
    if t == 0 || t > lambda[d] {
        return Err(Error::InvalidParams(format!("t={t} out of range for {lambda:?}, d={d}")));
    }
    let mut out = lambda.to_vec();
    out[d - 1] += t;
    out[d] -= t;
    Ok(out)
}

/// Whether `ψ_{d,t}∘Θ_T` is forced to vanish because the shape does not
/// dominate the sorted target type.
pub fn killed_by_dominance(shape: &[usize], target: &[usize]) -> bool {
    let mut sorted: Vec<usize> = target.iter().copied().filter(|&x| x > 0).collect();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    !dominates_unchecked(shape, &sorted)
}

/// Distributions `h` of `total` over slots with the given caps, in lexicographic order.
pub(crate) fn bounded_compositions(total: usize, caps: &[usize]) -> Vec<Vec<usize>> {
    fn rec(total: usize, caps: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == caps.len() {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let room: usize = caps[cur.len() + 1..].iter().sum();
        let cap = caps[cur.len()];
        let lo = total.saturating_sub(room);
        for h in lo..=cap.min(total) {
            cur.push(h);
            rec(total - h, caps, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, caps, &mut Vec::with_capacity(caps.len()), &mut out);
    out
}

fn signed_monomial(negative: bool, e: i64) -> LaurentPoly {
    let c = if negative { BigInt::from(-1) } else { BigInt::from(1) };
    LaurentPoly::monomial(c, e)
}

fn distinct(row: &[Entry]) -> Vec<Entry> {
    let mut v = row.to_vec();
    v.dedup();
    v
}

/// `ψ_{d,t}∘Θ_T` for a single tableau, as a list of tableaux with coefficients.
pub(crate) fn psi_tableau(t: &RowStandardTableau, d: Entry, amount: usize) -> Vec<(RowStandardTableau, LaurentPoly)> {
    let rows = t.rows();
    let caps: Vec<usize> = rows.iter().map(|r| count_in(r, d + 1)).collect();
    let counts_d: Vec<usize> = rows.iter().map(|r| count_in(r, d)).collect();
    let mut below = vec![0usize; rows.len()];
    for j in (0..rows.len().saturating_sub(1)).rev() {
        below[j] = below[j + 1] + counts_d[j + 1];
    }
    let mut out = Vec::new();
    for hs in bounded_compositions(amount, &caps) {
        let mut coeff = LaurentPoly::one();
        let mut exponent = 0i64;
        let mut new_rows = Vec::with_capacity(rows.len());
        for (j, row) in rows.iter().enumerate() {
            let h = hs[j];
            if h > 0 {
                exponent += (below[j] * h) as i64;
                coeff = &coeff * &gauss_binom((counts_d[j] + h) as i64, h as i64);
                let mut nr = row.clone();
                let start = count_lt(row, d + 1);
                for x in &mut nr[start..start + h] {
                    *x = d;
                }
                new_rows.push(nr);
            } else {
                new_rows.push(row.clone());
            }
        }
        out.push((RowStandardTableau::from_rows_unchecked(new_rows), coeff.shift(exponent)));
    }
    out
}

/// `ψ_{d,t}∘Φ` (1-based `d`), not straightened. With `shortcut`, returns the
/// zero sum immediately when dominance forces the composite to vanish.
pub fn compose_psi(d: usize, t: usize, phi: &FormalHomSum, shortcut: bool) -> Result<FormalHomSum> {
    let target = lambda_dt(phi.ty(), d, t)?;
    let mut out = FormalHomSum::zero(phi.shape().to_vec(), target);
    if shortcut && killed_by_dominance(phi.shape(), out.ty()) {
        return Ok(out);
    }
    for (tab, c) in phi.terms() {
        for (s, c2) in psi_tableau(tab, d as Entry, t) {
            out.add_term_unchecked(&s, &(c * &c2));
        }
    }
    Ok(out)
}

/// Moves every `d` of row `r+1` into row `r`, sending a multiset of other
/// values of row `r` down (0-based `r`).
pub(crate) fn step_up(t: &RowStandardTableau, r: usize, d: Entry) -> Vec<(RowStandardTableau, LaurentPoly)> {
    let upper = t.row(r);
    let lower = t.row(r + 1);
    let big_d = count_in(lower, d);
    let vals: Vec<Entry> = distinct(upper).into_iter().filter(|&v| v != d).collect();
    let caps: Vec<usize> = vals.iter().map(|&v| count_in(upper, v)).collect();
    let base = -((big_d * (big_d + 1) / 2) as i64) - (big_d * count_lt(lower, d)) as i64;
    let mut out = Vec::new();
    for g in bounded_compositions(big_d, &caps) {
        let mut e = base;
        let mut coeff = LaurentPoly::one();
        let mut new_upper: Vec<Entry> = Vec::with_capacity(upper.len());
        let mut new_lower: Vec<Entry> = lower.iter().copied().filter(|&x| x != d).collect();
        for (k, &v) in vals.iter().enumerate() {
            let gv = g[k];
            let keep = count_in(upper, v) - gv;
            new_upper.extend(std::iter::repeat(v).take(keep));
            if gv == 0 {
                continue;
            }
            if v < d {
                e += gv as i64;
            }
            e += (gv * count_lt(lower, v)) as i64;
            coeff = &coeff * &gauss_binom((count_in(lower, v) + gv) as i64, gv as i64);
            new_lower.extend(std::iter::repeat(v).take(gv));
        }
        new_upper.extend(std::iter::repeat(d).take(count_in(upper, d) + big_d));
        new_upper.sort_unstable();
        new_lower.sort_unstable();
        let mut rows = t.rows().to_vec();
        rows[r] = new_upper;
        rows[r + 1] = new_lower;
        let c = &signed_monomial(big_d % 2 == 1, e) * &coeff;
        out.push((RowStandardTableau::from_rows_unchecked(rows), c));
    }
    out
}

/// For rows of equal length: moves every `d` of row `r` into row `r+1`,
/// sending a multiset of other values of row `r+1` up (0-based `r`).
pub(crate) fn step_down(t: &RowStandardTableau, r: usize, d: Entry) -> Vec<(RowStandardTableau, LaurentPoly)> {
    let upper = t.row(r);
    let lower = t.row(r + 1);
    debug_assert_eq!(upper.len(), lower.len());
    let big_d = count_in(upper, d);
    let vals: Vec<Entry> = distinct(lower).into_iter().filter(|&v| v != d).collect();
    let caps: Vec<usize> = vals.iter().map(|&v| count_in(lower, v)).collect();
    let base = -((big_d * big_d.saturating_sub(1) / 2) as i64) - (big_d * count_gt(upper, d)) as i64;
    let mut out = Vec::new();
    for g in bounded_compositions(big_d, &caps) {
        let mut e = base;
        let mut coeff = LaurentPoly::one();
        let mut new_lower: Vec<Entry> = Vec::with_capacity(lower.len());
        let mut new_upper: Vec<Entry> = upper.iter().copied().filter(|&x| x != d).collect();
        for (k, &v) in vals.iter().enumerate() {
            let gv = g[k];
            let keep = count_in(lower, v) - gv;
            new_lower.extend(std::iter::repeat(v).take(keep));
            if gv == 0 {
                continue;
            }
            if v < d {
                e -= gv as i64;
            }
            e += (gv * count_gt(upper, v)) as i64;
            coeff = &coeff * &gauss_binom((count_in(upper, v) + gv) as i64, gv as i64);
            new_upper.extend(std::iter::repeat(v).take(gv));
        }
        new_lower.extend(std::iter::repeat(d).take(count_in(lower, d) + big_d));
        new_upper.sort_unstable();
        new_lower.sort_unstable();
        let mut rows = t.rows().to_vec();
        rows[r] = new_upper;
        rows[r + 1] = new_lower;
        let c = &signed_monomial(big_d % 2 == 1, e) * &coeff;
        out.push((RowStandardTableau::from_rows_unchecked(rows), c));
    }
    out
}

/// The right-hand side of the relation `Θ_T = Σ c_U Θ_U` given by a move.
pub(crate) fn relation(t: &RowStandardTableau, mv: Move) -> Vec<(RowStandardTableau, LaurentPoly)> {
    match mv.variant {
        1 => step_up(t, mv.row, mv.value),
        _ => step_down(t, mv.row, mv.value),
    }
}

/// Public form of a single straightening move with a 1-based upper row.
pub fn straighten_step(t: &RowStandardTableau, r: usize, d: Entry, variant: u8) -> Result<FormalHomSum> {
    if r == 0 || r >= t.num_rows() {
        return Err(Error::Precondition(format!("row {r} out of range")));
    }
    let mv = match variant {
        1 => Move { variant: 1, row: r - 1, value: d },
        2 => {
            if t.row(r - 1).len() != t.row(r).len() {
                return Err(Error::Precondition(format!(
                    "the second move needs rows {r} and {} of equal length",
                    r + 1
                )));
            }
            Move { variant: 2, row: r - 1, value: d }
        }
        _ => return Err(Error::Precondition(format!("unknown variant {variant}"))),
    };
    let mut out = FormalHomSum::zero(t.shape(), t.content());
    for (u, c) in relation(t, mv) {
        out.add_term_unchecked(&u, &c);
    }
    Ok(out)
}

/// Applicable moves on adjacent rows that break column strictness, split
/// into progressive ones (they push small values up) and the rest.
pub(crate) fn candidates(t: &RowStandardTableau) -> (Vec<Move>, Vec<Move>) {
    let mut progressive = Vec::new();
    let mut other = Vec::new();
    for r in 0..t.num_rows().saturating_sub(1) {
        let upper = t.row(r);
        let lower = t.row(r + 1);
        if !lower.iter().zip(upper).any(|(lo, hi)| lo <= hi) {
            continue;
        }
        for d in distinct(lower) {
            let mv = Move { variant: 1, row: r, value: d };
            if d <= upper[0] {
                progressive.push(mv);
            } else {
                other.push(mv);
            }
        }
        if upper.len() == lower.len() {
            let top = *lower.last().expect("nonempty row");
            for d in distinct(upper) {
                let mv = Move { variant: 2, row: r, value: d };
                if d >= top {
                    progressive.push(mv);
                } else {
                    other.push(mv);
                }
            }
        }
    }
    (progressive, other)
}

/// The first move at the topmost violating row pair and its leftmost violating column.
pub(crate) fn topmost_leftmost(t: &RowStandardTableau) -> Option<Move> {
    for r in 0..t.num_rows().saturating_sub(1) {
        let upper = t.row(r);
        let lower = t.row(r + 1);
        if let Some((lo, _)) = lower.iter().zip(upper).find(|(lo, hi)| lo <= hi) {
            return Some(Move { variant: 1, row: r, value: *lo });
        }
    }
    None
}
