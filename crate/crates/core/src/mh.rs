//! An explicit nonzero homomorphism between Specht modules for the
//! MH-reducible shapes, and its verification through the kernel check.
//!
//! Tableaux here are *usable*: every row `k` holds `k` in all but its last two
//! cells, so a tableau is encoded by its last two entries per row (a
//! [`TailTableau`]). Tail cells are positional; decoding checks that the
//! resulting usable tableau is row-standard.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homcalc::{
    compose_psi, kernel_intersection_check, killed_by_dominance, lambda_dt, psi_pairs, Entry, FormalHomSum,
    RowStandardTableau, Straightener,
};
use crate::partition::Partition;
use crate::qarith::LaurentPoly;

/// Parameters `(s, s', f, g)` of the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MhParams {
    pub s: usize,
    pub s_prime: usize,
    pub f: usize,
    pub g: usize,
}

/// Which of the two constructions applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `s` and `s'` odd, `s ≥ 3`.
    Odd,
    /// `s = 2`, `s'` even, `f = 0`.
    Even,
}

impl MhParams {
    pub fn new(s: usize, s_prime: usize, f: usize, g: usize) -> Result<Self> {
        let p = MhParams { s, s_prime, f, g };
        p.regime()?;
        Ok(p)
    }

    /// Validates the parameters and reports the regime.
    pub fn regime(&self) -> Result<Regime> {
        let MhParams { s, s_prime, f, g } = *self;
        if g < 2 {
            return Err(Error::InvalidParams(format!("g={g} must be at least 2")));
        }
        if s < 2 || s_prime < s {
            return Err(Error::InvalidParams(format!("need s' >= s >= 2, got s={s}, s'={s_prime}")));
        }
        if s % 2 == 1 && s_prime % 2 == 1 {
            return Ok(Regime::Odd);
        }
        if s == 2 && s_prime % 2 == 0 && f == 0 {
            return Ok(Regime::Even);
        }
        Err(Error::InvalidParams(format!(
            "(s,s',f,g)=({s},{s_prime},{f},{g}): need s, s' odd, or s=2 with s' even and f=0"
        )))
    }

    /// `m = g + f + s'`.
    pub fn m(&self) -> usize {
        self.g + self.f + self.s_prime
    }

    /// Number of rows of `μ`, `s + f + g - 2`.
    pub fn rows(&self) -> usize {
        self.s + self.f + self.g - 2
    }
}

/// The pair `(μ, λ)` of the construction.
pub fn mu_lambda_of(p: &MhParams) -> Result<(Partition, Partition)> {
    p.regime()?;
    let m = p.m();
    let mut mu = vec![m + 1, m + 1];
    mu.extend(std::iter::repeat(m).take(p.s - 2));
    let mut lambda = vec![m; p.s];
    for k in 1..=p.f {
        mu.push(m - k);
        lambda.push(m - k);
    }
    mu.extend((3..=p.g).rev());
    lambda.extend((2..=p.g).rev());
    Ok((Partition::new(mu)?, Partition::new(lambda)?))
}

fn check_odd_s(s: usize) -> Result<()> {
    if s < 3 || s % 2 == 0 {
        return Err(Error::InvalidParams(format!("s={s} must be odd and at least 3")));
    }
    Ok(())
}

/// Pairs `1 ≤ i < j ≤ s` with `j` odd or `i ≥ 3`.
pub fn index_set(s: usize) -> Result<Vec<(usize, usize)>> {
    check_odd_s(s)?;
    Ok((1..=s)
        .flat_map(|i| (i + 1..=s).map(move |j| (i, j)))
        .filter(|&(i, j)| j % 2 == 1 || i >= 3)
        .collect())
}

/// The coefficient attached to `(i, j)`: `(s-1)/2` for `(2,3)`, else `(-1)^{j+1}`.
pub fn m_coeff(i: usize, j: usize, s: usize) -> Result<i64> {
    check_odd_s(s)?;
    if !(1 <= i && i < j && j <= s) {
        return Err(Error::InvalidParams(format!("(i,j)=({i},{j}) out of range for s={s}")));
    }
    if (i, j) == (2, 3) {
        return Ok(((s - 1) / 2) as i64);
    }
    Ok(if j % 2 == 1 { 1 } else { -1 })
}

/// Last two entries of each row of a usable tableau, in positional order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TailTableau {
    pub rows: Vec<[Entry; 2]>,
}

impl TailTableau {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Every entry increased by `k`.
    pub fn shifted(&self, k: Entry) -> TailTableau {
        TailTableau { rows: self.rows.iter().map(|r| [r[0] + k, r[1] + k]).collect() }
    }

    /// Row `k` of the usable tableau: `k` repeated `μ_k - 2` times, then the tail.
    fn usable_rows(&self, mu: &Partition) -> Result<Vec<Vec<Entry>>> {
        if mu.len() != self.rows.len() {
            return Err(Error::Precondition(format!("{} tail rows for shape {mu}", self.rows.len())));
        }
        mu.parts()
            .iter()
            .zip(&self.rows)
            .enumerate()
            .map(|(k, (&len, tail))| {
                if len < 2 {
                    return Err(Error::Precondition(format!("row {} of {mu} is shorter than 2", k + 1)));
                }
                let mut row = vec![(k + 1) as Entry; len - 2];
                row.extend_from_slice(tail);
                Ok(row)
            })
            .collect()
    }

    /// The usable `μ`-tableau; fails if it is not row-standard.
    pub fn decode(&self, mu: &Partition) -> Result<RowStandardTableau> {
        RowStandardTableau::new(self.usable_rows(mu)?)
    }

    /// The usable `μ`-tableau with each row sorted (only its row contents).
    pub fn decode_row_contents(&self, mu: &Partition) -> Result<RowStandardTableau> {
        Ok(RowStandardTableau::from_rows_sorted(self.usable_rows(mu)?))
    }
}

/// `(1,1,2,...,2)` of length `s`, optionally with part `d` raised by one and
/// part `d+1` lowered by one.
fn s_type(s: usize, d: Option<usize>) -> Vec<usize> {
    let mut ty = vec![2usize; s];
    ty[0] = 1;
    ty[1] = 1;
    if let Some(d) = d {
        ty[d - 1] += 1;
        ty[d] -= 1;
    }
    ty
}

/// Fill of the `(2^{s-1})` tail with `(1,2) = i`, `(2,2) = j` and the remaining
/// cells in chain order `(1,1) ≤ (2,1) ≤ (3,1) ≤ (3,2) ≤ (4,1) ≤ ...`.
fn chain_fill(i: usize, j: usize, ty: &[usize]) -> Result<TailTableau> {
    let s = ty.len();
    let mut rest: Vec<Entry> = Vec::new();
    for (v, &c) in ty.iter().enumerate() {
        rest.extend(std::iter::repeat((v + 1) as Entry).take(c));
    }
    for x in [i, j] {
        let pos = rest
            .iter()
            .position(|&v| v as usize == x)
            .ok_or_else(|| Error::InvalidParams(format!("value {x} does not occur in type {ty:?}")))?;
        rest.remove(pos);
    }
    let mut rows = vec![[rest[0], i as Entry], [rest[1], j as Entry]];
    for k in 0..s - 3 {
        rows.push([rest[2 + 2 * k], rest[3 + 2 * k]]);
    }
    Ok(TailTableau { rows })
}

/// All positional fillings of the `(2^{s-1})` tail satisfying the chain
/// conditions, found by exhaustive search. Used to confirm uniqueness.
pub fn chain_fillings_exhaustive(i: usize, j: usize, ty: &[usize]) -> Vec<TailTableau> {
    let s = ty.len();
    let cells = 2 * (s - 1);
    let mut counts = ty.to_vec();
    let mut out = Vec::new();
    let mut cur: Vec<Entry> = Vec::with_capacity(cells);
    fn rec(counts: &mut Vec<usize>, cur: &mut Vec<Entry>, cells: usize, i: usize, j: usize, out: &mut Vec<TailTableau>) {
        if cur.len() == cells {
            let rows: Vec<[Entry; 2]> = cur.chunks(2).map(|c| [c[0], c[1]]).collect();
            let chain: Vec<Entry> = std::iter::once(rows[0][0])
                .chain(std::iter::once(rows[1][0]))
                .chain(rows[2..].iter().flatten().copied())
                .collect();
            if rows[0][1] as usize == i && rows[1][1] as usize == j && chain.windows(2).all(|w| w[0] <= w[1]) {
                out.push(TailTableau { rows });
            }
            return;
        }
        for v in 0..counts.len() {
            if counts[v] == 0 {
                continue;
            }
            counts[v] -= 1;
            cur.push((v + 1) as Entry);
            rec(counts, cur, cells, i, j, out);
            cur.pop();
            counts[v] += 1;
        }
    }
    rec(&mut counts, &mut cur, cells, i, j, &mut out);
    out
}

/// The tail `S(i,j)` of type `(1^2, 2^{s-2})`.
pub fn s_tableau(i: usize, j: usize, s: usize) -> Result<TailTableau> {
    check_odd_s(s)?;
    if !(1 <= i && i < j && j <= s) {
        return Err(Error::InvalidParams(format!("(i,j)=({i},{j}) out of range for s={s}")));
    }
    chain_fill(i, j, &s_type(s, None))
}

/// The tail `S^d(i,j)` of type `ν^d`; undefined when `d = 1` and `2 ∈ {i,j}`.
pub fn s_d_tableau(d: usize, i: usize, j: usize, s: usize) -> Result<TailTableau> {
    check_odd_s(s)?;
    if !(1 <= i && i < j && j <= s) || d == 0 || d >= s {
        return Err(Error::InvalidParams(format!("(d,i,j)=({d},{i},{j}) out of range for s={s}")));
    }
    if d == 1 && (i == 2 || j == 2) {
        return Err(Error::InvalidParams("S^1(i,j) is undefined when i or j equals 2".into()));
    }
    chain_fill(i, j, &s_type(s, Some(d)))
}

/// Whether every entry in rows `1..=k` is below every entry in rows `k+1..`.
fn split_at(t: &TailTableau, k: usize) -> bool {
    let top = t.rows[..k].iter().flatten().max();
    let bottom = t.rows[k..].iter().flatten().min();
    match (top, bottom) {
        (Some(a), Some(b)) => a < b,
        _ => true,
    }
}

/// The first row at which `t` is split (row `g-1` always is).
pub fn first_split(t: &TailTableau) -> usize {
    (1..=t.len()).find(|&k| split_at(t, k)).expect("last row is always split")
}

/// Membership in the sign-carrying family of `(2^{g-1})` tails of type `(2^{g-1})`.
pub fn in_family(t: &TailTableau, g: usize) -> bool {
    let n = g - 1;
    if t.len() != n {
        return false;
    }
    let mut counts = vec![0usize; n];
    for &v in t.rows.iter().flatten() {
        if v == 0 || v as usize > n {
            return false;
        }
        counts[v as usize - 1] += 1;
    }
    if counts.iter().any(|&c| c != 2) {
        return false;
    }
    if t.rows.iter().any(|r| r[0] > r[1]) {
        return false;
    }
    if t.rows.iter().enumerate().any(|(k, r)| (r[0] as usize) < k) {
        return false;
    }
    if (2..=g.saturating_sub(2)).any(|k| t.rows[k - 1][0] >= t.rows[k][1]) {
        return false;
    }
    let a = first_split(t);
    (a..=n).all(|k| split_at(t, k))
}

/// The family of tails with their signs `(-1)^a`, `a` the first split row.
pub fn enumerate_a(g: usize) -> Result<Vec<(TailTableau, i64)>> {
    if g < 2 {
        return Err(Error::InvalidParams(format!("g={g} must be at least 2")));
    }
    let n = g - 1;
    let mut out = Vec::new();
    let mut rows: Vec<[Entry; 2]> = Vec::with_capacity(n);
    let mut counts = vec![2usize; n];
    fn rec(rows: &mut Vec<[Entry; 2]>, counts: &mut Vec<usize>, g: usize, out: &mut Vec<(TailTableau, i64)>) {
        let n = g - 1;
        let k = rows.len();
        if k == n {
            let t = TailTableau { rows: rows.clone() };
            if in_family(&t, g) {
                let sign = if first_split(&t) % 2 == 0 { 1 } else { -1 };
                out.push((t, sign));
            }
            return;
        }
        // Row k+1 (1-based) has entries at least k.
        for a in k.max(1)..=n {
            if counts[a - 1] == 0 {
                continue;
            }
            counts[a - 1] -= 1;
            for b in a..=n {
                if counts[b - 1] == 0 {
                    continue;
                }
                counts[b - 1] -= 1;
                rows.push([a as Entry, b as Entry]);
                rec(rows, counts, g, out);
                rows.pop();
                counts[b - 1] += 1;
            }
            counts[a - 1] += 1;
        }
    }
    rec(&mut rows, &mut counts, g, &mut out);
    Ok(out)
}

fn odd_tail(head: &TailTableau, t: &TailTableau, p: &MhParams) -> TailTableau {
    let mut rows = head.rows.clone();
    for k in p.s..p.s + p.f {
        rows.push([(k + 1) as Entry, (k + 1) as Entry]);
    }
    rows.extend(t.shifted((p.s + p.f) as Entry).rows);
    TailTableau { rows }
}

fn require(p: &MhParams, regime: Regime) -> Result<()> {
    if p.regime()? != regime {
        return Err(Error::InvalidParams(format!("parameters {p:?} are not in the {regime:?} regime")));
    }
    Ok(())
}

/// The full tail of `U(i,j,T)` (odd regime).
pub fn u_tail(i: usize, j: usize, t: &TailTableau, p: &MhParams) -> Result<TailTableau> {
    require(p, Regime::Odd)?;
    Ok(odd_tail(&s_tableau(i, j, p.s)?, t, p))
}

/// The full tail of `U^d(i,j,T)`, built from `S^d(i,j)` (odd regime).
pub fn u_d_tail(d: usize, i: usize, j: usize, t: &TailTableau, p: &MhParams) -> Result<TailTableau> {
    require(p, Regime::Odd)?;
    Ok(odd_tail(&s_d_tableau(d, i, j, p.s)?, t, p))
}

/// `U(i,j,T)` as a usable `μ`-tableau; fails when the positional decoding is
/// not row-standard.
pub fn u_tableau(i: usize, j: usize, t: &TailTableau, p: &MhParams) -> Result<RowStandardTableau> {
    let (mu, _) = mu_lambda_of(p)?;
    u_tail(i, j, t, p)?.decode(&mu)
}

/// `U(T)` for the even regime: a top row `[1,2]` above `T + 2`.
pub fn u_tableau_even(t: &TailTableau, p: &MhParams) -> Result<RowStandardTableau> {
    require(p, Regime::Even)?;
    let (mu, _) = mu_lambda_of(p)?;
    let mut rows = vec![[1, 2]];
    rows.extend(t.shifted(2).rows);
    TailTableau { rows }.decode(&mu)
}

/// The constructed homomorphism together with bookkeeping about its terms.
#[derive(Clone, Debug)]
pub struct MhTheta {
    pub params: MhParams,
    pub mu: Partition,
    pub lambda: Partition,
    pub sum: FormalHomSum,
    /// Terms `(i,j,T)` whose positional decoding is not row-standard and
    /// which are therefore not part of the sum.
    pub excluded_terms: usize,
    /// Every included `U` is semistandard.
    pub all_semistandard: bool,
}

/// `Σ m_{ij} sgn(T) Θ(i,j,T)` (odd regime) or `Σ sgn(T) Θ_{(T)}` (even regime).
pub fn build_theta(p: &MhParams) -> Result<MhTheta> {
    let regime = p.regime()?;
    let (mu, lambda) = mu_lambda_of(p)?;
    let family = enumerate_a(p.g)?;
    let mut sum = FormalHomSum::zero(mu.parts().to_vec(), lambda.parts().to_vec());
    let mut excluded = 0;
    let mut all_ss = true;
    let mut add = |u: RowStandardTableau, c: i64| -> Result<()> {
        all_ss &= u.is_semistandard();
        sum.add_term(&u, &LaurentPoly::constant(c))
    };
    match regime {
        Regime::Odd => {
            for (i, j) in index_set(p.s)? {
                let m = m_coeff(i, j, p.s)?;
                for (t, sign) in &family {
                    match u_tail(i, j, t, p)?.decode(&mu) {
                        Ok(u) => add(u, m * sign)?,
                        Err(_) => excluded += 1,
                    }
                }
            }
        }
        Regime::Even => {
            for (t, sign) in &family {
                add(u_tableau_even(t, p)?, *sign)?;
            }
        }
    }
    Ok(MhTheta { params: *p, mu, lambda, sum, excluded_terms: excluded, all_semistandard: all_ss })
}

/// `(d,1)` for `1 ≤ d ≤ l` and `(d,2)` for `s+1 ≤ d ≤ l`, with `l = s+f+g-2`.
pub fn reduced_pairs(p: &MhParams) -> Vec<(usize, usize)> {
    let l = p.rows();
    let mut out: Vec<(usize, usize)> = (1..=l).map(|d| (d, 1)).collect();
    out.extend((p.s + 1..=l).map(|d| (d, 2)));
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct MhReport {
    pub params: MhParams,
    pub mu: Vec<usize>,
    pub lambda: Vec<usize>,
    pub support_size: usize,
    pub nonzero: bool,
    pub all_semistandard: bool,
    pub excluded_terms: usize,
    pub pairs_total: usize,
    pub pairs_checked: usize,
    pub pairs_failed: Vec<(usize, usize)>,
    /// Pairs outside the reduced list that dominance does not kill (must be empty).
    pub unexpected_pairs: Vec<(usize, usize)>,
}

impl MhReport {
    pub fn verified(&self) -> bool {
        self.nonzero && self.all_semistandard && self.pairs_failed.is_empty() && self.unexpected_pairs.is_empty()
    }
}

/// Builds the homomorphism and checks that its image lies in `S^λ`.
pub fn verify_mainhom(st: &Straightener, p: &MhParams, parallel: bool) -> Result<MhReport> {
    let theta = build_theta(p)?;
    let report = kernel_intersection_check(st, &theta.sum, &theta.lambda, parallel)?;
    let reduced = reduced_pairs(p);
    let unexpected = report
        .checked_pairs
        .iter()
        .copied()
        .filter(|pair| !reduced.contains(pair))
        .collect();
    Ok(MhReport {
        params: *p,
        mu: theta.mu.parts().to_vec(),
        lambda: theta.lambda.parts().to_vec(),
        support_size: theta.sum.len(),
        nonzero: !theta.sum.is_zero(),
        all_semistandard: theta.all_semistandard && theta.sum.is_canonical(),
        excluded_terms: theta.excluded_terms,
        pairs_total: report.total_pairs,
        pairs_checked: report.checked_pairs.len(),
        pairs_failed: report.failed_pairs,
        unexpected_pairs: unexpected,
    })
}

/// One comparison of two straightened expressions.
#[derive(Clone, Debug, Serialize)]
pub struct CancellationCheck {
    pub name: String,
    pub d: usize,
    pub t: usize,
    pub i: usize,
    pub j: usize,
    /// Index into the tail family, or `None` for sums over the family.
    pub tail: Option<usize>,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CancellationReport {
    pub checks: Vec<CancellationCheck>,
    /// `(d, i, j)` combinations with `1 ≤ d ≤ s-1` not covered by any listed case.
    pub uncovered: Vec<(usize, usize, usize)>,
}

impl CancellationReport {
    pub fn mismatches(&self) -> Vec<&CancellationCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn count(&self, name: &str) -> usize {
        self.checks.iter().filter(|c| c.name == name).count()
    }
}

/// Expected right-hand side of a case in the top block: terms
/// `(sign, i', j')` standing for `sign · Θ^d(i', j', T)`.
type Rhs = Vec<(i64, usize, usize)>;

fn sign_pow(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The case of the top-block formula that applies to `(d, i, j)`, if any.
pub fn topbit_case(d: usize, i: usize, j: usize, m: usize) -> Option<(char, Rhs)> {
    let pm = sign_pow(m);
    let mp1 = sign_pow(m + 1);
    if d >= 3 && i < d && j == d {
        return Some(('a', vec![(pm, i, d)]));
    }
    if d >= 4 && i < d && j == d + 1 {
        return Some(('b', vec![(pm, i, d)]));
    }
    if d >= 4 && i < d {
        return Some(('c', vec![]));
    }
    if d >= 3 && i == d && j == d + 1 {
        return Some(('d', vec![(sign_pow(m + d + 1), 2, d)]));
    }
    if d >= 2 && i == d && j >= d + 2 {
        return Some(('e', vec![(mp1, d, j)]));
    }
    if d >= 2 && i == d + 1 && j >= d + 2 {
        return Some(('f', vec![(pm, d, j)]));
    }
    if d >= 3 && i >= d + 2 {
        return Some(('g', vec![]));
    }
    if d == 3 && i == 2 && j >= 5 {
        return Some(('h', vec![(mp1, 2, 3)]));
    }
    if d == 2 && (i, j) == (2, 3) {
        return Some(('i', vec![]));
    }
    if d == 2 && i >= 4 {
        return Some(('j', vec![(sign_pow(m + i), 2, i)]));
    }
    if d == 1 && i == 2 {
        return Some(('k', vec![]));
    }
    if d == 1 && i == 3 {
        return Some(('l', vec![(pm, 1, j)]));
    }
    if d == 1 && i >= 4 {
        return Some(('m', vec![(sign_pow(m + i), 1, i), (sign_pow(m + i + 1), 1, j)]));
    }
    None
}

struct Oracle<'a> {
    st: &'a Straightener,
    p: MhParams,
    mu: Partition,
    lambda: Partition,
}

impl Oracle<'_> {
    /// `Θ(i,j,T)` from the row contents of its usable tableau.
    fn theta(&self, i: usize, j: usize, t: &TailTableau) -> Result<FormalHomSum> {
        let u = u_tail(i, j, t, &self.p)?.decode_row_contents(&self.mu)?;
        let mut s = FormalHomSum::zero(self.mu.parts().to_vec(), self.lambda.parts().to_vec());
        s.add_term(&u, &LaurentPoly::one())?;
        Ok(s)
    }

    fn theta_d(&self, d: usize, i: usize, j: usize, t: &TailTableau) -> Result<FormalHomSum> {
        let u = u_d_tail(d, i, j, t, &self.p)?.decode_row_contents(&self.mu)?;
        let ty = lambda_dt(self.lambda.parts(), d, 1)?;
        let mut s = FormalHomSum::zero(self.mu.parts().to_vec(), ty);
        s.add_term(&u, &LaurentPoly::one())?;
        Ok(s)
    }

    /// `ψ_{d,t}∘Φ` straightened and evaluated at `q = -1`.
    fn psi(&self, phi: &FormalHomSum, d: usize, t: usize) -> Result<FormalHomSum> {
        let composed = compose_psi(d, t, phi, false)?;
        Ok(self.st.semistandardize(&composed)?.evaluate_minus_one())
    }

    fn straightened(&self, phi: &FormalHomSum) -> Result<FormalHomSum> {
        Ok(self.st.semistandardize(phi)?.evaluate_minus_one())
    }
}

/// Checks the case-by-case formulas for `ψ_{d,1}` on the top block, the
/// vanishing of the weighted top-block sums, the middle-block vanishing
/// statements and the signed sums over the tail family on the bottom block.
///
/// Individual terms are computed from the row contents of their usable
/// tableaux, so terms with `i = 1` (whose positional decoding is not
/// row-standard) are compared through the tableau with the same rows.
pub fn verify_cancellations(st: &Straightener, p: &MhParams) -> Result<CancellationReport> {
    require(p, Regime::Odd)?;
    let (mu, lambda) = mu_lambda_of(p)?;
    let oracle = Oracle { st, p: *p, mu, lambda };
    let family = enumerate_a(p.g)?;
    let pairs = index_set(p.s)?;
    let m = p.m();
    let mut report = CancellationReport::default();

    for d in 1..p.s {
        for &(i, j) in &pairs {
            let Some((case, rhs)) = topbit_case(d, i, j, m) else {
                report.uncovered.push((d, i, j));
                continue;
            };
            for (k, (t, _)) in family.iter().enumerate() {
                let lhs = oracle.psi(&oracle.theta(i, j, t)?, d, 1)?;
                let ty = lambda_dt(oracle.lambda.parts(), d, 1)?;
                let mut expected = FormalHomSum::zero(oracle.mu.parts().to_vec(), ty);
                for &(sign, a, b) in &rhs {
                    expected.add_scaled(&oracle.theta_d(d, a, b, t)?, &LaurentPoly::constant(sign))?;
                }
                let expected = oracle.straightened(&expected)?;
                report.checks.push(CancellationCheck {
                    name: format!("topbit({case})"),
                    d,
                    t: 1,
                    i,
                    j,
                    tail: Some(k),
                    passed: lhs == expected,
                });
            }
        }
    }

    // The weighted sum over the index set, for each tail, built from the
    // terms that enter the homomorphism.
    for (k, (t, _)) in family.iter().enumerate() {
        let mut sum = FormalHomSum::zero(oracle.mu.parts().to_vec(), oracle.lambda.parts().to_vec());
        for &(i, j) in &pairs {
            if let Ok(u) = u_tail(i, j, t, p)?.decode(&oracle.mu) {
                sum.add_term(&u, &LaurentPoly::constant(m_coeff(i, j, p.s)?))?;
            }
        }
        for d in 1..p.s {
            let value = oracle.psi(&sum, d, 1)?;
            report.checks.push(CancellationCheck {
                name: "topcory".into(),
                d,
                t: 1,
                i: 0,
                j: 0,
                tail: Some(k),
                passed: value.is_zero(),
            });
        }
    }

    for &(i, j) in &pairs {
        for (k, (t, _)) in family.iter().enumerate() {
            let theta = oracle.theta(i, j, t)?;
            for d in p.s..p.s + p.f {
                let value = oracle.psi(&theta, d, 1)?;
                report.checks.push(CancellationCheck {
                    name: "middle".into(),
                    d,
                    t: 1,
                    i,
                    j,
                    tail: Some(k),
                    passed: value.is_zero(),
                });
            }
            for d in p.s + 1..=p.s + p.f {
                let value = oracle.psi(&theta, d, 2)?;
                report.checks.push(CancellationCheck {
                    name: "middle2".into(),
                    d,
                    t: 2,
                    i,
                    j,
                    tail: Some(k),
                    passed: value.is_zero(),
                });
            }
        }
    }

    let l = p.rows();
    for &(i, j) in &pairs {
        let mut sum = FormalHomSum::zero(oracle.mu.parts().to_vec(), oracle.lambda.parts().to_vec());
        for (t, sign) in &family {
            sum.add_scaled(&oracle.theta(i, j, t)?, &LaurentPoly::constant(*sign))?;
        }
        for d in p.s + p.f..=l {
            for t in 1..=2 {
                if t > oracle.lambda.part(d + 1) {
                    continue;
                }
                let value = oracle.psi(&sum, d, t)?;
                report.checks.push(CancellationCheck {
                    name: "bot1".into(),
                    d,
                    t,
                    i,
                    j,
                    tail: None,
                    passed: value.is_zero(),
                });
            }
        }
    }
    Ok(report)
}

/// Per-case counts of a report, for display.
pub fn summarize(report: &CancellationReport) -> BTreeMap<String, (usize, usize)> {
    let mut out: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for c in &report.checks {
        let e = out.entry(c.name.clone()).or_default();
        e.0 += 1;
        if !c.passed {
            e.1 += 1;
        }
    }
    out
}

/// Whether dominance alone kills `ψ_{d,t}∘Θ` for the pair.
pub fn pair_killed_by_dominance(p: &MhParams, d: usize, t: usize) -> Result<bool> {
    let (mu, lambda) = mu_lambda_of(p)?;
    Ok(killed_by_dominance(mu.parts(), &lambda_dt(lambda.parts(), d, t)?))
}

/// All `(d,t)` for `λ` that are not in the reduced list.
pub fn pairs_outside_reduced_list(p: &MhParams) -> Result<Vec<(usize, usize)>> {
    let (_, lambda) = mu_lambda_of(p)?;
    let reduced = reduced_pairs(p);
    Ok(psi_pairs(&lambda).into_iter().filter(|x| !reduced.contains(x)).collect())
}
