//! Reducibility criteria for Specht modules at `q = -1` and the classifier
//! built on top of them.

use std::fmt;

use dashmap::DashMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partition::{Node, Partition, RegularityClass};

/// Verdict of [`classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Irreducible,
    IrreduciblePerConjecture,
    Reducible,
    Unknown,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Irreducible => "irreducible",
            Verdict::IrreduciblePerConjecture => "irreducible-per-conjecture",
            Verdict::Reducible => "reducible",
            Verdict::Unknown => "unknown",
        }
    }
}

/// A criterion that proves reducibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Witness {
    BrokenLadder,
    Cp,
    CpConjugate,
    Mh,
    MhConjugate,
    Llt,
    LltConjugate,
    Inductive(u8),
    NotCore(u64),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::BrokenLadder => write!(f, "BrokenLadder"),
            Witness::Cp => write!(f, "CP"),
            Witness::CpConjugate => write!(f, "CPConjugate"),
            Witness::Mh => write!(f, "MH"),
            Witness::MhConjugate => write!(f, "MHConjugate"),
            Witness::Llt => write!(f, "LLT"),
            Witness::LltConjugate => write!(f, "LLTConjugate"),
            Witness::Inductive(i) => write!(f, "Inductive:{i}"),
            Witness::NotCore(e) => write!(f, "NotCore:{e}"),
        }
    }
}

impl std::str::FromStr for Witness {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown witness {s:?}"));
        Ok(match s {
            "BrokenLadder" => Witness::BrokenLadder,
            "CP" => Witness::Cp,
            "CPConjugate" => Witness::CpConjugate,
            "MH" => Witness::Mh,
            "MHConjugate" => Witness::MhConjugate,
            "LLT" => Witness::Llt,
            "LLTConjugate" => Witness::LltConjugate,
            _ => {
                let (tag, num) = s.split_once(':').ok_or_else(bad)?;
                match tag {
                    "Inductive" => Witness::Inductive(num.parse().map_err(|_| bad())?),
                    "NotCore" => Witness::NotCore(num.parse().map_err(|_| bad())?),
                    _ => return Err(bad()),
                }
            }
        })
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Witness {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Output of [`classify`]. Fields are declared in key order so the JSON form is sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub char: u64,
    pub class: String,
    pub fm: bool,
    pub fm_conjugate: bool,
    pub n: usize,
    pub partition: Partition,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
}

/// Memo of classification records keyed by `(partition, characteristic)`.
///
/// Inserts are idempotent: every value is a deterministic function of its key.
#[derive(Debug, Default)]
pub struct Store {
    records: DashMap<(Partition, u64), ClassificationRecord>,
}

impl Store {
    pub fn new() -> Self {
        Store::default()
    }

    pub fn get(&self, lambda: &Partition, p: u64) -> Option<ClassificationRecord> {
        self.records.get(&(lambda.clone(), p)).map(|r| r.clone())
    }

    pub fn insert(&self, record: ClassificationRecord) {
        self.records
            .entry((record.partition.clone(), record.char))
            .or_insert(record);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// FM test; false for partitions that are not doubly-singular.
pub fn is_fm_partition(lambda: &Partition) -> bool {
    if !lambda.is_doubly_singular() {
        return false;
    }
    let params = lambda.structure_params();
    let (Some(a), Some(b), Some(c)) = (params.a_low, params.b, params.c) else {
        return false;
    };
    let l = lambda.len();
    if (1..=l).any(|i| i != a && lambda.part(i) > lambda.part(i + 1) + 1) {
        return false;
    }
    if !(lambda.part(b) + 1 >= a && a >= b + 1) {
        return false;
    }
    if (1..c).any(|i| lambda.part(i) <= lambda.part(i + 1)) {
        return false;
    }
    let addable = lambda.addable_nodes();
    let considered: Vec<&Node> = if c == 0 {
        addable.iter().filter(|nd| nd.row != 1 && nd.col != 1).collect()
    } else {
        addable.iter().collect()
    };
    considered.windows(2).all(|w| w[0].residue() == w[1].residue())
}

/// An addable node on ladder `m` and a removable node on ladder `l` with `m > l`, `m ≡ l (mod 2)`.
pub fn is_cp_reducible(lambda: &Partition) -> bool {
    let removable: Vec<usize> = lambda.removable_nodes().iter().map(Node::ladder).collect();
    lambda.addable_nodes().iter().any(|add| {
        let m = add.ladder();
        removable.iter().any(|&l| m > l && (m - l) % 2 == 0)
    })
}

/// Parameters of an MH-shaped tail starting after row `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MhMatch {
    pub x: usize,
    pub s: usize,
    pub s_prime: usize,
    pub f: usize,
    pub g: usize,
}

fn match_mh_tail(tail: &[usize]) -> Option<(usize, usize, usize, usize)> {
    let top = *tail.first()?;
    let s = tail.iter().take_while(|&&v| v == top).count();
    let mut idx = s;
    let mut f = 0;
    while idx < tail.len() && tail[idx] + f + 1 == top {
        f += 1;
        idx += 1;
    }
    let rest = &tail[idx..];
    let g = *rest.first()?;
    if g < 2 || rest.len() != g - 1 {
        return None;
    }
    if rest.iter().enumerate().any(|(k, &v)| v != g - k) {
        return None;
    }
    let s_prime = top.checked_sub(g + f)?;
    let parity_ok = (s % 2 == 1 && s_prime % 2 == 1) || (s == 2 && s_prime % 2 == 0 && f == 0);
    (s >= 2 && s_prime >= s && parity_ok).then_some((s, s_prime, f, g))
}

/// The first (smallest `x`) MH match of `lambda`, if any.
pub fn mh_parameters(lambda: &Partition) -> Option<MhMatch> {
    (0..lambda.len()).find_map(|x| mh_parameters_at(lambda, x))
}

fn mh_parameters_at(lambda: &Partition, x: usize) -> Option<MhMatch> {
    if x >= lambda.len() || (x > 0 && lambda.part(x) == lambda.part(x + 1)) {
        return None;
    }
    let (s, s_prime, f, g) = match_mh_tail(&lambda.parts()[x..])?;
    Some(MhMatch { x, s, s_prime, f, g })
}

pub fn is_mh_reducible(lambda: &Partition) -> bool {
    mh_parameters(lambda).is_some()
}

/// Rows `x+1`, `x+2` gain a node and the last row loses two.
pub fn mh_target_mu(lambda: &Partition, x: usize) -> Result<Partition> {
    if mh_parameters_at(lambda, x).is_none() {
        return Err(Error::Precondition(format!("{lambda} has no MH tail after row {x}")));
    }
    let mut parts = lambda.parts().to_vec();
    parts[x] += 1;
    parts[x + 1] += 1;
    let last = parts.len() - 1;
    parts[last] -= 2;
    while parts.last() == Some(&0) {
        parts.pop();
    }
    Partition::new(parts)
}

pub fn is_llt_reducible(lambda: &Partition) -> bool {
    let l = lambda.len();
    !lambda.is_two_regular()
        && !lambda.has_broken_ladder()
        && lambda.part(1) >= l + 1
        && lambda.part(l) >= 2
        && (1..l).any(|x| lambda.part(x) > lambda.part(x + 1) + 1)
}

/// `mu ⊆ lambda` and `mu_i - mu_{i+1}` odd for `i < len(lambda)`.
pub fn alternating_in(mu: &Partition, lambda: &Partition) -> bool {
    mu.is_subset_of(lambda) && (1..lambda.len()).all(|i| (mu.part(i) - mu.part(i + 1)) % 2 == 1)
}

/// The growth tableau of `mu` inside `lambda`: layer `j` holds the nodes added at step `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LltTableau {
    pub shape: Partition,
    pub rows: Vec<Vec<usize>>,
}

impl LltTableau {
    /// Entry in the last column of row `r` (1-based).
    pub fn row_end(&self, r: usize) -> usize {
        *self.rows[r - 1].last().expect("rows are nonempty")
    }
}

pub fn llt_tableau(lambda: &Partition, mu: &Partition) -> Result<LltTableau> {
    if !alternating_in(mu, lambda) {
        return Err(Error::Precondition(format!("{mu} is not alternating in {lambda}")));
    }
    let l = lambda.len();
    let mut rows: Vec<Vec<usize>> = (1..=l).map(|r| vec![0; mu.part(r)]).collect();
    let mut current: Vec<usize> = (1..=l).map(|r| mu.part(r)).collect();
    let mut layer = 0;
    while (1..=l).any(|r| current[r - 1] < lambda.part(r)) {
        layer += 1;
        let grow: Vec<usize> = (1..=l)
            .filter(|&r| {
                current[r - 1] < lambda.part(r) && (r == 1 || current[r - 2] > current[r - 1])
            })
            .collect();
        assert!(!grow.is_empty(), "growth inside a partition always has an addable node");
        for r in grow {
            current[r - 1] += 1;
            rows[r - 1].push(layer);
        }
    }
    Ok(LltTableau { shape: lambda.clone(), rows })
}

/// `Σ N(r,c)` over the nodes of `lambda`.
pub fn n_statistic(lambda: &Partition, mu: &Partition) -> Result<i64> {
    let t = llt_tableau(lambda, mu)?;
    let ends: Vec<usize> = (1..=lambda.len()).map(|r| t.row_end(r)).collect();
    let mut total = 0i64;
    for (r0, row) in t.rows.iter().enumerate() {
        for &j in row {
            for &e in &ends[..r0] {
                if e < j {
                    total += if (j - e) % 2 == 1 { 1 } else { -1 };
                }
            }
        }
    }
    Ok(total)
}

/// Two partitions alternating in `lambda` whose N-statistics differ.
pub fn llt_witness_pair(lambda: &Partition) -> Result<(Partition, Partition)> {
    if !is_llt_reducible(lambda) {
        return Err(Error::Precondition(format!("{lambda} is not LLT-reducible")));
    }
    let l = lambda.len();
    let x = (1..l)
        .filter(|&i| lambda.part(i) > lambda.part(i + 1) + 1)
        .max()
        .expect("LLT-reducible partitions have a gap");
    let target = lambda.part(l) + l;
    let (mu, mu_tilde);
    if lambda.part(1) + 1 >= target {
        let mut sigma: Vec<usize> = Vec::with_capacity(x);
        for i in 1..=x {
            let bound = if i == 1 {
                lambda.part(1)
            } else {
                lambda.part(i).min(sigma[i - 2] - 1)
            };
            let shift = if i == 1 { 1 } else { i };
            let v = if (bound + shift) % 2 == target % 2 { bound } else { bound - 1 };
            sigma.push(v);
        }
        let mut a = sigma.clone();
        let mut b = sigma;
        for i in x + 1..=l {
            a.push(lambda.part(i));
            b.push(lambda.part(i) - 2);
        }
        mu = a;
        mu_tilde = b;
    } else {
        let top = lambda.part(1);
        mu = (1..=l).map(|i| top + 1 - i).collect::<Vec<_>>();
        mu_tilde = (1..=l)
            .map(|i| if i <= x { top + 1 - i } else { top - 1 - i })
            .collect::<Vec<_>>();
    }
    Ok((Partition::from_composition(&mu), Partition::from_composition(&mu_tilde)))
}

/// `b + 1 == a_star`.
pub fn is_pointed(lambda: &Partition) -> bool {
    let p = lambda.structure_params();
    matches!((p.b, p.a_star), (Some(b), Some(a)) if b + 1 == a)
}

/// Removes every removable node, or every one except the point when residues differ.
pub fn mu_reduction(lambda: &Partition) -> Result<Partition> {
    if !lambda.is_doubly_singular() || lambda.has_broken_ladder() {
        return Err(Error::Precondition(format!(
            "{lambda} must be doubly-singular without a broken ladder"
        )));
    }
    let removable = lambda.removable_nodes();
    let uniform = removable.windows(2).all(|w| w[0].residue() == w[1].residue());
    let keep_row = if uniform {
        None
    } else {
        let a_star = lambda.structure_params().a_star;
        if !is_pointed(lambda) {
            return Err(Error::Precondition(format!(
                "{lambda} has removable nodes of both residues but is not pointed"
            )));
        }
        let rest_uniform = removable
            .iter()
            .filter(|nd| Some(nd.row) != a_star)
            .collect::<Vec<_>>()
            .windows(2)
            .all(|w| w[0].residue() == w[1].residue());
        if !rest_uniform {
            return Err(Error::Precondition(format!(
                "{lambda} has removable nodes of both residues away from the point"
            )));
        }
        a_star
    };
    let mut parts = lambda.parts().to_vec();
    for nd in &removable {
        if Some(nd.row) != keep_row {
            parts[nd.row - 1] -= 1;
        }
    }
    Ok(Partition::from_composition(&parts))
}

/// Reducibility in characteristic 0 of a partition that is 2-regular or 2-restricted.
fn carter_reducible(nu: &Partition) -> bool {
    if nu.is_two_regular() {
        !nu.is_alternating()
    } else {
        !nu.conjugate().is_alternating()
    }
}

/// Every `i` for which removing the residue-`i` removable nodes exposes a reducible label.
pub fn inductive_witnesses(lambda: &Partition, store: &Store) -> Vec<u8> {
    [0u8, 1]
        .into_iter()
        .filter(|&i| {
            let nu = lambda.remove_residue(i);
            if &nu == lambda {
                return false;
            }
            if nu.is_doubly_singular() {
                let rec = store.get(&nu, 0);
                match rec {
                    Some(r) => r.verdict == Verdict::Reducible,
                    None => !is_fm_partition(&nu) && !is_fm_partition(&nu.conjugate()),
                }
            } else {
                carter_reducible(&nu)
            }
        })
        .collect()
}

/// The first residue witnessing inductive reducibility.
pub fn is_inductively_reducible(lambda: &Partition, store: &Store) -> Option<u8> {
    inductive_witnesses(lambda, store).first().copied()
}

/// Every characteristic-0 witness that fires for `lambda`, in a fixed order.
pub fn reducibility_witnesses(lambda: &Partition, store: &Store) -> Vec<Witness> {
    let conj = lambda.conjugate();
    let mut out = Vec::new();
    if lambda.has_broken_ladder() {
        out.push(Witness::BrokenLadder);
    }
    if is_cp_reducible(lambda) {
        out.push(Witness::Cp);
    }
    if is_cp_reducible(&conj) {
        out.push(Witness::CpConjugate);
    }
    if is_mh_reducible(lambda) {
        out.push(Witness::Mh);
    }
    if is_mh_reducible(&conj) {
        out.push(Witness::MhConjugate);
    }
    if is_llt_reducible(lambda) {
        out.push(Witness::Llt);
    }
    if is_llt_reducible(&conj) {
        out.push(Witness::LltConjugate);
    }
    out.extend(inductive_witnesses(lambda, store).into_iter().map(Witness::Inductive));
    out
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Decides the verdict for `lambda` over a field of characteristic `p` (0 or prime).
pub fn classify(lambda: &Partition, p: u64, store: &Store) -> Result<ClassificationRecord> {
    if p != 0 && !is_prime(p) {
        return Err(Error::Precondition(format!("characteristic {p} is neither 0 nor prime")));
    }
    if let Some(rec) = store.get(lambda, p) {
        return Ok(rec);
    }
    let conj = lambda.conjugate();
    let class = lambda.regularity_class();
    let fm = is_fm_partition(lambda);
    let fm_conjugate = is_fm_partition(&conj);
    let mut witnesses = Vec::new();
    let verdict = if lambda.size() <= 1 {
        Verdict::Irreducible
    } else {
        match class {
            RegularityClass::DoublySingular => {
                let non_fm = !fm && !fm_conjugate;
                if p != 0 && !lambda.is_core(2 * p as usize) {
                    witnesses.push(Witness::NotCore(2 * p));
                }
                if non_fm {
                    ensure_classified_below(lambda, store);
                    witnesses.extend(reducibility_witnesses(lambda, store));
                }
                if non_fm || !witnesses.is_empty() {
                    Verdict::Reducible
                } else {
                    Verdict::IrreduciblePerConjecture
                }
            }
            _ if p != 0 => Verdict::Unknown,
            RegularityClass::TwoRestricted => {
                if conj.is_alternating() {
                    Verdict::Irreducible
                } else {
                    Verdict::Reducible
                }
            }
            _ => {
                if lambda.is_alternating() {
                    Verdict::Irreducible
                } else {
                    Verdict::Reducible
                }
            }
        }
    };
    let record = ClassificationRecord {
        char: p,
        class: class.as_str().to_string(),
        fm,
        fm_conjugate,
        n: lambda.size(),
        partition: lambda.clone(),
        verdict,
        witnesses,
    };
    store.insert(record.clone());
    Ok(record)
}

/// Classifies the residue-removed partitions first so the inductive test reads the store.
fn ensure_classified_below(lambda: &Partition, store: &Store) {
    for i in [0u8, 1] {
        let nu = lambda.remove_residue(i);
        if &nu != lambda && nu.is_doubly_singular() && store.get(&nu, 0).is_none() {
            classify(&nu, 0, store).expect("characteristic 0 is valid");
        }
    }
}
