//! Partitions and Young-diagram combinatorics in characteristic two:
//! conjugation, dominance, residues, ladders, regularization, hooks and cores.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
    #[serde(skip)]
    size: usize,
}

/// A node `(row, col)` of a Young diagram, both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Node {
    pub row: usize,
    pub col: usize,
}

impl Node {
    pub fn new(row: usize, col: usize) -> Self {
        Node { row, col }
    }

    /// `(col - row) mod 2`, always 0 or 1.
    pub fn residue(&self) -> u8 {
        let d = self.col as i64 - self.row as i64;
        (((d % 2) + 2) % 2) as u8
    }

    /// Index `k` of the ladder containing the node, `k = row + col - 1`.
    pub fn ladder(&self) -> usize {
        self.row + self.col - 1
    }
}

/// Which of the regularity conditions a partition satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegularityClass {
    #[serde(rename = "2-regular")]
    TwoRegular,
    #[serde(rename = "2-restricted")]
    TwoRestricted,
    DoublySingular,
    BothRegularAndRestricted,
}

impl RegularityClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegularityClass::TwoRegular => "2-regular",
            RegularityClass::TwoRestricted => "2-restricted",
            RegularityClass::DoublySingular => "doubly-singular",
            RegularityClass::BothRegularAndRestricted => "both-regular-and-restricted",
        }
    }
}

/// Gap and repeated-part statistics; rows beyond the length read as 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StructureParams {
    /// Smallest row `a` with `parts[a] - parts[a+1] >= 2`.
    pub a_star: Option<usize>,
    /// Largest such row.
    pub a_low: Option<usize>,
    /// Largest row `b` with `parts[b] == parts[b+1] > 0`.
    pub b: Option<usize>,
    /// `len - a_low`.
    pub c: Option<usize>,
}

impl Partition {
    /// Validates and wraps a part list. Parts must be positive and weakly decreasing.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        let size = parts.iter().sum();
        Ok(Partition { parts, size })
    }

    /// Sorts a composition into a partition, dropping zeros.
    pub fn from_composition(comp: &[usize]) -> Self {
        let mut parts: Vec<usize> = comp.iter().copied().filter(|&p| p > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let size = parts.iter().sum();
        Partition { parts, size }
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of positive parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of the parts.
    pub fn size(&self) -> usize {
        self.size
    }

    /// The `i`th part (1-based), 0 beyond the length.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn contains_node(&self, node: Node) -> bool {
        node.row >= 1 && node.col >= 1 && node.col <= self.part(node.row)
    }

    /// True if `self` is contained in `other` as diagrams.
    pub fn is_subset_of(&self, other: &Partition) -> bool {
        self.len() <= other.len() && (1..=self.len()).all(|i| self.part(i) <= other.part(i))
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (1..=len).map(move |c| Node::new(r + 1, c)))
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(1);
        let parts: Vec<usize> = (1..=first)
            .map(|c| self.parts.iter().take_while(|&&p| p >= c).count())
            .collect();
        Partition { parts, size: self.size }
    }

    /// Dominance `self ⊵ other`; the sizes must agree.
    pub fn dominates(&self, other: &Partition) -> Result<bool> {
        if self.size != other.size {
            return Err(Error::SizeMismatch(self.size, other.size));
        }
        Ok(dominates_unchecked(&self.parts, &other.parts))
    }

    pub fn addable_nodes(&self) -> Vec<Node> {
        (1..=self.len() + 1)
            .filter(|&r| r == 1 || self.part(r - 1) > self.part(r))
            .map(|r| Node::new(r, self.part(r) + 1))
            .collect()
    }

    pub fn removable_nodes(&self) -> Vec<Node> {
        (1..=self.len())
            .filter(|&r| self.part(r) > self.part(r + 1))
            .map(|r| Node::new(r, self.part(r)))
            .collect()
    }

    /// Some row `a` has a gap of at least 2 above a later repeated positive part.
    pub fn has_broken_ladder(&self) -> bool {
        let l = self.len();
        let mut seen_gap = false;
        for i in 1..=l {
            if seen_gap && self.part(i) == self.part(i + 1) {
                return true;
            }
            if self.part(i) >= self.part(i + 1) + 2 {
                seen_gap = true;
            }
        }
        false
    }

    /// Same predicate by scanning every ladder for a non-consecutive run of nodes.
    pub fn has_broken_ladder_by_scan(&self) -> bool {
        let max_ladder = self.len() + self.part(1);
        (1..max_ladder).any(|k| {
            let inside: Vec<bool> = (1..=k)
                .map(|r| self.contains_node(Node::new(r, k + 1 - r)))
                .collect();
            let first = inside.iter().position(|&b| b);
            let last = inside.iter().rposition(|&b| b);
            match (first, last) {
                (Some(f), Some(l)) => inside[f..=l].iter().any(|&b| !b),
                _ => false,
            }
        })
    }

    /// Moves every node as high as possible within its ladder.
    pub fn regularize(&self) -> Partition {
        let max_ladder = self.len() + self.part(1);
        let mut counts = vec![0usize; max_ladder + 1];
        for node in self.nodes() {
            counts[node.ladder()] += 1;
        }
        let rows = counts.iter().copied().max().unwrap_or(0);
        let parts: Vec<usize> = (1..=rows)
            .map(|r| counts.iter().filter(|&&c| c >= r).count())
            .collect();
        Partition { parts, size: self.size }
    }

    /// Strictly decreasing parts.
    pub fn is_two_regular(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1])
    }

    /// Every `parts[i] - parts[i+1] <= 1`, with the last part compared against 0.
    pub fn is_two_restricted(&self) -> bool {
        (1..=self.len()).all(|i| self.part(i) - self.part(i + 1) <= 1)
    }

    pub fn regularity_class(&self) -> RegularityClass {
        match (self.is_two_regular(), self.is_two_restricted()) {
            (true, true) => RegularityClass::BothRegularAndRestricted,
            (true, false) => RegularityClass::TwoRegular,
            (false, true) => RegularityClass::TwoRestricted,
            (false, false) => RegularityClass::DoublySingular,
        }
    }

    pub fn is_doubly_singular(&self) -> bool {
        self.regularity_class() == RegularityClass::DoublySingular
    }

    /// Every `parts[i] - parts[i+1]` with `i < len` is odd.
    pub fn is_alternating(&self) -> bool {
        self.parts.windows(2).all(|w| (w[0] - w[1]) % 2 == 1)
    }

    pub fn hook_length(&self, node: Node) -> Result<usize> {
        if !self.contains_node(node) {
            return Err(Error::NodeOutside(node.row, node.col));
        }
        let conj = self.conjugate();
        Ok((self.part(node.row) - node.col) + (conj.part(node.col) - node.row) + 1)
    }

    /// No hook length is divisible by `s`.
    pub fn is_core(&self, s: usize) -> bool {
        assert!(s >= 1, "core parameter must be positive");
        let conj = self.conjugate();
        self.nodes().all(|nd| {
            let h = (self.part(nd.row) - nd.col) + (conj.part(nd.col) - nd.row) + 1;
            h % s != 0
        })
    }

    /// Removes every removable node of residue `i` at once.
    pub fn remove_residue(&self, i: u8) -> Partition {
        let mut parts = self.parts.clone();
        for node in self.removable_nodes() {
            if node.residue() == i {
                parts[node.row - 1] -= 1;
            }
        }
        Partition::from_composition(&parts)
    }

    pub fn structure_params(&self) -> StructureParams {
        let l = self.len();
        let gaps: Vec<usize> = (1..=l).filter(|&i| self.part(i) >= self.part(i + 1) + 2).collect();
        let b = (1..l).filter(|&i| self.part(i) == self.part(i + 1)).max();
        let a_low = gaps.last().copied();
        StructureParams {
            a_star: gaps.first().copied(),
            a_low,
            b,
            c: a_low.map(|a| l - a),
        }
    }

    /// Adds one to part `row` (1-based), extending the length if needed.
    pub fn with_node_added(&self, node: Node) -> Result<Partition> {
        let mut parts = self.parts.clone();
        if node.row == parts.len() + 1 {
            parts.push(0);
        }
        if node.row > parts.len() || parts[node.row - 1] + 1 != node.col {
            return Err(Error::InvalidPartition(format!("({},{}) is not addable", node.row, node.col)));
        }
        parts[node.row - 1] += 1;
        Partition::new(parts)
    }
}

/// Prefix-sum dominance on arbitrary finite sequences, padded with zeros.
pub fn dominates_unchecked(mu: &[usize], la: &[usize]) -> bool {
    let n = mu.len().max(la.len());
    let (mut sm, mut sl) = (0usize, 0usize);
    for i in 0..n {
        sm += mu.get(i).copied().unwrap_or(0);
        sl += la.get(i).copied().unwrap_or(0);
        if sm < sl {
            return false;
        }
    }
    true
}

/// Parses `part ("," part)*` with `part := int ("^" int)?`; the empty string is the empty partition.
pub fn parse_partition(text: &str) -> Result<Partition> {
    let text = text.trim();
    if text.is_empty() || text == "0" || text == "∅" {
        return Ok(Partition::empty());
    }
    let mut parts = Vec::new();
    for token in text.split(',') {
        let token = token.trim();
        let (base, exp) = match token.split_once('^') {
            Some((b, e)) => (b.trim(), e.trim()),
            None => (token, "1"),
        };
        let base: usize = base
            .parse()
            .map_err(|_| Error::Parse(format!("bad part {token:?}")))?;
        let exp: usize = exp
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent in {token:?}")))?;
        if base == 0 || exp == 0 {
            return Err(Error::Parse(format!("parts and exponents must be positive: {token:?}")));
        }
        parts.extend(std::iter::repeat(base).take(exp));
    }
    Partition::new(parts)
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_partition(s)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    /// Exponent grouping, e.g. `3,2^3`; the empty partition renders as `""`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.parts.len() {
            let p = self.parts[i];
            let run = self.parts[i..].iter().take_while(|&&x| x == p).count();
            if !first {
                write!(f, ",")?;
            }
            first = false;
            if run == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// All partitions of `n` in reverse lexicographic order, starting with `(n)`.
pub fn enumerate_partitions(n: usize) -> PartitionIter {
    PartitionIter { next: Some(if n == 0 { Vec::new() } else { vec![n] }) }
}

pub struct PartitionIter {
    next: Option<Vec<usize>>,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.next.take()?;
        // Successor: drop trailing ones, decrement the last part > 1, refill greedily.
        let mut succ = cur.clone();
        let mut ones = 0;
        while succ.last() == Some(&1) {
            succ.pop();
            ones += 1;
        }
        if let Some(last) = succ.pop() {
            let k = last - 1;
            let mut rem = ones + 1 + k;
            while rem > 0 {
                let take = k.min(rem);
                succ.push(take);
                rem -= take;
            }
            self.next = Some(succ);
        }
        let size = cur.iter().sum();
        Some(Partition { parts: cur, size })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(parse_partition("3,2^3").unwrap(), p(&[3, 2, 2, 2]));
        assert_eq!(parse_partition("").unwrap(), Partition::empty());
        assert!(parse_partition("2,3").is_err());
        assert!(parse_partition("2,0").is_err());
        assert!(parse_partition("a").is_err());
        assert_eq!(p(&[3, 2, 2, 2]).to_string(), "3,2^3");
    }

    #[test]
    fn conjugates() {
        assert_eq!(p(&[3, 2, 2, 2]).conjugate(), p(&[4, 4, 1]));
        assert_eq!(p(&[1]).conjugate(), p(&[1]));
        assert_eq!(p(&[5, 3, 1]).conjugate(), p(&[3, 2, 2, 1, 1]));
    }

    #[test]
    fn dominance() {
        assert!(p(&[5, 3, 1]).dominates(&p(&[3, 2, 2, 2])).unwrap());
        assert!(!p(&[2, 2]).dominates(&p(&[3, 1])).unwrap());
        assert!(p(&[2, 2]).dominates(&p(&[2, 2])).unwrap());
        assert!(p(&[2]).dominates(&p(&[1])).is_err());
    }

    #[test]
    fn addable_removable() {
        let two_two = p(&[2, 2]);
        assert_eq!(two_two.addable_nodes(), vec![Node::new(1, 3), Node::new(3, 1)]);
        assert_eq!(two_two.removable_nodes(), vec![Node::new(2, 2)]);
        assert_eq!(Partition::empty().addable_nodes(), vec![Node::new(1, 1)]);
        assert!(Partition::empty().removable_nodes().is_empty());
        let q = p(&[3, 2, 2]);
        assert_eq!(q.addable_nodes(), vec![Node::new(1, 4), Node::new(2, 3), Node::new(4, 1)]);
        assert_eq!(q.removable_nodes(), vec![Node::new(1, 3), Node::new(3, 2)]);
    }

    #[test]
    fn residues_and_ladders() {
        assert_eq!((Node::new(1, 1).residue(), Node::new(1, 1).ladder()), (0, 1));
        assert_eq!((Node::new(2, 1).residue(), Node::new(2, 1).ladder()), (1, 2));
        assert_eq!((Node::new(3, 3).residue(), Node::new(3, 3).ladder()), (0, 5));
    }

    #[test]
    fn broken_ladders() {
        assert!(p(&[3, 1, 1]).has_broken_ladder());
        assert!(!p(&[3, 2, 2]).has_broken_ladder());
        assert!(!p(&[5, 3, 1]).has_broken_ladder());
        for q in [p(&[3, 1, 1]), p(&[3, 2, 2]), p(&[5, 3, 1])] {
            assert_eq!(q.has_broken_ladder(), q.has_broken_ladder_by_scan());
        }
    }

    #[test]
    fn regularization() {
        assert_eq!(p(&[3, 2, 2, 2]).regularize(), p(&[5, 3, 1]));
        assert_eq!(p(&[5, 3, 1]).regularize(), p(&[5, 3, 1]));
        assert_eq!(p(&[2, 2]).regularize(), p(&[3, 1]));
        assert_eq!(Partition::empty().regularize(), Partition::empty());
    }

    #[test]
    fn classes() {
        assert_eq!(p(&[5, 3, 1]).regularity_class(), RegularityClass::TwoRegular);
        assert_eq!(p(&[2, 2]).regularity_class(), RegularityClass::DoublySingular);
        assert_eq!(p(&[1, 1, 1]).regularity_class(), RegularityClass::TwoRestricted);
        assert_eq!(p(&[2]).regularity_class(), RegularityClass::TwoRegular);
        assert_eq!(Partition::empty().regularity_class(), RegularityClass::BothRegularAndRestricted);
    }

    #[test]
    fn alternating() {
        assert!(p(&[4, 1]).is_alternating());
        assert!(!p(&[3, 1]).is_alternating());
        assert!(p(&[7]).is_alternating());
    }

    #[test]
    fn hooks_and_cores() {
        assert_eq!(p(&[2, 1]).hook_length(Node::new(1, 1)).unwrap(), 3);
        assert!(p(&[2, 1]).hook_length(Node::new(2, 2)).is_err());
        assert!(p(&[1]).is_core(2));
        assert!(p(&[2, 2]).is_core(4));
        assert!(!p(&[2, 2]).is_core(2));
        assert_eq!(p(&[1, 1, 1]).hook_length(Node::new(1, 1)).unwrap(), 3);
        assert!(!p(&[1, 1, 1]).is_core(2) && p(&[1, 1, 1]).is_core(4));
    }

    #[test]
    fn residue_removal() {
        assert_eq!(p(&[2, 1]).remove_residue(1), p(&[1]));
        assert_eq!(p(&[2, 1]).remove_residue(0), p(&[2, 1]));
        assert_eq!(Partition::empty().remove_residue(0), Partition::empty());
    }

    #[test]
    fn structure() {
        let s = p(&[4, 4, 3, 2]).structure_params();
        assert_eq!((s.a_star, s.a_low, s.b, s.c), (Some(4), Some(4), Some(1), Some(0)));
        let s = p(&[5, 5, 5, 2]).structure_params();
        assert_eq!((s.a_star, s.a_low, s.b, s.c), (Some(3), Some(4), Some(2), Some(0)));
        let s = p(&[3, 1]).structure_params();
        assert_eq!((s.a_star, s.a_low, s.b), (Some(1), Some(1), None));
    }

    #[test]
    fn enumeration() {
        assert_eq!(enumerate_partitions(0).collect::<Vec<_>>(), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(4).count(), 5);
        assert_eq!(enumerate_partitions(10).count(), 42);
        let four: Vec<String> = enumerate_partitions(4).map(|q| q.to_string()).collect();
        assert_eq!(four, ["4", "3,1", "2^2", "2,1^2", "1^4"]);
    }
}
