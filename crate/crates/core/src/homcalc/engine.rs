//! Rewriting arbitrary row-standard tableau homomorphisms into the
//! semistandard basis.
//!
//! Each straightening move is an identity `Θ_T = Σ c_U Θ_U`. Progressive
//! moves only produce tableaux higher in dominance. When a tableau with more
//! than two rows has none, a block move straightens one violating pair of rows
//! as a two-row tableau of its own and splices the result back in, which again
//! only climbs. Two-row tableaux without a progressive move fall back to a
//! move that can cycle, so the engine explores the whole graph of tableaux
//! reachable from the input, splits it into strongly connected components and
//! resolves them sinks first: acyclic nodes by substitution, cyclic components
//! by solving their linear system (modular evaluation with an exact check,
//! else elimination over `ℚ(q)`). When a component's system does not
//! determine every member, all other applicable moves are added as further
//! equations. Results are memoised per tableau.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use dashmap::DashMap;

use super::modsolve::LaurentSystem;
use super::ratfunc::RatFunc;
use super::rules::{candidates, relation, topmost_leftmost, Move};
use super::sum::{accumulate, FormalHomSum};
use super::tableau::RowStandardTableau;
use crate::error::{Error, Result};
use crate::qarith::LaurentPoly;

/// Environment variable overriding the default rewrite budget.
pub const BUDGET_ENV: &str = "SPECHT_REWRITE_BUDGET";

/// Default cap on the number of relations the engine may compute.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Expansion of one tableau in the semistandard basis, sorted by tableau.
pub type Expansion = Arc<Vec<(RowStandardTableau, LaurentPoly)>>;

/// How to pick the move applied to a non-semistandard tableau.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// First progressive move; otherwise a block move at the topmost
    /// violating pair, or for two rows the [`Strategy::TopmostLeftmost`] move.
    Default,
    /// Always the first move at the topmost violating row pair and its
    /// leftmost violating column.
    TopmostLeftmost,
    /// A pseudo-random progressive or block move (any move if there is none),
    /// determined by the seed and the tableau.
    Shuffled(u64),
}

/// Counters describing the work done so far.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub relations: u64,
    pub systems: u64,
    pub memo_entries: usize,
}

pub struct Straightener {
    memo: DashMap<RowStandardTableau, Expansion>,
    strategy: Strategy,
    use_toomany: bool,
    budget: u64,
    spent: AtomicU64,
    systems: AtomicU64,
}

impl Default for Straightener {
    fn default() -> Self {
        Straightener::new()
    }
}

impl Straightener {
    pub fn new() -> Self {
        Straightener {
            memo: DashMap::new(),
            strategy: Strategy::Default,
            use_toomany: true,
            budget: DEFAULT_BUDGET,
            spent: AtomicU64::new(0),
            systems: AtomicU64::new(0),
        }
    }

    /// Reads the budget from [`BUDGET_ENV`] when set.
    pub fn from_env() -> Result<Self> {
        let mut s = Straightener::new();
        if let Ok(v) = std::env::var(BUDGET_ENV) {
            let b = v
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidParams(format!("{BUDGET_ENV}={v} is not a budget")))?;
            s.budget = b;
        }
        Ok(s)
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Whether tableaux detected by [`RowStandardTableau::is_zero_by_toomany`]
    /// are sent straight to zero.
    pub fn with_toomany(mut self, on: bool) -> Self {
        self.use_toomany = on;
        self
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn stats(&self) -> EngineStats {
        EngineStats {
            relations: self.spent.load(Ordering::Relaxed),
            systems: self.systems.load(Ordering::Relaxed),
            memo_entries: self.memo.len(),
        }
    }

    fn charge(&self) -> Result<()> {
        let used = self.spent.fetch_add(1, Ordering::Relaxed) + 1;
        if used > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn choose(&self, t: &RowStandardTableau) -> Move {
        let fallback = || topmost_leftmost(t).expect("tableau is not semistandard");
        match self.strategy {
            Strategy::TopmostLeftmost => fallback(),
            Strategy::Default => {
                let (progressive, _) = candidates(t);
                match progressive.first() {
                    Some(&mv) => mv,
                    None if t.num_rows() > 2 => block_move(fallback().row),
                    None => fallback(),
                }
            }
            Strategy::Shuffled(seed) => {
                let (mut progressive, other) = candidates(t);
                if t.num_rows() > 2 {
                    progressive.extend(violating_pairs(t).map(block_move));
                }
                let pool = if progressive.is_empty() { other } else { progressive };
                let mut h = DefaultHasher::new();
                seed.hash(&mut h);
                t.hash(&mut h);
                pool[(h.finish() % pool.len() as u64) as usize]
            }
        }
    }

    /// The identity given by a move. A block move rewrites rows `r` and `r+1`
    /// through the expansion of the two-row tableau they form: every move
    /// between those rows has coefficients depending on them alone, so any
    /// identity among two-row tableaux lifts unchanged.
    fn relation(&self, t: &RowStandardTableau, mv: Move) -> Result<Vec<(RowStandardTableau, LaurentPoly)>> {
        if mv.variant != BLOCK {
            return Ok(relation(t, mv));
        }
        let r = mv.row;
        let pair = RowStandardTableau::from_rows_unchecked(vec![t.row(r).to_vec(), t.row(r + 1).to_vec()]);
        let exp = self.expand(&pair)?;
        Ok(exp
            .iter()
            .map(|(u, c)| {
                let mut rows = t.rows().to_vec();
                rows[r] = u.row(0).to_vec();
                rows[r + 1] = u.row(1).to_vec();
                (RowStandardTableau::from_rows_unchecked(rows), c.clone())
            })
            .collect())
    }

    /// Known without further work: semistandard, memoised, or zero by the
    /// too-many rule (which is then memoised).
    fn known(&self, t: &RowStandardTableau) -> bool {
        if t.is_semistandard() || self.memo.contains_key(t) {
            return true;
        }
        if self.use_toomany && t.is_zero_by_toomany() {
            self.memo.insert(t.clone(), Arc::new(Vec::new()));
            return true;
        }
        false
    }

    fn lookup(&self, t: &RowStandardTableau) -> Result<Expansion> {
        if t.is_semistandard() {
            return Ok(Arc::new(vec![(t.clone(), LaurentPoly::one())]));
        }
        self.memo
            .get(t)
            .map(|e| Arc::clone(e.value()))
            .ok_or_else(|| Error::Straightening(format!("no expansion recorded for {t}")))
    }

    /// The expansion of `Θ_t` in the semistandard basis.
    pub fn expand(&self, t: &RowStandardTableau) -> Result<Expansion> {
        if self.known(t) {
            return self.lookup(t);
        }
        // Explore every unresolved tableau reachable by the chosen moves.
        let mut order: Vec<RowStandardTableau> = Vec::new();
        let mut index: HashMap<RowStandardTableau, usize> = HashMap::new();
        let mut rels: Vec<Vec<(RowStandardTableau, LaurentPoly)>> = Vec::new();
        let mut stack = vec![t.clone()];
        while let Some(x) = stack.pop() {
            if index.contains_key(&x) {
                continue;
            }
            self.charge()?;
            let rel = self.relation(&x, self.choose(&x))?;
            for (u, _) in &rel {
                if !index.contains_key(u) && !self.known(u) {
                    stack.push(u.clone());
                }
            }
            index.insert(x.clone(), order.len());
            order.push(x);
            rels.push(rel);
        }
        let adjacency: Vec<Vec<usize>> = rels
            .iter()
            .map(|rel| rel.iter().filter_map(|(u, _)| index.get(u).copied()).collect())
            .collect();
        for comp in strongly_connected(&adjacency) {
            let v = comp[0];
            if comp.len() == 1 && !adjacency[v].contains(&v) {
                let mut acc = BTreeMap::new();
                for (u, c) in &rels[v] {
                    for (w, c2) in self.lookup(u)?.iter() {
                        accumulate(&mut acc, w, &(c * c2));
                    }
                }
                self.memo.insert(order[v].clone(), Arc::new(acc.into_iter().collect()));
            } else {
                let base: BTreeMap<RowStandardTableau, Vec<(RowStandardTableau, LaurentPoly)>> =
                    comp.iter().map(|&i| (order[i].clone(), rels[i].clone())).collect();
                self.solve_component(base)?;
            }
        }
        self.lookup(t)
    }

    fn solve_component(
        &self,
        base: BTreeMap<RowStandardTableau, Vec<(RowStandardTableau, LaurentPoly)>>,
    ) -> Result<()> {
        self.systems.fetch_add(1, Ordering::Relaxed);
        let targets: Vec<RowStandardTableau> = base.keys().cloned().collect();
        let mut relations: BTreeMap<RowStandardTableau, Vec<Vec<(RowStandardTableau, LaurentPoly)>>> =
            base.into_iter().map(|(k, r)| (k, vec![r])).collect();
        let mut unknown: BTreeSet<RowStandardTableau> = targets.iter().cloned().collect();
        let mut saturated: BTreeSet<RowStandardTableau> = BTreeSet::new();
        loop {
            let unknowns: Vec<RowStandardTableau> = unknown.iter().cloned().collect();
            let pos: HashMap<&RowStandardTableau, usize> =
                unknowns.iter().enumerate().map(|(i, u)| (u, i)).collect();
            let mut equations = Vec::new();
            for (x, rs) in &relations {
                for r in rs {
                    let mut lhs: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
                    lhs.insert(pos[x], LaurentPoly::one());
                    let mut rhs = BTreeMap::new();
                    for (u, c) in r {
                        if let Some(&k) = pos.get(u) {
                            let entry = lhs.entry(k).or_insert_with(LaurentPoly::zero);
                            *entry = &*entry - c;
                        } else {
                            for (w, c2) in self.lookup(u)?.iter() {
                                accumulate(&mut rhs, w, &(c * c2));
                            }
                        }
                    }
                    lhs.retain(|_, c| !c.is_zero());
                    equations.push((lhs, rhs));
                }
            }
            let solved = match solve_modular(&equations, unknowns.len()) {
                Some(solved) => solved,
                None => exact_solution(&equations, &unknowns)?,
            };
            if targets.iter().all(|x| solved.contains_key(&pos[x])) {
                for (k, exp) in solved {
                    self.memo.entry(unknowns[k].clone()).or_insert_with(|| Arc::new(exp));
                }
                return Ok(());
            }
            let mut grew = false;
            let mut fresh = Vec::new();
            for x in &unknowns {
                if !saturated.insert(x.clone()) {
                    continue;
                }
                let (progressive, other) = candidates(x);
                let blocks: Vec<Move> = if x.num_rows() > 2 {
                    violating_pairs(x).map(block_move).collect()
                } else {
                    Vec::new()
                };
                for mv in progressive.into_iter().chain(blocks).chain(other) {
                    self.charge()?;
                    let r = self.relation(x, mv)?;
                    for (u, _) in &r {
                        if !unknown.contains(u) && !self.known(u) {
                            fresh.push(u.clone());
                        }
                    }
                    relations.entry(x.clone()).or_default().push(r);
                    grew = true;
                }
            }
            unknown.extend(fresh);
            if !grew {
                return Err(Error::Straightening(format!(
                    "relations do not determine the expansion of {}",
                    targets[0]
                )));
            }
        }
    }

    /// Rewrites `phi` into the semistandard basis.
    pub fn semistandardize(&self, phi: &FormalHomSum) -> Result<FormalHomSum> {
        let mut out = FormalHomSum::zero(phi.shape().to_vec(), phi.ty().to_vec());
        for (t, c) in phi.terms() {
            for (u, c2) in self.expand(t)?.iter() {
                out.add_term_unchecked(u, &(c * c2));
            }
        }
        Ok(out)
    }
}

/// Variant tag of a block move.
const BLOCK: u8 = 3;

fn block_move(row: usize) -> Move {
    Move { variant: BLOCK, row, value: 0 }
}

/// Upper rows of adjacent pairs that are not column strict.
fn violating_pairs(t: &RowStandardTableau) -> impl Iterator<Item = usize> + '_ {
    (0..t.num_rows().saturating_sub(1))
        .filter(move |&r| t.row(r + 1).iter().zip(t.row(r)).any(|(lo, hi)| lo <= hi))
}

type LaurentEquation = (BTreeMap<usize, LaurentPoly>, BTreeMap<RowStandardTableau, LaurentPoly>);
type Determined = BTreeMap<usize, Vec<(RowStandardTableau, LaurentPoly)>>;

fn solve_modular(equations: &[LaurentEquation], unknowns: usize) -> Option<Determined> {
    let columns: Vec<RowStandardTableau> = equations
        .iter()
        .flat_map(|(_, rhs)| rhs.keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let col: HashMap<&RowStandardTableau, usize> = columns.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let system = LaurentSystem {
        unknowns,
        columns: columns.len(),
        equations: equations
            .iter()
            .map(|(lhs, rhs)| {
                (
                    lhs.iter().map(|(k, c)| (*k, c.clone())).collect(),
                    rhs.iter().map(|(t, c)| (col[t], c.clone())).collect(),
                )
            })
            .collect(),
    };
    let sol = system.solve()?;
    Some(
        sol.into_iter()
            .map(|(k, vals)| (k, vals.into_iter().map(|(j, c)| (columns[j].clone(), c)).collect()))
            .collect(),
    )
}

fn exact_solution(equations: &[LaurentEquation], unknowns: &[RowStandardTableau]) -> Result<Determined> {
    let rows = equations
        .iter()
        .map(|(lhs, rhs)| {
            (
                lhs.iter().map(|(k, c)| (*k, RatFunc::from_laurent(c))).collect(),
                rhs.iter().map(|(t, c)| (t.clone(), RatFunc::from_laurent(c))).collect(),
            )
        })
        .collect();
    let mut out = Determined::new();
    for (k, value) in gauss_jordan(rows)? {
        let mut exp = Vec::with_capacity(value.len());
        for (w, c) in value {
            let c = c.to_laurent().ok_or_else(|| {
                Error::Straightening(format!("non-Laurent coefficient in the expansion of {}", unknowns[k]))
            })?;
            exp.push((w, c));
        }
        out.insert(k, exp);
    }
    Ok(out)
}

type Row = (BTreeMap<usize, RatFunc>, BTreeMap<RowStandardTableau, RatFunc>);

/// Reduced row echelon form of `lhs · unknowns = rhs`; returns the unknowns
/// that are fully determined.
fn gauss_jordan(equations: Vec<Row>) -> Result<BTreeMap<usize, BTreeMap<RowStandardTableau, RatFunc>>> {
    let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
    for (mut lhs, mut rhs) in equations {
        while let Some(col) = lhs.keys().copied().find(|c| pivots.contains_key(c)) {
            let factor = lhs.remove(&col).expect("present");
            let (plhs, prhs) = &pivots[&col];
            for (k, v) in plhs {
                if *k == col {
                    continue;
                }
                axpy(&mut lhs, k, &factor.mul(v).neg());
            }
            for (k, v) in prhs {
                axpy(&mut rhs, k, &factor.mul(v).neg());
            }
        }
        let Some((&col, lead)) = lhs.iter().next() else {
            if rhs.is_empty() {
                continue;
            }
            return Err(Error::Straightening("inconsistent straightening relations".into()));
        };
        let inv = lead.inv();
        let lhs: BTreeMap<usize, RatFunc> = lhs.iter().map(|(k, v)| (*k, v.mul(&inv))).collect();
        let rhs: BTreeMap<RowStandardTableau, RatFunc> = rhs.iter().map(|(k, v)| (k.clone(), v.mul(&inv))).collect();
        for (plhs, prhs) in pivots.values_mut() {
            if let Some(factor) = plhs.remove(&col) {
                for (k, v) in &lhs {
                    if *k != col {
                        axpy(plhs, k, &factor.mul(v).neg());
                    }
                }
                for (k, v) in &rhs {
                    axpy(prhs, k, &factor.mul(v).neg());
                }
            }
        }
        pivots.insert(col, (lhs, rhs));
    }
    Ok(pivots
        .into_iter()
        .filter(|(_, (lhs, _))| lhs.len() == 1)
        .map(|(c, (_, rhs))| (c, rhs))
        .collect())
}

fn axpy<K: Ord + Clone>(map: &mut BTreeMap<K, RatFunc>, key: &K, delta: &RatFunc) {
    if delta.is_zero() {
        return;
    }
    let updated = match map.get(key) {
        Some(v) => v.add(delta),
        None => delta.clone(),
    };
    if updated.is_zero() {
        map.remove(key);
    } else {
        map.insert(key.clone(), updated);
    }
}

/// Tarjan's algorithm without recursion; components come out sinks first.
fn strongly_connected(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut calls: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = calls.last_mut() {
            let v = top.0;
            if top.1 < adj[v].len() {
                let w = adj[v][top.1];
                top.1 += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comps.push(comp);
            }
        }
    }
    comps
}
