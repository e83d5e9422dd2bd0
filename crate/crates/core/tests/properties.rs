//! Structural invariants, checked exhaustively on small inputs or with
//! randomly generated ones.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::thread;

use num_bigint::BigInt;
use proptest::prelude::*;
use specht::criteria::{
    inductive_witnesses, is_cp_reducible, is_fm_partition, is_llt_reducible, is_mh_reducible, mh_parameters,
    mh_target_mu, Store,
};
use specht::homcalc::{
    compose_psi, enumerate_tableaux, kernel_intersection_check, killed_by_dominance, lambda_dt, psi_pairs,
    psi_straightened, FormalHomSum, RowStandardTableau, Straightener,
};
use specht::mh::{build_theta, enumerate_a, mu_lambda_of, MhParams, TailTableau};
use specht::partition::{enumerate_partitions, parse_partition, Node};
use specht::qarith::{gauss_binom, LaurentPoly};
use specht::Partition;

fn partitions_up_to(n: usize) -> impl Iterator<Item = Partition> {
    (0..=n).flat_map(enumerate_partitions)
}

fn ladders(lambda: &Partition) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for node in lambda.nodes() {
        *m.entry(node.ladder()).or_default() += 1;
    }
    m
}

fn partition_strategy(max_parts: usize, max_part: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1..=max_part, 0..=max_parts).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

fn laurent_strategy() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-6i64..=6, -20i64..=20), 0..6)
        .prop_map(|terms| LaurentPoly::from_terms(terms.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
}

proptest! {
    #[test]
    fn conjugation_is_an_involution(l in partition_strategy(10, 8)) {
        prop_assume!(l.size() <= 40);
        prop_assert_eq!(l.conjugate().conjugate(), l);
    }

    #[test]
    fn laurent_ring_laws(a in laurent_strategy(), b in laurent_strategy(), c in laurent_strategy()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        for x in [&a + &b, &a * &b, &a - &c] {
            prop_assert!(x.terms().all(|(_, c)| *c != BigInt::from(0)));
        }
        prop_assert_eq!((&a * &b).eval_minus_one(), a.eval_minus_one() * b.eval_minus_one());
        prop_assert_eq!((&a + &b).eval_minus_one(), a.eval_minus_one() + b.eval_minus_one());
    }

    #[test]
    fn straightening_is_linear(seed in any::<u64>(), a in -3i64..=3, b in -3i64..=3) {
        use rand::{rngs::StdRng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(seed);
        let shape = common::random_partition(&mut rng, 8, 3);
        let x = common::compress(common::random_rows(&mut rng, shape.parts(), 3));
        let content = x.content();
        // A second tableau with the same shape and content: reverse the row order of values.
        let mut all: Vec<u16> = x.rows().iter().flatten().copied().collect();
        all.reverse();
        let mut rows = Vec::new();
        let mut it = all.into_iter();
        for &len in shape.parts() {
            rows.push(it.by_ref().take(len).collect::<Vec<_>>());
        }
        let y = RowStandardTableau::from_rows_sorted(rows);
        prop_assert_eq!(y.content(), content.clone());
        let st = Straightener::new();
        let ca = LaurentPoly::constant(a);
        let cb = LaurentPoly::monomial(BigInt::from(b), 1);
        let mut combo = FormalHomSum::from_tableau(&x).scaled(&ca);
        combo.add_scaled(&FormalHomSum::from_tableau(&y), &cb).unwrap();
        let mut separate = st.semistandardize(&FormalHomSum::from_tableau(&x)).unwrap().scaled(&ca);
        separate.add_scaled(&st.semistandardize(&FormalHomSum::from_tableau(&y)).unwrap(), &cb).unwrap();
        prop_assert_eq!(st.semistandardize(&combo).unwrap(), separate);
        // Composition with ψ is linear as well.
        let pairs: Vec<(usize, usize)> = (1..content.len()).flat_map(|d| (1..=content[d]).map(move |t| (d, t))).collect();
        for (d, t) in pairs {
            let whole = compose_psi(d, t, &combo, false).unwrap();
            let mut parts = compose_psi(d, t, &FormalHomSum::from_tableau(&x), false).unwrap().scaled(&ca);
            parts.add_scaled(&compose_psi(d, t, &FormalHomSum::from_tableau(&y), false).unwrap(), &cb).unwrap();
            prop_assert_eq!(whole, parts);
        }
    }
}

#[test]
fn render_then_parse_round_trips() {
    for l in partitions_up_to(25) {
        assert_eq!(parse_partition(&l.to_string()).unwrap(), l);
    }
}

#[test]
fn dominance_reverses_under_conjugation() {
    for n in 0..=15 {
        let ps: Vec<Partition> = enumerate_partitions(n).collect();
        let conj: Vec<Partition> = ps.iter().map(Partition::conjugate).collect();
        for (i, mu) in ps.iter().enumerate() {
            for (j, la) in ps.iter().enumerate() {
                assert_eq!(mu.dominates(la).unwrap(), conj[j].dominates(&conj[i]).unwrap(), "{mu} vs {la}");
            }
        }
    }
}

#[test]
fn ladder_criteria_agree_and_regularization_keeps_ladders() {
    for l in partitions_up_to(20) {
        assert_eq!(l.has_broken_ladder(), l.has_broken_ladder_by_scan(), "{l}");
        assert_eq!(ladders(&l.regularize()), ladders(&l), "{l}");
    }
}

#[test]
fn residue_removal_deletes_only_removable_nodes_of_that_residue() {
    for l in partitions_up_to(20) {
        let removable: BTreeSet<Node> = l.removable_nodes().into_iter().collect();
        for i in [0u8, 1] {
            let smaller = l.remove_residue(i);
            assert!(smaller.is_subset_of(&l), "{l}");
            for node in l.nodes().filter(|n| !smaller.contains_node(*n)) {
                assert!(removable.contains(&node) && node.residue() == i, "{l} lost {node:?}");
            }
            let kept = removable.iter().filter(|n| n.residue() == i).count();
            assert_eq!(l.size() - smaller.size(), kept, "{l}");
        }
    }
}

#[test]
fn removable_residues_agree_away_from_the_point() {
    let mut tested = 0;
    for l in partitions_up_to(18) {
        if !l.is_doubly_singular() || l.has_broken_ladder() || is_cp_reducible(&l) || is_cp_reducible(&l.conjugate()) {
            continue;
        }
        tested += 1;
        let sp = l.structure_params();
        let point = match (sp.a_star, sp.b) {
            (Some(a), Some(b)) if b + 1 == a => Some(a),
            _ => None,
        };
        let residues: BTreeSet<u8> = l
            .removable_nodes()
            .into_iter()
            .filter(|n| Some(n.row) != point)
            .map(|n| n.residue())
            .collect();
        assert!(residues.len() <= 1, "{l}: residues {residues:?}");
    }
    assert!(tested > 0);
}

#[test]
fn conjectured_irreducibles_meet_no_reducibility_criterion() {
    let store = Store::new();
    let mut fm = 0;
    for l in partitions_up_to(30) {
        if !l.is_doubly_singular() || !(is_fm_partition(&l) || is_fm_partition(&l.conjugate())) {
            continue;
        }
        fm += 1;
        let c = l.conjugate();
        assert!(!l.has_broken_ladder(), "{l}");
        for x in [&l, &c] {
            assert!(!is_cp_reducible(x) && !is_mh_reducible(x) && !is_llt_reducible(x), "{l}");
        }
        assert!(inductive_witnesses(&l, &store).is_empty(), "{l}");
    }
    assert!(fm > 0);
}

#[test]
fn gaussian_binomials_are_stable_across_threads() {
    let reference: Vec<LaurentPoly> = (0..=24).map(|j| gauss_binom(24, j)).collect();
    let handles: Vec<_> = (0..4)
        .map(|_| thread::spawn(|| (0..=24).rev().map(|j| gauss_binom(24, j)).collect::<Vec<_>>()))
        .collect();
    for h in handles {
        let mut got = h.join().unwrap();
        got.reverse();
        assert_eq!(got, reference);
    }
}

#[test]
fn dominance_shortcut_agrees_with_straightening() {
    let st = Straightener::new();
    let mut killed = 0;
    for n in 1..=9 {
        let ps: Vec<Partition> = enumerate_partitions(n).collect();
        for mu in &ps {
            for la in &ps {
                for t in enumerate_tableaux(mu, la.parts(), true).unwrap() {
                    let phi = FormalHomSum::from_tableau(&t);
                    for (d, k) in psi_pairs(la) {
                        let target = lambda_dt(la.parts(), d, k).unwrap();
                        if !killed_by_dominance(mu.parts(), &target) {
                            continue;
                        }
                        killed += 1;
                        assert!(compose_psi(d, k, &phi, true).unwrap().is_zero());
                        assert!(psi_straightened(&st, &phi, d, k).unwrap().is_zero(), "{t} ({d},{k})");
                    }
                }
            }
        }
    }
    assert!(killed > 0);
}

#[test]
fn identity_tableaux_pass_the_kernel_check() {
    let st = Straightener::new();
    for l in partitions_up_to(10) {
        let id = FormalHomSum::from_tableau(&RowStandardTableau::identity(&l));
        let report = kernel_intersection_check(&st, &id, &l, false).unwrap();
        assert!(report.passed(), "{l}: {:?}", report.failed_pairs);
    }
}

const GRID: [(usize, usize, usize, usize); 10] = [
    (3, 3, 0, 2),
    (3, 3, 0, 3),
    (3, 3, 1, 2),
    (3, 5, 0, 2),
    (3, 5, 0, 3),
    (5, 5, 0, 2),
    (2, 2, 0, 2),
    (2, 4, 0, 2),
    (2, 4, 0, 3),
    (2, 6, 0, 2),
];

#[test]
fn grid_shapes_match_the_partition_recipe() {
    for (s, sp, f, g) in GRID {
        let p = MhParams::new(s, sp, f, g).unwrap();
        let (mu, lambda) = mu_lambda_of(&p).unwrap();
        let m = mh_parameters(&lambda).unwrap_or_else(|| panic!("{lambda} not matched"));
        assert_eq!((m.x, m.s, m.s_prime, m.f, m.g), (0, s, sp, f, g), "{lambda}");
        assert_eq!(mh_target_mu(&lambda, 0).unwrap(), mu, "{lambda}");
    }
}

#[test]
fn grid_homomorphisms_lie_in_the_computed_span() {
    let st = Straightener::new();
    for (s, sp, f, g) in GRID {
        let p = MhParams::new(s, sp, f, g).unwrap();
        let (mu, lambda) = mu_lambda_of(&p).unwrap();
        let basis = specht::homcalc::ehom_specht_basis(&st, &mu, &lambda).unwrap();
        let theta = build_theta(&p).unwrap();
        assert!(basis.contains(&theta.sum).unwrap(), "({s},{sp},{f},{g})");
    }
}

/// The defining conditions of the sign-carrying family, written out directly.
fn in_family_by_definition(rows: &[[u16; 2]], g: usize) -> Option<i64> {
    let n = g - 1;
    let split = |i: usize| {
        let above = rows[..i].iter().flatten().max();
        let below = rows[i..].iter().flatten().min();
        matches!((above, below), (Some(a), Some(b)) if a < b) || below.is_none()
    };
    for (k, r) in rows.iter().enumerate() {
        let row = k + 1;
        if r[0] > r[1] || (r[0] as usize) + 1 < row {
            return None;
        }
    }
    for k in 2..=g.saturating_sub(2) {
        if rows[k - 1][0] >= rows[k][1] {
            return None;
        }
    }
    let splits: Vec<bool> = (1..=n).map(split).collect();
    let first = splits.iter().position(|&x| x)? + 1;
    if splits[first - 1..].iter().any(|&x| !x) {
        return None;
    }
    // Second scan for the sign: count rows before the first split from the bottom up.
    let mut a = n;
    while a > 1 && splits[a - 2] {
        a -= 1;
    }
    assert_eq!(a, first);
    Some(if a % 2 == 0 { 1 } else { -1 })
}

#[test]
fn family_enumeration_matches_brute_force() {
    for g in 2..=6 {
        let n = g - 1;
        let mut expected: BTreeSet<(TailTableau, i64)> = BTreeSet::new();
        let mut cells = vec![0u16; 2 * n];
        // Every arrangement of the multiset {1,1,2,2,...} into 2(g-1) cells.
        fn fill(cells: &mut Vec<u16>, pos: usize, counts: &mut Vec<usize>, g: usize, out: &mut BTreeSet<(TailTableau, i64)>) {
            if pos == cells.len() {
                let rows: Vec<[u16; 2]> = cells.chunks(2).map(|c| [c[0], c[1]]).collect();
                if let Some(sign) = in_family_by_definition(&rows, g) {
                    out.insert((TailTableau { rows }, sign));
                }
                return;
            }
            for v in 0..counts.len() {
                if counts[v] > 0 {
                    counts[v] -= 1;
                    cells[pos] = v as u16 + 1;
                    fill(cells, pos + 1, counts, g, out);
                    counts[v] += 1;
                }
            }
        }
        fill(&mut cells, 0, &mut vec![2; n], g, &mut expected);
        let got: BTreeSet<(TailTableau, i64)> = enumerate_a(g).unwrap().into_iter().collect();
        assert_eq!(got, expected, "g = {g}");
        assert!(!got.is_empty());
    }
}
