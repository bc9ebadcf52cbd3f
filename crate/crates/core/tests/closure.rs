use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symlie::lie_closure::{
    close_blocks, g_lambda_basis, g_prime_dim, lie_closure, lie_closure_with, predicted_block, theorem_a_verify,
    unflatten_square, ClosureOptions, ClosureReport, Layout,
};
use symlie::modp::DEFAULT_PRIME;
use symlie::partitions::{enumerate_partitions, predicted_theorem_a_dim};
use symlie::seminormal::{solve_intertwiner, RepHandle};
use symlie::{FieldMode, MatrixQ, Partition, Q};

fn p(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

fn fp() -> FieldMode {
    FieldMode::PrimeField(DEFAULT_PRIME)
}

fn nontrivial(n: usize) -> Vec<Partition> {
    enumerate_partitions(n).into_iter().filter(|l| l.dim_usize() > 1).collect()
}

/// Bracket every pair of basis elements until the span stops growing.
fn naive_closure_rank(gens: &[MatrixQ]) -> usize {
    let d = gens[0].rows();
    let mut basis: Vec<MatrixQ> = Vec::new();
    let rank_of = |ms: &[MatrixQ]| {
        let rows: Vec<Vec<Q>> = ms.iter().map(|m| m.flat().to_vec()).collect();
        if rows.is_empty() {
            0
        } else {
            MatrixQ::from_rows(rows).unwrap().rank()
        }
    };
    for g in gens {
        basis.push(g.clone());
        if rank_of(&basis) < basis.len() {
            basis.pop();
        }
    }
    loop {
        let before = basis.len();
        let snapshot = basis.clone();
        for a in &snapshot {
            for b in &snapshot {
                basis.push(a.commutator(b));
                if rank_of(&basis) < basis.len() {
                    basis.pop();
                }
            }
        }
        if basis.len() == before || basis.len() == d * d {
            return basis.len();
        }
    }
}

#[test]
fn rational_and_modular_ranks_agree() {
    for n in 2..=6 {
        for l in nontrivial(n) {
            let q = g_lambda_basis(&l, FieldMode::ExactRational).unwrap().rank();
            let m = g_lambda_basis(&l, fp()).unwrap().rank();
            assert_eq!(q, m, "{l}");
            assert_eq!(q, predicted_block(&l).unwrap().0, "{l}");
        }
    }
}

#[test]
fn conjugate_shapes_have_equal_closures() {
    for n in 3..=7 {
        let mode = if n <= 6 { FieldMode::ExactRational } else { fp() };
        for l in nontrivial(n) {
            let c = l.conjugate();
            if c <= l {
                continue;
            }
            let a = g_lambda_basis(&l, mode).unwrap().rank();
            let b = g_lambda_basis(&c, mode).unwrap().rank();
            assert_eq!(a, b, "{l}");
        }
    }
}

#[test]
fn engine_matches_naive_closure() {
    for n in 3..=4 {
        for l in nontrivial(n) {
            let gens = RepHandle::new(&l).transposition_images();
            let fast = lie_closure(&gens, FieldMode::ExactRational).unwrap().rank();
            assert_eq!(fast, naive_closure_rank(&gens), "{l}");
        }
    }
}

#[test]
fn generator_order_does_not_matter() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 3..=5 {
        for l in nontrivial(n) {
            let mut gens = RepHandle::new(&l).transposition_images();
            let want = lie_closure(&gens, FieldMode::ExactRational).unwrap().rank();
            for _ in 0..3 {
                gens.shuffle(&mut rng);
                assert_eq!(lie_closure(&gens, FieldMode::ExactRational).unwrap().rank(), want, "{l}");
                assert_eq!(lie_closure(&gens, fp()).unwrap().rank(), want, "{l}");
            }
        }
    }
}

fn centred(l: &Partition) -> Vec<MatrixQ> {
    let h = RepHandle::new(l);
    let c = Q::new(l.gamma(), BigInt::from(l.dimension()));
    h.transposition_images().iter().map(|u| u.add_scalar(&-c.clone())).collect()
}

#[test]
fn centred_blocks_of_equal_dimension_are_inequivalent() {
    for n in 3..=6 {
        let all = nontrivial(n);
        for (i, a) in all.iter().enumerate() {
            for b in all.iter().skip(i + 1) {
                if a.dimension() != b.dimension() {
                    continue;
                }
                let direct = solve_intertwiner(&centred(a), &centred(b));
                let neg: Vec<MatrixQ> = centred(b).iter().map(MatrixQ::neg).collect();
                let twisted = solve_intertwiner(&centred(a), &neg);
                if *b == a.conjugate() {
                    assert!(direct.is_none(), "{a} ~ {b}");
                    assert!(twisted.is_some(), "{a} not dual to {b}");
                } else {
                    assert!(direct.is_none() && twisted.is_none(), "{a} ~ {b}");
                }
            }
        }
    }
}

#[test]
fn theorem_a_small_exact() {
    for (n, total) in [(3, 3), (4, 11), (5, 39)] {
        let r = theorem_a_verify(n, FieldMode::ExactRational).unwrap();
        assert_eq!(r.total, total, "n = {n}");
        assert_eq!(predicted_theorem_a_dim(n).unwrap(), total.into());
        assert!(r.pass, "n = {n}: {:?}", r.containment_checks);
        let g = g_prime_dim(n, fp()).unwrap();
        assert_eq!(g.total, total);
        let back = ClosureReport::parse(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}

#[test]
fn block_layout_and_trace() {
    let layout = Layout::new(vec![2, 3]);
    assert_eq!(layout.ambient_dim(), 13);
    let blocks = vec![MatrixQ::from_i64(&[&[1, 2], &[3, 4]]), MatrixQ::identity(3)];
    let v = layout.flatten(&blocks);
    assert_eq!(layout.unflatten(&v), blocks);
    assert_eq!(layout.trace(&v, Q::from_integer(0.into()), |a, b| a + b), Q::from_integer(8.into()));
}

#[test]
fn closure_of_commuting_generators_is_their_span() {
    let a = MatrixQ::from_i64(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
    let b = MatrixQ::from_i64(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 0]]);
    assert_eq!(lie_closure(&[a.clone(), b.clone(), a.add(&b)], FieldMode::ExactRational).unwrap().rank(), 2);
    let blocks = vec![vec![a.clone(), b.clone()], vec![b, a]];
    let (basis, _) = close_blocks(&blocks, &[3, 3], fp(), &ClosureOptions::default()).unwrap();
    assert_eq!(basis.rank(), 2);
}

#[test]
fn pair_of_two_by_two_nilpotents_makes_sl2() {
    let e = MatrixQ::from_i64(&[&[0, 1], &[0, 0]]);
    let f = MatrixQ::from_i64(&[&[0, 0], &[1, 0]]);
    let basis = lie_closure(&[e, f], FieldMode::ExactRational).unwrap();
    assert_eq!(basis.rank(), 3);
    assert!(basis.contains(MatrixQ::from_i64(&[&[1, 0], &[0, -1]]).flat()).unwrap());
    assert!(!basis.contains(MatrixQ::identity(2).flat()).unwrap());
}

#[test]
fn structured_inputs_match_small_shapes() {
    let l = p(&[2, 2]);
    let basis = g_lambda_basis(&l, FieldMode::ExactRational).unwrap();
    assert_eq!(basis.rank(), 3);
    assert_eq!(predicted_block(&l).unwrap().0, 3);
}

fn arb_matrix(d: usize) -> impl Strategy<Value = MatrixQ> {
    prop::collection::vec(-2i64..=2, d * d).prop_map(move |v| {
        MatrixQ::from_flat(d, d, v.into_iter().map(|x| Q::from_integer(x.into())).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closure_is_bracket_closed(gens in prop::collection::vec(arb_matrix(3), 1..=3)) {
        let (basis, _) = lie_closure_with(&gens, FieldMode::ExactRational, &ClosureOptions::default()).unwrap();
        prop_assert!(basis.rank() <= 9);
        for g in &gens {
            prop_assert!(basis.contains(g.flat()).unwrap());
        }
        let rows = basis.rational_rows().unwrap();
        let elems: Vec<MatrixQ> = rows.iter().map(|r| unflatten_square(r).unwrap()).collect();
        for a in &elems {
            for b in &elems {
                prop_assert!(basis.contains(a.commutator(b).flat()).unwrap());
            }
        }
        prop_assert_eq!(basis.rank(), naive_closure_rank(&gens));
        let modular = lie_closure(&gens, fp()).unwrap();
        prop_assert_eq!(modular.rank(), basis.rank());
    }
}
