use std::collections::{BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use proptest::prelude::*;

use symlie::partitions::{binomial, dim_dab, enumerate_partitions};
use symlie::seminormal::rep_gen;
use symlie::tableaux::enumerate_syt;
use symlie::{Partition, Sign};

fn p(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

/// Young's rule, over raw part vectors so nothing from the library is reused.
fn young(parts: &[usize], memo: &mut HashMap<Vec<usize>, BigUint>) -> BigUint {
    if parts.iter().sum::<usize>() <= 1 {
        return BigUint::one();
    }
    if let Some(v) = memo.get(parts) {
        return v.clone();
    }
    let mut acc = BigUint::zero();
    for r in 0..parts.len() {
        let next = parts.get(r + 1).copied().unwrap_or(0);
        if parts[r] > next {
            let mut smaller = parts.to_vec();
            smaller[r] -= 1;
            while smaller.last() == Some(&0) {
                smaller.pop();
            }
            acc += young(&smaller, memo);
        }
    }
    memo.insert(parts.to_vec(), acc.clone());
    acc
}

fn hook_length_dim(parts: &[usize]) -> BigUint {
    let n: usize = parts.iter().sum();
    let mut prod = BigUint::one();
    for (i, &len) in parts.iter().enumerate() {
        for j in 0..len {
            let arm = len - j - 1;
            let leg = parts.iter().skip(i + 1).filter(|&&q| q > j).count();
            prod *= BigUint::from(arm + leg + 1);
        }
    }
    (1..=n).fold(BigUint::one(), |a, k| a * BigUint::from(k)) / prod
}

fn self_conjugates(n: usize) -> Vec<Partition> {
    enumerate_partitions(n).into_iter().filter(Partition::is_self_conjugate).collect()
}

#[test]
fn dimension_three_ways_up_to_nine() {
    let mut memo = HashMap::new();
    for n in 1..=9 {
        for l in enumerate_partitions(n) {
            let d = l.dimension();
            assert_eq!(d, young(l.parts(), &mut memo), "{l}");
            assert_eq!(d, hook_length_dim(l.parts()), "{l}");
            assert_eq!(d, l.dimension_young(), "{l}");
            assert_eq!(d, BigUint::from(enumerate_syt(&l).len()), "{l}");
        }
    }
}

#[test]
fn squares_of_dimensions_sum_to_factorial() {
    for n in 1..=12 {
        let total: BigUint = enumerate_partitions(n).iter().map(|l| l.dimension().pow(2)).sum();
        let fact = (1..=n).fold(BigUint::one(), |a, k| a * BigUint::from(k));
        assert_eq!(total, fact, "n = {n}");
    }
}

#[test]
fn hook_dimensions_are_binomials() {
    for n in 2..=14 {
        for r in 0..n {
            let l = Partition::hook(n, r).unwrap();
            assert_eq!(l.dimension(), binomial(n - 1, r), "{l}");
        }
    }
}

#[test]
fn dab_values_from_the_text() {
    assert_eq!(dim_dab(1, 1), BigUint::from(16u32));
    assert_eq!(dim_dab(2, 0), BigUint::from(9u32));
    assert_eq!(dim_dab(2, 1), BigUint::from(35u32));
    assert_eq!(dim_dab(3, 0), BigUint::from(14u32));
    assert_eq!(Partition::dab(2, 1), p(&[4, 2, 1]));
}

fn dab_recursive(a: i64, b: i64, memo: &mut HashMap<(i64, i64), BigUint>) -> BigUint {
    if a < 0 || b < 0 {
        return BigUint::zero();
    }
    if a == 0 && b == 0 {
        return BigUint::from(2u32);
    }
    if let Some(v) = memo.get(&(a, b)) {
        return v.clone();
    }
    let v = dab_recursive(a - 1, b, memo)
        + dab_recursive(a, b - 1, memo)
        + binomial((a + b + 2) as usize, (b + 1) as usize);
    memo.insert((a, b), v.clone());
    v
}

#[test]
fn dab_recursion_and_closed_form() {
    let mut memo = HashMap::new();
    for a in 0..=8usize {
        for b in 0..=(8 - a) {
            let d = Partition::dab(a, b);
            assert_eq!(d.size(), a + b + 4);
            assert_eq!(dim_dab(a, b), d.dimension(), "({a},{b})");
            assert_eq!(dim_dab(a, b), dab_recursive(a as i64, b as i64, &mut memo), "({a},{b})");
        }
    }
}

#[test]
fn dab_inequalities() {
    let n_max = 12;
    for m in 3.. {
        if 2 * m + 2 > n_max {
            break;
        }
        assert!(dim_dab(m, m - 2) > binomial(2 * m + 1, m), "m = {m}");
    }
    for a in 2.. {
        if 2 * a + 4 > n_max {
            break;
        }
        assert!(dim_dab(a - 1, a) * 4u32 > dim_dab(a, a), "a = {a}");
    }
    for b in 2..n_max {
        for a in (b + 2)..n_max {
            if a + b + 4 > n_max {
                break;
            }
            assert!(dim_dab(a, b) > binomial(a + b + 2, b + 1) * 3u32, "({a},{b})");
        }
    }
}

#[test]
fn descents_biject_with_conjugate() {
    for n in 1..=12 {
        for l in enumerate_partitions(n) {
            let c = l.conjugate();
            let image: BTreeSet<usize> = l.descents().iter().map(|&r| l.part(r)).collect();
            let target: BTreeSet<usize> = c.descents().into_iter().collect();
            assert_eq!(image, target, "{l}");
            assert_eq!(l.descent_count(), c.descent_count());
            for r in l.descents() {
                assert_eq!(l.remove_at(r).unwrap().conjugate(), c.remove_at(l.part(r)).unwrap(), "{l} at {r}");
            }
            assert_eq!(l.diagonal_length().unwrap(), c.diagonal_length().unwrap());
        }
    }
}

#[test]
fn predecessors_of_self_conjugate_close_under_conjugation() {
    for n in 1..=12 {
        for l in self_conjugates(n) {
            let preds: BTreeSet<Partition> = l.predecessors().into_iter().collect();
            for mu in &preds {
                assert!(preds.contains(&mu.conjugate()), "{l}: {mu}");
            }
        }
    }
}

#[test]
fn predecessor_lemmas() {
    for n in 2..=12 {
        for l in enumerate_partitions(n) {
            let b = l.diagonal_length().unwrap();
            let preds = l.predecessors();
            if b == 2 {
                let low = preds.iter().filter(|m| m.diagonal_length().unwrap() < 2).count();
                assert!(low <= 1, "{l}");
            }
            let sym: Vec<&Partition> = preds.iter().filter(|m| m.is_self_conjugate()).collect();
            assert!(sym.len() <= 1, "{l}");
            if l.is_self_conjugate() {
                if l.part(b) == b {
                    assert_eq!(sym, vec![&l.remove_at(b).unwrap()], "{l}");
                } else {
                    assert!(sym.is_empty(), "{l}");
                }
            } else {
                for mu in preds.iter().filter(|m| !m.is_self_conjugate()) {
                    assert!(!preds.contains(&mu.conjugate()), "{l}: {mu}");
                }
            }
        }
    }
}

#[test]
fn smallest_nontrivial_dimension() {
    for n in 5..=12 {
        let alpha = Partition::hook(n, 1).unwrap();
        let mut at_bound = BTreeSet::new();
        for l in enumerate_partitions(n) {
            let d = l.dimension();
            if d > BigUint::one() {
                assert!(d >= BigUint::from(n - 1), "{l}");
            }
            if d == BigUint::from(n - 1) {
                at_bound.insert(l);
            }
        }
        let mut want: BTreeSet<Partition> = [alpha.clone(), alpha.conjugate()].into();
        // The 3x2 rectangles also have dimension 5.
        if n == 6 {
            want.extend([p(&[3, 3]), p(&[2, 2, 2])]);
        }
        assert_eq!(at_bound, want, "n = {n}");
    }
}

#[test]
fn dimension_beats_twice_descents() {
    for n in 6..=12 {
        for l in enumerate_partitions(n) {
            if !l.dimension().is_one() {
                assert!(l.dimension() > BigUint::from(2 * l.descent_count()), "{l}");
            }
        }
    }
}

#[test]
fn shift_parity() {
    for n in 1..=10 {
        for l in self_conjugates(n) {
            let b = l.diagonal_length().unwrap();
            assert_eq!(l.shift_count() % 2, ((n - b) / 2) % 2, "{l}");
            assert_eq!((n - b) % 2, 0);
        }
    }
}

#[test]
fn gamma_by_trace_and_conjugation() {
    for n in 2..=7 {
        for l in enumerate_partitions(n) {
            let tr = rep_gen(&l, 1).unwrap().trace();
            assert!(tr.is_integer(), "{l}");
            assert_eq!(tr.to_integer(), l.gamma(), "{l}");
            assert_eq!(l.conjugate().gamma(), -l.gamma(), "{l}");
        }
    }
    for n in 8..=12 {
        for l in enumerate_partitions(n) {
            assert_eq!(l.conjugate().gamma(), -l.gamma(), "{l}");
        }
    }
}

#[test]
fn eta_matches_transposition_determinant() {
    for n in 2..=6 {
        for l in enumerate_partitions(n) {
            let det = rep_gen(&l, 1).unwrap().determinant();
            let want = match l.eta().unwrap() {
                Sign::Plus => 1,
                Sign::Minus => -1,
            };
            assert_eq!(det.to_integer(), BigInt::from(want), "{l}");
        }
    }
}

#[test]
fn partition_counts() {
    let counts = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77];
    for (n, &c) in counts.iter().enumerate() {
        assert_eq!(enumerate_partitions(n).len(), c, "n = {n}");
    }
}

fn arb_partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..8, 1..8).prop_map(Partition::from_unsorted)
}

proptest! {
    #[test]
    fn conjugation_is_an_involution(l in arb_partition()) {
        let c = l.conjugate();
        prop_assert_eq!(c.size(), l.size());
        prop_assert_eq!(c.conjugate(), l.clone());
        prop_assert_eq!(c.diagonal_length().unwrap(), l.diagonal_length().unwrap());
    }

    #[test]
    fn union_and_intersection_bound(a in arb_partition(), b in arb_partition()) {
        let u = a.union(&b);
        let i = a.intersection(&b);
        prop_assert!(u.contains(&a) && u.contains(&b));
        prop_assert!(a.contains(&i) && b.contains(&i));
        prop_assert_eq!(u.conjugate(), a.conjugate().union(&b.conjugate()));
    }

    #[test]
    fn successors_invert_predecessors(l in arb_partition()) {
        for s in l.successors() {
            prop_assert!(s.predecessors().contains(&l));
        }
        for m in l.predecessors() {
            prop_assert!(m.successors().contains(&l));
        }
        let total: BigUint = l.predecessors().iter().map(Partition::dimension).sum();
        if l.size() > 1 {
            prop_assert_eq!(total, l.dimension());
        }
    }

    #[test]
    fn parse_display_round_trip(l in arb_partition()) {
        let text = l.to_string();
        prop_assert_eq!(text.parse::<Partition>().unwrap(), l.clone());
        let json = serde_json::to_string(&l).unwrap();
        prop_assert_eq!(serde_json::from_str::<Partition>(&json).unwrap(), l);
    }
}
