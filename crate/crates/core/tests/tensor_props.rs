mod common;

use common::{all_tuples, random_perm, random_tensor, rng};
use peq::{diagonal_tensor, DenseTensor, Permutation};
use proptest::prelude::*;
use rand::Rng;

fn arb_tensor(n: usize, order: usize) -> impl Strategy<Value = DenseTensor<i64>> {
    prop::collection::vec(-9i64..=9, n.pow(order as u32))
        .prop_map(move |data| DenseTensor::from_data(n, order, data).unwrap())
}

fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #[test]
    fn action_is_a_group_action(v in arb_tensor(3, 3), s in arb_perm(3), r in arb_perm(3)) {
        let sr = s.compose(&r).unwrap();
        prop_assert_eq!(v.act(&sr).unwrap(), v.act(&r).unwrap().act(&s).unwrap());
    }

    #[test]
    fn inner_product_is_invariant(v in arb_tensor(3, 3), w in arb_tensor(3, 3), s in arb_perm(3)) {
        prop_assert_eq!(v.act(&s).unwrap().inner(&w.act(&s).unwrap()).unwrap(), v.inner(&w).unwrap());
        prop_assert_eq!(v.inner(&w).unwrap(), w.inner(&v).unwrap());
    }

    #[test]
    fn permute_legs_inverse(v in arb_tensor(2, 4), tau in arb_perm(4)) {
        prop_assert_eq!(v.permute_legs(&tau).unwrap().permute_legs(&tau.inverse()).unwrap(), v);
    }

    #[test]
    fn kron_is_associative(a in arb_tensor(2, 1), b in arb_tensor(2, 2), c in arb_tensor(2, 1)) {
        prop_assert_eq!(a.kron(&b).unwrap().kron(&c).unwrap(), a.kron(&b.kron(&c).unwrap()).unwrap());
    }

    #[test]
    fn kron_block_swap(a in arb_tensor(3, 1), b in arb_tensor(3, 2)) {
        // kron(a, b) legs (a₀, b₀, b₁) → kron(b, a) legs (b₀, b₁, a₀).
        let tau = Permutation::new(vec![2, 0, 1]).unwrap();
        prop_assert_eq!(a.kron(&b).unwrap().permute_legs(&tau).unwrap(), b.kron(&a).unwrap());
    }
}

#[test]
fn kron_definition_entrywise() {
    let mut r = rng(1);
    let a = random_tensor(&mut r, 3, 2, 5);
    let b = random_tensor(&mut r, 3, 1, 5);
    let k = a.kron(&b).unwrap();
    for i in all_tuples(3, 2) {
        for j in all_tuples(3, 1) {
            let ij: Vec<usize> = i.iter().chain(&j).copied().collect();
            assert_eq!(*k.get(&ij).unwrap(), a.get(&i).unwrap() * b.get(&j).unwrap());
        }
    }
}

#[test]
fn contract_matches_brute_force() {
    let mut r = rng(2);
    for _ in 0..20 {
        let v = random_tensor(&mut r, 3, 2, 5);
        let w = random_tensor(&mut r, 3, 3, 5);
        // Pair v leg 1 with w leg 2, v leg 0 with w leg 0; output is w leg 1.
        let out = v.contract(&w, &[(1, 2), (0, 0)]).unwrap();
        let expect = DenseTensor::from_fn(3, 1, |o| {
            all_tuples(3, 2)
                .iter()
                .map(|i| v.get(&[i[0], i[1]]).unwrap() * w.get(&[i[0], o[0], i[1]]).unwrap())
                .sum()
        })
        .unwrap();
        assert_eq!(out, expect);
    }
}

#[test]
fn contraction_examples() {
    let v = DenseTensor::from_data(3, 1, vec![1i64, 2, 3]).unwrap();
    let ones = DenseTensor::from_data(3, 2, vec![1i64; 9]).unwrap();
    assert_eq!(v.contract(&ones, &[(0, 0)]).unwrap().data(), &[6, 6, 6]);
}

/// Contracting against `w' ⊗ w''` over all of `w'`'s legs factors out `w''`.
#[test]
fn extract_factor_law() {
    let mut r = rng(3);
    for _ in 0..25 {
        let n = r.gen_range(2..=3);
        let d = r.gen_range(1..=2);
        let extra_v = r.gen_range(0..=2);
        let extra_w2 = r.gen_range(1..=2);
        let v = random_tensor(&mut r, n, d + extra_v, 4);
        let w1 = random_tensor(&mut r, n, d, 4);
        let w2 = random_tensor(&mut r, n, extra_w2, 4);
        let pairs: Vec<(usize, usize)> = (0..d).map(|k| (extra_v + k, k)).collect();
        let lhs = v.contract(&w1.kron(&w2).unwrap(), &pairs).unwrap();
        let rhs = v.contract(&w1, &pairs).unwrap().kron(&w2).unwrap();
        assert_eq!(lhs, rhs);
    }
}

/// Contracting against `w' ⊗ w''` over `d' + d''` legs can be done one factor
/// at a time, orders up to 6.
#[test]
fn one_at_a_time_law() {
    let mut r = rng(4);
    for _ in 0..40 {
        let n = r.gen_range(2..=3);
        let d1 = r.gen_range(1..=2);
        let d2 = r.gen_range(1..=2);
        let free_v = r.gen_range(0..=6 - d1 - d2);
        let free_w2 = r.gen_range(0..=1);
        let v = random_tensor(&mut r, n, free_v + d1 + d2, 3);
        let w1 = random_tensor(&mut r, n, d1, 3);
        let w2 = random_tensor(&mut r, n, d2 + free_w2, 3);
        let w = w1.kron(&w2).unwrap();
        let pairs: Vec<(usize, usize)> = (0..d1 + d2).map(|k| (free_v + k, k)).collect();
        let direct = v.contract(&w, &pairs).unwrap();
        let first: Vec<(usize, usize)> = (0..d1).map(|k| (free_v + k, k)).collect();
        let partial = v.contract(&w1, &first).unwrap();
        // partial legs: v's free legs then v's remaining d2 paired legs.
        let second: Vec<(usize, usize)> = (0..d2).map(|k| (free_v + k, k)).collect();
        assert_eq!(partial.contract(&w2, &second).unwrap(), direct);
    }
}

#[test]
fn kron_preserves_invariance() {
    let mut r = rng(5);
    for n in 2..=4 {
        for p1 in 0..=2 {
            for p2 in 0..=2 {
                let a = diagonal_tensor::<i64>(n, p1).unwrap().scale(&r.gen_range(1..5)).unwrap();
                let ones = DenseTensor::from_data(n, p2, vec![1i64; n.pow(p2 as u32)]).unwrap();
                let k = a.kron(&ones).unwrap();
                assert!(a.is_invariant() && ones.is_invariant() && k.is_invariant());
            }
        }
    }
    let v = random_tensor(&mut r, 3, 2, 5);
    assert!(!v.is_invariant() || v.act(&random_perm(&mut r, 3)).unwrap() == v);
}

#[test]
fn generator_check_agrees_with_whole_group() {
    let mut r = rng(6);
    let n = 3;
    let id = diagonal_tensor::<i64>(n, 2).unwrap();
    let ones = DenseTensor::from_data(n, 2, vec![1i64; n * n]).unwrap();
    for _ in 0..50 {
        let base = random_tensor(&mut r, n, 2, 2);
        let invariant = id.scale(&r.gen_range(-3..=3)).unwrap().add(&ones.scale(&r.gen_range(-3..=3)).unwrap()).unwrap();
        let symmetric = base.add(&base.permute_legs(&Permutation::swap01(2)).unwrap()).unwrap();
        for t in [base, invariant, symmetric] {
            let whole = Permutation::all(n).iter().all(|s| t.act(s).unwrap() == t);
            assert_eq!(t.is_invariant(), whole);
        }
    }
}
