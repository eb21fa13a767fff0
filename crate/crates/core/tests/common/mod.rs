//! Shared helpers and brute-force oracles for the integration tests. Nothing
//! here calls the library routine it is used to check.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::HashSet;

use peq::{DenseTensor, EquivariantLayer, Field, Permutation, Scalar, SetPartition};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p(s: &str) -> SetPartition {
    s.parse().unwrap()
}

/// All tuples in `{0..n-1}^l`, last position fastest.
pub fn all_tuples(n: usize, l: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..l {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Number of Σₙ-orbits of `{0..n-1}^l` under the diagonal action, by
/// minimizing each tuple over the whole group.
pub fn brute_force_orbit_count(l: usize, n: usize) -> usize {
    let group: Vec<Vec<usize>> = permutations(n);
    let reps: HashSet<Vec<usize>> = all_tuples(n, l)
        .into_iter()
        .map(|t| {
            group
                .iter()
                .map(|s| t.iter().map(|&x| s[x]).collect::<Vec<_>>())
                .min()
                .unwrap()
        })
        .collect();
    reps.len()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..n {
            let mut v = rest.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out
}

/// Whether positions with equal labels in `p` carry equal values in `t`.
pub fn constant_on_blocks(p: &SetPartition, t: &[usize]) -> bool {
    (0..t.len()).all(|i| (0..t.len()).all(|j| p.label(i) != p.label(j) || t[i] == t[j]))
}

/// Whether the equality pattern of `t` is exactly `p`.
pub fn has_pattern(p: &SetPartition, t: &[usize]) -> bool {
    (0..t.len()).all(|i| (0..t.len()).all(|j| (p.label(i) == p.label(j)) == (t[i] == t[j])))
}

pub fn tensor_from_predicate(n: usize, l: usize, pred: impl Fn(&[usize]) -> bool) -> DenseTensor<i64> {
    DenseTensor::from_fn(n, l, |t| i64::from(pred(t))).unwrap()
}

pub fn brute_orbit_basis(p: &SetPartition, n: usize) -> DenseTensor<i64> {
    tensor_from_predicate(n, p.len(), |t| has_pattern(p, t))
}

pub fn brute_diagram_basis(p: &SetPartition, n: usize) -> DenseTensor<i64> {
    tensor_from_predicate(n, p.len(), |t| constant_on_blocks(p, t))
}

/// `out[J] = Σ_I v[I]·d[I, J]` by explicit enumeration.
pub fn brute_apply(d: &DenseTensor<i64>, v: &DenseTensor<i64>) -> DenseTensor<i64> {
    let (n, m) = (v.n(), v.order());
    let mprime = d.order() - m;
    DenseTensor::from_fn(n, mprime, |j| {
        all_tuples(n, m)
            .iter()
            .map(|i| {
                let mut idx = i.clone();
                idx.extend_from_slice(j);
                v.get(i).unwrap() * d.get(&idx).unwrap()
            })
            .sum()
    })
    .unwrap()
}

/// Rank by textbook Gaussian elimination over a field.
pub fn gaussian_rank<F: Field>(mut rows: Vec<Vec<F>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = rows[rank][c].inverse().unwrap();
        let pivot: Vec<F> = rows[rank].iter().map(|x| x.try_mul(&inv).unwrap()).collect();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                for k in 0..cols {
                    rows[r][k] = rows[r][k].try_sub(&f.try_mul(&pivot[k]).unwrap()).unwrap();
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Permutation::new(v).unwrap()
}

pub fn random_tensor(rng: &mut impl Rng, n: usize, order: usize, bound: i64) -> DenseTensor<i64> {
    DenseTensor::from_fn(n, order, |_| rng.gen_range(-bound..=bound)).unwrap()
}

pub fn random_layer(rng: &mut impl Rng, m: usize, mprime: usize, n: usize, bound: i64) -> EquivariantLayer<i64> {
    let coeffs: Vec<i64> = (0..peq::count_partitions(m + mprime, n))
        .map(|_| rng.gen_range(-bound..=bound))
        .collect();
    EquivariantLayer::from_dense_coeffs(m, mprime, n, coeffs).unwrap()
}

pub fn to_scalar<S: Scalar>(t: &DenseTensor<i64>) -> DenseTensor<S> {
    t.map(|&x| S::try_from_i64(x)).unwrap()
}
