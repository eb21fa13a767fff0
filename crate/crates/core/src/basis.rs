//! The orbit basis `e_P` and the diagram basis `d_P` of the `Σₙ`-invariant
//! tensors `((Rⁿ)^{⊗l})^{Σₙ}`, and the change of basis between them.
//!
//! `e_P` has ones exactly at the index tuples whose equality pattern is `P`.
//! `d_P` has ones at the tuples that are constant on every block of `P`; it
//! factors as a leg-permuted Kronecker product of diagonal tensors, one per
//! block, which is what makes applying it cheap (see [`crate::fastapply`]).

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::par::{self, ExecPolicy};
use crate::partition::{SetPartition, ZetaMoebius};
use crate::perm::Permutation;
use crate::scalar::{Field, Gf2, Scalar};
use crate::tensor::{diagonal_tensor, Capacity, DenseTensor};

/// Calls `f` with every map from the `k` blocks to values in `0..n`,
/// restricted to injective maps when `injective` is set.
fn for_each_block_assignment(k: usize, n: usize, injective: bool, mut f: impl FnMut(&[usize])) {
    let mut values = Vec::with_capacity(k);
    let mut used = vec![false; n];
    fn rec(
        k: usize,
        n: usize,
        injective: bool,
        values: &mut Vec<usize>,
        used: &mut [bool],
        f: &mut dyn FnMut(&[usize]),
    ) {
        if values.len() == k {
            f(values);
            return;
        }
        for v in 0..n {
            if injective && used[v] {
                continue;
            }
            used[v] = true;
            values.push(v);
            rec(k, n, injective, values, used, f);
            values.pop();
            used[v] = false;
        }
    }
    rec(k, n, injective, &mut values, &mut used, &mut f);
}

/// 0/1 tensor with ones at the tuples obtained by giving each block of `p`
/// a value, all block values distinct if `injective`.
fn block_constant_tensor<S: Scalar>(p: &SetPartition, n: usize, injective: bool) -> Result<DenseTensor<S>> {
    let mut t = DenseTensor::<S>::zeros(n, p.len())?;
    let strides = t.strides();
    // Each block contributes value · (sum of its legs' strides).
    let block_strides: Vec<usize> = p
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&leg| strides[leg]).sum())
        .collect();
    let data = t.data_mut();
    for_each_block_assignment(block_strides.len(), n, injective, |values| {
        let pos: usize = values.iter().zip(&block_strides).map(|(v, s)| v * s).sum();
        data[pos] = S::one();
    });
    Ok(t)
}

/// The orbit-sum tensor `e_P`. Zero when `P` has more than `n` blocks.
pub fn orbit_basis<S: Scalar>(p: &SetPartition, n: usize) -> Result<DenseTensor<S>> {
    block_constant_tensor(p, n, true)
}

/// The diagram tensor `d_P`, materialized directly from its support.
pub fn diagram_basis_dense<S: Scalar>(p: &SetPartition, n: usize) -> Result<DenseTensor<S>> {
    block_constant_tensor(p, n, false)
}

/// `d_P` kept in factored form: a Kronecker product of diagonal tensors of
/// orders `block_sizes`, followed by the leg permutation `tau`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredTensor {
    pub n: usize,
    pub block_sizes: Vec<usize>,
    /// Leg `k` of the Kronecker product becomes leg `tau(k)` of `d_P`.
    pub tau: Permutation,
}

impl FactoredTensor {
    /// Builds the factorization from blocks listed in any order, each with its
    /// elements in any order. Different listings of the same partition
    /// evaluate to the same tensor.
    pub fn from_ordered_blocks(n: usize, l: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        SetPartition::from_blocks(l, blocks)?;
        let images: Vec<usize> = blocks.iter().flatten().copied().collect();
        Ok(FactoredTensor {
            n,
            block_sizes: blocks.iter().map(Vec::len).collect(),
            tau: Permutation::new(images)?,
        })
    }

    pub fn order(&self) -> usize {
        self.tau.len()
    }

    pub fn evaluate<S: Scalar>(&self) -> Result<DenseTensor<S>> {
        let mut acc = DenseTensor::scalar(self.n, S::one())?;
        for &size in &self.block_sizes {
            acc = acc.kron(&diagonal_tensor(self.n, size)?)?;
        }
        acc.permute_legs(&self.tau)
    }
}

/// `d_P` in factored form with blocks ordered by minimum element.
pub fn diagram_basis_factored(p: &SetPartition, n: usize) -> FactoredTensor {
    FactoredTensor::from_ordered_blocks(n, p.len(), &p.blocks())
        .expect("blocks of a valid partition form a valid factorization")
}

/// The index tuple `I_P` giving value `k` to every position in the `k`-th
/// block (blocks ordered by minimum element).
pub fn representative_index(p: &SetPartition) -> Vec<usize> {
    p.rgs().to_vec()
}

/// `λ_P(v) = ⟨e_{I_P}, v⟩`.
pub fn dual_functional<S: Scalar>(p: &SetPartition, n: usize, v: &DenseTensor<S>) -> Result<S> {
    p.check_blocks_at_most(n)?;
    if v.order() != p.len() || v.n() != n {
        return Err(Error::domain(format!(
            "functional for a partition of {} elements (n = {n}) applied to a tensor of order {} (n = {})",
            p.len(),
            v.order(),
            v.n()
        )));
    }
    v.get(&representative_index(p)).cloned()
}

/// Change of basis between `{d_P}` and `{e_P}` over the partitions of an
/// `l`-set with at most `n` blocks.
#[derive(Debug, Clone)]
pub struct ChangeOfBasis {
    n: usize,
    table: ZetaMoebius,
}

impl ChangeOfBasis {
    pub fn new(l: usize, n: usize) -> Result<Self> {
        Ok(ChangeOfBasis {
            n,
            table: ZetaMoebius::new(l, n)?,
        })
    }

    pub fn partitions(&self) -> &[SetPartition] {
        &self.table.partitions
    }

    pub fn index_of(&self, p: &SetPartition) -> Result<usize> {
        p.check_blocks_at_most(self.n)?;
        self.table
            .index_of(p)
            .ok_or_else(|| Error::domain(format!("partition {p} has the wrong ground set")))
    }

    /// Coefficients of `d_P` in the orbit basis.
    pub fn diagram_in_orbit(&self, p: &SetPartition) -> Result<Vec<i64>> {
        Ok(self.table.zeta[self.index_of(p)?].clone())
    }

    /// Coefficients of `e_P` in the diagram basis.
    pub fn orbit_in_diagram(&self, p: &SetPartition) -> Result<Vec<i64>> {
        Ok(self.table.moebius[self.index_of(p)?].clone())
    }

    /// Coefficients of an arbitrary partition's `d_R` in the diagram basis,
    /// including partitions with more than `n` blocks (whose `d_R` is not
    /// itself a basis element).
    pub fn diagram_in_diagram(&self, r: &SetPartition) -> Result<Vec<i64>> {
        if r.num_blocks() <= self.n {
            let mut out = vec![0; self.table.partitions.len()];
            out[self.index_of(r)?] = 1;
            return Ok(out);
        }
        // d_R = Σ_{Q ⊒ R, |Q| ≤ n} e_Q, then expand each e_Q.
        let mut out = vec![0i64; self.table.partitions.len()];
        for q in r.coarsenings(self.n) {
            for (acc, &m) in out.iter_mut().zip(&self.table.moebius[self.index_of(&q)?]) {
                *acc = acc.checked_add(m).ok_or(Error::Overflow)?;
            }
        }
        Ok(out)
    }
}

/// Coefficients of `d_P` over `enumerate_partitions(p.len(), n)` in the
/// orbit basis.
pub fn diagram_in_orbit(p: &SetPartition, n: usize) -> Result<Vec<i64>> {
    p.check_blocks_at_most(n)?;
    ChangeOfBasis::new(p.len(), n)?.diagram_in_orbit(p)
}

/// Coefficients of `e_P` over `enumerate_partitions(p.len(), n)` in the
/// diagram basis.
pub fn orbit_in_diagram(p: &SetPartition, n: usize) -> Result<Vec<i64>> {
    p.check_blocks_at_most(n)?;
    ChangeOfBasis::new(p.len(), n)?.orbit_in_diagram(p)
}

/// `Σ coeffs[i] · basis(partitions[i])`.
pub fn combine<S: Scalar>(
    partitions: &[SetPartition],
    coeffs: &[S],
    n: usize,
    basis: impl Fn(&SetPartition, usize) -> Result<DenseTensor<S>>,
) -> Result<DenseTensor<S>> {
    let l = partitions.first().map_or(0, SetPartition::len);
    let mut acc = DenseTensor::zeros(n, l)?;
    for (p, c) in partitions.iter().zip(coeffs) {
        if !c.is_zero() {
            acc.axpy(c, &basis(p, n)?)?;
        }
    }
    Ok(acc)
}

/// Expresses a `Σₙ`-invariant tensor in the diagram basis. Errors if the
/// tensor is not invariant (the reconstruction leaves a nonzero residual).
pub fn express_in_diagram_basis<S: Scalar>(t: &DenseTensor<S>) -> Result<Vec<S>> {
    let n = t.n();
    let cob = ChangeOfBasis::new(t.order(), n)?;
    let parts = cob.partitions();
    // Orbit coefficient of e_Q is the value at I_Q.
    let mut coeffs = vec![S::zero(); parts.len()];
    for q in parts {
        let c = t.get(&representative_index(q))?;
        if c.is_zero() {
            continue;
        }
        for (acc, &m) in coeffs.iter_mut().zip(&cob.orbit_in_diagram(q)?) {
            if m != 0 {
                *acc = acc.try_add(&c.try_mul(&S::try_from_i64(m)?)?)?;
            }
        }
    }
    let rebuilt = combine(parts, &coeffs, n, diagram_basis_dense)?;
    if rebuilt != *t {
        return Err(Error::domain("tensor is not Σₙ-invariant"));
    }
    Ok(coeffs)
}

/// Field used by [`verify_basis`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Rational,
    Gf2,
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldKind::Rational => "rational",
            FieldKind::Gf2 => "gf2",
        })
    }
}

impl FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(FieldKind::Rational),
            "gf2" => Ok(FieldKind::Gf2),
            other => Err(Error::parse(format!("unknown field {other:?} (expected rational or gf2)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisReport {
    pub l: usize,
    pub n: usize,
    pub field: FieldKind,
    pub count: usize,
    pub rank: usize,
    /// Every `e_P` is reproduced exactly from the `d_Q` via the Möbius matrix.
    pub spans_orbit_basis: bool,
    pub is_basis: bool,
}

/// Checks exactly that `{d_P : P has ≤ n blocks}` is linearly independent
/// over `field` and spans the same space as `{e_P}`.
pub fn verify_basis(l: usize, n: usize, field: FieldKind, capacity: Capacity) -> Result<BasisReport> {
    verify_basis_with(l, n, field, capacity, ExecPolicy::default())
}

pub fn verify_basis_with(
    l: usize,
    n: usize,
    field: FieldKind,
    capacity: Capacity,
    policy: ExecPolicy,
) -> Result<BasisReport> {
    let width = capacity.check(n, l)?;
    let cob = ChangeOfBasis::new(l, n)?;
    let parts = cob.partitions().to_vec();
    let count = parts.len();
    if (count as u128) * (width as u128) > u128::from(capacity.max_entries) {
        return Err(Error::Capacity {
            n,
            order: l,
            entries: (count as u128) * (width as u128),
            limit: capacity.max_entries,
        });
    }
    let rows: Vec<DenseTensor<i64>> = par::map_items(policy, &parts, |p| diagram_basis_dense(p, n))?;
    let (rank, spans) = match field {
        FieldKind::Rational => {
            let int_rows: Vec<Vec<i64>> = rows.iter().map(|t| t.data().to_vec()).collect();
            (
                linalg::rank_rational(&int_rows),
                spans_orbit_basis::<BigRational>(&cob, n, policy)?,
            )
        }
        FieldKind::Gf2 => {
            let bit_rows: Vec<Vec<bool>> = rows
                .iter()
                .map(|t| t.data().iter().map(|&x| x.rem_euclid(2) == 1).collect())
                .collect();
            (linalg::rank_gf2(&bit_rows), spans_orbit_basis::<Gf2>(&cob, n, policy)?)
        }
    };
    Ok(BasisReport {
        l,
        n,
        field,
        count,
        rank,
        spans_orbit_basis: spans,
        is_basis: rank == count && spans,
    })
}

/// Whether `Σ_Q M[P][Q] · d_Q = e_P` holds over `F` for every `P`.
fn spans_orbit_basis<F: Field>(cob: &ChangeOfBasis, n: usize, policy: ExecPolicy) -> Result<bool> {
    let parts = cob.partitions();
    let ok = par::map_items(policy, parts, |p| {
        let coeffs = cob
            .orbit_in_diagram(p)?
            .into_iter()
            .map(F::try_from_i64)
            .collect::<Result<Vec<F>>>()?;
        let rebuilt = combine(parts, &coeffs, n, diagram_basis_dense)?;
        Ok::<_, Error>(rebuilt == orbit_basis(p, n)?)
    })?;
    Ok(ok.into_iter().all(|x| x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SetPartition {
        s.parse().unwrap()
    }

    fn identity(n: usize) -> DenseTensor<i64> {
        diagonal_tensor(n, 2).unwrap()
    }

    fn ones(n: usize) -> DenseTensor<i64> {
        DenseTensor::from_data(n, 2, vec![1; n * n]).unwrap()
    }

    #[test]
    fn orbit_basis_examples() {
        for n in 2..5 {
            assert_eq!(orbit_basis::<i64>(&p("0 0"), n).unwrap(), identity(n));
            assert_eq!(orbit_basis::<i64>(&p("0 1"), n).unwrap(), ones(n).sub(&identity(n)).unwrap());
        }
        let e = orbit_basis::<i64>(&p("0 0 1"), 2).unwrap();
        assert_eq!(e.support(), vec![vec![0, 0, 1], vec![1, 1, 0]]);
        assert!(orbit_basis::<i64>(&p("0 1 2"), 2).unwrap().is_zero());
    }

    #[test]
    fn diagram_basis_examples() {
        for n in 1..5 {
            assert_eq!(diagram_basis_dense::<i64>(&p("0 0"), n).unwrap(), identity(n));
            assert_eq!(diagram_basis_dense::<i64>(&p("0 1"), n).unwrap(), ones(n));
        }
        let d = diagram_basis_dense::<i64>(&p("0 0 1"), 2).unwrap();
        assert_eq!(d.support(), vec![vec![0, 0, 0], vec![0, 0, 1], vec![1, 1, 0], vec![1, 1, 1]]);
    }

    #[test]
    fn factored_examples() {
        let f = diagram_basis_factored(&p("0 1"), 3);
        assert_eq!(f.block_sizes, vec![1, 1]);
        assert!(f.tau.is_identity());
        assert_eq!(f.evaluate::<i64>().unwrap(), ones(3));

        let f = diagram_basis_factored(&p("0 0"), 3);
        assert_eq!(f.block_sizes, vec![2]);
        assert!(f.tau.is_identity());
        assert_eq!(f.evaluate::<i64>().unwrap(), identity(3));

        let q = p("0 1 0");
        let f = diagram_basis_factored(&q, 2);
        assert_eq!(f.block_sizes, vec![2, 1]);
        assert_eq!(f.tau.images(), &[0, 2, 1]);
        assert_eq!(f.evaluate::<i64>().unwrap(), diagram_basis_dense(&q, 2).unwrap());
    }

    #[test]
    fn change_of_basis_examples() {
        assert_eq!(diagram_in_orbit(&p("0 1"), 3).unwrap(), vec![1, 1]);
        assert_eq!(diagram_in_orbit(&p("0 0"), 3).unwrap(), vec![1, 0]);
        assert_eq!(diagram_in_orbit(&p("0 1 2"), 3).unwrap(), vec![1; 5]);
        assert_eq!(orbit_in_diagram(&p("0 1"), 2).unwrap(), vec![-1, 1]);
        assert_eq!(orbit_in_diagram(&p("0 0"), 2).unwrap(), vec![1, 0]);
        assert!(matches!(diagram_in_orbit(&p("0 1 2"), 2), Err(Error::BasisIndex { .. })));
        assert!(matches!(orbit_in_diagram(&p("0 1 2"), 2), Err(Error::BasisIndex { .. })));
    }

    #[test]
    fn dual_functional_examples() {
        let (p1, p2) = (p("0 0"), p("0 1"));
        for n in 2..5 {
            let d1 = diagram_basis_dense::<i64>(&p1, n).unwrap();
            let d2 = diagram_basis_dense::<i64>(&p2, n).unwrap();
            assert_eq!(dual_functional(&p1, n, &d1).unwrap(), 1);
            assert_eq!(dual_functional(&p2, n, &d2).unwrap(), 1);
            assert_eq!(dual_functional(&p2, n, &d1).unwrap(), 0);
            assert_eq!(dual_functional(&p1, n, &d2).unwrap(), 1);
        }
        let d = diagram_basis_dense::<i64>(&p("0 1 2"), 3).unwrap();
        assert!(matches!(dual_functional(&p("0 1 2"), 2, &d), Err(Error::BasisIndex { .. })));
        assert!(matches!(dual_functional(&p("0 1"), 3, &d), Err(Error::Domain(_))));
    }

    #[test]
    fn dual_functional_is_inner_product() {
        let q = p("0 1 0 2");
        let v = DenseTensor::<i64>::from_fn(3, 4, |i| i.iter().fold(0, |a, &x| 3 * a + x as i64)).unwrap();
        let e = DenseTensor::<i64>::basis_tensor(3, &representative_index(&q)).unwrap();
        assert_eq!(dual_functional(&q, 3, &v).unwrap(), e.inner(&v).unwrap());
    }

    #[test]
    fn verify_basis_examples() {
        let cap = Capacity::default();
        for n in 2..5 {
            let r = verify_basis(2, n, FieldKind::Rational, cap).unwrap();
            assert_eq!((r.count, r.rank, r.is_basis), (2, 2, true));
        }
        let r = verify_basis(4, 4, FieldKind::Rational, cap).unwrap();
        assert_eq!((r.count, r.rank, r.is_basis), (15, 15, true));
        let r = verify_basis(3, 2, FieldKind::Gf2, cap).unwrap();
        assert_eq!((r.count, r.rank, r.is_basis), (4, 4, true));
        assert!(matches!(
            verify_basis(6, 8, FieldKind::Rational, Capacity::new(1000)),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn express_round_trip() {
        let q = p("0 1 0");
        let d = diagram_basis_dense::<i64>(&q, 3).unwrap();
        let coeffs = express_in_diagram_basis(&d).unwrap();
        let idx = ChangeOfBasis::new(3, 3).unwrap().index_of(&q).unwrap();
        for (i, c) in coeffs.iter().enumerate() {
            assert_eq!(*c, i64::from(i == idx));
        }
        let not_invariant = DenseTensor::<i64>::basis_tensor(3, &[0, 1, 0]).unwrap();
        assert!(express_in_diagram_basis(&not_invariant).is_err());
    }

    #[test]
    fn over_full_diagram_expansion() {
        // n = 2: d of the all-singletons partition of 3 elements is the
        // all-ones tensor, which equals the sum over e_Q with ≤ 2 blocks.
        let cob = ChangeOfBasis::new(3, 2).unwrap();
        let coeffs = cob.diagram_in_diagram(&SetPartition::finest(3)).unwrap();
        let rebuilt = combine(cob.partitions(), &coeffs, 2, diagram_basis_dense::<i64>).unwrap();
        assert_eq!(rebuilt, diagram_basis_dense(&SetPartition::finest(3), 2).unwrap());
    }
}
