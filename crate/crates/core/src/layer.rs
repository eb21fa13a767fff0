//! Equivariant layers as coefficient vectors over the diagram basis.

use std::collections::BTreeMap;

use crate::basis::{diagram_basis_dense, express_in_diagram_basis, ChangeOfBasis};
use crate::error::{Error, Result};
use crate::fastapply::{apply_fast_with, BlockPlan};
use crate::par::{self, ExecPolicy};
use crate::partition::{enumerate_partitions, SetPartition};
use crate::perm::Permutation;
use crate::scalar::Scalar;
use crate::tensor::{Capacity, DenseTensor};

/// A `Σₙ`-equivariant linear map `(Rⁿ)^{⊗m} → (Rⁿ)^{⊗m'}`, stored as
/// `Σ_P coeffs[P] · d_P` over partitions of the `m + m'` legs (domain legs
/// first) with at most `n` blocks. Missing partitions have coefficient zero.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivariantLayer<S> {
    m: usize,
    mprime: usize,
    n: usize,
    coeffs: BTreeMap<SetPartition, S>,
}

impl<S: Scalar> EquivariantLayer<S> {
    /// The zero layer.
    pub fn zero(m: usize, mprime: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("base dimension n must be at least 1"));
        }
        Ok(EquivariantLayer {
            m,
            mprime,
            n,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn new(
        m: usize,
        mprime: usize,
        n: usize,
        coeffs: impl IntoIterator<Item = (SetPartition, S)>,
    ) -> Result<Self> {
        let mut layer = Self::zero(m, mprime, n)?;
        for (p, c) in coeffs {
            layer.set(p, c)?;
        }
        Ok(layer)
    }

    /// Coefficients aligned with `enumerate_partitions(m + m', n)`.
    pub fn from_dense_coeffs(m: usize, mprime: usize, n: usize, coeffs: Vec<S>) -> Result<Self> {
        let parts = enumerate_partitions(m + mprime, n);
        if parts.len() != coeffs.len() {
            return Err(Error::domain(format!(
                "expected {} coefficients, got {}",
                parts.len(),
                coeffs.len()
            )));
        }
        Self::new(m, mprime, n, parts.into_iter().zip(coeffs).filter(|(_, c)| !c.is_zero()))
    }

    pub fn set(&mut self, p: SetPartition, c: S) -> Result<()> {
        if p.len() != self.m + self.mprime {
            return Err(Error::domain(format!(
                "partition {p} has {} elements, layer needs {}",
                p.len(),
                self.m + self.mprime
            )));
        }
        p.check_blocks_at_most(self.n)?;
        self.coeffs.insert(p, c);
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn mprime(&self) -> usize {
        self.mprime
    }
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, p: &SetPartition) -> S {
        self.coeffs.get(p).cloned().unwrap_or_else(S::zero)
    }

    /// Stored coefficients in partition order.
    pub fn coeffs(&self) -> impl Iterator<Item = (&SetPartition, &S)> {
        self.coeffs.iter()
    }

    /// Dimension of the space of layers with this shape.
    pub fn dimension(&self) -> usize {
        enumerate_partitions(self.m + self.mprime, self.n).len()
    }

    /// Block plans for every nonzero coefficient.
    pub fn compile(&self) -> Result<Vec<(BlockPlan, S)>> {
        self.coeffs
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| Ok((BlockPlan::new(p, self.m, self.mprime, self.n)?, c.clone())))
            .collect()
    }

    fn check_input(&self, v: &DenseTensor<S>) -> Result<()> {
        if v.n() != self.n || v.order() != self.m {
            return Err(Error::domain(format!(
                "layer expects n = {}, order {}; got n = {}, order {}",
                self.n,
                self.m,
                v.n(),
                v.order()
            )));
        }
        Ok(())
    }

    /// `Σ_P coeffs[P] · d_P(v)`, each term applied without materializing `d_P`.
    pub fn apply(&self, v: &DenseTensor<S>) -> Result<DenseTensor<S>> {
        self.check_input(v)?;
        apply_compiled(&self.compile()?, self.n, self.mprime, v, ExecPolicy::default())
    }

    /// Applies the layer to a batch of inputs, compiling the plans once.
    pub fn apply_batch(&self, inputs: &[DenseTensor<S>], policy: ExecPolicy) -> Result<Vec<DenseTensor<S>>> {
        let compiled = self.compile()?;
        par::map_items(policy, inputs, |v| {
            self.check_input(v)?;
            apply_compiled(&compiled, self.n, self.mprime, v, ExecPolicy::Sequential)
        })
    }

    /// The layer as an order-`(m + m')` hom-tensor: domain legs first.
    pub fn to_dense(&self, capacity: Capacity) -> Result<DenseTensor<S>> {
        capacity.check(self.n, self.m + self.mprime)?;
        let mut acc = DenseTensor::zeros(self.n, self.m + self.mprime)?;
        for (p, c) in &self.coeffs {
            if !c.is_zero() {
                acc.axpy(c, &diagram_basis_dense(p, self.n)?)?;
            }
        }
        Ok(acc)
    }

    /// Recovers a layer from its hom-tensor. Errors if the tensor is not
    /// `Σₙ`-invariant.
    pub fn from_dense(t: &DenseTensor<S>, m: usize) -> Result<Self> {
        if m > t.order() {
            return Err(Error::domain(format!("m = {m} exceeds tensor order {}", t.order())));
        }
        let coeffs = express_in_diagram_basis(t)?;
        Self::from_dense_coeffs(m, t.order() - m, t.n(), coeffs)
    }

    /// Tensor product of layers: a map `(Rⁿ)^{⊗(m₁+m₂)} → (Rⁿ)^{⊗(m₁'+m₂')}`
    /// whose domain is `(L1 domain, L2 domain)` and codomain
    /// `(L1 codomain, L2 codomain)`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::domain(format!(
                "kron of layers with n = {} and n = {}",
                self.n, other.n
            )));
        }
        let n = self.n;
        let (m, mprime) = (self.m + other.m, self.mprime + other.mprime);
        let (left_pos, right_pos) = kron_positions(self.m, self.mprime, other.m, other.mprime);
        let mut cob: Option<ChangeOfBasis> = None;
        let mut coeffs: BTreeMap<SetPartition, S> = BTreeMap::new();
        for (p1, c1) in &self.coeffs {
            for (p2, c2) in &other.coeffs {
                let c = c1.try_mul(c2)?;
                if c.is_zero() {
                    continue;
                }
                let joined = p1.disjoint_union(p2, &left_pos, &right_pos)?;
                if joined.num_blocks() <= n {
                    add_coeff(&mut coeffs, joined, &c)?;
                    continue;
                }
                // d of an over-full partition is not a basis element; expand it.
                let cob = match &mut cob {
                    Some(cob) => cob,
                    None => cob.insert(ChangeOfBasis::new(m + mprime, n)?),
                };
                let expansion = cob.diagram_in_diagram(&joined)?;
                for (q, &k) in cob.partitions().iter().zip(&expansion) {
                    if k != 0 {
                        add_coeff(&mut coeffs, q.clone(), &c.try_mul(&S::try_from_i64(k)?)?)?;
                    }
                }
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(EquivariantLayer { m, mprime, n, coeffs })
    }
}

fn add_coeff<S: Scalar>(coeffs: &mut BTreeMap<SetPartition, S>, p: SetPartition, c: &S) -> Result<()> {
    let slot = coeffs.entry(p).or_insert_with(S::zero);
    *slot = slot.try_add(c)?;
    Ok(())
}

fn apply_compiled<S: Scalar>(
    compiled: &[(BlockPlan, S)],
    n: usize,
    mprime: usize,
    v: &DenseTensor<S>,
    policy: ExecPolicy,
) -> Result<DenseTensor<S>> {
    let mut acc = DenseTensor::zeros(n, mprime)?;
    for (plan, c) in compiled {
        acc.axpy(c, &apply_fast_with(plan, v, policy)?)?;
    }
    Ok(acc)
}

/// Positions of the legs of the two factors inside the combined leg list
/// `(dom₁, dom₂, cod₁, cod₂)`. Each factor's legs are listed domain first.
fn kron_positions(m1: usize, mp1: usize, m2: usize, mp2: usize) -> (Vec<usize>, Vec<usize>) {
    let cod = m1 + m2;
    let left = (0..m1).chain((0..mp1).map(|j| cod + j)).collect();
    let right = (0..m2).map(|i| m1 + i).chain((0..mp2).map(|j| cod + mp1 + j)).collect();
    (left, right)
}

/// Leg permutation taking `kron(dense(L1), dense(L2))`, whose legs are
/// `(dom₁, cod₁, dom₂, cod₂)`, to the hom-tensor layout of
/// [`EquivariantLayer::kron`].
pub fn kron_leg_permutation(m1: usize, mp1: usize, m2: usize, mp2: usize) -> Permutation {
    let (left, right) = kron_positions(m1, mp1, m2, mp2);
    Permutation::new(left.into_iter().chain(right).collect()).expect("positions form a permutation")
}

/// Dense hom-tensor of `second ∘ first`, contracting the shared legs.
pub fn layer_compose_dense<S: Scalar>(
    second: &EquivariantLayer<S>,
    first: &EquivariantLayer<S>,
    capacity: Capacity,
) -> Result<DenseTensor<S>> {
    if first.mprime != second.m || first.n != second.n {
        return Err(Error::domain(format!(
            "cannot compose a map into order {} (n = {}) with a map from order {} (n = {})",
            first.mprime, first.n, second.m, second.n
        )));
    }
    capacity.check(first.n, first.m + second.mprime)?;
    let d1 = first.to_dense(capacity)?;
    let d2 = second.to_dense(capacity)?;
    let pairs: Vec<(usize, usize)> = (0..first.mprime).map(|k| (first.m + k, k)).collect();
    d1.contract(&d2, &pairs)
}
