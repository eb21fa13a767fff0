//! Applying a diagram tensor `d_P` as a map `(Rⁿ)^{⊗m} → (Rⁿ)^{⊗m'}`
//! without materializing it.
//!
//! The blocks of `P` (a partition of the `m + m'` legs, domain legs first)
//! fall into three classes:
//!
//! * S-blocks lie in the domain. Contracting with their diagonal factor sums
//!   the input along the block's diagonal: `n` terms per block, not `n^|S|`.
//! * T-blocks straddle domain and codomain. Their factor copies the input's
//!   diagonal entry on the `T'` legs to the diagonal of the `T''` legs, which
//!   is pure indexing.
//! * B-blocks lie in the codomain. Their factor broadcasts the intermediate
//!   result along the block's diagonal, writing copies with zeros elsewhere.
//!
//! Leg permutations on both sides make every block contiguous; here they are
//! realized by stride arithmetic instead of copying data.

use serde::Serialize;

use crate::basis::diagram_basis_dense;
use crate::error::{Error, Result};
use crate::par::{self, ExecPolicy};
use crate::partition::SetPartition;
use crate::perm::Permutation;
use crate::scalar::Scalar;
use crate::tensor::{checked_len, strided_offsets, strides, Capacity, DenseTensor};

/// A domain/codomain split of a straddling block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferBlock {
    /// Domain legs, `0..m`.
    pub domain: Vec<usize>,
    /// Codomain legs, `0..m'`.
    pub codomain: Vec<usize>,
}

/// Classification of a partition's blocks for fast application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPlan {
    partition: SetPartition,
    m: usize,
    mprime: usize,
    n: usize,
    /// Blocks inside the domain, as domain legs `0..m`.
    s_blocks: Vec<Vec<usize>>,
    t_blocks: Vec<TransferBlock>,
    /// Blocks inside the codomain, as codomain legs `0..m'`.
    b_blocks: Vec<Vec<usize>>,
    /// Input leg `k` moves to position `input_perm(k)` of the contiguous
    /// layout `S₁ … S_a T'₁ … T'_b`.
    input_perm: Permutation,
    /// Position `j` of the contiguous layout `T''₁ … T''_b B₁ … B_c` is
    /// codomain leg `output_perm(j)`.
    output_perm: Permutation,
}

impl BlockPlan {
    /// Classifies the blocks of `p`, a partition of `{0, …, m+m'-1}` whose
    /// first `m` elements are domain legs.
    pub fn new(p: &SetPartition, m: usize, mprime: usize, n: usize) -> Result<Self> {
        if p.len() != m + mprime {
            return Err(Error::domain(format!(
                "partition of {} elements cannot describe a map with m = {m}, m' = {mprime}",
                p.len()
            )));
        }
        if n == 0 {
            return Err(Error::domain("base dimension n must be at least 1"));
        }
        p.check_blocks_at_most(n)?;

        let mut s_blocks = Vec::new();
        let mut t_blocks = Vec::new();
        let mut b_blocks = Vec::new();
        for block in p.blocks() {
            let (dom, cod): (Vec<usize>, Vec<usize>) = block.iter().partition(|&&leg| leg < m);
            let cod: Vec<usize> = cod.into_iter().map(|leg| leg - m).collect();
            match (dom.is_empty(), cod.is_empty()) {
                (false, true) => s_blocks.push(dom),
                (false, false) => t_blocks.push(TransferBlock {
                    domain: dom,
                    codomain: cod,
                }),
                (true, false) => b_blocks.push(cod),
                (true, true) => unreachable!("blocks are nonempty"),
            }
        }

        let input_layout: Vec<usize> = s_blocks
            .iter()
            .flatten()
            .chain(t_blocks.iter().flat_map(|t| &t.domain))
            .copied()
            .collect();
        let output_layout: Vec<usize> = t_blocks
            .iter()
            .flat_map(|t| &t.codomain)
            .chain(b_blocks.iter().flatten())
            .copied()
            .collect();

        Ok(BlockPlan {
            partition: p.clone(),
            m,
            mprime,
            n,
            s_blocks,
            t_blocks,
            b_blocks,
            input_perm: Permutation::new(input_layout)?.inverse(),
            output_perm: Permutation::new(output_layout)?,
        })
    }

    pub fn partition(&self) -> &SetPartition {
        &self.partition
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
    pub fn s_blocks(&self) -> &[Vec<usize>] {
        &self.s_blocks
    }
    pub fn t_blocks(&self) -> &[TransferBlock] {
        &self.t_blocks
    }
    pub fn b_blocks(&self) -> &[Vec<usize>] {
        &self.b_blocks
    }
    pub fn input_perm(&self) -> &Permutation {
        &self.input_perm
    }
    pub fn output_perm(&self) -> &Permutation {
        &self.output_perm
    }

    /// Combined stride of each block's legs: stepping the block's common
    /// index by one moves this far in the tensor.
    fn diagonal_strides(n: usize, order: usize, blocks: impl Iterator<Item = Vec<usize>>) -> Vec<usize> {
        let s = strides(n, order);
        blocks.map(|b| b.iter().map(|&leg| s[leg]).sum()).collect()
    }

    fn check_input<S: Scalar>(&self, v: &DenseTensor<S>) -> Result<()> {
        if v.n() != self.n || v.order() != self.m {
            return Err(Error::domain(format!(
                "plan expects n = {}, order {}; got n = {}, order {}",
                self.n,
                self.m,
                v.n(),
                v.order()
            )));
        }
        Ok(())
    }
}

/// Shorthand for [`BlockPlan::new`].
pub fn plan(p: &SetPartition, m: usize, mprime: usize, n: usize) -> Result<BlockPlan> {
    BlockPlan::new(p, m, mprime, n)
}

/// Scalar operations performed by one application.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpCounts {
    /// Accumulations in the S-block summation.
    pub adds: u128,
    pub muls: u128,
    /// Entries moved by the transfer when there is nothing to sum.
    pub copies: u128,
    /// Entries written by the broadcast.
    pub writes: u128,
}

impl OpCounts {
    /// Multiply-add-equivalent arithmetic: additions plus multiplications.
    pub fn muladds(&self) -> u128 {
        self.adds + self.muls
    }
}

/// Predicted cost of [`apply_fast`] versus [`apply_dense_oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CostComparison {
    pub fast_muladds: u128,
    pub dense_muladds: u128,
    pub fast: OpCounts,
}

/// Operation counts of [`apply_fast`] and of the dense contraction for
/// `plan` at its base dimension.
pub fn op_count(plan: &BlockPlan) -> CostComparison {
    let n = plan.n as u128;
    let (a, b, c) = (
        plan.s_blocks.len() as u32,
        plan.t_blocks.len() as u32,
        plan.b_blocks.len() as u32,
    );
    let fast = OpCounts {
        adds: if a > 0 { n.pow(a + b) } else { 0 },
        muls: 0,
        copies: if a > 0 { 0 } else { n.pow(b) },
        writes: n.pow(b + c),
    };
    CostComparison {
        fast_muladds: fast.muladds(),
        dense_muladds: DenseTensor::<i64>::contract_muladds(plan.n, plan.m, plan.m + plan.mprime, plan.m),
        fast,
    }
}

/// Applies `d_P` to `v` using sums, index transfers, and broadcasts.
pub fn apply_fast<S: Scalar>(plan: &BlockPlan, v: &DenseTensor<S>) -> Result<DenseTensor<S>> {
    apply_fast_counted(plan, v, ExecPolicy::default()).map(|(t, _)| t)
}

pub fn apply_fast_with<S: Scalar>(plan: &BlockPlan, v: &DenseTensor<S>, policy: ExecPolicy) -> Result<DenseTensor<S>> {
    apply_fast_counted(plan, v, policy).map(|(t, _)| t)
}

/// [`apply_fast`] that also reports the operations it executed.
pub fn apply_fast_counted<S: Scalar>(
    plan: &BlockPlan,
    v: &DenseTensor<S>,
    policy: ExecPolicy,
) -> Result<(DenseTensor<S>, OpCounts)> {
    plan.check_input(v)?;
    let n = plan.n;
    let mut counts = OpCounts::default();

    // Sum over the S-block diagonals and read the T' diagonals in one pass:
    // x[t₁…t_b] = Σ_{j₁…j_a} v[j₁^{|S₁|} … j_a^{|S_a|} t₁^{|T'₁|} … t_b^{|T'_b|}]
    // (legs shown in the contiguous layout; the strides undo input_perm).
    let s_strides = BlockPlan::diagonal_strides(n, plan.m, plan.s_blocks.iter().cloned());
    let t_in_strides = BlockPlan::diagonal_strides(n, plan.m, plan.t_blocks.iter().map(|t| t.domain.clone()));
    let sum_offsets = strided_offsets(n, &s_strides);
    let summing = !plan.s_blocks.is_empty();
    let t_len = checked_len(n, plan.t_blocks.len())?;
    let data = v.data();
    let gathered = par::map_indices(policy, t_len, |pos| {
        let base = crate::tensor::remap_offset(pos, n, &t_in_strides);
        if !summing {
            return Ok((data[base].clone(), 0u128));
        }
        let mut acc = S::zero();
        for &off in &sum_offsets {
            acc = acc.try_add(&data[base + off])?;
        }
        Ok::<_, Error>((acc, sum_offsets.len() as u128))
    })?;
    if summing {
        counts.adds = gathered.iter().map(|(_, adds)| adds).sum();
    } else {
        counts.copies = gathered.len() as u128;
    }

    // Broadcast: write x[t] at every output index constant on each T'' and B
    // block, zeros elsewhere.
    let mut out = DenseTensor::<S>::zeros(n, plan.mprime)?;
    let t_out_strides = BlockPlan::diagonal_strides(n, plan.mprime, plan.t_blocks.iter().map(|t| t.codomain.clone()));
    let b_strides = BlockPlan::diagonal_strides(n, plan.mprime, plan.b_blocks.iter().cloned());
    let broadcast_offsets = strided_offsets(n, &b_strides);
    let out_data = out.data_mut();
    for (pos, (x, _)) in gathered.into_iter().enumerate() {
        let base = crate::tensor::remap_offset(pos, n, &t_out_strides);
        for &off in &broadcast_offsets {
            out_data[base + off] = x.clone();
            counts.writes += 1;
        }
    }
    Ok((out, counts))
}

/// Applies one plan to many inputs, splitting the batch across threads when
/// the policy allows.
pub fn apply_fast_batch<S: Scalar>(
    plan: &BlockPlan,
    inputs: &[DenseTensor<S>],
    policy: ExecPolicy,
) -> Result<Vec<DenseTensor<S>>> {
    par::map_items(policy, inputs, |v| apply_fast_with(plan, v, ExecPolicy::Sequential))
}

/// Reference semantics: materializes `d_P` and contracts the input against
/// its first `m` legs.
pub fn apply_dense_oracle<S: Scalar>(
    p: &SetPartition,
    m: usize,
    mprime: usize,
    n: usize,
    v: &DenseTensor<S>,
    capacity: Capacity,
) -> Result<DenseTensor<S>> {
    apply_dense_oracle_counted(p, m, mprime, n, v, capacity, ExecPolicy::default()).map(|(t, _)| t)
}

/// [`apply_dense_oracle`] that also reports the multiply-adds executed by the
/// contraction.
pub fn apply_dense_oracle_counted<S: Scalar>(
    p: &SetPartition,
    m: usize,
    mprime: usize,
    n: usize,
    v: &DenseTensor<S>,
    capacity: Capacity,
    policy: ExecPolicy,
) -> Result<(DenseTensor<S>, u128)> {
    // Validates shapes and the block bound exactly as the fast path does.
    BlockPlan::new(p, m, mprime, n)?.check_input(v)?;
    capacity.check(n, m + mprime)?;
    let d = diagram_basis_dense::<S>(p, n)?;
    let pairs: Vec<(usize, usize)> = (0..m).map(|k| (k, k)).collect();
    v.contract_counted(&d, &pairs, policy)
}
