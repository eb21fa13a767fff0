//! Dense order-`l` tensors over `(Rⁿ)^{⊗l}` with the diagonal `Σₙ` action.
//!
//! Data is row-major with the last index fastest. Indices are 0-based
//! throughout the library.

use crate::error::{Error, Result};
use crate::par::{self, ExecPolicy};
use crate::perm::Permutation;
use crate::scalar::Scalar;

/// Upper bound on the number of entries a dense tensor may have on the
/// capacity-checked paths (dense oracle, basis materialization).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capacity {
    pub max_entries: u64,
}

impl Capacity {
    pub const DEFAULT_MAX_ENTRIES: u64 = 1 << 26;

    pub fn new(max_entries: u64) -> Self {
        Capacity { max_entries }
    }

    pub fn unlimited() -> Self {
        Capacity {
            max_entries: u64::MAX,
        }
    }

    /// Errors unless `n^order` fits within the bound.
    pub fn check(&self, n: usize, order: usize) -> Result<usize> {
        let entries = (n as u128).checked_pow(order as u32).unwrap_or(u128::MAX);
        if entries > u128::from(self.max_entries) || entries > usize::MAX as u128 {
            return Err(Error::Capacity {
                n,
                order,
                entries,
                limit: self.max_entries,
            });
        }
        Ok(entries as usize)
    }
}

impl Default for Capacity {
    fn default() -> Self {
        Capacity::new(Self::DEFAULT_MAX_ENTRIES)
    }
}

pub(crate) fn checked_len(n: usize, order: usize) -> Result<usize> {
    Capacity::unlimited().check(n, order)
}

/// Row-major strides of an order-`order` tensor with base dimension `n`.
pub(crate) fn strides(n: usize, order: usize) -> Vec<usize> {
    let mut s = vec![1; order];
    for k in (0..order.saturating_sub(1)).rev() {
        s[k] = s[k + 1] * n;
    }
    s
}

/// Odometer over `{0, …, n-1}^order`, last position fastest.
pub(crate) fn for_each_index(n: usize, order: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; order];
    if order > 0 && n == 0 {
        return;
    }
    loop {
        f(&idx);
        let mut k = order;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// All offsets `Σ_k idx_k · strides[k]` for `idx ∈ {0..n-1}^strides.len()`,
/// in odometer order.
pub(crate) fn strided_offsets(n: usize, strides: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(n.pow(strides.len() as u32));
    for_each_index(n, strides.len(), |idx| {
        out.push(idx.iter().zip(strides).map(|(i, s)| i * s).sum());
    });
    out
}

/// Offset into a tensor whose leg `k` has stride `strides[k]`, for the
/// row-major linear position `linear` of an order-`strides.len()` index.
#[inline]
pub(crate) fn remap_offset(mut linear: usize, n: usize, strides: &[usize]) -> usize {
    let mut off = 0;
    for s in strides.iter().rev() {
        off += (linear % n) * s;
        linear /= n;
    }
    off
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor<S> {
    n: usize,
    order: usize,
    data: Vec<S>,
}

impl<S: Scalar> DenseTensor<S> {
    pub fn zeros(n: usize, order: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("base dimension n must be at least 1"));
        }
        let len = checked_len(n, order)?;
        Ok(DenseTensor {
            n,
            order,
            data: vec![S::zero(); len],
        })
    }

    /// Order-0 tensor holding a single scalar.
    pub fn scalar(n: usize, value: S) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("base dimension n must be at least 1"));
        }
        Ok(DenseTensor {
            n,
            order: 0,
            data: vec![value],
        })
    }

    pub fn from_data(n: usize, order: usize, data: Vec<S>) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("base dimension n must be at least 1"));
        }
        let len = checked_len(n, order)?;
        if data.len() != len {
            return Err(Error::domain(format!(
                "expected {len} entries for n = {n}, order = {order}, got {}",
                data.len()
            )));
        }
        Ok(DenseTensor { n, order, data })
    }

    pub fn from_fn(n: usize, order: usize, mut f: impl FnMut(&[usize]) -> S) -> Result<Self> {
        let mut t = Self::zeros(n, order)?;
        let mut pos = 0;
        for_each_index(n, order, |idx| {
            t.data[pos] = f(idx);
            pos += 1;
        });
        Ok(t)
    }

    /// The standard basis tensor `e_{i₁} ⊗ ⋯ ⊗ e_{i_l}`.
    pub fn basis_tensor(n: usize, index: &[usize]) -> Result<Self> {
        let mut t = Self::zeros(n, index.len())?;
        let off = t.offset(index)?;
        t.data[off] = S::one();
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [S] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<S> {
        self.data
    }

    pub fn strides(&self) -> Vec<usize> {
        strides(self.n, self.order)
    }

    pub fn offset(&self, index: &[usize]) -> Result<usize> {
        if index.len() != self.order {
            return Err(Error::domain(format!(
                "index of length {} for a tensor of order {}",
                index.len(),
                self.order
            )));
        }
        let mut off = 0;
        for &i in index {
            if i >= self.n {
                return Err(Error::domain(format!("index {i} out of range for n = {}", self.n)));
            }
            off = off * self.n + i;
        }
        Ok(off)
    }

    pub fn get(&self, index: &[usize]) -> Result<&S> {
        Ok(&self.data[self.offset(index)?])
    }

    /// Indices of the nonzero entries, in row-major order.
    pub fn support(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut pos = 0;
        for_each_index(self.n, self.order, |idx| {
            if !self.data[pos].is_zero() {
                out.push(idx.to_vec());
            }
            pos += 1;
        });
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.order != other.order {
            return Err(Error::domain(format!(
                "shape mismatch: (n = {}, order = {}) vs (n = {}, order = {})",
                self.n, self.order, other.n, other.order
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.with_data(data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.try_sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.with_data(data))
    }

    pub fn scale(&self, c: &S) -> Result<Self> {
        let data = self.data.iter().map(|a| c.try_mul(a)).collect::<Result<Vec<_>>>()?;
        Ok(self.with_data(data))
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: &S, other: &Self) -> Result<()> {
        self.check_same_shape(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = a.try_add(&c.try_mul(b)?)?;
        }
        Ok(())
    }

    fn with_data(&self, data: Vec<S>) -> Self {
        DenseTensor {
            n: self.n,
            order: self.order,
            data,
        }
    }

    /// Maps every entry into another scalar type.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> Result<T>) -> Result<DenseTensor<T>> {
        Ok(DenseTensor {
            n: self.n,
            order: self.order,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// Tensor product `v ⊗ w`: `(v⊗w)[I, J] = v[I]·w[J]`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::domain(format!(
                "kron of tensors with n = {} and n = {}",
                self.n, other.n
            )));
        }
        let order = self.order + other.order;
        checked_len(self.n, order)?;
        let mut data = Vec::with_capacity(self.data.len() * other.data.len());
        for a in &self.data {
            for b in &other.data {
                data.push(a.try_mul(b)?);
            }
        }
        Ok(DenseTensor {
            n: self.n,
            order,
            data,
        })
    }

    /// Rearranges legs: input leg `k` becomes output leg `tau(k)`, i.e.
    /// `out[i₀, …, i_{l-1}] = in[i_{τ(0)}, …, i_{τ(l-1)}]`.
    pub fn permute_legs(&self, tau: &Permutation) -> Result<Self> {
        if tau.len() != self.order {
            return Err(Error::domain(format!(
                "leg permutation on {} points for a tensor of order {}",
                tau.len(),
                self.order
            )));
        }
        let in_strides = self.strides();
        let inv = tau.inverse();
        let src: Vec<usize> = (0..self.order).map(|j| in_strides[inv.apply(j)]).collect();
        let data = (0..self.data.len())
            .map(|pos| self.data[remap_offset(pos, self.n, &src)].clone())
            .collect();
        Ok(self.with_data(data))
    }

    /// Diagonal action: `out[σ(i₀), …, σ(i_{l-1})] = in[i₀, …, i_{l-1}]`.
    pub fn act(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.len() != self.n {
            return Err(Error::domain(format!(
                "permutation of {} points acting on n = {}",
                sigma.len(),
                self.n
            )));
        }
        let inv = sigma.inverse();
        let mut data = Vec::with_capacity(self.data.len());
        let mut src = vec![0; self.order];
        for_each_index(self.n, self.order, |idx| {
            for (s, &i) in src.iter_mut().zip(idx) {
                *s = inv.apply(i);
            }
            let off = src.iter().fold(0, |acc, &i| acc * self.n + i);
            data.push(self.data[off].clone());
        });
        Ok(self.with_data(data))
    }

    /// `Σ_I v[I]·w[I]`.
    pub fn inner(&self, other: &Self) -> Result<S> {
        self.check_same_shape(other)?;
        let mut acc = S::zero();
        for (a, b) in self.data.iter().zip(&other.data) {
            acc = acc.try_add(&a.try_mul(b)?)?;
        }
        Ok(acc)
    }

    /// Whether the tensor is fixed by the two generators `(0 1)` and
    /// `(0 1 … n-1)` of `Σₙ`.
    pub fn is_invariant(&self) -> bool {
        if self.n < 2 {
            return true;
        }
        [Permutation::swap01(self.n), Permutation::cycle(self.n)]
            .iter()
            .all(|g| self.act(g).is_ok_and(|t| t == *self))
    }

    /// Contracts `self` against `other` over the given `(self leg, other leg)`
    /// pairs. Unpaired legs of `self` come first in the result, then unpaired
    /// legs of `other`, each in their original order.
    pub fn contract(&self, other: &Self, pairs: &[(usize, usize)]) -> Result<Self> {
        self.contract_with(other, pairs, ExecPolicy::default())
    }

    pub fn contract_with(&self, other: &Self, pairs: &[(usize, usize)], policy: ExecPolicy) -> Result<Self> {
        self.contract_counted(other, pairs, policy).map(|(t, _)| t)
    }

    /// [`DenseTensor::contract`] that also reports the multiply-adds it ran.
    pub fn contract_counted(
        &self,
        other: &Self,
        pairs: &[(usize, usize)],
        policy: ExecPolicy,
    ) -> Result<(Self, u128)> {
        let spec = ContractSpec::new(self, other, pairs)?;
        let n = self.n;
        let out_len = checked_len(n, spec.free_strides.len())?;
        let entries = par::map_indices(policy, out_len, |pos| {
            let (base_v, base_w) = spec.base_offsets(pos, n);
            let mut acc = S::zero();
            let mut muladds = 0u128;
            for &(dv, dw) in &spec.inner_offsets {
                acc = acc.try_add(&self.data[base_v + dv].try_mul(&other.data[base_w + dw])?)?;
                muladds += 1;
            }
            Ok((acc, muladds))
        })?;
        let muladds = entries.iter().map(|(_, c)| c).sum();
        let t = DenseTensor {
            n,
            order: spec.free_strides.len(),
            data: entries.into_iter().map(|(x, _)| x).collect(),
        };
        Ok((t, muladds))
    }

    /// Number of scalar multiply-adds [`DenseTensor::contract`] performs.
    pub fn contract_muladds(n: usize, left_order: usize, right_order: usize, pairs: usize) -> u128 {
        let n = n as u128;
        n.pow((left_order + right_order - 2 * pairs) as u32) * n.pow(pairs as u32)
    }
}

/// Stride bookkeeping for [`DenseTensor::contract`].
struct ContractSpec {
    /// For each output leg, `(stride in v, stride in w)`; one of them is zero.
    free_strides: Vec<(usize, usize)>,
    /// Offsets contributed by every assignment of the contracted indices.
    inner_offsets: Vec<(usize, usize)>,
}

impl ContractSpec {
    fn new<S: Scalar>(v: &DenseTensor<S>, w: &DenseTensor<S>, pairs: &[(usize, usize)]) -> Result<Self> {
        if v.n != w.n {
            return Err(Error::domain(format!("contracting n = {} with n = {}", v.n, w.n)));
        }
        let mut used_v = vec![false; v.order];
        let mut used_w = vec![false; w.order];
        for &(a, b) in pairs {
            if a >= v.order || b >= w.order {
                return Err(Error::domain(format!("contraction legs ({a}, {b}) out of range")));
            }
            if std::mem::replace(&mut used_v[a], true) || std::mem::replace(&mut used_w[b], true) {
                return Err(Error::domain(format!("contraction leg repeated in ({a}, {b})")));
            }
        }
        let sv = v.strides();
        let sw = w.strides();
        let mut free_strides = Vec::new();
        free_strides.extend((0..v.order).filter(|&k| !used_v[k]).map(|k| (sv[k], 0)));
        free_strides.extend((0..w.order).filter(|&k| !used_w[k]).map(|k| (0, sw[k])));
        checked_len(v.n, pairs.len())?;
        let pv: Vec<usize> = pairs.iter().map(|&(a, _)| sv[a]).collect();
        let pw: Vec<usize> = pairs.iter().map(|&(_, b)| sw[b]).collect();
        let inner_offsets = strided_offsets(v.n, &pv)
            .into_iter()
            .zip(strided_offsets(v.n, &pw))
            .collect();
        Ok(ContractSpec {
            free_strides,
            inner_offsets,
        })
    }

    #[inline]
    fn base_offsets(&self, mut linear: usize, n: usize) -> (usize, usize) {
        let (mut ov, mut ow) = (0, 0);
        for &(sv, sw) in self.free_strides.iter().rev() {
            let i = linear % n;
            linear /= n;
            ov += i * sv;
            ow += i * sw;
        }
        (ov, ow)
    }
}

/// Order-`p` tensor with ones exactly at `(j, …, j)`. For `p = 0` this is
/// the scalar `1`.
pub fn diagonal_tensor<S: Scalar>(n: usize, p: usize) -> Result<DenseTensor<S>> {
    let mut t = DenseTensor::zeros(n, p)?;
    let step: usize = strides(n, p).iter().sum();
    for j in 0..n {
        t.data[j * step] = S::one();
        if p == 0 {
            break;
        }
    }
    Ok(t)
}
