//! Set partitions of `{0, …, l-1}` in restricted-growth-string form,
//! enumeration, the refinement order, and the zeta/Möbius matrices of that
//! order.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A set partition stored as its restricted growth string.
///
/// `rgs[i]` is the block label of element `i`. Labels first appear in the
/// order `0, 1, 2, …`, so blocks are implicitly ordered by their minimum
/// element and two partitions are equal iff their strings are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    rgs: Vec<usize>,
}

impl SetPartition {
    /// Wraps an already-canonical restricted growth string.
    pub fn from_rgs(rgs: Vec<usize>) -> Result<Self> {
        let mut next = 0;
        for (i, &label) in rgs.iter().enumerate() {
            if label > next {
                return Err(Error::domain(format!(
                    "not a restricted growth string: label {label} at position {i} exceeds {next}"
                )));
            }
            if label == next {
                next += 1;
            }
        }
        Ok(SetPartition { rgs })
    }

    /// Canonicalizes an arbitrary labelling: positions share a block iff
    /// their labels are equal.
    pub fn from_labels<T: Eq + std::hash::Hash>(labels: &[T]) -> Self {
        let mut seen: HashMap<&T, usize> = HashMap::with_capacity(labels.len());
        let rgs = labels
            .iter()
            .map(|x| {
                let next = seen.len();
                *seen.entry(x).or_insert(next)
            })
            .collect();
        SetPartition { rgs }
    }

    /// Builds a partition from explicit blocks, which must be nonempty,
    /// disjoint, and cover `0..l`.
    pub fn from_blocks(l: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; l];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::domain("empty block"));
            }
            for &x in block {
                if x >= l || labels[x] != usize::MAX {
                    return Err(Error::domain(format!("element {x} out of range or repeated")));
                }
                labels[x] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::domain("blocks do not cover the ground set"));
        }
        Ok(SetPartition::from_labels(&labels))
    }

    /// The partition of the empty set.
    pub fn empty() -> Self {
        SetPartition { rgs: Vec::new() }
    }

    /// The single-block partition of `{0, …, l-1}`.
    pub fn coarsest(l: usize) -> Self {
        SetPartition { rgs: vec![0; l] }
    }

    /// The all-singletons partition of `{0, …, l-1}`.
    pub fn finest(l: usize) -> Self {
        SetPartition { rgs: (0..l).collect() }
    }

    /// Size of the ground set.
    pub fn len(&self) -> usize {
        self.rgs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rgs.is_empty()
    }

    pub fn rgs(&self) -> &[usize] {
        &self.rgs
    }

    pub fn label(&self, i: usize) -> usize {
        self.rgs[i]
    }

    pub fn num_blocks(&self) -> usize {
        self.rgs.iter().max().map_or(0, |&m| m + 1)
    }

    /// Blocks ordered by minimum element, each listed in increasing order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, &b) in self.rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        blocks
    }

    /// Errors unless the partition may index a basis over base dimension `n`.
    pub fn check_blocks_at_most(&self, n: usize) -> Result<()> {
        let blocks = self.num_blocks();
        if blocks > n {
            Err(Error::BasisIndex {
                partition: self.to_string(),
                blocks,
                n,
            })
        } else {
            Ok(())
        }
    }

    /// Whether every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &SetPartition) -> Result<bool> {
        if self.len() != coarser.len() {
            return Err(Error::domain(format!(
                "partitions of {} and {} elements are incomparable",
                self.len(),
                coarser.len()
            )));
        }
        let mut image = vec![usize::MAX; self.num_blocks()];
        for (&fine, &coarse) in self.rgs.iter().zip(&coarser.rgs) {
            if image[fine] == usize::MAX {
                image[fine] = coarse;
            } else if image[fine] != coarse {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All partitions coarser than or equal to `self` with at most
    /// `max_blocks` blocks, in lexicographic order.
    pub fn coarsenings(&self, max_blocks: usize) -> Vec<SetPartition> {
        // Coarsenings correspond to partitions of the block set.
        let k = self.num_blocks();
        let mut out: Vec<SetPartition> = enumerate_partitions(k, max_blocks.max(1))
            .into_iter()
            .filter(|merge| merge.num_blocks() <= max_blocks)
            .map(|merge| {
                let labels: Vec<usize> = self.rgs.iter().map(|&b| merge.rgs[b]).collect();
                SetPartition::from_labels(&labels)
            })
            .collect();
        out.sort();
        out
    }

    /// The partition of `{0, …, l-1}` placed at positions `positions` of a
    /// larger ground set of size `total`, with `other` filling the remaining
    /// positions. Blocks of the two parts are kept disjoint.
    pub fn disjoint_union(&self, other: &SetPartition, positions: &[usize], other_positions: &[usize]) -> Result<Self> {
        if positions.len() != self.len() || other_positions.len() != other.len() {
            return Err(Error::domain("position lists do not match partition sizes"));
        }
        let total = self.len() + other.len();
        let offset = self.num_blocks();
        let mut labels = vec![usize::MAX; total];
        for (i, &pos) in positions.iter().enumerate() {
            set_label(&mut labels, pos, self.rgs[i])?;
        }
        for (i, &pos) in other_positions.iter().enumerate() {
            set_label(&mut labels, pos, other.rgs[i] + offset)?;
        }
        Ok(SetPartition::from_labels(&labels))
    }
}

fn set_label(labels: &mut [usize], pos: usize, label: usize) -> Result<()> {
    match labels.get_mut(pos) {
        Some(slot) if *slot == usize::MAX => {
            *slot = label;
            Ok(())
        }
        _ => Err(Error::domain(format!("position {pos} out of range or repeated"))),
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, label) in self.rgs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{label}")?;
        }
        Ok(())
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    /// Parses space-separated labels such as `"0 0 1 2"`. Non-canonical
    /// strings are rejected.
    fn from_str(s: &str) -> Result<Self> {
        let rgs = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| Error::parse(format!("bad partition label {tok:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        SetPartition::from_rgs(rgs).map_err(|e| match e {
            Error::Domain(msg) => Error::parse(format!("{s:?} is not canonical: {msg}")),
            other => other,
        })
    }
}

/// The partition of positions induced by equal entries of a tuple with
/// values in `{1, …, n}`.
pub fn partition_of_tuple(tuple: &[usize], n: usize) -> Result<SetPartition> {
    if let Some(&bad) = tuple.iter().find(|&&x| x == 0 || x > n) {
        return Err(Error::domain(format!("tuple entry {bad} outside 1..={n}")));
    }
    Ok(SetPartition::from_labels(tuple))
}

/// All partitions of `{0, …, l-1}` with at most `max_blocks` blocks, in
/// lexicographic order of their restricted growth strings.
pub fn enumerate_partitions(l: usize, max_blocks: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    let mut rgs = Vec::with_capacity(l);
    fn rec(l: usize, max_blocks: usize, blocks: usize, rgs: &mut Vec<usize>, out: &mut Vec<SetPartition>) {
        if rgs.len() == l {
            out.push(SetPartition { rgs: rgs.clone() });
            return;
        }
        let limit = if blocks < max_blocks { blocks + 1 } else { blocks };
        for label in 0..limit {
            rgs.push(label);
            rec(l, max_blocks, blocks.max(label + 1), rgs, out);
            rgs.pop();
        }
    }
    if l == 0 || max_blocks > 0 {
        rec(l, max_blocks, 0, &mut rgs, &mut out);
    }
    out
}

/// Number of partitions of an `l`-set into at most `max_blocks` blocks,
/// by the Stirling recurrence `S(i, k) = k·S(i-1, k) + S(i-1, k-1)`.
pub fn count_partitions(l: usize, max_blocks: usize) -> u128 {
    let kmax = max_blocks.min(l);
    let mut row = vec![0u128; kmax + 1];
    row[0] = 1;
    for _ in 0..l {
        for k in (1..=kmax).rev() {
            row[k] = (k as u128) * row[k] + row[k - 1];
        }
        row[0] = 0;
    }
    row.iter().sum()
}

/// Incidence matrix of the refinement order and its integer inverse over
/// the partitions with at most `max_blocks` blocks.
/// Dense integer matrix stored by rows.
pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaMoebius {
    /// Row/column index set, in [`enumerate_partitions`] order.
    pub partitions: Vec<SetPartition>,
    /// `zeta[p][q] = 1` iff `q` coarsens `p`.
    pub zeta: IntMatrix,
    /// `zeta · moebius = I`.
    pub moebius: IntMatrix,
}

impl ZetaMoebius {
    pub fn new(l: usize, max_blocks: usize) -> Result<Self> {
        let partitions = enumerate_partitions(l, max_blocks);
        let index: HashMap<&SetPartition, usize> =
            partitions.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let size = partitions.len();

        let mut zeta = vec![vec![0i64; size]; size];
        for (i, p) in partitions.iter().enumerate() {
            for q in p.coarsenings(max_blocks) {
                zeta[i][index[&q]] = 1;
            }
        }

        // Solve Z·M = I column by column, visiting rows coarsest-first:
        // row p only involves columns that coarsen p, which are already solved.
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by_key(|&i| (partitions[i].num_blocks(), i));
        let mut moebius = vec![vec![0i64; size]; size];
        #[allow(clippy::needless_range_loop)]
        for col in 0..size {
            for &row in &order {
                let mut acc: i64 = i64::from(row == col);
                for (k, &z) in zeta[row].iter().enumerate() {
                    if z != 0 && k != row {
                        acc = acc
                            .checked_sub(moebius[k][col])
                            .ok_or(Error::Overflow)?;
                    }
                }
                moebius[row][col] = acc;
            }
        }
        Ok(ZetaMoebius {
            partitions,
            zeta,
            moebius,
        })
    }

    pub fn index_of(&self, p: &SetPartition) -> Option<usize> {
        self.partitions.binary_search(p).ok()
    }
}

/// Convenience wrapper returning `(Z, M)`.
pub fn zeta_and_moebius(l: usize, max_blocks: usize) -> Result<(IntMatrix, IntMatrix)> {
    let zm = ZetaMoebius::new(l, max_blocks)?;
    Ok((zm.zeta, zm.moebius))
}
