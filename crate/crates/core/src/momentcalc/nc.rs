//! Explicit enumeration of non-crossing partitions.
//!
//! The free moment-cumulant formula `m_n = Σ_{π ∈ NC(n)} Π_{B ∈ π} κ_{|B|}`
//! evaluated by brute force. Used as an oracle for the transforms in the
//! parent module; it shares no code with them.

use std::collections::BTreeMap;

use super::{CumulantVector, MomentVector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest order the oracle accepts; `|NC(14)|` is already 2 674 440.
pub const NC_ORACLE_MAX_ORDER: usize = 14;

/// Calls `visit` with the blocks of every non-crossing partition of
/// `{0, .., n-1}`. Blocks are listed in the order they were opened.
pub fn for_each_noncrossing_partition<F: FnMut(&[Vec<usize>])>(n: usize, mut visit: F) {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut pending: Vec<(usize, usize)> = if n > 0 { vec![(0, n)] } else { vec![] };
    fill(&mut pending, &mut blocks, &mut visit);
}

// `pending` holds half-open intervals of positions still to be partitioned.
// The first element of an interval opens a block; every choice of further
// elements for that block splits the rest into independent gaps.
fn fill<F: FnMut(&[Vec<usize>])>(
    pending: &mut Vec<(usize, usize)>,
    blocks: &mut Vec<Vec<usize>>,
    visit: &mut F,
) {
    let Some((start, end)) = pending.pop() else {
        visit(blocks);
        return;
    };
    blocks.push(vec![start]);
    extend_block(start + 1, end, pending, blocks, visit);
    blocks.pop();
    pending.push((start, end));
}

fn extend_block<F: FnMut(&[Vec<usize>])>(
    from: usize,
    end: usize,
    pending: &mut Vec<(usize, usize)>,
    blocks: &mut Vec<Vec<usize>>,
    visit: &mut F,
) {
    // close the block: the tail (from..end) becomes one gap
    let depth = pending.len();
    if from < end {
        pending.push((from, end));
    }
    fill(pending, blocks, visit);
    pending.truncate(depth);

    // or add element j; the gap from..j is filled independently
    for j in from..end {
        let depth = pending.len();
        if from < j {
            pending.push((from, j));
        }
        blocks.last_mut().expect("open block").push(j);
        extend_block(j + 1, end, pending, blocks, visit);
        blocks.last_mut().expect("open block").pop();
        pending.truncate(depth);
    }
}

/// Two blocks cross when `a < b < c < d` with `a, c` in one and `b, d` in the other.
pub fn is_noncrossing(blocks: &[Vec<usize>]) -> bool {
    for (i, p) in blocks.iter().enumerate() {
        for q in blocks.iter().skip(i + 1) {
            for &a in p {
                for &c in p {
                    if c <= a {
                        continue;
                    }
                    let inside = q.iter().any(|&b| a < b && b < c);
                    let outside = q.iter().any(|&d| d < a || d > c);
                    if inside && outside {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Number of non-crossing partitions of each block-size type.
pub fn block_type_counts(n: usize) -> BTreeMap<Vec<usize>, u64> {
    let mut counts = BTreeMap::new();
    let mut sizes = Vec::new();
    for_each_noncrossing_partition(n, |blocks| {
        sizes.clear();
        sizes.extend(blocks.iter().map(Vec::len));
        sizes.sort_unstable();
        *counts.entry(sizes.clone()).or_insert(0) += 1;
    });
    counts
}

/// Moments from free cumulants by summing over `NC(n)` for each `n ≤ N`.
pub fn nc_moments_oracle<T: Scalar>(kappa: &CumulantVector<T>) -> Result<MomentVector<T>> {
    let order = kappa.order();
    if order > NC_ORACLE_MAX_ORDER {
        return Err(Error::OrderTooLarge {
            requested: order,
            limit: NC_ORACLE_MAX_ORDER,
        });
    }
    let moments = (1..=order)
        .map(|n| {
            block_type_counts(n)
                .into_iter()
                .fold(T::zero(), |acc, (sizes, count)| {
                    let term = sizes
                        .iter()
                        .fold(T::from_i64(count as i64), |p, &s| p * kappa.get(s));
                    acc + term
                })
        })
        .collect();
    Ok(MomentVector::new(moments))
}
