//! Reuse schedule for computing all `d` subpool maxes of order `d - 1`.
//!
//! The order-`(d-1)` subpools drop one index each, so any contiguous slice of
//! positions `(i1..=i2)` taken across all of them yields only `i2 - i1 + 2`
//! distinct tuples. Halving the positions repeatedly (overlapping by one when
//! the length is odd) gives per-layer tuple sets whose sizes are far below
//! the naive `d × 2^{…}` count, and every tuple is the union of two tuples
//! from the layer below.

use std::collections::{BTreeMap, BTreeSet};

use super::NetworkError;
use crate::subpool::choose;

/// `⌈log₂(d - 1)⌉`.
pub fn depth(d: usize) -> usize {
    let n = d - 1;
    (usize::BITS - (n - 1).leading_zeros()) as usize * usize::from(n > 1)
}

/// `⌈(d - 1) / 2^j⌉`: tuple length after `j` halvings.
pub fn zeta(d: usize, j: usize) -> usize {
    (d - 1).div_ceil(1 << j)
}

fn floor_log2(n: usize) -> usize {
    (usize::BITS - 1 - n.leading_zeros()) as usize
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct WidthSchedule {
    pub depth: usize,
    /// `w(d, j)` for `j = 1..=depth`, counted in carried values.
    pub widths: Vec<usize>,
}

impl WidthSchedule {
    /// Layers before the last one, whose order-`(d-1)` maxes feed the readout.
    pub fn hidden_widths(&self) -> &[usize] {
        &self.widths[..self.widths.len() - 1]
    }
}

/// Closed-form layer widths of the `{0, d-1}` network.
pub fn width_schedule(d: usize) -> Result<WidthSchedule, NetworkError> {
    if d < 3 {
        return Err(NetworkError::TooSmall { d, min: 3 });
    }
    let depth = depth(d);
    let widths = (1..=depth)
        .map(|j| {
            if j == 1 {
                (1 << floor_log2(d - 2)) + d - 1
            } else {
                (1 << (depth - j)) * (1 + zeta(d, depth - j))
            }
        })
        .collect();
    Ok(WidthSchedule { depth, widths })
}

/// `C(d, 2), …, C(d, d-2)`: distinct subpool maxes of each intermediate order
/// held in the hidden layers of a full-order estimator. The order-`(d-1)`
/// maxes feed the readout and are not listed, except at `d = 3` where they
/// are the only intermediate layer.
pub fn full_estimator_widths(d: usize) -> Result<Vec<u128>, NetworkError> {
    if !(3..=127).contains(&d) {
        return Err(NetworkError::TooSmall { d, min: 3 });
    }
    Ok((2..=(d - 2).max(2)).map(|r| choose(d, r)).collect())
}

/// One layer of the schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleLayer {
    /// Inclusive 1-based position ranges into the order-`(d-1)` tuples.
    pub splits: Vec<(usize, usize)>,
    /// Distinct index tuples, sorted lexicographically.
    pub tuples: Vec<Vec<usize>>,
    /// How many (final tuple, split) cells produce each tuple.
    pub occurrences: Vec<usize>,
    /// Indices into the previous layer (or the inputs, for layer 1) of the two
    /// tuples whose union forms each tuple.
    pub parents: Vec<(usize, usize)>,
}

impl ScheduleLayer {
    pub fn width(&self) -> usize {
        self.tuples.len()
    }

    /// Tuples shared by more than one cell.
    pub fn repeated(&self) -> usize {
        self.occurrences.iter().filter(|&&n| n > 1).count()
    }

    pub fn unique(&self) -> usize {
        self.width() - self.repeated()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleSchedule {
    pub d: usize,
    pub depth: usize,
    /// `layers[j - 1]` is layer `j`.
    pub layers: Vec<ScheduleLayer>,
}

/// The order-`(d-1)` subpools in the row order used for display: dropping
/// `d`, then `d - 1`, …, then `1`.
pub fn final_tuples(d: usize) -> Vec<Vec<usize>> {
    (1..=d).rev().map(|drop| (1..=d).filter(|&i| i != drop).collect()).collect()
}

fn split_positions(d: usize, depth: usize) -> Vec<BTreeSet<(usize, usize)>> {
    let mut out = vec![BTreeSet::from([(1, d - 1)])];
    for j in 1..depth {
        let s = zeta(d, j);
        let next = out
            .last()
            .expect("seeded")
            .iter()
            .flat_map(|&(a1, a2)| [(a1, a1 + s - 1), (a2 + 1 - s, a2)])
            .collect();
        out.push(next);
    }
    out.reverse();
    out
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let set: BTreeSet<usize> = a.iter().chain(b).copied().collect();
    set.into_iter().collect()
}

/// Builds and validates the schedule: layer sizes against [`width_schedule`],
/// the two-parent property, and the final layer.
pub fn tuple_schedule(d: usize) -> Result<TupleSchedule, NetworkError> {
    let widths = width_schedule(d)?;
    let depth = widths.depth;
    let finals = final_tuples(d);
    let mut previous: Vec<Vec<usize>> = (1..=d).map(|i| vec![i]).collect();
    let mut layers = Vec::with_capacity(depth);
    for (j0, splits) in split_positions(d, depth).into_iter().enumerate() {
        let layer_no = j0 + 1;
        let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for t in &finals {
            for &(i1, i2) in &splits {
                *counts.entry(t[i1 - 1..i2].to_vec()).or_default() += 1;
            }
        }
        let (tuples, occurrences): (Vec<_>, Vec<_>) = counts.into_iter().unzip();
        let expected = widths.widths[j0];
        if tuples.len() != expected {
            return Err(NetworkError::Schedule {
                layer: layer_no,
                reason: format!("{} tuples but the width formula gives {expected}", tuples.len()),
            });
        }
        let parents = tuples
            .iter()
            .map(|t| {
                smallest_parent_pair(t, &previous).ok_or_else(|| NetworkError::Schedule {
                    layer: layer_no,
                    reason: format!("tuple {t:?} is not the union of two tuples of the previous layer"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        previous = tuples.clone();
        layers.push(ScheduleLayer { splits: splits.into_iter().collect(), tuples, occurrences, parents });
    }
    let mut expected_final = finals;
    expected_final.sort();
    if previous != expected_final {
        return Err(NetworkError::Schedule { layer: depth, reason: "final layer is not the d subpools of size d-1".into() });
    }
    Ok(TupleSchedule { d, depth, layers })
}

/// Lexicographically smallest `(p, q)`, `p ≤ q`, with `prev[p] ∪ prev[q] = t`.
/// `prev` must be sorted.
fn smallest_parent_pair(t: &[usize], prev: &[Vec<usize>]) -> Option<(usize, usize)> {
    let inside: Vec<usize> = (0..prev.len()).filter(|&i| prev[i].iter().all(|v| t.binary_search(v).is_ok())).collect();
    for (k, &p) in inside.iter().enumerate() {
        for &q in &inside[k..] {
            if union(&prev[p], &prev[q]) == t {
                return Some((p, q));
            }
        }
    }
    None
}

impl TupleSchedule {
    pub fn layer(&self, j: usize) -> &ScheduleLayer {
        &self.layers[j - 1]
    }

    pub fn widths(&self) -> Vec<usize> {
        self.layers.iter().map(ScheduleLayer::width).collect()
    }

    /// Human-readable split table for layer `j`, one row per order-`(d-1)`
    /// subpool, 1-based. Blocks that are shared with another row are wrapped
    /// in brackets; others in parentheses.
    pub fn split_table(&self, j: usize) -> String {
        let layer = self.layer(j);
        let mut out = String::new();
        for t in final_tuples(self.d) {
            let cells: Vec<String> = layer
                .splits
                .iter()
                .map(|&(i1, i2)| {
                    let block = &t[i1 - 1..i2];
                    let idx = layer.tuples.binary_search_by(|x| x.as_slice().cmp(block)).expect("tuple present");
                    let body = block.iter().map(|v| format!("{v:>2}")).collect::<Vec<_>>().join(" ");
                    if layer.occurrences[idx] > 1 {
                        format!("[{body}]")
                    } else {
                        format!("({body})")
                    }
                })
                .collect();
            out.push_str(&cells.join(" | "));
            out.push('\n');
        }
        out
    }
}
