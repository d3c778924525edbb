//! Exact nearest-neighbor search on pooled and single point sets.
//!
//! All neighbor relations in the crate go through this module. Candidates are
//! ordered by `(squared distance, global index)`, so equal distances are won by
//! the smaller index. In a pooled search empirical points take the indices
//! `0..e.len()` and generated points follow from `e.len()`.

mod brute;
mod kdtree;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::point::{check_k, Label, PointSet};

pub use brute::BruteForce;
pub use kdtree::KdTree;

/// Squared Euclidean distance. Both search backends call this exact function so
/// their comparisons agree bit for bit.
#[inline]
pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let t = x - y;
            t * t
        })
        .sum()
}

/// Backend used to answer neighbor queries. Both return identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    /// All-pairs scan; the reference implementation.
    BruteForce,
    #[default]
    KdTree,
}

/// Result of one k-nearest-neighbor query: the chosen neighbors and how many
/// further candidates sat exactly at the k-th distance.
#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct QueryResult {
    /// `(squared distance, index)`, ascending.
    pub hits: Vec<(f64, usize)>,
    pub ties_excluded: usize,
}

/// Bounded candidate list kept sorted by `(d2, index)`.
#[derive(Debug)]
pub(crate) struct KBest {
    k: usize,
    items: Vec<(f64, usize)>,
}

impl KBest {
    pub(crate) fn new(k: usize) -> Self {
        Self {
            k,
            items: Vec::with_capacity(k + 1),
        }
    }

    /// Squared radius beyond which no candidate can enter the list.
    #[inline]
    pub(crate) fn bound(&self) -> f64 {
        if self.items.len() < self.k {
            f64::INFINITY
        } else {
            self.items[self.k - 1].0
        }
    }

    #[inline]
    pub(crate) fn offer(&mut self, d2: f64, index: usize) {
        if self.items.len() == self.k {
            let (wd, wi) = self.items[self.k - 1];
            if d2 > wd || (d2 == wd && index > wi) {
                return;
            }
            self.items.pop();
        }
        let pos = self
            .items
            .partition_point(|&(d, i)| d < d2 || (d == d2 && i < index));
        self.items.insert(pos, (d2, index));
    }

    pub(crate) fn into_items(self) -> Vec<(f64, usize)> {
        self.items
    }
}

/// A neighbor search structure over a fixed set of points.
pub(crate) trait NeighborIndex: Sync {
    /// The `k` nearest points to `query`, skipping index `exclude`.
    fn knn(&self, query: &[f64], k: usize, exclude: Option<usize>) -> QueryResult;
}

fn build<'a>(
    method: SearchMethod,
    coords: &'a [f64],
    dim: usize,
) -> Box<dyn NeighborIndex + 'a> {
    match method {
        SearchMethod::BruteForce => Box::new(BruteForce::new(coords, dim)),
        SearchMethod::KdTree => Box::new(KdTree::new(coords, dim)),
    }
}

/// One entry in a neighbor list.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Neighbor {
    /// Global index into the pooled set.
    pub index: usize,
    pub distance: f64,
    pub source: Label,
}

/// The k nearest neighbors of every point of a pooled set `E ∪ G`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborTable {
    k: usize,
    empirical_len: usize,
    entries: Vec<Neighbor>,
    ties_at_cutoff: Vec<usize>,
}

impl NeighborTable {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of queries, i.e. the size of the pooled set.
    pub fn len(&self) -> usize {
        self.ties_at_cutoff.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ties_at_cutoff.is_empty()
    }

    /// Number of empirical points; queries `0..empirical_len()` are empirical.
    pub fn empirical_len(&self) -> usize {
        self.empirical_len
    }

    pub fn source_of(&self, index: usize) -> Label {
        if index < self.empirical_len {
            Label::Empirical
        } else {
            Label::Generated
        }
    }

    /// Neighbors of query `q`, nearest first.
    pub fn neighbors(&self, q: usize) -> &[Neighbor] {
        &self.entries[q * self.k..(q + 1) * self.k]
    }

    /// Candidates at exactly the k-th distance of query `q` that were left out.
    pub fn ties_at_cutoff(&self, q: usize) -> usize {
        self.ties_at_cutoff[q]
    }

    /// Queries where a tie at the cutoff could have changed the neighbor list.
    pub fn tie_count(&self) -> usize {
        self.ties_at_cutoff.iter().filter(|&&t| t > 0).count()
    }

    /// Count of neighbors of `q` that share its source set.
    pub fn same_source_count(&self, q: usize) -> usize {
        let own = self.source_of(q);
        self.neighbors(q).iter().filter(|n| n.source == own).count()
    }
}

/// k nearest neighbors of every point in `e ∪ g`, self excluded.
pub fn knn_pooled(e: &PointSet, g: &PointSet, k: usize) -> Result<NeighborTable> {
    knn_pooled_with(e, g, k, SearchMethod::default())
}

pub fn knn_pooled_with(
    e: &PointSet,
    g: &PointSet,
    k: usize,
    method: SearchMethod,
) -> Result<NeighborTable> {
    e.check_same_dim(g)?;
    let n = e.len() + g.len();
    check_k(k, n - 1)?;
    let dim = e.dim();
    let mut pooled = Vec::with_capacity(n * dim);
    pooled.extend_from_slice(e.as_flat());
    pooled.extend_from_slice(g.as_flat());
    let index = build(method, &pooled, dim);
    let results: Vec<QueryResult> = (0..n)
        .into_par_iter()
        .map(|q| index.knn(&pooled[q * dim..(q + 1) * dim], k, Some(q)))
        .collect();

    let empirical_len = e.len();
    let mut entries = Vec::with_capacity(n * k);
    let mut ties_at_cutoff = Vec::with_capacity(n);
    for r in results {
        debug_assert_eq!(r.hits.len(), k);
        entries.extend(r.hits.into_iter().map(|(d2, index)| Neighbor {
            index,
            distance: d2.sqrt(),
            source: if index < empirical_len {
                Label::Empirical
            } else {
                Label::Generated
            },
        }));
        ties_at_cutoff.push(r.ties_excluded);
    }
    Ok(NeighborTable {
        k,
        empirical_len,
        entries,
        ties_at_cutoff,
    })
}

/// Distance from each point to its nearest other point of the same set.
///
/// An exact duplicate yields 0.
pub fn within_set_nn_distance(s: &PointSet) -> Vec<f64> {
    within_set_nn_distance_with(s, SearchMethod::default())
}

pub fn within_set_nn_distance_with(s: &PointSet, method: SearchMethod) -> Vec<f64> {
    let index = build(method, s.as_flat(), s.dim());
    (0..s.len())
        .into_par_iter()
        .map(|i| index.knn(s.point(i), 1, Some(i)).hits[0].0.sqrt())
        .collect()
}

/// For each point of `from`, the distance to the closest point of `to`.
pub fn min_cross_distance(from: &PointSet, to: &PointSet) -> Result<Vec<f64>> {
    min_cross_distance_with(from, to, SearchMethod::default())
}

pub fn min_cross_distance_with(
    from: &PointSet,
    to: &PointSet,
    method: SearchMethod,
) -> Result<Vec<f64>> {
    from.check_same_dim(to)?;
    let index = build(method, to.as_flat(), to.dim());
    Ok((0..from.len())
        .into_par_iter()
        .map(|i| index.knn(from.point(i), 1, None).hits[0].0.sqrt())
        .collect())
}
