use super::{dist2, KBest, NeighborIndex, QueryResult};

/// All-pairs scan over a row-major coordinate buffer.
pub struct BruteForce<'a> {
    coords: &'a [f64],
    dim: usize,
}

impl<'a> BruteForce<'a> {
    pub fn new(coords: &'a [f64], dim: usize) -> Self {
        Self { coords, dim }
    }
}

impl NeighborIndex for BruteForce<'_> {
    fn knn(&self, query: &[f64], k: usize, exclude: Option<usize>) -> QueryResult {
        let mut best = KBest::new(k);
        let candidates = || {
            self.coords
                .chunks_exact(self.dim)
                .enumerate()
                .filter(|&(i, _)| Some(i) != exclude)
                .map(|(i, p)| (dist2(query, p), i))
        };
        for (d2, i) in candidates() {
            best.offer(d2, i);
        }
        let hits = best.into_items();
        let ties_excluded = match hits.last() {
            Some(&(cut, _)) if hits.len() == k => {
                candidates().filter(|&(d2, _)| d2 <= cut).count() - k
            }
            _ => 0,
        };
        QueryResult {
            hits,
            ties_excluded,
        }
    }
}
