use super::{dist2, KBest, NeighborIndex, QueryResult};

const LEAF_SIZE: usize = 16;

#[derive(Debug, Clone)]
struct Node {
    start: usize,
    end: usize,
    /// Child node ids; `None` for leaves.
    children: Option<(usize, usize)>,
}

/// Static k-d tree with per-node bounding boxes.
///
/// Nodes whose box lies strictly farther than the current k-th candidate are
/// pruned; boxes at exactly that distance are still visited so that ties are
/// resolved by index exactly as in the brute-force scan.
pub struct KdTree<'a> {
    coords: &'a [f64],
    dim: usize,
    perm: Vec<usize>,
    nodes: Vec<Node>,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl<'a> KdTree<'a> {
    pub fn new(coords: &'a [f64], dim: usize) -> Self {
        let n = coords.len() / dim;
        let mut tree = Self {
            coords,
            dim,
            perm: (0..n).collect(),
            nodes: Vec::with_capacity(2 * n / LEAF_SIZE + 1),
            lo: Vec::new(),
            hi: Vec::new(),
        };
        tree.build(0, n);
        tree
    }

    fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node {
            start,
            end,
            children: None,
        });
        let dim = self.dim;
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for &i in &self.perm[start..end] {
            let p = &self.coords[i * dim..(i + 1) * dim];
            for c in 0..dim {
                lo[c] = lo[c].min(p[c]);
                hi[c] = hi[c].max(p[c]);
            }
        }
        let axis = (0..dim)
            .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
            .unwrap_or(0);
        let spread = hi[axis] - lo[axis];
        self.lo.extend_from_slice(&lo);
        self.hi.extend_from_slice(&hi);

        if end - start <= LEAF_SIZE || spread == 0.0 {
            return id;
        }
        let mid = start + (end - start) / 2;
        let coords = self.coords;
        self.perm[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            coords[a * dim + axis].total_cmp(&coords[b * dim + axis])
        });
        let left = self.build(start, mid);
        let right = self.build(mid, end);
        self.nodes[id].children = Some((left, right));
        id
    }

    /// Lower bound on the squared distance from `q` to any point in node `id`.
    #[inline]
    fn box_dist2(&self, id: usize, q: &[f64]) -> f64 {
        let lo = &self.lo[id * self.dim..(id + 1) * self.dim];
        let hi = &self.hi[id * self.dim..(id + 1) * self.dim];
        q.iter()
            .zip(lo.iter().zip(hi))
            .map(|(&x, (&l, &h))| {
                let t = x - x.clamp(l, h);
                t * t
            })
            .sum()
    }

    fn search(&self, id: usize, q: &[f64], exclude: Option<usize>, best: &mut KBest) {
        let node = &self.nodes[id];
        match node.children {
            None => {
                for &i in &self.perm[node.start..node.end] {
                    if Some(i) != exclude {
                        best.offer(dist2(q, self.point(i)), i);
                    }
                }
            }
            Some((left, right)) => {
                let dl = self.box_dist2(left, q);
                let dr = self.box_dist2(right, q);
                let order = if dl <= dr {
                    [(left, dl), (right, dr)]
                } else {
                    [(right, dr), (left, dl)]
                };
                for (child, lb) in order {
                    if lb <= best.bound() {
                        self.search(child, q, exclude, best);
                    }
                }
            }
        }
    }

    fn count_within(&self, id: usize, q: &[f64], exclude: Option<usize>, r2: f64) -> usize {
        if self.box_dist2(id, q) > r2 {
            return 0;
        }
        let node = &self.nodes[id];
        match node.children {
            None => self.perm[node.start..node.end]
                .iter()
                .filter(|&&i| Some(i) != exclude && dist2(q, self.point(i)) <= r2)
                .count(),
            Some((left, right)) => {
                self.count_within(left, q, exclude, r2) + self.count_within(right, q, exclude, r2)
            }
        }
    }
}

impl NeighborIndex for KdTree<'_> {
    fn knn(&self, query: &[f64], k: usize, exclude: Option<usize>) -> QueryResult {
        let mut best = KBest::new(k);
        self.search(0, query, exclude, &mut best);
        let hits = best.into_items();
        let ties_excluded = match hits.last() {
            Some(&(cut, _)) if hits.len() == k => {
                self.count_within(0, query, exclude, cut) - k
            }
            _ => 0,
        };
        QueryResult {
            hits,
            ties_excluded,
        }
    }
}
