//! Point sets and the parameters shared by both statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which side of the comparison a point set represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Empirical,
    Generated,
}

/// An immutable, validated collection of `m >= 2` finite points in `R^d`.
///
/// Coordinates are stored row-major in one contiguous buffer, in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    coords: Vec<f64>,
    dim: usize,
    label: Label,
}

impl PointSet {
    /// Validates `raw` row by row. The dimension is taken from the first row.
    pub fn new<R: AsRef<[f64]>>(raw: &[R], label: Label) -> Result<Self> {
        let first = raw.first().ok_or(Error::Empty)?;
        let dim = first.as_ref().len();
        if dim == 0 {
            return Err(Error::InvalidParameter("points must have dimension >= 1".into()));
        }
        let mut coords = Vec::with_capacity(raw.len() * dim);
        for (row, point) in raw.iter().enumerate() {
            let point = point.as_ref();
            if point.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: point.len(),
                    row: Some(row),
                });
            }
            if let Some(col) = point.iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFinite { row, col });
            }
            coords.extend_from_slice(point);
        }
        Self::from_flat(coords, dim, label)
    }

    /// Builds a set from a row-major buffer of `m * dim` coordinates.
    pub fn from_flat(coords: Vec<f64>, dim: usize, label: Label) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("points must have dimension >= 1".into()));
        }
        if coords.is_empty() {
            return Err(Error::Empty);
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: coords.len() % dim,
                row: Some(coords.len() / dim),
            });
        }
        if let Some(pos) = coords.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / dim,
                col: pos % dim,
            });
        }
        let m = coords.len() / dim;
        if m < 2 {
            return Err(Error::TooSmall { m });
        }
        Ok(Self { coords, dim, label })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false; a valid set holds at least two points.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn with_label(mut self, label: Label) -> Self {
        self.label = label;
        self
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    pub(crate) fn check_same_dim(&self, other: &PointSet) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::set_dims(self.dim, other.dim));
        }
        Ok(())
    }

    pub(crate) fn check_same_size(&self, generated: &PointSet) -> Result<()> {
        if self.len() != generated.len() {
            return Err(Error::UnequalSampleSizes {
                empirical: self.len(),
                generated: generated.len(),
            });
        }
        Ok(())
    }
}

/// Neighbor depth `k` for nnc and neighborhood fraction `rho` for mr.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureParams {
    pub k: usize,
    pub rho: f64,
}

impl MeasureParams {
    pub fn new(k: usize, rho: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        check_rho(rho)?;
        Ok(Self { k, rho })
    }

    /// Checks `1 <= k <= 2m - 1` for sets of size `m`.
    pub fn validate_for(&self, m: usize) -> Result<()> {
        check_k(self.k, 2 * m - 1)?;
        check_rho(self.rho)
    }
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidRho(rho))
    }
}

pub(crate) fn check_k(k: usize, max: usize) -> Result<()> {
    if k == 0 || k > max {
        Err(Error::KTooLarge { k, max })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_set() {
        let s = PointSet::new(&[[0.0], [1.0]], Label::Empirical).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.dim(), 1);
        assert_eq!(s.label(), Label::Empirical);
    }

    #[test]
    fn ragged_rows_rejected() {
        let raw = vec![vec![0.0, 1.0], vec![2.0]];
        assert_eq!(
            PointSet::new(&raw, Label::Empirical),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 1,
                row: Some(1)
            })
        );
    }

    #[test]
    fn non_finite_rejected() {
        let err = PointSet::new(&[[0.0, f64::NAN]], Label::Generated).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, col: 1 });
        let err = PointSet::new(&[[0.0], [f64::INFINITY]], Label::Generated).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 1, col: 0 });
    }

    #[test]
    fn single_point_too_small() {
        assert_eq!(
            PointSet::new(&[[3.0, 4.0]], Label::Empirical),
            Err(Error::TooSmall { m: 1 })
        );
        let raw: Vec<Vec<f64>> = vec![];
        assert_eq!(PointSet::new(&raw, Label::Empirical), Err(Error::Empty));
    }

    #[test]
    fn errors_independent_of_order() {
        let mut raw = vec![vec![1.0, 2.0], vec![f64::NAN, 0.0], vec![3.0, 4.0]];
        assert!(matches!(
            PointSet::new(&raw, Label::Empirical),
            Err(Error::NonFinite { .. })
        ));
        raw.reverse();
        assert!(matches!(
            PointSet::new(&raw, Label::Empirical),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn params_bounds() {
        let p = MeasureParams::new(3, 0.5).unwrap();
        assert!(p.validate_for(2).is_ok());
        assert!(MeasureParams::new(4, 0.5).unwrap().validate_for(2).is_err());
        assert_eq!(MeasureParams::new(1, 0.0), Err(Error::InvalidRho(0.0)));
        assert_eq!(MeasureParams::new(1, 1.5), Err(Error::InvalidRho(1.5)));
        assert!(MeasureParams::new(1, 1.0).is_ok());
        assert!(MeasureParams::new(0, 0.5).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn round_trip_is_lossless(
                rows in prop::collection::vec(prop::collection::vec(-1e300f64..1e300, 3), 2..40)
            ) {
                let set = PointSet::new(&rows, Label::Generated).unwrap();
                prop_assert_eq!(set.to_rows(), rows);
            }
        }
    }
}
