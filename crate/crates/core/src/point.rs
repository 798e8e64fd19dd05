use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of ℝᵈ with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Parameter("point must have dimension >= 1".into()));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::Parameter(format!("non-finite coordinate {c}")));
        }
        Ok(Point { coords })
    }

    /// One-dimensional point. Panics if `x` is not finite.
    pub fn scalar(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite coordinate {x}");
        Point { coords: vec![x] }
    }

    pub fn origin(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be >= 1");
        Point {
            coords: vec![0.0; dim],
        }
    }

    /// `t · e₁` in `dim` dimensions.
    pub fn on_axis(dim: usize, t: f64) -> Self {
        let mut p = Point::origin(dim);
        p.coords[0] = t;
        p
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Squared Euclidean distance, summed coordinate by coordinate so that
    /// `a.sq_dist(b) == b.sq_dist(a)` bit for bit.
    pub fn sq_dist(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.sq_dist(other).sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `self + t · dir`.
    pub fn offset(&self, dir: &[f64], t: f64) -> Point {
        debug_assert_eq!(self.dim(), dir.len());
        Point {
            coords: self
                .coords
                .iter()
                .zip(dir)
                .map(|(c, d)| c + t * d)
                .collect(),
        }
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.coords
    }
}
