//! Finitely supported signed measures on ℝᵈ.
//!
//! A [`SignedDiscreteMeasure`] is a list of distinct atoms with nonzero real
//! weights. There is no separate probability type: operations that need a
//! probability measure check [`SignedDiscreteMeasure::is_probability`].

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::point::Point;
use crate::summation::compensated_sum;

/// Tolerance on `|total_mass - 1|` for the probability predicate.
pub const PROBABILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SignedDiscreteMeasure {
    dim: usize,
    atoms: Vec<Point>,
    weights: Vec<f64>,
}

/// One `(coords, weight)` row of a serialized measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomRow {
    pub coords: Vec<f64>,
    pub weight: f64,
}

fn coord_key(p: &Point) -> Vec<u64> {
    // 0.0 == -0.0, so both map to the same key.
    p.coords()
        .iter()
        .map(|&c| if c == 0.0 { 0u64 } else { c.to_bits() })
        .collect()
}

impl SignedDiscreteMeasure {
    /// Builds a measure, merging atoms with identical coordinates (weights are
    /// summed in input order) and dropping atoms whose weight ends up zero.
    /// Atoms are stored sorted by coordinates, so equal measures compare equal.
    pub fn new(dim: usize, atoms: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parameter("dimension must be >= 1".into()));
        }
        if atoms.len() != weights.len() {
            return Err(Error::Parameter(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::Measure(format!("non-finite weight {w}")));
        }
        let mut index: HashMap<Vec<u64>, usize> = HashMap::with_capacity(atoms.len());
        let mut merged_atoms: Vec<Point> = Vec::with_capacity(atoms.len());
        let mut merged_weights: Vec<f64> = Vec::with_capacity(atoms.len());
        for (atom, w) in atoms.into_iter().zip(weights) {
            check_dim(dim, atom.dim())?;
            match index.get(&coord_key(&atom)) {
                Some(&i) => merged_weights[i] += w,
                None => {
                    index.insert(coord_key(&atom), merged_atoms.len());
                    merged_atoms.push(atom);
                    merged_weights.push(w);
                }
            }
        }
        let mut pairs: Vec<(Point, f64)> = merged_atoms
            .into_iter()
            .zip(merged_weights)
            .filter(|(_, w)| *w != 0.0)
            .collect();
        pairs.sort_by(|a, b| cmp_coords(&a.0, &b.0));
        let (atoms, weights) = pairs.into_iter().unzip();
        Ok(SignedDiscreteMeasure {
            dim,
            atoms,
            weights,
        })
    }

    /// The null measure.
    pub fn empty(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be >= 1");
        SignedDiscreteMeasure {
            dim,
            atoms: Vec::new(),
            weights: Vec::new(),
        }
    }

    pub fn dirac(x: Point) -> Self {
        SignedDiscreteMeasure {
            dim: x.dim(),
            atoms: vec![x],
            weights: vec![1.0],
        }
    }

    /// `(1/n) Σ δ_{xᵢ}`.
    pub fn uniform(dim: usize, points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Parameter(
                "uniform measure needs at least one point".into(),
            ));
        }
        let w = 1.0 / points.len() as f64;
        let weights = vec![w; points.len()];
        Self::new(dim, points, weights)
    }

    pub fn from_rows(dim: usize, rows: &[AtomRow]) -> Result<Self> {
        let atoms = rows
            .iter()
            .map(|r| Point::new(r.coords.clone()))
            .collect::<Result<Vec<_>>>()?;
        let weights = rows.iter().map(|r| r.weight).collect();
        Self::new(dim, atoms, weights)
    }

    pub fn to_rows(&self) -> Vec<AtomRow> {
        self.iter()
            .map(|(p, w)| AtomRow {
                coords: p.coords().to_vec(),
                weight: w,
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Point] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, f64)> + '_ {
        self.atoms.iter().zip(self.weights.iter().copied())
    }

    pub fn total_mass(&self) -> f64 {
        compensated_sum(self.weights.iter().copied())
    }

    /// Σ |wᵢ|.
    pub fn total_variation(&self) -> f64 {
        compensated_sum(self.weights.iter().map(|w| w.abs()))
    }

    pub fn is_probability(&self) -> bool {
        self.weights.iter().all(|&w| w >= 0.0) && (self.total_mass() - 1.0).abs() <= PROBABILITY_TOL
    }

    pub fn require_probability(&self, what: &str) -> Result<()> {
        if self.is_probability() {
            Ok(())
        } else {
            Err(Error::Measure(format!(
                "{what} must be a probability measure (total mass {}, min weight {})",
                self.total_mass(),
                self.weights.iter().copied().fold(f64::INFINITY, f64::min)
            )))
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::empty(self.dim);
        }
        SignedDiscreteMeasure {
            dim: self.dim,
            atoms: self.atoms.clone(),
            weights: self.weights.iter().map(|w| w * c).collect(),
        }
    }

    /// `self - other`, with shared atoms merged.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let atoms = self.atoms.iter().chain(&other.atoms).cloned().collect();
        let weights = self
            .weights
            .iter()
            .copied()
            .chain(other.weights.iter().map(|w| -w))
            .collect();
        Self::new(self.dim, atoms, weights)
    }

    /// Splits `μ` into mutually singular nonnegative parts with `μ = μ₊ − μ₋`.
    pub fn jordan_decompose(&self) -> (Self, Self) {
        let mut plus = Self::empty(self.dim);
        let mut minus = Self::empty(self.dim);
        for (p, w) in self.iter() {
            if w > 0.0 {
                plus.atoms.push(p.clone());
                plus.weights.push(w);
            } else {
                minus.atoms.push(p.clone());
                minus.weights.push(-w);
            }
        }
        (plus, minus)
    }

    /// Rescales so that the positive part has mass one and dominates the
    /// negative part: negate first if `μ₋(X) > μ₊(X)`, then divide by `μ₊(X)`.
    pub fn normalize_dominant_positive(&self) -> Result<Self> {
        if self.is_empty() {
            return Err(Error::Degenerate(
                "cannot normalize the null measure".into(),
            ));
        }
        let (plus, minus) = self.jordan_decompose();
        let (oriented, mass) = if minus.total_mass() > plus.total_mass() {
            (self.scaled(-1.0), minus.total_mass())
        } else {
            (self.clone(), plus.total_mass())
        };
        if mass == 1.0 {
            return Ok(oriented);
        }
        Ok(SignedDiscreteMeasure {
            dim: self.dim,
            atoms: oriented.atoms,
            weights: oriented.weights.iter().map(|w| w / mass).collect(),
        })
    }

    /// `Σ weightsᵢ · partsᵢ`, duplicate atoms merged.
    pub fn mixture(weights: &[f64], parts: &[SignedDiscreteMeasure]) -> Result<Self> {
        if weights.len() != parts.len() {
            return Err(Error::Parameter(format!(
                "{} mixture weights for {} parts",
                weights.len(),
                parts.len()
            )));
        }
        let Some(first) = parts.first() else {
            return Err(Error::Parameter("mixture needs at least one part".into()));
        };
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::Parameter(format!(
                "mixture weight {w} is not a nonnegative real"
            )));
        }
        let dim = first.dim;
        let mut atoms = Vec::new();
        let mut ws = Vec::new();
        for (&c, part) in weights.iter().zip(parts) {
            check_dim(dim, part.dim)?;
            for (p, w) in part.iter() {
                atoms.push(p.clone());
                ws.push(c * w);
            }
        }
        Self::new(dim, atoms, ws)
    }

    /// Mass of the closed ball `{x : ‖x − center‖ ≤ radius}`.
    pub fn mass_in_ball(&self, center: &Point, radius: f64) -> f64 {
        debug_assert_eq!(center.dim(), self.dim);
        compensated_sum(
            self.iter()
                .filter(|(p, _)| p.dist(center) <= radius)
                .map(|(_, w)| w),
        )
    }

    /// Mass of the open ball `{x : ‖x − center‖ < radius}`.
    pub fn mass_in_open_ball(&self, center: &Point, radius: f64) -> f64 {
        compensated_sum(
            self.iter()
                .filter(|(p, _)| p.dist(center) < radius)
                .map(|(_, w)| w),
        )
    }

    /// Total order used to canonicalize argument order in symmetric
    /// computations. Only meaningful as a tie-breaker.
    pub(crate) fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| {
                self.weights
                    .iter()
                    .zip(&other.weights)
                    .map(|(a, b)| a.total_cmp(b))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
            .then_with(|| {
                self.atoms
                    .iter()
                    .zip(&other.atoms)
                    .flat_map(|(a, b)| a.coords().iter().zip(b.coords()))
                    .map(|(a, b)| a.total_cmp(b))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
    }
}

fn cmp_coords(a: &Point, b: &Point) -> Ordering {
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// An indexed sequence `(μₙ)` of measures sharing one dimension.
#[derive(Debug, Clone)]
pub struct MeasureSequence {
    pub label: String,
    indices: Vec<usize>,
    items: Vec<SignedDiscreteMeasure>,
}

impl MeasureSequence {
    /// Items are indexed `1, 2, …`.
    pub fn new(label: impl Into<String>, items: Vec<SignedDiscreteMeasure>) -> Result<Self> {
        let indices = (1..=items.len()).collect();
        Self::with_indices(label, indices, items)
    }

    pub fn with_indices(
        label: impl Into<String>,
        indices: Vec<usize>,
        items: Vec<SignedDiscreteMeasure>,
    ) -> Result<Self> {
        if indices.len() != items.len() {
            return Err(Error::Parameter(
                "one index per sequence item required".into(),
            ));
        }
        if let Some(first) = items.first() {
            for item in &items {
                check_dim(first.dim(), item.dim())?;
            }
        }
        Ok(MeasureSequence {
            label: label.into(),
            indices,
            items,
        })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.items.first().map(|m| m.dim())
    }

    pub fn items(&self) -> &[SignedDiscreteMeasure] {
        &self.items
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &SignedDiscreteMeasure)> + '_ {
        self.indices.iter().copied().zip(&self.items)
    }
}
