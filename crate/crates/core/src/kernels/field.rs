use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::point::Point;

/// Real function on ℝᵈ used to rescale a kernel as `g(x) k(x, y) g(y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    dim: usize,
    kind: FieldKind,
}

#[derive(Debug, Clone, PartialEq)]
enum FieldKind {
    /// `Π_z h(‖x − z‖)` with `h(r) = 2r² / (1 + r⁴)`: zero exactly on the
    /// listed points, positive elsewhere, max 1, decays like `2/r²`.
    VanishingAt(Vec<Point>),
    /// `exp(−‖x − c‖² / w²)`.
    GaussianEnvelope { center: Point, width: f64 },
    /// `1 − exp(−‖x − ξ‖²)`: single zero but tends to 1 at infinity.
    OneMinusGaussian(Point),
}

/// Serialized form of a [`ScalarField`], tagged by `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "g", rename_all = "snake_case")]
pub enum FieldSpec {
    C0BumpAt { xi: Vec<f64> },
    C0MultiZero { zeros: Vec<Vec<f64>> },
    GaussianEnvelope { center: Vec<f64>, width: f64 },
    OneMinusGaussian { xi: Vec<f64> },
}

fn vanishing_profile(sq: f64) -> f64 {
    2.0 * sq / (1.0 + sq * sq)
}

impl ScalarField {
    /// Default single-zero field: vanishes only at `xi` and at infinity.
    pub fn c0_bump_at(xi: Point) -> Self {
        ScalarField {
            dim: xi.dim(),
            kind: FieldKind::VanishingAt(vec![xi]),
        }
    }

    /// Product of single-zero fields, one per point.
    pub fn c0_multi_zero(zeros: Vec<Point>) -> Result<Self> {
        let Some(first) = zeros.first() else {
            return Err(Error::Parameter(
                "c0_multi_zero needs at least one zero".into(),
            ));
        };
        let dim = first.dim();
        for z in &zeros {
            check_dim(dim, z.dim())?;
        }
        Ok(ScalarField {
            dim,
            kind: FieldKind::VanishingAt(zeros),
        })
    }

    pub fn gaussian_envelope(center: Point, width: f64) -> Result<Self> {
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::Parameter(format!(
                "envelope width {width} must be positive"
            )));
        }
        Ok(ScalarField {
            dim: center.dim(),
            kind: FieldKind::GaussianEnvelope { center, width },
        })
    }

    pub fn one_minus_gaussian(xi: Point) -> Self {
        ScalarField {
            dim: xi.dim(),
            kind: FieldKind::OneMinusGaussian(xi),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &Point) -> f64 {
        match &self.kind {
            FieldKind::VanishingAt(zeros) => zeros
                .iter()
                .map(|z| vanishing_profile(x.sq_dist(z)))
                .product(),
            FieldKind::GaussianEnvelope { center, width } => {
                (-x.sq_dist(center) / (width * width)).exp()
            }
            FieldKind::OneMinusGaussian(xi) => 1.0 - (-x.sq_dist(xi)).exp(),
        }
    }

    /// Points where the field is exactly zero.
    pub fn zero_set(&self) -> &[Point] {
        match &self.kind {
            FieldKind::VanishingAt(zeros) => zeros,
            FieldKind::GaussianEnvelope { .. } => &[],
            FieldKind::OneMinusGaussian(xi) => std::slice::from_ref(xi),
        }
    }

    /// Whether the field vanishes at infinity.
    pub fn is_c0(&self) -> bool {
        !matches!(self.kind, FieldKind::OneMinusGaussian(_))
    }

    pub fn sup(&self) -> f64 {
        1.0
    }

    pub fn spec(&self) -> FieldSpec {
        match &self.kind {
            FieldKind::VanishingAt(zeros) if zeros.len() == 1 => FieldSpec::C0BumpAt {
                xi: zeros[0].coords().to_vec(),
            },
            FieldKind::VanishingAt(zeros) => FieldSpec::C0MultiZero {
                zeros: zeros.iter().map(|z| z.coords().to_vec()).collect(),
            },
            FieldKind::GaussianEnvelope { center, width } => FieldSpec::GaussianEnvelope {
                center: center.coords().to_vec(),
                width: *width,
            },
            FieldKind::OneMinusGaussian(xi) => FieldSpec::OneMinusGaussian {
                xi: xi.coords().to_vec(),
            },
        }
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        Ok(match spec {
            FieldSpec::C0BumpAt { xi } => Self::c0_bump_at(Point::new(xi.clone())?),
            FieldSpec::C0MultiZero { zeros } => Self::c0_multi_zero(
                zeros
                    .iter()
                    .map(|z| Point::new(z.clone()))
                    .collect::<Result<_>>()?,
            )?,
            FieldSpec::GaussianEnvelope { center, width } => {
                Self::gaussian_envelope(Point::new(center.clone())?, *width)?
            }
            FieldSpec::OneMinusGaussian { xi } => Self::one_minus_gaussian(Point::new(xi.clone())?),
        })
    }
}
