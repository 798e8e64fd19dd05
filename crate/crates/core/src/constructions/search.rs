//! Candidate enumeration strategies for the greedy diffusing-sequence search.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::ExclusionRegion;
use crate::error::{Error, Result};
use crate::point::Point;

/// Produces an unbounded stream of candidate points outside an exclusion ball.
pub trait CandidateSource: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    /// Candidates ordered outward from `excl`, spaced roughly by `step`.
    fn candidates<'a>(
        &'a self,
        excl: &'a ExclusionRegion,
        step: f64,
    ) -> Box<dyn Iterator<Item = Point> + 'a>;
}

/// `center + (R + m·step)·e₁` for `m = 1, 2, …`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ray;

impl CandidateSource for Ray {
    fn name(&self) -> &'static str {
        "ray"
    }

    fn candidates<'a>(
        &'a self,
        excl: &'a ExclusionRegion,
        step: f64,
    ) -> Box<dyn Iterator<Item = Point> + 'a> {
        let dim = excl.center.dim();
        let mut e1 = vec![0.0; dim];
        e1[0] = 1.0;
        Box::new((1u64..).map(move |m| excl.center.offset(&e1, excl.radius + m as f64 * step)))
    }
}

/// Lattice `center + step·z`, `z ∈ ℤᵈ`, by increasing L∞ shell, skipping
/// points inside the exclusion ball.
#[derive(Debug, Clone, Copy, Default)]
pub struct Grid;

fn shell(dim: usize, m: i64) -> Vec<Vec<i64>> {
    let side = (2 * m + 1) as usize;
    let total = side.pow(dim as u32);
    (0..total)
        .map(|mut idx| {
            (0..dim)
                .map(|_| {
                    let c = (idx % side) as i64 - m;
                    idx /= side;
                    c
                })
                .collect::<Vec<i64>>()
        })
        .filter(|z| z.iter().any(|c| c.abs() == m))
        .collect()
}

impl CandidateSource for Grid {
    fn name(&self) -> &'static str {
        "grid"
    }

    fn candidates<'a>(
        &'a self,
        excl: &'a ExclusionRegion,
        step: f64,
    ) -> Box<dyn Iterator<Item = Point> + 'a> {
        let dim = excl.center.dim();
        Box::new(
            (1i64..)
                .flat_map(move |m| shell(dim, m))
                .map(move |z| {
                    let dir: Vec<f64> = z.iter().map(|&c| c as f64).collect();
                    excl.center.offset(&dir, step)
                })
                .filter(move |p| !excl.contains(p)),
        )
    }
}

/// Random directions at radii `R + step·(m + u)`, `u ~ U[0, 1)`, from a seed.
#[derive(Debug, Clone, Copy)]
pub struct RandomShells {
    pub seed: u64,
}

impl CandidateSource for RandomShells {
    fn name(&self) -> &'static str {
        "random"
    }

    fn candidates<'a>(
        &'a self,
        excl: &'a ExclusionRegion,
        step: f64,
    ) -> Box<dyn Iterator<Item = Point> + 'a> {
        let dim = excl.center.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        Box::new((1u64..).map(move |m| {
            let dir = loop {
                let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
                if n > 1e-12 {
                    break v.into_iter().map(|c| c / n).collect::<Vec<f64>>();
                }
            };
            let r = excl.radius + step * (m as f64 + rng.gen::<f64>());
            excl.center.offset(&dir, r)
        }))
    }
}

/// Where the greedy search draws candidates from. `step = None` means: use
/// the kernel's analytic decay radius when it has one, otherwise 1.
#[derive(Debug, Clone)]
pub struct SearchDomain {
    pub dim: usize,
    pub source: Arc<dyn CandidateSource>,
    pub step: Option<f64>,
}

impl SearchDomain {
    pub fn ray(dim: usize) -> Self {
        SearchDomain {
            dim,
            source: Arc::new(Ray),
            step: None,
        }
    }

    pub fn grid(dim: usize, step: f64) -> Self {
        SearchDomain {
            dim,
            source: Arc::new(Grid),
            step: Some(step),
        }
    }

    pub fn random(dim: usize, seed: u64) -> Self {
        SearchDomain {
            dim,
            source: Arc::new(RandomShells { seed }),
            step: None,
        }
    }

    /// Registry lookup: `"ray"`, `"grid"` or `"random"`.
    pub fn by_name(name: &str, dim: usize, seed: u64, step: Option<f64>) -> Result<Self> {
        let source: Arc<dyn CandidateSource> = match name {
            "ray" => Arc::new(Ray),
            "grid" => Arc::new(Grid),
            "random" => Arc::new(RandomShells { seed }),
            other => {
                return Err(Error::Parameter(format!(
                    "unknown search strategy `{other}` (known: {})",
                    strategy_names().join(", ")
                )))
            }
        };
        if let Some(s) = step {
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::Parameter(format!(
                    "search step {s} must be positive"
                )));
            }
        }
        Ok(SearchDomain { dim, source, step })
    }
}

pub fn strategy_names() -> Vec<&'static str> {
    vec!["ray", "grid", "random"]
}
