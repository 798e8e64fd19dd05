//! Translation-invariant base kernel families, registered by name.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A radial profile `k(x, y) = φ(‖x − y‖²)`.
pub trait RadialFamily: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    /// `φ` evaluated at a squared distance.
    fn value(&self, sq_dist: f64) -> f64;

    /// `φ(0)`, which is also `sup |k|`.
    fn peak(&self) -> f64 {
        self.value(0.0)
    }

    /// Smallest distance `r` with `φ(r²) ≤ eps`.
    fn decay_radius(&self, eps: f64) -> f64;

    fn params(&self) -> BTreeMap<String, f64>;
}

/// `exp(−r² / (2σ²))`.
#[derive(Debug, Clone, Copy)]
pub struct Gaussian {
    pub sigma: f64,
}

impl RadialFamily for Gaussian {
    fn name(&self) -> &'static str {
        "gaussian"
    }

    fn value(&self, sq_dist: f64) -> f64 {
        (-sq_dist / (2.0 * self.sigma * self.sigma)).exp()
    }

    fn decay_radius(&self, eps: f64) -> f64 {
        if eps >= 1.0 {
            0.0
        } else {
            self.sigma * (2.0 * (1.0 / eps).ln()).sqrt()
        }
    }

    fn params(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([("sigma".to_string(), self.sigma)])
    }
}

/// `exp(−γ r)`.
#[derive(Debug, Clone, Copy)]
pub struct Laplacian {
    pub gamma: f64,
}

impl RadialFamily for Laplacian {
    fn name(&self) -> &'static str {
        "laplacian"
    }

    fn value(&self, sq_dist: f64) -> f64 {
        (-self.gamma * sq_dist.sqrt()).exp()
    }

    fn decay_radius(&self, eps: f64) -> f64 {
        if eps >= 1.0 {
            0.0
        } else {
            (1.0 / eps).ln() / self.gamma
        }
    }

    fn params(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([("gamma".to_string(), self.gamma)])
    }
}

/// `c / sqrt(c² + r²)`, normalized so that `k(x, x) = 1`.
#[derive(Debug, Clone, Copy)]
pub struct InverseMultiquadric {
    pub c: f64,
}

impl RadialFamily for InverseMultiquadric {
    fn name(&self) -> &'static str {
        "inverse_multiquadric"
    }

    fn value(&self, sq_dist: f64) -> f64 {
        self.c / (self.c * self.c + sq_dist).sqrt()
    }

    fn decay_radius(&self, eps: f64) -> f64 {
        if eps >= 1.0 {
            0.0
        } else {
            self.c * (1.0 / (eps * eps) - 1.0).sqrt()
        }
    }

    fn params(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([("c".to_string(), self.c)])
    }
}

type Builder = fn(&BTreeMap<String, f64>) -> Result<Arc<dyn RadialFamily>>;

struct Entry {
    name: &'static str,
    param: &'static str,
    build: Builder,
}

fn positive_param(params: &BTreeMap<String, f64>, family: &str, key: &str) -> Result<f64> {
    if let Some(extra) = params.keys().find(|k| k.as_str() != key) {
        return Err(Error::Parameter(format!(
            "unknown parameter `{extra}` for {family} (expected `{key}`)"
        )));
    }
    let v = *params
        .get(key)
        .ok_or_else(|| Error::Parameter(format!("{family} requires parameter `{key}`")))?;
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Parameter(format!(
            "{family} parameter {key} = {v} must be positive"
        )));
    }
    Ok(v)
}

const FAMILIES: &[Entry] = &[
    Entry {
        name: "gaussian",
        param: "sigma",
        build: |p| {
            Ok(Arc::new(Gaussian {
                sigma: positive_param(p, "gaussian", "sigma")?,
            }))
        },
    },
    Entry {
        name: "laplacian",
        param: "gamma",
        build: |p| {
            Ok(Arc::new(Laplacian {
                gamma: positive_param(p, "laplacian", "gamma")?,
            }))
        },
    },
    Entry {
        name: "inverse_multiquadric",
        param: "c",
        build: |p| {
            Ok(Arc::new(InverseMultiquadric {
                c: positive_param(p, "inverse_multiquadric", "c")?,
            }))
        },
    },
];

/// Looks up a family by name and builds it from its parameters.
pub fn build_family(name: &str, params: &BTreeMap<String, f64>) -> Result<Arc<dyn RadialFamily>> {
    let entry = FAMILIES.iter().find(|e| e.name == name).ok_or_else(|| {
        Error::Parameter(format!(
            "unknown kernel family `{name}` (known: {})",
            family_names().join(", ")
        ))
    })?;
    (entry.build)(params)
}

pub fn family_names() -> Vec<&'static str> {
    FAMILIES.iter().map(|e| e.name).collect()
}

/// Name of the single parameter each registered family takes.
pub fn family_param(name: &str) -> Option<&'static str> {
    FAMILIES.iter().find(|e| e.name == name).map(|e| e.param)
}
