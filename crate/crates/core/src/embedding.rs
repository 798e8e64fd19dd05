//! Kernel mean embeddings, RKHS inner products of measures, and MMD.
//!
//! For discrete measures `μ = Σ wᵢ δ_{aᵢ}` and `ν = Σ vⱼ δ_{bⱼ}`:
//!
//! - `f_μ(x) = Σ wᵢ k(aᵢ, x)`
//! - `⟨μ, ν⟩ = Σᵢ Σⱼ wᵢ vⱼ k(aᵢ, bⱼ)`
//! - `mmd(μ, ν) = ‖μ − ν‖ = sqrt(⟨μ, μ⟩ + ⟨ν, ν⟩ − 2⟨μ, ν⟩)`
//!
//! All double sums go through [`CompensatedSum`].

use std::cmp::Ordering;

use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};
use crate::kernels::Kernel;
use crate::measures::SignedDiscreteMeasure;
use crate::point::Point;
use crate::summation::CompensatedSum;

/// Largest combined support accepted by [`mmd_oracle`].
pub const ORACLE_SUPPORT_LIMIT: usize = 2000;

/// `f_μ(x)`.
pub fn kme_eval(k: &Kernel, mu: &SignedDiscreteMeasure, x: &Point) -> Result<f64> {
    check_dim(k.dim(), mu.dim())?;
    check_dim(k.dim(), x.dim())?;
    let mut acc = CompensatedSum::new();
    for (a, w) in mu.iter() {
        acc.add(w * k.eval(a, x));
    }
    Ok(acc.value())
}

fn accumulate_block(
    acc: &mut CompensatedSum,
    scale: f64,
    gram: &DMatrix<f64>,
    left: &SignedDiscreteMeasure,
    right: &SignedDiscreteMeasure,
) {
    for (i, wi) in left.weights().iter().enumerate() {
        for (j, vj) in right.weights().iter().enumerate() {
            acc.add(scale * (wi * vj) * gram[(i, j)]);
        }
    }
}

/// `⟨μ, ν⟩_k = μ ⊗ ν (k)`.
pub fn inner(k: &Kernel, mu: &SignedDiscreteMeasure, nu: &SignedDiscreteMeasure) -> Result<f64> {
    check_dim(k.dim(), mu.dim())?;
    check_dim(k.dim(), nu.dim())?;
    let g = k.gram(mu.atoms(), nu.atoms())?;
    let mut acc = CompensatedSum::new();
    accumulate_block(&mut acc, 1.0, &g, mu, nu);
    Ok(acc.value())
}

/// `‖μ‖²_k`.
pub fn sq_norm(k: &Kernel, mu: &SignedDiscreteMeasure) -> Result<f64> {
    inner(k, mu, mu)
}

/// `‖μ‖_k`, with tiny negative round-off clamped to zero.
pub fn norm(k: &Kernel, mu: &SignedDiscreteMeasure) -> Result<f64> {
    Ok(sq_norm(k, mu)?.max(0.0).sqrt())
}

/// Round-off allowance for `⟨μ, μ⟩ ≥ 0`: `1e-8 · (Σ|wᵢ|)² · sup_bound`.
pub fn num_tol(k: &Kernel, mu: &SignedDiscreteMeasure) -> f64 {
    let tv = mu.total_variation();
    1e-8 * tv * tv * k.sup_bound()
}

/// An MMD value together with the squared quantity it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mmd {
    pub value: f64,
    /// `⟨μ−ν, μ−ν⟩` before clamping.
    pub squared: f64,
    /// `squared` was negative and the value was clamped to 0.
    pub clamped: bool,
    /// `squared` was below `−num_tol`, i.e. more negative than round-off
    /// explains; points at a kernel that is not positive definite.
    pub psd_violation: bool,
}

/// `‖μ − ν‖_k`, computed from the three Gram blocks in a single compensated
/// accumulation. Arguments are put in a canonical order first, so
/// `mmd(k, μ, ν) == mmd(k, ν, μ)` exactly.
pub fn mmd(k: &Kernel, mu: &SignedDiscreteMeasure, nu: &SignedDiscreteMeasure) -> Result<Mmd> {
    check_dim(k.dim(), mu.dim())?;
    check_dim(k.dim(), nu.dim())?;
    if mu == nu {
        return Ok(Mmd {
            value: 0.0,
            squared: 0.0,
            clamped: false,
            psd_violation: false,
        });
    }
    let (mu, nu) = match mu.canonical_cmp(nu) {
        Ordering::Greater => (nu, mu),
        _ => (mu, nu),
    };
    let g_mm = k.gram(mu.atoms(), mu.atoms())?;
    let g_nn = k.gram(nu.atoms(), nu.atoms())?;
    let g_mn = k.gram(mu.atoms(), nu.atoms())?;
    let mut acc = CompensatedSum::new();
    accumulate_block(&mut acc, 1.0, &g_mm, mu, mu);
    accumulate_block(&mut acc, 1.0, &g_nn, nu, nu);
    accumulate_block(&mut acc, -2.0, &g_mn, mu, nu);
    let squared = acc.value();
    let tol = {
        let tv = mu.total_variation() + nu.total_variation();
        1e-8 * tv * tv * k.sup_bound()
    };
    Ok(Mmd {
        value: squared.max(0.0).sqrt(),
        squared,
        clamped: squared < 0.0,
        psd_violation: squared < -tol,
    })
}

/// Independent MMD route: forms `μ − ν` explicitly (shared atoms cancel) and
/// evaluates one plain double sum with pointwise kernel calls.
pub fn mmd_oracle(
    k: &Kernel,
    mu: &SignedDiscreteMeasure,
    nu: &SignedDiscreteMeasure,
) -> Result<f64> {
    check_dim(k.dim(), mu.dim())?;
    check_dim(k.dim(), nu.dim())?;
    let size = mu.len() + nu.len();
    if size > ORACLE_SUPPORT_LIMIT {
        return Err(Error::SupportTooLarge {
            size,
            limit: ORACLE_SUPPORT_LIMIT,
        });
    }
    let diff = mu.difference(nu)?;
    let mut total = 0.0;
    for (a, w) in diff.iter() {
        for (b, v) in diff.iter() {
            total += w * v * k.eval(a, b);
        }
    }
    Ok(total.max(0.0).sqrt())
}
