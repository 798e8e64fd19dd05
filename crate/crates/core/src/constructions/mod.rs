//! Constructive counterparts of the metrization counterexamples.
//!
//! - [`diffusing_sequence`]: probability measures `Pₙ = (1/n) Σ δ_{xᵢ}` kept
//!   off a ball with pairwise `|k(xᵢ, xⱼ)| ≤ eps`, so `‖Pₙ‖² ≤ sup k / n + (n−1) eps / n`.
//! - [`annihilating_kernel`]: `g(x) κ(x, y) g(y)` with `g(ξ) = 0`, which sends
//!   `δ_ξ` to the zero embedding.
//! - [`shifted_annihilating_kernel`], [`dirac_centered_kernel`]: the `+1` shift
//!   and the `δ_ξ`-centering of a kernel.
//! - [`escaping_witness_sequence`]: from a nonzero `μ` with `f_μ = 0`, the
//!   sequence `μₙ = μ₋ + (1 − μ₋(X)) Pₙ` that converges to `μ₊` in MMD but
//!   keeps mass `1 − μ₋(X)` away from any ball around `supp μ₊`.

mod search;

pub use search::{strategy_names, CandidateSource, Grid, RandomShells, Ray, SearchDomain};

use crate::embedding::{mmd, norm};
use crate::error::{check_dim, Error, Result};
use crate::kernels::{Kernel, ScalarField};
use crate::measures::{MeasureSequence, SignedDiscreteMeasure, PROBABILITY_TOL};
use crate::point::Point;

/// `‖μ‖_k` at or below this counts as `f_μ = 0`.
pub const WITNESS_TOL: f64 = 1e-10;

/// Candidate budget used by [`escaping_witness_sequence`] for each `Pₙ`.
pub const DEFAULT_CANDIDATE_BUDGET: usize = 100_000;

/// Closed ball `{x : ‖x − center‖ ≤ radius}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExclusionRegion {
    pub center: Point,
    pub radius: f64,
}

impl ExclusionRegion {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::Parameter(format!(
                "ball radius {radius} must be finite and >= 0"
            )));
        }
        Ok(ExclusionRegion { center, radius })
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dist(&self.center) <= self.radius
    }
}

/// `sup_bound / n + (n − 1) · eps / n`.
pub fn diffusion_bound(sup_bound: f64, n: usize, eps: f64) -> f64 {
    let n = n as f64;
    sup_bound / n + (n - 1.0) * eps / n
}

/// Greedy construction of `n` points outside `excl` with pairwise
/// `|k(xᵢ, xⱼ)| ≤ eps`, returned as the uniform measure on them.
///
/// Candidates come from `dom` in order; one is accepted iff it lies outside
/// `excl` and clears every accepted point. Fails with
/// [`Error::SearchExhausted`] once `max_candidates` have been examined.
pub fn diffusing_sequence(
    k: &Kernel,
    n: usize,
    eps: f64,
    excl: &ExclusionRegion,
    dom: &SearchDomain,
    max_candidates: usize,
) -> Result<SignedDiscreteMeasure> {
    if n == 0 {
        return Err(Error::Parameter("diffusing sequence needs n >= 1".into()));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Parameter(format!("eps = {eps} must be positive")));
    }
    if !k.claims_c0() {
        return Err(Error::Parameter(
            "diffusing sequences need a kernel whose sections vanish at infinity".into(),
        ));
    }
    check_dim(k.dim(), excl.center.dim())?;
    check_dim(k.dim(), dom.dim)?;

    let step = dom
        .step
        .or_else(|| k.decay_radius(eps).map(|r| r * (1.0 + 1e-9)))
        .filter(|s| *s > 0.0)
        .unwrap_or(1.0);

    let mut accepted: Vec<Point> = Vec::with_capacity(n);
    for (examined, cand) in dom.source.candidates(excl, step).enumerate() {
        if accepted.len() == n {
            break;
        }
        if examined >= max_candidates {
            return Err(Error::SearchExhausted {
                index: accepted.len() + 1,
                n,
                budget: max_candidates,
            });
        }
        if excl.contains(&cand) {
            continue;
        }
        if accepted.iter().all(|x| k.eval(&cand, x).abs() <= eps) {
            accepted.push(cand);
        }
    }
    SignedDiscreteMeasure::uniform(k.dim(), accepted)
}

/// Exhaustive recomputation of the properties a diffusing measure must have.
#[derive(Debug, Clone, Copy)]
pub struct DiffusionCertificate {
    pub n: usize,
    pub eps: f64,
    pub sq_norm: f64,
    pub bound: f64,
    /// `max_{i≠j} |k(xᵢ, xⱼ)|`, 0 for a single atom.
    pub max_offdiag: f64,
    /// `min_i ‖xᵢ − center‖ − radius`.
    pub min_clearance: f64,
}

impl DiffusionCertificate {
    pub fn pairwise_ok(&self) -> bool {
        self.max_offdiag <= self.eps
    }

    pub fn exclusion_ok(&self) -> bool {
        self.min_clearance > 0.0
    }

    pub fn bound_ok(&self) -> bool {
        self.sq_norm <= self.bound
    }

    pub fn holds(&self) -> bool {
        self.pairwise_ok() && self.exclusion_ok() && self.bound_ok()
    }
}

pub fn certify_diffusion(
    k: &Kernel,
    pn: &SignedDiscreteMeasure,
    eps: f64,
    excl: &ExclusionRegion,
) -> Result<DiffusionCertificate> {
    check_dim(k.dim(), pn.dim())?;
    let atoms = pn.atoms();
    let mut max_offdiag: f64 = 0.0;
    for (i, x) in atoms.iter().enumerate() {
        for y in &atoms[i + 1..] {
            max_offdiag = max_offdiag.max(k.eval(x, y).abs());
        }
    }
    let min_clearance = atoms
        .iter()
        .map(|x| x.dist(&excl.center) - excl.radius)
        .fold(f64::INFINITY, f64::min);
    let sq_norm = crate::embedding::sq_norm(k, pn)?;
    Ok(DiffusionCertificate {
        n: atoms.len(),
        eps,
        sq_norm,
        bound: diffusion_bound(k.sup_bound(), atoms.len(), eps),
        max_offdiag,
        min_clearance,
    })
}

/// `g_ξ(x) κ(x, y) g_ξ(y)` with the default field vanishing only at `ξ`.
pub fn annihilating_kernel(base: &Kernel, xi: &Point) -> Result<Kernel> {
    check_dim(base.dim(), xi.dim())?;
    base.scale(ScalarField::c0_bump_at(xi.clone()))
}

/// Like [`annihilating_kernel`] with a caller-supplied field, which must
/// vanish at infinity and have at least one exact zero.
pub fn annihilating_kernel_with(base: &Kernel, field: ScalarField) -> Result<Kernel> {
    if !field.is_c0() {
        return Err(Error::Parameter(
            "scaling field does not vanish at infinity; the scaled kernel would not be C0".into(),
        ));
    }
    if field.zero_set().is_empty() {
        return Err(Error::Parameter(
            "scaling field has no zero to annihilate".into(),
        ));
    }
    base.scale(field)
}

/// `annihilating_kernel(base, ξ) + 1`.
pub fn shifted_annihilating_kernel(base: &Kernel, xi: &Point) -> Result<Kernel> {
    annihilating_kernel(base, xi)?.shift(1.0)
}

/// `⟨δ_x − δ_ξ, δ_y − δ_ξ⟩_base`.
pub fn dirac_centered_kernel(base: &Kernel, xi: &Point) -> Result<Kernel> {
    check_dim(base.dim(), xi.dim())?;
    base.center(&SignedDiscreteMeasure::dirac(xi.clone()), 0.0)
}

/// `μ₊` and `μ₋` have equal mass: two distinct probability measures at MMD ~0.
#[derive(Debug, Clone)]
pub struct EqualMassWitness {
    pub plus: SignedDiscreteMeasure,
    pub minus: SignedDiscreteMeasure,
    pub mmd: f64,
}

#[derive(Debug, Clone)]
pub struct EscapingSequence {
    /// `μₙ = μ₋ + (1 − μ₋(X)) Pₙ`, indexed by `n`.
    pub sequence: MeasureSequence,
    pub diffusing: Vec<SignedDiscreteMeasure>,
    /// `μ₊`, the MMD limit.
    pub target: SignedDiscreteMeasure,
    pub minus: SignedDiscreteMeasure,
    pub minus_mass: f64,
    /// Smallest ball around the centroid of `supp μ₊` that contains it.
    pub support_ball: ExclusionRegion,
    /// Open ball, radius `support_ball.radius + 1`.
    pub open_ball: ExclusionRegion,
    /// Closed ball the diffusing measures avoid, radius `support_ball.radius + 2`.
    pub exclusion: ExclusionRegion,
}

impl EscapingSequence {
    /// Per index `(n, mmd(μₙ, μ₊), (1 − μ₋(X)) ‖Pₙ‖)`.
    pub fn identity_trace(&self, k: &Kernel) -> Result<Vec<(usize, f64, f64)>> {
        self.sequence
            .iter()
            .zip(&self.diffusing)
            .map(|((n, mu_n), pn)| {
                let lhs = mmd(k, mu_n, &self.target)?.value;
                let rhs = (1.0 - self.minus_mass) * norm(k, pn)?;
                Ok((n, lhs, rhs))
            })
            .collect()
    }

    /// `(μ₊(O), μ₋(O), max_n μₙ(O))` for the open ball `O`.
    pub fn open_ball_masses(&self) -> (f64, f64, f64) {
        let o = &self.open_ball;
        let plus = self.target.mass_in_open_ball(&o.center, o.radius);
        let minus = self.minus.mass_in_open_ball(&o.center, o.radius);
        let limsup = self
            .sequence
            .items()
            .iter()
            .map(|m| m.mass_in_open_ball(&o.center, o.radius))
            .fold(f64::NEG_INFINITY, f64::max);
        (plus, minus, limsup)
    }

    /// `limsup μₙ(O) < μ₊(O)`: the sequence cannot converge weakly to `μ₊`.
    pub fn violates_open_set_bound(&self) -> bool {
        let (plus, _, limsup) = self.open_ball_masses();
        limsup < plus
    }
}

#[derive(Debug, Clone)]
pub enum WitnessOutcome {
    EqualMass(EqualMassWitness),
    Escaping(EscapingSequence),
}

/// Builds the MMD-convergent, non-weakly-convergent sequence from a witness
/// `μ ≠ 0` with `‖μ‖_k ≤` [`WITNESS_TOL`].
///
/// `μ` is first normalized so that `μ₊(X) = 1 ≥ μ₋(X)`. When the two parts
/// have equal mass no sequence is needed and [`WitnessOutcome::EqualMass`] is
/// returned.
pub fn escaping_witness_sequence(
    k: &Kernel,
    mu: &SignedDiscreteMeasure,
    n_max: usize,
    dom: &SearchDomain,
) -> Result<WitnessOutcome> {
    check_dim(k.dim(), mu.dim())?;
    if mu.is_empty() {
        return Err(Error::Degenerate("witness measure is zero".into()));
    }
    let mu = mu.normalize_dominant_positive()?;
    let witness_norm = norm(k, &mu)?;
    if witness_norm > WITNESS_TOL {
        return Err(Error::NotAWitness {
            norm: witness_norm,
            tol: WITNESS_TOL,
        });
    }
    let (plus, minus) = mu.jordan_decompose();
    let minus_mass = minus.total_mass();
    if (1.0 - minus_mass).abs() <= PROBABILITY_TOL {
        let d = mmd(k, &plus, &minus)?.value;
        return Ok(WitnessOutcome::EqualMass(EqualMassWitness {
            plus,
            minus,
            mmd: d,
        }));
    }
    if n_max == 0 {
        return Err(Error::Parameter("n_max must be >= 1".into()));
    }

    let dim = k.dim();
    let inv = 1.0 / plus.len() as f64;
    let centroid: Vec<f64> = (0..dim)
        .map(|c| plus.atoms().iter().map(|p| p.coords()[c]).sum::<f64>() * inv)
        .collect();
    let centroid = Point::new(centroid)?;
    let support_radius = plus
        .atoms()
        .iter()
        .map(|p| p.dist(&centroid))
        .fold(0.0, f64::max);
    let support_ball = ExclusionRegion::new(centroid.clone(), support_radius)?;
    let open_ball = ExclusionRegion::new(centroid.clone(), support_radius + 1.0)?;
    let exclusion = ExclusionRegion::new(centroid, support_radius + 2.0)?;

    let mut diffusing = Vec::with_capacity(n_max);
    let mut items = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let pn = diffusing_sequence(
            k,
            n,
            1.0 / n as f64,
            &exclusion,
            dom,
            DEFAULT_CANDIDATE_BUDGET,
        )?;
        items.push(SignedDiscreteMeasure::mixture(
            &[1.0, 1.0 - minus_mass],
            &[minus.clone(), pn.clone()],
        )?);
        diffusing.push(pn);
    }
    Ok(WitnessOutcome::Escaping(EscapingSequence {
        sequence: MeasureSequence::new("escaping witness sequence", items)?,
        diffusing,
        target: plus,
        minus,
        minus_mass,
        support_ball,
        open_ball,
        exclusion,
    }))
}
