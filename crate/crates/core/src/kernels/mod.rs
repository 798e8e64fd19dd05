//! Positive definite kernels on ℝᵈ and the shift / scale / center algebra.
//!
//! A [`Kernel`] is an immutable expression tree. Leaves are radial base
//! families looked up by name in the family registry; inner nodes are
//!
//! - `shift`:  `k(x, y) + c`
//! - `scale`:  `g(x) k(x, y) g(y)`
//! - `center`: `⟨δ_x − P, δ_y − P⟩_k + a = k(x, y) − f_P(x) − f_P(y) + ‖P‖²_k + a`
//!
//! Every node evaluates in a form that is exactly symmetric in `(x, y)`, and
//! [`Kernel::gram`] reproduces [`Kernel::eval`] bit for bit.

mod family;
mod field;
mod spec;

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

pub use family::{
    build_family, family_names, family_param, Gaussian, InverseMultiquadric, Laplacian,
    RadialFamily,
};
pub use field::{FieldSpec, ScalarField};
pub use spec::{BaseSpec, KernelSpec, NodeSpec};

use crate::error::{check_dim, Error, Result};
use crate::measures::SignedDiscreteMeasure;
use crate::point::Point;
use crate::summation::CompensatedSum;

#[derive(Clone)]
pub struct Kernel {
    inner: Arc<KernelInner>,
}

struct KernelInner {
    node: KernelNode,
    dim: usize,
    sup_bound: f64,
    claims_c0: bool,
}

enum KernelNode {
    Base(Arc<dyn RadialFamily>),
    Shift {
        c: f64,
        child: Kernel,
    },
    Scale {
        field: ScalarField,
        child: Kernel,
    },
    Center {
        anchor: SignedDiscreteMeasure,
        a: f64,
        anchor_sq_norm: f64,
        child: Kernel,
    },
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spec = serde_json::to_string(&self.spec()).map_err(|_| fmt::Error)?;
        f.debug_struct("Kernel")
            .field("spec", &spec)
            .field("dim", &self.dim())
            .field("sup_bound", &self.sup_bound())
            .field("claims_c0", &self.claims_c0())
            .finish()
    }
}

impl Kernel {
    fn from_node(node: KernelNode, dim: usize, sup_bound: f64, claims_c0: bool) -> Self {
        Kernel {
            inner: Arc::new(KernelInner {
                node,
                dim,
                sup_bound,
                claims_c0,
            }),
        }
    }

    /// Base kernel from the family registry, e.g. `("gaussian", [("sigma", 1.0)])`.
    pub fn base(family: &str, params: &[(&str, f64)], dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parameter("kernel dimension must be >= 1".into()));
        }
        let params = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let fam = build_family(family, &params)?;
        Ok(Self::from_family(fam, dim))
    }

    pub fn from_family(family: Arc<dyn RadialFamily>, dim: usize) -> Self {
        let sup = family.peak();
        Self::from_node(KernelNode::Base(family), dim, sup, true)
    }

    pub fn gaussian(sigma: f64, dim: usize) -> Result<Self> {
        Self::base("gaussian", &[("sigma", sigma)], dim)
    }

    pub fn laplacian(gamma: f64, dim: usize) -> Result<Self> {
        Self::base("laplacian", &[("gamma", gamma)], dim)
    }

    pub fn inverse_multiquadric(c: f64, dim: usize) -> Result<Self> {
        Self::base("inverse_multiquadric", &[("c", c)], dim)
    }

    /// `k + c` for `c ≥ 0`.
    pub fn shift(&self, c: f64) -> Result<Self> {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::Parameter(format!("shift constant {c} must be >= 0")));
        }
        Ok(Self::from_node(
            KernelNode::Shift {
                c,
                child: self.clone(),
            },
            self.dim(),
            self.sup_bound() + c,
            self.claims_c0() && c == 0.0,
        ))
    }

    /// `g(x) k(x, y) g(y)`.
    pub fn scale(&self, field: ScalarField) -> Result<Self> {
        check_dim(self.dim(), field.dim())?;
        let bounded = self.sup_bound().is_finite();
        let claims_c0 = self.claims_c0() || (field.is_c0() && bounded);
        let sup = self.sup_bound() * field.sup() * field.sup();
        Ok(Self::from_node(
            KernelNode::Scale {
                field,
                child: self.clone(),
            },
            self.dim(),
            sup,
            claims_c0,
        ))
    }

    /// `⟨δ_x − P, δ_y − P⟩_k + a` for a probability measure `P` and `a ≥ 0`.
    pub fn center(&self, anchor: &SignedDiscreteMeasure, a: f64) -> Result<Self> {
        check_dim(self.dim(), anchor.dim())?;
        anchor.require_probability("centering measure")?;
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::Parameter(format!(
                "centering offset {a} must be >= 0"
            )));
        }
        let mut acc = CompensatedSum::new();
        for (p, w) in anchor.iter() {
            for (q, v) in anchor.iter() {
                acc.add(w * v * self.eval(p, q));
            }
        }
        let anchor_sq_norm = acc.value();
        // ‖δ_x − P‖ ≤ ‖δ_x‖ + ‖P‖ ≤ 2 sqrt(sup k)
        let sup = 4.0 * self.sup_bound() + a;
        Ok(Self::from_node(
            KernelNode::Center {
                anchor: anchor.clone(),
                a,
                anchor_sq_norm,
                child: self.clone(),
            },
            self.dim(),
            sup,
            false,
        ))
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    /// Upper bound on `sup_x k(x, x)`, which also bounds `|k(x, y)|`.
    pub fn sup_bound(&self) -> f64 {
        self.inner.sup_bound
    }

    /// Whether `k(x, ·)` is asserted to vanish at infinity.
    pub fn claims_c0(&self) -> bool {
        self.inner.claims_c0
    }

    /// For a translation-invariant base kernel: the distance beyond which
    /// `|k| ≤ eps`. `None` for composed kernels.
    pub fn decay_radius(&self, eps: f64) -> Option<f64> {
        match &self.inner.node {
            KernelNode::Base(f) => Some(f.decay_radius(eps)),
            _ => None,
        }
    }

    pub fn eval(&self, x: &Point, y: &Point) -> f64 {
        debug_assert_eq!(x.dim(), self.dim());
        debug_assert_eq!(y.dim(), self.dim());
        match &self.inner.node {
            KernelNode::Base(f) => f.value(x.sq_dist(y)),
            KernelNode::Shift { c, child } => child.eval(x, y) + c,
            KernelNode::Scale { field, child } => {
                child.eval(x, y) * (field.eval(x) * field.eval(y))
            }
            KernelNode::Center {
                anchor,
                a,
                anchor_sq_norm,
                child,
            } => {
                let fx = anchor_embedding(child, anchor, x);
                let fy = anchor_embedding(child, anchor, y);
                centered(child.eval(x, y), fx, fy, *anchor_sq_norm, *a)
            }
        }
    }

    pub fn try_eval(&self, x: &Point, y: &Point) -> Result<f64> {
        check_dim(self.dim(), x.dim())?;
        check_dim(self.dim(), y.dim())?;
        Ok(self.eval(x, y))
    }

    /// Dense matrix `G[i][j] = k(a[i], b[j])`.
    pub fn gram(&self, a: &[Point], b: &[Point]) -> Result<DMatrix<f64>> {
        for p in a.iter().chain(b) {
            check_dim(self.dim(), p.dim())?;
        }
        Ok(self.gram_unchecked(a, b))
    }

    fn gram_unchecked(&self, a: &[Point], b: &[Point]) -> DMatrix<f64> {
        match &self.inner.node {
            KernelNode::Base(f) => {
                let rows: Vec<f64> = a
                    .par_iter()
                    .flat_map_iter(|x| b.iter().map(move |y| f.value(x.sq_dist(y))))
                    .collect();
                DMatrix::from_row_slice(a.len(), b.len(), &rows)
            }
            KernelNode::Shift { c, child } => child.gram_unchecked(a, b).map(|v| v + c),
            KernelNode::Scale { field, child } => {
                let ga: Vec<f64> = a.iter().map(|x| field.eval(x)).collect();
                let gb: Vec<f64> = b.iter().map(|y| field.eval(y)).collect();
                let mut g = child.gram_unchecked(a, b);
                for j in 0..b.len() {
                    for i in 0..a.len() {
                        g[(i, j)] *= ga[i] * gb[j];
                    }
                }
                g
            }
            KernelNode::Center {
                anchor,
                a: offset,
                anchor_sq_norm,
                child,
            } => {
                let fa: Vec<f64> = a
                    .par_iter()
                    .map(|x| anchor_embedding(child, anchor, x))
                    .collect();
                let fb: Vec<f64> = b
                    .par_iter()
                    .map(|y| anchor_embedding(child, anchor, y))
                    .collect();
                let mut g = child.gram_unchecked(a, b);
                for j in 0..b.len() {
                    for i in 0..a.len() {
                        g[(i, j)] = centered(g[(i, j)], fa[i], fb[j], *anchor_sq_norm, *offset);
                    }
                }
                g
            }
        }
    }

    pub fn spec(&self) -> KernelSpec {
        match &self.inner.node {
            KernelNode::Base(f) => KernelSpec::Base(BaseSpec {
                family: f.name().to_string(),
                dim: self.dim(),
                params: f.params(),
            }),
            KernelNode::Shift { c, child } => KernelSpec::Node(NodeSpec::Shift {
                c: *c,
                child: Box::new(child.spec()),
            }),
            KernelNode::Scale { field, child } => KernelSpec::Node(NodeSpec::Scale {
                field: field.spec(),
                child: Box::new(child.spec()),
            }),
            KernelNode::Center {
                anchor, a, child, ..
            } => KernelSpec::Node(NodeSpec::Center {
                a: *a,
                p: anchor.to_rows(),
                child: Box::new(child.spec()),
            }),
        }
    }

    pub fn from_spec(spec: &KernelSpec) -> Result<Self> {
        match spec {
            KernelSpec::Base(b) => {
                if b.dim == 0 {
                    return Err(Error::Parameter("kernel dimension must be >= 1".into()));
                }
                Ok(Self::from_family(
                    build_family(&b.family, &b.params)?,
                    b.dim,
                ))
            }
            KernelSpec::Node(NodeSpec::Shift { c, child }) => Self::from_spec(child)?.shift(*c),
            KernelSpec::Node(NodeSpec::Scale { field, child }) => {
                Self::from_spec(child)?.scale(ScalarField::from_spec(field)?)
            }
            KernelSpec::Node(NodeSpec::Center { a, p, child }) => {
                let child = Self::from_spec(child)?;
                let anchor = SignedDiscreteMeasure::from_rows(child.dim(), p)?;
                child.center(&anchor, *a)
            }
        }
    }

    /// Short human-readable form of the expression tree.
    pub fn describe(&self) -> String {
        match &self.inner.node {
            KernelNode::Base(f) => {
                let params: Vec<String> =
                    f.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("{}({})", f.name(), params.join(","))
            }
            KernelNode::Shift { c, child } => format!("shift({}, {c})", child.describe()),
            KernelNode::Scale { field, child } => {
                let name = match field.spec() {
                    FieldSpec::C0BumpAt { .. } => "c0_bump_at",
                    FieldSpec::C0MultiZero { .. } => "c0_multi_zero",
                    FieldSpec::GaussianEnvelope { .. } => "gaussian_envelope",
                    FieldSpec::OneMinusGaussian { .. } => "one_minus_gaussian",
                };
                format!("scale({}, {name})", child.describe())
            }
            KernelNode::Center {
                anchor, a, child, ..
            } => {
                format!(
                    "center({}, P[{} atoms], a={a})",
                    child.describe(),
                    anchor.len()
                )
            }
        }
    }
}

/// `f_P(x) = Σ w k(p, x)`, accumulated in anchor order.
fn anchor_embedding(k: &Kernel, anchor: &SignedDiscreteMeasure, x: &Point) -> f64 {
    let mut acc = CompensatedSum::new();
    for (p, w) in anchor.iter() {
        acc.add(w * k.eval(p, x));
    }
    acc.value()
}

/// PSD slack for an `n × n` Gram matrix: `1e-8 · n · sup_bound`.
/// `k − f_P(x) − f_P(y) + ‖P‖² + a`, grouped as `(k − f_P(y)) − (f_P(x) − ‖P‖²)`
/// or its mirror, whichever is smaller in magnitude (ties broken by value).
/// The choice depends only on the unordered pair, so the result is symmetric,
/// and it is exactly `a` when `P = δ_x`.
fn centered(k: f64, fx: f64, fy: f64, n2: f64, a: f64) -> f64 {
    let v1 = (k - fy) - (fx - n2);
    let v2 = (k - fx) - (fy - n2);
    let pick = if v1.abs() < v2.abs() || (v1.abs() == v2.abs() && v1 >= v2) {
        v1
    } else {
        v2
    };
    pick + a
}

pub fn psd_tolerance(n: usize, sup_bound: f64) -> f64 {
    1e-8 * n as f64 * sup_bound
}

pub fn min_eigenvalue(g: &DMatrix<f64>) -> f64 {
    if g.nrows() == 0 {
        return 0.0;
    }
    SymmetricEigen::new(g.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy)]
pub struct PsdCheck {
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub asymmetry: f64,
}

impl PsdCheck {
    pub fn passes(&self) -> bool {
        self.min_eigenvalue >= -self.tolerance && self.asymmetry == 0.0
    }
}

/// Builds the Gram matrix on `points` and reports its smallest eigenvalue.
pub fn check_psd(k: &Kernel, points: &[Point]) -> Result<PsdCheck> {
    let g = k.gram(points, points)?;
    let asymmetry = (&g - g.transpose()).amax();
    Ok(PsdCheck {
        min_eigenvalue: min_eigenvalue(&g),
        tolerance: psd_tolerance(points.len(), k.sup_bound()),
        asymmetry,
    })
}

/// Sampled decay of `y ↦ |k(x, y)|` over spheres `‖y‖ = r`.
#[derive(Debug, Clone)]
pub struct DecayTrace {
    pub radii: Vec<f64>,
    pub sup_values: Vec<f64>,
    pub eps: f64,
}

impl DecayTrace {
    /// Evidence only: the sampled maximum at the largest radius is below `eps`.
    pub fn passes(&self) -> bool {
        self.sup_values.last().is_some_and(|&v| v < self.eps)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.sup_values.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Samples `max |k(x, y)|` over `‖y‖ = r` for each radius. In one dimension the
/// sphere is `{−r, r}`; otherwise directions are the `±eᵢ` axes plus
/// `samples_per_radius` pseudo-random unit vectors from a fixed seed.
pub fn c0_probe(
    k: &Kernel,
    x: &Point,
    radii: &[f64],
    samples_per_radius: usize,
    eps: f64,
) -> Result<DecayTrace> {
    check_dim(k.dim(), x.dim())?;
    if radii.is_empty() {
        return Err(Error::Parameter(
            "c0_probe needs at least one radius".into(),
        ));
    }
    if radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
        return Err(Error::Parameter("probe radii must be positive".into()));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Parameter(
            "probe radii must be strictly increasing".into(),
        ));
    }
    let dim = k.dim();
    let mut directions: Vec<Vec<f64>> = Vec::new();
    for i in 0..dim {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; dim];
            e[i] = s;
            directions.push(e);
        }
    }
    if dim > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0c0_0c0);
        for _ in 0..samples_per_radius {
            let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            if n > 0.0 {
                directions.push(v.into_iter().map(|c| c / n).collect());
            }
        }
    }
    let origin = Point::origin(dim);
    let sup_values = radii
        .iter()
        .map(|&r| {
            directions
                .iter()
                .map(|d| k.eval(x, &origin.offset(d, r)).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(DecayTrace {
        radii: radii.to_vec(),
        sup_values,
        eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64) -> Point {
        Point::scalar(x)
    }

    fn g1() -> Kernel {
        Kernel::gaussian(1.0, 1).unwrap()
    }

    #[test]
    fn base_kernel_values() {
        let k = g1();
        assert_eq!(k.eval(&p(0.0), &p(0.0)), 1.0);
        assert!((k.eval(&p(0.0), &p(1.0)) - 0.606_530_659_712_633_4).abs() < 1e-15);
        let l = Kernel::laplacian(1.0, 1).unwrap();
        assert!((l.eval(&p(0.0), &p(2.0)) - 0.135_335_283_236_612_7).abs() < 1e-15);
        assert!(k.claims_c0());
        assert_eq!(k.sup_bound(), 1.0);
    }

    #[test]
    fn base_kernel_parameter_errors() {
        assert!(Kernel::gaussian(0.0, 1).is_err());
        assert!(Kernel::laplacian(-2.0, 1).is_err());
        assert!(Kernel::inverse_multiquadric(f64::NAN, 1).is_err());
        assert!(Kernel::gaussian(1.0, 0).is_err());
    }

    #[test]
    fn shift_behaviour() {
        let k = g1();
        let s = k.shift(1.0).unwrap();
        assert_eq!(s.eval(&p(0.0), &p(0.0)), 2.0);
        assert_eq!(s.sup_bound(), 2.0);
        assert!(!s.claims_c0());
        assert!(k.shift(-0.1).is_err());

        let zero = k.shift(0.0).unwrap();
        assert!(zero.claims_c0());
        for i in -10..10 {
            for j in -10..10 {
                let (x, y) = (p(i as f64 * 0.37), p(j as f64 * 0.41));
                assert_eq!(zero.eval(&x, &y), k.eval(&x, &y));
            }
        }
    }

    #[test]
    fn scale_behaviour() {
        let xi = p(0.3);
        let s = g1().scale(ScalarField::c0_bump_at(xi.clone())).unwrap();
        for y in [-2.0, 0.0, 0.3, 1.0, 7.5] {
            assert_eq!(s.eval(&xi, &p(y)), 0.0);
        }
        assert!(s.claims_c0());

        let env = g1()
            .scale(ScalarField::gaussian_envelope(p(0.0), 1.0).unwrap())
            .unwrap();
        assert!((env.eval(&p(1.0), &p(1.0)) - (-2.0f64).exp()).abs() < 1e-16);

        let shifted = g1().shift(1.0).unwrap();
        let not_c0 = shifted
            .scale(ScalarField::one_minus_gaussian(p(0.0)))
            .unwrap();
        assert!(!not_c0.claims_c0());
        let c0_again = shifted.scale(ScalarField::c0_bump_at(p(0.0))).unwrap();
        assert!(c0_again.claims_c0());
        assert_eq!(c0_again.sup_bound(), 2.0);
    }

    #[test]
    fn center_behaviour() {
        let delta0 = SignedDiscreteMeasure::dirac(p(0.0));
        let c = g1().center(&delta0, 0.0).unwrap();
        // k(1,1) - 2k(1,0) + k(0,0)
        let expected = 2.0 - 2.0 * (-0.5f64).exp();
        assert!((c.eval(&p(1.0), &p(1.0)) - expected).abs() < 1e-15);
        assert!((expected - 0.786_938_680_574_733_1).abs() < 1e-15);
        for y in [-3.0, 0.0, 0.5, 2.0] {
            assert_eq!(c.eval(&p(0.0), &p(y)), 0.0);
        }
        assert!(!c.claims_c0());

        let not_prob = SignedDiscreteMeasure::new(1, vec![p(0.0)], vec![0.5]).unwrap();
        assert!(matches!(
            g1().center(&not_prob, 0.0),
            Err(Error::Measure(_))
        ));
        assert!(g1().center(&delta0, -1.0).is_err());
    }

    #[test]
    fn gram_matches_eval_bitwise() {
        let pts: Vec<Point> = (0..9).map(|i| p(i as f64 * 0.77 - 3.0)).collect();
        let anchor =
            SignedDiscreteMeasure::new(1, vec![p(0.1), p(-1.2)], vec![0.25, 0.75]).unwrap();
        let kernels = vec![
            g1(),
            g1().shift(0.5).unwrap(),
            g1().scale(ScalarField::c0_bump_at(p(0.0))).unwrap(),
            g1().center(&anchor, 1.0).unwrap(),
            g1().scale(ScalarField::c0_bump_at(p(1.0)))
                .unwrap()
                .center(&anchor, 0.0)
                .unwrap()
                .shift(2.0)
                .unwrap(),
        ];
        for k in kernels {
            let g = k.gram(&pts, &pts[2..]).unwrap();
            for (i, x) in pts.iter().enumerate() {
                for (j, y) in pts[2..].iter().enumerate() {
                    assert_eq!(g[(i, j)].to_bits(), k.eval(x, y).to_bits());
                }
            }
            let sq = k.gram(&pts, &pts).unwrap();
            assert_eq!((&sq - sq.transpose()).amax(), 0.0);
        }
    }

    #[test]
    fn gram_singleton_and_dim_errors() {
        let k = g1();
        let g = k.gram(&[p(0.4)], &[p(0.4)]).unwrap();
        assert_eq!(g.shape(), (1, 1));
        assert_eq!(g[(0, 0)], 1.0);
        assert!(matches!(
            k.gram(&[Point::origin(2)], &[p(0.0)]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn random_gaussian_gram_is_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let k = Kernel::gaussian(1.0, 2).unwrap();
        let pts: Vec<Point> = (0..50)
            .map(|_| Point::new(vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)]).unwrap())
            .collect();
        let check = check_psd(&k, &pts).unwrap();
        assert!(check.min_eigenvalue >= -1e-8, "{check:?}");
        assert!(check.passes());
    }

    #[test]
    fn c0_probe_gaussian() {
        let t = c0_probe(&g1(), &p(0.0), &[1.0, 2.0, 4.0], 8, 1e-3).unwrap();
        let expect = [(-0.5f64).exp(), (-2.0f64).exp(), (-8.0f64).exp()];
        for (v, e) in t.sup_values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-16);
        }
        assert!(t.passes());
    }

    #[test]
    fn c0_probe_shift_never_decays() {
        let k = g1().shift(1.0).unwrap();
        let t = c0_probe(&k, &p(0.0), &[1.0, 10.0, 100.0, 1000.0], 8, 1e-3).unwrap();
        assert!(t.sup_values.iter().all(|&v| v >= 1.0));
        assert!(!t.passes());
    }

    #[test]
    fn c0_probe_laplacian_monotone() {
        let radii: Vec<f64> = (1..=20).map(f64::from).collect();
        let k = Kernel::laplacian(1.0, 1).unwrap();
        let t = c0_probe(&k, &p(0.0), &radii, 4, 1e-3).unwrap();
        assert!(t.sup_values.windows(2).all(|w| w[1] < w[0]));
        assert!((t.sup_values[19] - (-20.0f64).exp()).abs() < 1e-20);
    }

    #[test]
    fn c0_probe_multidim_and_errors() {
        let k = Kernel::gaussian(1.0, 3).unwrap();
        let t = c0_probe(&k, &Point::origin(3), &[1.0, 5.0], 16, 1e-3).unwrap();
        assert!(t.passes());
        assert!(c0_probe(&k, &Point::origin(3), &[], 4, 1e-3).is_err());
        assert!(c0_probe(&k, &Point::origin(3), &[2.0, 1.0], 4, 1e-3).is_err());
        assert!(c0_probe(&k, &Point::origin(2), &[1.0], 4, 1e-3).is_err());
    }

    #[test]
    fn spec_json_example_parses() {
        let json = r#"{"op":"shift","c":1.0,"child":{"op":"scale","g":"c0_bump_at","xi":[0.0],
                       "child":{"family":"gaussian","sigma":1.0,"dim":1}}}"#;
        let spec: KernelSpec = serde_json::from_str(json).unwrap();
        let k = Kernel::from_spec(&spec).unwrap();
        assert_eq!(k.spec(), spec);
        assert_eq!(k.eval(&p(0.0), &p(3.0)), 1.0);
        assert_eq!(
            k.describe(),
            "shift(scale(gaussian(sigma=1), c0_bump_at), 1)"
        );
    }
}
