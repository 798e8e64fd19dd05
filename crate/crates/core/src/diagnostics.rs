//! Convergence probes on finite measure sequences.
//!
//! A [`ConvergenceReport`] traces, per index `n`, the MMD to a target, the
//! discrepancy `|μₙ(f) − target(f)|` for each function of a test battery, the
//! mass inside balls around a center, and the total mass. Verdicts are
//! evidence read off the finite trace, never proofs:
//!
//! - a trace *converges* iff its final value is `≤ threshold` and, across the
//!   trailing half, no step increases by more than `growth_slack` (relative)
//!   plus `abs_floor` (for the MMD trace, plus its round-off resolution
//!   [`mmd_resolution`] when that is larger);
//! - *vague* uses the compactly supported and `C₀` functions, *weak* adds the
//!   bounded ones (it is undefined without the constant function 1), *weak
//!   RKHS* uses the kernel sections `k(z, ·)`;
//! - *mass escapes* iff total mass is constant and the final deficit
//!   `total_mass − mass_in_ball(largest R)` is at least `escape_deficit`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::mmd;
use crate::error::{check_dim, Error, Result};
use crate::kernels::Kernel;
use crate::measures::{MeasureSequence, SignedDiscreteMeasure};
use crate::point::Point;
use crate::summation::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionClass {
    /// Compactly supported.
    BumpCc,
    /// Vanishes at infinity.
    C0,
    /// Bounded continuous.
    Cb,
    /// Kernel section `k(z, ·)`.
    Rkhs,
}

impl FunctionClass {
    pub fn tag(self) -> &'static str {
        match self {
            FunctionClass::BumpCc => "bump_cc",
            FunctionClass::C0 => "c0",
            FunctionClass::Cb => "cb",
            FunctionClass::Rkhs => "rkhs",
        }
    }
}

#[derive(Debug, Clone)]
enum Shape {
    Constant(f64),
    Bump {
        center: Point,
        inner_r: f64,
        outer_r: f64,
    },
    GaussianBlob {
        center: Point,
        width: f64,
    },
    KernelSection {
        kernel: Kernel,
        at: Point,
    },
}

#[derive(Debug, Clone)]
pub struct TestFunction {
    shape: Shape,
    class: FunctionClass,
}

impl TestFunction {
    pub fn constant(c: f64) -> Self {
        TestFunction {
            shape: Shape::Constant(c),
            class: FunctionClass::Cb,
        }
    }

    /// 1 on `‖x − c‖ ≤ inner_r`, 0 beyond `outer_r`, linear in between.
    pub fn bump(center: Point, inner_r: f64, outer_r: f64) -> Result<Self> {
        if !(inner_r >= 0.0) || !(outer_r > inner_r) || !outer_r.is_finite() {
            return Err(Error::Parameter(format!(
                "bump radii must satisfy 0 <= inner < outer (got {inner_r}, {outer_r})"
            )));
        }
        Ok(TestFunction {
            shape: Shape::Bump {
                center,
                inner_r,
                outer_r,
            },
            class: FunctionClass::BumpCc,
        })
    }

    /// `exp(−‖x − c‖² / w²)`.
    pub fn gaussian_blob(center: Point, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::Parameter(format!(
                "blob width {width} must be positive"
            )));
        }
        Ok(TestFunction {
            shape: Shape::GaussianBlob { center, width },
            class: FunctionClass::C0,
        })
    }

    /// `f = k(z, ·)`, the embedding of `δ_z`.
    pub fn kernel_section(kernel: &Kernel, at: Point) -> Result<Self> {
        check_dim(kernel.dim(), at.dim())?;
        Ok(TestFunction {
            shape: Shape::KernelSection {
                kernel: kernel.clone(),
                at,
            },
            class: FunctionClass::Rkhs,
        })
    }

    pub fn class(&self) -> FunctionClass {
        self.class
    }

    pub fn is_constant_one(&self) -> bool {
        matches!(self.shape, Shape::Constant(c) if c == 1.0)
    }

    pub fn eval(&self, x: &Point) -> f64 {
        match &self.shape {
            Shape::Constant(c) => *c,
            Shape::Bump {
                center,
                inner_r,
                outer_r,
            } => {
                let r = x.dist(center);
                if r <= *inner_r {
                    1.0
                } else if r >= *outer_r {
                    0.0
                } else {
                    (outer_r - r) / (outer_r - inner_r)
                }
            }
            Shape::GaussianBlob { center, width } => (-x.sq_dist(center) / (width * width)).exp(),
            Shape::KernelSection { kernel, at } => kernel.eval(at, x),
        }
    }

    pub fn describe(&self) -> String {
        let c = |p: &Point| {
            let parts: Vec<String> = p.coords().iter().map(|v| format!("{v}")).collect();
            format!("({})", parts.join(","))
        };
        match &self.shape {
            Shape::Constant(v) => format!("cb constant {v}"),
            Shape::Bump {
                center,
                inner_r,
                outer_r,
            } => format!(
                "bump_cc center={} inner={inner_r} outer={outer_r}",
                c(center)
            ),
            Shape::GaussianBlob { center, width } => {
                format!("c0 gaussian_blob center={} width={width}", c(center))
            }
            Shape::KernelSection { kernel, at } => {
                format!("rkhs section k(z,.) z={} k={}", c(at), kernel.describe())
            }
        }
    }
}

/// `μ(f) = Σ wᵢ f(aᵢ)`.
pub fn integrate(mu: &SignedDiscreteMeasure, f: &TestFunction) -> f64 {
    let mut acc = CompensatedSum::new();
    for (a, w) in mu.iter() {
        acc.add(w * f.eval(a));
    }
    acc.value()
}

pub fn try_integrate(mu: &SignedDiscreteMeasure, f: &TestFunction, dim: usize) -> Result<f64> {
    check_dim(dim, mu.dim())?;
    Ok(integrate(mu, f))
}

/// Constant 1; bumps `(0.5, 1.0)` at each target atom; bumps `(R/2, R)` at the
/// origin for `R ∈ {2, 4, 8}`; and, when the kernel claims `C₀` sections, five
/// kernel sections at `z ∈ {−2, −1, 0, 1, 2}·e₁`.
pub fn default_battery(target: &SignedDiscreteMeasure, k: &Kernel) -> Result<Vec<TestFunction>> {
    check_dim(k.dim(), target.dim())?;
    let dim = k.dim();
    let mut battery = vec![TestFunction::constant(1.0)];
    for a in target.atoms() {
        battery.push(TestFunction::bump(a.clone(), 0.5, 1.0)?);
    }
    for r in [2.0, 4.0, 8.0] {
        battery.push(TestFunction::bump(Point::origin(dim), r / 2.0, r)?);
    }
    if k.claims_c0() {
        for z in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            battery.push(TestFunction::kernel_section(k, Point::on_axis(dim, z))?);
        }
    }
    Ok(battery)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    pub mmd: f64,
    pub discrepancy: f64,
    pub growth_slack: f64,
    pub abs_floor: f64,
    pub escape_deficit: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            mmd: 1e-2,
            discrepancy: 1e-2,
            growth_slack: 0.10,
            abs_floor: 1e-12,
            escape_deficit: 0.5,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("mmd", self.mmd),
            ("discrepancy", self.discrepancy),
            ("growth_slack", self.growth_slack),
            ("abs_floor", self.abs_floor),
            ("escape_deficit", self.escape_deficit),
        ];
        for (name, v) in all {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Parameter(format!(
                    "threshold {name} = {v} must be finite and >= 0"
                )));
            }
        }
        Ok(())
    }
}

/// Final value `≤ threshold` and no large increase across the trailing half.
pub fn trace_converges(trace: &[f64], threshold: f64, th: &Thresholds) -> bool {
    trace_converges_above(trace, threshold, th, th.abs_floor)
}

/// Smallest MMD that round-off in the squared sum can distinguish from its
/// neighbours: `(‖μ‖_TV + ‖ν‖_TV) · sqrt(8 ε sup k)`.
pub fn mmd_resolution(k: &Kernel, mu: &SignedDiscreteMeasure, nu: &SignedDiscreteMeasure) -> f64 {
    (mu.total_variation() + nu.total_variation()) * (8.0 * f64::EPSILON * k.sup_bound()).sqrt()
}

fn trace_converges_above(trace: &[f64], threshold: f64, th: &Thresholds, floor: f64) -> bool {
    let Some(&last) = trace.last() else {
        return false;
    };
    if !(last <= threshold) {
        return false;
    }
    let tail = &trace[trace.len() / 2..];
    tail.windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + th.growth_slack) + floor)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub n: usize,
    pub mmd: f64,
    pub discrepancies: Vec<f64>,
    pub ball_masses: Vec<f64>,
    pub total_mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdicts {
    pub mmd_converges: bool,
    pub weak_rkhs_converges: Option<bool>,
    pub vague_converges: bool,
    /// `None` when the battery lacks the constant function 1.
    pub weak_converges: Option<bool>,
    pub mass_escapes: bool,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub label: String,
    pub kernel: String,
    pub battery: Vec<(FunctionClass, String)>,
    pub ball_center: Point,
    pub radii: Vec<f64>,
    pub rows: Vec<ReportRow>,
    pub thresholds: Thresholds,
    /// Threshold actually applied to the MMD trace.
    pub mmd_threshold: f64,
    /// Largest [`mmd_resolution`] along the sequence.
    pub mmd_floor: f64,
    pub verdicts: Verdicts,
}

pub struct ProbeSpec<'a> {
    pub battery: &'a [TestFunction],
    pub radii: &'a [f64],
    pub ball_center: Point,
    pub thresholds: Thresholds,
    /// Overrides `thresholds.mmd` for the MMD trace.
    pub mmd_threshold: Option<f64>,
}

impl<'a> ProbeSpec<'a> {
    pub fn new(battery: &'a [TestFunction], radii: &'a [f64], dim: usize) -> Self {
        ProbeSpec {
            battery,
            radii,
            ball_center: Point::origin(dim),
            thresholds: Thresholds::default(),
            mmd_threshold: None,
        }
    }
}

/// Traces every probe along `seq` and derives the verdicts.
pub fn probe_sequence(
    seq: &MeasureSequence,
    target: &SignedDiscreteMeasure,
    k: &Kernel,
    spec: &ProbeSpec<'_>,
) -> Result<ConvergenceReport> {
    let Some(dim) = seq.dim() else {
        return Err(Error::Parameter("cannot probe an empty sequence".into()));
    };
    check_dim(dim, target.dim())?;
    check_dim(dim, k.dim())?;
    check_dim(dim, spec.ball_center.dim())?;
    if spec.battery.is_empty() {
        return Err(Error::Parameter("test battery is empty".into()));
    }
    spec.thresholds.validate()?;
    let target_values: Vec<f64> = spec.battery.iter().map(|f| integrate(target, f)).collect();

    let rows = seq
        .indices()
        .par_iter()
        .zip(seq.items().par_iter())
        .map(|(&n, mu)| {
            let discrepancies = spec
                .battery
                .iter()
                .zip(&target_values)
                .map(|(f, t)| (integrate(mu, f) - t).abs())
                .collect();
            let ball_masses = spec
                .radii
                .iter()
                .map(|&r| mu.mass_in_ball(&spec.ball_center, r))
                .collect();
            Ok(ReportRow {
                n,
                mmd: mmd(k, mu, target)?.value,
                discrepancies,
                ball_masses,
                total_mass: mu.total_mass(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mmd_threshold = spec.mmd_threshold.unwrap_or(spec.thresholds.mmd);
    let mmd_floor = seq
        .items()
        .iter()
        .map(|mu| mmd_resolution(k, mu, target))
        .fold(spec.thresholds.abs_floor, f64::max);
    let verdicts = compute_verdicts(
        &rows,
        spec.battery,
        spec.radii,
        &spec.thresholds,
        mmd_threshold,
        mmd_floor,
    );
    Ok(ConvergenceReport {
        label: seq.label.clone(),
        kernel: k.describe(),
        battery: spec
            .battery
            .iter()
            .map(|f| (f.class(), f.describe()))
            .collect(),
        ball_center: spec.ball_center.clone(),
        radii: spec.radii.to_vec(),
        rows,
        thresholds: spec.thresholds,
        mmd_threshold,
        mmd_floor,
        verdicts,
    })
}

fn classes_converge(
    rows: &[ReportRow],
    battery: &[TestFunction],
    th: &Thresholds,
    include: impl Fn(FunctionClass) -> bool,
) -> Option<bool> {
    let mut any = false;
    let mut all = true;
    for (j, f) in battery.iter().enumerate() {
        if !include(f.class()) {
            continue;
        }
        any = true;
        let trace: Vec<f64> = rows.iter().map(|r| r.discrepancies[j]).collect();
        all &= trace_converges(&trace, th.discrepancy, th);
    }
    any.then_some(all)
}

fn compute_verdicts(
    rows: &[ReportRow],
    battery: &[TestFunction],
    radii: &[f64],
    th: &Thresholds,
    mmd_threshold: f64,
    mmd_floor: f64,
) -> Verdicts {
    let mmd_trace: Vec<f64> = rows.iter().map(|r| r.mmd).collect();
    let mmd_converges = trace_converges_above(&mmd_trace, mmd_threshold, th, mmd_floor);
    let weak_rkhs_converges = classes_converge(rows, battery, th, |c| c == FunctionClass::Rkhs);
    let vague_converges = classes_converge(rows, battery, th, |c| {
        matches!(c, FunctionClass::BumpCc | FunctionClass::C0)
    })
    .unwrap_or(true);
    let weak_converges = if battery.iter().any(TestFunction::is_constant_one) {
        classes_converge(rows, battery, th, |c| c != FunctionClass::Rkhs)
    } else {
        None
    };

    let first_mass = rows.first().map_or(0.0, |r| r.total_mass);
    let mass_constant = rows
        .iter()
        .all(|r| (r.total_mass - first_mass).abs() <= 1e-12 * (1.0 + first_mass.abs()));
    let mass_escapes = match (rows.last(), radii.len()) {
        (Some(last), nr) if nr > 0 => {
            let largest = radii
                .iter()
                .enumerate()
                .fold(
                    (0, f64::NEG_INFINITY),
                    |acc, (i, &r)| if r > acc.1 { (i, r) } else { acc },
                )
                .0;
            mass_constant && last.total_mass - last.ball_masses[largest] >= th.escape_deficit
        }
        _ => false,
    };
    Verdicts {
        mmd_converges,
        weak_rkhs_converges,
        vague_converges,
        weak_converges,
        mass_escapes,
    }
}

impl ConvergenceReport {
    /// Recomputes verdicts from the stored rows (same rule as `probe_sequence`).
    pub fn recompute_verdicts(&self, battery: &[TestFunction]) -> Verdicts {
        compute_verdicts(
            &self.rows,
            battery,
            &self.radii,
            &self.thresholds,
            self.mmd_threshold,
            self.mmd_floor,
        )
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["n".to_string(), "mmd".to_string()];
        h.extend((1..=self.battery.len()).map(|i| format!("f_{i}")));
        h.extend(self.radii.iter().map(|r| format!("ball_{r}")));
        h.push("total_mass".into());
        h
    }

    pub fn verdict_lines(&self) -> Vec<String> {
        let v = &self.verdicts;
        let opt = |o: Option<bool>| o.map_or("undefined".to_string(), |b| b.to_string());
        let th = &self.thresholds;
        vec![
            format!(
                "mmd_converges={} threshold={:e}",
                v.mmd_converges, self.mmd_threshold
            ),
            format!(
                "weak_rkhs_converges={} threshold={:e}",
                opt(v.weak_rkhs_converges),
                th.discrepancy
            ),
            format!(
                "vague_converges={} threshold={:e}",
                v.vague_converges, th.discrepancy
            ),
            format!(
                "weak_converges={} threshold={:e}",
                opt(v.weak_converges),
                th.discrepancy
            ),
            format!(
                "mass_escapes={} deficit_threshold={}",
                v.mass_escapes, th.escape_deficit
            ),
        ]
    }

    /// CSV with one row per index, then a `#`-prefixed block listing the
    /// battery and the verdicts.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header())?;
        for r in &self.rows {
            let mut rec = vec![r.n.to_string(), fmt_num(r.mmd)];
            rec.extend(r.discrepancies.iter().map(|&v| fmt_num(v)));
            rec.extend(r.ball_masses.iter().map(|&v| fmt_num(v)));
            rec.push(fmt_num(r.total_mass));
            w.write_record(rec)?;
        }
        let mut out = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        writeln!(out, "# sequence: {}", self.label)?;
        writeln!(out, "# kernel: {}", self.kernel)?;
        for (i, (_, d)) in self.battery.iter().enumerate() {
            writeln!(out, "# f_{}: {d}", i + 1)?;
        }
        writeln!(
            out,
            "# rule: converges iff final <= threshold and trailing-half steps grow by at most {} (relative) + {:e}",
            self.thresholds.growth_slack, self.thresholds.abs_floor
        )?;
        writeln!(out, "# mmd trace floor: {:e}", self.mmd_floor)?;
        writeln!(
            out,
            "# verdicts are evidence from a finite trace, not proofs"
        )?;
        for line in self.verdict_lines() {
            writeln!(out, "# {line}")?;
        }
        Ok(())
    }
}

/// Shortest round-trip exponent form, stable across runs.
pub fn fmt_num(v: f64) -> String {
    format!("{v:e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64) -> Point {
        Point::scalar(x)
    }

    fn d(x: f64) -> SignedDiscreteMeasure {
        SignedDiscreteMeasure::dirac(p(x))
    }

    #[test]
    fn bump_values() {
        let f = TestFunction::bump(p(0.0), 1.0, 2.0).unwrap();
        assert_eq!(f.eval(&p(0.0)), 1.0);
        assert_eq!(f.eval(&p(1.5)), 0.5);
        assert_eq!(f.eval(&p(-1.5)), 0.5);
        assert_eq!(f.eval(&p(2.0)), 0.0);
        assert_eq!(f.eval(&p(7.0)), 0.0);
        assert!(TestFunction::bump(p(0.0), 2.0, 1.0).is_err());
        assert!(TestFunction::bump(p(0.0), 1.0, 1.0).is_err());
        assert!(TestFunction::bump(p(0.0), -1.0, 1.0).is_err());
    }

    #[test]
    fn integration() {
        let f = TestFunction::bump(p(0.0), 1.0, 2.0).unwrap();
        assert_eq!(integrate(&d(1.5), &f), f.eval(&p(1.5)));
        let mu = SignedDiscreteMeasure::new(1, vec![p(0.0), p(5.0)], vec![0.4, 0.6]).unwrap();
        assert_eq!(integrate(&mu, &f), 0.4);
        assert_eq!(
            integrate(&mu, &TestFunction::constant(1.0)),
            mu.total_mass()
        );
        let far = SignedDiscreteMeasure::uniform(1, vec![p(3.0), p(4.0), p(-9.0)]).unwrap();
        assert_eq!(integrate(&far, &f), 0.0);
        assert!(try_integrate(&far, &f, 2).is_err());
    }

    #[test]
    fn convergence_rule() {
        let th = Thresholds::default();
        assert!(trace_converges(&[1.0, 0.5, 0.1, 0.005], 1e-2, &th));
        assert!(!trace_converges(&[1.0, 0.5, 0.1, 0.02], 1e-2, &th));
        // 0.004 -> 0.005 is a 25% increase in the trailing half.
        assert!(!trace_converges(&[1.0, 0.5, 0.004, 0.005], 1e-2, &th));
        assert!(trace_converges(&[1.0, 0.5, 0.004, 0.0043], 1e-2, &th));
        assert!(trace_converges(&[0.0, 1e-17, 0.0, 3e-17], 1e-2, &th));
        assert!(!trace_converges(&[], 1e-2, &th));
    }

    fn one_over_n_sequence(n_max: usize) -> MeasureSequence {
        MeasureSequence::new(
            "dirac 1/n",
            (1..=n_max).map(|n| d(1.0 / n as f64)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn dirac_sequence_converges_everywhere() {
        let k = Kernel::gaussian(1.0, 1).unwrap();
        let target = d(0.0);
        let battery = default_battery(&target, &k).unwrap();
        assert_eq!(battery.len(), 1 + 1 + 3 + 5);
        let radii = [1.0, 2.0, 4.0, 8.0];
        let spec = ProbeSpec::new(&battery, &radii, 1);
        let report = probe_sequence(&one_over_n_sequence(128), &target, &k, &spec).unwrap();
        let v = report.verdicts;
        assert!(v.mmd_converges);
        assert_eq!(v.weak_rkhs_converges, Some(true));
        assert!(v.vague_converges);
        assert_eq!(v.weak_converges, Some(true));
        assert!(!v.mass_escapes);
        for row in &report.rows {
            let expect = (2.0 - 2.0 * (-0.5 / (row.n * row.n) as f64).exp()).sqrt();
            assert!((row.mmd - expect).abs() < 1e-12);
            assert_eq!(row.total_mass, 1.0);
        }
        assert_eq!(report.recompute_verdicts(&battery), v);
    }

    #[test]
    fn escaping_mass_is_detected() {
        let k = Kernel::gaussian(1.0, 1).unwrap();
        let items: Vec<_> = (1..=16)
            .map(|n| {
                SignedDiscreteMeasure::uniform(
                    1,
                    (0..n).map(|i| p(20.0 + 3.0 * i as f64)).collect(),
                )
                .unwrap()
            })
            .collect();
        let seq = MeasureSequence::new("escape", items).unwrap();
        let target = SignedDiscreteMeasure::empty(1);
        let battery = default_battery(&target, &k).unwrap();
        let radii = [1.0, 8.0];
        let report =
            probe_sequence(&seq, &target, &k, &ProbeSpec::new(&battery, &radii, 1)).unwrap();
        assert!(report.verdicts.vague_converges);
        assert_eq!(report.verdicts.weak_converges, Some(false));
        assert!(report.verdicts.mass_escapes);
    }

    #[test]
    fn weak_verdict_needs_constant() {
        let k = Kernel::gaussian(1.0, 1).unwrap();
        let battery = vec![TestFunction::bump(p(0.0), 0.5, 1.0).unwrap()];
        let report = probe_sequence(
            &one_over_n_sequence(8),
            &d(0.0),
            &k,
            &ProbeSpec::new(&battery, &[1.0], 1),
        )
        .unwrap();
        assert_eq!(report.verdicts.weak_converges, None);
        assert_eq!(report.verdicts.weak_rkhs_converges, None);
    }

    #[test]
    fn probe_errors() {
        let k = Kernel::gaussian(1.0, 1).unwrap();
        let battery = vec![TestFunction::constant(1.0)];
        let empty = MeasureSequence::new("empty", vec![]).unwrap();
        assert!(probe_sequence(&empty, &d(0.0), &k, &ProbeSpec::new(&battery, &[1.0], 1)).is_err());
        assert!(probe_sequence(
            &one_over_n_sequence(3),
            &d(0.0),
            &k,
            &ProbeSpec::new(&[], &[1.0], 1)
        )
        .is_err());
        let k2 = Kernel::gaussian(1.0, 2).unwrap();
        assert!(matches!(
            probe_sequence(
                &one_over_n_sequence(3),
                &d(0.0),
                &k2,
                &ProbeSpec::new(&battery, &[1.0], 1)
            ),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn csv_layout() {
        let k = Kernel::gaussian(1.0, 1).unwrap();
        let target = d(0.0);
        let battery = default_battery(&target, &k).unwrap();
        let report = probe_sequence(
            &one_over_n_sequence(4),
            &target,
            &k,
            &ProbeSpec::new(&battery, &[1.0, 2.0], 1),
        )
        .unwrap();
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,mmd,f_1,f_2,f_3,f_4,f_5,f_6,f_7,f_8,f_9,f_10,ball_1,ball_2,total_mass"
        );
        assert!(lines.next().unwrap().starts_with("1,"));
        assert!(text.contains("# mmd_converges="));
        assert!(text.contains("# f_1: cb constant 1"));
    }
}
