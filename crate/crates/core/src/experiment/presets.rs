use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{ExperimentConfig, Preset, PresetOutput};
use crate::constructions::{
    annihilating_kernel, annihilating_kernel_with, certify_diffusion, diffusing_sequence,
    diffusion_bound, escaping_witness_sequence, ExclusionRegion, WitnessOutcome,
    DEFAULT_CANDIDATE_BUDGET,
};
use crate::diagnostics::{
    default_battery, fmt_num, integrate, probe_sequence, ConvergenceReport, ProbeSpec, TestFunction,
};
use crate::embedding::{mmd, norm};
use crate::error::{Error, Result};
use crate::kernels::{c0_probe, Kernel, ScalarField};
use crate::measures::{MeasureSequence, SignedDiscreteMeasure};
use crate::point::Point;

pub(super) static REGISTRY: &[&dyn Preset] = &[
    &MetrizeDemo,
    &EscapeDemo,
    &FlawCounterexample,
    &ShiftInvariance,
    &CenterInvariance,
    &CompactRegime,
    &AnnihilatorWitness,
    &GeneralWitness,
];

const RADII: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

fn write_table(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn report_csv(r: &ConvergenceReport) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    r.write_csv(&mut buf)?;
    Ok(buf)
}

fn report_verdicts(r: &ConvergenceReport) -> Vec<(String, bool)> {
    let v = &r.verdicts;
    let mut out = vec![("mmd_converges".to_string(), v.mmd_converges)];
    if let Some(b) = v.weak_rkhs_converges {
        out.push(("weak_rkhs_converges".into(), b));
    }
    out.push(("vague_converges".into(), v.vague_converges));
    if let Some(b) = v.weak_converges {
        out.push(("weak_converges".into(), b));
    }
    out.push(("mass_escapes".into(), v.mass_escapes));
    out
}

fn require_c0(k: &Kernel, what: &str) -> Result<()> {
    if k.claims_c0() {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{what} needs a kernel with C0 sections, got {}",
            k.describe()
        )))
    }
}

/// Random probability measure with `1..=max_atoms` atoms uniform in
/// `[−half_width, half_width]ᵈ` and positive weights.
pub fn random_probability(
    rng: &mut impl Rng,
    dim: usize,
    max_atoms: usize,
    half_width: f64,
) -> SignedDiscreteMeasure {
    let m = rng.gen_range(1..=max_atoms);
    let atoms: Vec<Point> = (0..m)
        .map(|_| {
            Point::new(
                (0..dim)
                    .map(|_| rng.gen_range(-half_width..=half_width))
                    .collect(),
            )
            .expect("finite")
        })
        .collect();
    let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.iter().map(|w| w / total).collect();
    SignedDiscreteMeasure::new(dim, atoms, weights).expect("valid measure")
}

/// A sequence in `[0, 1]ᵈ` converging weakly to `target` at rate `ρⁿ`.
#[derive(Debug, Clone)]
pub struct BoxSequence {
    pub sequence: MeasureSequence,
    pub target: SignedDiscreteMeasure,
    pub rho: f64,
}

/// Atoms `a*ᵢ + ρⁿ vᵢ` with `a*ᵢ ∈ [0.2, 0.8]ᵈ`, `|vᵢ| ≤ 0.2` per coordinate.
/// A single Dirac unless `mixture`, in which case 2 to 5 atoms carry weights
/// `w*ᵢ + ρⁿ uᵢ` with `Σ uᵢ = 0`.
pub fn box_sequence(
    rng: &mut impl Rng,
    dim: usize,
    n_max: usize,
    mixture: bool,
) -> Result<BoxSequence> {
    let m = if mixture { rng.gen_range(2..=5) } else { 1 };
    let rho: f64 = rng.gen_range(0.5..0.8);
    let centers: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..dim).map(|_| rng.gen_range(0.2..0.8)).collect())
        .collect();
    let moves: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..dim).map(|_| rng.gen_range(-0.2..0.2)).collect())
        .collect();
    let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(1.0..2.0)).collect();
    let total: f64 = raw.iter().sum();
    let w_star: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let w_min = w_star.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut u: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mean = u.iter().sum::<f64>() / m as f64;
    u.iter_mut().for_each(|x| *x -= mean);
    let u_max = u.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if u_max > 0.0 {
        u.iter_mut().for_each(|x| *x *= 0.5 * w_min / u_max);
    }

    let atoms_at = |t: f64| -> Result<Vec<Point>> {
        centers
            .iter()
            .zip(&moves)
            .map(|(c, v)| Point::new(c.iter().zip(v).map(|(a, b)| a + t * b).collect()))
            .collect()
    };
    let target = SignedDiscreteMeasure::new(dim, atoms_at(0.0)?, w_star.clone())?;
    let items = (1..=n_max)
        .map(|n| {
            let t = rho.powi(n as i32);
            let w = w_star.iter().zip(&u).map(|(a, b)| a + t * b).collect();
            SignedDiscreteMeasure::new(dim, atoms_at(t)?, w)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoxSequence {
        sequence: MeasureSequence::new(if mixture { "box mixture" } else { "box dirac" }, items)?,
        target,
        rho,
    })
}

fn probe(
    cfg: &ExperimentConfig,
    seq: &MeasureSequence,
    target: &SignedDiscreteMeasure,
    k: &Kernel,
    mmd_threshold: Option<f64>,
) -> Result<ConvergenceReport> {
    let battery = default_battery(target, k)?;
    let mut spec = ProbeSpec::new(&battery, &RADII, cfg.dim);
    spec.ball_center = cfg.xi_point();
    spec.thresholds = cfg.thresholds;
    spec.mmd_threshold = mmd_threshold;
    probe_sequence(seq, target, k, &spec)
}

/// `δ_{ξ + e₁/n³} → δ_ξ`.
struct MetrizeDemo;

impl Preset for MetrizeDemo {
    fn name(&self) -> &'static str {
        "metrize_demo"
    }
    fn reference(&self) -> &'static str {
        "Lemma 1"
    }
    fn description(&self) -> &'static str {
        "Diracs converging to a point: MMD, weak-RKHS, vague and weak probes all converge"
    }
    fn expected(&self) -> &'static [(&'static str, bool)] {
        &[
            ("mmd_converges", true),
            ("vague_converges", true),
            ("weak_converges", true),
            ("mass_escapes", false),
        ]
    }
    fn run(&self, cfg: &ExperimentConfig) -> Result<PresetOutput> {
        let k = cfg.base_kernel()?;
        let xi = cfg.xi_point();
        let mut e1 = vec![0.0; cfg.dim];
        e1[0] = 1.0;
        let items = (1..=cfg.n_max)
            .map(|n| SignedDiscreteMeasure::dirac(xi.offset(&e1, (n as f64).powi(-3))))
            .collect();
        let seq = MeasureSequence::new("dirac at xi + e1/n^3", items)?;
        let report = probe(cfg, &seq, &SignedDiscreteMeasure::dirac(xi), &k, None)?;
        Ok(PresetOutput {
            csv: report_csv(&report)?,
            verdicts: report_verdicts(&report),
            facts: vec![(
                "final_mmd".into(),
                fmt_num(report.rows.last().map_or(0.0, |r| r.mmd)),
            )],
        })
    }
}

/// Diffusing `Pₙ` outside `B(ξ, 8)` against the zero measure.
struct EscapeDemo;

impl Preset for EscapeDemo {
    fn name(&self) -> &'static str {
        "escape_demo"
    }
    fn reference(&self) -> &'static str {
        "Lemma 5"
    }
    fn description(&self) -> &'static str {
        "Diffusing probability measures: norm tends to 0 while all mass leaves every ball"
    }
    fn expected(&self) -> &'static [(&'static str, bool)] {
        &[
            ("mmd_converges", true),
            ("vague_converges", true),
            ("weak_converges", false),
            ("mass_escapes", true),
            ("certificates_hold", true),
            ("bound_strictly_decreasing", true),
        ]
    }
    fn validate(&self, cfg: &ExperimentConfig) -> Result<()> {
        require_c0(&cfg.base_kernel()?, "escape_demo")
    }
    fn run(&self, cfg: &ExperimentConfig) -> Result<PresetOutput> {
        let k = cfg.base_kernel()?;
        let dom = cfg.domain()?;
        let excl = ExclusionRegion::new(cfg.xi_point(), 8.0)?;
        let mut items = Vec::with_capacity(cfg.n_max);
        let mut certs = Vec::with_capacity(cfg.n_max);
        for n in 1..=cfg.n_max {
            let eps = 1.0 / n as f64;
            let pn = diffusing_sequence(&k, n, eps, &excl, &dom, DEFAULT_CANDIDATE_BUDGET)?;
            certs.push(certify_diffusion(&k, &pn, eps, &excl)?);
            items.push(pn);
        }
        let seq = MeasureSequence::new("diffusing P_n", items)?;
        // ‖Pₙ‖ only falls like 1/√n, so judge it against the certified bound.
        let final_bound = diffusion_bound(k.sup_bound(), cfg.n_max, 1.0 / cfg.n_max as f64);
        let threshold = final_bound.sqrt().max(cfg.thresholds.mmd);
        let report = probe(
            cfg,
            &seq,
            &SignedDiscreteMeasure::empty(cfg.dim),
            &k,
            Some(threshold),
        )?;
        let mut verdicts = report_verdicts(&report);
        verdicts.push(("certificates_hold".into(), certs.iter().all(|c| c.holds())));
        verdicts.push((
            "bound_strictly_decreasing".into(),
            certs.windows(2).all(|w| w[1].bound < w[0].bound),
        ));
        Ok(PresetOutput {
            csv: report_csv(&report)?,
            verdicts,
            facts: vec![
                ("mmd_threshold".into(), fmt_num(threshold)),
                (
                    "mmd_threshold_rule".into(),
                    "sqrt(sup/n_max + (n_max-1)/n_max^2)".into(),
                ),
                (
                    "final_sq_norm".into(),
                    fmt_num(certs.last().map_or(0.0, |c| c.sq_norm)),
                ),
            ],
        })
    }
}

/// `Pₙ` diffusing under the annihilating kernel, probed under its `+1` shift
/// against `δ_ξ`.
struct FlawCounterexample;

impl Preset for FlawCounterexample {
    fn name(&self) -> &'static str {
        "flaw_counterexample"
    }
    fn reference(&self) -> &'static str {
        "§3.1"
    }
    fn description(&self) -> &'static str {
        "MMD convergence to a Dirac without weak convergence: the mass escapes to infinity"
    }
    fn expected(&self) -> &'static [(&'static str, bool)] {
        &[
            ("mmd_converges", true),
            ("vague_converges", false),
            ("weak_converges", false),
            ("mass_escapes", true),
            ("identity_holds", true),
            ("mmd_strictly_decreasing", true),
            ("bump_at_xi_stays_one", true),
            ("ball_masses_zero", true),
        ]
    }
    fn validate(&self, cfg: &ExperimentConfig) -> Result<()> {
        require_c0(&cfg.base_kernel()?, "flaw_counterexample")
    }
    fn run(&self, cfg: &ExperimentConfig) -> Result<PresetOutput> {
        let base = cfg.base_kernel()?;
        let xi = cfg.xi_point();
        let k = annihilating_kernel(&base, &xi)?;
        let kappa = k.shift(1.0)?;
        let dom = cfg.domain()?;
        let excl = ExclusionRegion::new(xi.clone(), RADII[RADII.len() - 1])?;
        let items = (1..=cfg.n_max)
            .map(|n| {
                diffusing_sequence(&k, n, 1.0 / n as f64, &excl, &dom, DEFAULT_CANDIDATE_BUDGET)
            })
            .collect::<Result<Vec<_>>>()?;
        let seq = MeasureSequence::new("diffusing P_n under the annihilating kernel", items)?;
        let target = SignedDiscreteMeasure::dirac(xi.clone());
        let report = probe(cfg, &seq, &target, &kappa, None)?;

        let norms = seq
            .items()
            .iter()
            .map(|p| norm(&k, p))
            .collect::<Result<Vec<_>>>()?;
        let worst_gap = report
            .rows
            .iter()
            .zip(&norms)
            .map(|(r, nk)| (r.mmd - nk).abs() / (1.0 + nk))
            .fold(0.0, f64::max);
        let bump = TestFunction::bump(xi.clone(), 0.5, 1.0)?;
        let bump_ok = seq
            .items()
            .iter()
            .all(|p| (integrate(p, &bump) - 1.0).abs() == 1.0);
        let balls_zero = report
            .rows
            .iter()
            .all(|r| r.ball_masses.iter().all(|&m| m == 0.0));
        let decreasing = report.rows.windows(2).all(|w| w[1].mmd < w[0].mmd);

        let mut verdicts = report_verdicts(&report);
        verdicts.push(("identity_holds".into(), worst_gap <= 1e-10));
        verdicts.push(("mmd_strictly_decreasing".into(), decreasing));
        verdicts.push(("bump_at_xi_stays_one".into(), bump_ok));
        verdicts.push(("ball_masses_zero".into(), balls_zero));
        Ok(PresetOutput {
            csv: report_csv(&report)?,
            verdicts,
            facts: vec![
                ("identity_max_gap".into(), fmt_num(worst_gap)),
                ("probe_kernel".into(), kappa.describe()),
            ],
        })
    }
}

fn pair_rows(
    cfg: &ExperimentConfig,
    f: impl Fn(&mut ChaCha8Rng) -> Result<(Vec<f64>, f64)> + Sync,
) -> Result<Vec<(Vec<f64>, f64)>> {
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(t as u64);
            f(&mut rng)
        })
        .collect()
}

/// `k` versus `k + 1` on random probability pairs.
struct ShiftInvariance;

impl Preset for ShiftInvariance {
    fn name(&self) -> &'static str {
        "shift_invariance"
    }
    fn reference(&self) -> &'static str {
        "Cor. 7"
    }
    fn description(&self) -> &'static str {
        "Adding a constant to the kernel leaves MMD between probability measures unchanged"
    }
    fn expected(&self) -> &'static [(&'static str, bool)] {
        &[("invariance_holds", true)]
    }
    fn run(&self, cfg: &ExperimentConfig) -> Result<PresetOutput> {
        let k = cfg.base_kernel()?;
        let shifted = k.shift(1.0)?;
        let rows = pair_rows(cfg, |rng| {
            let p = random_probability(rng, cfg.dim, 50, 3.0);
            let q = random_probability(rng, cfg.dim, 50, 3.0);
            let a = mmd(&k, &p, &q)?.value;
            let b = mmd(&shifted, &p, &q)?.value;
            let gap = (a - b).abs();
            Ok((
                vec![p.len() as f64, q.len() as f64, a, b, gap],
                gap / (1.0 + a),
            ))
        })?;
        invariance_output(
            &[
                "trial",
                "atoms_p",
                "atoms_q",
                "mmd_k",
                "mmd_k_plus_1",
                "abs_diff",
            ],
            rows,
        )
    }
}

/// `k` versus the centered kernels `k_P^0`, `k_P^1` for a random `P`.
struct CenterInvariance;

impl Preset for CenterInvariance {
    fn name(&self) -> &'static str {
        "center_invariance"
    }
    fn reference(&self) -> &'static str {
        "Cor. 8"
    }
    fn description(&self) -> &'static str {
        "Centering the kernel at a probability measure leaves MMD between probability measures unchanged"
    }
    fn expected(&self) -> &'static [(&'static str, bool)] {
        &[("invariance_holds", true)]
    }
    fn run(&self, cfg: &ExperimentConfig) -> Result<PresetOutput> {
        let k = cfg.base_kernel()?;
        let rows = pair_rows(cfg, |rng| {
            let p = random_probability(rng, cfg.dim, 50, 3.0);
            let q = random_probability(rng, cfg.dim, 50, 3.0);
            let anchor = random_probability(rng, cfg.dim, 50, 3.0);
            let a = mmd(&k, &p, &q)?.value;
            let c0 = mmd(&k.center(&anchor, 0.0)?, &p, &q)?.value;
            let c1 = mmd(&k.center(&anchor, 1.0)?, &p, &q)?.value;
            let gap = (a - c0).abs().max((a - c1).abs());
            Ok((
                vec![p.len() as f64, q.len() as f64, a, c0, c1, gap],
                gap / (1.0 + a),
            ))
        })?;
        invariance_output(
            &[
                "trial",
                "atoms_p",
                "atoms_q",
                "mmd_k",
                "mmd_centered_a0",
                "mmd_centered_a1",
                "max_abs_diff",
            ],
            rows,
        )
    }
}

const INVARIANCE_TOL: f64 = 1e-12;

fn invariance_output(header: &[&str], rows: Vec<(Vec<f64>, f64)>) -> Result<PresetOutput> {
    let worst = rows.iter().map(|(_, r)| *r).fold(0.0, f64::max);
    let table: Vec<Vec<String>> = rows
        .iter()
        .enumerate()
        .map(|(t, (vals, _))| {
            let mut r = vec![(t + 1).to_string()];
            r.extend(vals[..2].iter().map(|v| (*v as usize).to_string()));
            r.extend(vals[2..].iter().map(|&v| fmt_num(v)));
            r
        })
        .collect();
    Ok(PresetOutput {
        csv: write_table(header, &table)?,
        verdicts: vec![("invariance_holds".into(), worst <= INVARIANCE_TOL)],
        facts: vec![
            ("max_relative_diff".into(), fmt_num(worst)),
            ("tolerance".into(), "1e-12 * (1 + mmd_k)".into()),
        ],
    })
}

/// Box-confined weakly convergent sequences: the weak verdict should imply the
/// MMD verdict.
struct CompactRegime;

impl Preset for CompactRegime {
    fn name(&self) -> &'static str {
        "compact_regime"
    }
    fn reference(&self) -> &'static str {
        "Thm. 3"
    }
    fn description(&self) -> &'static str {
        "On a compact box weak convergence and MMD convergence agree"
    }
    fn expected(&self) -> &'static [(&'static str, bool)] {
        &[
            ("weak_all", true),
            ("mmd_all", true),
            ("implication_holds", true),
            ("no_escape", true),
        ]
    }
    fn run(&self, cfg: &ExperimentConfig) -> Result<PresetOutput> {
        let k = cfg.base_kernel()?;
        let reports = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(t as u64);
                let bs = box_sequence(&mut rng, cfg.dim, cfg.n_max, t % 2 == 1)?;
                let battery = default_battery(&bs.target, &k)?;
                let mut spec = ProbeSpec::new(&battery, &RADII, cfg.dim);
                spec.thresholds = cfg.thresholds;
                Ok((bs.rho, probe_sequence(&bs.sequence, &bs.target, &k, &spec)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let weak = |r: &ConvergenceReport| r.verdicts.weak_converges == Some(true);
        let table: Vec<Vec<String>> = reports
            .iter()
            .enumerate()
            .map(|(t, (rho, r))| {
                vec![
                    (t + 1).to_string(),
                    r.label.clone(),
                    fmt_num(*rho),
                    fmt_num(r.rows.last().map_or(0.0, |x| x.mmd)),
                    r.verdicts.mmd_converges.to_string(),
                    weak(r).to_string(),
                    r.verdicts.mass_escapes.to_string(),
                ]
            })
            .collect();
        let verdicts = vec![
            ("weak_all".to_string(), reports.iter().all(|(_, r)| weak(r))),
            (
                "mmd_all".to_string(),
                reports.iter().all(|(_, r)| r.verdicts.mmd_converges),
            ),
            (
                "implication_holds".to_string(),
                reports
                    .iter()
                    .all(|(_, r)| !weak(r) || r.verdicts.mmd_converges),
            ),
            (
                "no_escape".to_string(),
                reports.iter().all(|(_, r)| !r.verdicts.mass_escapes),
            ),
        ];
        Ok(PresetOutput {
            csv: write_table(
                &[
                    "trial",
                    "kind",
                    "rho",
                    "final_mmd",
                    "mmd_converges",
                    "weak_converges",
                    "mass_escapes",
                ],
                &table,
            )?,
            verdicts,
            facts: vec![("box".into(), "[0,1]^d".into())],
        })
    }
}

fn configured_field(cfg: &ExperimentConfig) -> Result<Option<ScalarField>> {
    cfg.field.as_ref().map(ScalarField::from_spec).transpose()
}

/// The scaled kernel that kills `δ_ξ` but still separates other Diracs.
struct AnnihilatorWitness;

impl Preset for AnnihilatorWitness {
    fn name(&self) -> &'static str {
        "prop6_witness"
    }
    fn reference(&self) -> &'static str {
        "Prop. 6"
    }
    fn description(&self) -> &'static str {
        "A C0 kernel embedding a Dirac to zero while separating every other pair of Diracs"
    }
    fn expected(&self) -> &'static [(&'static str, bool)] {
        &[
            ("dirac_annihilated", true),
            ("pairs_separated", true),
            ("c0_probe_passes", true),
            ("non_c0_field_rejected", true),
        ]
    }
    fn validate(&self, cfg: &ExperimentConfig) -> Result<()> {
        let base = cfg.base_kernel()?;
        require_c0(&base, "prop6_witness")?;
        if let Some(field) = configured_field(cfg)? {
            annihilating_kernel_with(&base, field)?;
        }
        Ok(())
    }
    fn run(&self, cfg: &ExperimentConfig) -> Result<PresetOutput> {
        let base = cfg.base_kernel()?;
        let xi = cfg.xi_point();
        let k = match configured_field(cfg)? {
            Some(field) => annihilating_kernel_with(&base, field)?,
            None => annihilating_kernel(&base, &xi)?,
        };
        let zero = k.spec();
        let dirac_norm = norm(&k, &SignedDiscreteMeasure::dirac(xi.clone()))?;

        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let draw = |rng: &mut ChaCha8Rng| loop {
            let coords: Vec<f64> = xi
                .coords()
                .iter()
                .map(|c| c + rng.gen_range(-4.0..4.0))
                .collect();
            let p = Point::new(coords).expect("finite");
            if p != xi {
                break p;
            }
        };
        let mut table = Vec::with_capacity(cfg.trials);
        let mut min_sep = f64::INFINITY;
        for t in 0..cfg.trials {
            let x = draw(&mut rng);
            let y = draw(&mut rng);
            let sep = mmd(
                &k,
                &SignedDiscreteMeasure::dirac(x.clone()),
                &SignedDiscreteMeasure::dirac(y.clone()),
            )?
            .value;
            min_sep = min_sep.min(sep);
            let mut row = vec![(t + 1).to_string()];
            row.extend(x.coords().iter().map(|&v| fmt_num(v)));
            row.extend(y.coords().iter().map(|&v| fmt_num(v)));
            row.push(fmt_num(sep));
            table.push(row);
        }
        let mut header = vec!["trial".to_string()];
        header.extend((1..=cfg.dim).map(|i| format!("x_{i}")));
        header.extend((1..=cfg.dim).map(|i| format!("y_{i}")));
        header.push("mmd_xy".into());
        let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();

        let mut e1 = vec![0.0; cfg.dim];
        e1[0] = 1.0;
        let radii: Vec<f64> = (1..=10).map(|i| 2f64.powi(i)).collect();
        let decay = c0_probe(&k, &xi.offset(&e1, 1.0), &radii, 16, 1e-3)?;
        let rejected =
            annihilating_kernel_with(&base, ScalarField::one_minus_gaussian(xi.clone())).is_err();

        Ok(PresetOutput {
            csv: write_table(&header_refs, &table)?,
            verdicts: vec![
                ("dirac_annihilated".into(), dirac_norm <= 1e-15),
                ("pairs_separated".into(), min_sep > 1e-6),
                ("c0_probe_passes".into(), decay.passes()),
                ("non_c0_field_rejected".into(), rejected),
            ],
            facts: vec![
                ("dirac_norm".into(), fmt_num(dirac_norm)),
                ("min_pair_mmd".into(), fmt_num(min_sep)),
                (
                    "c0_probe_final_sup".into(),
                    fmt_num(decay.sup_values.last().copied().unwrap_or(0.0)),
                ),
                (
                    "scaled_kernel".into(),
                    serde_json::to_string(&zero).map_err(|e| Error::Config(e.to_string()))?,
                ),
            ],
        })
    }
}

/// Unequal-mass witness `δ_ξ − ¼δ_{ξ+e₁}` under a kernel vanishing at both
/// points, plus the equal-mass case `δ_ξ − δ_{ξ+e₁}`.
struct GeneralWitness;

impl Preset for GeneralWitness {
    fn name(&self) -> &'static str {
        "thm4_general"
    }
    fn reference(&self) -> &'static str {
        "Thm. 4"
    }
    fn description(&self) -> &'static str {
        "Any non-ISPD kernel admits an MMD-convergent sequence of probability measures that does not converge weakly"
    }
    fn expected(&self) -> &'static [(&'static str, bool)] {
        &[
            ("mmd_converges", true),
            ("vague_converges", false),
            ("weak_converges", false),
            ("mass_escapes", true),
            ("identity_holds", true),
            ("open_set_bound_violated", true),
            ("equal_mass_branch", true),
        ]
    }
    fn validate(&self, cfg: &ExperimentConfig) -> Result<()> {
        require_c0(&cfg.base_kernel()?, "thm4_general")
    }
    fn run(&self, cfg: &ExperimentConfig) -> Result<PresetOutput> {
        let base = cfg.base_kernel()?;
        let xi1 = cfg.xi_point();
        let mut e1 = vec![0.0; cfg.dim];
        e1[0] = 1.0;
        let xi2 = xi1.offset(&e1, 1.0);
        let k = annihilating_kernel_with(
            &base,
            ScalarField::c0_multi_zero(vec![xi1.clone(), xi2.clone()])?,
        )?;
        let dom = cfg.domain()?;

        let witness =
            SignedDiscreteMeasure::new(cfg.dim, vec![xi1.clone(), xi2.clone()], vec![1.0, -0.25])?;
        let esc = match escaping_witness_sequence(&k, &witness, cfg.n_max, &dom)? {
            WitnessOutcome::Escaping(e) => e,
            WitnessOutcome::EqualMass(_) => {
                return Err(Error::Degenerate(
                    "unequal-mass witness classified as equal mass".into(),
                ))
            }
        };
        let report = probe(cfg, &esc.sequence, &esc.target, &k, None)?;
        let trace = esc.identity_trace(&k)?;
        let worst = trace
            .iter()
            .map(|&(_, lhs, rhs)| {
                if rhs > 0.0 {
                    (lhs - rhs).abs() / rhs
                } else {
                    lhs
                }
            })
            .fold(0.0, f64::max);
        let (o_plus, o_minus, o_limsup) = esc.open_ball_masses();

        let balanced = SignedDiscreteMeasure::new(cfg.dim, vec![xi1, xi2], vec![1.0, -1.0])?;
        let (equal_ok, equal_mmd) = match escaping_witness_sequence(&k, &balanced, cfg.n_max, &dom)?
        {
            WitnessOutcome::EqualMass(w) => (w.mmd <= 1e-10 && w.plus != w.minus, w.mmd),
            WitnessOutcome::Escaping(_) => (false, f64::NAN),
        };

        let mut verdicts = report_verdicts(&report);
        verdicts.push(("identity_holds".into(), worst <= 1e-10));
        verdicts.push((
            "open_set_bound_violated".into(),
            esc.violates_open_set_bound(),
        ));
        verdicts.push(("equal_mass_branch".into(), equal_ok));
        Ok(PresetOutput {
            csv: report_csv(&report)?,
            verdicts,
            facts: vec![
                ("identity_max_relative_gap".into(), fmt_num(worst)),
                ("minus_mass".into(), fmt_num(esc.minus_mass)),
                ("open_ball_radius".into(), fmt_num(esc.open_ball.radius)),
                ("open_ball_plus_mass".into(), fmt_num(o_plus)),
                ("open_ball_minus_mass".into(), fmt_num(o_minus)),
                ("open_ball_sup_sequence_mass".into(), fmt_num(o_limsup)),
                ("equal_mass_mmd".into(), fmt_num(equal_mmd)),
            ],
        })
    }
}
