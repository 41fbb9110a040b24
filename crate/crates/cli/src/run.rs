//! Orchestration: steady state, criteria, modal scan, Arnold verdicts and
//! evolution for every alpha, then the reports and the manifest.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use alphastab::arnold::{
    arnold_first_verdict, arnold_second_verdict, build_regularization_example, lambda_min_alpha, reconstruct_f_prime, ArnoldReport,
    ArnoldVerdict, DomainSpec, LambdaMin, ShiftScan, SteadyStateRef, DEFAULT_LAMBDA_NODES,
};
use alphastab::criteria::{default_z_grid, fjortoft_check, fjortoft_generalized_check, rayleigh_check};
use alphastab::domain::{build_steady_shear, Grid1D, Profile1D, ShearSource, TorusGrid, TorusState};
use alphastab::evolve::{
    compute_invariants, linear_stability_norm_experiment, measure_growth_rate, stability_norm_experiment, Casimir, ExperimentLabel,
    InvariantLedger, LinearChannel,
};
use alphastab::modal::{assemble_modal, scan_wavenumbers_with, solve_modal_with, SpectralVerdict};
use alphastab::{io, CriterionReport, Error, ShearState};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Analysis, AnalysisConfig, ProfileConfig, Source};
use crate::plot::{emit_plot_data, PlotError};

pub const REPORT_FILE: &str = "report.json";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const PLOT_FILE: &str = "plot_data.csv";
pub const LAMBDA_FILE: &str = "lambda.csv";

/// Failures that stop a run as a whole (as opposed to one analysis).
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Analysis(#[from] Error),
    #[error(transparent)]
    Plot(#[from] PlotError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArtifactKind {
    Profile,
    GrowthCurve,
    Eigenfunction,
    FPrime,
    Lambda,
    LinearHistory,
    Ledger,
    PlotData,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    /// Relative to the output directory, `/`-separated.
    pub path: String,
    pub kind: ArtifactKind,
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisFailure {
    pub analysis: Option<Analysis>,
    pub alpha: f64,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SteadySummary {
    Shear { nodes: usize, interval: [f64; 2], max_abs_v: f64, max_abs_d2u: f64 },
    Torus { nx: usize, ny: usize, periods: [f64; 2], max_speed: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModalScanSummary {
    pub n: usize,
    pub verdict: SpectralVerdict,
    pub max_sigma: f64,
    /// Wavenumber of the largest growth rate and the wave speed there.
    pub k_max: f64,
    /// `None` when no mode was retained anywhere.
    pub c_max: Option<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthCheck {
    pub modal_rate: f64,
    pub measured_rate: f64,
    pub relative_error: f64,
    pub dt: f64,
    pub horizon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearEvolveSummary {
    pub k: f64,
    pub n: usize,
    pub label: ExperimentLabel,
    pub verdict: Option<ArnoldVerdict>,
    pub sup_ratio: f64,
    pub failure: Option<Error>,
    /// Eigenmode growth measured by time stepping, when the leading mode grows.
    pub growth: Option<GrowthCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusEvolveSummary {
    pub label: ExperimentLabel,
    pub verdict: Option<ArnoldVerdict>,
    pub epsilon: f64,
    pub horizon: f64,
    pub sup_ratio: f64,
    pub failure: Option<Error>,
    /// `max |I(t) - I(0)|` over the run for each invariant.
    pub max_deviation: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AlphaReport {
    pub alpha: f64,
    pub directory: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steady: Option<SteadySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rayleigh: Option<CriterionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fjortoft: Option<CriterionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fjortoft_generalized: Option<CriterionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modal_scan: Option<ModalScanSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arnold1: Option<ArnoldReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arnold2: Option<ArnoldReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linear_evolve: Option<LinearEvolveSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torus_evolve: Option<TorusEvolveSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantLedger>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub seed: u64,
    pub analyses: Vec<Analysis>,
    pub results: Vec<AlphaReport>,
    pub artifacts: Vec<Artifact>,
    pub errors: Vec<AnalysisFailure>,
}

impl RunReport {
    pub fn ok(&self) -> bool {
        self.errors.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides `output.directory`.
    pub out: Option<PathBuf>,
    /// Overrides `seed`.
    pub seed: Option<u64>,
    /// Directory relative paths in the config are resolved against.
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub files: Vec<ManifestEntry>,
}

enum Steady {
    Shear(ShearState),
    Torus(TorusState),
}

impl Steady {
    fn as_ref(&self) -> SteadyStateRef<'_> {
        match self {
            Self::Shear(s) => SteadyStateRef::Shear(s),
            Self::Torus(t) => SteadyStateRef::Torus(t),
        }
    }
}

/// Output directory name for one alpha.
pub fn alpha_dir(alpha: f64) -> String {
    format!("alpha_{alpha}")
}

fn default_lx() -> f64 {
    2.0 * std::f64::consts::PI
}

/// Domain of the second theorem: the configured one, or the natural one of
/// the profile (channel of period `2 pi` in `x`, or the torus of the profile).
pub fn domain_of(cfg: &AnalysisConfig) -> DomainSpec {
    if let Some(d) = cfg.domain {
        return d;
    }
    match &cfg.profile {
        ProfileConfig::FromV { interval, .. } | ProfileConfig::FromU { interval, .. } | ProfileConfig::Regularization { interval } => {
            DomainSpec::ChannelInterval { a1: interval[0], a2: interval[1], lx: default_lx() }
        }
        ProfileConfig::TorusPhi { periods, .. } => DomainSpec::Torus { lx: periods[0], ly: periods[1] },
    }
}

/// Grid whose nodes are the given abscissae: Chebyshev extrema or uniform.
fn grid_for_samples(ys: &[f64]) -> Result<Grid1D<f64>, Error> {
    let n = ys.len();
    if n < 2 {
        return Err(Error::Format("tabulated profile needs at least two rows".into()));
    }
    let (a, b) = (ys[0], ys[n - 1]);
    let matches = |g: &Grid1D<f64>| g.nodes().iter().zip(ys).all(|(x, y)| (x - y).abs() <= 1e-10 * (b - a));
    for g in [Grid1D::chebyshev(a, b, n)?, Grid1D::uniform(a, b, n)?] {
        if matches(&g) {
            return Ok(g);
        }
    }
    Err(Error::Format("tabulated abscissae are neither Chebyshev extrema nor uniform".into()))
}

fn channel_profile(interval: &[f64; 2], source: &Source, n: usize, base: &Path) -> Result<Profile1D<f64>, Error> {
    match source {
        Source::Descriptor(d) => Ok(Profile1D::from_descriptor(&Grid1D::chebyshev(interval[0], interval[1], n)?, d.clone())),
        Source::Tabulated(path) => {
            let (ys, vs) = io::read_profile_csv(File::open(base.join(path))?)?;
            let grid = grid_for_samples(&ys)?;
            let tol = 1e-10 * (interval[1] - interval[0]);
            if (grid.a() - interval[0]).abs() > tol || (grid.b() - interval[1]).abs() > tol {
                return Err(Error::InvalidInterval { a: grid.a(), b: grid.b() });
            }
            Profile1D::tabulated(&grid, vs)
        }
    }
}

fn build_steady(cfg: &AnalysisConfig, alpha: f64, base: &Path) -> Result<Steady, Error> {
    let n = cfg.numerics.n_profile;
    match &cfg.profile {
        ProfileConfig::FromV { interval, source } => {
            Ok(Steady::Shear(build_steady_shear(ShearSource::FromV(channel_profile(interval, source, n, base)?), alpha, 0.0)?))
        }
        ProfileConfig::FromU { interval, source } => {
            Ok(Steady::Shear(build_steady_shear(ShearSource::FromU(channel_profile(interval, source, n, base)?), alpha, 0.0)?))
        }
        ProfileConfig::Regularization { interval } => {
            let spec = DomainSpec::ChannelInterval { a1: interval[0], a2: interval[1], lx: default_lx() };
            Ok(Steady::Shear(build_regularization_example(alpha, &spec, n)?))
        }
        ProfileConfig::TorusPhi { periods, descriptor } => {
            let m = cfg.numerics.n_evolve;
            let grid = TorusGrid::new(m, m, periods[0], periods[1])?;
            Ok(Steady::Torus(TorusState::from_streamfunction_fn(grid, alpha, |_, y| descriptor.eval(y))?))
        }
    }
}

fn summarize(steady: &Steady) -> SteadySummary {
    match steady {
        Steady::Shear(s) => SteadySummary::Shear {
            nodes: s.grid().n(),
            interval: [s.grid().a(), s.grid().b()],
            max_abs_v: s.v().max_abs(),
            max_abs_d2u: s.d2u().max_abs(),
        },
        Steady::Torus(t) => {
            let g = t.grid();
            SteadySummary::Torus { nx: g.nx, ny: g.ny, periods: [g.lx, g.ly], max_speed: t.max_speed() }
        }
    }
}

fn shear_only(steady: &Steady) -> Result<&ShearState, Error> {
    match steady {
        Steady::Shear(s) => Ok(s),
        Steady::Torus(_) => Err(Error::InvalidArgument("analysis needs a channel profile".into())),
    }
}

fn torus_only(steady: &Steady) -> Result<&TorusState, Error> {
    match steady {
        Steady::Torus(t) => Ok(t),
        Steady::Shear(_) => Err(Error::InvalidArgument("analysis needs a torus profile".into())),
    }
}

/// Serialized artifact emission into the output directory.
struct Emitter {
    root: PathBuf,
    csv: bool,
    artifacts: Vec<Artifact>,
}

impl Emitter {
    fn write(
        &mut self,
        rel: &str,
        kind: ArtifactKind,
        alpha: Option<f64>,
        f: impl FnOnce(&mut BufWriter<File>) -> Result<(), Error>,
    ) -> Result<(), RunError> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let mut w = BufWriter::new(File::create(&path)?);
        f(&mut w)?;
        w.flush()?;
        self.artifacts.push(Artifact { path: rel.to_string(), kind, alpha });
        Ok(())
    }

    fn csv(
        &mut self,
        rel: &str,
        kind: ArtifactKind,
        alpha: Option<f64>,
        f: impl FnOnce(&mut BufWriter<File>) -> Result<(), Error>,
    ) -> Result<(), RunError> {
        if self.csv {
            self.write(rel, kind, alpha, f)
        } else {
            Ok(())
        }
    }
}

fn max_deviation(ledger: &[InvariantLedger], pick: impl Fn(&InvariantLedger) -> f64) -> f64 {
    let Some(first) = ledger.first() else { return 0.0 };
    let x0 = pick(first);
    ledger.iter().map(|r| (pick(r) - x0).abs()).fold(0.0, f64::max)
}

struct Context<'a> {
    cfg: &'a AnalysisConfig,
    seed: u64,
    domain: DomainSpec,
}

impl Context<'_> {
    /// Runs one analysis, filling `rep` and emitting its artifacts.
    fn analysis(&self, a: Analysis, steady: &Steady, rep: &mut AlphaReport, em: &mut Emitter) -> Result<Result<(), Error>, RunError> {
        let alpha = rep.alpha;
        let dir = rep.directory.clone();
        let num = &self.cfg.numerics;
        let opts = num.tolerances.filter_options();
        macro_rules! tri {
            ($e:expr) => {
                match $e {
                    Ok(v) => v,
                    Err(e) => return Ok(Err(e.into())),
                }
            };
        }
        match a {
            Analysis::Rayleigh => rep.rayleigh = Some(rayleigh_check(tri!(shear_only(steady)))),
            Analysis::Fjortoft => {
                let s = tri!(shear_only(steady));
                rep.fjortoft = Some(fjortoft_check(s));
                rep.fjortoft_generalized = Some(fjortoft_generalized_check(s, &default_z_grid(s)));
            }
            Analysis::ModalScan => {
                let s = tri!(shear_only(steady));
                let curve = tri!(scan_wavenumbers_with(s, &num.k_grid.values(), num.n_modal, &opts));
                let best = curve.points.iter().fold(curve.points[0], |b, p| if p.sigma > b.sigma { *p } else { b });
                em.csv(&format!("{dir}/growth_curve.csv"), ArtifactKind::GrowthCurve, Some(alpha), |w| io::write_growth_curve_csv(w, &curve))?;
                if curve.verdict == SpectralVerdict::Unstable {
                    let spectrum = tri!(assemble_modal(s, best.k, num.n_modal).and_then(|p| solve_modal_with(&p, &opts)));
                    if let Some(mode) = spectrum.leading() {
                        em.csv(&format!("{dir}/eigenfunction.csv"), ArtifactKind::Eigenfunction, Some(alpha), |w| io::write_eigenfunction_csv(w, mode))?;
                    }
                }
                rep.modal_scan = Some(ModalScanSummary { n: curve.n, verdict: curve.verdict, max_sigma: curve.max_sigma, k_max: best.k, c_max: (best.retained > 0).then_some(best.c) });
            }
            Analysis::Arnold1 => {
                let report = tri!(arnold_first_verdict(steady.as_ref(), ShiftScan::Default));
                if let Ok(f) = reconstruct_f_prime(steady.as_ref()) {
                    em.csv(&format!("{dir}/f_prime.csv"), ArtifactKind::FPrime, Some(alpha), |w| io::write_f_prime_csv(w, &f))?;
                }
                rep.arnold1 = Some(report);
            }
            Analysis::Arnold2 => rep.arnold2 = Some(tri!(arnold_second_verdict(steady.as_ref(), &self.domain))),
            Analysis::LinearEvolve => {
                let s = tri!(shear_only(steady));
                let k = num.k_linear.unwrap_or(match &rep.modal_scan {
                    Some(m) if m.verdict == SpectralVerdict::Unstable => m.k_max,
                    _ => 1.0,
                });
                let channel = tri!(LinearChannel::new(s, k, num.n_linear));
                let exp = tri!(linear_stability_norm_experiment(&channel, &self.domain, num.epsilon, num.horizon, self.seed, None));
                em.csv(&format!("{dir}/linear_history.csv"), ArtifactKind::LinearHistory, Some(alpha), |w| {
                    write_pairs(w, ["t", "ratio"], exp.times.iter().copied().zip(exp.ratios.iter().copied()))
                })?;
                let spectrum = tri!(assemble_modal(s, k, num.n_linear).and_then(|p| solve_modal_with(&p, &opts)));
                let growth = match spectrum.leading() {
                    Some(mode) if mode.growth_rate > opts.tol_growth => {
                        let dt = num.dt.unwrap_or(f64::INFINITY).min(channel.cfl_limit());
                        let horizon = num.horizon.min(20.0 / mode.growth_rate);
                        let init = tri!(channel.state_from_phi(mode.phi.values(), 0.0));
                        let m = tri!(measure_growth_rate(&channel, &init, dt, horizon));
                        Some(GrowthCheck {
                            modal_rate: mode.growth_rate,
                            measured_rate: m.rate,
                            relative_error: (m.rate - mode.growth_rate).abs() / mode.growth_rate,
                            dt,
                            horizon,
                        })
                    }
                    _ => None,
                };
                rep.linear_evolve = Some(LinearEvolveSummary {
                    k,
                    n: num.n_linear,
                    label: exp.label,
                    verdict: exp.verdict,
                    sup_ratio: exp.sup_ratio,
                    failure: exp.failure,
                    growth,
                });
            }
            Analysis::TorusEvolve => {
                let t = tri!(torus_only(steady));
                let exp = tri!(stability_norm_experiment(t, num.epsilon, num.horizon, self.seed, None));
                em.csv(&format!("{dir}/ledger.csv"), ArtifactKind::Ledger, Some(alpha), |w| io::write_ledger_csv(w, &exp.ledger))?;
                let deviation = [
                    ("H", max_deviation(&exp.ledger, |r| r.h)),
                    ("enstrophy", max_deviation(&exp.ledger, |r| r.enstrophy)),
                    ("casimir", max_deviation(&exp.ledger, |r| r.casimir)),
                    ("omega_int", max_deviation(&exp.ledger, |r| r.omega_int)),
                    ("Mx", max_deviation(&exp.ledger, |r| r.mx)),
                ]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect();
                rep.torus_evolve = Some(TorusEvolveSummary {
                    label: exp.label,
                    verdict: exp.verdict,
                    epsilon: exp.epsilon,
                    horizon: num.horizon,
                    sup_ratio: exp.sup_ratio,
                    failure: exp.failure,
                    max_deviation: deviation,
                });
            }
            Analysis::Invariants => rep.invariants = Some(compute_invariants(tri!(torus_only(steady)), None, &Casimir::Sin, 0.0)),
        }
        Ok(Ok(()))
    }
}

fn write_pairs<W: Write>(w: W, header: [&str; 2], rows: impl Iterator<Item = (f64, f64)>) -> Result<(), Error> {
    let mut w = w;
    writeln!(w, "{},{}", header[0], header[1])?;
    for (x, y) in rows {
        writeln!(w, "{x},{y}")?;
    }
    Ok(())
}

/// Removes the files listed by a previous manifest in `root`.
fn clear_previous(root: &Path) -> std::io::Result<()> {
    let Ok(text) = fs::read_to_string(root.join(MANIFEST_FILE)) else { return Ok(()) };
    if let Ok(m) = serde_json::from_str::<Manifest>(&text) {
        for e in m.files {
            let p = root.join(&e.path);
            if p.is_file() {
                fs::remove_file(p)?;
            }
        }
    }
    fs::remove_file(root.join(MANIFEST_FILE))
}

/// Hashes every file under `root` except the manifest itself.
pub fn build_manifest(root: &Path) -> std::io::Result<Manifest> {
    let mut files = Vec::new();
    for entry in walkdir::WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(std::io::Error::other)?;
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = entry.path().strip_prefix(root).expect("walk stays under root");
        let rel = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
        if rel == MANIFEST_FILE {
            continue;
        }
        let bytes = fs::read(entry.path())?;
        files.push(ManifestEntry { path: rel, sha256: hex::encode(Sha256::digest(&bytes)), bytes: bytes.len() as u64 });
    }
    files.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(Manifest { files })
}

/// Output directory of a run: `--out`, else `output.directory` relative to the config.
pub fn output_root(cfg: &AnalysisConfig, opts: &RunOptions) -> PathBuf {
    opts.out.clone().unwrap_or_else(|| opts.base_dir.join(&cfg.output.directory))
}

/// Executes every requested analysis for every alpha and writes the
/// artifacts, `report.json`, `plot_data.csv` and `manifest.json`.
///
/// Analysis errors are recorded in the report and do not stop the run.
pub fn run(cfg: &AnalysisConfig, opts: &RunOptions) -> Result<RunReport, RunError> {
    let root = output_root(cfg, opts);
    fs::create_dir_all(&root)?;
    clear_previous(&root)?;
    let seed = opts.seed.unwrap_or(cfg.seed);
    let analyses = cfg.ordered_analyses();
    let ctx = Context { cfg, seed, domain: domain_of(cfg) };
    let mut em = Emitter { root: root.clone(), csv: cfg.output.csv(), artifacts: Vec::new() };
    let mut results = Vec::new();
    let mut errors = Vec::new();
    let mut lambdas: Vec<LambdaMin> = Vec::new();

    for alpha in cfg.alpha.values() {
        let mut rep = AlphaReport { alpha, directory: alpha_dir(alpha), ..AlphaReport::default() };
        let steady = match build_steady(cfg, alpha, &opts.base_dir) {
            Ok(s) => s,
            Err(error) => {
                errors.push(AnalysisFailure { analysis: None, alpha, error });
                results.push(rep);
                continue;
            }
        };
        rep.steady = Some(summarize(&steady));
        if let Steady::Shear(s) = &steady {
            let dir = rep.directory.clone();
            em.csv(&format!("{dir}/v.csv"), ArtifactKind::Profile, Some(alpha), |w| io::write_profile_csv(w, s.v()))?;
            em.csv(&format!("{dir}/u.csv"), ArtifactKind::Profile, Some(alpha), |w| io::write_profile_csv(w, s.u()))?;
        }
        for &a in &analyses {
            if let Err(error) = ctx.analysis(a, &steady, &mut rep, &mut em)? {
                errors.push(AnalysisFailure { analysis: Some(a), alpha, error });
            }
        }
        if analyses.contains(&Analysis::Arnold2) {
            match lambda_min_alpha(&ctx.domain, alpha, DEFAULT_LAMBDA_NODES) {
                Ok(l) => lambdas.push(l),
                Err(error) => errors.push(AnalysisFailure { analysis: Some(Analysis::Arnold2), alpha, error }),
            }
        }
        results.push(rep);
    }
    if !lambdas.is_empty() {
        em.csv(LAMBDA_FILE, ArtifactKind::Lambda, None, |w| io::write_lambda_table_csv(w, &lambdas))?;
    }
    let mut report = RunReport { seed, analyses, results, artifacts: em.artifacts, errors };
    if cfg.output.csv() {
        emit_plot_data(&root, &report)?;
        report.artifacts.push(Artifact { path: PLOT_FILE.into(), kind: ArtifactKind::PlotData, alpha: None });
    }
    if cfg.output.json() {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        fs::write(root.join(REPORT_FILE), text + "\n")?;
    }
    let manifest = build_manifest(&root)?;
    fs::write(root.join(MANIFEST_FILE), serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n")?;
    Ok(report)
}
