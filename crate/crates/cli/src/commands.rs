//! Command implementations. Each returns the artifacts to emit; nothing is
//! written until the command has finished.

use std::f64::consts::PI;

use dirichlet_core::atlas::{
    alternating_rule_check, build_atlas, delta_components, matching_rule_check, probe_symmetric_pair,
    trace_gamma_prime, AlternatingReport, MatchingFinding, MatchingStatus, ProbeReport, StripAtlas,
};
use dirichlet_core::bohr::{bohr_eval, map_zero_to_bohr, BohrBasis};
use dirichlet_core::config::TargetKind;
use dirichlet_core::geometry::{Edge, Rect};
use dirichlet_core::lifting::{
    lift, preimage_circle, preimage_real_axis, Color, CurveSystem, LiftedCurve, PlanePath, RealSeed,
};
use dirichlet_core::models::{AnalyticTarget, Derivative, EmParams, ModelError, Zeta};
use dirichlet_core::series::{convergence_report, eval_partial, ConvergenceReport};
use dirichlet_core::zeros::{find_zeros, Zero, ZeroKind};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::CliError;
use crate::run_config::RunConfig;
use crate::svg::{bounding_view, Plot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PlotKind {
    RealAxisPreimage,
    UnitCirclePreimage,
    Strip,
    Domains,
    Probe,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

/// The primary artifact goes to stdout when no output directory is set;
/// with one, every artifact is written there.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub primary: Artifact,
    pub extra: Vec<Artifact>,
    /// Human-readable summary printed to stderr.
    pub note: Option<String>,
}

impl Outcome {
    fn single(primary: Artifact) -> Self {
        Self { primary, extra: Vec::new(), note: None }
    }
}

fn json<T: Serialize>(name: &str, v: &T) -> Result<Artifact, CliError> {
    let mut contents = serde_json::to_string_pretty(v)?;
    contents.push('\n');
    Ok(Artifact { name: format!("{name}.json"), contents })
}

fn csv(name: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Artifact, CliError> {
    let mut w = ::csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Numeric(format!("csv: {e}")))?;
    Ok(Artifact { name: format!("{name}.csv"), contents: String::from_utf8(bytes).expect("csv output is utf-8") })
}

fn svg(name: &str, contents: String) -> Artifact {
    Artifact { name: format!("{name}.svg"), contents }
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn data_format(format: Format, command: &str) -> Result<Format, CliError> {
    if format == Format::Svg {
        return Err(CliError::Validation(format!("'{command}' emits json or csv; use the plot command for svg")));
    }
    Ok(format)
}

fn parse_complex(text: &str, what: &str) -> Result<Complex64, CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Validation(format!("{what} '{text}': {e}")))?;
    match parts[..] {
        [re, im] => Ok(Complex64::new(re, im)),
        [re] => Ok(Complex64::new(re, 0.0)),
        _ => Err(CliError::Validation(format!("{what} '{text}': expected re,im"))),
    }
}

/// Rejects windows reaching beyond the validated accuracy window of the
/// target by probing its corners.
fn check_window(target: &dyn AnalyticTarget, rect: &Rect) -> Result<(), CliError> {
    for c in rect.corners() {
        match target.eval(c) {
            Err(e @ ModelError::AccuracyWindowExceeded { .. }) => {
                return Err(CliError::Validation(format!(
                    "window [{}, {}] x [{}, {}] exceeds the target's range: {e}",
                    rect.sigma_min, rect.sigma_max, rect.t_min, rect.t_max
                )))
            }
            _ => continue,
        }
    }
    Ok(())
}

struct Session {
    cfg: RunConfig,
    target: Box<dyn AnalyticTarget>,
    rect: Rect,
}

impl Session {
    fn new(cfg: &RunConfig) -> Result<Self, CliError> {
        let target = cfg.target.target()?;
        let rect = cfg.rect()?;
        check_window(target.as_ref(), &rect)?;
        Ok(Self { cfg: cfg.clone(), target, rect })
    }

    fn f(&self) -> &dyn AnalyticTarget {
        self.target.as_ref()
    }

    fn zeros(&self, derivative: bool) -> Result<Vec<Zero>, CliError> {
        Ok(find_zeros(self.f(), &self.rect, self.cfg.tolerances.zero, derivative)?)
    }

    fn decimate(&self, pts: &[Complex64]) -> Vec<Complex64> {
        let n = self.cfg.figure.sample_decimation;
        let mut out: Vec<Complex64> = pts.iter().step_by(n).copied().collect();
        if let Some(last) = pts.last() {
            if out.last() != Some(last) {
                out.push(*last);
            }
        }
        out
    }

    fn color_of(&self, c: Color) -> String {
        let p = &self.cfg.figure.colors;
        match c {
            Color::A => p.a.clone(),
            Color::B => p.b.clone(),
            Color::C => p.c.clone(),
            Color::D => p.d.clone(),
            Color::None => "#555555".into(),
        }
    }
}

// ---------------------------------------------------------------- abscissa

pub fn abscissa(cfg: &RunConfig, n_max: Option<usize>, format: Format) -> Result<Outcome, CliError> {
    let format = data_format(format, "abscissa")?;
    let series = cfg.target.series()?;
    let n = n_max.unwrap_or(series.len()).min(series.len());
    let power = matches!(cfg.target.kind, Some(TargetKind::Power | TargetKind::Blaschke));
    let report: ConvergenceReport = convergence_report(&series, n, power)?;
    Ok(Outcome::single(match format {
        Format::Json => json("abscissa", &report)?,
        _ => csv(
            "abscissa",
            &["sigma_c_estimate", "sigma_a_estimate", "hadamard_radius", "n_used"],
            [vec![
                num(report.sigma_c_estimate),
                num(report.sigma_a_estimate),
                report.hadamard_radius.map(|r| format!("{r:?}")).unwrap_or_default(),
                report.n_used.to_string(),
            ]],
        )?,
    }))
}

// -------------------------------------------------------------------- eval

#[derive(Serialize)]
struct EvalReport {
    label: String,
    s: Complex64,
    value: Complex64,
    derivative: Complex64,
    second_derivative: Complex64,
    /// Difference against a refined evaluation; absent where no independent
    /// evaluation exists.
    error_estimate: Option<f64>,
}

/// Zeta against more direct terms and Bernoulli corrections; eta through
/// `(1 - 2^{1-s}) ζ(s)`; finite polynomials by their rounding bound.
fn error_estimate(
    cfg: &RunConfig,
    target: &dyn AnalyticTarget,
    s: Complex64,
    value: Complex64,
) -> Result<Option<f64>, CliError> {
    let refined = Zeta { params: EmParams { n: 2 * (12usize.max(s.im.abs().ceil() as usize)) + 8, k: 16 } };
    Ok(match cfg.target.kind {
        Some(TargetKind::Zeta) => Some((refined.eval(s)? - value).norm()),
        Some(TargetKind::Eta) => {
            let factor = Complex64::new(1.0, 0.0) - Complex64::new(2.0, 0.0).powc(Complex64::new(1.0, 0.0) - s);
            Some((factor * refined.eval(s)? - value).norm())
        }
        Some(TargetKind::DirichletL) => None,
        _ => target.series(0).map(|series| {
            let mass: f64 =
                series.lambdas().iter().zip(series.coefficients()).map(|(l, a)| a.norm() * (-l * s.re).exp()).sum();
            mass * f64::EPSILON * series.len() as f64
        }),
    })
}

pub fn eval(cfg: &RunConfig, sigma: f64, t: f64, format: Format) -> Result<Outcome, CliError> {
    let format = data_format(format, "eval")?;
    let s = Complex64::new(sigma, t);
    let target = cfg.target.target()?;
    let jet = target.jet(s)?;
    let error_estimate = error_estimate(cfg, target.as_ref(), s, jet.value())?;
    let report = EvalReport {
        label: target.label(),
        s,
        value: jet.value(),
        derivative: jet.d1(),
        second_derivative: jet.d2(),
        error_estimate,
    };
    Ok(Outcome::single(match format {
        Format::Json => json("eval", &report)?,
        _ => csv(
            "eval",
            &["sigma", "t", "re", "im", "d_re", "d_im", "error_estimate"],
            [vec![
                num(s.re),
                num(s.im),
                num(report.value.re),
                num(report.value.im),
                num(report.derivative.re),
                num(report.derivative.im),
                report.error_estimate.map(num).unwrap_or_default(),
            ]],
        )?,
    }))
}

// ------------------------------------------------------------------- zeros

#[derive(Serialize)]
struct ZeroCatalog {
    label: String,
    window: Rect,
    of_derivative: bool,
    zeros: Vec<Zero>,
}

fn kind_name(k: ZeroKind) -> &'static str {
    match k {
        ZeroKind::Trivial => "trivial",
        ZeroKind::Nontrivial => "nontrivial",
        ZeroKind::Unknown => "unknown",
    }
}

pub fn zeros(cfg: &RunConfig, derivative: bool, format: Format) -> Result<Outcome, CliError> {
    let format = data_format(format, "zeros")?;
    let ses = Session::new(cfg)?;
    let zs = ses.zeros(derivative)?;
    Ok(Outcome::single(match format {
        Format::Json => json(
            "zeros",
            &ZeroCatalog { label: ses.f().label(), window: ses.rect, of_derivative: derivative, zeros: zs },
        )?,
        _ => csv(
            "zeros",
            &["sigma", "t", "kind", "multiplicity", "residual"],
            zs.iter().map(|z| {
                vec![num(z.s.re), num(z.s.im), kind_name(z.kind).into(), z.multiplicity.to_string(), num(z.residual)]
            }),
        )?,
    }))
}

// ------------------------------------------------------------------- trace

pub fn parse_path(text: &str) -> Result<PlanePath, CliError> {
    let (kind, args) = text.split_once(':').unwrap_or((text, ""));
    let v: Vec<f64> = if args.is_empty() {
        Vec::new()
    } else {
        args.split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Validation(format!("--path '{text}': {e}")))?
    };
    let bad = || CliError::Validation(format!("--path '{text}': wrong number of parameters"));
    Ok(match (kind, &v[..]) {
        ("segment", [a, b, c, d]) => PlanePath::segment(Complex64::new(*a, *b), Complex64::new(*c, *d)),
        ("ray", [angle, r0, r1]) => PlanePath::Ray { angle: *angle, r0: *r0, r1: *r1 },
        ("circle", [radius]) => PlanePath::Circle { radius: *radius, theta0: 0.0, sweep: 2.0 * PI },
        ("circle", [radius, theta0, sweep]) => PlanePath::Circle { radius: *radius, theta0: *theta0, sweep: *sweep },
        ("real", [x0, x1, anchor]) => {
            if (x0 - anchor) * (x1 - anchor) <= 0.0 {
                return Err(CliError::Validation(format!("--path '{text}': anchor must lie outside the interval")));
            }
            PlanePath::real_interval(*x0, *x1, *anchor)
        }
        ("segment" | "ray" | "circle" | "real", _) => return Err(bad()),
        _ => return Err(CliError::Validation(format!("--path '{text}': kind must be segment, ray, circle or real"))),
    })
}

fn curve_rows(curve: &LiftedCurve) -> Vec<Vec<String>> {
    curve.samples.iter().map(|p| vec![num(p.tau), num(p.s.re), num(p.s.im), num(p.residual)]).collect()
}

pub fn trace(cfg: &RunConfig, path: &str, seed: &str, format: Format) -> Result<Outcome, CliError> {
    let format = data_format(format, "trace")?;
    let ses = Session::new(cfg)?;
    let path = parse_path(path)?;
    let seed = parse_complex(seed, "--seed")?;
    let opts = dirichlet_core::lifting::LiftOptions { bounds: Some(ses.rect), ..cfg.lift_options() };
    let curve = lift(ses.f(), &path, seed, &opts)?;
    Ok(Outcome::single(match format {
        Format::Json => json("trace", &curve)?,
        _ => csv("trace", &["tau", "sigma", "t", "residual"], curve_rows(&curve))?,
    }))
}

// ------------------------------------------------------------------- atlas

#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub k: i64,
    pub j_k: u32,
    pub derivative_count: usize,
    pub tree_internal: Option<usize>,
    pub domain_count: usize,
    pub complete: bool,
    pub pole_strip: bool,
    pub alternating_failures: usize,
    pub matching_violations: usize,
}

#[derive(Serialize)]
struct DeltaSummary {
    zeros: Vec<Complex64>,
    strip: Option<i64>,
    bounded: bool,
    exit_edges: Vec<Edge>,
    exits_right_twice: bool,
    exit_gap: Option<f64>,
}

#[derive(Serialize)]
struct AtlasReport {
    label: String,
    window: Rect,
    summary: Vec<SummaryRow>,
    alternating: Vec<AlternatingReport>,
    matching: Vec<MatchingFinding>,
    delta: Vec<DeltaSummary>,
    atlas: StripAtlas,
}

fn summary_rows(atlas: &StripAtlas, alt: &[AlternatingReport], matching: &[MatchingFinding]) -> Vec<SummaryRow> {
    atlas
        .strips
        .iter()
        .map(|st| SummaryRow {
            k: st.k,
            j_k: st.j_k,
            derivative_count: st.derivative_zeros.iter().map(|z| z.multiplicity as usize).sum(),
            tree_internal: st.merge_tree.as_ref().map(|t| t.internal_count()),
            domain_count: st.domains.len(),
            complete: st.complete,
            pole_strip: st.pole_strip,
            alternating_failures: alt.iter().filter(|r| !r.holds && atlas.strip_of(r.zero) == st.k).count(),
            matching_violations: matching
                .iter()
                .filter(|f| f.status == MatchingStatus::Violation && atlas.strip_of(f.s) == st.k)
                .count(),
        })
        .collect()
}

fn summary_table(rows: &[SummaryRow]) -> String {
    let mut out = String::from("   k  j_k  deriv  tree  domains  complete  violations\n");
    for r in rows {
        out.push_str(&format!(
            "{:>4} {:>4} {:>6} {:>5} {:>8} {:>9} {:>11}\n",
            r.k,
            r.j_k,
            r.derivative_count,
            r.tree_internal.map(|t| t.to_string()).unwrap_or_else(|| "-".into()),
            r.domain_count,
            if r.complete { "yes" } else { "no" },
            r.alternating_failures + r.matching_violations
        ));
    }
    out
}

fn summary_csv(rows: &[SummaryRow]) -> Result<Artifact, CliError> {
    csv(
        "atlas_summary",
        &[
            "k",
            "j_k",
            "derivative_count",
            "tree_internal",
            "domain_count",
            "complete",
            "pole_strip",
            "alternating_failures",
            "matching_violations",
        ],
        rows.iter().map(|r| {
            vec![
                r.k.to_string(),
                r.j_k.to_string(),
                r.derivative_count.to_string(),
                r.tree_internal.map(|t| t.to_string()).unwrap_or_default(),
                r.domain_count.to_string(),
                r.complete.to_string(),
                r.pole_strip.to_string(),
                r.alternating_failures.to_string(),
                r.matching_violations.to_string(),
            ]
        }),
    )
}

pub fn atlas(cfg: &RunConfig, format: Format) -> Result<Outcome, CliError> {
    let format = data_format(format, "atlas")?;
    let ses = Session::new(cfg)?;
    let atlas = build_atlas(ses.f(), &ses.rect, &cfg.atlas_options())?;
    let alternating: Vec<AlternatingReport> =
        atlas.zeros.iter().map(|z| alternating_rule_check(ses.f(), z, 0.05)).collect::<Result<_, _>>()?;
    let mut curves = atlas.gamma.clone();
    curves.extend(atlas.boundaries.iter().map(|b| b.curve.clone()));
    let matching = matching_rule_check(ses.f(), &curves)?;
    let delta = delta_components(ses.f(), &ses.rect, &atlas.zeros, &atlas.boundaries, &cfg.lift_options())?
        .into_iter()
        .map(|d| DeltaSummary {
            exits_right_twice: d.exits_right_twice(),
            zeros: d.zeros,
            strip: d.strip,
            bounded: d.component.bounded,
            exit_edges: d.exit_edges,
            exit_gap: d.exit_gap,
        })
        .collect();
    let summary = summary_rows(&atlas, &alternating, &matching);
    let note = Some(summary_table(&summary));
    let summary_artifact = summary_csv(&summary)?;
    let report =
        AtlasReport { label: atlas.label.clone(), window: ses.rect, summary, alternating, matching, delta, atlas };
    Ok(match format {
        Format::Json => Outcome { primary: json("atlas", &report)?, extra: vec![summary_artifact], note },
        _ => Outcome { primary: summary_artifact, extra: Vec::new(), note },
    })
}

// ----------------------------------------------------------------- domains

#[derive(Serialize)]
struct SlitOut {
    v: Complex64,
    ends: [dirichlet_core::atlas::SlitEnd; 2],
    unit_points: Vec<Complex64>,
    polyline: Vec<Complex64>,
}

#[derive(Serialize)]
struct DomainOut {
    index: usize,
    contained_zero: Option<Complex64>,
    winding_check: i32,
    truncated: bool,
    boundary: Vec<Complex64>,
}

#[derive(Serialize)]
struct DomainsReport {
    label: String,
    k: i64,
    j_k: u32,
    slits: Vec<SlitOut>,
    domains: Vec<DomainOut>,
}

fn strip_k(atlas: &StripAtlas, k: Option<i64>) -> Result<i64, CliError> {
    match k {
        Some(k) => match atlas.strip(k) {
            Some(st) if st.complete => Ok(k),
            Some(_) => Err(CliError::Validation(format!("strip {k} is not complete in the window"))),
            None => Err(CliError::Validation(format!("no strip {k} in the window"))),
        },
        None => atlas
            .strips
            .iter()
            .filter(|s| s.complete)
            .max_by_key(|s| (s.j_k, -s.k))
            .map(|s| s.k)
            .ok_or_else(|| CliError::Validation("no complete strip in the window".into())),
    }
}

fn domains_report(ses: &Session, atlas: &StripAtlas, k: i64) -> DomainsReport {
    let st = atlas.strip(k).expect("strip checked");
    DomainsReport {
        label: atlas.label.clone(),
        k,
        j_k: st.j_k,
        slits: st
            .slits
            .iter()
            .map(|s| SlitOut {
                v: s.v,
                ends: s.ends,
                unit_points: s.unit_points.clone(),
                polyline: ses.decimate(&s.polyline),
            })
            .collect(),
        domains: st
            .domains
            .iter()
            .map(|d| DomainOut {
                index: d.index,
                contained_zero: d.contained_zero.map(|z| z.s),
                winding_check: d.winding_check,
                truncated: d.truncated,
                boundary: ses.decimate(&d.boundary),
            })
            .collect(),
    }
}

fn domains_csv(rep: &DomainsReport) -> Result<Artifact, CliError> {
    let mut rows = Vec::new();
    for (n, s) in rep.slits.iter().enumerate() {
        for (i, p) in s.polyline.iter().enumerate() {
            rows.push(vec!["slit".into(), n.to_string(), i.to_string(), num(p.re), num(p.im)]);
        }
    }
    for d in &rep.domains {
        for (i, p) in d.boundary.iter().enumerate() {
            rows.push(vec!["domain".into(), d.index.to_string(), i.to_string(), num(p.re), num(p.im)]);
        }
    }
    csv("domains", &["element", "index", "vertex", "sigma", "t"], rows)
}

pub fn domains(cfg: &RunConfig, k: Option<i64>, format: Format) -> Result<Outcome, CliError> {
    let format = data_format(format, "domains")?;
    let ses = Session::new(cfg)?;
    let atlas = build_atlas(ses.f(), &ses.rect, &cfg.atlas_options())?;
    let k = strip_k(&atlas, k)?;
    let rep = domains_report(&ses, &atlas, k);
    Ok(Outcome::single(match format {
        Format::Json => json("domains", &rep)?,
        _ => domains_csv(&rep)?,
    }))
}

// ------------------------------------------------------------------- probe

fn probe_csv(rep: &ProbeReport) -> Result<Artifact, CliError> {
    csv(
        "probe",
        &["lambda", "z_re", "z_im", "Z_re", "Z_im"],
        rep.lambdas
            .iter()
            .zip(rep.z.iter().zip(&rep.big_z))
            .map(|(l, (z, w))| vec![num(*l), num(z.re), num(z.im), num(w.re), num(w.im)]),
    )
}

pub fn probe(cfg: &RunConfig, sigma: f64, t: f64, samples: usize, format: Format) -> Result<Outcome, CliError> {
    let format = data_format(format, "probe")?;
    let target = cfg.target.target()?;
    let rep = probe_symmetric_pair(target.as_ref(), sigma, t, samples)?;
    Ok(Outcome::single(match format {
        Format::Json => json("probe", &rep)?,
        _ => probe_csv(&rep)?,
    }))
}

// -------------------------------------------------------------------- bohr

#[derive(Serialize)]
struct BohrZero {
    s: Complex64,
    coordinates: Vec<Complex64>,
    /// `Re z_k / β_k`, equal to `Re s` for every coordinate.
    re_over_beta: Vec<f64>,
    identity_residual: f64,
}

#[derive(Serialize)]
struct BohrReport {
    label: String,
    n_max: usize,
    basis: BohrBasis,
    zeros: Vec<BohrZero>,
}

pub fn bohr(cfg: &RunConfig, n_max: usize, format: Format) -> Result<Outcome, CliError> {
    let format = data_format(format, "bohr")?;
    let mut series_cfg = cfg.target.clone();
    series_cfg.n_terms = Some(n_max);
    let series = series_cfg.series()?;
    let basis = BohrBasis::for_series(&series)?;
    let n = n_max.min(series.len());
    let dim = basis.dim_for(n);
    let ses = Session::new(cfg)?;
    let zs = ses.zeros(false)?;
    let zeros: Vec<BohrZero> = zs
        .iter()
        .map(|z| {
            let full = map_zero_to_bohr(z.s, &basis);
            let lifted = bohr_eval(&series, &basis, &full, n)?;
            let coordinates: Vec<Complex64> = full[..dim].to_vec();
            Ok(BohrZero {
                s: z.s,
                re_over_beta: coordinates.iter().zip(&basis.betas).map(|(c, b)| c.re / b).collect(),
                coordinates,
                identity_residual: (lifted - eval_partial(&series, z.s, n)).norm(),
            })
        })
        .collect::<Result<_, CliError>>()?;
    let report = BohrReport { label: series.label.clone(), n_max: n, basis, zeros };
    Ok(Outcome::single(match format {
        Format::Json => json("bohr", &report)?,
        _ => {
            let mut rows = Vec::new();
            for (i, z) in report.zeros.iter().enumerate() {
                for (k, (c, b)) in z.coordinates.iter().zip(&report.basis.betas).enumerate() {
                    rows.push(vec![
                        i.to_string(),
                        num(z.s.re),
                        num(z.s.im),
                        k.to_string(),
                        num(*b),
                        num(c.re),
                        num(c.im),
                    ]);
                }
            }
            csv("bohr", &["zero", "sigma", "t", "k", "beta", "z_re", "z_im"], rows)?
        }
    }))
}

// -------------------------------------------------------------------- plot

/// Splits a real-axis pre-image curve into runs of one color, by the sign
/// of the value it covers.
fn colored_runs(curve: &LiftedCurve, system: CurveSystem) -> Vec<(Color, Vec<Complex64>)> {
    let (neg, pos) = match system {
        CurveSystem::Gamma => (Color::A, Color::B),
        CurveSystem::Upsilon => (Color::C, Color::D),
    };
    let mut runs: Vec<(Color, Vec<Complex64>)> = Vec::new();
    for p in &curve.samples {
        let c = if curve.path.point(p.tau).re < 0.0 { neg } else { pos };
        match runs.last_mut() {
            Some((rc, pts)) if *rc == c => pts.push(p.s),
            Some((_, pts)) => {
                let joint = *pts.last().expect("runs are nonempty");
                runs.push((c, vec![joint, p.s]));
            }
            None => runs.push((c, vec![p.s])),
        }
    }
    runs
}

struct Figure<'a> {
    ses: &'a Session,
    plot: Plot,
    rows: Vec<Vec<String>>,
    n_curves: usize,
}

impl<'a> Figure<'a> {
    fn new(ses: &'a Session, view: Rect, title: &str, x: &str, y: &str) -> Self {
        let plot = Plot::new(view, ses.cfg.figure.size, title, x, y);
        Self { ses, plot, rows: Vec::new(), n_curves: 0 }
    }

    fn curve(&mut self, family: &str, color: Color, pts: &[Complex64], width_factor: f64) {
        let pts = self.ses.decimate(pts);
        let id = self.n_curves;
        self.n_curves += 1;
        let name = format!("{color:?}").to_lowercase();
        for p in &pts {
            self.rows.push(vec![id.to_string(), family.into(), name.clone(), num(p.re), num(p.im)]);
        }
        let col = self.ses.color_of(color);
        self.plot.polyline(&pts, &col, self.ses.cfg.figure.stroke_width * width_factor);
    }

    fn real_curves(&mut self, curves: &[LiftedCurve], system: CurveSystem, family: &str, width: f64) {
        for c in curves {
            for (color, pts) in colored_runs(c, system) {
                self.curve(family, color, &pts, width);
            }
        }
    }

    fn points(&mut self, family: &str, pts: &[Complex64], hollow: bool) {
        for p in pts {
            self.rows.push(vec![String::new(), family.into(), "none".into(), num(p.re), num(p.im)]);
            self.plot.dot(*p, 3.0, "#000000", hollow);
        }
    }

    fn finish(self, name: &str) -> Result<Outcome, CliError> {
        let data = csv(name, &["curve", "family", "color", "x", "y"], self.rows)?;
        Ok(Outcome { primary: svg(name, self.plot.finish()), extra: vec![data], note: None })
    }
}

fn legend_gamma(fig: &mut Figure, with_upsilon: bool) {
    let p = fig.ses.cfg.figure.colors.clone();
    let mut entries = vec![(p.a.as_str(), "a"), (p.b.as_str(), "b")];
    if with_upsilon {
        entries.push((p.c.as_str(), "c"));
        entries.push((p.d.as_str(), "d"));
    }
    fig.plot.legend(&entries);
}

fn title(ses: &Session, what: &str) -> String {
    format!("{} · {what}", ses.f().label())
}

fn seeds_every(zs: &[Zero], n: usize) -> Vec<RealSeed> {
    zs.iter().step_by(n).map(|z| RealSeed::both(z.s)).collect()
}

pub fn plot(
    cfg: &RunConfig,
    what: PlotKind,
    k: Option<i64>,
    sigma: f64,
    t: f64,
    samples: usize,
) -> Result<Outcome, CliError> {
    let ses = Session::new(cfg)?;
    let opts = dirichlet_core::lifting::LiftOptions { bounds: Some(ses.rect), ..cfg.lift_options() };
    let dec = cfg.figure.seed_decimation;
    match what {
        PlotKind::RealAxisPreimage => {
            let zs = ses.zeros(false)?;
            let ds = ses.zeros(true)?;
            let gamma = preimage_real_axis(ses.f(), CurveSystem::Gamma, &seeds_every(&zs, dec), &opts)?;
            let d = Derivative(ses.f());
            let upsilon = preimage_real_axis(&d, CurveSystem::Upsilon, &seeds_every(&ds, dec), &opts)?;
            let mut fig = Figure::new(&ses, ses.rect, &title(&ses, "pre-image of the real axis"), "σ", "t");
            fig.plot.vertical_guide(0.0);
            fig.plot.vertical_guide(1.0);
            if ses.f().leading_term().is_some() {
                let bounds = Rect { sigma_max: ses.rect.sigma_max.max(26.0), ..ses.rect };
                let boundaries = trace_gamma_prime(ses.f(), &ses.rect, &bounds, &cfg.atlas_options())?;
                for b in &boundaries {
                    fig.curve("gamma-prime", Color::None, &b.curve.points(), 1.0);
                }
            }
            fig.real_curves(&upsilon, CurveSystem::Upsilon, "upsilon", 0.7);
            fig.real_curves(&gamma, CurveSystem::Gamma, "gamma", 1.0);
            fig.points("zero", &zs.iter().map(|z| z.s).collect::<Vec<_>>(), false);
            fig.points("derivative-zero", &ds.iter().map(|z| z.s).collect::<Vec<_>>(), true);
            legend_gamma(&mut fig, true);
            fig.finish("real-axis-preimage")
        }
        PlotKind::UnitCirclePreimage => {
            let zs = ses.zeros(false)?;
            let seeds: Vec<Complex64> = zs.iter().step_by(dec).map(|z| z.s).collect();
            let comps = preimage_circle(ses.f(), 1.0, &seeds, &opts)?;
            let mut fig = Figure::new(&ses, ses.rect, &title(&ses, "pre-image of the unit circle"), "σ", "t");
            for c in &comps {
                for curve in &c.curves {
                    fig.curve("unit-circle", Color::B, &curve.points(), 1.0);
                }
            }
            fig.points("zero", &zs.iter().map(|z| z.s).collect::<Vec<_>>(), false);
            fig.finish("unit-circle-preimage")
        }
        PlotKind::Strip | PlotKind::Domains => {
            let atlas = build_atlas(ses.f(), &ses.rect, &cfg.atlas_options())?;
            let name = if what == PlotKind::Strip { "strip" } else { "domains" };
            let mut fig = Figure::new(&ses, ses.rect, &title(&ses, name), "σ", "t");
            if what == PlotKind::Domains {
                let k = strip_k(&atlas, k)?;
                let rep = domains_report(&ses, &atlas, k);
                let fills = ["#fde0c5", "#c9e4f6", "#d8f0d2", "#eadcf5", "#fbf3c2"];
                for d in &rep.domains {
                    fig.plot.polygon(&d.boundary, fills[d.index % fills.len()], 0.8);
                    for p in &d.boundary {
                        fig.rows.push(vec![
                            String::new(),
                            format!("domain-{}", d.index),
                            "none".into(),
                            num(p.re),
                            num(p.im),
                        ]);
                    }
                }
                for s in &rep.slits {
                    fig.curve("slit", Color::None, &s.polyline, 1.4);
                }
            }
            for b in &atlas.boundaries {
                fig.curve("gamma-prime", Color::None, &b.curve.points(), 1.6);
            }
            fig.real_curves(&atlas.upsilon, CurveSystem::Upsilon, "upsilon", 0.7);
            fig.real_curves(&atlas.gamma, CurveSystem::Gamma, "gamma", 1.0);
            fig.points("zero", &atlas.zeros.iter().map(|z| z.s).collect::<Vec<_>>(), false);
            fig.points("derivative-zero", &atlas.derivative_zeros.iter().map(|z| z.s).collect::<Vec<_>>(), true);
            for st in &atlas.strips {
                if let Some(z) = st.zeros.first() {
                    fig.plot.label(z.s + Complex64::new(0.3, 0.0), &format!("S{}", st.k));
                }
            }
            legend_gamma(&mut fig, true);
            fig.finish(name)
        }
        PlotKind::Probe => {
            let rep = probe_symmetric_pair(ses.f(), sigma, t, samples)?;
            let view = bounding_view(rep.z.iter().chain(&rep.big_z).copied().chain([Complex64::new(0.0, 0.0)]))
                .ok_or_else(|| CliError::Numeric("probe traces are not finite".into()))?;
            let mut fig = Figure::new(&ses, view, &title(&ses, "probe traces z(λ), Z(λ)"), "Re w", "Im w");
            fig.plot.polyline(
                &[Complex64::new(view.sigma_min, 0.0), Complex64::new(view.sigma_max, 0.0)],
                "#999999",
                0.8,
            );
            fig.curve("z", Color::A, &rep.z, 1.0);
            fig.curve("Z", Color::C, &rep.big_z, 1.0);
            let events: Vec<Complex64> = rep
                .crossing_events
                .iter()
                .map(|e| {
                    let i = ((e.lambda * (rep.lambdas.len() - 1) as f64).round() as usize).min(rep.lambdas.len() - 1);
                    let v = match e.which {
                        dirichlet_core::atlas::CrossingKind::Gamma => rep.z[i],
                        dirichlet_core::atlas::CrossingKind::GammaPrime => rep.big_z[i],
                    };
                    Complex64::new(v.re, 0.0)
                })
                .collect();
            fig.points("crossing", &events, true);
            for (n, p) in events.iter().enumerate() {
                fig.plot.label(*p, &(n + 1).to_string());
            }
            let p = cfg.figure.colors.clone();
            fig.plot.legend(&[(p.a.as_str(), "z"), (p.c.as_str(), "Z")]);
            fig.finish("probe")
        }
    }
}
