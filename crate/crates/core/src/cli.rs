//! Command-line front end.

use crate::construct::{decompose, verify};
use crate::criteria;
use crate::error::{Error, Result};
use crate::family::{self, boundary, landmarks, FamilyPoint};
use crate::ghz::{StateDoc, LABELS};
use crate::optimizer::{self, minimize_l_state, scan_numeric_boundary, Mode, OptimizerConfig};
use crate::reference as refv;
use crate::witness::{witness_report, WitnessDoc};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "ghzwl", version, about = "Tripartite entanglement witnesses for four-qubit GHZ-diagonal states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Inspect or normalize a state document.
    #[command(subcommand)]
    State(StateCmd),
    /// Evaluate the separability criteria.
    #[command(subcommand)]
    Criteria(CriteriaCmd),
    /// Evaluate or optimize a witness.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// The highly symmetric family.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Explicit separable decompositions of boundary states.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Regenerate published figures and tables as data.
    #[command(subcommand)]
    Reproduce(ReproduceCmd),
}

#[derive(Subcommand, Debug)]
pub enum StateCmd {
    /// Print probabilities, correlations and the density-matrix parameters.
    Show(StateArgs),
    /// Write the state with both probability and correlation blocks.
    Convert(StateArgs),
}

#[derive(Subcommand, Debug)]
pub enum CriteriaCmd {
    /// Evaluate criteria I to IV and give a verdict.
    Check(StateArgs),
}

#[derive(Subcommand, Debug)]
pub enum WitnessCmd {
    /// Evaluate a witness on a state.
    Eval {
        #[arg(long)]
        witness: PathBuf,
        #[command(flatten)]
        state: StateArgs,
    },
    /// Minimize L over witnesses for a state.
    Optimize {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        opt: OptArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum FamilyCmd {
    /// Landmark coordinates of the boundary.
    Landmarks(P16Args),
    /// Sample the separability boundary segment by segment.
    Boundary {
        #[command(flatten)]
        p: P16Args,
        /// Points per segment.
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// State of the family from (v, alpha) or (p15, p2).
    State {
        #[arg(long, default_value_t = 0.0)]
        p16: f64,
        #[arg(long, requires = "alpha")]
        v: Option<f64>,
        #[arg(long, requires = "v")]
        alpha: Option<f64>,
        #[arg(long, requires = "p2", conflicts_with = "v")]
        p15: Option<f64>,
        #[arg(long, requires = "p15")]
        p2: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum ConstructCmd {
    /// Build and check decompositions along boundary segments.
    Verify {
        #[command(flatten)]
        p: P16Args,
        /// Restrict to one segment label.
        #[arg(long)]
        segment: Option<String>,
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// Write the first decomposition of each segment as JSON instead of the summary.
        #[arg(long)]
        terms: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum ReproduceCmd {
    /// Boundary at p16 = 0.
    Figure1(FigureArgs),
    /// Boundary at p16 = 0.3.
    Figure2(FigureArgs),
    /// Criterion III and IV curves near point C.
    Figure3 {
        #[command(flatten)]
        out: OutArgs,
    },
    /// Landmarks against the reference table.
    Landmarks {
        #[command(flatten)]
        out: OutArgs,
    },
    /// Symmetric and asymmetric optima for the reference correlations.
    AppendixE {
        #[command(flatten)]
        opt: OptArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evidence that each criterion is strictly stronger.
    Hierarchy {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct OutArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct StateArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct P16Args {
    #[arg(long, default_value_t = 0.0)]
    pub p16: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct OptArgs {
    #[arg(long, value_enum, default_value_t = CliMode::Asymmetric)]
    pub mode: CliMode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub starts: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CliMode {
    Symmetric,
    Asymmetric,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Mode {
        match m {
            CliMode::Symmetric => Mode::Symmetric,
            CliMode::Asymmetric => Mode::Asymmetric,
        }
    }
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    /// Also run the numerical boundary scan on a grid of this size.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

/// Output sink plus the pass/fail lines of reference checks, which go to stderr.
struct Output {
    buf: String,
    path: Option<PathBuf>,
}

impl Output {
    fn new(o: &OutArgs) -> Self {
        Output { buf: String::new(), path: o.out.clone() }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.buf.push_str(s.as_ref());
        self.buf.push('\n');
    }

    fn json<T: Serialize>(&mut self, v: &T) -> Result<()> {
        let s = serde_json::to_string_pretty(v)?;
        self.line(s);
        Ok(())
    }

    fn csv<T: Serialize>(&mut self, rows: &[T]) -> Result<()> {
        let mut w = csv::Writer::from_writer(vec![]);
        for r in rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        self.buf.push_str(&String::from_utf8_lossy(&bytes));
        Ok(())
    }

    fn finish(self) -> Result<()> {
        match self.path {
            Some(p) => std::fs::write(p, self.buf)?,
            None => match std::io::stdout().write_all(self.buf.as_bytes()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            },
        }
        Ok(())
    }
}

fn check(name: &str, ok: bool, detail: String) -> bool {
    eprintln!("[{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

/// Nine significant digits.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..9).contains(&mag) {
        format!("{:.*}", (8 - mag).max(0) as usize, x)
    } else {
        format!("{x:.8e}")
    }
}

fn read_state(p: &PathBuf) -> Result<crate::ghz::GhzState> {
    let doc: StateDoc = serde_json::from_str(&std::fs::read_to_string(p)?)?;
    doc.to_state()
}

#[derive(Serialize)]
struct StateRow {
    index: usize,
    label: String,
    p: String,
    r: String,
}

fn state_show(a: &StateArgs, convert: bool) -> Result<()> {
    let s = read_state(&a.state)?;
    let mut o = Output::new(&a.out);
    if a.out.format == Some(Format::Csv) && !convert {
        let r = s.correlations();
        let rows: Vec<StateRow> = (0..16)
            .map(|j| StateRow {
                index: j + 1,
                label: if j < 15 { LABELS[j].to_string() } else { String::new() },
                p: sig9(s.p(j + 1)),
                r: if j < 15 { sig9(r.get(j + 1)) } else { String::new() },
            })
            .collect();
        o.csv(&rows)?;
    } else {
        o.json(&StateDoc::from_state(&s))?;
    }
    o.finish()
}

fn criteria_check(a: &StateArgs) -> Result<()> {
    let s = read_state(&a.state)?;
    let rep = criteria::evaluate(&s);
    let mut o = Output::new(&a.out);
    o.json(&rep)?;
    o.finish()
}

fn witness_eval(witness: &PathBuf, a: &StateArgs) -> Result<()> {
    let w: WitnessDoc = serde_json::from_str(&std::fs::read_to_string(witness)?)?;
    let s = read_state(&a.state)?;
    let rep = witness_report(&w.to_params()?, &s)?;
    let mut o = Output::new(&a.out);
    o.json(&rep)?;
    o.finish()
}

fn opt_config(a: &OptArgs) -> OptimizerConfig {
    OptimizerConfig { mode: a.mode.into(), starts: a.starts, seed: a.seed, ..Default::default() }
}

fn witness_optimize(a: &StateArgs, opt: &OptArgs) -> Result<()> {
    let s = read_state(&a.state)?;
    let res = minimize_l_state(&s, &opt_config(opt))?;
    let mut o = Output::new(&a.out);
    o.json(&res)?;
    o.finish()
}

#[derive(Serialize)]
struct LandmarkRow {
    label: String,
    v: String,
    alpha: String,
    p15: String,
    p2: String,
    p1: String,
    p16: String,
}

fn family_landmarks(a: &P16Args) -> Result<()> {
    let lm = landmarks(a.p16)?;
    let mut o = Output::new(&a.out);
    if a.out.format == Some(Format::Json) {
        o.json(&lm)?;
    } else {
        let rows: Vec<LandmarkRow> = lm
            .iter()
            .map(|l| LandmarkRow {
                label: l.label.into(),
                v: sig9(l.v),
                alpha: sig9(l.alpha),
                p15: sig9(l.p15),
                p2: sig9(l.p2),
                p1: sig9(l.p1),
                p16: sig9(a.p16),
            })
            .collect();
        o.csv(&rows)?;
    }
    o.finish()
}

#[derive(Serialize)]
struct BoundaryRow {
    segment_label: String,
    criterion: String,
    v: String,
    alpha: String,
    p15: String,
    p2: String,
    p1: String,
    p16: String,
}

fn boundary_rows(p16: f64, n: usize) -> Result<Vec<BoundaryRow>> {
    Ok(boundary(p16, n)?
        .iter()
        .flat_map(|s| {
            s.points.iter().map(move |p| BoundaryRow {
                segment_label: s.label.into(),
                criterion: s.source.name().into(),
                v: sig9(p.v),
                alpha: sig9(p.alpha),
                p15: sig9(p.p15()),
                p2: sig9(p.p2()),
                p1: sig9(p.p1()),
                p16: sig9(p16),
            })
        })
        .collect())
}

fn family_boundary(a: &P16Args, points: usize) -> Result<()> {
    let rows = boundary_rows(a.p16, points)?;
    let mut o = Output::new(&a.out);
    if a.out.format == Some(Format::Json) {
        o.json(&rows)?;
    } else {
        o.csv(&rows)?;
    }
    o.finish()
}

fn family_state(p16: f64, v: Option<f64>, alpha: Option<f64>, p15: Option<f64>, p2: Option<f64>, out: &OutArgs) -> Result<()> {
    let pt = match (v, alpha, p15, p2) {
        (Some(v), Some(a), _, _) => FamilyPoint::new(p16, v, a)?,
        (_, _, Some(x), Some(y)) => FamilyPoint::from_probs(x, y, p16)?,
        _ => return Err(Error::Invalid("give --v and --alpha, or --p15 and --p2".into())),
    };
    let s = pt.to_state()?;
    let mut o = Output::new(out);
    o.json(&StateDoc::from_state(&s))?;
    o.finish()
}

#[derive(Serialize)]
struct VerifyRow {
    segment: String,
    criterion: String,
    index: usize,
    v: String,
    alpha: String,
    ok: bool,
    residual: String,
    weight_sum: String,
    min_weight: String,
    terms: usize,
    error: String,
}

fn construct_verify(a: &P16Args, segment: &Option<String>, points: usize, terms: bool) -> Result<()> {
    let segs = boundary(a.p16, points)?;
    let mut o = Output::new(&a.out);
    let mut rows = Vec::new();
    let mut docs = Vec::new();
    let mut failures = 0;
    for s in segs.iter().filter(|s| segment.as_deref().map_or(true, |l| l == s.label)) {
        for (i, p) in s.points.iter().enumerate() {
            let (ok, rep, err) = match decompose(p, s.source, s.label) {
                Ok(d) => {
                    let r = verify(&d);
                    if terms && i == 0 {
                        docs.push(d);
                    }
                    (r.ok, Some(r), String::new())
                }
                Err(e) => (false, None, e.to_string()),
            };
            failures += usize::from(!ok);
            rows.push(VerifyRow {
                segment: s.label.into(),
                criterion: s.source.name().into(),
                index: i,
                v: sig9(p.v),
                alpha: sig9(p.alpha),
                ok,
                residual: rep.map_or(String::new(), |r| sig9(r.residual)),
                weight_sum: rep.map_or(String::new(), |r| sig9(r.weight_sum)),
                min_weight: rep.map_or(String::new(), |r| sig9(r.min_weight)),
                terms: rep.map_or(0, |r| r.terms),
                error: err,
            });
        }
    }
    if rows.is_empty() {
        return Err(Error::Invalid(format!("no segment named {:?}", segment.as_deref().unwrap_or(""))));
    }
    if terms {
        o.json(&docs)?;
    } else if a.out.format == Some(Format::Json) {
        o.json(&rows)?;
    } else {
        o.csv(&rows)?;
    }
    o.finish()?;
    eprintln!("{} of {} points reconstructed", rows.len() - failures, rows.len());
    if failures > 0 {
        return Err(Error::Infeasible(format!("{failures} boundary points without a verified decomposition")));
    }
    Ok(())
}

#[derive(Serialize)]
struct ScanRow {
    p15: String,
    p2: String,
    #[serde(rename = "L_min")]
    l_min: String,
}

fn reproduce_figure(p16: f64, a: &FigureArgs) -> Result<()> {
    let rows = boundary_rows(p16, a.points)?;
    let lm = landmarks(p16)?;
    for r in refv::LANDMARKS.iter().filter(|r| r.p16 == p16 && r.label != "C" && r.label != "H") {
        let got = lm.iter().find(|l| l.label == r.label);
        let dev = got.map_or(f64::INFINITY, |l| {
            r.v.map_or(0.0, |v| (l.v - v).abs()).max(r.alpha.map_or(0.0, |x| (l.alpha - x).abs()))
        });
        check(&format!("landmark {}", r.label), dev <= r.tol, format!("deviation {dev:.2e}"));
    }
    let mut o = Output::new(&a.out);
    match a.grid {
        None => o.csv(&rows)?,
        Some(g) => {
            let cfg = OptimizerConfig { seed: a.seed, ..Default::default() };
            let scan = scan_numeric_boundary(p16, g, &cfg)?;
            let level = scan.level_set();
            let worst = optimizer::distance_to_boundary(p16, &level)?.into_iter().fold(0.0, f64::max);
            check(
                "numeric level set vs analytic boundary",
                worst < refv::BOUNDARY_SCAN_TOL,
                format!("max deviation {worst:.2e} over {} crossings", level.len()),
            );
            let pts: Vec<ScanRow> = scan
                .points()
                .iter()
                .map(|p| ScanRow { p15: sig9(p.p15), p2: sig9(p.p2), l_min: sig9(p.l_min) })
                .collect();
            o.csv(&pts)?;
        }
    }
    o.finish()
}

#[derive(Serialize)]
struct CurveRow {
    curve: &'static str,
    k: String,
    v: String,
    alpha: String,
}

fn reproduce_figure3(out: &OutArgs) -> Result<()> {
    let c = family::point_c(0.0)?;
    let mut rows = Vec::new();
    let n = 81;
    for i in 0..n {
        let v = c.v - 0.05 + 0.1 * i as f64 / (n - 1) as f64;
        if let Some((_, hi)) = family::quartic_alpha(v) {
            rows.push(CurveRow { curve: "III", k: String::new(), v: sig9(v), alpha: sig9(hi) });
        }
    }
    for i in 0..n {
        let k = c.k - 0.3 + 0.6 * i as f64 / (n - 1) as f64;
        if let Ok((v, a)) = family::cd_curve(k) {
            rows.push(CurveRow { curve: "IV", k: sig9(k), v: sig9(v), alpha: sig9(a) });
        }
    }
    let h = 1e-5;
    let s3 = (family::quartic_alpha(c.v + h).map(|x| x.1).unwrap_or(f64::NAN)
        - family::quartic_alpha(c.v - h).map(|x| x.1).unwrap_or(f64::NAN))
        / (2.0 * h);
    let (v1, a1) = family::cd_curve(c.k + h)?;
    let (v0, a0) = family::cd_curve(c.k - h)?;
    let s4 = (a1 - a0) / (v1 - v0);
    check("point C", (c.v - refv::V_C).abs() < refv::C_TOL && (c.alpha - refv::ALPHA_C).abs() < refv::C_TOL, format!("v = {:.7}, alpha = {:.6}, K = {:.7}", c.v, c.alpha, c.k));
    check("tangency at C", (s3 - s4).abs() < 1e-3 * s3.abs().max(1.0), format!("slopes {s3:.6} (III) and {s4:.6} (IV)"));
    let mut o = Output::new(out);
    if out.format == Some(Format::Json) {
        o.json(&rows)?;
    } else {
        o.csv(&rows)?;
    }
    o.finish()
}

#[derive(Serialize)]
struct LandmarkCheck {
    p16: f64,
    label: String,
    v: f64,
    alpha: f64,
    ref_v: Option<f64>,
    ref_alpha: Option<f64>,
    deviation: f64,
    pass: bool,
}

fn reproduce_landmarks(out: &OutArgs) -> Result<()> {
    let mut rows = Vec::new();
    for p16 in [0.0, 0.3] {
        let lm = landmarks(p16)?;
        for l in &lm {
            let r = refv::LANDMARKS.iter().find(|r| r.p16 == p16 && r.label == l.label);
            let dev = r.map_or(0.0, |r| {
                r.v.map_or(0.0, |v| (l.v - v).abs()).max(r.alpha.map_or(0.0, |a| (l.alpha - a).abs()))
            });
            let pass = r.map_or(true, |r| dev <= r.tol);
            rows.push(LandmarkCheck {
                p16,
                label: l.label.into(),
                v: l.v,
                alpha: l.alpha,
                ref_v: r.and_then(|r| r.v),
                ref_alpha: r.and_then(|r| r.alpha),
                deviation: dev,
                pass,
            });
            if r.is_some() {
                check(&format!("p16={p16} {}", l.label), pass, format!("deviation {dev:.2e}"));
            }
        }
        if p16 == 0.3 {
            for (lab, want) in [("I", refv::P2_I), ("J", refv::P2_J)] {
                let p2 = lm.iter().find(|l| l.label == lab).map_or(f64::NAN, |l| l.p2);
                check(&format!("p16=0.3 {lab} p2"), (p2 - want).abs() < 1e-9, format!("p2 = {p2:.9}"));
            }
        }
    }
    let mut o = Output::new(out);
    if out.format == Some(Format::Json) {
        o.json(&rows)?;
    } else {
        o.csv(&rows)?;
    }
    o.finish()
}

#[derive(Serialize)]
struct AppendixE {
    symmetric: optimizer::Optimum,
    asymmetric: optimizer::Optimum,
    reference_symmetric: f64,
    reference_asymmetric: f64,
}

fn reproduce_appendix_e(opt: &OptArgs, out: &OutArgs) -> Result<()> {
    let r = optimizer::appendix_e_correlations();
    let base = opt_config(opt);
    let sym = optimizer::minimize_l(&r, &OptimizerConfig { mode: Mode::Symmetric, ..base })?;
    let asym = optimizer::minimize_l(&r, &OptimizerConfig { mode: Mode::Asymmetric, ..base })?;
    check(
        "symmetric L_min",
        (sym.l_min - refv::APPENDIX_E_SYMMETRIC).abs() <= refv::APPENDIX_E_TOL,
        format!("{:.4} vs {}", sym.l_min, refv::APPENDIX_E_SYMMETRIC),
    );
    check(
        "asymmetric L_min",
        (asym.l_min - refv::APPENDIX_E_ASYMMETRIC).abs() <= refv::APPENDIX_E_TOL,
        format!("{:.4} vs {}", asym.l_min, refv::APPENDIX_E_ASYMMETRIC),
    );
    check("asymmetric below symmetric", asym.l_min < sym.l_min, format!("gap {:.4}", sym.l_min - asym.l_min));
    let mut o = Output::new(out);
    o.json(&AppendixE {
        symmetric: sym,
        asymmetric: asym,
        reference_symmetric: refv::APPENDIX_E_SYMMETRIC,
        reference_asymmetric: refv::APPENDIX_E_ASYMMETRIC,
    })?;
    o.finish()
}

fn reproduce_hierarchy(seed: u64, out: &OutArgs) -> Result<()> {
    let rep = optimizer::verify_hierarchy(seed)?;
    check(
        "C1 strictly inside C2",
        rep.c1_strict(),
        format!("criterion I margin {:.4}, criterion II margin {:.4}", rep.c1_margin_i, rep.c1_margin_ii),
    );
    check(
        "C2 strictly inside C3",
        rep.c2_strict(),
        format!("symmetric {:.4}, asymmetric {:.4}", rep.appendix_e_symmetric, rep.appendix_e_asymmetric),
    );
    check("Werner p = 0.19 passes C2", rep.werner_passes_c2, String::new());
    let mut o = Output::new(out);
    o.json(&rep)?;
    o.finish()
}

/// Exit status for an error: 1 for bad input, 2 for a failed computation.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::IndexOutOfRange(_)
        | Error::NegativeProbability { .. }
        | Error::NotNormalized(_)
        | Error::Invalid(_)
        | Error::AssumptionViolation(_)
        | Error::Unphysical(_)
        | Error::Domain(_)
        | Error::Unsupported(_)
        | Error::NotXType
        | Error::Io(_)
        | Error::Json(_)
        | Error::Csv(_) => 1,
        Error::NonpositiveDenominator(_)
        | Error::NoIntersection(_)
        | Error::Infeasible(_)
        | Error::Degenerate
        | Error::Assembly { .. } => 2,
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::State(StateCmd::Show(a)) => state_show(a, false),
        Command::State(StateCmd::Convert(a)) => state_show(a, true),
        Command::Criteria(CriteriaCmd::Check(a)) => criteria_check(a),
        Command::Witness(WitnessCmd::Eval { witness, state }) => witness_eval(witness, state),
        Command::Witness(WitnessCmd::Optimize { state, opt }) => witness_optimize(state, opt),
        Command::Family(FamilyCmd::Landmarks(a)) => family_landmarks(a),
        Command::Family(FamilyCmd::Boundary { p, points }) => family_boundary(p, *points),
        Command::Family(FamilyCmd::State { p16, v, alpha, p15, p2, out }) => family_state(*p16, *v, *alpha, *p15, *p2, out),
        Command::Construct(ConstructCmd::Verify { p, segment, points, terms }) => construct_verify(p, segment, *points, *terms),
        Command::Reproduce(ReproduceCmd::Figure1(a)) => reproduce_figure(0.0, a),
        Command::Reproduce(ReproduceCmd::Figure2(a)) => reproduce_figure(0.3, a),
        Command::Reproduce(ReproduceCmd::Figure3 { out }) => reproduce_figure3(out),
        Command::Reproduce(ReproduceCmd::Landmarks { out }) => reproduce_landmarks(out),
        Command::Reproduce(ReproduceCmd::AppendixE { opt, out }) => reproduce_appendix_e(opt, out),
        Command::Reproduce(ReproduceCmd::Hierarchy { seed, out }) => reproduce_hierarchy(*seed, out),
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if let Some(n) = std::env::var("GHZWL_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
