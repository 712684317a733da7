//! Command-line front end: function evaluation, tables, verification suites,
//! solution export and the series report.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::diffcheck::{
    apply_casimir, recurrence_residual, Casimir, DiffError, RecurrenceForm, ScalarField6, ALL_RECURRENCES,
};
use crate::grouprep::{hyperspherical_m, jacobi_boost, su2_matrix_element, zfn, ComplexEulerAngles, GroupError};
use crate::gysystem::{
    bivector_metric, build_lambda, check_lambda_commutation, derived_vugw, dirac_chain, dirac_lambda_literal,
    dirac_operators_literal, invariance_check, maxwell_chain, maxwell_lambda_literal, maxwell_operators_literal,
    reference_bivector_metric, tabulated_vu, DottedRadical, GyError, LambdaSystem, RepChain,
};
use crate::liealg::{
    build_operators, check_lorentz_table, check_xy_table, max_abs, xy_basis, Flavor, LieError, OperatorSet,
};
use crate::numkit::{HalfInt, C64};
use crate::radial::{bessel_series, RadialError, SeriesDiagnostics, SeriesKind};
use crate::wavefield::{
    assemble, mo_alpha_check, separated_residual, separated_residual_with, standard_points, substitution_residual,
    tabulate, CotSign, PhaseRule, RadialGrid, RadialSource, Substitution, WaveError, WaveKind, WaveSpec,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Gy(#[from] GyError),
    #[error(transparent)]
    Radial(#[from] RadialError),
    #[error(transparent)]
    Wave(#[from] WaveError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "lorentz-harmonics",
    version,
    about = "Hyperspherical functions of the Lorentz group and separated wave equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one function value
    Eval(EvalArgs),
    /// Print the full (2l+1)x(2l+1) table of a function
    Table(TableArgs),
    /// Run a verification suite; exit status 1 if any check fails
    Check(CheckArgs),
    /// Solve and export a Dirac, Weyl or Maxwell solution
    Solve(SolveArgs),
    /// Term-growth diagnostics of the Bessel series for the radial functions
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    Zfn,
    Mfn,
    Su2,
    Jacobi,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct AngleArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub tau: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub psi: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub varep: f64,
}

impl AngleArgs {
    fn angles(&self) -> ComplexEulerAngles {
        ComplexEulerAngles::new(self.phi, self.epsilon, self.theta, self.tau, self.psi, self.varep)
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub function: Function,
    #[arg(short = 'l', allow_hyphen_values = true)]
    pub l: HalfInt,
    #[arg(short = 'm', allow_hyphen_values = true)]
    pub m: HalfInt,
    #[arg(short = 'n', allow_hyphen_values = true)]
    pub n: HalfInt,
    #[command(flatten)]
    pub angles: AngleArgs,
    /// conjugate representation (mfn only)
    #[arg(long)]
    pub dotted: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    pub function: Function,
    #[arg(short = 'l', allow_hyphen_values = true)]
    pub l: HalfInt,
    #[command(flatten)]
    pub angles: AngleArgs,
    #[arg(long)]
    pub dotted: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Suite {
    Commutators,
    Casimir,
    Recurrences,
    Lambda,
    Invariance,
    Residuals,
    All,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub suite: Suite,
    /// restrict the Casimir suite to one weight
    #[arg(short = 'l', allow_hyphen_values = true)]
    pub l: Option<HalfInt>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Dirac,
    Weyl,
    Maxwell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Ode,
    ClosedForm,
    BesselSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhaseArg {
    Separated,
    Row,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub kind: KindArg,
    #[arg(short = 'l', allow_hyphen_values = true)]
    pub l: HalfInt,
    #[arg(short = 'n', allow_hyphen_values = true)]
    pub n: HalfInt,
    /// weight of the dotted harmonics (defaults to l)
    #[arg(long, allow_hyphen_values = true)]
    pub l_dot: Option<HalfInt>,
    /// column label of the dotted harmonics (defaults to n)
    #[arg(long, allow_hyphen_values = true)]
    pub n_dot: Option<HalfInt>,
    #[arg(long, default_value_t = 0.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 0.5)]
    pub rmin: f64,
    #[arg(long, default_value_t = 5.0)]
    pub rmax: f64,
    /// number of radial grid points (rows of the output)
    #[arg(long, default_value_t = 512)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = SourceArg::Ode)]
    pub source: SourceArg,
    #[arg(long, value_enum, default_value_t = PhaseArg::Separated)]
    pub phase: PhaseArg,
    /// truncation of the series source
    #[arg(long, default_value_t = 8)]
    pub kmax: usize,
    #[command(flatten)]
    pub angles: AngleArgs,
    /// output file; `.json` selects JSON, anything else CSV
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// radius at which the series are evaluated
    #[arg(long, default_value_t = 1.5)]
    pub r: f64,
    #[arg(long)]
    pub json: bool,
}

/// Formats with 15 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.14e}")
}

fn complex_text(z: C64) -> String {
    format!("{} {}", sci(z.re), sci(z.im))
}

#[derive(Debug, Serialize)]
struct Value {
    function: String,
    l: HalfInt,
    m: HalfInt,
    n: HalfInt,
    re: f64,
    im: f64,
}

fn evaluate(f: Function, l: HalfInt, m: HalfInt, n: HalfInt, a: &AngleArgs, dotted: bool) -> Result<C64, CliError> {
    Ok(match f {
        Function::Zfn => zfn(l, m, n, a.theta, a.tau)?,
        Function::Mfn => hyperspherical_m(l, m, n, &a.angles(), dotted)?,
        Function::Su2 => su2_matrix_element(l, m, n, a.phi, a.theta, a.psi)?,
        Function::Jacobi => C64::new(jacobi_boost(l, m, n, a.tau)?, 0.0),
    })
}

fn function_name(f: Function) -> String {
    format!("{f:?}").to_lowercase()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    Info,
}

/// One line of a suite report. Informational lines carry no threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckLine {
    pub suite: Suite,
    pub name: String,
    pub residual: f64,
    pub threshold: Option<f64>,
    pub status: Status,
}

impl CheckLine {
    fn judged(suite: Suite, name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        let status = if residual <= threshold { Status::Pass } else { Status::Fail };
        CheckLine { suite, name: name.into(), residual, threshold: Some(threshold), status }
    }

    fn info(suite: Suite, name: impl Into<String>, residual: f64) -> Self {
        CheckLine { suite, name: name.into(), residual, threshold: None, status: Status::Info }
    }
}

pub const SUITE_SEED: u64 = 0x11e0_2005;

fn chain_system(chain: &RepChain) -> Result<(LambdaSystem, OperatorSet, OperatorSet), CliError> {
    let lam = build_lambda(chain, DottedRadical::Mirrored)?;
    Ok((lam, chain.undotted.operators(Flavor::Plain)?, chain.dotted.operators(Flavor::Tilde)?))
}

/// The four concrete systems: the two chains and the two explicit tables.
pub fn concrete_systems() -> Result<Vec<(&'static str, LambdaSystem, OperatorSet, OperatorSet)>, CliError> {
    let (dl, dops, ddops) = chain_system(&dirac_chain())?;
    let (ml, mops, mdops) = chain_system(&maxwell_chain())?;
    let (lo, ldo) = dirac_operators_literal();
    let (mo, mdo) = maxwell_operators_literal();
    Ok(vec![
        ("dirac chain", dl, dops, ddops),
        ("maxwell chain", ml, mops, mdops),
        ("dirac explicit", dirac_lambda_literal(), lo, ldo),
        ("maxwell explicit", maxwell_lambda_literal(), mo, mdo),
    ])
}

pub fn suite_commutators() -> Result<Vec<CheckLine>, CliError> {
    let s = Suite::Commutators;
    let mut out = Vec::new();
    for twice in 1..=6 {
        let l = HalfInt::from_twice(twice);
        for flavor in [Flavor::Plain, Flavor::Tilde] {
            let ops = build_operators(l, flavor)?;
            let table = check_lorentz_table(&ops).iter().map(|r| r.residual).fold(0.0, f64::max);
            out.push(CheckLine::judged(s, format!("lorentz brackets l={l} {flavor:?}"), table, 1e-12));
            let xy =
                check_xy_table(&xy_basis(&ops), flavor == Flavor::Tilde).iter().map(|r| r.residual).fold(0.0, f64::max);
            out.push(CheckLine::judged(s, format!("X/Y brackets l={l} {flavor:?}"), xy, 1e-12));
        }
    }
    for (name, lam, ops, dops) in concrete_systems()? {
        let rep = check_lambda_commutation(&lam, &ops, &dops)?;
        out.push(CheckLine::judged(s, format!("Lambda brackets {name}"), rep.residual_max, 1e-12));
    }
    Ok(out)
}

fn random_angles(rng: &mut ChaCha8Rng) -> ComplexEulerAngles {
    ComplexEulerAngles::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(0.4..2.7),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

fn random_label(rng: &mut ChaCha8Rng, l: HalfInt) -> HalfInt {
    l.descending()[rng.gen_range(0..l.dim())]
}

pub fn suite_casimir(only: Option<HalfInt>) -> Result<Vec<CheckLine>, CliError> {
    let s = Suite::Casimir;
    let weights: Vec<HalfInt> = match only {
        Some(l) => vec![l],
        None => (1..=4).map(HalfInt::from_twice).collect(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let points: Vec<ComplexEulerAngles> = (0..10).map(|_| random_angles(&mut rng)).collect();
    let mut out = Vec::new();
    for l in weights {
        let eigen = l.value() * (l.value() + 1.0);
        let (mut own, mut other): (f64, f64) = (0.0, 0.0);
        for m in l.descending() {
            for n in l.descending() {
                for dotted in [false, true] {
                    let f = ScalarField6::hyperspherical(l, m, n, dotted);
                    let (active, idle) = if dotted { (Casimir::Y2, Casimir::X2) } else { (Casimir::X2, Casimir::Y2) };
                    for p in &points {
                        let v = f.eval(p);
                        let scale = 1.0 + v.norm();
                        own = own.max((apply_casimir(&f, active, p)? + v * eigen).norm() / scale);
                        other = other.max(apply_casimir(&f, idle, p)?.norm() / scale);
                    }
                }
            }
        }
        out.push(CheckLine::judged(s, format!("eigenvalue -l(l+1) l={l}"), own, 1e-4));
        out.push(CheckLine::judged(s, format!("conjugate Casimir annihilates l={l}"), other, 1e-4));
    }
    Ok(out)
}

pub fn suite_recurrences() -> Result<Vec<CheckLine>, CliError> {
    let s = Suite::Recurrences;
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED + 1);
    let (mut verified, mut literal, mut substituted): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..50 {
        let l = HalfInt::from_twice(rng.gen_range(1..=6));
        let (m, n) = (random_label(&mut rng, l), random_label(&mut rng, l));
        let (theta, tau) = (rng.gen_range(0.4..2.7), rng.gen_range(-1.0..1.0));
        let scale = 1.0 + zfn(l, m, n, theta, tau)?.norm();
        for r in ALL_RECURRENCES {
            verified = verified.max(recurrence_residual(r, RecurrenceForm::Verified, l, m, n, theta, tau)? / scale);
            literal = literal.max(recurrence_residual(r, RecurrenceForm::Literal, l, m, n, theta, tau)? / scale);
        }
        for which in [Substitution::FromBelow, Substitution::FromAbove] {
            for dotted in [false, true] {
                if let Ok(v) = substitution_residual(l, m, n, theta, tau, which, dotted) {
                    substituted = substituted.max(v);
                }
            }
        }
    }
    Ok(vec![
        CheckLine::judged(s, "first-order recurrences, 50 draws", verified, 1e-4),
        CheckLine::judged(s, "bracket substitutions, 50 draws", substituted, 1e-4),
        CheckLine::info(s, "recurrences with real ladder factor and dotted labels", literal),
    ])
}

pub fn suite_lambda() -> Result<Vec<CheckLine>, CliError> {
    let s = Suite::Lambda;
    let mut out = Vec::new();
    for (name, chain) in [("dirac", dirac_chain()), ("maxwell", maxwell_chain())] {
        let (lam, ops, dops) = chain_system(&chain)?;
        let rep = check_lambda_commutation(&lam, &ops, &dops)?;
        out.push(CheckLine::judged(s, format!("Lambda brackets {name}"), rep.residual_max, 1e-12));
        let d = derived_vugw(&lam, &ops, &dops);
        let (v, u) = tabulated_vu(&chain);
        out.push(CheckLine::judged(s, format!("V matches table {name}"), max_abs(&(&d.v - v)), 1e-12));
        out.push(CheckLine::judged(s, format!("U matches table {name}"), max_abs(&(&d.u - u)), 1e-12));
        out.push(CheckLine::judged(s, format!("G = W = 0 {name}"), max_abs(&d.g).max(max_abs(&d.w)), 0.0));
    }
    out.push(CheckLine::judged(s, "photon spin matrices", mo_alpha_check().residual_max, 0.0));
    Ok(out)
}

pub fn suite_invariance() -> Result<Vec<CheckLine>, CliError> {
    let s = Suite::Invariance;
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED + 2);
    let draws: Vec<ComplexEulerAngles> = (0..20).map(|_| random_angles(&mut rng)).collect();
    let reference = reference_bivector_metric();
    let derived =
        bivector_metric(&[[-1.0, 0.0, 0.0, 0.0], [0.0, -1.0, 0.0, 0.0], [0.0, 0.0, -1.0, 0.0], [0.0, 0.0, 0.0, 1.0]])?;
    let mut out = Vec::new();
    for (name, lam, ops, dops) in concrete_systems()? {
        let (mut lambda, mut metric, mut other): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for a in &draws {
            let rep = invariance_check(&lam, &ops, &dops, a, &reference)?;
            lambda = lambda.max(rep.lambda_residual);
            metric = metric.max(rep.metric_residual);
            other = other.max(invariance_check(&lam, &ops, &dops, a, &derived)?.metric_residual);
        }
        out.push(CheckLine::judged(s, format!("Lambda transform like generators {name}"), lambda, 1e-10));
        out.push(CheckLine::judged(s, format!("bivector metric preserved {name}"), metric, 1e-10));
        out.push(CheckLine::info(s, format!("metric built from the Minkowski form {name}"), other));
    }
    Ok(out)
}

pub fn suite_residuals() -> Result<Vec<CheckLine>, CliError> {
    let s = Suite::Residuals;
    let points = standard_points();
    let half = HalfInt::HALF;
    let one = HalfInt::ONE;
    let mut cases = Vec::new();
    for n in [half, -half] {
        cases.push(WaveSpec::new(WaveKind::Dirac, half, n, 1.0));
    }
    for n in one.descending() {
        cases.push(WaveSpec::new(WaveKind::Maxwell, one, n, 0.0));
    }
    let mut out = Vec::new();
    for mut spec in cases {
        spec.grid = RadialGrid { rmin: 0.5, rmax: 3.5, nodes: 3001 };
        let tag = format!("{:?} l={} n={}", spec.kind, spec.l, spec.n);
        let sol = assemble(&spec)?;
        let base = separated_residual(&sol, &points)?.residual_max;
        let bumped = separated_residual(&sol.perturbed(0, 1.01), &points)?.residual_max;
        out.push(CheckLine::judged(s, format!("separated system {tag}"), base, 1e-4));
        out.push(CheckLine::judged(s, format!("perturbation control {tag} (base/perturbed)"), base / bumped, 0.1));
        out.push(CheckLine::info(
            s,
            format!("positive cotangent sign {tag}"),
            separated_residual_with(&sol, &points, CotSign::Positive)?.residual_max,
        ));
        if spec.kind == WaveKind::Dirac {
            spec.source = RadialSource::ClosedForm;
            spec.rule = PhaseRule::RowPhase;
            let shown = assemble(&spec)?;
            out.push(CheckLine::info(
                s,
                format!("closed form with row phases {tag}"),
                separated_residual(&shown, &points)?.residual_max,
            ));
        }
    }
    Ok(out)
}

pub fn run_suite(suite: Suite, l: Option<HalfInt>) -> Result<Vec<CheckLine>, CliError> {
    Ok(match suite {
        Suite::Commutators => suite_commutators()?,
        Suite::Casimir => suite_casimir(l)?,
        Suite::Recurrences => suite_recurrences()?,
        Suite::Lambda => suite_lambda()?,
        Suite::Invariance => suite_invariance()?,
        Suite::Residuals => suite_residuals()?,
        Suite::All => {
            let mut all = Vec::new();
            for s in [
                Suite::Commutators,
                Suite::Casimir,
                Suite::Recurrences,
                Suite::Lambda,
                Suite::Invariance,
                Suite::Residuals,
            ] {
                all.extend(run_suite(s, l)?);
            }
            all
        }
    })
}

#[derive(Debug, Serialize)]
struct SuiteSummary<'a> {
    suite: Suite,
    pass: bool,
    checks: &'a [CheckLine],
}

/// Series evaluated at kmax 4, 8 and 16 for each listed weight.
pub fn series_report(r: f64) -> Result<Vec<SeriesDiagnostics>, CliError> {
    let mut out = Vec::new();
    let kappa = crate::radial::dirac_kappa(1.0);
    for kind in [SeriesKind::Dirac, SeriesKind::Weyl, SeriesKind::Maxwell] {
        let weights: Vec<HalfInt> = match kind {
            SeriesKind::Maxwell => (1..=3).map(HalfInt::from_int).collect(),
            _ => [1, 3, 5].map(HalfInt::from_twice).to_vec(),
        };
        for w in weights {
            for kmax in [4, 8, 16] {
                out.push(bessel_series(kind, w, r, kmax, kappa)?);
            }
        }
    }
    Ok(out)
}

fn kind_of(k: KindArg) -> WaveKind {
    match k {
        KindArg::Dirac => WaveKind::Dirac,
        KindArg::Weyl => WaveKind::Weyl,
        KindArg::Maxwell => WaveKind::Maxwell,
    }
}

/// Runs a parsed command and returns the process exit status.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Eval(a) => {
            let v = evaluate(a.function, a.l, a.m, a.n, &a.angles, a.dotted)?;
            if a.json {
                let rec = Value { function: function_name(a.function), l: a.l, m: a.m, n: a.n, re: v.re, im: v.im };
                writeln!(out, "{}", serde_json::to_string(&rec)?)?;
            } else {
                writeln!(out, "{}", complex_text(v))?;
            }
            Ok(0)
        }
        Command::Table(a) => {
            let mut rows = Vec::new();
            for m in a.l.descending() {
                for n in a.l.descending() {
                    let v = evaluate(a.function, a.l, m, n, &a.angles, a.dotted)?;
                    rows.push(Value { function: function_name(a.function), l: a.l, m, n, re: v.re, im: v.im });
                }
            }
            if a.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?;
            } else {
                for r in rows {
                    writeln!(out, "{} {} {} {}", r.m, r.n, sci(r.re), sci(r.im))?;
                }
            }
            Ok(0)
        }
        Command::Check(a) => {
            let lines = run_suite(a.suite, a.l)?;
            let pass = lines.iter().all(|c| c.status != Status::Fail);
            if a.json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&SuiteSummary { suite: a.suite, pass, checks: &lines })?
                )?;
            } else {
                for c in &lines {
                    let tag = match c.status {
                        Status::Pass => "PASS",
                        Status::Fail => "FAIL",
                        Status::Info => "INFO",
                    };
                    match c.threshold {
                        Some(t) => writeln!(
                            out,
                            "{tag} {:?}: {} residual={} threshold={}",
                            c.suite,
                            c.name,
                            sci(c.residual),
                            sci(t)
                        )?,
                        None => writeln!(out, "{tag} {:?}: {} residual={}", c.suite, c.name, sci(c.residual))?,
                    }
                }
                writeln!(out, "{}", if pass { "all checks passed" } else { "some checks failed" })?;
            }
            Ok(if pass { 0 } else { 1 })
        }
        Command::Solve(a) => {
            let mut spec = WaveSpec::new(kind_of(a.kind), a.l, a.n, a.mass);
            spec.l_dot = a.l_dot.unwrap_or(a.l);
            spec.n_dot = a.n_dot.unwrap_or(a.n);
            spec.source = match a.source {
                SourceArg::Ode => RadialSource::Ode,
                SourceArg::ClosedForm => RadialSource::ClosedForm,
                SourceArg::BesselSeries => RadialSource::BesselSeries,
            };
            spec.rule = match a.phase {
                PhaseArg::Separated => PhaseRule::Separated,
                PhaseArg::Row => PhaseRule::RowPhase,
            };
            spec.kmax = a.kmax;
            spec.grid = RadialGrid { rmin: a.rmin, rmax: a.rmax, nodes: a.steps };
            if a.steps < 17 {
                return Err(WaveError::Range(format!("at least 17 grid points required, got {}", a.steps)).into());
            }
            let sol = assemble(&spec)?;
            let table = tabulate(&sol, &spec.grid.points(), a.angles.angles())?;
            let json = a.json || a.out.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "json"));
            match &a.out {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(path)?);
                    if json {
                        writeln!(w, "{}", table.to_json()?)?;
                    } else {
                        table.write_csv(&mut w)?;
                    }
                    w.flush()?;
                }
                None if json => writeln!(out, "{}", table.to_json()?)?,
                None => table.write_csv(&mut *out)?,
            }
            Ok(0)
        }
        Command::Report(a) => {
            let report = series_report(a.r)?;
            if a.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                for d in &report {
                    let last = d.ratios.last().copied().unwrap_or(f64::NAN);
                    writeln!(
                        out,
                        "{:?} weight={} r={} kmax={} last_ratio={} poles_skipped={} {}",
                        d.kind,
                        d.weight,
                        d.r,
                        d.kmax,
                        sci(last),
                        d.pole_terms,
                        if d.growing { "NOT CONVERGING" } else { "terms decreasing" }
                    )?;
                }
            }
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let cli = Cli::try_parse_from(args).unwrap();
        let mut buf = Vec::new();
        let code = run(cli, &mut buf).unwrap();
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn eval_matches_library() {
        let (code, text) =
            run_args(&["lh", "eval", "zfn", "-l", "1/2", "-m", "1/2", "-n", "1/2", "--theta", "1.0", "--tau", "0.5"]);
        assert_eq!(code, 0);
        let v = zfn(HalfInt::HALF, HalfInt::HALF, HalfInt::HALF, 1.0, 0.5).unwrap();
        assert_eq!(text.trim(), complex_text(v));
        let (_, text) =
            run_args(&["lh", "eval", "zfn", "-l", "0", "-m", "0", "-n", "0", "--theta", "0.3", "--tau", "0.1"]);
        assert_eq!(text.trim(), "1.00000000000000e0 0.00000000000000e0");
    }

    #[test]
    fn parity_and_unknown_flags_rejected() {
        let e = Cli::try_parse_from(["lh", "eval", "zfn", "-l", "2/3", "-m", "0", "-n", "0"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(Cli::try_parse_from(["lh", "eval", "zfn", "-l", "1", "-m", "0", "-n", "0", "--bogus"]).is_err());
        let ok = Cli::try_parse_from(["lh", "eval", "zfn", "-l", "0.5", "-m", "-1/2", "-n", "-0.5"]).unwrap();
        match ok.command {
            Command::Eval(a) => assert_eq!((a.l, a.m, a.n), (HalfInt::HALF, -HalfInt::HALF, -HalfInt::HALF)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn commutator_suite_passes() {
        let lines = suite_commutators().unwrap();
        assert!(lines.iter().all(|c| c.status == Status::Pass));
    }

    #[test]
    fn json_table_parses() {
        let (_, text) = run_args(&["lh", "table", "zfn", "-l", "1", "--theta", "0.7", "--tau", "0.2", "--json"]);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 9);
    }
}
