//! Wave functions on the complex sphere: coordinates and first-order
//! derivatives on the sphere and its dual, assembly of Dirac, Weyl and
//! Maxwell solutions from radial functions and hyperspherical harmonics, and
//! the end-to-end residual of the separated component system.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::diffcheck::{partial6, DiffError, DiffReport, ScalarField6, Var, DEFAULT_STEP};
use crate::grouprep::{zfn, CMat, ComplexEulerAngles, GroupError};
use crate::gysystem::{
    build_lambda, derived_vugw, dirac_chain, maxwell_chain, maxwell_lambda_literal, DottedRadical, GyError, RepChain,
};
use crate::liealg::{commutator, max_abs, Flavor};
use crate::numkit::{ladder_alpha, HalfInt, C64, I};
use crate::radial::{
    bessel_series, build_rfs, dirac_kappa, integrate, reduce_dirac, reduce_maxwell, ComponentLabel, PowerExp,
    RadialError, RadialMeta, RadialProfile, RadialSystem, RfsForm, SeriesKind,
};

#[derive(Debug, Error)]
pub enum WaveError {
    #[error("out of range: {0}")]
    Range(String),
    #[error(transparent)]
    Radial(#[from] RadialError),
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Gy(#[from] GyError),
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// A point of the complex sphere together with the radius of its dual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereCoords {
    pub r: f64,
    pub rstar: f64,
    pub angles: ComplexEulerAngles,
}

impl SphereCoords {
    pub fn new(r: f64, rstar: f64, angles: ComplexEulerAngles) -> Self {
        SphereCoords { r, rstar, angles }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereCartesian {
    pub z: [C64; 3],
    pub zs: [C64; 3],
}

impl SphereCartesian {
    pub fn square(&self) -> C64 {
        self.z.iter().map(|z| z * z).sum()
    }

    pub fn square_dual(&self) -> C64 {
        self.zs.iter().map(|z| z * z).sum()
    }
}

pub fn sphere_cartesian(p: &SphereCoords) -> SphereCartesian {
    let polar =
        |r: f64, phi: C64, theta: C64| [theta.sin() * phi.cos() * r, theta.sin() * phi.sin() * r, theta.cos() * r];
    let a = &p.angles;
    SphereCartesian { z: polar(p.r, a.phi_c(), a.theta_c()), zs: polar(p.rstar, a.phi_c_dot(), a.theta_c_dot()) }
}

/// A scalar field over the sphere coordinates.
pub struct SphereField<'a> {
    pub f: Box<dyn Fn(&SphereCoords) -> C64 + 'a>,
}

impl<'a> SphereField<'a> {
    pub fn new(f: impl Fn(&SphereCoords) -> C64 + 'a) -> Self {
        SphereField { f: Box::new(f) }
    }

    pub fn eval(&self, at: &SphereCoords) -> C64 {
        (self.f)(at)
    }
}

/// Derivative with respect to a Cartesian coordinate of the sphere (`X`),
/// its conjugate partner (`XStar`), or the same pair on the dual sphere.
/// Axes are numbered 1 to 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SphereDerivative {
    X(u8),
    XStar(u8),
    Dual(u8),
    DualStar(u8),
}

fn angular_partial(f: &SphereField, var: Var, at: &SphereCoords) -> Result<C64, WaveError> {
    let (r, rstar) = (at.r, at.rstar);
    let g = ScalarField6::new(move |a| f.eval(&SphereCoords::new(r, rstar, *a)));
    Ok(partial6(&g, var, &at.angles)?)
}

fn radius_partial(f: &SphereField, at: &SphereCoords, dual: bool) -> C64 {
    let shifted = |d: f64| {
        let mut p = *at;
        if dual {
            p.rstar += d;
        } else {
            p.r += d;
        }
        f.eval(&p)
    };
    let h = DEFAULT_STEP * if dual { at.rstar } else { at.r }.max(1.0);
    let coarse = (shifted(h) - shifted(-h)) / (2.0 * h);
    let fine = (shifted(h / 2.0) - shifted(-h / 2.0)) / h;
    (fine * 4.0 - coarse) / 3.0
}

/// Applies one of the twelve first-order operators written in the sphere
/// coordinates. The conjugate operators use the epsilon and tau partials.
pub fn sphere_derivative(f: &SphereField, which: SphereDerivative, at: &SphereCoords) -> Result<C64, WaveError> {
    let axis = match which {
        SphereDerivative::X(k)
        | SphereDerivative::XStar(k)
        | SphereDerivative::Dual(k)
        | SphereDerivative::DualStar(k) => k,
    };
    if !(1..=3).contains(&axis) {
        return Err(WaveError::Range(format!("axis {axis} is not 1, 2 or 3")));
    }
    let dual = matches!(which, SphereDerivative::Dual(_) | SphereDerivative::DualStar(_));
    let star = matches!(which, SphereDerivative::XStar(_) | SphereDerivative::DualStar(_));
    let a = &at.angles;
    let (phi, theta, r) =
        if dual { (a.phi_c_dot(), a.theta_c_dot(), at.rstar) } else { (a.phi_c(), a.theta_c(), at.r) };
    let (azimuth, polar) = if star { (Var::Epsilon, Var::Tau) } else { (Var::Phi, Var::Theta) };
    let d_az = angular_partial(f, azimuth, at)?;
    let d_pol = angular_partial(f, polar, at)?;
    let d_r = radius_partial(f, at, dual);
    let (sp, cp, st, ct) = (phi.sin(), phi.cos(), theta.sin(), theta.cos());
    let plain = match axis {
        1 => [-sp / (st * r), cp * ct / r, cp * st],
        2 => [cp / (st * r), sp * ct / r, sp * st],
        _ => [c(0.0), -st / r, ct],
    };
    let value = match which {
        SphereDerivative::X(_) | SphereDerivative::Dual(_) => plain[0] * d_az + plain[1] * d_pol + plain[2] * d_r,
        SphereDerivative::XStar(_) => plain[0] * d_az + plain[1] * d_pol + I * plain[2] * d_r,
        SphereDerivative::DualStar(_) => -(plain[0] * d_az + plain[1] * d_pol + I * plain[2] * d_r),
    };
    Ok(value)
}

/// How the angular factor of a component is dressed with phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PhaseRule {
    /// e^{n(eps + i phi)} Z_{mn}(theta, tau), dotted e^{-n(eps - i phi)} Z_{mn}(theta, -tau):
    /// the harmonics that separate the component system
    Separated,
    /// e^{-m(eps + i phi)} Z_{mn}(theta, tau), dotted e^{-m(eps - i phi)} Z_{mn}(theta, tau)
    RowPhase,
}

/// Angular factor of a component with weight `l0`, row `m` and column `n`.
pub fn harmonic(
    l0: HalfInt,
    m: HalfInt,
    n: HalfInt,
    dotted: bool,
    rule: PhaseRule,
    a: &ComplexEulerAngles,
) -> Result<C64, GroupError> {
    let (mv, nv) = (m.value(), n.value());
    let (plus, minus) = (C64::new(a.epsilon, a.phi), C64::new(a.epsilon, -a.phi));
    Ok(match (rule, dotted) {
        (PhaseRule::Separated, false) => (plus * nv).exp() * zfn(l0, m, n, a.theta, a.tau)?,
        (PhaseRule::Separated, true) => (-minus * nv).exp() * zfn(l0, m, n, a.theta, -a.tau)?,
        (PhaseRule::RowPhase, false) => (-plus * mv).exp() * zfn(l0, m, n, a.theta, a.tau)?,
        (PhaseRule::RowPhase, true) => (-minus * mv).exp() * zfn(l0, m, n, a.theta, a.tau)?,
    })
}

/// Values of a radial function on a uniform grid, read back through a
/// five-node Lagrange stencil.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    pub r0: f64,
    pub h: f64,
    pub values: Vec<C64>,
}

impl GridFunction {
    pub fn from_profile(p: &RadialProfile, k: usize) -> Result<Self, WaveError> {
        if p.r.len() < 5 {
            return Err(WaveError::Range("grid needs at least five nodes".into()));
        }
        Ok(GridFunction { r0: p.r[0], h: p.r[1] - p.r[0], values: p.component(k) })
    }

    /// Value and derivative at `r`.
    pub fn eval(&self, r: f64) -> Result<(C64, C64), WaveError> {
        let n = self.values.len();
        let end = self.r0 + self.h * (n - 1) as f64;
        let slack = 1e-9 * self.h;
        if r < self.r0 - slack || r > end + slack {
            return Err(WaveError::Range(format!("radius {r} outside the grid [{}, {end}]", self.r0)));
        }
        let s = (r - self.r0) / self.h;
        let j0 = (s.round() as i64 - 2).clamp(0, n as i64 - 5) as usize;
        let x = s - j0 as f64;
        let (mut value, mut deriv) = (c(0.0), c(0.0));
        for k in 0..5 {
            let kf = k as f64;
            let mut basis = 1.0;
            let mut slope = 0.0;
            for i in (0..5).filter(|&i| i != k) {
                let fi = i as f64;
                basis *= (x - fi) / (kf - fi);
                let mut term = 1.0 / (kf - fi);
                for j in (0..5).filter(|&j| j != k && j != i) {
                    let fj = j as f64;
                    term *= (x - fj) / (kf - fj);
                }
                slope += term;
            }
            value += self.values[j0 + k] * basis;
            deriv += self.values[j0 + k] * slope;
        }
        Ok((value, deriv / self.h))
    }
}

/// A Bessel series used directly as a radial function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesRadial {
    pub kind: SeriesKind,
    pub weight: HalfInt,
    pub kmax: usize,
    pub kappa: C64,
    /// which function (Maxwell: 0 for f_{1,+-1}, 1 for f_{1,0})
    pub slot: usize,
}

impl SeriesRadial {
    fn value(&self, r: f64) -> Result<C64, WaveError> {
        Ok(bessel_series(self.kind, self.weight, r, self.kmax, self.kappa)?.values[self.slot])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RadialPart {
    Zero,
    Closed(PowerExp),
    Grid(GridFunction),
    Series(SeriesRadial),
}

impl RadialPart {
    /// Value and derivative at `r`; series are differentiated numerically.
    pub fn eval(&self, r: f64) -> Result<(C64, C64), WaveError> {
        match self {
            RadialPart::Zero => Ok((c(0.0), c(0.0))),
            RadialPart::Closed(p) => Ok((p.value(r), p.derivative(r))),
            RadialPart::Grid(g) => g.eval(r),
            RadialPart::Series(s) => {
                let h = 1e-4 * r;
                let coarse = (s.value(r + h)? - s.value(r - h)?) / (2.0 * h);
                let fine = (s.value(r + h / 2.0)? - s.value(r - h / 2.0)?) / h;
                Ok((s.value(r)?, (fine * 4.0 - coarse) / 3.0))
            }
        }
    }
}

/// One component psi = coefficient * f(r) * harmonic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveComponent {
    pub label: ComponentLabel,
    pub coefficient: C64,
    pub radial: RadialPart,
    pub l0: HalfInt,
    pub n: HalfInt,
    pub rule: PhaseRule,
}

impl WaveComponent {
    fn radius(&self, at: &SphereCoords) -> f64 {
        if self.label.dotted {
            at.rstar
        } else {
            at.r
        }
    }

    pub fn angular(&self, a: &ComplexEulerAngles) -> Result<C64, GroupError> {
        harmonic(self.l0, self.label.m, self.n, self.label.dotted, self.rule, a)
    }

    pub fn value(&self, at: &SphereCoords) -> Result<C64, WaveError> {
        let (f, _) = self.radial.eval(self.radius(at))?;
        Ok(self.coefficient * f * self.angular(&at.angles)?)
    }

    /// Derivative with respect to r (r* for dotted components).
    pub fn radial_derivative(&self, at: &SphereCoords) -> Result<C64, WaveError> {
        let (_, df) = self.radial.eval(self.radius(at))?;
        Ok(self.coefficient * df * self.angular(&at.angles)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WaveKind {
    Dirac,
    Weyl,
    Maxwell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RadialSource {
    /// integrate the radial system on a grid
    Ode,
    /// the power-exponential solution of the scalar Dirac reduction
    ClosedForm,
    /// the truncated Bessel series
    BesselSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialGrid {
    pub rmin: f64,
    pub rmax: f64,
    /// number of grid nodes
    pub nodes: usize,
}

impl Default for RadialGrid {
    fn default() -> Self {
        RadialGrid { rmin: 0.5, rmax: 5.0, nodes: 4097 }
    }
}

impl RadialGrid {
    pub fn points(&self) -> Vec<f64> {
        let h = (self.rmax - self.rmin) / (self.nodes - 1) as f64;
        (0..self.nodes).map(|k| if k + 1 == self.nodes { self.rmax } else { self.rmin + k as f64 * h }).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveSpec {
    pub kind: WaveKind,
    pub l: HalfInt,
    pub n: HalfInt,
    pub l_dot: HalfInt,
    pub n_dot: HalfInt,
    pub mass: f64,
    pub source: RadialSource,
    pub rule: PhaseRule,
    pub grid: RadialGrid,
    pub kmax: usize,
}

impl WaveSpec {
    pub fn new(kind: WaveKind, l: HalfInt, n: HalfInt, mass: f64) -> Self {
        WaveSpec {
            kind,
            l,
            n,
            l_dot: l,
            n_dot: n,
            mass,
            source: RadialSource::Ode,
            rule: PhaseRule::Separated,
            grid: RadialGrid::default(),
            kmax: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveSolution {
    pub spec: WaveSpec,
    pub components: Vec<WaveComponent>,
    /// the system the grid functions solve, for sources that integrate one
    #[serde(skip)]
    pub system: Option<RadialSystem>,
    pub profile: Option<RadialProfile>,
}

fn check_labels(kind: WaveKind, l: HalfInt, n: HalfInt) -> Result<(), WaveError> {
    let ok = match kind {
        WaveKind::Dirac | WaveKind::Weyl => !l.is_integer() && l.twice() >= 1,
        WaveKind::Maxwell => l.is_integer() && l.twice() >= 2,
    };
    if !ok {
        return Err(WaveError::Range(format!("weight {l} not allowed for {kind:?}")));
    }
    if !l.contains(n) {
        return Err(WaveError::Range(format!("n = {n} is not a label of weight {l}")));
    }
    Ok(())
}

impl WaveKind {
    pub fn chain(self) -> RepChain {
        match self {
            WaveKind::Dirac | WaveKind::Weyl => dirac_chain(),
            WaveKind::Maxwell => maxwell_chain(),
        }
    }
}

/// Builds the components of a solution. Spin-1/2 solutions carry the four
/// components of the weight-1/2 blocks; Maxwell solutions carry the six
/// weight-1 components with the scalar block set to zero.
pub fn assemble(spec: &WaveSpec) -> Result<WaveSolution, WaveError> {
    check_labels(spec.kind, spec.l, spec.n)?;
    check_labels(spec.kind, spec.l_dot, spec.n_dot)?;
    let kappa = match spec.kind {
        WaveKind::Dirac => dirac_kappa(spec.mass),
        _ => c(0.0),
    };
    let meta = RadialMeta::new(spec.l, spec.l_dot, spec.n, spec.n_dot, kappa, kappa);
    let form = match spec.rule {
        PhaseRule::Separated => RfsForm::Separated,
        PhaseRule::RowPhase => RfsForm::CrossWeight,
    };
    let component = |label: ComponentLabel, coefficient: C64, radial: RadialPart| WaveComponent {
        label,
        coefficient,
        radial,
        l0: if label.dotted { spec.l_dot } else { spec.l },
        n: if label.dotted { spec.n_dot } else { spec.n },
        rule: spec.rule,
    };
    let full = build_rfs(&spec.kind.chain(), &meta, form, DottedRadical::Mirrored)?;
    let (h, one) = (HalfInt::HALF, HalfInt::ONE);
    match (spec.kind, spec.source) {
        (WaveKind::Maxwell, RadialSource::ClosedForm) => Err(WaveError::Range(
            "the Maxwell radial functions have no power-exponential form; use the ode or series source".into(),
        )),
        (_, RadialSource::Ode) => {
            let system = match spec.kind {
                WaveKind::Maxwell => {
                    let mut s = reduce_maxwell(&full)?.system;
                    for dotted in [false, true] {
                        let j = s.unknown_index(dotted, one, HalfInt::ZERO).expect("weight-1 block present");
                        s = s.close_with_power(j, 0.0);
                    }
                    s
                }
                _ => full,
            };
            let f0: Vec<C64> = system
                .unknowns
                .iter()
                .map(|u| match (spec.kind, u.m.twice()) {
                    (WaveKind::Maxwell, 0) => c(0.5),
                    (WaveKind::Maxwell, _) => c(1.0),
                    (_, t) if t > 0 => c(1.0),
                    _ => -I,
                })
                .collect();
            if spec.grid.nodes < 5 {
                return Err(WaveError::Range("grid needs at least five nodes".into()));
            }
            let profile = integrate(&system, &f0, spec.grid.rmin, spec.grid.rmax, spec.grid.nodes - 1)?;
            let components = (0..profile.labels.len())
                .map(|k| {
                    Ok(component(profile.labels[k], c(1.0), RadialPart::Grid(GridFunction::from_profile(&profile, k)?)))
                })
                .collect::<Result<Vec<_>, WaveError>>()?;
            Ok(WaveSolution { spec: *spec, components, system: Some(system), profile: Some(profile) })
        }
        (_, RadialSource::ClosedForm) => {
            let cross = build_rfs(&spec.kind.chain(), &meta, RfsForm::CrossWeight, DottedRadical::Mirrored)?;
            let reduced = reduce_dirac(&cross)?;
            let mut components = Vec::new();
            for (row, dotted) in [(0, false), (1, true)] {
                let f = reduced.scalar_closed_form(row, c(1.0))?;
                for (m, coefficient) in [(h, c(1.0)), (-h, -I)] {
                    let label = ComponentLabel { dotted, block: 0, l: h, m };
                    components.push(component(label, coefficient, RadialPart::Closed(f)));
                }
            }
            Ok(WaveSolution { spec: *spec, components, system: None, profile: None })
        }
        (_, RadialSource::BesselSeries) => {
            let mut components = Vec::new();
            for dotted in [false, true] {
                let weight = if dotted { spec.l } else { spec.l_dot };
                let series = |slot: usize| {
                    let kind = match spec.kind {
                        WaveKind::Dirac => SeriesKind::Dirac,
                        WaveKind::Weyl => SeriesKind::Weyl,
                        WaveKind::Maxwell => SeriesKind::Maxwell,
                    };
                    RadialPart::Series(SeriesRadial { kind, weight, kmax: spec.kmax, kappa, slot })
                };
                let entries: Vec<(HalfInt, HalfInt, C64, usize)> = match spec.kind {
                    WaveKind::Maxwell => {
                        vec![(one, one, c(1.0), 0), (one, HalfInt::ZERO, c(1.0), 1), (one, -one, c(1.0), 0)]
                    }
                    _ => vec![(h, h, c(1.0), 0), (h, -h, -I, 0)],
                };
                for (l, m, coefficient, slot) in entries {
                    components.push(component(ComponentLabel { dotted, block: 0, l, m }, coefficient, series(slot)));
                }
            }
            Ok(WaveSolution { spec: *spec, components, system: None, profile: None })
        }
    }
}

impl WaveSolution {
    pub fn find(&self, dotted: bool, l: HalfInt, m: HalfInt) -> Option<&WaveComponent> {
        self.components.iter().find(|k| k.label.dotted == dotted && k.label.l == l && k.label.m == m)
    }

    pub fn values(&self, at: &SphereCoords) -> Result<Vec<(ComponentLabel, C64)>, WaveError> {
        self.components.iter().map(|k| Ok((k.label, k.value(at)?))).collect()
    }

    fn value_of(&self, dotted: bool, l: HalfInt, m: HalfInt, at: &SphereCoords) -> Result<C64, WaveError> {
        match self.find(dotted, l, m) {
            Some(k) => k.value(at),
            None => Ok(c(0.0)),
        }
    }

    /// A copy with one component's coefficient multiplied by `factor`.
    pub fn perturbed(&self, index: usize, factor: f64) -> WaveSolution {
        let mut out = self.clone();
        if let Some(k) = out.components.get_mut(index) {
            k.coefficient *= factor;
        }
        out
    }
}

/// The two Weyl spinors (psi - psi_dot)/2 and (psi + psi_dot)/2.
pub fn weyl_spinors(sol: &WaveSolution, at: &SphereCoords) -> Result<[[C64; 2]; 2], WaveError> {
    let h = HalfInt::HALF;
    let u = [sol.value_of(false, h, h, at)?, sol.value_of(false, h, -h, at)?];
    let d = [sol.value_of(true, h, h, at)?, sol.value_of(true, h, -h, at)?];
    Ok([[(u[0] - d[0]) / 2.0, (u[1] - d[1]) / 2.0], [(u[0] + d[0]) / 2.0, (u[1] + d[1]) / 2.0]])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxwellFields {
    /// F = E - iB from the undotted spin-tensor components
    pub f: [C64; 3],
    /// F* = E + iB from the dotted ones
    pub f_star: [C64; 3],
    pub e: [C64; 3],
    pub b: [C64; 3],
}

/// Cartesian F = E - iB from spin-tensor components f11 ~ 4(F1 + iF2),
/// f12 ~ 4F3, f22 ~ 4(F1 - iF2).
pub fn cartesian_from_spin_tensor(f11: C64, f12: C64, f22: C64) -> [C64; 3] {
    [(f11 + f22) / 8.0, (f11 - f22) / (8.0 * I), f12 / 4.0]
}

pub fn fields_from_pair(f: [C64; 3], f_star: [C64; 3]) -> MaxwellFields {
    let e = std::array::from_fn(|k| (f[k] + f_star[k]) / 2.0);
    let b = std::array::from_fn(|k| I * (f[k] - f_star[k]) / 2.0);
    MaxwellFields { f, f_star, e, b }
}

pub fn maxwell_fields(sol: &WaveSolution, at: &SphereCoords) -> Result<MaxwellFields, WaveError> {
    let (one, zero) = (HalfInt::ONE, HalfInt::ZERO);
    let half = |dotted: bool| -> Result<[C64; 3], WaveError> {
        Ok(cartesian_from_spin_tensor(
            sol.value_of(dotted, one, one, at)?,
            sol.value_of(dotted, one, zero, at)?,
            sol.value_of(dotted, one, -one, at)?,
        ))
    };
    Ok(fields_from_pair(half(false)?, half(true)?))
}

/// Sign of the cotangent term in the undotted rows of the component system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CotSign {
    /// -(2i/r) cot(theta^c), the sign the recurrences require
    Negative,
    /// +(2i/r) cot(theta^c)
    Positive,
}

pub const SAMPLE_SEED: u64 = 0x5eed_0008;

/// The eight standard residual points.
pub fn standard_points() -> Vec<SphereCoords> {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    (0..8)
        .map(|_| {
            let phi = rng.gen_range(0.0..std::f64::consts::TAU);
            let epsilon = rng.gen_range(-1.0..1.0);
            let theta = rng.gen_range(0.4..2.7);
            let tau = rng.gen_range(-1.0..1.0);
            let r = rng.gen_range(0.5..3.0);
            let rstar = rng.gen_range(0.5..3.0);
            SphereCoords::new(r, rstar, ComplexEulerAngles::new(phi, epsilon, theta, tau, 0.0, 0.0))
        })
        .collect()
}

pub fn separated_residual(sol: &WaveSolution, at: &[SphereCoords]) -> Result<DiffReport, WaveError> {
    separated_residual_with(sol, at, CotSign::Negative)
}

/// Largest residual of the component system over the points. Each equation
/// is divided by one plus the largest of its individual terms.
pub fn separated_residual_with(sol: &WaveSolution, at: &[SphereCoords], cot: CotSign) -> Result<DiffReport, WaveError> {
    let chain = sol.spec.kind.chain();
    let lam = build_lambda(&chain, DottedRadical::Mirrored)?;
    let ops = chain.undotted.operators(Flavor::Plain)?;
    let dops = chain.dotted.operators(Flavor::Tilde)?;
    let derived = derived_vugw(&lam, &ops, &dops);
    let kappa = match sol.spec.kind {
        WaveKind::Dirac => dirac_kappa(sol.spec.mass),
        _ => c(0.0),
    };
    let cot_factor = match cot {
        CotSign::Negative => -2.0,
        CotSign::Positive => 2.0,
    };
    let mut worst: f64 = 0.0;
    for p in at {
        for dotted in [false, true] {
            let half = if dotted { &chain.dotted } else { &chain.undotted };
            let layout = half.layout();
            let (l, one_over_r, radius) = if dotted {
                (&lam.lambda_star, derived.u.clone(), p.rstar)
            } else {
                (&lam.lambda, &derived.v * I, p.r)
            };
            let a = &p.angles;
            let theta = if dotted { a.theta_c_dot() } else { a.theta_c() };
            let sign = if dotted { -1.0 } else { 1.0 };
            let cot_term = if dotted { -2.0 } else { cot_factor };
            let mut pieces = Vec::with_capacity(layout.len());
            for slot in &layout {
                let comp = sol.find(dotted, slot.l, slot.m);
                let Some(comp) = comp else {
                    pieces.push(None);
                    continue;
                };
                let (r, rstar) = (p.r, p.rstar);
                let field = ScalarField6::new(move |x| {
                    comp.value(&SphereCoords::new(r, rstar, *x)).unwrap_or(C64::new(f64::NAN, 0.0))
                });
                let value = comp.value(p)?;
                let d_phi = partial6(&field, Var::Phi, a)?;
                let d_eps = partial6(&field, Var::Epsilon, a)?;
                let d_theta = partial6(&field, Var::Theta, a)?;
                let d_tau = partial6(&field, Var::Tau, a)?;
                let d_r = comp.radial_derivative(p)?;
                pieces.push(Some((value, d_phi + I * sign * d_eps, d_theta + I * sign * d_tau, d_r, slot.m.value())));
            }
            for i in 0..layout.len() {
                let mut terms: Vec<C64> = Vec::new();
                if let Some((v, ..)) = pieces[i] {
                    terms.push(kappa * v);
                }
                for (j, piece) in pieces.iter().enumerate() {
                    let Some((v, azimuth, polar, d_r, m)) = *piece else { continue };
                    terms.push(l[0][(i, j)] * azimuth / (theta.sin() * radius));
                    terms.push(-l[1][(i, j)] * polar / radius);
                    terms.push(l[2][(i, j)] * 2.0 * d_r);
                    terms.push(one_over_r[(i, j)] * v / radius);
                    terms.push(I * cot_term * m * l[0][(i, j)] * v * theta.cos() / (theta.sin() * radius));
                }
                let sum: C64 = terms.iter().sum();
                let scale = 1.0 + terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
                let residual = sum.norm() / scale;
                if !residual.is_finite() {
                    return Err(WaveError::Range("residual is not finite".into()));
                }
                worst = worst.max(residual);
            }
        }
    }
    Ok(DiffReport {
        residual_max: worst,
        sample_points: at.iter().map(|p| p.angles.as_array()).collect(),
        step: DEFAULT_STEP,
    })
}

/// Residual of the radial system itself on the interior grid nodes, using
/// five-point derivatives. Only available for integrated sources.
pub fn radial_level_residual(sol: &WaveSolution) -> Result<f64, WaveError> {
    let (Some(sys), Some(profile)) = (&sol.system, &sol.profile) else {
        return Err(WaveError::Range("solution carries no integrated radial system".into()));
    };
    let mut worst: f64 = 0.0;
    for idx in 2..profile.r.len() - 2 {
        let df = profile.stencil_derivative(idx)?;
        let f = &profile.values[idx];
        let scale = 1.0 + f.iter().chain(df.iter()).map(|v| v.norm()).fold(0.0, f64::max);
        for v in sys.residual(profile.r[idx], f, &df) {
            worst = worst.max(v.norm() / scale);
        }
    }
    Ok(worst)
}

/// Which neighbour of m the recurrence substitution starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Substitution {
    /// from Z_{m-1,n}
    FromBelow,
    /// from Z_{m+1,n}
    FromAbove,
}

/// Residual of the first-order identity that turns a bracket of the
/// component system into a multiple of Z_{mn}:
/// (d_theta + i d_tau) Z_{m-1,n} + 2(n - (m-1) cos)/sin Z_{m-1,n} = 2i alpha(l0, m) Z_{mn}
/// and its mirror from Z_{m+1,n}. The dotted identity uses Z(theta, -tau),
/// d_theta - i d_tau and the conjugate complex angle. Returned relative to
/// one plus the right-hand side.
pub fn substitution_residual(
    l0: HalfInt,
    m: HalfInt,
    n: HalfInt,
    theta: f64,
    tau: f64,
    which: Substitution,
    dotted: bool,
) -> Result<f64, WaveError> {
    let (shift, sign, coeff) = match which {
        Substitution::FromBelow => (-HalfInt::ONE, 1.0, ladder_alpha(l0, m)),
        Substitution::FromAbove => (HalfInt::ONE, -1.0, ladder_alpha(l0, m + HalfInt::ONE)),
    };
    let mp = m + shift;
    if !l0.contains(m) || !l0.contains(mp) || !l0.contains(n) {
        return Err(WaveError::Range(format!("labels ({m}, {n}) and neighbour {mp} must lie in weight {l0}")));
    }
    let tsign = if dotted { -1.0 } else { 1.0 };
    let field = ScalarField6::new(move |a| zfn(l0, mp, n, a.theta, tsign * a.tau).unwrap_or(C64::new(f64::NAN, 0.0)));
    let at = ComplexEulerAngles::new(0.0, 0.0, theta, tau, 0.0, 0.0);
    let d = partial6(&field, Var::Theta, &at)? + I * tsign * partial6(&field, Var::Tau, &at)?;
    let angle = C64::new(theta, -tsign * tau);
    let lhs = d + (c(n.value()) - angle.cos() * mp.value()) * (2.0 * sign) / angle.sin() * field.eval(&at);
    let rhs = I * 2.0 * coeff * zfn(l0, m, n, theta, tsign * tau)?;
    Ok((lhs - rhs).norm() / (1.0 + rhs.norm()))
}

/// The photon spin matrices as tabulated, row by row.
pub fn photon_alpha_table() -> [CMat; 3] {
    let z = c(0.0);
    let (p, q) = (I, -I);
    [
        CMat::from_row_slice(3, 3, &[z, z, z, z, z, p, z, q, z]),
        CMat::from_row_slice(3, 3, &[z, z, q, z, z, z, p, z, z]),
        CMat::from_row_slice(3, 3, &[z, p, z, q, z, z, z, z, z]),
    ]
}

/// Commutators [a_i, a_k] + i e_ikl a_l, hermiticity, and agreement with the
/// Cartesian spin-1 Lambda matrices. `residual_max` is the worst entry.
pub fn mo_alpha_check() -> DiffReport {
    let alpha = photon_alpha_table();
    let lambda = maxwell_lambda_literal().lambda;
    let mut worst: f64 = 0.0;
    for (i, k, l) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let comm = commutator(&alpha[i], &alpha[k]).expect("square matrices of equal size");
        worst = worst.max(max_abs(&(comm + &alpha[l] * I)));
    }
    for k in 0..3 {
        worst = worst.max(max_abs(&(&alpha[k] - alpha[k].adjoint())));
        worst = worst.max(max_abs(&(&lambda[k] - &alpha[k])));
    }
    DiffReport { residual_max: worst, sample_points: Vec::new(), step: 0.0 }
}

/// Component values of a solution over a radial grid at fixed angles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tabulation {
    pub angles: ComplexEulerAngles,
    pub labels: Vec<ComponentLabel>,
    pub r: Vec<f64>,
    /// radial factor times coefficient, per component
    pub radial: Vec<Vec<C64>>,
    /// full component value with r* = r
    pub psi: Vec<Vec<C64>>,
}

pub fn tabulate(sol: &WaveSolution, r: &[f64], angles: ComplexEulerAngles) -> Result<Tabulation, WaveError> {
    let mut radial = Vec::with_capacity(r.len());
    let mut psi = Vec::with_capacity(r.len());
    for &x in r {
        let p = SphereCoords::new(x, x, angles);
        let mut rad = Vec::with_capacity(sol.components.len());
        let mut full = Vec::with_capacity(sol.components.len());
        for k in &sol.components {
            rad.push(k.coefficient * k.radial.eval(x)?.0);
            full.push(k.value(&p)?);
        }
        radial.push(rad);
        psi.push(full);
    }
    Ok(Tabulation { angles, labels: sol.components.iter().map(|k| k.label).collect(), r: r.to_vec(), radial, psi })
}

impl Tabulation {
    /// Columns r, then re/im pairs of the radial factors, then re/im pairs of
    /// the component values.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), WaveError> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["r".to_string()];
        for prefix in ["f", "psi"] {
            for l in &self.labels {
                header.push(format!("re({prefix}:{l})"));
                header.push(format!("im({prefix}:{l})"));
            }
        }
        out.write_record(&header).map_err(RadialError::from)?;
        for (k, r) in self.r.iter().enumerate() {
            let mut row = vec![format!("{r:.14e}")];
            for v in self.radial[k].iter().chain(self.psi[k].iter()) {
                row.push(format!("{:.14e}", v.re));
                row.push(format!("{:.14e}", v.im));
            }
            out.write_record(&row).map_err(RadialError::from)?;
        }
        out.flush().map_err(RadialError::from)?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, WaveError> {
        Ok(serde_json::to_string_pretty(self).map_err(RadialError::from)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn point(theta: f64, tau: f64) -> SphereCoords {
        SphereCoords::new(1.3, 0.8, ComplexEulerAngles::new(0.4, -0.3, theta, tau, 0.0, 0.0))
    }

    #[test]
    fn pole_maps_to_axis() {
        let p = SphereCoords::new(2.0, 2.0, ComplexEulerAngles::new(0.7, 0.0, 0.0, 0.0, 0.0, 0.0));
        let z = sphere_cartesian(&p);
        assert!(z.z[0].norm() < 1e-15 && z.z[1].norm() < 1e-15);
        assert!((z.z[2] - c(2.0)).norm() < 1e-15);
    }

    #[test]
    fn real_angles_give_conjugate_pairs() {
        let p = SphereCoords::new(1.7, 1.7, ComplexEulerAngles::new(0.9, 0.0, 1.2, 0.0, 0.0, 0.0));
        let z = sphere_cartesian(&p);
        for k in 0..3 {
            assert!((z.zs[k] - z.z[k].conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn height_derivative_is_one() {
        let f = SphereField::new(|p| p.angles.theta_c().cos() * p.r);
        let d = sphere_derivative(&f, SphereDerivative::X(3), &point(1.1, 0.4)).unwrap();
        assert!((d - c(1.0)).norm() < 1e-9, "{d}");
        let k = SphereField::new(|_| c(3.0));
        assert!(sphere_derivative(&k, SphereDerivative::X(1), &point(1.1, 0.4)).unwrap().norm() < 1e-12);
    }

    #[test]
    fn starred_operator_is_i_times_plain_on_dual_holomorphic_fields() {
        let f = SphereField::new(|p| {
            let a = &p.angles;
            p.r * p.r * a.theta_c_dot().cos() * (I * a.phi_c_dot()).exp() + a.theta_c_dot().sin() * p.r
        });
        let at = point(0.9, -0.3);
        for axis in 1..=3 {
            let plain = sphere_derivative(&f, SphereDerivative::X(axis), &at).unwrap();
            let star = sphere_derivative(&f, SphereDerivative::XStar(axis), &at).unwrap();
            assert!((star - I * plain).norm() < 1e-8, "axis {axis}: {star} vs {}", I * plain);
            let dual = sphere_derivative(&f, SphereDerivative::Dual(axis), &at).unwrap();
            let dual_star = sphere_derivative(&f, SphereDerivative::DualStar(axis), &at).unwrap();
            assert!((dual_star + I * dual).norm() < 1e-8);
        }
        assert!(sphere_derivative(&f, SphereDerivative::X(4), &at).is_err());
    }

    #[test]
    fn grid_stencil_is_exact_on_quartics() {
        let r0 = 0.5;
        let step = 0.1;
        let values = (0..20).map(|k| {
            let x = r0 + k as f64 * step;
            C64::new(x.powi(4) - x, x * x)
        });
        let g = GridFunction { r0, h: step, values: values.collect() };
        for x in [0.5, 0.73, 1.2, 2.4] {
            let (v, d) = g.eval(x).unwrap();
            assert!((v - C64::new(x.powi(4) - x, x * x)).norm() < 1e-12);
            assert!((d - C64::new(4.0 * x.powi(3) - 1.0, 2.0 * x)).norm() < 1e-10);
        }
        assert!(g.eval(0.4).is_err());
    }

    #[test]
    fn separated_harmonic_is_swapped_hyperspherical() {
        let a = ComplexEulerAngles::new(0.3, 0.2, 1.1, -0.4, 0.0, 0.0);
        let (l0, m, n) = (h(3), h(1), h(-3));
        let direct = harmonic(l0, m, n, false, PhaseRule::Separated, &a).unwrap();
        let swapped = crate::grouprep::hyperspherical_m(l0, -n, -m, &a, false).unwrap();
        assert!((direct - swapped).norm() < 1e-12);
    }

    #[test]
    fn substitution_identities_hold() {
        for (l0, m, n) in [(h(1), h(1), h(1)), (h(3), h(1), h(-1)), (h(4), h(0), h(2)), (h(4), h(2), h(-2))] {
            for dotted in [false, true] {
                for which in [Substitution::FromBelow, Substitution::FromAbove] {
                    match substitution_residual(l0, m, n, 1.1, 0.35, which, dotted) {
                        Ok(v) => assert!(v < 1e-7, "{l0} {m} {n} {which:?} {dotted}: {v}"),
                        Err(_) => assert!(
                            l0.contains(m)
                                && !l0.contains(
                                    m + if which == Substitution::FromBelow { -HalfInt::ONE } else { HalfInt::ONE }
                                )
                        ),
                    }
                }
            }
        }
    }

    #[test]
    fn photon_matrices_check() {
        assert_eq!(mo_alpha_check().residual_max, 0.0);
    }

    #[test]
    fn labels_out_of_range() {
        assert!(assemble(&WaveSpec::new(WaveKind::Dirac, h(2), h(0), 1.0)).is_err());
        assert!(assemble(&WaveSpec::new(WaveKind::Maxwell, h(1), h(1), 0.0)).is_err());
        assert!(assemble(&WaveSpec::new(WaveKind::Dirac, h(1), h(3), 1.0)).is_err());
        let mut spec = WaveSpec::new(WaveKind::Maxwell, h(2), h(0), 0.0);
        spec.source = RadialSource::ClosedForm;
        assert!(assemble(&spec).is_err());
    }

    #[test]
    fn dirac_and_maxwell_separate() {
        let points = standard_points();
        let mut spec = WaveSpec::new(WaveKind::Dirac, h(1), h(1), 0.8);
        spec.grid.rmax = 3.5;
        let dirac = assemble(&spec).unwrap();
        let base = separated_residual(&dirac, &points).unwrap().residual_max;
        assert!(base < 1e-6, "{base}");
        let bumped = separated_residual(&dirac.perturbed(0, 1.01), &points).unwrap().residual_max;
        assert!(bumped > 10.0 * base);
        let mut spec = WaveSpec::new(WaveKind::Maxwell, h(2), h(0), 0.0);
        spec.grid.rmax = 3.5;
        let maxwell = assemble(&spec).unwrap();
        assert_eq!(maxwell.components.len(), 6);
        assert!(separated_residual(&maxwell, &points).unwrap().residual_max < 1e-6);
    }

    #[test]
    fn fields_round_trip() {
        let e = [C64::new(0.3, 0.1), C64::new(-1.0, 0.2), C64::new(0.5, 0.0)];
        let b = [C64::new(0.7, 0.0), C64::new(0.1, -0.4), C64::new(-0.2, 0.3)];
        let f: [C64; 3] = std::array::from_fn(|k| e[k] - I * b[k]);
        let fs: [C64; 3] = std::array::from_fn(|k| e[k] + I * b[k]);
        let out = fields_from_pair(f, fs);
        for k in 0..3 {
            assert!((out.e[k] - e[k]).norm() < 1e-15 && (out.b[k] - b[k]).norm() < 1e-15);
        }
        let g = cartesian_from_spin_tensor((f[0] + I * f[1]) * 4.0, f[2] * 4.0, (f[0] - I * f[1]) * 4.0);
        for k in 0..3 {
            assert!((g[k] - f[k]).norm() < 1e-15);
        }
    }
}
