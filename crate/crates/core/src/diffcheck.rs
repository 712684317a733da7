//! Finite-difference derivatives in the six real Euler parameters and the
//! residual checks built on them: Euler-angle generators, Casimir operators,
//! the Z-function ODE and the first-order recurrences.

use serde::Serialize;
use thiserror::Error;

use crate::grouprep::{hyperspherical_m, zfn, CMat, ComplexEulerAngles, GroupError};
use crate::liealg::{build_operators, Flavor, LieError};
use crate::numkit::{ladder_alpha, HalfInt, C64, I};

pub const DEFAULT_STEP: f64 = 1e-4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiffError {
    #[error("point lies {distance:.3e} from the singular set sin(theta^c) = 0")]
    Singular { distance: f64 },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Var {
    Phi,
    Epsilon,
    Theta,
    Tau,
    Psi,
    Varep,
}

impl Var {
    fn index(self) -> usize {
        self as usize
    }
}

/// A complex-valued function of the six Euler parameters with its labels.
pub struct ScalarField6<'a> {
    pub f: Box<dyn Fn(&ComplexEulerAngles) -> C64 + 'a>,
    pub l: HalfInt,
    pub m: HalfInt,
    pub n: HalfInt,
    pub dotted: bool,
}

impl<'a> ScalarField6<'a> {
    pub fn new(f: impl Fn(&ComplexEulerAngles) -> C64 + 'a) -> Self {
        ScalarField6 { f: Box::new(f), l: HalfInt::ZERO, m: HalfInt::ZERO, n: HalfInt::ZERO, dotted: false }
    }

    /// The generalized hyperspherical function as a field.
    pub fn hyperspherical(l: HalfInt, m: HalfInt, n: HalfInt, dotted: bool) -> Self {
        ScalarField6 {
            f: Box::new(move |a| hyperspherical_m(l, m, n, a, dotted).expect("indices checked by caller")),
            l,
            m,
            n,
            dotted,
        }
    }

    pub fn eval(&self, at: &ComplexEulerAngles) -> C64 {
        (self.f)(at)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffReport {
    pub residual_max: f64,
    pub sample_points: Vec<[f64; 6]>,
    pub step: f64,
}

/// Distance of (theta, tau) from the zeros of sin(theta - i tau).
pub fn singular_distance(theta: f64, tau: f64) -> f64 {
    let k = (theta / std::f64::consts::PI).round();
    ((theta - k * std::f64::consts::PI).powi(2) + tau * tau).sqrt()
}

fn guard(at: &ComplexEulerAngles, h: f64) -> Result<(), DiffError> {
    let distance = singular_distance(at.theta, at.tau);
    if distance < 10.0 * h {
        return Err(DiffError::Singular { distance });
    }
    Ok(())
}

fn shifted(at: &ComplexEulerAngles, var: Var, d: f64) -> ComplexEulerAngles {
    let mut a = at.as_array();
    a[var.index()] += d;
    ComplexEulerAngles::from_array(a)
}

fn central(f: &dyn Fn(&ComplexEulerAngles) -> C64, var: Var, at: &ComplexEulerAngles, h: f64) -> C64 {
    let coarse = (f(&shifted(at, var, h)) - f(&shifted(at, var, -h))) / (2.0 * h);
    let g = h / 2.0;
    let fine = (f(&shifted(at, var, g)) - f(&shifted(at, var, -g))) / (2.0 * g);
    (fine * 4.0 - coarse) / 3.0
}

pub fn partial6(f: &ScalarField6, var: Var, at: &ComplexEulerAngles) -> Result<C64, DiffError> {
    partial6_with_step(f, var, at, DEFAULT_STEP)
}

pub fn partial6_with_step(f: &ScalarField6, var: Var, at: &ComplexEulerAngles, h: f64) -> Result<C64, DiffError> {
    guard(at, h)?;
    Ok(central(&*f.f, var, at, h))
}

/// Linear combination of real partials, e.g. d/d theta^c = (d_theta + i d_tau)/2.
pub type Direction = [(Var, C64); 2];

pub fn complex_direction(real: Var, imag: Var, dotted: bool) -> Direction {
    let s = if dotted { -0.5 } else { 0.5 };
    [(real, C64::new(0.5, 0.0)), (imag, C64::new(0.0, s))]
}

fn directional(f: &dyn Fn(&ComplexEulerAngles) -> C64, dir: &Direction, at: &ComplexEulerAngles, h: f64) -> C64 {
    dir.iter().map(|(v, w)| w * central(f, *v, at, h)).sum()
}

fn second(
    f: &dyn Fn(&ComplexEulerAngles) -> C64,
    d1: &Direction,
    d2: &Direction,
    at: &ComplexEulerAngles,
    h: f64,
) -> C64 {
    let inner = |a: &ComplexEulerAngles| directional(f, d2, a, h);
    directional(&inner, d1, at, h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Casimir {
    X2,
    Y2,
}

/// Second-order Casimir operator in Euler form. X^2 uses the derivatives in
/// (phi^c, theta^c, psi^c), Y^2 those in the conjugate angles.
pub fn apply_casimir(f: &ScalarField6, which: Casimir, at: &ComplexEulerAngles) -> Result<C64, DiffError> {
    let h = 10.0 * DEFAULT_STEP;
    guard(at, h)?;
    let dotted = which == Casimir::Y2;
    let dt = complex_direction(Var::Theta, Var::Tau, dotted);
    let dp = complex_direction(Var::Phi, Var::Epsilon, dotted);
    let ds = complex_direction(Var::Psi, Var::Varep, dotted);
    let th = if dotted { at.theta_c_dot() } else { at.theta_c() };
    let f = &*f.f;
    let angular = second(f, &dp, &dp, at, h) - second(f, &dp, &ds, at, h) * th.cos() * 2.0 + second(f, &ds, &ds, at, h);
    Ok(second(f, &dt, &dt, at, h) + th.cos() / th.sin() * directional(f, &dt, at, h) + angular / (th.sin() * th.sin()))
}

/// Residual of the second-order ODE satisfied by Z^l_{mn} in theta^c,
/// with `cross` multiplying the mn cos(theta^c) term (2 is the correct value).
pub fn z_ode_residual_with(
    l: HalfInt,
    m: HalfInt,
    n: HalfInt,
    theta: f64,
    tau: f64,
    cross: f64,
) -> Result<C64, DiffError> {
    let h = 10.0 * DEFAULT_STEP;
    let at = ComplexEulerAngles::new(0.0, 0.0, theta, tau, 0.0, 0.0);
    guard(&at, h)?;
    zfn(l, m, n, theta, tau)?;
    let f = move |a: &ComplexEulerAngles| zfn(l, m, n, a.theta, a.tau).expect("indices checked");
    let dt = complex_direction(Var::Theta, Var::Tau, false);
    let w = at.theta_c();
    let (mv, nv, lv) = (m.value(), n.value(), l.value());
    let z = f(&at);
    Ok(second(&f, &dt, &dt, &at, h) + w.cos() / w.sin() * directional(&f, &dt, &at, h)
        - (mv * mv + nv * nv - cross * mv * nv * w.cos()) / (w.sin() * w.sin()) * z
        + lv * (lv + 1.0) * z)
}

pub fn z_ode_residual(l: HalfInt, m: HalfInt, n: HalfInt, theta: f64, tau: f64) -> Result<C64, DiffError> {
    z_ode_residual_with(l, m, n, theta, tau, 2.0)
}

/// First-order recurrences. `Second*` shift the second index of Z,
/// `First*` the first index, `Dotted*` act on the conjugate function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Recurrence {
    SecondLower,
    SecondRaise,
    FirstLower,
    FirstRaise,
    DottedFirstLower,
    DottedFirstRaise,
}

pub const ALL_RECURRENCES: [Recurrence; 6] = [
    Recurrence::SecondLower,
    Recurrence::SecondRaise,
    Recurrence::FirstLower,
    Recurrence::FirstRaise,
    Recurrence::DottedFirstLower,
    Recurrence::DottedFirstRaise,
];

/// `Verified` uses the ladder factor i*alpha and the undotted Z for the
/// second-index relations; `Literal` uses the factor alpha and the
/// conjugate Z for the dotted labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RecurrenceForm {
    Verified,
    Literal,
}

fn z_or_zero(l: HalfInt, m: HalfInt, n: HalfInt, theta: f64, tau: f64, conj: bool) -> Result<C64, DiffError> {
    if !l.contains(m) || !l.contains(n) {
        return Ok(C64::new(0.0, 0.0));
    }
    let z = zfn(l, m, n, theta, tau)?;
    Ok(if conj { z.conj() } else { z })
}

fn alpha_or_zero(l: HalfInt, m: HalfInt) -> f64 {
    if l.contains(m) && l.contains(m - HalfInt::ONE) {
        ladder_alpha(l, m)
    } else {
        0.0
    }
}

/// |LHS - RHS| of a first-order recurrence at (theta, tau).
pub fn recurrence_residual(
    which: Recurrence,
    form: RecurrenceForm,
    l: HalfInt,
    m: HalfInt,
    n: HalfInt,
    theta: f64,
    tau: f64,
) -> Result<f64, DiffError> {
    let h = DEFAULT_STEP;
    let at = ComplexEulerAngles::new(0.0, 0.0, theta, tau, 0.0, 0.0);
    guard(&at, h)?;
    zfn(l, m, n, theta, tau)?;
    let one = HalfInt::ONE;
    let literal = form == RecurrenceForm::Literal;
    let conj = match which {
        Recurrence::SecondLower | Recurrence::SecondRaise => literal,
        Recurrence::FirstLower | Recurrence::FirstRaise => false,
        Recurrence::DottedFirstLower | Recurrence::DottedFirstRaise => true,
    };
    let f = move |a: &ComplexEulerAngles| z_or_zero(l, m, n, a.theta, a.tau, conj).expect("indices checked");
    // (d_theta + s i d_tau) applied to the function
    let s = match which {
        Recurrence::DottedFirstLower | Recurrence::DottedFirstRaise => -1.0,
        _ => 1.0,
    };
    let deriv = central(&f, Var::Theta, &at, h) + I * s * central(&f, Var::Tau, &at, h);
    let value = f(&at);
    let (mv, nv) = (m.value(), n.value());
    let dotted_angle = matches!(which, Recurrence::DottedFirstLower | Recurrence::DottedFirstRaise) && !literal;
    let w = if dotted_angle { at.theta_c_dot() } else { at.theta_c() };
    let ladder = if literal { C64::new(1.0, 0.0) } else { I };
    let (sign, coupling, target) = match which {
        Recurrence::SecondLower => (-1.0, (mv - nv * w.cos()) / w.sin(), (m, n - one, alpha_or_zero(l, n))),
        Recurrence::SecondRaise => (1.0, (mv - nv * w.cos()) / w.sin(), (m, n + one, alpha_or_zero(l, n + one))),
        Recurrence::FirstLower => (-1.0, (nv - mv * w.cos()) / w.sin(), (m - one, n, alpha_or_zero(l, m))),
        Recurrence::FirstRaise => (1.0, (nv - mv * w.cos()) / w.sin(), (m + one, n, alpha_or_zero(l, m + one))),
        Recurrence::DottedFirstLower => {
            let sg = if literal { 1.0 } else { -1.0 };
            (sg, (nv - mv * w.cos()) / w.sin(), (m - one, n, alpha_or_zero(l, m)))
        }
        Recurrence::DottedFirstRaise => {
            let sg = if literal { -1.0 } else { 1.0 };
            (sg, (nv - mv * w.cos()) / w.sin(), (m + one, n, alpha_or_zero(l, m + one)))
        }
    };
    let ladder = if dotted_angle { ladder.conj() } else { ladder };
    let (tm, tn, alpha) = target;
    let rhs = ladder * 2.0 * alpha * z_or_zero(l, tm, tn, theta, tau, conj)?;
    let lhs = deriv + coupling * value * 2.0 * sign;
    Ok((lhs - rhs).norm())
}

/// Generators written as first-order operators in the Euler parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EulerGenerator {
    A(usize),
    B(usize),
}

pub fn apply_euler_generator(f: &ScalarField6, g: EulerGenerator, at: &ComplexEulerAngles) -> Result<C64, DiffError> {
    let h = DEFAULT_STEP;
    guard(at, h)?;
    let (ps, th) = (at.psi_c(), at.theta_c());
    let (vt, vp, vs) = match g {
        EulerGenerator::A(_) => (Var::Theta, Var::Phi, Var::Psi),
        EulerGenerator::B(_) => (Var::Tau, Var::Epsilon, Var::Varep),
    };
    let axis = match g {
        EulerGenerator::A(k) | EulerGenerator::B(k) => k,
    };
    let f = &*f.f;
    let d = |v: Var| central(f, v, at, h);
    Ok(match axis {
        1 => ps.cos() * d(vt) + ps.sin() / th.sin() * d(vp) - th.cos() / th.sin() * ps.sin() * d(vs),
        2 => -ps.sin() * d(vt) + ps.cos() / th.sin() * d(vp) - th.cos() / th.sin() * ps.cos() * d(vs),
        _ => d(vs),
    })
}

/// Matrix of a generator acting on the column index of the representation
/// matrix: the operator-basis matrices conjugated by diag((-1)^{l-m}), with
/// boosts carrying an extra sign.
pub fn column_generator(l: HalfInt, g: EulerGenerator) -> Result<CMat, DiffError> {
    let ops = build_operators(l, Flavor::Plain)?;
    let (mat, sign) = match g {
        EulerGenerator::A(k) => (&ops.a[k - 1], 1.0),
        EulerGenerator::B(k) => (&ops.b[k - 1], -1.0),
    };
    let d = mat.nrows();
    Ok(CMat::from_fn(d, d, |i, j| if (i + j) % 2 == 0 { mat[(i, j)] * sign } else { -mat[(i, j)] * sign }))
}

/// Compares the Euler-form generators applied to every 𝔐^l_{mn} with the
/// matrix action on the column index.
pub fn euler_generator_check(l: HalfInt, at: &ComplexEulerAngles) -> Result<DiffReport, DiffError> {
    guard(at, DEFAULT_STEP)?;
    let ms = l.descending();
    let mut worst: f64 = 0.0;
    for g in [1, 2, 3].map(EulerGenerator::A).into_iter().chain([1, 2, 3].map(EulerGenerator::B)) {
        let gen = column_generator(l, g)?;
        for (i, &m) in ms.iter().enumerate() {
            for (j, &n) in ms.iter().enumerate() {
                let field = ScalarField6::hyperspherical(l, m, n, false);
                let lhs = apply_euler_generator(&field, g, at)?;
                let mut rhs = C64::new(0.0, 0.0);
                for (k, &mk) in ms.iter().enumerate() {
                    rhs += hyperspherical_m(l, m, mk, at, false)? * gen[(k, j)];
                }
                let _ = i;
                worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
            }
        }
    }
    Ok(DiffReport { residual_max: worst, sample_points: vec![at.as_array()], step: DEFAULT_STEP })
}
