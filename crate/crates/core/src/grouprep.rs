//! SL(2,C) group elements in complex Euler angles, matrix elements of the
//! finite-dimensional representations and the hyperspherical functions.
//!
//! Rows and columns of every representation matrix are labelled by
//! `m = l, l-1, ..., -l` in that order.

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numkit::{check_pair, factorial, gamma_half, hyp2f1_terminating, HalfInt, NumError, C64, I};

pub type CMat = DMatrix<C64>;
pub type Mat2C = Matrix2<C64>;

/// Largest 2l accepted by the polynomial-basis oracle.
pub const ORACLE_MAX_TWICE_L: i32 = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("degenerate Euler angles: theta is 0 or pi, only phi+psi (or phi-psi) is determined")]
    DegenerateAngle,
    #[error("matrix is not a unimodular unitary 2x2 matrix")]
    NotSu2,
    #[error("weight 2l = {0} exceeds the oracle limit")]
    DimensionGuard(i32),
}

/// Six real parameters of an SL(2,C) element; the complex angles are
/// `phi - i epsilon`, `theta - i tau`, `psi - i varep`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexEulerAngles {
    pub phi: f64,
    pub epsilon: f64,
    pub theta: f64,
    pub tau: f64,
    pub psi: f64,
    pub varep: f64,
}

impl ComplexEulerAngles {
    pub fn new(phi: f64, epsilon: f64, theta: f64, tau: f64, psi: f64, varep: f64) -> Self {
        Self { phi, epsilon, theta, tau, psi, varep }
    }

    pub fn real(phi: f64, theta: f64, psi: f64) -> Self {
        Self { phi, theta, psi, ..Default::default() }
    }

    pub fn phi_c(&self) -> C64 {
        C64::new(self.phi, -self.epsilon)
    }

    pub fn theta_c(&self) -> C64 {
        C64::new(self.theta, -self.tau)
    }

    pub fn psi_c(&self) -> C64 {
        C64::new(self.psi, -self.varep)
    }

    pub fn phi_c_dot(&self) -> C64 {
        self.phi_c().conj()
    }

    pub fn theta_c_dot(&self) -> C64 {
        self.theta_c().conj()
    }

    pub fn psi_c_dot(&self) -> C64 {
        self.psi_c().conj()
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.phi, self.epsilon, self.theta, self.tau, self.psi, self.varep]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4], a[5])
    }
}

/// Representation matrix tagged with its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct RepMatrix {
    pub l: HalfInt,
    pub dotted: bool,
    pub entries: CMat,
}

impl RepMatrix {
    pub fn new(l: HalfInt, dotted: bool, entries: CMat) -> Self {
        debug_assert_eq!(entries.nrows(), l.dim());
        debug_assert_eq!(entries.ncols(), l.dim());
        Self { l, dotted, entries }
    }

    pub fn get(&self, m: HalfInt, n: HalfInt) -> Option<C64> {
        Some(self.entries[(self.l.row_of(m)?, self.l.row_of(n)?)])
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Unitary matrix of a rotation with Euler angles (phi, theta, psi).
pub fn su2_from_euler(phi: f64, theta: f64, psi: f64) -> Mat2C {
    su2_complex(c(phi), c(theta), c(psi))
}

fn su2_complex(phi: C64, theta: C64, psi: C64) -> Mat2C {
    let ch = (theta / 2.0).cos();
    let sh = (theta / 2.0).sin();
    Mat2C::new(
        ch * (I * (phi + psi) / 2.0).exp(),
        I * sh * (I * (phi - psi) / 2.0).exp(),
        I * sh * (I * (psi - phi) / 2.0).exp(),
        ch * (-I * (phi + psi) / 2.0).exp(),
    )
}

/// Recovers (phi, theta, psi) with phi in [0, 2pi) and psi in [-2pi, 2pi).
pub fn euler_from_su2(u: &Mat2C) -> Result<(f64, f64, f64), GroupError> {
    let unitary = (u * u.adjoint() - Mat2C::identity()).iter().all(|z| z.norm() < 1e-9);
    if !unitary || (u.determinant() - c(1.0)).norm() > 1e-9 {
        return Err(GroupError::NotSu2);
    }
    let alpha = u[(0, 0)];
    let beta = u[(0, 1)];
    let a = alpha.norm();
    if a < 1e-12 || (1.0 - a) < 1e-12 {
        return Err(GroupError::DegenerateAngle);
    }
    let theta = 2.0 * a.min(1.0).acos();
    let sum = 2.0 * alpha.arg();
    let diff = 2.0 * (beta.arg() - std::f64::consts::FRAC_PI_2);
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut phi = (sum + diff) / 2.0;
    let mut psi = (sum - diff) / 2.0;
    let shift = (phi / two_pi).floor() * two_pi;
    phi -= shift;
    psi -= shift;
    psi = (psi + two_pi).rem_euclid(2.0 * two_pi) - two_pi;
    Ok((phi, theta, psi))
}

fn diag_half(x: C64) -> Mat2C {
    Mat2C::new((x / 2.0).exp(), c(0.0), c(0.0), (-x / 2.0).exp())
}

/// Fundamental matrix of SL(2,C) in closed form.
pub fn sl2c_fundamental(angles: &ComplexEulerAngles) -> Mat2C {
    su2_complex(angles.phi_c(), angles.theta_c(), angles.psi_c())
}

/// The same element as the ordered product of the six one-parameter factors.
pub fn sl2c_fundamental_product(a: &ComplexEulerAngles) -> Mat2C {
    let (ct, st) = ((a.theta / 2.0).cos(), (a.theta / 2.0).sin());
    let (chu, shu) = ((a.tau / 2.0).cosh(), (a.tau / 2.0).sinh());
    let rot = Mat2C::new(c(ct), I * st, I * st, c(ct));
    let boost = Mat2C::new(c(chu), c(shu), c(shu), c(chu));
    diag_half(I * a.phi) * diag_half(c(a.epsilon)) * rot * boost * diag_half(I * a.psi) * diag_half(c(a.varep))
}

fn poly_mul(p: &[C64], q: &[C64]) -> Vec<C64> {
    let mut out = vec![c(0.0); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn poly_pow(p: &[C64], k: usize) -> Vec<C64> {
    (0..k).fold(vec![c(1.0)], |acc, _| poly_mul(&acc, p))
}

/// Representation matrix from the action on homogeneous polynomials of
/// degree 2l: f(z) -> (beta z + delta)^{2l} f((alpha z + gamma)/(beta z + delta))
/// in the normalized monomial basis z^{l-n}/sqrt((l-n)!(l+n)!).
/// Dotted weights use the entrywise conjugate of `g`.
pub fn rep_matrix_oracle(l: HalfInt, g: &Mat2C, dotted: bool) -> Result<RepMatrix, GroupError> {
    let two_l = l.twice();
    if two_l < 0 {
        return Err(NumError::Index(format!("negative weight {l}")).into());
    }
    if two_l > ORACLE_MAX_TWICE_L {
        return Err(GroupError::DimensionGuard(two_l));
    }
    let g = if dotted { g.map(|z| z.conj()) } else { *g };
    let (alpha, beta, gamma, delta) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    let n2 = two_l as usize;
    let norm = |k: usize| (factorial(k as u32) * factorial((n2 - k) as u32)).sqrt();
    let mut t = CMat::zeros(n2 + 1, n2 + 1);
    for col in 0..=n2 {
        let image = poly_mul(&poly_pow(&[delta, beta], n2 - col), &poly_pow(&[gamma, alpha], col));
        for (row, coef) in image.iter().enumerate() {
            t[(row, col)] = coef * norm(row) / norm(col);
        }
    }
    Ok(RepMatrix::new(l, dotted, t))
}

fn check_indices(l: HalfInt, m: HalfInt, n: HalfInt) -> Result<(), GroupError> {
    check_pair(l, m)?;
    check_pair(l, n)?;
    Ok(())
}

fn int_of(h: HalfInt) -> i32 {
    h.to_int().expect("integral combination of indices")
}

/// P^l_{mn} at a complex angle: the rotation kernel analytically continued.
pub fn generalized_spherical(l: HalfInt, m: HalfInt, n: HalfInt, angle: C64) -> Result<C64, GroupError> {
    check_indices(l, m, n)?;
    let (m, n) = if m.twice() < n.twice() { (-m, -n) } else { (m, n) };
    let d = int_of(m - n) as u32;
    let pref = (gamma_half(l + m + HalfInt::ONE)? * gamma_half(l - n + HalfInt::ONE)?
        / (gamma_half(l - m + HalfInt::ONE)? * gamma_half(l + n + HalfInt::ONE)?))
    .sqrt()
        / factorial(d);
    let t = (angle / 2.0).tan();
    let hyper = hyp2f1_terminating(c((m - l).value()), c((-l - n).value()), c(d as f64 + 1.0), -t * t)?;
    Ok(I.powu(d) * pref * (angle / 2.0).cos().powi(l.twice()) * t.powu(d) * hyper)
}

/// Boost kernel 𝔓^l_{mn}(tau), written with real hyperbolic functions.
pub fn jacobi_boost(l: HalfInt, m: HalfInt, n: HalfInt, tau: f64) -> Result<f64, GroupError> {
    check_indices(l, m, n)?;
    let (m, n) = if m.twice() < n.twice() { (-m, -n) } else { (m, n) };
    let d = int_of(m - n) as u32;
    let pref = (gamma_half(l + m + HalfInt::ONE)? * gamma_half(l - n + HalfInt::ONE)?
        / (gamma_half(l - m + HalfInt::ONE)? * gamma_half(l + n + HalfInt::ONE)?))
    .sqrt()
        / factorial(d);
    let th = (tau / 2.0).tanh();
    let hyper = hyp2f1_terminating(c((m - l).value()), c((-l - n).value()), c(d as f64 + 1.0), c(th * th))?;
    Ok(pref * (tau / 2.0).cosh().powi(l.twice()) * th.powi(d as i32) * hyper.re)
}

/// SU(2) matrix element t^l_{mn}(phi, theta, psi).
pub fn su2_matrix_element(
    l: HalfInt,
    m: HalfInt,
    n: HalfInt,
    phi: f64,
    theta: f64,
    psi: f64,
) -> Result<C64, GroupError> {
    let p = generalized_spherical(l, m, n, c(theta))?;
    Ok((-I * (m.value() * phi + n.value() * psi)).exp() * p)
}

/// Z^l_{mn}(theta, tau), the kernel evaluated at theta - i tau.
pub fn zfn(l: HalfInt, m: HalfInt, n: HalfInt, theta: f64, tau: f64) -> Result<C64, GroupError> {
    generalized_spherical(l, m, n, C64::new(theta, -tau))
}

/// Z built as a product of the rotation and boost kernels summed over the
/// intermediate label.
pub fn zfn_via_factorization(l: HalfInt, m: HalfInt, n: HalfInt, theta: f64, tau: f64) -> Result<C64, GroupError> {
    check_indices(l, m, n)?;
    let mut sum = c(0.0);
    for k in l.descending() {
        sum += generalized_spherical(l, m, k, c(theta))? * jacobi_boost(l, k, n, tau)?;
    }
    Ok(sum)
}

/// Generalized hyperspherical function 𝔐^l_{mn}; the dotted variant is the
/// matrix element of the conjugate representation.
pub fn hyperspherical_m(
    l: HalfInt,
    m: HalfInt,
    n: HalfInt,
    a: &ComplexEulerAngles,
    dotted: bool,
) -> Result<C64, GroupError> {
    let z = zfn(l, m, n, a.theta, a.tau)?;
    let (mv, nv) = (m.value(), n.value());
    if dotted {
        Ok((-mv * C64::new(a.epsilon, -a.phi)).exp() * z.conj() * (-nv * C64::new(a.varep, -a.psi)).exp())
    } else {
        Ok((-mv * C64::new(a.epsilon, a.phi)).exp() * z * (-nv * C64::new(a.varep, a.psi)).exp())
    }
}

/// Full representation matrix assembled from `hyperspherical_m`.
pub fn rep_matrix_formula(l: HalfInt, a: &ComplexEulerAngles, dotted: bool) -> Result<RepMatrix, GroupError> {
    let ms = l.descending();
    let mut t = CMat::zeros(ms.len(), ms.len());
    for (i, &m) in ms.iter().enumerate() {
        for (j, &n) in ms.iter().enumerate() {
            t[(i, j)] = hyperspherical_m(l, m, n, a, dotted)?;
        }
    }
    Ok(RepMatrix::new(l, dotted, t))
}
