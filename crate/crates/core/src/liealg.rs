//! Infinitesimal operators of the weight-l representations, the commuting
//! X/Y basis, ladder coefficients and commutator tables.
//!
//! Matrices use the descending basis `xi_l, ..., xi_{-l}`;
//! `OperatorSet::ascending_layout` gives the same operators in the
//! ascending basis.

use serde::Serialize;
use thiserror::Error;

use crate::grouprep::{rep_matrix_oracle, CMat, GroupError, Mat2C};
use crate::numkit::{ladder_alpha, HalfInt, C64, I};

pub const OPERATOR_MAX_TWICE_L: i32 = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("dimension mismatch: {0}x{0} against {1}x{1}")]
    Dimension(usize, usize),
    #[error("weight 2l = {0} exceeds the supported range")]
    DimensionGuard(i32),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Flavor {
    Plain,
    Tilde,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSet {
    pub l: HalfInt,
    pub flavor: Flavor,
    pub a: [CMat; 3],
    pub b: [CMat; 3],
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn reverse(m: &CMat) -> CMat {
    let n = m.nrows();
    CMat::from_fn(n, n, |i, j| m[(n - 1 - i, n - 1 - j)])
}

impl OperatorSet {
    pub fn dim(&self) -> usize {
        self.a[0].nrows()
    }

    /// Same operators written in the ascending basis.
    pub fn ascending_layout(&self) -> OperatorSet {
        OperatorSet {
            l: self.l,
            flavor: self.flavor,
            a: self.a.clone().map(|m| reverse(&m)),
            b: self.b.clone().map(|m| reverse(&m)),
        }
    }

    /// Operators of a direct sum, one block per set.
    pub fn block_diagonal(sets: &[OperatorSet]) -> OperatorSet {
        let dim: usize = sets.iter().map(|s| s.dim()).sum();
        let mut a = [CMat::zeros(dim, dim), CMat::zeros(dim, dim), CMat::zeros(dim, dim)];
        let mut b = a.clone();
        let mut off = 0;
        for s in sets {
            let d = s.dim();
            for k in 0..3 {
                a[k].view_mut((off, off), (d, d)).copy_from(&s.a[k]);
                b[k].view_mut((off, off), (d, d)).copy_from(&s.b[k]);
            }
            off += d;
        }
        let l = sets.first().map(|s| s.l).unwrap_or(HalfInt::ZERO);
        let flavor = sets.first().map(|s| s.flavor).unwrap_or(Flavor::Plain);
        OperatorSet { l, flavor, a, b }
    }

    /// Operators given directly as matrices (e.g. a Cartesian realization).
    pub fn from_matrices(l: HalfInt, flavor: Flavor, a: [CMat; 3], b: [CMat; 3]) -> OperatorSet {
        OperatorSet { l, flavor, a, b }
    }

    fn generator(&self, g: Gen) -> &CMat {
        match g {
            Gen::A(k) => &self.a[k - 1],
            Gen::B(k) => &self.b[k - 1],
        }
    }
}

/// Operators A_k, B_k = i A_k of weight `l`; the tilde flavor negates both.
pub fn build_operators(l: HalfInt, flavor: Flavor) -> Result<OperatorSet, LieError> {
    if l.twice() < 0 || l.twice() > OPERATOR_MAX_TWICE_L {
        return Err(LieError::DimensionGuard(l.twice()));
    }
    let ms = l.descending();
    let d = ms.len();
    let mut a1 = CMat::zeros(d, d);
    let mut a2 = CMat::zeros(d, d);
    let mut a3 = CMat::zeros(d, d);
    for (col, &m) in ms.iter().enumerate() {
        a3[(col, col)] = -I * m.value();
        if col + 1 < d {
            // xi_m -> xi_{m-1}
            let al = ladder_alpha(l, m);
            a1[(col + 1, col)] += -I * al / 2.0;
            a2[(col + 1, col)] += c(al / 2.0);
        }
        if col >= 1 {
            // xi_m -> xi_{m+1}
            let al = ladder_alpha(l, m + HalfInt::ONE);
            a1[(col - 1, col)] += -I * al / 2.0;
            a2[(col - 1, col)] += c(-al / 2.0);
        }
    }
    let sign = match flavor {
        Flavor::Plain => 1.0,
        Flavor::Tilde => -1.0,
    };
    let a = [a1 * c(sign), a2 * c(sign), a3 * c(sign)];
    let b = a.clone().map(|m| m * I);
    Ok(OperatorSet { l, flavor, a, b })
}

pub fn commutator(p: &CMat, q: &CMat) -> Result<CMat, LieError> {
    if p.nrows() != q.nrows() || p.ncols() != q.ncols() || p.nrows() != p.ncols() {
        return Err(LieError::Dimension(p.nrows(), q.nrows()));
    }
    Ok(p * q - q * p)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Gen {
    A(usize),
    B(usize),
}

/// `[P, Q] = sign * R` (R absent means zero).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Relation {
    pub left: Gen,
    pub right: Gen,
    pub sign: f64,
    pub result: Option<Gen>,
}

const fn rel(left: Gen, right: Gen, sign: f64, result: Option<Gen>) -> Relation {
    Relation { left, right, sign, result }
}

/// The fifteen brackets of the Lorentz algebra.
pub const LORENTZ_TABLE: [Relation; 15] = {
    use Gen::{A, B};
    [
        rel(A(1), A(2), 1.0, Some(A(3))),
        rel(A(2), A(3), 1.0, Some(A(1))),
        rel(A(3), A(1), 1.0, Some(A(2))),
        rel(B(1), B(2), -1.0, Some(A(3))),
        rel(B(2), B(3), -1.0, Some(A(1))),
        rel(B(3), B(1), -1.0, Some(A(2))),
        rel(A(1), B(1), 1.0, None),
        rel(A(2), B(2), 1.0, None),
        rel(A(3), B(3), 1.0, None),
        rel(A(1), B(2), 1.0, Some(B(3))),
        rel(A(1), B(3), -1.0, Some(B(2))),
        rel(A(2), B(3), 1.0, Some(B(1))),
        rel(A(2), B(1), -1.0, Some(B(3))),
        rel(A(3), B(1), 1.0, Some(B(2))),
        rel(A(3), B(2), -1.0, Some(B(1))),
    ]
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationResidual {
    pub relation: String,
    pub residual: f64,
}

/// Residuals of the bracket table. The tilde flavor is checked against the
/// mirrored table (every structure constant negated).
pub fn check_lorentz_table(ops: &OperatorSet) -> Vec<RelationResidual> {
    let mirror = match ops.flavor {
        Flavor::Plain => 1.0,
        Flavor::Tilde => -1.0,
    };
    LORENTZ_TABLE
        .iter()
        .map(|r| {
            let lhs = commutator(ops.generator(r.left), ops.generator(r.right)).expect("same set");
            let rhs = match r.result {
                Some(g) => ops.generator(g) * c(r.sign * mirror),
                None => CMat::zeros(ops.dim(), ops.dim()),
            };
            RelationResidual { relation: format!("[{:?},{:?}]", r.left, r.right), residual: max_abs(&(lhs - rhs)) }
        })
        .collect()
}

/// X_k = (A_k + i B_k)/2, Y_k = (A_k - i B_k)/2 and their shift combinations.
#[derive(Debug, Clone, PartialEq)]
pub struct XyBasis {
    pub x: [CMat; 3],
    pub y: [CMat; 3],
    pub x_plus: CMat,
    pub x_minus: CMat,
    pub y_plus: CMat,
    pub y_minus: CMat,
}

pub fn xy_basis(ops: &OperatorSet) -> XyBasis {
    let x: [CMat; 3] = std::array::from_fn(|k| (&ops.a[k] + &ops.b[k] * I) * c(0.5));
    let y: [CMat; 3] = std::array::from_fn(|k| (&ops.a[k] - &ops.b[k] * I) * c(0.5));
    XyBasis {
        x_plus: &x[0] + &x[1] * I,
        x_minus: &x[0] - &x[1] * I,
        y_plus: &y[0] + &y[1] * I,
        y_minus: &y[0] - &y[1] * I,
        x,
        y,
    }
}

/// Residuals of the bracket table of the X/Y basis: two copies of su(2)
/// with [X_3, X_1] = X_2, and [X_k, Y_j] = 0.
pub fn check_xy_table(xy: &XyBasis, mirrored: bool) -> Vec<RelationResidual> {
    let s = if mirrored { -1.0 } else { 1.0 };
    let mut out = Vec::new();
    for (name, set) in [("X", &xy.x), ("Y", &xy.y)] {
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let r = commutator(&set[i], &set[j]).expect("same set") - &set[k] * c(s);
            out.push(RelationResidual {
                relation: format!("[{name}{},{name}{}]", i + 1, j + 1),
                residual: max_abs(&r),
            });
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            let r = commutator(&xy.x[i], &xy.y[j]).expect("same set");
            out.push(RelationResidual { relation: format!("[X{},Y{}]", i + 1, j + 1), residual: max_abs(&r) });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ladder {
    XMinus,
    XPlus,
    X3,
    YMinus,
    YPlus,
    Y3,
}

/// Coefficient and target labels of a shift operator acting on |l,m; ldot,mdot>.
/// Moves that leave the weight range give coefficient zero.
pub fn ladder_coefficients(
    l: HalfInt,
    m: HalfInt,
    ldot: HalfInt,
    mdot: HalfInt,
    which: Ladder,
) -> (f64, (HalfInt, HalfInt)) {
    let one = HalfInt::ONE;
    let prod = |a: HalfInt, b: HalfInt| {
        let p = a.value() * b.value();
        if p > 0.0 {
            p.sqrt()
        } else {
            0.0
        }
    };
    match which {
        Ladder::XMinus => (prod(ldot + mdot, ldot - mdot + one), (m, mdot - one)),
        Ladder::XPlus => (prod(ldot - mdot, ldot + mdot + one), (m, mdot + one)),
        Ladder::X3 => (mdot.value(), (m, mdot)),
        Ladder::YMinus => (prod(l + m, l - m + one), (m - one, mdot)),
        Ladder::YPlus => (prod(l - m, l + m + one), (m + one, mdot)),
        Ladder::Y3 => (m.value(), (m, mdot)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SubgroupKind {
    Rotation,
    Boost,
}

/// One-parameter subgroup element; boosts replace t by -it.
pub fn subgroup_element(axis: usize, kind: SubgroupKind, t: f64) -> Mat2C {
    let (ch, sh, e) = match kind {
        SubgroupKind::Rotation => (c((t / 2.0).cos()), c((t / 2.0).sin()), (I * t / 2.0).exp()),
        SubgroupKind::Boost => (c((t / 2.0).cosh()), -I * (t / 2.0).sinh(), c((t / 2.0).exp())),
    };
    match axis {
        1 => Mat2C::new(ch, I * sh, I * sh, ch),
        2 => Mat2C::new(ch, -sh, sh, ch),
        _ => Mat2C::new(e, c(0.0), c(0.0), c(1.0) / e),
    }
}

/// Representation matrix in the operator basis: the polynomial-basis matrix
/// of the element (g^dagger)^{-1}, conjugated by diag((-1)^{l-m}).
pub fn operator_basis_rep(l: HalfInt, g: &Mat2C) -> Result<CMat, LieError> {
    let inv_adj = g.adjoint().try_inverse().ok_or(LieError::Dimension(2, 0))?;
    let t = rep_matrix_oracle(l, &inv_adj, false)?.entries;
    let d = t.nrows();
    Ok(CMat::from_fn(d, d, |i, j| if (i + j) % 2 == 0 { t[(i, j)] } else { -t[(i, j)] }))
}

/// Derivative at t = 0 of the operator-basis representation along a
/// one-parameter subgroup, by central differences with one Richardson step.
pub fn infinitesimal_from_subgroup(l: HalfInt, axis: usize, kind: SubgroupKind) -> Result<CMat, LieError> {
    if l.twice() > 8 {
        return Err(LieError::DimensionGuard(l.twice()));
    }
    let h = 1e-4;
    let diff = |step: f64| -> Result<CMat, LieError> {
        let plus = operator_basis_rep(l, &subgroup_element(axis, kind, step))?;
        let minus = operator_basis_rep(l, &subgroup_element(axis, kind, -step))?;
        Ok((plus - minus) * c(1.0 / (2.0 * step)))
    };
    let coarse = diff(h)?;
    let fine = diff(h / 2.0)?;
    Ok((fine * c(4.0) - coarse) * c(1.0 / 3.0))
}

/// Plain derivative of the polynomial-basis matrix along a subgroup.
pub fn oracle_generator(l: HalfInt, axis: usize, kind: SubgroupKind) -> Result<CMat, LieError> {
    let h = 1e-4;
    let diff = |step: f64| -> Result<CMat, LieError> {
        let plus = rep_matrix_oracle(l, &subgroup_element(axis, kind, step), false)?.entries;
        let minus = rep_matrix_oracle(l, &subgroup_element(axis, kind, -step), false)?.entries;
        Ok((plus - minus) * c(1.0 / (2.0 * step)))
    };
    let coarse = diff(h)?;
    let fine = diff(h / 2.0)?;
    Ok((fine * c(4.0) - coarse) * c(1.0 / 3.0))
}

/// A nonzero matrix U with U F_k = T_k U for every pair, if one exists.
pub fn intertwiner(from: &[CMat], to: &[CMat]) -> Option<CMat> {
    let n = from.first()?.nrows();
    let m = to.first()?.nrows();
    // rows of the stacked linear map vec(U) -> vec(T U - U F)
    let mut sys = CMat::zeros(from.len() * n * m, n * m);
    for (blk, (f, t)) in from.iter().zip(to).enumerate() {
        for i in 0..m {
            for j in 0..n {
                let row = blk * n * m + i * n + j;
                for k in 0..m {
                    sys[(row, k * n + j)] += t[(i, k)];
                }
                for k in 0..n {
                    sys[(row, i * n + k)] -= f[(k, j)];
                }
            }
        }
    }
    let gram = sys.adjoint() * &sys;
    let eig = nalgebra::linalg::SymmetricEigen::new(nalgebra::DMatrix::from_fn(gram.nrows(), gram.ncols(), |i, j| {
        gram[(i, j)]
    }));
    let (idx, val) =
        eig.eigenvalues
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |best, (i, &v)| if v < best.1 { (i, v) } else { best });
    if val > 1e-18 * (1.0 + gram.norm()) {
        return None;
    }
    let v = eig.eigenvectors.column(idx);
    Some(CMat::from_fn(m, n, |i, j| v[i * n + j]))
}
