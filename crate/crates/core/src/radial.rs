//! Radial ordinary differential equations left after separating the
//! Gel'fand-Yaglom system on the complex sphere, their Dirac and Maxwell
//! reductions, a fixed-step Runge-Kutta integrator, the power-exponential
//! closed form and the Bessel-series expressions for the radial functions.
//!
//! A system is stored in implicit form `D f' + (A + B/r) f = 0` with one row
//! per equation and one column per unknown component.

use std::fmt;
use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::grouprep::CMat;
use crate::gysystem::{build_lambda, derived_vugw, ChainHalf, DottedRadical, GyError, RepChain};
use crate::liealg::Flavor;
use crate::numkit::{bessel_j_series, gamma_signed, ladder_alpha, HalfInt, C64, DEFAULT_BESSEL_TERMS, I};

#[derive(Debug, Error)]
pub enum RadialError {
    #[error("index error: {0}")]
    Index(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("derivative matrix is singular; close the system first")]
    Singular,
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Gy(#[from] GyError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn sqrt_nonneg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x.sqrt()
    }
}

/// Label of a radial component f_{l,m} in one half of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComponentLabel {
    pub dotted: bool,
    pub block: usize,
    pub l: HalfInt,
    pub m: HalfInt,
}

impl fmt::Display for ComponentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let half = if self.dotted { "d" } else { "u" };
        write!(f, "{half}[{}]({};{})", self.block, self.l, self.m)
    }
}

/// Harmonic weights and mass terms shared by every row of a system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialMeta {
    pub l0: HalfInt,
    pub l0_dot: HalfInt,
    pub n: HalfInt,
    pub n_dot: HalfInt,
    pub kappa: C64,
    pub kappa_dot: C64,
}

impl RadialMeta {
    pub fn new(l0: HalfInt, l0_dot: HalfInt, n: HalfInt, n_dot: HalfInt, kappa: C64, kappa_dot: C64) -> Self {
        RadialMeta { l0, l0_dot, n, n_dot, kappa, kappa_dot }
    }
}

/// Mass term of the Dirac equation, kappa = -i m.
pub fn dirac_kappa(mass: f64) -> C64 {
    -I * mass
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSystem {
    pub unknowns: Vec<ComponentLabel>,
    pub rows: Vec<ComponentLabel>,
    pub deriv: CMat,
    pub constant: CMat,
    pub inverse_r: CMat,
    pub meta: RadialMeta,
}

/// The explicit form f' = (A + B/r) f.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitSystem {
    pub constant: CMat,
    pub inverse_r: CMat,
}

impl ExplicitSystem {
    pub fn matrix(&self, r: f64) -> CMat {
        &self.constant + &self.inverse_r * c(1.0 / r)
    }
}

impl RadialSystem {
    fn zeros(unknowns: Vec<ComponentLabel>, rows: Vec<ComponentLabel>, meta: RadialMeta) -> Self {
        let (p, q) = (rows.len(), unknowns.len());
        RadialSystem {
            unknowns,
            rows,
            deriv: CMat::zeros(p, q),
            constant: CMat::zeros(p, q),
            inverse_r: CMat::zeros(p, q),
            meta,
        }
    }

    pub fn dim(&self) -> usize {
        self.unknowns.len()
    }

    pub fn unknown_index(&self, dotted: bool, l: HalfInt, m: HalfInt) -> Option<usize> {
        self.unknowns.iter().position(|u| u.dotted == dotted && u.l == l && u.m == m)
    }

    /// Row residuals D f' + (A + B/r) f.
    pub fn residual(&self, r: f64, f: &[C64], df: &[C64]) -> Vec<C64> {
        let fv = nalgebra::DVector::from_column_slice(f);
        let dv = nalgebra::DVector::from_column_slice(df);
        let out = &self.deriv * dv + (&self.constant + &self.inverse_r * c(1.0 / r)) * fv;
        out.iter().copied().collect()
    }

    /// Drops rows whose three coefficient rows are all zero.
    pub fn prune_trivial(&self) -> RadialSystem {
        let keep: Vec<usize> = (0..self.rows.len())
            .filter(|&i| {
                (0..self.dim()).any(|j| {
                    self.deriv[(i, j)].norm() > 0.0
                        || self.constant[(i, j)].norm() > 0.0
                        || self.inverse_r[(i, j)].norm() > 0.0
                })
            })
            .collect();
        self.select_rows(&keep)
    }

    fn select_rows(&self, keep: &[usize]) -> RadialSystem {
        let pick = |m: &CMat| CMat::from_fn(keep.len(), m.ncols(), |i, j| m[(keep[i], j)]);
        RadialSystem {
            unknowns: self.unknowns.clone(),
            rows: keep.iter().map(|&i| self.rows[i]).collect(),
            deriv: pick(&self.deriv),
            constant: pick(&self.constant),
            inverse_r: pick(&self.inverse_r),
            meta: self.meta,
        }
    }

    fn select_columns(&self, keep: &[usize]) -> RadialSystem {
        let pick = |m: &CMat| CMat::from_fn(m.nrows(), keep.len(), |i, j| m[(i, keep[j])]);
        RadialSystem {
            unknowns: keep.iter().map(|&j| self.unknowns[j]).collect(),
            rows: self.rows.clone(),
            deriv: pick(&self.deriv),
            constant: pick(&self.constant),
            inverse_r: pick(&self.inverse_r),
            meta: self.meta,
        }
    }

    /// Appends the equation f_k' = (p/r) f_k for an unknown no row determines.
    pub fn close_with_power(&self, unknown: usize, p: f64) -> RadialSystem {
        let (rows, cols) = (self.rows.len(), self.dim());
        let grow = |m: &CMat, v: C64| {
            let mut out = CMat::zeros(rows + 1, cols);
            out.view_mut((0, 0), (rows, cols)).copy_from(m);
            out[(rows, unknown)] = v;
            out
        };
        let mut row_labels = self.rows.clone();
        row_labels.push(self.unknowns[unknown]);
        RadialSystem {
            unknowns: self.unknowns.clone(),
            rows: row_labels,
            deriv: grow(&self.deriv, c(1.0)),
            constant: grow(&self.constant, c(0.0)),
            inverse_r: grow(&self.inverse_r, c(-p)),
            meta: self.meta,
        }
    }

    pub fn explicit(&self) -> Result<ExplicitSystem, RadialError> {
        if self.rows.len() != self.dim() {
            return Err(RadialError::Shape(format!("{} equations for {} unknowns", self.rows.len(), self.dim())));
        }
        let inv = self.deriv.clone().try_inverse().ok_or(RadialError::Singular)?;
        Ok(ExplicitSystem { constant: -(&inv * &self.constant), inverse_r: -(&inv * &self.inverse_r) })
    }

    /// Closed form of a row that involves a single unknown: d f' + (a + b/r) f = 0.
    pub fn scalar_closed_form(&self, row: usize, scale: C64) -> Result<PowerExp, RadialError> {
        let cols: Vec<usize> = (0..self.dim())
            .filter(|&j| {
                self.deriv[(row, j)].norm() > 0.0
                    || self.constant[(row, j)].norm() > 0.0
                    || self.inverse_r[(row, j)].norm() > 0.0
            })
            .collect();
        let [j] = cols[..] else {
            return Err(RadialError::Shape(format!("row {row} couples {} unknowns", cols.len())));
        };
        let d = self.deriv[(row, j)];
        if d.norm() == 0.0 {
            return Err(RadialError::Singular);
        }
        Ok(closed_form_power_exp(self.inverse_r[(row, j)] / d, -self.constant[(row, j)] / d, scale))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RfsForm {
    /// The ladder factor of the other half's weight evaluated at the
    /// row's own m, with a factor i.
    CrossWeight,
    /// Coefficients obtained by separating the component system with the
    /// harmonics of each half's own weight, built from the Lambda matrices.
    Separated,
}

fn half_labels(half: &ChainHalf, dotted: bool) -> Vec<ComponentLabel> {
    half.layout().into_iter().map(|s| ComponentLabel { dotted, block: s.block, l: s.l, m: s.m }).collect()
}

fn check_weights(half: &ChainHalf, own: HalfInt, other: HalfInt, n: HalfInt) -> Result<(), RadialError> {
    for b in &half.blocks {
        if b.l > own || b.l > other {
            return Err(RadialError::Index(format!("harmonic weights {own}, {other} below chain weight {}", b.l)));
        }
    }
    if !own.contains(n) {
        return Err(RadialError::Index(format!("n = {n} is not a label of weight {own}")));
    }
    Ok(())
}

/// Fills the rows of one half with the cross-weight coefficients.
fn fill_cross_weight(
    sys: &mut RadialSystem,
    half: &ChainHalf,
    offset: usize,
    other_weight: HalfInt,
    kappa: C64,
    radical: DottedRadical,
    dotted: bool,
) {
    let w = other_weight.value();
    for (row, slot) in half.layout().into_iter().enumerate() {
        let i = offset + row;
        sys.constant[(i, i)] += kappa;
        let (lv, mv) = (slot.l.value(), slot.m.value());
        let dm = sqrt_nonneg((w + mv) * (w - mv + 1.0));
        let dp = sqrt_nonneg((w + mv + 1.0) * (w - mv));
        for k in half.couplings.iter().filter(|k| k.row == slot.block) {
            let cv = k.value();
            let lp = half.blocks[k.col].l;
            let col = |m: HalfInt| half.index_of(k.col, m).map(|j| offset + j);
            let one = HalfInt::ONE;
            let (d, own, lower, raise) = match (lp - slot.l).twice() {
                -2 => {
                    let s = sqrt_nonneg(lv * lv - mv * mv);
                    (
                        2.0 * s,
                        -(lv + 1.0) * s,
                        I * sqrt_nonneg((lv + mv) * (lv + mv - 1.0)) * dm,
                        I * sqrt_nonneg((lv - mv) * (lv - mv - 1.0)) * dp,
                    )
                }
                0 => {
                    let low = match (dotted, radical) {
                        (true, DottedRadical::Shifted) => (lv + mv) * (lv - mv - 1.0),
                        _ => (lv + mv) * (lv - mv + 1.0),
                    };
                    (2.0 * mv, -mv, -I * sqrt_nonneg(low) * dm, I * sqrt_nonneg((lv + mv + 1.0) * (lv - mv)) * dp)
                }
                _ => {
                    let s = sqrt_nonneg((lv + 1.0).powi(2) - mv * mv);
                    (
                        2.0 * s,
                        lv * s,
                        -I * sqrt_nonneg((lv - mv + 1.0) * (lv - mv + 2.0)) * dm,
                        -I * sqrt_nonneg((lv + mv + 1.0) * (lv + mv + 2.0)) * dp,
                    )
                }
            };
            if let Some(j) = col(slot.m) {
                sys.deriv[(i, j)] += cv * d;
                sys.inverse_r[(i, j)] += cv * own;
            }
            if let Some(j) = col(slot.m - one) {
                sys.inverse_r[(i, j)] += cv * lower;
            }
            if let Some(j) = col(slot.m + one) {
                sys.inverse_r[(i, j)] += cv * raise;
            }
        }
    }
}

/// Fills the rows of one half from its Lambda matrices: D = 2 L3,
/// B = (iV or U) plus the ladder couplings -+2 L1 alpha(own weight).
fn fill_separated(
    sys: &mut RadialSystem,
    half: &ChainHalf,
    offset: usize,
    lam: &[CMat; 3],
    one_over_r: &CMat,
    weight: HalfInt,
    kappa: C64,
) {
    let layout = half.layout();
    for (a, ra) in layout.iter().enumerate() {
        let i = offset + a;
        sys.constant[(i, i)] += kappa;
        for (b, rb) in layout.iter().enumerate() {
            let j = offset + b;
            sys.deriv[(i, j)] += lam[2][(a, b)] * 2.0;
            sys.inverse_r[(i, j)] += one_over_r[(a, b)];
            let shift = (rb.m - ra.m).twice();
            if shift == -2 {
                sys.inverse_r[(i, j)] += -lam[0][(a, b)] * 2.0 * ladder_alpha(weight, ra.m);
            } else if shift == 2 {
                sys.inverse_r[(i, j)] += lam[0][(a, b)] * 2.0 * ladder_alpha(weight, rb.m);
            }
        }
    }
}

/// Radial system of a chain for the harmonic labels in `meta`. Unknowns are
/// the undotted chain components followed by the dotted ones; there is one
/// row per component, and rows of uncoupled blocks carry only the mass term.
pub fn build_rfs(
    chain: &RepChain,
    meta: &RadialMeta,
    form: RfsForm,
    radical: DottedRadical,
) -> Result<RadialSystem, RadialError> {
    chain.validate()?;
    check_weights(&chain.undotted, meta.l0, meta.l0_dot, meta.n)?;
    check_weights(&chain.dotted, meta.l0_dot, meta.l0, meta.n_dot)?;
    let mut labels = half_labels(&chain.undotted, false);
    labels.extend(half_labels(&chain.dotted, true));
    let mut sys = RadialSystem::zeros(labels.clone(), labels, *meta);
    let off = chain.undotted.dim();
    match form {
        RfsForm::CrossWeight => {
            fill_cross_weight(&mut sys, &chain.undotted, 0, meta.l0_dot, meta.kappa, radical, false);
            fill_cross_weight(&mut sys, &chain.dotted, off, meta.l0, meta.kappa_dot, radical, true);
        }
        RfsForm::Separated => {
            let lam = build_lambda(chain, radical)?;
            let ops = chain.undotted.operators(Flavor::Plain)?;
            let dops = chain.dotted.operators(Flavor::Tilde)?;
            let derived = derived_vugw(&lam, &ops, &dops);
            let iv = &derived.v * I;
            fill_separated(&mut sys, &chain.undotted, 0, &lam.lambda, &iv, meta.l0, meta.kappa);
            fill_separated(&mut sys, &chain.dotted, off, &lam.lambda_star, &derived.u, meta.l0_dot, meta.kappa_dot);
        }
    }
    Ok(sys)
}

/// Substitutes f_{1/2,-1/2} = -i f_{1/2,1/2} in each half of a spin-1/2
/// system, scales each row to unit derivative coefficient and adds twice the
/// second row to the first. Returns one scalar equation per half.
pub fn reduce_dirac(sys: &RadialSystem) -> Result<RadialSystem, RadialError> {
    let (h, mh) = (HalfInt::HALF, -HalfInt::HALF);
    if sys.dim() != 4 || sys.rows.len() != 4 {
        return Err(RadialError::Shape(format!("spin-1/2 system expected, got {}x{}", sys.rows.len(), sys.dim())));
    }
    let mut out_labels = Vec::new();
    let mut rows = Vec::new();
    let (mut d, mut a, mut b) = (CMat::zeros(2, 2), CMat::zeros(2, 2), CMat::zeros(2, 2));
    for (k, dotted) in [false, true].into_iter().enumerate() {
        let (Some(p), Some(q)) = (sys.unknown_index(dotted, h, h), sys.unknown_index(dotted, h, mh)) else {
            return Err(RadialError::Shape("missing spin-1/2 components".into()));
        };
        out_labels.push(sys.unknowns[p]);
        rows.push(sys.unknowns[p]);
        let (rp, rq) = (
            sys.rows.iter().position(|r| r.dotted == dotted && r.m == h),
            sys.rows.iter().position(|r| r.dotted == dotted && r.m == mh),
        );
        let (Some(rp), Some(rq)) = (rp, rq) else {
            return Err(RadialError::Shape("missing spin-1/2 rows".into()));
        };
        let sub = |m: &CMat, row: usize| m[(row, p)] - I * m[(row, q)];
        for (row, weight) in [(rp, 1.0), (rq, 2.0)] {
            let lead = sub(&sys.deriv, row);
            if lead.norm() == 0.0 {
                return Err(RadialError::Singular);
            }
            let f = weight / lead;
            d[(k, k)] += sub(&sys.deriv, row) * f;
            a[(k, k)] += sub(&sys.constant, row) * f;
            b[(k, k)] += sub(&sys.inverse_r, row) * f;
            for (j, u) in sys.unknowns.iter().enumerate() {
                if j != p
                    && j != q
                    && u.dotted == dotted
                    && (sys.deriv[(row, j)].norm() + sys.inverse_r[(row, j)].norm()) > 0.0
                {
                    return Err(RadialError::Shape(format!("row couples extra component {u}")));
                }
            }
        }
    }
    Ok(RadialSystem { unknowns: out_labels, rows, deriv: d, constant: a, inverse_r: b, meta: sys.meta })
}

/// Outcome of the Maxwell reduction: the reduced system and the residual of
/// the algebraic rows against the constraint f_{1,-1} = f_{1,1}.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxwellReduction {
    pub system: RadialSystem,
    pub dropped_rows: Vec<ComponentLabel>,
    pub constraint_residual: f64,
}

/// Sets the weight-0 components to zero, removes the rows that become
/// algebraic, and checks that those rows are proportional to
/// f_{1,1} - f_{1,-1}.
pub fn reduce_maxwell(sys: &RadialSystem) -> Result<MaxwellReduction, RadialError> {
    let (one, zero) = (HalfInt::ONE, HalfInt::ZERO);
    for dotted in [false, true] {
        for (l, m) in [(one, one), (one, zero), (one, -one), (zero, zero)] {
            if sys.unknown_index(dotted, l, m).is_none() {
                return Err(RadialError::Shape(format!("missing component ({l},{m})")));
            }
        }
    }
    let keep: Vec<usize> = (0..sys.dim()).filter(|&j| sys.unknowns[j].l != zero).collect();
    let cut = sys.select_columns(&keep);
    let mut algebraic = Vec::new();
    let mut residual: f64 = 0.0;
    for i in 0..cut.rows.len() {
        if (0..cut.dim()).all(|j| cut.deriv[(i, j)].norm() == 0.0) {
            let dotted = cut.rows[i].dotted;
            let p = cut.unknown_index(dotted, one, one).expect("checked");
            let q = cut.unknown_index(dotted, one, -one).expect("checked");
            for mat in [&cut.constant, &cut.inverse_r] {
                residual = residual.max((mat[(i, p)] + mat[(i, q)]).norm());
                for j in (0..cut.dim()).filter(|&j| j != p && j != q) {
                    residual = residual.max(mat[(i, j)].norm());
                }
            }
            algebraic.push(i);
        }
    }
    let kept_rows: Vec<usize> = (0..cut.rows.len()).filter(|i| !algebraic.contains(i)).collect();
    Ok(MaxwellReduction {
        dropped_rows: algebraic.iter().map(|&i| cut.rows[i]).collect(),
        system: cut.select_rows(&kept_rows).prune_trivial(),
        constraint_residual: residual,
    })
}

/// r -> C r^{-a} e^{b r}, the solution of f' + (a/r) f - b f = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerExp {
    pub a: C64,
    pub b: C64,
    pub scale: C64,
}

impl PowerExp {
    pub fn value(&self, r: f64) -> C64 {
        self.scale * (-self.a * r.ln()).exp() * (self.b * r).exp()
    }

    pub fn derivative(&self, r: f64) -> C64 {
        (self.b - self.a / r) * self.value(r)
    }
}

pub fn closed_form_power_exp(a: C64, b: C64, scale: C64) -> PowerExp {
    PowerExp { a, b, scale }
}

/// Sampled solution of a radial system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub labels: Vec<ComponentLabel>,
    pub r: Vec<f64>,
    pub values: Vec<Vec<C64>>,
}

impl RadialProfile {
    pub fn component(&self, k: usize) -> Vec<C64> {
        self.values.iter().map(|v| v[k]).collect()
    }

    pub fn last(&self) -> &[C64] {
        self.values.last().expect("profile has at least two points")
    }

    /// Five-point central derivative of every component at an interior grid index.
    pub fn stencil_derivative(&self, idx: usize) -> Result<Vec<C64>, RadialError> {
        if idx < 2 || idx + 2 >= self.r.len() {
            return Err(RadialError::Index(format!("grid index {idx} too close to the ends")));
        }
        let h = self.r[idx + 1] - self.r[idx];
        let v = &self.values;
        Ok((0..self.labels.len())
            .map(|k| (v[idx - 2][k] - v[idx - 1][k] * 8.0 + v[idx + 1][k] * 8.0 - v[idx + 2][k]) / (12.0 * h))
            .collect())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), RadialError> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["r".to_string()];
        for l in &self.labels {
            header.push(format!("re({l})"));
            header.push(format!("im({l})"));
        }
        out.write_record(&header)?;
        for (r, vals) in self.r.iter().zip(&self.values) {
            let mut rec = vec![format!("{r:.14e}")];
            for z in vals {
                rec.push(format!("{:.14e}", z.re));
                rec.push(format!("{:.14e}", z.im));
            }
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, RadialError> {
        Ok(serde_json::to_string(self)?)
    }
}

pub const MIN_STEPS: usize = 16;

fn rk4_step(m: &dyn Fn(f64) -> CMat, r: f64, h: f64, f: &nalgebra::DVector<C64>) -> nalgebra::DVector<C64> {
    let k1 = m(r) * f;
    let k2 = m(r + h / 2.0) * (f + &k1 * c(h / 2.0));
    let k3 = m(r + h / 2.0) * (f + &k2 * c(h / 2.0));
    let k4 = m(r + h) * (f + &k3 * c(h));
    f + (k1 + k2 * c(2.0) + k3 * c(2.0) + k4) * c(h / 6.0)
}

/// Classical fourth-order Runge-Kutta on a uniform grid from r0 to r1.
pub fn integrate(sys: &RadialSystem, f0: &[C64], r0: f64, r1: f64, steps: usize) -> Result<RadialProfile, RadialError> {
    if r0 <= 0.0 || !r0.is_finite() {
        return Err(RadialError::Domain(format!("start radius must be positive, got {r0}")));
    }
    if r1 <= r0 {
        return Err(RadialError::Domain(format!("end radius {r1} must exceed start radius {r0}")));
    }
    if steps < MIN_STEPS {
        return Err(RadialError::Domain(format!("at least {MIN_STEPS} steps required, got {steps}")));
    }
    if f0.len() != sys.dim() {
        return Err(RadialError::Shape(format!("{} initial values for {} unknowns", f0.len(), sys.dim())));
    }
    let ex = sys.explicit()?;
    let m = |r: f64| ex.matrix(r);
    let h = (r1 - r0) / steps as f64;
    let mut f = nalgebra::DVector::from_column_slice(f0);
    let mut r_grid = Vec::with_capacity(steps + 1);
    let mut values = Vec::with_capacity(steps + 1);
    r_grid.push(r0);
    values.push(f0.to_vec());
    for k in 0..steps {
        let r = r0 + k as f64 * h;
        f = rk4_step(&m, r, h, &f);
        r_grid.push(if k + 1 == steps { r1 } else { r0 + (k + 1) as f64 * h });
        values.push(f.iter().copied().collect());
    }
    Ok(RadialProfile { labels: sys.unknowns.clone(), r: r_grid, values })
}

/// Which Bessel series for the radial functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeriesKind {
    Dirac,
    Weyl,
    Maxwell,
}

/// Partial sums of a Bessel series with the size of every term.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesDiagnostics {
    pub kind: SeriesKind,
    pub weight: HalfInt,
    pub r: f64,
    pub kmax: usize,
    /// one value per radial function (Maxwell has two)
    pub values: Vec<C64>,
    pub term_norms: Vec<f64>,
    /// |t_k / t_{k-1}| for consecutive finite terms
    pub ratios: Vec<f64>,
    /// terms whose Gamma factor sits on a pole and were left out
    pub pole_terms: usize,
    pub growing: bool,
}

/// Evaluates the Bessel series truncated at `kmax`, term by term.
/// `weight` is the other half's weight that sets the order.
pub fn bessel_series(
    kind: SeriesKind,
    weight: HalfInt,
    r: f64,
    kmax: usize,
    kappa: C64,
) -> Result<SeriesDiagnostics, RadialError> {
    if r <= 0.0 {
        return Err(RadialError::Domain(format!("radius must be positive, got {r}")));
    }
    let one = HalfInt::ONE;
    let mut terms: Vec<Option<C64>> = Vec::with_capacity(kmax + 1);
    let mut values = Vec::new();
    match kind {
        SeriesKind::Dirac | SeriesKind::Weyl => {
            let nu = one - weight;
            let arg = match kind {
                SeriesKind::Dirac => kappa.sqrt() * 2.0 * r.cbrt(),
                _ => c(2.0 * r.cbrt()),
            };
            let bessel = bessel_j_series(nu, arg, DEFAULT_BESSEL_TERMS).value;
            let mut sum = c(0.0);
            for k in 0..=kmax {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let extra = if kind == SeriesKind::Weyl {
                    gamma_signed(HalfInt::from_int(k as i32 + 1)).ok()
                } else {
                    Some(1.0)
                };
                let g = gamma_signed(nu + HalfInt::from_int(k as i32 + 1)).ok();
                let t = match (extra, g) {
                    (Some(e), Some(g)) => Some(bessel * r.cbrt() * (sign * (4.0f64 / 3.0).powi(k as i32) * e * g)),
                    _ => None,
                };
                if let Some(t) = t {
                    sum += t;
                }
                terms.push(t);
            }
            values.push(sum);
        }
        SeriesKind::Maxwell => {
            let x = 2.0 * r.sqrt();
            let bessel = bessel_j_series(-weight, c(x), DEFAULT_BESSEL_TERMS).value;
            let w = weight.value();
            let norm = (2.0 * w * (w + 1.0)).sqrt();
            let (mut s11, mut s10) = (c(0.0), c(0.0));
            for k in 0..=kmax {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let g = gamma_signed(HalfInt::from_int(k as i32 + 1) - weight).ok();
                let base = g.map(|g| {
                    sign * 4f64.powi(k as i32) * gamma_signed(HalfInt::from_int(k as i32 + 1)).unwrap_or(f64::NAN) * g
                });
                let t = base.map(|b| bessel * (b * x.powf(w - 1.0)));
                if let (Some(b), Some(t)) = (base, t) {
                    s11 += t;
                    s10 += bessel * (b * (2.0 * k as f64 - 3.0) * x.powf(w) / norm);
                }
                terms.push(t);
            }
            values.push(s11);
            values.push(s10);
        }
    }
    let term_norms: Vec<f64> = terms.iter().map(|t| t.map_or(f64::NAN, |t| t.norm())).collect();
    let finite: Vec<f64> = term_norms.iter().copied().filter(|v| v.is_finite()).collect();
    let ratios: Vec<f64> = finite.windows(2).map(|w| if w[0] > 0.0 { w[1] / w[0] } else { f64::INFINITY }).collect();
    let growing = ratios.last().is_some_and(|&q| q >= 1.0);
    Ok(SeriesDiagnostics {
        kind,
        weight,
        r,
        kmax,
        values,
        pole_terms: terms.iter().filter(|t| t.is_none()).count(),
        term_norms,
        ratios,
        growing,
    })
}
