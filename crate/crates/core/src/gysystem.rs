//! Lambda-matrix systems of the generalized Gel'fand-Yaglom equations built
//! from coupling tables, their commutation and invariance checks, derived
//! V/U/G/W matrices, the bivector metric and the Gamma to Lambda conversion.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grouprep::{CMat, ComplexEulerAngles};
use crate::liealg::{build_operators, max_abs, Flavor, LieError, OperatorSet};
use crate::numkit::{HalfInt, C64, I};

#[derive(Debug, Error)]
pub enum GyError {
    #[error("malformed chain: {0}")]
    Chain(String),
    #[error("dimension mismatch: {0} against {1}")]
    Dimension(usize, usize),
    #[error("gamma matrices not in block form: {0}")]
    BlockForm(String),
    #[error("singular transformation matrix")]
    Singular,
    #[error("metric must be diagonal")]
    NonDiagonal,
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// One irreducible block of a chain; `tag` separates repeated weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainBlock {
    pub l: HalfInt,
    #[serde(default)]
    pub tag: u32,
}

/// Coefficient c between a row block and a column block (indices into `blocks`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub row: usize,
    pub col: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl Coupling {
    pub fn new(row: usize, col: usize, value: C64) -> Self {
        Coupling { row, col, re: value.re, im: value.im }
    }

    pub fn value(&self) -> C64 {
        C64::new(self.re, self.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainHalf {
    pub blocks: Vec<ChainBlock>,
    pub couplings: Vec<Coupling>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepChain {
    pub name: String,
    pub undotted: ChainHalf,
    pub dotted: ChainHalf,
}

/// Position of one basis vector xi^k_{l,m} in the stacked chain space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Slot {
    pub block: usize,
    pub l: HalfInt,
    pub m: HalfInt,
}

impl ChainHalf {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.l.dim()).sum()
    }

    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.blocks.len());
        let mut acc = 0;
        for b in &self.blocks {
            off.push(acc);
            acc += b.l.dim();
        }
        off
    }

    pub fn layout(&self) -> Vec<Slot> {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(k, b)| b.l.descending().into_iter().map(move |m| Slot { block: k, l: b.l, m }))
            .collect()
    }

    /// Row index of xi_{l,m} in block `block`.
    pub fn index_of(&self, block: usize, m: HalfInt) -> Option<usize> {
        let b = self.blocks.get(block)?;
        Some(self.offsets()[block] + b.l.row_of(m)?)
    }

    pub fn coupling(&self, row: usize, col: usize) -> C64 {
        self.couplings.iter().filter(|k| k.row == row && k.col == col).map(|k| k.value()).sum()
    }

    fn validate(&self) -> Result<(), GyError> {
        if self.blocks.is_empty() {
            return Err(GyError::Chain("no blocks".into()));
        }
        for b in &self.blocks {
            if b.l.twice() < 0 || b.l.twice() > 12 {
                return Err(GyError::Chain(format!("weight {} out of range", b.l)));
            }
        }
        for k in &self.couplings {
            let (Some(r), Some(cc)) = (self.blocks.get(k.row), self.blocks.get(k.col)) else {
                return Err(GyError::Chain(format!("coupling ({}, {}) refers to a missing block", k.row, k.col)));
            };
            let d = (r.l - cc.l).twice().abs();
            if d != 0 && d != 2 {
                return Err(GyError::Chain(format!("weights {} and {} cannot be coupled", r.l, cc.l)));
            }
        }
        Ok(())
    }

    /// Block-diagonal operators of this half.
    pub fn operators(&self, flavor: Flavor) -> Result<OperatorSet, GyError> {
        let sets = self.blocks.iter().map(|b| build_operators(b.l, flavor)).collect::<Result<Vec<_>, _>>()?;
        Ok(OperatorSet::block_diagonal(&sets))
    }
}

impl RepChain {
    pub fn from_json(text: &str) -> Result<Self, GyError> {
        let chain: RepChain = serde_json::from_str(text)?;
        chain.validate()?;
        Ok(chain)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("chain serializes")
    }

    pub fn validate(&self) -> Result<(), GyError> {
        self.undotted.validate()?;
        self.dotted.validate()
    }
}

fn single(l: HalfInt, value: C64) -> ChainHalf {
    ChainHalf { blocks: vec![ChainBlock { l, tag: 0 }], couplings: vec![Coupling::new(0, 0, value)] }
}

/// Spin-1/2 chain with unit coupling in both halves.
pub fn dirac_chain() -> RepChain {
    RepChain { name: "dirac".into(), undotted: single(HalfInt::HALF, c(1.0)), dotted: single(HalfInt::HALF, c(1.0)) }
}

/// Spin-1 chain: the weight-1 block coupled to itself and to a weight-0 block.
pub fn maxwell_chain() -> RepChain {
    let half = ChainHalf {
        blocks: vec![ChainBlock { l: HalfInt::ONE, tag: 0 }, ChainBlock { l: HalfInt::ZERO, tag: 0 }],
        couplings: vec![Coupling::new(0, 0, c(1.0)), Coupling::new(0, 1, c(1.0))],
    };
    RepChain { name: "maxwell".into(), undotted: half.clone(), dotted: half }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSystem {
    pub lambda: [CMat; 3],
    pub lambda_star: [CMat; 3],
    pub kappa: C64,
    pub kappa_dot: C64,
}

/// Which radical the dotted l-1 entries of the first two dotted tables use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DottedRadical {
    /// sqrt((l+m)(l+m-1)), mirroring the undotted table
    Mirrored,
    /// sqrt((l+m)(l-m-1))
    Shifted,
}

fn sqrt_nonneg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x.sqrt()
    }
}

/// Fill the three matrices of one half from its coupling table.
fn fill_half(half: &ChainHalf, radical: DottedRadical) -> [CMat; 3] {
    let d = half.dim();
    let mut out = [CMat::zeros(d, d), CMat::zeros(d, d), CMat::zeros(d, d)];
    let one = HalfInt::ONE;
    for k in &half.couplings {
        let cv = k.value();
        let (lp, l) = (half.blocks[k.row].l, half.blocks[k.col].l);
        let (lv, shift) = (l.value(), (lp - l).twice());
        for m in l.descending() {
            let mv = m.value();
            let col = half.index_of(k.col, m).expect("m in column block");
            let mut put = |mat: usize, mrow: HalfInt, val: C64| {
                if let Some(row) = half.index_of(k.row, mrow) {
                    out[mat][(row, col)] += val;
                }
            };
            // (lower, raise) radicals for the three coupling kinds
            let (lower, raise, diag, sl, sr) = match shift {
                -2 => {
                    let low = match radical {
                        DottedRadical::Mirrored => (lv + mv) * (lv + mv - 1.0),
                        DottedRadical::Shifted => (lv + mv) * (lv - mv - 1.0),
                    };
                    (
                        sqrt_nonneg(low),
                        sqrt_nonneg((lv - mv) * (lv - mv - 1.0)),
                        sqrt_nonneg(lv * lv - mv * mv),
                        -1.0,
                        1.0,
                    )
                }
                0 => (sqrt_nonneg((lv + mv) * (lv - mv + 1.0)), sqrt_nonneg((lv + mv + 1.0) * (lv - mv)), mv, 1.0, 1.0),
                _ => (
                    sqrt_nonneg((lv - mv + 1.0) * (lv - mv + 2.0)),
                    sqrt_nonneg((lv + mv + 1.0) * (lv + mv + 2.0)),
                    sqrt_nonneg((lv + 1.0).powi(2) - mv * mv),
                    1.0,
                    -1.0,
                ),
            };
            put(0, m - one, cv * sl * lower / 2.0);
            put(0, m + one, cv * sr * raise / 2.0);
            put(1, m - one, I * cv * sl * lower / 2.0);
            put(1, m + one, -I * cv * sr * raise / 2.0);
            put(2, m, cv * diag);
        }
    }
    out
}

/// Lambda matrices from the coupling tables. The dotted tables share the
/// structure of the undotted ones; `radical` selects the l-1 entry variant.
pub fn build_lambda(chain: &RepChain, radical: DottedRadical) -> Result<LambdaSystem, GyError> {
    chain.validate()?;
    Ok(LambdaSystem {
        lambda: fill_half(&chain.undotted, DottedRadical::Mirrored),
        lambda_star: fill_half(&chain.dotted, radical),
        kappa: c(0.0),
        kappa_dot: c(0.0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommutationReport {
    pub residual_max: f64,
    pub worst: String,
    pub relations: usize,
}

fn levi(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// The 36 brackets [A_i, L_j] = e_ijk L_k, [B_i, L_j] = i e_ijk L_k and their
/// dotted counterparts with the opposite sign.
type Half<'a> = (&'a [CMat; 3], &'a [CMat; 3], &'a [CMat; 3], f64, &'static str);

pub fn check_lambda_commutation(
    sys: &LambdaSystem,
    ops: &OperatorSet,
    dotted_ops: &OperatorSet,
) -> Result<CommutationReport, GyError> {
    let (d, dd) = (sys.lambda[0].nrows(), sys.lambda_star[0].nrows());
    if ops.dim() != d {
        return Err(GyError::Dimension(ops.dim(), d));
    }
    if dotted_ops.dim() != dd {
        return Err(GyError::Dimension(dotted_ops.dim(), dd));
    }
    let mut worst = (0.0, String::new());
    let mut count = 0;
    let halves: [Half; 2] =
        [(&ops.a, &ops.b, &sys.lambda, 1.0, ""), (&dotted_ops.a, &dotted_ops.b, &sys.lambda_star, -1.0, "*")];
    for (a, b, lam, sign, tag) in halves {
        for (gens, factor, gname) in [(a, c(1.0), "A"), (b, I, "B")] {
            for i in 0..3 {
                for j in 0..3 {
                    let lhs = &gens[i] * &lam[j] - &lam[j] * &gens[i];
                    let mut rhs = CMat::zeros(lam[j].nrows(), lam[j].ncols());
                    for k in 0..3 {
                        rhs += &lam[k] * (factor * sign * levi(i, j, k));
                    }
                    let r = max_abs(&(lhs - rhs));
                    count += 1;
                    if r > worst.0 || worst.1.is_empty() {
                        worst = (r, format!("[{gname}{}{tag},L{}{tag}]", i + 1, j + 1));
                    }
                }
            }
        }
    }
    Ok(CommutationReport { residual_max: worst.0, worst: worst.1, relations: count })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivedMatrices {
    pub v: CMat,
    pub u: CMat,
    pub g: CMat,
    pub w: CMat,
}

/// V = L1 B2 - L2 B1, U = L*1 A~2 - L*2 A~1, G = L1 A2 + L2 A1, W = L*1 B~2 + L*2 B~1.
pub fn derived_vugw(sys: &LambdaSystem, ops: &OperatorSet, dotted_ops: &OperatorSet) -> DerivedMatrices {
    let [l1, l2, _] = &sys.lambda;
    let [s1, s2, _] = &sys.lambda_star;
    DerivedMatrices {
        v: l1 * &ops.b[1] - l2 * &ops.b[0],
        u: s1 * &dotted_ops.a[1] - s2 * &dotted_ops.a[0],
        g: l1 * &ops.a[1] + l2 * &ops.a[0],
        w: s1 * &dotted_ops.b[1] + s2 * &dotted_ops.b[0],
    }
}

/// V and U written entry by entry from the coupling tables (diagonal in m).
pub fn tabulated_vu(chain: &RepChain) -> (CMat, CMat) {
    let table = |half: &ChainHalf, dotted: bool| {
        let d = half.dim();
        let mut out = CMat::zeros(d, d);
        for k in &half.couplings {
            let (lp, l) = (half.blocks[k.row].l, half.blocks[k.col].l);
            let lv = l.value();
            for m in l.descending() {
                let (Some(row), Some(col)) = (half.index_of(k.row, m), half.index_of(k.col, m)) else {
                    continue;
                };
                let mv = m.value();
                let base = match (lp - l).twice() {
                    -2 => (lv + 1.0) * sqrt_nonneg(lv * lv - mv * mv),
                    0 => mv,
                    _ => -lv * sqrt_nonneg((lv + 1.0).powi(2) - mv * mv),
                };
                out[(row, col)] += if dotted { -k.value() * base } else { I * k.value() * base };
            }
        }
        out
    };
    (table(&chain.undotted, false), table(&chain.dotted, true))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BivectorMetric {
    pub g: [[f64; 6]; 6],
    pub index_map: [(usize, usize); 6],
}

/// Collective index order 23, 10, 20, 30, 31, 12.
pub const BIVECTOR_PAIRS: [(usize, usize); 6] = [(2, 3), (1, 0), (2, 0), (3, 0), (3, 1), (1, 2)];

/// The six-dimensional metric diag(-1,-1,-1,1,1,1). Read in the (Re, Im)
/// ordering of C^3 it is preserved by every complex orthogonal map.
pub fn reference_bivector_metric() -> BivectorMetric {
    let mut g = [[0.0; 6]; 6];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = if i < 3 { -1.0 } else { 1.0 };
    }
    BivectorMetric { g, index_map: BIVECTOR_PAIRS }
}

/// g_{ab} = g_{ac} g_{bd} - g_{ad} g_{bc} over the fixed pair order.
pub fn bivector_metric(g: &[[f64; 4]; 4]) -> Result<BivectorMetric, GyError> {
    for (i, row) in g.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if i != j && v != 0.0 {
                return Err(GyError::NonDiagonal);
            }
        }
    }
    let mut out = [[0.0; 6]; 6];
    for (a, &(al, be)) in BIVECTOR_PAIRS.iter().enumerate() {
        for (b, &(ga, de)) in BIVECTOR_PAIRS.iter().enumerate() {
            out[a][b] = g[al][ga] * g[be][de] - g[al][de] * g[be][ga];
        }
    }
    Ok(BivectorMetric { g: out, index_map: BIVECTOR_PAIRS })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    /// max |T^{-1} L_i T - sum_k O_ik L_k| over both halves
    pub lambda_residual: f64,
    /// failure of the generators themselves to span their conjugates
    pub projection_residual: f64,
    /// max |L^T M L - M| for the 6x6 real form of the transformation
    pub metric_residual: f64,
}

fn euler_exponential(ops: &OperatorSet, a: &ComplexEulerAngles) -> CMat {
    let e = |m: &CMat, t: f64| (m * c(t)).exp();
    e(&ops.a[2], a.phi)
        * e(&ops.b[2], a.epsilon)
        * e(&ops.a[0], a.theta)
        * e(&ops.b[0], a.tau)
        * e(&ops.a[2], a.psi)
        * e(&ops.b[2], a.varep)
}

/// Representation matrix of the Euler-parametrized element generated by `ops`.
pub fn chain_transformation(ops: &OperatorSet, a: &ComplexEulerAngles) -> CMat {
    euler_exponential(ops, a)
}

fn trace_inner(p: &CMat, q: &CMat) -> C64 {
    (p.adjoint() * q).trace()
}

/// Coefficients O with X_i = sum_k O_ik basis_k (least squares).
fn project(basis: &[CMat; 3], targets: &[CMat; 3]) -> (nalgebra::Matrix3<C64>, f64) {
    let gram = nalgebra::Matrix3::from_fn(|j, k| trace_inner(&basis[j], &basis[k]));
    let inv = gram.try_inverse().unwrap_or_else(nalgebra::Matrix3::identity);
    let mut o = nalgebra::Matrix3::<C64>::zeros();
    let mut resid: f64 = 0.0;
    for i in 0..3 {
        let rhs = nalgebra::Vector3::from_fn(|j, _| trace_inner(&basis[j], &targets[i]));
        let coef = inv * rhs;
        let mut recon = CMat::zeros(targets[i].nrows(), targets[i].ncols());
        for k in 0..3 {
            o[(i, k)] = coef[k];
            recon += &basis[k] * coef[k];
        }
        resid = resid.max(max_abs(&(&targets[i] - recon)));
    }
    (o, resid)
}

fn metric_residual(o: &nalgebra::Matrix3<C64>, metric: &[[f64; 6]; 6]) -> f64 {
    let mut l = nalgebra::Matrix6::<f64>::zeros();
    for i in 0..3 {
        for k in 0..3 {
            l[(i, k)] = o[(i, k)].re;
            l[(i, k + 3)] = -o[(i, k)].im;
            l[(i + 3, k)] = o[(i, k)].im;
            l[(i + 3, k + 3)] = o[(i, k)].re;
        }
    }
    let m = nalgebra::Matrix6::from_fn(|i, j| metric[i][j]);
    (l.transpose() * m * l - m).abs().max()
}

/// Checks that each triple of Lambda matrices transforms like the generators
/// under the finite transformation with the given Euler parameters, and that
/// the induced transformation of C^3 = R^6 preserves the bivector metric.
pub fn invariance_check(
    sys: &LambdaSystem,
    ops: &OperatorSet,
    dotted_ops: &OperatorSet,
    angles: &ComplexEulerAngles,
    metric: &BivectorMetric,
) -> Result<InvarianceReport, GyError> {
    let mut report = InvarianceReport { lambda_residual: 0.0, projection_residual: 0.0, metric_residual: 0.0 };
    for (gens, lam) in [(ops, &sys.lambda), (dotted_ops, &sys.lambda_star)] {
        if gens.dim() != lam[0].nrows() {
            return Err(GyError::Dimension(gens.dim(), lam[0].nrows()));
        }
        let t = euler_exponential(gens, angles);
        let tinv = t.clone().try_inverse().ok_or(GyError::Singular)?;
        let conj: [CMat; 3] = std::array::from_fn(|i| &tinv * &gens.a[i] * &t);
        let (o, resid) = project(&gens.a, &conj);
        report.projection_residual = report.projection_residual.max(resid);
        for i in 0..3 {
            let lhs = &tinv * &lam[i] * &t;
            let mut rhs = CMat::zeros(lhs.nrows(), lhs.ncols());
            for k in 0..3 {
                rhs += &lam[k] * o[(i, k)];
            }
            report.lambda_residual = report.lambda_residual.max(max_abs(&(lhs - rhs)));
        }
        report.metric_residual = report.metric_residual.max(metric_residual(&o, &metric.g));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GammaCase {
    Even,
    Odd,
}

fn block(m: &CMat, r: usize, cc: usize, h: usize) -> CMat {
    m.view((r, cc), (h, h)).into_owned()
}

/// Lambda matrices from four Gamma matrices (index 0 first). In the even case
/// each Gamma must be block diagonal or block off-diagonal; the upper block
/// (or upper-right block) is the undotted factor, the lower one the dotted.
pub fn lambda_from_gamma(gammas: &[CMat; 4], case: GammaCase) -> Result<LambdaSystem, GyError> {
    let n = gammas[0].nrows();
    if gammas.iter().any(|g| g.nrows() != n || g.ncols() != n) {
        return Err(GyError::BlockForm("gamma matrices differ in size".into()));
    }
    match case {
        GammaCase::Odd => Ok(LambdaSystem {
            lambda: std::array::from_fn(|k| &gammas[k + 1] * &gammas[0]),
            lambda_star: [&gammas[2] * &gammas[3], &gammas[3] * &gammas[1], &gammas[1] * &gammas[2]],
            kappa: c(0.0),
            kappa_dot: c(0.0),
        }),
        GammaCase::Even => {
            if !n.is_multiple_of(2) {
                return Err(GyError::BlockForm("odd dimension in the even case".into()));
            }
            let h = n / 2;
            let tiny = |m: &CMat| max_abs(m) < 1e-14;
            let mut upper = Vec::with_capacity(4);
            let mut lower = Vec::with_capacity(4);
            for (i, g) in gammas.iter().enumerate() {
                let (ul, ur, ll, lr) = (block(g, 0, 0, h), block(g, 0, h, h), block(g, h, 0, h), block(g, h, h, h));
                if tiny(&ur) && tiny(&ll) {
                    upper.push(ul);
                    lower.push(lr);
                } else if tiny(&ul) && tiny(&lr) {
                    upper.push(ur);
                    lower.push(ll);
                } else {
                    return Err(GyError::BlockForm(format!("gamma {i} mixes diagonal and off-diagonal blocks")));
                }
            }
            Ok(LambdaSystem {
                lambda: std::array::from_fn(|k| &upper[k + 1] * &upper[0]),
                lambda_star: [&lower[2] * &lower[3], &lower[3] * &lower[1], &lower[1] * &lower[2]],
                kappa: c(0.0),
                kappa_dot: c(0.0),
            })
        }
    }
}

fn m2(a: [[C64; 2]; 2]) -> CMat {
    CMat::from_fn(2, 2, |i, j| a[i][j])
}

fn m3(a: [[C64; 3]; 3]) -> CMat {
    CMat::from_fn(3, 3, |i, j| a[i][j])
}

pub fn pauli() -> [CMat; 4] {
    let (o, z) = (c(1.0), c(0.0));
    [m2([[o, z], [z, o]]), m2([[z, o], [o, z]]), m2([[z, -I], [I, z]]), m2([[o, z], [z, -o]])]
}

/// Dirac matrices in the Weyl basis, index 0 first.
pub fn dirac_gammas() -> [CMat; 4] {
    let s = pauli();
    std::array::from_fn(|k| {
        let mut g = CMat::zeros(4, 4);
        if k == 0 {
            g.view_mut((0, 0), (2, 2)).copy_from(&s[0]);
            g.view_mut((2, 2), (2, 2)).copy_from(&(-&s[0]));
        } else {
            g.view_mut((0, 2), (2, 2)).copy_from(&s[k]);
            g.view_mut((2, 0), (2, 2)).copy_from(&(-&s[k]));
        }
        g
    })
}

/// The explicit spin-1/2 Lambda matrices (Pauli matrices and their dotted partners).
pub fn dirac_lambda_literal() -> LambdaSystem {
    let s = pauli();
    LambdaSystem {
        lambda: [s[1].clone(), s[2].clone(), s[3].clone()],
        lambda_star: [&s[1] * I, &s[2] * I, &s[3] * I],
        kappa: c(0.0),
        kappa_dot: c(0.0),
    }
}

/// Photon spin matrices (alpha_k)_{jl} = i e_{kjl}.
pub fn maxwell_alpha() -> [CMat; 3] {
    std::array::from_fn(|k| CMat::from_fn(3, 3, |j, l| I * levi(k, j, l)))
}

/// The explicit Cartesian spin-1 Lambda matrices.
pub fn maxwell_lambda_literal() -> LambdaSystem {
    let alpha = maxwell_alpha();
    LambdaSystem {
        lambda_star: std::array::from_fn(|k| &alpha[k] * I),
        lambda: alpha,
        kappa: c(0.0),
        kappa_dot: c(0.0),
    }
}

/// Cartesian operators of the weight-1 representation and of its conjugate.
pub fn maxwell_operators_literal() -> (OperatorSet, OperatorSet) {
    let z = c(0.0);
    let o = c(1.0);
    let a = [
        m3([[z, z, z], [z, z, -o], [z, o, z]]),
        m3([[z, z, o], [z, z, z], [-o, z, z]]),
        m3([[z, -o, z], [o, z, z], [z, z, z]]),
    ];
    let b = a.clone().map(|m| m * I);
    let at = a.clone().map(|m| -m);
    let bt = b.clone().map(|m| -m);
    (
        OperatorSet::from_matrices(HalfInt::ONE, Flavor::Plain, a, b),
        OperatorSet::from_matrices(HalfInt::ONE, Flavor::Tilde, at, bt),
    )
}

/// Fundamental operators paired with the explicit Pauli system. The Pauli
/// matrices commute correctly with the descending basis only.
pub fn dirac_operators_literal() -> (OperatorSet, OperatorSet) {
    let plain = build_operators(HalfInt::HALF, Flavor::Plain).expect("fundamental");
    let tilde = build_operators(HalfInt::HALF, Flavor::Tilde).expect("fundamental");
    (plain, tilde)
}
