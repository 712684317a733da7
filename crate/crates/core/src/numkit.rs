//! Exact half-integer indices and the scalar special functions used by the
//! rest of the crate: Γ at integer and half-integer points, Pochhammer
//! symbols, terminating Gauss series and Bessel functions of half-integer
//! and integer order.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use twofloat::TwoFloat;

pub type C64 = Complex64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series does not terminate: neither upper parameter is a nonpositive integer")]
    NotTerminating,
    #[error("pole of the lower parameter reached at term {0}")]
    Pole(usize),
    #[error("index error: {0}")]
    Index(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseHalfIntError {
    #[error("empty half-integer literal")]
    Empty,
    #[error("malformed half-integer literal `{0}`")]
    Malformed(String),
    #[error("`{0}` is not an integer or half-integer (parity error)")]
    Parity(String),
}

/// A value in ½ℤ stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i32) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }

    /// Dimension 2l+1 of the weight-l representation.
    pub fn dim(self) -> usize {
        debug_assert!(self.twice >= 0);
        (self.twice + 1) as usize
    }

    /// `l, l-1, ..., -l`.
    pub fn descending(self) -> Vec<HalfInt> {
        (0..=self.twice).map(|k| HalfInt { twice: self.twice - 2 * k }).collect()
    }

    /// Row of `m` in the descending layout of weight `self`.
    pub fn row_of(self, m: HalfInt) -> Option<usize> {
        if self.contains(m) {
            Some(((self.twice - m.twice) / 2) as usize)
        } else {
            None
        }
    }

    /// `|m| <= l` and `l - m` integral.
    pub fn contains(self, m: HalfInt) -> bool {
        self.twice >= 0 && m.twice.abs() <= self.twice && (self.twice - m.twice) % 2 == 0
    }

    /// Integer value of a whole `HalfInt`.
    pub fn to_int(self) -> Option<i32> {
        if self.is_integer() {
            Some(self.twice / 2)
        } else {
            None
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl From<HalfInt> for String {
    fn from(h: HalfInt) -> String {
        h.to_string()
    }
}

impl TryFrom<String> for HalfInt {
    type Error = ParseHalfIntError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl FromStr for HalfInt {
    type Err = ParseHalfIntError;

    /// Accepts `3`, `-1/2`, `3/2`, `0.5`, `-2.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseHalfIntError::Empty);
        }
        let bad = || ParseHalfIntError::Malformed(s.to_string());
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            let den: i32 = den.trim().parse().map_err(|_| bad())?;
            return match den {
                1 => Ok(HalfInt::from_int(num)),
                2 => Ok(HalfInt::from_twice(num)),
                0 => Err(bad()),
                _ if num % den == 0 => Ok(HalfInt::from_int(num / den)),
                _ if (2 * num) % den == 0 => Ok(HalfInt::from_twice(2 * num / den)),
                _ => Err(ParseHalfIntError::Parity(s.to_string())),
            };
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: i32 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| bad())? };
        let frac = frac_part.trim_end_matches('0');
        let half = match frac {
            "" => 0,
            "5" => 1,
            _ => return Err(ParseHalfIntError::Parity(s.to_string())),
        };
        let twice = 2 * whole + half;
        Ok(HalfInt::from_twice(if neg { -twice } else { twice }))
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + o.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - o.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

/// Validates an (l, m) pair.
pub fn check_pair(l: HalfInt, m: HalfInt) -> Result<(), NumError> {
    if l.twice() < 0 {
        return Err(NumError::Index(format!("negative weight l = {l}")));
    }
    if !l.contains(m) {
        return Err(NumError::Index(format!("m = {m} is not a label of weight l = {l}")));
    }
    Ok(())
}

/// `sqrt((l+m)(l-m+1))`, the lowering coefficient of weight `l` at `m`.
pub fn ladder_alpha(l: HalfInt, m: HalfInt) -> f64 {
    let p = (l + m).value() * (l - m + HalfInt::ONE).value();
    if p <= 0.0 {
        0.0
    } else {
        p.sqrt()
    }
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Γ(a) for integer and half-integer `a`, including negative half-integers.
/// Nonpositive integers are poles.
pub fn gamma_signed(a: HalfInt) -> Result<f64, NumError> {
    if a.is_integer() && a.twice() <= 0 {
        return Err(NumError::Domain(format!("Γ has a pole at {a}")));
    }
    if a.twice() > 0 {
        return gamma_half(a);
    }
    // Γ(a) = Γ(a+1)/a walking up to a positive argument.
    let mut x = a;
    let mut denom = 1.0;
    while x.twice() <= 0 {
        denom *= x.value();
        x = x + HalfInt::ONE;
    }
    Ok(gamma_half(x)? / denom)
}

/// Γ(a) for positive integer or half-integer `a`.
pub fn gamma_half(a: HalfInt) -> Result<f64, NumError> {
    if a.twice() <= 0 {
        return Err(NumError::Domain(format!("Γ argument must be positive, got {a}")));
    }
    let v = if a.is_integer() {
        factorial((a.twice() / 2 - 1) as u32)
    } else {
        let k = (a.twice() - 1) / 2;
        (0..k).fold(std::f64::consts::PI.sqrt(), |acc, j| acc * (j as f64 + 0.5))
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(NumError::Domain(format!("Γ({a}) overflows double precision")))
    }
}

/// 1/Γ(a), zero at the poles.
pub fn rgamma_half(a: HalfInt) -> f64 {
    match gamma_signed(a) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

/// Rising factorial (a)_k.
pub fn pochhammer(a: C64, k: u32) -> C64 {
    (0..k).fold(C64::new(1.0, 0.0), |acc, j| acc * (a + j as f64))
}

fn nonpositive_integer(x: C64) -> Option<u64> {
    let r = x.re.round();
    if x.im.abs() < 1e-9 && (x.re - r).abs() < 1e-9 && r <= 0.0 {
        Some((-r) as u64)
    } else {
        None
    }
}

/// Finite Gauss series ₂F₁(a, b; c; z) when `a` or `b` is a nonpositive integer.
pub fn hyp2f1_terminating(a: C64, b: C64, c: C64, z: C64) -> Result<C64, NumError> {
    let order = match (nonpositive_integer(a), nonpositive_integer(b)) {
        (Some(p), Some(q)) => p.min(q),
        (Some(p), None) => p,
        (None, Some(q)) => q,
        (None, None) => return Err(NumError::NotTerminating),
    } as usize;
    let mut sum = C64::new(1.0, 0.0);
    let mut term = C64::new(1.0, 0.0);
    for k in 0..order {
        let ck = c + k as f64;
        if ck.norm() < 1e-12 {
            return Err(NumError::Pole(k));
        }
        term = term * (a + k as f64) * (b + k as f64) / (ck * (k as f64 + 1.0)) * z;
        sum += term;
    }
    Ok(sum)
}

/// J_{s+1/2}(z) from the finite trigonometric closed form.
pub fn bessel_j_half(s: u32, z: C64) -> Result<C64, NumError> {
    if z.norm() == 0.0 {
        return Err(NumError::Domain("half-integer Bessel closed form needs z != 0".into()));
    }
    if z.im == 0.0 && z.re > 0.0 {
        return Ok(C64::new(bessel_j_half_real(s, z.re), 0.0));
    }
    let sf = s as f64;
    let shift = z - sf * std::f64::consts::FRAC_PI_2;
    let two_z = 2.0 * z;
    let mut even = C64::new(0.0, 0.0);
    for k in 0..=(s / 2) {
        let coef = factorial(s + 2 * k) / (factorial(2 * k) * factorial(s - 2 * k));
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        even += sign * coef / two_z.powu(2 * k);
    }
    let mut odd = C64::new(0.0, 0.0);
    if s >= 1 {
        for k in 0..=((s - 1) / 2) {
            let coef = factorial(s + 2 * k + 1) / (factorial(2 * k + 1) * factorial(s - 2 * k - 1));
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            odd += sign * coef / two_z.powu(2 * k + 1);
        }
    }
    let pref = (2.0 / (std::f64::consts::PI * z)).sqrt();
    Ok(pref * (shift.sin() * even + shift.cos() * odd))
}

/// Real positive argument: the same closed form with the sums and the
/// trigonometric factors carried in double-double precision, since the two
/// sums cancel strongly for small z.
fn bessel_j_half_real(s: u32, x: f64) -> f64 {
    let (sin, cos) = TwoFloat::from(x).sin_cos();
    // sin and cos of x - s pi/2
    let (sin_shift, cos_shift) = match s % 4 {
        0 => (sin, cos),
        1 => (-cos, sin),
        2 => (-sin, -cos),
        _ => (cos, -sin),
    };
    let inv = TwoFloat::new_div(1.0, 2.0 * x);
    let mut powers = vec![TwoFloat::from(1.0)];
    for k in 1..=s as usize {
        let next = powers[k - 1] * inv;
        powers.push(next);
    }
    let mut even = TwoFloat::from(0.0);
    for k in 0..=(s / 2) {
        let coef = factorial(s + 2 * k) / (factorial(2 * k) * factorial(s - 2 * k));
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        even += powers[2 * k as usize] * (sign * coef);
    }
    let mut odd = TwoFloat::from(0.0);
    if s >= 1 {
        for k in 0..=((s - 1) / 2) {
            let coef = factorial(s + 2 * k + 1) / (factorial(2 * k + 1) * factorial(s - 2 * k - 1));
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            odd += powers[2 * k as usize + 1] * (sign * coef);
        }
    }
    let pref = (2.0 / (std::f64::consts::PI * x)).sqrt();
    pref * f64::from(sin_shift * even + cos_shift * odd)
}

/// A truncated series together with the size of its last retained term
/// and, once the terms decrease geometrically, a bound on the tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: C64,
    pub last_term: f64,
    pub tail_bound: Option<f64>,
}

pub const DEFAULT_BESSEL_TERMS: usize = 60;

/// Complex number with double-double parts, used to sum alternating
/// series whose terms are much larger than their sum.
#[derive(Debug, Clone, Copy)]
struct WideComplex {
    re: TwoFloat,
    im: TwoFloat,
}

impl WideComplex {
    fn one() -> Self {
        WideComplex { re: TwoFloat::from(1.0), im: TwoFloat::from(0.0) }
    }

    fn zero() -> Self {
        WideComplex { re: TwoFloat::from(0.0), im: TwoFloat::from(0.0) }
    }

    /// z^2 / 4 without rounding.
    fn quarter_square(z: C64) -> Self {
        let re = TwoFloat::new_mul(z.re, z.re) - TwoFloat::new_mul(z.im, z.im);
        let im = TwoFloat::new_mul(z.re, z.im) * 2.0;
        WideComplex { re: re * 0.25, im: im * 0.25 }
    }

    fn mul(self, o: Self) -> Self {
        WideComplex { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }

    fn scale(self, s: f64) -> Self {
        WideComplex { re: self.re * s, im: self.im * s }
    }

    fn divide(self, d: f64) -> Self {
        WideComplex { re: self.re / d, im: self.im / d }
    }

    fn add(self, o: Self) -> Self {
        WideComplex { re: self.re + o.re, im: self.im + o.im }
    }

    fn to_c64(self) -> C64 {
        C64::new(f64::from(self.re), f64::from(self.im))
    }
}

fn power_of_half_z(half_z: C64, power: f64) -> C64 {
    if half_z.norm() == 0.0 {
        if power == 0.0 {
            C64::new(1.0, 0.0)
        } else if power > 0.0 {
            C64::new(0.0, 0.0)
        } else {
            C64::new(f64::INFINITY, 0.0)
        }
    } else {
        half_z.powf(power)
    }
}

/// Ascending series Σ (-1)^k / (k! Γ(ν+k+1)) (z/2)^{ν+2k}; terms whose
/// Γ argument is a pole are zero. The sum is accumulated in double-double
/// precision relative to the first nonzero term.
pub fn bessel_j_series(nu: HalfInt, z: C64, kmax: usize) -> SeriesValue {
    let half_z = z / 2.0;
    let Some(k0) = (0..=kmax).find(|&k| rgamma_half(nu + HalfInt::from_int(k as i32 + 1)) != 0.0) else {
        return SeriesValue { value: C64::new(0.0, 0.0), last_term: 0.0, tail_bound: None };
    };
    let sign = if k0 % 2 == 0 { 1.0 } else { -1.0 };
    let lead = sign * rgamma_half(nu + HalfInt::from_int(k0 as i32 + 1)) / factorial(k0 as u32)
        * power_of_half_z(half_z, nu.value() + 2.0 * k0 as f64);
    let (value, last) = if half_z.norm() == 0.0 {
        (lead, if kmax == k0 { lead.norm() } else { 0.0 })
    } else {
        let step = WideComplex::quarter_square(z).scale(-1.0);
        let mut ratio = WideComplex::one();
        let mut sum = WideComplex::zero();
        for k in k0..=kmax {
            if k > k0 {
                ratio = ratio.mul(step).divide(k as f64 * (nu.value() + k as f64));
            }
            sum = sum.add(ratio);
        }
        (lead * sum.to_c64(), (lead * ratio.to_c64()).norm())
    };
    let k1 = kmax as f64 + 1.0;
    let q = half_z.norm_sqr() / (k1 * (k1 + nu.value()).abs().max(1e-300));
    let tail_bound = if q < 1.0 && (k1 + nu.value()) > 0.0 { Some(last * q / (1.0 - q)) } else { None };
    SeriesValue { value, last_term: last, tail_bound }
}
