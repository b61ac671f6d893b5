//! Scalar fields used throughout the crate.
//!
//! Two arithmetic modes are supported. Exact mode works over the rationals
//! ([`Q`]) and Gaussian rationals ([`Cq`]); nothing is ever rounded and a
//! comparison with zero is a structural test. Floating mode works over `f64`
//! and [`C64`]; every comparison with zero goes through a tolerance.

use std::fmt::Debug;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

pub type Q = BigRational;
pub type Cq = Complex<BigRational>;
pub type C64 = Complex<f64>;

/// Default tolerance for algebraic residuals in floating mode.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Arithmetic mode of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

/// Zero test used by a check: structural in exact mode, `|x| <= eps` in
/// floating mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub mode: Mode,
    pub eps: f64,
}

impl Tolerance {
    pub fn exact() -> Self {
        Tolerance {
            mode: Mode::Exact,
            eps: 0.0,
        }
    }

    pub fn float(eps: f64) -> Self {
        Tolerance {
            mode: Mode::Float,
            eps,
        }
    }

    pub fn new(mode: Mode, eps: f64) -> Self {
        match mode {
            Mode::Exact => Tolerance { mode, eps: 0.0 },
            Mode::Float => Tolerance { mode, eps },
        }
    }

    pub fn is_exact(&self) -> bool {
        self.mode == Mode::Exact
    }

    /// Whether a residual counts as zero.
    pub fn accepts(&self, residual: f64) -> bool {
        match self.mode {
            Mode::Exact => residual == 0.0,
            Mode::Float => residual <= self.eps,
        }
    }
}

/// `|x|` as a float, never rounding a nonzero value down to zero.
pub fn magnitude<C: Field>(x: &C) -> f64 {
    if x.is_zero() {
        0.0
    } else {
        x.abs_f64().max(f64::MIN_POSITIVE)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::exact()
    }
}

pub trait Field:
    Clone + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static
{
    const EXACT: bool;

    fn from_q(q: &Q) -> Self;

    fn from_i64(v: i64) -> Self;

    fn from_f64(v: f64) -> Self;

    fn abs_f64(&self) -> f64;

    fn to_f64(&self) -> f64;

    /// Zero test: structural in exact mode, `|x| <= eps` in floating mode.
    fn is_negligible(&self, eps: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.abs_f64() <= eps
        }
    }

    /// Basis of the right kernel of `m`.
    fn nullspace(m: &Mat<Self>, eps: f64) -> Vec<Vec<Self>>;
}

pub trait ComplexField: Field {
    type Real: Field;

    fn from_cq(c: &Cq) -> Self;

    fn from_parts(re: Self::Real, im: Self::Real) -> Self;

    fn re(&self) -> Self::Real;

    fn im(&self) -> Self::Real;

    fn conj(&self) -> Self;

    fn i() -> Self;

    fn to_c64(&self) -> C64;

    fn from_real(re: Self::Real) -> Self {
        Self::from_parts(re, Self::Real::zero())
    }
}

impl Field for Q {
    const EXACT: bool = true;

    fn from_q(q: &Q) -> Self {
        q.clone()
    }

    fn from_i64(v: i64) -> Self {
        Q::from_integer(BigInt::from(v))
    }

    fn from_f64(v: f64) -> Self {
        Q::from_float(v).unwrap_or_else(Q::zero)
    }

    fn abs_f64(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn nullspace(m: &Mat<Self>, eps: f64) -> Vec<Vec<Self>> {
        linalg::nullspace_rref(m, eps)
    }
}

impl Field for f64 {
    const EXACT: bool = false;

    fn from_q(q: &Q) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn abs_f64(&self) -> f64 {
        self.abs()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn nullspace(m: &Mat<Self>, eps: f64) -> Vec<Vec<Self>> {
        linalg::nullspace_svd_real(m, eps)
    }
}

impl Field for Cq {
    const EXACT: bool = true;

    fn from_q(q: &Q) -> Self {
        Cq::new(q.clone(), Q::zero())
    }

    fn from_i64(v: i64) -> Self {
        Cq::new(Q::from_i64(v), Q::zero())
    }

    fn from_f64(v: f64) -> Self {
        Cq::new(Q::from_f64(v), Q::zero())
    }

    fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }

    fn to_f64(&self) -> f64 {
        Field::to_f64(&self.re)
    }

    fn nullspace(m: &Mat<Self>, eps: f64) -> Vec<Vec<Self>> {
        linalg::nullspace_rref(m, eps)
    }
}

impl Field for C64 {
    const EXACT: bool = false;

    fn from_q(q: &Q) -> Self {
        C64::new(<f64 as Field>::from_q(q), 0.0)
    }

    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }

    fn from_f64(v: f64) -> Self {
        C64::new(v, 0.0)
    }

    fn abs_f64(&self) -> f64 {
        self.norm()
    }

    fn to_f64(&self) -> f64 {
        self.re
    }

    fn nullspace(m: &Mat<Self>, eps: f64) -> Vec<Vec<Self>> {
        linalg::nullspace_svd_complex(m, eps)
    }
}

impl ComplexField for Cq {
    type Real = Q;

    fn from_cq(c: &Cq) -> Self {
        c.clone()
    }

    fn from_parts(re: Q, im: Q) -> Self {
        Cq::new(re, im)
    }

    fn re(&self) -> Q {
        self.re.clone()
    }

    fn im(&self) -> Q {
        self.im.clone()
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn i() -> Self {
        Cq::new(Q::zero(), Q::one())
    }

    fn to_c64(&self) -> C64 {
        C64::new(Field::to_f64(&self.re), Field::to_f64(&self.im))
    }
}

impl ComplexField for C64 {
    type Real = f64;

    fn from_cq(c: &Cq) -> Self {
        c.to_c64()
    }

    fn from_parts(re: f64, im: f64) -> Self {
        C64::new(re, im)
    }

    fn re(&self) -> f64 {
        self.re
    }

    fn im(&self) -> f64 {
        self.im
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn i() -> Self {
        C64::new(0.0, 1.0)
    }

    fn to_c64(&self) -> C64 {
        *self
    }
}

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn cq(re: Q, im: Q) -> Cq {
    Cq::new(re, im)
}

/// Gaussian rational from integer parts.
pub fn cqi(re: i64, im: i64) -> Cq {
    Cq::new(Q::from_i64(re), Q::from_i64(im))
}

/// Parse `"p/q"`, `"p"` or a finite decimal such as `"-0.25"` exactly.
pub fn parse_rational(s: &str) -> Result<Q> {
    let t = s.trim();
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let negative = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|e| Error::input(format!("bad decimal {s:?}: {e}")))?;
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        let v = Q::new(num, den);
        return Ok(if negative { -v } else { v });
    }
    let bad = |e: num_bigint::ParseBigIntError| Error::input(format!("bad rational {s:?}: {e}"));
    let (num, den) = t.split_once('/').unwrap_or((t, "1"));
    let num = BigInt::from_str(num.trim()).map_err(bad)?;
    let den = BigInt::from_str(den.trim()).map_err(bad)?;
    if den.is_zero() {
        return Err(Error::input(format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(num, den))
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Convert any complex scalar to the exact representation. Floats are
/// converted through their exact binary expansion.
pub fn to_cq<C: ComplexField>(c: &C) -> Cq {
    let z = c.to_c64();
    if C::EXACT {
        // Only Cq is exact; the round trip through f64 would lose precision.
        let any: &dyn std::any::Any = c;
        if let Some(v) = any.downcast_ref::<Cq>() {
            return v.clone();
        }
    }
    Cq::new(Q::from_f64(z.re), Q::from_f64(z.im))
}

/// Convert a real scalar to the exact representation.
pub fn to_q<R: Field>(r: &R) -> Q {
    let any: &dyn std::any::Any = r;
    if let Some(v) = any.downcast_ref::<Q>() {
        return v.clone();
    }
    Q::from_f64(r.to_f64())
}
