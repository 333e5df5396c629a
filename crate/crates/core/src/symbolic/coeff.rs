//! Exact scalars in the field Q(√2)(i).
//!
//! Every coefficient produced by substituting Φ = (a + a⁺)/√2 and
//! Π = (a − a⁺)/(i√2) into a rational polynomial lives in this field, so
//! symbolic results can be compared for exact equality and printed
//! byte-for-byte.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A real number `rat + sqrt2 * √2` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QSqrt2 {
    pub rat: BigRational,
    pub sqrt2: BigRational,
}

impl QSqrt2 {
    pub fn new(rat: BigRational, sqrt2: BigRational) -> Self {
        Self { rat, sqrt2 }
    }

    pub fn from_rational(rat: BigRational) -> Self {
        Self { rat, sqrt2: BigRational::zero() }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self { rat: BigRational::zero(), sqrt2: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.sqrt2.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.rat) + ratio_to_f64(&self.sqrt2) * std::f64::consts::SQRT_2
    }

    /// `rat² − 2·sqrt2²`, the field norm down to Q.
    fn field_norm(&self) -> BigRational {
        &self.rat * &self.rat - BigRational::from_integer(BigInt::from(2)) * &self.sqrt2 * &self.sqrt2
    }

    fn conj_sqrt2(&self) -> Self {
        Self { rat: self.rat.clone(), sqrt2: -self.sqrt2.clone() }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.field_norm();
        let c = self.conj_sqrt2();
        Some(Self { rat: c.rat / &n, sqrt2: c.sqrt2 / n })
    }
}

impl Add for &QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2 { rat: &self.rat + &rhs.rat, sqrt2: &self.sqrt2 + &rhs.sqrt2 }
    }
}

impl Sub for &QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2 { rat: &self.rat - &rhs.rat, sqrt2: &self.sqrt2 - &rhs.sqrt2 }
    }
}

impl Mul for &QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: &QSqrt2) -> QSqrt2 {
        let two = BigRational::from_integer(BigInt::from(2));
        QSqrt2 {
            rat: &self.rat * &rhs.rat + two * &self.sqrt2 * &rhs.sqrt2,
            sqrt2: &self.rat * &rhs.sqrt2 + &self.sqrt2 * &rhs.rat,
        }
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 { rat: -self.rat.clone(), sqrt2: -self.sqrt2.clone() }
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Huge numerator/denominator: scale both down before dividing.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// An exact complex scalar `re + i·im` with `re, im ∈ Q(√2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exact {
    pub re: QSqrt2,
    pub im: QSqrt2,
}

impl Default for Exact {
    fn default() -> Self {
        Self::zero()
    }
}

impl Exact {
    pub fn zero() -> Self {
        Self { re: QSqrt2::zero(), im: QSqrt2::zero() }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn i() -> Self {
        Self { re: QSqrt2::zero(), im: QSqrt2::from_integer(1) }
    }

    /// √2.
    pub fn sqrt2() -> Self {
        Self {
            re: QSqrt2::new(BigRational::zero(), BigRational::one()),
            im: QSqrt2::zero(),
        }
    }

    /// 1/√2 = √2/2.
    pub fn inv_sqrt2() -> Self {
        Self {
            re: QSqrt2::new(BigRational::zero(), rational(1, 2)),
            im: QSqrt2::zero(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self { re: QSqrt2::from_integer(n), im: QSqrt2::zero() }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self { re: QSqrt2::from_rational(r), im: QSqrt2::zero() }
    }

    /// `num/den` as a real exact scalar. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(rational(num, den))
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        Self { re: QSqrt2::from_rational(re), im: QSqrt2::from_rational(im) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn inverse(&self) -> Option<Self> {
        // 1/(x + iy) = (x − iy)/(x² + y²), with x² + y² ∈ Q(√2).
        let norm = &(&self.re * &self.re) + &(&self.im * &self.im);
        let inv = norm.inverse()?;
        Some(Self { re: &self.re * &inv, im: -&(&self.im * &inv) })
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self * &Self::from_integer(n)
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Add for &Exact {
    type Output = Exact;
    fn add(self, rhs: &Exact) -> Exact {
        Exact { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(self, rhs: Exact) -> Exact {
        &self + &rhs
    }
}

impl Sub for &Exact {
    type Output = Exact;
    fn sub(self, rhs: &Exact) -> Exact {
        Exact { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Sub for Exact {
    type Output = Exact;
    fn sub(self, rhs: Exact) -> Exact {
        &self - &rhs
    }
}

impl Mul for &Exact {
    type Output = Exact;
    fn mul(self, rhs: &Exact) -> Exact {
        Exact {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Mul for Exact {
    type Output = Exact;
    fn mul(self, rhs: Exact) -> Exact {
        &self * &rhs
    }
}

impl Div for &Exact {
    type Output = Option<Exact>;
    fn div(self, rhs: &Exact) -> Option<Exact> {
        rhs.inverse().map(|inv| self * &inv)
    }
}

impl Neg for &Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact { re: -&self.re, im: -&self.im }
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        -&self
    }
}

impl AddAssign<&Exact> for Exact {
    fn add_assign(&mut self, rhs: &Exact) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Exact> for Exact {
    fn sub_assign(&mut self, rhs: &Exact) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Exact> for Exact {
    fn mul_assign(&mut self, rhs: &Exact) {
        *self = &*self * rhs;
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

fn write_signed(f: &mut fmt::Formatter<'_>, r: &BigRational, suffix: &str) -> fmt::Result {
    f.write_str(if r.is_negative() { "-" } else { "+" })?;
    write_rational(f, &r.abs())?;
    f.write_str(suffix)
}

/// Canonical text form: `(re + re√2 + im·i + im√2·i)` written as
/// `(1+0i)`, `(0+1/2r2+0i)`, `(-3/4+1/2i-1r2i)`. The rational real and
/// rational imaginary parts are always present; the `r2` parts appear only
/// when nonzero.
impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        if self.re.rat.is_negative() {
            f.write_str("-")?;
        }
        write_rational(f, &self.re.rat.abs())?;
        if !self.re.sqrt2.is_zero() {
            write_signed(f, &self.re.sqrt2, "r2")?;
        }
        write_signed(f, &self.im.rat, "i")?;
        if !self.im.sqrt2.is_zero() {
            write_signed(f, &self.im.sqrt2, "r2i")?;
        }
        f.write_str(")")
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Structural order (not numeric); only used to make containers deterministic.
impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rat.cmp(&other.rat).then_with(|| self.sqrt2.cmp(&other.sqrt2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_squares_to_two() {
        let s = Exact::sqrt2();
        assert_eq!(&s * &s, Exact::from_integer(2));
        assert_eq!(&Exact::inv_sqrt2() * &Exact::sqrt2(), Exact::one());
    }

    #[test]
    fn i_squares_to_minus_one() {
        assert_eq!(&Exact::i() * &Exact::i(), Exact::from_integer(-1));
    }

    #[test]
    fn inverse_round_trips() {
        let x = &(&Exact::ratio(3, 7) + &Exact::sqrt2()) + &(&Exact::i() * &Exact::ratio(-2, 5));
        let inv = x.inverse().unwrap();
        assert_eq!(&x * &inv, Exact::one());
        assert!(Exact::zero().inverse().is_none());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Exact::one().to_string(), "(1+0i)");
        assert_eq!(Exact::inv_sqrt2().to_string(), "(0+1/2r2+0i)");
        let x = &Exact::ratio(-3, 4) + &(&Exact::i() * &(&Exact::ratio(1, 2) - &Exact::sqrt2()));
        assert_eq!(x.to_string(), "(-3/4+1/2i-1r2i)");
    }

    #[test]
    fn to_complex_matches_float() {
        let x = &Exact::inv_sqrt2() + &Exact::i();
        let c = x.to_complex();
        assert!((c.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((c.im - 1.0).abs() < 1e-15);
    }
}
