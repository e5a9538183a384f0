//! Binarions: the scalar ring `x + u·y` with `u² = σ`.
//!
//! `σ = −1` gives the complex numbers, `σ = +1` the hyperbolic (split-complex)
//! algebra **G**. Components are exact rationals; only the transcendental
//! operations ([`character`], [`polar`]) fall back to `f64`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Relative tolerance used by the floating backend.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back for huge numerators/denominators.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Rounds to 12 significant digits, the precision of printed reports.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float")
}

/// Exact binary value of a finite float.
pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::InvalidArgument(format!("non-finite value {x}")))
}

/// Square root of a nonnegative rational when it is itself rational.
pub fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Parses `"7"`, `"-3/2"` or a decimal such as `"0.95"` (kept exact).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::parse(0, format!("invalid rational `{t}`"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::parse(0, "zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !digits.chars().all(|c| c.is_ascii_digit())
            || (digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let joined = format!("{digits}{frac}");
        let n: BigInt = joined.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Ok(if negative { -r } else { r });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Signature of the imaginary unit: `u² = σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sigma {
    /// `σ = −1`, ordinary quantum mechanics.
    Complex,
    /// `σ = +1`, hyperbolic quantum mechanics.
    Hyperbolic,
}

impl Sigma {
    pub const BOTH: [Sigma; 2] = [Sigma::Complex, Sigma::Hyperbolic];

    pub fn value(self) -> i8 {
        match self {
            Sigma::Complex => -1,
            Sigma::Hyperbolic => 1,
        }
    }

    pub fn from_value(v: i64) -> Result<Self> {
        match v {
            -1 => Ok(Sigma::Complex),
            1 => Ok(Sigma::Hyperbolic),
            _ => Err(Error::InvalidArgument(format!(
                "sigma must be -1 or +1, got {v}"
            ))),
        }
    }

    /// Symbol used for the unit in text output.
    pub fn unit_char(self) -> char {
        match self {
            Sigma::Complex => 'i',
            Sigma::Hyperbolic => 'j',
        }
    }

    pub fn ensure(self, other: Sigma) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SignatureMismatch {
                left: self.value(),
                right: other.value(),
            })
        }
    }

    pub fn as_rational(self) -> Rational {
        int(self.value() as i64)
    }
}

impl From<Sigma> for i8 {
    fn from(s: Sigma) -> i8 {
        s.value()
    }
}

impl TryFrom<i8> for Sigma {
    type Error = Error;
    fn try_from(v: i8) -> Result<Self> {
        Sigma::from_value(v as i64)
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.value())
    }
}

impl FromStr for Sigma {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-1" | "complex" => Ok(Sigma::Complex),
            "+1" | "1" | "hyperbolic" => Ok(Sigma::Hyperbolic),
            other => Err(Error::InvalidArgument(format!("unknown sigma `{other}`"))),
        }
    }
}

/// Exact element `re + u·im` of the binarion ring for a fixed signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binarion {
    re: Rational,
    im: Rational,
    sigma: Sigma,
}

/// Position of a binarion relative to the light cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GClass {
    /// `|z|² > 0`, or any nonzero complex number.
    Invertible,
    /// `|z|² = 0` but `z ≠ 0`: a zero divisor of **G**.
    LightCone,
    /// `|z|² < 0`; only possible when `σ = +1`.
    NegativeModulus,
    Zero,
}

impl Binarion {
    pub fn new(re: Rational, im: Rational, sigma: Sigma) -> Self {
        Binarion { re, im, sigma }
    }

    pub fn from_ints(re: i64, im: i64, sigma: Sigma) -> Self {
        Binarion::new(int(re), int(im), sigma)
    }

    pub fn real(re: Rational, sigma: Sigma) -> Self {
        Binarion::new(re, Rational::zero(), sigma)
    }

    pub fn zero(sigma: Sigma) -> Self {
        Binarion::real(Rational::zero(), sigma)
    }

    pub fn one(sigma: Sigma) -> Self {
        Binarion::real(Rational::one(), sigma)
    }

    /// The unit `u` itself (`i` or `j`).
    pub fn unit(sigma: Sigma) -> Self {
        Binarion::new(Rational::zero(), Rational::one(), sigma)
    }

    /// `σ·u`, which equals `1/u`.
    pub fn unit_inverse(sigma: Sigma) -> Self {
        Binarion::new(Rational::zero(), sigma.as_rational(), sigma)
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn sigma(&self) -> Sigma {
        self.sigma
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Binarion::new(self.re.clone(), -self.im.clone(), self.sigma)
    }

    /// `|z|² = z·z̄ = x² − σy²`; negative values occur for `σ = +1`.
    pub fn modulus_sq(&self) -> Rational {
        &self.re * &self.re - self.sigma.as_rational() * &self.im * &self.im
    }

    /// `‖z‖² = x² + y²`.
    pub fn pos_norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn classify(&self) -> GClass {
        if self.is_zero() {
            return GClass::Zero;
        }
        let m = self.modulus_sq();
        if m.is_positive() {
            GClass::Invertible
        } else if m.is_zero() {
            GClass::LightCone
        } else if self.sigma == Sigma::Complex {
            unreachable!("complex modulus is a sum of squares")
        } else {
            GClass::NegativeModulus
        }
    }

    /// `1/z = z̄/|z|²`; fails exactly on the light cone (and at zero).
    pub fn invert(&self) -> Result<Self> {
        let m = self.modulus_sq();
        if m.is_zero() {
            return Err(Error::ZeroDivisor(if self.is_zero() {
                "cannot invert zero".to_string()
            } else {
                format!("{self} lies on the light cone |z|^2 = 0")
            }));
        }
        Ok(self.conj().scale(&m.recip()))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.sigma.ensure(other.sigma)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.sigma.ensure(other.sigma)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.sigma.ensure(other.sigma)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Binarion::new(&self.re * r, &self.im * r, self.sigma)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Binarion::one(self.sigma);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    fn neg_ref(&self) -> Self {
        Binarion::new(-self.re.clone(), -self.im.clone(), self.sigma)
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        Binarion::new(&self.re + &other.re, &self.im + &other.im, self.sigma)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let (a, b, c, d) = (&self.re, &self.im, &other.re, &other.im);
        let bd = b * d;
        let re = if self.sigma == Sigma::Hyperbolic {
            a * c + bd
        } else {
            a * c - bd
        };
        Binarion::new(re, a * d + b * c, self.sigma)
    }

    pub fn to_approx(&self) -> ApproxBinarion {
        ApproxBinarion::new(to_f64(&self.re), to_f64(&self.im), self.sigma)
    }

    /// Parses the text form, taking the signature from the unit letter when
    /// present and from `default` otherwise.
    pub fn parse(s: &str, default: Option<Sigma>) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (body, sigma) = match compact.chars().last() {
            Some('j') => (&compact[..compact.len() - 1], Some(Sigma::Hyperbolic)),
            Some('i') => (&compact[..compact.len() - 1], Some(Sigma::Complex)),
            _ => (compact.as_str(), None),
        };
        let sigma = match (sigma, default) {
            (Some(s), Some(d)) => {
                d.ensure(s)?;
                s
            }
            (Some(s), None) | (None, Some(s)) => s,
            (None, None) => {
                return Err(Error::parse(
                    0,
                    "binarion without unit needs an explicit sigma",
                ))
            }
        };
        if body.len() == compact.len() {
            return Ok(Binarion::real(parse_rational(body)?, sigma));
        }
        let body = body.trim_end_matches(['·', '*']);
        // Split at the last sign that follows a digit: "x+y", "x-y", "-x+-y".
        let bytes: Vec<(usize, char)> = body.char_indices().collect();
        let mut split = None;
        for w in bytes.windows(2).rev() {
            let (_, prev) = w[0];
            let (idx, c) = w[1];
            if (c == '+' || c == '-') && (prev.is_ascii_digit() || prev == '.') {
                split = Some(idx);
                break;
            }
        }
        let (re_part, im_part) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("0", body),
        };
        let im = match im_part {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other.trim_start_matches('+'))?,
        };
        Ok(Binarion::new(parse_rational(re_part)?, im, sigma))
    }
}

impl fmt::Display for Binarion {
    /// `x + y·j` with exact `num/den` components.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = self.sigma.unit_char();
        if self.im.is_negative() {
            write!(f, "{} - {}·{}", self.re, -self.im.clone(), u)
        } else {
            write!(f, "{} + {}·{}", self.re, self.im, u)
        }
    }
}

impl FromStr for Binarion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Binarion::parse(s, None)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Binarion> for &Binarion {
            type Output = Binarion;
            fn $m(self, rhs: &Binarion) -> Binarion {
                assert_eq!(self.sigma, rhs.sigma, "binarion signature mismatch");
                $body(self, rhs)
            }
        }
        impl $tr<Binarion> for Binarion {
            type Output = Binarion;
            fn $m(self, rhs: Binarion) -> Binarion {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Binarion> for Binarion {
            type Output = Binarion;
            fn $m(self, rhs: &Binarion) -> Binarion {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Binarion, b: &Binarion| a.add_unchecked(b));
binop!(Sub, sub, |a: &Binarion, b: &Binarion| a
    .add_unchecked(&b.neg_ref()));
binop!(Mul, mul, |a: &Binarion, b: &Binarion| a.mul_unchecked(b));

impl Neg for Binarion {
    type Output = Binarion;
    fn neg(self) -> Binarion {
        self.neg_ref()
    }
}

impl Neg for &Binarion {
    type Output = Binarion;
    fn neg(self) -> Binarion {
        self.neg_ref()
    }
}

/// Floating-point binarion, used where values are transcendental.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxBinarion {
    pub re: f64,
    pub im: f64,
    pub sigma: Sigma,
}

impl ApproxBinarion {
    pub fn new(re: f64, im: f64, sigma: Sigma) -> Self {
        ApproxBinarion { re, im, sigma }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let s = self.sigma.value() as f64;
        ApproxBinarion::new(
            self.re * other.re + s * self.im * other.im,
            self.re * other.im + self.im * other.re,
            self.sigma,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        ApproxBinarion::new(self.re + other.re, self.im + other.im, self.sigma)
    }

    pub fn scale(&self, k: f64) -> Self {
        ApproxBinarion::new(self.re * k, self.im * k, self.sigma)
    }

    pub fn modulus_sq(&self) -> f64 {
        self.re * self.re - self.sigma.value() as f64 * self.im * self.im
    }

    pub fn pos_norm(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = 1.0_f64.max(self.pos_norm()).max(other.pos_norm());
        (self.re - other.re).abs() <= tol * scale && (self.im - other.im).abs() <= tol * scale
    }
}

/// The additive character `e^{uθ}`: `cosh θ + j sinh θ` or `cos θ + i sin θ`.
pub fn character(theta: f64, sigma: Sigma) -> ApproxBinarion {
    match sigma {
        Sigma::Hyperbolic => ApproxBinarion::new(theta.cosh(), theta.sinh(), sigma),
        Sigma::Complex => ApproxBinarion::new(theta.cos(), theta.sin(), sigma),
    }
}

/// Hyperbolic polar form `z = sign·|z|·e^{jθ}` of an element of **G**₊*.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPolar {
    pub sign: i8,
    pub modulus: f64,
    pub theta: f64,
}

impl HPolar {
    pub fn reconstruct(&self) -> ApproxBinarion {
        character(self.theta, Sigma::Hyperbolic).scale(self.sign as f64 * self.modulus)
    }
}

pub fn polar(z: &Binarion) -> Result<HPolar> {
    if z.sigma() != Sigma::Hyperbolic {
        return Err(Error::NotRepresentable(
            "hyperbolic polar form needs sigma = +1".to_string(),
        ));
    }
    let m = z.modulus_sq();
    if !m.is_positive() {
        return Err(Error::NotRepresentable(format!(
            "{z} has |z|^2 = {m} <= 0, outside G+*"
        )));
    }
    // |z|² > 0 forces x ≠ 0 and |y/x| < 1.
    let ratio = z.im() / z.re();
    Ok(HPolar {
        sign: if z.re().is_positive() { 1 } else { -1 },
        modulus: to_f64(&m).sqrt(),
        theta: to_f64(&ratio).atanh(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const H: Sigma = Sigma::Hyperbolic;
    const C: Sigma = Sigma::Complex;

    fn b(re: i64, im: i64, s: Sigma) -> Binarion {
        Binarion::from_ints(re, im, s)
    }

    #[test]
    fn light_cone_product_vanishes() {
        assert!((b(1, 1, H) * b(1, -1, H)).is_zero());
        assert_eq!(b(1, 1, C) * b(1, -1, C), b(2, 0, C));
    }

    #[test]
    fn conjugation_and_moduli() {
        assert_eq!(b(3, 2, H).conj(), b(3, -2, H));
        assert_eq!(b(2, 1, H).modulus_sq(), int(3));
        assert_eq!(b(1, 1, H).modulus_sq(), int(0));
        assert_eq!(b(1, 1, H).pos_norm_sq(), int(2));
        assert_eq!(b(0, 1, H).modulus_sq(), int(-1));
        assert_eq!(b(0, 1, C).modulus_sq(), int(1));
    }

    #[test]
    fn inversion() {
        let z = b(2, 1, H);
        let inv = z.invert().unwrap();
        assert_eq!(inv, Binarion::new(rat(2, 3), rat(-1, 3), H));
        assert!((z * inv).is_one());
        assert_eq!(b(0, 1, H).invert().unwrap(), b(0, 1, H));
        match b(1, 1, H).invert() {
            Err(Error::ZeroDivisor(msg)) => assert!(msg.contains("light cone")),
            other => panic!("expected zero divisor, got {other:?}"),
        }
        assert!(b(0, 0, C).invert().is_err());
    }

    #[test]
    fn classification() {
        assert_eq!(b(2, 1, H).classify(), GClass::Invertible);
        assert_eq!(b(1, -1, H).classify(), GClass::LightCone);
        assert_eq!(b(1, 2, H).classify(), GClass::NegativeModulus);
        assert_eq!(b(0, 0, H).classify(), GClass::Zero);
        assert_eq!(b(0, 3, C).classify(), GClass::Invertible);
    }

    #[test]
    fn mismatched_signatures_rejected() {
        assert_eq!(
            b(1, 0, H).try_mul(&b(1, 0, C)),
            Err(Error::SignatureMismatch { left: 1, right: -1 })
        );
        assert!(b(1, 0, H).try_add(&b(1, 0, C)).is_err());
    }

    #[test]
    fn character_values() {
        let one = character(0.0, H);
        assert_eq!((one.re, one.im), (1.0, 0.0));
        let c1 = character(1.0, H);
        assert!((c1.re - 1.5430806348152437).abs() < 1e-15);
        assert!((c1.im - 1.1752011936438014).abs() < 1e-15);
        let prod = c1.mul(&character(-1.0, H));
        assert!(prod.approx_eq(&ApproxBinarion::new(1.0, 0.0, H), 1e-12));
    }

    #[test]
    fn polar_examples() {
        let p = polar(&b(1, 0, H)).unwrap();
        assert_eq!((p.sign, p.modulus, p.theta), (1, 1.0, 0.0));

        let p = polar(&b(2, 1, H)).unwrap();
        assert_eq!(p.sign, 1);
        assert!((p.modulus - 3f64.sqrt()).abs() < 1e-15);
        assert!((p.theta - 0.5f64.atanh()).abs() < 1e-15);

        // -e^{jθ0} at θ0 = artanh(3/5): cosh = 5/4, sinh = 3/4.
        let z = Binarion::new(rat(-5, 4), rat(-3, 4), H);
        let p = polar(&z).unwrap();
        assert_eq!(p.sign, -1);
        assert!((p.modulus - 1.0).abs() < 1e-15);
        assert!((p.theta - 0.6f64.atanh()).abs() < 1e-15);

        assert!(matches!(
            polar(&b(1, 1, H)),
            Err(Error::NotRepresentable(_))
        ));
        assert!(matches!(
            polar(&b(1, 2, H)),
            Err(Error::NotRepresentable(_))
        ));
    }

    #[test]
    fn text_round_trip() {
        let z = Binarion::new(rat(3, 2), rat(-1, 3), H);
        assert_eq!(z.to_string(), "3/2 - 1/3·j");
        assert_eq!(z.to_string().parse::<Binarion>().unwrap(), z);
        assert_eq!("2 + 1·i".parse::<Binarion>().unwrap(), b(2, 1, C));
        assert_eq!("-3 + -2*j".parse::<Binarion>().unwrap(), b(-3, -2, H));
        assert_eq!(Binarion::parse("j", None).unwrap(), b(0, 1, H));
        assert_eq!(Binarion::parse("-j", None).unwrap(), b(0, -1, H));
        assert_eq!(
            Binarion::parse("5/2", Some(C)).unwrap(),
            Binarion::real(rat(5, 2), C)
        );
        assert!(Binarion::parse("5", None).is_err());
        assert!(Binarion::parse("1 + j", Some(C)).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("0.95").unwrap(), rat(19, 20));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(" 7/21 ").unwrap(), rat(1, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(exact_sqrt(&rat(9, 400)), Some(rat(3, 20)));
        assert_eq!(exact_sqrt(&rat(2, 1)), None);
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
    }

    fn binarion(sigma: Sigma) -> impl Strategy<Value = Binarion> {
        (small_rational(), small_rational()).prop_map(move |(x, y)| Binarion::new(x, y, sigma))
    }

    fn any_sigma() -> impl Strategy<Value = Sigma> {
        prop_oneof![Just(C), Just(H)]
    }

    fn triple() -> impl Strategy<Value = (Binarion, Binarion, Binarion)> {
        any_sigma().prop_flat_map(|s| (binarion(s), binarion(s), binarion(s)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms((a, b, c) in triple()) {
            let s = a.sigma();
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &Binarion::one(s), a.clone());
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn involution_laws((a, b, _c) in triple()) {
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!(Binarion::real(a.modulus_sq(), a.sigma()), &a * &a.conj());
        }

        #[test]
        fn modulus_is_multiplicative((a, b, _c) in triple()) {
            prop_assert_eq!((&a * &b).modulus_sq(), a.modulus_sq() * b.modulus_sq());
            prop_assert!(!a.pos_norm_sq().is_negative());
        }

        #[test]
        fn classification_partitions((a, _b, _c) in triple()) {
            let tag = a.classify();
            let m = a.modulus_sq();
            let tags = [
                a.is_zero(),
                !a.is_zero() && m.is_zero(),
                m.is_negative(),
                !a.is_zero() && m.is_positive(),
            ];
            prop_assert_eq!(tags.iter().filter(|t| **t).count(), 1);
            if a.sigma() == C {
                prop_assert!(matches!(tag, GClass::Invertible | GClass::Zero));
            }
            if !m.is_zero() {
                prop_assert!((&a * &a.invert().unwrap()).is_one());
            } else {
                prop_assert!(a.invert().is_err());
            }
        }

        #[test]
        fn text_form_round_trips((a, _b, _c) in triple()) {
            prop_assert_eq!(a.to_string().parse::<Binarion>().unwrap(), a);
        }

        #[test]
        fn polar_reconstructs((x, y) in (1i64..40).prop_flat_map(|x| (Just(x), -(x - 1)..x)), neg in any::<bool>()) {
            let x = if neg { -x } else { x };
            let z = Binarion::from_ints(x, y, H);
            let back = polar(&z).unwrap().reconstruct();
            let zf = z.to_approx();
            let scale = zf.pos_norm();
            prop_assert!((back.re - zf.re).abs() <= 1e-12 * scale);
            prop_assert!((back.im - zf.im).abs() <= 1e-12 * scale);
        }

        #[test]
        fn character_group_law(t1 in -5.0f64..5.0, t2 in -5.0f64..5.0, s in any_sigma()) {
            let (c1, c2) = (character(t1, s), character(t2, s));
            let lhs = c1.mul(&c2);
            let rhs = character(t1 + t2, s);
            // Cancellation in the product is bounded by the factor norms.
            let tol = 1e-12 * c1.pos_norm() * c2.pos_norm();
            prop_assert!((lhs.re - rhs.re).abs() <= tol && (lhs.im - rhs.im).abs() <= tol);
            prop_assert!((character(t1, s).modulus_sq() - 1.0).abs() < 1e-9 * (2.0 * t1.abs()).exp());
        }
    }
}
