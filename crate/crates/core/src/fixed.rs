//! Binary fixed-point reals with 256 fractional bits (about 77 decimal
//! digits), used for the complex embeddings of number-field elements.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const FRAC_BITS: u32 = 256;

/// A real number `raw / 2^FRAC_BITS`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fx {
    raw: BigInt,
}

impl Fx {
    pub fn zero() -> Self {
        Fx { raw: BigInt::zero() }
    }

    pub fn one() -> Self {
        Self::from_int(&BigInt::one())
    }

    pub fn from_int(n: &BigInt) -> Self {
        Fx { raw: n << FRAC_BITS }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_int(&BigInt::from(n))
    }

    /// Nearest fixed-point value to `num/den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Fx { raw: div_round(&(num << FRAC_BITS), den) }
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite());
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let mant = if exp == 0 { (bits & ((1 << 52) - 1)) << 1 } else { (bits & ((1 << 52) - 1)) | (1 << 52) };
        let shift = exp - 1075 + FRAC_BITS as i64;
        let m = BigInt::from(mant);
        let raw = if shift >= 0 { m << shift as usize } else { m >> (-shift) as usize };
        Fx { raw: if x < 0.0 { -raw } else { raw } }
    }

    pub fn to_f64(&self) -> f64 {
        // keep 64 significant bits before converting
        let bits = self.raw.bits() as i64;
        let drop = (bits - 64).max(0);
        let top = (&self.raw >> drop as usize).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi((drop - FRAC_BITS as i64) as i32)
    }

    pub fn raw(&self) -> &BigInt {
        &self.raw
    }

    pub fn abs(&self) -> Self {
        Fx { raw: self.raw.abs() }
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.raw.is_negative()
    }

    /// 2^-k
    pub fn epsilon_pow2(k: u32) -> Self {
        assert!(k <= FRAC_BITS);
        Fx { raw: BigInt::one() << (FRAC_BITS - k) as usize }
    }

    /// Square root by Newton iteration from an f64 seed.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of a negative number");
        if self.is_zero() {
            return Self::zero();
        }
        // raw_sqrt = isqrt(raw << FRAC_BITS)
        Fx { raw: (&self.raw << FRAC_BITS).sqrt() }
    }

    /// Nearest integer.
    pub fn round(&self) -> BigInt {
        div_round(&self.raw, &(BigInt::one() << FRAC_BITS))
    }
}

/// Nearest integer to n/d, ties away from zero.
fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    let (d, n) = if d.is_negative() { (-d, -n) } else { (d.clone(), n.clone()) };
    let half = &d >> 1usize;
    if n.is_negative() {
        -((-n + half).div_floor(&d))
    } else {
        (n + half).div_floor(&d)
    }
}

impl PartialOrd for Fx {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Fx {
    fn cmp(&self, o: &Self) -> Ordering {
        self.raw.cmp(&o.raw)
    }
}

impl<'a> Add<&'a Fx> for &'a Fx {
    type Output = Fx;
    fn add(self, o: &Fx) -> Fx {
        Fx { raw: &self.raw + &o.raw }
    }
}

impl<'a> Sub<&'a Fx> for &'a Fx {
    type Output = Fx;
    fn sub(self, o: &Fx) -> Fx {
        Fx { raw: &self.raw - &o.raw }
    }
}

impl<'a> Mul<&'a Fx> for &'a Fx {
    type Output = Fx;
    fn mul(self, o: &Fx) -> Fx {
        let p = &self.raw * &o.raw;
        Fx { raw: div_round(&p, &(BigInt::one() << FRAC_BITS)) }
    }
}

impl<'a> Div<&'a Fx> for &'a Fx {
    type Output = Fx;
    fn div(self, o: &Fx) -> Fx {
        assert!(!o.is_zero(), "fixed-point division by zero");
        Fx { raw: div_round(&(&self.raw << FRAC_BITS), &o.raw) }
    }
}

impl Neg for &Fx {
    type Output = Fx;
    fn neg(self) -> Fx {
        Fx { raw: -&self.raw }
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
owned_ops!(Fx);

/// Evaluate an integer polynomial (ascending coefficients) and its
/// derivative at `x`.
pub fn poly_eval_with_derivative(coeffs: &[BigInt], x: &Fx) -> (Fx, Fx) {
    let mut p = Fx::zero();
    let mut dp = Fx::zero();
    for c in coeffs.iter().rev() {
        dp = &(&dp * x) + &p;
        p = &(&p * x) + &Fx::from_int(c);
    }
    (p, dp)
}

/// Polish an approximate simple real root of an integer polynomial by
/// Newton's method until the step falls below 2^-(FRAC_BITS-8).
pub fn newton_root(coeffs: &[BigInt], seed: f64) -> Fx {
    let mut x = Fx::from_f64(seed);
    let tol = Fx::epsilon_pow2(FRAC_BITS - 8);
    for _ in 0..64 {
        let (p, dp) = poly_eval_with_derivative(coeffs, &x);
        if dp.is_zero() {
            break;
        }
        let step = &p / &dp;
        x = &x - &step;
        if step.abs() <= tol {
            break;
        }
    }
    x
}

/// High-precision complex number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cx {
    pub re: Fx,
    pub im: Fx,
}

impl Cx {
    pub fn new(re: Fx, im: Fx) -> Self {
        Cx { re, im }
    }

    pub fn zero() -> Self {
        Cx::new(Fx::zero(), Fx::zero())
    }

    pub fn real(re: Fx) -> Self {
        Cx::new(re, Fx::zero())
    }

    pub fn conj(&self) -> Self {
        Cx::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Fx {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn scale(&self, k: &Fx) -> Self {
        Cx::new(&self.re * k, &self.im * k)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl<'a> Add<&'a Cx> for &'a Cx {
    type Output = Cx;
    fn add(self, o: &Cx) -> Cx {
        Cx::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a Cx> for &'a Cx {
    type Output = Cx;
    fn sub(self, o: &Cx) -> Cx {
        Cx::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a Cx> for &'a Cx {
    type Output = Cx;
    fn mul(self, o: &Cx) -> Cx {
        Cx::new(
            &(&self.re * &o.re) - &(&self.im * &o.im),
            &(&self.re * &o.im) + &(&self.im * &o.re),
        )
    }
}

impl Neg for &Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx::new(-&self.re, -&self.im)
    }
}

owned_ops!(Cx);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_round_trip() {
        for x in [0.0, 1.0, -2.5, 1e-30, 3.141592653589793, -1e20, 0.1] {
            assert_eq!(Fx::from_f64(x).to_f64(), x);
        }
    }

    #[test]
    fn sqrt_two_squared() {
        let two = Fx::from_i64(2);
        let r = two.sqrt();
        let err = (&(&r * &r) - &two).abs();
        assert!(err <= Fx::epsilon_pow2(FRAC_BITS - 4));
        assert!((r.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn ratio_and_division() {
        let a = Fx::from_ratio(&BigInt::from(1), &BigInt::from(3));
        let b = &Fx::one() / &Fx::from_i64(3);
        assert!((&a - &b).abs() <= Fx::epsilon_pow2(FRAC_BITS - 1));
        assert_eq!(Fx::from_ratio(&BigInt::from(-7), &BigInt::from(2)).round(), BigInt::from(-4));
    }

    #[test]
    fn newton_golden_ratio() {
        let coeffs: Vec<BigInt> = [-1, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
        let phi = newton_root(&coeffs, 1.6);
        let (p, _) = poly_eval_with_derivative(&coeffs, &phi);
        assert!(p.abs() < Fx::epsilon_pow2(200));
        assert!((phi.to_f64() - 1.618033988749895).abs() < 1e-15);
    }

    #[test]
    fn complex_product() {
        let a = Cx::new(Fx::from_i64(1), Fx::from_i64(2));
        let b = Cx::new(Fx::from_i64(3), Fx::from_i64(-1));
        assert_eq!((&a * &b).to_c64(), Complex64::new(5.0, 5.0));
        assert_eq!(a.norm_sqr().to_f64(), 5.0);
    }
}
