//! Exact arithmetic in the Gaussian integers Z[i], the Eisenstein integers
//! Z[j] (j² + j + 1 = 0) and their fraction fields Q(i), Q(j).
//!
//! Elements are written `a + b·ω` with ω = i or ω = j. All integers are
//! arbitrary precision.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Which imaginary quadratic ring the coefficients live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingTag {
    /// Z[i], i² = -1.
    Gaussian,
    /// Z[j], j² + j + 1 = 0.
    Eisenstein,
}

impl RingTag {
    /// The adjoined generator ω as a complex number.
    pub fn omega(self) -> Complex64 {
        match self {
            RingTag::Gaussian => Complex64::new(0.0, 1.0),
            RingTag::Eisenstein => Complex64::new(-0.5, 3f64.sqrt() / 2.0),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            RingTag::Gaussian => 'i',
            RingTag::Eisenstein => 'j',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RingTag::Gaussian => "gaussian",
            RingTag::Eisenstein => "eisenstein",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "gaussian" => Some(RingTag::Gaussian),
            "eisenstein" => Some(RingTag::Eisenstein),
            _ => None,
        }
    }

    /// All units of the ring, in a fixed order starting with 1.
    pub fn units(self) -> Vec<QuadInt> {
        let u = |a: i64, b: i64| QuadInt::new(a, b, self);
        match self {
            RingTag::Gaussian => vec![u(1, 0), u(0, 1), u(-1, 0), u(0, -1)],
            // 1, -j², j, -1, j², -j  (counter-clockwise by 60°)
            RingTag::Eisenstein => {
                vec![u(1, 0), u(1, 1), u(0, 1), u(-1, 0), u(-1, -1), u(0, -1)]
            }
        }
    }

    /// Absolute value of the field discriminant (4 for Q(i), 3 for Q(j)).
    pub fn disc_abs(self) -> u64 {
        match self {
            RingTag::Gaussian => 4,
            RingTag::Eisenstein => 3,
        }
    }
}

/// `a + b·ω` with integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
    pub ring: RingTag,
}

impl QuadInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, ring: RingTag) -> Self {
        QuadInt { a: a.into(), b: b.into(), ring }
    }

    pub fn from_int(a: impl Into<BigInt>, ring: RingTag) -> Self {
        QuadInt { a: a.into(), b: BigInt::zero(), ring }
    }

    pub fn zero(ring: RingTag) -> Self {
        Self::new(0, 0, ring)
    }

    pub fn one(ring: RingTag) -> Self {
        Self::new(1, 0, ring)
    }

    /// The generator ω (i or j).
    pub fn omega(ring: RingTag) -> Self {
        Self::new(0, 1, ring)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// Field norm down to Q: a² + b² or a² − ab + b².
    pub fn norm(&self) -> BigInt {
        match self.ring {
            RingTag::Gaussian => &self.a * &self.a + &self.b * &self.b,
            RingTag::Eisenstein => &self.a * &self.a - &self.a * &self.b + &self.b * &self.b,
        }
    }

    /// Complex conjugation (i ↦ −i, j ↦ j²).
    pub fn conj(&self) -> Self {
        match self.ring {
            RingTag::Gaussian => QuadInt { a: self.a.clone(), b: -&self.b, ring: self.ring },
            RingTag::Eisenstein => QuadInt { a: &self.a - &self.b, b: -&self.b, ring: self.ring },
        }
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        QuadInt { a: &self.a * k, b: &self.b * k, ring: self.ring }
    }

    pub fn to_complex(&self) -> Complex64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        Complex64::new(a, 0.0) + self.ring.omega() * b
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring, other.ring));
        }
        Ok(())
    }

    /// Euclidean division `self = y·q + r` with `norm(r) < norm(y)`.
    ///
    /// The quotient rounds each coordinate of `self / y` (in the basis
    /// {1, ω}) to the nearest integer, ties toward zero.
    pub fn euclid_div(&self, y: &QuadInt) -> Result<(QuadInt, QuadInt)> {
        self.check_ring(y)?;
        if y.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = y.norm();
        let t = self * &y.conj();
        let q = QuadInt { a: round_div(&t.a, &n), b: round_div(&t.b, &n), ring: self.ring };
        let r = self - &(y * &q);
        debug_assert!(r.norm() < n);
        Ok((q, r))
    }

    /// `self mod m`, the Euclidean remainder.
    pub fn rem(&self, m: &QuadInt) -> Result<QuadInt> {
        Ok(self.euclid_div(m)?.1)
    }

    /// Exact quotient when `y` divides `self`.
    pub fn div_exact(&self, y: &QuadInt) -> Option<QuadInt> {
        let (q, r) = self.euclid_div(y).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, x: &QuadInt) -> bool {
        if self.is_zero() {
            return x.is_zero();
        }
        x.div_exact(self).is_some()
    }

    /// The associate with argument in [0, π/2) (Gaussian) or [0, π/3)
    /// (Eisenstein). Zero maps to zero.
    pub fn canonical_associate(&self) -> QuadInt {
        self.canonical_with_unit().0
    }

    /// Canonical associate together with the unit `u` with `u·self` canonical.
    pub fn canonical_with_unit(&self) -> (QuadInt, QuadInt) {
        if self.is_zero() {
            return (self.clone(), QuadInt::one(self.ring));
        }
        for u in self.ring.units() {
            let c = &u * self;
            if c.is_canonical() {
                return (c, u);
            }
        }
        unreachable!("every nonzero element has a canonical associate")
    }

    fn is_canonical(&self) -> bool {
        match self.ring {
            RingTag::Gaussian => self.a.is_positive() && !self.b.is_negative(),
            // arg(a + bj) ∈ [0, π/3)  ⟺  0 ≤ b < a
            RingTag::Eisenstein => !self.b.is_negative() && self.b < self.a,
        }
    }

    /// Render as e.g. `7-3j`.
    pub fn pretty(&self) -> String {
        let s = self.ring.symbol();
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => self.a.to_string(),
            (true, false) => coeff_str(&self.b, s),
            (false, false) => {
                let bpart = coeff_str(&self.b, s);
                if bpart.starts_with('-') {
                    format!("{}{}", self.a, bpart)
                } else {
                    format!("{}+{}", self.a, bpart)
                }
            }
        }
    }
}

fn coeff_str(b: &BigInt, s: char) -> String {
    if b.is_one() {
        s.to_string()
    } else if *b == -BigInt::one() {
        format!("-{s}")
    } else {
        format!("{b}{s}")
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// Nearest integer to n/d (d > 0), ties toward zero.
pub fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let two_d: BigInt = d * 2u32;
    debug_assert!(d.is_positive());
    let m: BigInt = (n.abs() * 2u32 + d - 1u32).div_floor(&two_d);
    if n.is_negative() {
        -m
    } else {
        m
    }
}

impl<'a> Add<&'a QuadInt> for &'a QuadInt {
    type Output = QuadInt;
    fn add(self, o: &QuadInt) -> QuadInt {
        assert_eq!(self.ring, o.ring, "ring mismatch");
        QuadInt { a: &self.a + &o.a, b: &self.b + &o.b, ring: self.ring }
    }
}

impl<'a> Sub<&'a QuadInt> for &'a QuadInt {
    type Output = QuadInt;
    fn sub(self, o: &QuadInt) -> QuadInt {
        assert_eq!(self.ring, o.ring, "ring mismatch");
        QuadInt { a: &self.a - &o.a, b: &self.b - &o.b, ring: self.ring }
    }
}

impl<'a> Mul<&'a QuadInt> for &'a QuadInt {
    type Output = QuadInt;
    fn mul(self, o: &QuadInt) -> QuadInt {
        assert_eq!(self.ring, o.ring, "ring mismatch");
        let ac = &self.a * &o.a;
        let bd = &self.b * &o.b;
        let ad_bc = &self.a * &o.b + &self.b * &o.a;
        match self.ring {
            RingTag::Gaussian => QuadInt { a: ac - bd, b: ad_bc, ring: self.ring },
            // j² = -1 - j
            RingTag::Eisenstein => QuadInt { a: ac - &bd, b: ad_bc - bd, ring: self.ring },
        }
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt { a: -&self.a, b: -&self.b, ring: self.ring }
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, o: &'a $t) -> $t {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(QuadInt, Add, add);
forward_owned!(QuadInt, Sub, sub);
forward_owned!(QuadInt, Mul, mul);

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        -&self
    }
}

/// Greatest common divisor, normalized to the canonical associate.
pub fn quad_gcd(x: &QuadInt, y: &QuadInt) -> Result<QuadInt> {
    Ok(ext_gcd(x, y)?.0)
}

/// Extended Euclid: returns `(g, s, t)` with `s·x + t·y = g`, `g` canonical.
pub fn ext_gcd(x: &QuadInt, y: &QuadInt) -> Result<(QuadInt, QuadInt, QuadInt)> {
    x.check_ring(y)?;
    let ring = x.ring;
    if x.is_zero() && y.is_zero() {
        return Err(Error::InvalidArgument("gcd(0, 0) is undefined".into()));
    }
    let (mut r0, mut r1) = (x.clone(), y.clone());
    let (mut s0, mut s1) = (QuadInt::one(ring), QuadInt::zero(ring));
    let (mut t0, mut t1) = (QuadInt::zero(ring), QuadInt::one(ring));
    while !r1.is_zero() {
        let (q, r) = r0.euclid_div(&r1)?;
        let s = &s0 - &(&q * &s1);
        let t = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let (g, u) = r0.canonical_with_unit();
    Ok((g, &u * &s0, &u * &t0))
}

/// Solve `y ≡ residues[k] (mod moduli[k])` for pairwise coprime moduli.
///
/// The answer is reduced modulo the product of the moduli with
/// [`QuadInt::euclid_div`], so it is a small representative of its class.
pub fn crt_solve(residues: &[QuadInt], moduli: &[QuadInt]) -> Result<QuadInt> {
    if residues.len() != moduli.len() || moduli.is_empty() {
        return Err(Error::InvalidArgument(
            "CRT needs one residue per modulus and at least one modulus".into(),
        ));
    }
    let ring = moduli[0].ring;
    for (r, m) in residues.iter().zip(moduli) {
        if r.ring != ring || m.ring != ring {
            return Err(Error::RingMismatch(ring, if r.ring != ring { r.ring } else { m.ring }));
        }
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
    }
    for i in 0..moduli.len() {
        for k in i + 1..moduli.len() {
            if !quad_gcd(&moduli[i], &moduli[k])?.is_one() {
                return Err(Error::NotCoprime(moduli[i].pretty(), moduli[k].pretty()));
            }
        }
    }
    let product = moduli.iter().skip(1).fold(moduli[0].clone(), |acc, m| &acc * m);
    let mut y = QuadInt::zero(ring);
    for (r, m) in residues.iter().zip(moduli) {
        let cofactor = product.div_exact(m).expect("modulus divides the product");
        let (g, s, _) = ext_gcd(&cofactor, m)?;
        debug_assert!(g.is_one());
        y = &y + &(&(r * &s) * &cofactor);
    }
    y.rem(&product)
}

/// `a/den` with `a ∈ O_F`, kept in lowest terms with `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadRat {
    num: QuadInt,
    den: BigInt,
}

impl QuadRat {
    pub fn new(num: QuadInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut q = QuadRat { num, den };
        q.normalize();
        Ok(q)
    }

    pub fn from_int(x: QuadInt) -> Self {
        QuadRat { num: x, den: BigInt::one() }
    }

    pub fn from_i64(a: i64, ring: RingTag) -> Self {
        Self::from_int(QuadInt::from_int(a, ring))
    }

    pub fn zero(ring: RingTag) -> Self {
        Self::from_int(QuadInt::zero(ring))
    }

    pub fn one(ring: RingTag) -> Self {
        Self::from_int(QuadInt::one(ring))
    }

    pub fn num(&self) -> &QuadInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn ring(&self) -> RingTag {
        self.num.ring
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            self.num = -&self.num;
        }
        if self.den.is_one() {
            return;
        }
        let g = self.num.a.gcd(&self.num.b).gcd(&self.den);
        if !g.is_one() && !g.is_zero() {
            self.num.a /= &g;
            self.num.b /= &g;
            self.den /= &g;
        }
        if self.num.is_zero() {
            self.den = BigInt::one();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn to_quad_int(&self) -> Option<QuadInt> {
        self.is_integral().then(|| self.num.clone())
    }

    /// True when the value lies in Q (no ω component).
    pub fn is_rational(&self) -> bool {
        self.num.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| BigRational::new(self.num.a.clone(), self.den.clone()))
    }

    pub fn conj(&self) -> Self {
        QuadRat { num: self.num.conj(), den: self.den.clone() }
    }

    /// Norm down to Q (= |x|²).
    pub fn norm(&self) -> BigRational {
        BigRational::new(self.num.norm(), &self.den * &self.den)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // 1/(a/d) = d·conj(a)/N(a)
        QuadRat::new(self.num.conj().scale(&self.den), self.num.norm())
    }

    pub fn div(&self, o: &QuadRat) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    /// Nearest element of O_F, coordinate-wise, ties toward zero (the
    /// rounding used by [`QuadInt::euclid_div`]).
    pub fn round(&self) -> QuadInt {
        QuadInt {
            a: round_div(&self.num.a, &self.den),
            b: round_div(&self.num.b, &self.den),
            ring: self.num.ring,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let d = self.den.to_f64().unwrap_or(f64::NAN);
        self.num.to_complex() / d
    }

    /// Text form `a,b` or `a,b/d` (value `(a + b·ω)/d`).
    pub fn to_token(&self) -> String {
        if self.den.is_one() {
            format!("{},{}", self.num.a, self.num.b)
        } else {
            format!("{},{}/{}", self.num.a, self.num.b, self.den)
        }
    }

    pub fn parse_token(tok: &str, ring: RingTag) -> Option<Self> {
        let (ab, den) = match tok.split_once('/') {
            Some((ab, d)) => (ab, d.parse::<BigInt>().ok()?),
            None => (tok, BigInt::one()),
        };
        let (a, b) = ab.split_once(',')?;
        let num = QuadInt::new(a.parse::<BigInt>().ok()?, b.parse::<BigInt>().ok()?, ring);
        QuadRat::new(num, den).ok()
    }
}

impl From<QuadInt> for QuadRat {
    fn from(x: QuadInt) -> Self {
        QuadRat::from_int(x)
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

impl<'a> Add<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn add(self, o: &QuadRat) -> QuadRat {
        let mut r = if self.den == o.den {
            QuadRat { num: &self.num + &o.num, den: self.den.clone() }
        } else {
            QuadRat {
                num: &self.num.scale(&o.den) + &o.num.scale(&self.den),
                den: &self.den * &o.den,
            }
        };
        r.normalize();
        r
    }
}

impl<'a> Sub<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn sub(self, o: &QuadRat) -> QuadRat {
        self + &(-o)
    }
}

impl<'a> Mul<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn mul(self, o: &QuadRat) -> QuadRat {
        let mut r = QuadRat { num: &self.num * &o.num, den: &self.den * &o.den };
        r.normalize();
        r
    }
}

impl Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat { num: -&self.num, den: self.den.clone() }
    }
}

forward_owned!(QuadRat, Add, add);
forward_owned!(QuadRat, Sub, sub);
forward_owned!(QuadRat, Mul, mul);

impl Neg for QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Rational-integer number theory
// ---------------------------------------------------------------------------

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc: u128 = 1 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Euler's criterion: `x` is a square in GF(p) iff x^((p-1)/2) = 1.
pub fn is_square_mod_p(x: i64, p: u64) -> Result<bool> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let r = x.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Err(Error::InvalidArgument(format!("{x} is divisible by {p}")));
    }
    Ok(pow_mod(r, (p - 1) / 2, p) == 1)
}

/// Write a prime p ≡ 1 (mod 4) as u² + v² with u ≥ v > 0.
///
/// Finds a square root x of −1 mod p, then gcd(p, x + i) over Z[i] is u + vi
/// up to a unit.
pub fn two_squares(p: u64) -> Result<(u64, u64)> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 4 != 1 {
        return Err(Error::NotSumOfTwoSquares(p));
    }
    let c = (2..p)
        .find(|&c| !is_square_mod_p(c as i64, p).unwrap_or(true))
        .ok_or(Error::NotSumOfTwoSquares(p))?;
    let x = pow_mod(c, (p - 1) / 4, p);
    let g = quad_gcd(
        &QuadInt::from_int(p, RingTag::Gaussian),
        &QuadInt::new(x, 1, RingTag::Gaussian),
    )?;
    let u = g.a.abs().to_u64().ok_or(Error::NotSumOfTwoSquares(p))?;
    let v = g.b.abs().to_u64().ok_or(Error::NotSumOfTwoSquares(p))?;
    let (u, v) = if u >= v { (u, v) } else { (v, u) };
    if u * u + v * v != p || v == 0 {
        return Err(Error::NotSumOfTwoSquares(p));
    }
    Ok((u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(a: i64, b: i64) -> QuadInt {
        QuadInt::new(a, b, RingTag::Gaussian)
    }
    fn e(a: i64, b: i64) -> QuadInt {
        QuadInt::new(a, b, RingTag::Eisenstein)
    }

    #[test]
    fn eisenstein_relation() {
        let j = QuadInt::omega(RingTag::Eisenstein);
        let j2 = &j * &j;
        assert_eq!(j2, e(-1, -1));
        assert!((&(&j2 + &j) + &e(1, 0)).is_zero());
        assert_eq!(&j2 * &j, e(1, 0));
    }

    #[test]
    fn conj_matches_complex() {
        for x in [g(3, -2), e(7, -3), e(-1, 5)] {
            let c = x.conj().to_complex();
            let d = x.to_complex().conj();
            assert!((c - d).norm() < 1e-12);
            assert_eq!(BigInt::from(((x.to_complex().norm_sqr()).round()) as i64), x.norm());
        }
    }

    #[test]
    fn euclid_seven_by_two_plus_i() {
        let (q, r) = g(7, 0).euclid_div(&g(2, 1)).unwrap();
        assert_eq!(&(&g(2, 1) * &q) + &r, g(7, 0));
        assert!(r.norm() < BigInt::from(5));
        // exhaustive oracle: the best remainder in a 3x3 neighborhood of q
        let best = (-1..=1)
            .flat_map(|da| (-1..=1).map(move |db| (da, db)))
            .map(|(da, db)| {
                let qq = &q + &g(da, db);
                (&g(7, 0) - &(&g(2, 1) * &qq)).norm()
            })
            .min()
            .unwrap();
        assert_eq!(r.norm(), best);
    }

    #[test]
    fn euclid_unit_divisor() {
        let x = e(12, -5);
        let (q, r) = x.euclid_div(&e(1, 0)).unwrap();
        assert_eq!(q, x);
        assert!(r.is_zero());
    }

    #[test]
    fn euclid_eisenstein_witness() {
        let y = e(-2, 1);
        assert_eq!(y.norm(), BigInt::from(7));
        let (q, r) = e(7, -3).euclid_div(&y).unwrap();
        assert_eq!(&(&y * &q) + &r, e(7, -3));
        assert!(r.norm() < BigInt::from(7));
    }

    #[test]
    fn division_by_zero() {
        assert!(matches!(g(1, 1).euclid_div(&g(0, 0)), Err(Error::DivisionByZero)));
    }

    #[test]
    fn round_ties_toward_zero() {
        let r = |n: i64, d: i64| round_div(&BigInt::from(n), &BigInt::from(d));
        assert_eq!(r(5, 2), BigInt::from(2));
        assert_eq!(r(-5, 2), BigInt::from(-2));
        assert_eq!(r(13, 5), BigInt::from(3));
        assert_eq!(r(12, 5), BigInt::from(2));
        assert_eq!(r(-13, 5), BigInt::from(-3));
        assert_eq!(r(6, 2), BigInt::from(3));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(quad_gcd(&g(-3, 4), &g(0, 0)).unwrap(), g(-3, 4).canonical_associate());
        assert!(quad_gcd(&g(2, 1), &g(2, -1)).unwrap().is_one());
        assert!(quad_gcd(&e(-2, 1), &e(3, 1)).unwrap().is_one());
        // 7 = -(j - 2)(j + 3)
        assert_eq!(&e(-2, 1) * &e(3, 1), e(-7, 0));
        let gg = quad_gcd(&g(5, 0), &g(2, 1)).unwrap();
        assert_eq!(gg, g(2, 1).canonical_associate());
    }

    #[test]
    fn canonical_associates() {
        assert_eq!(g(-2, 0).canonical_associate(), g(2, 0));
        assert_eq!(g(0, 3).canonical_associate(), g(3, 0));
        // 1 + j has argument π/3, so it rotates back to 1
        assert_eq!(e(1, 1).canonical_associate(), e(1, 0));
        let c = e(-2, 1).canonical_associate();
        assert!(c.b >= BigInt::zero() && c.b < c.a);
    }

    #[test]
    fn crt_witness_c1() {
        let j2 = e(-1, -1);
        let y = crt_solve(&[e(1, 0), j2], &[e(-2, 1), e(3, 1)]).unwrap();
        assert!((&y - &e(1, 0)).rem(&e(-2, 1)).unwrap().is_zero());
        assert!((&(&e(0, 1) * &y) - &e(1, 0)).rem(&e(3, 1)).unwrap().is_zero());
        // the published witness 7 - 3j is congruent modulo the product
        let diff = &y - &e(7, -3);
        assert!(diff.rem(&e(-7, 0)).unwrap().is_zero());
    }

    #[test]
    fn crt_single_modulus() {
        let y = crt_solve(&[g(17, 9)], &[g(3, 0)]).unwrap();
        assert_eq!(y, g(17, 9).rem(&g(3, 0)).unwrap());
    }

    #[test]
    fn crt_witness_d() {
        let m = [g(2, 1), g(-2, 1), g(3, 0)];
        let r = [g(1, 0), g(-1, 0), g(-1, 0)];
        let y = crt_solve(&r, &m).unwrap();
        let prod = &(&m[0] * &m[1]) * &m[2];
        assert!((&y - &g(-25, 12)).rem(&prod).unwrap().is_zero());
    }

    #[test]
    fn crt_rejects_common_factor() {
        let r = crt_solve(&[g(1, 0), g(0, 0)], &[g(2, 1), g(5, 0)]);
        assert!(matches!(r, Err(Error::NotCoprime(..))));
    }

    #[test]
    fn squares_mod_p() {
        assert!(is_square_mod_p(-1, 5).unwrap());
        assert!(is_square_mod_p(1, 13).unwrap());
        assert!(!is_square_mod_p(2, 5).unwrap());
        assert!(is_square_mod_p(3, 9).is_err());
        for p in (3u64..200).filter(|&p| is_prime(p)) {
            let squares: std::collections::HashSet<u64> = (1..p).map(|x| x * x % p).collect();
            for x in 1..p {
                assert_eq!(is_square_mod_p(x as i64, p).unwrap(), squares.contains(&x), "x={x} p={p}");
            }
        }
    }

    #[test]
    fn primality() {
        let slow = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..2000 {
            assert_eq!(is_prime(n), slow(n), "{n}");
        }
        assert!(is_prime(769) && is_prime(151) && is_prime(97) && is_prime(79));
    }

    #[test]
    fn two_squares_examples() {
        assert_eq!(two_squares(5).unwrap(), (2, 1));
        assert_eq!(two_squares(13).unwrap(), (3, 2));
        assert_eq!(two_squares(37).unwrap(), (6, 1));
        assert!(two_squares(7).is_err());
        assert!(two_squares(21).is_err());
        for p in (5u64..1000).filter(|&p| is_prime(p) && p % 4 == 1) {
            let (u, v) = two_squares(p).unwrap();
            // exhaustive oracle
            let brute = (1..p)
                .take_while(|u| u * u < p)
                .find_map(|v| {
                    let rest = p - v * v;
                    let u = (rest as f64).sqrt().round() as u64;
                    (u * u == rest && u >= v).then_some((u, v))
                })
                .unwrap();
            assert_eq!((u, v), brute, "p={p}");
        }
    }

    #[test]
    fn token_round_trip() {
        let q = QuadRat::new(e(3, -4), BigInt::from(-6)).unwrap();
        assert_eq!(q.den(), &BigInt::from(6));
        let t = q.to_token();
        assert_eq!(QuadRat::parse_token(&t, RingTag::Eisenstein).unwrap(), q);
    }

    fn arb_quad(ring: RingTag) -> impl Strategy<Value = QuadInt> {
        (-10_000i64..10_000, -10_000i64..10_000).prop_map(move |(a, b)| QuadInt::new(a, b, ring))
    }

    fn arb_ring() -> impl Strategy<Value = RingTag> {
        prop_oneof![Just(RingTag::Gaussian), Just(RingTag::Eisenstein)]
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative((x, y) in arb_ring().prop_flat_map(|r| (arb_quad(r), arb_quad(r)))) {
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        }

        #[test]
        fn division_contract((x, y) in arb_ring().prop_flat_map(|r| (arb_quad(r), arb_quad(r)))) {
            prop_assume!(!y.is_zero());
            let (q, r) = x.euclid_div(&y).unwrap();
            prop_assert_eq!(&(&y * &q) + &r, x);
            prop_assert!(r.norm() < y.norm());
        }

        #[test]
        fn gcd_divides_both((x, y) in arb_ring().prop_flat_map(|r| (arb_quad(r), arb_quad(r)))) {
            prop_assume!(!(x.is_zero() && y.is_zero()));
            let (d, s, t) = ext_gcd(&x, &y).unwrap();
            prop_assert!(d.divides(&x) && d.divides(&y));
            prop_assert_eq!(&(&s * &x) + &(&t * &y), d);
        }

        #[test]
        fn crt_round_trip(
            (ms, rs) in arb_ring().prop_flat_map(|r| (
                proptest::collection::vec(
                    (-30i64..30, -30i64..30).prop_map(move |(a, b)| QuadInt::new(a, b, r)), 3),
                proptest::collection::vec(arb_quad(r), 3),
            ))
        ) {
            let coprime = ms.iter().all(|m| !m.is_zero() && !m.is_unit())
                && (0..3).all(|a| (a + 1..3).all(|b| quad_gcd(&ms[a], &ms[b]).unwrap().is_one()));
            prop_assume!(coprime);
            let y = crt_solve(&rs, &ms).unwrap();
            for (r, m) in rs.iter().zip(&ms) {
                prop_assert!((&y - r).rem(m).unwrap().is_zero());
            }
        }
    }
}
