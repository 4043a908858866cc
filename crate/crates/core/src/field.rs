//! Cyclic extensions K = F(θ) of F = Q(i) or Q(j), with θ totally real.
//!
//! Elements are stored as integer-coefficient vectors over O_F in the power
//! basis {1, θ, …, θ^{n−1}} with one shared positive denominator. The
//! Galois generator σ fixes F and sends θ to s(θ) for an integer
//! polynomial s. Complex conjugation fixes θ and acts on F only.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fixed::{newton_root, poly_eval_with_derivative, Cx, Fx};
use crate::quad::{QuadInt, QuadRat, RingTag};

/// Description of a cyclic field tower K/F.
#[derive(Debug)]
pub struct FieldDesc {
    pub name: String,
    pub n: usize,
    pub ring: RingTag,
    /// Minimal polynomial of θ, ascending coefficients, monic.
    pub min_poly: Vec<BigInt>,
    /// σ(θ) = Σ sigma_poly[k] θ^k, degree < n.
    pub sigma_poly: Vec<BigInt>,
    /// θ to working precision.
    pub theta_numeric: Fx,
    /// [θ, σ(θ), …, σ^{n−1}(θ)] to working precision.
    pub conjugates_numeric: Vec<Fx>,
    omega: Cx,
    /// θ^k reduced modulo the minimal polynomial, k < 2n−1.
    powers: Vec<Vec<BigInt>>,
    /// sigma_mats[m][row][col]: coordinate `row` of σ^m(θ^col).
    sigma_mats: Vec<Vec<Vec<BigInt>>>,
    /// Tr_{Q(θ)/Q}(θ^k), k < 2n−1.
    traces: Vec<BigInt>,
    /// conj_powers[l][k] = σ^l(θ)^k numerically.
    conj_powers: Vec<Vec<Fx>>,
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

impl FieldDesc {
    /// Build a field from its defining data, checking every structural
    /// invariant exactly. `theta_seed` is an f64 approximation of θ.
    pub fn new(
        name: &str,
        ring: RingTag,
        min_poly: Vec<BigInt>,
        sigma_poly: Vec<BigInt>,
        theta_seed: f64,
    ) -> Result<Arc<Self>> {
        let stage = "field";
        let n = min_poly.len().checked_sub(1).filter(|&n| n >= 1).ok_or_else(|| Error::Construction {
            stage,
            detail: "minimal polynomial must have degree at least 1".into(),
        })?;
        if !min_poly[n].is_one() {
            return Err(Error::Construction { stage, detail: "minimal polynomial is not monic".into() });
        }
        if sigma_poly.len() > n {
            return Err(Error::Construction { stage, detail: "sigma polynomial degree must be below n".into() });
        }

        // θ^k mod p_θ
        let mut powers: Vec<Vec<BigInt>> = Vec::with_capacity(2 * n);
        let mut cur = vec![BigInt::zero(); n];
        cur[0] = BigInt::one();
        for _ in 0..(2 * n).max(2) - 1 {
            powers.push(cur.clone());
            // multiply by θ
            let top = cur[n - 1].clone();
            let mut next = vec![BigInt::zero(); n];
            for k in (1..n).rev() {
                next[k] = cur[k - 1].clone();
            }
            for k in 0..n {
                next[k] -= &top * &min_poly[k];
            }
            cur = next;
        }

        let mut s = sigma_poly.clone();
        s.resize(n, BigInt::zero());
        let mul_int = |x: &[BigInt], y: &[BigInt]| -> Vec<BigInt> {
            let mut prod = vec![BigInt::zero(); 2 * n - 1];
            for (a, xa) in x.iter().enumerate() {
                if xa.is_zero() {
                    continue;
                }
                for (b, yb) in y.iter().enumerate() {
                    prod[a + b] += xa * yb;
                }
            }
            reduce_int(&prod, &powers, n)
        };

        // σ(θ^k) = s^k
        let mut sigma1 = vec![vec![BigInt::zero(); n]; n];
        let mut sk = vec![BigInt::zero(); n];
        sk[0] = BigInt::one();
        for col in 0..n {
            for row in 0..n {
                sigma1[row][col] = sk[row].clone();
            }
            sk = mul_int(&sk, &s);
        }
        // σ is an automorphism iff p_θ(s(θ)) = 0 in Q(θ)
        let mut acc = vec![BigInt::zero(); n];
        for c in min_poly.iter().rev() {
            acc = mul_int(&acc, &s);
            acc[0] += c;
        }
        if acc.iter().any(|c| !c.is_zero()) {
            return Err(Error::Construction {
                stage,
                detail: "sigma(theta) is not a root of the minimal polynomial".into(),
            });
        }
        let mut sigma_mats = vec![identity_int(n)];
        for m in 1..n {
            let prev: &Vec<Vec<BigInt>> = &sigma_mats[m - 1];
            sigma_mats.push(mat_mul_int(&sigma1, prev));
        }
        let sigma_n = mat_mul_int(&sigma1, &sigma_mats[n - 1]);
        if sigma_n != identity_int(n) {
            return Err(Error::Construction { stage, detail: "sigma^n is not the identity".into() });
        }
        for (m, mat) in sigma_mats.iter().enumerate().skip(1) {
            if *mat == identity_int(n) {
                return Err(Error::Construction { stage, detail: format!("sigma has order {m} < n") });
            }
        }

        // traces of powers: Σ_m σ^m(θ^k), must be rational
        let mut traces = Vec::with_capacity(powers.len());
        for pk in &powers {
            let mut t = vec![BigInt::zero(); n];
            for mat in &sigma_mats {
                for (row, tr) in t.iter_mut().enumerate() {
                    for col in 0..n {
                        *tr += &mat[row][col] * &pk[col];
                    }
                }
            }
            if t[1..].iter().any(|c| !c.is_zero()) {
                return Err(Error::Construction { stage, detail: "trace of a power of theta is not rational".into() });
            }
            traces.push(t[0].clone());
        }

        // numerics: θ, then iterate s and polish each conjugate
        let theta = newton_root(&min_poly, theta_seed);
        let mut conj = vec![theta.clone()];
        for _ in 1..n {
            let prev = conj.last().unwrap();
            let (approx, _) = poly_eval_with_derivative(&s, prev);
            conj.push(newton_root(&min_poly, approx.to_f64()));
        }
        let tol = Fx::epsilon_pow2(100);
        for (k, c) in conj.iter().enumerate() {
            let (v, _) = poly_eval_with_derivative(&min_poly, c);
            if v.abs() > tol {
                return Err(Error::Construction { stage, detail: format!("conjugate {k} is not a root") });
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if (&conj[a] - &conj[b]).abs() < Fx::epsilon_pow2(40) {
                    return Err(Error::Construction { stage, detail: "conjugates are not distinct".into() });
                }
            }
        }
        if !irreducible_over_q(&min_poly, &conj) {
            return Err(Error::Construction { stage, detail: "minimal polynomial is reducible".into() });
        }
        let conj_powers = conj
            .iter()
            .map(|c| {
                let mut v = Vec::with_capacity(n);
                let mut p = Fx::one();
                for _ in 0..n {
                    v.push(p.clone());
                    p = &p * c;
                }
                v
            })
            .collect();

        let omega = match ring {
            RingTag::Gaussian => Cx::new(Fx::zero(), Fx::one()),
            RingTag::Eisenstein => {
                let half = Fx::from_ratio(&BigInt::from(1), &BigInt::from(2));
                Cx::new(-&half, &Fx::from_i64(3).sqrt() * &half)
            }
        };

        Ok(Arc::new(FieldDesc {
            name: name.to_string(),
            n,
            ring,
            min_poly,
            sigma_poly,
            theta_numeric: theta,
            conjugates_numeric: conj,
            omega,
            powers,
            sigma_mats,
            traces,
            conj_powers,
        }))
    }

    /// Q(i, √p) with θ = (1+√p)/2 and σ(θ) = 1 − θ, for p ≡ 1 (mod 4).
    pub fn quadratic(p: u64) -> Result<Arc<Self>> {
        if p % 4 != 1 {
            return Err(Error::UnsupportedPrime { p, reason: "need p ≡ 1 (mod 4) for θ = (1+√p)/2 to be integral".into() });
        }
        let c = (p as i64 - 1) / 4;
        let seed = (1.0 + (p as f64).sqrt()) / 2.0;
        Self::new(&format!("Q(i, sqrt {p})"), RingTag::Gaussian, big(&[-c, -1, 1]), big(&[1, -1]), seed)
    }

    /// F(ζ_m + ζ_m⁻¹) with σ: ζ_m ↦ ζ_m^g.
    ///
    /// The minimal polynomial is obtained by multiplying out the conjugates
    /// 2cos(2πk/m) numerically and rounding; the constructor then checks it
    /// exactly. σ(θ) is the Dickson polynomial D_g(θ) reduced mod p_θ.
    pub fn real_cyclotomic(m: u64, g: u64, ring: RingTag) -> Result<Arc<Self>> {
        let ks: Vec<u64> = (1..m).filter(|&k| 2 * k < m && k.gcd(&m) == 1).collect();
        let roots: Vec<f64> =
            ks.iter().map(|&k| 2.0 * (2.0 * std::f64::consts::PI * k as f64 / m as f64).cos()).collect();
        let mut poly = vec![1.0f64];
        for r in &roots {
            let mut next = vec![0.0; poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            poly = next;
        }
        let min_poly: Vec<BigInt> = poly
            .iter()
            .map(|c| {
                let r = c.round();
                debug_assert!((c - r).abs() < 1e-6);
                BigInt::from(r as i64)
            })
            .collect();
        // Dickson: D_0 = 2, D_1 = X, D_{k+1} = X·D_k − D_{k−1}
        let mut d_prev = big(&[2]);
        let mut d_cur = big(&[0, 1]);
        for _ in 1..g {
            let mut next = vec![BigInt::zero(); d_cur.len() + 1];
            for (i, c) in d_cur.iter().enumerate() {
                next[i + 1] += c;
            }
            for (i, c) in d_prev.iter().enumerate() {
                next[i] -= c;
            }
            d_prev = d_cur;
            d_cur = next;
        }
        let sigma = if g == 0 { d_prev } else { d_cur };
        let sigma = poly_rem_monic(&sigma, &min_poly);
        let theta = 2.0 * (2.0 * std::f64::consts::PI / m as f64).cos();
        Self::new(&format!("Q({}, 2cos(2pi/{m}))", ring.symbol()), ring, min_poly, sigma, theta)
    }

    /// Q(j, 2cos(2π/7)), σ: θ ↦ θ² − 2.
    pub fn cubic() -> Result<Arc<Self>> {
        Self::real_cyclotomic(7, 2, RingTag::Eisenstein)
    }

    /// Q(i, 2cos(2π/15)), σ: θ ↦ θ² − 2.
    pub fn quartic() -> Result<Arc<Self>> {
        Self::real_cyclotomic(15, 2, RingTag::Gaussian)
    }

    /// Q(j, 2cos(π/14)), σ: ζ₂₈ ↦ ζ₂₈⁵.
    pub fn sextic() -> Result<Arc<Self>> {
        Self::real_cyclotomic(28, 5, RingTag::Eisenstein)
    }

    pub fn omega_numeric(&self) -> &Cx {
        &self.omega
    }

    /// Tr_{Q(θ)/Q}(θ^k) for k < 2n − 1.
    pub fn power_trace(&self, k: usize) -> &BigInt {
        &self.traces[k]
    }

    /// Discriminant of Z[θ]: det(Tr(θ^{a+b})).
    pub fn discriminant(&self) -> BigInt {
        let n = self.n;
        let m: Vec<Vec<BigRational>> = (0..n)
            .map(|a| (0..n).map(|b| BigRational::from_integer(self.traces[a + b].clone())).collect())
            .collect();
        let d = rational_det(m);
        debug_assert!(d.is_integer());
        d.to_integer()
    }

    /// Integer matrix of σ^m on power-basis coordinates.
    pub fn sigma_matrix(&self, m: usize) -> &[Vec<BigInt>] {
        &self.sigma_mats[m % self.n]
    }

    fn reduce(&self, prod: Vec<QuadInt>) -> Vec<QuadInt> {
        let n = self.n;
        let mut out: Vec<QuadInt> = prod[..n.min(prod.len())].to_vec();
        out.resize(n, QuadInt::zero(self.ring));
        for (k, c) in prod.iter().enumerate().skip(n) {
            if c.is_zero() {
                continue;
            }
            for (i, p) in self.powers[k].iter().enumerate() {
                if !p.is_zero() {
                    out[i] = &out[i] + &c.scale(p);
                }
            }
        }
        out
    }
}

fn reduce_int(prod: &[BigInt], powers: &[Vec<BigInt>], n: usize) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = prod[..n.min(prod.len())].to_vec();
    out.resize(n, BigInt::zero());
    for (k, c) in prod.iter().enumerate().skip(n) {
        for (i, p) in powers[k].iter().enumerate() {
            out[i] += c * p;
        }
    }
    out
}

fn identity_int(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|r| (0..n).map(|c| if r == c { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn mat_mul_int(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|r| (0..n).map(|c| (0..n).map(|k| &a[r][k] * &b[k][c]).sum()).collect())
        .collect()
}

/// Remainder of `f` modulo a monic polynomial (ascending coefficients).
pub fn poly_rem_monic(f: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
    let n = m.len() - 1;
    let mut r = f.to_vec();
    while r.len() > n {
        let top = r.pop().unwrap();
        let shift = r.len() - n;
        for k in 0..n {
            r[shift + k] -= &top * &m[k];
        }
    }
    r.resize(n, BigInt::zero());
    r
}

/// A monic integer polynomial with simple real roots `roots` is reducible
/// over Q iff some proper subset of its roots has an integral elementary
/// symmetric polynomial vector (Gauss's lemma).
fn irreducible_over_q(p: &[BigInt], roots: &[Fx]) -> bool {
    let n = p.len() - 1;
    let r: Vec<f64> = roots.iter().map(|x| x.to_f64()).collect();
    for mask in 1u32..(1 << n) - 1 {
        let k = mask.count_ones() as usize;
        if k > n / 2 {
            continue;
        }
        let mut poly = vec![1.0f64];
        for (i, ri) in r.iter().enumerate() {
            if mask & (1 << i) != 0 {
                let mut next = vec![0.0; poly.len() + 1];
                for (a, c) in poly.iter().enumerate() {
                    next[a + 1] += c;
                    next[a] -= c * ri;
                }
                poly = next;
            }
        }
        if poly.iter().all(|c| (c - c.round()).abs() < 1e-9) {
            return false;
        }
    }
    true
}

/// Determinant of a rational matrix by Gaussian elimination.
pub fn rational_det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det *= &piv;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &piv;
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    det
}

/// An element of K in power-basis coordinates over F.
#[derive(Clone)]
pub struct NfElement {
    desc: Arc<FieldDesc>,
    num: Vec<QuadInt>,
    den: BigInt,
}

impl fmt::Debug for NfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NfElement({self})")
    }
}

impl PartialEq for NfElement {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.desc, &o.desc) && self.den == o.den && self.num == o.num
    }
}

impl Eq for NfElement {}

impl fmt::Display for NfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = if c.a.is_zero() || c.b.is_zero() { c.pretty() } else { format!("({})", c.pretty()) };
            terms.push(match k {
                0 => cs,
                1 => format!("{cs}·θ"),
                _ => format!("{cs}·θ^{k}"),
            });
        }
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        if self.den.is_one() {
            f.write_str(&body)
        } else {
            write!(f, "[{body}]/{}", self.den)
        }
    }
}

impl NfElement {
    pub fn from_int_coords(desc: &Arc<FieldDesc>, coords: Vec<QuadInt>) -> Result<Self> {
        Self::from_parts(desc, coords, BigInt::one())
    }

    pub fn from_parts(desc: &Arc<FieldDesc>, mut num: Vec<QuadInt>, den: BigInt) -> Result<Self> {
        if num.len() > desc.n {
            return Err(Error::InvalidArgument(format!("{} coordinates for a degree-{} field", num.len(), desc.n)));
        }
        if num.iter().any(|c| c.ring != desc.ring) {
            return Err(Error::RingMismatch(desc.ring, num.iter().find(|c| c.ring != desc.ring).unwrap().ring));
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        num.resize(desc.n, QuadInt::zero(desc.ring));
        let mut e = NfElement { desc: desc.clone(), num, den };
        e.normalize();
        Ok(e)
    }

    pub fn from_coeffs(desc: &Arc<FieldDesc>, coeffs: &[QuadRat]) -> Result<Self> {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.den()));
        let num = coeffs.iter().map(|c| c.num().scale(&(&den / c.den()))).collect();
        Self::from_parts(desc, num, den)
    }

    /// Shorthand for integral coordinates given as (a, b) pairs.
    pub fn from_pairs(desc: &Arc<FieldDesc>, pairs: &[(i64, i64)]) -> Result<Self> {
        Self::from_int_coords(desc, pairs.iter().map(|&(a, b)| QuadInt::new(a, b, desc.ring)).collect())
    }

    pub fn from_base(desc: &Arc<FieldDesc>, x: &QuadRat) -> Self {
        Self::from_coeffs(desc, std::slice::from_ref(x)).expect("base field element")
    }

    pub fn zero(desc: &Arc<FieldDesc>) -> Self {
        NfElement { desc: desc.clone(), num: vec![QuadInt::zero(desc.ring); desc.n], den: BigInt::one() }
    }

    pub fn one(desc: &Arc<FieldDesc>) -> Self {
        Self::from_base(desc, &QuadRat::one(desc.ring))
    }

    pub fn theta(desc: &Arc<FieldDesc>) -> Self {
        let mut e = Self::zero(desc);
        if desc.n == 1 {
            // degenerate field: θ is rational
            e.num[0] = QuadInt::from_int(-desc.min_poly[0].clone(), desc.ring);
        } else {
            e.num[1] = QuadInt::one(desc.ring);
        }
        e
    }

    pub fn desc(&self) -> &Arc<FieldDesc> {
        &self.desc
    }

    pub fn numerators(&self) -> &[QuadInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coeffs(&self) -> Vec<QuadRat> {
        self.num.iter().map(|c| QuadRat::new(c.clone(), self.den.clone()).expect("den > 0")).collect()
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            g = g.gcd(&c.a).gcd(&c.b);
            if g.is_one() {
                return;
            }
        }
        for c in &mut self.num {
            c.a /= &g;
            c.b /= &g;
        }
        self.den /= &g;
    }

    fn check(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.desc, &o.desc) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(QuadInt::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// The value as an element of F, if all θ-coordinates above 0 vanish.
    pub fn in_base_field(&self) -> Option<QuadRat> {
        self.num[1..]
            .iter()
            .all(QuadInt::is_zero)
            .then(|| QuadRat::new(self.num[0].clone(), self.den.clone()).expect("den > 0"))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.add_unchecked(o))
    }

    fn add_unchecked(&self, o: &Self) -> Self {
        let (num, den) = if self.den == o.den {
            (self.num.iter().zip(&o.num).map(|(a, b)| a + b).collect(), self.den.clone())
        } else {
            (
                self.num.iter().zip(&o.num).map(|(a, b)| &a.scale(&o.den) + &b.scale(&self.den)).collect(),
                &self.den * &o.den,
            )
        };
        let mut e = NfElement { desc: self.desc.clone(), num, den };
        e.normalize();
        e
    }

    pub fn neg(&self) -> Self {
        NfElement { desc: self.desc.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.add_unchecked(&o.neg()))
    }

    /// Product reduced modulo p_θ.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.mul_unchecked(o))
    }

    fn mul_unchecked(&self, o: &Self) -> Self {
        let n = self.desc.n;
        let ring = self.desc.ring;
        let mut prod = vec![QuadInt::zero(ring); 2 * n - 1];
        for (a, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in o.num.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[a + b] = &prod[a + b] + &(x * y);
            }
        }
        let mut e = NfElement { desc: self.desc.clone(), num: self.desc.reduce(prod), den: &self.den * &o.den };
        e.normalize();
        e
    }

    /// Multiply by an element of F.
    pub fn scale(&self, c: &QuadRat) -> Result<Self> {
        if c.ring() != self.desc.ring {
            return Err(Error::RingMismatch(self.desc.ring, c.ring()));
        }
        let num = self.num.iter().map(|x| x * c.num()).collect();
        let mut e = NfElement { desc: self.desc.clone(), num, den: &self.den * c.den() };
        e.normalize();
        Ok(e)
    }

    pub fn scale_int(&self, c: &QuadInt) -> Self {
        self.scale(&QuadRat::from_int(c.clone())).expect("same ring")
    }

    /// σ^k(x).
    pub fn sigma(&self, k: usize) -> Self {
        let n = self.desc.n;
        let k = k % n;
        if k == 0 {
            return self.clone();
        }
        let mat = &self.desc.sigma_mats[k];
        let ring = self.desc.ring;
        let num = (0..n)
            .map(|row| {
                let mut acc = QuadInt::zero(ring);
                for col in 0..n {
                    let m = &mat[row][col];
                    if !m.is_zero() && !self.num[col].is_zero() {
                        acc = &acc + &self.num[col].scale(m);
                    }
                }
                acc
            })
            .collect();
        NfElement { desc: self.desc.clone(), num, den: self.den.clone() }
    }

    /// Complex conjugation on the F-coefficients (θ is real).
    pub fn conj(&self) -> Self {
        NfElement { desc: self.desc.clone(), num: self.num.iter().map(QuadInt::conj).collect(), den: self.den.clone() }
    }

    /// Tr_{K/F}(x) = Σ_k σ^k(x), computed through the Galois action.
    pub fn rel_trace(&self) -> Result<QuadRat> {
        let mut acc = self.clone();
        for k in 1..self.desc.n {
            acc = acc.add_unchecked(&self.sigma(k));
        }
        acc.in_base_field().ok_or_else(|| Error::Construction {
            stage: "trace",
            detail: format!("trace of {self} is not in the base field"),
        })
    }

    /// Tr_{K/F}(x) via the precomputed power traces (same value, faster).
    pub fn trace_fast(&self) -> QuadRat {
        let ring = self.desc.ring;
        let mut acc = QuadInt::zero(ring);
        for (k, c) in self.num.iter().enumerate() {
            acc = &acc + &c.scale(&self.desc.traces[k]);
        }
        QuadRat::new(acc, self.den.clone()).expect("den > 0")
    }

    /// N_{K/F}(x) = Π_k σ^k(x).
    pub fn rel_norm(&self) -> Result<QuadRat> {
        let mut acc = self.clone();
        for k in 1..self.desc.n {
            acc = acc.mul_unchecked(&self.sigma(k));
        }
        acc.in_base_field().ok_or_else(|| Error::Construction {
            stage: "norm",
            detail: format!("norm of {self} is not in the base field"),
        })
    }

    /// x⁻¹ = Π_{k≥1} σ^k(x) / N(x).
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut cof = NfElement::one(&self.desc);
        for k in 1..self.desc.n {
            cof = cof.mul_unchecked(&self.sigma(k));
        }
        let nrm = self.mul_unchecked(&cof).in_base_field().ok_or_else(|| Error::Construction {
            stage: "inverse",
            detail: "norm not in base field".into(),
        })?;
        cof.scale(&nrm.inv()?)
    }

    /// σ_l(x) as a high-precision complex number.
    pub fn embed_hp(&self, l: usize) -> Cx {
        let pw = &self.desc.conj_powers[l % self.desc.n];
        let om = &self.desc.omega;
        let mut re = Fx::zero();
        let mut imb = Fx::zero();
        let mut bsum = Fx::zero();
        for (c, p) in self.num.iter().zip(pw) {
            if !c.a.is_zero() {
                re = &re + &(&Fx::from_int(&c.a) * p);
            }
            if !c.b.is_zero() {
                bsum = &bsum + &(&Fx::from_int(&c.b) * p);
            }
        }
        // a + b·ω with ω = om.re + i·om.im
        re = &re + &(&bsum * &om.re);
        imb = &imb + &(&bsum * &om.im);
        let d = Fx::from_int(&self.den);
        Cx::new(&re / &d, &imb / &d)
    }

    /// σ_l(x) as an f64 complex number.
    pub fn embed(&self, l: usize) -> Complex64 {
        self.embed_hp(l).to_c64()
    }
}

/// Exact determinant over K by Gaussian elimination with inverses.
pub fn reduced_norm_exact(m: &[Vec<NfElement>]) -> Result<NfElement> {
    let n = m.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("matrix is not square".into()));
    }
    let desc = m[0][0].desc.clone();
    for row in m {
        for e in row {
            if !Arc::ptr_eq(&e.desc, &desc) {
                return Err(Error::FieldMismatch);
            }
        }
    }
    let mut a: Vec<Vec<NfElement>> = m.to_vec();
    let mut det = NfElement::one(&desc);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Ok(NfElement::zero(&desc));
        };
        if p != c {
            a.swap(p, c);
            det = det.neg();
        }
        det = det.mul_unchecked(&a[c][c]);
        let inv = a[c][c].inv()?;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].mul_unchecked(&inv);
            for k in c + 1..n {
                let t = f.mul_unchecked(&a[c][k]);
                a[r][k] = a[r][k].add_unchecked(&t.neg());
            }
        }
    }
    Ok(det)
}

/// Division-free determinant by Laplace expansion along rows, memoizing
/// minors over column subsets (2^n·n products). Works over any
/// commutative ring; used as an independent cross-check.
pub fn det_expansion<T, Z, M, A>(m: &[Vec<T>], zero: Z, mul: M, add: A) -> T
where
    T: Clone,
    Z: Fn() -> T,
    M: Fn(&T, &T) -> T,
    A: Fn(&T, &T, bool) -> T,
{
    let n = m.len();
    // minors[mask] = det of rows (n − |mask|..n) × columns in mask
    let mut minors: HashMap<u32, T> = HashMap::new();
    for c in 0..n {
        minors.insert(1 << c, m[n - 1][c].clone());
    }
    for size in 2..=n {
        let row = n - size;
        let mut next = HashMap::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let mut acc = zero();
            let mut sign_pos = true;
            for c in 0..n {
                if mask & (1 << c) == 0 {
                    continue;
                }
                let sub = &minors[&(mask & !(1 << c))];
                let term = mul(&m[row][c], sub);
                acc = add(&acc, &term, sign_pos);
                sign_pos = !sign_pos;
            }
            next.insert(mask, acc);
        }
        minors = next;
    }
    if n == 1 {
        return m[0][0].clone();
    }
    minors.remove(&((1u32 << n) - 1)).unwrap_or_else(zero)
}

/// Exact determinant over K by memoized cofactor expansion.
pub fn det_cofactor(m: &[Vec<NfElement>]) -> Result<NfElement> {
    let desc = m.first().and_then(|r| r.first()).ok_or(Error::InvalidArgument("empty matrix".into()))?.desc.clone();
    for row in m {
        if row.len() != m.len() {
            return Err(Error::InvalidArgument("matrix is not square".into()));
        }
        for e in row {
            if !Arc::ptr_eq(&e.desc, &desc) {
                return Err(Error::FieldMismatch);
            }
        }
    }
    Ok(det_expansion(
        m,
        || NfElement::zero(&desc),
        |a, b| a.mul_unchecked(b),
        |a, b, plus| if plus { a.add_unchecked(b) } else { a.add_unchecked(&b.neg()) },
    ))
}

/// Integer value of a base-field element, if it is one.
pub fn as_int(x: &QuadRat) -> Option<i64> {
    x.to_rational().filter(|r| r.is_integer()).and_then(|r| r.to_integer().to_i64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        big(v)
    }

    #[test]
    fn cyclotomic_minimal_polynomials() {
        assert_eq!(FieldDesc::cubic().unwrap().min_poly, ints(&[-1, -2, 1, 1]));
        assert_eq!(FieldDesc::quartic().unwrap().min_poly, ints(&[1, 4, -4, -1, 1]));
        assert_eq!(FieldDesc::sextic().unwrap().min_poly, ints(&[-7, 0, 14, 0, -7, 0, 1]));
    }

    #[test]
    fn sigma_polynomials() {
        assert_eq!(FieldDesc::cubic().unwrap().sigma_poly, ints(&[-2, 0, 1]));
        assert_eq!(FieldDesc::quartic().unwrap().sigma_poly, ints(&[-2, 0, 1, 0]));
        assert_eq!(FieldDesc::sextic().unwrap().sigma_poly, ints(&[0, 5, 0, -5, 0, 1]));
        assert_eq!(FieldDesc::quadratic(5).unwrap().sigma_poly, ints(&[1, -1]));
    }

    #[test]
    fn conjugate_order() {
        let f = FieldDesc::sextic().unwrap();
        let want: Vec<f64> = [1, 5, 3, 13, 9, 11]
            .iter()
            .map(|&k| 2.0 * (k as f64 * std::f64::consts::PI / 14.0).cos())
            .collect();
        for (c, w) in f.conjugates_numeric.iter().zip(&want) {
            assert!((c.to_f64() - w).abs() < 1e-14);
        }
        let q = FieldDesc::quartic().unwrap();
        assert!((q.conjugates_numeric[0].to_f64() - 1.827090915285202).abs() < 1e-14);
    }

    #[test]
    fn roots_to_working_precision() {
        for f in [FieldDesc::cubic(), FieldDesc::quartic(), FieldDesc::sextic(), FieldDesc::quadratic(13)] {
            let f = f.unwrap();
            for c in &f.conjugates_numeric {
                let (v, _) = poly_eval_with_derivative(&f.min_poly, c);
                // 10^-30 is about 2^-100
                assert!(v.abs() < Fx::epsilon_pow2(100));
            }
        }
    }

    #[test]
    fn power_traces() {
        let c = FieldDesc::cubic().unwrap();
        assert_eq!((0..3).map(|k| c.power_trace(k).clone()).collect::<Vec<_>>(), ints(&[3, -1, 5]));
        let q = FieldDesc::quartic().unwrap();
        assert_eq!((1..5).map(|k| q.power_trace(k).clone()).collect::<Vec<_>>(), ints(&[1, 9, 1, 29]));
        assert_eq!(FieldDesc::sextic().unwrap().power_trace(2), &BigInt::from(14));
    }

    #[test]
    fn discriminants() {
        assert_eq!(FieldDesc::cubic().unwrap().discriminant(), BigInt::from(49));
        assert_eq!(FieldDesc::quartic().unwrap().discriminant(), BigInt::from(1125));
        assert_eq!(FieldDesc::sextic().unwrap().discriminant(), BigInt::from(64 * 16807));
        assert_eq!(FieldDesc::quadratic(13).unwrap().discriminant(), BigInt::from(13));
    }

    #[test]
    fn quartic_theta_power() {
        let f = FieldDesc::quartic().unwrap();
        let t = NfElement::theta(&f);
        let t3 = t.mul(&t).unwrap().mul(&t).unwrap();
        let t4 = t.mul(&t3).unwrap();
        assert_eq!(t4, NfElement::from_pairs(&f, &[(-1, 0), (-4, 0), (4, 0), (1, 0)]).unwrap());
        assert_eq!(t.sigma(1), NfElement::from_pairs(&f, &[(-2, 0), (0, 0), (1, 0)]).unwrap());
    }

    #[test]
    fn golden_sigma_and_norm() {
        let f = FieldDesc::quadratic(5).unwrap();
        let t = NfElement::theta(&f);
        assert_eq!(t.sigma(1), NfElement::from_pairs(&f, &[(1, 0), (-1, 0)]).unwrap());
        let alpha = NfElement::from_pairs(&f, &[(1, 1), (0, -1)]).unwrap();
        let nrm = alpha.rel_norm().unwrap();
        assert_eq!(nrm, QuadRat::from_int(QuadInt::new(2, 1, RingTag::Gaussian)));
    }

    #[test]
    fn cubic_norm_lies_in_base() {
        let f = FieldDesc::cubic().unwrap();
        let x = NfElement::from_pairs(&f, &[(1, 1), (1, 0)]).unwrap();
        let nrm = x.rel_norm().unwrap();
        assert_eq!(nrm.num().norm(), BigInt::from(7));
    }

    #[test]
    fn embedding_values() {
        let f = FieldDesc::quartic().unwrap();
        let t = NfElement::theta(&f);
        let z = t.embed(0);
        assert!((z.re - 2.0 * (2.0 * std::f64::consts::PI / 15.0).cos()).abs() < 1e-15);
        let c = NfElement::from_base(&f, &QuadRat::from_i64(-3, RingTag::Gaussian));
        for l in 0..4 {
            assert_eq!(c.embed(l), Complex64::new(-3.0, 0.0));
        }
        let g = FieldDesc::cubic().unwrap();
        let j = NfElement::from_pairs(&g, &[(0, 1)]).unwrap();
        let jz = j.embed(1);
        assert!((jz - Complex64::new(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn inverse() {
        let f = FieldDesc::sextic().unwrap();
        let x = NfElement::from_pairs(&f, &[(3, 1), (0, 0), (-1, 2), (0, 0), (0, 0), (1, 0)]).unwrap();
        let y = x.inv().unwrap();
        assert_eq!(x.mul(&y).unwrap(), NfElement::one(&f));
    }

    #[test]
    fn determinant_methods_agree() {
        let f = FieldDesc::cubic().unwrap();
        let e = |v: &[(i64, i64)]| NfElement::from_pairs(&f, v).unwrap();
        let m = vec![
            vec![e(&[(1, 0), (2, 1)]), e(&[(0, 1)]), e(&[(-1, 0), (0, 0), (1, 1)])],
            vec![e(&[(3, 0)]), e(&[(1, 1), (1, 0)]), e(&[(0, 0), (-2, 0)])],
            vec![e(&[(0, 0), (0, 0), (1, 0)]), e(&[(2, -1)]), e(&[(1, 0), (1, 0), (1, 0)])],
        ];
        assert_eq!(reduced_norm_exact(&m).unwrap(), det_cofactor(&m).unwrap());
        let id: Vec<Vec<NfElement>> = (0..3)
            .map(|r| (0..3).map(|c| if r == c { NfElement::one(&f) } else { NfElement::zero(&f) }).collect())
            .collect();
        assert_eq!(reduced_norm_exact(&id).unwrap(), NfElement::one(&f));
        assert_eq!(det_cofactor(&id).unwrap(), NfElement::one(&f));
    }

    #[test]
    fn rejects_bad_sigma() {
        let r = FieldDesc::new("bad", RingTag::Gaussian, ints(&[-1, -1, 1]), ints(&[0, 1]), 1.6);
        assert!(r.is_err(), "identity has order 1");
        let r = FieldDesc::new("bad", RingTag::Gaussian, ints(&[-1, -1, 1]), ints(&[2, -1]), 1.6);
        assert!(r.is_err(), "2 − θ is not a conjugate");
    }

    fn arb_elem(f: Arc<FieldDesc>) -> impl Strategy<Value = NfElement> {
        let n = f.n;
        proptest::collection::vec((-6i64..6, -6i64..6), n)
            .prop_map(move |v| NfElement::from_pairs(&f, &v).unwrap())
    }

    fn arb_pair() -> impl Strategy<Value = (NfElement, NfElement)> {
        prop_oneof![
            Just(FieldDesc::quadratic(13).unwrap()),
            Just(FieldDesc::cubic().unwrap()),
            Just(FieldDesc::quartic().unwrap()),
            Just(FieldDesc::sextic().unwrap()),
        ]
        .prop_flat_map(|f| (arb_elem(f.clone()), arb_elem(f)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sigma_is_ring_automorphism((x, y) in arb_pair()) {
            let n = x.desc().n;
            prop_assert_eq!(x.mul(&y).unwrap().sigma(1), x.sigma(1).mul(&y.sigma(1)).unwrap());
            prop_assert_eq!(x.add(&y).unwrap().sigma(1), x.sigma(1).add(&y.sigma(1)).unwrap());
            let mut z = x.clone();
            for _ in 0..n { z = z.sigma(1); }
            prop_assert_eq!(z, x);
        }

        #[test]
        fn norm_is_multiplicative((x, y) in arb_pair()) {
            let lhs = x.mul(&y).unwrap().rel_norm().unwrap();
            let rhs = &x.rel_norm().unwrap() * &y.rel_norm().unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn traces_agree((x, _y) in arb_pair()) {
            prop_assert_eq!(x.rel_trace().unwrap(), x.trace_fast());
        }

        #[test]
        fn embedding_is_multiplicative((x, y) in arb_pair()) {
            let xy = x.mul(&y).unwrap();
            for l in 0..x.desc().n {
                let a = xy.embed_hp(l);
                let b = &x.embed_hp(l) * &y.embed_hp(l);
                let diff = (&a - &b).norm_sqr().to_f64().sqrt();
                let scale = a.norm_sqr().to_f64().sqrt().max(1.0);
                prop_assert!(diff / scale < 1e-20);
            }
        }
    }
}
