//! Machine checks of the algebraic claims: minimum determinants,
//! determinant discreteness, the non-norm condition and its failure at
//! p = 17, and the arithmetic witnesses used in the non-norm proofs.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codes::{make_code_2x2, make_code_2x2_broken17, CodeSpec, Codeword};
use crate::error::{Error, Result};
use crate::field::{det_cofactor, FieldDesc, NfElement};
use crate::quad::{crt_solve, is_prime, is_square_mod_p, pow_mod, QuadInt, QuadRat, RingTag};

/// Default cap on determinant evaluations for exhaustive enumeration.
pub const DEFAULT_BUDGET: u128 = 200_000_000;

/// Outcome of a minimum-determinant search.
#[derive(Clone, Debug)]
pub struct MinDetReport {
    pub code: String,
    pub search: String,
    pub evaluated: u64,
    /// min |det|² of the unnormalized codeword (an integer).
    pub min_unnormalized: BigInt,
    /// min |det|² of the normalized codeword: min_unnormalized / N^n.
    pub min_det: BigRational,
    pub argmin: Vec<QuadInt>,
    /// The argmin determinant recomputed by exact field arithmetic.
    pub argmin_verified: bool,
    pub zero_det_found: bool,
    /// Evaluations whose |det|² is not a multiple of N(I).
    pub ideal_norm_violations: u64,
    /// Evaluations that needed exact arithmetic because the floating-point
    /// error bound was too loose for integer recovery.
    pub exact_fallbacks: u64,
}

impl MinDetReport {
    pub fn min_det_f64(&self) -> f64 {
        ratio_f64(&self.min_det)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "code: {}", self.code);
        let _ = writeln!(s, "search: {}", self.search);
        let _ = writeln!(s, "evaluated: {}", self.evaluated);
        let _ = writeln!(s, "min |det|^2 = {}", self.min_det);
        let _ = writeln!(s, "min_det_float: {:.6e}", self.min_det_f64());
        let _ = writeln!(s, "min_unnormalized: {}", self.min_unnormalized);
        let _ = writeln!(
            s,
            "argmin: {}",
            self.argmin.iter().map(QuadInt::pretty).collect::<Vec<_>>().join(" ")
        );
        let _ = writeln!(s, "argmin_verified: {}", self.argmin_verified);
        let _ = writeln!(s, "zero_det_found: {}", self.zero_det_found);
        let _ = writeln!(s, "ideal_norm_violations: {}", self.ideal_norm_violations);
        let _ = writeln!(s, "exact_fallbacks: {}", self.exact_fallbacks);
        s
    }
}

pub fn ratio_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Symbols a + bω with |a|, |b| ≤ radius, ordered so that index s and
/// S−1−s are negatives of each other.
pub fn box_symbols(radius: i64, ring: RingTag) -> Vec<QuadInt> {
    let mut v = Vec::new();
    for a in -radius..=radius {
        for b in -radius..=radius {
            v.push(QuadInt::new(a, b, ring));
        }
    }
    v
}

/// Determinant of the leading n×n block by LU with partial pivoting,
/// together with an a-priori bound on its absolute rounding error.
pub fn det_small(m: &mut [[Complex64; 6]; 6], n: usize) -> (Complex64, f64) {
    let mut scale = 1.0f64;
    for row in m.iter().take(n) {
        scale *= row[..n].iter().map(|z| z.re.abs() + z.im.abs()).sum::<f64>();
    }
    match n {
        2 => return (m[0][0] * m[1][1] - m[0][1] * m[1][0], 16.0 * f64::EPSILON * scale),
        3 => {
            let d = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            return (d, 64.0 * f64::EPSILON * scale);
        }
        _ => {}
    }
    let mut det = Complex64::new(1.0, 0.0);
    for c in 0..n {
        let mut p = c;
        let mut best = m[c][c].norm_sqr();
        for r in c + 1..n {
            let v = m[r][c].norm_sqr();
            if v > best {
                best = v;
                p = r;
            }
        }
        if best == 0.0 {
            return (Complex64::new(0.0, 0.0), 64.0 * (n * n * n) as f64 * f64::EPSILON * scale);
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c];
        det *= piv;
        let inv = 1.0 / piv;
        for r in c + 1..n {
            let f = m[r][c] * inv;
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for k in c + 1..n {
                let t = f * m[c][k];
                m[r][k] -= t;
            }
        }
    }
    // growth ≤ 2^{n−1} under partial pivoting; generous constant
    let bound = 64.0 * (n * n * n) as f64 * f64::EPSILON * scale * (1u64 << n) as f64;
    (det, bound)
}

/// Nearest element of O_F to a complex number.
pub fn nearest_ring_element(z: Complex64, ring: RingTag) -> (i64, i64) {
    match ring {
        RingTag::Gaussian => (z.re.round() as i64, z.im.round() as i64),
        RingTag::Eisenstein => {
            let b = (z.im * 2.0 / 3f64.sqrt()).round();
            ((z.re + b / 2.0).round() as i64, b as i64)
        }
    }
}

fn ring_norm_i128(a: i64, b: i64, ring: RingTag) -> i128 {
    let (a, b) = (a as i128, b as i128);
    match ring {
        RingTag::Gaussian => a * a + b * b,
        RingTag::Eisenstein => a * a - a * b + b * b,
    }
}

/// Per-search state kept by each worker and merged at the end.
#[derive(Clone)]
struct Acc {
    evaluated: u64,
    best: Option<(i128, u64, Vec<usize>)>,
    zero: bool,
    violations: u64,
    fallbacks: u64,
}

impl Acc {
    fn new() -> Self {
        Acc { evaluated: 0, best: None, zero: false, violations: 0, fallbacks: 0 }
    }

    fn merge(mut self, o: Acc) -> Acc {
        self.evaluated += o.evaluated;
        self.zero |= o.zero;
        self.violations += o.violations;
        self.fallbacks += o.fallbacks;
        self.best = match (self.best.take(), o.best) {
            (None, b) | (b, None) => b,
            (Some(a), Some(b)) => Some(if (b.0, b.1) < (a.0, a.1) { b } else { a }),
        };
        self
    }
}

/// Shared numeric data for fast determinant evaluation.
struct Evaluator<'a> {
    spec: &'a CodeSpec,
    n: usize,
    symbols: Vec<QuadInt>,
    sym_c: Vec<Complex64>,
    /// σ_r(ν_k) without normalization, emb[r][k]
    emb: Vec<Vec<Complex64>>,
    gamma: Complex64,
    ideal_norm: i128,
}

impl<'a> Evaluator<'a> {
    fn new(spec: &'a CodeSpec, radius: i64, ideal_norm: u64) -> Self {
        let n = spec.n();
        let symbols = box_symbols(radius, spec.ring());
        let sym_c = symbols.iter().map(QuadInt::to_complex).collect();
        let emb = (0..n).map(|r| (0..n).map(|k| spec.basis[k].embed(r)).collect()).collect();
        Evaluator { spec, n, symbols, sym_c, emb, gamma: spec.gamma_numeric(), ideal_norm: ideal_norm as i128 }
    }

    /// Evaluate the symbol-index vector `idx` (length n²) and fold it into `acc`.
    fn eval(&self, idx: &[usize], key: u64, acc: &mut Acc) {
        let n = self.n;
        let mut layer = [[Complex64::new(0.0, 0.0); 6]; 6];
        for l in 0..n {
            for r in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    s += self.emb[r][k] * self.sym_c[idx[l * n + k]];
                }
                layer[l][r] = s;
            }
        }
        let mut m = [[Complex64::new(0.0, 0.0); 6]; 6];
        for r in 0..n {
            for c in 0..n {
                m[r][c] = if c >= r { layer[c - r][r] } else { self.gamma * layer[n + c - r][r] };
            }
        }
        self.fold(&|| idx.to_vec(), key, m, acc);
    }

    fn fold(&self, idx: &dyn Fn() -> Vec<usize>, key: u64, mut m: [[Complex64; 6]; 6], acc: &mut Acc) {
        acc.evaluated += 1;
        let ring = self.spec.ring();
        let (z, bound) = det_small(&mut m, self.n);
        let nrm = if bound < 0.2 {
            let (a, b) = nearest_ring_element(z, ring);
            ring_norm_i128(a, b, ring)
        } else {
            acc.fallbacks += 1;
            let u: Vec<QuadInt> = idx().iter().map(|&i| self.symbols[i].clone()).collect();
            match self.spec.codeword_det(&u) {
                Ok((d, _)) => d.num().norm().to_i128().unwrap_or(i128::MAX),
                Err(_) => i128::MAX,
            }
        };
        if nrm == 0 {
            acc.zero = true;
        }
        if self.ideal_norm > 1 && nrm % self.ideal_norm != 0 {
            acc.violations += 1;
        }
        let better = match &acc.best {
            None => true,
            Some((bn, bk, _)) => (nrm, key) < (*bn, *bk),
        };
        if better {
            acc.best = Some((nrm, key, idx()));
        }
    }

    fn finish(&self, acc: Acc, search: String) -> Result<MinDetReport> {
        let (nrm, _, idx) = acc.best.ok_or_else(|| Error::InvalidArgument("empty search".into()))?;
        let argmin: Vec<QuadInt> = idx.iter().map(|&i| self.symbols[i].clone()).collect();
        let (exact, _) = self.spec.codeword_det(&argmin)?;
        let exact_norm = exact.num().norm();
        let verified = exact.is_integral() && exact_norm == BigInt::from(nrm);
        let nn = BigInt::from(self.spec.norm_factor).pow(self.n as u32);
        Ok(MinDetReport {
            code: self.spec.name.clone(),
            search,
            evaluated: acc.evaluated,
            min_unnormalized: exact_norm.clone(),
            min_det: BigRational::new(exact_norm, nn),
            argmin,
            argmin_verified: verified,
            zero_det_found: acc.zero,
            ideal_norm_violations: acc.violations,
            exact_fallbacks: acc.fallbacks,
        })
    }
}

/// N(I) for the shipped codes: |N_{K/F}(ideal)|².
fn ideal_norm(spec: &CodeSpec) -> u64 {
    match spec.n() {
        2 => spec.norm_factor,
        3 => 7,
        4 => 45,
        6 => 7,
        _ => 1,
    }
}

/// Exhaustive minimum of |det|² over all nonzero symbol vectors with
/// components a + bω, |a|, |b| ≤ radius.
///
/// u and −u have the same |det|², so only one of each pair is evaluated.
/// Each determinant is computed in floating point with an error bound and
/// rounded to the exact element of O_F; the minimizer is recomputed in
/// exact arithmetic.
pub fn min_det_bruteforce(spec: &CodeSpec, radius: i64, budget: u128) -> Result<MinDetReport> {
    if radius < 1 {
        return Err(Error::InvalidArgument("radius must be at least 1".into()));
    }
    let n = spec.n();
    let s = ((2 * radius + 1) * (2 * radius + 1)) as u128;
    let total = s.checked_pow((n * n) as u32).unwrap_or(u128::MAX);
    let needed = (total - 1) / 2;
    if needed > budget || total > u64::MAX as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let ev = Evaluator::new(spec, radius, ideal_norm(spec));
    let s = s as u64;
    // σ_r of every possible layer, indexed by the layer's base-S digits
    let m_layers = s.pow(n as u32);
    let table: Vec<[Complex64; 6]> = (0..m_layers)
        .map(|c| {
            let mut row = [Complex64::new(0.0, 0.0); 6];
            let mut v = c;
            for k in 0..n {
                let z = ev.sym_c[(v % s) as usize];
                v /= s;
                for (r, slot) in row.iter_mut().enumerate().take(n) {
                    *slot += ev.emb[r][k] * z;
                }
            }
            row
        })
        .collect();
    let decode = |key: u64| -> Vec<usize> {
        let mut v = key;
        (0..n * n)
            .map(|_| {
                let d = (v % s) as usize;
                v /= s;
                d
            })
            .collect()
    };
    let half = needed as u64;
    let chunks = 256u64.min(half.max(1));
    let per = half.div_ceil(chunks);
    let acc = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let start = ci * per;
            let end = ((ci + 1) * per).min(half);
            let mut acc = Acc::new();
            if start >= end {
                return acc;
            }
            // layer digits of `start` in base S^n, least significant first
            let mut cs = vec![0u64; n];
            let mut v = start;
            for d in cs.iter_mut() {
                *d = v % m_layers;
                v /= m_layers;
            }
            for key in start..end {
                let mut m = [[Complex64::new(0.0, 0.0); 6]; 6];
                for r in 0..n {
                    for c in 0..n {
                        m[r][c] = if c >= r {
                            table[cs[c - r] as usize][r]
                        } else {
                            ev.gamma * table[cs[n + c - r] as usize][r]
                        };
                    }
                }
                ev.fold(&|| decode(key), key, m, &mut acc);
                for d in cs.iter_mut() {
                    *d += 1;
                    if *d == m_layers {
                        *d = 0;
                    } else {
                        break;
                    }
                }
            }
            acc
        })
        .reduce(Acc::new, Acc::merge);
    ev.finish(acc, format!("exhaustive radius {radius}, one of each ±u pair ({} vectors)", total - 1))
}

/// Minimum of |det|² over all nonzero vectors of Hamming weight ≤ 2 with
/// entries in the radius box, plus `random` uniformly drawn box vectors.
pub fn min_det_sampled(spec: &CodeSpec, radius: i64, random: u64, seed: u64) -> Result<MinDetReport> {
    if radius < 1 {
        return Err(Error::InvalidArgument("radius must be at least 1".into()));
    }
    let n = spec.n();
    let nn = n * n;
    let ev = Evaluator::new(spec, radius, ideal_norm(spec));
    let s = ev.symbols.len();
    let zero_idx = (s - 1) / 2;
    // weight one as the pair (p, p), weight two as p < q, both entries nonzero
    let pairs: Vec<(usize, usize)> = (0..nn).flat_map(|p| (p..nn).map(move |q| (p, q))).collect();
    let acc_w = pairs
        .par_iter()
        .map(|&(p, q)| {
            let mut acc = Acc::new();
            let mut idx = vec![zero_idx; nn];
            for a in (0..s).filter(|&a| a != zero_idx) {
                idx[p] = a;
                if p == q {
                    ev.eval(&idx, (p * nn + q) as u64, &mut acc);
                    continue;
                }
                for b in (0..s).filter(|&b| b != zero_idx) {
                    idx[q] = b;
                    ev.eval(&idx, (p * nn + q) as u64, &mut acc);
                }
            }
            acc
        })
        .reduce(Acc::new, Acc::merge);
    let chunks = 64u64;
    let per = random.div_ceil(chunks);
    let acc_r = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut acc = Acc::new();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (ci.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
            let mut idx = vec![0usize; nn];
            for t in ci * per..((ci + 1) * per).min(random) {
                loop {
                    for d in idx.iter_mut() {
                        *d = rng.gen_range(0..s);
                    }
                    if idx.iter().any(|&d| d != zero_idx) {
                        break;
                    }
                }
                ev.eval(&idx, (1u64 << 40) + t, &mut acc);
            }
            acc
        })
        .reduce(Acc::new, Acc::merge);
    let acc = acc_w.merge(acc_r);
    ev.finish(acc, format!("radius {radius}: all vectors of weight <= 2 plus {random} random vectors (seed {seed})"))
}

/// Count of vectors of weight ≤ 2 in a box with S symbols per slot.
pub fn weight_two_count(slots: usize, s: usize) -> u64 {
    let m = (s - 1) as u64;
    let k = slots as u64;
    k * m + k * (k - 1) / 2 * m * m
}

/// Result of the integrality check on random codeword determinants.
#[derive(Clone, Debug)]
pub struct DiscretenessReport {
    pub code: String,
    pub trials: u64,
    pub failures: u64,
    pub example: Option<String>,
}

impl DiscretenessReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// For random integral symbol vectors (components in [−3, 3]²), the exact
/// unnormalized determinant must be an element of O_F.
pub fn check_det_discreteness(spec: &CodeSpec, trials: u64, seed: u64) -> DiscretenessReport {
    let n = spec.n();
    let ring = spec.ring();
    let chunks = 32u64;
    let per = trials.div_ceil(chunks);
    let (failures, example) = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(ci));
            let mut fails = 0u64;
            let mut ex = None;
            for t in ci * per..((ci + 1) * per).min(trials) {
                let u: Vec<QuadInt> = if t == 0 {
                    vec![QuadInt::zero(ring); n * n]
                } else {
                    (0..n * n).map(|_| QuadInt::new(rng.gen_range(-3..=3), rng.gen_range(-3..=3), ring)).collect()
                };
                let ok = spec
                    .encode(&u)
                    .and_then(|cw| det_cofactor(&cw.exact))
                    .map(|d| d.in_base_field().is_some_and(|x| x.is_integral()))
                    .unwrap_or(false);
                if !ok {
                    fails += 1;
                    ex.get_or_insert_with(|| u.iter().map(QuadInt::pretty).collect::<Vec<_>>().join(" "));
                }
            }
            (fails, ex)
        })
        .reduce(|| (0, None), |a, b| (a.0 + b.0, a.1.or(b.1)));
    DiscretenessReport { code: spec.name.clone(), trials, failures, example }
}

/// Status of the condition "γ = i is not a relative norm" for K = Q(i, √p).
#[derive(Clone, Debug)]
pub enum NormCondition {
    /// p ≡ 5 (mod 8): the two GF(p) facts the proof rests on hold.
    Proven { facts: Vec<String> },
    /// An x with N_{K/Q(i)}(x) = i.
    CounterexampleFound(NfElement),
    Unknown { searched: String },
}

/// For p ≡ 5 (mod 8) check that −1 is a square mod p and that its square
/// root is not (equivalently (−1)^{(p−1)/4} ≡ −1); then i cannot be a norm.
/// For p ≡ 1 (mod 8) search x = (a + b√p)/4 with a, b ∈ Z[i] in a small box
/// for N(x) = i. Only γ = i matters for n = 2: N(i·x) = −N(x), so −i is a
/// norm exactly when i is, and −1 = N(i) always is.
pub fn norm_condition_2x2(p: u64) -> Result<NormCondition> {
    if !is_prime(p) || p % 4 != 1 {
        return Err(Error::UnsupportedPrime { p, reason: "need a prime p ≡ 1 (mod 4)".into() });
    }
    if p % 8 == 5 {
        let minus_one_square = is_square_mod_p(-1, p)?;
        let c = (2..p).find(|&c| !is_square_mod_p(c as i64, p).unwrap_or(true)).unwrap_or(2);
        let root = pow_mod(c, (p - 1) / 4, p);
        debug_assert_eq!(root * root % p, p - 1);
        let root_not_square = !is_square_mod_p(root as i64, p)?;
        let sign = pow_mod(p - 1, (p - 1) / 4, p);
        let facts = vec![
            format!("-1 is a square mod {p}: {minus_one_square}"),
            format!("{root}^2 = -1 mod {p}, and {root} is a non-square: {root_not_square}"),
            format!("(-1)^(({p}-1)/4) mod {p} = {}", if sign == p - 1 { "-1".to_string() } else { sign.to_string() }),
        ];
        if minus_one_square && root_not_square && sign == p - 1 {
            return Ok(NormCondition::Proven { facts });
        }
        return Ok(NormCondition::Unknown { searched: facts.join("; ") });
    }
    let desc = FieldDesc::quadratic(p)?;
    let bound = 6i64;
    let gmul = |x: (i64, i64), y: (i64, i64)| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
    let pi = p as i64;
    for shell in 0..=bound {
        for a0 in -shell..=shell {
            for a1 in -shell..=shell {
                for b0 in -shell..=shell {
                    for b1 in -shell..=shell {
                        if a0.abs().max(a1.abs()).max(b0.abs()).max(b1.abs()) != shell {
                            continue;
                        }
                        let aa = gmul((a0, a1), (a0, a1));
                        let bb = gmul((b0, b1), (b0, b1));
                        // N((a + b√p)/4) = (a² − p·b²)/16
                        if (aa.0 - pi * bb.0, aa.1 - pi * bb.1) == (0, 16) {
                            // √p = 2θ − 1
                            let x = NfElement::from_parts(
                                &desc,
                                vec![
                                    QuadInt::new(a0 - b0, a1 - b1, RingTag::Gaussian),
                                    QuadInt::new(2 * b0, 2 * b1, RingTag::Gaussian),
                                ],
                                BigInt::from(4),
                            )?;
                            return Ok(NormCondition::CounterexampleFound(x));
                        }
                    }
                }
            }
        }
    }
    Ok(NormCondition::Unknown {
        searched: format!("x = (a + b*sqrt({p}))/4 with a, b in Z[i], |Re|, |Im| <= {bound}"),
    })
}

/// The p = 17 witness x = 3(i−1)/4 − (i−1)√17/4 as a field element.
pub fn q17_witness() -> Result<NfElement> {
    q17_witness_in(&FieldDesc::quadratic(17)?)
}

fn q17_witness_in(desc: &std::sync::Arc<FieldDesc>) -> Result<NfElement> {
    // 4x = 3(i−1) − (i−1)(2θ − 1) = 4(i−1) − 2(i−1)θ
    NfElement::from_parts(
        desc,
        vec![QuadInt::new(-4, 4, RingTag::Gaussian), QuadInt::new(2, -2, RingTag::Gaussian)],
        BigInt::from(4),
    )
}

/// A nonzero codeword of the p = 17 code with determinant exactly zero.
#[derive(Clone, Debug)]
pub struct SingularCodeword {
    pub symbols: Vec<QuadInt>,
    pub codeword: Codeword,
    pub det: QuadRat,
    /// The same symbol vector encoded with the p = 5 code.
    pub golden_det: QuadRat,
}

/// Layers α·x₀ and α·x₁ with x₀ = 3(i−1) − (i−1)√17 and x₁ = 4:
/// det = N(α)(N(x₀) − i·N(x₁)) = N(α)(16i − 16i) = 0.
pub fn q17_singular_codeword() -> Result<SingularCodeword> {
    let spec = make_code_2x2_broken17()?;
    let desc = spec.desc.clone();
    let x0 = q17_witness_in(&desc)?.scale(&QuadRat::from_i64(4, RingTag::Gaussian))?;
    let x1 = NfElement::from_pairs(&desc, &[(4, 0)])?;
    let alpha = ideal_generator_of(&spec)?;
    let layers = vec![alpha.mul(&x0)?, alpha.mul(&x1)?];
    let symbols = spec_symbols_for_layers(&spec, &layers)?;
    let codeword = spec.encode(&symbols)?;
    if codeword.layers != layers {
        return Err(Error::Construction { stage: "q17", detail: "layer reconstruction failed".into() });
    }
    if symbols.iter().all(QuadInt::is_zero) {
        return Err(Error::Construction { stage: "q17", detail: "zero codeword".into() });
    }
    let (det, _) = spec.codeword_det(&symbols)?;
    if !det.is_zero() {
        return Err(Error::Construction { stage: "q17", detail: format!("determinant is {det}, not 0") });
    }
    let golden = make_code_2x2(5)?;
    let (golden_det, _) = golden.codeword_det(&symbols)?;
    Ok(SingularCodeword { symbols, codeword, det, golden_det })
}

/// The generator α of the 2×2 ideal, recovered from the basis: ν₀ and ν₁
/// span α·O_K, so α = gcd is found by the generator search again.
fn ideal_generator_of(spec: &CodeSpec) -> Result<NfElement> {
    let p = spec.norm_factor;
    Ok(crate::codes::find_generator_2x2(&spec.desc, p, crate::codes::GENERATOR_BOX)?.alpha)
}

/// Solve layers = Σ u_k ν_k for u over O_F.
pub fn spec_symbols_for_layers(spec: &CodeSpec, layers: &[NfElement]) -> Result<Vec<QuadInt>> {
    let n = spec.n();
    let ring = spec.ring();
    // coordinate matrix A[row = coordinate][col = basis index]
    let basis_coeffs: Vec<Vec<QuadRat>> = spec.basis.iter().map(|b| b.coeffs()).collect();
    let mut out = Vec::with_capacity(n * n);
    for x in layers {
        let rhs = x.coeffs();
        let mut a: Vec<Vec<QuadRat>> =
            (0..n).map(|r| (0..n).map(|c| basis_coeffs[c][r].clone()).chain([rhs[r].clone()]).collect()).collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::RankDeficient)?;
            a.swap(p, c);
            let inv = a[c][c].inv()?;
            for k in c..=n {
                a[c][k] = &a[c][k] * &inv;
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for k in c..=n {
                        let t = &f * &a[c][k];
                        a[r][k] = &a[r][k] - &t;
                    }
                }
            }
        }
        for row in a.iter().take(n) {
            let u = row[n].to_quad_int().ok_or_else(|| Error::Construction {
                stage: "symbols",
                detail: format!("layer {x} is not in the lattice"),
            })?;
            debug_assert_eq!(u.ring, ring);
            out.push(u);
        }
    }
    Ok(out)
}

/// One congruence m·y ≡ 1 (mod q).
#[derive(Clone, Debug)]
pub struct Congruence {
    pub multiplier: QuadInt,
    pub modulus: QuadInt,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub label: &'static str,
    pub witness: QuadInt,
    pub congruences: Vec<Congruence>,
    pub norm: BigInt,
    pub expected_norm: u64,
    pub norm_is_prime: bool,
    /// The CRT solution, reduced modulo the product of the moduli.
    pub crt: QuadInt,
    pub crt_agrees: bool,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.congruences.iter().all(|c| c.holds)
            && self.norm == BigInt::from(self.expected_norm)
            && self.norm_is_prime
            && self.crt_agrees
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "witness {}: y = {}", self.label, self.witness);
        for c in &self.congruences {
            let lhs = if c.multiplier.is_one() { "y".to_string() } else { format!("({})*y", c.multiplier) };
            let _ = writeln!(s, "  {lhs} = 1 mod ({}): {}", c.modulus, if c.holds { "ok" } else { "FAIL" });
        }
        let _ = writeln!(s, "  norm: {} (expected {}, prime: {})", self.norm, self.expected_norm, self.norm_is_prime);
        let _ = writeln!(s, "  crt: {} (agrees: {})", self.crt, self.crt_agrees);
        s
    }
}

fn witness(
    label: &'static str,
    y: QuadInt,
    system: &[(QuadInt, QuadInt)],
    expected_norm: u64,
) -> Result<WitnessReport> {
    let congruences: Vec<Congruence> = system
        .iter()
        .map(|(m, q)| {
            let lhs = &(m * &y) - &QuadInt::one(y.ring);
            Ok(Congruence { multiplier: m.clone(), modulus: q.clone(), holds: lhs.rem(q)?.is_zero() })
        })
        .collect::<Result<_>>()?;
    // residues m⁻¹ = conj(m) for units
    let residues: Vec<QuadInt> = system.iter().map(|(m, _)| m.conj()).collect();
    let moduli: Vec<QuadInt> = system.iter().map(|(_, q)| q.clone()).collect();
    let crt = crt_solve(&residues, &moduli)?;
    let product = moduli.iter().skip(1).fold(moduli[0].clone(), |acc, q| &acc * q);
    let crt_agrees = (&crt - &y).rem(&product)?.is_zero();
    let norm = y.norm();
    let norm_is_prime = norm.to_u64().is_some_and(is_prime);
    Ok(WitnessReport { label, witness: y, congruences, norm, expected_norm, norm_is_prime, crt, crt_agrees })
}

/// The four witnesses y used in the non-norm arguments for the 3×3, 4×4
/// and 6×6 codes, with their congruence systems.
pub fn arithmetic_witnesses() -> Result<Vec<WitnessReport>> {
    let e = |a, b| QuadInt::new(a, b, RingTag::Eisenstein);
    let g = |a, b| QuadInt::new(a, b, RingTag::Gaussian);
    Ok(vec![
        witness("C1", e(7, -3), &[(e(1, 0), e(-2, 1)), (e(0, 1), e(3, 1))], 79)?,
        witness("C2", e(-9, 5), &[(e(1, 0), e(-2, 1)), (e(-1, -1), e(3, 1))], 151)?,
        witness("D", g(-25, 12), &[(g(1, 0), g(2, 1)), (g(-1, 0), g(-2, 1)), (g(-1, 0), g(3, 0))], 769)?,
        witness("E", e(3, -8), &[(e(1, 0), e(-2, 1)), (e(-1, 0), e(3, 1)), (e(-1, 0), e(2, 0))], 97)?,
    ])
}

/// Gram = N·I and R·R^H = I to within `tol`; returns the numeric error.
pub fn unitarity_error(spec: &CodeSpec) -> f64 {
    let r = spec.generator_matrix();
    let n = spec.n();
    let p = r * r.adjoint();
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            let want = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((p[(a, b)] - Complex64::new(want, 0.0)).norm());
        }
    }
    worst
}

/// Exact value 1/x as a rational.
pub fn recip(x: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(x))
}

pub fn zero_rational() -> BigRational {
    BigRational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{make_code_3x3, make_code_4x4};

    #[test]
    fn golden_min_det_radius_one() {
        let spec = make_code_2x2(5).unwrap();
        let r = min_det_bruteforce(&spec, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.min_det, recip(5));
        assert!(r.argmin_verified);
        assert_eq!(r.evaluated, (6561 - 1) / 2);
        assert!(!r.zero_det_found);
        assert_eq!(r.ideal_norm_violations, 0);
    }

    #[test]
    fn brute_force_matches_exact_oracle_on_golden() {
        // exhaustive exact determinants over the radius-1 box
        let spec = make_code_2x2(5).unwrap();
        let syms = box_symbols(1, RingTag::Gaussian);
        let mut best: Option<BigInt> = None;
        for a in &syms {
            for b in &syms {
                for c in &syms {
                    for d in &syms {
                        let u = vec![a.clone(), b.clone(), c.clone(), d.clone()];
                        if u.iter().all(QuadInt::is_zero) {
                            continue;
                        }
                        let (det, _) = spec.codeword_det(&u).unwrap();
                        let nrm = det.num().norm();
                        best = Some(best.map_or(nrm.clone(), |b| b.min(nrm)));
                    }
                }
            }
        }
        assert_eq!(best.unwrap(), BigInt::from(5));
    }

    #[test]
    fn budget_guard() {
        let spec = make_code_4x4().unwrap();
        assert!(matches!(min_det_bruteforce(&spec, 1, DEFAULT_BUDGET), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn sampled_monotone_in_radius() {
        let spec = make_code_3x3().unwrap();
        let r1 = min_det_sampled(&spec, 1, 2000, 7).unwrap();
        let r2 = min_det_sampled(&spec, 2, 2000, 7).unwrap();
        assert!(r2.min_det <= r1.min_det);
        assert_eq!(r1.min_det, BigRational::new(BigInt::one(), BigInt::from(49)));
        assert_eq!(weight_two_count(9, 9), 9 * 8 + 36 * 64);
    }

    #[test]
    fn weight_two_enumeration_count() {
        let spec = make_code_3x3().unwrap();
        let r = min_det_sampled(&spec, 1, 0, 0).unwrap();
        assert_eq!(r.evaluated, weight_two_count(9, 9));
    }

    #[test]
    fn discreteness_small() {
        for spec in [make_code_2x2(5).unwrap(), make_code_3x3().unwrap(), make_code_4x4().unwrap()] {
            let r = check_det_discreteness(&spec, 200, 3);
            assert!(r.passed(), "{}", spec.name);
        }
    }

    #[test]
    fn norm_conditions() {
        assert!(matches!(norm_condition_2x2(5).unwrap(), NormCondition::Proven { .. }));
        assert!(matches!(norm_condition_2x2(13).unwrap(), NormCondition::Proven { .. }));
        match norm_condition_2x2(17).unwrap() {
            NormCondition::CounterexampleFound(x) => {
                assert_eq!(x.rel_norm().unwrap(), QuadRat::from_int(QuadInt::new(0, 1, RingTag::Gaussian)));
            }
            other => panic!("{other:?}"),
        }
        assert!(norm_condition_2x2(3).is_err());
    }

    #[test]
    fn q17_witness_has_norm_i() {
        let x = q17_witness().unwrap();
        assert_eq!(x.rel_norm().unwrap(), QuadRat::from_int(QuadInt::new(0, 1, RingTag::Gaussian)));
    }

    #[test]
    fn q17_codeword_is_singular() {
        let s = q17_singular_codeword().unwrap();
        assert!(s.det.is_zero());
        assert!(!s.golden_det.is_zero());
        assert!(s.symbols.iter().any(|u| !u.is_zero()));
    }

    #[test]
    fn witnesses() {
        let ws = arithmetic_witnesses().unwrap();
        let norms: Vec<u64> = ws.iter().map(|w| w.norm.to_u64().unwrap()).collect();
        assert_eq!(norms, vec![79, 151, 769, 97]);
        for w in &ws {
            assert!(w.passed(), "{}", w.to_text());
        }
    }

    #[test]
    fn witness_failure_is_reported() {
        let e = |a, b| QuadInt::new(a, b, RingTag::Eisenstein);
        let w = witness("bad", e(7, -2), &[(e(1, 0), e(-2, 1)), (e(0, 1), e(3, 1))], 79).unwrap();
        assert!(!w.passed());
        assert!(w.to_text().contains("FAIL"));
    }

    #[test]
    fn det_small_known_values() {
        let mut m = [[Complex64::new(0.0, 0.0); 6]; 6];
        m[0][0] = Complex64::new(2.0, 0.0);
        m[0][1] = Complex64::new(1.0, 1.0);
        m[1][0] = Complex64::new(0.0, 3.0);
        m[1][1] = Complex64::new(4.0, 0.0);
        let (d, bound) = det_small(&mut m, 2);
        // 8 − (1+i)(3i) = 8 − 3i + 3 = 11 − 3i
        assert!((d - Complex64::new(11.0, -3.0)).norm() < 1e-12);
        assert!(bound < 1e-9);
    }

    #[test]
    fn eisenstein_rounding() {
        let j = RingTag::Eisenstein.omega();
        let z = Complex64::new(3.0, 0.0) + j * -5.0 + Complex64::new(0.01, -0.02);
        assert_eq!(nearest_ring_element(z, RingTag::Eisenstein), (3, -5));
    }
}
