//! Perfect space-time codes: code descriptions, generator matrices,
//! encoding and codeword determinants.
//!
//! A codeword carries n layers x_0, …, x_{n−1} ∈ I ⊂ O_K, each a Z[i]- or
//! Z[j]-combination of the ideal basis ν_k. Entry (r, c) of the codeword is
//! σ^r(x_{c−r}) on and above the diagonal and γ·σ^r(x_{n+c−r}) below it.

pub mod published;
pub mod text;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{det_cofactor, FieldDesc, NfElement};
use crate::fixed::Fx;
use crate::lattice::{gram, hnf_module_basis, ideal_generators, lll_reduce, module_index, BasisTransform, HermitianGram};
use crate::quad::{is_prime, two_squares, QuadInt, QuadRat, RingTag};

/// Which code to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CodeName {
    /// 2×2 code for p = 5.
    Golden,
    /// 2×2 code for a prime p ≡ 5 (mod 8).
    TwoByTwo(u64),
    ThreeByThree,
    FourByFour,
    SixBySix,
    /// The p = 17 construction, which is not a division algebra code.
    Broken17,
}

impl CodeName {
    pub const VALID: &'static str = "golden, 2x2:<p>, 3x3, 4x4, 6x6, 2x2:17-broken";

    pub fn build(self) -> Result<CodeSpec> {
        match self {
            CodeName::Golden => make_code_2x2(5),
            CodeName::TwoByTwo(p) => make_code_2x2(p),
            CodeName::ThreeByThree => make_code_3x3(),
            CodeName::FourByFour => make_code_4x4(),
            CodeName::SixBySix => make_code_6x6(),
            CodeName::Broken17 => make_code_2x2_broken17(),
        }
    }
}

impl FromStr for CodeName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "golden" => return Ok(CodeName::Golden),
            "3x3" => return Ok(CodeName::ThreeByThree),
            "4x4" => return Ok(CodeName::FourByFour),
            "6x6" => return Ok(CodeName::SixBySix),
            "2x2:17-broken" => return Ok(CodeName::Broken17),
            _ => {}
        }
        if let Some(p) = t.strip_prefix("2x2:") {
            if let Ok(p) = p.parse::<u64>() {
                return Ok(CodeName::TwoByTwo(p));
            }
        }
        Err(Error::UnknownCode(s.to_string()))
    }
}

impl fmt::Display for CodeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeName::Golden => f.write_str("golden"),
            CodeName::TwoByTwo(p) => write!(f, "2x2:{p}"),
            CodeName::ThreeByThree => f.write_str("3x3"),
            CodeName::FourByFour => f.write_str("4x4"),
            CodeName::SixBySix => f.write_str("6x6"),
            CodeName::Broken17 => f.write_str("2x2:17-broken"),
        }
    }
}

/// Everything needed to encode with one code.
#[derive(Clone, Debug)]
pub struct CodeSpec {
    pub name: String,
    pub desc: Arc<FieldDesc>,
    /// The unit γ placed below the diagonal.
    pub gamma: QuadInt,
    /// Ideal basis ν_0, …, ν_{n−1}.
    pub basis: Vec<NfElement>,
    /// N with Tr(ν_k·conj(ν_l)) = N·δ_kl; entries are scaled by 1/√N.
    pub norm_factor: u64,
    r: DMatrix<Complex64>,
    gamma_c: Complex64,
}

/// One codeword: exact layers and entries plus the normalized numeric matrix.
#[derive(Clone, Debug)]
pub struct Codeword {
    pub layers: Vec<NfElement>,
    /// Unnormalized exact entries (no 1/√N).
    pub exact: Vec<Vec<NfElement>>,
    pub numeric: DMatrix<Complex64>,
}

impl CodeSpec {
    /// Assemble a spec and check the Gram identity exactly.
    pub fn new(
        name: &str,
        desc: Arc<FieldDesc>,
        gamma: QuadInt,
        basis: Vec<NfElement>,
        norm_factor: u64,
    ) -> Result<Self> {
        let n = desc.n;
        if basis.len() != n {
            return Err(Error::Construction { stage: "spec", detail: format!("{} basis elements for degree {n}", basis.len()) });
        }
        if gamma.ring != desc.ring || !gamma.is_unit() {
            return Err(Error::Construction { stage: "spec", detail: format!("gamma = {gamma} is not a unit of O_F") });
        }
        if basis.iter().any(|b| !Arc::ptr_eq(b.desc(), &desc)) {
            return Err(Error::FieldMismatch);
        }
        if basis.iter().any(|b| !b.is_integral()) {
            return Err(Error::Construction { stage: "spec", detail: "basis elements must lie in O_K".into() });
        }
        let g = gram(&basis)?;
        if !g.is_scalar(norm_factor as i64) {
            return Err(Error::Construction {
                stage: "spec",
                detail: format!("Gram matrix is not {norm_factor}·I: {}", gram_to_string(&g)),
            });
        }
        let scale = Fx::from_i64(norm_factor as i64).sqrt();
        let r = DMatrix::from_fn(n, n, |l, k| basis[k].embed_hp(l).scale(&(&Fx::one() / &scale)).to_c64());
        let gamma_c = gamma.to_complex();
        Ok(CodeSpec { name: name.to_string(), desc, gamma, basis, norm_factor, r, gamma_c })
    }

    pub fn n(&self) -> usize {
        self.desc.n
    }

    pub fn ring(&self) -> RingTag {
        self.desc.ring
    }

    pub fn gram(&self) -> Result<HermitianGram> {
        gram(&self.basis)
    }

    /// R[l][k] = σ_l(ν_k)/√N.
    pub fn generator_matrix(&self) -> &DMatrix<Complex64> {
        &self.r
    }

    pub fn gamma_numeric(&self) -> Complex64 {
        self.gamma_c
    }

    fn check_symbols(&self, u: &[QuadInt]) -> Result<()> {
        let n = self.n();
        if u.len() != n * n {
            return Err(Error::InvalidArgument(format!("expected {} symbols, got {}", n * n, u.len())));
        }
        if let Some(x) = u.iter().find(|x| x.ring != self.ring()) {
            return Err(Error::RingMismatch(self.ring(), x.ring));
        }
        Ok(())
    }

    /// x_ℓ = Σ_k u[ℓn+k]·ν_k.
    pub fn layers(&self, u: &[QuadInt]) -> Result<Vec<NfElement>> {
        self.check_symbols(u)?;
        let n = self.n();
        (0..n)
            .map(|l| {
                let mut acc = NfElement::zero(&self.desc);
                for k in 0..n {
                    let c = &u[l * n + k];
                    if !c.is_zero() {
                        acc = acc.add(&self.basis[k].scale_int(c))?;
                    }
                }
                Ok(acc)
            })
            .collect()
    }

    /// Unnormalized codeword entries from layers.
    pub fn exact_matrix(&self, layers: &[NfElement]) -> Vec<Vec<NfElement>> {
        let n = self.n();
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        if c >= r {
                            layers[c - r].sigma(r)
                        } else {
                            layers[n + c - r].sigma(r).scale_int(&self.gamma)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn encode(&self, u: &[QuadInt]) -> Result<Codeword> {
        let layers = self.layers(u)?;
        let exact = self.exact_matrix(&layers);
        let uc: Vec<Complex64> = u.iter().map(QuadInt::to_complex).collect();
        let numeric = self.encode_numeric(&uc);
        Ok(Codeword { layers, exact, numeric })
    }

    /// Normalized codeword for complex symbol values (no exactness).
    pub fn encode_numeric(&self, u: &[Complex64]) -> DMatrix<Complex64> {
        let n = self.n();
        assert_eq!(u.len(), n * n, "symbol count");
        // emb[l][r] = σ_r(x_l)/√N
        let mut emb = vec![vec![Complex64::zero(); n]; n];
        for (l, row) in emb.iter_mut().enumerate() {
            for (r, e) in row.iter_mut().enumerate() {
                *e = (0..n).map(|k| self.r[(r, k)] * u[l * n + k]).sum();
            }
        }
        DMatrix::from_fn(n, n, |r, c| if c >= r { emb[c - r][r] } else { self.gamma_c * emb[n + c - r][r] })
    }

    /// Exact unnormalized determinant (an element of O_F) and the
    /// normalized numeric value det·N^{−n/2}.
    pub fn codeword_det(&self, u: &[QuadInt]) -> Result<(QuadRat, Complex64)> {
        let cw = self.encode(u)?;
        let d = det_cofactor(&cw.exact)?;
        let exact = d.in_base_field().ok_or_else(|| Error::Construction {
            stage: "determinant",
            detail: format!("determinant {d} is not in the base field"),
        })?;
        let scale = (self.norm_factor as f64).powf(self.n() as f64 / 2.0);
        Ok((exact.clone(), exact.to_complex() / scale))
    }
}

pub fn gram_to_string(g: &HermitianGram) -> String {
    g.entries
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
        .collect::<Vec<_>>()
        .join("; ")
}

// ---------------------------------------------------------------------------
// 2×2 family
// ---------------------------------------------------------------------------

/// Default half-width of the coefficient box for the generator search.
pub const GENERATOR_BOX: i64 = 8;

/// Result of the 2×2 generator search.
#[derive(Clone, Debug)]
pub struct Generator2x2 {
    pub alpha: NfElement,
    pub norm: QuadInt,
    pub target: QuadInt,
}

/// Search α = a + bθ (a, b ∈ Z[i], |Re|, |Im| ≤ bound) with N(α) an
/// associate of u + iv, falling back to u − iv.
///
/// Ties are broken by the smallest coefficient shell, then by an exact
/// match with the target, then by the lexicographically largest
/// (Re a, Im a, Re b, Im b).
pub fn find_generator_2x2(desc: &Arc<FieldDesc>, p: u64, bound: i64) -> Result<Generator2x2> {
    let (u, v) = two_squares(p)?;
    let c = (p as i64 - 1) / 4;
    let (u, v) = (u as i64, v as i64);
    // N(a + bθ) = a² + ab − c·b² since θ·σ(θ) = −c and θ + σ(θ) = 1
    let gmul = |x: (i64, i64), y: (i64, i64)| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
    let units = [(1, 0), (0, 1), (-1, 0), (0, -1)];
    for target in [(u, v), (u, -v)] {
        let assoc: Vec<(i64, i64)> = units.iter().map(|&w| gmul(w, target)).collect();
        let mut best: Option<((i64, bool, [i64; 4]), (i64, i64))> = None;
        for a0 in -bound..=bound {
            for a1 in -bound..=bound {
                for b0 in -bound..=bound {
                    for b1 in -bound..=bound {
                        let (a, b) = ((a0, a1), (b0, b1));
                        let aa = gmul(a, a);
                        let ab = gmul(a, b);
                        let bb = gmul(b, b);
                        let nrm = (aa.0 + ab.0 - c * bb.0, aa.1 + ab.1 - c * bb.1);
                        if !assoc.contains(&nrm) {
                            continue;
                        }
                        let shell = a0.abs().max(a1.abs()).max(b0.abs()).max(b1.abs());
                        let exact = nrm == target;
                        let key = (shell, exact, [a0, a1, b0, b1]);
                        let better = match &best {
                            None => true,
                            Some((k, _)) => {
                                (key.0 < k.0)
                                    || (key.0 == k.0 && key.1 && !k.1)
                                    || (key.0 == k.0 && key.1 == k.1 && key.2 > k.2)
                            }
                        };
                        if better {
                            best = Some((key, nrm));
                        }
                    }
                }
            }
        }
        if let Some(((_, _, t), nrm)) = best {
            let alpha = NfElement::from_pairs(desc, &[(t[0], t[1]), (t[2], t[3])])?;
            return Ok(Generator2x2 {
                alpha,
                norm: QuadInt::new(nrm.0, nrm.1, RingTag::Gaussian),
                target: QuadInt::new(target.0, target.1, RingTag::Gaussian),
            });
        }
    }
    Err(Error::GeneratorNotFound { target: format!("{u}+{v}i"), bound })
}

/// Unitary 2×2 code for p ≡ 5 (mod 8), γ = i.
pub fn make_code_2x2(p: u64) -> Result<CodeSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 8 != 5 {
        return Err(Error::UnsupportedPrime {
            p,
            reason: "the 2x2 construction requires p ≡ 5 (mod 8) so that i is not a relative norm".into(),
        });
    }
    let name = if p == 5 { "golden".to_string() } else { format!("2x2:{p}") };
    build_2x2(p, &name, GENERATOR_BOX)
}

/// The same recipe at p = 17, where i is a relative norm and the code
/// loses full diversity.
pub fn make_code_2x2_broken17() -> Result<CodeSpec> {
    build_2x2(17, "2x2:17-broken", GENERATOR_BOX)
}

/// Generator search plus LLL unitarization for any prime p ≡ 1 (mod 4).
pub fn build_2x2(p: u64, name: &str, bound: i64) -> Result<CodeSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let desc = FieldDesc::quadratic(p)?;
    let g = find_generator_2x2(&desc, p, bound)?;
    let theta = NfElement::theta(&desc);
    let initial = vec![g.alpha.clone(), g.alpha.mul(&theta)?];
    let basis = unitarize(&initial, p as i64, "lll")?;
    CodeSpec::new(name, desc, QuadInt::omega(RingTag::Gaussian), basis, p)
}

/// LLL-reduce a basis and insist on Gram = N·I.
fn unitarize(basis: &[NfElement], norm: i64, stage: &'static str) -> Result<Vec<NfElement>> {
    let g0 = gram(basis)?;
    let (g1, t) = lll_reduce(&g0)?;
    if !g1.is_scalar(norm) {
        return Err(Error::Construction {
            stage,
            detail: format!("reduced Gram is not {norm}·I: {}", gram_to_string(&g1)),
        });
    }
    t.apply(basis)
}

// ---------------------------------------------------------------------------
// 3×3 and 4×4
// ---------------------------------------------------------------------------

/// 3×3 code over Z[j] with γ = j and N = 7.
pub fn make_code_3x3() -> Result<CodeSpec> {
    let desc = FieldDesc::cubic()?;
    let e = |v: &[(i64, i64)]| NfElement::from_pairs(&desc, v);
    let basis = vec![
        e(&[(1, 1), (1, 0)])?,
        e(&[(-1, -2), (0, 0), (0, 1)])?,
        e(&[(-1, -2), (1, 1), (1, 1)])?,
    ];
    CodeSpec::new("3x3", desc.clone(), QuadInt::omega(RingTag::Eisenstein), basis, 7)
}

/// The principal ideal behind the 3×3 code.
pub fn alpha_3x3(desc: &Arc<FieldDesc>) -> Result<NfElement> {
    NfElement::from_pairs(desc, &[(1, 1), (1, 0)])
}

/// 4×4 code over Z[i] with γ = i and N = 15.
pub fn make_code_4x4() -> Result<CodeSpec> {
    let desc = FieldDesc::quartic()?;
    let e = |v: &[(i64, i64)]| NfElement::from_pairs(&desc, v);
    let basis = vec![
        e(&[(1, -3), (0, 0), (0, 1)])?,
        e(&[(0, 0), (1, -3), (0, 0), (0, 1)])?,
        e(&[(0, -1), (-3, 4), (0, 0), (1, -1)])?,
        e(&[(-1, 1), (-3, 0), (1, 0), (1, 0)])?,
    ];
    CodeSpec::new("4x4", desc.clone(), QuadInt::omega(RingTag::Gaussian), basis, 15)
}

/// The principal ideal behind the 4×4 code.
pub fn alpha_4x4(desc: &Arc<FieldDesc>) -> Result<NfElement> {
    NfElement::from_pairs(desc, &[(1, -3), (0, 0), (0, 1)])
}

// ---------------------------------------------------------------------------
// 6×6
// ---------------------------------------------------------------------------

/// Intermediate results of the 6×6 construction.
#[derive(Clone, Debug)]
pub struct Pipeline6 {
    /// t with p_θ(X) ≡ (X − t)^6 (mod 7).
    pub t: i64,
    /// The prime of Z[j] above 7 used as the first ideal generator.
    pub prime: QuadInt,
    pub hnf: Vec<NfElement>,
    /// [O_K : I] as an abelian group index, i.e. N(I).
    pub index: BigInt,
    pub transform: BasisTransform,
    pub basis: Vec<NfElement>,
}

/// Build the norm-7 ideal (π, θ − t) for a prime π | 7 of Z[j] and reduce
/// it to an orthogonal basis.
pub fn pipeline_6x6(prime: &QuadInt) -> Result<Pipeline6> {
    let desc = FieldDesc::sextic()?;
    let n = desc.n;
    // stage 1: total ramification of 7
    let t = (0..7i64)
        .find(|&t| {
            let target = binomial_power_mod(t, n, 7);
            desc.min_poly.iter().zip(&target).all(|(c, w)| {
                let c = (c % BigInt::from(7)).to_i64().unwrap().rem_euclid(7);
                c == *w
            })
        })
        .ok_or_else(|| Error::Construction {
            stage: "ramification",
            detail: "minimal polynomial is not a sixth power modulo 7".into(),
        })?;
    if prime.norm() != BigInt::from(7) {
        return Err(Error::Construction { stage: "ramification", detail: format!("{prime} does not have norm 7") });
    }
    // stage 2: HNF of the O_F-module generated by {π, θ − t}·θ^k
    let pi = NfElement::from_int_coords(&desc, vec![prime.clone()])?;
    let tt = NfElement::theta(&desc).sub(&NfElement::from_pairs(&desc, &[(t, 0)])?)?;
    let hnf = hnf_module_basis(&ideal_generators(&[pi, tt])?, RingTag::Eisenstein)?;
    // stage 3: index
    let index = module_index(&hnf);
    if index != BigInt::from(7) {
        return Err(Error::Construction { stage: "ideal-norm", detail: format!("module index is {index}, expected 7") });
    }
    // stage 4: LLL to Gram = 14·I
    let g0 = gram(&hnf)?;
    let (g1, transform) = lll_reduce(&g0)?;
    if !g1.is_scalar(14) {
        return Err(Error::Construction {
            stage: "lll",
            detail: format!("reduced Gram is not 14·I: {}", gram_to_string(&g1)),
        });
    }
    let basis = transform.apply(&hnf)?;
    Ok(Pipeline6 { t, prime: prime.clone(), hnf, index, transform, basis })
}

/// Coefficients of (X − t)^n modulo m, ascending.
fn binomial_power_mod(t: i64, n: usize, m: i64) -> Vec<i64> {
    let mut poly = vec![1i64];
    for _ in 0..n {
        let mut next = vec![0i64; poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = (next[i + 1] + c).rem_euclid(m);
            next[i] = (next[i] - c * t).rem_euclid(m);
        }
        poly = next;
    }
    poly
}

/// The prime above 7 whose ideal reproduces the published 6×6 matrix.
pub fn prime_6x6() -> QuadInt {
    QuadInt::new(3, 1, RingTag::Eisenstein)
}

/// 6×6 code over Z[j] with γ = −j and N = 14.
pub fn make_code_6x6() -> Result<CodeSpec> {
    let p = pipeline_6x6(&prime_6x6())?;
    let desc = p.basis[0].desc().clone();
    CodeSpec::new("6x6", desc, QuadInt::new(0, -1, RingTag::Eisenstein), p.basis, 14)
}
