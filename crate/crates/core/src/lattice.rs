//! Hermitian lattices over Z[i] and Z[j]: trace-form Gram matrices, exact
//! LLL reduction, and Hermite normal forms of O_F-modules inside O_K.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::field::{FieldDesc, NfElement};
use crate::quad::{QuadInt, QuadRat, RingTag};

/// G[k][l] = Tr_{K/F}(ν_k · conj(ν_l)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianGram {
    pub ring: RingTag,
    pub entries: Vec<Vec<QuadRat>>,
}

impl HermitianGram {
    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn is_hermitian(&self) -> bool {
        let n = self.n();
        (0..n).all(|k| (0..n).all(|l| self.entries[l][k] == self.entries[k][l].conj()))
    }

    /// True when G = c·I.
    pub fn is_scalar(&self, c: i64) -> bool {
        let n = self.n();
        let cq = QuadRat::from_i64(c, self.ring);
        (0..n).all(|k| (0..n).all(|l| self.entries[k][l] == if k == l { cq.clone() } else { QuadRat::zero(self.ring) }))
    }

    /// Determinant (a positive rational for a positive definite form).
    pub fn det(&self) -> Result<BigRational> {
        let d = quad_rat_det(&self.entries)?;
        d.to_rational().ok_or_else(|| Error::Construction {
            stage: "gram",
            detail: "Hermitian determinant is not real".into(),
        })
    }

    /// T·G·T^H.
    pub fn transform(&self, t: &BasisTransform) -> HermitianGram {
        let n = self.n();
        let ring = self.ring;
        let tq: Vec<Vec<QuadRat>> =
            t.entries.iter().map(|r| r.iter().map(|x| QuadRat::from_int(x.clone())).collect()).collect();
        // M = T·G
        let m: Vec<Vec<QuadRat>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| (0..n).fold(QuadRat::zero(ring), |acc, k| &acc + &(&tq[r][k] * &self.entries[k][c])))
                    .collect()
            })
            .collect();
        let entries = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| (0..n).fold(QuadRat::zero(ring), |acc, k| &acc + &(&m[r][k] * &tq[c][k].conj())))
                    .collect()
            })
            .collect();
        HermitianGram { ring, entries }
    }
}

/// An n×n matrix over O_F; row k gives the new basis vector k as a
/// combination of the old ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisTransform {
    pub ring: RingTag,
    pub entries: Vec<Vec<QuadInt>>,
}

impl BasisTransform {
    pub fn identity(n: usize, ring: RingTag) -> Self {
        let entries = (0..n)
            .map(|r| (0..n).map(|c| if r == c { QuadInt::one(ring) } else { QuadInt::zero(ring) }).collect())
            .collect();
        BasisTransform { ring, entries }
    }

    pub fn from_i64_pairs(rows: &[Vec<(i64, i64)>], ring: RingTag) -> Self {
        let entries = rows.iter().map(|r| r.iter().map(|&(a, b)| QuadInt::new(a, b, ring)).collect()).collect();
        BasisTransform { ring, entries }
    }

    pub fn det(&self) -> QuadInt {
        let m: Vec<Vec<QuadRat>> =
            self.entries.iter().map(|r| r.iter().map(|x| QuadRat::from_int(x.clone())).collect()).collect();
        quad_rat_det(&m).expect("square").to_quad_int().expect("integral matrix has integral determinant")
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().is_unit()
    }

    /// New basis from the old: ν'_k = Σ_m T[k][m] ν_m.
    pub fn apply(&self, basis: &[NfElement]) -> Result<Vec<NfElement>> {
        if basis.len() != self.entries.len() {
            return Err(Error::InvalidArgument("basis and transform sizes differ".into()));
        }
        self.entries
            .iter()
            .map(|row| {
                let mut acc = NfElement::zero(basis[0].desc());
                for (c, b) in row.iter().zip(basis) {
                    if !c.is_zero() {
                        acc = acc.add(&b.scale_int(c))?;
                    }
                }
                Ok(acc)
            })
            .collect()
    }
}

fn quad_rat_det(m: &[Vec<QuadRat>]) -> Result<QuadRat> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("determinant of a non-square matrix".into()));
    }
    let ring = m[0][0].ring();
    let mut a = m.to_vec();
    let mut det = QuadRat::one(ring);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Ok(QuadRat::zero(ring));
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = &det * &a[c][c];
        let inv = a[c][c].inv()?;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] * &inv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] = &a[r][k] - &t;
            }
        }
    }
    Ok(det)
}

/// Exact trace-form Gram matrix of a list of field elements.
pub fn gram(basis: &[NfElement]) -> Result<HermitianGram> {
    let first = basis.first().ok_or_else(|| Error::InvalidArgument("empty basis".into()))?;
    let desc = first.desc().clone();
    let conj: Vec<NfElement> = basis.iter().map(NfElement::conj).collect();
    let mut entries = Vec::with_capacity(basis.len());
    for x in basis {
        if !Arc::ptr_eq(x.desc(), &desc) {
            return Err(Error::FieldMismatch);
        }
        let row: Result<Vec<QuadRat>> = conj.iter().map(|y| Ok(x.mul(y)?.trace_fast())).collect();
        entries.push(row?);
    }
    Ok(HermitianGram { ring: desc.ring, entries })
}

/// Gram–Schmidt data of a Hermitian Gram matrix: μ coefficients and the
/// squared lengths B_k of the orthogonalized vectors.
fn gso(g: &HermitianGram) -> Result<(Vec<Vec<QuadRat>>, Vec<BigRational>)> {
    let n = g.n();
    let ring = g.ring;
    let mut mu = vec![vec![QuadRat::zero(ring); n]; n];
    let mut b: Vec<BigRational> = Vec::with_capacity(n);
    for k in 0..n {
        for j in 0..k {
            let mut r = g.entries[k][j].clone();
            for i in 0..j {
                let bi = rational_to_quad(&b[i], ring);
                r = &r - &(&(&mu[j][i].conj() * &mu[k][i]) * &bi);
            }
            mu[k][j] = r.div(&rational_to_quad(&b[j], ring))?;
        }
        let mut bk = g.entries[k][k].to_rational().ok_or(Error::NotPositiveDefinite)?;
        for i in 0..k {
            bk -= mu[k][i].norm() * &b[i];
        }
        if !bk.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        b.push(bk);
    }
    Ok((mu, b))
}

fn rational_to_quad(r: &BigRational, ring: RingTag) -> QuadRat {
    QuadRat::new(QuadInt::from_int(r.numer().clone(), ring), r.denom().clone()).expect("nonzero denominator")
}

/// LLL reduction (δ = 3/4) of a Hermitian lattice over O_F given by its
/// exact Gram matrix. Returns the reduced Gram and the unimodular T with
/// G' = T·G·T^H.
///
/// The μ-coefficients are rounded coordinate-wise (the rounding of the
/// Euclidean division); conjugation is the ring's complex conjugation.
pub fn lll_reduce(g: &HermitianGram) -> Result<(HermitianGram, BasisTransform)> {
    if !g.is_hermitian() {
        return Err(Error::InvalidArgument("Gram matrix is not Hermitian".into()));
    }
    let n = g.n();
    let ring = g.ring;
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let mut t = BasisTransform::identity(n, ring);
    let mut cur = g.clone();
    gso(&cur)?;
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 100_000 {
            return Err(Error::Construction { stage: "lll", detail: "iteration limit reached".into() });
        }
        for j in (0..k).rev() {
            let (mu, _) = gso(&cur)?;
            let q = mu[k][j].round();
            if !q.is_zero() {
                for c in 0..n {
                    let sub = &q * &t.entries[j][c];
                    t.entries[k][c] = &t.entries[k][c] - &sub;
                }
                cur = g.transform(&t);
            }
        }
        let (mu, b) = gso(&cur)?;
        let rhs = (&delta - mu[k][k - 1].norm()) * &b[k - 1];
        if b[k] < rhs {
            t.entries.swap(k, k - 1);
            cur = g.transform(&t);
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    Ok((cur, t))
}

/// Coordinates of an integral element in the power basis, or an error if
/// it has a denominator.
fn int_coords(x: &NfElement) -> Result<Vec<QuadInt>> {
    if !x.is_integral() {
        return Err(Error::InvalidArgument(format!("{x} is not integral")));
    }
    Ok(x.numerators().to_vec())
}

/// Upper-triangular Hermite normal form of the O_F-row-module spanned by
/// `rows` (each of length n). Pivots are canonical associates and entries
/// above a pivot are Euclidean remainders modulo it.
pub fn hnf_rows(rows: &[Vec<QuadInt>], n: usize, ring: RingTag) -> Result<Vec<Vec<QuadInt>>> {
    if rows.iter().flatten().any(|x| x.ring != ring) {
        return Err(Error::InvalidArgument("module generators are not all over the same ring".into()));
    }
    let mut a: Vec<Vec<QuadInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    for c in 0..n {
        // gather a gcd into row c by repeated Euclidean steps
        loop {
            let live: Vec<usize> = (c..a.len()).filter(|&r| !a[r][c].is_zero()).collect();
            let Some(&best) = live.iter().min_by_key(|&&r| a[r][c].norm()) else {
                return Err(Error::RankDeficient);
            };
            a.swap(c, best);
            let mut changed = false;
            for r in c + 1..a.len() {
                if a[r][c].is_zero() {
                    continue;
                }
                let (q, _) = a[r][c].euclid_div(&a[c][c])?;
                for k in c..n {
                    let sub = &q * &a[c][k];
                    a[r][k] = &a[r][k] - &sub;
                }
                changed = true;
            }
            if !changed || (c + 1..a.len()).all(|r| a[r][c].is_zero()) {
                break;
            }
        }
        let (_, u) = a[c][c].canonical_with_unit();
        for k in c..n {
            a[c][k] = &u * &a[c][k];
        }
        for r in 0..c {
            let (q, _) = a[r][c].euclid_div(&a[c][c])?;
            if !q.is_zero() {
                for k in c..n {
                    let sub = &q * &a[c][k];
                    a[r][k] = &a[r][k] - &sub;
                }
            }
        }
        a.retain(|r| r.iter().any(|x| !x.is_zero()));
        if a.len() <= c {
            return Err(Error::RankDeficient);
        }
    }
    a.truncate(n);
    Ok(a)
}

/// HNF basis of the O_F-module generated by `generators` inside O_K.
pub fn hnf_module_basis(generators: &[NfElement], ring: RingTag) -> Result<Vec<NfElement>> {
    let first = generators.first().ok_or(Error::RankDeficient)?;
    let desc: Arc<FieldDesc> = first.desc().clone();
    if desc.ring != ring {
        return Err(Error::RingMismatch(desc.ring, ring));
    }
    let rows: Vec<Vec<QuadInt>> = generators.iter().map(int_coords).collect::<Result<_>>()?;
    let h = hnf_rows(&rows, desc.n, ring)?;
    h.into_iter().map(|r| NfElement::from_int_coords(&desc, r)).collect()
}

/// Generators {g·θ^k} of the O_K-ideal spanned by `gens`, as an O_F-module.
pub fn ideal_generators(gens: &[NfElement]) -> Result<Vec<NfElement>> {
    let first = gens.first().ok_or(Error::RankDeficient)?;
    let theta = NfElement::theta(first.desc());
    let mut out = Vec::new();
    for g in gens {
        let mut x = g.clone();
        for _ in 0..first.desc().n {
            out.push(x.clone());
            x = x.mul(&theta)?;
        }
    }
    Ok(out)
}

/// Index [O_K : M] of a full-rank module given by an HNF basis: the product
/// of the norms of the diagonal entries.
pub fn module_index(hnf_basis: &[NfElement]) -> BigInt {
    hnf_basis
        .iter()
        .enumerate()
        .map(|(k, x)| x.numerators()[k].norm())
        .fold(BigInt::one(), |acc, v| acc * v)
}

/// Self-duality of the rank-2 code lattice for p ≡ 1 (mod 4).
///
/// The scaled lattice (1/√p)·I is unimodular exactly when I is dual to
/// itself under the trace form, with the codifferent of K/Q(i) as the
/// bridge. Only the rank-2 consequence is checked here: the Gram matrix of {α, αθ} divided by p is an integral Z[i]-matrix of
/// determinant 1. Any basis of I gives the same answer.
pub fn check_selfdual_2x2(p: u64) -> Result<bool> {
    if !crate::quad::is_prime(p) || p % 4 != 1 {
        return Err(Error::UnsupportedPrime { p, reason: "need a prime p ≡ 1 (mod 4)".into() });
    }
    let desc = FieldDesc::quadratic(p)?;
    let alpha = crate::codes::find_generator_2x2(&desc, p, crate::codes::GENERATOR_BOX)?.alpha;
    let basis = [alpha.clone(), alpha.mul(&NfElement::theta(&desc))?];
    let g = gram(&basis)?;
    let inv_p = QuadRat::new(QuadInt::one(RingTag::Gaussian), BigInt::from(p))?;
    let integral = g.entries.iter().flatten().all(|x| (x * &inv_p).is_integral());
    let det = g.det()? / BigRational::from_integer(BigInt::from(p * p));
    Ok(integral && det.is_one())
}

#[cfg(test)]
mod tests {
    #[test]
    fn selfdual_2x2() {
        assert!(super::check_selfdual_2x2(5).unwrap());
        assert!(super::check_selfdual_2x2(13).unwrap());
        assert!(super::check_selfdual_2x2(3).is_err());
    }

    use super::*;
    use crate::field::FieldDesc;
    use proptest::prelude::*;

    #[test]
    fn power_basis_gram() {
        let f = FieldDesc::quartic().unwrap();
        let t = NfElement::theta(&f);
        let mut basis = vec![NfElement::one(&f)];
        for _ in 1..4 {
            basis.push(basis.last().unwrap().mul(&t).unwrap());
        }
        let g = gram(&basis).unwrap();
        assert_eq!(g.entries[1][1], QuadRat::from_i64(9, RingTag::Gaussian));
        assert!(g.is_hermitian());
        assert_eq!(g.det().unwrap(), BigRational::from_integer(BigInt::from(1125)));
    }

    #[test]
    fn single_element_gram() {
        let f = FieldDesc::cubic().unwrap();
        let v = NfElement::from_pairs(&f, &[(1, 1), (1, 0)]).unwrap();
        let g = gram(std::slice::from_ref(&v)).unwrap();
        assert_eq!(g.entries[0][0], v.mul(&v.conj()).unwrap().rel_trace().unwrap());
    }

    #[test]
    fn lll_keeps_scaled_identity() {
        let ring = RingTag::Eisenstein;
        let g = HermitianGram {
            ring,
            entries: (0..3)
                .map(|r| (0..3).map(|c| QuadRat::from_i64(if r == c { 7 } else { 0 }, ring)).collect())
                .collect(),
        };
        let (g2, t) = lll_reduce(&g).unwrap();
        assert!(g2.is_scalar(7));
        assert!(t.is_unimodular());
    }

    #[test]
    fn lll_finds_orthogonal_basis() {
        // a skewed basis of 5·Z[i]^2
        let ring = RingTag::Gaussian;
        let skew = BasisTransform::from_i64_pairs(&[vec![(1, 0), (0, 0)], vec![(3, 2), (1, 0)]], ring);
        let id = HermitianGram {
            ring,
            entries: vec![
                vec![QuadRat::from_i64(5, ring), QuadRat::zero(ring)],
                vec![QuadRat::zero(ring), QuadRat::from_i64(5, ring)],
            ],
        };
        let g = id.transform(&skew);
        assert!(!g.is_scalar(5));
        let (g2, t) = lll_reduce(&g).unwrap();
        assert!(g2.is_scalar(5));
        assert!(t.is_unimodular());
    }

    #[test]
    fn hnf_of_full_ring() {
        let f = FieldDesc::cubic().unwrap();
        let t = NfElement::theta(&f);
        let gens = vec![NfElement::one(&f), t.clone(), t.mul(&t).unwrap()];
        let h = hnf_module_basis(&gens, RingTag::Eisenstein).unwrap();
        assert_eq!(module_index(&h), BigInt::one());
    }

    #[test]
    fn hnf_principal_ideal_index() {
        let f = FieldDesc::cubic().unwrap();
        let alpha = NfElement::from_pairs(&f, &[(1, 1), (1, 0)]).unwrap();
        let h = hnf_module_basis(&ideal_generators(&[alpha]).unwrap(), RingTag::Eisenstein).unwrap();
        assert_eq!(module_index(&h), BigInt::from(7));
        let again = hnf_module_basis(&h, RingTag::Eisenstein).unwrap();
        assert_eq!(again, h);
    }

    #[test]
    fn hnf_rank_deficient() {
        let f = FieldDesc::cubic().unwrap();
        let t = NfElement::theta(&f);
        assert!(matches!(hnf_module_basis(&[t.clone(), t], RingTag::Eisenstein), Err(Error::RankDeficient)));
    }

    fn arb_transform(ring: RingTag, n: usize) -> impl Strategy<Value = BasisTransform> {
        // products of elementary matrices are unimodular
        proptest::collection::vec((0..n, 0..n, -3i64..3, -3i64..3), 0..8).prop_map(move |ops| {
            let mut t = BasisTransform::identity(n, ring);
            for (i, j, a, b) in ops {
                if i == j {
                    continue;
                }
                let q = QuadInt::new(a, b, ring);
                for c in 0..n {
                    let add = &q * &t.entries[j][c];
                    t.entries[i][c] = &t.entries[i][c] + &add;
                }
            }
            t
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn lll_preserves_determinant(t in arb_transform(RingTag::Eisenstein, 3)) {
            let f = FieldDesc::cubic().unwrap();
            let th = NfElement::theta(&f);
            let basis = vec![NfElement::one(&f), th.clone(), th.mul(&th).unwrap()];
            let g0 = gram(&t.apply(&basis).unwrap()).unwrap();
            let (g1, u) = lll_reduce(&g0).unwrap();
            prop_assert!(u.is_unimodular());
            prop_assert_eq!(g0.det().unwrap(), g1.det().unwrap());
            prop_assert_eq!(g0.transform(&u), g1);
        }

        #[test]
        fn hnf_is_idempotent(t in arb_transform(RingTag::Gaussian, 4)) {
            let f = FieldDesc::quartic().unwrap();
            let alpha = NfElement::from_pairs(&f, &[(1, -3), (0, 0), (0, 1)]).unwrap();
            let gens = t.apply(&ideal_generators(&[alpha]).unwrap()).unwrap();
            let h = hnf_module_basis(&gens, RingTag::Gaussian).unwrap();
            prop_assert_eq!(module_index(&h), BigInt::from(45));
            prop_assert_eq!(hnf_module_basis(&h, RingTag::Gaussian).unwrap(), h);
        }
    }
}
