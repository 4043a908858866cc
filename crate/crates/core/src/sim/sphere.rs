//! Exact ML decoding over a finite alphabet: QR followed by depth-first
//! Schnorr–Euchner enumeration, and an exhaustive reference decoder.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Allowed coordinate pairs (a, b) of one symbol, arranged for the
/// two-level search: b first, then the a values admissible for that b.
#[derive(Clone, Debug)]
pub struct Alphabet {
    coords: Vec<(f64, f64)>,
    b_values: Vec<f64>,
    /// per entry of `b_values`: (a, index into coords)
    a_given_b: Vec<Vec<(f64, usize)>>,
}

impl Alphabet {
    pub fn new(coords: &[(f64, f64)]) -> Self {
        let mut b_values: Vec<f64> = coords.iter().map(|c| c.1).collect();
        b_values.sort_by(f64::total_cmp);
        b_values.dedup();
        let a_given_b = b_values
            .iter()
            .map(|&b| coords.iter().enumerate().filter(|(_, c)| c.1 == b).map(|(k, c)| (c.0, k)).collect())
            .collect();
        Alphabet { coords: coords.to_vec(), b_values, a_given_b }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }

    /// Real coordinate vector (a_0, b_0, a_1, …) of a symbol index vector.
    pub fn to_real(&self, idx: &[usize]) -> DVector<f64> {
        DVector::from_iterator(2 * idx.len(), idx.iter().flat_map(|&k| [self.coords[k].0, self.coords[k].1]))
    }
}

/// Precomputed QR of a real generator G (square or tall).
pub struct SphereDecoder {
    q: DMatrix<f64>,
    r: DMatrix<f64>,
}

impl SphereDecoder {
    pub fn new(g: &DMatrix<f64>) -> Result<Self> {
        let m = g.ncols();
        if g.nrows() < m {
            return Err(Error::RankDeficient);
        }
        let qr = g.clone().qr();
        let (q, r) = (qr.q(), qr.r());
        let scale = (0..m).map(|k| r[(k, k)].abs()).fold(0.0, f64::max);
        if scale == 0.0 || (0..m).any(|k| r[(k, k)].abs() < 1e-10 * scale) {
            return Err(Error::RankDeficient);
        }
        Ok(SphereDecoder { q, r })
    }

    /// Closest point G·s to y with every symbol in `alpha`; returns the
    /// symbol indices and the squared distance.
    pub fn decode(&self, y: &DVector<f64>, alpha: &Alphabet) -> (Vec<usize>, f64) {
        let m = self.r.ncols();
        let z = self.q.tr_mul(y);
        // the part of y outside the column space adds a constant
        let offset = (y.norm_squared() - z.norm_squared()).max(0.0);
        let mut st = Search {
            r: &self.r,
            z: &z,
            alpha,
            s: vec![0.0; m],
            pick: vec![0; m / 2],
            best: f64::INFINITY,
            best_pick: vec![0; m / 2],
        };
        st.babai();
        st.dfs(m - 1, 0.0);
        (st.best_pick, st.best + offset)
    }
}

struct Search<'a> {
    r: &'a DMatrix<f64>,
    z: &'a DVector<f64>,
    alpha: &'a Alphabet,
    s: Vec<f64>,
    pick: Vec<usize>,
    best: f64,
    best_pick: Vec<usize>,
}

impl Search<'_> {
    fn center(&self, k: usize) -> f64 {
        let m = self.s.len();
        let mut acc = self.z[k];
        for c in k + 1..m {
            acc -= self.r[(k, c)] * self.s[c];
        }
        acc / self.r[(k, k)]
    }

    /// Candidates at level k as (value, increment, symbol index), nearest first.
    fn candidates(&self, k: usize) -> Vec<(f64, f64, usize)> {
        let c = self.center(k);
        let rkk = self.r[(k, k)];
        let mut v: Vec<(f64, f64, usize)> = if k % 2 == 1 {
            self.alpha.b_values.iter().enumerate().map(|(bi, &b)| (b, 0.0, bi)).collect()
        } else {
            let bi = self.pick[k / 2];
            self.alpha.a_given_b[bi].iter().map(|&(a, idx)| (a, 0.0, idx)).collect()
        };
        for e in v.iter_mut() {
            let d = rkk * (e.0 - c);
            e.1 = d * d;
        }
        v.sort_by(|x, y| x.1.total_cmp(&y.1));
        v
    }

    fn set(&mut self, k: usize, cand: (f64, f64, usize)) {
        self.s[k] = cand.0;
        // odd levels store the b-index until the even level fixes the symbol
        self.pick[k / 2] = cand.2;
    }

    fn babai(&mut self) {
        let m = self.s.len();
        let mut cost = 0.0;
        for k in (0..m).rev() {
            let c = self.candidates(k)[0];
            self.set(k, c);
            cost += c.1;
        }
        self.best = cost;
        self.best_pick = self.pick.clone();
    }

    fn dfs(&mut self, k: usize, partial: f64) {
        for cand in self.candidates(k) {
            let cost = partial + cand.1;
            if cost >= self.best {
                break;
            }
            self.set(k, cand);
            if k == 0 {
                self.best = cost;
                self.best_pick = self.pick.clone();
            } else {
                self.dfs(k - 1, cost);
            }
        }
    }
}

/// Convenience wrapper: decode y against G.
pub fn sphere_decode(y: &DVector<f64>, g: &DMatrix<f64>, alpha: &Alphabet) -> Result<Vec<usize>> {
    Ok(SphereDecoder::new(g)?.decode(y, alpha).0)
}

/// Reference ML by trying all |alphabet|^(cols/2) symbol vectors.
pub fn ml_exhaustive(y: &DVector<f64>, g: &DMatrix<f64>, alpha: &Alphabet) -> (Vec<usize>, f64) {
    let nsym = g.ncols() / 2;
    let q = alpha.len();
    let mut idx = vec![0usize; nsym];
    let mut best = (idx.clone(), f64::INFINITY);
    loop {
        let d = (y - g * alpha.to_real(&idx)).norm_squared();
        if d < best.1 {
            best = (idx.clone(), d);
        }
        let mut k = 0;
        loop {
            if k == nsym {
                return best;
            }
            idx[k] += 1;
            if idx[k] == q {
                idx[k] = 0;
                k += 1;
            } else {
                break;
            }
        }
    }
}
