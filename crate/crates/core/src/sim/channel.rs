//! Quasi-static Rayleigh channel Y = H·X + W and the real lattice model
//! that the decoder works with.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::codes::CodeSpec;

/// Independent stream for one trial: the ChaCha key is built from
/// (seed, SNR index, trial index), so trials can run in any order.
pub fn trial_rng(seed: u64, snr_idx: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&snr_idx.to_le_bytes());
    key[16..24].copy_from_slice(&trial.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Two independent N(0, 1) samples by Box–Muller.
pub fn gaussian_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    // 1 − U avoids ln(0)
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    (r * t.cos(), r * t.sin())
}

/// Circularly symmetric complex Gaussian with E|z|² = var.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, var: f64) -> Complex64 {
    let (a, b) = gaussian_pair(rng);
    let s = (var / 2.0).sqrt();
    Complex64::new(a * s, b * s)
}

/// One channel use: fading matrix and the noise variance E|w|² of each
/// complex receive sample.
#[derive(Clone, Debug)]
pub struct ChannelRealization {
    pub h: DMatrix<Complex64>,
    pub noise_var: f64,
}

impl ChannelRealization {
    /// n_rx × n_tx matrix with i.i.d. unit-variance entries.
    pub fn draw<R: Rng + ?Sized>(n_rx: usize, n_tx: usize, noise_var: f64, rng: &mut R) -> Self {
        let h = DMatrix::from_fn(n_rx, n_tx, |_, _| complex_gaussian(rng, 1.0));
        ChannelRealization { h, noise_var }
    }

    pub fn identity(n: usize) -> Self {
        ChannelRealization { h: DMatrix::identity(n, n), noise_var: 0.0 }
    }
}

/// Y = H·X + W.
pub fn transmit<R: Rng + ?Sized>(x: &DMatrix<Complex64>, ch: &ChannelRealization, rng: &mut R) -> DMatrix<Complex64> {
    let mut y = &ch.h * x;
    if ch.noise_var > 0.0 {
        for v in y.iter_mut() {
            *v += complex_gaussian(rng, ch.noise_var);
        }
    }
    y
}

/// Complex matrix stacked as [Re vec(M); Im vec(M)] (column-major vec).
pub fn real_vec(m: &DMatrix<Complex64>) -> DVector<f64> {
    let k = m.len();
    DVector::from_fn(2 * k, |r, _| if r < k { m[r].re } else { m[r - k].im })
}

/// Codewords of the unit symbol vectors, B_s = encode(e_s).
pub fn basis_codewords(spec: &CodeSpec) -> Vec<DMatrix<Complex64>> {
    let m = spec.n() * spec.n();
    (0..m)
        .map(|s| {
            let mut u = vec![Complex64::new(0.0, 0.0); m];
            u[s] = Complex64::new(1.0, 0.0);
            spec.encode_numeric(&u)
        })
        .collect()
}

/// Real 2T·n_rx × 2n² generator mapping the symbol coordinates
/// (a_0, b_0, a_1, b_1, …), with u_s = a_s + b_s·ω, to real_vec(H·X).
pub fn lattice_model_from(basis: &[DMatrix<Complex64>], omega: Complex64, h: &DMatrix<Complex64>) -> DMatrix<f64> {
    let rows = 2 * h.nrows() * basis[0].ncols();
    let mut g = DMatrix::zeros(rows, 2 * basis.len());
    for (s, b) in basis.iter().enumerate() {
        let hb = h * b;
        g.set_column(2 * s, &real_vec(&hb));
        g.set_column(2 * s + 1, &real_vec(&(hb * omega)));
    }
    g
}

/// Real lattice model of a code seen through H; ω is i or j by ring.
pub fn real_lattice_model(spec: &CodeSpec, h: &DMatrix<Complex64>) -> DMatrix<f64> {
    lattice_model_from(&basis_codewords(spec), spec.ring().omega(), h)
}
