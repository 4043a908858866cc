//! Published numeric generator matrices and a matcher that compares them
//! with a computed R up to the symmetries that leave the code unchanged.
//!
//! The prints differ from our R = (σ_l(ν_k))_{l,k} in orientation (some are
//! transposed), in the order of the embeddings, in the order of the basis
//! and in unit multiples of basis elements. The matcher searches over all
//! of these.

use nalgebra::DMatrix;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A printed matrix with its stated precision.
#[derive(Clone, Debug)]
pub struct PrintedMatrix {
    pub label: &'static str,
    pub entries: Vec<Vec<Complex64>>,
    pub tol: f64,
}

/// 3×3 print; rows are basis elements, columns embeddings.
pub fn printed_3x3() -> PrintedMatrix {
    PrintedMatrix {
        label: "3x3",
        entries: vec![
            vec![c(0.66030, 0.32733), c(0.02077, 0.32733), c(-0.49209, 0.32733)],
            vec![c(-0.29386, -0.14567), c(-0.03743, -0.58982), c(-0.61362, 0.40817)],
            vec![c(0.52952, 0.26250), c(-0.04667, -0.73550), c(0.27309, -0.18165)],
        ],
        tol: 1e-4,
    }
}

/// 4×4 print; rows are embeddings, columns basis elements.
pub fn printed_4x4() -> PrintedMatrix {
    PrintedMatrix {
        label: "4x4",
        entries: vec![
            vec![c(0.2582, -0.3122), c(0.3455, -0.4178), c(-0.4178, 0.5051), c(-0.2136, 0.2582)],
            vec![c(0.2582, 0.0873), c(0.4718, 0.1596), c(0.1596, 0.054), c(0.7633, 0.2582)],
            vec![c(0.2582, 0.2136), c(-0.5051, -0.4178), c(-0.4178, -0.3455), c(0.3122, 0.2582)],
            vec![c(0.2582, -0.7633), c(-0.054, 0.1596), c(0.1596, -0.4718), c(-0.0873, 0.2582)],
        ],
        tol: 1e-3,
    }
}

/// 6×6 print, already divided by √14.
pub fn printed_6x6() -> PrintedMatrix {
    let raw = [
        [c(1.9498, 0.0), c(1.3019, -0.8660), c(-0.0549, -0.8660), c(-1.7469, -0.8660), c(1.5636, 0.0), c(0.8677, 0.0)],
        [c(0.8677, 0.0), c(-1.7469, -0.8660), c(1.3019, -0.8660), c(-0.0549, -0.8660), c(-1.9498, 0.0), c(1.5636, 0.0)],
        [c(1.5636, 0.0), c(-0.0549, -0.8660), c(-1.7469, -0.8660), c(1.3019, -0.8660), c(-0.8677, 0.0), c(-1.9498, 0.0)],
        [c(-1.9498, 0.0), c(1.3019, -0.8660), c(-0.0549, -0.8660), c(-1.7469, -0.8660), c(-1.5636, 0.0), c(-0.8677, 0.0)],
        [c(-0.8677, 0.0), c(-1.7469, -0.8660), c(1.3019, -0.8660), c(-0.0549, -0.8660), c(1.9498, 0.0), c(-1.5636, 0.0)],
        [c(-1.5636, 0.0), c(-0.0549, -0.8660), c(-1.7469, -0.8660), c(1.3019, -0.8660), c(0.8677, 0.0), c(1.9498, 0.0)],
    ];
    let s = 14f64.sqrt();
    PrintedMatrix {
        label: "6x6",
        entries: raw.iter().map(|r| r.iter().map(|z| z / s).collect()).collect(),
        tol: 1e-3,
    }
}

/// How a computed R was aligned with a print.
#[derive(Clone, Debug)]
pub struct MatchReport {
    /// The print had rows indexed by basis elements.
    pub transposed: bool,
    /// printed embedding row a ↔ our row `row_perm[a]`.
    pub row_perm: Vec<usize>,
    /// printed basis column b ↔ our column `col_perm[b]` times `phases[b]`.
    pub col_perm: Vec<usize>,
    pub phases: Vec<Complex64>,
    pub max_err: f64,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap(n, &mut cur, &mut out);
    out
}

fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k - 1 {
        heap(k - 1, a, out);
        if k % 2 == 0 {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap(k - 1, a, out);
}

/// Align `ours` with a printed matrix: try both orientations and every
/// embedding order, then match each printed column to an unused column of
/// ours times a unit. Returns the alignment with the smallest maximal
/// entry error, if it is within the print's tolerance.
pub fn match_printed(ours: &DMatrix<Complex64>, printed: &PrintedMatrix, units: &[Complex64]) -> Option<MatchReport> {
    let n = ours.nrows();
    if printed.entries.len() != n || printed.entries.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut best: Option<MatchReport> = None;
    for transposed in [false, true] {
        let q = |a: usize, b: usize| if transposed { printed.entries[b][a] } else { printed.entries[a][b] };
        for perm in permutations(n) {
            let mut used = vec![false; n];
            let mut col_perm = Vec::with_capacity(n);
            let mut phases = Vec::with_capacity(n);
            let mut worst = 0.0f64;
            for b in 0..n {
                let mut pick: Option<(usize, Complex64, f64)> = None;
                for k in (0..n).filter(|&k| !used[k]) {
                    for &w in units {
                        let err = (0..n).map(|a| (w * ours[(perm[a], k)] - q(a, b)).norm()).fold(0.0, f64::max);
                        if err <= printed.tol && pick.map_or(true, |p| err < p.2) {
                            pick = Some((k, w, err));
                        }
                    }
                }
                let Some((k, w, err)) = pick else {
                    worst = f64::INFINITY;
                    break;
                };
                used[k] = true;
                col_perm.push(k);
                phases.push(w);
                worst = worst.max(err);
            }
            if worst.is_finite() && best.as_ref().map_or(true, |m| worst < m.max_err) {
                best = Some(MatchReport { transposed, row_perm: perm, col_perm, phases, max_err: worst });
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
        let mut p = permutations(3);
        p.sort();
        p.dedup();
        assert_eq!(p.len(), 6);
    }

    #[test]
    fn matches_itself_under_symmetries() {
        let pm = printed_4x4();
        let m = DMatrix::from_fn(4, 4, |r, c| pm.entries[r][c]);
        // permute rows and columns, multiply a column by −i
        let shuffled = DMatrix::from_fn(4, 4, |r, c| {
            let z = m[((r + 1) % 4, (c + 2) % 4)];
            if c == 1 {
                z * c_unit(0.0, -1.0)
            } else {
                z
            }
        });
        let units = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        let rep = match_printed(&shuffled, &pm, &units).unwrap();
        assert!(rep.max_err < 1e-12);
        assert!(!rep.transposed);
    }

    fn c_unit(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn printed_matrices_are_unitary() {
        for pm in [printed_3x3(), printed_4x4(), printed_6x6()] {
            let n = pm.entries.len();
            let m = DMatrix::from_fn(n, n, |r, c| pm.entries[r][c]);
            let p = &m * m.adjoint();
            let err = (p - DMatrix::<Complex64>::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < 10.0 * pm.tol, "{}: {err}", pm.label);
        }
    }
}
