//! QAM and hexagonal constellations with minimum distance 2.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::quad::{QuadInt, RingTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Qam,
    Hex,
}

impl Family {
    pub fn ring(self) -> RingTag {
        match self {
            Family::Qam => RingTag::Gaussian,
            Family::Hex => RingTag::Eisenstein,
        }
    }
}

/// A finite symbol alphabet. Each point is `a + b·ω` (ω = i for QAM,
/// ω = j for HEX); `coords` holds (a, b), which are integers for QAM and
/// for 4/8-HEX and half-integers for 16-HEX.
#[derive(Clone, Debug)]
pub struct Constellation {
    pub family: Family,
    pub points: Vec<Complex64>,
    pub coords: Vec<(f64, f64)>,
    pub labels: Vec<u32>,
    /// Exact average energy E|s|².
    pub avg_energy: Ratio<i64>,
    pub min_distance: f64,
}

impl Constellation {
    pub fn q(&self) -> usize {
        self.points.len()
    }

    pub fn name(&self) -> String {
        match self.family {
            Family::Qam => format!("qam{}", self.q()),
            Family::Hex => format!("hex{}", self.q()),
        }
    }

    pub fn ring(&self) -> RingTag {
        self.family.ring()
    }

    pub fn bits(&self) -> f64 {
        (self.q() as f64).log2()
    }

    pub fn avg_energy_f64(&self) -> f64 {
        *self.avg_energy.numer() as f64 / *self.avg_energy.denom() as f64
    }

    /// The point as an element of O_F, if it is integral.
    pub fn exact_point(&self, idx: usize) -> Option<QuadInt> {
        let (a, b) = self.coords[idx];
        (a.fract() == 0.0 && b.fract() == 0.0).then(|| QuadInt::new(a as i64, b as i64, self.ring()))
    }
}

impl fmt::Display for Constellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Constellation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let unknown = || Error::UnknownConstellation(s.clone());
        if let Some(q) = s.strip_prefix("qam") {
            make_qam(q.parse().map_err(|_| unknown())?).map_err(|_| unknown())
        } else if let Some(q) = s.strip_prefix("hex") {
            make_hex(q.parse().map_err(|_| unknown())?).map_err(|_| unknown())
        } else {
            Err(unknown())
        }
    }
}

fn gray(k: u32) -> u32 {
    k ^ (k >> 1)
}

fn pam(m: i64) -> Vec<i64> {
    (0..m).map(|k| 2 * k - (m - 1)).collect()
}

/// Odd-integer QAM grids: 4, 16, 64 square; 8 is the 4×2 rectangle
/// {±1, ±3} × {±1}. Labels are Gray per axis.
pub fn make_qam(q: usize) -> Result<Constellation> {
    let (mi, mq) = match q {
        4 => (2, 2),
        8 => (4, 2),
        16 => (4, 4),
        64 => (8, 8),
        _ => return Err(Error::UnknownConstellation(format!("qam{q}"))),
    };
    let qbits = (mq as u32).trailing_zeros();
    let mut points = Vec::with_capacity(q);
    let mut coords = Vec::with_capacity(q);
    let mut labels = Vec::with_capacity(q);
    let mut energy = 0i64;
    for (ki, &a) in pam(mi).iter().enumerate() {
        for (kq, &b) in pam(mq).iter().enumerate() {
            points.push(Complex64::new(a as f64, b as f64));
            coords.push((a as f64, b as f64));
            labels.push((gray(ki as u32) << qbits) | gray(kq as u32));
            energy += a * a + b * b;
        }
    }
    let min_distance = min_distance(&points);
    Ok(Constellation { family: Family::Qam, points, coords, labels, avg_energy: Ratio::new(energy, q as i64), min_distance })
}

/// The q lowest-energy points of 2·Z[j] + s, with s = 1 for q = 4, 8 and
/// s = 1/2 for q = 16. Ties at the cut would make the shape ambiguous;
/// none occur for the supported sizes and this is asserted.
pub fn make_hex(q: usize) -> Result<Constellation> {
    // shift in halves: s = two_s / 2
    let two_s: i64 = match q {
        4 | 8 => 2,
        16 => 1,
        _ => return Err(Error::UnknownConstellation(format!("hex{q}"))),
    };
    // 4|z|² for z = 2a + 2bj + s = (2a − b + s) + i·b√3
    let quarter_energy = |a: i64, b: i64| {
        let x = 4 * a - 2 * b + two_s;
        x * x + 12 * b * b
    };
    let mut cand: Vec<(i64, i64, i64)> =
        (-8..=8).flat_map(|a| (-8..=8).map(move |b| (quarter_energy(a, b), b, a))).collect();
    cand.sort();
    if cand[q - 1].0 == cand[q].0 {
        return Err(Error::Construction { stage: "hex", detail: format!("energy tie at the boundary of hex{q}") });
    }
    cand.truncate(q);
    let mut points = Vec::with_capacity(q);
    let mut coords = Vec::with_capacity(q);
    let mut energy = 0i64;
    let j = RingTag::Eisenstein.omega();
    for &(e4, b, a) in &cand {
        let ca = 2.0 * a as f64 + two_s as f64 / 2.0;
        let cb = 2.0 * b as f64;
        points.push(Complex64::new(ca, 0.0) + j * cb);
        coords.push((ca, cb));
        energy += e4;
    }
    let labels = (0..q as u32).collect();
    let min_distance = min_distance(&points);
    Ok(Constellation {
        family: Family::Hex,
        points,
        coords,
        labels,
        avg_energy: Ratio::new(energy, 4 * q as i64),
        min_distance,
    })
}

fn min_distance(points: &[Complex64]) -> f64 {
    let mut d = f64::INFINITY;
    for (k, p) in points.iter().enumerate() {
        for r in &points[k + 1..] {
            d = d.min((p - r).norm());
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energies() {
        let e: Vec<Ratio<i64>> = [4, 8, 16, 64].iter().map(|&q| make_qam(q).unwrap().avg_energy).collect();
        assert_eq!(e, vec![Ratio::from(2), Ratio::from(6), Ratio::from(10), Ratio::from(42)]);
        let e: Vec<Ratio<i64>> = [4, 8, 16].iter().map(|&q| make_hex(q).unwrap().avg_energy).collect();
        assert_eq!(e, vec![Ratio::from(2), Ratio::new(9, 2), Ratio::new(35, 4)]);
    }

    #[test]
    fn min_distance_two() {
        for c in [make_qam(4), make_qam(8), make_qam(16), make_qam(64), make_hex(4), make_hex(8), make_hex(16)] {
            let c = c.unwrap();
            assert!((c.min_distance - 2.0).abs() < 1e-12, "{}", c.name());
        }
    }

    #[test]
    fn numeric_energy_matches_exact() {
        for c in [make_qam(8), make_hex(8), make_hex(16)] {
            let c = c.unwrap();
            let e: f64 = c.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / c.q() as f64;
            assert!((e - c.avg_energy_f64()).abs() < 1e-12);
        }
    }

    #[test]
    fn gray_labels_differ_in_one_bit_between_neighbours() {
        let c = make_qam(16).unwrap();
        for a in 0..16 {
            for b in a + 1..16 {
                if ((c.points[a] - c.points[b]).norm() - 2.0).abs() < 1e-12 {
                    assert_eq!((c.labels[a] ^ c.labels[b]).count_ones(), 1);
                }
            }
        }
        let mut l = c.labels.clone();
        l.sort();
        assert_eq!(l, (0..16).collect::<Vec<_>>());
    }

    #[test]
    fn hex_points_lie_on_shifted_lattice() {
        let c = make_hex(4).unwrap();
        for (a, b) in &c.coords {
            assert_eq!((a - 1.0).rem_euclid(2.0), 0.0);
            assert_eq!(b.rem_euclid(2.0), 0.0);
        }
        assert!(c.exact_point(0).is_some());
        assert!(make_hex(16).unwrap().exact_point(0).is_none());
    }

    #[test]
    fn parsing() {
        assert_eq!("QAM16".parse::<Constellation>().unwrap().q(), 16);
        assert_eq!("hex8".parse::<Constellation>().unwrap().name(), "hex8");
        assert!("qam32".parse::<Constellation>().is_err());
        assert!("psk8".parse::<Constellation>().is_err());
        assert!(make_hex(5).is_err());
    }
}
