//! Codeword error rate versus Eb/N0.
//!
//! SNR convention: a codeword carries n² symbols of average energy Es, so
//! Eb = Es / log2(q). N0 is the total noise variance E|w|² of one complex
//! receive sample (N0/2 per real dimension). The fading entries have unit
//! variance, so this is Eb/N0 at the transmitter with no receive-array gain
//! folded in.

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::sim::channel::{basis_codewords, lattice_model_from, real_vec, transmit, trial_rng, ChannelRealization};
use crate::sim::constellation::Constellation;
use crate::sim::sphere::{Alphabet, SphereDecoder};

pub const CSV_HEADER: [&str; 7] = ["code", "constellation", "ebn0_db", "sent", "errors", "cer", "seconds"];

/// Trials are evaluated in batches of this size; counting stops at the
/// exact trial where the target error count is reached.
const BATCH: u64 = 256;

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub spec: Arc<CodeSpec>,
    pub constellation: Constellation,
    pub ebn0_db: Vec<f64>,
    pub max_codewords: u64,
    pub target_errors: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.constellation.ring() != self.spec.ring() {
            return Err(Error::InvalidArgument(format!(
                "constellation {} lives in {} but code {} needs {}",
                self.constellation.name(),
                self.constellation.ring().name(),
                self.spec.name,
                self.spec.ring().name()
            )));
        }
        if self.max_codewords == 0 || self.target_errors == 0 {
            return Err(Error::InvalidArgument("max codewords and target errors must be positive".into()));
        }
        if self.ebn0_db.is_empty() || self.ebn0_db.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("Eb/N0 list must be non-empty and finite".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimPoint {
    pub ebn0_db: f64,
    pub sent: u64,
    pub errors: u64,
    pub cer: f64,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct SimResult {
    pub code: String,
    pub constellation: String,
    pub points: Vec<SimPoint>,
}

impl SimResult {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        out.write_record(CSV_HEADER).map_err(io)?;
        for p in &self.points {
            out.write_record([
                self.code.clone(),
                self.constellation.clone(),
                format!("{}", p.ebn0_db),
                p.sent.to_string(),
                p.errors.to_string(),
                format!("{:.6e}", p.cer),
                format!("{:.3}", p.seconds),
            ])
            .map_err(io)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        // writing to memory cannot fail
        self.write_csv(&mut buf).expect("in-memory csv");
        String::from_utf8(buf).expect("utf8 csv")
    }
}

/// N0 for a given Eb/N0 in dB.
pub fn noise_variance(ebn0_db: f64, c: &Constellation) -> f64 {
    let eb = c.avg_energy_f64() / c.bits();
    eb / 10f64.powf(ebn0_db / 10.0)
}

/// Everything one trial needs that does not depend on the trial.
struct Setup {
    n: usize,
    basis: Vec<DMatrix<Complex64>>,
    omega: Complex64,
    alpha: Alphabet,
    points: Vec<Complex64>,
}

impl Setup {
    fn new(cfg: &SimConfig) -> Self {
        Setup {
            n: cfg.spec.n(),
            basis: basis_codewords(&cfg.spec),
            omega: cfg.spec.ring().omega(),
            alpha: Alphabet::new(&cfg.constellation.coords),
            points: cfg.constellation.points.clone(),
        }
    }

    /// One codeword through the channel; true on a decoding error.
    fn trial(&self, seed: u64, snr_idx: u64, t: u64, noise_var: f64) -> bool {
        let mut rng = trial_rng(seed, snr_idx, t);
        let n = self.n;
        let sent: Vec<usize> = (0..n * n).map(|_| rng.gen_range(0..self.points.len())).collect();
        let (ch, dec) = loop {
            let ch = ChannelRealization::draw(n, n, noise_var, &mut rng);
            let g = lattice_model_from(&self.basis, self.omega, &ch.h);
            if let Ok(d) = SphereDecoder::new(&g) {
                break (ch, d);
            }
        };
        let mut x = DMatrix::zeros(n, n);
        for (s, &k) in sent.iter().enumerate() {
            x += &self.basis[s] * self.points[k];
        }
        let y = real_vec(&transmit(&x, &ch, &mut rng));
        dec.decode(&y, &self.alpha).0 != sent
    }
}

pub fn run_cer(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let setup = Setup::new(cfg);
    let mut points = Vec::with_capacity(cfg.ebn0_db.len());
    for (si, &snr) in cfg.ebn0_db.iter().enumerate() {
        let start = Instant::now();
        let nv = noise_variance(snr, &cfg.constellation);
        let (mut sent, mut errors) = (0u64, 0u64);
        'outer: while sent < cfg.max_codewords {
            let end = (sent + BATCH).min(cfg.max_codewords);
            let flags: Vec<bool> =
                (sent..end).into_par_iter().map(|t| setup.trial(cfg.seed, si as u64, t, nv)).collect();
            for f in flags {
                sent += 1;
                errors += f as u64;
                if errors >= cfg.target_errors {
                    break 'outer;
                }
            }
        }
        points.push(SimPoint {
            ebn0_db: snr,
            sent,
            errors,
            cer: errors as f64 / sent as f64,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    Ok(SimResult { code: cfg.spec.name.clone(), constellation: cfg.constellation.name(), points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::make_code_2x2;
    use crate::sim::constellation::{make_hex, make_qam};

    fn golden_cfg(snrs: Vec<f64>, seed: u64) -> SimConfig {
        SimConfig {
            spec: Arc::new(make_code_2x2(5).unwrap()),
            constellation: make_qam(4).unwrap(),
            ebn0_db: snrs,
            max_codewords: 2000,
            target_errors: 50,
            seed,
        }
    }

    #[test]
    fn deterministic() {
        let a = run_cer(&golden_cfg(vec![4.0, 8.0], 11)).unwrap();
        let b = run_cer(&golden_cfg(vec![4.0, 8.0], 11)).unwrap();
        let strip = |r: &SimResult| r.points.iter().map(|p| (p.sent, p.errors)).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
    }

    #[test]
    fn high_snr_has_no_errors() {
        let r = run_cer(&golden_cfg(vec![60.0], 1)).unwrap();
        assert_eq!(r.points[0].errors, 0);
        assert_eq!(r.points[0].sent, 2000);
    }

    #[test]
    fn stops_at_target() {
        let r = run_cer(&golden_cfg(vec![-5.0], 2)).unwrap();
        assert_eq!(r.points[0].errors, 50);
        assert!(r.points[0].sent < 2000);
    }

    #[test]
    fn csv_shape() {
        let r = run_cer(&golden_cfg(vec![4.0, 8.0, 12.0], 3)).unwrap();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "code,constellation,ebn0_db,sent,errors,cer,seconds");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("golden,qam4,4,"));
    }

    #[test]
    fn ring_mismatch_rejected() {
        let mut cfg = golden_cfg(vec![1.0], 0);
        cfg.constellation = make_hex(4).unwrap();
        assert!(run_cer(&cfg).is_err());
    }

    #[test]
    fn noise_convention() {
        // 4-QAM: Eb = 1, so 0 dB means N0 = 1
        assert!((noise_variance(0.0, &make_qam(4).unwrap()) - 1.0).abs() < 1e-15);
        assert!((noise_variance(10.0, &make_qam(16).unwrap()) - 0.25).abs() < 1e-15);
    }
}
