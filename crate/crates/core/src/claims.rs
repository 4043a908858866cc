//! The numbered acceptance claims and the per-code verification report
//! behind `verify`.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codes::published::{match_printed, printed_3x3, printed_4x4, printed_6x6, PrintedMatrix};
use crate::codes::{pipeline_6x6, prime_6x6, CodeName, CodeSpec};
use crate::error::Result;
use crate::quad::{QuadInt, QuadRat, RingTag};
use crate::sim::channel::{real_lattice_model, trial_rng, ChannelRealization};
use crate::sim::run::noise_variance;
use crate::sim::{make_hex, make_qam, ml_exhaustive, run_cer, Alphabet, Constellation, SimConfig, SphereDecoder};
use crate::verify::{
    arithmetic_witnesses, check_det_discreteness, min_det_bruteforce, min_det_sampled, q17_singular_codeword, q17_witness,
    recip, unitarity_error, MinDetReport,
};

pub const CRITERIA: u32 = 13;

/// Outcome of one claim.
#[derive(Clone, Debug)]
pub struct Claim {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Claim {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {} {} ({:.1} s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.seconds,
            self.detail
        )
    }
}

/// Sizes of the randomized parts; the defaults are the full acceptance scale.
#[derive(Clone, Debug)]
pub struct ClaimConfig {
    pub radius: i64,
    pub budget: u128,
    pub random_vectors: u64,
    pub discreteness_trials: u64,
    pub decoder_trials: u64,
    pub shaping_inputs: u64,
    pub energy_codewords: u64,
    pub sim_target_errors: u64,
    pub sim_max_codewords: u64,
    pub seed: u64,
}

impl Default for ClaimConfig {
    fn default() -> Self {
        ClaimConfig {
            radius: 1,
            budget: crate::verify::DEFAULT_BUDGET,
            random_vectors: 1_000_000,
            discreteness_trials: 10_000,
            decoder_trials: 10_000,
            shaping_inputs: 10_000,
            energy_codewords: 100_000,
            sim_target_errors: 100,
            sim_max_codewords: 4_000_000,
            seed: 2024,
        }
    }
}

/// The codes every per-code claim is run on.
pub fn shipped_codes() -> Vec<CodeName> {
    vec![
        CodeName::Golden,
        CodeName::TwoByTwo(13),
        CodeName::TwoByTwo(37),
        CodeName::ThreeByThree,
        CodeName::FourByFour,
        CodeName::SixBySix,
    ]
}

fn units(ring: RingTag) -> Vec<Complex64> {
    ring.units().iter().map(QuadInt::to_complex).collect()
}

/// |det|² of the codeword carrying 1 in the first symbol slot.
pub fn single_symbol_det(spec: &CodeSpec) -> Result<BigRational> {
    let n = spec.n();
    let mut u = vec![QuadInt::zero(spec.ring()); n * n];
    u[0] = QuadInt::one(spec.ring());
    let (d, _) = spec.codeword_det(&u)?;
    let nn = BigInt::from(spec.norm_factor).pow(n as u32);
    Ok(BigRational::new(d.num().norm(), nn) / BigRational::from_integer(d.den().clone() * d.den()))
}

/// Print alignment for codes that have a published matrix.
pub fn printed_for(name: CodeName) -> Option<PrintedMatrix> {
    match name {
        CodeName::ThreeByThree => Some(printed_3x3()),
        CodeName::FourByFour => Some(printed_4x4()),
        CodeName::SixBySix => Some(printed_6x6()),
        _ => None,
    }
}

fn print_match(spec: &CodeSpec, pm: &PrintedMatrix) -> (bool, String) {
    match match_printed(spec.generator_matrix(), pm, &units(spec.ring())) {
        Some(m) => (m.max_err <= pm.tol, format!("print match max error {:.1e} (tol {:.0e})", m.max_err, pm.tol)),
        None => (false, format!("no alignment with the print within {:.0e}", pm.tol)),
    }
}

fn min_det_for(spec: &CodeSpec, cfg: &ClaimConfig) -> Result<MinDetReport> {
    match min_det_bruteforce(spec, cfg.radius, cfg.budget) {
        Err(crate::Error::BudgetExceeded { .. }) => min_det_sampled(spec, cfg.radius, cfg.random_vectors, cfg.seed),
        other => other,
    }
}

fn timed(id: u32, title: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Claim {
    let t = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    Claim { id, title, passed, detail, seconds: t.elapsed().as_secs_f64() }
}

pub fn criterion(id: u32, cfg: &ClaimConfig) -> Claim {
    match id {
        1 => timed(1, "golden minimum determinant", || {
            let t = Instant::now();
            let spec = CodeName::Golden.build()?;
            let r = min_det_bruteforce(&spec, 1, cfg.budget)?;
            let secs = t.elapsed().as_secs_f64();
            let ok = r.min_det == recip(5) && r.argmin_verified && secs < 10.0;
            Ok((ok, format!("min |det|^2 = {} over {} vectors in {secs:.2} s", r.min_det, r.evaluated)))
        }),
        2 => timed(2, "2x2 family", || {
            let mut ok = true;
            let mut d = Vec::new();
            for p in [5u64, 13, 37] {
                let spec = CodeName::TwoByTwo(p).build()?;
                let g = spec.gram()?.is_scalar(p as i64);
                let r = min_det_bruteforce(&spec, 1, cfg.budget)?;
                let m = r.min_det == recip(p) && r.argmin_verified;
                ok &= g && m;
                d.push(format!("p={p}: gram {}, min {}", if g { "pI" } else { "WRONG" }, r.min_det));
            }
            Ok((ok, d.join("; ")))
        }),
        3 => timed(3, "3x3 code", || {
            let spec = CodeName::ThreeByThree.build()?;
            let g = spec.gram()?.is_scalar(7);
            let r = min_det_bruteforce(&spec, 1, cfg.budget)?;
            let (pm, pd) = print_match(&spec, &printed_3x3());
            let ok = g && r.min_det == BigRational::new(1.into(), 49.into()) && r.argmin_verified && pm;
            Ok((ok, format!("gram 7I: {g}; min |det|^2 = {} ({} vectors); {pd}", r.min_det, r.evaluated)))
        }),
        4 => timed(4, "4x4 code", || {
            let t = Instant::now();
            let spec = CodeName::FourByFour.build()?;
            let g = spec.gram()?.is_scalar(15);
            let single = single_symbol_det(&spec)?;
            let r = min_det_sampled(&spec, 1, cfg.random_vectors, cfg.seed)?;
            let target = recip(1125);
            let secs = t.elapsed().as_secs_f64();
            let ok = g && single == target && r.min_det == target && !r.zero_det_found && secs < 300.0;
            Ok((ok, format!("gram 15I: {g}; single symbol {single}; sampled min {} over {} vectors", r.min_det, r.evaluated)))
        }),
        5 => timed(5, "6x6 pipeline", || {
            let p = pipeline_6x6(&prime_6x6())?;
            let spec = CodeName::SixBySix.build()?;
            let g = spec.gram()?.is_scalar(14);
            let (pm, pd) = print_match(&spec, &printed_6x6());
            let r = min_det_sampled(&spec, 1, cfg.random_vectors, cfg.seed)?;
            let lower = BigRational::new(1.into(), BigInt::from(64u32 * 16807));
            let upper = BigRational::new(1.into(), BigInt::from(64u32 * 2401));
            let single = single_symbol_det(&spec)?;
            let ok = p.index == BigInt::from(7)
                && g
                && pm
                && r.min_det >= lower
                && single == upper
                && r.ideal_norm_violations == 0;
            Ok((
                ok,
                format!(
                    "N(I) = {}; gram 14I: {g}; {pd}; sampled min {} over {} vectors; single symbol {single}",
                    p.index, r.min_det, r.evaluated
                ),
            ))
        }),
        6 => timed(6, "unitarity", || {
            let mut worst = 0.0f64;
            for name in shipped_codes() {
                let spec = name.build()?;
                worst = worst.max(unitarity_error(&spec));
            }
            Ok((worst < 1e-12, format!("max |R R^H - I| = {worst:.1e}")))
        }),
        7 => timed(7, "determinant discreteness", || {
            let mut ok = true;
            let mut d = Vec::new();
            for name in shipped_codes() {
                let spec = name.build()?;
                let r = check_det_discreteness(&spec, cfg.discreteness_trials, cfg.seed);
                ok &= r.passed();
                d.push(format!("{name}: {}/{}", r.trials - r.failures, r.trials));
            }
            Ok((ok, d.join(", ")))
        }),
        8 => timed(8, "p = 17 failure", || {
            let s = q17_singular_codeword()?;
            let nx = q17_witness()?.rel_norm()?;
            let i = QuadRat::from_int(QuadInt::new(0, 1, RingTag::Gaussian));
            let ok = s.det.is_zero() && nx == i;
            Ok((ok, format!("singular codeword det = {}; N(x) = {nx}", s.det)))
        }),
        9 => timed(9, "arithmetic witnesses", || {
            let ws = arithmetic_witnesses()?;
            let ok = ws.iter().all(|w| w.passed());
            let d = ws.iter().map(|w| format!("{} norm {}", w.witness, w.norm)).collect::<Vec<_>>().join(", ");
            Ok((ok, d))
        }),
        10 => timed(10, "constellations", || {
            let qam: Vec<Constellation> = [4, 8, 16, 64].iter().map(|&q| make_qam(q)).collect::<Result<_>>()?;
            let hex: Vec<Constellation> = [4, 8, 16].iter().map(|&q| make_hex(q)).collect::<Result<_>>()?;
            let want_q = [Ratio::from(2), Ratio::from(6), Ratio::from(10), Ratio::from(42)];
            let want_h = [Ratio::from(2), Ratio::new(9, 2), Ratio::new(35, 4)];
            let energies_ok = qam.iter().zip(&want_q).chain(hex.iter().zip(&want_h)).all(|(c, w)| c.avg_energy == *w);
            let dist_ok = qam.iter().chain(&hex).all(|c| (c.min_distance - 2.0).abs() < 1e-12);
            let d = qam.iter().chain(&hex).map(|c| format!("{} {}", c.name(), c.avg_energy)).collect::<Vec<_>>().join(", ");
            Ok((energies_ok && dist_ok, d))
        }),
        11 => timed(11, "sphere decoder vs exhaustive ML", || {
            let t = Instant::now();
            let spec = CodeName::Golden.build()?;
            let mism = decoder_mismatches(&spec, cfg.decoder_trials, cfg.seed)?;
            let secs = t.elapsed().as_secs_f64();
            Ok((mism == 0 && secs < 60.0, format!("{mism} mismatches in {} instances, {secs:.1} s", cfg.decoder_trials)))
        }),
        12 => timed(12, "error-rate shape", || {
            let golden = simulate(CodeName::Golden, "qam4", &[10.0, 14.0], cfg)?;
            let broken = simulate(CodeName::Broken17, "qam4", &[10.0, 14.0], cfg)?;
            let three = simulate(CodeName::ThreeByThree, "hex4", &[4.0, 8.0], cfg)?;
            let enough = golden.iter().chain(&broken).chain(&three).all(|p| p.1 >= cfg.sim_target_errors);
            let below = golden.iter().zip(&broken).all(|(g, b)| g.2 < b.2);
            let slope = |v: &[(f64, u64, f64)]| (v[1].2.log10() - v[0].2.log10()) / (v[1].0 - v[0].0);
            let shallower = slope(&broken) > slope(&golden);
            let drop = three[0].2 / three[1].2;
            let ok = enough && below && shallower && drop >= 5.0;
            Ok((
                ok,
                format!(
                    "golden CER {:.2e}, {:.2e}; broken {:.2e}, {:.2e}; slopes {:.3} vs {:.3} per dB; 3x3 drop x{:.1} per 4 dB",
                    golden[0].2,
                    golden[1].2,
                    broken[0].2,
                    broken[1].2,
                    slope(&golden),
                    slope(&broken),
                    drop
                ),
            ))
        }),
        13 => timed(13, "shaping and row energy", || {
            let mut ok = true;
            let mut d = Vec::new();
            for name in shipped_codes() {
                let spec = name.build()?;
                let (worst_rel, spread) = shaping(&spec, cfg.shaping_inputs, cfg.energy_codewords, cfg.seed);
                ok &= worst_rel < 1e-10 && spread < 0.01;
                d.push(format!("{name}: {worst_rel:.0e}/{:.2}%", 100.0 * spread));
            }
            Ok((ok, d.join(", ")))
        }),
        _ => Claim { id, title: "unknown", passed: false, detail: format!("no criterion {id}"), seconds: 0.0 },
    }
}

pub fn run_all(cfg: &ClaimConfig) -> Vec<Claim> {
    (1..=CRITERIA).map(|k| criterion(k, cfg)).collect()
}

/// Noisy Golden/4-QAM instances where the sphere decoder and exhaustive
/// ML disagree. Noise levels cycle through 0, 4, 8, 12 dB.
pub fn decoder_mismatches(spec: &CodeSpec, trials: u64, seed: u64) -> Result<u64> {
    let c = make_qam(4)?;
    let alpha = Alphabet::new(&c.coords);
    let n = spec.n();
    let nsym = n * n;
    let basis = crate::sim::channel::basis_codewords(spec);
    Ok((0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, 1000, t);
            let nv = noise_variance(4.0 * (t % 4) as f64, &c);
            let (ch, g, dec) = loop {
                let ch = ChannelRealization::draw(n, n, nv, &mut rng);
                let g = real_lattice_model(spec, &ch.h);
                if let Ok(d) = SphereDecoder::new(&g) {
                    break (ch, g, d);
                }
            };
            let sent: Vec<usize> = (0..nsym).map(|_| rng.gen_range(0..c.q())).collect();
            let mut x = DMatrix::zeros(n, n);
            for (s, &k) in sent.iter().enumerate() {
                x += &basis[s] * c.points[k];
            }
            let y: DVector<f64> = crate::sim::channel::real_vec(&crate::sim::transmit(&x, &ch, &mut rng));
            let (a, _) = dec.decode(&y, &alpha);
            let (b, _) = ml_exhaustive(&y, &g, &alpha);
            u64::from(a != b)
        })
        .sum())
}

/// (Eb/N0, errors, CER) per point.
fn simulate(code: CodeName, constellation: &str, snrs: &[f64], cfg: &ClaimConfig) -> Result<Vec<(f64, u64, f64)>> {
    let sc = SimConfig {
        spec: Arc::new(code.build()?),
        constellation: constellation.parse()?,
        ebn0_db: snrs.to_vec(),
        max_codewords: cfg.sim_max_codewords,
        target_errors: cfg.sim_target_errors,
        seed: cfg.seed,
    };
    Ok(run_cer(&sc)?.points.iter().map(|p| (p.ebn0_db, p.errors, p.cer)).collect())
}

/// Largest relative deviation of ‖X‖²_F from ‖u‖² over `inputs` random
/// complex symbol vectors, and the relative spread (max/min − 1) of the
/// per-row mean energies over `codewords` random 16-point codewords.
pub fn shaping(spec: &CodeSpec, inputs: u64, codewords: u64, seed: u64) -> (f64, f64) {
    let n = spec.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..inputs {
        let u: Vec<Complex64> =
            (0..n * n).map(|_| Complex64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0))).collect();
        let x = spec.encode_numeric(&u);
        let ux: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        let xf: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        if ux > 0.0 {
            worst = worst.max((xf - ux).abs() / ux);
        }
    }
    let c = if spec.ring() == RingTag::Gaussian { make_qam(16) } else { make_hex(16) }.expect("16-point constellation");
    let mut rows = vec![0.0f64; n];
    for _ in 0..codewords {
        let u: Vec<Complex64> = (0..n * n).map(|_| c.points[rng.gen_range(0..c.q())]).collect();
        let x = spec.encode_numeric(&u);
        for (r, acc) in rows.iter_mut().enumerate() {
            *acc += x.row(r).iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
    }
    let max = rows.iter().cloned().fold(f64::MIN, f64::max);
    let min = rows.iter().cloned().fold(f64::MAX, f64::min);
    (worst, max / min - 1.0)
}

/// Per-code verification report, `key: value` lines.
pub struct CodeReport {
    pub text: String,
    pub passed: bool,
}

/// Gram, unitarity, print alignment, minimum determinant against its
/// target, determinant discreteness and, for 2×2 codes, the non-norm
/// condition. For the p = 17 code the expected outcome is a vanishing
/// determinant.
pub fn verify_code(name: CodeName, cfg: &ClaimConfig) -> Result<CodeReport> {
    let spec = name.build()?;
    let mut s = String::new();
    let mut passed = true;
    let mut check = |s: &mut String, key: &str, ok: bool, val: String| {
        let _ = writeln!(s, "{key}: {val}");
        let _ = writeln!(s, "{key}_ok: {ok}");
        passed &= ok;
    };
    let _ = writeln!(s, "code: {name}");
    let n = spec.n() as i64;
    let g = spec.gram()?.is_scalar(spec.norm_factor as i64);
    check(&mut s, "gram_scalar", g, format!("{}*I{}", spec.norm_factor, n));
    let ue = unitarity_error(&spec);
    check(&mut s, "unitarity_error", ue < 1e-12, format!("{ue:.2e}"));
    if let Some(pm) = printed_for(name) {
        let (ok, d) = print_match(&spec, &pm);
        check(&mut s, "print_match", ok, d);
    }
    let r = min_det_for(&spec, cfg)?;
    // the header line repeats the code name
    s.push_str(r.to_text().split_once('\n').map_or("", |x| x.1));
    let target = match name {
        CodeName::Golden => Some(recip(5)),
        CodeName::TwoByTwo(p) => Some(recip(p)),
        CodeName::ThreeByThree => Some(recip(49)),
        CodeName::FourByFour => Some(recip(1125)),
        _ => None,
    };
    match name {
        CodeName::Broken17 => {
            check(&mut s, "singular_codeword_found", r.zero_det_found, "expected for p = 17".into());
        }
        CodeName::SixBySix => {
            let lower = BigRational::new(1.into(), BigInt::from(64u32 * 16807));
            check(&mut s, "lower_bound", r.min_det >= lower, format!("min >= {lower}"));
            let single = single_symbol_det(&spec)?;
            let upper = BigRational::new(1.into(), BigInt::from(64u32 * 2401));
            check(&mut s, "single_symbol_det", single == upper, format!("{single}"));
        }
        _ => {
            let t = target.expect("target for perfect 2x2/3x3/4x4");
            check(&mut s, "target", r.min_det == t && r.argmin_verified, format!("{t}"));
        }
    }
    if name != CodeName::Broken17 {
        check(&mut s, "nonzero_determinants", !r.zero_det_found, format!("{}", !r.zero_det_found));
    }
    let trials = cfg.discreteness_trials.min(1000);
    let dr = check_det_discreteness(&spec, trials, cfg.seed);
    check(&mut s, "det_in_ring", dr.passed(), format!("{}/{}", trials - dr.failures, trials));
    if spec.n() == 2 {
        let nc = crate::verify::norm_condition_2x2(spec.norm_factor)?;
        let (ok, d) = match (&nc, name) {
            (crate::verify::NormCondition::Proven { facts }, CodeName::Golden | CodeName::TwoByTwo(_)) => {
                (true, format!("proven ({})", facts.join("; ")))
            }
            (crate::verify::NormCondition::CounterexampleFound(x), CodeName::Broken17) => {
                (true, format!("gamma = i is the norm of {x}"))
            }
            (other, _) => (false, format!("{other:?}")),
        };
        check(&mut s, "norm_condition", ok, d);
    }
    let _ = writeln!(s, "result: {}", if passed { "pass" } else { "fail" });
    Ok(CodeReport { text: s, passed })
}
