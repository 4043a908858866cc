//! Plain-text form of a [`CodeSpec`].
//!
//! One `key: value` pair per line, `#` starts a comment:
//!
//! ```text
//! name: golden
//! degree: 2
//! ring: gaussian
//! min_poly: -1 -1 1          # ascending integer coefficients of p_θ
//! sigma_poly: 1 -1           # σ(θ) = 1 − θ
//! theta: 1.6180339887498948482045868343656381177203
//! gamma: 0,1                 # a,b means a + b·ω (ω = i or j)
//! norm_factor: 5
//! basis: 1,1 0,-1            # one line per ν_k, coordinates over 1, θ, …
//! basis: 0,1 1,0
//! generator_row: 0.5257,0.8507 ...   # informational, ignored on input
//! ```
//!
//! Coordinates are tokens `a,b` or `a,b/d` for (a + b·ω)/d.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::field::{FieldDesc, NfElement};
use crate::fixed::{Fx, FRAC_BITS};
use crate::quad::{QuadRat, RingTag};

/// Decimal expansion of a fixed-point number with `digits` fractional digits.
pub fn fx_to_decimal(x: &Fx, digits: usize) -> String {
    let scaled = (x.raw().clone() * BigInt::from(10u32).pow(digits as u32)) >> FRAC_BITS as usize;
    let neg = scaled < BigInt::from(0);
    let s = if neg { (-scaled).to_string() } else { scaled.to_string() };
    let s = format!("{s:0>width$}", width = digits + 1);
    let (int, frac) = s.split_at(s.len() - digits);
    format!("{}{int}.{frac}", if neg { "-" } else { "" })
}

fn ints_line(v: &[BigInt]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn to_text(spec: &CodeSpec) -> String {
    let d = &spec.desc;
    let mut out = String::new();
    let _ = writeln!(out, "name: {}", spec.name);
    let _ = writeln!(out, "degree: {}", d.n);
    let _ = writeln!(out, "ring: {}", d.ring.name());
    let _ = writeln!(out, "min_poly: {}", ints_line(&d.min_poly));
    let _ = writeln!(out, "sigma_poly: {}", ints_line(&d.sigma_poly));
    let _ = writeln!(out, "theta: {}", fx_to_decimal(&d.theta_numeric, 40));
    let _ = writeln!(out, "gamma: {}", QuadRat::from_int(spec.gamma.clone()).to_token());
    let _ = writeln!(out, "norm_factor: {}", spec.norm_factor);
    for b in &spec.basis {
        let toks: Vec<String> = b.coeffs().iter().map(QuadRat::to_token).collect();
        let _ = writeln!(out, "basis: {}", toks.join(" "));
    }
    let r = spec.generator_matrix();
    for l in 0..d.n {
        let toks: Vec<String> = (0..d.n).map(|k| format!("{:.12},{:.12}", r[(l, k)].re, r[(l, k)].im)).collect();
        let _ = writeln!(out, "generator_row: {}", toks.join(" "));
    }
    out
}

/// Parse the text form and rebuild the spec; the field invariants and the
/// Gram identity are re-checked.
pub fn from_text(s: &str) -> Result<CodeSpec> {
    let mut name = None;
    let mut degree: Option<usize> = None;
    let mut ring = None;
    let mut min_poly = None;
    let mut sigma_poly = None;
    let mut theta: Option<f64> = None;
    let mut gamma = None;
    let mut norm_factor = None;
    let mut basis_lines: Vec<(usize, String)> = Vec::new();

    for (idx, raw) in s.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |msg: String| Error::Parse { line: line_no, msg };
        let (key, val) = line.split_once(':').ok_or_else(|| perr("expected 'key: value'".into()))?;
        let val = val.trim();
        let parse_ints = |v: &str| -> Result<Vec<BigInt>> {
            v.split_whitespace()
                .map(|t| t.parse::<BigInt>().map_err(|_| perr(format!("bad integer '{t}'"))))
                .collect()
        };
        match key.trim() {
            "name" => name = Some(val.to_string()),
            "degree" => degree = Some(val.parse().map_err(|_| perr(format!("bad degree '{val}'")))?),
            "ring" => ring = Some(RingTag::from_name(val).ok_or_else(|| perr(format!("unknown ring '{val}'")))?),
            "min_poly" => min_poly = Some(parse_ints(val)?),
            "sigma_poly" => sigma_poly = Some(parse_ints(val)?),
            "theta" => {
                // only a seed for Newton's method is needed
                let head: String = val.chars().take(24).collect();
                theta = Some(head.parse().map_err(|_| perr(format!("bad theta '{val}'")))?);
            }
            "gamma" => gamma = Some((line_no, val.to_string())),
            "norm_factor" => norm_factor = Some(val.parse::<u64>().map_err(|_| perr(format!("bad norm_factor '{val}'")))?),
            "basis" => basis_lines.push((line_no, val.to_string())),
            "generator_row" => {}
            other => return Err(perr(format!("unknown key '{other}'"))),
        }
    }
    let missing = |k: &str| Error::Parse { line: 0, msg: format!("missing key '{k}'") };
    let name = name.ok_or_else(|| missing("name"))?;
    let ring = ring.ok_or_else(|| missing("ring"))?;
    let min_poly = min_poly.ok_or_else(|| missing("min_poly"))?;
    let sigma_poly = sigma_poly.ok_or_else(|| missing("sigma_poly"))?;
    let theta = theta.ok_or_else(|| missing("theta"))?;
    let (gline, gtok) = gamma.ok_or_else(|| missing("gamma"))?;
    let norm_factor = norm_factor.ok_or_else(|| missing("norm_factor"))?;
    let degree = degree.ok_or_else(|| missing("degree"))?;
    if min_poly.len() != degree + 1 {
        return Err(Error::Parse { line: 0, msg: format!("min_poly has {} coefficients for degree {degree}", min_poly.len()) });
    }
    if basis_lines.len() != degree {
        return Err(Error::Parse { line: 0, msg: format!("{} basis lines for degree {degree}", basis_lines.len()) });
    }
    let desc = FieldDesc::new(&name, ring, min_poly, sigma_poly, theta)?;
    let gamma = QuadRat::parse_token(&gtok, ring)
        .and_then(|q| q.to_quad_int())
        .ok_or_else(|| Error::Parse { line: gline, msg: format!("bad gamma '{gtok}'") })?;
    let mut basis = Vec::with_capacity(degree);
    for (line, val) in basis_lines {
        let coeffs: Vec<QuadRat> = val
            .split_whitespace()
            .map(|t| QuadRat::parse_token(t, ring).ok_or_else(|| Error::Parse { line, msg: format!("bad coordinate '{t}'") }))
            .collect::<Result<_>>()?;
        if coeffs.len() != degree {
            return Err(Error::Parse { line, msg: format!("{} coordinates for degree {degree}", coeffs.len()) });
        }
        basis.push(NfElement::from_coeffs(&desc, &coeffs)?);
    }
    CodeSpec::new(&name, desc, gamma, basis, norm_factor)
}
