use std::fmt::Write as _;
use std::path::Path;

use crate::echo::EchoCurve;
use crate::error::{Error, Result};
use crate::harness::sweep::SweepResult;

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros
/// dropped, exponent form outside `1e-4 <= |x| < 1e17`. Round-trips every
/// finite double.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.16e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if x < 0.0 { "-" } else { "" };

    if !(-4..17).contains(&exp) {
        let (lead, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        let dot = if rest.is_empty() { "" } else { "." };
        let esign = if exp < 0 { '-' } else { '+' };
        return format!("{sign}{lead}{dot}{rest}e{esign}{:02}", exp.abs());
    }

    let (int_part, frac_part) = if exp >= 0 {
        let split = exp as usize + 1;
        (digits[..split].to_string(), digits[split..].to_string())
    } else {
        ("0".to_string(), "0".repeat((-exp - 1) as usize) + &digits)
    };
    let frac = frac_part.trim_end_matches('0');
    if frac.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// `lambda,t,L` rows, `λ` outer, `t` inner.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::from("lambda,t,L\n");
    for (&lambda, row) in result.lambdas.iter().zip(result.rows()) {
        let lam = fmt_g17(lambda);
        for (&t, &l) in result.times.iter().zip(row) {
            let _ = writeln!(out, "{lam},{},{}", fmt_g17(t), fmt_g17(l));
        }
    }
    out
}

pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    write_file(path, &sweep_csv(result))
}

/// `t,L` rows of one curve.
pub fn curve_csv(curve: &EchoCurve) -> String {
    let mut out = String::from("t,L\n");
    for (&t, &l) in curve.times.iter().zip(&curve.values) {
        let _ = writeln!(out, "{},{}", fmt_g17(t), fmt_g17(l));
    }
    out
}

/// `N,t,L` rows of several curves, one block per chain.
pub fn curves_csv(curves: &[EchoCurve]) -> String {
    let mut out = String::from("N,t,L\n");
    for c in curves {
        for (&t, &l) in c.times.iter().zip(&c.values) {
            let _ = writeln!(out, "{},{},{}", c.params.n(), fmt_g17(t), fmt_g17(l));
        }
    }
    out
}

pub fn emit_json(result: &SweepResult, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(result).expect("sweep result serializes");
    text.push('\n');
    write_file(path, &text)
}
