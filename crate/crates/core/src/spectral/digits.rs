use num_complex::Complex64;

use crate::error::{Error, Result};

/// Digits of one real component that agree across the trial orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StablePrefix {
    pub prefix: String,
    /// Significant digits, not counting sign, leading zeros or the point.
    pub digits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitStability {
    pub re: StablePrefix,
    pub im: StablePrefix,
}

/// Stable leading digits of ω_m as m grows, for Re and Im separately.
///
/// The textual prefix shared by the shortest round-trip representations is
/// used first; a value whose representation ends early agrees with the
/// rest. When the values straddle a rounding boundary (…4999 vs …5000) the
/// text agrees on few digits although the numbers are close, so the count is
/// raised to what the spread max − min supports.
pub fn digit_stability(results: &[(usize, Complex64)]) -> Result<DigitStability> {
    if results.len() < 3 {
        return Err(Error::TooFewPoints { what: "digit stability entries", got: results.len(), min: 3 });
    }
    if results.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::InvalidArgument("trial orders must increase".into()));
    }
    let re: Vec<f64> = results.iter().map(|r| r.1.re).collect();
    let im: Vec<f64> = results.iter().map(|r| r.1.im).collect();
    Ok(DigitStability { re: stable_prefix(&re), im: stable_prefix(&im) })
}

pub fn stable_prefix(values: &[f64]) -> StablePrefix {
    let texts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    let textual = common_prefix(&texts);
    let text_digits = significant_digits(&textual);

    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let last = *values.last().expect("non-empty");
    let spread = hi - lo;
    let numeric_digits = if spread == 0.0 || last == 0.0 {
        0
    } else {
        // digits d with spread < 10^(e - d + 1) / 2, e the decimal exponent
        let e = last.abs().log10().floor();
        let d = (e + 1.0 - (2.0 * spread).log10()).floor();
        d.clamp(0.0, 17.0) as usize
    };
    if numeric_digits > text_digits && !(lo < 0.0 && hi > 0.0) {
        StablePrefix { prefix: round_to_significant(last, numeric_digits), digits: numeric_digits }
    } else {
        StablePrefix { prefix: textual, digits: text_digits }
    }
}

fn common_prefix(texts: &[String]) -> String {
    let bytes: Vec<&[u8]> = texts.iter().map(|t| t.as_bytes()).collect();
    let mut out = String::new();
    for pos in 0.. {
        let present: Vec<u8> = bytes.iter().filter_map(|b| b.get(pos).copied()).collect();
        if present.len() < 2 || present.iter().any(|&c| c != present[0]) {
            break;
        }
        out.push(present[0] as char);
    }
    out
}

fn significant_digits(text: &str) -> usize {
    text.bytes()
        .filter(u8::is_ascii_digit)
        .skip_while(|&c| c == b'0')
        .count()
}

fn round_to_significant(x: f64, digits: usize) -> String {
    if digits == 0 {
        return String::new();
    }
    let e = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - e).max(0) as usize;
    format!("{x:.decimals$}")
}
