//! Number formatting shared by the CSV writers and the CLI.

/// Scientific notation with 17 significant digits; round-trips any `f64`.
pub fn sci17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Positional notation with `digits` significant figures, trailing zeros
/// trimmed but at least one fractional digit kept (`1.0`, `0.0375559193082`).
/// Falls back to scientific notation for very large or very small magnitudes.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.0".to_string();
    }
    let digits = digits.max(1);
    // Round first so the exponent reflects carries (9.99.. -> 10.0).
    let rounded: f64 = format!("{x:.*e}", digits - 1).parse().unwrap_or(x);
    let exp = rounded.abs().log10().floor() as i32;
    if !(-5..(digits as i32)).contains(&exp) {
        let s = format!("{x:.*e}", digits - 1);
        return trim_mantissa(&s);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    trim_fixed(&s)
}

fn trim_fixed(s: &str) -> String {
    if !s.contains('.') {
        return format!("{s}.0");
    }
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}

fn trim_mantissa(s: &str) -> String {
    match s.split_once('e') {
        Some((m, e)) => format!("{}e{e}", trim_fixed(m)),
        None => s.to_string(),
    }
}
