//! Fixed-precision rendering for text output.

/// `%.12g`-style rendering that always keeps a decimal point, so integral
/// values print as `1.0` rather than `1`.
pub fn sig12(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let m = trim(mantissa);
        return format!("{m}e{exp}");
    }
    let decimals = (11 - exp).max(0) as usize;
    trim(&format!("{v:.decimals$}"))
}

fn trim(s: &str) -> String {
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

pub fn vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| sig12(*x)).collect();
    format!("({})", parts.join(", "))
}
