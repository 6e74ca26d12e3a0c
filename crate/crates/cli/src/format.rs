//! Deterministic numeric formatting for table output.
//!
//! One rule everywhere: 12 significant digits, fixed-point notation for
//! magnitudes in [1e-4, 1e6), scientific notation outside. Formatting is
//! locale-independent (always `.` as the decimal separator) so identical
//! configurations produce byte-identical files.

/// Formats one value under the 12-significant-digit rule.
pub fn format_value(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let a = x.abs();
    if (1e-4..1e6).contains(&a) {
        let mut exp10 = a.log10().floor() as i32;
        // log10 can land one off right at powers of ten; settle against
        // exact integer powers.
        if 10f64.powi(exp10 + 1) <= a {
            exp10 += 1;
        } else if 10f64.powi(exp10) > a {
            exp10 -= 1;
        }
        let decimals = (11 - exp10).max(0) as usize;
        format!("{:.*}", decimals, x)
    } else {
        format!("{:.11e}", x)
    }
}

/// Joins a header and pre-rendered rows into CSV with `\n` endings and a
/// trailing newline.
pub fn csv_table(header: &str, rows: &[Vec<String>]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
