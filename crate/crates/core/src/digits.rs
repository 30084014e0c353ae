//! Decimal formatting of reported numbers and comparison against truncated
//! constants such as `1.312...`.

/// True when `value` starts with the digits of `printed`, i.e. lies in
/// `[printed, printed + 10^-k)` for `k` printed decimals.
pub fn agrees_with_printed(value: f64, printed: &str) -> bool {
    let printed = printed.trim().trim_end_matches('…').trim_end_matches("...");
    let Ok(base) = printed.parse::<f64>() else {
        return false;
    };
    let decimals = printed.split_once('.').map_or(0, |(_, frac)| frac.len()) as i32;
    let unit = 10f64.powi(-decimals);
    let slack = 4.0 * f64::EPSILON * base.abs().max(1.0);
    value >= base - slack && value < base + unit - slack
}

/// Shortest representation that parses back to the same `f64`, switching to
/// exponent notation outside `[1e-5, 1e16)`.
pub fn format_shortest(value: f64) -> String {
    let a = value.abs();
    if a == 0.0 || !a.is_finite() || (1e-5..1e16).contains(&a) {
        value.to_string()
    } else {
        format!("{value:e}")
    }
}
