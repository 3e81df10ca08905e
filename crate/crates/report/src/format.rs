//! Locale-independent number and date formatting for report text.

use chrono::NaiveDate;

/// Formats `value` to one decimal place, rounding half away from zero on
/// the value's shortest decimal representation (so 1.45 becomes "1.5").
pub fn one_decimal(value: f64) -> String {
    if !value.is_finite() {
        return "n/a".to_string();
    }
    let text = format!("{}", value.abs());
    let (int_part, frac) = text.split_once('.').unwrap_or((&text, ""));
    let mut digits = frac.bytes().map(|b| u64::from(b - b'0'));
    let first = digits.next().unwrap_or(0);
    let round_up = digits.next().is_some_and(|d| d >= 5);
    let tenths = int_part
        .parse::<u64>()
        .ok()
        .and_then(|i| i.checked_mul(10))
        .map(|t| t + first + u64::from(round_up));
    let magnitude = match tenths {
        Some(t) => format!("{}.{}", t / 10, t % 10),
        None => format!("{:.1}", value.abs()),
    };
    if value < 0.0 && magnitude != "0.0" {
        format!("-{magnitude}")
    } else {
        magnitude
    }
}

pub fn two_decimals(value: f64) -> String {
    let s = format!("{value:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

pub fn long_date(date: NaiveDate) -> String {
    date.format("%-d %B %Y").to_string()
}
