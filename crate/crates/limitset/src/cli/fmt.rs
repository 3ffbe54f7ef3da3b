//! Deterministic 12-significant-digit formatting for floating output,
//! printf %.12g style: fixed notation in the ordinary magnitude range,
//! scientific outside it, trailing zeros trimmed.

pub fn fmt_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let neg = x < 0.0;
    let sci = format!("{:.11e}", x.abs());
    let (mant, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 12);
    let body = if (-4..12).contains(&exp) {
        if exp >= 0 {
            let point = (exp + 1) as usize;
            let int_part = &digits[..point];
            let frac = digits[point..].trim_end_matches('0');
            if frac.is_empty() {
                int_part.to_string()
            } else {
                format!("{}.{}", int_part, frac)
            }
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            let frac = format!("{}{}", zeros, digits);
            let frac = frac.trim_end_matches('0');
            format!("0.{}", frac)
        }
    } else {
        let trimmed = digits.trim_end_matches('0');
        let (head, tail) = trimmed.split_at(1);
        if tail.is_empty() {
            format!("{}e{}", head, exp)
        } else {
            format!("{}.{}e{}", head, tail, exp)
        }
    };
    if neg {
        format!("-{}", body)
    } else {
        body
    }
}
