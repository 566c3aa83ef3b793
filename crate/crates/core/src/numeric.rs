//! Small floating-point helpers shared by the engines.

/// Compensated (Neumaier) summation.
pub fn sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut total = 0.0_f64;
    let mut carry = 0.0_f64;
    for v in values {
        let t = total + v;
        if total.abs() >= v.abs() {
            carry += (total - t) + v;
        } else {
            carry += (v - t) + total;
        }
        total = t;
    }
    total + carry
}

/// Arithmetic mean; a constant slice returns its value bit-for-bit.
pub fn mean(values: &[f64]) -> f64 {
    debug_assert!(!values.is_empty());
    let first = values[0];
    if values.iter().all(|&v| v == first) {
        return first;
    }
    sum(values.iter().copied()) / values.len() as f64
}

/// Sum of squared deviations from `center`.
pub fn sum_sq_dev(values: &[f64], center: f64) -> f64 {
    sum(values.iter().map(|v| {
        let d = v - center;
        d * d
    }))
}

/// Unbiased standard deviation (divisor `n - 1`); requires two values.
pub fn unbiased_sd(values: &[f64]) -> f64 {
    let m = mean(values);
    (sum_sq_dev(values, m) / (values.len() - 1) as f64).sqrt()
}

/// Relative difference `|a - b| / max(|a|, |b|)`, zero when both are zero.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
