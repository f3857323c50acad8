use serde::{Deserialize, Serialize};

use super::ObfuscationError;

/// Approximation ratio clamped to `[0, 1]`; `raw` keeps the unclamped value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxRatio {
    pub value: f64,
    pub raw: f64,
    pub out_of_range: bool,
}

/// `expectation / cmax`.
pub fn approximation_ratio(expectation: f64, cmax: u32) -> Result<ApproxRatio, ObfuscationError> {
    if cmax == 0 {
        return Err(ObfuscationError::UndefinedRatio);
    }
    if !expectation.is_finite() {
        return Err(ObfuscationError::NonFinite(expectation));
    }
    let raw = expectation / cmax as f64;
    let out_of_range = !(0.0..=1.0).contains(&raw);
    Ok(ApproxRatio {
        value: raw.clamp(0.0, 1.0),
        raw,
        out_of_range,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(approximation_ratio(4.0, 4).unwrap().value, 1.0);
        assert_eq!(approximation_ratio(2.0, 4).unwrap().value, 0.5);
        assert!((approximation_ratio(3.0, 5).unwrap().value - 0.6).abs() < 1e-15);
    }

    #[test]
    fn edge_cases() {
        assert!(matches!(approximation_ratio(1.0, 0), Err(ObfuscationError::UndefinedRatio)));
        let over = approximation_ratio(5.0, 4).unwrap();
        assert!(over.out_of_range && over.value == 1.0 && over.raw == 1.25);
        let under = approximation_ratio(-1.0, 4).unwrap();
        assert!(under.out_of_range && under.value == 0.0);
        assert!(approximation_ratio(f64::NAN, 4).is_err());
    }
}
