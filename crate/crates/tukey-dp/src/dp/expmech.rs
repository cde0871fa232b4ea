//! Categorical sampling proportional to given nonnegative weights. Disabled
//! mode degenerates to argmax with lowest-index tie-break.

use crate::dp::noise::NoiseStream;

pub fn exp_mechanism_sample(weights: &[f64], stream: &mut NoiseStream) -> usize {
    assert!(!weights.is_empty(), "weights must be non-empty");
    debug_assert!(weights.iter().all(|&w| w >= 0.0 && w.is_finite()));
    if stream.is_disabled() {
        let mut best = 0;
        for (i, &w) in weights.iter().enumerate() {
            if w > weights[best] {
                best = i;
            }
        }
        return best;
    }
    let total: f64 = weights.iter().sum();
    let mut t = stream.uniform() * total;
    for (i, &w) in weights.iter().enumerate() {
        t -= w;
        if t <= 0.0 {
            return i;
        }
    }
    weights.len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::noise::NoiseMode;

    #[test]
    fn disabled_is_argmax_lowest_index() {
        let mut s = NoiseMode::Disabled.stream(0);
        assert_eq!(exp_mechanism_sample(&[1.0, 5.0, 5.0], &mut s), 1);
    }

    #[test]
    fn symmetric_weights_are_balanced() {
        let mut s = NoiseMode::Seeded(5).stream(0);
        let n = 100_000;
        let mut c0 = 0usize;
        for _ in 0..n {
            if exp_mechanism_sample(&[1.0, 1.0], &mut s) == 0 {
                c0 += 1;
            }
        }
        let f = c0 as f64 / n as f64;
        assert!((0.49..=0.51).contains(&f), "{f}");
    }

    #[test]
    fn weight_ratio_e_to_one() {
        let mut s = NoiseMode::Seeded(6).stream(0);
        let n = 100_000;
        let mut c0 = 0usize;
        for _ in 0..n {
            if exp_mechanism_sample(&[std::f64::consts::E, 1.0], &mut s) == 0 {
                c0 += 1;
            }
        }
        let ratio = c0 as f64 / (n - c0) as f64;
        assert!((ratio - std::f64::consts::E).abs() / std::f64::consts::E < 0.05, "{ratio}");
    }
}
