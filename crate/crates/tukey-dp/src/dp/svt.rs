//! Sparse Vector Technique runner. One threshold-noise draw `X ~ Lap(3/eps)`
//! is shared by all comparisons, every query gets a fresh `Y_i ~ Lap(3/eps)`,
//! and the run halts at the first `i` with
//! `Y_i + q_i >= threshold - margin + X`. Queries must have sensitivity 1
//! (caller-asserted) and are evaluated lazily, strictly in order.

use crate::dp::noise::NoiseStream;

#[derive(Clone, Debug)]
pub struct SvtOutcome {
    pub halt: Option<usize>,
    /// Noisy query values seen before (and including) the halt. Debug only;
    /// not privacy-safe output.
    pub noisy: Vec<f64>,
}

pub fn svt_run(
    n_queries: usize,
    mut query: impl FnMut(usize) -> f64,
    threshold: f64,
    epsilon: f64,
    margin: f64,
    stream: &mut NoiseStream,
) -> SvtOutcome {
    let margin = if stream.is_disabled() { 0.0 } else { margin };
    let x = stream.laplace(3.0 / epsilon);
    let mut noisy = Vec::new();
    for i in 0..n_queries {
        let y = stream.laplace(3.0 / epsilon);
        let value = y + query(i);
        noisy.push(value);
        if value >= threshold - margin + x {
            return SvtOutcome {
                halt: Some(i),
                noisy,
            };
        }
    }
    SvtOutcome { halt: None, noisy }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::noise::NoiseMode;

    #[test]
    fn disabled_halts_at_first_crossing() {
        let qs = [3.0, 7.0, 9.0];
        let mut s = NoiseMode::Disabled.stream(0);
        let out = svt_run(3, |i| qs[i], 7.0, 1.0, 0.0, &mut s);
        assert_eq!(out.halt, Some(1));
    }

    #[test]
    fn disabled_no_halt_below_threshold() {
        let qs = [3.0, 4.0, 5.0];
        let mut s = NoiseMode::Disabled.stream(0);
        let out = svt_run(3, |i| qs[i], 7.0, 1.0, 0.0, &mut s);
        assert_eq!(out.halt, None);
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let qs = [1.0, 2.0, 6.5, 8.0, 9.0];
        let run = |seed| {
            let mut s = NoiseMode::Seeded(seed).stream(3);
            svt_run(5, |i| qs[i], 7.0, 2.0, 0.5, &mut s).halt
        };
        assert_eq!(run(9), run(9));
    }

    #[test]
    fn queries_evaluated_lazily_in_order() {
        let mut seen = Vec::new();
        let mut s = NoiseMode::Disabled.stream(0);
        let out = svt_run(
            5,
            |i| {
                seen.push(i);
                if i == 2 {
                    10.0
                } else {
                    0.0
                }
            },
            7.0,
            1.0,
            0.0,
            &mut s,
        );
        assert_eq!(out.halt, Some(2));
        assert_eq!(seen, vec![0, 1, 2], "no query past the halt index");
    }

    #[test]
    fn disabled_zeroes_the_margin() {
        // With margin forcibly zeroed, 6.9 < 7 must not halt.
        let mut s = NoiseMode::Disabled.stream(0);
        let out = svt_run(1, |_| 6.9, 7.0, 1.0, 5.0, &mut s);
        assert_eq!(out.halt, None);
    }
}
