//! Tukey-depth completion over a nested region chain. For a fixed coordinate
//! prefix, the per-depth slice extents form nested intervals
//! `a_1 <= a_2 <= ... <= b_2 <= b_1`; point and interval queries then run in
//! `O(log kappa*)` by binary search on the monotone flanks.

use crate::error::Result;
use crate::geo::lp::Sense;
use crate::tukey::region::RegionChain;

/// Change-point structure for one prefix: `interval k` (1-based) is the
/// extent of coordinate `i+1` over `D_P(k)` sliced at the prefix.
#[derive(Clone, Debug, Default)]
pub struct NestedIntervals {
    a: Vec<f64>,
    b: Vec<f64>,
}

/// Point/interval evaluation shared by TDC and shifted-TDC profiles.
pub trait UnimodalProfile {
    fn value_at(&self, x: f64) -> usize;
    /// Continuous closed interval on which the maximum is attained.
    fn plateau(&self) -> Option<(f64, f64)>;
    fn max_value(&self) -> usize;
    /// `max_{x in [lo, hi]} f(x)` over the continuous line.
    fn interval_max(&self, lo: f64, hi: f64) -> usize;
}

impl NestedIntervals {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> NestedIntervals {
        debug_assert_eq!(a.len(), b.len());
        NestedIntervals { a, b }
    }

    /// Builds from per-depth spans `(lo, hi)`, stopping at the first
    /// inversion (which cannot happen for true nested chains).
    pub fn from_spans(spans: &[(f64, f64)]) -> NestedIntervals {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for &(lo, hi) in spans {
            if lo > hi {
                break;
            }
            a.push(lo);
            b.push(hi);
        }
        NestedIntervals { a, b }
    }

    pub fn depth_count(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn interval(&self, kappa: usize) -> Option<(f64, f64)> {
        if kappa == 0 || kappa > self.a.len() {
            None
        } else {
            Some((self.a[kappa - 1], self.b[kappa - 1]))
        }
    }

    /// Merged change-point view for the `min(TDC(x), TDC(x + ell))` profile.
    pub fn shifted(&self, ell: f64) -> LtdcProfile {
        let mut xs: Vec<f64> = Vec::with_capacity(4 * self.a.len());
        for k in 0..self.a.len() {
            xs.push(self.a[k]);
            xs.push(self.b[k]);
            xs.push(self.a[k] - ell);
            xs.push(self.b[k] - ell);
        }
        xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
        xs.dedup_by(|p, q| (*p - *q).abs() <= 1e-12);
        let eval = |x: f64| self.value_at(x).min(self.value_at(x + ell));
        // Alternating element values: open segment, atom, open segment, ...
        let mut vals = Vec::with_capacity(2 * xs.len() + 1);
        for (i, &x) in xs.iter().enumerate() {
            let left_rep = if i == 0 { x - 1.0 } else { (xs[i - 1] + x) / 2.0 };
            vals.push(eval(left_rep));
            vals.push(eval(x));
        }
        vals.push(if xs.is_empty() { 0 } else { eval(xs[xs.len() - 1] + 1.0) });
        LtdcProfile { xs, vals }
    }
}

impl UnimodalProfile for NestedIntervals {
    fn value_at(&self, x: f64) -> usize {
        // #{k : a_k <= x} and #{k : b_k >= x}; the depth is their min.
        let ka = self.a.partition_point(|&v| v <= x);
        let kb = self.b.partition_point(|&v| v >= x);
        ka.min(kb)
    }

    fn plateau(&self) -> Option<(f64, f64)> {
        if self.a.is_empty() {
            None
        } else {
            Some((self.a[self.a.len() - 1], self.b[self.b.len() - 1]))
        }
    }

    fn max_value(&self) -> usize {
        self.a.len()
    }

    fn interval_max(&self, lo: f64, hi: f64) -> usize {
        // Interval k intersects [lo, hi] iff a_k <= hi and b_k >= lo.
        let ka = self.a.partition_point(|&v| v <= hi);
        let kb = self.b.partition_point(|&v| v >= lo);
        ka.min(kb)
    }
}

/// Piecewise-constant unimodal profile of the shifted completion function on
/// the 4k* merged change points.
#[derive(Clone, Debug)]
pub struct LtdcProfile {
    xs: Vec<f64>,
    /// `2 * xs.len() + 1` values: element `2j` is the open segment left of
    /// `xs[j]`, element `2j+1` the atom at `xs[j]`.
    vals: Vec<usize>,
}

impl LtdcProfile {
    fn element_of(&self, x: f64) -> usize {
        let j = self.xs.partition_point(|&v| v < x - 1e-12);
        if j < self.xs.len() && (self.xs[j] - x).abs() <= 1e-12 {
            2 * j + 1
        } else {
            2 * j
        }
    }

    fn peak_range(&self) -> (usize, usize, usize) {
        let max = *self.vals.iter().max().unwrap_or(&0);
        let lo = self.vals.iter().position(|&v| v == max).unwrap_or(0);
        let hi = self.vals.iter().rposition(|&v| v == max).unwrap_or(0);
        (lo, hi, max)
    }

    /// Closed x-extent of an element range.
    fn x_extent(&self, e_lo: usize, e_hi: usize) -> Option<(f64, f64)> {
        if self.xs.is_empty() {
            return None;
        }
        let lo = if e_lo == 0 {
            f64::NEG_INFINITY
        } else {
            self.xs[(e_lo - 1) / 2]
        };
        let hi = if e_hi >= 2 * self.xs.len() {
            f64::INFINITY
        } else {
            self.xs[e_hi / 2]
        };
        Some((lo, hi))
    }
}

impl UnimodalProfile for LtdcProfile {
    fn value_at(&self, x: f64) -> usize {
        self.vals.get(self.element_of(x)).copied().unwrap_or(0)
    }

    fn plateau(&self) -> Option<(f64, f64)> {
        let (lo, hi, max) = self.peak_range();
        if max == 0 {
            return None;
        }
        self.x_extent(lo, hi)
    }

    fn max_value(&self) -> usize {
        self.peak_range().2
    }

    fn interval_max(&self, lo: f64, hi: f64) -> usize {
        if self.vals.is_empty() {
            return 0;
        }
        let e_lo = self.element_of(lo);
        let e_hi = self.element_of(hi);
        let (p_lo, p_hi, max) = self.peak_range();
        if e_lo <= p_hi && e_hi >= p_lo {
            max
        } else if e_hi < p_lo {
            self.vals[e_hi]
        } else {
            self.vals[e_lo]
        }
    }
}

/// Runs the per-depth slice LPs for a prefix and collects the nested
/// intervals, stopping at the first empty slice. An empty prefix slice of
/// `D_P(1)` yields an all-zero completion function rather than an error.
pub fn tdc_precompute(chain: &RegionChain, prefix: &[f64]) -> Result<NestedIntervals> {
    let mut a = Vec::new();
    let mut b = Vec::new();
    let coord = prefix.len();
    for region in chain.regions() {
        match region.slice_extent(prefix, coord)? {
            Some((lo, hi)) => {
                a.push(lo);
                b.push(hi);
            }
            None => break,
        }
    }
    Ok(NestedIntervals { a, b })
}

/// Direction-restricted completion: extents of `<x, v>` per depth, the
/// vertex-scan specialization of the slice LP for an empty prefix.
pub fn directional_intervals(chain: &RegionChain, dir: &[f64]) -> NestedIntervals {
    NestedIntervals::from_spans(&chain.spans(dir))
}

/// The same intervals through the LP route, for cross-checks against
/// [`directional_intervals`].
pub fn directional_intervals_lp(chain: &RegionChain, dir: &[f64]) -> Result<NestedIntervals> {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for region in chain.regions() {
        let lo = crate::geo::polytope::lp_over(region, dir, Sense::Min);
        let hi = crate::geo::polytope::lp_over(region, dir, Sense::Max);
        match (lo, hi) {
            (Ok((l, _)), Ok((h, _))) => {
                a.push(l);
                b.push(h);
            }
            _ => break,
        }
    }
    Ok(NestedIntervals { a, b })
}
