//! Angle covers of the unit sphere, sized `2 * ceil(pi/zeta)^(d-1)`.

use crate::error::{Error, Result};
use crate::geo::point::Direction;

#[derive(Clone, Debug)]
pub struct AngleCover {
    pub zeta: f64,
    pub directions: Vec<Direction>,
}

/// Builds a zeta-angle cover: every unit vector has a cover member within
/// angle zeta. At d=1 this is `{+1, -1}`.
pub fn angle_cover(zeta: f64, dim: usize) -> Result<AngleCover> {
    if !(zeta > 0.0) || !zeta.is_finite() {
        return Err(Error::InvalidParam("zeta must be positive".into()));
    }
    let m = (std::f64::consts::PI / zeta).ceil() as usize;
    if 2 * m.pow(dim as u32 - 1) > 4_000_000 {
        return Err(Error::InvalidParam(format!(
            "angle cover of zeta = {zeta:.2e} at d = {dim} needs {} directions; \
             raise the width lower bound or alpha",
            2 * m.pow(dim as u32 - 1)
        )));
    }
    let directions = match dim {
        1 => vec![
            Direction::new(vec![1.0]).unwrap(),
            Direction::new(vec![-1.0]).unwrap(),
        ],
        2 => {
            let step = std::f64::consts::PI / m as f64;
            (0..2 * m)
                .map(|k| {
                    let t = k as f64 * step;
                    Direction::new(vec![t.cos(), t.sin()]).unwrap()
                })
                .collect()
        }
        3 => {
            // 2m azimuth values x m polar values (half-step offset avoids the
            // poles); total 2 * m^2.
            let step = std::f64::consts::PI / m as f64;
            let mut dirs = Vec::with_capacity(2 * m * m);
            for kp in 0..m {
                let phi = (kp as f64 + 0.5) * step;
                for ka in 0..2 * m {
                    let theta = ka as f64 * step;
                    dirs.push(
                        Direction::new(vec![
                            phi.sin() * theta.cos(),
                            phi.sin() * theta.sin(),
                            phi.cos(),
                        ])
                        .unwrap(),
                    );
                }
            }
            dirs
        }
        d => return Err(Error::UnsupportedDimension(d)),
    };
    let expected = 2 * m.pow(dim as u32 - 1);
    debug_assert_eq!(directions.len(), expected.max(2));
    Ok(AngleCover { zeta, directions })
}
