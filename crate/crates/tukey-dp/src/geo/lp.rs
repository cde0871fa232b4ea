//! Dense two-phase simplex with Bland's rule. Instances here have at most
//! `d <= 3` free variables (plus a radius variable for Chebyshev centers) and
//! up to a few thousand `<=` constraints, so a tableau method is plenty.

use crate::error::{Error, Result};
use crate::geo::halfspace::Halfspace;
use crate::geo::point::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

const LP_TOL: f64 = 1e-9;

/// Optimizes `<objective, x>` over the intersection of `constraints`.
/// Returns the optimal value and an achieving point.
pub fn lp_solve(objective: &[f64], constraints: &[Halfspace], sense: Sense) -> Result<(f64, Point)> {
    let rows: Vec<(Vec<f64>, f64)> = constraints
        .iter()
        .map(|h| (h.normal.components().to_vec(), h.offset))
        .collect();
    let (val, x) = solve_rows(objective, &rows, sense)?;
    Ok((val, Point::new(x)))
}

/// Same as [`lp_solve`] but over raw `(a, b)` rows meaning `<a, x> <= b`.
pub fn solve_rows(objective: &[f64], rows: &[(Vec<f64>, f64)], sense: Sense) -> Result<(f64, Vec<f64>)> {
    let d = objective.len();
    // Free variables: x_j = u_j - w_j with u, w >= 0.
    let mut obj = Vec::with_capacity(2 * d);
    for &c in objective {
        obj.push(c);
        obj.push(-c);
    }
    let obj: Vec<f64> = match sense {
        Sense::Max => obj,
        Sense::Min => obj.iter().map(|c| -c).collect(),
    };

    let m = rows.len();
    let n_struct = 2 * d;
    // Tableau columns: structural | slack (one per row) | artificial (as needed) | rhs.
    let mut a: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs: Vec<f64> = Vec::with_capacity(m);
    let mut needs_artificial: Vec<bool> = Vec::with_capacity(m);
    for (coef, b) in rows {
        let mut row = Vec::with_capacity(n_struct);
        for &c in coef {
            row.push(c);
            row.push(-c);
        }
        let (row, b, art) = if *b < 0.0 {
            (row.iter().map(|c| -c).collect::<Vec<_>>(), -b, true)
        } else {
            (row, *b, false)
        };
        a.push(row);
        rhs.push(b);
        needs_artificial.push(art);
    }

    let n_art: usize = needs_artificial.iter().filter(|&&x| x).count();
    let n_total = n_struct + m + n_art;
    let mut t = vec![vec![0.0; n_total + 1]; m];
    let mut basis = vec![0usize; m];
    let mut art_col = n_struct + m;
    for i in 0..m {
        for j in 0..n_struct {
            t[i][j] = a[i][j];
        }
        // Slack: +1 normally, -1 on negated rows (original surplus).
        t[i][n_struct + i] = if needs_artificial[i] { -1.0 } else { 1.0 };
        if needs_artificial[i] {
            t[i][art_col] = 1.0;
            basis[i] = art_col;
            art_col += 1;
        } else {
            basis[i] = n_struct + i;
        }
        t[i][n_total] = rhs[i];
    }

    // Phase 1: minimize the sum of artificials.
    if n_art > 0 {
        let mut cost = vec![0.0; n_total];
        for c in cost.iter_mut().take(n_total).skip(n_struct + m) {
            *c = -1.0; // maximize -(sum of artificials)
        }
        let opt = run_simplex(&mut t, &mut basis, &cost, n_total)?;
        if opt < -LP_TOL {
            return Err(Error::Infeasible);
        }
        // Pivot remaining artificials out of the basis when possible.
        for i in 0..m {
            if basis[i] >= n_struct + m {
                if let Some(j) = (0..n_struct + m).find(|&j| t[i][j].abs() > LP_TOL) {
                    pivot(&mut t, &mut basis, i, j, n_total);
                } // else the row is redundant; leave the zero artificial basic.
            }
        }
    }

    // Phase 2.
    let mut cost = vec![0.0; n_total];
    cost[..n_struct].copy_from_slice(&obj[..n_struct]);
    for j in n_struct + m..n_total {
        cost[j] = f64::NEG_INFINITY; // artificials may never re-enter
    }
    let opt = run_simplex(&mut t, &mut basis, &cost, n_total)?;

    let mut x_split = vec![0.0; n_struct];
    for i in 0..m {
        if basis[i] < n_struct {
            x_split[basis[i]] = t[i][n_total];
        }
    }
    let x: Vec<f64> = (0..d).map(|j| x_split[2 * j] - x_split[2 * j + 1]).collect();
    let val = match sense {
        Sense::Max => opt,
        Sense::Min => -opt,
    };
    Ok((val, x))
}

/// Feasibility check: does the system `<a_i, x> <= b_i` admit a solution?
pub fn feasible(rows: &[(Vec<f64>, f64)], dim: usize) -> bool {
    let obj = vec![0.0; dim];
    solve_rows(&obj, rows, Sense::Max).is_ok()
}

fn run_simplex(t: &mut [Vec<f64>], basis: &mut [usize], cost: &[f64], n_total: usize) -> Result<f64> {
    let m = t.len();
    loop {
        // Reduced costs: c_j - c_B . B^-1 A_j. Bland's rule: lowest improving index.
        let mut entering = None;
        for j in 0..n_total {
            if cost[j] == f64::NEG_INFINITY || basis.contains(&j) {
                continue;
            }
            let mut red = cost[j];
            for i in 0..m {
                let cb = cost[basis[i]];
                if cb != 0.0 && cb != f64::NEG_INFINITY {
                    red -= cb * t[i][j];
                }
            }
            if red > LP_TOL {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else {
            let mut val = 0.0;
            for i in 0..m {
                let cb = cost[basis[i]];
                if cb != 0.0 && cb != f64::NEG_INFINITY {
                    val += cb * t[i][n_total];
                }
            }
            return Ok(val);
        };
        // Ratio test, lowest basis index on ties (Bland).
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][j] > LP_TOL {
                let ratio = t[i][n_total] / t[i][j];
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - LP_TOL || (ratio < lr + LP_TOL && basis[i] < basis[li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((i, _)) = leave else {
            return Err(Error::Unbounded);
        };
        pivot(t, basis, i, j, n_total);
    }
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], row: usize, col: usize, n_total: usize) {
    let p = t[row][col];
    for v in t[row].iter_mut() {
        *v /= p;
    }
    for i in 0..t.len() {
        if i != row && t[i][col].abs() > 0.0 {
            let f = t[i][col];
            for j in 0..=n_total {
                t[i][j] -= f * t[row][j];
            }
        }
    }
    basis[row] = col;
}
