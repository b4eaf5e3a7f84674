//! Linear feasibility kernel: decides whether `A q <= b` has a solution with
//! `q >= 0`.
//!
//! The problems solved here are tiny (a handful of tradeoffs against a
//! handful of objectives), so a dense phase-one simplex over a full tableau
//! is used, with Bland's rule for anti-cycling.

use thiserror::Error;

/// Default slack allowed on each constraint of a returned witness.
pub const DEFAULT_TOLERANCE: f64 = 1e-7;

const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("row {row} has {found} coefficients, expected {expected}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("{rows} constraint rows but {bounds} bounds")]
    BoundCount { rows: usize, bounds: usize },
    #[error("non-finite coefficient in feasibility problem")]
    NonFinite,
    #[error("simplex did not converge within {0} pivots")]
    IterationLimit(usize),
}

/// Outcome of a feasibility query.
#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    /// A nonnegative witness `q` with `A q <= b + tol`.
    Feasible(Vec<f64>),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(&self) -> Option<&[f64]> {
        match self {
            Feasibility::Feasible(q) => Some(q),
            Feasibility::Infeasible => None,
        }
    }
}

/// Decides `∃ q >= 0 : rows · q <= bounds` at [`DEFAULT_TOLERANCE`].
pub fn linear_feasible(rows: &[Vec<f64>], bounds: &[f64]) -> Result<Feasibility, LpError> {
    linear_feasible_with_tolerance(rows, bounds, DEFAULT_TOLERANCE)
}

pub fn linear_feasible_with_tolerance(
    rows: &[Vec<f64>],
    bounds: &[f64],
    tol: f64,
) -> Result<Feasibility, LpError> {
    if rows.len() != bounds.len() {
        return Err(LpError::BoundCount {
            rows: rows.len(),
            bounds: bounds.len(),
        });
    }
    let cols = rows.first().map_or(0, Vec::len);
    let mut dense = Vec::with_capacity(rows.len() * cols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(LpError::DimensionMismatch {
                row: i,
                expected: cols,
                found: row.len(),
            });
        }
        dense.extend_from_slice(row);
    }
    feasible_dense(rows.len(), cols, &dense, bounds, tol)
}

/// Row-major variant used on hot paths.
pub(crate) fn feasible_dense(
    m: usize,
    n: usize,
    a: &[f64],
    b: &[f64],
    tol: f64,
) -> Result<Feasibility, LpError> {
    debug_assert_eq!(a.len(), m * n);
    if a.iter().chain(b).any(|x| !x.is_finite()) || !tol.is_finite() {
        return Err(LpError::NonFinite);
    }
    let exact = b;
    // solve against half the slack, keeping the rest for rounding in the check
    let relaxed: Vec<f64> = b.iter().map(|&bi| bi + 0.5 * tol.max(0.0)).collect();
    let b = relaxed.as_slice();
    if b.iter().all(|&bi| bi >= 0.0) {
        return Ok(Feasibility::Feasible(vec![0.0; n]));
    }
    if n == 0 {
        return Ok(if exact.iter().all(|&bi| bi >= -tol) {
            Feasibility::Feasible(Vec::new())
        } else {
            Feasibility::Infeasible
        });
    }

    // Columns: x (n), slacks (m), artificials (one per negative bound), rhs.
    let art_rows: Vec<usize> = (0..m).filter(|&i| b[i] < 0.0).collect();
    let n_art = art_rows.len();
    let width = n + m + n_art + 1;
    let rhs = width - 1;
    let mut t = vec![0.0; m * width];
    let mut basis = vec![0usize; m];
    let mut art_col = n + m;
    for i in 0..m {
        let row = &mut t[i * width..(i + 1) * width];
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            row[j] = sign * a[i * n + j];
        }
        row[n + i] = sign;
        row[rhs] = sign * b[i];
        if b[i] < 0.0 {
            row[art_col] = 1.0;
            basis[i] = art_col;
            art_col += 1;
        } else {
            basis[i] = n + i;
        }
    }
    // reduced costs of the phase-one objective (sum of artificials)
    let mut cost = vec![0.0; width];
    for &i in &art_rows {
        for j in 0..n + m {
            cost[j] -= t[i * width + j];
        }
        cost[rhs] -= t[i * width + rhs];
    }

    let limit = 10 * (n + m);
    let mut iterations = 0;
    loop {
        let entering = (0..n + m + n_art).find(|&j| cost[j] < -PIVOT_EPS);
        let Some(col) = entering else { break };
        iterations += 1;
        if iterations > limit {
            return Err(LpError::IterationLimit(limit));
        }
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let coef = t[i * width + col];
            if coef > PIVOT_EPS {
                let ratio = t[i * width + rhs] / coef;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((r, best)) => {
                        if ratio < best - PIVOT_EPS
                            || (ratio <= best + PIVOT_EPS && basis[i] < basis[r])
                        {
                            Some((i, ratio))
                        } else {
                            Some((r, best))
                        }
                    }
                };
            }
        }
        // phase one is bounded below by zero, so a ray means the cost row
        // has drifted numerically
        let Some((row, _)) = leave else { break };
        pivot(&mut t, width, m, row, col, &mut cost);
        basis[row] = col;
    }

    let mut q = vec![0.0; n];
    for i in 0..m {
        if basis[i] < n {
            q[basis[i]] = t[i * width + rhs].max(0.0);
        }
    }
    let violation = (0..m)
        .map(|i| (0..n).map(|j| a[i * n + j] * q[j]).sum::<f64>() - exact[i])
        .fold(f64::NEG_INFINITY, f64::max);
    if violation <= tol {
        Ok(Feasibility::Feasible(q))
    } else {
        Ok(Feasibility::Infeasible)
    }
}

fn pivot(t: &mut [f64], width: usize, m: usize, row: usize, col: usize, cost: &mut [f64]) {
    let p = t[row * width + col];
    for j in 0..width {
        t[row * width + j] /= p;
    }
    let pivot_row: Vec<f64> = t[row * width..(row + 1) * width].to_vec();
    for i in 0..m {
        if i == row {
            continue;
        }
        let f = t[i * width + col];
        if f != 0.0 {
            for j in 0..width {
                t[i * width + j] -= f * pivot_row[j];
            }
        }
    }
    let f = cost[col];
    if f != 0.0 {
        for j in 0..width {
            cost[j] -= f * pivot_row[j];
        }
    }
}
