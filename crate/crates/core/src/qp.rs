//! The restricted p=2 modulus problem
//!
//! ```text
//! minimize Σ_e ρ(e)²   subject to   Σ_{e∈r} ρ(e) ≥ 1 for every row r,  ρ ≥ 0
//! ```
//!
//! solved in the dual by Hildreth's coordinate ascent. The primal iterate is
//! always `ρ = Nᵀλ/2`, so nonnegativity holds automatically.

use std::collections::HashSet;

use serde::Serialize;

/// Binary incidence matrix of a constraint family: one row per loop, listing
/// its edge ids.
#[derive(Debug, Clone, Default)]
pub struct ConstraintMatrix {
    edge_count: usize,
    rows: Vec<Vec<usize>>,
    keys: HashSet<Vec<usize>>,
}

impl ConstraintMatrix {
    pub fn new(edge_count: usize, rows: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let mut m = ConstraintMatrix {
            edge_count,
            ..Self::default()
        };
        for row in rows {
            m.push(row);
        }
        m
    }

    /// Appends a row unless one with the same edge set exists. Returns
    /// whether it was added.
    pub fn push(&mut self, row: Vec<usize>) -> bool {
        assert!(row.len() >= 3, "a loop has at least three edges");
        assert!(row.iter().all(|&e| e < self.edge_count), "edge id out of range");
        let mut key = row.clone();
        key.sort_unstable();
        if !self.keys.insert(key) {
            return false;
        }
        self.rows.push(row);
        true
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `Nᵀλ / 2`, summed row by row.
    pub fn density(&self, lambda: &[f64]) -> Vec<f64> {
        let mut rho = vec![0.0; self.edge_count];
        for (row, &l) in self.rows.iter().zip(lambda) {
            if l != 0.0 {
                for &e in row {
                    rho[e] += l;
                }
            }
        }
        rho.iter_mut().for_each(|r| *r /= 2.0);
        rho
    }

    pub fn row_length(&self, r: usize, rho: &[f64]) -> f64 {
        self.rows[r].iter().map(|&e| rho[e]).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QpOptions {
    pub tolerance: f64,
    /// Full passes over the rows; `0` means `200 × rows`.
    pub max_passes: usize,
    /// Keep the dual objective after every pass.
    pub record_dual: bool,
}

impl Default for QpOptions {
    fn default() -> Self {
        QpOptions {
            tolerance: 1e-8,
            max_passes: 0,
            record_dual: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QpSolution {
    pub rho: Vec<f64>,
    pub lambda: Vec<f64>,
    pub modulus: f64,
    /// Completed passes.
    pub iterations: usize,
    /// `max_r (1 − ℓ_ρ(r))`, clamped below at 0.
    pub max_violation: f64,
    /// Primal minus dual objective, `Σ_r λ_r (ℓ_ρ(r) − 1)`.
    pub duality_gap: f64,
    pub dual_objective: f64,
    pub converged: bool,
    pub dual_trace: Vec<f64>,
}

/// `Σλ − Σρ²` at `ρ = Nᵀλ/2`.
pub fn dual_value(lambda: &[f64], rho: &[f64]) -> f64 {
    lambda.iter().sum::<f64>() - rho.iter().map(|r| r * r).sum::<f64>()
}

/// Solves over `matrix`. A warm start supplies multipliers for a prefix of
/// the rows (typically the previous solve's); rows beyond it start at zero.
pub fn solve(matrix: &ConstraintMatrix, warm: Option<&[f64]>, opts: &QpOptions) -> QpSolution {
    let rows = matrix.rows();
    let mut lambda = vec![0.0; rows.len()];
    if let Some(w) = warm {
        assert!(w.len() <= rows.len(), "warm start has more multipliers than rows");
        lambda[..w.len()].copy_from_slice(w);
    }
    let mut rho = matrix.density(&lambda);
    let max_passes = if opts.max_passes == 0 {
        200 * rows.len().max(1)
    } else {
        opts.max_passes
    };
    let tol = opts.tolerance;
    let mut dual_trace = Vec::new();
    if opts.record_dual {
        dual_trace.push(dual_value(&lambda, &rho));
    }

    let mut passes = 0;
    let mut converged = rows.is_empty();
    while !converged && passes < max_passes {
        let mut largest_step: f64 = 0.0;
        for (r, row) in rows.iter().enumerate() {
            let ell: f64 = row.iter().map(|&e| rho[e]).sum();
            let next = (lambda[r] + 2.0 * (1.0 - ell) / row.len() as f64).max(0.0);
            let step = next - lambda[r];
            if step != 0.0 {
                lambda[r] = next;
                for &e in row {
                    rho[e] += step / 2.0;
                }
                largest_step = largest_step.max(step.abs());
            }
        }
        passes += 1;
        // drop accumulated rounding from the incremental updates
        rho = matrix.density(&lambda);
        if opts.record_dual {
            dual_trace.push(dual_value(&lambda, &rho));
        }
        if largest_step <= tol {
            let (violation, gap) = residuals(matrix, &lambda, &rho);
            converged = violation <= tol && gap.abs() <= tol;
        }
    }

    let (max_violation, duality_gap) = residuals(matrix, &lambda, &rho);
    debug_assert!(rho.iter().all(|&r| r >= 0.0));
    QpSolution {
        modulus: rho.iter().map(|r| r * r).sum(),
        dual_objective: dual_value(&lambda, &rho),
        rho,
        lambda,
        iterations: passes,
        max_violation,
        duality_gap,
        converged,
        dual_trace,
    }
}

fn residuals(matrix: &ConstraintMatrix, lambda: &[f64], rho: &[f64]) -> (f64, f64) {
    let mut violation: f64 = 0.0;
    let mut gap = 0.0;
    for (r, &l) in lambda.iter().enumerate() {
        let ell = matrix.row_length(r, rho);
        violation = violation.max(1.0 - ell);
        gap += l * (ell - 1.0);
    }
    (violation, gap)
}
