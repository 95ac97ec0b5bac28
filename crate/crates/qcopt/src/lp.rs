//! Dense linear-program solver: two-phase primal simplex with Bland's
//! anti-cycling rule and native handling of variable bounds.
//!
//! Problems are stated as maximization over bounded variables with `<=`,
//! `=`, and `>=` rows. The pivot rule is fixed, so identical inputs produce
//! identical solutions. Optimal solves also return a dual vector and a dual
//! objective value certifying the primal objective from above.

/// Constraint-satisfaction tolerance for solution checks.
pub const FEASIBILITY_TOL: f64 = 1e-7;
/// Smallest tableau entry accepted as a pivot.
pub const PIVOT_TOL: f64 = 1e-12;
/// Reduced-cost threshold for pivot eligibility.
const REDUCED_COST_TOL: f64 = 1e-9;
/// Grouping tolerance for ratio-test ties.
const RATIO_TIE_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum LpError {
    #[error("constraint {index} has {got} coefficients, expected {expected}")]
    DimensionMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("bounds list has {got} entries, expected {expected}")]
    BoundsMismatch { got: usize, expected: usize },
    #[error("variable {index} has invalid bounds [{lo}, {hi}]")]
    InvalidBounds { index: usize, lo: f64, hi: f64 },
    #[error("non-finite coefficient in {place}")]
    NonFinite { place: String },
    #[error("numerical breakdown: no acceptable pivot above {PIVOT_TOL:e}")]
    DegenerateNumerics,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }
}

/// A dense LP: maximize `objective . x` subject to the constraints and
/// per-variable finite bounds.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    /// Inclusive `[lo, hi]` per variable; both ends finite.
    pub bounds: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Variable values; empty unless `status == Optimal`.
    pub values: Vec<f64>,
    pub objective_value: f64,
    /// Dual value per constraint (original row order and orientation).
    pub dual: Vec<f64>,
    /// Dual value per variable upper bound; non-negative.
    pub bound_dual: Vec<f64>,
    /// Certified upper bound on the primal objective.
    pub dual_objective: f64,
}

impl LpSolution {
    fn non_optimal(status: LpStatus) -> Self {
        LpSolution {
            status,
            values: Vec::new(),
            objective_value: 0.0,
            dual: Vec::new(),
            bound_dual: Vec::new(),
            dual_objective: 0.0,
        }
    }
}

fn validate(lp: &LinearProgram) -> Result<(), LpError> {
    let nv = lp.objective.len();
    if lp.bounds.len() != nv {
        return Err(LpError::BoundsMismatch {
            got: lp.bounds.len(),
            expected: nv,
        });
    }
    if lp.objective.iter().any(|c| !c.is_finite()) {
        return Err(LpError::NonFinite {
            place: "objective".to_string(),
        });
    }
    for (index, &(lo, hi)) in lp.bounds.iter().enumerate() {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(LpError::InvalidBounds { index, lo, hi });
        }
    }
    for (index, c) in lp.constraints.iter().enumerate() {
        if c.coeffs.len() != nv {
            return Err(LpError::DimensionMismatch {
                index,
                got: c.coeffs.len(),
                expected: nv,
            });
        }
        if c.coeffs.iter().any(|v| !v.is_finite()) || !c.rhs.is_finite() {
            return Err(LpError::NonFinite {
                place: format!("constraint {index}"),
            });
        }
    }
    Ok(())
}

/// Working state of the bounded-variable simplex. Columns are laid out as
/// `[structural | slacks and surpluses | artificials]`; the rhs column
/// stores current basic-variable values directly.
struct Tableau {
    rows: Vec<Vec<f64>>,
    xb: Vec<f64>,
    obj_row: Vec<f64>,
    basis: Vec<usize>,
    at_upper: Vec<bool>,
    upper: Vec<f64>,
    costs: Vec<f64>,
    n_cols: usize,
    artificial_start: usize,
}

enum StepOutcome {
    Optimal,
    Unbounded,
    Progress,
}

impl Tableau {
    fn recompute_obj_row(&mut self) {
        for j in 0..self.n_cols {
            let mut z = 0.0;
            for (r, row) in self.rows.iter().enumerate() {
                let cb = self.costs[self.basis[r]];
                if cb != 0.0 {
                    z += cb * row[j];
                }
            }
            self.obj_row[j] = z - self.costs[j];
        }
    }

    fn is_basic(&self, col: usize) -> bool {
        self.basis.contains(&col)
    }

    fn step(&mut self, allow_artificial: bool) -> Result<StepOutcome, LpError> {
        // Entering column: Bland's rule, smallest eligible index.
        let mut entering = None;
        for j in 0..self.n_cols {
            if !allow_artificial && j >= self.artificial_start {
                break;
            }
            if self.is_basic(j) || self.upper[j] <= 0.0 {
                continue;
            }
            let d = self.obj_row[j];
            let eligible = if self.at_upper[j] {
                d > REDUCED_COST_TOL
            } else {
                d < -REDUCED_COST_TOL
            };
            if eligible {
                entering = Some(j);
                break;
            }
        }
        let Some(e) = entering else {
            return Ok(StepOutcome::Optimal);
        };
        let sigma = if self.at_upper[e] { -1.0 } else { 1.0 };

        // Ratio test over basic rows plus the entering variable's own bound.
        let mut t_rows = f64::INFINITY;
        let mut leave_row: Option<usize> = None;
        let mut tiny_pivot_only = false;
        for r in 0..self.rows.len() {
            let w = sigma * self.rows[r][e];
            let limit = if w > PIVOT_TOL {
                (self.xb[r].max(0.0)) / w
            } else if w < -PIVOT_TOL {
                let ub = self.upper[self.basis[r]];
                if ub.is_finite() {
                    ((ub - self.xb[r]).max(0.0)) / (-w)
                } else {
                    continue;
                }
            } else {
                if w.abs() > 0.0 && self.xb[r].max(0.0) < RATIO_TIE_TOL {
                    tiny_pivot_only = true;
                }
                continue;
            };
            if limit < t_rows - RATIO_TIE_TOL {
                t_rows = limit;
                leave_row = Some(r);
            } else if limit <= t_rows + RATIO_TIE_TOL {
                t_rows = t_rows.min(limit);
                match leave_row {
                    Some(cur) if self.basis[cur] <= self.basis[r] => {}
                    _ => leave_row = Some(r),
                }
            }
        }

        let t_bound = self.upper[e];
        if t_bound <= t_rows {
            if !t_bound.is_finite() {
                return if tiny_pivot_only {
                    Err(LpError::DegenerateNumerics)
                } else {
                    Ok(StepOutcome::Unbounded)
                };
            }
            // Bound flip: the entering variable crosses to its other bound.
            for r in 0..self.rows.len() {
                self.xb[r] -= sigma * self.rows[r][e] * t_bound;
            }
            self.at_upper[e] = !self.at_upper[e];
            return Ok(StepOutcome::Progress);
        }
        let Some(r_star) = leave_row else {
            return if tiny_pivot_only {
                Err(LpError::DegenerateNumerics)
            } else {
                Ok(StepOutcome::Unbounded)
            };
        };
        let t = t_rows.max(0.0);

        // Move every basic value by the step, then swap the basis.
        for r in 0..self.rows.len() {
            self.xb[r] -= sigma * self.rows[r][e] * t;
        }
        let leaving = self.basis[r_star];
        self.at_upper[leaving] = sigma * self.rows[r_star][e] < 0.0;
        let entering_value = if sigma > 0.0 {
            t
        } else {
            self.upper[e] - t
        };

        let pivot = self.rows[r_star][e];
        if pivot.abs() < PIVOT_TOL {
            return Err(LpError::DegenerateNumerics);
        }
        let inv = 1.0 / pivot;
        for v in self.rows[r_star].iter_mut() {
            *v *= inv;
        }
        for r in 0..self.rows.len() {
            if r == r_star {
                continue;
            }
            let factor = self.rows[r][e];
            if factor != 0.0 {
                let (head, tail) = if r < r_star {
                    let (a, b) = self.rows.split_at_mut(r_star);
                    (&mut a[r], &b[0])
                } else {
                    let (a, b) = self.rows.split_at_mut(r);
                    (&mut b[0], &a[r_star])
                };
                for (x, y) in head.iter_mut().zip(tail.iter()) {
                    *x -= factor * y;
                }
            }
        }
        let factor = self.obj_row[e];
        if factor != 0.0 {
            for (x, y) in self.obj_row.iter_mut().zip(self.rows[r_star].iter()) {
                *x -= factor * y;
            }
        }
        self.basis[r_star] = e;
        self.xb[r_star] = entering_value;
        self.at_upper[e] = false;
        Ok(StepOutcome::Progress)
    }

    fn run(&mut self, allow_artificial: bool) -> Result<LpStatus, LpError> {
        // Generous iteration cap; Bland's rule precludes cycling, so hitting
        // it indicates numerical trouble.
        let cap = 50_000 + 50 * (self.n_cols + self.rows.len()) * (self.rows.len() + 1);
        for _ in 0..cap {
            match self.step(allow_artificial)? {
                StepOutcome::Optimal => return Ok(LpStatus::Optimal),
                StepOutcome::Unbounded => return Ok(LpStatus::Unbounded),
                StepOutcome::Progress => {}
            }
        }
        Err(LpError::DegenerateNumerics)
    }
}

/// Solve the LP. Deterministic: a fixed pivot rule means identical inputs
/// yield identical outputs.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    validate(lp)?;
    let nv = lp.objective.len();
    let m = lp.constraints.len();

    // Shift variables to start at zero: x = x' + lo, x' in [0, hi - lo].
    let shift: Vec<f64> = lp.bounds.iter().map(|&(lo, _)| lo).collect();
    let width: Vec<f64> = lp.bounds.iter().map(|&(lo, hi)| hi - lo).collect();
    let obj_shift: f64 = lp
        .objective
        .iter()
        .zip(&shift)
        .map(|(c, lo)| c * lo)
        .sum();

    // Normalized rows: coefficients, rhs >= 0, relation, sign flip flag.
    struct Row {
        coeffs: Vec<f64>,
        rhs: f64,
        relation: Relation,
        negated: bool,
    }
    let rows_norm: Vec<Row> = lp
        .constraints
        .iter()
        .map(|c| {
            let adj: f64 = c.coeffs.iter().zip(&shift).map(|(a, lo)| a * lo).sum();
            let mut coeffs = c.coeffs.clone();
            let mut rhs = c.rhs - adj;
            let mut relation = c.relation;
            let mut negated = false;
            if rhs < 0.0 {
                for v in &mut coeffs {
                    *v = -*v;
                }
                rhs = -rhs;
                negated = true;
                relation = match relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            Row {
                coeffs,
                rhs,
                relation,
                negated,
            }
        })
        .collect();

    let n_slack = rows_norm
        .iter()
        .filter(|r| r.relation != Relation::Eq)
        .count();
    let n_artificial = rows_norm
        .iter()
        .filter(|r| r.relation != Relation::Le)
        .count();
    let artificial_start = nv + n_slack;
    let n_cols = nv + n_slack + n_artificial;

    let mut tab = Tableau {
        rows: vec![vec![0.0; n_cols]; m],
        xb: vec![0.0; m],
        obj_row: vec![0.0; n_cols],
        basis: vec![0; m],
        at_upper: vec![false; n_cols],
        upper: vec![f64::INFINITY; n_cols],
        costs: vec![0.0; n_cols],
        n_cols,
        artificial_start,
    };
    for (j, w) in width.iter().enumerate() {
        tab.upper[j] = *w;
    }

    let mut slack_col_of = vec![usize::MAX; m];
    let mut artificial_col_of = vec![usize::MAX; m];
    let mut next_slack = nv;
    let mut next_artificial = artificial_start;
    for (r, row) in rows_norm.iter().enumerate() {
        tab.rows[r][..nv].copy_from_slice(&row.coeffs);
        tab.xb[r] = row.rhs;
        match row.relation {
            Relation::Le => {
                tab.rows[r][next_slack] = 1.0;
                slack_col_of[r] = next_slack;
                tab.basis[r] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                tab.rows[r][next_slack] = -1.0;
                slack_col_of[r] = next_slack;
                next_slack += 1;
                tab.rows[r][next_artificial] = 1.0;
                artificial_col_of[r] = next_artificial;
                tab.basis[r] = next_artificial;
                next_artificial += 1;
            }
            Relation::Eq => {
                tab.rows[r][next_artificial] = 1.0;
                artificial_col_of[r] = next_artificial;
                tab.basis[r] = next_artificial;
                next_artificial += 1;
            }
        }
    }

    // Phase 1: maximize minus the sum of artificials.
    if n_artificial > 0 {
        for col in artificial_start..n_cols {
            tab.costs[col] = -1.0;
        }
        tab.recompute_obj_row();
        if tab.run(true)? == LpStatus::Unbounded {
            return Err(LpError::DegenerateNumerics);
        }
        let infeasibility: f64 = tab
            .basis
            .iter()
            .zip(&tab.xb)
            .filter(|(&b, _)| b >= artificial_start)
            .map(|(_, &v)| v.max(0.0))
            .sum();
        if infeasibility > FEASIBILITY_TOL {
            return Ok(LpSolution::non_optimal(LpStatus::Infeasible));
        }
        // Pivot lingering zero-value artificials out where possible.
        for r in 0..m {
            if tab.basis[r] < artificial_start {
                continue;
            }
            let entering = (0..artificial_start)
                .find(|&j| !tab.is_basic(j) && tab.rows[r][j].abs() > 1e-9);
            if let Some(e) = entering {
                let entering_value = if tab.at_upper[e] { tab.upper[e] } else { 0.0 };
                let pivot = tab.rows[r][e];
                let inv = 1.0 / pivot;
                for v in tab.rows[r].iter_mut() {
                    *v *= inv;
                }
                for rr in 0..m {
                    if rr == r {
                        continue;
                    }
                    let factor = tab.rows[rr][e];
                    if factor != 0.0 {
                        let (head, tail) = if rr < r {
                            let (a, b) = tab.rows.split_at_mut(r);
                            (&mut a[rr], &b[0])
                        } else {
                            let (a, b) = tab.rows.split_at_mut(rr);
                            (&mut b[0], &a[r])
                        };
                        for (x, y) in head.iter_mut().zip(tail.iter()) {
                            *x -= factor * y;
                        }
                    }
                }
                tab.basis[r] = e;
                tab.xb[r] = entering_value;
                tab.at_upper[e] = false;
            }
        }
    }

    // Phase 2: restore the real objective; artificials may not re-enter.
    for col in 0..n_cols {
        tab.costs[col] = if col < nv { lp.objective[col] } else { 0.0 };
    }
    tab.recompute_obj_row();
    if tab.run(false)? == LpStatus::Unbounded {
        return Ok(LpSolution::non_optimal(LpStatus::Unbounded));
    }

    // Extract primal values in the original variable space.
    let mut shifted = vec![0.0; nv];
    for j in 0..nv {
        if tab.at_upper[j] {
            shifted[j] = tab.upper[j];
        }
    }
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < nv {
            shifted[b] = tab.xb[r].clamp(0.0, tab.upper[b].max(0.0));
        }
    }
    let values: Vec<f64> = shifted.iter().zip(&shift).map(|(v, lo)| v + lo).collect();
    let objective_value: f64 = lp.objective.iter().zip(&values).map(|(c, x)| c * x).sum();

    // Duals read off the final reduced costs; recompute for cleanliness.
    tab.recompute_obj_row();
    let mut dual = vec![0.0; m];
    let mut dual_objective = obj_shift;
    for (r, row) in rows_norm.iter().enumerate() {
        let y_norm = match row.relation {
            Relation::Le => tab.obj_row[slack_col_of[r]],
            Relation::Ge | Relation::Eq => tab.obj_row[artificial_col_of[r]],
        };
        dual_objective += y_norm * row.rhs;
        dual[r] = if row.negated { -y_norm } else { y_norm };
    }
    let mut bound_dual = vec![0.0; nv];
    for j in 0..nv {
        if !tab.is_basic(j) && tab.at_upper[j] {
            let w = (-tab.obj_row[j]).max(0.0);
            bound_dual[j] = w;
            dual_objective += w * width[j];
        }
    }

    verify_feasible(lp, &values)?;
    Ok(LpSolution {
        status: LpStatus::Optimal,
        values,
        objective_value,
        dual,
        bound_dual,
        dual_objective,
    })
}

fn verify_feasible(lp: &LinearProgram, values: &[f64]) -> Result<(), LpError> {
    for (&v, &(lo, hi)) in values.iter().zip(&lp.bounds) {
        if v < lo - 1e-9 || v > hi + 1e-9 {
            return Err(LpError::DegenerateNumerics);
        }
    }
    let scale = 1.0
        + lp.constraints
            .iter()
            .flat_map(|c| c.coeffs.iter())
            .fold(0.0f64, |acc, v| acc.max(v.abs()));
    for c in &lp.constraints {
        let lhs: f64 = c.coeffs.iter().zip(values).map(|(a, x)| a * x).sum();
        let slack = lhs - c.rhs;
        let ok = match c.relation {
            Relation::Le => slack <= FEASIBILITY_TOL * scale,
            Relation::Ge => slack >= -FEASIBILITY_TOL * scale,
            Relation::Eq => slack.abs() <= FEASIBILITY_TOL * scale,
        };
        if !ok {
            return Err(LpError::DegenerateNumerics);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bounds(n: usize, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        vec![(lo, hi); n]
    }

    #[test]
    fn single_variable_bound() {
        let lp = LinearProgram {
            objective: vec![1.0],
            constraints: vec![Constraint::new(vec![1.0], Relation::Le, 1.0)],
            bounds: bounds(1, 0.0, 10.0),
        };
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.values[0] - 1.0).abs() < 1e-9);
        assert!((sol.objective_value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn tight_simplex_face() {
        let lp = LinearProgram {
            objective: vec![1.0, 1.0],
            constraints: vec![Constraint::new(vec![1.0, 1.0], Relation::Le, 1.0)],
            bounds: bounds(2, 0.0, 1.0),
        };
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective_value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn two_constraint_vertex() {
        // max 3x + 2y, x + y <= 4, x + 3y <= 6, x, y >= 0.
        let lp = LinearProgram {
            objective: vec![3.0, 2.0],
            constraints: vec![
                Constraint::new(vec![1.0, 1.0], Relation::Le, 4.0),
                Constraint::new(vec![1.0, 3.0], Relation::Le, 6.0),
            ],
            bounds: bounds(2, 0.0, 100.0),
        };
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.values[0] - 4.0).abs() < 1e-7);
        assert!(sol.values[1].abs() < 1e-7);
        assert!((sol.objective_value - 12.0).abs() < 1e-7);
    }

    #[test]
    fn equality_and_ge_rows() {
        // max x + y, x + y = 1, x >= 0.25, y >= 0.
        let lp = LinearProgram {
            objective: vec![1.0, 1.0],
            constraints: vec![
                Constraint::new(vec![1.0, 1.0], Relation::Eq, 1.0),
                Constraint::new(vec![1.0, 0.0], Relation::Ge, 0.25),
            ],
            bounds: bounds(2, 0.0, 1.0),
        };
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective_value - 1.0).abs() < 1e-9);
        assert!(sol.values[0] >= 0.25 - 1e-9);
    }

    #[test]
    fn infeasible_detection() {
        let lp = LinearProgram {
            objective: vec![1.0],
            constraints: vec![
                Constraint::new(vec![1.0], Relation::Ge, 5.0),
                Constraint::new(vec![1.0], Relation::Le, 1.0),
            ],
            bounds: bounds(1, 0.0, 10.0),
        };
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn weak_duality_certificate() {
        let lp = LinearProgram {
            objective: vec![3.0, 2.0, 1.0],
            constraints: vec![
                Constraint::new(vec![1.0, 1.0, 1.0], Relation::Le, 2.0),
                Constraint::new(vec![2.0, 0.5, 1.0], Relation::Le, 1.5),
            ],
            bounds: bounds(3, 0.0, 1.0),
        };
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!(sol.objective_value <= sol.dual_objective + 1e-6);
        // Dual feasibility: A^T y + w >= c for Le rows with y >= 0.
        for &y in &sol.dual {
            assert!(y >= -1e-9);
        }
        for j in 0..3 {
            let lhs: f64 = lp
                .constraints
                .iter()
                .zip(&sol.dual)
                .map(|(c, y)| c.coeffs[j] * y)
                .sum::<f64>()
                + sol.bound_dual[j];
            assert!(lhs >= lp.objective[j] - 1e-6, "column {j} dual infeasible");
        }
    }

    #[test]
    fn fixed_variable_bounds() {
        let lp = LinearProgram {
            objective: vec![5.0, 1.0],
            constraints: vec![Constraint::new(vec![1.0, 1.0], Relation::Le, 3.0)],
            bounds: vec![(2.0, 2.0), (0.0, 5.0)],
        };
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.values[0] - 2.0).abs() < 1e-9);
        assert!((sol.values[1] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn no_constraints_pushes_to_bounds() {
        let lp = LinearProgram {
            objective: vec![1.0, -1.0],
            constraints: vec![],
            bounds: vec![(0.0, 2.0), (1.0, 3.0)],
        };
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.values[0] - 2.0).abs() < 1e-9);
        assert!((sol.values[1] - 1.0).abs() < 1e-9);
        assert!((sol.objective_value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn dimension_mismatch_is_structural_error() {
        let lp = LinearProgram {
            objective: vec![1.0, 1.0],
            constraints: vec![Constraint::new(vec![1.0], Relation::Le, 1.0)],
            bounds: bounds(2, 0.0, 1.0),
        };
        assert!(matches!(
            solve(&lp),
            Err(LpError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn scaled_objective_same_vertex() {
        let lp = LinearProgram {
            objective: vec![3.0, 2.0],
            constraints: vec![
                Constraint::new(vec![1.0, 1.0], Relation::Le, 4.0),
                Constraint::new(vec![1.0, 3.0], Relation::Le, 6.0),
            ],
            bounds: bounds(2, 0.0, 100.0),
        };
        let base = solve(&lp).unwrap();
        for lambda in [2.0, 10.0] {
            let mut scaled = lp.clone();
            for c in &mut scaled.objective {
                *c *= lambda;
            }
            let sol = solve(&scaled).unwrap();
            assert_eq!(sol.values, base.values);
            assert!((sol.objective_value - lambda * base.objective_value).abs() < 1e-6);
        }
    }
}
