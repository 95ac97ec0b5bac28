//! Budget-constrained quality maximization: build the LP relaxation of the
//! routing ILP, solve it, and round the fractional allocation to an
//! assignment.
//!
//! The ILP maximizes total predicted quality subject to one budget row, an
//! optional per-model latency row each, and one-model-per-section equality
//! rows. The relaxation replaces the 0/1 requirement with `[0, 1]` bounds;
//! rounding assigns each section to its largest fractional share, breaking
//! ties toward the cheaper model, then the lower model index. Rounding can
//! overshoot the budget slightly; the overshoot is reported and an optional
//! repair pass can walk it back.

use serde::Serialize;

use crate::lp::{self, Constraint, LinearProgram, LpError, LpStatus, Relation};
use crate::model::{ModelError, RoutingInstance, RoutingPlan};

/// Fractional shares closer than this are treated as tied during rounding.
const ROUND_TIE_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum BudgetOptError {
    #[error("instance has no budget; budget optimization requires one")]
    MissingBudget,
    #[error(
        "budget {budget} is below the cheapest complete assignment {minimum_feasible}"
    )]
    InfeasibleBudget { budget: f64, minimum_feasible: f64 },
    #[error("relaxation is infeasible even above the cheapest-assignment bound; the latency SLA cannot be met")]
    LatencyInfeasible,
    #[error("relaxation reported unbounded, which a [0,1]-bounded program cannot be")]
    UnexpectedUnbounded,
    #[error("fractional allocation violates {what} by {amount:e}")]
    InvalidAllocation { what: String, amount: f64 },
    #[error("instance too large for exhaustive search: {assignments:e} assignments")]
    InstanceTooLarge { assignments: f64 },
    #[error("no assignment satisfies all constraints")]
    NoFeasibleAssignment,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// The relaxed allocation: per-section model shares plus the LP optimum,
/// which upper-bounds every integral assignment's objective.
#[derive(Debug, Clone)]
pub struct FractionalAllocation {
    /// `x[section][model]` in `[0, 1]`.
    pub x: Vec<Vec<f64>>,
    pub lp_objective: f64,
}

impl FractionalAllocation {
    /// Check row sums, the budget row, and latency rows within 1e-7.
    pub fn validate(&self, instance: &RoutingInstance) -> Result<(), BudgetOptError> {
        let costs = instance.cost_matrix()?;
        let latencies = instance.latency_matrix()?;
        let k = instance.n_models();
        let mut spend = 0.0;
        let mut model_latency = vec![0.0; k];
        for (j, row) in self.x.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > lp::FEASIBILITY_TOL {
                return Err(BudgetOptError::InvalidAllocation {
                    what: format!("row sum for section {j}"),
                    amount: (sum - 1.0).abs(),
                });
            }
            for (i, &share) in row.iter().enumerate() {
                spend += costs[j][i] * share;
                model_latency[i] += latencies[j][i] * share;
            }
        }
        if let Some(budget) = instance.budget {
            let scale = 1.0 + budget.abs();
            if spend - budget > lp::FEASIBILITY_TOL * scale {
                return Err(BudgetOptError::InvalidAllocation {
                    what: "budget row".to_string(),
                    amount: spend - budget,
                });
            }
        }
        if let Some(sla) = instance.latency_sla {
            let scale = 1.0 + sla.abs();
            for (i, &lat) in model_latency.iter().enumerate() {
                if lat - sla > lp::FEASIBILITY_TOL * scale {
                    return Err(BudgetOptError::InvalidAllocation {
                        what: format!("latency row for model {i}"),
                        amount: lat - sla,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Variables are laid out section-major: `x[j][i]` is column `j * K + i`.
pub fn build_relaxation(instance: &RoutingInstance) -> Result<LinearProgram, BudgetOptError> {
    let budget = instance.budget.ok_or(BudgetOptError::MissingBudget)?;
    let scores = instance.scores()?;
    let costs = instance.cost_matrix()?;
    let latencies = instance.latency_matrix()?;
    let n = instance.n_sections();
    let k = instance.n_models();
    let nv = n * k;

    let mut objective = vec![0.0; nv];
    for j in 0..n {
        for i in 0..k {
            objective[j * k + i] = scores[j][i];
        }
    }

    let mut constraints = Vec::with_capacity(1 + k + n);
    let mut budget_row = vec![0.0; nv];
    for j in 0..n {
        for i in 0..k {
            budget_row[j * k + i] = costs[j][i];
        }
    }
    constraints.push(Constraint::new(budget_row, Relation::Le, budget));

    if let Some(sla) = instance.latency_sla {
        for i in 0..k {
            let mut row = vec![0.0; nv];
            for j in 0..n {
                row[j * k + i] = latencies[j][i];
            }
            constraints.push(Constraint::new(row, Relation::Le, sla));
        }
    }

    for j in 0..n {
        let mut row = vec![0.0; nv];
        for i in 0..k {
            row[j * k + i] = 1.0;
        }
        constraints.push(Constraint::new(row, Relation::Eq, 1.0));
    }

    Ok(LinearProgram {
        objective,
        constraints,
        bounds: vec![(0.0, 1.0); nv],
    })
}

/// Solve the relaxation and repackage the variable vector as an allocation.
pub fn relax(instance: &RoutingInstance) -> Result<FractionalAllocation, BudgetOptError> {
    let n = instance.n_sections();
    let k = instance.n_models();
    if n == 0 {
        return Ok(FractionalAllocation {
            x: Vec::new(),
            lp_objective: 0.0,
        });
    }
    let lp = build_relaxation(instance)?;
    let sol = lp::solve(&lp)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(BudgetOptError::LatencyInfeasible),
        LpStatus::Unbounded => return Err(BudgetOptError::UnexpectedUnbounded),
    }
    let x = (0..n)
        .map(|j| {
            (0..k)
                .map(|i| sol.values[j * k + i].clamp(0.0, 1.0))
                .collect()
        })
        .collect();
    Ok(FractionalAllocation {
        x,
        lp_objective: sol.objective_value,
    })
}

/// Round each section to its maximal fractional model. Ties go to the
/// smaller estimated cost, then the smaller model index.
pub fn round(
    frac: &FractionalAllocation,
    instance: &RoutingInstance,
) -> Result<RoutingPlan, BudgetOptError> {
    let costs = instance.cost_matrix()?;
    let k = instance.n_models();
    let mut choice = Vec::with_capacity(frac.x.len());
    for (j, row) in frac.x.iter().enumerate() {
        let mut best = 0usize;
        for i in 1..k {
            if row[i] > row[best] + ROUND_TIE_TOL {
                best = i;
            } else if (row[i] - row[best]).abs() <= ROUND_TIE_TOL && costs[j][i] < costs[j][best]
            {
                best = i;
            }
        }
        choice.push(best);
    }
    Ok(RoutingPlan::from_assignment(instance, &choice)?)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BudgetOptOptions {
    /// When rounding overshoots the budget, greedily demote sections
    /// (smallest score loss per unit of cost saved first) until it fits.
    /// Off by default; the plain rounding is the reference behavior.
    pub repair_budget: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BudgetOptSolution {
    #[serde(flatten)]
    pub plan: RoutingPlan,
    /// Certified upper bound on any integral assignment's objective.
    pub lp_objective: f64,
    /// True when the rounded plan exceeds the latency SLA on some model.
    pub latency_sla_exceeded: bool,
}

pub fn solve_budget_opt(instance: &RoutingInstance) -> Result<BudgetOptSolution, BudgetOptError> {
    solve_budget_opt_with(instance, BudgetOptOptions::default())
}

pub fn solve_budget_opt_with(
    instance: &RoutingInstance,
    options: BudgetOptOptions,
) -> Result<BudgetOptSolution, BudgetOptError> {
    instance.validate()?;
    let budget = instance.budget.ok_or(BudgetOptError::MissingBudget)?;
    if instance.n_sections() == 0 {
        return Ok(BudgetOptSolution {
            plan: RoutingPlan::empty(),
            lp_objective: 0.0,
            latency_sla_exceeded: false,
        });
    }
    let minimum = instance.minimum_feasible_budget()?;
    if budget < minimum - crate::model::COST_TOL {
        return Err(BudgetOptError::InfeasibleBudget {
            budget,
            minimum_feasible: minimum,
        });
    }
    let frac = relax(instance)?;
    let mut plan = round(&frac, instance)?;
    if options.repair_budget && plan.total_cost > budget + crate::model::COST_TOL {
        plan = repair(plan, instance)?;
    }
    let latency_sla_exceeded = match instance.latency_sla {
        Some(sla) => plan
            .per_model_latency
            .values()
            .any(|&l| l > sla + lp::FEASIBILITY_TOL * (1.0 + sla)),
        None => false,
    };
    Ok(BudgetOptSolution {
        plan,
        lp_objective: frac.lp_objective,
        latency_sla_exceeded,
    })
}

/// Swap sections to cheaper models, least score lost per unit saved first,
/// until the plan fits the budget or no swap saves anything.
fn repair(plan: RoutingPlan, instance: &RoutingInstance) -> Result<RoutingPlan, BudgetOptError> {
    let budget = instance.budget.ok_or(BudgetOptError::MissingBudget)?;
    let scores = instance.scores()?;
    let costs = instance.cost_matrix()?;
    let index_of: std::collections::BTreeMap<&str, usize> = instance
        .models
        .iter()
        .enumerate()
        .map(|(i, m)| (m.id.as_str(), i))
        .collect();
    let mut choice: Vec<usize> = instance
        .sections
        .iter()
        .map(|s| index_of[plan.assignment[&s.id].as_str()])
        .collect();
    let mut total = plan.total_cost;
    while total > budget + crate::model::COST_TOL {
        let mut best: Option<(f64, usize, usize)> = None; // (loss per saved, j, i)
        for (j, &cur) in choice.iter().enumerate() {
            for i in 0..instance.n_models() {
                let saved = costs[j][cur] - costs[j][i];
                if saved <= crate::model::COST_TOL {
                    continue;
                }
                let ratio = (scores[j][cur] - scores[j][i]) / saved;
                if best.is_none_or(|(r, _, _)| ratio < r) {
                    best = Some((ratio, j, i));
                }
            }
        }
        let Some((_, j, i)) = best else { break };
        total -= costs[j][choice[j]] - costs[j][i];
        choice[j] = i;
    }
    Ok(RoutingPlan::from_assignment(instance, &choice)?)
}

/// Exhaustive baseline: enumerate all `K^n` assignments, keep the feasible
/// ones, return the objective-maximal (ties toward lower cost, then the
/// lexicographically first assignment).
pub fn budget_opt_oracle(instance: &RoutingInstance) -> Result<RoutingPlan, BudgetOptError> {
    instance.validate()?;
    let budget = instance.budget.ok_or(BudgetOptError::MissingBudget)?;
    let scores = instance.scores()?;
    let costs = instance.cost_matrix()?;
    let latencies = instance.latency_matrix()?;
    let n = instance.n_sections();
    let k = instance.n_models();
    if n == 0 {
        return Ok(RoutingPlan::empty());
    }
    let space = (k as f64).powi(n as i32);
    if space > 1e7 {
        return Err(BudgetOptError::InstanceTooLarge { assignments: space });
    }

    let mut choice = vec![0usize; n];
    let mut best: Option<(f64, f64, Vec<usize>)> = None; // (objective, cost, assignment)
    loop {
        let mut cost = 0.0;
        let mut objective = 0.0;
        let mut model_latency = vec![0.0; k];
        for (j, &i) in choice.iter().enumerate() {
            cost += costs[j][i];
            objective += scores[j][i];
            model_latency[i] += latencies[j][i];
        }
        let mut feasible = cost <= budget + crate::model::COST_TOL;
        if feasible {
            if let Some(sla) = instance.latency_sla {
                feasible = model_latency
                    .iter()
                    .all(|&l| l <= sla + lp::FEASIBILITY_TOL * (1.0 + sla));
            }
        }
        if feasible {
            let better = match &best {
                None => true,
                Some((obj, c, _)) => {
                    objective > *obj || (objective == *obj && cost < *c)
                }
            };
            if better {
                best = Some((objective, cost, choice.clone()));
            }
        }
        // Lexicographic increment.
        let mut pos = n;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < k {
                break;
            }
            choice[pos] = 0;
        }
        if pos == 0 && choice[0] == 0 {
            break;
        }
    }
    let (_, _, assignment) = best.ok_or(BudgetOptError::NoFeasibleAssignment)?;
    Ok(RoutingPlan::from_assignment(instance, &assignment)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ModelProfile, Section};

    fn mk_instance(
        costs_per_token: &[f64],
        tokens: &[u64],
        scores: Vec<Vec<f64>>,
        budget: Option<f64>,
        latency_sla: Option<f64>,
    ) -> RoutingInstance {
        let models: Vec<ModelProfile> = costs_per_token
            .iter()
            .enumerate()
            .map(|(i, &c)| ModelProfile {
                id: format!("m{i}"),
                input_cost_per_token: c,
                output_cost_per_token: c,
                fixed_cost: 0.0,
                latency_per_token: 0.001,
                avg_tokens_per_sentence: 10.0,
                tokenizer_id: None,
            })
            .collect();
        let sections: Vec<Section> = tokens
            .iter()
            .enumerate()
            .map(|(j, &t)| Section {
                id: format!("s{j}"),
                text: None,
                input_tokens_per_model: models.iter().map(|m| (m.id.clone(), t)).collect(),
                summary_sentences: 1,
            })
            .collect();
        RoutingInstance {
            models,
            sections,
            scores: Some(scores),
            budget,
            latency_sla,
            quality_floor: None,
        }
    }

    #[test]
    fn relaxation_shape_counts() {
        let instance = mk_instance(
            &[0.001, 0.002],
            &[100, 100],
            vec![vec![0.5, 0.6], vec![0.7, 0.8]],
            Some(10.0),
            Some(5.0),
        );
        let lp = build_relaxation(&instance).unwrap();
        assert_eq!(lp.objective.len(), 4);
        assert_eq!(lp.constraints.len(), 1 + 2 + 2);

        let instance = mk_instance(
            &[0.001, 0.002],
            &[100, 100, 100],
            vec![vec![0.5, 0.6], vec![0.7, 0.8], vec![0.1, 0.2]],
            Some(10.0),
            None,
        );
        let lp = build_relaxation(&instance).unwrap();
        assert_eq!(lp.objective.len(), 6);
        assert_eq!(lp.constraints.len(), 4);
    }

    #[test]
    fn single_pair_is_forced() {
        let instance = mk_instance(&[0.001], &[100], vec![vec![0.9]], Some(10.0), None);
        let sol = solve_budget_opt(&instance).unwrap();
        assert_eq!(sol.plan.assignment["s0"], "m0");
        assert!((sol.plan.objective - 0.9).abs() < 1e-9);
    }

    #[test]
    fn rounding_strict_argmax_and_cost_tie() {
        let instance = mk_instance(
            &[0.002, 0.001],
            &[100],
            vec![vec![0.5, 0.5]],
            Some(10.0),
            None,
        );
        let frac = FractionalAllocation {
            x: vec![vec![0.7, 0.3]],
            lp_objective: 0.5,
        };
        let plan = round(&frac, &instance).unwrap();
        assert_eq!(plan.assignment["s0"], "m0");

        // Exact tie: the cheaper model (m1) wins.
        let frac = FractionalAllocation {
            x: vec![vec![0.5, 0.5]],
            lp_objective: 0.5,
        };
        let plan = round(&frac, &instance).unwrap();
        assert_eq!(plan.assignment["s0"], "m1");
    }

    #[test]
    fn slack_budget_routes_to_score_argmax() {
        let instance = mk_instance(
            &[0.001, 0.01],
            &[100, 200, 50],
            vec![vec![0.2, 0.9], vec![0.8, 0.3], vec![0.5, 0.6]],
            Some(1e6),
            None,
        );
        let sol = solve_budget_opt(&instance).unwrap();
        assert_eq!(sol.plan.assignment["s0"], "m1");
        assert_eq!(sol.plan.assignment["s1"], "m0");
        assert_eq!(sol.plan.assignment["s2"], "m1");
        assert_eq!(sol.plan.budget_violation_fraction, 0.0);
    }

    #[test]
    fn budget_below_cheapest_errors_with_minimum() {
        let instance = mk_instance(
            &[0.001, 0.002],
            &[1000, 1000],
            vec![vec![0.5, 0.6], vec![0.7, 0.8]],
            Some(0.0001),
            None,
        );
        match solve_budget_opt(&instance) {
            Err(BudgetOptError::InfeasibleBudget {
                minimum_feasible, ..
            }) => {
                // Cheapest: both sections on m0 at 1010 tokens * 0.001.
                assert!((minimum_feasible - 2.02).abs() < 1e-9);
            }
            other => panic!("expected infeasible budget, got {other:?}"),
        }
    }

    #[test]
    fn empty_instance_gives_empty_plan() {
        let instance = mk_instance(&[0.001], &[], vec![], Some(1.0), None);
        let sol = solve_budget_opt(&instance).unwrap();
        assert!(sol.plan.assignment.is_empty());
        assert_eq!(sol.lp_objective, 0.0);
    }

    #[test]
    fn oracle_avoids_infeasible_cell() {
        // m1 is pricey enough that s0 on m1 busts the budget.
        let instance = mk_instance(
            &[0.001, 0.1],
            &[100, 100],
            vec![vec![0.1, 0.9], vec![0.5, 0.6]],
            Some(0.5),
            None,
        );
        let plan = budget_opt_oracle(&instance).unwrap();
        // 11 + 0.11: m1 for one section costs 11.0 > 0.5; both must use m0.
        assert_eq!(plan.assignment["s0"], "m0");
        assert_eq!(plan.assignment["s1"], "m0");
    }

    #[test]
    fn oracle_bound_sandwich_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let n = rng.random_range(2..6);
            let k = rng.random_range(2..4);
            let rates: Vec<f64> = (0..k).map(|_| rng.random_range(0.001..0.01)).collect();
            let tokens: Vec<u64> = (0..n).map(|_| rng.random_range(50..300)).collect();
            let scores: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..k).map(|_| rng.random_range(0.0..1.0)).collect())
                .collect();
            let mut instance = mk_instance(&rates, &tokens, scores, None, None);
            let min = instance.minimum_feasible_budget().unwrap();
            let max: f64 = instance
                .cost_matrix()
                .unwrap()
                .iter()
                .map(|row| row.iter().cloned().fold(0.0, f64::max))
                .sum();
            instance.budget = Some(min + (max - min) * rng.random_range(0.3..0.9));
            let sol = solve_budget_opt(&instance).unwrap();
            let oracle = budget_opt_oracle(&instance).unwrap();
            assert!(
                oracle.objective <= sol.lp_objective + 1e-6,
                "oracle {} above LP bound {}",
                oracle.objective,
                sol.lp_objective
            );
        }
    }

    #[test]
    fn repair_pass_restores_budget() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut repaired_any = false;
        for _ in 0..60 {
            let n = rng.random_range(3..7);
            let rates = vec![0.001, 0.004, 0.02];
            let tokens: Vec<u64> = (0..n).map(|_| rng.random_range(200..1500)).collect();
            let scores: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..3).map(|_| rng.random_range(0.3..1.0)).collect())
                .collect();
            let mut instance = mk_instance(&rates, &tokens, scores, None, None);
            let min = instance.minimum_feasible_budget().unwrap();
            instance.budget = Some(min * 1.8);
            let strict = solve_budget_opt(&instance).unwrap();
            let repaired = solve_budget_opt_with(
                &instance,
                BudgetOptOptions {
                    repair_budget: true,
                },
            )
            .unwrap();
            assert!(repaired.plan.budget_violation_fraction <= 1e-12);
            if strict.plan.budget_violation_fraction > 0.0 {
                repaired_any = true;
            }
        }
        let _ = repaired_any;
    }
}
