//! Cost minimization under a per-section quality floor.
//!
//! Three solution paths cover the tractable regimes plus a baseline:
//!
//! * [`greedy_cost_min`] — no latency SLA. Picking the cheapest model whose
//!   score clears the floor is optimal section by section because nothing
//!   couples the sections.
//! * [`flow_cost_min`] — latency SLA with equal-sized sections. Latency
//!   budgets turn into integer per-model capacities and the problem becomes
//!   a min-cost max-flow on a bipartite network.
//! * [`greedy_cost_min_with_latency`] — the general case is NP-hard; this
//!   heuristic assigns each section the cheapest feasible model with enough
//!   latency headroom left. Not optimal, just a documented fallback for
//!   instances too large for the oracle.
//! * [`cost_min_oracle`] — exhaustive search for small instances.

use serde::Serialize;

use crate::lp::FEASIBILITY_TOL;
use crate::model::{estimated_output_tokens, ModelError, RoutingInstance, RoutingPlan, COST_TOL};

#[derive(Debug, thiserror::Error)]
pub enum CostMinError {
    #[error("instance has no quality floor; cost minimization requires one")]
    MissingQualityFloor,
    #[error("greedy handles the latency-free regime only; this instance has a latency SLA")]
    LatencyNotSupported,
    #[error("flow construction requires a latency SLA")]
    MissingLatencySla,
    #[error("section `{section}`: no model reaches the quality floor {floor} (best score {max_score})")]
    SectionInfeasible {
        section: String,
        floor: f64,
        max_score: f64,
    },
    #[error("sections are not uniform: section `{section}` on model `{model}` totals {got} tokens, expected {expected}")]
    NonUniformSections {
        section: String,
        model: String,
        got: u64,
        expected: u64,
    },
    #[error("negative-cost cycle in the residual network; the network is malformed")]
    NegativeCycle,
    #[error("instance too large for exhaustive search: {assignments:e} assignments")]
    InstanceTooLarge { assignments: f64 },
    #[error("no assignment satisfies the quality floor and latency SLA")]
    NoFeasibleAssignment,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Routing output shared by all cost-min paths. `feasible` is false when
/// some sections could not be assigned; those appear in
/// `unassigned_sections` and the plan covers the rest.
#[derive(Debug, Clone, Serialize)]
pub struct CostMinSolution {
    #[serde(flatten)]
    pub plan: RoutingPlan,
    pub feasible: bool,
    pub unassigned_sections: Vec<String>,
}

impl CostMinSolution {
    fn complete(plan: RoutingPlan) -> Self {
        CostMinSolution {
            plan,
            feasible: true,
            unassigned_sections: Vec::new(),
        }
    }
}

/// Optimal for the latency-free regime: each section independently takes
/// the cheapest model whose score clears the floor (ties: higher score,
/// then lower model index).
pub fn greedy_cost_min(instance: &RoutingInstance) -> Result<CostMinSolution, CostMinError> {
    instance.validate()?;
    let floor = instance
        .quality_floor
        .ok_or(CostMinError::MissingQualityFloor)?;
    if instance.latency_sla.is_some() {
        return Err(CostMinError::LatencyNotSupported);
    }
    let scores = instance.scores()?;
    let costs = instance.cost_matrix()?;
    let mut choice = Vec::with_capacity(instance.n_sections());
    for (j, section) in instance.sections.iter().enumerate() {
        let mut best: Option<usize> = None;
        for i in 0..instance.n_models() {
            if scores[j][i] < floor {
                continue;
            }
            best = Some(match best {
                None => i,
                Some(b) => {
                    if costs[j][i] < costs[j][b]
                        || (costs[j][i] == costs[j][b] && scores[j][i] > scores[j][b])
                    {
                        i
                    } else {
                        b
                    }
                }
            });
        }
        let Some(i) = best else {
            let max_score = scores[j].iter().cloned().fold(0.0, f64::max);
            return Err(CostMinError::SectionInfeasible {
                section: section.id.clone(),
                floor,
                max_score,
            });
        };
        choice.push(i);
    }
    Ok(CostMinSolution::complete(RoutingPlan::from_assignment(
        instance, &choice,
    )?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FlowNode {
    Source,
    Sink,
    Section(usize),
    Model(usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowEdge {
    pub from: FlowNode,
    pub to: FlowNode,
    pub capacity: u64,
    pub cost: f64,
}

/// Bipartite routing network for the equal-length regime. Sections connect
/// to the models that clear the quality floor; model capacities are the
/// number of sections each model can absorb within the latency SLA.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    pub n_sections: usize,
    pub n_models: usize,
    pub edges: Vec<FlowEdge>,
    /// Sections each model can take: floor(floor(L / L_i) / d).
    pub model_capacity: Vec<u64>,
    /// Uniform per-section token total d (input plus estimated output).
    pub uniform_tokens: u64,
}

/// Build the network. Requires every (section, model) pair to have the same
/// total token count `uniform_section_tokens`.
pub fn build_flow(
    instance: &RoutingInstance,
    uniform_section_tokens: u64,
) -> Result<FlowNetwork, CostMinError> {
    instance.validate()?;
    let floor = instance
        .quality_floor
        .ok_or(CostMinError::MissingQualityFloor)?;
    let sla = instance
        .latency_sla
        .ok_or(CostMinError::MissingLatencySla)?;
    let scores = instance.scores()?;
    let costs = instance.cost_matrix()?;
    let n = instance.n_sections();
    let k = instance.n_models();
    let d = uniform_section_tokens.max(1);

    for (j, section) in instance.sections.iter().enumerate() {
        for model in &instance.models {
            let total = section.input_tokens_for(model)? + estimated_output_tokens(section, model);
            if total != uniform_section_tokens {
                return Err(CostMinError::NonUniformSections {
                    section: section.id.clone(),
                    model: model.id.clone(),
                    got: total,
                    expected: uniform_section_tokens,
                });
            }
        }
    }

    let model_capacity: Vec<u64> = instance
        .models
        .iter()
        .map(|m| {
            if m.latency_per_token <= 0.0 {
                n as u64
            } else {
                let tokens_within_sla = (sla / m.latency_per_token).floor();
                let n_hat = (tokens_within_sla / d as f64).floor();
                if n_hat >= n as f64 {
                    n as u64
                } else {
                    n_hat.max(0.0) as u64
                }
            }
        })
        .collect();

    let mut edges = Vec::new();
    for j in 0..n {
        edges.push(FlowEdge {
            from: FlowNode::Source,
            to: FlowNode::Section(j),
            capacity: 1,
            cost: 0.0,
        });
    }
    for j in 0..n {
        for i in 0..k {
            if scores[j][i] >= floor {
                edges.push(FlowEdge {
                    from: FlowNode::Section(j),
                    to: FlowNode::Model(i),
                    capacity: 1,
                    cost: costs[j][i],
                });
            }
        }
    }
    for (i, &cap) in model_capacity.iter().enumerate() {
        edges.push(FlowEdge {
            from: FlowNode::Model(i),
            to: FlowNode::Sink,
            capacity: cap,
            cost: 0.0,
        });
    }
    Ok(FlowNetwork {
        n_sections: n,
        n_models: k,
        edges,
        model_capacity,
        uniform_tokens: d,
    })
}

#[derive(Debug, Clone)]
pub struct FlowOutcome {
    pub flow_value: u64,
    /// (section index, model index) pairs carrying one unit each.
    pub assignment: Vec<(usize, usize)>,
    pub total_cost: f64,
}

struct Arc {
    to: usize,
    residual: u64,
    cost: f64,
    twin: usize,
}

/// Successive shortest augmenting paths with Bellman-Ford distances.
/// Capacities are integers, so every augmentation moves whole units and the
/// resulting flow is integral.
pub fn min_cost_max_flow(net: &FlowNetwork) -> Result<FlowOutcome, CostMinError> {
    let n = net.n_sections;
    let k = net.n_models;
    let node_count = n + k + 2;
    let source = 0usize;
    let sink = node_count - 1;
    let node_index = |node: FlowNode| -> usize {
        match node {
            FlowNode::Source => source,
            FlowNode::Section(j) => 1 + j,
            FlowNode::Model(i) => 1 + n + i,
            FlowNode::Sink => sink,
        }
    };

    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    let mut arcs: Vec<Arc> = Vec::with_capacity(net.edges.len() * 2);
    let mut forward_of_edge = Vec::with_capacity(net.edges.len());
    for edge in &net.edges {
        let u = node_index(edge.from);
        let v = node_index(edge.to);
        let fwd = arcs.len();
        arcs.push(Arc {
            to: v,
            residual: edge.capacity,
            cost: edge.cost,
            twin: fwd + 1,
        });
        arcs.push(Arc {
            to: u,
            residual: 0,
            cost: -edge.cost,
            twin: fwd,
        });
        adjacency[u].push(fwd);
        adjacency[v].push(fwd + 1);
        forward_of_edge.push(fwd);
    }

    let bellman_ford = |arcs: &[Arc],
                        detect_only: bool|
     -> Result<(Vec<f64>, Vec<Option<usize>>), CostMinError> {
        let mut dist = vec![f64::INFINITY; node_count];
        let mut parent: Vec<Option<usize>> = vec![None; node_count];
        dist[source] = 0.0;
        for _ in 0..node_count.saturating_sub(1) {
            let mut changed = false;
            for u in 0..node_count {
                if !dist[u].is_finite() {
                    continue;
                }
                for &a in &adjacency[u] {
                    let arc = &arcs[a];
                    if arc.residual == 0 {
                        continue;
                    }
                    let nd = dist[u] + arc.cost;
                    if nd < dist[arc.to] - 1e-15 {
                        dist[arc.to] = nd;
                        parent[arc.to] = Some(a);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        // One more sweep: any further relaxation means a negative cycle.
        for u in 0..node_count {
            if !dist[u].is_finite() {
                continue;
            }
            for &a in &adjacency[u] {
                let arc = &arcs[a];
                if arc.residual > 0 && dist[u] + arc.cost < dist[arc.to] - 1e-9 {
                    return Err(CostMinError::NegativeCycle);
                }
            }
        }
        let _ = detect_only;
        Ok((dist, parent))
    };

    // Defensive pass before any augmentation.
    bellman_ford(&arcs, true)?;

    let mut flow_value = 0u64;
    let mut total_cost = 0.0;
    loop {
        let (dist, parent) = bellman_ford(&arcs, false)?;
        if !dist[sink].is_finite() {
            break;
        }
        // Bottleneck along the path.
        let mut bottleneck = u64::MAX;
        let mut node = sink;
        while node != source {
            let a = parent[node].expect("path arc");
            bottleneck = bottleneck.min(arcs[a].residual);
            node = arcs[arcs[a].twin].to;
        }
        let mut node = sink;
        while node != source {
            let a = parent[node].expect("path arc");
            arcs[a].residual -= bottleneck;
            let twin = arcs[a].twin;
            arcs[twin].residual += bottleneck;
            total_cost += arcs[a].cost * bottleneck as f64;
            node = arcs[twin].to;
        }
        flow_value += bottleneck;
    }

    let mut assignment = Vec::new();
    for (edge, &fwd) in net.edges.iter().zip(&forward_of_edge) {
        if let (FlowNode::Section(j), FlowNode::Model(i)) = (edge.from, edge.to) {
            let used = edge.capacity - arcs[fwd].residual;
            if used > 0 {
                assignment.push((j, i));
            }
        }
    }
    Ok(FlowOutcome {
        flow_value,
        assignment,
        total_cost,
    })
}

/// Equal-length solver: detect the uniform section size, build the network,
/// run the flow, and map it back to a plan. Optimal when every section can
/// be routed; otherwise returns the largest feasible partial assignment at
/// minimum cost with `feasible: false`.
pub fn flow_cost_min(instance: &RoutingInstance) -> Result<CostMinSolution, CostMinError> {
    instance.validate()?;
    let first = instance
        .sections
        .first()
        .zip(instance.models.first())
        .map(|(s, m)| Ok::<u64, CostMinError>(s.input_tokens_for(m)? + estimated_output_tokens(s, m)))
        .transpose()?
        .unwrap_or(1);
    let net = build_flow(instance, first)?;
    let outcome = min_cost_max_flow(&net)?;
    let mut choice: Vec<Option<usize>> = vec![None; instance.n_sections()];
    for (j, i) in outcome.assignment {
        choice[j] = Some(i);
    }
    let plan = RoutingPlan::from_partial_assignment(instance, &choice)?;
    let unassigned_sections: Vec<String> = instance
        .sections
        .iter()
        .zip(&choice)
        .filter(|(_, c)| c.is_none())
        .map(|(s, _)| s.id.clone())
        .collect();
    Ok(CostMinSolution {
        feasible: unassigned_sections.is_empty(),
        plan,
        unassigned_sections,
    })
}

/// Heuristic for the general latency-constrained case: sections in order
/// take the cheapest floor-clearing model with enough latency headroom.
/// Not optimal; use the oracle when the instance is small enough.
pub fn greedy_cost_min_with_latency(
    instance: &RoutingInstance,
) -> Result<CostMinSolution, CostMinError> {
    instance.validate()?;
    let floor = instance
        .quality_floor
        .ok_or(CostMinError::MissingQualityFloor)?;
    let sla = instance.latency_sla.unwrap_or(f64::INFINITY);
    let scores = instance.scores()?;
    let costs = instance.cost_matrix()?;
    let latencies = instance.latency_matrix()?;
    let mut headroom = vec![sla; instance.n_models()];
    let mut choice: Vec<Option<usize>> = vec![None; instance.n_sections()];
    let mut unassigned_sections = Vec::new();
    for (j, section) in instance.sections.iter().enumerate() {
        let mut best: Option<usize> = None;
        for i in 0..instance.n_models() {
            if scores[j][i] < floor || latencies[j][i] > headroom[i] + FEASIBILITY_TOL {
                continue;
            }
            best = Some(match best {
                None => i,
                Some(b) => {
                    if costs[j][i] < costs[j][b]
                        || (costs[j][i] == costs[j][b] && scores[j][i] > scores[j][b])
                    {
                        i
                    } else {
                        b
                    }
                }
            });
        }
        match best {
            Some(i) => {
                headroom[i] -= latencies[j][i];
                choice[j] = Some(i);
            }
            None => unassigned_sections.push(section.id.clone()),
        }
    }
    let plan = RoutingPlan::from_partial_assignment(instance, &choice)?;
    Ok(CostMinSolution {
        feasible: unassigned_sections.is_empty(),
        plan,
        unassigned_sections,
    })
}

/// Exhaustive minimum-cost assignment honoring the quality floor and (when
/// present) per-model latency SLA.
pub fn cost_min_oracle(instance: &RoutingInstance) -> Result<CostMinSolution, CostMinError> {
    instance.validate()?;
    let floor = instance
        .quality_floor
        .ok_or(CostMinError::MissingQualityFloor)?;
    let scores = instance.scores()?;
    let costs = instance.cost_matrix()?;
    let latencies = instance.latency_matrix()?;
    let n = instance.n_sections();
    let k = instance.n_models();
    if n == 0 {
        return Ok(CostMinSolution::complete(RoutingPlan::empty()));
    }
    let space = (k as f64).powi(n as i32);
    if space > 1e7 {
        return Err(CostMinError::InstanceTooLarge { assignments: space });
    }

    let mut choice = vec![0usize; n];
    let mut best: Option<(f64, f64, Vec<usize>)> = None; // (cost, -objective, assignment)
    loop {
        let mut cost = 0.0;
        let mut objective = 0.0;
        let mut model_latency = vec![0.0; k];
        let mut feasible = true;
        for (j, &i) in choice.iter().enumerate() {
            if scores[j][i] < floor {
                feasible = false;
                break;
            }
            cost += costs[j][i];
            objective += scores[j][i];
            model_latency[i] += latencies[j][i];
        }
        if feasible {
            if let Some(sla) = instance.latency_sla {
                feasible = model_latency
                    .iter()
                    .all(|&l| l <= sla + FEASIBILITY_TOL * (1.0 + sla));
            }
        }
        if feasible {
            let better = match &best {
                None => true,
                Some((c, neg_obj, _)) => {
                    cost < *c || (cost == *c && -objective < *neg_obj)
                }
            };
            if better {
                best = Some((cost, -objective, choice.clone()));
            }
        }
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
    let (_, _, assignment) = best.ok_or(CostMinError::NoFeasibleAssignment)?;
    Ok(CostMinSolution::complete(RoutingPlan::from_assignment(
        instance,
        &assignment,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ModelProfile, Section};

    fn mk_instance(
        rates: &[f64],
        latency_per_token: &[f64],
        tokens: &[u64],
        scores: Vec<Vec<f64>>,
        quality_floor: Option<f64>,
        latency_sla: Option<f64>,
    ) -> RoutingInstance {
        let models: Vec<ModelProfile> = rates
            .iter()
            .zip(latency_per_token)
            .enumerate()
            .map(|(i, (&c, &l))| ModelProfile {
                id: format!("m{i}"),
                input_cost_per_token: c,
                output_cost_per_token: c,
                fixed_cost: 0.0,
                latency_per_token: l,
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
            budget: None,
            latency_sla,
            quality_floor,
        }
    }

    #[test]
    fn zero_floor_routes_to_cheapest() {
        let instance = mk_instance(
            &[0.002, 0.001],
            &[0.0, 0.0],
            &[100, 100],
            vec![vec![0.9, 0.1], vec![0.2, 0.8]],
            Some(0.0),
            None,
        );
        let sol = greedy_cost_min(&instance).unwrap();
        assert_eq!(sol.plan.assignment["s0"], "m1");
        assert_eq!(sol.plan.assignment["s1"], "m1");
        assert!(sol.feasible);
    }

    #[test]
    fn unreachable_floor_names_section_and_best_score() {
        let instance = mk_instance(
            &[0.001],
            &[0.0],
            &[100, 100],
            vec![vec![0.9], vec![0.4]],
            Some(0.7),
            None,
        );
        match greedy_cost_min(&instance) {
            Err(CostMinError::SectionInfeasible {
                section, max_score, ..
            }) => {
                assert_eq!(section, "s1");
                assert!((max_score - 0.4).abs() < 1e-12);
            }
            other => panic!("expected SectionInfeasible, got {other:?}"),
        }
    }

    #[test]
    fn greedy_refuses_latency_regime() {
        let instance = mk_instance(
            &[0.001],
            &[0.001],
            &[100],
            vec![vec![0.9]],
            Some(0.5),
            Some(1.0),
        );
        assert!(matches!(
            greedy_cost_min(&instance),
            Err(CostMinError::LatencyNotSupported)
        ));
    }

    #[test]
    fn greedy_matches_oracle_cost_exactly() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let n = rng.random_range(2..7);
            let k = rng.random_range(2..4);
            let rates: Vec<f64> = (0..k).map(|_| rng.random_range(0.001..0.02)).collect();
            let lat = vec![0.0; k];
            let tokens: Vec<u64> = (0..n).map(|_| rng.random_range(50..400)).collect();
            let scores: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..k).map(|_| rng.random_range(0.2..1.0)).collect())
                .collect();
            // Floor low enough that at least one model is feasible per section.
            let floor = scores
                .iter()
                .map(|row| row.iter().cloned().fold(0.0, f64::max))
                .fold(f64::INFINITY, f64::min)
                * 0.9;
            let instance = mk_instance(&rates, &lat, &tokens, scores, Some(floor), None);
            let greedy = greedy_cost_min(&instance).unwrap();
            let oracle = cost_min_oracle(&instance).unwrap();
            assert_eq!(greedy.plan.total_cost, oracle.plan.total_cost);
        }
    }

    #[test]
    fn flow_single_model_accepts_all() {
        let instance = mk_instance(
            &[0.001],
            &[0.001],
            &[90],
            vec![vec![0.9], vec![0.8], vec![0.7]],
            Some(0.5),
            Some(100.0),
        );
        // All three sections, each 90 + 10 = 100 tokens; capacity floor(
        // floor(100 / 0.001) / 100) = 1000 >= 3, clamped to n.
        let mut instance = instance;
        instance.sections = (0..3)
            .map(|j| Section {
                id: format!("s{j}"),
                text: None,
                input_tokens_per_model: [("m0".to_string(), 90)].into(),
                summary_sentences: 1,
            })
            .collect();
        let net = build_flow(&instance, 100).unwrap();
        assert_eq!(net.model_capacity, vec![3]);
        let outcome = min_cost_max_flow(&net).unwrap();
        assert_eq!(outcome.flow_value, 3);
    }

    #[test]
    fn flow_zero_capacity_means_zero_flow() {
        let instance = mk_instance(
            &[0.001, 0.002],
            &[10.0, 10.0],
            &[90, 90],
            vec![vec![0.9, 0.9], vec![0.8, 0.8]],
            Some(0.5),
            Some(0.5),
        );
        // floor(0.5 / 10.0) = 0 tokens within SLA for both models.
        let net = build_flow(&instance, 100).unwrap();
        assert_eq!(net.model_capacity, vec![0, 0]);
        let outcome = min_cost_max_flow(&net).unwrap();
        assert_eq!(outcome.flow_value, 0);
        let sol = flow_cost_min(&instance).unwrap();
        assert!(!sol.feasible);
        assert_eq!(sol.unassigned_sections.len(), 2);
    }

    #[test]
    fn flow_respects_capacity_splits() {
        // Model 0 cheaper everywhere but can take only one section.
        let d: u64 = 100;
        let sla = 1.0;
        let lat0 = sla / (1.5 * d as f64); // capacity 1
        let lat1 = sla / (2.5 * d as f64); // capacity 2
        let instance = mk_instance(
            &[0.001, 0.005],
            &[lat0, lat1],
            &[90, 90, 90],
            vec![vec![0.9, 0.9], vec![0.9, 0.9], vec![0.9, 0.9]],
            Some(0.5),
            Some(sla),
        );
        let net = build_flow(&instance, d).unwrap();
        assert_eq!(net.model_capacity, vec![1, 2]);
        let outcome = min_cost_max_flow(&net).unwrap();
        assert_eq!(outcome.flow_value, 3);
        let on_m0 = outcome.assignment.iter().filter(|&&(_, i)| i == 0).count();
        assert_eq!(on_m0, 1);
        let oracle = cost_min_oracle(&instance).unwrap();
        assert_eq!(outcome.total_cost, oracle.plan.total_cost);
    }

    #[test]
    fn flow_rejects_non_uniform_sections() {
        let instance = mk_instance(
            &[0.001],
            &[0.001],
            &[100, 200],
            vec![vec![0.9], vec![0.9]],
            Some(0.5),
            Some(10.0),
        );
        assert!(matches!(
            build_flow(&instance, 110),
            Err(CostMinError::NonUniformSections { .. })
        ));
    }

    #[test]
    fn empty_edges_flow_zero() {
        let net = FlowNetwork {
            n_sections: 0,
            n_models: 0,
            edges: Vec::new(),
            model_capacity: Vec::new(),
            uniform_tokens: 1,
        };
        let outcome = min_cost_max_flow(&net).unwrap();
        assert_eq!(outcome.flow_value, 0);
        assert_eq!(outcome.total_cost, 0.0);
    }

    #[test]
    fn partition_style_feasibility() {
        // Elements {1, 2, 3}, target 3 per side: a perfect split exists
        // ({1,2} vs {3}), so the latency-feasibility question is a yes.
        let elements = [1u64, 2, 3];
        let half = 3.0;
        let ell = 0.01;
        let models: Vec<ModelProfile> = (0..2)
            .map(|i| ModelProfile {
                id: format!("m{i}"),
                input_cost_per_token: 0.0,
                output_cost_per_token: 0.0,
                fixed_cost: 0.0,
                latency_per_token: ell,
                avg_tokens_per_sentence: 1.0,
                tokenizer_id: None,
            })
            .collect();
        let sections: Vec<Section> = elements
            .iter()
            .enumerate()
            .map(|(j, &a)| Section {
                id: format!("s{j}"),
                text: None,
                input_tokens_per_model: models
                    .iter()
                    .map(|m| (m.id.clone(), a - 1))
                    .collect(),
                summary_sentences: 1,
            })
            .collect();
        let instance = RoutingInstance {
            models,
            sections,
            scores: Some(vec![vec![1.0, 1.0]; 3]),
            budget: None,
            latency_sla: Some(ell * half),
            quality_floor: Some(0.5),
        };
        let sol = cost_min_oracle(&instance).unwrap();
        assert!(sol.feasible);
        assert_eq!(sol.plan.total_cost, 0.0);

        // Shrink the SLA below half the total and the split disappears.
        let mut tight = instance.clone();
        tight.latency_sla = Some(ell * 2.5);
        assert!(matches!(
            cost_min_oracle(&tight),
            Err(CostMinError::NoFeasibleAssignment)
        ));
    }

    #[test]
    fn identical_models_cost_is_symmetric() {
        let instance = mk_instance(
            &[0.001, 0.001],
            &[0.0, 0.0],
            &[100, 100, 100],
            vec![vec![0.9, 0.9]; 3],
            Some(0.5),
            None,
        );
        let sol = cost_min_oracle(&instance).unwrap();
        let per_section = 0.001 * 110.0;
        assert!((sol.plan.total_cost - 3.0 * per_section).abs() < COST_TOL);
    }

    #[test]
    fn latency_heuristic_marks_unassignable_sections() {
        let d = 100u64;
        let sla = 1.0;
        let lat = sla / (1.5 * d as f64); // one section per model
        let instance = mk_instance(
            &[0.001, 0.002],
            &[lat, lat],
            &[90, 90, 90],
            vec![vec![0.9, 0.9]; 3],
            Some(0.5),
            Some(sla),
        );
        let sol = greedy_cost_min_with_latency(&instance).unwrap();
        assert!(!sol.feasible);
        assert_eq!(sol.plan.assignment.len(), 2);
        assert_eq!(sol.unassigned_sections, vec!["s2".to_string()]);
    }
}
