//! Cost and latency model shared by all solvers: model profiles, document
//! sections, routing instances, and routing plans.
//!
//! A [`RoutingInstance`] bundles `K` model profiles, `n` sections, an
//! `n x K` quality-score matrix (rows are sections, columns are models) and
//! the constraint parameters (budget, latency SLA, quality floor). The
//! estimated per-pair cost and latency derived here are the coefficients
//! every optimizer in this crate consumes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::tokenizer::{count_tokens, TokenVocabulary};

/// Absolute tolerance used when comparing accumulated currency amounts.
pub const COST_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("model `{model}`: {field} must be finite and >= 0 (got {value})")]
    InvalidModelField {
        model: String,
        field: &'static str,
        value: f64,
    },
    #[error("model `{model}`: avg_tokens_per_sentence must be > 0 (got {value})")]
    NonPositiveAvgTokens { model: String, value: f64 },
    #[error("section `{section}`: summary_sentences must be >= 1")]
    ZeroSummarySentences { section: String },
    #[error("section `{section}` has no input token count for model `{model}`")]
    MissingTokenCount { section: String, model: String },
    #[error("section `{section}` has neither text nor input token counts")]
    MissingSectionLengths { section: String },
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("instance has no models")]
    NoModels,
    #[error("scores matrix has {rows} rows for {sections} sections")]
    ScoreRowMismatch { rows: usize, sections: usize },
    #[error("scores row {row} has {cols} entries for {models} models")]
    ScoreColMismatch {
        row: usize,
        cols: usize,
        models: usize,
    },
    #[error("score for section `{section}`, model `{model}` is {value}, outside [0, 1]")]
    ScoreOutOfRange {
        section: String,
        model: String,
        value: f64,
    },
    #[error("instance has no scores matrix; load one before solving")]
    MissingScores,
    #[error("{field} must be finite and >= 0 (got {value})")]
    InvalidParameter { field: &'static str, value: f64 },
    #[error("assignment references unknown section index {0}")]
    BadAssignmentIndex(usize),
    #[error("failed to read instance file: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse instance file: {0}")]
    Parse(#[from] serde_json::Error),
}

/// Price, latency, and output-length statistics for one LLM.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelProfile {
    pub id: String,
    /// Currency per input token.
    pub input_cost_per_token: f64,
    /// Currency per output token.
    pub output_cost_per_token: f64,
    /// Currency per invocation, charged once per routed section.
    #[serde(default)]
    pub fixed_cost: f64,
    /// Seconds per token (input + output combined).
    #[serde(default)]
    pub latency_per_token: f64,
    /// Empirical mean output tokens per summary sentence for this model.
    pub avg_tokens_per_sentence: f64,
    /// Optional reference into the vocabulary registry; models without one
    /// use the registry default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tokenizer_id: Option<String>,
}

impl ModelProfile {
    pub fn validate(&self) -> Result<(), ModelError> {
        let checks = [
            ("input_cost_per_token", self.input_cost_per_token),
            ("output_cost_per_token", self.output_cost_per_token),
            ("fixed_cost", self.fixed_cost),
            ("latency_per_token", self.latency_per_token),
        ];
        for (field, value) in checks {
            if !value.is_finite() || value < 0.0 {
                return Err(ModelError::InvalidModelField {
                    model: self.id.clone(),
                    field,
                    value,
                });
            }
        }
        if !self.avg_tokens_per_sentence.is_finite() || self.avg_tokens_per_sentence <= 0.0 {
            return Err(ModelError::NonPositiveAvgTokens {
                model: self.id.clone(),
                value: self.avg_tokens_per_sentence,
            });
        }
        Ok(())
    }
}

/// One document section to be routed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Section {
    pub id: String,
    /// Raw text; optional when token counts are supplied directly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    /// Input token count per model id. Filled from `text` at load time when
    /// absent and a vocabulary is available.
    #[serde(default)]
    pub input_tokens_per_model: BTreeMap<String, u64>,
    /// Requested summary length in sentences.
    #[serde(default = "default_summary_sentences")]
    pub summary_sentences: u32,
}

fn default_summary_sentences() -> u32 {
    1
}

impl Section {
    pub fn input_tokens_for(&self, model: &ModelProfile) -> Result<u64, ModelError> {
        self.input_tokens_per_model
            .get(&model.id)
            .copied()
            .ok_or_else(|| ModelError::MissingTokenCount {
                section: self.id.clone(),
                model: model.id.clone(),
            })
    }
}

/// Estimated output tokens for a section on a model:
/// `ceil(summary_sentences * avg_tokens_per_sentence)`.
pub fn estimated_output_tokens(section: &Section, model: &ModelProfile) -> u64 {
    (f64::from(section.summary_sentences) * model.avg_tokens_per_sentence).ceil() as u64
}

/// Estimated cost of routing `section` to `model`: input rate times input
/// tokens, plus output rate times estimated output tokens, plus the fixed
/// per-invocation cost.
pub fn estimated_cost(section: &Section, model: &ModelProfile) -> Result<f64, ModelError> {
    let input = section.input_tokens_for(model)? as f64;
    let output = estimated_output_tokens(section, model) as f64;
    Ok(model.input_cost_per_token * input + model.output_cost_per_token * output + model.fixed_cost)
}

/// Estimated latency in seconds: per-token latency times the total of input
/// and estimated output tokens. Network noise is zero-mean and omitted.
pub fn estimated_latency(section: &Section, model: &ModelProfile) -> Result<f64, ModelError> {
    let input = section.input_tokens_for(model)? as f64;
    let output = estimated_output_tokens(section, model) as f64;
    Ok(model.latency_per_token * (input + output))
}

/// A complete routing problem.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoutingInstance {
    pub models: Vec<ModelProfile>,
    pub sections: Vec<Section>,
    /// Row-major section x model quality estimates in [0, 1].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scores: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latency_sla: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quality_floor: Option<f64>,
}

impl RoutingInstance {
    pub fn n_sections(&self) -> usize {
        self.sections.len()
    }

    pub fn n_models(&self) -> usize {
        self.models.len()
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.models.is_empty() {
            return Err(ModelError::NoModels);
        }
        let mut seen = std::collections::BTreeSet::new();
        for model in &self.models {
            model.validate()?;
            if !seen.insert(model.id.as_str()) {
                return Err(ModelError::DuplicateId {
                    kind: "model",
                    id: model.id.clone(),
                });
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for section in &self.sections {
            if section.summary_sentences == 0 {
                return Err(ModelError::ZeroSummarySentences {
                    section: section.id.clone(),
                });
            }
            if !seen.insert(section.id.as_str()) {
                return Err(ModelError::DuplicateId {
                    kind: "section",
                    id: section.id.clone(),
                });
            }
            if section.text.is_none() && section.input_tokens_per_model.is_empty() {
                return Err(ModelError::MissingSectionLengths {
                    section: section.id.clone(),
                });
            }
            if !section.input_tokens_per_model.is_empty() {
                for model in &self.models {
                    section.input_tokens_for(model)?;
                }
            }
        }
        for (field, value) in [
            ("budget", self.budget),
            ("latency_sla", self.latency_sla),
            ("quality_floor", self.quality_floor),
        ] {
            if let Some(v) = value {
                if !v.is_finite() || v < 0.0 {
                    return Err(ModelError::InvalidParameter { field, value: v });
                }
            }
        }
        if let Some(scores) = &self.scores {
            self.validate_scores(scores)?;
        }
        Ok(())
    }

    pub fn validate_scores(&self, scores: &[Vec<f64>]) -> Result<(), ModelError> {
        if scores.len() != self.sections.len() {
            return Err(ModelError::ScoreRowMismatch {
                rows: scores.len(),
                sections: self.sections.len(),
            });
        }
        for (j, row) in scores.iter().enumerate() {
            if row.len() != self.models.len() {
                return Err(ModelError::ScoreColMismatch {
                    row: j,
                    cols: row.len(),
                    models: self.models.len(),
                });
            }
            for (i, &value) in row.iter().enumerate() {
                if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                    return Err(ModelError::ScoreOutOfRange {
                        section: self.sections[j].id.clone(),
                        model: self.models[i].id.clone(),
                        value,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn scores(&self) -> Result<&Vec<Vec<f64>>, ModelError> {
        self.scores.as_ref().ok_or(ModelError::MissingScores)
    }

    /// n x K matrix of estimated costs.
    pub fn cost_matrix(&self) -> Result<Vec<Vec<f64>>, ModelError> {
        self.sections
            .iter()
            .map(|s| self.models.iter().map(|m| estimated_cost(s, m)).collect())
            .collect()
    }

    /// n x K matrix of estimated latencies.
    pub fn latency_matrix(&self) -> Result<Vec<Vec<f64>>, ModelError> {
        self.sections
            .iter()
            .map(|s| {
                self.models
                    .iter()
                    .map(|m| estimated_latency(s, m))
                    .collect()
            })
            .collect()
    }

    /// Cost of routing every section to its cheapest model; the smallest
    /// budget for which any complete assignment is feasible.
    pub fn minimum_feasible_budget(&self) -> Result<f64, ModelError> {
        let costs = self.cost_matrix()?;
        Ok(costs
            .iter()
            .map(|row| row.iter().cloned().fold(f64::INFINITY, f64::min))
            .sum())
    }

    /// Fill missing per-model token counts by tokenizing section text.
    /// Models resolve their vocabulary through `lookup` (tokenizer id, or
    /// `None` for the default). Sections that already carry a count for a
    /// model keep it.
    pub fn populate_token_counts<'a, F>(&mut self, mut lookup: F) -> Result<(), ModelError>
    where
        F: FnMut(Option<&str>) -> Option<&'a TokenVocabulary>,
    {
        for section in &mut self.sections {
            for model in &self.models {
                if section.input_tokens_per_model.contains_key(&model.id) {
                    continue;
                }
                let text = section.text.as_deref().ok_or_else(|| {
                    ModelError::MissingSectionLengths {
                        section: section.id.clone(),
                    }
                })?;
                let vocab = lookup(model.tokenizer_id.as_deref()).ok_or_else(|| {
                    ModelError::MissingTokenCount {
                        section: section.id.clone(),
                        model: model.id.clone(),
                    }
                })?;
                section
                    .input_tokens_per_model
                    .insert(model.id.clone(), count_tokens(text, vocab));
            }
        }
        Ok(())
    }

    pub fn from_json_str(json: &str) -> Result<Self, ModelError> {
        let instance: RoutingInstance = serde_json::from_str(json)?;
        Ok(instance)
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        let raw = std::fs::read_to_string(path)?;
        Self::from_json_str(&raw)
    }
}

/// A concrete assignment of sections to models with its realized totals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoutingPlan {
    /// section id -> model id. Partial solutions cover assigned sections only.
    pub assignment: BTreeMap<String, String>,
    pub total_cost: f64,
    /// Summed estimated latency per model id over its assigned sections.
    pub per_model_latency: BTreeMap<String, f64>,
    /// Sum of the assigned quality scores.
    pub objective: f64,
    /// `max(0, total_cost / budget - 1)`; 0 when the instance has no budget.
    pub budget_violation_fraction: f64,
}

impl RoutingPlan {
    pub fn empty() -> Self {
        RoutingPlan {
            assignment: BTreeMap::new(),
            total_cost: 0.0,
            per_model_latency: BTreeMap::new(),
            objective: 0.0,
            budget_violation_fraction: 0.0,
        }
    }

    /// Build a plan from per-section model indices; `None` leaves a section
    /// unassigned (partial plan). Totals accumulate in section order.
    pub fn from_partial_assignment(
        instance: &RoutingInstance,
        choice: &[Option<usize>],
    ) -> Result<Self, ModelError> {
        let scores = instance.scores()?;
        let mut assignment = BTreeMap::new();
        let mut per_model_latency: BTreeMap<String, f64> = instance
            .models
            .iter()
            .map(|m| (m.id.clone(), 0.0))
            .collect();
        let mut total_cost = 0.0;
        let mut objective = 0.0;
        for (j, section) in instance.sections.iter().enumerate() {
            let Some(i) = choice.get(j).copied().flatten() else {
                continue;
            };
            let model = instance
                .models
                .get(i)
                .ok_or(ModelError::BadAssignmentIndex(i))?;
            assignment.insert(section.id.clone(), model.id.clone());
            total_cost += estimated_cost(section, model)?;
            *per_model_latency.get_mut(&model.id).expect("model id") +=
                estimated_latency(section, model)?;
            objective += scores[j][i];
        }
        let budget_violation_fraction = match instance.budget {
            Some(b) if b > 0.0 => (total_cost / b - 1.0).max(0.0),
            Some(_) => {
                if total_cost > COST_TOL {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            None => 0.0,
        };
        Ok(RoutingPlan {
            assignment,
            total_cost,
            per_model_latency,
            objective,
            budget_violation_fraction,
        })
    }

    pub fn from_assignment(
        instance: &RoutingInstance,
        choice: &[usize],
    ) -> Result<Self, ModelError> {
        let wrapped: Vec<Option<usize>> = choice.iter().map(|&i| Some(i)).collect();
        Self::from_partial_assignment(instance, &wrapped)
    }

    pub fn is_complete(&self, instance: &RoutingInstance) -> bool {
        self.assignment.len() == instance.sections.len()
    }
}

impl fmt::Display for RoutingPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "objective {:.6}, cost {:.6}, budget violation {:.4}%",
            self.objective,
            self.total_cost,
            self.budget_violation_fraction * 100.0
        )?;
        for (section, model) in &self.assignment {
            writeln!(f, "  {section} -> {model}")?;
        }
        Ok(())
    }
}
