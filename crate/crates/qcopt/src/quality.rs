//! Score-matrix ingestion, the pluggable quality-predictor boundary, and
//! the loss functions used to evaluate an external predictor's outputs.
//!
//! Scores arrive precomputed (JSON or CSV); nothing here trains or embeds.
//! The pairwise loss penalizes mispredicted score gaps between model pairs,
//! which preserves model orderings: it averages `(delta - delta_hat)^2`
//! over unordered model pairs and is invariant to shifting a prediction
//! vector by a constant.

use std::collections::BTreeMap;
use std::path::Path;

use crate::model::RoutingInstance;

#[derive(Debug, thiserror::Error)]
pub enum QualityError {
    #[error("score vectors have mismatched lengths: actual {actual}, predicted {predicted}")]
    LengthMismatch { actual: usize, predicted: usize },
    #[error("score {value} at position {index} is outside [0, 1]")]
    ScoreOutOfRange { index: usize, value: f64 },
    #[error("empty batch")]
    EmptyBatch,
    #[error("pairwise loss needs at least two models, got {0}")]
    TooFewModels(usize),
    #[error("loss weights must not both be zero")]
    ZeroWeights,
    #[error("loss weight {name} must be finite and >= 0 (got {value})")]
    BadWeight { name: &'static str, value: f64 },
    #[error("score file: unknown section `{0}`")]
    UnknownSection(String),
    #[error("score file: unknown model `{0}`")]
    UnknownModel(String),
    #[error("score file: missing section `{0}`")]
    MissingSection(String),
    #[error("score file: missing score for section `{section}`, model `{model}`")]
    MissingCell { section: String, model: String },
    #[error("score file: section `{section}`, model `{model}` has score {value}, outside [0, 1]")]
    CellOutOfRange {
        section: String,
        model: String,
        value: f64,
    },
    #[error("score file: {0}")]
    Format(String),
    #[error("predictor has no scores for section `{0}`")]
    PredictorMiss(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Reference and predicted per-model score vectors for one section.
#[derive(Debug, Clone)]
pub struct ScoreVectors {
    actual: Vec<f64>,
    predicted: Vec<f64>,
}

impl ScoreVectors {
    pub fn new(actual: Vec<f64>, predicted: Vec<f64>) -> Result<Self, QualityError> {
        if actual.len() != predicted.len() {
            return Err(QualityError::LengthMismatch {
                actual: actual.len(),
                predicted: predicted.len(),
            });
        }
        for (index, &value) in actual.iter().chain(predicted.iter()).enumerate() {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(QualityError::ScoreOutOfRange {
                    index: index % actual.len().max(1),
                    value,
                });
            }
        }
        Ok(ScoreVectors { actual, predicted })
    }

    pub fn models(&self) -> usize {
        self.actual.len()
    }

    pub fn actual(&self) -> &[f64] {
        &self.actual
    }

    pub fn predicted(&self) -> &[f64] {
        &self.predicted
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LossWeights {
    pub alpha: f64,
    pub beta: f64,
}

impl LossWeights {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, QualityError> {
        for (name, value) in [("alpha", alpha), ("beta", beta)] {
            if !value.is_finite() || value < 0.0 {
                return Err(QualityError::BadWeight { name, value });
            }
        }
        if alpha == 0.0 && beta == 0.0 {
            return Err(QualityError::ZeroWeights);
        }
        Ok(LossWeights { alpha, beta })
    }
}

/// Mean over the batch of squared Euclidean prediction error.
pub fn mse_loss(batch: &[ScoreVectors]) -> Result<f64, QualityError> {
    if batch.is_empty() {
        return Err(QualityError::EmptyBatch);
    }
    let total: f64 = batch
        .iter()
        .map(|sv| {
            sv.actual
                .iter()
                .zip(&sv.predicted)
                .map(|(y, yh)| (y - yh) * (y - yh))
                .sum::<f64>()
        })
        .sum();
    Ok(total / batch.len() as f64)
}

/// Mean over the batch of the mean squared gap error across unordered model
/// pairs. Counting ordered pairs instead changes nothing: the squared term
/// is symmetric in the pair, so the doubled sum cancels against the doubled
/// normalizer.
pub fn pairwise_diff_loss(batch: &[ScoreVectors]) -> Result<f64, QualityError> {
    if batch.is_empty() {
        return Err(QualityError::EmptyBatch);
    }
    let k = batch[0].models();
    if k < 2 {
        return Err(QualityError::TooFewModels(k));
    }
    let pairs = (k * (k - 1) / 2) as f64;
    let total: f64 = batch
        .iter()
        .map(|sv| {
            let mut sum = 0.0;
            for p in 0..k {
                for q in (p + 1)..k {
                    let delta = sv.actual[p] - sv.actual[q];
                    let delta_hat = sv.predicted[p] - sv.predicted[q];
                    sum += (delta - delta_hat) * (delta - delta_hat);
                }
            }
            sum / pairs
        })
        .sum();
    Ok(total / batch.len() as f64)
}

/// `alpha * mse + beta * pairwise`. With `beta == 0` the pairwise term is
/// skipped entirely, so single-model batches still evaluate.
pub fn total_loss(batch: &[ScoreVectors], weights: &LossWeights) -> Result<f64, QualityError> {
    let mse = if weights.alpha != 0.0 {
        weights.alpha * mse_loss(batch)?
    } else {
        0.0
    };
    let diff = if weights.beta != 0.0 {
        weights.beta * pairwise_diff_loss(batch)?
    } else {
        if batch.is_empty() {
            return Err(QualityError::EmptyBatch);
        }
        0.0
    };
    Ok(mse + diff)
}

/// Anything that can produce a per-model score vector for a section.
pub trait QualityPredictor {
    fn model_count(&self) -> usize;
    fn predict(&self, section_id: &str, text: Option<&str>) -> Result<Vec<f64>, QualityError>;
}

/// Pipeline stub: the same mid-scale score for every model and section.
#[derive(Debug, Clone)]
pub struct UniformPredictor {
    pub models: usize,
}

impl QualityPredictor for UniformPredictor {
    fn model_count(&self) -> usize {
        self.models
    }

    fn predict(&self, _section_id: &str, _text: Option<&str>) -> Result<Vec<f64>, QualityError> {
        Ok(vec![0.5; self.models])
    }
}

/// Default predictor: precomputed scores keyed by section id.
#[derive(Debug, Clone)]
pub struct PrecomputedPredictor {
    models: usize,
    by_section: BTreeMap<String, Vec<f64>>,
}

impl PrecomputedPredictor {
    pub fn from_matrix(instance: &RoutingInstance, scores: &[Vec<f64>]) -> Self {
        PrecomputedPredictor {
            models: instance.n_models(),
            by_section: instance
                .sections
                .iter()
                .zip(scores)
                .map(|(s, row)| (s.id.clone(), row.clone()))
                .collect(),
        }
    }
}

impl QualityPredictor for PrecomputedPredictor {
    fn model_count(&self) -> usize {
        self.models
    }

    fn predict(&self, section_id: &str, _text: Option<&str>) -> Result<Vec<f64>, QualityError> {
        self.by_section
            .get(section_id)
            .cloned()
            .ok_or_else(|| QualityError::PredictorMiss(section_id.to_string()))
    }
}

/// Load a score file and validate it against the instance. JSON files hold
/// `{"scores": {section_id: {model_id: value}}}`; CSV files have a header
/// of model ids after the section-id column. Returns the row-major
/// section x model matrix in instance order.
pub fn load_scores(path: &Path, instance: &RoutingInstance) -> Result<Vec<Vec<f64>>, QualityError> {
    let raw = std::fs::read_to_string(path)?;
    let nested = if path.extension().is_some_and(|e| e == "csv") {
        parse_csv_scores(&raw)?
    } else {
        parse_json_scores(&raw)?
    };
    matrix_from_nested(nested, instance)
}

fn parse_json_scores(raw: &str) -> Result<BTreeMap<String, BTreeMap<String, f64>>, QualityError> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct ScoreFile {
        scores: BTreeMap<String, BTreeMap<String, f64>>,
    }
    let file: ScoreFile =
        serde_json::from_str(raw).map_err(|e| QualityError::Format(e.to_string()))?;
    Ok(file.scores)
}

fn parse_csv_scores(raw: &str) -> Result<BTreeMap<String, BTreeMap<String, f64>>, QualityError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(raw.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| QualityError::Format(e.to_string()))?
        .clone();
    if headers.len() < 2 {
        return Err(QualityError::Format(
            "CSV needs a section column plus one column per model".to_string(),
        ));
    }
    let model_ids: Vec<String> = headers.iter().skip(1).map(|h| h.to_string()).collect();
    let mut nested = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| QualityError::Format(e.to_string()))?;
        let section = record
            .get(0)
            .ok_or_else(|| QualityError::Format("missing section id".to_string()))?
            .to_string();
        let mut row = BTreeMap::new();
        for (i, model) in model_ids.iter().enumerate() {
            let cell = record.get(i + 1).ok_or_else(|| {
                QualityError::MissingCell {
                    section: section.clone(),
                    model: model.clone(),
                }
            })?;
            let value: f64 = cell.parse().map_err(|_| {
                QualityError::Format(format!(
                    "section `{section}`, model `{model}`: `{cell}` is not a number"
                ))
            })?;
            row.insert(model.clone(), value);
        }
        nested.insert(section, row);
    }
    Ok(nested)
}

fn matrix_from_nested(
    nested: BTreeMap<String, BTreeMap<String, f64>>,
    instance: &RoutingInstance,
) -> Result<Vec<Vec<f64>>, QualityError> {
    let known_sections: std::collections::BTreeSet<&str> =
        instance.sections.iter().map(|s| s.id.as_str()).collect();
    let known_models: std::collections::BTreeSet<&str> =
        instance.models.iter().map(|m| m.id.as_str()).collect();
    for (section, row) in &nested {
        if !known_sections.contains(section.as_str()) {
            return Err(QualityError::UnknownSection(section.clone()));
        }
        for model in row.keys() {
            if !known_models.contains(model.as_str()) {
                return Err(QualityError::UnknownModel(model.clone()));
            }
        }
    }
    let mut matrix = Vec::with_capacity(instance.n_sections());
    for section in &instance.sections {
        let row = nested
            .get(&section.id)
            .ok_or_else(|| QualityError::MissingSection(section.id.clone()))?;
        let mut out = Vec::with_capacity(instance.n_models());
        for model in &instance.models {
            let &value = row.get(&model.id).ok_or_else(|| QualityError::MissingCell {
                section: section.id.clone(),
                model: model.id.clone(),
            })?;
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(QualityError::CellOutOfRange {
                    section: section.id.clone(),
                    model: model.id.clone(),
                    value,
                });
            }
            out.push(value);
        }
        matrix.push(out);
    }
    Ok(matrix)
}
