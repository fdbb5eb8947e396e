//! Linear decay models: percentage of shared resources in some state as a
//! function of their age in days.
//!
//! All percentages are on the 0–100 scale. Predictions are not clamped unless
//! asked, so models with negative intercepts yield negative values at small
//! ages.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecayError {
    #[error("age must be non-negative, got {0}")]
    NegativeAge(f64),
    #[error("fit needs at least two distinct ages")]
    DegenerateInput,
    #[error("length mismatch: {measured} measured vs {predicted} predicted")]
    LengthMismatch { measured: usize, predicted: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error("csv: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelLabel {
    ContentLost,
    ContentArchived,
    Reappearing,
    MementosDisappearing,
    PostsMissing,
    Custom,
}

impl ModelLabel {
    pub const BUILT_IN: [ModelLabel; 5] = [
        ModelLabel::ContentLost,
        ModelLabel::ContentArchived,
        ModelLabel::Reappearing,
        ModelLabel::MementosDisappearing,
        ModelLabel::PostsMissing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelLabel::ContentLost => "content-lost",
            ModelLabel::ContentArchived => "content-archived",
            ModelLabel::Reappearing => "reappearing",
            ModelLabel::MementosDisappearing => "mementos-disappearing",
            ModelLabel::PostsMissing => "posts-missing",
            ModelLabel::Custom => "custom",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ModelLabel::ContentLost => "linked resources missing from the live web",
            ModelLabel::ContentArchived => "linked resources with at least one memento",
            ModelLabel::Reappearing => "missing resources that came back to the live web",
            ModelLabel::MementosDisappearing => "resources losing mementos from the archives",
            ModelLabel::PostsMissing => "social posts themselves missing",
            ModelLabel::Custom => "fitted by least squares",
        }
    }
}

impl fmt::Display for ModelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelLabel {
    type Err = DecayError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        [
            ModelLabel::ContentLost,
            ModelLabel::ContentArchived,
            ModelLabel::Reappearing,
            ModelLabel::MementosDisappearing,
            ModelLabel::PostsMissing,
            ModelLabel::Custom,
        ]
        .into_iter()
        .find(|l| l.name() == key)
        .ok_or_else(|| DecayError::UnknownModel(s.to_string()))
    }
}

/// `percentage = slope * age_days + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayModel {
    pub slope: f64,
    pub intercept: f64,
    pub label: ModelLabel,
}

impl DecayModel {
    pub const CONTENT_LOST: DecayModel = DecayModel {
        slope: 0.02,
        intercept: 4.20,
        label: ModelLabel::ContentLost,
    };
    pub const CONTENT_ARCHIVED: DecayModel = DecayModel {
        slope: 0.04,
        intercept: 6.74,
        label: ModelLabel::ContentArchived,
    };
    pub const REAPPEARING: DecayModel = DecayModel {
        slope: 0.01,
        intercept: -1.42,
        label: ModelLabel::Reappearing,
    };
    pub const MEMENTOS_DISAPPEARING: DecayModel = DecayModel {
        slope: 0.01,
        intercept: -2.22,
        label: ModelLabel::MementosDisappearing,
    };
    pub const POSTS_MISSING: DecayModel = DecayModel {
        slope: 0.01,
        intercept: 0.88,
        label: ModelLabel::PostsMissing,
    };

    /// Built-in model for a label; `None` for [`ModelLabel::Custom`].
    pub fn built_in(label: ModelLabel) -> Option<DecayModel> {
        match label {
            ModelLabel::ContentLost => Some(Self::CONTENT_LOST),
            ModelLabel::ContentArchived => Some(Self::CONTENT_ARCHIVED),
            ModelLabel::Reappearing => Some(Self::REAPPEARING),
            ModelLabel::MementosDisappearing => Some(Self::MEMENTOS_DISAPPEARING),
            ModelLabel::PostsMissing => Some(Self::POSTS_MISSING),
            ModelLabel::Custom => None,
        }
    }

    pub fn custom(slope: f64, intercept: f64) -> Self {
        DecayModel {
            slope,
            intercept,
            label: ModelLabel::Custom,
        }
    }

    /// Age at which the model reaches `percentage`.
    pub fn age_for(&self, percentage: f64) -> f64 {
        (percentage - self.intercept) / self.slope
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Clamp {
    #[default]
    Raw,
    Percent,
}

pub fn predict(model: &DecayModel, age_days: f64) -> Result<f64, DecayError> {
    predict_with(model, age_days, Clamp::Raw)
}

pub fn predict_with(model: &DecayModel, age_days: f64, clamp: Clamp) -> Result<f64, DecayError> {
    if age_days.is_nan() || age_days < 0.0 {
        return Err(DecayError::NegativeAge(age_days));
    }
    let raw = model.slope * age_days + model.intercept;
    Ok(match clamp {
        Clamp::Raw => raw,
        Clamp::Percent => raw.clamp(0.0, 100.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub age_days: f64,
    pub percentage: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ObservationSet {
    pub event_label: String,
    pub points: Vec<Observation>,
}

impl ObservationSet {
    pub fn new(event_label: impl Into<String>, points: &[(f64, f64)]) -> Self {
        ObservationSet {
            event_label: event_label.into(),
            points: points
                .iter()
                .map(|&(age_days, percentage)| Observation {
                    age_days,
                    percentage,
                })
                .collect(),
        }
    }
}

/// Ordinary least squares over the observation set.
pub fn fit(obs: &ObservationSet) -> Result<DecayModel, DecayError> {
    let n = obs.points.len();
    if n < 2 {
        return Err(DecayError::DegenerateInput);
    }
    let nf = n as f64;
    let mean_x = obs.points.iter().map(|p| p.age_days).sum::<f64>() / nf;
    let mean_y = obs.points.iter().map(|p| p.percentage).sum::<f64>() / nf;
    let (sxy, sxx) = obs.points.iter().fold((0.0, 0.0), |(sxy, sxx), p| {
        let dx = p.age_days - mean_x;
        (sxy + dx * (p.percentage - mean_y), sxx + dx * dx)
    });
    if sxx == 0.0 {
        return Err(DecayError::DegenerateInput);
    }
    let slope = sxy / sxx;
    Ok(DecayModel::custom(slope, mean_y - slope * mean_x))
}

pub fn mean_abs_error(measured: &[f64], predicted: &[f64]) -> Result<f64, DecayError> {
    if measured.len() != predicted.len() {
        return Err(DecayError::LengthMismatch {
            measured: measured.len(),
            predicted: predicted.len(),
        });
    }
    if measured.is_empty() {
        return Err(DecayError::EmptyInput);
    }
    let total: f64 = measured
        .iter()
        .zip(predicted)
        .map(|(m, p)| (m - p).abs())
        .sum();
    Ok(total / measured.len() as f64)
}

/// Unweighted mean of per-event percentages.
pub fn aggregate_events<S: AsRef<str>>(per_event: &[(S, f64)]) -> Result<f64, DecayError> {
    if per_event.is_empty() {
        return Err(DecayError::EmptyInput);
    }
    Ok(per_event.iter().map(|(_, p)| p).sum::<f64>() / per_event.len() as f64)
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    event: String,
    age_days: f64,
    percentage: f64,
}

/// Read `event,age_days,percentage` rows, grouped by event in first-seen order.
pub fn read_observations_csv<R: Read>(reader: R) -> Result<Vec<ObservationSet>, DecayError> {
    let mut sets: Vec<ObservationSet> = Vec::new();
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    for row in rdr.deserialize::<CsvRow>() {
        let row = row.map_err(|e| DecayError::Csv(e.to_string()))?;
        if row.age_days < 0.0 {
            return Err(DecayError::NegativeAge(row.age_days));
        }
        let point = Observation {
            age_days: row.age_days,
            percentage: row.percentage,
        };
        match sets.iter_mut().find(|s| s.event_label == row.event) {
            Some(set) => set.points.push(point),
            None => sets.push(ObservationSet {
                event_label: row.event,
                points: vec![point],
            }),
        }
    }
    Ok(sets)
}

#[derive(Debug, Deserialize)]
struct ModelRow {
    label: String,
    slope: f64,
    intercept: f64,
}

/// Read models written by [`write_models_csv`].
pub fn read_models_csv<R: Read>(reader: R) -> Result<Vec<DecayModel>, DecayError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    rdr.deserialize::<ModelRow>()
        .map(|row| {
            let row = row.map_err(|e| DecayError::Csv(e.to_string()))?;
            Ok(DecayModel {
                slope: row.slope,
                intercept: row.intercept,
                label: row.label.parse()?,
            })
        })
        .collect()
}

/// One row per model: `label,slope,intercept`.
pub fn write_models_csv<W: Write>(writer: W, models: &[DecayModel]) -> Result<(), DecayError> {
    let mut wtr = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| DecayError::Csv(e.to_string());
    wtr.write_record(["label", "slope", "intercept"])
        .map_err(csv_err)?;
    for m in models {
        wtr.write_record([
            m.label.name().to_string(),
            m.slope.to_string(),
            m.intercept.to_string(),
        ])
        .map_err(csv_err)?;
    }
    wtr.flush().map_err(|e| DecayError::Csv(e.to_string()))
}
