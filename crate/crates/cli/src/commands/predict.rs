use std::fs::File;
use std::io::Write;
use std::path::Path;

use relink_core::decay::{predict, read_models_csv, DecayModel, ModelLabel};
use serde::Serialize;

use crate::app::{write_json, App};
use crate::error::{CliError, CliResult};
use crate::Format;

#[derive(Debug, Serialize)]
struct Prediction {
    schema_version: u32,
    model: ModelLabel,
    source: String,
    slope: f64,
    intercept: f64,
    age_days: f64,
    percentage: f64,
}

/// Models from `models_file` shadow the built-ins of the same label.
fn lookup(name: &str, models_file: Option<&Path>) -> CliResult<(DecayModel, String)> {
    let label: ModelLabel = name
        .parse()
        .map_err(|e: relink_core::decay::DecayError| CliError::Input(e.to_string()))?;
    if let Some(path) = models_file {
        let file = File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let models = read_models_csv(file).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let mut matching = models.into_iter().filter(|m| m.label == label);
        if let Some(model) = matching.next() {
            if matching.next().is_some() {
                log::warn!("{} has several {label} models; using the first", path.display());
            }
            return Ok((model, path.display().to_string()));
        }
    }
    DecayModel::built_in(label)
        .map(|m| (m, "built-in".to_string()))
        .ok_or_else(|| CliError::Input(format!("no {label} model available; pass --models")))
}

pub fn run(app: &App, name: &str, age_days: f64, models_file: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    let (model, source) = lookup(name, models_file)?;
    let percentage = predict(&model, age_days).map_err(|e| CliError::Input(e.to_string()))?;
    match app.format(Format::Text) {
        Format::Json => write_json(
            out,
            &Prediction {
                schema_version: relink_core::SCHEMA_VERSION,
                model: model.label,
                source,
                slope: model.slope,
                intercept: model.intercept,
                age_days,
                percentage,
            },
        ),
        Format::Csv => {
            writeln!(out, "model,age_days,percentage")?;
            writeln!(out, "{},{age_days},{percentage:.2}", model.label)?;
            Ok(())
        }
        Format::Text => {
            writeln!(
                out,
                "{percentage:.2}  {} at {age_days} days ({source}: {} * age + {})",
                model.label, model.slope, model.intercept
            )?;
            Ok(())
        }
    }
}
