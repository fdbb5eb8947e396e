use std::fs::File;
use std::io::Write;
use std::path::Path;

use relink_core::decay::{
    fit, mean_abs_error, predict, read_observations_csv, write_models_csv, DecayModel, ObservationSet,
};
use serde::Serialize;

use super::csv_field;
use crate::app::{write_json, App};
use crate::error::{CliError, CliResult};
use crate::Format;

#[derive(Debug, Serialize)]
struct Fitted {
    event: String,
    points: usize,
    slope: f64,
    intercept: f64,
    mean_abs_error: f64,
}

#[derive(Debug, Serialize)]
struct FitReport {
    schema_version: u32,
    models: Vec<Fitted>,
}

fn fit_one(set: &ObservationSet) -> CliResult<(DecayModel, Fitted)> {
    let bad = |e: relink_core::decay::DecayError| CliError::Input(format!("{}: {e}", set.event_label));
    let model = fit(set).map_err(bad)?;
    let measured: Vec<f64> = set.points.iter().map(|p| p.percentage).collect();
    let predicted = set
        .points
        .iter()
        .map(|p| predict(&model, p.age_days))
        .collect::<Result<Vec<_>, _>>()
        .map_err(bad)?;
    let mae = mean_abs_error(&measured, &predicted).map_err(bad)?;
    Ok((
        model,
        Fitted {
            event: set.event_label.clone(),
            points: set.points.len(),
            slope: model.slope,
            intercept: model.intercept,
            mean_abs_error: mae,
        },
    ))
}

pub fn run(app: &App, path: &Path, per_event: bool, models_out: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    let input = |e: String| CliError::Input(format!("{}: {e}", path.display()));
    let file = File::open(path).map_err(|e| input(e.to_string()))?;
    let sets = read_observations_csv(file).map_err(|e| input(e.to_string()))?;
    if sets.is_empty() {
        return Err(input("no observations".into()));
    }
    let sets = if per_event {
        sets
    } else {
        vec![ObservationSet {
            event_label: "pooled".into(),
            points: sets.into_iter().flat_map(|s| s.points).collect(),
        }]
    };
    let (models, fitted): (Vec<_>, Vec<_>) = sets.iter().map(fit_one).collect::<CliResult<Vec<_>>>()?.into_iter().unzip();

    if let Some(dest) = models_out {
        let file = File::create(dest).map_err(|e| CliError::Input(format!("{}: {e}", dest.display())))?;
        write_models_csv(file, &models).map_err(|e| CliError::Input(e.to_string()))?;
    }

    match app.format(Format::Text) {
        Format::Json => write_json(
            out,
            &FitReport {
                schema_version: relink_core::SCHEMA_VERSION,
                models: fitted,
            },
        ),
        Format::Csv => {
            writeln!(out, "event,points,slope,intercept,mean_abs_error")?;
            for f in &fitted {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    csv_field(&f.event),
                    f.points,
                    f.slope,
                    f.intercept,
                    f.mean_abs_error
                )?;
            }
            Ok(())
        }
        Format::Text => {
            for f in &fitted {
                writeln!(
                    out,
                    "{}: percentage = {:.4} * age + {:.4}  ({} points, mean abs error {:.2})",
                    f.event, f.slope, f.intercept, f.points, f.mean_abs_error
                )?;
            }
            Ok(())
        }
    }
}
