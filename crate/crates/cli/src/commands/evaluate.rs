use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use relink_core::eval::{read_dataset, run_evaluation, summarize, write_cdf_csv, write_records_csv, EvaluationSummary, Skipped};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::app::{write_json, App};
use crate::cache::Kind;
use crate::error::{CliError, CliResult};
use crate::Format;

#[derive(Debug, Serialize)]
struct SummaryFile<'a> {
    #[serde(flatten)]
    summary: &'a EvaluationSummary,
    skipped_targets: &'a [Skipped],
}

pub fn run(app: &App, dataset_path: &Path, out_dir: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    let input = |e: String| CliError::Input(format!("{}: {e}", dataset_path.display()));
    let text = fs::read_to_string(dataset_path).map_err(|e| input(e.to_string()))?;
    let dataset = read_dataset(&text).map_err(|e| input(e.to_string()))?;
    if dataset.is_empty() {
        return Err(input("dataset lists no URIs".into()));
    }

    let cache = app.cache()?;
    let fetcher = app.fetcher()?;
    let providers = app.providers(&fetcher)?;
    let result = run_evaluation(&dataset, &app.pipeline(&providers, &fetcher), app.config.min_posts);
    fetcher.ensure_offline_clean()?;
    let summary = summarize(&result, app.config.threshold, app.config.eval_field);

    let dir = match out_dir {
        Some(d) => d.to_path_buf(),
        None => {
            let digest = hex::encode(Sha256::digest(text.as_bytes()));
            cache.dir(Kind::Reports).join(format!("eval-{}", &digest[..16]))
        }
    };
    fs::create_dir_all(&dir)?;
    let file = SummaryFile {
        summary: &summary,
        skipped_targets: &result.skipped,
    };
    let json = serde_json::to_string_pretty(&file).map_err(|e| CliError::Input(e.to_string()))?;
    fs::write(dir.join("summary.json"), json + "\n")?;
    let csv_err = |e: relink_core::eval::EvalError| CliError::Output(std::io::Error::other(e.to_string()));
    write_records_csv(create(&dir, "records.csv")?, &result.records).map_err(csv_err)?;
    write_cdf_csv(create(&dir, "cdf.csv")?, &summary.similarity_cdf).map_err(csv_err)?;
    log::info!("evaluation outputs in {}", dir.display());

    match app.format(Format::Json) {
        Format::Json => write_json(out, &file),
        Format::Csv => {
            write_records_csv(&mut *out, &result.records).map_err(csv_err)?;
            Ok(())
        }
        Format::Text => {
            writeln!(out, "evaluated: {} ({} skipped, {} below the post minimum)", summary.n, summary.skipped, summary.skipped_below_min_posts)?;
            writeln!(out, "MRR: {:.4}", summary.mrr)?;
            writeln!(
                out,
                "fraction with {} >= {}: {:.4}",
                summary.field.name(),
                summary.threshold,
                summary.fraction_at_threshold
            )?;
            writeln!(out, "outputs: {}", dir.display())?;
            Ok(())
        }
    }
}

fn create(dir: &Path, name: &str) -> CliResult<File> {
    let path: PathBuf = dir.join(name);
    Ok(File::create(path)?)
}
