use qei_core::{
    admissible_alpha_window, assemble_matrix, classify_growth, find_negativity_witness,
    lowest_eigenpair, scan_coupling, scan_cutoff, AlphaWindow, NegativityWitness,
};
use serde_json::{json, Value};

use crate::args::Format;
use crate::config::{Experiment, WITNESS_SAMPLES};
use crate::error::CliError;
use crate::output::Document;

fn csv_document(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Document {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    Document::csv(
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output"),
    )
}

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn spectrum(exp: &Experiment) -> Result<Vec<Document>, CliError> {
    let spec = exp.spec()?;
    let result = lowest_eigenpair(&assemble_matrix(&spec, &exp.grid)?)?;
    let samples = result.eigenvector_samples();
    let vector = csv_document(
        &["theta_mid", "component"],
        samples.iter().map(|&(t, c)| vec![sci(t), sci(c)]),
    );
    let summary = Document::json(&json!({
        "lambda_min": result.lowest_eigenvalue,
        "residual": result.residual,
        "vector": result.eigenvector,
        "provenance": exp.provenance(),
    }));
    Ok(match exp.format.unwrap_or(Format::Json) {
        Format::Json => vec![summary, vector],
        Format::Csv => vec![vector, summary],
    })
}

pub fn scan_coupling_cmd(exp: &Experiment) -> Result<Vec<Document>, CliError> {
    let points = scan_coupling(
        &exp.b_list,
        exp.model.mass(),
        &exp.grid,
        exp.sigma,
        &exp.poly,
    )?;
    Ok(vec![match exp.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_document(
            &["B", "lambda_min", "residual"],
            points
                .iter()
                .map(|p| vec![p.coupling.to_string(), sci(p.lambda_min), sci(p.residual)]),
        ),
        Format::Json => {
            Document::json(&json!({ "points": points, "provenance": exp.provenance() }))
        }
    }])
}

pub fn scan_cutoff_cmd(exp: &Experiment) -> Result<Vec<Document>, CliError> {
    let points = scan_cutoff(
        &exp.spec()?,
        &exp.r_list,
        exp.cell_width,
        exp.grid.quadrature_order(),
    )?;
    Ok(vec![match exp.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_document(
            &["R", "N", "lambda_min", "residual"],
            points.iter().map(|p| {
                vec![
                    p.cutoff.to_string(),
                    p.cells.to_string(),
                    sci(p.lambda_min),
                    sci(p.residual),
                ]
            }),
        ),
        Format::Json => {
            Document::json(&json!({ "points": points, "provenance": exp.provenance() }))
        }
    }])
}

pub fn classify(exp: &Experiment) -> Result<Vec<Document>, CliError> {
    if exp.format == Some(Format::Csv) {
        return Err(CliError::Config("classify writes JSON only".to_owned()));
    }
    let spec = exp.spec()?;
    let c = classify_growth(&spec, &exp.probe)?;
    let window = match admissible_alpha_window(&exp.model)? {
        AlphaWindow::Interval { lower, upper } => json!({ "lower": lower, "upper": upper }),
        AlphaWindow::TrivialOnly => json!("P = 1 only"),
    };
    let witness = match find_negativity_witness(&spec, exp.witness_range, WITNESS_SAMPLES)? {
        NegativityWitness::Present { theta_p, fp_value } => {
            json!({ "theta_p": theta_p, "fp_value": fp_value })
        }
        NegativityWitness::Absent => json!("absent"),
    };
    let samples: Vec<Value> = c.samples.iter().map(|&(t, r)| json!([t, r])).collect();
    Ok(vec![Document::json(&json!({
        "verdict": c.verdict,
        "ratio": c.ratio,
        "growth_order": c.growth_order,
        "probe_range": [c.probe_range.0, c.probe_range.1],
        "margin": c.margin,
        "samples": samples,
        "diagnostic": c.diagnostic,
        "alpha_window": window,
        "witness": witness,
        "provenance": exp.provenance(),
    }))])
}

pub fn kernel_dump(exp: &Experiment) -> Result<Vec<Document>, CliError> {
    let spec = exp.spec()?;
    let mids = exp.grid.midpoints();
    let mut values = Vec::with_capacity(mids.len() * mids.len());
    for &theta in &mids {
        for &eta in &mids {
            values.push(spec.kernel_value(theta, eta)?);
        }
    }
    Ok(vec![match exp.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let n = mids.len();
            csv_document(
                &["theta", "eta", "value"],
                (0..n * n).map(|i| vec![sci(mids[i / n]), sci(mids[i % n]), sci(values[i])]),
            )
        }
        Format::Json => Document::json(&json!({
            "midpoints": mids,
            "values": values.chunks(mids.len()).collect::<Vec<_>>(),
            "provenance": exp.provenance(),
        })),
    }])
}
