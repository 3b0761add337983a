//! Long-format CSV tables for plotting: curves, collapses and `p*` against
//! `1/d`.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use qpl_core::collapse::{regress_pstar_vs_inverse_depth, FitResult};

use crate::error::{CliError, Result};
use crate::fit::{by_depth, fit_depth, write_collapse, FitReport};
use crate::record::ResultRecord;

pub const CURVES_FILE: &str = "curves.csv";
pub const COLLAPSE_FILE: &str = "collapse.csv";
pub const PSTAR_FILE: &str = "pstar_inverse_depth.csv";

#[derive(Debug)]
pub struct PlotData {
    pub files: Vec<PathBuf>,
    /// Depths whose fit failed, with the reason; they are left out of the
    /// collapse and `p*` tables.
    pub skipped: Vec<(usize, String)>,
}

fn create(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let f = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::Writer::from_writer(BufWriter::new(f)))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::records(path, e.to_string())
}

pub fn emit_plotdata(records: &[ResultRecord], out_dir: &Path, window: Option<f64>) -> Result<PlotData> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let (ensemble, noise_family, groups) = by_depth(records)?;

    let curves = out_dir.join(CURVES_FILE);
    let mut w = create(&curves)?;
    w.write_record(["ensemble", "noise_family", "d", "n", "k", "p", "quantity", "value", "stderr"])
        .map_err(csv_err(&curves))?;
    let mut sorted: Vec<&ResultRecord> = records.iter().collect();
    sorted.sort_by(|a, b| (a.d, a.n).cmp(&(b.d, b.n)).then(a.p.total_cmp(&b.p)));
    for r in sorted {
        w.write_record([
            r.ensemble.to_string(),
            r.noise_family.to_string(),
            r.d.to_string(),
            r.n.to_string(),
            r.k.to_string(),
            r.p.to_string(),
            r.quantity.to_string(),
            format!("{:.16e}", r.value),
            format!("{:.16e}", r.stderr),
        ])
        .map_err(csv_err(&curves))?;
    }
    w.flush().map_err(|e| CliError::io(&curves, e))?;

    let mut depths = Vec::new();
    let mut skipped = Vec::new();
    for (d, pts) in &groups {
        match fit_depth(*d, pts, window) {
            Ok(f) => depths.push(f),
            Err(e) => skipped.push((*d, e.to_string())),
        }
    }
    let report = FitReport {
        ensemble,
        noise_family,
        depths,
        regression: None,
    };

    let collapse = out_dir.join(COLLAPSE_FILE);
    let f = File::create(&collapse).map_err(|e| CliError::io(&collapse, e))?;
    write_collapse(BufWriter::new(f), records, &report)?;

    let fits: Vec<(usize, FitResult)> = report.depths.iter().map(|f| (f.d, f.fit.clone())).collect();
    let line = regress_pstar_vs_inverse_depth(&fits).ok();
    let pstar = out_dir.join(PSTAR_FILE);
    let mut w = create(&pstar)?;
    w.write_record(["d", "inv_d", "crossing", "p_star", "lambda", "p_star_line"])
        .map_err(csv_err(&pstar))?;
    for f in &report.depths {
        let inv = 1.0 / f.d as f64;
        let on_line = line.as_ref().map_or(String::new(), |l| format!("{:.16e}", l.slope * inv + l.intercept));
        w.write_record([
            f.d.to_string(),
            format!("{inv:.16e}"),
            format!("{:.16e}", f.crossing),
            format!("{:.16e}", f.fit.p_star),
            format!("{:.16e}", f.fit.lambda),
            on_line,
        ])
        .map_err(csv_err(&pstar))?;
    }
    w.flush().map_err(|e| CliError::io(&pstar, e))?;

    Ok(PlotData {
        files: vec![curves, collapse, pstar],
        skipped,
    })
}
