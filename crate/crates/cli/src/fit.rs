//! Per-depth collapse fits and the `p*` against `1/d` regression.

use std::collections::BTreeMap;
use std::io::Write;

use qpl_core::collapse::{
    crossing_estimate, fit_collapse_with, regress_pstar_vs_inverse_depth, DataPoint, FitError,
    FitOptions, FitResult, RegressionResult,
};
use qpl_core::haar::NoiseFamily;
use serde::{Deserialize, Serialize};

use crate::config::Ensemble;
use crate::error::{CliError, Result};
use crate::record::ResultRecord;

#[derive(Clone, Debug, Default)]
pub struct FitRequest {
    /// Restrict to one depth.
    pub depth: Option<usize>,
    pub regress: bool,
    /// Window half-width; default is a fixed fraction of the crossing.
    pub window: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthFit {
    pub d: usize,
    /// Median pairwise crossing, used as the starting `p*`.
    pub crossing: f64,
    pub fit: FitResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub ensemble: Ensemble,
    pub noise_family: NoiseFamily,
    pub depths: Vec<DepthFit>,
    pub regression: Option<RegressionResult>,
}

/// Records grouped by depth, after checking they come from one ensemble and
/// noise family.
pub fn by_depth(records: &[ResultRecord]) -> Result<(Ensemble, NoiseFamily, BTreeMap<usize, Vec<DataPoint>>)> {
    let first = records
        .first()
        .ok_or_else(|| CliError::Fit("no records to fit".into()))?;
    if let Some(r) = records
        .iter()
        .find(|r| r.ensemble != first.ensemble || r.noise_family != first.noise_family)
    {
        return Err(CliError::Config(format!(
            "results mix {}/{} with {}/{}; fit one ensemble and noise family at a time",
            first.ensemble, first.noise_family, r.ensemble, r.noise_family
        )));
    }
    let mut groups: BTreeMap<usize, Vec<DataPoint>> = BTreeMap::new();
    for r in records {
        groups.entry(r.d).or_default().push(DataPoint {
            n: r.n,
            p: r.p,
            y: r.value,
            sigma: r.stderr,
        });
    }
    Ok((first.ensemble, first.noise_family, groups))
}

/// Crossing estimate followed by the collapse fit for one depth.
pub fn fit_depth(d: usize, points: &[DataPoint], window: Option<f64>) -> Result<DepthFit, FitError> {
    let crossing = crossing_estimate(points)?;
    let opts = FitOptions {
        window_halfwidth: window,
        ..FitOptions::default()
    };
    let fit = fit_collapse_with(points, crossing, &opts)?;
    Ok(DepthFit { d, crossing, fit })
}

fn sizes(points: &[DataPoint]) -> usize {
    let mut ns: Vec<usize> = points.iter().map(|p| p.n).collect();
    ns.sort_unstable();
    ns.dedup();
    ns.len()
}

pub fn fit_records(records: &[ResultRecord], req: &FitRequest) -> Result<FitReport> {
    let (ensemble, noise_family, mut groups) = by_depth(records)?;
    if let Some(d) = req.depth {
        let pts = groups
            .remove(&d)
            .ok_or_else(|| CliError::Fit(format!("no records at depth {d}")))?;
        groups = BTreeMap::from([(d, pts)]);
    }
    if req.regress && groups.len() < 3 {
        return Err(FitError::TooFewDepths { got: groups.len() }.into());
    }
    let mut depths = Vec::new();
    for (d, pts) in &groups {
        let got = sizes(pts);
        if got < 3 {
            return Err(CliError::Fit(format!("depth {d}: need at least 3 system sizes, got {got}")));
        }
        let f = fit_depth(*d, pts, req.window).map_err(|e| CliError::Fit(format!("depth {d}: {e}")))?;
        depths.push(f);
    }
    let regression = if req.regress {
        let fits: Vec<(usize, FitResult)> = depths.iter().map(|f| (f.d, f.fit.clone())).collect();
        Some(regress_pstar_vs_inverse_depth(&fits)?)
    } else {
        None
    };
    Ok(FitReport {
        ensemble,
        noise_family,
        depths,
        regression,
    })
}

/// Tidy collapse table: one row per point inside each depth's window.
pub fn write_collapse<W: Write>(out: W, records: &[ResultRecord], report: &FitReport) -> Result<()> {
    let (_, _, groups) = by_depth(records)?;
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| CliError::Fit(format!("writing collapse table: {e}"));
    w.write_record(["d", "n", "p", "x", "y", "model"]).map_err(err)?;
    for f in &report.depths {
        let inside = groups[&f.d]
            .iter()
            .filter(|pt| pt.p >= f.fit.window.0 && pt.p <= f.fit.window.1);
        for pt in inside {
            let x = f.fit.scaling_variable(pt.n, pt.p);
            w.write_record([
                f.d.to_string(),
                pt.n.to_string(),
                pt.p.to_string(),
                format!("{x:.16e}"),
                format!("{:.16e}", pt.y),
                format!("{:.16e}", f.fit.model(x)),
            ])
            .map_err(err)?;
        }
    }
    w.flush().map_err(|e| CliError::Fit(format!("writing collapse table: {e}")))?;
    Ok(())
}
