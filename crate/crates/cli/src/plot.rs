//! Long-format `series,x,y` bundle built from the CSV artifacts of a run.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::run::{ArtifactKind, RunReport, PLOT_FILE};

#[derive(Debug, thiserror::Error)]
pub enum PlotError {
    #[error("missing artifact {0}")]
    Missing(String),
    #[error("malformed artifact {path}: {detail}")]
    Malformed { path: String, detail: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `(x column, [(y column, series name)])` of each plotted artifact kind.
fn layout(kind: ArtifactKind) -> Option<(&'static str, &'static [(&'static str, &'static str)])> {
    match kind {
        ArtifactKind::GrowthCurve => Some(("k", &[("sigma", "sigma")])),
        ArtifactKind::FPrime => Some(("coordinate", &[("f_prime", "f_prime")])),
        ArtifactKind::LinearHistory => Some(("t", &[("ratio", "linear_ratio")])),
        ArtifactKind::Ledger => Some((
            "t",
            &[
                ("H", "H"),
                ("Hc", "Hc"),
                ("omega_int", "omega_int"),
                ("enstrophy", "enstrophy"),
                ("casimir", "casimir"),
                ("Mx", "Mx"),
                ("stab_norm", "stab_norm"),
            ],
        )),
        _ => None,
    }
}

/// Reads the growth curves, `F'` samples, linear histories and invariant
/// ledgers listed in `report` from `root` and writes them to
/// `root/plot_data.csv`. Series names carry an `@alpha=` suffix when the
/// run covers several alphas. Empty cells are skipped.
pub fn emit_plot_data(root: &Path, report: &RunReport) -> Result<PathBuf, PlotError> {
    let several = report.results.len() > 1;
    let out_path = root.join(PLOT_FILE);
    let mut out = BufWriter::new(File::create(&out_path)?);
    writeln!(out, "series,x,y")?;
    for art in &report.artifacts {
        let Some((xcol, ycols)) = layout(art.kind) else { continue };
        let path = root.join(&art.path);
        if !path.is_file() {
            return Err(PlotError::Missing(art.path.clone()));
        }
        let malformed = |detail: String| PlotError::Malformed { path: art.path.clone(), detail };
        let mut rdr = csv::Reader::from_path(&path).map_err(|e| malformed(e.to_string()))?;
        let header = rdr.headers().map_err(|e| malformed(e.to_string()))?.clone();
        let col = |name: &str| header.iter().position(|h| h == name).ok_or_else(|| malformed(format!("no column {name}")));
        let xi = col(xcol)?;
        let cols = ycols.iter().map(|&(c, s)| Ok((col(c)?, s))).collect::<Result<Vec<_>, PlotError>>()?;
        let suffix = match art.alpha {
            Some(a) if several => format!("@alpha={a}"),
            _ => String::new(),
        };
        let records = rdr.records().collect::<Result<Vec<_>, _>>().map_err(|e| malformed(e.to_string()))?;
        for (yi, series) in cols {
            for rec in &records {
                let (x, y) = (&rec[xi], &rec[yi]);
                if !y.is_empty() {
                    writeln!(out, "{series}{suffix},{x},{y}")?;
                }
            }
        }
    }
    out.flush()?;
    Ok(out_path)
}
