//! Files written by a run: field and diagnostics tables, the echoed
//! configuration and a JSON manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::diagnostics::Weights;
use crate::error::{GlimmError, Result};
use crate::run::{RunResult, RunSummary};
use crate::sampler::SamplerKind;

fn csv_err(e: csv::Error) -> GlimmError {
    GlimmError::Io(e.to_string())
}

/// CSV text of `rows` with a header line, written even when `rows` is
/// empty. `None` fields are left empty; floats use the shortest decimal
/// form that reads back to the same value.
pub fn csv_string<T: Serialize + Default>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.serialize(T::default()).map_err(csv_err)?;
    }
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| GlimmError::Io(e.to_string()))?;
    let mut text = String::from_utf8(bytes).expect("csv output is utf-8");
    if rows.is_empty() {
        let end = text.find('\n').map_or(text.len(), |i| i + 1);
        text.truncate(end);
    }
    Ok(text)
}

pub fn write_csv<T: Serialize + Default>(path: &Path, rows: &[T]) -> Result<()> {
    fs::write(path, csv_string(rows)?)?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest<'a> {
    pub version: &'static str,
    pub mode: crate::config::Mode,
    pub seed: u64,
    pub sampler: SamplerKind,
    pub h: f64,
    pub l: f64,
    pub cells: usize,
    pub weights: &'a Weights,
    pub files: Vec<String>,
    pub summary: &'a RunSummary,
}

/// Writes `field.csv`, `diagnostics.csv`, `config_echo.toml` and
/// `manifest.json` into `dir`, returning their paths.
pub fn write_run(dir: &Path, cfg: &RunConfig, result: &RunResult) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let field = dir.join("field.csv");
    let diag = dir.join("diagnostics.csv");
    let echo = dir.join("config_echo.toml");
    let manifest = dir.join("manifest.json");
    write_csv(&field, &result.field)?;
    write_csv(&diag, &result.rows)?;

    let mut filled = cfg.clone();
    filled.diagnostics.k0 = Some(result.summary.weights.k);
    filled.diagnostics.k_star = result.summary.weights.k_star;
    fs::write(&echo, filled.echo())?;

    let mesh = cfg
        .mesh
        .as_ref()
        .ok_or_else(|| GlimmError::config("mesh", "required for this mode"))?;
    let m = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        mode: cfg.mode,
        seed: cfg.seed,
        sampler: cfg.sampler.kind,
        h: mesh.h.unwrap_or(f64::NAN),
        l: mesh.l,
        cells: mesh.cells,
        weights: &result.summary.weights,
        files: ["field.csv", "diagnostics.csv", "config_echo.toml"]
            .map(String::from)
            .to_vec(),
        summary: &result.summary,
    };
    let text = serde_json::to_string_pretty(&m).map_err(|e| GlimmError::Io(e.to_string()))?;
    fs::write(&manifest, text)?;
    Ok(vec![field, diag, echo, manifest])
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::run::{DiagnosticsRow, FieldRow};

    #[test]
    fn empty_table_is_header_only() {
        let t = csv_string::<DiagnosticsRow>(&[]).unwrap();
        assert_eq!(t.lines().count(), 1);
        assert!(t.starts_with("k,x,theta,l1,l2,l3,l4,l5,l,q,f,"));
        let f = csv_string::<FieldRow>(&[]).unwrap();
        assert_eq!(f, "k,j,x,y,u,v,p,rho,Z,T,c,Mach,S\n");
    }

    #[test]
    fn floats_round_trip() {
        let row = FieldRow {
            u: 0.1 + 0.2,
            p: 1.0 / 3.0,
            rho: 1e-17,
            ..Default::default()
        };
        let t = csv_string(&[row.clone()]).unwrap();
        let mut rd = csv::Reader::from_reader(t.as_bytes());
        let rec = rd.records().next().unwrap().unwrap();
        assert_eq!(rec[4].parse::<f64>().unwrap(), row.u);
        assert_eq!(rec[6].parse::<f64>().unwrap(), row.p);
        assert_eq!(rec[7].parse::<f64>().unwrap(), row.rho);
    }
}
