//! Machine-readable reports. Every CSV row and JSON object carries
//! `schema = 1`; numbers use Rust's shortest round-trip formatting so a
//! fixed configuration always produces identical bytes.

use std::io::Write;

use hdl_core::spectrum::{higgs_scalars, nonrel_level, solve_level, SpectrumError};
use hdl_core::symalg::{Condition, ConditionReport};
use serde::Serialize;

use crate::grid::{EigenSpace, GridSpec};
use crate::higgs::LevelReport;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format '{s}' (expected csv or json)")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Writes flat rows as CSV (header from the field names) or as a JSON array.
pub fn write_rows<T: Serialize, W: Write>(rows: &[T], format: Format, mut w: W) -> Result<(), ReportError> {
    match format {
        Format::Csv => {
            let mut cw = csv::Writer::from_writer(w);
            for r in rows {
                cw.serialize(r)?;
            }
            cw.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

pub fn write_json<T: Serialize, W: Write>(value: &T, mut w: W) -> Result<(), ReportError> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub schema: u32,
    pub N: u32,
    pub lambda: u8,
    pub E: f64,
    pub degeneracy: u32,
    pub m_bar: f64,
    pub m_under: f64,
    pub C: f64,
    pub c3: f64,
    pub c1: f64,
    pub c0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub E_nonrel: Option<f64>,
}

/// Analytic levels `N = 0..=n_max`.
pub fn spectrum_table(k: f64, n_max: u32, tol: f64, nonrel: bool) -> Result<Vec<SpectrumRow>, SpectrumError> {
    (0..=n_max)
        .map(|n| {
            let lv = solve_level(n, k, tol)?;
            let s = higgs_scalars(lv.e, k)?;
            Ok(SpectrumRow {
                schema: SCHEMA,
                N: n,
                lambda: lv.lambda,
                E: lv.e,
                degeneracy: lv.d,
                m_bar: s.m_bar,
                m_under: s.m_under(lv.lambda),
                C: s.casimir,
                c3: s.c3,
                c1: s.c1,
                c0: s.c0,
                E_nonrel: nonrel.then(|| nonrel_level(n, k)),
            })
        })
        .collect()
}

#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenLevel {
    pub E: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenReport {
    pub schema: u32,
    pub k: f64,
    pub grid: GridSpec,
    pub levels: Vec<EigenLevel>,
}

impl EigenReport {
    pub fn new(k: f64, grid: GridSpec, spaces: &[EigenSpace]) -> Self {
        EigenReport {
            schema: SCHEMA,
            k,
            grid,
            levels: spaces
                .iter()
                .map(|s| EigenLevel {
                    E: s.energy,
                    multiplicity: s.multiplicity,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionJson {
    pub condition: &'static str,
    pub statement: &'static str,
    pub passed: bool,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorJson {
    pub schema: u32,
    pub name: String,
    pub verdict: String,
    pub conditions: Vec<ConditionJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_adjoint: Option<[bool; 3]>,
}

impl From<&ConditionReport> for GeneratorJson {
    fn from(r: &ConditionReport) -> Self {
        GeneratorJson {
            schema: SCHEMA,
            name: r.name.clone(),
            verdict: r.verdict(),
            conditions: Condition::ALL
                .iter()
                .map(|&c| {
                    let o = r.outcome(c);
                    ConditionJson {
                        condition: c.label(),
                        statement: c.statement(),
                        passed: o.passed,
                        residual: o.residual.to_string(),
                    }
                })
                .collect(),
            self_adjoint: r.hermiticity.as_ref().map(|h| [h.q12, h.q22, h.q11]),
        }
    }
}

#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConservationRow {
    pub schema: u32,
    pub operator: String,
    pub k: f64,
    pub M1: usize,
    pub M2: usize,
    pub full: Option<f64>,
    pub projected: f64,
}

#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HiggsRow {
    pub schema: u32,
    pub k: f64,
    pub M1: usize,
    pub M2: usize,
    pub N: u32,
    pub E_analytic: f64,
    pub E_grid: f64,
    pub d: usize,
    pub lambda: u8,
    pub ladder: f64,
    pub cubic: f64,
    pub casimir: f64,
    pub weights: f64,
    pub leakage: f64,
}

impl HiggsRow {
    pub fn new(k: f64, grid: &GridSpec, r: &LevelReport) -> Self {
        HiggsRow {
            schema: SCHEMA,
            k,
            M1: grid.m1,
            M2: grid.m2,
            N: r.n,
            E_analytic: r.e_analytic,
            E_grid: r.e_grid,
            d: r.d,
            lambda: r.weight_detail.lambda,
            ladder: r.residuals.ladder,
            cubic: r.residuals.cubic,
            casimir: r.residuals.casimir,
            weights: r.residuals.weights,
            leakage: r.leakage,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HiggsJson<'a> {
    pub schema: u32,
    pub k: f64,
    pub grid: GridSpec,
    pub levels: &'a [LevelReport],
}

#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergeRow {
    pub schema: u32,
    pub quantity: String,
    pub level: usize,
    pub M: usize,
    pub error: f64,
    /// Least-squares order over all grids of this series.
    pub order: Option<f64>,
}

#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitRow {
    pub schema: u32,
    pub N: u32,
    pub k_small: f64,
    pub E_k_small: f64,
    /// Root of `√((E+1)/2)(E−1) = N + 2`.
    pub E_k0: f64,
    pub difference: f64,
    /// `N + 3/2 + √(k + ¼)` at the configured `k`.
    pub E_nonrel: f64,
}
