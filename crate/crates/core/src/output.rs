//! CSV and JSON emission.
//!
//! Floats are written in their shortest round-trip form, so every value
//! parses back to the identical `f64`.

use std::io::{self, Write};

use serde::Serialize;

use crate::metrics::ChannelReport;
use crate::sweep::{MonteCarloResult, NoiseSet, Summary};

/// Header of every per-configuration table.
pub const CSV_HEADER: &str =
    "d_theta1,d_psi1,d_phi1,d_theta2,d_psi2,d_phi2,d_theta3,d_psi3,d_phi3,p_main,p_anc,avg_fidelity";

/// Header of the Monte Carlo summary table.
pub const SUMMARY_CSV_HEADER: &str = "statistic,p_anc,avg_fidelity";

/// Shortest representation that parses back to the same value.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn csv_row(report: &ChannelReport) -> String {
    let mut cols: Vec<String> = NoiseSet(report.noise).values().into_iter().map(fmt_f64).collect();
    cols.push(fmt_f64(report.p_main));
    cols.push(fmt_f64(report.p_anc));
    cols.push(report.avg_fidelity.map(fmt_f64).unwrap_or_default());
    cols.join(",")
}

pub fn write_csv<W: Write>(mut out: W, rows: &[ChannelReport]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", csv_row(r))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct NoiseJson {
    d_theta1: f64,
    d_psi1: f64,
    d_phi1: f64,
    d_theta2: f64,
    d_psi2: f64,
    d_phi2: f64,
    d_theta3: f64,
    d_psi3: f64,
    d_phi3: f64,
}

impl From<&NoiseSet> for NoiseJson {
    fn from(n: &NoiseSet) -> Self {
        let v = n.values();
        NoiseJson {
            d_theta1: v[0],
            d_psi1: v[1],
            d_phi1: v[2],
            d_theta2: v[3],
            d_psi2: v[4],
            d_phi2: v[5],
            d_theta3: v[6],
            d_psi3: v[7],
            d_phi3: v[8],
        }
    }
}

#[derive(Serialize)]
struct ReportJson {
    noise: NoiseJson,
    hadamard_mode: &'static str,
    p_main: f64,
    p_anc: f64,
    avg_fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    state_fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conditional_fidelity: Option<f64>,
    kraus_cross_residual: f64,
    seed: u64,
    samples: usize,
}

impl From<&ChannelReport> for ReportJson {
    fn from(r: &ChannelReport) -> Self {
        ReportJson {
            noise: (&NoiseSet(r.noise)).into(),
            hadamard_mode: r.hadamard_mode.as_str(),
            p_main: r.p_main,
            p_anc: r.p_anc,
            avg_fidelity: r.avg_fidelity,
            state_fidelity: r.state_fidelity,
            conditional_fidelity: r.conditional_fidelity,
            kraus_cross_residual: r.kraus_cross_residual,
            seed: r.seed,
            samples: r.samples,
        }
    }
}

pub fn report_json(report: &ChannelReport) -> String {
    serde_json::to_string_pretty(&ReportJson::from(report)).expect("report serialises")
}

pub fn reports_json(rows: &[ChannelReport]) -> String {
    let v: Vec<ReportJson> = rows.iter().map(ReportJson::from).collect();
    serde_json::to_string_pretty(&v).expect("reports serialise")
}

#[derive(Serialize)]
struct SummaryJson {
    mean: f64,
    min: f64,
    max: f64,
    p05: f64,
    p50: f64,
    p95: f64,
}

impl From<&Summary> for SummaryJson {
    fn from(s: &Summary) -> Self {
        SummaryJson {
            mean: s.mean,
            min: s.min,
            max: s.max,
            p05: s.p05,
            p50: s.p50,
            p95: s.p95,
        }
    }
}

#[derive(Serialize)]
struct MonteCarloJson {
    samples: usize,
    seed: u64,
    sigma: NoiseJson,
    hadamard_mode: &'static str,
    fidelity_samples: usize,
    p_anc: SummaryJson,
    avg_fidelity: SummaryJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_sample: Option<Vec<ReportJson>>,
}

/// Context echoed alongside a Monte Carlo summary.
pub struct MonteCarloEcho<'a> {
    pub sigma: &'a NoiseSet,
    pub hadamard_mode: crate::levels::HadamardMode,
    pub fidelity_samples: usize,
}

pub fn montecarlo_json(result: &MonteCarloResult, echo: &MonteCarloEcho<'_>) -> String {
    let v = MonteCarloJson {
        samples: result.samples,
        seed: result.seed,
        sigma: echo.sigma.into(),
        hadamard_mode: echo.hadamard_mode.as_str(),
        fidelity_samples: echo.fidelity_samples,
        p_anc: (&result.p_anc).into(),
        avg_fidelity: (&result.avg_fidelity).into(),
        per_sample: result
            .per_sample
            .as_ref()
            .map(|rows| rows.iter().map(ReportJson::from).collect()),
    };
    serde_json::to_string_pretty(&v).expect("summary serialises")
}

/// Summary table: one row per statistic.
pub fn write_summary_csv<W: Write>(mut out: W, result: &MonteCarloResult) -> io::Result<()> {
    writeln!(out, "{SUMMARY_CSV_HEADER}")?;
    let (a, f) = (&result.p_anc, &result.avg_fidelity);
    for (name, x, y) in [
        ("mean", a.mean, f.mean),
        ("min", a.min, f.min),
        ("max", a.max, f.max),
        ("p05", a.p05, f.p05),
        ("p50", a.p50, f.p50),
        ("p95", a.p95, f.p95),
    ] {
        writeln!(out, "{name},{},{}", fmt_f64(x), fmt_f64(y))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{run_single, RunConfig};
    use proptest::prelude::*;

    #[test]
    fn csv_shape() {
        let r = run_single(&RunConfig { samples: 4, ..RunConfig::default() }).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &[r.clone(), r]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1].split(',').count(), 12);
    }

    #[test]
    fn json_fields() {
        let r = run_single(&RunConfig { samples: 4, ..RunConfig::default() }).unwrap();
        let v: serde_json::Value = serde_json::from_str(&report_json(&r)).unwrap();
        for key in ["noise", "hadamard_mode", "p_main", "p_anc", "avg_fidelity", "kraus_cross_residual", "seed", "samples"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v.get("state_fidelity").is_none());
        assert_eq!(v["noise"].as_object().unwrap().len(), 9);
        assert_eq!(v["hadamard_mode"], "paper");
    }

    proptest! {
        #[test]
        fn floats_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
            prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
            let json = serde_json::to_string(&x).unwrap();
            prop_assert_eq!(json.parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }
}
