//! Batch front-end: parameter sweeps, MGF tables and Monte-Carlo validation
//! reports, emitted as CSV.
//!
//! CSV conventions: comma-delimited, LF line endings, a `#` comment line
//! stating units, then a header row. Floats are printed with Rust's
//! round-trip (lossless) formatting, so identical config + seed gives
//! byte-identical output.

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Deserialize;

use crate::capacity::{average_secrecy_capacity, QuadratureConfig};
use crate::channel::SystemParams;
use crate::error::{Error, Result};
use crate::mgf::{self, PsiArgs};
use crate::montecarlo::{
    self, estimate_capacities, estimate_mgf, CapacityEstimates,
};

const UNITS_COMMENT: &str = "# powers in watts, distances in meters, capacities in bits/s/Hz";

/// The parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    K,
    RD,
    PS,
    RMax,
    RInt,
    N0,
    Beta,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::K => "k",
            SweepVariable::RD => "r_d",
            SweepVariable::PS => "p_s",
            SweepVariable::RMax => "r_max",
            SweepVariable::RInt => "r_int",
            SweepVariable::N0 => "n_0",
            SweepVariable::Beta => "beta",
        }
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "k" => Ok(SweepVariable::K),
            "r_d" => Ok(SweepVariable::RD),
            "p_s" => Ok(SweepVariable::PS),
            "r_max" => Ok(SweepVariable::RMax),
            "r_int" => Ok(SweepVariable::RInt),
            "n_0" => Ok(SweepVariable::N0),
            "beta" => Ok(SweepVariable::Beta),
            other => Err(Error::InvalidConfig(format!(
                "unknown sweep variable {other:?} (expected k, r_d, p_s, r_max, r_int, n_0 or beta)"
            ))),
        }
    }
}

/// A parameter sweep: which variable, over which values, with what fixed
/// parameters, and whether to attach Monte-Carlo cross-checks per point.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    pub fixed: SystemParams,
    pub mc_check: bool,
    pub mc_samples: u64,
    pub seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.fixed.validate()?;
        if self.values.is_empty() {
            return Err(Error::InvalidConfig("sweep values must be non-empty".into()));
        }
        for pair in self.values.windows(2) {
            if !(pair[1] > pair[0]) {
                return Err(Error::InvalidConfig(format!(
                    "sweep values must be strictly increasing, got {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        if self.variable == SweepVariable::K {
            for &v in &self.values {
                if v < 0.0 || v.fract() != 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "k sweep values must be nonnegative integers, got {v}"
                    )));
                }
            }
        }
        if self.mc_check && self.mc_samples < 1 {
            return Err(Error::InvalidConfig("mc_samples must be >= 1".into()));
        }
        Ok(())
    }

    fn point(&self, value: f64) -> Result<SystemParams> {
        let mut p = self.fixed;
        match self.variable {
            SweepVariable::K => p.k = value as usize,
            SweepVariable::RD => p.r_d = value,
            SweepVariable::PS => p.p_s = value,
            SweepVariable::RMax => p.r_max = value,
            SweepVariable::RInt => p.r_int = value,
            SweepVariable::N0 => p.n_0 = value,
            SweepVariable::Beta => p.beta = value,
        }
        p.validate()?;
        Ok(p)
    }
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn fmt_value(variable: SweepVariable, value: f64) -> String {
    if variable == SweepVariable::K {
        format!("{}", value as u64)
    } else {
        fmt(value)
    }
}

/// Runs a sweep and writes one CSV row per value.
pub fn cmd_sweep(spec: &SweepSpec, out: &mut dyn Write) -> Result<()> {
    spec.validate()?;
    let cfg = QuadratureConfig::default();

    struct Row {
        value: f64,
        c_d: f64,
        c_e: f64,
        c_s: f64,
        mc: Option<CapacityEstimates>,
    }

    let rows: Vec<Row> = spec
        .values
        .par_iter()
        .enumerate()
        .map(|(i, &value)| -> Result<Row> {
            let params = spec.point(value)?;
            let r = average_secrecy_capacity(&params, &cfg).map_err(|e| match e {
                Error::QuadratureDivergence(msg) => Error::QuadratureDivergence(format!(
                    "at {}={}: {msg}",
                    spec.variable.name(),
                    value
                )),
                other => other,
            })?;
            let mc = if spec.mc_check {
                Some(estimate_capacities(
                    &params,
                    spec.mc_samples,
                    spec.seed.wrapping_add(i as u64),
                )?)
            } else {
                None
            };
            Ok(Row {
                value,
                c_d: r.c_d,
                c_e: r.c_e,
                c_s: r.c_s,
                mc,
            })
        })
        .collect::<Result<Vec<Row>>>()?;

    writeln!(out, "{UNITS_COMMENT}")?;
    writeln!(out, "variable,value,c_d,c_e,c_s,mc_c_s_diff,mc_c_s_max,mc_stderr")?;
    for row in rows {
        let (mc_diff, mc_max, mc_se) = match &row.mc {
            Some(est) => (
                fmt(est.c_s_diff.mean),
                fmt(est.c_s_max.mean),
                fmt(est.c_s_diff.std_error),
            ),
            None => (String::new(), String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            spec.variable.name(),
            fmt_value(spec.variable, row.value),
            fmt(row.c_d),
            fmt(row.c_e),
            fmt(row.c_s),
            mc_diff,
            mc_max,
            mc_se
        )?;
    }
    Ok(())
}

/// Which MGF a table enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgfTableKind {
    Psi,
    Interference,
    Main,
    Eavesdropper,
}

impl FromStr for MgfTableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psi" => Ok(MgfTableKind::Psi),
            "interference" => Ok(MgfTableKind::Interference),
            "main" => Ok(MgfTableKind::Main),
            "eavesdropper" => Ok(MgfTableKind::Eavesdropper),
            other => Err(Error::InvalidConfig(format!(
                "unknown mgf table kind {other:?} (expected psi, interference, main or eavesdropper)"
            ))),
        }
    }
}

/// Tabulates one MGF over a z-grid as `z,value,method` rows.
pub fn cmd_mgf_table(
    which: MgfTableKind,
    z_values: &[f64],
    params: &SystemParams,
    out: &mut dyn Write,
) -> Result<()> {
    params.validate()?;
    for &z in z_values {
        if !(z >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "z values must be nonnegative, got {z}"
            )));
        }
    }
    writeln!(out, "{UNITS_COMMENT}")?;
    writeln!(out, "z,value,method")?;
    for &z in z_values {
        let m = match which {
            MgfTableKind::Psi => mgf::mgf_psi(PsiArgs::new(z, params.r_int, params.beta)?)?,
            MgfTableKind::Interference => mgf::mgf_interference(z, params, params.r_int)?,
            MgfTableKind::Main => mgf::mgf_main_link(z, params.p_s, params.r_d, params.beta)?,
            MgfTableKind::Eavesdropper => {
                mgf::mgf_eav_link(z, params.p_s, params.r_max, params.beta)?
            }
        };
        writeln!(out, "{},{},{}", fmt(z), fmt(m.value), m.method)?;
    }
    Ok(())
}

/// Result of a validation run; `passed` decides the process exit code.
#[derive(Debug, Clone, Copy)]
pub struct ValidationReport {
    pub max_sigma: f64,
    pub passed: bool,
}

/// Compares the analytic pipeline against the Monte-Carlo oracle and writes
/// one CSV row per checked quantity. A check fails past 4 standard errors.
pub fn cmd_validate(
    params: &SystemParams,
    n: u64,
    seed: u64,
    out: &mut dyn Write,
) -> Result<ValidationReport> {
    params.validate()?;
    if n < 1_000 {
        return Err(Error::InvalidConfig(format!(
            "validate requires at least 10^3 samples, got {n}"
        )));
    }

    struct Check {
        name: String,
        analytic: f64,
        mc_mean: f64,
        mc_stderr: f64,
    }

    let mut checks = Vec::new();
    let z_grid = [0.05, 0.2, 1.0];
    for &z in &z_grid {
        let analytic = mgf::mgf_interference(z, params, params.r_int)?.value;
        let est = estimate_mgf(
            |d| montecarlo::interference_weight_d(d, params),
            z,
            params,
            n,
            seed,
        )?;
        checks.push(Check {
            name: format!("mgf_interference_z{z}"),
            analytic,
            mc_mean: est.mean,
            mc_stderr: est.std_error,
        });
    }
    for &z in &z_grid {
        let analytic = mgf::mgf_main_link(z, params.p_s, params.r_d, params.beta)?.value;
        let est = estimate_mgf(|d| montecarlo::main_link_weight(d, params), z, params, n, seed)?;
        checks.push(Check {
            name: format!("mgf_main_z{z}"),
            analytic,
            mc_mean: est.mean,
            mc_stderr: est.std_error,
        });
    }
    for &z in &z_grid {
        let analytic = mgf::mgf_eav_link(z, params.p_s, params.r_max, params.beta)?.value;
        let est = estimate_mgf(|d| montecarlo::eav_link_weight(d, params), z, params, n, seed)?;
        checks.push(Check {
            name: format!("mgf_eavesdropper_z{z}"),
            analytic,
            mc_mean: est.mean,
            mc_stderr: est.std_error,
        });
    }

    let analytic = average_secrecy_capacity(params, &QuadratureConfig::default())?;
    let mc = estimate_capacities(params, n, seed)?;
    checks.push(Check {
        name: "c_d".into(),
        analytic: analytic.c_d,
        mc_mean: mc.c_d.mean,
        mc_stderr: mc.c_d.std_error,
    });
    checks.push(Check {
        name: "c_e".into(),
        analytic: analytic.c_e,
        mc_mean: mc.c_e.mean,
        mc_stderr: mc.c_e.std_error,
    });
    checks.push(Check {
        name: "c_s_diff".into(),
        analytic: analytic.c_s,
        mc_mean: mc.c_s_diff.mean,
        mc_stderr: mc.c_s_diff.std_error,
    });

    writeln!(out, "{UNITS_COMMENT}")?;
    writeln!(out, "quantity,analytic,mc_mean,mc_stderr,sigma_distance")?;
    let mut max_sigma = 0.0f64;
    for c in &checks {
        let sigma = if c.mc_stderr > 0.0 {
            (c.mc_mean - c.analytic) / c.mc_stderr
        } else if c.mc_mean == c.analytic {
            0.0
        } else {
            f64::INFINITY
        };
        max_sigma = max_sigma.max(sigma.abs());
        writeln!(
            out,
            "{},{},{},{},{}",
            c.name,
            fmt(c.analytic),
            fmt(c.mc_mean),
            fmt(c.mc_stderr),
            fmt(sigma)
        )?;
    }
    Ok(ValidationReport {
        max_sigma,
        passed: max_sigma <= 4.0,
    })
}

/// Flat JSON config mirroring `SystemParams` field names, with an optional
/// sweep block. CLI flags override file values.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub p_s: Option<f64>,
    pub p_k: Option<f64>,
    pub k: Option<usize>,
    pub r_d: Option<f64>,
    pub r_max: Option<f64>,
    pub r_int: Option<f64>,
    pub beta: Option<f64>,
    pub n_0: Option<f64>,
    pub sweep: Option<SweepBlock>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub variable: String,
    pub values: Vec<f64>,
    pub mc_check: Option<bool>,
    pub mc_samples: Option<u64>,
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<ConfigFile> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("config parse failure: {e}")))
    }

    /// Applies the file's flat parameters on top of `base`.
    pub fn apply_params(&self, base: SystemParams) -> SystemParams {
        SystemParams {
            p_s: self.p_s.unwrap_or(base.p_s),
            p_k: self.p_k.unwrap_or(base.p_k),
            k: self.k.unwrap_or(base.k),
            r_d: self.r_d.unwrap_or(base.r_d),
            r_max: self.r_max.unwrap_or(base.r_max),
            r_int: self.r_int.unwrap_or(base.r_int),
            beta: self.beta.unwrap_or(base.beta),
            n_0: self.n_0.unwrap_or(base.n_0),
        }
    }
}
