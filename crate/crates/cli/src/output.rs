//! CSV and JSON artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use rootexp::ExpansionResult;

use crate::error::{CliError, CliResult};

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub const EXPANSION_HEADER: &str = "k,coef,delta,alpha_s,alpha_lim";

/// One row per order `k = 0..=p`; `alpha_lim` is empty when no limit
/// coefficients were computed.
pub fn expansion_csv(r: &ExpansionResult) -> String {
    let mut out = format!("{EXPANSION_HEADER}\n");
    for k in 0..=r.p {
        let lim = r.alpha_lim.as_ref().map(|a| a[k]);
        out.push_str(&format!("{k},{},{},{},{}\n", num(r.coef[k]), num(r.delta[k]), num(r.alpha_s[k]), opt(lim)));
    }
    out
}

pub fn expansion_json(r: &ExpansionResult) -> String {
    serde_json::to_string_pretty(r).expect("serializable") + "\n"
}

/// Result of a demo at one order: the exact estimate and its expansions.
#[derive(Debug, Clone, Copy)]
pub struct DemoRow {
    pub p: usize,
    pub estimate: f64,
    pub theta_p_s: f64,
    pub theta_p_inf: Option<f64>,
}

pub const DEMO_HEADER: &str = "p,estimate,theta_p_s,theta_p_inf,error_s,error_inf";

pub fn demo_csv(rows: &[DemoRow]) -> String {
    let mut out = format!("{DEMO_HEADER}\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.p,
            num(r.estimate),
            num(r.theta_p_s),
            opt(r.theta_p_inf),
            num(r.theta_p_s - r.estimate),
            opt(r.theta_p_inf.map(|t| t - r.estimate))
        ));
    }
    out
}

pub fn write(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(path)
}
