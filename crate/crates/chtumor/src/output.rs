//! Files written by a run. Nothing here records wall-clock time, so two runs
//! of the same configuration produce byte-identical output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use chtumor_core::solver::State;
use chtumor_core::studies::{OrderReport, StudyResult};
use serde::Serialize;

use crate::config::RunConfig;
use crate::defaults::{self, DefaultsTable};
use crate::error::{CliError, FailureReport, Result};

/// Full-precision scientific notation used in every CSV cell.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

#[derive(Serialize)]
pub struct Summary<'a, R: Serialize> {
    pub command: &'static str,
    pub status: &'static str,
    pub result: &'a R,
    pub config: &'a RunConfig,
    pub defaults: DefaultsTable,
}

impl<'a, R: Serialize> Summary<'a, R> {
    pub fn new(command: &'static str, result: &'a R, config: &'a RunConfig) -> Self {
        Summary {
            command,
            status: "ok",
            result,
            config,
            defaults: defaults::table(),
        }
    }
}

pub struct OutputDir {
    root: PathBuf,
}

impl OutputDir {
    pub fn create(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(|e| CliError::io(format!("cannot create {}", root.display()), e))?;
        Ok(OutputDir { root })
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    pub fn write_text(&self, name: &str, text: &str) -> Result<PathBuf> {
        let path = self.root.join(name);
        fs::write(&path, text).map_err(|e| CliError::io(format!("cannot write {}", path.display()), e))?;
        log::info!("wrote {}", path.display());
        Ok(path)
    }

    pub fn write_json<T: Serialize + ?Sized>(&self, name: &str, value: &T) -> Result<PathBuf> {
        self.write_text(name, &to_json(value)?)
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Serialize(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn failure_json(report: &FailureReport) -> String {
    // a flat record of strings and integers cannot fail to serialize
    serde_json::to_string(report).expect("failure report serializes")
}

/// One row per sweep member: composite, each component, diagnostics and run checks.
pub fn sweep_csv(result: &StudyResult) -> String {
    let mut out = String::new();
    let mut header = vec![result.swept.to_string(), "composite".into()];
    if let Some(first) = result.rows.first() {
        header.extend(first.components.iter().map(|(k, _)| k.clone()));
        header.extend(first.diagnostics.iter().map(|(k, _)| k.clone()));
    }
    header.extend(
        ["conservation_drift", "genest_aggregate", "genest_ratio", "newton_quadratic_constant"].map(String::from),
    );
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &result.rows {
        let mut cells = vec![num(row.param), num(row.composite)];
        cells.extend(row.components.iter().chain(&row.diagnostics).map(|(_, v)| num(*v)));
        cells.push(num(row.conservation_drift));
        cells.push(num(row.genest_aggregate));
        cells.push(opt(row.genest_ratio));
        cells.push(opt(row.newton_quadratic_constant));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Log-log pairs ready for plotting, with the fitted line in the header.
pub fn loglog_dat(result: &StudyResult) -> String {
    let fit = &result.fit;
    let mut out = format!(
        "# ln({}) ln(composite)\n# fit: ln(composite) = {} + {} ln({}), R^2 = {}\n",
        result.swept,
        num(fit.intercept),
        num(fit.rate),
        result.swept,
        num(fit.r2)
    );
    for (p, e) in result.pairs() {
        let _ = writeln!(out, "{} {}", num(p.ln()), num(e.ln()));
    }
    out
}

/// Cell centers and the four fields, one row per cell.
pub fn field_csv(state: &State) -> String {
    let grid = *state.grid();
    let mut out = String::from("x,y,mu,phi,sigma,xi\n");
    let fields = [&state.mu, &state.phi, &state.sigma, &state.xi];
    for cell in 0..grid.cells() {
        let [x, y] = grid.center(cell);
        let mut cells = vec![num(x), num(y)];
        cells.extend(fields.iter().map(|f| num(f.values()[cell])));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Time column followed by named series of equal length.
pub fn series_csv(times: &[f64], columns: &[(&str, &[f64])]) -> String {
    let mut out = String::from("t");
    for (name, _) in columns {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (k, &t) in times.iter().enumerate() {
        out.push_str(&num(t));
        for (_, col) in columns {
            out.push(',');
            out.push_str(&num(col[k]));
        }
        out.push('\n');
    }
    out
}

pub fn order_csv(reports: &[(&str, &OrderReport)]) -> String {
    let mut out = String::from("refinement,n,dt,error,ratio,order\n");
    for (name, rep) in reports {
        for (k, level) in rep.levels.iter().enumerate() {
            let (ratio, order) = match k.checked_sub(1) {
                Some(j) => (num(rep.ratios[j]), num(rep.orders[j])),
                None => (String::new(), String::new()),
            };
            let _ = writeln!(out, "{name},{},{},{},{ratio},{order}", level.n, num(level.dt), num(level.error));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, 6.02e23, -2.5e-300, 0.0] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn series_layout() {
        let csv = series_csv(&[0.0, 0.5], &[("e", &[1.0, 2.0]), ("q", &[3.0, 4.0])]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,e,q");
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[2].split(',').count(), 3);
    }
}
