use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use super::config::{OutputFormat, RunConfig};

/// A float serialized with 17 significant digits, or `null` when not finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Num {
    fn text(self) -> String {
        format!("{:.16e}", self.0)
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(self.text()).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

/// `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexNum(pub Complex64);

impl Serialize for ComplexNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&Num(self.0.re))?;
        seq.serialize_element(&Num(self.0.im))?;
        seq.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub deviation: Num,
    pub tolerance: Num,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            deviation: Num(deviation),
            tolerance: Num(tolerance),
            // NaN never passes
            pass: deviation <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub dim: usize,
    pub deviation: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    #[serde(rename = "M")]
    pub modes: usize,
    pub overlap: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Params {
    pub dim: usize,
    pub deformation_source: &'static str,
    pub epsilon: ComplexNum,
    pub q: ComplexNum,
    pub rho: ComplexNum,
    pub cutoff: usize,
    pub modes: Vec<usize>,
    pub tolerance: Num,
    pub format: &'static str,
}

impl Params {
    pub fn from_config(cfg: &RunConfig) -> Self {
        Self {
            dim: cfg.dim,
            deformation_source: cfg.source.name(),
            epsilon: ComplexNum(cfg.deformation.epsilon()),
            q: ComplexNum(cfg.deformation.q()),
            rho: ComplexNum(cfg.deformation.rho()),
            cutoff: cfg.cutoff_degree,
            modes: cfg.mode_counts.clone(),
            tolerance: Num(cfg.tolerance),
            format: match cfg.output_format {
                OutputFormat::Json => "json",
                OutputFormat::Csv => "csv",
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub params: Params,
    pub checks: Vec<CheckRecord>,
    pub convergence: Vec<ConvergenceRow>,
    pub scan: Vec<ScanRow>,
    pub warnings: Vec<String>,
    pub pass: bool,
    pub seed: u64,
    pub version: &'static str,
    /// Wall-clock seconds; the only field that varies between identical runs.
    pub timing: Num,
}

impl Report {
    pub fn new(cfg: &RunConfig) -> Self {
        Self {
            command: cfg.command.name(),
            params: Params::from_config(cfg),
            checks: Vec::new(),
            convergence: Vec::new(),
            scan: Vec::new(),
            warnings: Vec::new(),
            pass: true,
            seed: cfg.seed,
            version: env!("CARGO_PKG_VERSION"),
            timing: Num(0.0),
        }
    }

    pub fn check(&mut self, record: CheckRecord) {
        self.checks.push(record);
        self.pass = self.checks.iter().all(|c| c.pass);
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        if !self.warnings.contains(&msg) {
            self.warnings.push(msg);
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Flat projection: one row per check, convergence point and scan point.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let num = |x: f64| Num(x).text();
        w.write_record(["section", "name", "index", "value", "tolerance", "pass"])
            .expect("in-memory write");
        for c in &self.checks {
            w.write_record([
                "check",
                &c.name,
                "",
                &num(c.deviation.0),
                &num(c.tolerance.0),
                if c.pass { "true" } else { "false" },
            ])
            .expect("in-memory write");
        }
        for r in &self.convergence {
            w.write_record(["convergence", "deviation", &r.dim.to_string(), &num(r.deviation.0), "", ""])
                .expect("in-memory write");
        }
        for r in &self.scan {
            w.write_record(["scan", "overlap", &r.modes.to_string(), &num(r.overlap.0), "", ""])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }

    /// Writes to a sibling temporary file and renames it over `path`.
    pub fn write_atomic(&self, path: &Path, format: OutputFormat) -> std::io::Result<()> {
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let name = path
            .file_name()
            .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidInput, "output path has no file name"))?;
        let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
        let result = (|| {
            let mut f = std::fs::File::create(&tmp)?;
            f.write_all(self.render(format).as_bytes())?;
            f.sync_all()?;
            std::fs::rename(&tmp, path)
        })();
        if result.is_err() {
            let _ = std::fs::remove_file(&tmp);
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_seventeen_digits() {
        let json = serde_json::to_string(&Num(0.1)).unwrap();
        assert_eq!(json, "1.0000000000000001e-1");
        let back: f64 = json.parse().unwrap();
        assert_eq!(back, 0.1);
        assert_eq!(serde_json::to_string(&Num(f64::NAN)).unwrap(), "null");
        assert_eq!(
            serde_json::to_string(&ComplexNum(Complex64::new(1.0, -2.5))).unwrap(),
            "[1.0000000000000000e0,-2.5000000000000000e0]"
        );
    }

    #[test]
    fn nan_deviation_fails() {
        assert!(!CheckRecord::new("x", f64::NAN, 1.0).pass);
        assert!(CheckRecord::new("x", 0.5, 1.0).pass);
    }
}
