use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Format};
use crate::error::{LabError, LabResult};

/// One tidy observation. For profile observables `replica` carries the
/// site `x` instead of a replica index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub experiment: String,
    #[serde(rename = "L")]
    pub l: usize,
    pub replica: u64,
    pub observable: String,
    pub value: f64,
    pub sigma: f64,
    pub config_hash: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub experiment: String,
    pub seed: u64,
    pub version: String,
    pub config_hash: String,
    pub config: ExperimentConfig,
    pub parallel: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub provenance: Provenance,
    pub rows: Vec<Row>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> LabError + '_ {
    move |source| LabError::Io { path: path.to_path_buf(), source }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> LabError + '_ {
    move |source| LabError::Csv { path: path.to_path_buf(), source }
}

impl ResultTable {
    pub fn new(cfg: &ExperimentConfig) -> Self {
        let hash = cfg.hash();
        ResultTable {
            provenance: Provenance {
                experiment: cfg.experiment.name().into(),
                seed: cfg.seed,
                version: env!("CARGO_PKG_VERSION").into(),
                config_hash: hash,
                config: cfg.clone(),
                parallel: cfg!(feature = "parallel"),
            },
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, l: usize, replica: u64, observable: &str, value: f64, sigma: f64) {
        self.rows.push(Row {
            experiment: self.provenance.experiment.clone(),
            l,
            replica,
            observable: observable.into(),
            value,
            sigma,
            config_hash: self.provenance.config_hash.clone(),
        });
    }

    pub fn observables(&self) -> Vec<String> {
        let mut seen: Vec<String> = Vec::new();
        for r in &self.rows {
            if !seen.contains(&r.observable) {
                seen.push(r.observable.clone());
            }
        }
        seen
    }

    /// Values of `observable` grouped by `L`.
    pub fn by_size(&self, observable: &str) -> BTreeMap<usize, Vec<f64>> {
        let mut m: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for r in self.rows.iter().filter(|r| r.observable == observable) {
            m.entry(r.l).or_default().push(r.value);
        }
        m
    }

    pub fn to_csv_string(&self) -> LabResult<String> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record(["experiment", "L", "replica", "observable", "value", "sigma", "config_hash"]).map_err(csv_err(Path::new("<memory>")))?;
        for r in &self.rows {
            w.serialize(r).map_err(csv_err(Path::new("<memory>")))?;
        }
        let bytes = w.into_inner().map_err(|e| LabError::Io { path: "<memory>".into(), source: e.into_error() })?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn write_csv(&self, path: &Path) -> LabResult<()> {
        fs::write(path, self.to_csv_string()?).map_err(io_err(path))
    }

    pub fn read_csv_rows(path: &Path) -> LabResult<Vec<Row>> {
        let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
        r.deserialize().collect::<Result<Vec<Row>, _>>().map_err(csv_err(path))
    }

    pub fn write_json(&self, path: &Path) -> LabResult<()> {
        let text = serde_json::to_string_pretty(self).expect("table serialises");
        fs::write(path, text + "\n").map_err(io_err(path))
    }

    /// Writes the table, its provenance sidecar and one SVG per observable
    /// into `dir`; returns the paths written.
    pub fn emit(&self, dir: &Path, format: Format) -> LabResult<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let stem = &self.provenance.experiment;
        let mut written = Vec::new();
        let main = match format {
            Format::Csv => {
                let p = dir.join(format!("{stem}.csv"));
                self.write_csv(&p)?;
                p
            }
            Format::Json => {
                let p = dir.join(format!("{stem}.json"));
                self.write_json(&p)?;
                p
            }
        };
        written.push(main);
        let side = dir.join(format!("{stem}.provenance.json"));
        let text = serde_json::to_string_pretty(&self.provenance).expect("provenance serialises");
        fs::write(&side, text + "\n").map_err(io_err(&side))?;
        written.push(side);
        for obs in self.observables() {
            let p = dir.join(format!("{stem}_{obs}.svg"));
            fs::write(&p, crate::plot::svg_plot(self, &obs)).map_err(io_err(&p))?;
            written.push(p);
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> ResultTable {
        let cfg = ExperimentConfig::from_json(r#"{"experiment":"heat","sizes":[8]}"#).unwrap();
        ResultTable::new(&cfg)
    }

    #[test]
    fn empty_table_is_header_only() {
        assert_eq!(table().to_csv_string().unwrap(), "experiment,L,replica,observable,value,sigma,config_hash\n");
    }

    #[test]
    fn csv_round_trip() {
        let mut t = table();
        t.push(8, 0, "a", 0.1 + 0.2, 1e-300);
        t.push(16, 3, "b", -2.5e17, 0.0);
        t.push(16, 4, "b", std::f64::consts::PI, 0.125);
        let dir = std::env::temp_dir().join(format!("lab-table-{}", std::process::id()));
        let written = t.emit(&dir, Format::Csv).unwrap();
        // table, sidecar, one plot per observable
        assert_eq!(written.len(), 4);
        let back = ResultTable::read_csv_rows(&written[0]).unwrap();
        assert_eq!(back, t.rows);
        fs::remove_dir_all(dir).unwrap();
    }
}
