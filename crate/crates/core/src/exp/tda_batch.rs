use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{FrequencyRow, ReportKind, SweepReport};
use super::{ExpError, ExperimentConfig, Result, TdaSource};
use crate::dynamics::{read_trajectory, synth, SyntheticSpec, Trajectory};
use crate::rng;
use crate::tda::{classify, BehaviourClass};

/// Outcome for one trajectory of a batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TdaDetailRow {
    pub group: String,
    /// File path, or `synthetic:<index>`.
    pub item: String,
    pub class: Option<String>,
    pub b0: Option<usize>,
    pub b1: Option<usize>,
    pub thresh: Option<f64>,
    pub diameter: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TdaBatch {
    pub report: SweepReport,
    pub details: Vec<TdaDetailRow>,
}

impl TdaBatch {
    pub fn details_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["group", "item", "class", "b0", "b1", "thresh", "diameter", "error"])?;
        let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        for d in &self.details {
            wr.serialize(d)?;
        }
        let mut bytes = w.into_inner().map_err(|e| ExpError::Io(e.into_error()))?;
        bytes.extend(wr.into_inner().map_err(|e| ExpError::Io(e.into_error()))?);
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

enum Item {
    Synthetic(SyntheticSpec, usize),
    File(PathBuf),
}

impl Item {
    fn name(&self) -> String {
        match self {
            Item::Synthetic(_, i) => format!("synthetic:{i}"),
            Item::File(path) => path.display().to_string(),
        }
    }

    fn load(&self) -> Result<Trajectory<f64>> {
        Ok(match self {
            Item::Synthetic(spec, _) => synth(spec)?,
            Item::File(path) => read_trajectory(path)?,
        })
    }
}

fn expand(config: &ExperimentConfig, index: usize, source: &TdaSource) -> Result<Vec<Item>> {
    match source {
        TdaSource::Synthetic { count, spec, .. } => Ok((0..*count)
            .map(|i| {
                let seed = rng::derive(config.seed, &[index as u64, spec.seed, i as u64]);
                Item::Synthetic(SyntheticSpec { seed, ..spec.clone() }, i)
            })
            .collect()),
        TdaSource::Files { glob, .. } => {
            let paths = glob::glob(glob).map_err(|e| ExpError::Config(format!("glob '{glob}': {e}")))?;
            let mut items: Vec<PathBuf> = paths.map(|p| p.map_err(|e| ExpError::Io(e.into()))).collect::<Result<_>>()?;
            items.sort();
            Ok(items.into_iter().map(Item::File).collect())
        }
    }
}

/// Classifies the burn-in window of every trajectory of every source and
/// tabulates class frequencies per source group. A trajectory that cannot be
/// read or classified becomes an error row; the batch continues.
pub fn run_tda_batch(config: &ExperimentConfig, sources: &[TdaSource]) -> Result<TdaBatch> {
    config.validate()?;
    let params = config.tda.classify_params();
    let mut rows = Vec::with_capacity(sources.len());
    let mut details = Vec::new();
    for (index, source) in sources.iter().enumerate() {
        let group = source.group();
        let items = expand(config, index, source)?;
        let outcomes: Vec<(TdaDetailRow, Option<BehaviourClass>)> = items
            .par_iter()
            .map(|item| {
                let result = item
                    .load()
                    .and_then(|t| Ok(t.window(config.tda.burn_in, config.tda.end)?))
                    .and_then(|w| Ok(classify(&w, &params)?));
                let mut row = TdaDetailRow {
                    group: group.clone(),
                    item: item.name(),
                    class: None,
                    b0: None,
                    b1: None,
                    thresh: None,
                    diameter: None,
                    error: None,
                };
                let class = result.as_ref().ok().map(|c| c.class);
                match result {
                    Ok(c) => {
                        row.class = Some(c.class.to_string());
                        row.b0 = c.signature.map(|s| s.b0);
                        row.b1 = c.signature.map(|s| s.b1);
                        row.thresh = c.signature.map(|s| s.thresh);
                        row.diameter = Some(c.diameter);
                    }
                    Err(e) => row.error = Some(e.to_string()),
                }
                (row, class)
            })
            .collect();
        let mut freq = FrequencyRow::new(group.clone());
        for (row, class) in outcomes {
            match class {
                Some(class) => freq.record(class),
                None => freq.errors += 1,
            }
            details.push(row);
        }
        rows.push(freq);
    }
    Ok(TdaBatch { report: SweepReport::frequency(ReportKind::TdaBatch, rows), details })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{write_trajectory, SyntheticKind};

    fn short_config() -> ExperimentConfig {
        let mut c = ExperimentConfig::default();
        c.tda.burn_in = 200;
        c.tda.end = 319;
        c
    }

    fn source(kind: SyntheticKind, count: usize, noise: f64) -> TdaSource {
        let mut spec = SyntheticSpec { len: 320, dim: 16, ..SyntheticSpec::new(kind) };
        spec.noise_sigma = noise * spec.scale();
        TdaSource::Synthetic { group: None, count, spec }
    }

    #[test]
    fn synthetic_groups() {
        let sources = [source(SyntheticKind::FixedPoint, 5, 0.0), source(SyntheticKind::TwoPoint, 4, 0.05)];
        let batch = run_tda_batch(&short_config(), &sources).unwrap();
        let rows = batch.report.frequency_rows().unwrap();
        assert_eq!(rows[0].counts(), [5, 0, 0, 0]);
        assert_eq!(rows[1].counts(), [0, 4, 0, 0]);
        assert_eq!(batch.details.len(), 9);
        assert!(run_tda_batch(&short_config(), &[]).unwrap().report.is_empty());
    }

    #[test]
    fn unreadable_files_become_error_rows() {
        let dir = tempfile::tempdir().unwrap();
        let spec = SyntheticSpec { len: 320, dim: 8, ..SyntheticSpec::new(SyntheticKind::TwoPoint) };
        write_trajectory(&synth::<f64>(&spec).unwrap(), dir.path().join("a.ltrj")).unwrap();
        std::fs::write(dir.path().join("b.ltrj"), b"LTRJ").unwrap();
        let short = SyntheticSpec { len: 10, ..spec };
        write_trajectory(&synth::<f64>(&short).unwrap(), dir.path().join("c.ltrj")).unwrap();
        let glob = format!("{}/*.ltrj", dir.path().display());
        let batch = run_tda_batch(&short_config(), &[TdaSource::Files { group: Some("g".into()), glob }]).unwrap();
        let row = &batch.report.frequency_rows().unwrap()[0];
        assert_eq!((row.samples, row.two_point_cycle, row.errors), (1, 1, 2));
        assert_eq!(batch.details[0].class.as_deref(), Some(BehaviourClass::TwoPointCycle.column()));
        assert!(batch.details[1].error.is_some() && batch.details[2].error.is_some());
        let csv = batch.details_csv().unwrap();
        assert_eq!(csv.lines().count(), 4);
    }
}
