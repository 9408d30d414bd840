use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean order parameter at one `(L, α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    #[serde(rename = "L")]
    pub size: usize,
    pub alpha: f64,
    pub q_mean: f64,
    pub stderr: f64,
    pub n_samples: usize,
}

/// Mean and standard error of the mean,
/// `sqrt(Σ (q_i − q̄)² / (n (n − 1)))`.
pub fn aggregate(samples: &[f64], alpha: f64, size: usize) -> Result<DataPoint> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::Degenerate(format!(
            "standard error needs at least 2 samples, got {n}"
        )));
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let ss: f64 = samples.iter().map(|q| (q - mean).powi(2)).sum();
    Ok(DataPoint {
        size,
        alpha,
        q_mean: mean,
        stderr: (ss / (nf * (nf - 1.0))).sqrt(),
        n_samples: n,
    })
}

pub const DATAPOINT_HEADER: [&str; 5] = ["L", "alpha", "q_mean", "stderr", "n_samples"];

pub fn write_datapoints_csv(path: &Path, points: &[DataPoint]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    if points.is_empty() {
        w.write_record(DATAPOINT_HEADER).map_err(|e| Error::csv(path, e))?;
    }
    for p in points {
        w.serialize(p).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_datapoints_csv(path: &Path) -> Result<Vec<DataPoint>> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::csv(path, e))?;
    r.deserialize()
        .collect::<std::result::Result<Vec<DataPoint>, _>>()
        .map_err(|e| Error::csv(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate_examples() {
        let p = aggregate(&[0.3, 0.3, 0.3], 0.5, 8).unwrap();
        assert_eq!((p.q_mean, p.stderr, p.n_samples), (0.3, 0.0, 3));
        let p = aggregate(&[0.0, 1.0], 0.5, 8).unwrap();
        assert_eq!((p.q_mean, p.stderr), (0.5, 0.5));
        assert!(aggregate(&[0.4], 0.5, 8).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("points.csv");
        let points = vec![
            aggregate(&[0.1, 0.2, 0.7], 1.0 / 3.0, 24).unwrap(),
            aggregate(&[0.04, 0.05], 0.125, 8).unwrap(),
        ];
        write_datapoints_csv(&path, &points).unwrap();
        assert!(std::fs::read_to_string(&path)
            .unwrap()
            .starts_with("L,alpha,q_mean,stderr,n_samples\n"));
        assert_eq!(read_datapoints_csv(&path).unwrap(), points);
        write_datapoints_csv(&path, &[]).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            "L,alpha,q_mean,stderr,n_samples\n"
        );
        assert!(read_datapoints_csv(&path).unwrap().is_empty());
    }
}
