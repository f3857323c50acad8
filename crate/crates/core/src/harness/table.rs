use serde::{Deserialize, Serialize};

use super::spec::{ArmKind, SimKind};
use super::HarnessError;

/// One aggregated cell group: every seed of one (graph, plan, sim, arm, p).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub graph: String,
    pub spec: String,
    pub sim: SimKind,
    pub arm: ArmKind,
    pub p: usize,
    /// NaN when every seed failed.
    pub mean_ar: f64,
    pub std_ar: f64,
    /// Seeds that completed.
    pub n_seeds: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

/// Mean and sample standard deviation; the deviation is 0 for one value.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

impl ResultTable {
    pub const HEADER: [&'static str; 8] =
        ["graph", "spec", "sim", "arm", "p", "mean_ar", "std_ar", "n_seeds"];

    pub fn find(&self, sim: SimKind, arm: ArmKind, p: usize) -> Option<&ResultRow> {
        self.rows.iter().find(|r| r.sim == sim && r.arm == arm && r.p == p)
    }

    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record(Self::HEADER)?;
        for r in &self.rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Csv(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn from_csv(text: &str) -> Result<Self, HarnessError> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
        if header != Self::HEADER {
            return Err(HarnessError::Csv(format!("unexpected header {header:?}")));
        }
        let rows = r.deserialize().collect::<Result<Vec<ResultRow>, _>>()?;
        Ok(ResultTable { rows })
    }
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        HarnessError::Csv(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(mean: f64) -> ResultRow {
        ResultRow {
            graph: "cycle4".into(),
            spec: "0-3/0-1".into(),
            sim: SimKind::Ideal,
            arm: ArmKind::Split,
            p: 2,
            mean_ar: mean,
            std_ar: 0.0125,
            n_seeds: 10,
        }
    }

    #[test]
    fn header_line() {
        let t = ResultTable { rows: vec![row(0.7)] };
        let csv = t.to_csv().unwrap();
        assert!(csv.starts_with("graph,spec,sim,arm,p,mean_ar,std_ar,n_seeds\n"));
        assert!(csv.contains("cycle4,0-3/0-1,ideal,split,2,0.7,0.0125,10\n"));
    }

    #[test]
    fn failed_rows_survive() {
        let t = ResultTable { rows: vec![ResultRow { n_seeds: 0, ..row(f64::NAN) }] };
        let back = ResultTable::from_csv(&t.to_csv().unwrap()).unwrap();
        assert!(back.rows[0].mean_ar.is_nan());
    }

    #[test]
    fn wrong_header_rejected() {
        assert!(ResultTable::from_csv("a,b\n1,2\n").is_err());
    }

    #[test]
    fn stats() {
        assert_eq!(mean_std(&[0.5]), (0.5, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(mean_std(&[]).0.is_nan());
    }

    proptest! {
        #[test]
        fn csv_round_trip(means in proptest::collection::vec(0.0f64..1.0, 0..6)) {
            let t = ResultTable { rows: means.into_iter().map(row).collect() };
            prop_assert_eq!(ResultTable::from_csv(&t.to_csv().unwrap()).unwrap(), t);
        }
    }
}
