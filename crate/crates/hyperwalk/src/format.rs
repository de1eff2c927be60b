//! File formats: hypergraph JSON, CSV exports, spectrum summaries.
//!
//! All vertex labels written or read here are 1-based.

use std::io::{self, Write};

use hyperwalk_core::montecarlo::Estimate;
use hyperwalk_core::nalgebra::DMatrix;
use hyperwalk_core::{Hypergraph, Multigraph, Spectrum};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// `{"n": int, "d": int, "edges": [[int, ...], ...]}` with sorted edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergraphFile {
    pub n: usize,
    pub d: usize,
    pub edges: Vec<Vec<usize>>,
}

impl From<&Hypergraph> for HypergraphFile {
    fn from(h: &Hypergraph) -> Self {
        Self {
            n: h.n(),
            d: h.d(),
            edges: h
                .edges()
                .map(|e| e.iter().map(|v| v + 1).collect())
                .collect(),
        }
    }
}

impl HypergraphFile {
    pub fn into_hypergraph(self) -> Result<Hypergraph, CliError> {
        Hypergraph::from_one_based(self.n, self.d, self.edges).map_err(CliError::BadInstance)
    }
}

/// Canonical serialization: compact, edges sorted, trailing newline.
pub fn hypergraph_to_json(h: &Hypergraph) -> String {
    let mut s = serde_json::to_string(&HypergraphFile::from(h)).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn hypergraph_from_json(text: &str) -> Result<Hypergraph, CliError> {
    let file: HypergraphFile = serde_json::from_str(text)
        .map_err(|e| CliError::BadFile(format!("hypergraph JSON: {e}")))?;
    file.into_hypergraph()
}

/// `row,col,weight` triples with `row < col`, 1-based.
pub fn write_weights_csv<W: Write>(mg: &Multigraph, mut out: W) -> io::Result<()> {
    writeln!(out, "row,col,weight")?;
    for i in 0..mg.n() {
        for (j, a) in mg.neighbors(i) {
            if i < j {
                writeln!(out, "{},{},{}", i + 1, j + 1, a)?;
            }
        }
    }
    Ok(())
}

/// `{"eigenvalues": [...], "gap": x, "lambda_bar": y}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub eigenvalues: Vec<f64>,
    pub gap: f64,
    pub lambda_bar: f64,
}

impl From<&Spectrum> for SpectrumSummary {
    fn from(s: &Spectrum) -> Self {
        Self {
            eigenvalues: s.eigenvalues.clone(),
            gap: s.gap,
            lambda_bar: s.lambda_bar,
        }
    }
}

/// Eigenvectors, column-major: one line per eigenvector (`k`, then its
/// entries for vertices `1..=n`).
pub fn write_eigenvectors_csv<W: Write>(spec: &Spectrum, mut out: W) -> io::Result<()> {
    let n = spec.n();
    let header: Vec<String> = (1..=n).map(|j| format!("v{j}")).collect();
    writeln!(out, "k,{}", header.join(","))?;
    for k in 0..n {
        let row: Vec<String> = (0..n).map(|j| spec.v(k, j).to_string()).collect();
        writeln!(out, "{},{}", k + 1, row.join(","))?;
    }
    Ok(())
}

/// Dense matrix as `row,col,value` (1-based).
pub fn write_matrix_csv<W: Write>(m: &DMatrix<f64>, mut out: W) -> io::Result<()> {
    writeln!(out, "row,col,value")?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            writeln!(out, "{},{},{}", i + 1, j + 1, m[(i, j)])?;
        }
    }
    Ok(())
}

/// Per-trial samples: `trial_index,value` (empty value for truncated trials).
pub fn write_samples_csv<W: Write>(samples: &[Option<u64>], mut out: W) -> io::Result<()> {
    writeln!(out, "trial_index,value")?;
    for (t, s) in samples.iter().enumerate() {
        match s {
            Some(v) => writeln!(out, "{t},{v}")?,
            None => writeln!(out, "{t},")?,
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateSummary {
    pub mean: f64,
    pub stderr: f64,
    pub trials_used: u64,
    pub truncated: u64,
    pub biased: bool,
}

impl From<&Estimate> for EstimateSummary {
    fn from(e: &Estimate) -> Self {
        Self {
            mean: e.mean,
            stderr: e.stderr,
            trials_used: e.trials_used,
            truncated: e.truncated,
            biased: e.biased(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperwalk_core::project;

    #[test]
    fn canonical_json() {
        let h = Hypergraph::from_one_based(4, 3, [[3, 2, 1], [1, 2, 4]]).unwrap();
        assert_eq!(
            hypergraph_to_json(&h),
            "{\"n\":4,\"d\":3,\"edges\":[[1,2,3],[1,2,4]]}\n"
        );
        assert_eq!(hypergraph_from_json(&hypergraph_to_json(&h)).unwrap(), h);
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(matches!(
            hypergraph_from_json("{\"n\":3}"),
            Err(CliError::BadFile(_))
        ));
        let dup = "{\"n\":4,\"d\":3,\"edges\":[[1,2,3],[3,2,1]]}";
        assert!(matches!(
            hypergraph_from_json(dup),
            Err(CliError::BadInstance(_))
        ));
        let zero = "{\"n\":4,\"d\":3,\"edges\":[[0,1,2]]}";
        assert!(matches!(
            hypergraph_from_json(zero),
            Err(CliError::BadInstance(_))
        ));
    }

    #[test]
    fn weights_csv() {
        let h = Hypergraph::from_one_based(4, 3, [[1, 2, 3], [1, 2, 4]]).unwrap();
        let mut buf = Vec::new();
        write_weights_csv(&project(&h), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "row,col,weight\n1,2,2\n1,3,1\n1,4,1\n2,3,1\n2,4,1\n"
        );
    }

    #[test]
    fn samples_csv_marks_truncation() {
        let mut buf = Vec::new();
        write_samples_csv(&[Some(3), None], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "trial_index,value\n0,3\n1,\n"
        );
    }
}
