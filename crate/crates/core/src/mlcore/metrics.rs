//! Confusion-matrix metrics: accuracy, precision, and the Matthews
//! correlation coefficient (the paper's "confidence" column).

use std::fmt::Write as _;

use super::logistic::{LogisticModel, MlError};

/// Evaluation summary for a labelled set. The confusion matrix is indexed
/// `[actual][predicted]` in the model's class order.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub classes: Vec<u32>,
    pub confusion: Vec<Vec<u64>>,
    pub precision: f64,
    pub accuracy: f64,
    pub mcc: f64,
}

impl EvalReport {
    pub fn total(&self) -> u64 {
        self.confusion.iter().flatten().sum()
    }

    /// CSV: one `#` header with scalar metrics, then confusion rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# precision={} accuracy={} mcc={} total={}",
            self.precision,
            self.accuracy,
            self.mcc,
            self.total()
        );
        let header: Vec<String> = self.classes.iter().map(|c| format!("pred_{c}")).collect();
        let _ = writeln!(out, "actual,{}", header.join(","));
        for (c, row) in self.classes.iter().zip(&self.confusion) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{c},{}", cells.join(","));
        }
        out
    }
}

/// Metrics from a raw confusion matrix; shared by `evaluate` and tests
/// that build matrices directly.
pub fn report_from_confusion(classes: Vec<u32>, confusion: Vec<Vec<u64>>) -> EvalReport {
    let k = classes.len();
    let total: u64 = confusion.iter().flatten().sum();
    let correct: u64 = (0..k).map(|i| confusion[i][i]).sum();
    let accuracy = correct as f64 / total as f64;

    let precision = if k == 2 {
        // Positive class is classes[1].
        let tp = confusion[1][1] as f64;
        let fp = confusion[0][1] as f64;
        if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 }
    } else {
        // Macro average over classes.
        let mut sum = 0.0;
        for c in 0..k {
            let tp = confusion[c][c] as f64;
            let fp: f64 = (0..k).filter(|&r| r != c).map(|r| confusion[r][c] as f64).sum();
            sum += if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
        }
        sum / k as f64
    };

    let mcc = multiclass_mcc(&confusion);
    EvalReport { classes, confusion, precision, accuracy, mcc }
}

/// Generalized (R_k) Matthews correlation coefficient; reduces to the
/// familiar binary formula for k = 2, and to 0 when the denominator
/// vanishes.
fn multiclass_mcc(confusion: &[Vec<u64>]) -> f64 {
    let k = confusion.len();
    let total: f64 = confusion.iter().flatten().map(|&v| v as f64).sum();
    let correct: f64 = (0..k).map(|i| confusion[i][i] as f64).sum();
    let row_sums: Vec<f64> = confusion.iter().map(|r| r.iter().map(|&v| v as f64).sum()).collect();
    let col_sums: Vec<f64> =
        (0..k).map(|c| confusion.iter().map(|r| r[c] as f64).sum()).collect();
    let cov_xy = correct * total - row_sums.iter().zip(&col_sums).map(|(r, c)| r * c).sum::<f64>();
    let cov_xx = total * total - row_sums.iter().map(|r| r * r).sum::<f64>();
    let cov_yy = total * total - col_sums.iter().map(|c| c * c).sum::<f64>();
    let denom = (cov_xx * cov_yy).sqrt();
    if denom == 0.0 {
        0.0
    } else {
        cov_xy / denom
    }
}

/// Confusion matrix at threshold 0.5 (binary) or argmax (multiclass).
pub fn evaluate(
    model: &LogisticModel,
    x: &[Vec<f64>],
    y: &[u32],
) -> Result<EvalReport, MlError> {
    if x.is_empty() {
        return Err(MlError::EmptyEvaluation);
    }
    assert_eq!(x.len(), y.len());
    let k = model.classes.len();
    let mut confusion = vec![vec![0u64; k]; k];
    for (row, &label) in x.iter().zip(y) {
        let predicted = model.predict(row)?;
        let ai = model
            .classes
            .iter()
            .position(|&c| c == label)
            .unwrap_or_else(|| panic!("label {label} not among model classes"));
        let pi = model.classes.iter().position(|&c| c == predicted).unwrap();
        confusion[ai][pi] += 1;
    }
    Ok(report_from_confusion(model.classes.clone(), confusion))
}
