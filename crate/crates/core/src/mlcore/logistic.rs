//! Logistic and softmax regression trained by deterministic full-batch
//! gradient descent on cross-entropy.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MlError {
    #[error("feature dimension mismatch: model expects {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("training needs at least two distinct labels (got {0} class)")]
    SingleClass(usize),
    #[error("training needs at least two rows")]
    TooFewRows,
    #[error("loss became non-finite at epoch {epoch}; lower the learning rate")]
    Diverged { epoch: usize },
    #[error("empty evaluation set")]
    EmptyEvaluation,
    #[error("component count {k} out of range 1..={max}")]
    BadComponentCount { k: usize, max: usize },
    #[error("model file is malformed: {0}")]
    BadModelFile(String),
    #[error("operation requires a binary model")]
    NotBinary,
}

/// Per-column standardization parameters applied before the linear map.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    pub fn fit(x: &[Vec<f64>]) -> Self {
        let n = x.len() as f64;
        let d = x[0].len();
        let mut mean = vec![0.0; d];
        for row in x {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= n;
        }
        let mut var = vec![0.0; d];
        for row in x {
            for j in 0..d {
                let delta = row[j] - mean[j];
                var[j] += delta * delta;
            }
        }
        let std = var
            .into_iter()
            .map(|v| {
                let s = (v / n).sqrt();
                if s > 0.0 { s } else { 1.0 } // constant columns pass through
            })
            .collect();
        Self { mean, std }
    }

    pub fn apply(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    Binary { weights: Vec<f64>, bias: f64 },
    Softmax { weights: Vec<Vec<f64>>, biases: Vec<f64> },
}

/// Learned classifier: linear map(s) plus the ordered class labels they
/// score. `classes[1]` is the positive class of a binary model.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    pub classes: Vec<u32>,
    pub kind: ModelKind,
    pub standardizer: Option<Standardizer>,
    pub final_loss: f64,
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl LogisticModel {
    pub fn dim(&self) -> usize {
        match &self.kind {
            ModelKind::Binary { weights, .. } => weights.len(),
            ModelKind::Softmax { weights, .. } => weights[0].len(),
        }
    }

    /// Probability of each class, in `classes` order.
    pub fn predict_proba(&self, row: &[f64]) -> Result<Vec<f64>, MlError> {
        if row.len() != self.dim() {
            return Err(MlError::DimensionMismatch { expected: self.dim(), got: row.len() });
        }
        let standardized;
        let features: &[f64] = match &self.standardizer {
            Some(s) => {
                standardized = s.apply(row);
                &standardized
            }
            None => row,
        };
        Ok(match &self.kind {
            ModelKind::Binary { weights, bias } => {
                let p = sigmoid(dot(weights, features) + bias);
                vec![1.0 - p, p]
            }
            ModelKind::Softmax { weights, biases } => {
                let logits: Vec<f64> = weights
                    .iter()
                    .zip(biases)
                    .map(|(w, b)| dot(w, features) + b)
                    .collect();
                softmax(&logits)
            }
        })
    }

    /// Predicted label: threshold 0.5 for binary, argmax otherwise.
    pub fn predict(&self, row: &[f64]) -> Result<u32, MlError> {
        let proba = self.predict_proba(row)?;
        let idx = match &self.kind {
            ModelKind::Binary { .. } => usize::from(proba[1] > 0.5),
            ModelKind::Softmax { .. } => argmax(&proba),
        };
        Ok(self.classes[idx])
    }

    /// Versioned text serialization: decimal weights in class order, bias,
    /// then the standardization parameters (or `none`).
    pub fn to_text(&self) -> String {
        let mut out = String::from("APLR v1\n");
        let _ = writeln!(
            out,
            "classes {}",
            self.classes.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
        );
        let _ = writeln!(out, "dim {}", self.dim());
        match &self.kind {
            ModelKind::Binary { weights, bias } => {
                out.push_str("kind binary\n");
                let _ = writeln!(out, "w {}", join_floats(weights));
                let _ = writeln!(out, "b {bias}");
            }
            ModelKind::Softmax { weights, biases } => {
                out.push_str("kind softmax\n");
                for w in weights {
                    let _ = writeln!(out, "w {}", join_floats(w));
                }
                let _ = writeln!(out, "b {}", join_floats(biases));
            }
        }
        match &self.standardizer {
            Some(s) => {
                let _ = writeln!(out, "standardize mean {}", join_floats(&s.mean));
                let _ = writeln!(out, "standardize std {}", join_floats(&s.std));
            }
            None => out.push_str("standardize none\n"),
        }
        let _ = writeln!(out, "loss {}", self.final_loss);
        out
    }

    pub fn from_text(text: &str) -> Result<Self, MlError> {
        let bad = |m: &str| MlError::BadModelFile(m.to_string());
        let mut lines = text.lines();
        if lines.next() != Some("APLR v1") {
            return Err(bad("missing APLR v1 header"));
        }
        let mut classes = Vec::new();
        let mut dim = 0usize;
        let mut kind_name = String::new();
        let mut weight_rows: Vec<Vec<f64>> = Vec::new();
        let mut biases: Vec<f64> = Vec::new();
        let mut std_mean: Option<Vec<f64>> = None;
        let mut std_std: Option<Vec<f64>> = None;
        let mut loss = f64::NAN;
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            match key {
                "classes" => {
                    classes = parse_ints(rest).map_err(|m| bad(&m))?;
                }
                "dim" => dim = rest.trim().parse().map_err(|_| bad("bad dim"))?,
                "kind" => kind_name = rest.trim().to_string(),
                "w" => weight_rows.push(parse_floats(rest).map_err(|m| bad(&m))?),
                "b" => biases = parse_floats(rest).map_err(|m| bad(&m))?,
                "standardize" => {
                    let rest = rest.trim();
                    if rest == "none" {
                        continue;
                    }
                    let (which, vals) = rest.split_once(' ').ok_or_else(|| bad("bad standardize line"))?;
                    let vals = parse_floats(vals).map_err(|m| bad(&m))?;
                    match which {
                        "mean" => std_mean = Some(vals),
                        "std" => std_std = Some(vals),
                        _ => return Err(bad("unknown standardize field")),
                    }
                }
                "loss" => loss = rest.trim().parse().map_err(|_| bad("bad loss"))?,
                _ => return Err(bad(&format!("unknown key {key:?}"))),
            }
        }
        if classes.len() < 2 {
            return Err(bad("need at least two classes"));
        }
        for row in &weight_rows {
            if row.len() != dim {
                return Err(bad("weight row length does not match dim"));
            }
        }
        let kind = match kind_name.as_str() {
            "binary" => {
                if weight_rows.len() != 1 || biases.len() != 1 {
                    return Err(bad("binary model needs one weight row and one bias"));
                }
                ModelKind::Binary { weights: weight_rows.pop().unwrap(), bias: biases[0] }
            }
            "softmax" => {
                if weight_rows.len() != classes.len() || biases.len() != classes.len() {
                    return Err(bad("softmax model needs one weight row and bias per class"));
                }
                ModelKind::Softmax { weights: weight_rows, biases }
            }
            other => return Err(bad(&format!("unknown kind {other:?}"))),
        };
        let standardizer = match (std_mean, std_std) {
            (Some(mean), Some(std)) => Some(Standardizer { mean, std }),
            (None, None) => None,
            _ => return Err(bad("standardize mean/std must appear together")),
        };
        Ok(Self { classes, kind, standardizer, final_loss: loss })
    }
}

fn join_floats(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split_whitespace()
        .map(|t| t.parse().map_err(|_| format!("bad float {t:?}")))
        .collect()
}

fn parse_ints(s: &str) -> Result<Vec<u32>, String> {
    s.split_whitespace()
        .map(|t| t.parse().map_err(|_| format!("bad integer {t:?}")))
        .collect()
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| (z - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// sigma(w . a + b) of a binary model; the probability that the positive
/// class (`classes[1]`) applies.
pub fn sigmoid_score(row: &[f64], model: &LogisticModel) -> Result<f64, MlError> {
    match &model.kind {
        ModelKind::Binary { .. } => Ok(model.predict_proba(row)?[1]),
        ModelKind::Softmax { .. } => Err(MlError::NotBinary),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    pub seed: u64,
    /// Standardize features to zero mean / unit variance before training.
    pub standardize: bool,
    /// Stop early once the gradient max-norm drops below this.
    pub grad_tol: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            epochs: 2000,
            l2: 0.0,
            seed: 0,
            standardize: true,
            grad_tol: 1e-10,
        }
    }
}

fn distinct_sorted(y: &[u32]) -> Vec<u32> {
    let mut classes: Vec<u32> = y.to_vec();
    classes.sort_unstable();
    classes.dedup();
    classes
}

/// Mean cross-entropy of a binary model on (0,1)-encoded targets, plus the
/// L2 penalty. Shared by training and the finite-difference gradient check.
pub fn binary_loss(x: &[Vec<f64>], targets: &[f64], weights: &[f64], bias: f64, l2: f64) -> f64 {
    let n = x.len() as f64;
    let mut loss = 0.0;
    for (row, &t) in x.iter().zip(targets) {
        let z = dot(weights, row) + bias;
        // log(1 + e^-z) evaluated stably on either side.
        let log1p_exp = if z >= 0.0 { (-z).exp().ln_1p() } else { -z + z.exp().ln_1p() };
        loss += (1.0 - t) * z + log1p_exp;
    }
    loss / n + 0.5 * l2 * weights.iter().map(|w| w * w).sum::<f64>()
}

/// Full-batch gradient descent for two classes. The smaller label becomes
/// class 0, the larger class 1.
pub fn train_logistic(
    x: &[Vec<f64>],
    y: &[u32],
    cfg: &TrainConfig,
) -> Result<LogisticModel, MlError> {
    if x.len() < 2 {
        return Err(MlError::TooFewRows);
    }
    assert_eq!(x.len(), y.len());
    let classes = distinct_sorted(y);
    if classes.len() != 2 {
        return Err(MlError::SingleClass(classes.len()));
    }
    let d = x[0].len();
    let standardizer = cfg.standardize.then(|| Standardizer::fit(x));
    let features: Vec<Vec<f64>> = match &standardizer {
        Some(s) => x.iter().map(|row| s.apply(row)).collect(),
        None => x.to_vec(),
    };
    let targets: Vec<f64> = y.iter().map(|&label| f64::from(label == classes[1])).collect();

    let n = features.len() as f64;
    let mut weights = vec![0.0f64; d];
    let mut bias = 0.0f64;
    let mut loss = f64::NAN;
    for epoch in 0..cfg.epochs {
        let mut grad_w = vec![0.0f64; d];
        let mut grad_b = 0.0f64;
        for (row, &t) in features.iter().zip(&targets) {
            let err = sigmoid(dot(&weights, row) + bias) - t;
            for (g, v) in grad_w.iter_mut().zip(row) {
                *g += err * v;
            }
            grad_b += err;
        }
        let mut max_grad = grad_b.abs() / n;
        for (g, w) in grad_w.iter_mut().zip(&weights) {
            *g = *g / n + cfg.l2 * w;
            max_grad = max_grad.max(g.abs());
        }
        grad_b /= n;
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= cfg.learning_rate * g;
        }
        bias -= cfg.learning_rate * grad_b;
        loss = binary_loss(&features, &targets, &weights, bias, cfg.l2);
        if !loss.is_finite() {
            return Err(MlError::Diverged { epoch });
        }
        if max_grad < cfg.grad_tol {
            break;
        }
    }
    Ok(LogisticModel {
        classes,
        kind: ModelKind::Binary { weights, bias },
        standardizer,
        final_loss: loss,
    })
}

/// Softmax cross-entropy on the standardized features; one weight row and
/// bias per class, classes in ascending label order.
pub fn train_softmax(
    x: &[Vec<f64>],
    y: &[u32],
    cfg: &TrainConfig,
) -> Result<LogisticModel, MlError> {
    if x.len() < 2 {
        return Err(MlError::TooFewRows);
    }
    assert_eq!(x.len(), y.len());
    let classes = distinct_sorted(y);
    if classes.len() < 2 {
        return Err(MlError::SingleClass(classes.len()));
    }
    let k = classes.len();
    let d = x[0].len();
    let standardizer = cfg.standardize.then(|| Standardizer::fit(x));
    let features: Vec<Vec<f64>> = match &standardizer {
        Some(s) => x.iter().map(|row| s.apply(row)).collect(),
        None => x.to_vec(),
    };
    let class_of: Vec<usize> = y
        .iter()
        .map(|label| classes.iter().position(|c| c == label).unwrap())
        .collect();

    let n = features.len() as f64;
    let mut weights = vec![vec![0.0f64; d]; k];
    let mut biases = vec![0.0f64; k];
    let mut loss = f64::NAN;
    for epoch in 0..cfg.epochs {
        let mut grad_w = vec![vec![0.0f64; d]; k];
        let mut grad_b = vec![0.0f64; k];
        let mut epoch_loss = 0.0f64;
        for (row, &ci) in features.iter().zip(&class_of) {
            let logits: Vec<f64> = weights
                .iter()
                .zip(&biases)
                .map(|(w, b)| dot(w, row) + b)
                .collect();
            let proba = softmax(&logits);
            epoch_loss -= proba[ci].max(1e-300).ln();
            for c in 0..k {
                let err = proba[c] - f64::from(c == ci);
                for (g, v) in grad_w[c].iter_mut().zip(row) {
                    *g += err * v;
                }
                grad_b[c] += err;
            }
        }
        let mut max_grad = 0.0f64;
        for c in 0..k {
            for (g, w) in grad_w[c].iter_mut().zip(&weights[c]) {
                *g = *g / n + cfg.l2 * w;
                max_grad = max_grad.max(g.abs());
            }
            grad_b[c] /= n;
            max_grad = max_grad.max(grad_b[c].abs());
        }
        for c in 0..k {
            for (w, g) in weights[c].iter_mut().zip(&grad_w[c]) {
                *w -= cfg.learning_rate * g;
            }
            biases[c] -= cfg.learning_rate * grad_b[c];
        }
        loss = epoch_loss / n
            + 0.5 * cfg.l2 * weights.iter().flatten().map(|w| w * w).sum::<f64>();
        if !loss.is_finite() {
            return Err(MlError::Diverged { epoch });
        }
        if max_grad < cfg.grad_tol {
            break;
        }
    }
    Ok(LogisticModel {
        classes,
        kind: ModelKind::Softmax { weights, biases },
        standardizer,
        final_loss: loss,
    })
}
