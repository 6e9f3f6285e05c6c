//! Published fixed-weight heuristic classifiers on the first ten
//! coefficients (a_2, ..., a_29). The score is the probability that the
//! curve has rank >= 2; threshold 0.5.

use super::logistic::{LogisticModel, ModelKind};

/// Class labels for the heuristic models: 0 means rank < 2, 1 means
/// rank >= 2.
pub const RANK_LT2: u32 = 0;
pub const RANK_GE2: u32 = 1;

const COND_10K_20K_WEIGHTS: [f64; 10] = [
    -1.1198144,
    -1.12733444,
    -0.98921727,
    -0.87923555,
    -0.57809252,
    -0.51279302,
    -0.32884407,
    -0.3539072,
    -0.24136925,
    -0.19393439,
];
const COND_10K_20K_BIAS: f64 = -5.62771169;

const COND_1_10K_WEIGHTS: [f64; 10] = [
    -1.41299148,
    -1.77879752,
    -1.38817256,
    -1.03428287,
    -0.71286324,
    -0.59119957,
    -0.40613106,
    -0.39675042,
    -0.2878296,
    -0.22388697,
];
const COND_1_10K_BIAS: f64 = -8.77332846;

fn preset(weights: &[f64; 10], bias: f64) -> LogisticModel {
    LogisticModel {
        classes: vec![RANK_LT2, RANK_GE2],
        kind: ModelKind::Binary { weights: weights.to_vec(), bias },
        // Trained on raw a_p values; no feature standardization.
        standardizer: None,
        final_loss: f64::NAN,
    }
}

/// The two published 10-dimensional models, keyed by conductor range.
pub fn heuristic_presets() -> Vec<(&'static str, LogisticModel)> {
    vec![
        ("cond-10k-20k", preset(&COND_10K_20K_WEIGHTS, COND_10K_20K_BIAS)),
        ("cond-1-10k", preset(&COND_1_10K_WEIGHTS, COND_1_10K_BIAS)),
    ]
}

/// Look up a preset by name.
pub fn heuristic_preset(name: &str) -> Option<LogisticModel> {
    heuristic_presets().into_iter().find(|(n, _)| *n == name).map(|(_, m)| m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlcore::logistic::sigmoid_score;

    #[test]
    fn preset_shapes_and_entries() {
        let presets = heuristic_presets();
        assert_eq!(presets.len(), 2);
        for (_, model) in &presets {
            assert_eq!(model.dim(), 10);
        }
        let (_, big) = &presets[0];
        match &big.kind {
            ModelKind::Binary { weights, .. } => assert_eq!(weights[0], -1.1198144),
            _ => unreachable!(),
        }
        let small = heuristic_preset("cond-1-10k").unwrap();
        match &small.kind {
            ModelKind::Binary { bias, .. } => assert_eq!(*bias, -8.77332846),
            _ => unreachable!(),
        }
        assert!(heuristic_preset("nope").is_none());
    }

    #[test]
    fn worked_examples_reproduce() {
        let model = heuristic_preset("cond-10k-20k").unwrap();
        // Rank-1 curve of conductor 15015.
        let low = [1.0, 1.0, 1.0, 1.0, -1.0, 1.0, 2.0, -4.0, -4.0, 6.0];
        let r = sigmoid_score(&low, &model).unwrap();
        assert!((r - 0.00011).abs() < 5e-5, "got {r}");
        // Rank-2 curve of conductor 15080.
        let high = [0.0, -2.0, -1.0, -4.0, 0.0, 1.0, 0.0, -8.0, 0.0, -1.0];
        let r = sigmoid_score(&high, &model).unwrap();
        assert!((r - 0.97456).abs() < 5e-5, "got {r}");
    }
}
