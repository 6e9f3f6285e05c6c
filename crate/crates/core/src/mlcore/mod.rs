//! From-scratch learning machinery: binary and multinomial logistic
//! regression trained by full-batch gradient descent, evaluation metrics,
//! PCA via a cyclic Jacobi eigensolver, and the published fixed-weight
//! heuristic rank classifiers.

pub mod logistic;
pub mod metrics;
pub mod pca;
pub mod presets;
pub mod sampling;

pub use logistic::{
    sigmoid, sigmoid_score, train_logistic, train_softmax, LogisticModel, MlError, ModelKind,
    Standardizer, TrainConfig,
};
pub use metrics::{evaluate, EvalReport};
pub use pca::{pca_fit, pca_transform, PcaModel};
pub use presets::{heuristic_preset, heuristic_presets};
pub use sampling::{balanced_sample, stratified_split};
