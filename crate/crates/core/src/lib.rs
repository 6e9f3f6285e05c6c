//! Dirichlet coefficients of elliptic curves over Q and the statistics built
//! on top of them: point counting over F_p, dataset slicing by rank and
//! conductor, oscillating averages with curve fitting, and from-scratch
//! logistic regression / PCA for rank classification.

pub mod curve_arith;
pub mod dataset;
pub mod fitkit;
pub mod mlcore;
pub mod murmur;

pub use curve_arith::{ApVector, PrimeTable, WeierstrassCoefficients};
pub use dataset::{ApMatrix, CurveRecord, DatasetSlice};
pub use fitkit::FitParams;
pub use mlcore::{EvalReport, LogisticModel, PcaModel};
pub use murmur::{Histogram, MurmurationSeries};
