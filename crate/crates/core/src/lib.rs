//! Topp-Leone generated q-exponential (TLqE) lifetime distributions.
//!
//! Distribution code is generic over the floating-point type through
//! [`Scalar`] (`f32` or `f64`); fitting, the simulation harness and the
//! aliases below work in `f64`.

pub mod bayes;
mod dataset;
pub mod dist;
mod error;
pub mod fit;
pub mod likelihood;
pub mod optim;
pub mod sampling;
mod scalar;
pub mod simstudy;
pub mod special;

pub use dataset::{Dataset, BALL_BEARING};
pub use dist::{
    Exponential, LifetimeDistribution, QExponential, StandardUniform, TlGenerated, Tle, Tlqe,
    ToppLeone, Q_EPS,
};
pub use error::{Error, Result};
pub use fit::{fit_tle, fit_tlqe, Estimates, FitResult, ModelKind};
pub use sampling::{Model, SampleRequest};
pub use scalar::Scalar;

pub type TlqeF64 = Tlqe<f64>;
pub type TlqeF32 = Tlqe<f32>;
pub type TleF64 = Tle<f64>;
pub type TleF32 = Tle<f32>;
pub type QExponentialF64 = QExponential<f64>;
pub type QExponentialF32 = QExponential<f32>;
pub type ToppLeoneF64 = ToppLeone<f64>;
pub type ToppLeoneF32 = ToppLeone<f32>;
pub type DatasetF64 = Dataset<f64>;
pub type ModelF64 = Model<f64>;
pub type PriorSpecF64 = bayes::PriorSpec<f64>;
pub type PosteriorApproxF64 = bayes::PosteriorApprox<f64>;
