//! Expected-utility portfolio optimization when risky returns follow a
//! normal mean-variance mixture law X = mu + gamma Z + sqrt(Z) A N.
//!
//! The library exposes the mixing laws (Laplace transforms, critical
//! values, moments, samplers), the market model, the exponential-utility
//! closed-form solver, the general concave-utility reduction to a 1-D
//! maximization, and Monte-Carlo verification oracles.

pub mod error;
pub mod golden;
pub mod linalg;
pub mod special;
pub mod quad;
pub mod mixing;
pub mod market;
pub mod utility;
pub mod exp_opt;
pub mod concave;
pub mod oracle;

pub use error::{Error, Result};
pub use market::NmvmModel;
pub use mixing::MixingLaw;
pub use utility::UtilitySpec;
