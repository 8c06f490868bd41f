//! Kernels, maximum mean discrepancy and transfer component analysis over
//! objective-space samples.

mod kernel;
mod mmd;
mod model;

pub use kernel::{gram_matrix, kernel_eval, median_bandwidth, KernelSpec};
pub use mmd::{centering_matrix, mmd, scaling_matrix};
pub use model::{tca_fit, TcaModel};
