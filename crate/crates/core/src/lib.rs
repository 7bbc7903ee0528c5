#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod binomial;
pub mod elliptic;
pub mod error;
pub mod mahler;
pub mod multipolylog;
pub mod polylog;
pub mod qseries;
pub mod quadrature;
pub mod registry;
pub mod trig_integrals;
pub mod tsst;

pub use error::{Error, Result};
pub use polylog::{ComplexValue, Constants, CATALAN, ZETA3};
pub use mahler::{LaurentPoly, MahlerConfig, MahlerMethod};
pub use quadrature::{QuadResult, Tolerance};
pub use registry::{IdentityRecord, IdentityReport, RunOptions, Side};
