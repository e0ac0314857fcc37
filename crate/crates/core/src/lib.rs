pub mod contfrac;
pub mod corpus;
pub mod disc;
pub mod error;
pub mod exact;
pub mod expsum;
pub mod interval;
pub mod numtheory;
pub mod par;
pub mod perm;
pub mod quadratic;
pub mod scan;
pub mod sos;
pub mod stats;

pub use error::{Error, Result};
