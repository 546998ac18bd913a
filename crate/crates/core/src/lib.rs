//! Order sequences, Frobenius order sequences and point-count bounds for
//! plane curves over finite fields.

pub mod bipoly;
pub mod bounds;
pub mod catalog;
pub mod census;
pub mod error;
pub mod field;
pub mod funcfield;
pub mod local;
pub mod orders;
pub mod poly;
pub mod polymat;
pub mod series;
pub mod suite;

pub use error::{Error, Result};
