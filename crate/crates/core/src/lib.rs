pub mod arith;
pub mod cli;
pub mod error;
pub mod f2;
pub mod family;
pub mod lfunction;
pub mod localdescent;
pub mod points;
pub mod quadfield;
pub mod redei;
pub mod selmer;

pub use error::{Error, Result};
