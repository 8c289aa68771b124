//! Classical and EWL-quantized analysis of two small poker endgames.

pub mod algebra;
pub mod error;
pub mod ewl;
pub mod game;
pub mod json;
pub mod mc;
pub mod poker;
pub mod quantized;
pub mod strategic;
pub mod verify;

pub use error::{Error, Result};
pub use game::{NormalForm, Rational, StrategicGame};
