pub mod classify;
pub mod construct;
pub mod exactnum;
pub mod json;
pub mod matrix;
pub mod ncpoly;
pub mod nilflag;
pub mod quat;
pub mod scalar;
pub mod verify;

pub use exactnum::{MinPoly, NfElem, Rat};
pub use scalar::Scalar;
