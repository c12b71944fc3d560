//! Certified piercing of families of translates and homothets of planar
//! convex bodies and axis boxes, with an exact oracle for small families.

pub mod bodies;
pub mod certificate;
pub mod covers;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod geom;
pub mod io;
pub mod oracle;
pub mod pierce;
pub mod sandwich;
pub mod svg;

pub use error::{Error, Result};
