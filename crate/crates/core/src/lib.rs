//! Exact Hochschild cohomology of finite group algebras.

pub mod augmentation;
pub mod cli;
pub mod complexes;
pub mod corpus;
pub mod error;
pub mod groups;
pub mod hochschild;
pub mod io;
pub mod linalg;
pub mod scalars;
pub mod shapiro;

pub use error::{Error, Result};
