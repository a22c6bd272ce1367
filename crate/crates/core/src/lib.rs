pub mod algebra;
pub mod complex;
pub mod criterion;
pub mod error;
pub mod format;
pub mod gauge;
pub mod homology;
pub mod linalg;
pub mod maps;
pub mod models;
pub mod module;
pub mod report;
pub mod spectral;
