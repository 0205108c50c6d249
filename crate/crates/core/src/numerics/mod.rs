//! Numerical building blocks shared by the analyses.

pub mod fit;
pub mod golden;
pub mod grid;
pub mod hermitian;
pub mod quadrature;

pub use fit::{fit_line, loglog_slope, LineFit};
pub use golden::{golden_max, grid_max, sup_over_line, LineSup};
pub use grid::{span_decades, GeometricGrid};
pub use hermitian::{extreme_eigenvalues, ExtremeEigen};
pub use quadrature::{integrate, integrate_split, QuadOptions, Quadrature};
