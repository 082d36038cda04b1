//! Numerical toolkit for general Dirichlet series `Σ a_n e^{-λ_n s}` and
//! the geometry of their pre-images.

pub mod atlas;
pub mod bohr;
pub mod config;
pub mod gamma;
pub mod geometry;
pub mod jet;
pub mod lifting;
pub mod models;
pub mod series;
pub mod sum;
pub mod zeros;
