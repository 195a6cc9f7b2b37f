//! Decomposition-ensemble forecasting for monthly count series.
//!
//! The pipeline decomposes a monthly series with STL, trains a (possibly different)
//! regressor per component, forecasts one and two steps ahead recursively, recomposes
//! the component forecasts by summation, and compares models with RRMSE, R² and the
//! Diebold-Mariano test.

pub mod config;
pub mod ensemble;
pub mod error;
pub mod evaluation;
pub mod learners;
pub mod plot;
pub mod preprocess;
pub mod series;
pub mod stl;

pub use error::{Error, Result};
