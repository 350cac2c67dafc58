//! Verification suites.

pub mod drinfeld;
pub mod exchange;
pub mod intertwiner;
pub mod invertibility;
pub mod module;
pub mod normal_order;
pub mod oscillators;
pub mod report;
pub mod rmatrix;
pub mod scaling;
pub mod words;
