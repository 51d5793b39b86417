//! Rate regions for three-user Gaussian cognitive interference channels.
//!
//! The crate evaluates the achievable regions of the cumulative (CuMS),
//! primary-only (PrMS) and cognitive-only (CoMS) message-sharing schemes,
//! the closed-form corollary rate points, and broadcast-channel outer bounds.
//!
//! Each capability has a runnable example:
//!
//! ```text
//! cargo run --example covariance_mi
//! cargo run --example constraint_dump
//! cargo run --example vertex_enumeration
//! cargo run --example achievable_region
//! cargo run --example region_slices
//! cargo run --example outer_bound
//! cargo run --example corollary_points
//! cargo run --example discrete_oracle
//! ```

pub mod achievable;
pub mod cli;
pub mod constraints;
pub mod corollary;
pub mod dmc;
pub mod error;
pub mod gauss;
pub mod hull3d;
pub mod model;
pub mod outer;
pub mod polytope;
pub mod region3;
pub mod verify;

pub use error::{Error, Result};
