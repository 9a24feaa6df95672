//! Certified bounds on the joint spectral radius of a finite matrix set.
//!
//! Upper bounds come from graph Lyapunov functions on path-complete graphs,
//! found by bisection on a scaling `γ` over semidefinite feasibility
//! problems solved in-crate. Lower bounds come from spectral radii of
//! enumerated products.

pub mod engine;
pub mod error;
pub mod families;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod lmi;
pub mod reports;
pub mod sdp;

pub use error::{JsrError, Result};
