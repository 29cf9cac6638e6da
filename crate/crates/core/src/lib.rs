//! Numerical laboratory for vortex patches with corners.

pub mod angle_odes;
pub mod angular_profile;
pub mod contour_dynamics;
pub mod effective_corner;
pub mod error;
pub mod geometry;
pub mod homogeneous_transport;
pub mod ode;
pub mod polar_elliptic;
pub mod quad;
pub mod velocity_field;

pub use error::{Error, Result};
