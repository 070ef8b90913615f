//! Construction, measurement and numerical Cheeger analysis of planar
//! domains that are their own unique Cheeger sets.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cantor;
pub mod config;
pub mod domain;
pub mod error;
pub mod geom;
pub mod interval;
pub mod measure;
pub mod porous;
pub mod raster;
pub mod render;
pub mod solver;
pub mod verify;

pub use domain::DomainSpec;
pub use error::{Condition, Error, Result};
pub use geom::{CircularArc, Disk, Orientation, Point2, Segment};
pub use interval::IntervalValue;
