//! Exact analysis of two-dimensional digital nets.
//!
//! The crate constructs digital (0,m,2)-nets and related low-discrepancy
//! point sets over power grids, computes their dispersion (the area of the
//! largest axis-parallel box with point-free interior) exactly in rational
//! arithmetic, evaluates the catalog of closed-form dispersion bounds, runs
//! the exhaustive dyadic coefficient-case check behind the NUT lower bound,
//! and measures star, L2 and extreme discrepancy — all with exact integer /
//! rational arithmetic end to end.

pub mod bounds;
pub mod discrepancy;
pub mod empty_box;
pub mod error;
pub mod gf;
pub mod net;
pub mod pointset;
pub mod rational;
pub mod theorem3;

pub use error::{Error, Result};
pub use gf::{net_rank_condition, GFMatrix, Triangularity};
pub use pointset::{box_is_interior_empty, BoxReport, GridPointSet};
pub use rational::{format_rational, parse_rational, rational_cmp, Rational};
