//! Tropical Plücker functions on truncated integer boxes.
//!
//! A function `f` on a truncated box `B_m^{m'}(a) = {x : 0 <= x <= a, m <= |x| <= m'}`
//! is a *tropical Plücker function* (TP-function) when it satisfies the TP3 relation
//!
//! ```text
//! f(x+1i+1k) + f(x+1j) = max{ f(x+1i+1j) + f(x+1k),  f(x+1i) + f(x+1j+1k) }
//! ```
//!
//! for all feasible `(x, i<j<k)` and the analogous TP4 relation for quadruples
//! `i<j<k<l`. This crate provides:
//!
//! * [`domain`] — lattice points, box shapes, fuzzy-interval classification and
//!   enumeration of the feasible TP3/TP4 corteges;
//! * [`tp`] — exact-rational TP-function storage, relation verification and
//!   reconstruction of the unique TP-function from values on the standard basis;
//! * [`flow`] — the flow-in-matrix model: grids, admissible flows, the weight
//!   matrix classes and the maps between basis values, matrices and functions;
//! * [`embed`] — reduction of general boxes to Boolean cubes via the block
//!   embedding, quasi-intervals and big-M basis lifting;
//! * [`tiling`] — rhombic tilings of the zonogon, wiring diagrams, hexagon
//!   flips, extension of point sets to tilings and value transport;
//! * [`properties`] — submodularity, skew-submodularity and discrete-concavity
//!   checkers on boxes, truncated boxes and bases;
//! * [`laurent`] — tropical Laurent polynomials expressing any value through
//!   basis values, and the semi-strict Gelfand–Tsetlin pattern route;
//! * [`oracle`] — independent brute-force oracles used by the differential
//!   test suites and the `oracle` CLI subcommand;
//! * [`cli`] — the command line front end.
//!
//! All arithmetic is exact (arbitrary-precision rationals); the TP relations are
//! equalities and are checked exactly.

pub mod cli;
pub mod domain;
pub mod embed;
pub mod error;
pub mod flow;
pub mod laurent;
pub mod oracle;
pub mod properties;
pub mod rat;
pub mod tiling;
pub mod tp;

pub use domain::{BoxShape, LatticePoint, PointClass, TruncatedBox};
pub use error::Error;
pub use rat::Rat;
