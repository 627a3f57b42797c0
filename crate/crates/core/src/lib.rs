//! Exact computation in finite-dimensional normed spaces over ultrametric
//! valued fields.
//!
//! The crate covers three regimes of scalars: the rationals with a `p`-adic
//! valuation (`padic:p`), the prime fields `GF(q)` with the trivial valuation
//! (`gf:q`), and the rationals with the trivial valuation (`trivial:q`).
//! Valuations and norms are exact rationals ([`Magnitude`]), so metric
//! equalities such as `d(x, y) = d(x, z) + d(z, y)` are decided exactly.
//!
//! Under the one-norm `|a_1| + ... + |a_n|` a point `z` lies metrically
//! between `x` and `y` exactly when every coordinate `z_i` is `x_i` or `y_i`
//! ([`betweenness`]), and every distance-preserving bijection is axial: a
//! translation composed with a coordinate permutation and per-coordinate
//! scalar isometries ([`isometry`]). The [`oracle`] module checks both facts
//! by exhaustive search over small finite fields.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod betweenness;
mod error;
pub mod field;
pub mod isometry;
pub mod norm;
pub mod oracle;
pub mod sample;

pub use betweenness::{
    coordinate_between, is_metrically_between, minimize_two_point, segment, uniqueness_check,
    SegmentEnumeration, TwoPointMinimum, DEFAULT_SEGMENT_CAP,
};
pub use error::{Error, Result};
pub use field::{check_valuation_axioms, FieldSpec, Magnitude, Scalar, ValuationReport};
pub use isometry::{
    decompose, make_sup_norm_counterexample, verify_isometry, AxialIsometry, IsometryReport,
    ProbeMap, ScalarIsometry,
};
pub use norm::{check_norm_axioms, distance, norm, NormReport, NormSamples, NormSpec, Vector};
