//! Exact computations around the rigid local systems `F_{p,D}` on the affine
//! line: their Frobenius trace functions as cyclotomic integers, the base-`p`
//! digit-sum criterion for finite monodromy together with its Kubert
//! `V`-function form, and invariant-space dimensions (moments) of finite
//! subgroups of `Sp(6)` against the ambient group.
//!
//! Everything here is pure and allocation-only; IO, parallel drivers and the
//! command line live in the `finmono` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod cyclotomic;
pub mod digit_criterion;
mod error;
pub mod finite_field;
pub mod group_moments;
mod primes;
pub mod search;
pub mod trace_engine;

pub use cyclotomic::{gauss_sqrt, CycloInt, CycloRat, QuadReal, Valuation};
pub use digit_criterion::{
    criterion_check, criterion_depth_scan, digit_sum_inf, digit_sum_r, kubert_classify,
    v_criterion_check, v_function, CriterionReport, CriterionStatus, DepthScan, DepthScanner,
    KubertCase,
};
pub use error::{Error, Result};
pub use finite_field::{FFElement, FieldSpec};
pub use group_moments::{group_moment, moment_comparison, sp6_moment, CharacterTable, ClassEntry, MomentRow};
pub use primes::{is_prime, validate_pair};
pub use trace_engine::{Sheaf, TraceEngine, TraceReport, TraceRow};
