//! Exact truncated arithmetic: cyclotomic rationals, Puiseux series in one
//! variable, and two-variable p/q series.  Everything downstream is pure
//! computation on these values; all of them are immutable after
//! construction and freely shareable across threads.

pub mod biseries;
pub mod cyc;
pub mod puiseux;

pub use biseries::BiSeries;
pub use cyc::{fmt_q, qr, qz, rat, Cyc, Q, Rat};
pub use puiseux::{Bound, PuiseuxSeries};
