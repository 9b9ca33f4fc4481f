//! Exact decision engine for continuous-time quantum walks driven by the
//! normalized Laplacian of a finite simple graph.
//!
//! All structural decisions (cospectrality, strong cospectrality, periodicity,
//! perfect state transfer) are made in exact rational arithmetic on the
//! random-walk Laplacian `D^{-1}L`, which is similar to the normalized
//! Laplacian and keeps every intermediate quantity in `Q`. Floating point
//! appears only in [`oracle`], an independent numeric cross-check that never
//! feeds back into a decision.
//!
//! Module map:
//!
//! * [`exactq`]: arbitrary-precision rationals, dense polynomials, rational
//!   root extraction, polynomial gcd.
//! * [`linalg`]: exact dense matrices, characteristic and local minimal
//!   polynomials, eigenprojection images.
//! * [`graphs`]: graph type, graph6 and edge-list formats, connectivity,
//!   bipartiteness, walk matrices, free-tree generation.
//! * [`spectra`]: vertex spectral profiles, cospectrality and strong
//!   cospectrality decisions.
//! * [`transfer`]: periodicity and perfect-state-transfer verdicts with
//!   exact certificates and closed refusal reasons.
//! * [`oracle`]: float eigendecomposition (Jacobi), fidelity curves,
//!   certificate verification.
//! * [`census`]: resumable tree census with a JSONL event log.

pub mod census;
pub mod exactq;
pub mod graphs;
pub mod linalg;
pub mod oracle;
pub mod spectra;
pub mod transfer;

pub use exactq::{RatPoly, Rational};
pub use graphs::Graph;
