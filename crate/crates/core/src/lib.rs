//! Cassinian metric geometry on proper subdomains of R^n.
//!
//! The crate evaluates the Cassinian metric `c_D` together with the
//! distance-ratio, hyperbolic and quasihyperbolic metrics, and runs the
//! numerical experiments built on them: Möbius distortion of punctured balls,
//! tracing and convexity of metric balls, and inclusion radii between balls
//! of different metrics.
//!
//! Sweeps run through [`Execution`]; with the default `parallel` feature they
//! fan out over rayon, otherwise everything runs on the calling thread.

pub mod analysis;
pub mod balls;
pub mod boundary;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod metrics;
pub mod moebius;
pub mod optimize;

pub use error::{Error, ErrorClass, Result};
pub use exec::Execution;
pub use geometry::{Domain, Point, Polyline};
pub use metrics::MetricKind;
