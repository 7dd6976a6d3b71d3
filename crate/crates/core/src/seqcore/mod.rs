//! Non-increasing infinitesimal step functions and their asymptotic indices.

mod eccentricity;
mod indices;
mod policy;
mod step;
mod summability;

pub use eccentricity::{eccentricity, EccentricityReport, EccentricityVerdict};
pub use indices::{
    indices, traceability_interval, IndexDiagnostics, IndexReport, LogProfile,
    TraceabilityInterval, WindowStat,
};
pub use policy::{GridSpec, WindowPolicy};
pub use step::{build_step_function, Step, StepFunction};
pub use summability::{
    classify, integral_s, Branch, IntegralReport, Summability, SummabilityReport,
};
