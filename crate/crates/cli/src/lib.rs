//! Job runner behind the `gateforge` command: reads a JSON job spec, runs
//! synthesis, evolution, fitting or auditing, and produces a JSON report.

pub mod job;
pub mod report;
pub mod spec;

pub use job::{
    input_error, run_document, run_job, JobOutcome, Overrides, EXIT_FAILED, EXIT_INPUT, EXIT_OK,
};
pub use spec::{
    validate_spec, Command, FieldError, GateParams, JobSpec, ProtocolSpec, ShapeSpec, SpecError,
};
