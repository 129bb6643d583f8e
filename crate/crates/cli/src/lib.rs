//! Benchmark harness: generators for the two benchmark families, the
//! experiment runners, and trace file handling. The `tdve` binary in this
//! crate is the command-line front end over the whole toolchain.

pub mod experiments;
pub mod fischer;
pub mod preemptive;
pub mod trace;

pub use experiments::{
    csv, fischer_row, lower_fischer, run_experiment1, run_experiment2, ExperimentRow, HarnessError,
    MethodMode, ObservePlacement, CSV_HEADER,
};
pub use fischer::{gen_fischer, mutual_exclusion_bad, FischerError, FischerParams};
pub use preemptive::{gen_preemptive, PreemptiveError};
pub use trace::{format_trace, replay};
