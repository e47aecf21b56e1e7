//! Declarative jobs for the `formal-schubert` command: a JSON job file in,
//! one canonical JSON document out.

mod job;

pub use job::{run_job, Command, JobSpec, RunOptions};

/// Serializes a job result the way the binary prints it.
pub fn render(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
