//! Configuration files, CSV/JSON output, run manifests and the command line.

pub mod cli;
mod config;
pub mod csv;
mod manifest;
mod verify;

pub use config::{
    cache_key, ComparatorKind, GridSection, OutputSection, PhysicsSection, RunConfig,
    SolverSection, SweepSection, OUTPUT_DIR_ENV, WORKERS_ENV,
};
pub use manifest::{
    inventory, FileEntry, JobStatus, OutputLock, RunManifest, LOCK_FILE, MANIFEST_FILE,
};
pub use verify::{run_verify, Check, VerifyReport};
