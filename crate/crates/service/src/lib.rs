//! Time-travel stepping over `mkstep-core` programs: sessions with a
//! history zipper, versioned JSON snapshots, an HTTP API and a CLI.

pub mod api;
pub mod cli;
pub mod session;
pub mod snapshot;
pub mod store;
pub mod zipper;

pub use session::{Session, SessionError};
pub use snapshot::{Snapshot, SnapshotView, SCHEMA_VERSION};
pub use store::SessionStore;
pub use zipper::HistoryZipper;
