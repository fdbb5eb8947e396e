pub mod archive;
pub mod clock;
pub mod decay;
pub mod eval;
pub mod fetch;
mod pool;
pub mod probe;
pub mod replace;
pub mod social;
pub mod status;
pub mod textpipe;
pub mod uri;

/// Version stamped on every JSON document this crate emits.
pub const SCHEMA_VERSION: u32 = 1;
