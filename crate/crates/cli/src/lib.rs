pub mod dsl;
pub mod exec;
pub mod json;

pub use dsl::{parse, ParseError, Workspace};
pub use exec::{run, Options, RunError, RunOutput, Status};
