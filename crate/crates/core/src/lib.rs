pub mod cli;
pub mod correlations;
pub mod dynamics;
pub mod error;
pub mod measurement;
pub mod numerics;
pub mod optimize;
pub mod steering;
pub mod suites;
pub mod xstate;

pub use error::{DiscordError, Result};
pub use xstate::{FilterOp, XState};
