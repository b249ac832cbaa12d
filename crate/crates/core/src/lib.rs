//! Approachability for repeated games with vector payoffs.
//!
//! The crate covers full monitoring (Blackwell's projection strategy) and
//! partial monitoring, where the player only sees random signals whose law is
//! controlled by a signaling structure. Under partial monitoring the central
//! objects are flags (the vector of signal laws induced by Nature's mixed
//! action), the set of payoffs compatible with a flag, and its upper-right
//! corner, which serves as a surrogate payoff.
//!
//! Module map:
//!
//! - [`geometry`]: points, simplex vectors, target sets, projections, support functions
//! - [`lp`]: dense two-phase simplex, zero-sum matrix game values, vertex enumeration
//! - [`game`]: the game description, flags, mixed payoffs and seeded round sampling
//! - [`monitoring`]: flag fibers, compatible payoff sets, upper-right corners
//! - [`conditions`]: dual and primal approachability checks with certificates
//! - [`strategies`]: Blackwell, surrogate-payoff and block strategies plus Nature policies
//! - [`lifting`]: polytope to orthant reduction and support-function outer approximations
//! - [`kohlberg`]: simultaneous games, non-revealing profiles and concavification
//! - [`cli`]: the `approachkit` command line front end
//!
//! Runnable walkthroughs live in `examples/`; `cargo run --example counter_example`
//! is a good place to start.

pub mod cli;
pub mod conditions;
pub mod config;
pub mod error;
pub mod game;
pub mod geometry;
pub mod kohlberg;
pub mod lifting;
pub mod lp;
pub mod monitoring;
pub mod report;
pub mod strategies;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use game::{Flag, GameSpec};
pub use geometry::{Point, SimplexVector, TargetSet};
