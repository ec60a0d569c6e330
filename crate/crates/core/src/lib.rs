//! One-shot distributed multicoloring.
//!
//! Every node of an interference graph picks a set of colors from its own ID,
//! its neighbors' IDs and (for randomized algorithms) everyone's random bits,
//! so that adjacent nodes never share a color. The sets double as TDMA slot
//! assignments.
//!
//! * [`graph`]: interference graphs, generators and the edge-list format.
//! * [`field`]: prime fields and bounded-degree polynomials.
//! * [`perm`]: the randomized and shared-order algorithms.
//! * [`algebraic`]: the explicit polynomial constructions.
//! * [`sim`]: the one-round message-passing harness.
//! * [`verify`] and [`nbr`]: checking colorings, on graphs and exhaustively.
//! * [`tdma`]: schedule export.

pub mod algebraic;
pub mod coloring;
pub mod combinatorics;
pub mod error;
pub mod field;
pub mod graph;
pub mod nbr;
pub mod perm;
pub mod sim;
pub mod tdma;
pub mod verify;

pub use coloring::{Color, ColorSet, Epsilon, Multicoloring, RunParams};
pub use error::{Error, ParseErrorKind, Result};
pub use graph::{Graph, NodeId, OneHopView};
