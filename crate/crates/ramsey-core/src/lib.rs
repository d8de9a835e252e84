//! Exact combinatorics of finite n-colorable and n-chromatic graphs.
//!
//! The crate computes the quantities that control how many colors are
//! unavoidable when copies of a small graph are colored inside a larger one:
//! the ordered extension count sigma (proper colorings of an ordered graph),
//! the unordered extension count tau (order-and-coloring expansions up to
//! automorphism), and the order-expansion degree |X|! / |Aut(X)|. Around
//! those sit an exhaustive arrow-relation checker, the disjoint-union
//! gadget and extension-type colorings that witness lower bounds, and the
//! monotone reordering that links ordered and unordered results.
//!
//! Everything is exact and desk scale: operations refuse inputs past their
//! size caps instead of approximating.

pub mod arrows;
pub mod canonical;
pub mod classes;
pub mod codec;
pub mod degrees;
pub mod error;
pub mod structures;

pub use error::{Error, Result};
pub use structures::{ColoringOfCopies, Graph, OrderedColoredGraph};
