//! Construction scripts over the luttinger-core engines.
//!
//! A script binds catalog blocks, applies fiber sums and surgeries, and
//! asserts facts about the results:
//!
//! ```text
//! block W = builtin("matsumoto_W")
//! block B = builtin("block_B")
//! let R = fiber_sum(W.F, B.G, match=[a1->x1, b1->y1, a2->x2, b2->y2])
//! assert euler(R) == 8
//! assert abelianization(closed_pi1(R)) == Z^2
//! ```

pub mod eval;
pub mod parse;
pub mod script;

pub use eval::{run, RunOptions, RunReport};
pub use parse::{parse, Diagnostic};
pub use script::Script;
