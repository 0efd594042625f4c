//! Free-group words and finitely presented groups.

pub mod homcount;
pub mod presentation;
pub mod syntax;
pub mod tietze;
pub mod word;

pub use homcount::{count_homomorphisms, count_homomorphisms_with_cap, FiniteTarget, HomCount};
pub use presentation::{
    direct_sum_with_z, free_product, quotient_by_normal_closure, GeneratorSymbol, Presentation,
    RenameMap,
};
pub use tietze::{
    tietze_simplify, word_trivial_under, Effort, Simplification, SimplificationCertificate, Step,
};
pub use word::{free_reduce, Letter, Word};
