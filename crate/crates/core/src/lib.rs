//! Distinguishability, class separation and modal definability for finite
//! pointed Kripke models.
//!
//! The crate decides whether two pointed models are bisimilar and, when they
//! are not, builds a depth-minimal modal formula telling them apart. The same
//! machinery is lifted to finite classes of models: separating one class
//! from another, class equivalence, definability of a subclass, and the
//! comparison of depth-bounded fragments. An exhaustive formula search and a
//! clause-by-clause bisimulation check serve as independent references, and
//! the bisimulation game is available for analysis and interactive play.

pub mod bisim;
pub mod catalog;
pub mod classes;
pub mod error;
pub mod games;
pub mod kripke;
pub mod oracle;
pub mod semantics;
pub mod syntax;

pub use bisim::{
    bisimilar, characteristic_formula, coarsest_bisim, distinguishing_formula, k_bisimilar, DistinguishResult,
    Partition,
};
pub use classes::{
    asymp, class_equiv, class_separation, compare_fragments, definable, lift_exists, lift_forall, Definability,
    Order, SeparationResult,
};
pub use error::{Error, ResourceError, Result};
pub use games::{class_game_winner, extract_strategy, game_winner, Rounds, Winner};
pub use kripke::{KripkeModel, ModelClass, PointedModel};
pub use oracle::{oracle_bisim_check, oracle_separable};
pub use semantics::{eval, sep_check, Polarity};
pub use syntax::{parse_formula, print_formula, Alphabet, Formula};
