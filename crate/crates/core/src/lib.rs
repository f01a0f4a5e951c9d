//! Polysets as elements of free modules and relational queries as
//! (multi)linear maps on symbolic terms.
//!
//! Terms ([`Term`]) are built without any simplification. Normalization
//! ([`normalize`]) turns them into canonical trie-backed [`NormalForm`]s, and
//! products are evaluated by the worst-case optimal algorithm in [`wco`].
//! The [`rel`] module layers named relations and a small query language on
//! top.

pub mod error;
pub mod fold;
pub mod iso;
pub mod metrics;
pub mod normal;
pub mod rel;
pub mod ring;
pub mod space;
pub mod term;
pub mod trie;
pub mod value;
pub mod wco;

#[cfg(any(test, feature = "testing"))]
pub mod testing;

pub use error::{Error, Result};
pub use normal::{equal, normalize, NormalForm, Path, PathItem};
pub use ring::{Gf2, Integer, Real, Ring};
pub use space::Space;
pub use term::Term;
pub use value::{PrimSet, Value};
