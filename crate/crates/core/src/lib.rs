pub mod category;
pub mod cli;
pub mod codec;
pub mod dot;
pub mod dpo;
pub mod error;
pub mod finset;
pub mod laws;
pub mod multigraph;
#[cfg(feature = "oracles")]
pub mod oracles;
pub mod presheaf;
pub mod sampler;
pub mod simplegraph;
pub mod slice;
pub mod suite;
pub mod universal;

pub use category::{Category, Concrete, Cospan, MorphismClass, Span, Square};
pub use error::{CatError, Result};
