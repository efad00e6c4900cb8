//! Self-organizing library chains on shelf trees: state spaces, moves,
//! symbolic transition matrices, closed-form and recursive spectra, monoid
//! structure, and an exact characteristic-polynomial oracle.

pub mod cli;
pub mod error;
pub mod extend;
pub mod forest;
pub mod instance;
pub mod linalg;
pub mod monoid;
pub mod oracle;
pub mod poset;
pub mod shuffle;
pub mod spectrum;
pub mod tree;

pub use error::{Error, Result};
pub use poset::{Label, Poset};
pub use spectrum::{Spectrum, SpectrumEntry};
pub use tree::{LeafSet, ShelfTree, State};
