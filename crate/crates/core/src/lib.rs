//! Exchange symmetry and entanglement of n-partite pure and mixed states.
//!
//! States live on `(C^d)^{⊗n}` with amplitudes stored in row-major order,
//! party 0 slowest. Party indices are 0-based in the API and 1-based in
//! anything printed for people.
//!
//! ```
//! use symsep::families::ghz;
//! use symsep::separability::{classify, Verdict};
//!
//! let c = classify(&ghz(3, 2).unwrap()).unwrap();
//! assert_eq!(c.verdict, Verdict::GloballyEntangled);
//! ```

pub mod error;
pub mod families;
pub mod limits;
pub mod mixed;
pub mod permanent;
pub mod permutation;
pub mod separability;
pub mod state;
pub mod statefile;
pub mod symmetry;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use mixed::{Ensemble, Member};
pub use permanent::GramMatrix;
pub use permutation::Permutation;
pub use separability::{classify, Bipartition, Classification, Verdict};
pub use state::{DensityMatrix, ProductState, PureState, C64};
pub use statefile::{LoadedState, StateFile};
