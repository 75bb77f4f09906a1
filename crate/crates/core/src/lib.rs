//! Quantum channels and superchannels in their Choi, Kraus, Stinespring and
//! Liouville forms.
//!
//! The crate is organized around [`LabeledOperator`], a dense complex matrix
//! whose rows and columns are indexed by ordered lists of labeled systems.
//! On top of it sit
//!
//! - [`channel`]: channel representations, conversions, validation and the
//!   link product,
//! - [`superchannel`]: superchannel Choi operators, their Kraus, Stinespring
//!   and Liouville forms, sequential realization and memory cost,
//! - [`breaking`]: PPT-based classification of entanglement-breaking
//!   channels and superchannels,
//! - [`io`]: the JSON document format used by the command-line tool.
//!
//! Composite indices are row-major over the listed system order, and
//! `vec(M)` places the input copy first: `vec(M)[(i, a)] = M[a, i]`.
//!
//! ```
//! use supermaps::channel::{choi_from_kraus, random_channel};
//! use supermaps::random::rng;
//! use supermaps::superchannel::{apply_to_channel, random_superchannel, realize, SuperDims};
//! use supermaps::SystemList;
//!
//! let mut r = rng(7);
//! let theta = random_superchannel(&mut r, SuperDims::uniform(2), 2)?;
//! let k = random_channel(&mut r, SystemList::single("X", 2), SystemList::single("Y", 2), 2)?;
//! let out = apply_to_channel(&theta, &choi_from_kraus(&k)?, 1e-9)?;
//! assert_eq!(out.input_dim(), 2);
//! let real = realize(&theta, 1e-8)?;
//! assert!(real.residual < 1e-8);
//! # Ok::<(), supermaps::Error>(())
//! ```

pub mod breaking;
pub mod channel;
mod error;
pub mod io;
pub mod random;
pub mod superchannel;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{LabeledOperator, System, SystemList, DEFAULT_RANK_RTOL, DEFAULT_TOL};
