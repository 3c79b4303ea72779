//! Full state-vector simulation of random Floquet qubit chains, with the
//! wavefunction split into shards that communicate only through a small set
//! of collectives.
//!
//! Layers, bottom up:
//! - [`linalg`]: dense complex matrices, Hermitian eigensolver, `e^{-iHθ}`,
//!   seeded GUE bond sampler.
//! - [`state`]: the sharded wavefunction, gate application, fusion.
//! - [`model`]: bond ensembles, the two-layer Floquet circuit, `H̄` and its
//!   moments.
//! - [`experiment`]: heating runs, rate extraction and fits, echo audits,
//!   benchmarks.
//! - [`io`]: config files, result files and the `floquet` commands.
//!
//! ```
//! use floquet_shard::experiment::{run_heating, HeatingConfig};
//!
//! let mut config = HeatingConfig::new(8, 4.0, 20.0);
//! config.num_global = 2;
//! let series = run_heating(&config).unwrap();
//! assert!(series.records[0].energy < 0.0);
//! ```

pub mod error;
pub mod experiment;
pub mod io;
pub mod linalg;
pub mod model;
pub mod state;

pub use error::{Error, Result};
pub use state::{Precision, ShardLayout, ShardedState};
