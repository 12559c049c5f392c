//! Belief-propagation decoding of quantum data-syndrome stabilizer codes.
//!
//! A data-syndrome (DS) code protects both the data qubits and the syndrome
//! bits: measuring the stabilizers of an `[[N, K]]` code with check matrix `S`
//! through noisy readout is modelled by the extended check matrix
//! `[S | I_M]`, and the decoder estimates a data error and a syndrome error
//! jointly. This crate provides
//!
//! * GF(2) linear algebra and binary-symplectic Pauli algebra,
//! * code construction, including a hypergraph-product `[[129, 28 | 101]]`
//!   code built from two BCH codes,
//! * quaternary BP with parallel and serial schedules on the DS Tanner graph,
//! * channel sampling, logical-error adjudication and benchmark curves.
//!
//! ```
//! use dsbp::codes::hp_129_28;
//! let hp = hp_129_28().unwrap();
//! assert_eq!(hp.code.params(), (129, 28, 101));
//! ```

pub mod channels;
pub mod cli;
pub mod codes;
pub mod decoder;
pub mod error;
pub mod eval;
pub mod gf2;
pub mod pauli;
pub mod tanner;

pub use error::{Error, Result};
