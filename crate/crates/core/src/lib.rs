//! A kernel for the Classical Transitions calculus.
//!
//! Processes are typed with hypersequents of classical linear logic
//! propositions. Typing derivations are the states of a labelled transition
//! system whose silent steps are cut reductions.
//!
//! ```
//! use ct_core::{lts, syntax, typing};
//!
//! let p = syntax::parse_process("new (x,y){ close x | wait y.0 }").unwrap();
//! let d = typing::infer(&p).unwrap();
//! let ts = lts::transitions(&d).unwrap();
//! assert_eq!(ts.len(), 1);
//! assert_eq!(ts[0].label.to_string(), "tau");
//! assert_eq!(ts[0].target.process().to_string(), "0 | 0");
//! ```

#![allow(clippy::result_large_err)]

pub mod explorer;
pub mod lts;
pub mod syntax;
pub mod types;
pub mod typing;
