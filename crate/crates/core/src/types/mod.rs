//! Propositions, duality, substitution, sequents and hypersequents.

mod hypersequent;
mod proposition;

pub use hypersequent::{hs_equal, hs_merge, is_client_context, Hypersequent, HypersequentError, Sequent};
pub(crate) use proposition::Canonicalizer;
pub use proposition::Proposition;
