//! Process terms: names, binding, renaming, α-equivalence, parsing and
//! printing.

mod name;
pub(crate) mod parse;
mod print;
mod process;

pub use name::{Name, TypeVar};
pub use parse::{parse_hypersequent, parse_process, parse_proposition, ParseError};
pub use print::print;
pub use process::Process;
