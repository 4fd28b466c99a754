//! Doc-tests for the guide.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}
#[doc = include_str!("../../../book/src/syntax.md")]
pub mod syntax {}
#[doc = include_str!("../../../book/src/types.md")]
pub mod types {}
#[doc = include_str!("../../../book/src/typing.md")]
pub mod typing {}
#[doc = include_str!("../../../book/src/transitions.md")]
pub mod transitions {}
#[doc = include_str!("../../../book/src/metatheory.md")]
pub mod metatheory {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
