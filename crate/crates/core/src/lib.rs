//! Hypergraph product quantum codes on the erasure channel: construction,
//! maximum-likelihood failure-rate estimation and Tanner-graph search.
//!
//! The guide in `book/` walks through each module; its code blocks are
//! compiled as doctests of this crate.

pub mod alist;
pub mod erasure;
pub mod gf2;
pub mod hgp;
pub mod optimize;
pub mod seed;
pub mod tanner;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/gf2.md")]
    mod gf2 {}
    #[doc = include_str!("../../../book/src/tanner.md")]
    mod tanner {}
    #[doc = include_str!("../../../book/src/hgp.md")]
    mod hgp {}
    #[doc = include_str!("../../../book/src/erasure.md")]
    mod erasure {}
    #[doc = include_str!("../../../book/src/optimize.md")]
    mod optimize {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
