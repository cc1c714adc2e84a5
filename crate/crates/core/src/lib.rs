pub mod chart;
pub mod chirotope;
pub mod complex;
pub mod error;
pub mod flags;
pub mod homology;
pub mod macp;
pub mod om;
pub mod poset;
pub mod rao;
pub mod rational;
pub mod sign;
pub mod verify;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/oriented-matroids.md")]
    mod oriented_matroids {}
    #[doc = include_str!("../../../book/src/macphersonian.md")]
    mod macphersonian {}
    #[doc = include_str!("../../../book/src/flags.md")]
    mod flags {}
    #[doc = include_str!("../../../book/src/homology.md")]
    mod homology {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/findings.md")]
    mod findings {}
}
