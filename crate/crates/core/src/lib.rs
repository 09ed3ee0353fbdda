//! Exact Jordan–Kronecker analysis of skew-symmetric pencils, invariant
//! subspaces, and invariant foliations of Turiel normal forms.

pub mod exactalg;
pub mod geometry;
pub mod invsub;
pub mod jk;
pub mod pencil;
pub mod sample;
pub mod selftest;
pub mod turiel;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    pub mod algebra {}
    #[doc = include_str!("../../../book/src/pencils.md")]
    pub mod pencils {}
    #[doc = include_str!("../../../book/src/subspaces.md")]
    pub mod subspaces {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    pub mod geometry {}
    #[doc = include_str!("../../../book/src/normal-forms.md")]
    pub mod normal_forms {}
    #[doc = include_str!("../../../book/src/distributions.md")]
    pub mod distributions {}
    #[doc = include_str!("../../../book/src/products.md")]
    pub mod products {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
    #[doc = include_str!("../../../book/src/selftest.md")]
    pub mod selftest {}
    #[doc = include_str!("../../../book/src/schemas.md")]
    pub mod schemas {}
}
