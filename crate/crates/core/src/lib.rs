pub mod bounds;
pub mod canon;
pub mod classify;
pub mod distance;
pub mod ensemble;
pub mod error;
pub mod factorgraph;
pub mod hypergraph;
pub mod search;

pub use error::{Error, Result};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/projections.md")]
    mod projections {}
    #[doc = include_str!("../../../book/src/twin-search.md")]
    mod twin_search {}
    #[doc = include_str!("../../../book/src/isomorphism.md")]
    mod isomorphism {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/distances.md")]
    mod distances {}
    #[doc = include_str!("../../../book/src/ensembles.md")]
    mod ensembles {}
}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
