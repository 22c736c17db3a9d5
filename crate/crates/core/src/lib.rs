pub mod error;
pub mod qmat;
pub mod espmetrics;
pub mod reservoir;
pub mod series;
pub mod benchmarks;
pub mod sweep;

pub use error::{Error, Result};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/states.md")]
    struct States;
    #[doc = include_str!("../../../book/src/reservoirs.md")]
    struct Reservoirs;
    #[doc = include_str!("../../../book/src/indicators.md")]
    struct Indicators;
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    struct Benchmarks;
    #[doc = include_str!("../../../book/src/sweeps.md")]
    struct Sweeps;
}
