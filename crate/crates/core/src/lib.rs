pub mod asym;
pub mod coeffs;
pub mod dd;
pub mod oracle;
pub mod rational;
pub mod reference;
pub mod series;
pub mod special;
pub mod verify;

pub use dd::Dd;
pub use rational::{pochhammer, Rational};
pub use series::{Parity, PowerSeries, SeriesError};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/coefficients.md")]
    mod coefficients {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
