//! Construction and exhaustive verification of a family of APN
//! hexanomials over GF(2^(2m)).
//!
//! * [`field`]: polynomial-basis arithmetic in GF(2^w), Frobenius iterates,
//!   subfield tests and roots-of-unity subgroups.
//! * [`hexanomial`]: the hexanomial `F`, its derivative map `G_a` in defining
//!   and linearized forms, and the kernel of `G_a`.
//! * [`compat`]: the compatibility polynomial `G(c, y)`, the search for `c`,
//!   the closed-form compatibility criterion and the witness sets.
//! * [`diffspec`]: derivative fiber spectra, the `t`-to-one test and the DDT.

pub mod compat;
pub mod diffspec;
pub mod error;
pub mod field;
pub mod hexanomial;
pub mod poly;

pub use compat::{
    closed_form_compatible, divisibility_check, CompatContext, CompatReport, DivisibilityCheck,
    WitnessCase, Witnesses,
};
pub use diffspec::{Caps, Ddt, DerivativeSpectrum, SpectrumSummary};
pub use error::{Error, Result};
pub use field::{Element, Field, FieldElement, FieldSpec};
pub use hexanomial::{default_d, BcParams, BcParamsRecord, LinearizedDerivative};
