//! Analysis and passive synthesis of third-order positive-real impedances, with a
//! quarter-car H2 suspension design pipeline built on top.

pub mod bott_duffin;
pub mod error;
pub mod gauge;
pub mod impedance;
pub mod network;
pub mod poly;
pub mod pr;
pub mod ratfun;
pub mod special;
pub mod suspension;
pub mod synth;
pub mod tolerance;

pub use bott_duffin::{bott_duffin, bott_duffin_traced, SynthesisTrace};
pub use error::{Error, Result};
pub use impedance::{BicubicImpedance, Transform};
pub use network::{
    catalog, impedance_of, transform, ConfigId, ConfigTemplate, Element, ElementKind, Netlist,
    NetlistJson,
};
pub use poly::Polynomial;
pub use pr::{classify_boundary, derived_quantities, positive_real_check, positive_real_check_within, BoundaryClass, BoundaryKind};
pub use ratfun::RationalFunction;
pub use special::{realize_boundary, realize_first_order, BoundaryRealization, ImagAxisDecomposition};
pub use synth::{synthesize_five, Realization};
pub use tolerance::Tolerances;
