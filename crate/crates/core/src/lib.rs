//! Closed 1-forms, covering spaces and locally conformally Kähler data on
//! finite models.
//!
//! The crate is split along the layers of the construction:
//!
//! - [`complex`]: finite simplicial 2-complexes, subcomplex covers, edge paths
//!   and elementary homotopies.
//! - [`group`]: edge-path presentations of the fundamental group, Tietze
//!   simplification and bounded coset enumeration.
//! - [`covering`]: universal covers (complete for finite groups, truncated to
//!   a word-length radius otherwise) and deck transformations.
//! - [`cech`]: closed 1-forms given by local potentials with locally constant
//!   overlap differences, path integration, exactness and pullback.
//! - [`conformal`]: LCK data, Lee forms, conformal rescaling, lifting to a
//!   Kähler structure on the universal cover and descent back.
//! - [`psh`]: grid-based complex Hessians, plurisubharmonicity checks and the
//!   epsilon-tuned gluing of potentials along maps with discrete fibers.
//!
//! Everything here is `no_std` with `alloc`; file formats and the command
//! line live in the companion `lckspace-tools` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cech;
pub mod complex;
pub mod conformal;
pub mod covering;
pub mod group;
pub mod psh;
pub mod random;
pub mod scalar;

pub use cech::{ClosedOneForm, Exactness, FormError, GlobalFunction};
pub use conformal::{
    descend_to_lck, lift_to_kahler, positive_section, trivializing_section, weight_bundle, KahlerData, LckData, LckError,
    LineBundle, Mode, PotentialHandle, Section,
};
pub use complex::{Cover, EdgePath, SimplicialComplex, Subcomplex, TopologyError};
pub use covering::{Cell, CoveringMap};
pub use group::{Character, EdgePathGroup, PresentedGroup, Word};
pub use scalar::{LogSum, Rational, Scalar};
