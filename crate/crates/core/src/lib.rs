//! Two-dimensional Artin groups: normal forms in dihedral Artin groups, the
//! geometry of their Deligne complexes and certificates that pairs of elliptic
//! elements generate free subgroups.

pub mod angle;
pub mod certifier;
pub mod error;
pub mod garside;
pub mod linkgeom;
pub mod oracles;
pub mod presentation;
pub mod quasitree;
pub mod word;

pub use angle::AngularValue;
pub use certifier::{
    certify_free, check, min_exponent_tree_elliptic_type2, verify_endpoint, CertMode, ContactSpec, CosetDescriptor,
    EllipticSpec, EndpointRecord, FreenessCertificate,
};
pub use error::{Error, Result};
pub use garside::{
    classify_elliptic, conjugate_to_generator_power, equals, normal_form, AbelianNF, Atom,
    DihedralElement, EllipticClass, GarsideNF, GeneratorClass, TreeEllipticSpec,
};
pub use oracles::{amalgam_is_identity, brute_conjugacy_search, raag_is_identity, AmalgamNF, RaagNF};
pub use linkgeom::{AxisKey, Distance, LinkGraph, LinkPoint, QuotientMetric};
pub use presentation::{ParabolicDescriptor, PresentationGraph};
pub use quasitree::{AugmentedGraph, QuasiTreeBall};
pub use word::{Letter, Word};
