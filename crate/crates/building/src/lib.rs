//! Geometry of the rank-1 Bruhat-Tits tree and bounded apartment windows,
//! together with the congruence filtration groups attached to facets.
//!
//! The tree side works with exact lattice classes over Q_p and standardizes
//! any facet into the standard apartment by an explicit unimodular matrix.
//! Filtration groups are cut out by extended-value bounds on the coordinates
//! of the triangular factorization; the induced valuation and its axioms are
//! checked exactly. Finite quotients mod p^m make the level-step structure
//! of these groups directly computable.

pub mod apartment;
pub mod error;
pub mod filtration;
pub mod finite;
pub mod mat2;
pub mod tree;
pub mod window;

pub use apartment::{
    a1_window, a2_window, concavity_holds, facet_concave, star_concave, Apartment,
    ApartmentFacet, ConcaveFunction, RootLine,
};
pub use error::{Error, Result};
pub use filtration::{
    check_pvaluation, level_table, membership, omega, tree_membership, triangular_factor,
    ConstraintCheck, Factorization, FiltrationSpec, MembershipReport, OmegaReport,
    PvaluationCheck, TreeMembership,
};
pub use finite::{closure, lower_p_series_check, LowerPSeriesReport, ModCtx, ModMat};
pub use mat2::{p_pow, rat, Mat2};
pub use tree::{
    standardize, standardize_edge, standardize_vertex, tree_ball, LatticeVertex,
    StandardizedFacet, TreeBall, TreeFacet, MAX_TREE_RADIUS,
};
pub use window::{ApartmentWindow, FacetPoset};
