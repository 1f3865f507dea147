//! Coefficient systems and constructible sheaves on bounded tree windows,
//! built from finite-level smooth representations. Stalks are congruence
//! coinvariants, face maps come from the inclusions of facet groups, and
//! everything is exact rational linear algebra: laws, sections, gluing,
//! exactness, and the comparison with the module-side system are asserted
//! as matrix identities, never sampled approximately.

pub mod coeff;
pub mod compare;
pub mod error;
pub mod functor;
pub mod linalg;
pub mod rep;

pub use coeff::{CoefficientSystem, ConstructibleSheaf, GluingReport, Sections};
pub use compare::{
    comparison_check, mr_system, mr_words, naturality_check, smooth_range,
    ComparisonReport, FacetComparison, NaturalityReport, NaturalitySquare, PairSquare,
};
pub use error::{Error, Result};
pub use functor::{
    coinvariants, coinvariants_by_enumeration, exactness_check, ss_sheaf, window,
    FacetExactness, SesReport, Window,
};
pub use linalg::{induced_map, kernel_basis, rref, PivotOrder, QMatrix, Quotient, Rref};
pub use rep::{ses_p1, RepKind, SmoothRep};
