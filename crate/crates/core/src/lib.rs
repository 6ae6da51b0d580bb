//! Characteristic-2 Khovanov homology, the `β` endomorphism and its
//! secondary groups, and Bar-Natan homology from planar-diagram codes.

pub mod barnatan;
pub mod corpus;
pub mod cube;
pub mod gf2;
pub mod homology;
pub mod pd;
pub mod spectral;
pub mod table;

pub use cube::{build_khovanov, build_reduced, BigradedComplex, State};
pub use gf2::{BitVec, GF2Matrix, Subquotient};
pub use homology::{beta_star, khovanov_homology, secondary_groups, Homology};
pub use pd::{parse_pd, LinkDiagram, PdCode, PdError};
pub use spectral::{compute_pages, FilteredComplex, SSPage, SpectralSequence};
pub use table::{DimTable, LaurentPoly2};
