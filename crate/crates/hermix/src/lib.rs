//! Spectral analysis of mixed graphs through Hermitian adjacency matrices
//! whose arc entries are k-th roots of unity.

pub mod analysis;
pub mod enumeration;
pub mod eigen;
pub mod gain;
pub mod graph;
pub mod spectra;
pub mod switching;

pub use gain::{GainError, GainMatrix, RootParameter};
pub use graph::{GraphError, MixedGraph, NeighborClasses};
pub use spectra::{cospectral, spectral_radius, HermitianMatrix, SpectraError, Spectrum};
pub use switching::{
    is_admissible, switching_equivalent_search, three_way_switch, two_way_switch,
    verify_similarity, Partition, SearchOutcome, SwitchError,
};
pub use analysis::{
    cospectral_to_underlying, extremal_classification, find_unit_partition,
    negative_implies_positive_check, AnalysisError, BalanceOutcome, ClassificationReport,
    ConflictCycle, ExtremalOutcome, PotentialAssignment,
};
