//! Constellations and grid extraction.

mod coupling;
mod fixing;
mod grid;
mod grow;
mod pipelines;
mod structure;
mod work;

pub use coupling::{
    classify_coupling, find_coupled_subsets, fits, phi, CoupledWitness, CouplingKind, FinderMode, FINDER_K_CAP,
    FINDER_SET_CAP,
};
pub use fixing::{extract_matching, extract_star, fix_pairs, Components};
pub use grid::{grid_from_cliques, GridMode};
pub use grow::{
    find_augmentation, grow_step, refine_augmentation, AugmentationSearch, AugmentationStage, GrowBranch, GrowOutput,
    Grown, REFINE_CAP,
};
pub use pipelines::{clique_pipeline, path_pipeline, PipelineOutput, StageReport, CLIQUE_HUB_CAP, PARITY_CHECK_CAP};
pub use structure::{Augmentation, Constellation, Violation};
