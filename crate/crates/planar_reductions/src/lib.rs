//! Planar embeddings, planar cycle augmentation, linear and planar 3-SAT
//! variants, the reductions between them, and exact search oracles that
//! certify those reductions on small instances.

pub mod cmapf;
pub mod cycle_augment;
pub mod embedding;
pub mod ncl;
pub mod reconfig;
pub mod sat_core;
pub mod sat_reduce;
