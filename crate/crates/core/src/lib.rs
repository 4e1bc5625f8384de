pub mod arrow;
pub mod bounds;
pub mod constructions;
pub mod graph;
pub mod cache;
pub mod search;
