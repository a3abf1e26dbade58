//! Exact tilings of finite windows of amenable group actions by Følner
//! shapes: quasitiling, augmenting-path matching and reassembly, with
//! independent verification of every quantitative claim.

pub mod action_space;
pub mod exact_tiling;
pub mod graph_color;
pub mod group_model;
pub mod matching;
pub mod quasitiling;
pub mod report;
