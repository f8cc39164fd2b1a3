pub mod algebrakit;
pub mod blowup;
pub mod capacity;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod gwdata;
pub mod homology;
pub mod polycore;
pub mod quantum;
pub mod report;
