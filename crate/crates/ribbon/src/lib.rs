//! Disk formats, reports, drawings and the `ribbon` command line on top of
//! `ribbon-core`.

pub mod cli;
pub mod load;
pub mod render;
pub mod report;
