pub mod data;
pub mod estimate;
pub mod eval;
pub mod gen;
pub mod report_cdf;
pub mod train;
