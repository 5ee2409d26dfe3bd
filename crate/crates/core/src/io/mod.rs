//! Files in and out: Matrix Market, run configuration, reports.

pub mod config;
pub mod mtx;
pub mod report;

pub use config::RunConfig;
pub use mtx::{
    parse_matrix_market, parse_vector, read_matrix_market, read_vector, write_matrix_market,
    write_matrix_market_to, write_vector, write_vector_to,
};
pub use report::{spectra, BenchReport, BenchRow, Spectra, CSV_FIELDS, DENSE_GUARD, TIMING_FIELDS};
