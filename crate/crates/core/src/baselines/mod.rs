//! SAX and 1d-SAX, the fixed-window symbolic baselines.

mod normal;
mod onedsax;
mod sax;

pub use normal::{gaussian_breakpoints, normal_quantile, region_of, Representative};
pub use onedsax::{fit_line, onedsax_reconstruct, onedsax_symbolize, OneDSaxConfig, DEFAULT_SLOPE_VARIANCE_SCALE};
pub use sax::{paa, sax_reconstruct, sax_symbolize, SaxConfig};
