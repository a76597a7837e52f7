pub mod atiyah_hitchin;
pub mod cli;
pub mod error;
pub mod io;
pub mod kahler;
pub mod moment_maps;
pub mod multiplets;
pub mod presets;
pub mod quad;
pub mod slag;
pub mod specfun;
pub mod suite;
pub mod taub_nut;

pub use error::{Error, Result};
