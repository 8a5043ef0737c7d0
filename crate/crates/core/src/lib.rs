//! Chromatic Delaunay triangulations and their filtrations.
//!
//! The crate builds the chromatic alpha, Delaunay–Čech and Delaunay–Rips
//! filtrations of coloured point clouds, computes persistent homology over
//! GF(2), and checks the discrete-Morse collapses that relate them.
//!
//! ```
//! use chromatic_tda::{cloud::ChromaticPointCloud, filtration};
//!
//! let cloud = ChromaticPointCloud::new(
//!     vec![vec![0.0, 0.0], vec![1.0, 0.1], vec![0.3, 0.9], vec![1.2, 1.1]],
//!     vec![0, 1, 0, 1],
//! ).unwrap();
//! let f = filtration::del_cech_filtration(&cloud, cloud.colours()).unwrap();
//! assert!(f.len() > 4);
//! ```

pub mod bench;
pub mod cloud;
pub mod delaunay;
pub mod error;
mod exact;
pub mod filtration;
pub mod general_position;
pub mod geometry;
pub mod io;
pub mod morse;
pub mod oracles;
pub mod par;
pub mod persistence;
pub mod rng;
pub mod simplex;
pub mod stability;
pub mod stack;

pub use error::{Error, Result};
