//! Cell-centered finite-volume solver for the 2D shallow water equations
//! on unstructured triangular meshes.
//!
//! The crate is organized bottom-up:
//!
//! - [`mesh`]: triangulations, edge connectivity and cell geometry
//! - [`kernels`]: fluxes, HLLC, hydrostatic reconstruction, friction, CFL
//! - [`engine`]: the explicit time loop over sequential or parallel backends
//! - [`cases`]: initial conditions and the Stoker dam-break solution
//! - [`io`]: native mesh files, VTK snapshots, CSV stats and JSON config
//! - [`harness`]: CLI, benchmark ladder and convergence study

pub mod cases;
pub mod engine;
pub mod harness;
pub mod io;
pub mod kernels;
pub mod mesh;

pub use kernels::{Conserved, Flux3, PhysParams};
pub use mesh::{build_mesh, generate_square_mesh, Mesh, RawMesh};
