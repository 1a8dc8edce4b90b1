//! Finite geometry and graph tooling for the incidence graphs Γ_{n,q}(K)
//! of point sets K in the hyperplane at infinity of PG(n+1,q).

pub mod error;
pub mod gf;
pub mod graph;
pub mod graph6;
pub mod graphalg;
pub mod linalg;
pub mod linrep;
pub mod pg;
pub mod pointsets;
pub mod setanalysis;

pub use error::{Error, Result};
pub use gf::{Field, FieldElement, FieldSpec};
pub use linalg::Matrix;
pub use pg::{Collineation, ProjPoint, ProjSpace, Subspace};
pub use pointsets::{Family, PointSet};
pub use graph::{Graph, GraphMeta, IncidenceGraph};
