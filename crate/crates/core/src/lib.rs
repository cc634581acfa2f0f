pub mod bubble;
pub mod coloring;
pub mod cubical;
pub mod error;
pub mod generate;
pub mod graph;
pub mod groupoid;
pub mod hom;
pub mod homology;
pub mod invariants;
pub mod io;
pub mod maps;
pub mod perm;
pub mod poset;
pub mod signed;
pub mod simplicial;
pub mod vertex;

pub use cubical::{Cube, CubicalComplex};
pub use error::{Error, Result};
pub use generate::Complex;
pub use graph::Graph;
pub use groupoid::{FacetComplex, HolonomyGroup, Projectivity, RidgeGraph};
pub use hom::{CellMap, HomComplex, HomOptions};
pub use homology::{BettiProfile, ChainComplex};
pub use maps::VertexMap;
pub use poset::{FacePoset, Poset};
pub use simplicial::{Simplex, SimplicialComplex};
pub use vertex::VertexId;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/groupoids.md")]
    mod groupoids {}
    #[doc = include_str!("../../../book/src/cubical.md")]
    mod cubical {}
    #[doc = include_str!("../../../book/src/hom.md")]
    mod hom {}
    #[doc = include_str!("../../../book/src/colouring.md")]
    mod colouring {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
