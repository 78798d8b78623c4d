pub mod cone;
pub mod criteria;
pub mod error;
pub mod exactla;
pub mod extend;
pub mod lp;
mod model;
pub mod represent;
pub mod space;

pub use error::{Error, Result};
pub use exactla::{parse_rat, rat, ratio, RMat, RVec, Rat};
pub use space::{CalibratedSpace, Functional, Norm, PolyhedralSeminorm, Subspace};
