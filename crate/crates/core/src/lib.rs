//! Cohomology of baby Verma modules for the restricted Lie superalgebra
//! `D(2,1;α)` over `F_p`.

pub mod algebra;
pub mod cohomology;
pub mod enveloping;
pub mod field;
pub mod linalg;
pub mod scan;
pub mod cli;
