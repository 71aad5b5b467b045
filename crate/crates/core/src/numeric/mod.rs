//! Numerical building blocks shared by the thermodynamic modules.

pub mod diff;
pub mod linalg;
pub mod poly;
pub mod quadrature;
pub mod roots;
