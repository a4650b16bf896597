//! Desk-scale machinery for the periplectic family p(n): weight-diagram
//! combinatorics, the Temperley-Lieb monoid at q = i, the signed diagram
//! category with its matrix realization, exact rational super linear
//! algebra, and the calibrated translation-operator table on the reduced
//! Grothendieck module.

pub mod brauer;
pub mod grothendieck;
pub mod linalg;
pub mod partitions;
pub mod superalg;
pub mod tl;
