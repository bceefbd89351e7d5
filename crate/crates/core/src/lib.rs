//! Link homology over the two-element field.

pub mod chaincx;
pub mod corpus;
pub mod diagram;
pub mod f2linalg;
pub mod tqft;
pub mod movie;
pub mod szabo;
