pub mod access;
pub mod array;
pub mod combinatorics;
pub mod field;
pub mod geometry;
pub mod linalg;
pub mod projective;
pub mod scheme;
