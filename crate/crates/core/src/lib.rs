//! Cleavage operads of spheres, their blueprints, and a numerical umkehr map
//! for loops in flat manifolds.

pub mod blueprint;
pub mod doc;
pub mod fixtures;
pub mod geom;
pub mod operad;
pub mod umkehr;
