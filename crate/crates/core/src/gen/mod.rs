//! Program generators: the benchmark families and seeded random programs.

mod families;
mod random;

pub use families::{Family, Instance};
pub use random::{random_ground_program, random_program, random_query, GroundConfig, ProgramConfig};
