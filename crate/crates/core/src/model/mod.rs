//! Networks, problem instances and candidate solutions.

mod instance;
mod network;

pub use instance::{
    ProblemInstance, Solution, SubsystemParams, ALPHA_SCALE_EXP, DEFAULT_N_BOUNDS, DEFAULT_R_BOUNDS,
};
pub use network::{Network, MAX_NODES};
