//! Order parameter, solution pooling, entropy identities and the spin
//! Hamiltonian attached to a parity-check system.

mod order;
mod physics;
mod stats;

pub use order::{
    classical_order_parameter, classical_sample, exact_order_parameter, order_parameter,
    pool_per_parity, pool_solutions, subsample, SolutionPool, DEFAULT_CAP,
};
pub use physics::{
    count_ground_states, entropy_density_asymptotic, entropy_rank, hamiltonian_energy, SpinConfig,
};
pub use stats::{aggregate, read_datapoints_csv, write_datapoints_csv, DataPoint, DATAPOINT_HEADER};
