//! Combinatorial rigidity in the plane: counts, pebble game, connectivity.

mod brute;
mod connectivity;
mod pebble;
mod verdict;

pub use brute::{
    bruteforce_m_circuit, bruteforce_minimally_rigid, bruteforce_rank, bruteforce_redundantly_rigid,
    bruteforce_rigid, laman_sparse_bruteforce, SubsetWitness, ENUMERATION_LIMIT,
};
pub use connectivity::{vertex_connectivity, vertex_connectivity_at_least};
pub use pebble::{pebble_game_rigid, rigidity_rank, PebbleGame, PebbleResult};
pub use verdict::{
    is_globally_rigid, is_m_circuit, is_minimally_rigid, proper_subsets_sparse, EdgeCountClass,
    RigidityVerdict,
};
