//! Avoidance automata, exact word counts and the two Perron-root engines.

mod automaton;
mod brute;
mod perron;

pub use automaton::{AvoidanceAutomaton, TransferMatrix};
pub use brute::{
    brute_cap, brute_force_count, brute_force_counts, space_size, BRUTE_CAP_ENV, DEFAULT_BRUTE_CAP,
};
pub use perron::{
    ln_rational, perron_isolator, perron_root_matrix, perron_root_poly, rational_string,
    reduced_escape_polynomial, spectral_radius, topological_entropy, Entropy, Method,
    PerronResult, DEFAULT_ROOT_TOL, MAX_POWER_ITERATIONS,
};

use num_bigint::BigInt;

use crate::error::Result;
use crate::words::WordCollection;

pub fn build_avoidance_automaton(g: &WordCollection, q: u32) -> Result<AvoidanceAutomaton> {
    AvoidanceAutomaton::new(g.words(), q)
}

pub fn count_words(a: &AvoidanceAutomaton, n: usize) -> BigInt {
    a.count_words(n)
}
