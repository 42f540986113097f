//! Minimum weight cycles and the 2-modulus of the loop family of an
//! undirected, positively weighted graph.
//!
//! [`mwc::find_mwc`] runs one Dijkstra search per root, stopped at half the
//! best cycle length seen so far, and closes cycles through the lowest common
//! ancestor in the shortest-path tree. Roots that provably lie on no minimum
//! cycle are dropped along the way.
//!
//! [`modulus::compute_modulus`] grows a set of loop constraints, re-solving a
//! small quadratic program ([`qp`]) after each batch of violated loops, which
//! the same rooted search finds under the current density. [`prune`] keeps
//! those searches near the last loops added.
//!
//! [`oracles`] holds the slow reference methods used for checking, and
//! [`graph`] the graph type, generators and file formats.

pub mod graph;
pub mod mwc;
pub mod oracles;
pub mod prune;
pub mod qp;
pub mod report;
pub mod modulus;
pub mod cli;
