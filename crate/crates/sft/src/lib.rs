//! Independent-cascade (IC) diffusion on undirected weighted networks, and
//! localization of the diffusion source from a single infection snapshot.
//!
//! The main estimator ranks infected nodes by infection eccentricity (Jordan
//! infection centers first) and breaks ties by the weighted or unweighted
//! boundary node degree of the BFS tree rooted at the candidate. Baseline
//! localizers (eccentricity with random ties, rumor centrality, a Laplacian
//! eigenvector ranker), an exact posterior oracle for small trees, and a
//! config-driven experiment harness are included.

pub mod baselines;
pub mod diffusion;
pub mod evaluation;
pub mod graph;
pub mod harness;
pub mod localization;
pub mod rng;
