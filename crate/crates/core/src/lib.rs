//! Exact Gromov–Hausdorff computations on finite metric spaces.
//!
//! * [`space`]: validated finite (pseudo)metric spaces, scaling, Hausdorff distance.
//! * [`correspondence`] and [`gh`]: correspondences, distortion, and the exact
//!   branch-and-bound solver with cheap bounds.
//! * [`gluing`]: ambient spaces realizing correspondences along a tree.
//! * [`hedgehog`]: discrete hedgehogs, bucket correspondences, center location
//!   checks and the two-needle-family zero-distance example.
//! * [`cloud`]: thread limits of finite chains, the `d(λ)` probe, center
//!   iteration and stabilizers.
//!
//! All distances are exact [`Rational`]s.

pub mod cloud;
pub mod correspondence;
pub mod generate;
pub mod gh;
pub mod gluing;
pub mod hedgehog;
pub mod io;
pub mod rational;
pub mod space;

pub use correspondence::{distortion, enumerate_correspondences, Correspondence, CorrespondenceError};
pub use gh::{gh_exact, gh_exact_with, gh_lower_bound, gh_upper_from, GhError, GhOptions, GhResult, Parallelism};
pub use rational::{int, rat, Rational};
pub use space::{hausdorff, FiniteMetricSpace, MetricError, Mode, SubsetRef, Violation};
pub use gluing::{glue_pair, glue_star, glue_tree, GluedSpace, GluingError, GluingTree};
pub use hedgehog::{compile_hedgehog, HedgehogError, HedgehogSpec};
pub use cloud::{thread_limit, CloudError, LambdaProbe, ThreadChain, ThreadLimit};
pub use io::IoError;
