//! Block ciphers as probability distributions on finite permutation groups.
//!
//! A cipher that draws a random permutation from a group `G` is described by
//! its law, a [`CipherDist`]. Composing independent ciphers in series
//! convolves their laws. Security comparisons between ciphers are made with
//! the majorization preorder ([`majorization`]), with Schur-monotone metrics
//! such as entropy and guesswork ([`metrics`]), and at nonzero data complexity
//! through the coset projections in [`qsec`].
//!
//! Everything numeric is generic over [`Scalar`]. Use the [`Rational`]
//! aliases when verdicts must be exact; the `f64` aliases are approximate.

pub mod dist;
pub mod error;
pub mod group;
pub mod majorization;
pub mod metrics;
pub mod perm;
pub mod qsec;
pub mod scalar;

pub use dist::{convolve, product, translate, triple_decompose, CipherDist, TripleDecomposition};
pub use error::{Error, Result};
pub use group::{conjugate_subgroup, double_coset, left_cosets, CosetDecomposition, DoubleCoset, GroupTable, DEFAULT_CAP};
pub use majorization::{birkhoff_decompose, compare, hlp_witness, DoublyStochasticWitness, MajorizationVerdict, Relation};
pub use perm::Permutation;
pub use qsec::{compare_q, distinct_tuples, project, ComparisonReport, Coherence, ImageProjection, PlaintextTuple};
pub use scalar::Scalar;

/// Arbitrary-precision rational, the exact scalar.
pub type Rational = num_rational::BigRational;

pub type ExactDist = CipherDist<Rational>;
pub type FloatDist = CipherDist<f64>;
pub type ExactWitness = DoublyStochasticWitness<Rational>;
pub type ExactDecomposition = TripleDecomposition<Rational>;
pub type ExactReport = ComparisonReport<Rational>;
