//! Exact measure algebras of finite measure spaces.
//!
//! A finite measure space is a point set partitioned into atoms with weights
//! in `[0, +inf]`. A measurable map `φ` induces the Boolean homomorphism
//! `φ•: [A] ↦ [φ⁻¹A]` between measure algebras whenever it sends no mass onto
//! null atoms. The crate computes the compression of `φ` (the least `C` with
//! `φ♯μ₁ ≤ C·μ₂`) and, by two independent routes, the Lipschitz constant of
//! `φ•` for the metrics `ρ(a, b) = μ̄(a △ b)`; the three always agree.
//!
//! All arithmetic is exact. Types are generic over the integer backing of the
//! rationals ([`Scalar`]); the aliases below fix it to `BigInt`.

pub mod algebra;
pub mod bitset;
pub mod category;
pub mod error;
pub mod ext;
pub mod generate;
pub mod hom;
pub mod io;
pub mod lipschitz;
pub mod morphism;
pub mod report;
pub mod scalar;
pub mod space;

pub use algebra::{AlgebraElement, L1Function, MeasureAlgebra};
pub use bitset::AtomSet;
pub use category::{
    classify, classify_metric, compose, compression_submultiplicativity, contravariance_check, identity_map,
    lipschitz_point, rescale_space, FiniteMetricMeasureSpace, MetricMap, MorphismClassification,
};
pub use error::{Error, Result};
pub use ext::ExtRatio;
pub use hom::{check_hom_laws, BooleanHom, LawReport, LawViolation};
pub use lipschitz::{lipschitz_bruteforce, lipschitz_fast, BruteForceOutcome, DEFAULT_BUDGET};
pub use morphism::{CompressionResult, MeasurableMap, PushforwardMeasure};
pub use scalar::Scalar;
pub use space::{FiniteMeasureSpace, MeasurableSet};

use num_bigint::BigInt;

pub type Rational = num_rational::Ratio<BigInt>;
pub type ExtRational = ExtRatio<BigInt>;
pub type Space = FiniteMeasureSpace<BigInt>;
pub type Set = MeasurableSet<BigInt>;
pub type Algebra = MeasureAlgebra<BigInt>;
pub type Element = AlgebraElement<BigInt>;
pub type Map = MeasurableMap<BigInt>;
pub type Hom = BooleanHom<BigInt>;
pub type Compression = CompressionResult<BigInt>;
pub type MetricSpace = FiniteMetricMeasureSpace<BigInt>;
