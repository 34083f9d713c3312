//! Generalized Reed-Muller codes R_q(r, m) over GF(q), their minimum-weight
//! codewords, and exhaustive checks of the structure of those codewords as
//! unions of parallel affine flats.
//!
//! Module map:
//! - [`field`]: GF(p^n) with integer element codes;
//! - [`poly`]: reduced polynomials and evaluation tables;
//! - [`geometry`]: points, hyperplanes, flats and affine maps of F_q^m;
//! - [`code`]: code parameters, membership and minimum-word enumeration;
//! - [`analysis`]: classification and the verification sweeps.

pub mod analysis;
pub mod code;
pub mod field;
pub mod geometry;
pub mod linalg;
pub mod poly;

pub use analysis::{
    check_lemma4, check_lemma5, classify_min_word, verify_theorem, ClassificationReport, Lemma4Report, Lemma5Branch,
    Lemma5Report, Verdict, VerifyOptions, VerifyReport,
};
pub use code::{
    affine_orbit, canonical_min_word, contains, decompose_order, enumerate_min_words, Codeword, GrmParams, Mode,
    DEFAULT_BUDGET,
};
pub use field::{Field, FieldElement, FieldError, FieldSpec};
pub use geometry::{AffineMap, Flat, Hyperplane, Space};
pub use poly::{Degree, EvaluationTable, Monomial, ReducedPoly};
