//! Exact construction, counting and classification of self-orthogonal codes
//! over `Z/p^2`, together with quaternary even and Type II codes.
//!
//! The crate is organised bottom-up:
//!
//! * [`ringmat`]: residue matrices, RREF over `F_p`, Howell form over `Z/p^2`.
//! * [`code`]: codes over `F_p` and `Z/p^2`, residue/torsion/dual, evenness.
//! * [`lifting`]: all self-orthogonal (or even) codes with a prescribed
//!   residue and torsion, parametrised by solutions of linear systems.
//! * [`census`]: Gaussian coefficients, base-field code counts, the closed
//!   mass formulas, and an independent brute-force sweep over Howell forms.
//! * [`equivalence`]: signed monomial group, automorphism orders and
//!   mass-certified classification.
//! * [`verify`]: parameter-grid checks shared by the CLI and test suites.

pub mod census;
pub mod code;
pub mod equivalence;
pub mod error;
pub mod lifting;
pub mod ringmat;
pub mod verify;

pub use census::{Family, MassReport, MassTerm};
pub use code::{euclidean_weight, CodeZp2, FpCode, MatrixText};
pub use equivalence::{ClassificationResult, GroupKind, SignedMonomial};
pub use error::{Error, Result};
pub use lifting::{LiftFamily, LiftSolutionSet};
pub use ringmat::{howell_form, rref_fp, solve_affine_fp, Modulus, ResidueMatrix};
