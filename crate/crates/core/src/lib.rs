//! Exact computation of infinitesimal CR automorphisms of quadric models
//! `Im w_k = ⟨A_k z, z⟩`.
//!
//! * [`exactnum`]: rationals and Gaussian rationals
//! * [`polyring`]: sparse polynomials in `(z, w)` or `(z, z̄, u)`
//! * [`linalg`]: exact dense and sparse elimination
//! * [`quadric`]: models and their structural checks
//! * [`vectorfield`]: holomorphic fields and the tangency residual
//! * [`autsolver`]: graded components of `hol(M,0)` and jet counterexamples

pub mod autsolver;
pub mod exactnum;
pub mod linalg;
pub mod polyring;
pub mod quadric;
pub mod vectorfield;

pub use autsolver::{graded_component, jet_counterexample, GradedComponentReport};
pub use exactnum::{GaussianRational, Rational};
pub use polyring::{Polynomial, Var, VarSpace};
pub use quadric::{QuadricModel, DEFAULT_TUMANOV_BUDGET};
pub use vectorfield::{example_field, example_fields, HoloVectorField};
