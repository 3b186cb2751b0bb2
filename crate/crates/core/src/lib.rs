//! Exact symbolic engine for homogeneous left-invariant differential operators
//! on stratified (Carnot) groups, plus a numerical harness for the associated
//! L¹ inequalities.

pub mod annihilator;
pub mod error;
pub mod fields;
pub mod lie;
pub mod linalg;
pub mod numerics;
pub mod operators;
pub mod poly;
pub mod rational;
pub mod uea;

pub use error::{Error, Result};
pub use lie::{GradedLieAlgebra, GroupPoint, Preset};
pub use rational::Rational;
