//! Exact rational computation of the filtration spectral sequence of the
//! complex `Λ(g*) ⊗ B` attached to a free isometric Lie algebra action,
//! with checks of its `E_2` shape, convergence and low-codimension Wang
//! sequences.

#![allow(clippy::needless_range_loop)]

pub mod cdga;
pub mod complex;
pub mod gmodel;
pub mod lie;
pub mod linalg;
pub mod samples;
pub mod sequences;
pub mod spectral;

pub use cdga::{BasicModel, BasicModelBuilder, CdgaError, Generator};
pub use complex::CochainComplex;
pub use gmodel::{GModel, GModelError};
pub use lie::{InnerProductData, LieAlgebraData, LieError};
pub use linalg::{Rational, RationalMatrix, Subspace};
pub use sequences::{SequenceError, WangReport};
pub use spectral::{FilteredComplex, Page, SpectralError, SpectralSequence};
