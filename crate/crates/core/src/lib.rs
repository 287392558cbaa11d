//! Exact computations with q-de Rham complexes.
//!
//! The crate is organised bottom-up:
//!
//! * [`qarith`]: coefficient rings, polynomials and truncated series in `q`,
//!   q-integers, q-binomials;
//! * [`framed`]: framed polynomial and Laurent algebras with the
//!   automorphisms `γ_i`, Jackson derivatives `∇_{q,i}` and Frobenius lifts;
//! * [`homalg`]: matrices, Smith normal form, homology, décalage `η_f`,
//!   Koszul complexes and mapping cones;
//! * [`qderham`]: windowed q-de Rham models and the experiments run on them;
//! * [`semilinear`]: `φ_p`, `γ_a` as semilinear chain maps and Tate twists;
//! * [`qconn`]: modules with q-connection.

pub mod error;
pub mod framed;
pub mod homalg;
pub mod qarith;
pub mod qconn;
pub mod qderham;
pub mod semilinear;

pub use error::{Error, Result};
pub use framed::{AlgebraElement, DifferentialForm, Framing, VarKind, VarSpec};
pub use homalg::{AbGroupInvariants, FreeComplex, Matrix};
pub use qarith::{CoeffRingSpec, QSeries, SeriesRing, ZMod};
pub use qconn::{make_qconnection, qconn_de_rham, qconn_report, tensor_product, QConnectionModule};
pub use qderham::{Check, ExperimentReport, TruncationParams, Verdict};
pub use semilinear::{SemilinearChainMap, TateTwistObject};
