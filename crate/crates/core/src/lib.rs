//! Left-invariant Lorentzian metrics on the five simply connected
//! three-dimensional unimodular Lie groups: Milnor operator normal forms,
//! Levi-Civita connection and curvature, curvature properties, and a catalog
//! of canonical metric families with a classifier.

pub mod catalog;
pub mod curvature;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod milnor;
pub mod properties;
pub mod report;

pub use catalog::{
    build_metric, classify_metric, verify_family, witness_check, Classification, FamilyId,
    FamilyParams,
};
pub use curvature::{curvature, levi_civita, CurvatureData, LeviCivitaTable};
pub use error::{Error, Result};
pub use lie::{identify_group, GroupId, LieAlgebra3, MetricForm};
pub use linalg::{Endo3, Signature, SymForm3, Vec3, DEFAULT_TOL};
pub use milnor::{classify_operator, milnor_operator, MilnorOperator, OperatorType, Orientation};
pub use properties::{analyze, PropertyReport, SolitonCertificate};
pub use report::{build_report, ReportDocument};
