//! Plurisubharmonic numerics on sampled boxes in `ℂ` and `ℂ²`.
//!
//! Potentials are formulas ([`expr::FieldExpr`]) sampled on uniform grids;
//! Hessians come from central differences. The gluing follows the usual
//! recipe: pull back `ψ` along a holomorphic map, add `ε Σ χ_α φ_α` and
//! shrink `ε` until the Levi form stays positive.

use alloc::string::String;

use thiserror::Error;

pub mod expr;
pub mod family;
pub mod grid;
pub mod plan;
pub mod poly;
pub mod wellrelated;

pub use expr::FieldExpr;
pub use family::ScaledFamily;
pub use grid::{ComplexBox, GridDomain, GridFunction, Hermitian, Point, PshCheck, Region, Witness};
pub use plan::{glue, plan_epsilon, tune_epsilon, verify_glued_psh, verify_plan, EpsilonPlan, GluedPotential, LeviConstants};
pub use poly::{PolyMap, Polynomial};
pub use wellrelated::{validate_well_related, SampledSpec, SourceChart, TargetChart, WellRelatedReport, WellRelatedSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PshError {
    #[error("dimension {0} is not 1 or 2")]
    Dimension(usize),
    #[error("grid spacing {0} must be positive")]
    Spacing(f64),
    #[error("axis {axis} has only {count} samples")]
    TooFewSamples { axis: usize, count: usize },
    #[error("box for coordinate {coordinate} is empty or not finite")]
    BadBox { coordinate: usize },
    #[error("expected {expected} values, got {got}")]
    ValueCount { expected: usize, got: usize },
    #[error("value at node {node} is not finite")]
    NonFinite { node: usize },
    #[error("node {node} is too close to the grid boundary for a stencil")]
    NearBoundary { node: usize },
    #[error("region is not inside the grid domain")]
    RegionOutside,
    #[error("region holds no interior samples")]
    EmptyRegion,
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("bad monomial {0:?}")]
    Monomial(String),
    #[error("map from dimension {dim_in} to {dim_out} is not supported")]
    MapDimension { dim_in: usize, dim_out: usize },
    #[error("grid functions live on different domains")]
    GridMismatch,
    #[error("chart {chart} names missing target {target}")]
    ChartTarget { chart: usize, target: usize },
    #[error("chart {chart} has the wrong number of boxes or coordinates")]
    ChartShape { chart: usize },
    #[error("chart {chart} is not strongly psh at {point:?}: eigenvalue {value:e}")]
    NotStronglyPsh { chart: usize, point: Point, value: f64 },
    #[error("region {region} has no chart supported on it")]
    UncoveredRegion { region: usize },
    #[error("family needs a positive order, got {0}")]
    FamilyOrder(usize),
}
