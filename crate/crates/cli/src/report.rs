//! JSON document types emitted by the CLI. Every document carries the
//! schema tag `chern-einstein-lab/1` and serializes floats with full
//! binary64 round-trip precision (serde_json's default). Exact rationals are
//! serialized both as numerator/denominator strings and as floats.

use chern_einstein_core::exact::{rat_to_f64, Rat};
use num::bigint::BigInt;
use num::ToPrimitive;
use serde::Serialize;

pub const SCHEMA: &str = "chern-einstein-lab/1";

#[derive(Serialize)]
pub struct ExactRational {
    pub num: String,
    pub den: String,
    pub float: f64,
}

impl ExactRational {
    pub fn from_rat(r: &Rat) -> Self {
        ExactRational {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
            float: rat_to_f64(r),
        }
    }

    pub fn from_bigint(b: &BigInt) -> Self {
        ExactRational {
            num: b.to_string(),
            den: "1".to_string(),
            float: b.to_f64().unwrap_or(f64::NAN),
        }
    }
}

#[derive(Serialize)]
pub struct ParamsDoc {
    pub n1: usize,
    pub n2: usize,
    pub a: f64,
    pub b: f64,
    pub kappa: f64,
}

#[derive(Serialize)]
pub struct MetricDoc {
    pub g1: f64,
    pub g2: f64,
    pub h0: f64,
}

#[derive(Serialize)]
pub struct RicciDoc {
    pub s_n1: f64,
    pub s_n2: f64,
    pub s_t: f64,
}

#[derive(Serialize)]
pub struct SolutionDoc {
    pub g1: f64,
    pub g2: f64,
    pub h0: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub residual: f64,
    pub mu: f64,
}

#[derive(Serialize)]
pub struct UniquenessDoc {
    pub discriminant: ExactRational,
    pub band_n1_le_sqrt2_n2: bool,
    pub band_n2_le_sqrt2_n1: bool,
    pub root_count: usize,
    pub roots: Vec<f64>,
}

#[derive(Serialize)]
pub struct EinsteinDoc {
    pub schema: &'static str,
    pub command: &'static str,
    pub params: ParamsDoc,
    pub solutions: Vec<SolutionDoc>,
    /// Present exactly when kappa = 1 (the proven range of the analysis).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniqueness: Option<UniquenessDoc>,
    pub first_ricci: RicciDoc,
    /// SKT obstruction evaluated at the first solution metric.
    pub skt_obstruction_value: f64,
}

#[derive(Serialize)]
pub struct FlowSampleDoc {
    pub t: f64,
    pub g1: f64,
    pub g2: f64,
    pub h0: f64,
    pub s_n1: f64,
    pub s_n2: f64,
    pub s_t: f64,
    pub residual: f64,
}

#[derive(Serialize)]
pub struct FlowDoc {
    pub schema: &'static str,
    pub command: &'static str,
    pub params: ParamsDoc,
    pub variant: &'static str,
    pub outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blowup_time: Option<f64>,
    pub initial: FlowSampleDoc,
    pub terminal: FlowSampleDoc,
    pub samples_written: usize,
    pub csv_path: String,
}

#[derive(Serialize)]
pub struct SktDoc {
    pub value: f64,
    pub exact: ExactRational,
    pub witness: String,
}

#[derive(Serialize)]
pub struct DdbarDoc {
    pub xi: [f64; 2],
    pub value_re: f64,
    pub value_im: f64,
    pub witness: String,
}

#[derive(Serialize)]
pub struct ObstructionsDoc {
    pub schema: &'static str,
    pub command: &'static str,
    pub params: ParamsDoc,
    pub metric: MetricDoc,
    pub skt_obstruction: SktDoc,
    pub ddbar_witnesses: Vec<DdbarDoc>,
    pub nijenhuis_residual: f64,
    pub first_ricci: RicciDoc,
}

#[derive(Serialize)]
pub struct FlagDoc {
    pub rank: usize,
    pub painted: Vec<usize>,
    pub center_dim: usize,
    pub module_count: usize,
    /// Modules as lists of simple-root coefficient vectors.
    pub modules: Vec<Vec<Vec<i64>>>,
    /// Rows for the non-simple classes over the painted-simple classes.
    pub n_matrix: Vec<Vec<ExactRational>>,
}

#[derive(Serialize)]
pub struct LatticeDoc {
    pub lambda: String,
    pub coroot_coords: Vec<String>,
}

#[derive(Serialize)]
pub struct CartanVectorDoc {
    pub coords: Vec<ExactRational>,
    pub imaginary: bool,
}

#[derive(Serialize)]
pub struct TorusDoc {
    pub dim: usize,
    pub codim_in_center: usize,
}

#[derive(Serialize)]
pub struct BalancedDoc {
    pub schema: &'static str,
    pub command: &'static str,
    pub mode: &'static str,
    pub flag: FlagDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<ExactRational>>,
    pub weights: Vec<ExactRational>,
    pub delta_h: CartanVectorDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torus: Option<TorusDoc>,
    pub balanced: bool,
    /// Coordinates of sqrt(-1) delta_h over the center basis when balanced.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_coordinates: Option<Vec<ExactRational>>,
    /// Unresolved projection witnessing failure when not balanced.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CartanVectorDoc>,
    /// Levi-Civita residual cross-check: the oracle frame sum reproduces
    /// the criterion exactly.
    pub residual_matches_criterion: bool,
}

#[derive(Serialize)]
pub struct VerifyCheckDoc {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub seconds: f64,
    pub details: String,
}

#[derive(Serialize)]
pub struct VerifyDoc {
    pub schema: &'static str,
    pub command: &'static str,
    pub passed: bool,
    pub checks: Vec<VerifyCheckDoc>,
}
