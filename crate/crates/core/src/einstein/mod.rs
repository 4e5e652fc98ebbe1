//! Chern-Einstein solver and uniqueness analysis.
//!
//! The Einstein system `S(h) = h` on the invariant family reduces, in the
//! variables `x = 1/g1`, `y = 1/g2`, `z = 16/h0`, to one cubic
//!
//! ```text
//! phi(x) = [x^2/n1 + (kappa/n2) ((2n1+2n2+2 - n1 x)/n2)^2](x - 2) - 2x^2/n1^2
//! ```
//!
//! together with the linear relation `n1 x + n2 y = 2n1 + 2n2 + 2` and the
//! trace equation for `z`. Roots are isolated exactly (Sturm chains over the
//! rationals on the square-free part), refined by exact bisection, and
//! back-substituted; each returned metric carries a certified Einstein
//! residual from the closed-form Ricci.

mod cubic;

pub use cubic::{isolate_roots, refine_root, IsolatedRoot};

use crate::classc::{second_ricci, ClassCParams, InvariantMetric};
use crate::exact::{rat, rat_to_f64, rat_usize, Rat};
use num::bigint::BigInt;
use num::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EinsteinError {
    #[error("no admissible Einstein root found; this contradicts the existence sign anchors and indicates an internal error")]
    NoAdmissibleRoot,
    #[error("uniqueness analysis requires kappa = 1, got {0}")]
    KappaNotOne(f64),
    #[error(transparent)]
    ClassC(#[from] crate::classc::ClassCError),
}

/// One admissible solution of the Einstein system.
#[derive(Debug, Clone)]
pub struct EinsteinSolution {
    pub metric: InvariantMetric,
    /// `(x, y, z) = (1/g1, 1/g2, 16/h0)`.
    pub xyz: (f64, f64, f64),
    /// Max componentwise `|S(h) - h|`.
    pub residual: f64,
    /// The Einstein constant; the normalization fixes it to 1.
    pub mu: f64,
}

/// `phi` evaluated exactly for rational `kappa` and `x`.
pub fn phi_eval_exact(n1: usize, n2: usize, kappa: &Rat, x: &Rat) -> Rat {
    let n1r = rat_usize(n1);
    let n2r = rat_usize(n2);
    let c = rat_usize(2 * n1 + 2 * n2 + 2);
    let lin = (&c - &n1r * x) / &n2r;
    let bracket = x * x / &n1r + kappa / &n2r * &lin * &lin;
    bracket * (x - rat(2, 1)) - rat(2, 1) * x * x / (&n1r * &n1r)
}

/// `phi` in binary64, for polish and reporting.
pub fn phi_eval(n1: usize, n2: usize, kappa: f64, x: f64) -> f64 {
    let n1f = n1 as f64;
    let n2f = n2 as f64;
    let c = 2.0 * n1f + 2.0 * n2f + 2.0;
    let lin = (c - n1f * x) / n2f;
    (x * x / n1f + kappa / n2f * lin * lin) * (x - 2.0) - 2.0 * x * x / (n1f * n1f)
}

/// Ascending coefficients of the cubic `phi`.
pub fn phi_coefficients(n1: usize, n2: usize, kappa: &Rat) -> [Rat; 4] {
    let n1r = rat_usize(n1);
    let n2r = rat_usize(n2);
    let c = rat_usize(2 * n1 + 2 * n2 + 2);
    let n2c = &n2r * &n2r * &n2r;
    let a3 = Rat::one() / &n1r + kappa * &n1r * &n1r / &n2c;
    let a2 = -rat(2, 1) / &n1r
        - rat(2, 1) / (&n1r * &n1r)
        - kappa * (rat(2, 1) * &c * &n1r + rat(2, 1) * &n1r * &n1r) / &n2c;
    let a1 = kappa * (&c * &c + rat(4, 1) * &c * &n1r) / &n2c;
    let a0 = -rat(2, 1) * kappa * &c * &c / &n2c;
    [a0, a1, a2, a3]
}

/// All admissible Einstein metrics for the given structure, sorted by `x`.
///
/// Existence is guaranteed by the sign anchors `phi(0) < 0` and
/// `phi((2n1+2n2+2)/n1) > 0`; an empty result is an internal error.
pub fn solve(params: &ClassCParams) -> Result<Vec<EinsteinSolution>, EinsteinError> {
    let kappa = params.kappa_exact();
    let (n1, n2) = (params.n1(), params.n2());
    let coeffs = phi_coefficients(n1, n2, &kappa);
    let upper = rat_usize(2 * n1 + 2 * n2 + 2) / rat_usize(n1);
    let roots = isolate_roots(&coeffs, &Rat::zero(), &upper);
    let mut solutions = Vec::new();
    for root in &roots {
        let x_exact = refine_root(&coeffs, root);
        // Admissibility: x > 2 strictly (x = 2 would force 0 = 2 x^2 / n1^2).
        if x_exact <= rat(2, 1) {
            continue;
        }
        let x = polish_root(n1, n2, params.kappa(), rat_to_f64(&x_exact));
        let c = (2 * n1 + 2 * n2 + 2) as f64;
        let y = (c - n1 as f64 * x) / n2 as f64;
        if !(y > 0.0) {
            continue;
        }
        let z = x * x / n1 as f64 + params.kappa() * y * y / n2 as f64;
        let metric = InvariantMetric::new(1.0 / x, 1.0 / y, 16.0 / z)?;
        let s = second_ricci(params, &metric);
        let residual = (s.s_n1 - metric.g1())
            .abs()
            .max((s.s_n2 - metric.g2()).abs())
            .max((s.s_t - metric.h0()).abs());
        solutions.push(EinsteinSolution {
            metric,
            xyz: (x, y, z),
            residual,
            mu: 1.0,
        });
    }
    if solutions.is_empty() {
        return Err(EinsteinError::NoAdmissibleRoot);
    }
    solutions.sort_by(|a, b| a.xyz.0.total_cmp(&b.xyz.0));
    Ok(solutions)
}

/// A couple of guarded Newton steps in binary64 on top of the exact
/// bisection value.
fn polish_root(n1: usize, n2: usize, kappa: f64, x0: f64) -> f64 {
    let phi = |x: f64| phi_eval(n1, n2, kappa, x);
    let dphi = |x: f64| {
        let h = 1e-7 * x.abs().max(1.0);
        (phi(x + h) - phi(x - h)) / (2.0 * h)
    };
    let mut x = x0;
    for _ in 0..4 {
        let d = dphi(x);
        if d == 0.0 {
            break;
        }
        let step = phi(x) / d;
        if !step.is_finite() || step.abs() > 1e-6 * x.abs().max(1.0) {
            // The exact bisection already placed us within 2^-64; reject any
            // large correction as noise.
            break;
        }
        x -= step;
    }
    if phi(x).abs() <= phi(x0).abs() {
        x
    } else {
        x0
    }
}

/// The exact symmetric solution for `n1 = n2 = n`, `kappa = 1`:
/// `g1 = g2 = n/(2n+1)`, `h0 = 8 n^3 / (2n+1)^2`.
#[derive(Debug, Clone)]
pub struct SymmetricSolution {
    pub n: usize,
    pub g: Rat,
    pub h0: Rat,
    pub x: Rat,
    pub z: Rat,
}

pub fn symmetric_solution_exact(n: usize) -> SymmetricSolution {
    let nr = rat_usize(n);
    let two_n_1 = rat_usize(2 * n + 1);
    let g = &nr / &two_n_1;
    let h0 = rat(8, 1) * &nr * &nr * &nr / (&two_n_1 * &two_n_1);
    let x = &two_n_1 / &nr;
    let z = rat(16, 1) / &h0;
    SymmetricSolution { n, g, h0, x, z }
}

/// The symmetric solution as a floating metric with its certified residual.
pub fn symmetric_solution(n: usize) -> EinsteinSolution {
    let exact = symmetric_solution_exact(n);
    let g = rat_to_f64(&exact.g);
    let h0 = rat_to_f64(&exact.h0);
    let metric = InvariantMetric::new(g, g, h0).expect("positive by construction");
    let params = ClassCParams::standard(n, n).expect("valid");
    let s = second_ricci(&params, &metric);
    let residual = (s.s_n1 - g).abs().max((s.s_n2 - g).abs()).max((s.s_t - h0).abs());
    EinsteinSolution {
        metric,
        xyz: (rat_to_f64(&exact.x), rat_to_f64(&exact.x), rat_to_f64(&exact.z)),
        residual,
        mu: 1.0,
    }
}

/// Exact residuals of the three Einstein equations at the symmetric
/// solution; all three are zero in rational arithmetic.
pub fn symmetric_system_residual_exact(n: usize) -> [Rat; 3] {
    let s = symmetric_solution_exact(n);
    let nr = rat_usize(n);
    let c = rat_usize(4 * n + 2);
    let x = s.x.clone();
    let y = s.x.clone();
    let z = s.z.clone();
    let r1 = &z - &x * &x / &nr - &y * &y / &nr;
    let r2 = &z * (&x - rat(2, 1)) - rat(2, 1) * &x * &x / (&nr * &nr);
    let r3 = &nr * &x + &nr * &y - c;
    [r1, r2, r3]
}

/// The paper-form discriminant of `phi'` at `kappa = 1`, exactly.
pub fn discriminant_d(n1: usize, n2: usize) -> BigInt {
    let a = BigInt::from(n1);
    let b = BigInt::from(n2);
    let p = |base: &BigInt, e: u32| base.pow(e);
    p(&a, 6) + p(&b, 6)
        + 2 * p(&a, 6) * &b
        + 2 * p(&b, 6) * &a
        + p(&a, 6) * p(&b, 2)
        + p(&a, 2) * p(&b, 6)
        + p(&a, 3) * p(&b, 3)
        - (8 * p(&a, 4) * p(&b, 4)
            + 3 * p(&a, 3) * p(&b, 5)
            + 3 * p(&a, 5) * p(&b, 3)
            + 2 * p(&a, 3) * p(&b, 4)
            + 2 * p(&a, 4) * p(&b, 3))
}

/// Uniqueness data at `kappa = 1`.
#[derive(Debug, Clone)]
pub struct UniquenessReport {
    pub discriminant: BigInt,
    /// `n1 <= sqrt(2) n2`, evaluated exactly as `n1^2 <= 2 n2^2`.
    pub band_n1_le_sqrt2_n2: bool,
    /// `n2 <= sqrt(2) n1`.
    pub band_n2_le_sqrt2_n1: bool,
    pub root_count: usize,
    /// Admissible roots `x`, sorted.
    pub roots: Vec<f64>,
}

/// Runs the uniqueness analysis for the standard structure (`kappa = 1`).
pub fn uniqueness_report(n1: usize, n2: usize) -> Result<UniquenessReport, EinsteinError> {
    let params = ClassCParams::standard(n1, n2)?;
    let solutions = solve(&params)?;
    Ok(UniquenessReport {
        discriminant: discriminant_d(n1, n2),
        band_n1_le_sqrt2_n2: n1 * n1 <= 2 * n2 * n2,
        band_n2_le_sqrt2_n1: n2 * n2 <= 2 * n1 * n1,
        root_count: solutions.len(),
        roots: solutions.iter().map(|s| s.xyz.0).collect(),
    })
}

/// Guards a caller-provided structure for the uniqueness analysis: the
/// proof covers exactly `kappa = 1`.
pub fn uniqueness_report_for(params: &ClassCParams) -> Result<UniquenessReport, EinsteinError> {
    if params.kappa_exact() != Rat::one() {
        return Err(EinsteinError::KappaNotOne(params.kappa()));
    }
    uniqueness_report(params.n1(), params.n2())
}
