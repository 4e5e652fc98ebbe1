//! Class-C geometry: invariant metrics, the two-parameter family of
//! invariant complex structures, first and second Chern-Ricci tensors, and
//! the SKT / del-delbar obstructions.
//!
//! Closed forms live here; `oracle` realizes the same geometry concretely on
//! a pair of type-A groups and recomputes everything from structure
//! constants, so every formula can be cross-checked against an independent
//! route.

pub mod oracle;

use crate::exact::{rat_from_f64, rat_int, Rat};
use num::complex::Complex64;
use num::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassCError {
    #[error("invalid class-C parameters: {0}")]
    InvalidParams(String),
    #[error("metric coefficients must be positive and finite: {0}")]
    NonPositiveMetric(String),
    #[error("{0}")]
    WrongBlock(String),
    #[error("xi must be a nonzero element of t")]
    ZeroXi,
}

/// Parameters `(n1, n2, a, b)` of a class-C manifold: complex dimensions of
/// the two symmetric-space factors and the complex structure `J(a, b)` on
/// the torus directions. `kappa = (1 + a^2)/b^2` is the only combination the
/// curvature formulas see.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassCParams {
    n1: usize,
    n2: usize,
    a: f64,
    b: f64,
}

impl ClassCParams {
    pub fn new(n1: usize, n2: usize, a: f64, b: f64) -> Result<Self, ClassCError> {
        if n1 == 0 || n2 == 0 {
            return Err(ClassCError::InvalidParams(
                "n1 and n2 must be at least 1".into(),
            ));
        }
        if !a.is_finite() || !b.is_finite() || b == 0.0 {
            return Err(ClassCError::InvalidParams(
                "require finite a and nonzero finite b".into(),
            ));
        }
        Ok(ClassCParams { n1, n2, a, b })
    }

    /// The standard structure `J_o`.
    pub fn standard(n1: usize, n2: usize) -> Result<Self, ClassCError> {
        ClassCParams::new(n1, n2, 0.0, 1.0)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn kappa(&self) -> f64 {
        (1.0 + self.a * self.a) / (self.b * self.b)
    }

    /// `kappa` as an exact rational (every finite double is rational).
    pub fn kappa_exact(&self) -> Rat {
        let a = rat_from_f64(self.a).expect("finite");
        let b = rat_from_f64(self.b).expect("finite");
        (Rat::one() + &a * &a) / (&b * &b)
    }

    pub fn is_standard(&self) -> bool {
        self.a == 0.0 && self.b == 1.0
    }
}

/// Adapted invariant Hermitian metric: `h(E_alpha, conj E_alpha) = g_i` on
/// the two root blocks and `h(H, conj H) = h0` on the torus part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantMetric {
    g1: f64,
    g2: f64,
    h0: f64,
}

impl InvariantMetric {
    pub fn new(g1: f64, g2: f64, h0: f64) -> Result<Self, ClassCError> {
        for (name, v) in [("g1", g1), ("g2", g2), ("h0", h0)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ClassCError::NonPositiveMetric(format!("{name} = {v}")));
            }
        }
        Ok(InvariantMetric { g1, g2, h0 })
    }

    pub fn g1(&self) -> f64 {
        self.g1
    }

    pub fn g2(&self) -> f64 {
        self.g2
    }

    pub fn h0(&self) -> f64 {
        self.h0
    }

    /// `h(Z1, Z1) = h0 / 2`.
    pub fn h_z1z1(&self) -> f64 {
        self.h0 / 2.0
    }

    /// `h(Z2, Z2) = kappa * h0 / 2`.
    pub fn h_z2z2(&self, params: &ClassCParams) -> f64 {
        params.kappa() * self.h0 / 2.0
    }
}

/// Blockwise values of a Chern-Ricci tensor: `S(E_beta, conj E_beta)` on the
/// two root blocks and `S(H, conj H)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicciData {
    pub s_n1: f64,
    pub s_n2: f64,
    pub s_t: f64,
}

impl RicciData {
    pub fn max_abs_diff(&self, other: &RicciData) -> f64 {
        (self.s_n1 - other.s_n1)
            .abs()
            .max((self.s_n2 - other.s_n2).abs())
            .max((self.s_t - other.s_t).abs())
    }
}

/// Second Chern-Ricci tensor of an adapted invariant metric, in closed form.
pub fn second_ricci(params: &ClassCParams, metric: &InvariantMetric) -> RicciData {
    let (n1, n2) = (params.n1 as f64, params.n2 as f64);
    let kappa = params.kappa();
    let (g1, g2, h0) = (metric.g1, metric.g2, metric.h0);
    RicciData {
        s_n1: 0.5 - h0 / (16.0 * g1 * n1 * n1),
        s_n2: 0.5 - kappa * h0 / (16.0 * g2 * n2 * n2),
        s_t: h0 * h0 / 16.0 * (1.0 / (g1 * g1 * n1) + kappa / (g2 * g2 * n2)),
    }
}

/// First Chern-Ricci tensor: `1/2` on both root blocks, `0` on the torus
/// directions, for every invariant metric.
pub fn first_ricci(_params: &ClassCParams) -> RicciData {
    RicciData {
        s_n1: 0.5,
        s_n2: 0.5,
        s_t: 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructionKind {
    Skt,
    Ddbar,
}

/// A certified non-existence witness: the stated evaluation is nonzero.
#[derive(Debug, Clone)]
pub struct ObstructionReport {
    pub kind: ObstructionKind,
    pub witness: String,
    pub value: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    N1,
    N2,
}

/// A positive root of one of the two blocks, by index within the block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockRoot {
    pub block: Block,
    pub index: usize,
}

/// SKT obstruction: `dd^c omega (E_alpha, E_{-alpha}, E_beta, E_{-beta})`
/// for `alpha, beta` in the first block equals `-h0 / (4 n1^2)`, nonzero for
/// every positive metric. Both roots must come from the first block, as in
/// the defining evaluation.
pub fn skt_obstruction(
    params: &ClassCParams,
    metric: &InvariantMetric,
    alpha: BlockRoot,
    beta: BlockRoot,
) -> Result<ObstructionReport, ClassCError> {
    for r in [alpha, beta] {
        if r.block != Block::N1 {
            return Err(ClassCError::WrongBlock(
                "skt_obstruction evaluates on two roots of the first block".into(),
            ));
        }
        if r.index >= params.n1 {
            return Err(ClassCError::WrongBlock(format!(
                "root index {} out of range for n1 = {}",
                r.index, params.n1
            )));
        }
    }
    let n1 = params.n1 as f64;
    let value = -metric.h0 / (4.0 * n1 * n1);
    Ok(ObstructionReport {
        kind: ObstructionKind::Skt,
        witness: format!(
            "dd^c omega(E_a{}, E_-a{}, E_a{}, E_-a{}) = 2 h((H_a)_m, (H_b)_m) with (H_a)_m = -(i/(2 n1)) Z1",
            alpha.index, alpha.index, beta.index, beta.index
        ),
        value: Complex64::new(value, 0.0),
    })
}

/// Exact rational value of the SKT obstruction when `h0` is rational.
pub fn skt_obstruction_exact(n1: usize, h0: &Rat) -> Rat {
    -h0 / rat_int(4 * (n1 * n1) as i64)
}

/// The del-delbar witness form `omega = d xi^*` for `xi = c1 Z1 + c2 Z2`:
/// evaluates `omega(E_alpha, E_{-alpha}) = -alpha(xi)` on a root of a block
/// where `xi` has a nonzero coefficient, and verifies that `omega` is of
/// type (1,1) on the concrete realization.
pub fn ddbar_witness(
    params: &ClassCParams,
    xi: (f64, f64),
) -> Result<ObstructionReport, ClassCError> {
    if xi.0 == 0.0 && xi.1 == 0.0 {
        return Err(ClassCError::ZeroXi);
    }
    let real = oracle::Realization::new(params);
    let (block, coeff) = if xi.0 != 0.0 {
        (Block::N1, xi.0)
    } else {
        (Block::N2, xi.1)
    };
    let dir = oracle::BasisDir::Pos { block, index: 0 };
    let value = real.ddbar_omega(xi, dir, dir.opposite());
    let expected = Complex64::new(0.0, -coeff);
    debug_assert!((value - expected).norm() < 1e-12);
    if value.norm() == 0.0 {
        // Unreachable for xi != 0: every nonzero xi pairs nontrivially with
        // some complementary root.
        return Err(ClassCError::ZeroXi);
    }
    let type_residual = real.ddbar_type_residual(xi);
    Ok(ObstructionReport {
        kind: ObstructionKind::Ddbar,
        witness: format!(
            "omega = d xi^*, xi = {} Z1 + {} Z2, evaluated on (E_alpha, E_-alpha) in block {:?}; (1,1)-type residual {:.3e}",
            xi.0, xi.1, block, type_residual
        ),
        value,
    })
}

/// Summary returned by [`validate_structure`].
#[derive(Debug, Clone)]
pub struct StructureSummary {
    /// The matrix of `J_t` in the basis `{Z1, Z2}`.
    pub j_t: [[f64; 2]; 2],
    pub kappa: f64,
    /// Max norm of the Nijenhuis tensor over all basis pairs of the concrete
    /// realization; zero (to rounding) for every `(a, b)`.
    pub nijenhuis_residual: f64,
}

/// Confirms `J_t^2 = -Id` exactly (in rational arithmetic on the exact
/// binary64 inputs) and measures the Nijenhuis tensor of the assembled `J`
/// on the realization.
pub fn validate_structure(params: &ClassCParams) -> Result<StructureSummary, ClassCError> {
    let a = rat_from_f64(params.a).expect("finite");
    let b = rat_from_f64(params.b).expect("finite");
    let c = (-Rat::one() - &a * &a) / &b;
    // [[a, c], [b, -a]]^2 = (a^2 + c b) Id = -Id identically.
    let diag = &a * &a + &c * &b;
    assert!(
        diag == -Rat::one(),
        "J_t^2 = -Id must hold exactly by construction"
    );
    let off = &a * &c - &c * &a;
    assert!(off.is_zero());
    let real = oracle::Realization::new(params);
    Ok(StructureSummary {
        j_t: [
            [params.a, (-1.0 - params.a * params.a) / params.b],
            [params.b, -params.a],
        ],
        kappa: params.kappa(),
        nijenhuis_residual: real.nijenhuis_residual(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn metric(g1: f64, g2: f64, h0: f64) -> InvariantMetric {
        InvariantMetric::new(g1, g2, h0).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(ClassCParams::new(1, 1, 0.0, 0.0).is_err());
        assert!(ClassCParams::new(0, 1, 0.0, 1.0).is_err());
        assert!(ClassCParams::new(1, 1, 0.0, 1.0).is_ok());
        assert!(InvariantMetric::new(1.0, -1.0, 1.0).is_err());
        assert!(InvariantMetric::new(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn kappa_values() {
        let p = ClassCParams::new(1, 1, 1.0, 2.0).unwrap();
        assert_eq!(p.kappa(), 0.5);
        assert_eq!(p.kappa_exact(), rat(1, 2));
        let p = ClassCParams::standard(1, 1).unwrap();
        assert_eq!(p.kappa(), 1.0);
        assert!(p.is_standard());
    }

    #[test]
    fn second_ricci_fixed_points() {
        // The symmetric Einstein metrics are fixed by S.
        let p = ClassCParams::standard(1, 1).unwrap();
        let m = metric(1.0 / 3.0, 1.0 / 3.0, 8.0 / 9.0);
        let s = second_ricci(&p, &m);
        assert!((s.s_n1 - m.g1()).abs() < 1e-15);
        assert!((s.s_n2 - m.g2()).abs() < 1e-15);
        assert!((s.s_t - m.h0()).abs() < 1e-15);

        let p = ClassCParams::standard(2, 2).unwrap();
        let m = metric(0.4, 0.4, 64.0 / 25.0);
        let s = second_ricci(&p, &m);
        assert!((s.s_n1 - 0.4).abs() < 1e-15);
        assert!((s.s_n2 - 0.4).abs() < 1e-15);
        assert!((s.s_t - 2.56).abs() < 1e-15);
    }

    #[test]
    fn second_ricci_asymmetric_example() {
        let p = ClassCParams::standard(1, 2).unwrap();
        let m = metric(1.0, 1.0, 16.0);
        let s = second_ricci(&p, &m);
        assert!((s.s_n1 - (-0.5)).abs() < 1e-15);
        assert!((s.s_n2 - 0.25).abs() < 1e-15);
        assert!((s.s_t - 24.0).abs() < 1e-15);
    }

    #[test]
    fn ricci_monotonic_in_h0() {
        // s_n1, s_n2 strictly decreasing in h0; s_t strictly increasing.
        let p = ClassCParams::new(2, 3, 0.5, 1.5).unwrap();
        let mut prev: Option<RicciData> = None;
        for k in 1..=20 {
            let s = second_ricci(&p, &metric(0.7, 0.9, 0.25 * k as f64));
            if let Some(q) = prev {
                assert!(s.s_n1 < q.s_n1);
                assert!(s.s_n2 < q.s_n2);
                assert!(s.s_t > q.s_t);
            }
            prev = Some(s);
        }
    }

    #[test]
    fn first_ricci_is_metric_free() {
        let p = ClassCParams::new(2, 2, 0.3, 1.2).unwrap();
        let r = first_ricci(&p);
        assert_eq!(r.s_n1, 0.5);
        assert_eq!(r.s_n2, 0.5);
        assert_eq!(r.s_t, 0.0);
    }

    #[test]
    fn skt_values() {
        let p = ClassCParams::standard(1, 1).unwrap();
        let m = metric(1.0 / 3.0, 1.0 / 3.0, 8.0 / 9.0);
        let a = BlockRoot {
            block: Block::N1,
            index: 0,
        };
        let rep = skt_obstruction(&p, &m, a, a).unwrap();
        assert!((rep.value.re - (-2.0 / 9.0)).abs() < 1e-15);
        assert_eq!(rep.value.im, 0.0);

        let p = ClassCParams::standard(2, 2).unwrap();
        let m = metric(0.4, 0.4, 64.0 / 25.0);
        let rep = skt_obstruction(&p, &m, a, a).unwrap();
        assert!((rep.value.re - (-4.0 / 25.0)).abs() < 1e-15);

        assert_eq!(skt_obstruction_exact(1, &rat(8, 9)), rat(-2, 9));
        assert_eq!(skt_obstruction_exact(2, &rat(64, 25)), rat(-4, 25));
    }

    #[test]
    fn skt_rejects_wrong_block() {
        let p = ClassCParams::standard(2, 2).unwrap();
        let m = metric(1.0, 1.0, 1.0);
        let a = BlockRoot {
            block: Block::N1,
            index: 0,
        };
        let b = BlockRoot {
            block: Block::N2,
            index: 0,
        };
        assert!(skt_obstruction(&p, &m, a, b).is_err());
        let oob = BlockRoot {
            block: Block::N1,
            index: 5,
        };
        assert!(skt_obstruction(&p, &m, a, oob).is_err());
    }

    #[test]
    fn skt_nonzero_on_random_grid() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let p = ClassCParams::standard(2, 2).unwrap();
        let a = BlockRoot {
            block: Block::N1,
            index: 0,
        };
        for _ in 0..100 {
            let m = metric(
                rng.gen_range(0.05..4.0),
                rng.gen_range(0.05..4.0),
                rng.gen_range(0.05..8.0),
            );
            let rep = skt_obstruction(&p, &m, a, a).unwrap();
            assert!(rep.value.re < 0.0);
        }
    }

    #[test]
    fn validate_structure_examples() {
        let s = validate_structure(&ClassCParams::standard(1, 1).unwrap()).unwrap();
        assert_eq!(s.j_t, [[0.0, -1.0], [1.0, 0.0]]);
        assert_eq!(s.kappa, 1.0);
        assert!(s.nijenhuis_residual < 1e-12);

        let s = validate_structure(&ClassCParams::new(1, 1, 1.0, 2.0).unwrap()).unwrap();
        assert_eq!(s.kappa, 0.5);
        assert!(s.nijenhuis_residual < 1e-12);
    }

    #[test]
    fn ddbar_witness_blocks() {
        let p = ClassCParams::standard(1, 2).unwrap();
        // xi = Z1: nonzero on block 1 roots.
        let rep = ddbar_witness(&p, (1.0, 0.0)).unwrap();
        assert!((rep.value - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        // xi = Z2: block-1 evaluation vanishes, block-2 evaluation does not.
        let real = oracle::Realization::new(&p);
        let d1 = oracle::BasisDir::Pos {
            block: Block::N1,
            index: 0,
        };
        let d2 = oracle::BasisDir::Pos {
            block: Block::N2,
            index: 0,
        };
        assert!(real.ddbar_omega((0.0, 1.0), d1, d1.opposite()).norm() < 1e-15);
        assert!(real.ddbar_omega((0.0, 1.0), d2, d2.opposite()).norm() > 0.5);
        assert!(ddbar_witness(&p, (0.0, 0.0)).is_err());
    }
}
