//! Hermitian curvature flow on the three-parameter invariant family.
//!
//! The normalized flow `h' = h - S(h)` (Chern-Einstein metrics with mu = 1
//! are its equilibria) and the unnormalized `h' = -S(h)` reduce to a coupled
//! ODE for `(g1, g2, h0)`. A classical fixed-step 4th-order integrator with
//! post-stage positivity checks is enough: the vector field is a smooth
//! rational function on the open cone, and blowups are detected by explicit
//! coefficient bounds rather than by step failure.

use crate::classc::{second_ricci, ClassCError, ClassCParams, InvariantMetric, RicciData};
use nalgebra::Matrix3;
use num::complex::Complex64;
use std::io::Write;
use thiserror::Error;

/// Coefficient bounds outside which a trajectory is declared blown up.
pub const BLOWUP_LOW: f64 = 1e-8;
pub const BLOWUP_HIGH: f64 = 1e8;

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("metric left the positive cone during a step: {component} = {value}")]
    PositivityViolation { component: &'static str, value: f64 },
    #[error("invalid numeric parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    ClassC(#[from] ClassCError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowVariant {
    /// `h' = h - S(h)`.
    Normalized,
    /// `h' = -S(h)`.
    Unnormalized,
}

impl FlowVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            FlowVariant::Normalized => "normalized",
            FlowVariant::Unnormalized => "unnormalized",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowOutcome {
    /// Residual dropped below the requested tolerance.
    Converged,
    /// A coefficient left `[BLOWUP_LOW, BLOWUP_HIGH]` or the positive cone.
    Blowup,
    /// `t_max` reached with neither of the above.
    MaxTimeReached,
}

impl FlowOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            FlowOutcome::Converged => "converged",
            FlowOutcome::Blowup => "blowup",
            FlowOutcome::MaxTimeReached => "max-time-reached",
        }
    }
}

/// One recorded state of a trajectory.
#[derive(Debug, Clone, Copy)]
pub struct FlowSample {
    pub t: f64,
    pub g1: f64,
    pub g2: f64,
    pub h0: f64,
    pub s_n1: f64,
    pub s_n2: f64,
    pub s_t: f64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct FlowTrajectory {
    pub params: ClassCParams,
    pub variant: FlowVariant,
    pub samples: Vec<FlowSample>,
    pub outcome: FlowOutcome,
    pub blowup_time: Option<f64>,
}

impl FlowTrajectory {
    pub fn terminal(&self) -> &FlowSample {
        self.samples.last().expect("at least the initial sample")
    }

    /// Writes the trajectory as CSV with the fixed column set.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,g1,g2,h0,s_n1,s_n2,s_t,residual")?;
        for s in &self.samples {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                s.t, s.g1, s.g2, s.h0, s.s_n1, s.s_n2, s.s_t, s.residual
            )?;
        }
        Ok(())
    }
}

fn vector_field(params: &ClassCParams, m: &InvariantMetric, variant: FlowVariant) -> (f64, f64, f64) {
    let s = second_ricci(params, m);
    match variant {
        FlowVariant::Normalized => (m.g1() - s.s_n1, m.g2() - s.s_n2, m.h0() - s.s_t),
        FlowVariant::Unnormalized => (-s.s_n1, -s.s_n2, -s.s_t),
    }
}

fn offset(
    m: &InvariantMetric,
    k: (f64, f64, f64),
    c: f64,
) -> Result<InvariantMetric, FlowError> {
    let g1 = m.g1() + c * k.0;
    let g2 = m.g2() + c * k.1;
    let h0 = m.h0() + c * k.2;
    for (name, v) in [("g1", g1), ("g2", g2), ("h0", h0)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(FlowError::PositivityViolation {
                component: name,
                value: v,
            });
        }
    }
    Ok(InvariantMetric::new(g1, g2, h0)?)
}

/// One classical 4th-order step. `dt = 0` is the identity; every internal
/// stage is checked against the positive cone.
pub fn step(
    params: &ClassCParams,
    metric: &InvariantMetric,
    variant: FlowVariant,
    dt: f64,
) -> Result<InvariantMetric, FlowError> {
    if !(dt.is_finite() && dt >= 0.0) {
        return Err(FlowError::InvalidParameter(format!("dt = {dt}")));
    }
    if dt == 0.0 {
        return Ok(*metric);
    }
    let k1 = vector_field(params, metric, variant);
    let k2 = vector_field(params, &offset(metric, k1, dt / 2.0)?, variant);
    let k3 = vector_field(params, &offset(metric, k2, dt / 2.0)?, variant);
    let k4 = vector_field(params, &offset(metric, k3, dt)?, variant);
    let combined = (
        (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0) / 6.0,
        (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1) / 6.0,
        (k1.2 + 2.0 * k2.2 + 2.0 * k3.2 + k4.2) / 6.0,
    );
    offset(metric, combined, dt)
}

/// Max componentwise distance of `metric` from its normalized-flow image,
/// i.e. `max |h - S(h)|`; zero exactly at a Chern-Einstein metric.
pub fn fixed_point_residual(params: &ClassCParams, metric: &InvariantMetric) -> f64 {
    let s = second_ricci(params, metric);
    (metric.g1() - s.s_n1)
        .abs()
        .max((metric.g2() - s.s_n2).abs())
        .max((metric.h0() - s.s_t).abs())
}

#[derive(Debug, Clone, Copy)]
pub struct IntegrateOpts {
    pub dt: f64,
    pub t_max: f64,
    /// Convergence tolerance on the fixed-point residual.
    pub tol: f64,
    /// Record every `sample_stride`-th step (the initial and terminal states
    /// are always recorded).
    pub sample_stride: usize,
}

impl IntegrateOpts {
    pub fn new(dt: f64, t_max: f64, tol: f64) -> Self {
        // Aim for on the order of a thousand recorded samples.
        let steps = (t_max / dt).ceil().max(1.0) as usize;
        IntegrateOpts {
            dt,
            t_max,
            tol,
            sample_stride: (steps / 1000).max(1),
        }
    }
}

/// Integrates the flow until convergence, blowup, or `t_max`.
///
/// No sample is recorded after the first positivity/bound violation; the
/// final recorded sample is the last valid state and `blowup_time` is the
/// time at which the violation was detected.
pub fn integrate(
    params: &ClassCParams,
    metric0: &InvariantMetric,
    variant: FlowVariant,
    opts: &IntegrateOpts,
) -> Result<FlowTrajectory, FlowError> {
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(FlowError::InvalidParameter(format!("dt = {}", opts.dt)));
    }
    if !(opts.t_max > 0.0 && opts.t_max.is_finite()) {
        return Err(FlowError::InvalidParameter(format!("t_max = {}", opts.t_max)));
    }
    if !(opts.tol > 0.0) {
        return Err(FlowError::InvalidParameter(format!("tol = {}", opts.tol)));
    }
    let sample_of = |t: f64, m: &InvariantMetric| -> FlowSample {
        let s: RicciData = second_ricci(params, m);
        FlowSample {
            t,
            g1: m.g1(),
            g2: m.g2(),
            h0: m.h0(),
            s_n1: s.s_n1,
            s_n2: s.s_n2,
            s_t: s.s_t,
            residual: fixed_point_residual(params, m),
        }
    };
    let within_bounds = |m: &InvariantMetric| -> bool {
        [m.g1(), m.g2(), m.h0()]
            .iter()
            .all(|&v| (BLOWUP_LOW..=BLOWUP_HIGH).contains(&v))
    };
    let mut samples = vec![sample_of(0.0, metric0)];
    let mut metric = *metric0;
    let mut t = 0.0f64;
    if samples[0].residual < opts.tol {
        return Ok(FlowTrajectory {
            params: *params,
            variant,
            samples,
            outcome: FlowOutcome::Converged,
            blowup_time: None,
        });
    }
    if !within_bounds(&metric) {
        return Ok(FlowTrajectory {
            params: *params,
            variant,
            samples,
            outcome: FlowOutcome::Blowup,
            blowup_time: Some(0.0),
        });
    }
    let mut step_index = 0usize;
    loop {
        match step(params, &metric, variant, opts.dt) {
            Ok(next) => {
                t += opts.dt;
                step_index += 1;
                if !within_bounds(&next) {
                    return Ok(FlowTrajectory {
                        params: *params,
                        variant,
                        samples,
                        outcome: FlowOutcome::Blowup,
                        blowup_time: Some(t),
                    });
                }
                metric = next;
            }
            Err(FlowError::PositivityViolation { .. }) => {
                return Ok(FlowTrajectory {
                    params: *params,
                    variant,
                    samples,
                    outcome: FlowOutcome::Blowup,
                    blowup_time: Some(t + opts.dt),
                });
            }
            Err(e) => return Err(e),
        }
        let residual = fixed_point_residual(params, &metric);
        let record = step_index % opts.sample_stride == 0;
        if residual < opts.tol {
            samples.push(sample_of(t, &metric));
            return Ok(FlowTrajectory {
                params: *params,
                variant,
                samples,
                outcome: FlowOutcome::Converged,
                blowup_time: None,
            });
        }
        if t + opts.dt > opts.t_max + 1e-12 {
            samples.push(sample_of(t, &metric));
            return Ok(FlowTrajectory {
                params: *params,
                variant,
                samples,
                outcome: FlowOutcome::MaxTimeReached,
                blowup_time: None,
            });
        }
        if record {
            samples.push(sample_of(t, &metric));
        }
    }
}

/// Finite-difference linearization of the normalized vector field.
#[derive(Debug, Clone)]
pub struct Linearization {
    pub jacobian: [[f64; 3]; 3],
    pub eigenvalues: [Complex64; 3],
}

/// Central-difference Jacobian (relative step `1e-6`) of
/// `F(g1, g2, h0) = (g1, g2, h0) - S(g1, g2, h0)`, with its eigenvalues.
pub fn linearization(params: &ClassCParams, metric: &InvariantMetric) -> Linearization {
    let f = |v: [f64; 3]| -> [f64; 3] {
        let m = InvariantMetric::new(v[0], v[1], v[2]).expect("positive in a neighborhood");
        let s = second_ricci(params, &m);
        [v[0] - s.s_n1, v[1] - s.s_n2, v[2] - s.s_t]
    };
    let x = [metric.g1(), metric.g2(), metric.h0()];
    let mut jac = [[0.0f64; 3]; 3];
    for j in 0..3 {
        let h = 1e-6 * x[j].abs().max(1.0);
        let mut xp = x;
        xp[j] += h;
        let mut xm = x;
        xm[j] -= h;
        let fp = f(xp);
        let fm = f(xm);
        for i in 0..3 {
            jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    let m = Matrix3::from_fn(|i, j| jac[i][j]);
    let eig = m.complex_eigenvalues();
    Linearization {
        jacobian: jac,
        eigenvalues: [eig[0], eig[1], eig[2]],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::einstein::symmetric_solution;

    fn metric(g1: f64, g2: f64, h0: f64) -> InvariantMetric {
        InvariantMetric::new(g1, g2, h0).unwrap()
    }

    #[test]
    fn einstein_metric_is_fixed() {
        let params = ClassCParams::standard(2, 2).unwrap();
        let m = symmetric_solution(2).metric;
        for dt in [1e-2, 1e-3, 1e-4] {
            let next = step(&params, &m, FlowVariant::Normalized, dt).unwrap();
            assert!((next.g1() - m.g1()).abs() < 1e-13);
            assert!((next.g2() - m.g2()).abs() < 1e-13);
            assert!((next.h0() - m.h0()).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_step_is_identity() {
        let params = ClassCParams::standard(1, 1).unwrap();
        let m = metric(1.0, 1.0, 1.0);
        let next = step(&params, &m, FlowVariant::Normalized, 0.0).unwrap();
        assert_eq!(next, m);
    }

    #[test]
    fn rk4_euler_consistency() {
        // One RK4 step agrees with one Euler step to O(dt^2).
        let params = ClassCParams::standard(2, 2).unwrap();
        let m = metric(0.5, 0.5, 3.0);
        let dt = 1e-3;
        let rk = step(&params, &m, FlowVariant::Normalized, dt).unwrap();
        let s = second_ricci(&params, &m);
        let euler = [
            m.g1() + dt * (m.g1() - s.s_n1),
            m.g2() + dt * (m.g2() - s.s_n2),
            m.h0() + dt * (m.h0() - s.s_t),
        ];
        let bound = 5.0 * dt * dt;
        assert!((rk.g1() - euler[0]).abs() < bound);
        assert!((rk.g2() - euler[1]).abs() < bound);
        assert!((rk.h0() - euler[2]).abs() < bound);
    }

    #[test]
    fn unnormalized_field_is_negated_ricci() {
        let params = ClassCParams::standard(1, 2).unwrap();
        let m = metric(1.0, 1.0, 16.0);
        let dt = 1e-6;
        let next = step(&params, &m, FlowVariant::Unnormalized, dt).unwrap();
        let s = second_ricci(&params, &m);
        assert!((next.g1() - (m.g1() - dt * s.s_n1)).abs() < 1e-10);
        assert!((next.h0() - (m.h0() - dt * s.s_t)).abs() < 1e-9);
    }

    #[test]
    fn fixed_point_residual_examples() {
        let params = ClassCParams::standard(1, 1).unwrap();
        let m = symmetric_solution(1).metric;
        assert!(fixed_point_residual(&params, &m) < 1e-12);
        // Doubling the Einstein metric is no longer Einstein.
        let doubled = metric(2.0 * m.g1(), 2.0 * m.g2(), 2.0 * m.h0());
        assert!(fixed_point_residual(&params, &doubled) > 1e-3);

        let params = ClassCParams::standard(1, 2).unwrap();
        let m = metric(1.0, 1.0, 16.0);
        assert!((fixed_point_residual(&params, &m) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn equilibrium_trajectory_stays_put() {
        let params = ClassCParams::standard(2, 2).unwrap();
        let m = symmetric_solution(2).metric;
        let opts = IntegrateOpts::new(1e-3, 10.0, 1e-300);
        let traj = integrate(&params, &m, FlowVariant::Normalized, &opts).unwrap();
        assert_eq!(traj.outcome, FlowOutcome::MaxTimeReached);
        for s in &traj.samples {
            assert!((s.g1 - m.g1()).abs() < 1e-8);
            assert!((s.g2 - m.g2()).abs() < 1e-8);
            assert!((s.h0 - m.h0()).abs() < 1e-8);
        }
        // With a realistic tolerance the run converges immediately.
        let opts = IntegrateOpts::new(1e-3, 10.0, 1e-8);
        let traj = integrate(&params, &m, FlowVariant::Normalized, &opts).unwrap();
        assert_eq!(traj.outcome, FlowOutcome::Converged);
        assert_eq!(traj.terminal().t, 0.0);
    }

    #[test]
    fn invalid_parameters_rejected() {
        let params = ClassCParams::standard(1, 1).unwrap();
        let m = metric(1.0, 1.0, 1.0);
        assert!(integrate(&params, &m, FlowVariant::Normalized, &IntegrateOpts::new(-1.0, 1.0, 1e-8)).is_err());
        assert!(integrate(&params, &m, FlowVariant::Normalized, &IntegrateOpts::new(1e-3, -1.0, 1e-8)).is_err());
        assert!(integrate(&params, &m, FlowVariant::Normalized, &IntegrateOpts::new(1e-3, 1.0, 0.0)).is_err());
        assert!(step(&params, &m, FlowVariant::Normalized, f64::NAN).is_err());
    }

    #[test]
    fn blowup_detected_and_no_samples_after() {
        // Large h0 with small g's drives g1 negative fast under h' = h - S.
        let params = ClassCParams::standard(1, 1).unwrap();
        let m = metric(0.05, 0.05, 50.0);
        let opts = IntegrateOpts {
            dt: 1e-2,
            t_max: 50.0,
            tol: 1e-12,
            sample_stride: 1,
        };
        let traj = integrate(&params, &m, FlowVariant::Normalized, &opts).unwrap();
        assert_eq!(traj.outcome, FlowOutcome::Blowup);
        let bt = traj.blowup_time.unwrap();
        assert!(traj.samples.iter().all(|s| s.t < bt));
        for s in &traj.samples {
            assert!(s.g1 > 0.0 && s.g2 > 0.0 && s.h0 > 0.0);
        }
    }

    #[test]
    fn step_halving_robustness() {
        // The Einstein point is a saddle, so a converging run must start
        // near the stable eigendirection; at (1,1) the stable eigenvector of
        // the symmetric block is proportional to (-3/32, -3/32, 1). Both
        // step sizes must converge to terminal states within 1e-6.
        let params = ClassCParams::standard(1, 1).unwrap();
        let e = symmetric_solution(1).metric;
        let eps = 1e-3;
        let m = metric(
            e.g1() - eps * 3.0 / 32.0,
            e.g2() - eps * 3.0 / 32.0,
            e.h0() + eps,
        );
        let run = |dt: f64| {
            let opts = IntegrateOpts::new(dt, 50.0, 1e-4);
            integrate(&params, &m, FlowVariant::Normalized, &opts).unwrap()
        };
        let a = run(1e-3);
        let b = run(5e-4);
        assert_eq!(a.outcome, FlowOutcome::Converged);
        assert_eq!(b.outcome, FlowOutcome::Converged);
        let ta = a.terminal();
        let tb = b.terminal();
        assert!((ta.g1 - tb.g1).abs() < 1e-6);
        assert!((ta.g2 - tb.g2).abs() < 1e-6);
        assert!((ta.h0 - tb.h0).abs() < 1e-6);
    }

    #[test]
    fn perturbed_start_records_trajectory() {
        // Slightly scaled Einstein start at (1,1): the run must record a
        // trajectory and report some outcome; which one is not asserted.
        let params = ClassCParams::standard(1, 1).unwrap();
        let e = symmetric_solution(1).metric;
        let m = metric(e.g1() * 1.001, e.g2() * 1.001, e.h0() * 1.001);
        let opts = IntegrateOpts::new(1e-3, 20.0, 1e-10);
        let traj = integrate(&params, &m, FlowVariant::Normalized, &opts).unwrap();
        assert!(traj.samples.len() > 1);
        assert!(matches!(
            traj.outcome,
            FlowOutcome::Converged | FlowOutcome::Blowup | FlowOutcome::MaxTimeReached
        ));
        // Samples are strictly increasing in t and positive until the end.
        for w in traj.samples.windows(2) {
            assert!(w[1].t > w[0].t);
        }
        for s in &traj.samples {
            assert!(s.g1 > 0.0 && s.g2 > 0.0 && s.h0 > 0.0);
        }
    }

    #[test]
    fn csv_format() {
        let params = ClassCParams::standard(2, 2).unwrap();
        let m = symmetric_solution(2).metric;
        let opts = IntegrateOpts::new(1e-2, 0.1, 1e-300);
        let traj = integrate(&params, &m, FlowVariant::Normalized, &opts).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,g1,g2,h0,s_n1,s_n2,s_t,residual");
        let first = lines.next().unwrap();
        assert_eq!(first.split(',').count(), 8);
        // Round-trip: the g1 column parses back to the exact binary64.
        let g1: f64 = first.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(g1, m.g1());
    }

    #[test]
    fn linearization_against_analytic_jacobian() {
        // Hand-differentiated closed forms:
        //   d s1/d g1 = h0/(16 g1^2 n1^2), d s1/d h0 = -1/(16 g1 n1^2),
        //   d s2/d g2 = k h0/(16 g2^2 n2^2), d s2/d h0 = -k/(16 g2 n2^2),
        //   d st/d g1 = -h0^2/(8 g1^3 n1),   d st/d g2 = -k h0^2/(8 g2^3 n2),
        //   d st/d h0 = h0/8 (1/(g1^2 n1) + k/(g2^2 n2)),
        // and F = id - S.
        let params = ClassCParams::new(2, 3, 1.0, 2.0).unwrap();
        let k = params.kappa();
        let m = metric(0.7, 1.1, 2.3);
        let (n1, n2) = (2.0f64, 3.0f64);
        let (g1, g2, h0) = (m.g1(), m.g2(), m.h0());
        let ds = [
            [h0 / (16.0 * g1 * g1 * n1 * n1), 0.0, -1.0 / (16.0 * g1 * n1 * n1)],
            [0.0, k * h0 / (16.0 * g2 * g2 * n2 * n2), -k / (16.0 * g2 * n2 * n2)],
            [
                -h0 * h0 / (8.0 * g1 * g1 * g1 * n1),
                -k * h0 * h0 / (8.0 * g2 * g2 * g2 * n2),
                h0 / 8.0 * (1.0 / (g1 * g1 * n1) + k / (g2 * g2 * n2)),
            ],
        ];
        let lin = linearization(&params, &m);
        for i in 0..3 {
            for j in 0..3 {
                let analytic = if i == j { 1.0 - ds[i][j] } else { -ds[i][j] };
                assert!(
                    (lin.jacobian[i][j] - analytic).abs() < 1e-5,
                    "J[{i}][{j}] = {} vs {analytic}",
                    lin.jacobian[i][j]
                );
            }
        }
    }

    #[test]
    fn linearization_swap_symmetry() {
        // At (n, n), kappa = 1, and the symmetric solution, the Jacobian
        // commutes with the g1 <-> g2 swap.
        let params = ClassCParams::standard(2, 2).unwrap();
        let m = symmetric_solution(2).metric;
        let lin = linearization(&params, &m);
        let j = lin.jacobian;
        assert!((j[0][0] - j[1][1]).abs() < 1e-8);
        assert!((j[0][1] - j[1][0]).abs() < 1e-8);
        assert!((j[0][2] - j[1][2]).abs() < 1e-8);
        assert!((j[2][0] - j[2][1]).abs() < 1e-8);
    }
}
