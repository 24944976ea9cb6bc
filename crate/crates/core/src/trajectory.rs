//! Time-discretized qubit trajectories with adaptive refinement.
//!
//! Both channels sample the qubit state on a grid over [0, T]. The grid is
//! refined until (a) the unwrapped coherence azimuth moves by less than
//! 0.3 rad between consecutive samples, which keeps branch tracking
//! unambiguous, and (b) the parallel-transport integral used downstream is
//! grid-converged. When the coherence collapses the azimuth is held at its
//! last reliable value and the trajectory is flagged rather than fabricating
//! a phase.

use alloc::vec::Vec;
use core::f64::consts::TAU;
use num_traits::Float;

use crate::qubit::QubitDensity;
use crate::Error;

/// Hard cap on the number of samples in one trajectory.
pub const MAX_SAMPLES_DEFAULT: usize = 1 << 20;

/// Largest allowed azimuth step between consecutive samples, radians.
pub const AZIMUTH_STEP: f64 = 0.3;

/// One sampled point, as produced by a channel.
#[derive(Debug, Clone, Copy)]
pub struct SamplePoint {
    pub state: QubitDensity,
    /// Channel diagnostic: echo modulus |F| for dephasing, purity proxy
    /// 2 Tr(rho^2) - 1 for the dissipative channel.
    pub echo: f64,
    /// Wrapped coherence azimuth, or None when it is unreliable (collapse).
    pub azimuth: Option<f64>,
}

/// Grid-construction options.
#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub total_time: f64,
    pub initial_steps: usize,
    pub max_samples: usize,
    pub azimuth_step: f64,
    /// Refine globally until the transport integral moves by less than this.
    pub convergence_tol: f64,
}

impl BuildOptions {
    pub fn new(total_time: f64, initial_steps: usize) -> Result<Self, Error> {
        if !total_time.is_finite() || total_time <= 0.0 {
            return Err(Error::InvalidParams(
                "total_time must be positive and finite",
            ));
        }
        if initial_steps < 16 {
            return Err(Error::InvalidParams("initial_steps must be at least 16"));
        }
        Ok(Self {
            total_time,
            initial_steps,
            max_samples: MAX_SAMPLES_DEFAULT,
            azimuth_step: AZIMUTH_STEP,
            convergence_tol: 1e-8,
        })
    }

    pub fn with_max_samples(mut self, cap: usize) -> Self {
        self.max_samples = cap;
        self
    }
}

/// Time-ordered qubit states plus diagnostics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<QubitDensity>,
    /// Per-sample channel diagnostic (see [`SamplePoint::echo`]).
    pub echo_modulus: Vec<f64>,
    /// Continuous, unwrapped coherence azimuth per sample.
    pub azimuth: Vec<f64>,
    /// The coherence collapsed somewhere: azimuth values were held.
    pub collapse: bool,
    /// The sample cap stopped refinement before the thresholds were met.
    pub capped: bool,
    /// The underlying mode table contained a gapless mode.
    pub degenerate: bool,
}

impl Trajectory {
    pub fn steps_used(&self) -> usize {
        self.times.len()
    }

    pub fn min_echo(&self) -> f64 {
        self.echo_modulus
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Polar angle of the Bloch vector at sample `i` (0 at |up>).
    pub fn alpha_at(&self, i: usize) -> f64 {
        let s = &self.states[i];
        f64::atan2(2.0 * s.rho12.norm(), s.rho11 - s.rho22)
    }

    /// Trapezoid value of the parallel-transport integral
    /// int cos^2(alpha/2) d(phi) over the stored samples.
    pub fn transport_integral(&self) -> f64 {
        let mut acc = 0.0;
        for i in 1..self.times.len() {
            let w0 = {
                let a = self.alpha_at(i - 1);
                let c = (a / 2.0).cos();
                c * c
            };
            let w1 = {
                let a = self.alpha_at(i);
                let c = (a / 2.0).cos();
                c * c
            };
            acc += 0.5 * (w0 + w1) * (self.azimuth[i] - self.azimuth[i - 1]);
        }
        acc
    }
}

struct Node {
    t: f64,
    point: SamplePoint,
    /// Unwrapped azimuth (filled by the unwrap pass).
    phi: f64,
}

/// Build a trajectory by adaptive bisection of the time grid.
///
/// `sample` must be a pure function of t; the builder is sequential and its
/// output depends only on the options, never on evaluation order.
pub fn build_adaptive(
    sample: impl Fn(f64) -> SamplePoint,
    opts: &BuildOptions,
) -> Result<Trajectory, Error> {
    if opts.initial_steps < 16 {
        return Err(Error::InvalidParams("initial_steps must be at least 16"));
    }
    if !opts.total_time.is_finite() || opts.total_time <= 0.0 {
        return Err(Error::InvalidParams("total_time must be positive"));
    }
    let cap = opts.max_samples.max(opts.initial_steps + 1);

    let mut nodes: Vec<Node> = (0..=opts.initial_steps)
        .map(|i| {
            let t = opts.total_time * i as f64 / opts.initial_steps as f64;
            Node {
                t,
                point: sample(t),
                phi: 0.0,
            }
        })
        .collect();

    let mut capped = refine_azimuth(&mut nodes, &sample, opts.azimuth_step, cap);

    // Global refinement until the transport integral stops moving. The
    // azimuth criterion alone bounds branch errors, not quadrature error.
    // Convergence is only declared after at least one verified doubling.
    let mut previous = None;
    loop {
        let current = transport_of(&nodes);
        if let Some(prev) = previous {
            if integral_converged(prev, current, opts.convergence_tol) {
                break;
            }
        }
        if nodes.len() * 2 - 1 > cap {
            capped = true;
            break;
        }
        bisect_all(&mut nodes, &sample);
        capped |= refine_azimuth(&mut nodes, &sample, opts.azimuth_step, cap);
        previous = Some(current);
    }

    let collapse = nodes.iter().any(|n| n.point.azimuth.is_none());
    Ok(Trajectory {
        times: nodes.iter().map(|n| n.t).collect(),
        states: nodes.iter().map(|n| n.point.state).collect(),
        echo_modulus: nodes.iter().map(|n| n.point.echo).collect(),
        azimuth: nodes.iter().map(|n| n.phi).collect(),
        collapse,
        capped,
        degenerate: false,
    })
}

fn integral_converged(prev: f64, current: f64, tol: f64) -> bool {
    (current - prev).abs() <= tol * current.abs().max(1.0)
}

/// Sequential unwrap: each defined azimuth is lifted to the branch nearest
/// the running value; undefined samples hold it.
fn unwrap_pass(nodes: &mut [Node]) {
    let mut held = 0.0;
    let mut anchored = false;
    for node in nodes.iter_mut() {
        if let Some(raw) = node.point.azimuth {
            if !anchored {
                held = raw;
                anchored = true;
            } else {
                let turns = ((held - raw) / TAU).round();
                held = raw + TAU * turns;
            }
        }
        node.phi = held;
    }
}

/// Bisect intervals whose unwrapped azimuth step exceeds the threshold.
/// Returns true if the cap prevented full refinement.
fn refine_azimuth(
    nodes: &mut Vec<Node>,
    sample: &impl Fn(f64) -> SamplePoint,
    step: f64,
    cap: usize,
) -> bool {
    let mut capped = false;
    loop {
        unwrap_pass(nodes);
        let mut inserts: Vec<(usize, Node)> = Vec::new();
        for i in 1..nodes.len() {
            let defined = nodes[i - 1].point.azimuth.is_some() && nodes[i].point.azimuth.is_some();
            if !defined {
                continue;
            }
            if (nodes[i].phi - nodes[i - 1].phi).abs() > step {
                let t = 0.5 * (nodes[i - 1].t + nodes[i].t);
                if t > nodes[i - 1].t && t < nodes[i].t {
                    inserts.push((
                        i,
                        Node {
                            t,
                            point: sample(t),
                            phi: 0.0,
                        },
                    ));
                }
            }
        }
        if inserts.is_empty() {
            return capped;
        }
        if nodes.len() + inserts.len() > cap {
            let room = cap.saturating_sub(nodes.len());
            inserts.truncate(room);
            capped = true;
        }
        // Insert back-to-front so stored indices stay valid.
        for (idx, node) in inserts.into_iter().rev() {
            nodes.insert(idx, node);
        }
        if capped {
            unwrap_pass(nodes);
            return true;
        }
    }
}

fn bisect_all(nodes: &mut Vec<Node>, sample: &impl Fn(f64) -> SamplePoint) {
    let mut out: Vec<Node> = Vec::with_capacity(nodes.len() * 2 - 1);
    for i in 0..nodes.len() {
        if i > 0 {
            let t = 0.5 * (nodes[i - 1].t + nodes[i].t);
            if t > nodes[i - 1].t && t < nodes[i].t {
                out.push(Node {
                    t,
                    point: sample(t),
                    phi: 0.0,
                });
            }
        }
        out.push(Node {
            t: nodes[i].t,
            point: nodes[i].point,
            phi: 0.0,
        });
    }
    *nodes = out;
    unwrap_pass(nodes);
}

fn transport_of(nodes: &[Node]) -> f64 {
    let mut acc = 0.0;
    for i in 1..nodes.len() {
        let w = |n: &Node| {
            let s = &n.point.state;
            let a = f64::atan2(2.0 * s.rho12.norm(), s.rho11 - s.rho22);
            let c = (a / 2.0).cos();
            c * c
        };
        acc += 0.5 * (w(&nodes[i - 1]) + w(&nodes[i])) * (nodes[i].phi - nodes[i - 1].phi);
    }
    acc
}
