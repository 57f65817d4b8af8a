//! Equations of motion on the coherent state manifold: the Riccati flow of a
//! Hamiltonian linear in the generators and geodesics of the Kähler metric.
//!
//! The flow right-hand side is read off the vector field parts of the
//! differential operators, `i dz_a/dt = Σ_λ ε_λ Q_{λ,a}(z, w)`:
//!
//! ```text
//! i dz/dt = ε_a + conj(ε_a) w + (ε0/2) z + ε+ z w
//! i dw/dt = ε- + ε0 w + ε+ w²
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::JacobiCSPoint;
use crate::diffops::{make_generators, Generator};
use crate::kernel::metric;
use crate::{Error, Result, Weight};

type C = Complex64;

const I: C = C::new(0.0, 1.0);

/// Coefficients of `H = ε_a a + ε_a† a+ + ε0 K0 + ε+ K+ + ε- K-`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianCoeffs {
    #[serde(with = "crate::cjson::complex")]
    pub eps_a: C,
    /// Coefficient of `a+`; `conj(eps_a)` when hermitian.
    #[serde(with = "crate::cjson::complex")]
    pub eps_a_dag: C,
    #[serde(with = "crate::cjson::complex")]
    pub eps_0: C,
    #[serde(with = "crate::cjson::complex")]
    pub eps_plus: C,
    #[serde(with = "crate::cjson::complex")]
    pub eps_minus: C,
    pub hermitian: bool,
}

impl HamiltonianCoeffs {
    pub fn hermitian(eps_a: C, eps_0: f64, eps_plus: C) -> Self {
        HamiltonianCoeffs {
            eps_a,
            eps_a_dag: eps_a.conj(),
            eps_0: C::new(eps_0, 0.0),
            eps_plus,
            eps_minus: eps_plus.conj(),
            hermitian: true,
        }
    }

    /// Arbitrary complex coefficients. The flow may leave the disk.
    pub fn general(eps_a: C, eps_a_dag: C, eps_0: C, eps_plus: C, eps_minus: C) -> Self {
        let mut h = HamiltonianCoeffs {
            eps_a,
            eps_a_dag,
            eps_0,
            eps_plus,
            eps_minus,
            hermitian: false,
        };
        h.hermitian = h.is_hermitian(0.0);
        h
    }

    pub fn zero() -> Self {
        Self::hermitian(C::new(0.0, 0.0), 0.0, C::new(0.0, 0.0))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self.eps_a_dag - self.eps_a.conj()).norm() <= tol
            && self.eps_0.im.abs() <= tol
            && (self.eps_minus - self.eps_plus.conj()).norm() <= tol
    }

    pub fn coefficient(&self, g: Generator) -> C {
        match g {
            Generator::A => self.eps_a,
            Generator::ADag => self.eps_a_dag,
            Generator::K0 => self.eps_0,
            Generator::KPlus => self.eps_plus,
            Generator::KMinus => self.eps_minus,
        }
    }
}

/// `(dz/dt, dw/dt)` of the coherent state flow.
pub fn riccati_rhs(x: &JacobiCSPoint, h: &HamiltonianCoeffs) -> (C, C) {
    let (z, w) = (x.z, x.w());
    let iz = h.eps_a + h.eps_a_dag * w + h.eps_0 * 0.5 * z + h.eps_plus * z * w;
    let iw = h.eps_minus + h.eps_0 * w + h.eps_plus * w * w;
    (-I * iz, -I * iw)
}

/// Same right-hand side assembled from the generators' vector field parts.
pub fn riccati_rhs_assembled(
    x: &JacobiCSPoint,
    h: &HamiltonianCoeffs,
    k: &Weight,
) -> Result<(C, C)> {
    let g = make_generators::<C>(k)?;
    let (z, w) = (x.z, x.w());
    let mut iz = C::new(0.0, 0.0);
    let mut iw = C::new(0.0, 0.0);
    for gen in Generator::ALL {
        let e = h.coefficient(gen);
        iz += e * g.get(gen).qz.eval(z, w);
        iw += e * g.get(gen).qw.eval(z, w);
    }
    Ok((-I * iz, -I * iw))
}

/// The variant with `ε_a†` moved from the `z` equation into the `w`
/// equation, `i dw/dt = ε- + (ε_a† + ε0) w + ε+ w²`.
pub fn riccati_rhs_as_printed(x: &JacobiCSPoint, h: &HamiltonianCoeffs) -> (C, C) {
    let (z, w) = (x.z, x.w());
    let iz = h.eps_a + h.eps_0 * 0.5 * z + h.eps_plus * z * w;
    let iw = h.eps_minus + (h.eps_a_dag + h.eps_0) * w + h.eps_plus * w * w;
    (-I * iz, -I * iw)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiccatiDiscrepancy {
    /// `|dz/dt|` difference between the assembled and the alternative form.
    pub dz: f64,
    pub dw: f64,
}

impl RiccatiDiscrepancy {
    pub fn vanishes(&self) -> bool {
        self.dz == 0.0 && self.dw == 0.0
    }
}

/// Compares the assembled flow with the alternative placement of `ε_a†`.
/// The two agree exactly iff `ε_a† = 0`.
pub fn riccati_discrepancy(x: &JacobiCSPoint, h: &HamiltonianCoeffs) -> RiccatiDiscrepancy {
    let (az, aw) = riccati_rhs(x, h);
    let (pz, pw) = riccati_rhs_as_printed(x, h);
    RiccatiDiscrepancy {
        dz: (az - pz).norm(),
        dw: (aw - pw).norm(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FlowStatus {
    Completed,
    /// `|w|` reached `1 - eps` at time `t`.
    DiskExit {
        t: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    #[serde(with = "crate::cjson::complex")]
    pub z: C,
    #[serde(with = "crate::cjson::complex")]
    pub w: C,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// `(dz/dt, dw/dt)` at each sample, geodesics only.
    pub velocities: Option<Vec<[crate::cjson::JsonComplex; 2]>>,
    pub dt: f64,
    pub method: String,
    /// Largest `|w|` seen.
    pub max_disk_excursion: f64,
    /// Largest difference between one full step and two half steps.
    pub max_step_error: f64,
    pub status: FlowStatus,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples
            .last()
            .expect("trajectory has at least one sample")
    }

    /// Columns `t, re_z, im_z, re_w, im_w`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,re_z,im_z,re_w,im_w\n");
        for p in &self.samples {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                p.t, p.z.re, p.z.im, p.w.re, p.w.im
            ));
        }
        s
    }
}

/// Inputs of an integration run, written next to its output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    #[serde(rename = "H")]
    pub hamiltonian: Option<HamiltonianCoeffs>,
    pub x0: JacobiCSPoint,
    pub dt: f64,
    pub method: String,
    pub seed: Option<u64>,
}

/// Margin below `|w| = 1` at which integration stops.
pub const DISK_EXIT_EPS: f64 = 1e-9;

const METHOD: &str = "rk4-step-halving";

fn rk4<const D: usize, F: Fn(&[C; D]) -> [C; D]>(f: &F, y: &[C; D], h: f64) -> [C; D] {
    let axpy =
        |a: &[C; D], s: f64, b: &[C; D]| -> [C; D] { std::array::from_fn(|i| a[i] + b[i] * s) };
    let k1 = f(y);
    let k2 = f(&axpy(y, h / 2.0, &k1));
    let k3 = f(&axpy(y, h / 2.0, &k2));
    let k4 = f(&axpy(y, h, &k3));
    std::array::from_fn(|i| y[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0))
}

/// Samples with the largest step-halving error and the exit status.
type Flow<C, const D: usize> = (Vec<(f64, [C; D])>, f64, FlowStatus);

/// Fixed step integration, keeping the two-half-steps result and recording
/// its difference from a single full step. `w_slot` is the index of `w` in
/// the state.
fn integrate<const D: usize, F: Fn(&[C; D]) -> [C; D]>(
    f: F,
    y0: [C; D],
    t_span: (f64, f64),
    dt: f64,
    w_slot: usize,
) -> Result<Flow<C, D>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "step must be positive, got {dt}"
        )));
    }
    let (t0, t1) = t_span;
    if !(t1 >= t0) {
        return Err(Error::InvalidArgument(format!(
            "empty time span ({t0}, {t1})"
        )));
    }
    let steps = ((t1 - t0) / dt).ceil() as usize;
    let h = if steps == 0 {
        0.0
    } else {
        (t1 - t0) / steps as f64
    };
    let mut out = Vec::with_capacity(steps + 1);
    out.push((t0, y0));
    let mut y = y0;
    let mut max_err = 0.0f64;
    for s in 1..=steps {
        let full = rk4(&f, &y, h);
        let half = rk4(&f, &rk4(&f, &y, h / 2.0), h / 2.0);
        let err = full
            .iter()
            .zip(&half)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        max_err = max_err.max(err);
        y = half;
        let t = t0 + s as f64 * h;
        if !(y[w_slot].norm() < 1.0 - DISK_EXIT_EPS) {
            log::warn!("integration left the disk at t = {t}");
            return Ok((out, max_err, FlowStatus::DiskExit { t }));
        }
        out.push((t, y));
    }
    Ok((out, max_err, FlowStatus::Completed))
}

fn excursion<const D: usize>(pts: &[(f64, [C; D])], w_slot: usize) -> f64 {
    pts.iter()
        .map(|(_, y)| y[w_slot].norm())
        .fold(0.0, f64::max)
}

/// Integrates the Riccati flow from `x0`. A disk exit ends the trajectory
/// early with status [`FlowStatus::DiskExit`].
pub fn integrate_flow(
    x0: &JacobiCSPoint,
    h: &HamiltonianCoeffs,
    t_span: (f64, f64),
    dt: f64,
) -> Result<Trajectory> {
    let f = |y: &[C; 2]| -> [C; 2] {
        let (z, w) = (y[0], y[1]);
        let iz = h.eps_a + h.eps_a_dag * w + h.eps_0 * 0.5 * z + h.eps_plus * z * w;
        let iw = h.eps_minus + h.eps_0 * w + h.eps_plus * w * w;
        [-I * iz, -I * iw]
    };
    let (pts, max_step_error, status) = integrate(f, [x0.z, x0.w()], t_span, dt, 1)?;
    if h.hermitian && matches!(status, FlowStatus::DiskExit { .. }) {
        log::error!("hermitian flow reached the disk boundary; step {dt} is too coarse");
    }
    Ok(Trajectory {
        max_disk_excursion: excursion(&pts, 1),
        samples: pts
            .iter()
            .map(|&(t, y)| Sample {
                t,
                z: y[0],
                w: y[1],
            })
            .collect(),
        velocities: None,
        dt,
        method: METHOD.into(),
        max_step_error,
        status,
    })
}

/// Second derivatives `(z'', w'')` of a geodesic through `x` with velocity
/// `(dz, dw)`.
pub fn geodesic_rhs(x: &JacobiCSPoint, velocity: (C, C), k: &Weight) -> (C, C) {
    geodesic_accel(x.z, x.w(), x.w.defect(), velocity.0, velocity.1, k.k())
}

fn geodesic_accel(z: C, w: C, p: f64, dz: C, dw: C, k: f64) -> (C, C) {
    let a0b = ((z + z.conj() * w) / p).conj();
    let wb = w.conj();
    let two_k = 2.0 * k;
    let zz =
        a0b * dz * dz - (wb * (two_k / p) - a0b * a0b) * dz * dw * 2.0 + a0b * a0b * a0b * dw * dw;
    let ww = dz * dz + a0b * dz * dw * 2.0 + (wb * (2.0 * two_k / p) + a0b * a0b) * dw * dw;
    (zz / two_k, -ww / two_k)
}

pub fn integrate_geodesic(
    x0: &JacobiCSPoint,
    v0: (C, C),
    k: &Weight,
    t_span: (f64, f64),
    dt: f64,
) -> Result<Trajectory> {
    let kk = k.k();
    let f = |y: &[C; 4]| -> [C; 4] {
        let p = 1.0 - y[1].norm_sqr();
        let (az, aw) = geodesic_accel(y[0], y[1], p, y[2], y[3], kk);
        [y[2], y[3], az, aw]
    };
    let (pts, max_step_error, status) = integrate(f, [x0.z, x0.w(), v0.0, v0.1], t_span, dt, 1)?;
    Ok(Trajectory {
        max_disk_excursion: excursion(&pts, 1),
        samples: pts
            .iter()
            .map(|&(t, y)| Sample {
                t,
                z: y[0],
                w: y[1],
            })
            .collect(),
        velocities: Some(
            pts.iter()
                .map(|(_, y)| {
                    [
                        crate::cjson::JsonComplex(y[2]),
                        crate::cjson::JsonComplex(y[3]),
                    ]
                })
                .collect(),
        ),
        dt,
        method: METHOD.into(),
        max_step_error,
        status,
    })
}

/// `g(v, v)` at every sample of a geodesic.
pub fn speeds(traj: &Trajectory, k: &Weight) -> Result<Vec<f64>> {
    let vel = traj
        .velocities
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("trajectory carries no velocities".into()))?;
    traj.samples
        .iter()
        .zip(vel)
        .map(|(s, v)| {
            let x = JacobiCSPoint::new(s.z, s.w)?;
            Ok(metric(&x, k).norm_sqr(v[0].0, v[1].0))
        })
        .collect()
}
