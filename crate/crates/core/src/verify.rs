//! Invariant suites behind the `verify` command. Every check yields a
//! residual and the tolerance it is held to; suites run in parallel and
//! the report keeps a fixed order.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    cocycle, cocycle_closed_form, cocycle_completed_square, compose, full_multiplier, inverse,
    jacobi_act, su11_exp, w_of_z, z_of_w, JacobiCSPoint, JacobiElement,
};
use crate::coords::{
    berndt_form_at, cayley_to_disk, cayley_to_half_plane, ez_metric, ez_metric_from_form,
    fit_berndt_parameters, iwasawa, pullback_metric, sl2_to_su11, xj1_action, EZCoords,
    RealJacobiElement, SL2Matrix, UpperHalfPoint,
};
use crate::diffops::{
    adjoint_kernel_check, apply_to_basis, commutation_table, exact_commutation_table,
    jacobi_identity_failures, make_generators, symbolic_generators, Generator,
};
use crate::dynamics::{
    geodesic_rhs, integrate_flow, integrate_geodesic, riccati_rhs, riccati_rhs_assembled, speeds,
    FlowStatus, HamiltonianCoeffs,
};
use crate::fock::{
    appendix_closed_forms, appendix_moments, bogoliubov_conjugation, build_rep,
    commutator_table_check, cs_vector, jacobi_action_on_cs, k_plus_split_residual,
};
use crate::kernel::{
    basis_function, gram_eigenvalue_range, hermite_poly, inner_product_quadrature,
    kahler_potential, kernel_closed, kernel_truncated, mehler_closed, mehler_sum, metric, pn_poly,
    pn_via_hermite, volume_and_measure_density, BasisIndex,
};
use crate::numerics::{central_diff_c, hessian_fd};
use crate::transforms::{
    bogoliubov_matrix, compose_ds_pair, interchange_displacement, interchange_displacement_disk,
    interchange_displacement_disk_inverse, interchange_displacement_inverse,
};
use crate::{DiskPoint, Error, Result, Weight};

type C = Complex64;

const I: C = C::new(0.0, 1.0);

/// Below this weight a sizeable share of the measure sits at `1 - |w|^2`
/// smaller than double precision resolves, and the quadrature checks are
/// not run.
pub const MC_MIN_WEIGHT: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Algebra,
    Kernel,
    Diffops,
    Fock,
    Dynamics,
    Coords,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Algebra,
        Suite::Kernel,
        Suite::Diffops,
        Suite::Fock,
        Suite::Dynamics,
        Suite::Coords,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Kernel => "kernel",
            Suite::Diffops => "diffops",
            Suite::Fock => "fock",
            Suite::Dynamics => "dynamics",
            Suite::Coords => "coords",
        }
    }

    /// Parses a comma separated list; `all` selects every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                return Ok(Suite::ALL.to_vec());
            }
            let suite = part.parse()?;
            if !out.contains(&suite) {
                out.push(suite);
            }
        }
        if out.is_empty() {
            return Err(Error::Parse("no suite selected".into()));
        }
        out.sort();
        Ok(out)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub k: Weight,
    /// Boson and SU(1,1) cutoff for truncated sums.
    pub cutoff: usize,
    /// Tolerance of the truncation dependent kernel check.
    pub tol: f64,
    pub seed: u64,
    /// Monte Carlo sample count.
    pub samples: u64,
}

impl VerifyConfig {
    pub fn new(k: Weight) -> Self {
        VerifyConfig {
            k,
            cutoff: 60,
            tol: 1e-8,
            seed: 0,
            samples: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub k: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
}

struct Log {
    suite: Suite,
    out: Vec<CheckRecord>,
}

impl Log {
    fn new(suite: Suite) -> Self {
        Log {
            suite,
            out: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, residual: f64, tolerance: f64) {
        self.out.push(CheckRecord {
            suite: self.suite.name().into(),
            check: name.into(),
            residual,
            tolerance,
            passed: residual.is_finite() && residual <= tolerance,
        });
    }

    /// Records a failed check for an error raised while computing it.
    fn error(&mut self, name: &str, e: &Error) {
        log::error!("{}: {name}: {e}", self.suite.name());
        self.check(name, f64::INFINITY, 0.0);
    }

    fn run<F: FnOnce() -> Result<f64>>(&mut self, name: &str, tolerance: f64, f: F) {
        match f() {
            Ok(r) => self.check(name, r, tolerance),
            Err(e) => self.error(name, &e),
        }
    }
}

fn rng_for(seed: u64, suite: Suite) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(suite as u64 + 1);
    r
}

fn max_of<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |a, b| {
        if b.is_nan() || a.is_nan() {
            f64::NAN
        } else {
            a.max(b)
        }
    })
}

/// Uniform point in the disk of radius `r`.
pub fn random_complex<R: Rng>(rng: &mut R, r: f64) -> C {
    C::from_polar(r * rng.random::<f64>().sqrt(), rng.random_range(-PI..PI))
}

pub fn random_point<R: Rng>(rng: &mut R, z_max: f64, w_max: f64) -> JacobiCSPoint {
    let z = random_complex(rng, z_max);
    let w = random_complex(rng, w_max);
    JacobiCSPoint::new(z, w).expect("w_max < 1")
}

/// `(exp([[iθ, ζ], [conj ζ, -iθ]]), α, t)` with `|ζ| <= z_max`, `|α| <= a_max`.
pub fn random_element<R: Rng>(rng: &mut R, z_max: f64, a_max: f64) -> JacobiElement {
    let g = su11_exp(random_complex(rng, z_max), rng.random_range(-PI..PI));
    JacobiElement::new(g, random_complex(rng, a_max), rng.random_range(-PI..PI))
}

pub fn random_sl2<R: Rng>(rng: &mut R) -> SL2Matrix {
    let a = rng.random_range(0.3..2.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
    let b = rng.random_range(-2.0..2.0);
    let c = rng.random_range(-2.0..2.0);
    SL2Matrix::new(a, b, c, (1.0 + b * c) / a).expect("determinant one by construction")
}

pub fn random_half_plane_point<R: Rng>(rng: &mut R) -> UpperHalfPoint {
    let v = C::new(rng.random_range(-2.0..2.0), rng.random_range(0.1..3.0));
    let u = C::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    UpperHalfPoint::new(v, u).expect("Im v > 0")
}

/// Distance of a Monte Carlo estimate from `expected` in standard errors.
fn in_stderrs(q: &crate::kernel::QuadratureReport, expected: C) -> f64 {
    let d = (q.value() - expected).norm();
    if d == 0.0 {
        0.0
    } else {
        d / q.stderr
    }
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

/// Largest deviation of the analytic metric from the mixed Hessian of the
/// Kähler potential, taken by finite differences in the real coordinates.
pub fn metric_fd_residual(x: &JacobiCSPoint, k: &Weight) -> f64 {
    let f = |v: [f64; 4]| -> f64 {
        match JacobiCSPoint::new(C::new(v[0], v[1]), C::new(v[2], v[3])) {
            Ok(p) => kahler_potential(&p, k),
            Err(_) => f64::NAN,
        }
    };
    let h = hessian_fd(
        f,
        [x.z.re, x.z.im, x.w().re, x.w().im],
        2e-4 * x.w.defect().min(1.0),
    );
    let mixed = |a: usize, b: usize| -> C {
        let (xa, ya, xb, yb) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
        C::new(h[xa][xb] + h[ya][yb], h[xa][yb] - h[ya][xb]) * 0.25
    };
    let g = metric(x, k);
    let scale = g.f_ww.max(1.0);
    max_of([
        (mixed(0, 0).re - g.f_zz).abs(),
        (mixed(0, 1) - g.f_zw).norm(),
        (mixed(1, 1).re - g.f_ww).abs(),
    ]) / scale
}

/// Levi-Civita acceleration `-Γ^i_{jk} v^j v^k`, with `Γ^i_{jk} = g^{i l̄} ∂_j g_{k l̄}`
/// and the holomorphic derivatives of the metric taken by central differences.
pub fn christoffel_acceleration_fd(x: &JacobiCSPoint, v: [C; 2], k: &Weight) -> Result<[C; 2]> {
    let g_at = |z: C, w: C| -> [[C; 2]; 2] {
        match JacobiCSPoint::new(z, w) {
            Ok(p) => metric(&p, k).matrix(),
            Err(_) => [[C::new(f64::NAN, 0.0); 2]; 2],
        }
    };
    let h = 1e-4 * x.w.defect().min(1.0);
    let d = |slot: usize| -> [[C; 2]; 2] {
        let shift = |s: C| {
            if slot == 0 {
                (x.z + s, x.w())
            } else {
                (x.z, x.w() + s)
            }
        };
        let comp = |i: usize, j: usize| {
            let dx = central_diff_c(
                |t| {
                    let (z, w) = shift(C::new(t, 0.0));
                    g_at(z, w)[i][j]
                },
                0.0,
                h,
            );
            let dy = central_diff_c(
                |t| {
                    let (z, w) = shift(C::new(0.0, t));
                    g_at(z, w)[i][j]
                },
                0.0,
                h,
            );
            (dx - I * dy) * 0.5
        };
        [[comp(0, 0), comp(0, 1)], [comp(1, 0), comp(1, 1)]]
    };
    let dg = [d(0), d(1)];
    let g = g_at(x.z, x.w());
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    // inverse of g[i][l̄], indexed [l̄][i]
    let ginv = [
        [g[1][1] / det, -g[0][1] / det],
        [-g[1][0] / det, g[0][0] / det],
    ];
    let acc: [C; 2] = std::array::from_fn(|i| {
        let mut s = C::new(0.0, 0.0);
        for j in 0..2 {
            for kk in 0..2 {
                for l in 0..2 {
                    s += ginv[l][i] * dg[j][kk][l] * v[j] * v[kk];
                }
            }
        }
        -s
    });
    if acc.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::OutsideDisk(x.w.norm()));
    }
    Ok(acc)
}

fn algebra_suite(cfg: &VerifyConfig) -> Vec<CheckRecord> {
    let mut log = Log::new(Suite::Algebra);
    let mut rng = rng_for(cfg.seed, Suite::Algebra);
    let k = &cfg.k;
    let triples: Vec<_> = (0..50)
        .map(|_| {
            (
                random_element(&mut rng, 1.0, 1.5),
                random_element(&mut rng, 1.0, 1.5),
                random_element(&mut rng, 1.0, 1.5),
                random_point(&mut rng, 1.5, 0.7),
            )
        })
        .collect();
    log.check(
        "group law is associative",
        max_of(triples.iter().map(|(a, b, c, _)| {
            let l = compose(&compose(a, b), c);
            l.max_abs_diff(&compose(a, &compose(b, c))) / (1.0 + l.alpha.norm() + l.t.abs())
        })),
        1e-12,
    );
    log.check(
        "inverse element",
        max_of(
            triples
                .iter()
                .map(|(a, ..)| compose(a, &inverse(a)).max_abs_diff(&JacobiElement::identity())),
        ),
        1e-12,
    );
    log.run("action is a left action", 1e-10, || {
        let mut r: f64 = 0.0;
        for (a, b, _, x) in &triples {
            let l = jacobi_act(a, &jacobi_act(b, x)?)?;
            let rr = jacobi_act(&compose(a, b), x)?;
            r = r
                .max((l.z - rr.z).norm() / (1.0 + l.z.norm()))
                .max((l.w() - rr.w()).norm());
        }
        Ok(r)
    });
    log.check(
        "multiplier: derivation chain vs closed form",
        max_of(triples.iter().flat_map(|(a, _, _, x)| {
            let l = cocycle(a, x, k);
            [
                rel(l, cocycle_closed_form(a, x, k)),
                rel(l, cocycle_completed_square(a, x, k)),
            ]
        })),
        1e-10,
    );
    // For fractional 2k the principal power makes the multiplier a cocycle
    // only up to exp(2 pi i 2k n); the check then allows the nearest such n.
    let branch = |l: C, rr: C| -> f64 {
        if k.two_k_integer().is_some() {
            return rel(l, rr);
        }
        (-3..=3)
            .map(|n| {
                rel(
                    l,
                    rr * C::from_polar(1.0, 2.0 * PI * 2.0 * k.k() * n as f64),
                )
            })
            .fold(f64::INFINITY, f64::min)
    };
    log.run("multiplier satisfies the cocycle identity", 1e-9, || {
        let mut r: f64 = 0.0;
        for (a, b, _, x) in &triples {
            let l = full_multiplier(&compose(a, b), x, k);
            let rr = full_multiplier(a, &jacobi_act(b, x)?, k) * full_multiplier(b, x, k);
            r = r.max(branch(l, rr));
        }
        Ok(r)
    });
    log.run(
        "kernel diagonal transforms with |multiplier|^-2",
        1e-8,
        || {
            let mut r: f64 = 0.0;
            for (a, _, _, x) in &triples {
                let hx = jacobi_act(a, x)?;
                let lhs = kernel_closed(&hx, &hx, k);
                let rhs = kernel_closed(x, x, k) / cocycle(a, x, k).norm_sqr();
                r = r.max(rel(lhs, rhs));
            }
            Ok(r)
        },
    );
    log.check(
        "rapidity map roundtrip",
        max_of((0..50).map(|_| {
            let z = random_complex(&mut rng, 20.0);
            (z_of_w(&w_of_z(z)) - z).norm() / z.norm().max(1.0)
        })),
        1e-12,
    );
    let pairs: Vec<(C, C, f64)> = (0..50)
        .map(|_| {
            (
                random_complex(&mut rng, 2.0),
                random_complex(&mut rng, 1.5),
                rng.random_range(-2.0..2.0),
            )
        })
        .collect();
    log.check(
        "Bogoliubov matrices preserve the canonical commutator",
        max_of(
            pairs
                .iter()
                .map(|(_, z, _)| bogoliubov_matrix(*z).invariant_residual()),
        ),
        1e-12,
    );
    log.check(
        "interchange formulas: disk form, rapidity form and inverses agree",
        max_of(pairs.iter().flat_map(|&(al, z, th)| {
            let w = DiskPoint::from_rapidity(z);
            let b0 = interchange_displacement(al, z, 0.0);
            let bd = interchange_displacement_disk(al, &w);
            let b1 = interchange_displacement(al, z, th);
            let scale = al.norm().max(1.0);
            [
                (b0 - bd).norm() / b0.norm().max(1.0),
                (interchange_displacement_disk_inverse(bd, &w) - al).norm() / scale,
                (interchange_displacement_inverse(b1, z, th) - al).norm() / scale,
                (b1 - su11_exp(z, th).inverse_act_alpha(al)).norm() / b1.norm().max(1.0),
            ]
        })),
        1e-12,
    );
    log.run(
        "displacement-squeeze products compose like the group",
        1e-12,
        || {
            let mut r: f64 = 0.0;
            for &(al, z, _) in &pairs {
                let w1 = DiskPoint::from_rapidity(z * 0.5);
                let out = compose_ds_pair(al, z * 0.3, al * 0.5, &w1, k)?;
                let (w3, _) = crate::algebra::su11_product_with_phase(z * 0.5, z * 0.3);
                r = r.max((out.w.value() - w3.value()).norm());
            }
            Ok(r)
        },
    );
    log.out
}

fn kernel_suite(cfg: &VerifyConfig) -> Vec<CheckRecord> {
    let mut log = Log::new(Suite::Kernel);
    let mut rng = rng_for(cfg.seed, Suite::Kernel);
    let k = &cfg.k;
    let pairs: Vec<_> = (0..50)
        .map(|_| {
            (
                random_point(&mut rng, 1.0, 0.5),
                random_point(&mut rng, 1.0, 0.5),
            )
        })
        .collect();
    log.run(
        "truncated double sum matches the closed kernel",
        cfg.tol,
        || {
            let mut r: f64 = 0.0;
            for (x, y) in &pairs {
                r = r.max(rel(
                    kernel_closed(x, y, k),
                    kernel_truncated(x, y, k, cfg.cutoff, cfg.cutoff)?,
                ));
            }
            Ok(r)
        },
    );
    log.check(
        "Hermite polynomials through the generalized P_n",
        max_of(pairs.iter().flat_map(|(x, _)| {
            (0..12).map(move |n| rel(pn_poly(n, x.z, x.w()), pn_via_hermite(n, x.z, x.w())))
        })),
        1e-12,
    );
    log.check(
        "Mehler summation formula",
        max_of(pairs.iter().map(|(x, y)| {
            let s = x.w() * 0.5;
            rel(mehler_sum(x.z, y.z, s, 200), mehler_closed(x.z, y.z, s))
        })),
        1e-12,
    );
    log.check(
        "H_3(1) = -4",
        (hermite_poly(3, C::new(1.0, 0.0)) + 4.0).norm(),
        1e-14,
    );
    log.check(
        "Gram matrices are positive semidefinite",
        max_of((0..100).map(|_| {
            let pts: Vec<_> = (0..6).map(|_| random_point(&mut rng, 1.5, 0.8)).collect();
            let (lo, hi) = gram_eigenvalue_range(&pts, k);
            (-lo / hi).max(0.0)
        })),
        1e-10,
    );
    let pts: Vec<_> = (0..30).map(|_| random_point(&mut rng, 1.5, 0.7)).collect();
    log.check(
        "metric is the mixed Hessian of the Kähler potential",
        max_of(pts.iter().map(|x| metric_fd_residual(x, k))),
        1e-6,
    );
    log.check(
        "det(metric) (1-|w|^2)^3 = 2k",
        max_of(
            pts.iter()
                .map(|x| (metric(x, k).det() * x.w.defect().powi(3) - 2.0 * k.k()).abs()),
        ),
        1e-12,
    );
    log.check(
        "measure weight is 1/K on the diagonal",
        max_of(pts.iter().map(|x| {
            let m = volume_and_measure_density(x, k);
            (m.weight * kernel_closed(x, x, k).re - 1.0).abs()
        })),
        1e-12,
    );
    for gen in Generator::ALL {
        log.run(
            &format!("kernel adjoint identity for {}", gen.symbol()),
            1e-10,
            || {
                let mut r: f64 = 0.0;
                for (x, y) in pairs.iter().take(10) {
                    r = r.max(adjoint_kernel_check(gen, x, y, k)?.residual);
                }
                Ok(r)
            },
        );
    }
    if k.k() < MC_MIN_WEIGHT {
        log::warn!("kernel: Monte Carlo checks need k >= {MC_MIN_WEIGHT}, skipped at k = {k}");
    } else {
        let one = |_: &JacobiCSPoint| C::new(1.0, 0.0);
        log.run(
            "Monte Carlo normalization <1, 1> = 1 (in standard errors)",
            3.0,
            || {
                let q = inner_product_quadrature(one, one, k, cfg.samples, cfg.seed)?;
                Ok(in_stderrs(&q, C::new(1.0, 0.0)))
            },
        );
        let idx = [
            BasisIndex::new(0, 0),
            BasisIndex::new(1, 0),
            BasisIndex::new(0, 1),
        ];
        for (i, a) in idx.iter().enumerate() {
            for b in &idx[i..] {
                let name = format!(
                    "Monte Carlo <f_{}{}, f_{}{}> (in standard errors)",
                    a.n, a.m, b.n, b.m
                );
                let expect = if a == b { 1.0 } else { 0.0 };
                log.run(&name, 3.0, || {
                    let fa = |x: &JacobiCSPoint| {
                        basis_function(*a, x, k).unwrap_or(C::new(f64::NAN, 0.0))
                    };
                    let fb = |x: &JacobiCSPoint| {
                        basis_function(*b, x, k).unwrap_or(C::new(f64::NAN, 0.0))
                    };
                    let q = inner_product_quadrature(fa, fb, k, cfg.samples, cfg.seed)?;
                    Ok(in_stderrs(&q, C::new(expect, 0.0)))
                });
            }
        }
    }
    log.out
}

fn diffops_suite(cfg: &VerifyConfig) -> Vec<CheckRecord> {
    let mut log = Log::new(Suite::Diffops);
    let k = &cfg.k;
    let sym = symbolic_generators();
    for r in commutation_table(&sym) {
        log.check(
            &format!("{} for symbolic k", r.relation),
            r.residual + if r.holds { 0.0 } else { 1.0 },
            0.0,
        );
    }
    match exact_commutation_table(k) {
        Ok(t) => {
            let bad = t.iter().filter(|r| !r.holds).count();
            log.check(
                "commutation table in exact rationals at the given k",
                bad as f64,
                0.0,
            );
        }
        Err(e) => log.error("commutation table in exact rationals at the given k", &e),
    }
    log.check(
        "Jacobi identity on generators and identity",
        jacobi_identity_failures(&sym) as f64,
        0.0,
    );
    log.check(
        "generator coefficients have degree at most 2",
        max_of(
            Generator::ALL
                .iter()
                .map(|&g| sym.get(g).degree().unwrap_or(0).saturating_sub(2) as f64),
        ),
        0.0,
    );
    log.out
}

fn fock_suite(cfg: &VerifyConfig) -> Vec<CheckRecord> {
    let mut log = Log::new(Suite::Fock);
    let k = &cfg.k;
    let mut rng = rng_for(cfg.seed, Suite::Fock);
    log.run("commutation table on the interior block", 1e-12, || {
        let rep = build_rep(20, 16, k)?;
        Ok(max_of(
            commutator_table_check(&rep)
                .into_iter()
                .map(|r| r.max_residual),
        ))
    });
    log.run("K+ splits into boson and SU(1,1) parts", 1e-12, || {
        Ok(k_plus_split_residual(&build_rep(20, 16, k)?))
    });
    log.run(
        "appendix moments lambda_{n;m} and mu_{n;m}, n, m <= 8",
        1e-9,
        || {
            let rep = build_rep(16, 8, k)?;
            let mut r: f64 = 0.0;
            for n in 0..=8 {
                for m in 0..=8 {
                    let (l, mu) = appendix_moments(n, m, &rep)?;
                    let (l0, mu0) = appendix_closed_forms(n, m, k);
                    r = r
                        .max((l - l0).abs() / l0.max(1.0))
                        .max((mu - mu0).abs() / mu0.max(1.0));
                }
            }
            Ok(r)
        },
    );
    log.run(
        "generator matrices on the basis match the Fock matrices",
        1e-10,
        || {
            let g = make_generators::<C>(k)?;
            let (nc, mc) = (10, 8);
            let rep = build_rep(nc, mc, k)?;
            let mut r: f64 = 0.0;
            for gen in Generator::ALL {
                let mat = rep.generator(gen);
                for n in 0..=nc - 2 {
                    for m in 0..=mc - 2 {
                        let col = apply_to_basis(g.get(gen), BasisIndex::new(n, m), k, (nc, mc))?;
                        for n2 in 0..=nc {
                            for m2 in 0..=mc {
                                let ours = col
                                    .get(&BasisIndex::new(n2, m2))
                                    .copied()
                                    .unwrap_or_default();
                                r = r.max(
                                    (ours - mat.get(rep.index(n2, m2), rep.index(n, m))).norm(),
                                );
                            }
                        }
                    }
                }
            }
            Ok(r)
        },
    );
    log.run("mu_{1;1} = 2k", 1e-13, || {
        let (_, mu) = appendix_moments(1, 1, &build_rep(4, 4, k)?)?;
        Ok((mu - 2.0 * k.k()).abs())
    });
    log.run(
        "coherent vector overlaps reproduce the kernel",
        1e-6,
        || {
            let rep = build_rep(40, 40, k)?;
            let mut r: f64 = 0.0;
            for _ in 0..10 {
                let x = random_point(&mut rng, 1.0, 0.5);
                let y = random_point(&mut rng, 1.0, 0.5);
                let ov = cs_vector(&y, &rep).overlap(&cs_vector(&x, &rep));
                r = r.max(rel(ov, kernel_closed(&x, &y, k)));
            }
            Ok(r)
        },
    );
    log.run(
        "Bogoliubov conjugation of a by the squeeze operator",
        1e-8,
        || {
            let rep = build_rep(100, 2, k)?;
            let mut r: f64 = 0.0;
            for _ in 0..20 {
                let z = random_complex(&mut rng, 1.0);
                let fit = bogoliubov_conjugation(&rep, z, 0.0, 10);
                let b = bogoliubov_matrix(z);
                r = r
                    .max((fit.coeff_a - b.m).norm())
                    .max((fit.coeff_a_dag - b.n).norm());
            }
            Ok(r)
        },
    );
    log.run(
        "S(g) D(alpha) e_x = multiplier e_{h.x} on low levels",
        1e-8,
        || {
            let rep = build_rep(60, 40, k)?;
            let mut r: f64 = 0.0;
            for _ in 0..5 {
                let zg = random_complex(&mut rng, 0.3);
                let th = rng.random_range(-PI..PI);
                let al = random_complex(&mut rng, 0.4);
                let x = random_point(&mut rng, 0.4, 0.3);
                let h = JacobiElement::new(su11_exp(zg, th), al, 0.0);
                let lhs = jacobi_action_on_cs(&rep, zg, th, al, &x);
                let rhs = cs_vector(&jacobi_act(&h, &x)?, &rep).scaled(cocycle(&h, &x, k));
                r = r.max(lhs.max_abs_diff_on(&rhs, 12, 8) / rhs.norm());
            }
            Ok(r)
        },
    );
    log.out
}

fn dynamics_suite(cfg: &VerifyConfig) -> Vec<CheckRecord> {
    let mut log = Log::new(Suite::Dynamics);
    let k = &cfg.k;
    let mut rng = rng_for(cfg.seed, Suite::Dynamics);
    log.run(
        "rotation flow keeps |w| fixed over t in [0, 10]",
        1e-8,
        || {
            let h = HamiltonianCoeffs::hermitian(C::new(0.0, 0.0), 1.0, C::new(0.0, 0.0));
            let tr = integrate_flow(
                &JacobiCSPoint::new(C::new(0.3, 0.1), C::new(0.5, 0.0))?,
                &h,
                (0.0, 10.0),
                1e-3,
            )?;
            Ok(max_of(tr.samples.iter().map(|s| (s.w.norm() - 0.5).abs())))
        },
    );
    log.run(
        "squeezing flow from the origin is -i tanh(eps t)",
        1e-7,
        || {
            let eps = 0.7;
            let h = HamiltonianCoeffs::hermitian(C::new(0.0, 0.0), 0.0, C::new(eps, 0.0));
            let tr = integrate_flow(&JacobiCSPoint::origin(), &h, (0.0, 5.0), 1e-3)?;
            Ok(max_of(
                tr.samples
                    .iter()
                    .map(|s| (s.w + I * (eps * s.t).tanh()).norm()),
            ))
        },
    );
    log.run(
        "kernel diagonal is constant along the rotation flow",
        1e-8,
        || {
            let h = HamiltonianCoeffs::hermitian(C::new(0.0, 0.0), 0.8, C::new(0.0, 0.0));
            let x0 = JacobiCSPoint::new(C::new(0.4, -0.3), C::new(0.2, 0.5))?;
            let tr = integrate_flow(&x0, &h, (0.0, 10.0), 1e-3)?;
            let d0 = kernel_closed(&x0, &x0, k);
            let mut r: f64 = 0.0;
            for s in tr.samples.iter().step_by(100) {
                let x = JacobiCSPoint::new(s.z, s.w)?;
                r = r.max(rel(kernel_closed(&x, &x, k), d0));
            }
            Ok(r)
        },
    );
    log.run(
        "hermitian flows stay inside the disk (exits out of 100)",
        0.0,
        || {
            let runs: Vec<_> = (0..100)
                .map(|_| {
                    let h = HamiltonianCoeffs::hermitian(
                        random_complex(&mut rng, 1.0),
                        rng.random_range(-1.0..1.0),
                        random_complex(&mut rng, 1.0),
                    );
                    (h, random_point(&mut rng, 1.0, 0.9))
                })
                .collect();
            let exits: Result<Vec<bool>> = runs
                .par_iter()
                .map(|(h, x0)| {
                    let tr = integrate_flow(x0, h, (0.0, 5.0), 1e-3)?;
                    Ok(tr.status != FlowStatus::Completed || tr.max_disk_excursion >= 1.0)
                })
                .collect();
            Ok(exits?.into_iter().filter(|&e| e).count() as f64)
        },
    );
    log.run(
        "flow right-hand side equals the generator assembly",
        1e-15,
        || {
            let mut r: f64 = 0.0;
            for _ in 0..50 {
                let h = HamiltonianCoeffs::general(
                    random_complex(&mut rng, 1.0),
                    random_complex(&mut rng, 1.0),
                    random_complex(&mut rng, 1.0),
                    random_complex(&mut rng, 1.0),
                    random_complex(&mut rng, 1.0),
                );
                let x = random_point(&mut rng, 2.0, 0.95);
                let (dz, dw) = riccati_rhs(&x, &h);
                let (az, aw) = riccati_rhs_assembled(&x, &h, k)?;
                r = r
                    .max((dz - az).norm() / (1.0 + dz.norm()))
                    .max((dw - aw).norm() / (1.0 + dw.norm()));
            }
            Ok(r)
        },
    );
    log.run(
        "geodesic equations match finite-difference Christoffel symbols",
        1e-5,
        || {
            let mut r: f64 = 0.0;
            for _ in 0..30 {
                let x = random_point(&mut rng, 1.5, 0.8);
                let v = [random_complex(&mut rng, 1.0), random_complex(&mut rng, 1.0)];
                let (az, aw) = geodesic_rhs(&x, (v[0], v[1]), k);
                let o = christoffel_acceleration_fd(&x, v, k)?;
                let scale = 1.0 + o[0].norm() + o[1].norm();
                r = r
                    .max((az - o[0]).norm() / scale)
                    .max((aw - o[1]).norm() / scale);
            }
            Ok(r)
        },
    );
    log.run("geodesic speed drift over t in [0, 5]", 1e-6, || {
        let mut r: f64 = 0.0;
        for _ in 0..5 {
            let x0 = random_point(&mut rng, 0.7, 0.5);
            let v0 = (
                random_complex(&mut rng, 0.5),
                random_complex(&mut rng, 0.15),
            );
            let tr = integrate_geodesic(&x0, v0, k, (0.0, 5.0), 1e-3)?;
            let sp = speeds(&tr, k)?;
            r = r.max(max_of(sp.iter().map(|s| (s - sp[0]).abs())) / sp[0]);
        }
        Ok(r)
    });
    log.out
}

fn coords_suite(cfg: &VerifyConfig) -> Vec<CheckRecord> {
    let mut log = Log::new(Suite::Coords);
    let k = &cfg.k;
    let mut rng = rng_for(cfg.seed, Suite::Coords);
    let pts: Vec<_> = (0..50).map(|_| random_half_plane_point(&mut rng)).collect();
    log.run("Cayley map roundtrip", 1e-12, || {
        let mut r: f64 = 0.0;
        for p in &pts {
            let back = cayley_to_half_plane(&cayley_to_disk(p)?)?;
            r = r
                .max((back.v - p.v).norm() / (1.0 + p.v.norm()))
                .max((back.u - p.u).norm() / (1.0 + p.u.norm()));
        }
        Ok(r)
    });
    log.run(
        "pulled back Kähler form equals the Berndt form",
        1e-8,
        || {
            let mut r: f64 = 0.0;
            for p in &pts {
                let f = berndt_form_at(p, k);
                r = r.max(pullback_metric(p)(k)?.max_abs_diff(&f) / (1.0 + f.g_vv));
            }
            Ok(r)
        },
    );
    log.run("Eichler-Zagier metric", 1e-8, || {
        let mut r: f64 = 0.0;
        for p in pts.iter().take(20) {
            let ez: EZCoords = p.ez();
            let a = ez_metric_from_form(&ez, k)?;
            let b = ez_metric(&ez, k);
            for i in 0..4 {
                for j in 0..4 {
                    r = r.max((a[i][j] - b[i][j]).abs() / (1.0 + b[i][j].abs()));
                }
            }
        }
        Ok(r)
    });
    let mats: Vec<_> = (0..50).map(|_| random_sl2(&mut rng)).collect();
    log.check(
        "Iwasawa factors reassemble the matrix",
        max_of(mats.iter().map(|m| iwasawa(m).reassemble().max_abs_diff(m))),
        1e-12,
    );
    log.run(
        "SL2(R) to SU(1,1) conjugation is a homomorphism",
        1e-12,
        || {
            let mut r: f64 = 0.0;
            for w in mats.windows(2) {
                let lhs = sl2_to_su11(&w[0].compose(&w[1]))?;
                let rhs = sl2_to_su11(&w[0])?.compose(&sl2_to_su11(&w[1])?);
                r = r.max(lhs.max_abs_diff(&rhs));
            }
            Ok(r)
        },
    );
    log.run(
        "Cayley map intertwines the two group actions",
        1e-10,
        || {
            let mut r: f64 = 0.0;
            for (m, p) in mats.iter().zip(&pts) {
                let g = RealJacobiElement {
                    m: *m,
                    l1: rng.random_range(-2.0..2.0),
                    l2: rng.random_range(-2.0..2.0),
                    kappa: rng.random_range(-2.0..2.0),
                };
                let top = cayley_to_disk(&xj1_action(&g, p)?)?;
                let bottom = jacobi_act(&g.to_complex()?, &cayley_to_disk(p)?)?;
                r = r
                    .max((top.z - bottom.z).norm() / (1.0 + top.z.norm()))
                    .max((top.w() - bottom.w()).norm());
            }
            Ok(r)
        },
    );
    log.run(
        "fitted potential parameters lambda = 4k, mu = 1/pi",
        1e-5,
        || {
            let (l, m) = fit_berndt_parameters(&pts[0], k)?;
            Ok(((l - 4.0 * k.k()) / (4.0 * k.k()))
                .abs()
                .max((m * PI - 1.0).abs()))
        },
    );
    log.out
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<CheckRecord> {
    match suite {
        Suite::Algebra => algebra_suite(cfg),
        Suite::Kernel => kernel_suite(cfg),
        Suite::Diffops => diffops_suite(cfg),
        Suite::Fock => fock_suite(cfg),
        Suite::Dynamics => dynamics_suite(cfg),
        Suite::Coords => coords_suite(cfg),
    }
}

/// Runs the selected suites in parallel. The report lists them in the
/// order of [`Suite::ALL`] whatever the completion order.
pub fn run_suites(suites: &[Suite], cfg: &VerifyConfig) -> VerifyReport {
    let mut sel = suites.to_vec();
    sel.sort();
    sel.dedup();
    let results: Vec<Vec<CheckRecord>> = sel.par_iter().map(|&s| run_suite(s, cfg)).collect();
    let checks: Vec<CheckRecord> = results.into_iter().flatten().collect();
    VerifyReport {
        k: cfg.k.to_string(),
        seed: cfg.seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_parsing() {
        assert_eq!(Suite::parse_list("all").unwrap().len(), 6);
        assert_eq!(
            Suite::parse_list("fock, algebra").unwrap(),
            vec![Suite::Algebra, Suite::Fock]
        );
        assert!(Suite::parse_list("nope").is_err());
        assert!(Suite::parse_list("").is_err());
    }

    #[test]
    fn diffops_suite_is_exact() {
        let cfg = VerifyConfig::new(Weight::parse("3/2", crate::WeightMode::Strict).unwrap());
        let rep = run_suites(&[Suite::Diffops], &cfg);
        assert!(
            rep.passed,
            "{:#?}",
            rep.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>()
        );
        assert!(rep.checks.iter().all(|c| c.residual == 0.0));
    }

    #[test]
    fn metric_fd_oracle_is_accurate() {
        let k = Weight::strict(1.5).unwrap();
        let x = JacobiCSPoint::new(C::new(0.4, -0.9), C::new(0.3, 0.5)).unwrap();
        assert!(metric_fd_residual(&x, &k) < 1e-7);
    }

    #[test]
    fn report_is_deterministic() {
        let mut cfg = VerifyConfig::new(Weight::strict(1.0).unwrap());
        cfg.samples = 20_000;
        let a = serde_json::to_string(&run_suites(&[Suite::Algebra, Suite::Coords], &cfg)).unwrap();
        let b = serde_json::to_string(&run_suites(&[Suite::Coords, Suite::Algebra], &cfg)).unwrap();
        assert_eq!(a, b);
    }
}
