//! Command implementations. Each builds a serializable record and writes it
//! to the configured output.

use std::path::Path;

use jacobi_cs::algebra::{cocycle, compose, full_multiplier, inverse, jacobi_act, su11_exp};
use jacobi_cs::cjson::JsonComplex;
use jacobi_cs::coords::{
    cayley_to_disk, cayley_to_half_plane, iwasawa, sl2_to_su11, EZCoords, Iwasawa, SL2Matrix,
    UpperHalfPoint,
};
use jacobi_cs::diffops::monic_basis_poly;
use jacobi_cs::dynamics::{
    integrate_flow, integrate_geodesic, speeds, FlowStatus, HamiltonianCoeffs, RunManifest,
    Trajectory,
};
use jacobi_cs::kernel::{
    basis_function, basis_function_hermite, factor_coefficient, kernel_checked, kernel_truncated,
    BasisIndex,
};
use jacobi_cs::numerics::factorial;
use jacobi_cs::verify::{run_suites, Suite, VerifyConfig};
use jacobi_cs::{JacobiCSPoint, JacobiElement, SU11Matrix, WeightMode};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::Failure;

type C = Complex64;

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

fn write_to(path: Option<&Path>, body: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, body)
            .map_err(|e| Failure::Domain(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(cfg: &RunConfig, value: &T) -> Result<(), Failure> {
    if cfg.format == Format::Csv {
        return Err(Failure::Parse(
            "csv output is available for verify, evolve and geodesic only".into(),
        ));
    }
    write_to(cfg.out.as_deref(), &json(value))
}

fn mode_name(m: WeightMode) -> &'static str {
    match m {
        WeightMode::Strict => "strict",
        WeightMode::Relaxed => "relaxed",
    }
}

#[derive(Serialize)]
struct Cutoffs {
    n: usize,
    m: usize,
}

#[derive(Serialize)]
struct KernelRecord {
    k: String,
    mode: &'static str,
    x: JacobiCSPoint,
    y: JacobiCSPoint,
    closed: JsonComplex,
    truncated: JsonComplex,
    abs_err: f64,
    rel_err: f64,
    cutoffs: Cutoffs,
}

pub fn kernel(cfg: &RunConfig, x: (C, C), y: (C, C)) -> Result<(), Failure> {
    let k = cfg.weight()?;
    let x = JacobiCSPoint::new(x.0, x.1)?;
    let y = JacobiCSPoint::new(y.0, y.1)?;
    let closed = kernel_checked(&x, &y, &k)?;
    let truncated = kernel_truncated(&x, &y, &k, cfg.cutoff, cfg.cutoff_m)?;
    let abs_err = (closed - truncated).norm();
    emit_json(
        cfg,
        &KernelRecord {
            k: k.to_string(),
            mode: mode_name(k.mode()),
            x,
            y,
            closed: JsonComplex(closed),
            truncated: JsonComplex(truncated),
            abs_err,
            rel_err: abs_err / closed.norm(),
            cutoffs: Cutoffs {
                n: cfg.cutoff,
                m: cfg.cutoff_m,
            },
        },
    )
}

#[derive(Serialize)]
struct BasisRecord {
    k: String,
    n: usize,
    m: usize,
    /// `w^m P_n(z, w)`; `f_{n,m}` is this times `normalization`.
    monic_polynomial: String,
    normalization: f64,
    point: JacobiCSPoint,
    value: JsonComplex,
    /// Same value through the Hermite polynomial form.
    value_hermite: JsonComplex,
}

pub fn basis(cfg: &RunConfig, n: usize, m: usize, x: (C, C)) -> Result<(), Failure> {
    let k = cfg.weight()?;
    let x = JacobiCSPoint::new(x.0, x.1)?;
    let idx = BasisIndex::new(n, m);
    let value = basis_function(idx, &x, &k)?;
    let monic = monic_basis_poly(n, m);
    emit_json(
        cfg,
        &BasisRecord {
            k: k.to_string(),
            n,
            m,
            monic_polynomial: monic.to_string(),
            normalization: factor_coefficient(m, 2.0 * k.k_prime()) / factorial(n).sqrt(),
            point: x,
            value: JsonComplex(value),
            value_hermite: JsonComplex(basis_function_hermite(idx, &x, &k)?),
        },
    )
}

#[derive(Serialize)]
struct VerifyRecord {
    mode: &'static str,
    suites: Vec<Suite>,
    tol: f64,
    cutoff: usize,
    samples: u64,
    #[serde(flatten)]
    report: jacobi_cs::verify::VerifyReport,
}

pub fn verify(cfg: &RunConfig, suite: &str) -> Result<(), Failure> {
    let suites = Suite::parse_list(suite)?;
    let k = cfg.weight()?;
    let mode = mode_name(k.mode());
    let vc = VerifyConfig {
        k,
        cutoff: cfg.cutoff,
        tol: cfg.tol,
        seed: cfg.seed,
        samples: cfg.samples,
    };
    let report = run_suites(&suites, &vc);
    for c in &report.checks {
        eprintln!(
            "{} {}: {} (residual {:.3e}, tolerance {:.1e})",
            if c.passed { "PASS" } else { "FAIL" },
            c.suite,
            c.check,
            c.residual,
            c.tolerance
        );
    }
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {}", c.suite, c.check))
        .collect();
    let body = match cfg.format {
        Format::Json => json(&VerifyRecord {
            mode,
            suites,
            tol: cfg.tol,
            cutoff: cfg.cutoff,
            samples: cfg.samples,
            report,
        }),
        Format::Csv => {
            let mut s = String::from("suite,check,residual,tolerance,passed\n");
            for c in &report.checks {
                s.push_str(&format!(
                    "{},\"{}\",{:e},{:e},{}\n",
                    c.suite, c.check, c.residual, c.tolerance, c.passed
                ));
            }
            s
        }
    };
    write_to(cfg.out.as_deref(), &body)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invariant(failed.join("; ")))
    }
}

#[derive(Serialize)]
struct TrajectorySummary {
    status: FlowStatus,
    steps: usize,
    max_disk_excursion: f64,
    max_step_error: f64,
    final_state: jacobi_cs::dynamics::Sample,
    /// Largest relative change of `g(v, v)`, geodesics only.
    #[serde(skip_serializing_if = "Option::is_none")]
    speed_drift: Option<f64>,
}

#[derive(Serialize)]
struct TrajectoryRecord<'a> {
    k: String,
    manifest: &'a RunManifest,
    summary: &'a TrajectorySummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    trajectory: Option<&'a Trajectory>,
}

fn summarize(tr: &Trajectory, speed_drift: Option<f64>) -> TrajectorySummary {
    TrajectorySummary {
        status: tr.status,
        steps: tr.samples.len() - 1,
        max_disk_excursion: tr.max_disk_excursion,
        max_step_error: tr.max_step_error,
        final_state: *tr.last(),
        speed_drift,
    }
}

/// JSON: one document holding manifest, summary and samples. CSV: the
/// samples go to the output and the manifest with the summary to
/// `<out>.manifest.json`, or to standard error without `--out`.
fn write_trajectory(
    cfg: &RunConfig,
    k: String,
    manifest: &RunManifest,
    tr: &Trajectory,
    drift: Option<f64>,
) -> Result<(), Failure> {
    let summary = summarize(tr, drift);
    match cfg.format {
        Format::Json => write_to(
            cfg.out.as_deref(),
            &json(&TrajectoryRecord {
                k,
                manifest,
                summary: &summary,
                trajectory: Some(tr),
            }),
        )?,
        Format::Csv => {
            write_to(cfg.out.as_deref(), &tr.to_csv())?;
            let meta = json(&TrajectoryRecord {
                k,
                manifest,
                summary: &summary,
                trajectory: None,
            });
            match &cfg.out {
                Some(p) => {
                    let mut name = p.as_os_str().to_owned();
                    name.push(".manifest.json");
                    write_to(Some(Path::new(&name)), &meta)?;
                }
                None => eprint!("{meta}"),
            }
        }
    }
    match tr.status {
        FlowStatus::Completed => Ok(()),
        FlowStatus::DiskExit { t } => Err(Failure::DiskExit(t)),
    }
}

pub fn evolve(
    cfg: &RunConfig,
    x0: (C, C),
    h: HamiltonianCoeffs,
    span: (f64, f64),
    dt: f64,
) -> Result<(), Failure> {
    let x0 = JacobiCSPoint::new(x0.0, x0.1)?;
    let tr = integrate_flow(&x0, &h, span, dt)?;
    let manifest = RunManifest {
        hamiltonian: Some(h),
        x0,
        dt,
        method: tr.method.clone(),
        seed: None,
    };
    // the flow does not depend on k; it is echoed only when it parses
    let k = cfg
        .weight()
        .map(|k| k.to_string())
        .unwrap_or_else(|_| cfg.k.clone());
    write_trajectory(cfg, k, &manifest, &tr, None)
}

pub fn geodesic(cfg: &RunConfig, x0: (C, C), v0: (C, C), t1: f64, dt: f64) -> Result<(), Failure> {
    let k = cfg.weight()?;
    let x0 = JacobiCSPoint::new(x0.0, x0.1)?;
    let tr = integrate_geodesic(&x0, v0, &k, (0.0, t1), dt)?;
    let sp = speeds(&tr, &k)?;
    let drift =
        sp.iter().map(|s| (s - sp[0]).abs()).fold(0.0, f64::max) / sp[0].max(f64::MIN_POSITIVE);
    let manifest = RunManifest {
        hamiltonian: None,
        x0,
        dt,
        method: tr.method.clone(),
        seed: None,
    };
    write_trajectory(cfg, k.to_string(), &manifest, &tr, Some(drift))
}

#[derive(Serialize)]
struct IwasawaRecord {
    matrix: SL2Matrix,
    factors: Iwasawa,
    reassembled: SL2Matrix,
    residual: f64,
    su11: SU11Matrix,
}

#[derive(Serialize)]
struct TransformRecord {
    direction: &'static str,
    half_plane: UpperHalfPoint,
    disk: JacobiCSPoint,
    ez: EZCoords,
    roundtrip_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    iwasawa: Option<IwasawaRecord>,
}

pub fn transform(
    cfg: &RunConfig,
    vu: (Option<C>, Option<C>),
    zw: (Option<C>, Option<C>),
    sl2: Option<&str>,
) -> Result<(), Failure> {
    let zero = C::new(0.0, 0.0);
    let (direction, half_plane, disk, residual) = if zw.0.is_some() || zw.1.is_some() {
        let x = JacobiCSPoint::new(zw.0.unwrap_or(zero), zw.1.unwrap_or(zero))?;
        let p = cayley_to_half_plane(&x)?;
        let back = cayley_to_disk(&p)?;
        let r = (back.z - x.z).norm().max((back.w() - x.w()).norm());
        ("disk_to_half_plane", p, x, r)
    } else {
        let p = UpperHalfPoint::new(vu.0.unwrap_or(C::new(0.0, 1.0)), vu.1.unwrap_or(zero))?;
        let x = cayley_to_disk(&p)?;
        let back = cayley_to_half_plane(&x)?;
        let r = ((back.v - p.v).norm() / (1.0 + p.v.norm()))
            .max((back.u - p.u).norm() / (1.0 + p.u.norm()));
        ("half_plane_to_disk", p, x, r)
    };
    let iwasawa = match sl2 {
        None => None,
        Some(s) => {
            let v = crate::parse::reals(s).map_err(Failure::Parse)?;
            let [a, b, c, d] = v[..] else {
                return Err(Failure::Parse(format!(
                    "--sl2 needs four entries, got {}",
                    v.len()
                )));
            };
            let m = SL2Matrix::new(a, b, c, d)?;
            let f = iwasawa(&m);
            let re = f.reassemble();
            Some(IwasawaRecord {
                matrix: m,
                factors: f,
                reassembled: re,
                residual: re.max_abs_diff(&m),
                su11: sl2_to_su11(&m)?,
            })
        }
    };
    emit_json(
        cfg,
        &TransformRecord {
            direction,
            half_plane,
            disk,
            ez: half_plane.ez(),
            roundtrip_residual: residual,
            iwasawa,
        },
    )
}

#[derive(Serialize)]
struct ActionRecord {
    point: JacobiCSPoint,
    image: JacobiCSPoint,
    /// Multiplier without the central phase.
    cocycle: JsonComplex,
    multiplier: JsonComplex,
}

#[derive(Serialize)]
struct GroupRecord {
    k: String,
    h: JacobiElement,
    inverse: JacobiElement,
    #[serde(skip_serializing_if = "Option::is_none")]
    with: Option<JacobiElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    product: Option<JacobiElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    action: Option<ActionRecord>,
}

fn element_from_str(s: &str) -> Result<JacobiElement, Failure> {
    let parts: Vec<&str> = s.split(';').map(str::trim).collect();
    let [zeta, theta, alpha, phase] = parts[..] else {
        return Err(Failure::Parse(format!(
            "element needs `zeta;theta;alpha;phase`, got `{s}`"
        )));
    };
    let real = |v: &str| {
        v.parse::<f64>()
            .map_err(|_| Failure::Parse(format!("cannot parse `{v}` as a number")))
    };
    let g = su11_exp(
        crate::parse::complex(zeta).map_err(Failure::Parse)?,
        real(theta)?,
    );
    Ok(JacobiElement::new(
        g,
        crate::parse::complex(alpha).map_err(Failure::Parse)?,
        real(phase)?,
    ))
}

pub fn group(
    cfg: &RunConfig,
    h: (C, f64, C, f64),
    with: Option<&str>,
    zw: (Option<C>, Option<C>),
) -> Result<(), Failure> {
    let k = cfg.weight()?;
    let h = JacobiElement::new(su11_exp(h.0, h.1), h.2, h.3);
    let with = with.map(element_from_str).transpose()?;
    let action = if zw.0.is_some() || zw.1.is_some() {
        let zero = C::new(0.0, 0.0);
        let x = JacobiCSPoint::new(zw.0.unwrap_or(zero), zw.1.unwrap_or(zero))?;
        Some(ActionRecord {
            point: x,
            image: jacobi_act(&h, &x)?,
            cocycle: JsonComplex(cocycle(&h, &x, &k)),
            multiplier: JsonComplex(full_multiplier(&h, &x, &k)),
        })
    } else {
        None
    };
    emit_json(
        cfg,
        &GroupRecord {
            k: k.to_string(),
            h,
            inverse: inverse(&h),
            product: with.as_ref().map(|w| compose(&h, w)),
            with,
            action,
        },
    )
}
