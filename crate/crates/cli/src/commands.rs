//! Subcommand implementations. Each builds a CSV table and/or a JSON document.

use std::io::Write;
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::ValueEnum;
use num_complex::Complex64;
use qcc_core::audit::{audit, audit_detectors, trailing_layout};
use qcc_core::dynamics_nonpert::{
    arg_estimator, delta_ab, evolve, norm_estimator, np_sweep, reduce_a, state_change_a,
};
use qcc_core::dynamics_pert::{norm_bound_check, qc_second_order, qft_signal_term, Detector};
use qcc_core::estimators::{estimator_split, estimator_sweep, signalling_estimator, time_grid};
use qcc_core::gme::{regime_report, GmeParameters};
use qcc_core::propagators::{hdiff_with_box, HdiffOptions};
use qcc_core::states::{operator_norm2, rows2, PairState};
use qcc_core::{standard_setup, Dimension, SetupGeometry, SetupKind, Smearing, SpatialProfile, Switching};
use serde_json::{json, Value};

use crate::config::{pick, FileConfig};
use crate::format::{csv, fmt_g, fmt_opt};
use crate::{
    load_config, AuditArgs, Cli, Command, DetectorArgs, EvolveArgs, Format, GeometryArgs, GmeArgs, HdiffArgs, Method,
    SweepArgs, SweepMode, UsageError, SCHEMA,
};

const ESTIMATE_HEADER: [&str; 6] = ["T", "C_total", "C_causal", "C_retro", "ratio_rc", "ratio_rtotal"];
const NONPERT_HEADER: [&str; 6] = ["T", "N_a", "N_a_causal", "theta_a", "theta_c", "theta_r"];

/// What a command produced.
struct Output {
    csv: Option<String>,
    json: Value,
    default_format: Format,
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn required<T>(v: Option<T>, flag: &str) -> anyhow::Result<T> {
    v.ok_or_else(|| usage(format!("missing required value --{flag}")))
}

fn document(command: &str, body: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "result": body,
        "meta": { "version": env!("CARGO_PKG_VERSION") },
    })
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = load_config(&cli)?;
    let dim_str = pick(cli.dim.clone(), cfg.dim.clone());
    let dim = match &dim_str {
        Some(s) => Some(Dimension::from_str(s).map_err(|e| usage(e.to_string()))?),
        None => None,
    };
    let format = match (cli.format, &cfg.format) {
        (Some(f), _) => Some(f),
        (None, Some(s)) => Some(Format::from_str(s, true).map_err(|_| usage(format!("unknown format `{s}`")))?),
        (None, None) => None,
    };
    let command = match cli.command {
        Some(c) => c,
        None => match cfg.command.as_deref() {
            Some("estimate") => Command::Estimate(GeometryArgs::default()),
            Some("sweep") => Command::Sweep(SweepArgs::default()),
            Some("evolve") => Command::Evolve(EvolveArgs::default()),
            Some("audit") => Command::Audit(AuditArgs::default()),
            Some("gme") => Command::Gme(GmeArgs::default()),
            Some("hdiff") => Command::Hdiff(HdiffArgs::default()),
            Some(other) => bail!(usage(format!("unknown command `{other}`"))),
            None => bail!(usage("no command given (estimate, sweep, evolve, audit, gme, hdiff)")),
        },
    };
    let output = match command {
        Command::Estimate(a) => run_estimate(&a, &cfg, dim)?,
        Command::Sweep(a) => run_sweep(&a, &cfg, dim)?,
        Command::Evolve(a) => run_evolve(&a, &cfg, dim)?,
        Command::Audit(a) => run_audit(&a, &cfg, dim)?,
        Command::Gme(a) => run_gme(&a, &cfg)?,
        Command::Hdiff(a) => run_hdiff(&a, &cfg, dim)?,
    };
    let text = match format.unwrap_or(output.default_format) {
        Format::Csv => output
            .csv
            .ok_or_else(|| usage("this command only produces JSON; use --format json"))?,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&output.json)?;
            s.push('\n');
            s
        }
    };
    match pick(cli.out, cfg.out) {
        Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn geometry(args: &GeometryArgs, cfg: &FileConfig, dim: Option<Dimension>) -> anyhow::Result<SetupGeometry> {
    let dim = dim.unwrap_or(Dimension::ThreePlusOne);
    let l = required(pick(args.l, cfg.L), "L")?;
    let t = required(pick(args.t, cfg.T), "T")?;
    let s = pick(args.s, cfg.S).unwrap_or(0.0);
    let on = pick(args.t_b_on, cfg.t_b_on).unwrap_or(0.0);
    Ok(SetupGeometry::new(dim, l, t, s, on)?)
}

fn estimate_row(r: &qcc_core::estimators::EstimatorReport) -> Vec<String> {
    vec![
        fmt_g(r.setup.duration),
        fmt_g(r.c_total),
        fmt_g(r.c_causal),
        fmt_g(r.c_retro),
        fmt_opt(r.ratio_rc),
        fmt_opt(r.ratio_rtotal),
    ]
}

fn run_estimate(args: &GeometryArgs, cfg: &FileConfig, dim: Option<Dimension>) -> anyhow::Result<Output> {
    let setup = geometry(args, cfg, dim)?;
    let report = estimator_split(&setup);
    Ok(Output {
        csv: Some(csv(&ESTIMATE_HEADER, &[estimate_row(&report)])?),
        json: document("estimate", serde_json::to_value(report)?),
        default_format: Format::Csv,
    })
}

fn run_sweep(args: &SweepArgs, cfg: &FileConfig, dim: Option<Dimension>) -> anyhow::Result<Output> {
    let mode = match (args.mode, &cfg.mode) {
        (Some(m), _) => m,
        (None, Some(s)) => SweepMode::from_str(s, true).map_err(|_| usage(format!("unknown sweep mode `{s}`")))?,
        (None, None) => SweepMode::Estimate,
    };
    let l = required(pick(args.l, cfg.L), "L")?;
    let s = pick(args.s, cfg.S).unwrap_or(0.0);
    let t_min = pick(args.t_min, cfg.T_min).unwrap_or(0.0);
    let t_max = required(pick(args.t_max, cfg.T_max), "T-max")?;
    let steps = pick(args.steps, cfg.steps).unwrap_or(101);
    let grid = time_grid(t_min, t_max, steps)?;
    match mode {
        SweepMode::Estimate => {
            let base = SetupGeometry::new(dim.unwrap_or(Dimension::ThreePlusOne), l, t_min, s, 0.0)?;
            let rows = estimator_sweep(&base, &grid)?;
            let table: Vec<_> = rows.iter().map(estimate_row).collect();
            Ok(Output {
                csv: Some(csv(&ESTIMATE_HEADER, &table)?),
                json: document("sweep", json!({ "mode": "estimate", "rows": rows })),
                default_format: Format::Csv,
            })
        }
        SweepMode::Nonpert => {
            if dim == Some(Dimension::OnePlusOne) {
                bail!(usage("nonpert sweeps are 3+1 only"));
            }
            if t_min <= 2.0 * l {
                bail!(usage(format!("nonpert sweeps need T-min > 2L = {}", 2.0 * l)));
            }
            let lambda = pick(args.lambda, cfg.lambda).unwrap_or(1.0);
            let base = SetupGeometry::new(Dimension::ThreePlusOne, l, t_min, 0.0, 0.0)?;
            let rows = np_sweep(&base, lambda, &grid)?;
            let table: Vec<_> = rows
                .iter()
                .map(|r| {
                    vec![
                        fmt_g(r.setup.duration),
                        fmt_g(r.n_a),
                        fmt_g(r.n_a_causal),
                        fmt_g(r.theta_a),
                        fmt_g(r.theta_a_causal),
                        fmt_g(r.theta_a_retro),
                    ]
                })
                .collect();
            Ok(Output {
                csv: Some(csv(&NONPERT_HEADER, &table)?),
                json: document("sweep", json!({ "mode": "nonpert", "rows": rows })),
                default_format: Format::Csv,
            })
        }
    }
}

struct DetectorParams {
    lambda: f64,
    gaps: (f64, f64),
    state_a: (f64, Complex64),
    state_b: (f64, Complex64),
}

fn detector_params(d: &DetectorArgs, cfg: &FileConfig) -> DetectorParams {
    let f = |flag: Option<f64>, file: Option<f64>, default: f64| pick(flag, file).unwrap_or(default);
    DetectorParams {
        lambda: f(d.lambda, cfg.lambda, 1.0),
        gaps: (f(d.omega_a, cfg.omega_a, 1.0), f(d.omega_b, cfg.omega_b, 1.0)),
        state_a: (
            f(d.alpha_a, cfg.alpha_a, 1.0),
            Complex64::new(f(d.beta_a_re, cfg.beta_a_re, 0.0), f(d.beta_a_im, cfg.beta_a_im, 0.0)),
        ),
        state_b: (
            f(d.alpha_b, cfg.alpha_b, 0.5),
            Complex64::new(f(d.beta_b_re, cfg.beta_b_re, 0.5), f(d.beta_b_im, cfg.beta_b_im, 0.0)),
        ),
    }
}

fn detectors(p: &DetectorParams, a: Smearing, b: Smearing) -> anyhow::Result<(Detector, Detector)> {
    Ok(audit_detectors(a, b, p.gaps, p.lambda, p.state_a, p.state_b)?)
}

fn run_evolve(args: &EvolveArgs, cfg: &FileConfig, dim: Option<Dimension>) -> anyhow::Result<Output> {
    let setup = geometry(&args.geometry, cfg, dim)?;
    let p = detector_params(&args.detectors, cfg);
    let (a, b) = detectors(&p, setup.smearing_a(), setup.smearing_b())?;
    let method = match (args.method, &cfg.method) {
        (Some(m), _) => m,
        (None, Some(s)) => Method::from_str(s, true).map_err(|_| usage(format!("unknown method `{s}`")))?,
        (None, None) => Method::Auto,
    };
    let gapless = a.gap == 0.0 && b.gap == 0.0;
    let exact = match method {
        Method::Auto => gapless,
        Method::Perturbative => false,
        Method::Exact if gapless => true,
        Method::Exact => bail!(usage("exact evolution needs --omega-a 0 --omega-b 0")),
    };
    let body = if exact {
        let rho0 = PairState::product(&a.initial_state()?, &b.initial_state()?);
        let delta = delta_ab(p.lambda, &a.smearing, &b.smearing, setup.dim)?;
        let out = evolve(delta, &rho0);
        json!({
            "method": "exact",
            "setup": setup,
            "Delta_ab": delta,
            "N_a": norm_estimator(delta),
            "theta_a": arg_estimator(delta),
            "initial": rho0,
            "final": out,
            "final_a": reduce_a(&out)?,
            "change_a_monopole": rows2(&state_change_a(delta, &rho0)),
        })
    } else {
        let qc = qc_second_order(&a, &b, setup.dim)?;
        let qft = qft_signal_term(&a, &b, setup.dim)?;
        let c_total = signalling_estimator(&a.smearing, &b.smearing, setup.dim)?;
        let lam2 = a.coupling * b.coupling;
        json!({
            "method": "perturbative",
            "setup": setup,
            "initial_a": qc.initial,
            "change_a": rows2(&qc.change),
            "final_a": rows2(&qc.final_matrix()),
            "change_norm": qc.change_norm(),
            "C_total": c_total,
            "norm_bound": 2.0 * lam2.abs() * c_total.abs(),
            "norm_bound_holds": norm_bound_check(lam2, c_total, &qc.change),
            "qft_change_a": rows2(&qft.change),
            "qft_change_norm": operator_norm2(&qft.change),
        })
    };
    Ok(Output {
        csv: None,
        json: document("evolve", body),
        default_format: Format::Json,
    })
}

fn run_audit(args: &AuditArgs, cfg: &FileConfig, dim: Option<Dimension>) -> anyhow::Result<Output> {
    let model = pick(args.model.clone(), cfg.model.clone()).unwrap_or_else(|| "qc".into());
    let model = model.parse()?;
    let geometry_name = pick(args.geometry.clone(), cfg.geometry.clone()).unwrap_or_else(|| match dim {
        Some(Dimension::OnePlusOne) => "fig4".into(),
        _ => "fig2".into(),
    });
    let l = required(pick(args.layout.l, cfg.L), "L")?;
    let t = required(pick(args.layout.t, cfg.T), "T")?;
    let s = pick(args.layout.s, cfg.S).unwrap_or(0.0);
    let grid_n = pick(args.grid_n, cfg.grid_n).unwrap_or(64);
    let (sa, sb, d) = match geometry_name.as_str() {
        "trailing" => {
            let d = dim.unwrap_or(Dimension::ThreePlusOne);
            let (sa, sb) = trailing_layout(d, l, t)?;
            (sa, sb, d)
        }
        name => {
            let kind = SetupKind::from_str(name)?;
            let setup = standard_setup(kind, l, t, s)?;
            if dim.is_some_and(|d| d != setup.dim) {
                bail!(usage(format!("geometry {name} lives in {}", setup.dim)));
            }
            (setup.smearing_a(), setup.smearing_b(), setup.dim)
        }
    };
    let p = detector_params(&args.detectors, cfg);
    let (a, b) = detectors(&p, sa, sb)?;
    let verdict = audit(model, &a, &b, d, grid_n)?;
    Ok(Output {
        csv: None,
        json: document("audit", json!({ "geometry": geometry_name, "dim": d, "verdict": verdict })),
        default_format: Format::Json,
    })
}

fn run_gme(args: &GmeArgs, cfg: &FileConfig) -> anyhow::Result<Output> {
    let params = GmeParameters {
        m1: required(pick(args.m1, cfg.m1), "m1")?,
        m2: required(pick(args.m2, cfg.m2), "m2")?,
        separation: required(pick(args.l, cfg.L), "L")?,
        duration: required(pick(args.t, cfg.T), "T")?,
        epsilon: pick(args.epsilon, cfg.epsilon).unwrap_or(1e-6),
        resolution: pick(args.resolution, cfg.resolution).unwrap_or(1e-3),
    };
    let r = regime_report(&params)?;
    let row = vec![
        fmt_g(r.lambda_sq),
        fmt_g(r.t_over_lc),
        fmt_g(r.required_resolution),
        fmt_g(r.retro_ratio),
        fmt_g(r.coupling_bound),
        u8::from(r.qc_indistinguishable).to_string(),
    ];
    let header = [
        "lambda_sq",
        "T_over_Lc",
        "required_resolution",
        "retro_ratio",
        "coupling_bound",
        "qc_indistinguishable",
    ];
    Ok(Output {
        csv: Some(csv(&header, &[row])?),
        json: document("gme", serde_json::to_value(r)?),
        default_format: Format::Json,
    })
}

fn run_hdiff(args: &HdiffArgs, cfg: &FileConfig, dim: Option<Dimension>) -> anyhow::Result<Output> {
    if dim == Some(Dimension::ThreePlusOne) {
        bail!(usage("hdiff is evaluated in 1+1 only"));
    }
    let timescales = if args.t.is_empty() {
        cfg.timescales.clone().unwrap_or_else(|| vec![1.0, 2.0, 4.0])
    } else {
        args.t.clone()
    };
    let width = pick(args.width, cfg.width).unwrap_or(1.0);
    let opts = HdiffOptions {
        half_width: pick(args.half_width, cfg.half_width).unwrap_or(HdiffOptions::default().half_width),
    };
    let spatial = match pick(args.spatial_width, cfg.spatial_width) {
        Some(w) => SpatialProfile::Gaussian {
            center: vec![0.0],
            width: w,
        },
        None => SpatialProfile::Pointlike { position: vec![0.0] },
    };
    let source = Smearing::new(spatial, Switching::gaussian(0.0, width)?)?;
    let values = timescales
        .iter()
        .map(|&t| hdiff_with_box(t, &source, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let ratios: Vec<Option<f64>> = std::iter::once(None)
        .chain(values.windows(2).map(|w| (w[0] != 0.0).then(|| w[1] / w[0])))
        .collect();
    let table: Vec<_> = timescales
        .iter()
        .zip(&values)
        .zip(&ratios)
        .map(|((t, v), r)| vec![fmt_g(*t), fmt_g(*v), fmt_opt(*r)])
        .collect();
    let rows: Vec<_> = timescales
        .iter()
        .zip(&values)
        .zip(&ratios)
        .map(|((t, v), r)| json!({ "T": t, "hdiff": v, "ratio_to_previous": r }))
        .collect();
    Ok(Output {
        csv: Some(csv(&["T", "hdiff", "ratio_to_previous"], &table)?),
        json: document(
            "hdiff",
            json!({ "switching_width": width, "half_width": opts.half_width, "rows": rows }),
        ),
        default_format: Format::Json,
    })
}
