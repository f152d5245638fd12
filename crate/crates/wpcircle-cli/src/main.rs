//! Command-line front end: parses map specs, runs analyses, emits JSON/CSV
//! reports and plot-ready tables.
//!
//! Exit codes: 0 success, 1 error, 2 verdict failure under --assert.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex;
use rayon::prelude::*;
use serde_json::{json, Value};

use wpcircle::circle::{CircleMap, MapSpec};
use wpcircle::diagnostics::{
    self, DiagnosticsConfig, VerdictKind,
};
use wpcircle::gallery;
use wpcircle::fourier;
use wpcircle::holo::grunsky_matrix;
use wpcircle::pullback;
use wpcircle::scalar::as_f64;

type Map64 = CircleMap<f64>;

#[derive(Parser)]
#[command(
    name = "wpcircle",
    version,
    about = "Function-space diagnostics for circle homeomorphisms",
    after_help = "MAP SPECS are inline JSON or @file, e.g.\n  \
    --map '{\"family\":\"mobius\",\"params\":{\"a\":[0.3,0.0]},\"grid\":4096}'\n\
Families: identity | rotation | mobius | wp_counterexample | sine_flat | from_u | samples.\n\n\
CSV SCHEMAS\n  \
  profiles:  scale-or-order,value[,extra]\n  \
  matrices:  row,col,re,im\n  \
  sweep:     param,d_to_id,d_prime_to_id,qs_constant,h_half_norm,energy_residual\n\n\
Exit codes: 0 ok, 1 error, 2 assertion failure (--assert)."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit JSON (default)
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV where the command has a tabular artifact
    #[arg(long, global = true)]
    csv: bool,
    /// Drop the timestamp from the report metadata
    #[arg(long = "no-meta", global = true)]
    no_meta: bool,
    /// Exit 2 when the command's verdicts are not clean
    #[arg(long, global = true)]
    assert: bool,
    /// Cauchy threshold for dyadic profile increments
    #[arg(long = "tol-cauchy", global = true)]
    tol_cauchy: Option<f64>,
    /// Divergence threshold for dyadic profile increments
    #[arg(long = "tol-diverge", global = true)]
    tol_diverge: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Membership diagnostics: quasisymmetry, symmetry, WP-class profiles
    Analyze {
        /// Map spec (inline JSON or @file)
        #[arg(long)]
        map: String,
        /// Override the map spec's grid size
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Distances d and d' between two maps
    Metric {
        #[arg(long)]
        map: String,
        #[arg(long)]
        map2: String,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// P+/P- matrices, energy and commutator identity residuals
    Operators {
        #[arg(long)]
        map: String,
        #[arg(long)]
        grid: Option<usize>,
        /// Matrix truncation K (<= N/8)
        #[arg(long, default_value_t = 32)]
        trunc: usize,
    },
    /// Grunsky matrix, norm estimate, and the relation residual on the
    /// welding triple of a mobius map spec
    Grunsky {
        #[arg(long)]
        map: String,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 32)]
        trunc: usize,
    },
    /// Full diagnostic suite for the log^2-singular counterexample family
    Counterexample {
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Deformation vector field of the counterexample family
    Flow {
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        /// Finite-difference step (default 1e-3 * (alpha - 1))
        #[arg(long = "d-alpha")]
        d_alpha: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Welding identity residual on the triple built from a mobius map spec
    WeldingCheck {
        #[arg(long)]
        map: String,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 64)]
        trunc: usize,
    },
    /// CSV table over a mobius parameter range
    Sweep {
        #[arg(long, default_value_t = 0.1)]
        from: f64,
        #[arg(long, default_value_t = 0.7)]
        to: f64,
        #[arg(long, default_value_t = 7)]
        steps: usize,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long, default_value_t = 32)]
        trunc: usize,
    },
}

fn parse_map(arg: &str, grid_override: Option<usize>) -> Result<(Map64, MapSpec)> {
    let text = if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).with_context(|| format!("reading map spec {path}"))?
    } else {
        arg.to_string()
    };
    let mut spec: MapSpec = serde_json::from_str(&text)
        .map_err(|e| anyhow!("malformed map spec ({e}); see --help for the schema"))?;
    if let Some(n) = grid_override {
        spec.grid = n;
    }
    let map = Map64::from_spec(&spec)?;
    Ok((map, spec))
}

fn trend_config(common: &Common) -> DiagnosticsConfig {
    let mut cfg = DiagnosticsConfig::default();
    if let Some(t) = common.tol_cauchy {
        cfg.trend.cauchy_rel = t;
    }
    if let Some(t) = common.tol_diverge {
        cfg.trend.diverge_rel = t;
    }
    cfg
}

fn meta(common: &Common, config_echo: Value) -> Value {
    let mut m = json!({
        "library_version": env!("CARGO_PKG_VERSION"),
        "config": config_echo,
    });
    if !common.no_meta {
        let ts = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        m["timestamp_unix"] = json!(ts);
    }
    m
}

fn emit(common: &Common, body: String) -> Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {:?}", path))?,
        None => println!("{body}"),
    }
    Ok(())
}

fn emit_json(common: &Common, report: Value) -> Result<()> {
    emit(common, serde_json::to_string_pretty(&report)?)
}

/// true = verdict failure (exit 2 under --assert)
fn run(cli: &Cli) -> Result<bool> {
    let common = &cli.common;
    match &cli.cmd {
        Cmd::Analyze { map, grid } => {
            let (h, spec) = parse_map(map, *grid)?;
            let cfg = trend_config(common);
            let rep = diagnostics::wp_membership(&h, &cfg);
            let failed = rep.verdicts.wp_class != VerdictKind::YesTrend || rep.degenerate_derivative;
            if common.csv {
                let mut csv = String::from("scale,qs_ratio,symmetric_deviation\n");
                for i in 0..rep.qs_profile.scales.len() {
                    csv.push_str(&format!(
                        "{},{},{}\n",
                        rep.qs_profile.scales[i], rep.qs_profile.values[i], rep.symmetric_profile.values[i]
                    ));
                }
                emit(common, csv)?;
            } else {
                let mut out = rep.to_json();
                out["meta"] = meta(common, json!({"command": "analyze", "map": spec}));
                emit_json(common, out)?;
            }
            Ok(failed)
        }
        Cmd::Metric { map, map2, grid } => {
            let (h1, spec1) = parse_map(map, *grid)?;
            let (h2, spec2) = parse_map(map2, *grid)?;
            let (d, d_prof) = diagnostics::metric_d(&h1, &h2)?;
            let (dp, dp_prof) = diagnostics::metric_d_prime(&h1, &h2)?;
            let cfg = trend_config(common);
            let stable = dp_prof.classify(&cfg.trend) != wpcircle::Trend::Divergent;
            let rep = json!({
                "d": d,
                "d_profile": d_prof.to_json(),
                "d_prime": dp,
                "d_prime_profile": dp_prof.to_json(),
                "meta": meta(common, json!({"command": "metric", "map": spec1, "map2": spec2})),
            });
            emit_json(common, rep)?;
            Ok(!stable || d > dp * (1.0 + 1e-12))
        }
        Cmd::Operators { map, grid, trunc } => {
            let (h, spec) = parse_map(map, *grid)?;
            let pm = pullback::pm_matrices(&h, *trunc)?;
            let energy = pullback::energy_identity_residual(&h, *trunc)?;
            let z = wpcircle::holo::PowerSeries::disk(vec![
                Complex::new(0.0, 0.0),
                Complex::new(1.0, 0.0),
            ])?;
            let comm = pullback::commutator_identity_residual(&h, &z)?;
            if common.csv {
                emit(common, pm.p_plus.to_csv() + "\n" + &pm.p_minus.to_csv())?;
            } else {
                let col_energy: Vec<f64> = (0..*trunc).map(|j| pm.p_plus.col_norm_sqr(j)).collect();
                let rep = json!({
                    "truncation": trunc,
                    "energy_identity_residual": energy.residual,
                    "scored_columns": energy.scored_columns,
                    "flagged_columns": energy.flagged_columns,
                    "column_energies_p_plus": col_energy,
                    "column_tail_fractions": pm.tail_fractions,
                    "commutator_residual_phi_z": comm,
                    "meta": meta(common, json!({"command": "operators", "map": spec, "trunc": trunc})),
                });
                emit_json(common, rep)?;
            }
            Ok(energy.residual > 1e-6 || comm > 1e-6)
        }
        Cmd::Grunsky { map, grid, trunc } => {
            let (h, spec) = parse_map(map, *grid)?;
            let (a, beta) = match h.family() {
                wpcircle::circle::MapFamily::Mobius { a, beta } => (*a, *beta),
                wpcircle::circle::MapFamily::Rotation { beta } => (Complex::new(0.0, 0.0), *beta),
                wpcircle::circle::MapFamily::Identity => (Complex::new(0.0, 0.0), 0.0),
                _ => bail!("grunsky requires a mobius/rotation/identity map spec (general welding inversion is out of scope)"),
            };
            let triple = gallery::mobius_welding_triple(a, beta, h.n_samples(), 64)?;
            let gm = grunsky_matrix(&triple.f_log_fp, *trunc)?;
            let norm = gm.matrix.op_norm_estimate(300);
            let relation =
                pullback::grunsky_relation_residual(&triple.h, &triple.f_log_fp, &triple.g_log_gp, *trunc)?;
            if common.csv {
                emit(common, gm.matrix.to_csv())?;
            } else {
                let rep = json!({
                    "truncation": trunc,
                    "operator_norm_estimate": norm,
                    "relation_residual": relation,
                    "tail_indicator": gm.tail_indicator,
                    "meta": meta(common, json!({"command": "grunsky", "map": spec, "trunc": trunc})),
                });
                emit_json(common, rep)?;
            }
            Ok(norm >= 1.0 || relation > 1e-4)
        }
        Cmd::Counterexample { alpha, grid } => {
            let n = grid.unwrap_or(1 << 17);
            let (h, d) = gallery::build_counterexample(*alpha, n)?;
            let c_alpha = match h.family() {
                wpcircle::circle::MapFamily::Counterexample { c_alpha, .. } => *c_alpha,
                _ => unreachable!(),
            };
            let k = n / 8;
            let a_log = fourier::fourier_coefficients(&d.log_phi_prime, k)?;
            let a_pp = fourier::fourier_coefficients(&d.phi_prime, k)?;
            let p_log = fourier::sobolev_profile(&a_log, 0.5);
            let p_pp = fourier::sobolev_profile(&a_pp, 0.5);
            let ratio = |p: &wpcircle::DyadicProfile<f64>| {
                let base = p.params.iter().position(|&q| q >= 256).unwrap_or(0);
                as_f64(p.last()) / as_f64(p.values[base])
            };
            let gint = gallery::counterexample_g_integral(*alpha)?;
            let sup_pp = d
                .phi_prime
                .values()
                .iter()
                .map(|v| v.re)
                .fold(0.0, f64::max);
            let log_ratio = ratio(&p_log);
            let pp_ratio = ratio(&p_pp);
            let rep = json!({
                "alpha": alpha,
                "c_alpha": c_alpha,
                "sup_phi_prime_sampled": sup_pp,
                "log_phi_prime_h_half_profile": p_log.to_json(),
                "log_phi_prime_span_ratio": log_ratio,
                "phi_prime_h_half_profile": p_pp.to_json(),
                "phi_prime_span_ratio": pp_ratio,
                "g_integral": gint.value,
                "g_integral_bound": gint.bound,
                "meta": meta(common, json!({"command": "counterexample", "alpha": alpha, "grid": n})),
            });
            emit_json(common, rep)?;
            Ok(!(log_ratio < 1.10 && pp_ratio > 1.5 && gint.value < gint.bound))
        }
        Cmd::Flow { alpha, d_alpha, grid } => {
            let n = grid.unwrap_or(1 << 12);
            let da = d_alpha.unwrap_or(1e-3 * (alpha - 1.0));
            let ff = gallery::flow_field(*alpha, da, n)?;
            let cfg = trend_config(common);
            let cauchy = ff.h32_profile.classify(&cfg.trend) == wpcircle::Trend::Cauchy;
            let rep = json!({
                "alpha": alpha,
                "d_alpha": da,
                "tangential_deviation": ff.tangential_deviation,
                "halving_delta": ff.halving_delta,
                "richardson_ratio": ff.richardson_ratio,
                "h32_profile": ff.h32_profile.to_json(),
                "meta": meta(common, json!({"command": "flow", "alpha": alpha, "grid": n})),
            });
            emit_json(common, rep)?;
            Ok(!(cauchy && ff.tangential_deviation < 1e-5))
        }
        Cmd::WeldingCheck { map, grid, trunc } => {
            let (h, spec) = parse_map(map, *grid)?;
            let (a, beta) = match h.family() {
                wpcircle::circle::MapFamily::Mobius { a, beta } => (*a, *beta),
                wpcircle::circle::MapFamily::Rotation { beta } => (Complex::new(0.0, 0.0), *beta),
                wpcircle::circle::MapFamily::Identity => (Complex::new(0.0, 0.0), 0.0),
                _ => bail!("welding-check requires a mobius/rotation/identity map spec"),
            };
            let t = gallery::mobius_welding_triple(a, beta, h.n_samples(), *trunc)?;
            let r = pullback::welding_identity_residual(&t.h, &t.f_log_fp, &t.g_log_gp)?;
            let rep = json!({
                "residual": r,
                "pole": t.pole.map(|p| vec![p.re, p.im]),
                "meta": meta(common, json!({"command": "welding-check", "map": spec, "trunc": trunc})),
            });
            emit_json(common, rep)?;
            Ok(r > 1e-8)
        }
        Cmd::Sweep {
            from,
            to,
            steps,
            grid,
            trunc,
        } => {
            if *steps < 2 {
                bail!("sweep needs at least 2 steps");
            }
            let params: Vec<f64> = (0..*steps)
                .map(|i| from + (to - from) * i as f64 / (*steps - 1) as f64)
                .collect();
            let rows: Result<Vec<String>> = params
                .par_iter()
                .map(|&a| -> Result<String> {
                    let h = Map64::mobius(Complex::new(a, 0.0), 0.0, *grid)?;
                    let id = Map64::identity(*grid)?;
                    let (d, _) = diagnostics::metric_d(&h, &id)?;
                    let (dp, _) = diagnostics::metric_d_prime(&h, &id)?;
                    let qs = diagnostics::quasisymmetry_profile(&h).max();
                    let deriv = h.derivative();
                    let coeffs =
                        fourier::fourier_coefficients(&deriv.log_phi_prime, grid / 8)?;
                    let hh = fourier::sobolev_seminorm(&coeffs, 0.5);
                    let e = pullback::energy_identity_residual(&h, *trunc)?;
                    Ok(format!("{a},{d},{dp},{qs},{hh},{}", e.residual))
                })
                .collect();
            let mut csv =
                String::from("param,d_to_id,d_prime_to_id,qs_constant,h_half_norm,energy_residual\n");
            for row in rows? {
                csv.push_str(&row);
                csv.push('\n');
            }
            emit(common, csv)?;
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            if cli.common.assert {
                eprintln!("assertion failure: verdicts not clean");
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
