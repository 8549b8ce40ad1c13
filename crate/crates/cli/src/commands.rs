//! Subcommand bodies; each returns the text to emit.

use std::fmt::Write as _;

use serde_json::json;

use ppmon_core::calibrate::{calibrate, CalibrationResult};
use ppmon_core::decision::{min_success_threshold, predictive_probability};
use ppmon_core::gbayes::quasi_posterior_counts;
use ppmon_core::inference::{density_grid, diff_credible_interval, diff_mean, DiffPosterior};
use ppmon_core::trialsim::operating_characteristics_cached;
use ppmon_core::trialsim::PredictiveCache;
use ppmon_core::{BetaParams, SnapshotCounts};

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

fn num(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.6}")
    }
}

fn pretty(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values always serialize");
    s.push('\n');
    s
}

/// Parses `cr,pr,cn,pn`: confirmed and pending responses, then confirmed and
/// pending non-responses.
pub fn parse_counts(text: &str) -> Result<SnapshotCounts, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CliError::Config(format!(
            "counts must be four comma-separated integers (confirmed responses, pending responses, \
             confirmed non-responses, pending non-responses), got {text:?}"
        )));
    }
    let mut v = [0u32; 4];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p
            .parse()
            .map_err(|_| CliError::Config(format!("count {p:?} is not a non-negative integer")))?;
    }
    Ok(SnapshotCounts {
        confirmed_responses: v[0],
        pending_responses: v[1],
        confirmed_non_responses: v[2],
        pending_non_responses: v[3],
    })
}

/// Parses `alpha,beta`.
pub fn parse_beta(text: &str) -> Result<BetaParams, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || {
        CliError::Config(format!(
            "expected two comma-separated positive numbers, got {text:?}"
        ))
    };
    if parts.len() != 2 {
        return Err(bad());
    }
    let a: f64 = parts[0].parse().map_err(|_| bad())?;
    let b: f64 = parts[1].parse().map_err(|_| bad())?;
    BetaParams::new(a, b).map_err(|e| CliError::Config(e.to_string()))
}

pub fn cmd_update(cfg: &RunConfig, counts: &SnapshotCounts, fmt: Format) -> String {
    let post = quasi_posterior_counts(cfg.design.prior_e, counts, cfg.design.w);
    match fmt {
        Format::Csv => format!(
            "alpha_star,beta_star\n{},{}\n",
            num(post.alpha),
            num(post.beta)
        ),
        Format::Json => pretty(json!({ "alpha_star": post.alpha, "beta_star": post.beta })),
    }
}

/// Where the predictive probability is evaluated from.
#[derive(Debug, Clone, Copy)]
pub enum PredictiveInput {
    Counts(SnapshotCounts),
    Posterior(BetaParams),
}

pub fn cmd_predprob(
    cfg: &RunConfig,
    input: PredictiveInput,
    remaining: Option<u64>,
    fmt: Format,
) -> Result<String, CliError> {
    let d = &cfg.design;
    let (post, m) = match input {
        PredictiveInput::Counts(c) => {
            let n = c.total();
            let m = match remaining {
                Some(m) => m,
                None if n <= d.n_max => u64::from(d.n_max - n),
                None => {
                    return Err(CliError::Config(format!(
                        "{n} participants exceed n_max = {}; pass --remaining explicitly",
                        d.n_max
                    )))
                }
            };
            (quasi_posterior_counts(d.prior_e, &c, d.w), m)
        }
        PredictiveInput::Posterior(p) => {
            let m = remaining
                .ok_or_else(|| CliError::Config("--posterior requires --remaining".into()))?;
            (p, m)
        }
    };
    let lambda = d.thresholds.lambda;
    let pp = predictive_probability(post, d.prior_s, m, lambda)?;
    let y_star = min_success_threshold(post, m, d.prior_s, lambda)?;
    Ok(match fmt {
        Format::Csv => format!(
            "alpha_star,beta_star,remaining,y_star,pp\n{},{},{},{},{}\n",
            num(post.alpha),
            num(post.beta),
            m,
            y_star,
            num(pp)
        ),
        Format::Json => pretty(json!({
            "alpha_star": post.alpha,
            "beta_star": post.beta,
            "remaining": m,
            "y_star": y_star,
            "pp": pp,
        })),
    })
}

pub fn cmd_simulate(cfg: &RunConfig, fmt: Format) -> Result<String, CliError> {
    if cfg.scenarios.is_empty() {
        return Err(CliError::Config("no [[scenarios]] to simulate".into()));
    }
    let d = &cfg.design;
    let cache = PredictiveCache::new(d.prior_s, d.thresholds.lambda);
    let mut rows = Vec::new();
    for (name, truth) in &cfg.scenarios {
        for &policy in &cfg.policies {
            let oc =
                operating_characteristics_cached(d, truth, policy, cfg.n_sims, cfg.seed, &cache)?;
            rows.push((name.as_str(), policy, oc));
        }
    }
    Ok(match fmt {
        Format::Csv => {
            let mut out = String::from("scenario,policy,pet,prn,ass,asd\n");
            for (name, policy, oc) in rows {
                writeln!(
                    out,
                    "{name},{policy},{},{},{},{}",
                    num(oc.pet),
                    num(oc.prn),
                    num(oc.ass),
                    num(oc.asd)
                )
                .expect("writing to a String cannot fail");
            }
            out
        }
        Format::Json => pretty(json!(rows
            .into_iter()
            .map(|(name, policy, oc)| json!({
                "scenario": name,
                "policy": policy.to_string(),
                "n_sims": oc.n_sims,
                "pet": oc.pet,
                "prn": oc.prn,
                "ass": oc.ass,
                "asd": oc.asd,
            }))
            .collect::<Vec<_>>())),
    })
}

fn matrix_csv(out: &mut String, title: &str, r: &CalibrationResult, m: &[Vec<f64>]) {
    writeln!(out, "# {title}").unwrap();
    out.push_str("theta_u");
    for l in &r.lambdas {
        write!(out, ",{}", num(*l)).unwrap();
    }
    out.push('\n');
    for (t, row) in r.theta_us.iter().zip(m) {
        out.push_str(&num(*t));
        for v in row {
            write!(out, ",{}", num(*v)).unwrap();
        }
        out.push('\n');
    }
}

/// Calibration tables plus the raw result, so callers can act on an empty selection.
pub fn cmd_calibrate(
    cfg: &RunConfig,
    fmt: Format,
) -> Result<(String, CalibrationResult), CliError> {
    let r = calibrate(
        &cfg.design,
        &cfg.null_truth()?,
        &cfg.alt_truth()?,
        &cfg.grid(),
    )?;
    let text = match fmt {
        Format::Csv => {
            let mut out = String::new();
            matrix_csv(&mut out, "type I error", &r, &r.type1);
            matrix_csv(&mut out, "power", &r, &r.power);
            match r.selected {
                Some((l, t)) => writeln!(
                    out,
                    "# selected lambda={} theta_u={} meets_power={}",
                    num(l),
                    num(t),
                    r.meets_power
                )
                .unwrap(),
                None => writeln!(out, "# selected none").unwrap(),
            }
            out
        }
        Format::Json => pretty(serde_json::to_value(&r).expect("calibration result serializes")),
    };
    Ok((text, r))
}

pub fn cmd_diffdist(cfg: &RunConfig, fmt: Format) -> Result<String, CliError> {
    let e = BetaParams::new(cfg.diffdist.e[0], cfg.diffdist.e[1])?;
    let post = DiffPosterior::new(e, cfg.diff_comparator()?)?;
    let level = cfg.diffdist.level;
    let mean = diff_mean(&post)?;
    let (lo, hi) = diff_credible_interval(&post, level)?;
    let grid = density_grid(&post, cfg.diffdist.points)?;
    Ok(match fmt {
        Format::Csv => {
            let mut out = String::new();
            writeln!(out, "# mean={}", num(mean)).unwrap();
            writeln!(
                out,
                "# ci_level={} ci_lower={} ci_upper={}",
                num(level),
                num(lo),
                num(hi)
            )
            .unwrap();
            out.push_str("pd,density\n");
            for (x, f) in grid {
                writeln!(out, "{},{}", num(x), num(f)).unwrap();
            }
            out
        }
        Format::Json => pretty(json!({
            "mean": mean,
            "ci_level": level,
            "ci_lower": lo,
            "ci_upper": hi,
            "grid": grid.iter().map(|&(x, f)| json!({ "pd": x, "density": f })).collect::<Vec<_>>(),
        })),
    })
}
