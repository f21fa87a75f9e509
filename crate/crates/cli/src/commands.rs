use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand_distr::{Binomial, Distribution, Gamma};
use rootexp::expansion::{expand_estimator, remainder_bound, PolynomialScore};
use rootexp::models::{
    binomial_phase_transition, expfam_limit_alpha, expfam_score_model, ou_estimate, ou_simulate, ou_theta_model,
    ExpFamilyModel, OUSpec, SampleSummary,
};
use rootexp::montecarlo::{exponential_ks_experiment, stream_rng};
use rootexp::related::{upflat_symbolic, zigzag_symbolic};
use rootexp::{Error, ExpansionResult, Interval, ProfileKind, Scale, ScoreModel};
use serde_json::json;

use crate::args::{BinomialArgs, ExpandArgs, ExponentialArgs, KsArgs, OuArgs, SymbolicArgs};
use crate::config::{Config, List};
use crate::error::{CliError, CliResult};
use crate::output::{demo_csv, expansion_csv, expansion_json, num, write, DemoRow};

const MAX_ORDER: usize = 8;

fn order(p: usize) -> CliResult<usize> {
    if (1..=MAX_ORDER).contains(&p) {
        Ok(p)
    } else {
        Err(CliError::Usage(format!("p = {p} outside 1..={MAX_ORDER}")))
    }
}

fn positive(n: u64, what: &str) -> CliResult<u64> {
    if n == 0 {
        Err(CliError::Usage(format!("{what} must be positive")))
    } else {
        Ok(n)
    }
}

fn no_custom(profile: ProfileKind) -> CliResult<ProfileKind> {
    match profile {
        ProfileKind::Custom => Err(CliError::Usage("profile must be upflat or zigzag".into())),
        p => Ok(p),
    }
}

fn subscript(k: usize) -> String {
    k.to_string().chars().map(|c| char::from_u32(0x2080 + c.to_digit(10).expect("digit")).expect("subscript")).collect()
}

fn out_dir(cfg: &Config, flag: Option<PathBuf>) -> CliResult<PathBuf> {
    cfg.or(flag, "out", PathBuf::from("."))
}

fn write_expansion(dir: &Path, r: &ExpansionResult) -> CliResult<()> {
    write(dir, "expansion.csv", &expansion_csv(r))?;
    write(dir, "expansion.json", &expansion_json(r))?;
    Ok(())
}

fn report_demo(name: &str, dir: &Path, rows: &[DemoRow], last: &ExpansionResult) -> CliResult<()> {
    println!("estimate = {}", num(rows[0].estimate));
    for r in rows {
        let inf = r.theta_p_inf.map(|t| format!(", θ_{}(∞) = {}", r.p, num(t))).unwrap_or_default();
        println!("θ_{}(s) = {}{inf}, error {:.3e}", r.p, num(r.theta_p_s), r.theta_p_s - r.estimate);
    }
    if last.boundary_layer {
        println!("warning: higher-order terms dominate the first-order term");
    }
    write(dir, &format!("{name}.csv"), &demo_csv(rows))?;
    write_expansion(dir, last)
}

pub fn expand_symbolic(a: SymbolicArgs) -> CliResult<()> {
    let cfg = Config::load(a.config.as_deref(), &["profile", "p"])?;
    let profile = no_custom(cfg.or(a.profile, "profile", ProfileKind::UpFlat)?)?;
    let p = order(cfg.or(a.p, "p", 5)?)?;
    let alpha = match profile {
        ProfileKind::ZigZag => zigzag_symbolic(p)?,
        _ => upflat_symbolic(p)?,
    };
    let name = if profile == ProfileKind::ZigZag { "zigzag" } else { "upflat" };
    if a.json {
        let rows: Vec<_> = alpha
            .iter()
            .enumerate()
            .map(|(k, poly)| {
                let terms: Vec<_> =
                    poly.terms().map(|(e, c)| json!({ "coefficient": c.to_string(), "exponents": e })).collect();
                json!({ "k": k, "text": poly.format_grouped(0), "terms": terms })
            })
            .collect();
        let doc = json!({ "profile": name, "p": p, "variables": "delta_hat_0..delta_hat_p", "alpha": rows });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        println!("{name} profile, p = {p}, with δ̂_k = -δ_k/δ_1");
        for (k, poly) in alpha.iter().enumerate().skip(1) {
            println!("α{} = {}", subscript(k), poly.format_grouped(0));
        }
    }
    Ok(())
}

pub fn expand(a: ExpandArgs) -> CliResult<()> {
    let cfg = Config::load(
        a.config.as_deref(),
        &["model", "profile", "p", "theta", "n", "family", "N", "t_bar", "g", "derivs", "u_lo", "u_hi", "c", "out"],
    )?;
    let profile = no_custom(cfg.or(a.profile, "profile", ProfileKind::UpFlat)?)?;
    let p = order(cfg.or(a.p, "p", 3)?)?;
    let theta: f64 = cfg.required(a.theta, "theta")?;
    let n = positive(cfg.required(a.n, "n")?, "n")?;
    let kind: String = cfg.or(a.model, "model", "expfamily".into())?;

    let (model, scale, lim): (ScoreModel, Scale, Option<Vec<f64>>) = match kind.as_str() {
        "expfamily" => {
            let family: String = cfg.or(a.family, "family", "exponential".into())?;
            let fam = match family.as_str() {
                "exponential" => ExpFamilyModel::exponential(),
                "binomial" => ExpFamilyModel::binomial(cfg.or(a.trials, "N", 1)?)?,
                other => return Err(CliError::Usage(format!("unknown family `{other}`"))),
            };
            let summary = match (cfg.get(a.t_bar, "t_bar")?, cfg.get(a.g, "g")?) {
                (Some(t), _) => SampleSummary::new(n, t)?.with_theta(&fam, theta)?,
                (None, Some(g)) => SampleSummary::from_g(&fam, theta, n, g)?,
                (None, None) => return Err(CliError::Usage("expfamily needs `t_bar` or `g`".into())),
            };
            let lim = match (profile, summary.g_n) {
                (ProfileKind::UpFlat, Some(g)) => Some(expfam_limit_alpha(&fam, theta, g, p)?),
                _ => None,
            };
            (expfam_score_model(&fam, &summary, theta, profile), summary.scale(), lim)
        }
        "custom" => {
            let List(derivs) = cfg.required(a.derivs, "derivs")?;
            let score = PolynomialScore { center: theta, derivs };
            (ScoreModel::new(theta, Arc::new(score), profile), Scale::n(n), None)
        }
        other => return Err(CliError::Usage(format!("unknown model `{other}`"))),
    };

    let mut r = expand_estimator(&model, &scale, p, lim.as_deref())?;
    match (cfg.get(a.u_lo, "u_lo")?, cfg.get(a.u_hi, "u_hi")?) {
        (Some(lo), Some(hi)) => {
            let u = Interval::new(lo, hi)?;
            r.remainder = Some(remainder_bound(&model, &scale, &r, &u, cfg.get(a.c, "c")?)?);
        }
        (None, None) => {}
        _ => return Err(CliError::Usage("`u_lo` and `u_hi` must be given together".into())),
    }
    let dir = out_dir(&cfg, a.out)?;
    write_expansion(&dir, &r)?;
    print!("{}", expansion_json(&r));
    Ok(())
}

pub fn exponential_demo(a: ExponentialArgs) -> CliResult<()> {
    let cfg = Config::load(a.config.as_deref(), &["theta", "n", "p", "seed", "out"])?;
    let theta = cfg.or(a.theta, "theta", 1.0)?;
    let n = positive(cfg.or(a.n, "n", 100)?, "n")?;
    let p = order(cfg.or(a.p, "p", 3)?)?;
    let seed: u64 = cfg.required(a.seed, "seed")?;
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::Domain(format!("θ = {theta} must be positive")).into());
    }

    let gamma = Gamma::new(n as f64, 1.0 / (n as f64 * theta)).map_err(|e| CliError::Model(e.to_string()))?;
    let t_bar = gamma.sample(&mut stream_rng(seed, 0));
    let fam = ExpFamilyModel::exponential();
    let summary = SampleSummary::new(n, t_bar)?.with_theta(&fam, theta)?;
    let g = summary.g_n.expect("set by with_theta");
    println!("θ = {theta}, n = {n}, T_n = {}, G_n = {g:.6}", num(t_bar));

    let model = expfam_score_model(&fam, &summary, theta, ProfileKind::UpFlat);
    let mut rows = Vec::new();
    let mut last = None;
    for q in 1..=p {
        let lim = expfam_limit_alpha(&fam, theta, g, q)?;
        let r = expand_estimator(&model, &summary.scale(), q, Some(&lim))?;
        rows.push(DemoRow { p: q, estimate: 1.0 / t_bar, theta_p_s: r.theta_p_s, theta_p_inf: r.theta_p_inf });
        last = Some(r);
    }
    report_demo("exponential_demo", &out_dir(&cfg, a.out)?, &rows, &last.expect("p >= 1"))
}

pub fn binomial_demo(a: BinomialArgs) -> CliResult<()> {
    let cfg = Config::load(a.config.as_deref(), &["theta", "n", "N", "p", "profile", "seed", "out"])?;
    let theta = cfg.or(a.theta, "theta", 0.3)?;
    let n = positive(cfg.or(a.n, "n", 100)?, "n")?;
    let trials = positive(cfg.or(a.trials, "N", 1)?, "N")?;
    let p = order(cfg.or(a.p, "p", 3)?)?;
    let profile = no_custom(cfg.or(a.profile, "profile", ProfileKind::UpFlat)?)?;
    let seed: u64 = cfg.required(a.seed, "seed")?;
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("θ = {theta} outside (0, 1)")).into());
    }

    let total = n.checked_mul(trials).ok_or_else(|| CliError::Usage("n·N overflows".into()))?;
    let draw = Binomial::new(total, theta).map_err(|e| CliError::Model(e.to_string()))?;
    let successes = draw.sample(&mut stream_rng(seed, 0));
    let t_bar = successes as f64 / n as f64;
    let estimate = t_bar / trials as f64;
    let fam = ExpFamilyModel::binomial(trials)?;
    let summary = SampleSummary::new(n, t_bar)?.with_theta(&fam, theta)?;
    let g = summary.g_n.expect("set by with_theta");
    println!("θ = {theta}, n = {n}, N = {trials}, successes = {successes}, G_n = {g:.6}");

    let mut rows = Vec::new();
    let mut last = None;
    for q in 1..=p {
        let r = match profile {
            ProfileKind::ZigZag => binomial_phase_transition(n, trials, t_bar, q)?,
            _ => {
                let model = expfam_score_model(&fam, &summary, theta, ProfileKind::UpFlat);
                let lim = expfam_limit_alpha(&fam, theta, g, q)?;
                expand_estimator(&model, &summary.scale(), q, Some(&lim))?
            }
        };
        rows.push(DemoRow { p: q, estimate, theta_p_s: r.theta_p_s, theta_p_inf: r.theta_p_inf });
        last = Some(r);
    }
    report_demo("binomial_demo", &out_dir(&cfg, a.out)?, &rows, &last.expect("p >= 1"))
}

pub fn ou_demo(a: OuArgs) -> CliResult<()> {
    let cfg = Config::load(a.config.as_deref(), &["theta", "n", "p", "dt", "sigma", "seed", "out"])?;
    let theta = cfg.or(a.theta, "theta", 1.0)?;
    let n = positive(cfg.or(a.n, "n", 1000)?, "n")?;
    let p = order(cfg.or(a.p, "p", 3)?)?;
    let dt = cfg.or(a.dt, "dt", 0.1)?;
    let sigma = cfg.or(a.sigma, "sigma", 1.0)?;
    let seed: u64 = cfg.required(a.seed, "seed")?;

    let spec = OUSpec::new(theta, sigma, dt, n as usize)?;
    let path = ou_simulate(&spec, seed)?;
    let est = ou_estimate(&path, dt)?;
    println!("θ = {theta}, σ = {sigma}, Δ = {dt}, n = {n}, η̂ = {}", num(est.eta_hat));

    let model = ou_theta_model(&spec, &path);
    let scale = Scale::with_dt(n, dt);
    let mut rows = Vec::new();
    let mut last = None;
    for q in 1..=p {
        let r = expand_estimator(&model, &scale, q, None)?;
        rows.push(DemoRow { p: q, estimate: est.theta_hat, theta_p_s: r.theta_p_s, theta_p_inf: None });
        last = Some(r);
    }
    report_demo("ou_demo", &out_dir(&cfg, a.out)?, &rows, &last.expect("p >= 1"))
}

pub fn ks_figure(a: KsArgs) -> CliResult<()> {
    let cfg = Config::load(a.config.as_deref(), &["theta", "m", "n", "seed", "out"])?;
    let theta = cfg.or(a.theta, "theta", 1.0)?;
    let m = cfg.or(a.m, "m", 100_000)?;
    let List(ns) = cfg.or(a.n, "n", List(vec![5, 10, 20, 50, 100]))?;
    let seed: u64 = cfg.required(a.seed, "seed")?;

    let table = exponential_ks_experiment(theta, &ns, m, seed)?;
    let csv = table.to_csv();
    let dir = out_dir(&cfg, a.out)?;
    write(&dir, "ks_table.csv", &csv)?;
    write(&dir, "ks_table.json", &(serde_json::to_string_pretty(&table).expect("serializable") + "\n"))?;
    print!("{csv}");
    Ok(())
}
