//! nc-torus-lab: experiment runner for the quantized-torus correlation toolkit.
//!
//! Subcommands map onto the library layers: number-theory verification, word
//! correlation under the three evaluators, moment/CLT tables, clustering scans,
//! and Weyl-sum equidistribution. Output is CSV (plot-ready, versioned header) or a
//! JSON report embedding the config for bit-for-bit reproduction in exact modes.

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use nc_torus_core::cluster::{
    condition_3_12_average, condition_3_12_numeric, equidistribution_test, strong_clustering_scan,
    weak_clustering_scan, ClusterScan,
};
use nc_torus_core::moments::{
    classify_statistics, finite_n_moment, gaussian_moment, moment_limit, semicircle_moment,
    StatisticsClass,
};
use nc_torus_core::rat::{parse_rational, rat_int, rational_from_f64, to_f64};
use nc_torus_core::scalar::C64;
use nc_torus_core::serialize::{csv_table, observable_from_json, word_from_json};
use nc_torus_core::state::{
    phi_inf_generic, phi_inf_numeric, phi_inf_special, NumericParams, DEFAULT_BUDGET,
};
use nc_torus_core::{
    DeltaConvention, Evaluator, FreeWord, HyperbolicMatrix, IntVec2, ThetaParameter,
    WeylObservable,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "nc-torus-lab", version, about = "quantized toral automorphism experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// experiment configuration (JSON)
    #[arg(long)]
    config: PathBuf,
    /// output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// output format
    #[arg(long, default_value = "csv")]
    format: Format,
    /// printed precision in bits (reported floats carry ~bits·log10(2) digits)
    #[arg(long)]
    precision: Option<u32>,
    /// override the config's T_max
    #[arg(long)]
    tmax: Option<usize>,
    /// override the config's separation window d
    #[arg(long)]
    sep: Option<usize>,
    /// seed for randomized sampling
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// trace recursion, congruence, and limit-value checks for the configured matrix
    VerifyNumberTheory(Common),
    /// evaluate configured words under the requested evaluators
    Correlate(Common),
    /// limit and finite-N moment tables with law classification
    Moments(Common),
    /// central-limit convergence: one moment order across an N range
    Clt(Common),
    /// weak/strong clustering scans and the freeness average
    Cluster(Common),
    /// Weyl-sum equidistribution report
    Equidistribution(Common),
}

#[derive(Deserialize, Clone)]
#[serde(deny_unknown_fields)]
struct Config {
    matrix: Value,
    #[serde(default)]
    theta: Option<ThetaSpec>,
    #[serde(default)]
    words: Option<Vec<Value>>,
    #[serde(default)]
    evaluators: Option<Vec<String>>,
    #[serde(default)]
    observable: Option<Value>,
    #[serde(default)]
    orders: Option<Vec<usize>>,
    #[serde(default)]
    order: Option<usize>,
    #[serde(default)]
    n_values: Option<Vec<usize>>,
    #[serde(default)]
    t_max: Option<usize>,
    #[serde(default)]
    d: Option<usize>,
    #[serde(default)]
    t_range: Option<[i64; 2]>,
    #[serde(default)]
    m: Option<[i64; 2]>,
    #[serde(default)]
    n: Option<[i64; 2]>,
    #[serde(default)]
    scan: Option<String>,
    #[serde(default)]
    x: Option<Value>,
    #[serde(default)]
    y: Option<Value>,
    #[serde(default)]
    z: Option<Value>,
    #[serde(default)]
    k_max: Option<u64>,
    #[serde(default)]
    samples: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    ordered: Option<bool>,
    #[serde(default)]
    precision: Option<u32>,
    #[serde(default)]
    separator: Option<char>,
}

#[derive(Deserialize, Clone)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ThetaSpec {
    Generic,
    Zero,
    Rational { value: String },
    Special { l: i64, r: i64 },
    Real { value: f64 },
}

fn parse_matrix(v: &Value) -> anyhow::Result<HyperbolicMatrix> {
    let entries: [i64; 4] = if let Some(rows) = v.as_array() {
        let flat: Vec<i64> = rows
            .iter()
            .flat_map(|r| r.as_array().into_iter().flatten())
            .filter_map(Value::as_i64)
            .collect();
        flat.try_into()
            .map_err(|_| anyhow!("matrix must be [[a,b],[c,d]]"))?
    } else if let Some(obj) = v.as_object() {
        let get = |k: &str| {
            obj.get(k)
                .and_then(Value::as_i64)
                .ok_or_else(|| anyhow!("matrix entry {k} missing"))
        };
        [get("a")?, get("b")?, get("c")?, get("d")?]
    } else {
        bail!("matrix must be an array or object");
    };
    HyperbolicMatrix::new(entries[0], entries[1], entries[2], entries[3])
        .map_err(|e| anyhow!("{e}"))
}

fn parse_theta(spec: &Option<ThetaSpec>, h: &HyperbolicMatrix) -> anyhow::Result<ThetaParameter> {
    Ok(match spec {
        None | Some(ThetaSpec::Generic) => ThetaParameter::GenericIrrational,
        Some(ThetaSpec::Zero) => ThetaParameter::Zero,
        Some(ThetaSpec::Rational { value }) => {
            ThetaParameter::rational(parse_rational(value).map_err(|e| anyhow!("theta: {e}"))?)
        }
        Some(ThetaSpec::Special { l, r }) => {
            ThetaParameter::special(h, *l, *r).map_err(|e| anyhow!("theta: {e}"))?
        }
        Some(ThetaSpec::Real { value }) => {
            ThetaParameter::explicit_real(*value).map_err(|e| anyhow!("theta: {e}"))?
        }
    })
}

fn vec2(v: &Option<[i64; 2]>, name: &str) -> anyhow::Result<IntVec2> {
    let [a, b] = v.ok_or_else(|| anyhow!("config needs \"{name}\": [m1, m2]"))?;
    Ok(IntVec2::from_i64(a, b))
}

fn budget() -> u128 {
    std::env::var("NC_TORUS_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

struct Output {
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    verdicts: Vec<String>,
    all_ok: bool,
}

impl Output {
    fn new(columns: Vec<&'static str>) -> Self {
        Output {
            columns,
            rows: Vec::new(),
            verdicts: Vec::new(),
            all_ok: true,
        }
    }
}

static DIGITS: std::sync::OnceLock<usize> = std::sync::OnceLock::new();

fn fmt_f64(x: f64) -> String {
    format!("{x:.*e}", *DIGITS.get_or_init(|| 12))
}

fn emit(out: &Output, common: &Common, config_json: &Value, sep: char) -> anyhow::Result<()> {
    let text = match common.format {
        Format::Csv => {
            let mut s = csv_table(&out.columns, &out.rows, sep);
            for v in &out.verdicts {
                s.push_str(&format!("# {v}\n"));
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = out
                .rows
                .iter()
                .map(|r| {
                    Value::Object(
                        out.columns
                            .iter()
                            .zip(r.iter())
                            .map(|(c, v)| ((*c).to_string(), json!(v)))
                            .collect(),
                    )
                })
                .collect();
            serde_json::to_string_pretty(&json!({
                "schema": "nc-torus-lab v1",
                "config": config_json,
                "rows": rows,
                "verdicts": out.verdicts,
                "ok": out.all_ok,
            }))? + "\n"
        }
    };
    match &common.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {path:?}"))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_verify_number_theory(cfg: &Config) -> anyhow::Result<Output> {
    let h = parse_matrix(&cfg.matrix)?;
    let t_max = cfg.t_max.unwrap_or(25);
    let mut out = Output::new(vec!["check", "t", "detail", "pass"]);

    let seq = h.trace_sequence(t_max.max(2));
    for t in 0..=t_max.max(2) {
        let trace = h.power(t as i64).trace();
        let ok = *seq.beta(t) == trace;
        out.all_ok &= ok;
        out.rows.push(vec![
            "beta_recursion".into(),
            t.to_string(),
            format!("beta={} trace={}", seq.beta(t), trace),
            ok.to_string(),
        ]);
    }

    let (ok, w) = h.congruence_check();
    out.all_ok &= ok;
    out.rows.push(vec![
        "congruence".into(),
        h.modulus().to_string(),
        format!("T^(beta1-2)=[[{},{}],[{},{}]]", w.a, w.b, w.c, w.d),
        ok.to_string(),
    ]);

    let theta = parse_theta(&cfg.theta, &h)?;
    if matches!(
        theta,
        ThetaParameter::Zero | ThetaParameter::SpecialQuadratic { .. }
    ) {
        let residuals = h
            .verify_beta_limit(&theta, t_max)
            .map_err(|e| anyhow!("limit check: {e}"))?;
        // residuals decay like λ^{-2t}; pass/fail is judged on the final one only
        for (i, res) in residuals.iter().enumerate() {
            let last = i + 1 == residuals.len();
            let ok = !last || *res < 1e-8;
            out.all_ok &= ok;
            out.rows.push(vec![
                "beta_limit_residual".into(),
                (i + 1).to_string(),
                fmt_f64(*res),
                if last { ok.to_string() } else { String::new() },
            ]);
        }
    }
    out.verdicts.push(format!(
        "verify-number-theory: {}",
        if out.all_ok { "all checks passed" } else { "FAILURES" }
    ));
    Ok(out)
}

fn eval_word(
    name: &str,
    w: &FreeWord,
    h: &HyperbolicMatrix,
    theta: &ThetaParameter,
    params: NumericParams,
    budget: u128,
) -> Result<(C64, f64), String> {
    let hint = theta.to_f64();
    match name {
        "generic" => phi_inf_generic(w, h, budget)
            .and_then(|s| s.to_c64(hint))
            .map(|v| (v, 0.0))
            .map_err(|e| e.to_string()),
        "special" => {
            let (l, r) = match theta {
                ThetaParameter::SpecialQuadratic { l, r, .. } => (*l, *r),
                ThetaParameter::Zero => (0, 0),
                _ => return Err("special evaluator needs a special theta".into()),
            };
            phi_inf_special(w, h, l, r, budget)
                .and_then(|s| s.to_c64(hint))
                .map(|v| (v, 0.0))
                .map_err(|e| e.to_string())
        }
        "numeric" => phi_inf_numeric(w, h, theta, params, budget).map_err(|e| e.to_string()),
        other => Err(format!("unknown evaluator {other:?}")),
    }
}

fn cmd_correlate(cfg: &Config, common: &Common) -> anyhow::Result<Output> {
    let h = parse_matrix(&cfg.matrix)?;
    let theta = parse_theta(&cfg.theta, &h)?;
    let words = cfg
        .words
        .as_ref()
        .ok_or_else(|| anyhow!("config needs \"words\""))?;
    let evaluators: Vec<String> = cfg
        .evaluators
        .clone()
        .unwrap_or_else(|| vec!["generic".into()]);
    let params = NumericParams {
        t_max: common.tmax.or(cfg.t_max).unwrap_or(10_000),
        d: common.sep.or(cfg.d).unwrap_or(10),
    };
    let budget = budget();
    let mut out = Output::new(vec![
        "word",
        "evaluator",
        "value_re",
        "value_im",
        "error_estimate",
        "cross_diff",
        "status",
    ]);
    for (i, wv) in words.iter().enumerate() {
        let w = word_from_json(wv).map_err(|e| anyhow!("word {i}: {e}"))?;
        let mut first: Option<C64> = None;
        for name in &evaluators {
            match eval_word(name, &w, &h, &theta, params, budget) {
                Ok((v, est)) => {
                    let cross = match (evaluators.len() == 2, first) {
                        (true, Some(prev)) => fmt_f64((v - prev).norm()),
                        _ => String::new(),
                    };
                    first.get_or_insert(v);
                    out.rows.push(vec![
                        i.to_string(),
                        name.clone(),
                        fmt_f64(v.re),
                        fmt_f64(v.im),
                        fmt_f64(est),
                        cross,
                        "ok".into(),
                    ]);
                }
                // budget overruns and symbolic values are reported per word, not fatal
                Err(e) => {
                    out.rows.push(vec![
                        i.to_string(),
                        name.clone(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        e,
                    ]);
                }
            }
        }
    }
    Ok(out)
}

fn law_name(c: StatisticsClass) -> &'static str {
    match c {
        StatisticsClass::Semicircle => "Semicircle",
        StatisticsClass::Gaussian => "Gaussian",
        StatisticsClass::PairPartitionLaw => "PairPartitionLaw",
        StatisticsClass::Unclassified => "Unclassified",
    }
}

fn moment_evaluator(theta: &ThetaParameter) -> anyhow::Result<Evaluator> {
    Ok(match theta {
        ThetaParameter::GenericIrrational => Evaluator::Generic,
        ThetaParameter::SpecialQuadratic { l, r, .. } => Evaluator::special(*l, *r),
        ThetaParameter::Zero => Evaluator::special(0, 0),
        _ => bail!("moments need a generic, zero, or special theta"),
    })
}

fn cmd_moments(cfg: &Config) -> anyhow::Result<Output> {
    let h = parse_matrix(&cfg.matrix)?;
    let theta = parse_theta(&cfg.theta, &h)?;
    let obs = observable_from_json(
        cfg.observable
            .as_ref()
            .ok_or_else(|| anyhow!("config needs \"observable\""))?,
    )
    .map_err(|e| anyhow!("observable: {e}"))?;
    let orders = cfg.orders.clone().unwrap_or_else(|| vec![2, 4, 6]);
    let n_values = cfg.n_values.clone().unwrap_or_else(|| vec![2, 4, 8]);
    let evaluator = moment_evaluator(&theta)?;
    let law = law_name(classify_statistics(&h, &theta));
    let ordered = cfg.ordered.unwrap_or(false);
    let budget = budget();
    let variance = moment_limit(&obs, &h, &evaluator, 2, ordered, budget)
        .map_err(|e| anyhow!("variance: {e}"))?
        .to_c64(theta.to_f64())
        .map_err(|e| anyhow!("variance: {e}"))?
        .re;
    let v_rat = rational_from_f64(variance).unwrap_or_else(|_| rat_int(variance.round() as i64));
    let mut out = Output::new(vec![
        "kind", "order", "n", "value_re", "value_im", "law", "variance", "reference_semicircle",
        "reference_gaussian", "status",
    ]);
    for &p in &orders {
        let mut push = |kind: &str, n: String, value: Result<C64, String>| {
            let (re, im, status) = match value {
                Ok(v) => (fmt_f64(v.re), fmt_f64(v.im), "ok".to_string()),
                Err(e) => (String::new(), String::new(), e),
            };
            out.rows.push(vec![
                kind.into(),
                p.to_string(),
                n,
                re,
                im,
                law.into(),
                fmt_f64(variance),
                fmt_f64(to_f64(&semicircle_moment(p, &v_rat))),
                fmt_f64(to_f64(&gaussian_moment(p, &v_rat))),
                status,
            ]);
        };
        let limit = moment_limit(&obs, &h, &evaluator, p, ordered, budget)
            .and_then(|s| s.to_c64(theta.to_f64()))
            .map_err(|e| e.to_string());
        push("limit", String::new(), limit);
        for &n in &n_values {
            let v = finite_n_moment(&obs, &h, &evaluator, p, n, budget)
                .and_then(|s| s.to_c64(theta.to_f64()))
                .map_err(|e| e.to_string());
            push("finite", n.to_string(), v);
        }
    }
    Ok(out)
}

fn cmd_clt(cfg: &Config) -> anyhow::Result<Output> {
    let h = parse_matrix(&cfg.matrix)?;
    let theta = parse_theta(&cfg.theta, &h)?;
    let obs = observable_from_json(
        cfg.observable
            .as_ref()
            .ok_or_else(|| anyhow!("config needs \"observable\""))?,
    )
    .map_err(|e| anyhow!("observable: {e}"))?;
    let order = cfg.order.unwrap_or(4);
    let n_values = cfg.n_values.clone().unwrap_or_else(|| vec![2, 4, 8, 16, 32]);
    let evaluator = moment_evaluator(&theta)?;
    let law = law_name(classify_statistics(&h, &theta));
    let budget = budget();
    let limit = moment_limit(&obs, &h, &evaluator, order, false, budget)
        .and_then(|s| s.to_c64(theta.to_f64()))
        .map_err(|e| anyhow!("limit moment: {e}"))?;
    let mut out = Output::new(vec!["order", "n", "moment_re", "limit_re", "gap", "law"]);
    for &n in &n_values {
        let v = finite_n_moment(&obs, &h, &evaluator, order, n, budget)
            .and_then(|s| s.to_c64(theta.to_f64()))
            .map_err(|e| anyhow!("finite moment at N={n}: {e}"))?;
        out.rows.push(vec![
            order.to_string(),
            n.to_string(),
            fmt_f64(v.re),
            fmt_f64(limit.re),
            fmt_f64((v - limit).norm()),
            law.into(),
        ]);
    }
    out.verdicts.push(format!("classification: {law}"));
    Ok(out)
}

fn scan_rows(out: &mut Output, label: &str, scan: &ClusterScan) {
    for (t, v) in scan.times.iter().zip(scan.values.iter()) {
        out.rows.push(vec![
            label.into(),
            t.to_string(),
            fmt_f64(v.re),
            fmt_f64(v.im),
            fmt_f64(v.norm()),
        ]);
    }
    out.verdicts.push(format!(
        "{label}: {}",
        if scan.converged { "converged-to-target" } else { "not-converged" }
    ));
}

fn cmd_cluster(cfg: &Config, common: &Common) -> anyhow::Result<Output> {
    let h = parse_matrix(&cfg.matrix)?;
    let theta = parse_theta(&cfg.theta, &h)?;
    let [t0, t1] = cfg.t_range.unwrap_or([1, 50]);
    let mut out = Output::new(vec!["scan", "t", "value_re", "value_im", "abs"]);
    let kind = cfg.scan.as_deref().unwrap_or("strong");
    match kind {
        "strong" => {
            let m = vec2(&cfg.m, "m")?;
            let n = vec2(&cfg.n, "n")?;
            let scan = strong_clustering_scan(&m, &n, &h, &theta, t0..=t1)
                .map_err(|e| anyhow!("strong scan: {e}"))?;
            scan_rows(&mut out, "strong", &scan);
        }
        "weak" => {
            let parse_obs = |v: &Option<Value>, name: &str| -> anyhow::Result<WeylObservable> {
                match v {
                    Some(v) => observable_from_json(v).map_err(|e| anyhow!("{name}: {e}")),
                    None => Ok(WeylObservable::identity()),
                }
            };
            let x = parse_obs(&cfg.x, "x")?;
            let y = parse_obs(&cfg.y, "y")?;
            let z = parse_obs(&cfg.z, "z")?;
            let scan = weak_clustering_scan(&x, &y, &z, &h, &theta, t0..=t1)
                .map_err(|e| anyhow!("weak scan: {e}"))?;
            scan_rows(&mut out, "weak", &scan);
        }
        "freeness" => {
            let m = vec2(&cfg.m, "m")?;
            let n = vec2(&cfg.n, "n")?;
            let exact = condition_3_12_average(&n, &m, &n, &h, &theta, DeltaConvention::Corrected)
                .and_then(|s| s.to_c64(theta.to_f64()))
                .map_err(|e| anyhow!("freeness average: {e}"))?;
            out.rows.push(vec![
                "freeness_exact".into(),
                String::new(),
                fmt_f64(exact.re),
                fmt_f64(exact.im),
                fmt_f64(exact.norm()),
            ]);
            if theta.is_numeric() {
                let t_max = common.tmax.or(cfg.t_max).unwrap_or(10_000);
                let num = condition_3_12_numeric(&m, &n, &h, &theta, t_max)
                    .map_err(|e| anyhow!("freeness average: {e}"))?;
                out.rows.push(vec![
                    "freeness_numeric".into(),
                    t_max.to_string(),
                    fmt_f64(num.re),
                    fmt_f64(num.im),
                    fmt_f64(num.norm()),
                ]);
            }
        }
        other => bail!("unknown scan kind {other:?} (strong | weak | freeness)"),
    }
    Ok(out)
}

fn cmd_equidistribution(cfg: &Config, common: &Common) -> anyhow::Result<Output> {
    let h = parse_matrix(&cfg.matrix)?;
    let m = vec2(&cfg.m, "m")?;
    let n = vec2(&cfg.n, "n")?;
    let n_terms = common.tmax.or(cfg.t_max).unwrap_or(10_000);
    let k_max = cfg.k_max.unwrap_or(3);
    let mut out = Output::new(vec!["theta", "k", "sum_re", "sum_im", "abs"]);
    match cfg.samples {
        // Monte-Carlo over uniform random θ: report per-sample first harmonics + mean square
        Some(samples) => {
            let seed = common.seed.or(cfg.seed).unwrap_or(2026);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut mean_sq = 0.0;
            for _ in 0..samples {
                let tv: f64 = rng.gen();
                let theta = ThetaParameter::explicit_real(tv).map_err(|e| anyhow!("{e}"))?;
                let rep = equidistribution_test(&m, &n, &h, &theta, n_terms, 1)
                    .map_err(|e| anyhow!("{e}"))?;
                let s = rep.harmonics[0].1;
                mean_sq += s.norm_sqr();
                out.rows.push(vec![
                    format!("{tv:.12}"),
                    "1".into(),
                    fmt_f64(s.re),
                    fmt_f64(s.im),
                    fmt_f64(s.norm()),
                ]);
            }
            mean_sq /= samples.max(1) as f64;
            out.verdicts.push(format!(
                "mean |sum|^2 = {mean_sq:.3e} over {samples} samples (1/N = {:.3e})",
                1.0 / n_terms as f64
            ));
        }
        None => {
            let theta = parse_theta(&cfg.theta, &h)?;
            let rep = equidistribution_test(&m, &n, &h, &theta, n_terms, k_max)
                .map_err(|e| anyhow!("{e}"))?;
            let label = theta
                .to_f64()
                .map(|t| format!("{t:.12}"))
                .unwrap_or_else(|| "symbolic".into());
            for (k, s) in rep.harmonics {
                out.rows.push(vec![
                    label.clone(),
                    k.to_string(),
                    fmt_f64(s.re),
                    fmt_f64(s.im),
                    fmt_f64(s.norm()),
                ]);
            }
        }
    }
    Ok(out)
}

fn load_config(common: &Common) -> anyhow::Result<(Config, Value)> {
    let text = std::fs::read_to_string(&common.config)
        .with_context(|| format!("reading {:?}", common.config))?;
    let raw: Value = serde_json::from_str(&text).context("config is not valid JSON")?;
    let cfg: Config = serde_json::from_value(raw.clone()).context("invalid config")?;
    Ok((cfg, raw))
}

fn run() -> anyhow::Result<i32> {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::VerifyNumberTheory(c)
        | Command::Correlate(c)
        | Command::Moments(c)
        | Command::Clt(c)
        | Command::Cluster(c)
        | Command::Equidistribution(c) => c,
    };
    let (cfg, raw) = load_config(common)?;
    // precision is given in bits; printed floats carry the matching digit count
    let bits = common.precision.or(cfg.precision).unwrap_or(40);
    if bits == 0 {
        bail!("--precision must be positive");
    }
    let _ = DIGITS.set(((bits as f64 * 2f64.log10()).round() as usize).clamp(3, 17));
    let out = match &cli.command {
        Command::VerifyNumberTheory(_) => cmd_verify_number_theory(&cfg),
        Command::Correlate(_) => cmd_correlate(&cfg, common),
        Command::Moments(_) => cmd_moments(&cfg),
        Command::Clt(_) => cmd_clt(&cfg),
        Command::Cluster(_) => cmd_cluster(&cfg, common),
        Command::Equidistribution(_) => cmd_equidistribution(&cfg, common),
    }?;
    emit(&out, common, &raw, cfg.separator.unwrap_or(','))?;
    Ok(if out.all_ok { 0 } else { 1 })
}

fn main() {
    match run() {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
