use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use eigdeloc::baseline::{
    default_band_params, dyadic_band_counts, h_func, limit_mass, q_quantile, sphere_subset_mass_simulation,
    MassSide,
};
use eigdeloc::experiments::{
    deloc_experiment, dist_tail, log_grid, normal_vector_experiment, opnorm_experiment, smin_tail, DelocConfig,
    DistTailConfig, NormalConfig, OpnormConfig, SminTailConfig, TailRun,
};
use eigdeloc::fmt::g17;
use eigdeloc::linalg::{eigen_decompose, parse_matrix, write_matrix};
use eigdeloc::randgen::{derive_stream, sample_matrix, sample_unit_sphere};
use eigdeloc::structure::{classify, compress_distance, lcd, levy_concentration, spread_set, CompressParams};
use eigdeloc::{Complex64, EntryDistribution, Error, Field, LcdQuery, MatrixEnsemble, RunReport};
use serde_json::{json, Value};

use crate::args::*;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Out = Result<(), Failure>;

pub fn dispatch(cmd: &Command) -> Out {
    match cmd {
        Command::Gen(a) => gen(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Deloc(a) => deloc(a),
        Command::SminTail(a) => smin(a),
        Command::DistTail(a) => dist(a),
        Command::NormalVector(a) => normal(a),
        Command::Lcd(a) => lcd_cmd(a),
        Command::Compress(a) => compress(a),
        Command::Levy(a) => levy(a),
        Command::Baseline(a) => baseline(a),
        Command::Quantile(a) => quantile(a),
        Command::Opnorm(a) => opnorm(a),
    }
}

fn emit(common: &Common, text: &str) -> Out {
    emit_to(common.out.as_deref(), text)
}

fn emit_to(path: Option<&Path>, text: &str) -> Out {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("--out {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_report(common: &Common, mut report: RunReport, start: Instant) -> Out {
    if common.timing {
        report.runtime_seconds = Some(start.elapsed().as_secs_f64());
    }
    emit(common, &(report.to_json() + "\n"))
}

fn json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json serializes") + "\n"
}

fn ensemble(e: &Ensemble) -> MatrixEnsemble {
    MatrixEnsemble::new(e.field, e.rows, e.cols, e.dist)
}

fn grid(g: &EpsGrid) -> Result<Vec<f64>, Failure> {
    if !g.eps.is_empty() {
        return Ok(g.eps.clone());
    }
    Ok(log_grid(g.eps_lo, g.eps_hi, g.eps_points)?)
}

fn vector(v: &VectorInput) -> Result<Vec<Complex64>, Failure> {
    if let Some(n) = v.flat {
        if n == 0 {
            return Err(Failure::Usage("--flat needs n >= 1".into()));
        }
        return Ok(vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n]);
    }
    if v.re.is_empty() {
        return Err(Failure::Usage("give the vector with --re (and --im) or --flat".into()));
    }
    if !v.im.is_empty() && v.im.len() != v.re.len() {
        return Err(Failure::Usage(format!(
            "--im has {} entries but --re has {}",
            v.im.len(),
            v.re.len()
        )));
    }
    Ok(v.re
        .iter()
        .enumerate()
        .map(|(i, &r)| Complex64::new(r, v.im.get(i).copied().unwrap_or(0.0)))
        .collect())
}

fn vector_json(x: &[Complex64]) -> Value {
    Value::Array(x.iter().map(|z| json!([z.re, z.im])).collect())
}

/// `# key=value` lines echoing a JSON config, nested keys joined by dots.
fn header_lines(experiment: &str, master_seed: u64, config: &Value) -> Vec<(String, String)> {
    let mut out = vec![
        ("experiment".to_string(), experiment.to_string()),
        ("master_seed".to_string(), master_seed.to_string()),
    ];
    flatten("", config, &mut out);
    out
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), parts.join(";")));
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => g17(n.as_f64().unwrap_or(f64::NAN)),
        other => other.to_string(),
    }
}

fn gen(a: &GenArgs) -> Out {
    let ens = ensemble(&a.ensemble);
    let m = sample_matrix(&ens, &derive_stream(a.common.seed, 0))?;
    let text = format!(
        "# master_seed={}\n# dist={}\n{}",
        a.common.seed,
        a.ensemble.dist.name(),
        write_matrix(&m, ens.field)
    );
    emit(&a.common, &text)
}

fn spectrum(a: &SpectrumArgs) -> Out {
    let mut text = String::from("# experiment=spectrum\n");
    let matrix = match &a.input {
        Some(p) => {
            let src = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("--input {}: {e}", p.display())))?;
            let (m, field) = parse_matrix(&src)?;
            let _ = writeln!(text, "# field={}", field.name());
            m
        }
        None => {
            let (Some(rows), Some(cols)) = (a.rows, a.cols) else {
                return Err(Failure::Usage("spectrum needs --input or both --rows and --cols".into()));
            };
            let _ = writeln!(text, "# field={}", a.field.name());
            let _ = writeln!(text, "# dist={}\n# master_seed={}", a.dist.name(), a.common.seed);
            let ens = MatrixEnsemble::new(a.field, rows, cols, a.dist);
            sample_matrix(&ens, &derive_stream(a.common.seed, 0))?
        }
    };
    let _ = writeln!(text, "# rows={}\n# cols={}\n# tol={}", matrix.rows(), matrix.cols(), g17(a.tol));
    let s = eigen_decompose(&matrix, a.tol)?;
    let _ = writeln!(text, "# norm={}", g17(s.norm));
    text.push_str("index,re,im,residual\n");
    for (i, p) in s.pairs.iter().enumerate() {
        let _ = writeln!(text, "{i},{},{},{}", g17(p.value.re), g17(p.value.im), g17(p.residual));
    }
    emit(&a.common, &text)
}

fn deloc(a: &DelocArgs) -> Out {
    let start = Instant::now();
    let m_list = if a.m.is_empty() { vec![a.n.div_ceil(10).max(1)] } else { a.m.clone() };
    let mut cfg = DelocConfig::new(a.n, a.field, a.dist, m_list, a.trials);
    cfg.scale = a.scale;
    cfg.eig_tol = a.eig_tol;
    let report = deloc_experiment(&cfg, a.common.seed)?;
    emit_report(&a.common, report, start)
}

fn emit_tail(common: &Common, report_path: Option<&Path>, run: TailRun, start: Instant) -> Out {
    let TailRun { curve, mut report } = run;
    if common.timing {
        report.runtime_seconds = Some(start.elapsed().as_secs_f64());
    }
    let mut header = header_lines(&report.experiment, report.master_seed, &report.config);
    if let Some(s) = &report.slope {
        header.push(("slope".into(), g17(s.slope)));
        header.push(("slope_points".into(), s.points.to_string()));
    }
    emit(common, &curve.to_csv(&header))?;
    if let Some(p) = report_path {
        emit_to(Some(p), &(report.to_json() + "\n"))?;
    }
    Ok(())
}

fn smin(a: &SminTailArgs) -> Out {
    let start = Instant::now();
    let cfg = SminTailConfig {
        ensemble: ensemble(&a.ensemble),
        lambda: Complex64::new(a.lambda_re, a.lambda_im),
        big_m: a.big_m,
        eps_grid: grid(&a.grid)?,
        trials: a.trials,
    };
    let run = smin_tail(&cfg, a.common.seed)?;
    emit_tail(&a.common, a.report.as_deref(), run, start)
}

fn dist(a: &DistTailArgs) -> Out {
    let start = Instant::now();
    let cfg = DistTailConfig {
        big_n: a.big_n,
        m: a.m,
        kind: a.dist,
        field: a.field,
        eps_grid: grid(&a.grid)?,
        trials: a.trials,
    };
    let run = dist_tail(&cfg, a.common.seed)?;
    emit_tail(&a.common, a.report.as_deref(), run, start)
}

fn normal(a: &NormalArgs) -> Out {
    let start = Instant::now();
    let cfg = NormalConfig {
        n: a.n,
        field: a.field,
        kind: a.dist,
        delta_list: a.delta.clone(),
        trials: a.trials,
    };
    let report = normal_vector_experiment(&cfg, a.common.seed)?;
    emit_report(&a.common, report, start)
}

fn opnorm(a: &OpnormArgs) -> Out {
    let start = Instant::now();
    let cfg = OpnormConfig {
        n: a.n,
        field: a.field,
        kind: a.dist,
        trials: a.trials,
        tol: a.tol,
    };
    let report = opnorm_experiment(&cfg, a.common.seed)?;
    emit_report(&a.common, report, start)
}

fn lcd_cmd(a: &LcdArgs) -> Out {
    let x = vector(&a.vector)?;
    let field = a.field.unwrap_or(if a.vector.im.is_empty() { Field::Real } else { Field::Complex });
    let q = LcdQuery {
        alpha: a.alpha,
        gamma: a.gamma,
        r_max: a.r_max,
        grid_step: a.grid_step,
        refine_iters: a.refine_iters,
        ..LcdQuery::new(x.clone(), field)
    };
    let r = lcd(&q)?;
    let out = json!({
        "experiment": "lcd",
        "config": {
            "vector": vector_json(&x),
            "field": field.name(),
            "alpha": a.alpha,
            "gamma": a.gamma,
            "r_max": a.r_max,
            "grid_step": a.grid_step,
            "refine_iters": a.refine_iters,
        },
        "master_seed": a.common.seed,
        "result": r.to_json(),
    });
    emit(&a.common, &json_text(&out))
}

fn compress(a: &CompressArgs) -> Out {
    let x = vector(&a.vector)?;
    let (class, dist) = classify(&x, CompressParams::new(a.delta, a.rho)?);
    let spread = spread_set(&x, a.nu2, a.nu3)?;
    let out = json!({
        "experiment": "compress",
        "config": {
            "vector": vector_json(&x),
            "delta": a.delta,
            "rho": a.rho,
            "nu2": a.nu2,
            "nu3": a.nu3,
        },
        "master_seed": a.common.seed,
        "class": class,
        "distance": dist,
        "sparse_distance": compress_distance(&x, a.delta),
        "spread": spread,
    });
    emit(&a.common, &json_text(&out))
}

fn levy(a: &LevyArgs) -> Out {
    let start = Instant::now();
    let coeffs = vector(&a.vector)?;
    let law = EntryDistribution::new(a.dist);
    let planar = a.field == Field::Complex || coeffs.iter().any(|z| z.im != 0.0);
    let est = levy_concentration(
        |rng| {
            let mut s = Complex64::new(0.0, 0.0);
            for c in &coeffs {
                let xi = match a.field {
                    Field::Real => Complex64::new(law.draw(rng), 0.0),
                    Field::Complex => Complex64::new(law.draw(rng), law.draw(rng)),
                };
                s += c * xi;
            }
            if planar {
                vec![s.re, s.im]
            } else {
                vec![s.re]
            }
        },
        a.eps,
        a.trials,
        &derive_stream(a.common.seed, 0),
    )?;
    let config = json!({
        "vector": vector_json(&coeffs),
        "field": a.field.name(),
        "dist": a.dist.name(),
        "eps": a.eps,
        "trials": a.trials,
    });
    let mut metrics = BTreeMap::new();
    metrics.insert("estimate".to_string(), json!(est.estimate));
    metrics.insert("upper_conf".to_string(), json!(est.upper_conf));
    metrics.insert("dimension".to_string(), json!(if planar { 2 } else { 1 }));
    let report = RunReport {
        experiment: "levy".into(),
        config,
        master_seed: a.common.seed,
        metrics,
        slope: None,
        failures: 0,
        runtime_seconds: None,
    };
    emit_report(&a.common, report, start)
}

fn baseline(a: &BaselineArgs) -> Out {
    let start = Instant::now();
    if a.n == 0 {
        return Err(Failure::Usage("--n must be positive".into()));
    }
    let stream = derive_stream(a.common.seed, 0);
    let summary = sphere_subset_mass_simulation(a.n, a.m, a.field, a.trials, &stream)?;
    let delta = a.m as f64 / a.n as f64;
    let mut metrics = BTreeMap::new();
    if let Value::Object(map) = serde_json::to_value(&summary).expect("summary serializes") {
        for (k, v) in map {
            if !matches!(k.as_str(), "n" | "m" | "field" | "trials") {
                metrics.insert(k, v);
            }
        }
    }
    metrics.insert("limit_min".into(), json!(limit_mass(delta, MassSide::Min)?));
    metrics.insert("limit_max".into(), json!(limit_mass(delta, MassSide::Max)?));
    if let Ok((bd, bands)) = default_band_params(a.n, a.m) {
        let v = sample_unit_sphere(a.n, a.field, &stream.child(a.trials as u64))?;
        metrics.insert("band_delta".into(), json!(bd));
        metrics.insert("band_counts".into(), json!(dyadic_band_counts(&v, bd, bands, a.field)?));
    }
    let report = RunReport {
        experiment: "baseline".into(),
        config: json!({ "n": a.n, "m": a.m, "field": a.field.name(), "trials": a.trials }),
        master_seed: a.common.seed,
        metrics,
        slope: None,
        failures: 0,
        runtime_seconds: None,
    };
    emit_report(&a.common, report, start)
}

fn quantile(a: &QuantileArgs) -> Out {
    let lo = limit_mass(a.delta, MassSide::Min)?;
    let hi = limit_mass(a.delta, MassSide::Max)?;
    let mut text = format!("# delta={}\nmin_mass {}\nmax_mass {}\n", g17(a.delta), g17(lo), g17(hi));
    for &s in &a.s {
        let _ = writeln!(text, "Q({}) {}\nH({}) {}", g17(s), g17(q_quantile(s)?), g17(s), g17(h_func(s)?));
    }
    emit(&a.common, &text)
}
