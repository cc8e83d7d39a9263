use std::fs;
use std::io::Write;

use sdoflab_core::channel::EveMode;
use sdoflab_core::sim::grid_means;
use sdoflab_core::theory::BOUNDARY;
use sdoflab_core::verify::broken_sum_sdof;
use sdoflab_core::{
    allocate_jamming, classify, design as make_design, estimate_dof, run_verify, sum_sdof, sweep,
    upper_bounds, AntennaConfig, DesignReport, RunConfig, VerifyOptions,
};
use serde_json::json;

use crate::output::{samples_csv, write_file, write_stream, Summary};
use crate::{CliError, DesignArgs, ModeArg, SdofArgs, SimulateArgs, VerifyArgs, EXIT_OK, EXIT_VERIFY_FAILED};

pub fn sdof(args: &SdofArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let c = args.antennas.config()?;
    let d = sum_sdof(&c);
    let label = classify(&c);
    let (b1, b2, b3) = upper_bounds(&c);
    let alloc = allocate_jamming(&c);
    let text = if args.json {
        let v = json!({
            "config": c,
            "sdof": d,
            "sdof_value": d.to_f64(),
            "regime": label.regime.to_string(),
            "matched_condition": label.matched_condition,
            "upper_bounds": {
                "m_minus_ne": b1,
                "half_max_sum_minus_ne": b2,
                "n": b3,
            },
            "allocation": alloc,
            "allocation_summary": alloc.summary(),
        });
        format!("{}\n", serde_json::to_string_pretty(&v).expect("json value"))
    } else {
        let condition = if label.matched_condition == BOUNDARY {
            "on a case boundary".to_string()
        } else {
            label.matched_condition.clone()
        };
        format!(
            "D_s = {d} ({}), regime {}\n\
             condition: {condition}\n\
             upper bounds: M - N_E = {b1}, (max(M1,N) + max(M2,N) - N_E)/2 = {b2}, N = {b3}\n\
             allocation: {}\n",
            d.to_f64(),
            label.regime,
            alloc.summary()
        )
    };
    write_stream(out, &text)?;
    Ok(EXIT_OK)
}

pub fn design(args: &DesignArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if let Some(path) = &args.recheck {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::io(&format!("cannot read {}", path.display()), e))?;
        let report = DesignReport::from_json(&text)?;
        let re = report.recheck()?;
        let v = json!({
            "passed": re.passed,
            "agrees_with_recorded": re.agrees,
            "diagnostics": re.diagnostics,
            "checks": re.checks,
        });
        write_stream(
            out,
            &format!("{}\n", serde_json::to_string_pretty(&v).expect("json value")),
        )?;
        return Ok(if re.passed && re.agrees {
            EXIT_OK
        } else {
            EXIT_VERIFY_FAILED
        });
    }
    let (Some(m1), Some(m2), Some(n), Some(ne)) = (args.m1, args.m2, args.n, args.ne) else {
        return Err(CliError::usage(
            "design needs --m1 --m2 --n --ne (or --recheck FILE)",
        ));
    };
    let c = AntennaConfig::new(m1, m2, n, ne)?;
    let report = make_design(&c, args.seed, Default::default())?;
    let text = format!("{}\n", report.to_json());
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => write_stream(out, &text)?,
    }
    Ok(if report.passed {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

/// Builds the run configuration from an optional file plus flag overrides.
pub fn run_config(args: &SimulateArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::io(&format!("cannot read {}", path.display()), e))?;
            RunConfig::from_json(&text)?
        }
        None => {
            let (Some(m1), Some(m2), Some(n), Some(ne)) = (args.m1, args.m2, args.n, args.ne) else {
                return Err(CliError::usage(
                    "simulate needs --config FILE or all of --m1 --m2 --n --ne",
                ));
            };
            RunConfig::new(AntennaConfig { m1, m2, n, n_e: ne })
        }
    };
    let c = &mut cfg.config;
    c.m1 = args.m1.unwrap_or(c.m1);
    c.m2 = args.m2.unwrap_or(c.m2);
    c.n = args.n.unwrap_or(c.n);
    c.n_e = args.ne.unwrap_or(c.n_e);
    cfg.trials = args.trials.unwrap_or(cfg.trials);
    cfg.master_seed = args.seed.unwrap_or(cfg.master_seed);
    cfg.p_grid.start_db = args.start_db.unwrap_or(cfg.p_grid.start_db);
    cfg.p_grid.stop_db = args.stop_db.unwrap_or(cfg.p_grid.stop_db);
    cfg.p_grid.step_db = args.step_db.unwrap_or(cfg.p_grid.step_db);
    if args.window_lo.is_some() || args.window_hi.is_some() {
        let (lo, hi) = cfg.window();
        cfg.window_db = Some((args.window_lo.unwrap_or(lo), args.window_hi.unwrap_or(hi)));
    }
    cfg.alpha = args.alpha.unwrap_or(cfg.alpha);
    cfg.sigma2 = args.sigma2.unwrap_or(cfg.sigma2);
    if let Some(mode) = args.mode {
        cfg.mode = match mode {
            ModeArg::Static => EveMode::StaticEve,
            ModeArg::TimeVarying => EveMode::TimeVaryingEve,
        };
    }
    cfg.eve_uses = args.eve_uses.unwrap_or(cfg.eve_uses);
    cfg.slope_tolerance = args.tolerance.unwrap_or(cfg.slope_tolerance);
    if args.csv.is_some() {
        cfg.output.csv = args.csv.clone();
    }
    if args.summary.is_some() {
        cfg.output.summary = args.summary.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn simulate(args: &SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = run_config(args)?;
    let samples = sweep(&cfg.sweep_config())?;
    let est = estimate_dof(&samples, cfg.window())?;
    let alloc = allocate_jamming(&cfg.config);
    let summary = Summary::new(&cfg, &est, &grid_means(&samples), alloc.sum_streams());
    let csv = samples_csv(&samples);
    let summary_text = format!(
        "{}\n",
        serde_json::to_string_pretty(&summary).expect("summary json")
    );

    match &cfg.output.csv {
        Some(path) => write_file(path, &csv)?,
        None => write_stream(out, &csv)?,
    }
    match (&cfg.output.summary, &cfg.output.csv) {
        (Some(path), _) => write_file(path, &summary_text)?,
        (None, Some(_)) => write_stream(out, &summary_text)?,
        (None, None) => write_stream(err, &summary_text)?,
    }
    Ok(EXIT_OK)
}

pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if args.max_antennas == 0 || args.seeds == 0 {
        return Err(CliError::usage("--max-antennas and --seeds must be at least 1"));
    }
    let mut opts = VerifyOptions {
        max_antennas: args.max_antennas,
        seeds: args.seeds,
        full: args.full,
        ..Default::default()
    };
    if args.inject_formula_error {
        opts.formula = broken_sum_sdof;
    }
    let report = run_verify(&opts)?;
    let v = json!({
        "all_passed": report.all_passed(),
        "max_antennas": report.max_antennas,
        "seeds": report.seeds,
        "checks": report.checks,
    });
    let text = format!("{}\n", serde_json::to_string_pretty(&v).expect("json value"));
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => write_stream(out, &text)?,
    }
    Ok(if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}
