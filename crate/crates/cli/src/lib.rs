//! Subcommand dispatch for the `pslab` binary.
//!
//! [`Cli`] is the raw command line; [`RunConfig::from_cli`] validates it into
//! typed parameters, and [`run`] executes one configuration and reports an exit
//! code: 0 on success, 1 for invalid input, 2 when an internal invariant fails
//! (the violation record is printed as JSON).

pub mod table;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use pslab::equations::{
    admissible_exponents, nontrivial_count, nontrivial_count_weighted, solution_count, thresholds, LinearForm,
};
use pslab::experiments::{colour_scan, greedy_3ap_free, ColouringScheme};
use pslab::expsums::{audit_bounds, reconstruct_difference};
use pslab::ps_core::{members, nu_vector, ps_indicator};
use pslab::spectral::{decay_exponent_fit, energy_exponent_fit, moment_mean, restriction_profile};
use pslab::{equations, Error, FrequencyGrid, PSParams, Weights};
use serde_json::json;

use table::{Cell, Table};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "pslab", version, about = "Experiments on Piatetski-Shapiro sets")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, env = "PSLAB_THREADS", global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// List PS_c(N), optionally with the weights ν.
    Gen {
        #[arg(long)]
        c: f64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        weights: bool,
    },
    /// Scan sup |ν̂ - 1̂_[N]| over N and fit its growth exponent.
    Decay {
        #[arg(long)]
        c: f64,
        #[arg(long = "Nmin")]
        n_min: u64,
        #[arg(long = "Nmax")]
        n_max: u64,
        /// Sample sizes per doubling of N.
        #[arg(long, default_value_t = 1)]
        octaves: u32,
        /// Grid oversampling, M = K(N+1).
        #[arg(long = "K", default_value_t = 4)]
        k: u64,
    },
    /// Grid mean of |f̂|^t for f = ν or the plain indicator.
    Moment {
        #[arg(long)]
        c: f64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        t: f64,
        /// Grid size (default: exact for integer t, else 4(N+1)).
        #[arg(long = "M")]
        m: Option<u64>,
        /// Use the 0/1 indicator instead of ν.
        #[arg(long)]
        unweighted: bool,
    },
    /// Additive energy of PS_c(N) over a range of N, with the fitted exponent.
    Energy {
        #[arg(long)]
        c: f64,
        #[arg(long = "Nmin")]
        n_min: u64,
        #[arg(long = "Nmax")]
        n_max: u64,
        #[arg(long, default_value_t = 1)]
        octaves: u32,
    },
    /// Large-spectrum measures of ν against δ^{-t}/N.
    Spectrum {
        #[arg(long)]
        c: f64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        t: f64,
        /// Comma-separated values of δ in (0, 1].
        #[arg(long)]
        deltas: String,
        #[arg(long = "K", default_value_t = 4)]
        k: u64,
    },
    /// Exponential-sum audit table and the dyadic reconstruction check.
    Audit {
        #[arg(long)]
        c: f64,
        #[arg(long = "Pmax")]
        p_max: u64,
        #[arg(long = "mmax")]
        m_max: i64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
    },
    /// Count solutions of Σ cᵢxᵢ = 0 in PS_c(N).
    Solve {
        #[arg(long)]
        c: f64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        /// Weight solutions by ν.
        #[arg(long)]
        weighted: bool,
        /// Count only pairwise-distinct solutions.
        #[arg(long)]
        nontrivial: bool,
    },
    /// The exponent thresholds c*(s), c†(s).
    Thresholds {
        #[arg(long)]
        s: u32,
    },
    /// A witness (χ, t₀, t) for the exponent conditions, if one exists.
    Admissible {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        c: f64,
    },
    /// Search colourings of PS_c(N) for monochromatic nontrivial solutions.
    Colour {
        #[arg(long)]
        c: f64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        /// Comma-separated schemes: random, residue, dyadic_band.
        #[arg(long, default_value = "random")]
        scheme: String,
        /// Comma-separated colour counts.
        #[arg(long, default_value = "2")]
        r: String,
        #[arg(long, default_value_t = 1)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Add a wall-time column (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Greedy 3AP-free subset of PS_c(N) and its weighted density check.
    Density {
        #[arg(long)]
        c: f64,
        #[arg(long = "N")]
        n: u64,
    },
}

/// A validated command.
#[derive(Clone, Debug)]
pub enum Command {
    Gen { params: PSParams, weights: bool },
    Decay { c: f64, ns: Vec<u64>, k: u64 },
    Moment { params: PSParams, t: f64, m: Option<u64>, unweighted: bool },
    Energy { c: f64, ns: Vec<u64> },
    Spectrum { params: PSParams, t: f64, deltas: Vec<f64>, k: u64 },
    Audit { params: PSParams, ps: Vec<f64>, m_max: i64, alpha: f64 },
    Solve { params: PSParams, form: LinearForm, weighted: bool, nontrivial: bool },
    Thresholds { s: u32 },
    Admissible { s: u32, c: f64 },
    Colour { params: PSParams, form: LinearForm, schemes: Vec<ColouringScheme>, rs: Vec<u32>, trials: u32, seed: u64, timing: bool },
    Density { params: PSParams },
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, Error> {
        if cli.threads == Some(0) {
            return Err(invalid("--threads must be at least 1"));
        }
        let command = match cli.command {
            Cmd::Gen { c, n, weights } => Command::Gen { params: PSParams::new(c, n)?, weights },
            Cmd::Decay { c, n_min, n_max, octaves, k } => {
                PSParams::new(c, 1)?;
                if k < 2 {
                    return Err(invalid("--K must be at least 2"));
                }
                Command::Decay { c, ns: n_range(n_min, n_max, octaves)?, k }
            }
            Cmd::Moment { c, n, t, m, unweighted } => {
                if !(t >= 1.0 && t.is_finite()) {
                    return Err(invalid("--t must be at least 1"));
                }
                Command::Moment { params: PSParams::new(c, n)?, t, m, unweighted }
            }
            Cmd::Energy { c, n_min, n_max, octaves } => {
                PSParams::new(c, 1)?;
                Command::Energy { c, ns: n_range(n_min, n_max, octaves)? }
            }
            Cmd::Spectrum { c, n, t, deltas, k } => {
                let deltas = parse_list::<f64>(&deltas, "--deltas")?;
                if deltas.iter().any(|d| !(*d > 0.0 && *d <= 1.0)) {
                    return Err(invalid("every δ must lie in (0, 1]"));
                }
                if k == 0 {
                    return Err(invalid("--K must be at least 1"));
                }
                Command::Spectrum { params: PSParams::new(c, n)?, t, deltas, k }
            }
            Cmd::Audit { c, p_max, m_max, alpha } => {
                if p_max < 1 {
                    return Err(invalid("--Pmax must be at least 1"));
                }
                if m_max < 0 {
                    return Err(invalid("--mmax must be nonnegative"));
                }
                if !alpha.is_finite() {
                    return Err(invalid("--alpha must be finite"));
                }
                // P = Pmax, Pmax/10, … down to 10
                let mut ps = vec![p_max as f64];
                let mut p = p_max / 10;
                while p >= 10 {
                    ps.push(p as f64);
                    p /= 10;
                }
                ps.reverse();
                Command::Audit { params: PSParams::new(c, 2 * p_max)?, ps, m_max, alpha }
            }
            Cmd::Solve { c, n, coeffs, weighted, nontrivial } => {
                let form: LinearForm = coeffs.parse()?;
                if nontrivial && form.s() > equations::MAX_DISTINCT_ARITY {
                    return Err(invalid("--nontrivial supports at most 5 coefficients"));
                }
                Command::Solve { params: PSParams::new(c, n)?, form, weighted, nontrivial }
            }
            Cmd::Thresholds { s } => {
                thresholds(s)?;
                Command::Thresholds { s }
            }
            Cmd::Admissible { s, c } => {
                if s < 3 {
                    return Err(invalid("--s must be at least 3"));
                }
                if !c.is_finite() {
                    return Err(invalid("--c must be finite"));
                }
                Command::Admissible { s, c }
            }
            Cmd::Colour { c, n, coeffs, scheme, r, trials, seed, timing } => {
                let schemes = scheme
                    .split(',')
                    .map(|s| s.trim().parse::<ColouringScheme>())
                    .collect::<Result<Vec<_>, _>>()?;
                let rs = parse_list::<u32>(&r, "--r")?;
                if rs.contains(&0) {
                    return Err(invalid("--r values must be at least 1"));
                }
                if trials == 0 {
                    return Err(invalid("--trials must be at least 1"));
                }
                Command::Colour { params: PSParams::new(c, n)?, form: coeffs.parse()?, schemes, rs, trials, seed, timing }
            }
            Cmd::Density { c, n } => Command::Density { params: PSParams::new(c, n)? },
        };
        Ok(RunConfig { command, format: cli.format, out: cli.out, threads: cli.threads })
    }
}

fn invalid(msg: &str) -> Error {
    Error::InvalidParameter(msg.to_string())
}

fn parse_list<T: std::str::FromStr>(s: &str, flag: &str) -> Result<Vec<T>, Error> {
    let items = s
        .split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| Error::InvalidParameter(format!("bad value {t:?} in {flag}"))))
        .collect::<Result<Vec<T>, Error>>()?;
    if items.is_empty() {
        return Err(Error::InvalidParameter(format!("{flag} is empty")));
    }
    Ok(items)
}

/// `N_k = round(Nmin·2^{k/steps})` up to `Nmax`, deduplicated.
fn n_range(n_min: u64, n_max: u64, steps: u32) -> Result<Vec<u64>, Error> {
    if n_min < 1 || n_max < n_min {
        return Err(invalid("need 1 ≤ Nmin ≤ Nmax"));
    }
    if steps == 0 {
        return Err(invalid("--octaves must be at least 1"));
    }
    let mut ns = Vec::new();
    for k in 0.. {
        let n = (n_min as f64 * 2f64.powf(f64::from(k) / f64::from(steps))).round() as u64;
        if n > n_max {
            break;
        }
        if ns.last() != Some(&n) {
            ns.push(n);
        }
    }
    Ok(ns)
}

/// Computes the table for one configuration.
pub fn execute(command: &Command) -> Result<Table, Error> {
    match command {
        Command::Gen { params, weights } => {
            let mut t = Table::new(if *weights { vec!["n", "nu"] } else { vec!["n"] });
            if *weights {
                for (n, w) in nu_vector::<f64>(params)?.iter() {
                    t.push(vec![n.into(), w.into()]);
                }
            } else {
                for n in members(params)? {
                    t.push(vec![n.into()]);
                }
            }
            Ok(t)
        }
        Command::Decay { c, ns, k } => {
            let scan = decay_exponent_fit(*c, ns, *k)?;
            let mut t = Table::new(vec!["N", "M", "decay", "argmax_alpha", "l1", "fit_slope", "target_slope", "r_squared"]);
            for s in &scan.samples {
                t.push(vec![
                    s.n.into(),
                    s.m.into(),
                    s.value.into(),
                    s.argmax_alpha().into(),
                    s.l1.into(),
                    scan.fit.slope.into(),
                    scan.target_slope.into(),
                    scan.fit.r_squared.into(),
                ]);
            }
            Ok(t)
        }
        Command::Moment { params, t, m, unweighted } => {
            let f: Weights = if *unweighted { ps_indicator(params)? } else { nu_vector(params)? };
            let grid = match m {
                Some(m) => FrequencyGrid::new(*m, params.n())?,
                None if t.fract() == 0.0 => FrequencyGrid::exact_for_moment(params.n(), *t as u64)?,
                None => FrequencyGrid::oversampled(params.n(), 4)?,
            };
            let value = moment_mean(&f, *t, &grid)?;
            let mut out = Table::new(vec!["c", "N", "M", "t", "weight", "moment"]);
            out.push(vec![
                params.c().into(),
                params.n().into(),
                grid.m().into(),
                (*t).into(),
                if *unweighted { "indicator" } else { "nu" }.into(),
                value.into(),
            ]);
            Ok(out)
        }
        Command::Energy { c, ns } => {
            let scan = energy_exponent_fit(*c, ns)?;
            let mut t = Table::new(vec!["N", "members", "energy", "fit_slope", "target_slope", "r_squared"]);
            for &(n, size, e) in &scan.samples {
                t.push(vec![
                    n.into(),
                    size.into(),
                    e.into(),
                    scan.fit.slope.into(),
                    scan.target_slope.into(),
                    scan.fit.r_squared.into(),
                ]);
            }
            Ok(t)
        }
        Command::Spectrum { params, t, deltas, k } => {
            let nu = nu_vector::<f64>(params)?;
            let grid = FrequencyGrid::oversampled(params.n(), *k)?;
            let prof = restriction_profile(&nu, *t, deltas, &grid)?;
            let mut out = Table::new(vec!["delta", "measure", "scaled", "fitted_c"]);
            for r in &prof.rows {
                out.push(vec![r.delta.into(), r.measure.into(), r.scaled.into(), prof.fitted_c.into()]);
            }
            Ok(out)
        }
        Command::Audit { params, ps, m_max, alpha } => {
            let table = audit_bounds(params, ps, *m_max, &[*alpha])?;
            let mut out = Table::new(vec!["family", "P", "m", "alpha", "value", "bound", "ratio", "c_fit"]);
            for r in &table.rows {
                out.push(vec![
                    r.family.name().into(),
                    r.p.into(),
                    Cell::Int(r.m.into()),
                    r.alpha.into(),
                    r.value.into(),
                    r.bound.into(),
                    r.ratio.into(),
                    table.c_fit(r.family).into(),
                ]);
            }
            let d = reconstruct_difference(*alpha, params)?;
            let residual_ratio = d.residual / d.residual_bound;
            out.push(vec![
                "reconstruction".into(),
                (params.n() as f64).into(),
                Cell::Int(0),
                (*alpha).into(),
                d.residual.into(),
                d.residual_bound.into(),
                residual_ratio.into(),
                residual_ratio.into(),
            ]);
            Ok(out)
        }
        Command::Solve { params, form, weighted, nontrivial } => {
            let mut out = Table::new(vec!["count"]);
            let cell: Cell = match (weighted, nontrivial) {
                (false, true) => nontrivial_count(form, &members(params)?)?.into(),
                (true, true) => nontrivial_count_weighted(form, &nu_vector::<f64>(params)?)?.into(),
                (false, false) => {
                    let f = ps_indicator::<f64>(params)?;
                    let v = solution_count(form, &f, form.degree_bound(params.n())? + 1)?;
                    Cell::Int(v.round() as i128)
                }
                (true, false) => {
                    let f = nu_vector::<f64>(params)?;
                    solution_count(form, &f, form.degree_bound(params.n())? + 1)?.into()
                }
            };
            out.push(vec![cell]);
            Ok(out)
        }
        Command::Thresholds { s } => {
            let th = thresholds(*s)?;
            let mut out = Table::new(vec!["s", "c_star", "c_dagger"]);
            out.push(vec![(*s).into(), th.c_star.to_string().into(), th.c_dagger.to_string().into()]);
            Ok(out)
        }
        Command::Admissible { s, c } => {
            let w = admissible_exponents(*s, *c);
            let mut out = Table::new(vec!["s", "c", "exists", "chi", "t0", "t", "route"]);
            out.push(vec![
                (*s).into(),
                (*c).into(),
                w.is_some().into(),
                w.map(|w| w.chi).into(),
                w.map(|w| w.t0).into(),
                w.map(|w| w.t).into(),
                w.map(|w| w.route.name()).into(),
            ]);
            Ok(out)
        }
        Command::Colour { params, form, schemes, rs, trials, seed, timing } => {
            let rows = colour_scan(form, params, schemes, rs, *trials, *seed)?;
            let mut header = vec!["scheme", "r", "trial", "seed", "found", "witness", "colour"];
            if *timing {
                header.push("wall_ms");
            }
            let mut out = Table::new(header);
            for r in rows {
                let witness = r.witness.as_ref().map(|w| w.x.iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
                let mut row = vec![
                    r.scheme.name().into(),
                    r.r.into(),
                    r.trial.into(),
                    r.seed.into(),
                    r.found().into(),
                    witness.into(),
                    r.witness.as_ref().map(|w| w.colour).into(),
                ];
                if *timing {
                    row.push((r.elapsed.as_secs_f64() * 1e3).into());
                }
                out.push(row);
            }
            Ok(out)
        }
        Command::Density { params } => {
            let g = greedy_3ap_free(params)?;
            let check = equations::density_weight_check(&g.set, params)?;
            let total = members(params)?.len();
            let mut out = Table::new(vec![
                "c",
                "N",
                "members",
                "greedy_size",
                "ratio",
                "comparator",
                "certified_3ap",
                "weighted_sum",
                "lower_bound",
                "ok",
            ]);
            out.push(vec![
                params.c().into(),
                params.n().into(),
                total.into(),
                g.size.into(),
                g.ratio.into(),
                g.comparator.into(),
                g.certified_count.into(),
                check.weighted_sum.into(),
                check.lower_bound.into(),
                check.ok.into(),
            ]);
            Ok(out)
        }
    }
}

pub fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

/// Exit code for an error: 2 for broken invariants, 1 for everything the caller can fix.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Violation(_) | Error::Numerical(_) => 2,
        _ => 1,
    }
}

/// JSON record for an error that maps to exit code 2.
pub fn violation_json(err: &Error) -> String {
    match err {
        Error::Violation(v) => {
            let values: serde_json::Map<String, serde_json::Value> =
                v.values.iter().map(|(k, x)| (k.clone(), json!(x))).collect();
            json!({"violation": v.check, "message": v.message, "values": values}).to_string()
        }
        other => json!({"violation": "numerical", "message": other.to_string()}).to_string(),
    }
}

/// Runs one configuration, writing data to `--out` or standard output and
/// diagnostics to standard error. Returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    let result = match config.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&config.command)),
            Err(e) => Err(Error::Resource(e.to_string())),
        },
        None => execute(&config.command),
    };
    match result {
        Ok(table) => {
            let text = render(&table, config.format);
            let written = match &config.out {
                Some(path) => fs::write(path, text),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: cannot write output: {e}");
                    1
                }
            }
        }
        Err(e) => {
            let code = exit_code(&e);
            if code == 2 {
                println!("{}", violation_json(&e));
            }
            eprintln!("error: {e}");
            code
        }
    }
}
