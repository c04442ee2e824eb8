use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use ddelta::charzeros::{find_zeros, Rect};
use ddelta::config::{Config, Format};
use ddelta::currents::{pv_pair, residue_pair, Bump, CurrentOptions};
use ddelta::division::ideal_member;
use ddelta::hefer::{growth_certificate, hefer_growth_check, hefer_pair_n2, pair_identity, HeferGrid};
use ddelta::hring::{h_bezout, h_divides, h_gcd};
use ddelta::json::{FromJson, ToJson};
use ddelta::matsmith::smith;
use ddelta::parse::{parse_element, parse_matrix, parse_operator, Parsed};
use ddelta::synthesis::{
    method_of_steps, solution_basis_single, solution_basis_system, sort_basis, spectral_project, ExpSolution, Mode,
    Trajectory, DEFAULT_RESIDUAL, DEFAULT_STEP,
};
use ddelta::{Error, HElement, Result};

#[derive(Parser)]
#[command(name = "ddelta", version, about = "Exact and numerical tools for differential-difference operators")]
struct Cli {
    /// Tolerance for numerical steps.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Rectangle re_min,re_max,im_min,im_max.
    #[arg(long, global = true, allow_hyphen_values = true)]
    rect: Option<String>,
    #[arg(long, global = true, value_parser = ["json", "text"])]
    format: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct CurrentArgs {
    /// Operator f, a single element.
    f: String,
    /// Bump radius around the default center 0.
    #[arg(long)]
    support: Option<f64>,
    /// Test function as JSON {center, radius, poly}.
    #[arg(long)]
    bump: Option<String>,
    /// Comma separated λ schedule.
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and normalize an element or matrix.
    Normalize { expr: String },
    /// Decide whether a divides b and give the quotient.
    Divides { a: String, b: String },
    Gcd { a: String, b: String },
    Bezout { a: String, b: String },
    /// Smith form with its step transcript.
    Smith { matrix: String },
    /// Zeros of q* in --rect.
    Zeros { q: String },
    /// Exponential-polynomial solutions with frequencies in --rect.
    Solve { op: String },
    /// Time-domain integration of q y = 0 by the method of steps.
    Simulate {
        q: String,
        /// Initial data as ExpSolution JSON; defaults to y = 1.
        #[arg(long)]
        init: Option<String>,
        #[arg(long, default_value_t = 8.0)]
        horizon: f64,
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
        /// Emit x,re,im lines instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Least-squares projection of a trajectory onto solution modes.
    Project {
        q: String,
        /// Trajectory JSON file; simulated from seeded random data when absent.
        #[arg(long)]
        trajectory: Option<std::path::PathBuf>,
        /// Number of basis functions used, lowest frequencies first.
        #[arg(long)]
        modes: Option<usize>,
        #[arg(long, default_value_t = 8.0)]
        horizon: f64,
    },
    /// Principal value current paired with a bump.
    Pv(CurrentArgs),
    /// Residue current paired with a bump.
    Residue(CurrentArgs),
    /// Hefer pair for n = 2 and the identity transcript.
    Hefer {
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
    },
    /// Growth certificate of the Hefer quotient of q.
    Growth { q: String },
    /// Ideal membership of h in the ideal generated by --gens.
    Member {
        #[arg(long)]
        h: String,
        /// Generators separated by ';'.
        #[arg(long)]
        gens: String,
    },
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad {what} entry {x:?}"))))
        .collect()
}

fn config(cli: &Cli) -> Result<Config> {
    let mut c = Config::from_env()?;
    if let Some(t) = cli.tol {
        c.tol = t;
    }
    if let Some(r) = &cli.rect {
        let v = parse_list(r, "rect")?;
        if v.len() != 4 {
            return Err(Error::Config("rect takes four numbers".into()));
        }
        c.rect = Rect::new(v[0], v[1], v[2], v[3])?;
    }
    if let Some(f) = &cli.format {
        c.format = if f == "text" { Format::Text } else { Format::Json };
    }
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    c.validate()?;
    Ok(c)
}

fn element_json(h: &HElement) -> Value {
    h.to_json()
}

fn single(text: &str) -> Result<HElement> {
    parse_element(text)
}

fn current(a: &CurrentArgs, cfg: &Config, residue: bool) -> Result<Value> {
    let f = single(&a.f)?;
    let bump = match (&a.bump, a.support) {
        (Some(b), _) => Bump::from_json_str(b)?,
        (None, Some(r)) => Bump::new(Complex64::new(0.0, 0.0), r, vec![])?,
        (None, None) => Bump::new(Complex64::new(0.0, 0.0), 9.0, vec![])?,
    };
    let opts = CurrentOptions {
        lambdas: match &a.lambda {
            Some(l) => parse_list(l, "lambda")?,
            None => cfg.lambda_schedule.clone(),
        },
        grid: a.grid.unwrap_or(cfg.grid),
        ..CurrentOptions::default()
    };
    let e = if residue { residue_pair(&f, &bump, &opts)? } else { pv_pair(&f, &bump, &opts)? };
    Ok(json!({"f": f.to_expr_string(), "bump": bump.to_json(), "current": e.to_json()}))
}

fn random_init(seed: u64) -> ExpSolution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poly = (0..3).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
    ExpSolution::from_modes(vec![Mode::new(Complex64::new(0.0, 0.0), poly)])
}

fn run(cli: &Cli) -> Result<(Value, Format)> {
    let cfg = config(cli)?;
    let v = match &cli.cmd {
        Cmd::Normalize { expr } => match parse_operator(expr)? {
            Parsed::Element(h) => json!({"element": element_json(&h)}),
            Parsed::Matrix(m) => json!({"matrix": m.to_json()}),
        },
        Cmd::Divides { a, b } => {
            let (a, b) = (single(a)?, single(b)?);
            match h_divides(&a, &b) {
                Ok(q) => json!({"divides": true, "quotient": element_json(&q)}),
                Err(Error::NotDivisible { step, detail }) => {
                    json!({"divides": false, "failed_step": format!("{step:?}"), "detail": detail})
                }
                Err(e) => return Err(e),
            }
        }
        Cmd::Gcd { a, b } => {
            let g = h_gcd(&single(a)?, &single(b)?)?;
            json!({"gcd": g.to_expr_string(), "element": element_json(&g)})
        }
        Cmd::Bezout { a, b } => {
            let (a, b) = (single(a)?, single(b)?);
            let t = h_bezout(&a, &b)?;
            let mut v = t.to_json();
            v["verified"] = json!(t.verify(&a, &b));
            v
        }
        Cmd::Smith { matrix } => {
            let p = parse_matrix(matrix)?;
            let s = smith(&p)?;
            let mut v = s.to_json();
            v["verified"] = json!(s.verify(&p)?);
            v
        }
        Cmd::Zeros { q } => {
            let z = find_zeros(&single(q)?, &cfg.rect, cfg.tol)?;
            json!({"rect": cfg.rect.to_json(), "clusters": z.to_json()})
        }
        Cmd::Solve { op } => match parse_operator(op)? {
            Parsed::Element(q) => {
                let b = solution_basis_single(&q, &cfg.rect, cfg.tol, DEFAULT_RESIDUAL)?;
                json!({"rect": cfg.rect.to_json(), "basis": b.to_json()})
            }
            Parsed::Matrix(p) => {
                let b = solution_basis_system(&p, &cfg.rect, cfg.tol, DEFAULT_RESIDUAL)?;
                let free: Vec<Value> =
                    b.free_directions.iter().map(|d| Value::Array(d.iter().map(element_json).collect())).collect();
                json!({
                    "rect": cfg.rect.to_json(),
                    "solutions": b.solutions.iter().map(|u| u.to_json()).collect::<Vec<_>>(),
                    "residuals": b.residuals,
                    "free_directions": free,
                })
            }
        },
        Cmd::Simulate { q, init, horizon, step, csv } => {
            let init = match init {
                Some(s) => ExpSolution::from_json_str(s)?,
                None => ExpSolution::from_modes(vec![Mode::new(Complex64::new(0.0, 0.0), vec![Complex64::new(1.0, 0.0)])]),
            };
            let t = method_of_steps(&single(q)?, &init, *horizon, *step)?;
            if *csv {
                return Ok((Value::String(
                    t.grid().zip(&t.values).map(|(x, y)| format!("{x},{},{}\n", y.re, y.im)).collect(),
                ), cfg.format));
            }
            json!({"trajectory": t.to_json()})
        }
        Cmd::Project { q, trajectory, modes, horizon } => {
            let q = single(q)?;
            let traj = match trajectory {
                Some(p) => {
                    let text = std::fs::read_to_string(p)
                        .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
                    Trajectory::from_json_str(&text)?
                }
                None => method_of_steps(&q, &random_init(cfg.seed), *horizon, DEFAULT_STEP)?,
            };
            let mut basis = solution_basis_single(&q, &cfg.rect, cfg.tol, DEFAULT_RESIDUAL)?;
            sort_basis(&mut basis);
            basis.sort_by(|a, b| {
                let f = |u: &ExpSolution| u.modes.first().map_or(0.0, |m| m.alpha.im.abs());
                f(a).total_cmp(&f(b))
            });
            if let Some(k) = modes {
                basis.truncate(*k);
            }
            let start = traj.x0 + traj.step * (traj.values.len() as f64 / 2.0).floor();
            let window = traj.window(start, f64::INFINITY);
            let p = spectral_project(&window, &basis)?;
            json!({"basis": basis.to_json(), "window": [window.x0, window.x0 + window.step * (window.values.len().max(1) - 1) as f64], "projection": p.to_json()})
        }
        Cmd::Pv(a) => current(a, &cfg, false)?,
        Cmd::Residue(a) => current(a, &cfg, true)?,
        Cmd::Hefer { q, alpha } => {
            let q = single(q)?;
            let pair = hefer_pair_n2(&q, *alpha);
            let t = pair_identity(&q, *alpha, &pair);
            json!({"q": q.to_expr_string(), "alpha": alpha, "pair": pair.to_json(), "identity": t.to_json()})
        }
        Cmd::Growth { q } => {
            let q = single(q)?;
            json!({
                "q": q.to_expr_string(),
                "certificate": growth_certificate(&q)?.to_json(),
                "two_variable": hefer_growth_check(&q, &HeferGrid::default())?.to_json(),
            })
        }
        Cmd::Member { h, gens } => {
            let h = single(h)?;
            let gens = gens.split(';').map(single).collect::<Result<Vec<_>>>()?;
            let r = ideal_member(&h, &gens)?;
            let mut v = r.to_json();
            v["verified"] = json!(r.verify(&h, &gens));
            v
        }
    };
    Ok((v, cfg.format))
}

fn text(v: &Value) -> String {
    match v {
        Value::Object(m) => m.iter().map(|(k, x)| format!("{k}: {}\n", text_scalar(x))).collect(),
        Value::String(s) => s.clone(),
        other => format!("{other}\n"),
    }
}

fn text_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(m) if m.contains_key("expr") => m["expr"].as_str().unwrap_or_default().to_string(),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Error::Config(String::new()).exit_code() } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok((v, format)) => {
            let mut out = std::io::stdout().lock();
            let _ = match (&v, format) {
                (Value::String(s), _) => write!(out, "{s}"),
                (_, Format::Text) => write!(out, "{}", text(&v)),
                _ => writeln!(out, "{v}"),
            };
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
