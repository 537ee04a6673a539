//! The `descent-geom` command line: generators, checks, descent
//! construction, bound reports, CSV tables and SVG pictures.
//!
//! Commands talk JSON lines: each stdout line is a tagged [`Record`], and
//! commands that need a curve or a family take them from `--curve` /
//! `--family` files or else from stdin.

mod io;
mod svg;

pub use io::{read_file, read_records, Record};
pub use svg::render as render_svg;

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::descent::{self, fixtures as dfix, ExpandingCouple, EC_TOL};
use crate::error::{GeomError, Result};
use crate::family::{self, Family, CONNECT_TOL};
use crate::geom::{shapes, ConvexBody, Vector};
use crate::mean_width::{SphereGrid, DEFAULT_GRID_SIZE};
use crate::sep::{self, fixtures as sfix, Polyline, SEP_TOL};

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "DESCENT_GEOM_SEED";

#[derive(Parser, Debug)]
#[command(name = "descent-geom", version, about = "Steepest-descent curves of nested convex families")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
struct ConfigArgs {
    /// Seed of the sphere grids (overridden by DESCENT_GEOM_SEED).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Nodes of the sphere grids in R^3 and above.
    #[arg(long, global = true, default_value_t = DEFAULT_GRID_SIZE)]
    grid_size: usize,
    /// Tolerance of the checks.
    #[arg(long, global = true, default_value_t = EC_TOL)]
    tol: f64,
}

/// Settings that produced a report; echoed into every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub grid_size: usize,
    pub tol: f64,
}

impl RunConfig {
    fn grid(&self, dim: usize) -> Result<SphereGrid> {
        if dim == 2 {
            // planar widths are exact; the grid only carries the dimension
            return SphereGrid::new(2, 2, self.seed);
        }
        SphereGrid::new(dim, self.grid_size, self.seed)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a family.
    Gen {
        #[command(subcommand)]
        what: GenCmd,
    },
    /// Run a check; exit 1 with a witness when it fails.
    Check {
        what: CheckKind,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Descend from an endpoint through a family.
    Descend {
        #[command(flatten)]
        inputs: Inputs,
        /// Endpoint coordinates, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        endpoint: String,
        #[arg(long, default_value_t = 64)]
        knots: usize,
        /// Also write the curve record here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Evaluate a length or stability bound; exit 1 when it fails.
    Bounds {
        what: BoundKind,
        #[command(flatten)]
        inputs: Inputs,
        /// Inner body of the annulus bound.
        #[arg(long, default_value_t = 0)]
        k1: usize,
        /// Two endpoints for the stability bound, "x,y;x,y".
        #[arg(long, allow_hyphen_values = true)]
        endpoints: Option<String>,
        #[arg(long, default_value_t = 64)]
        knots: usize,
    },
    /// Joint parametrization table (w, s, tau, |z'|) as CSV.
    Report {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Emit a named fixture.
    Fixtures {
        #[command(subcommand)]
        what: FixtureCmd,
    },
}

#[derive(Args, Debug)]
struct Inputs {
    #[arg(long)]
    curve: Option<PathBuf>,
    /// Family, stratification or body list.
    #[arg(long, alias = "strat")]
    family: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GenCmd {
    /// Concentric balls with radii r0 + (r1 − r0)·i/levels.
    Disks {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        levels: usize,
        #[arg(long, default_value_t = 0.0)]
        r0: f64,
        #[arg(long, default_value_t = 1.0)]
        r1: f64,
    },
    /// Rotated nested squares completed at step h.
    Squares {
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, default_value_t = 0.1)]
        h: f64,
    },
    /// Complete the stratification or body list on stdin at step h.
    Complete {
        #[arg(long)]
        h: f64,
        #[command(flatten)]
        inputs: Inputs,
    },
}

#[derive(Subcommand, Debug)]
enum FixtureCmd {
    /// Cantor staircase curve and its boxes.
    Cantor {
        #[arg(long, default_value_t = 3)]
        level: u32,
    },
    /// Concentric disks of radius (g(t) + t)/2 with the radial curve.
    CantorDisks {
        #[arg(long, default_value_t = 6)]
        level: u32,
    },
    /// Flat disks then thickened disks in R^3, with the stalling curve.
    StallingDisks {
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        xbar: f64,
    },
    /// Logarithmic spiral polyline.
    Spiral {
        #[arg(long, default_value_t = sfix::SPIRAL_RATE)]
        rate: f64,
        #[arg(long, default_value_t = 400)]
        m: usize,
    },
    /// Half circle over a diameter.
    HalfCircle {
        #[arg(long, default_value_t = 1.0)]
        d: f64,
        #[arg(long, default_value_t = 200)]
        m: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CheckKind {
    Sep,
    Ec,
    Sdc,
    Nested,
    Connected,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BoundKind {
    Length,
    Lipschitz,
    Annulus,
    Stability,
}

/// Outcome of a command: the lines to print and whether the check held.
struct Outcome {
    lines: Vec<String>,
    pass: bool,
}

impl Outcome {
    fn records(rs: Vec<Record>) -> Self {
        Outcome {
            lines: rs.iter().map(Record::to_line).collect(),
            pass: true,
        }
    }

    fn report(cfg: &RunConfig, name: &str, pass: bool, body: impl Serialize) -> Self {
        let v = json!({"check": name, "ok": pass, "config": cfg, "result": body});
        Outcome {
            lines: vec![Record::Report(v).to_line()],
            pass,
        }
    }
}

/// Runs the command line with explicit streams; returns the exit code.
pub fn run_with<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(stdout, "{e}")
            } else {
                write!(stderr, "{e}")
            };
            return code;
        }
    };
    let mut cfg = RunConfig {
        seed: cli.config.seed,
        grid_size: cli.config.grid_size,
        tol: cli.config.tol,
    };
    if let Ok(s) = std::env::var(SEED_ENV) {
        match s.trim().parse() {
            Ok(v) => cfg.seed = v,
            Err(_) => {
                let _ = writeln!(stderr, "error: {SEED_ENV}={s} is not an integer");
                return 2;
            }
        }
    }
    if !(cfg.tol > 0.0) {
        let _ = writeln!(stderr, "error: --tol must be positive");
        return 2;
    }
    match dispatch(&cli.cmd, &cfg, stdin) {
        Ok(out) => {
            for l in &out.lines {
                let _ = writeln!(stdout, "{l}");
            }
            if out.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

/// Runs with the process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = std::io::stdin();
    let mut lock = stdin.lock();
    run_with(args, &mut lock, &mut std::io::stdout(), &mut std::io::stderr())
}

/// Input records: the named files first, then stdin when something is missing.
struct Loaded {
    curve: Option<Polyline>,
    family: Option<Family>,
    bodies: Option<Vec<ConvexBody>>,
}

fn load(inputs: &Inputs, stdin: &mut dyn BufRead, need_stdin: bool) -> Result<Loaded> {
    let mut recs = Vec::new();
    if let Some(p) = &inputs.curve {
        recs.extend(read_file(p)?);
    }
    if let Some(p) = &inputs.family {
        recs.extend(read_file(p)?);
    }
    if need_stdin || (inputs.curve.is_none() && inputs.family.is_none()) {
        recs.extend(read_records(stdin)?);
    }
    Ok(Loaded {
        curve: io::first_curve(&recs).cloned(),
        family: io::first_family(&recs).cloned(),
        bodies: io::first_bodies(&recs),
    })
}

impl Loaded {
    fn curve(&self) -> Result<&Polyline> {
        self.curve
            .as_ref()
            .ok_or_else(|| GeomError::InvalidInput("no curve given".into()))
    }

    fn family(&self) -> Result<&Family> {
        self.family
            .as_ref()
            .ok_or_else(|| GeomError::InvalidInput("no family given".into()))
    }

    fn bodies(&self) -> Result<&[ConvexBody]> {
        self.bodies
            .as_deref()
            .ok_or_else(|| GeomError::InvalidInput("no bodies given".into()))
    }
}

fn parse_point(s: &str) -> Result<Vector> {
    Vector::parse(s)
}

fn write_text(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| GeomError::InvalidInput(format!("{}: {e}", path.display())))
}

fn dispatch(cmd: &Command, cfg: &RunConfig, stdin: &mut dyn BufRead) -> Result<Outcome> {
    match cmd {
        Command::Gen { what } => gen(what, cfg, stdin),
        Command::Fixtures { what } => fixtures(what),
        Command::Check { what, inputs } => check(*what, inputs, cfg, stdin),
        Command::Descend {
            inputs,
            endpoint,
            knots,
            out,
            svg,
        } => {
            let l = load(inputs, stdin, false)?;
            let fam = l.family()?;
            let c = descent::descend(fam, &parse_point(endpoint)?, *knots)?;
            let curve = c.polyline()?;
            let rec = Record::Curve(curve.clone());
            if let Some(p) = out {
                write_text(p, &format!("{}\n", rec.to_line()))?;
            }
            if let Some(p) = svg {
                write_text(p, &render_svg(fam.bodies(), Some(&curve)))?;
            }
            Ok(Outcome::records(vec![rec, Record::Family(c.knot_family()?)]))
        }
        Command::Bounds {
            what,
            inputs,
            k1,
            endpoints,
            knots,
        } => bounds(*what, inputs, *k1, endpoints.as_deref(), *knots, cfg, stdin),
        Command::Report { inputs, csv, svg } => {
            let l = load(inputs, stdin, false)?;
            let ec = ExpandingCouple::new(l.curve()?.clone(), l.family()?.clone())?;
            let jp = descent::joint_parametrization(&ec);
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| GeomError::InvalidInput(format!("csv: {e}"));
            w.write_record(["w", "s", "tau", "speed"]).map_err(csv_err)?;
            for i in 0..jp.w.len() {
                w.write_record([jp.w[i], jp.s[i], jp.tau[i], jp.speed[i]].map(|x| format!("{x:.12e}")))
                    .map_err(csv_err)?;
            }
            let table = String::from_utf8(w.into_inner().map_err(|e| GeomError::InvalidInput(e.to_string()))?)
                .expect("csv output is utf-8");
            if let Some(p) = svg {
                write_text(p, &render_svg(ec.family.bodies(), Some(&ec.curve)))?;
            }
            match csv {
                Some(p) => {
                    write_text(p, &table)?;
                    let ok = jp.lipschitz_estimate <= 1.0 + cfg.tol;
                    Ok(Outcome::report(
                        cfg,
                        "joint_parametrization",
                        ok,
                        json!({"lipschitz_estimate": jp.lipschitz_estimate, "rows": jp.w.len()}),
                    ))
                }
                None => Ok(Outcome {
                    lines: table.lines().map(str::to_owned).collect(),
                    pass: true,
                }),
            }
        }
    }
}

fn gen(what: &GenCmd, cfg: &RunConfig, stdin: &mut dyn BufRead) -> Result<Outcome> {
    let fam = match what {
        GenCmd::Disks { n, levels, r0, r1 } => {
            if *n == 2 {
                dfix::disk_family(*r0, *r1, *levels)?
            } else {
                if *levels == 0 || !(0.0..*r1).contains(r0) {
                    return Err(GeomError::InvalidInput("need 0 ≤ r0 < r1 and levels ≥ 1".into()));
                }
                let o = Vector::zeros(*n);
                let bodies = (0..=*levels)
                    .map(|i| shapes::ball(&o, r0 + (r1 - r0) * i as f64 / *levels as f64))
                    .collect::<Result<Vec<_>>>()?;
                Family::from_bodies(bodies, &cfg.grid(*n)?)?
            }
        }
        GenCmd::Squares { levels, h } => dfix::rotated_squares(*levels, *h)?,
        GenCmd::Complete { h, inputs } => {
            let l = load(inputs, stdin, false)?;
            let strat = family::validate_stratification(l.bodies()?.to_vec())?;
            family::complete(&strat, *h, &cfg.grid(strat.min().dim())?)?
        }
    };
    Ok(Outcome::records(vec![Record::Family(fam)]))
}

fn fixtures(what: &FixtureCmd) -> Result<Outcome> {
    let recs = match what {
        FixtureCmd::Cantor { level } => {
            let ts = dfix::cantor_times(*level);
            vec![
                Record::Curve(sfix::cantor_graph(*level)),
                Record::Bodies {
                    bodies: dfix::cantor_family(*level, &ts)?,
                },
            ]
        }
        FixtureCmd::CantorDisks { level } => {
            let (f, c) = dfix::cantor_disks(*level)?;
            vec![Record::Curve(c), Record::Family(f)]
        }
        FixtureCmd::StallingDisks { n, xbar } => {
            let ex = dfix::stalling_disks(*n, *xbar)?;
            vec![Record::Curve(ex.curve), Record::Family(ex.family)]
        }
        FixtureCmd::Spiral { rate, m } => {
            vec![Record::Curve(sfix::log_spiral(*rate, 4.0 * std::f64::consts::PI, *m)?)]
        }
        FixtureCmd::HalfCircle { d, m } => vec![Record::Curve(sfix::half_circle(*d, *m)?)],
    };
    Ok(Outcome::records(recs))
}

fn check(what: CheckKind, inputs: &Inputs, cfg: &RunConfig, stdin: &mut dyn BufRead) -> Result<Outcome> {
    let l = load(inputs, stdin, false)?;
    let tol = cfg.tol;
    Ok(match what {
        CheckKind::Sep => {
            let r = sep::is_sep(l.curve()?, tol.max(SEP_TOL));
            Outcome::report(cfg, "sep", r.ok, &r)
        }
        CheckKind::Ec => {
            let r = descent::is_expanding_couple(l.curve()?, l.bodies()?, tol)?;
            Outcome::report(cfg, "ec", r.ok, &r)
        }
        CheckKind::Sdc => {
            let r = descent::is_viable_sdc(l.curve()?, l.bodies()?, tol)?;
            Outcome::report(cfg, "sdc", r.ok, &r)
        }
        CheckKind::Nested => {
            let fam = l.family()?;
            let bad = fam.check_nested(tol * (1.0 + fam.max().diameter()))?;
            Outcome::report(cfg, "nested", bad.is_none(), json!({ "failing_pair": bad }))
        }
        CheckKind::Connected => {
            let r = family::connectivity(l.family()?, CONNECT_TOL)?;
            Outcome::report(cfg, "connected", r.ok, &r)
        }
    })
}

fn bounds(
    what: BoundKind,
    inputs: &Inputs,
    k1: usize,
    endpoints: Option<&str>,
    knots: usize,
    cfg: &RunConfig,
    stdin: &mut dyn BufRead,
) -> Result<Outcome> {
    let l = load(inputs, stdin, false)?;
    Ok(match what {
        BoundKind::Length => {
            let c = l.curve()?;
            let r = sep::length_bound_check(c, &cfg.grid(c.dim())?)?;
            Outcome::report(cfg, "length", r.bound_ok, &r)
        }
        BoundKind::Lipschitz => {
            let c = l.curve()?;
            let r = sep::lipschitz_ratio(c, &cfg.grid(c.dim())?)?;
            Outcome::report(cfg, "lipschitz", r.holds(1e-2), &r)
        }
        BoundKind::Annulus => {
            let ec = ExpandingCouple::new(l.curve()?.clone(), l.family()?.clone())?;
            let r = descent::annulus_length_check(&ec, k1)?;
            Outcome::report(cfg, "annulus", r.bound_i_ok && r.bound_ii_ok, &r)
        }
        BoundKind::Stability => {
            let fam = l.family()?;
            let eps = endpoints.ok_or_else(|| GeomError::InvalidInput("--endpoints \"a;b\" is required".into()))?;
            let pts = eps.split(';').map(parse_point).collect::<Result<Vec<_>>>()?;
            let [a, b] = pts.as_slice() else {
                return Err(GeomError::InvalidInput("need exactly two endpoints".into()));
            };
            let ec1 = descent::descend(fam, a, knots)?.couple()?;
            let ec2 = descent::descend(fam, b, knots)?.couple()?;
            let r = descent::stability_check(&ec1, &ec2, cfg.tol)?;
            Outcome::report(cfg, "stability", r.ok, &r)
        }
    })
}
