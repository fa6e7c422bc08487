//! Command-line front end: body construction, tangent-chord experiments,
//! circle search, 3D checks, and CSV/SVG/JSON emission.
//!
//! Exit codes: 0 success (constant / found), 1 negative verdict
//! (nonconstant / none below tolerance / no period), 2 validation error.

mod body_arg;
mod output;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use eqlab_core::bodies2d::Body;
use eqlab_core::circle_search::{
    certify_uniqueness_grid, find_circle, SearchConfig, SearchVerdict,
};
use eqlab_core::geometry2d::Circle;
use eqlab_core::property_lab::{
    default_tolerance, point_chords, point_profile, profile, Functional, Verdict,
};
use eqlab_core::space3d::{
    midpoint_locus, sphere_property_check, tangent_cone_projection, two_cycle_plane_through_line,
    Body3, Ellipsoid, Line3, Point3, SectionMode, Sphere, SphereVerdict, TwoCycle, Vector3,
};
use eqlab_core::tangent_dynamics::{compute_orbit, rotation_number, tangent_chords, RotationMode};

use output::{fmt_f64, write_csv, write_text, Json};

#[derive(Parser)]
#[command(
    name = "eqlab",
    version,
    about = "Tangent-chord experiments on convex plane bodies and 3D verifiers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a chord functional over tangent chords or chords through a
    /// point; emits CSV and SVG.
    Profile(ProfileArgs),
    /// Iterate the tangent-chord map; emits orbit CSV and SVG.
    Orbit(OrbitArgs),
    /// Search for an interior circle with a constant chord functional;
    /// emits a JSON report.
    Search(SearchArgs),
    /// 3D verifiers; emit JSON reports.
    #[command(subcommand)]
    Space3d(Space3dCommand),
}

#[derive(Args)]
struct ProfileArgs {
    /// Body: ellipse:a,b disc:r limacon:a,b yanagihara parabola, or a
    /// BodySpec JSON path.
    #[arg(long)]
    body: String,
    /// Use the body's canonical interior circle.
    #[arg(long, default_value_t = false)]
    auto_circle: bool,
    /// Explicit interior circle cx,cy,r.
    #[arg(long, allow_hyphen_values = true)]
    circle: Option<String>,
    /// Profile chords through this point instead of tangent chords
    /// ('pole' or x,y).
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    #[arg(long, default_value = "product")]
    functional: String,
    #[arg(long, default_value_t = 720)]
    grid: usize,
    /// Absolute constancy tolerance; default is 1e-6 of the mean value.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long)]
    body: String,
    #[arg(long, default_value_t = false)]
    auto_circle: bool,
    #[arg(long)]
    circle: Option<String>,
    /// Starting boundary parameter (radians).
    #[arg(long, default_value_t = 0.1)]
    start: f64,
    #[arg(long, default_value_t = 64)]
    iters: usize,
    #[arg(long, default_value_t = 1e-8)]
    period_tol: f64,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    body: String,
    #[arg(long, default_value = "product")]
    functional: String,
    #[arg(long, default_value_t = 96)]
    grid: usize,
    #[arg(long, default_value_t = 16)]
    multistarts: usize,
    #[arg(long, default_value_t = 300)]
    max_iterations: usize,
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Minimum candidate radius as a fraction of the body diameter
    /// (excludes degenerate point-like circles).
    #[arg(long, default_value_t = 0.01)]
    min_radius_fraction: f64,
    /// Also scan a (centre, radius) grid away from the found circle.
    #[arg(long, default_value_t = false)]
    certify: bool,
    #[arg(long, default_value_t = 0.05)]
    grid_step: f64,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Subcommand)]
enum Space3dCommand {
    /// Chord-midpoint locus of an ellipsoid through an interior point.
    MidpointLocus(MidpointArgs),
    /// Tangent-cone contact circle projected by the ratio-2 homothety.
    ConeProjection(ConeArgs),
    /// Equipotential / equireciprocal sphere check via tangent-plane
    /// sections.
    SphereCheck(SphereCheckArgs),
    /// Plane of a 2-cycle containing a given line.
    TwoCycle(TwoCycleArgs),
}

#[derive(Args)]
struct Body3Args {
    /// Ball radius (centred at the origin).
    #[arg(long)]
    ball: Option<f64>,
    /// Axis-aligned ellipsoid semi-axes a,b,c (centred at the origin).
    #[arg(long)]
    ellipsoid: Option<String>,
}

impl Body3Args {
    fn build(&self) -> Result<Body3, eqlab_core::Error> {
        match (&self.ball, &self.ellipsoid) {
            (Some(r), None) => Ok(Body3::Ball(Sphere::new(Point3::origin(), *r)?)),
            (None, Some(axes)) => {
                let parts: Vec<f64> = axes
                    .split(',')
                    .map(|s| {
                        s.trim().parse::<f64>().map_err(|_| {
                            eqlab_core::Error::Domain(format!("bad semi-axis '{s}'"))
                        })
                    })
                    .collect::<Result<_, _>>()?;
                if parts.len() != 3 {
                    return Err(eqlab_core::Error::Domain(
                        "ellipsoid takes three semi-axes a,b,c".into(),
                    ));
                }
                Ok(Body3::Ellipsoid(Ellipsoid::axis_aligned(
                    Point3::origin(),
                    [parts[0], parts[1], parts[2]],
                )?))
            }
            _ => Err(eqlab_core::Error::Domain(
                "specify exactly one of --ball R or --ellipsoid a,b,c".into(),
            )),
        }
    }
}

#[derive(Args)]
struct MidpointArgs {
    #[command(flatten)]
    body: Body3Args,
    /// Interior pivot point x,y,z.
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[arg(long, default_value_t = 2048)]
    samples: usize,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ConeArgs {
    #[command(flatten)]
    body: Body3Args,
    /// Interior sphere cx,cy,cz,r (default unit sphere at the origin).
    #[arg(long, default_value = "0,0,0,1", allow_hyphen_values = true)]
    sphere: String,
    /// Cone apex on the body boundary, x,y,z.
    #[arg(long, allow_hyphen_values = true)]
    apex: String,
    #[arg(long, default_value_t = 256)]
    samples: usize,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SphereCheckArgs {
    #[command(flatten)]
    body: Body3Args,
    #[arg(long, default_value = "0,0,0,1", allow_hyphen_values = true)]
    sphere: String,
    #[arg(long, default_value = "equipotential")]
    mode: String,
    /// Require the per-point constants to agree globally.
    #[arg(long, default_value_t = true)]
    require_constant: bool,
    #[arg(long, default_value_t = 512)]
    points: usize,
    #[arg(long, default_value_t = 256)]
    directions: usize,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct TwoCycleArgs {
    /// Offset function: zero | point:x,y,z | azimuth:amplitude.
    #[arg(long, default_value = "zero", allow_hyphen_values = true)]
    delta: String,
    /// Line by two points: x0,y0,z0,x1,y1,z1.
    #[arg(long, allow_hyphen_values = true)]
    line: String,
    #[arg(long, default_value_t = 2.0)]
    ball: f64,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("EQLAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = eqlab_core::par::configure_threads(n.max(1));
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, eqlab_core::Error> {
    match cli.command {
        Command::Profile(args) => cmd_profile(args),
        Command::Orbit(args) => cmd_orbit(args),
        Command::Search(args) => cmd_search(args),
        Command::Space3d(cmd) => cmd_space3d(cmd),
    }
}

fn ensure_dir(dir: &Path) -> Result<(), eqlab_core::Error> {
    std::fs::create_dir_all(dir)
        .map_err(|e| eqlab_core::Error::Domain(format!("cannot create output dir: {e}")))
}

fn io_err(e: std::io::Error) -> eqlab_core::Error {
    eqlab_core::Error::Domain(format!("io error: {e}"))
}

fn resolve_circle(
    body: &Body,
    auto: bool,
    circle: &Option<String>,
) -> Result<Option<Circle>, eqlab_core::Error> {
    if let Some(spec) = circle {
        return Ok(Some(body_arg::parse_circle(spec)?));
    }
    if auto {
        return body
            .circle
            .ok_or_else(|| {
                eqlab_core::Error::Domain(
                    "this body has no canonical interior circle; pass --circle cx,cy,r".into(),
                )
            })
            .map(Some);
    }
    Ok(None)
}

const PROFILE_CSV_HEADER: &str = "phi,a,b,product,length,reciprocal_sum,alpha";

fn cmd_profile(args: ProfileArgs) -> Result<ExitCode, eqlab_core::Error> {
    ensure_dir(&args.out_dir)?;
    let body = body_arg::parse_body(&args.body)?;
    let functional = Functional::parse(&args.functional)?;
    let mut scene = svg::Scene::around(&body.curve);
    scene.add_curve(&body.curve, "black");

    let (rows, prof) = if let Some(point_arg) = &args.point {
        let x = body_arg::parse_point(point_arg)?;
        let chords = point_chords(&body.curve, x, args.grid)?;
        let rows: Vec<Vec<f64>> = chords
            .iter()
            .map(|c| {
                vec![
                    c.psi,
                    c.a,
                    c.b,
                    c.a * c.b,
                    c.a + c.b,
                    1.0 / c.a + 1.0 / c.b,
                    std::f64::consts::PI,
                ]
            })
            .collect();
        for (i, c) in chords.iter().enumerate() {
            if i % (chords.len() / 36).max(1) == 0 {
                scene.add_segment(c.a_point, c.b_point, "#8a8a8a", 0.7);
            }
        }
        scene.add_dot(x, "#c02020");
        let prof = {
            let tmp = point_profile(&body.curve, x, functional, args.grid, 1.0)?;
            let tol = args
                .tolerance
                .unwrap_or_else(|| default_tolerance(tmp.lambda_hat, false));
            point_profile(&body.curve, x, functional, args.grid, tol)?
        };
        (rows, prof)
    } else {
        let circle = resolve_circle(&body, args.auto_circle, &args.circle)?.ok_or_else(|| {
            eqlab_core::Error::Domain(
                "tangent-chord profiles need --auto-circle or --circle (or use --point)".into(),
            )
        })?;
        let chords = tangent_chords(&body.curve, &circle, args.grid)?;
        let rows: Vec<Vec<f64>> = chords
            .iter()
            .map(|c| {
                vec![
                    c.phi,
                    c.a,
                    c.b,
                    c.product(),
                    c.length(),
                    c.reciprocal_sum(),
                    c.alpha,
                ]
            })
            .collect();
        scene.add_circle(&circle, "#2060c0");
        for (i, c) in chords.iter().enumerate() {
            if i % (chords.len() / 36).max(1) == 0 {
                scene.add_segment(c.a_point, c.b_point, "#8a8a8a", 0.7);
            }
        }
        scene.add_dot(circle.center, "#c02020");
        let prof = {
            let tmp = profile(&body.curve, &circle, functional, args.grid, 1.0)?;
            let tol = args
                .tolerance
                .unwrap_or_else(|| default_tolerance(tmp.lambda_hat, false));
            profile(&body.curve, &circle, functional, args.grid, tol)?
        };
        (rows, prof)
    };

    write_csv(&args.out_dir.join("profile.csv"), PROFILE_CSV_HEADER, &rows).map_err(io_err)?;
    write_text(&args.out_dir.join("profile.svg"), &scene.render()).map_err(io_err)?;

    let verdict = match prof.verdict {
        Verdict::Constant => "constant",
        Verdict::NonConstant => "nonconstant",
    };
    println!(
        "functional = {}\nlambda_hat = {}\ndeviation = {}\ntolerance = {}\nverdict = {}",
        prof.functional.name(),
        fmt_f64(prof.lambda_hat),
        fmt_f64(prof.deviation),
        fmt_f64(prof.tolerance),
        verdict
    );
    Ok(if prof.verdict == Verdict::Constant {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

const ORBIT_CSV_HEADER: &str = "i,param,x,y,chord_length";

fn cmd_orbit(args: OrbitArgs) -> Result<ExitCode, eqlab_core::Error> {
    ensure_dir(&args.out_dir)?;
    let body = body_arg::parse_body(&args.body)?;
    let circle = resolve_circle(&body, args.auto_circle, &args.circle)?.ok_or_else(|| {
        eqlab_core::Error::Domain("orbits need --auto-circle or --circle cx,cy,r".into())
    })?;
    let orbit = compute_orbit(&body.curve, &circle, args.start, args.iters, args.period_tol)?;
    let nu_measure = rotation_number(&body.curve, &circle, args.start, RotationMode::Measure, 0)?;

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(orbit.points.len());
    for (i, p) in orbit.points.iter().enumerate() {
        let chord = orbit.chord_lengths.get(i).copied().unwrap_or(f64::NAN);
        rows.push(vec![i as f64, orbit.params[i], p.x, p.y, chord]);
    }
    write_csv(&args.out_dir.join("orbit.csv"), ORBIT_CSV_HEADER, &rows).map_err(io_err)?;

    let mut scene = svg::Scene::around(&body.curve);
    scene.add_curve(&body.curve, "black");
    scene.add_circle(&circle, "#2060c0");
    scene.add_polygon(&orbit.points, "#c04020");
    scene.add_dot(orbit.points[0], "#c02020");
    write_text(&args.out_dir.join("orbit.svg"), &scene.render()).map_err(io_err)?;

    println!(
        "rotation_number_orbit = {}\nrotation_number_measure = {}",
        fmt_f64(orbit.rotation_number),
        fmt_f64(nu_measure)
    );
    match orbit.period {
        Some(p) => println!(
            "period = {p}\nclosure_error = {}",
            fmt_f64(orbit.closure_error)
        ),
        None => println!(
            "period = none within {} iterates (best recurrence {})",
            args.iters,
            fmt_f64(orbit.closure_error)
        ),
    }
    if orbit.piecewise_body {
        println!("note = piecewise boundary: tangent-length density has corner kinks");
    }
    Ok(if orbit.period.is_some() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_search(args: SearchArgs) -> Result<ExitCode, eqlab_core::Error> {
    ensure_dir(&args.out_dir)?;
    let body = body_arg::parse_body(&args.body)?;
    let functional = Functional::parse(&args.functional)?;
    let config = SearchConfig {
        functional,
        n_grid: args.grid,
        multistarts: args.multistarts,
        max_iterations: args.max_iterations,
        tolerance: args.tolerance,
        seed: args.seed,
        min_radius_fraction: args.min_radius_fraction,
    };
    let outcome = find_circle(&body.curve, &config)?;
    let verdict = match outcome.verdict {
        SearchVerdict::Found => "found",
        SearchVerdict::NoneBelowTolerance => "none_below_tolerance",
    };
    let second_best = if args.certify {
        let report = certify_uniqueness_grid(&body.curve, &outcome.best, args.grid_step, &config)?;
        match report.second_best {
            Some(c) => Json::Obj(vec![
                (
                    "center",
                    Json::Arr(vec![Json::Num(c.center.x), Json::Num(c.center.y)]),
                ),
                ("radius", Json::Num(c.radius)),
                ("objective", Json::Num(c.objective)),
                ("disc_like", Json::Bool(report.disc_like)),
                ("scanned", Json::Int(report.scanned as i64)),
            ]),
            None => Json::Null,
        }
    } else {
        Json::Null
    };
    let json = Json::Obj(vec![
        (
            "center",
            Json::Arr(vec![
                Json::Num(outcome.best.center.x),
                Json::Num(outcome.best.center.y),
            ]),
        ),
        ("radius", Json::Num(outcome.best.radius)),
        ("objective", Json::Num(outcome.best.objective)),
        (
            "feasibility_margin",
            Json::Num(outcome.best.feasibility_margin),
        ),
        ("verdict", Json::Str(verdict.into())),
        ("second_best", second_best),
    ]);
    let rendered = json.render();
    write_text(&args.out_dir.join("search.json"), &rendered).map_err(io_err)?;
    print!("{rendered}");
    Ok(match outcome.verdict {
        SearchVerdict::Found => ExitCode::SUCCESS,
        SearchVerdict::NoneBelowTolerance => ExitCode::from(1),
    })
}

fn parse_point3(arg: &str) -> Result<Point3, eqlab_core::Error> {
    let parts: Vec<f64> = arg
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| eqlab_core::Error::Domain(format!("bad coordinate '{s}'")))
        })
        .collect::<Result<_, _>>()?;
    if parts.len() != 3 {
        return Err(eqlab_core::Error::Domain(format!(
            "expected x,y,z, got '{arg}'"
        )));
    }
    Ok(Point3::new(parts[0], parts[1], parts[2]))
}

fn parse_sphere(arg: &str) -> Result<Sphere, eqlab_core::Error> {
    let parts: Vec<f64> = arg
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| eqlab_core::Error::Domain(format!("bad sphere component '{s}'")))
        })
        .collect::<Result<_, _>>()?;
    if parts.len() != 4 {
        return Err(eqlab_core::Error::Domain(format!(
            "sphere must be cx,cy,cz,r, got '{arg}'"
        )));
    }
    Sphere::new(Point3::new(parts[0], parts[1], parts[2]), parts[3])
}

fn cmd_space3d(cmd: Space3dCommand) -> Result<ExitCode, eqlab_core::Error> {
    match cmd {
        Space3dCommand::MidpointLocus(args) => {
            ensure_dir(&args.out_dir)?;
            let body = args.body.build()?;
            let e = body.as_ellipsoid()?;
            let p = parse_point3(&args.point)?;
            let fit = midpoint_locus(&e, p, args.samples)?;
            let fitted = match &fit.fitted {
                Some(el) => Json::Obj(vec![
                    (
                        "center",
                        Json::Arr(vec![
                            Json::Num(el.center.x),
                            Json::Num(el.center.y),
                            Json::Num(el.center.z),
                        ]),
                    ),
                    (
                        "form_diagonal",
                        Json::Arr(vec![
                            Json::Num(el.q[(0, 0)]),
                            Json::Num(el.q[(1, 1)]),
                            Json::Num(el.q[(2, 2)]),
                        ]),
                    ),
                ]),
                None => Json::Null,
            };
            let homothety = match &fit.homothety {
                Some(h) => Json::Obj(vec![
                    ("ratio", Json::Num(h.ratio)),
                    (
                        "center",
                        Json::Arr(vec![
                            Json::Num(h.center.x),
                            Json::Num(h.center.y),
                            Json::Num(h.center.z),
                        ]),
                    ),
                    ("defect", Json::Num(h.defect)),
                ]),
                None => Json::Null,
            };
            let json = Json::Obj(vec![
                ("degenerate", Json::Bool(fit.degenerate)),
                ("rms_residual", Json::Num(fit.rms_residual)),
                ("p_residual", Json::Num(fit.p_residual)),
                ("center_residual", Json::Num(fit.center_residual)),
                ("fitted", fitted),
                ("homothety", homothety),
            ]);
            let rendered = json.render();
            write_text(&args.out_dir.join("space3d.json"), &rendered).map_err(io_err)?;
            print!("{rendered}");
            Ok(ExitCode::SUCCESS)
        }
        Space3dCommand::ConeProjection(args) => {
            ensure_dir(&args.out_dir)?;
            let body = args.body.build()?;
            let sphere = parse_sphere(&args.sphere)?;
            let apex = parse_point3(&args.apex)?;
            let proj = tangent_cone_projection(&body, &sphere, apex, args.samples)?;
            let json = Json::Obj(vec![
                (
                    "contact_center",
                    Json::Arr(vec![
                        Json::Num(proj.contact_circle.center.x),
                        Json::Num(proj.contact_circle.center.y),
                        Json::Num(proj.contact_circle.center.z),
                    ]),
                ),
                ("contact_radius", Json::Num(proj.contact_circle.radius)),
                ("max_defect", Json::Num(proj.max_defect)),
                ("samples", Json::Int(proj.image_samples.len() as i64)),
            ]);
            let rendered = json.render();
            write_text(&args.out_dir.join("space3d.json"), &rendered).map_err(io_err)?;
            print!("{rendered}");
            Ok(ExitCode::SUCCESS)
        }
        Space3dCommand::SphereCheck(args) => {
            ensure_dir(&args.out_dir)?;
            let body = args.body.build()?;
            let sphere = parse_sphere(&args.sphere)?;
            let mode = match args.mode.as_str() {
                "equipotential" => SectionMode::Equipotential,
                "equireciprocal" => SectionMode::Equireciprocal,
                other => {
                    return Err(eqlab_core::Error::Domain(format!(
                        "mode must be equipotential or equireciprocal, got '{other}'"
                    )))
                }
            };
            let report = sphere_property_check(
                &body,
                &sphere,
                mode,
                args.require_constant,
                args.points,
                args.directions,
                args.tolerance,
            )?;
            let verdict = match report.verdict {
                SphereVerdict::ConstantEverywhere => "constant",
                SphereVerdict::PerPointOnly => "per_point_only",
                SphereVerdict::NonConstant => "nonconstant",
            };
            let lambda_mean =
                report.lambda_values.iter().sum::<f64>() / report.lambda_values.len() as f64;
            let json = Json::Obj(vec![
                ("mode", Json::Str(args.mode.clone())),
                (
                    "per_point_max_deviation",
                    Json::Num(report.per_point_max_deviation),
                ),
                ("lambda_mean", Json::Num(lambda_mean)),
                ("lambda_spread", Json::Num(report.lambda_spread)),
                ("verdict", Json::Str(verdict.into())),
            ]);
            let rendered = json.render();
            write_text(&args.out_dir.join("space3d.json"), &rendered).map_err(io_err)?;
            print!("{rendered}");
            let ok = match report.verdict {
                SphereVerdict::ConstantEverywhere => true,
                SphereVerdict::PerPointOnly => !args.require_constant,
                SphereVerdict::NonConstant => false,
            };
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Space3dCommand::TwoCycle(args) => {
            ensure_dir(&args.out_dir)?;
            let k = Body3::Ball(Sphere::new(Point3::origin(), args.ball)?);
            let parts: Vec<f64> = args
                .line
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|_| {
                        eqlab_core::Error::Domain(format!("bad line component '{s}'"))
                    })
                })
                .collect::<Result<_, _>>()?;
            if parts.len() != 6 {
                return Err(eqlab_core::Error::Domain(
                    "line must be x0,y0,z0,x1,y1,z1".into(),
                ));
            }
            let p0 = Point3::new(parts[0], parts[1], parts[2]);
            let p1 = Point3::new(parts[3], parts[4], parts[5]);
            let mid = Point3::from(0.5 * (p0.coords + p1.coords));
            let dir = p1 - p0;
            let half = 0.5 * dir.norm();
            let line = Line3 {
                point: mid,
                direction: dir.normalize(),
            };
            let delta = parse_delta(&args.delta)?;
            let cycle = TwoCycle::new(delta)?;
            let root = two_cycle_plane_through_line(&cycle, &line, half, &k)?;
            let json = Json::Obj(vec![
                (
                    "x0",
                    Json::Arr(vec![
                        Json::Num(root.x0.x),
                        Json::Num(root.x0.y),
                        Json::Num(root.x0.z),
                    ]),
                ),
                ("sigma_at_root", Json::Num(root.sigma_at_root)),
                ("containment_defect", Json::Num(root.containment_defect)),
            ]);
            let rendered = json.render();
            write_text(&args.out_dir.join("space3d.json"), &rendered).map_err(io_err)?;
            print!("{rendered}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

type DeltaFn = std::sync::Arc<dyn Fn(Vector3) -> f64 + Send + Sync>;

fn parse_delta(arg: &str) -> Result<DeltaFn, eqlab_core::Error> {
    if arg == "zero" {
        return Ok(std::sync::Arc::new(|_| 0.0));
    }
    if let Some(spec) = arg.strip_prefix("point:") {
        let w = parse_point3(spec)?;
        let w = w.coords;
        return Ok(std::sync::Arc::new(move |y: Vector3| y.dot(&w)));
    }
    if let Some(spec) = arg.strip_prefix("azimuth:") {
        let amp: f64 = spec
            .trim()
            .parse()
            .map_err(|_| eqlab_core::Error::Domain(format!("bad amplitude '{spec}'")))?;
        return Ok(std::sync::Arc::new(move |y: Vector3| {
            amp * y.y.atan2(y.x).sin() * (1.0 - y.z * y.z)
        }));
    }
    Err(eqlab_core::Error::Domain(format!(
        "delta must be zero, point:x,y,z or azimuth:amp, got '{arg}'"
    )))
}
