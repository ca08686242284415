//! `hopf`: command-line front end for the hopfion library.

use clap::{Args, Parser, Subcommand};
use hopfion::algebra::Quat;
use hopfion::checks::{invariant_suite, CheckOutcome};
use hopfion::energy::{energy_map_with, energy_potential, EnergyReport, Model, Variant};
use hopfion::fields::{make_ansatz, AnsatzKind, LiftField, MapField};
use hopfion::gauge::{identity_suite, IdentityClass};
use hopfion::io::{write_atomic, FieldKind, RunConfig, Snapshot};
use hopfion::minimize::{charge_guard, relax_with, Termination, DEFAULT_GUARD};
use hopfion::topology::{charge_report, preimage_degree};
use hopfion::{Error, Result};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hopf", version, about = "Faddeev-Skyrme fields, Hopf charges and relaxation on periodic lattices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write an initial configuration as a snapshot.
    Ansatz(AnsatzArgs),
    /// Print the energy of a map or lift snapshot.
    Energy(EnergyArgs),
    /// Print all available Hopf charge routes.
    Hopf(HopfArgs),
    /// Preimage degree of a lift snapshot.
    Degree(DegreeArgs),
    /// Relax an ansatz or snapshot by constrained gradient descent.
    Relax(RelaxArgs),
    /// Run the identity suite and the algebra/lattice invariants.
    Check(CheckArgs),
    /// Export a snapshot as legacy VTK plus a density CSV.
    Export(ExportArgs),
    /// Print a snapshot header.
    Info(InfoArgs),
}

#[derive(Args)]
struct AnsatzArgs {
    #[arg(long, default_value = "hopf")]
    kind: String,
    #[arg(long, default_value_t = 1)]
    charge: i32,
    #[arg(long, default_value_t = 32)]
    n: usize,
    /// Side of the periodic cell (default 2π).
    #[arg(long)]
    length: Option<f64>,
    #[arg(long, short, default_value = "ansatz.hopf")]
    out: PathBuf,
    /// Also write the SU(2) lift.
    #[arg(long)]
    lift: Option<PathBuf>,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value = "coisotropy")]
    variant: String,
    #[arg(long, default_value_t = 1.0)]
    dirichlet_scale: f64,
    #[arg(long, default_value_t = 1.0)]
    skyrme_scale: f64,
}

impl ModelArgs {
    fn model(&self) -> Result<Model> {
        let variant = Variant::parse(&self.variant)
            .ok_or_else(|| Error::Config(format!("unknown variant {:?}", self.variant)))?;
        Ok(Model { variant, dirichlet_scale: self.dirichlet_scale, skyrme_scale: self.skyrme_scale })
    }
}

#[derive(Args)]
struct EnergyArgs {
    input: PathBuf,
    /// Base map φ for a potential snapshot.
    #[arg(long)]
    phi: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct HopfArgs {
    input: PathBuf,
    /// Lift snapshot enabling the Chern-Simons route.
    #[arg(long)]
    lift: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DegreeArgs {
    input: PathBuf,
    /// Regular value as `w,x,y,z` (normalized).
    #[arg(long, default_value = "0.6,0.48,-0.32,0.56")]
    point: String,
}

#[derive(Args)]
struct RelaxArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Start from this map snapshot instead of the configured ansatz.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![16usize, 32, 64])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExportArgs {
    input: PathBuf,
    #[arg(long)]
    vtk: PathBuf,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
struct InfoArgs {
    input: PathBuf,
}

/// Failure that maps to a specific exit status.
struct Exit(u8, String);

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Snapshot(_) | Error::Config(_) => 2,
            _ => 1,
        };
        Exit(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let res = match cli.cmd {
        Cmd::Ansatz(a) => cmd_ansatz(a),
        Cmd::Energy(a) => cmd_energy(a),
        Cmd::Hopf(a) => cmd_hopf(a),
        Cmd::Degree(a) => cmd_degree(a),
        Cmd::Relax(a) => cmd_relax(a),
        Cmd::Check(a) => cmd_check(a),
        Cmd::Export(a) => cmd_export(a),
        Cmd::Info(a) => cmd_info(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code, msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(code)
        }
    }
}

/// `HOPF_THREADS` caps the worker pool; unset means one per hardware thread.
fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("HOPF_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("HOPF_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn read(path: &Path) -> Result<Snapshot> {
    Snapshot::read(path)
}

/// Sphere map of a map or lift snapshot, and the lift when available.
fn map_and_lift(s: &Snapshot) -> Result<(MapField, Option<LiftField>)> {
    match s.meta.kind {
        FieldKind::MapS2 => Ok((s.to_map()?, None)),
        FieldKind::LiftSu2 => {
            let u = s.to_lift()?;
            Ok((u.as_map(), Some(u)))
        }
        FieldKind::Potential => Err(Error::Snapshot("expected a map or lift snapshot".into())),
    }
}

fn cmd_ansatz(a: AnsatzArgs) -> std::result::Result<(), Exit> {
    let kind = AnsatzKind::parse(&a.kind).ok_or_else(|| Error::Config(format!("unknown ansatz kind {:?}", a.kind)))?;
    let grid = match a.length {
        Some(l) => hopfion::lattice::Grid::new(a.n, l)?,
        None => hopfion::lattice::Grid::with_n(a.n)?,
    };
    let (psi, u) = make_ansatz(kind, grid, a.charge)?;
    let creation = format!("ansatz --kind {} --charge {} --n {} --length {}", kind.name(), a.charge, grid.n, grid.length);
    let note = serde_json::json!({ "ansatz": kind.name(), "charge": a.charge });
    let mut snap = Snapshot::from_map(&psi, creation.clone())?;
    snap.meta.charge = Some(note.clone());
    snap.write(&a.out)?;
    if let Some(path) = &a.lift {
        let mut ls = Snapshot::from_lift(&u, creation)?;
        ls.meta.charge = Some(note);
        ls.write(path)?;
    }
    println!("wrote {} (n = {}, L = {})", a.out.display(), grid.n, grid.length);
    Ok(())
}

fn energy_text(r: &EnergyReport) -> String {
    format!("model {}\ndirichlet {:.12e}\nskyrme {:.12e}\ntotal {:.12e}", r.model_tag, r.dirichlet, r.skyrme, r.total)
}

fn cmd_energy(a: EnergyArgs) -> std::result::Result<(), Exit> {
    let s = read(&a.input)?;
    let rep = if s.meta.kind == FieldKind::Potential {
        let phi_path = a.phi.as_ref().ok_or_else(|| Error::Config("a potential snapshot needs --phi".into()))?;
        let phi = read(phi_path)?.to_map()?;
        energy_potential(&s.to_potential()?, &phi)?
    } else {
        let (psi, _) = map_and_lift(&s)?;
        energy_map_with(&psi, &a.model.model()?)?
    };
    println!("{}", energy_text(&rep));
    if a.json {
        println!("{}", rep.to_json());
    }
    Ok(())
}

fn cmd_hopf(a: HopfArgs) -> std::result::Result<(), Exit> {
    let s = read(&a.input)?;
    let (psi, mut lift) = map_and_lift(&s)?;
    if let Some(p) = &a.lift {
        lift = Some(read(p)?.to_lift()?);
    }
    let rep = charge_report(&psi, lift.as_ref())?;
    let fmt = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.6}"));
    println!("chern_simons {}", fmt(rep.cs_value.first().copied()));
    println!("whitehead {}", fmt(rep.whitehead_value));
    println!("linking {}", rep.linking_value.map_or("n/a".to_string(), |v| v.to_string()));
    println!("rounded {:?}", rep.rounded);
    println!("deviation {:.3e}", rep.max_deviation);
    if a.json {
        println!("{}", rep.to_json());
    }
    Ok(())
}

fn cmd_degree(a: DegreeArgs) -> std::result::Result<(), Exit> {
    let u = read(&a.input)?.to_lift()?;
    let c: Vec<f64> = a
        .point
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Config(format!("--point expects four numbers, got {:?}", a.point)))?;
    if c.len() != 4 || c.iter().all(|x| *x == 0.0) {
        return Err(Error::Config(format!("--point expects four numbers, not all zero, got {:?}", a.point)).into());
    }
    let p = Quat::new(c[0], c[1], c[2], c[3]).normalize();
    println!("degree {}", preimage_degree(&u, p)?);
    Ok(())
}

fn cmd_relax(a: RelaxArgs) -> std::result::Result<(), Exit> {
    let mut cfg = match &a.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(o) = a.out {
        cfg.output_dir = o;
    }
    let psi0 = match &a.input {
        Some(p) => map_and_lift(&read(p)?)?.0,
        None => make_ansatz(cfg.ansatz_kind, cfg.grid()?, cfg.ansatz_charge)?.0,
    };
    let dir = cfg.output_dir.clone();
    std::fs::create_dir_all(&dir).map_err(Error::from)?;
    let rc = cfg.relax_config();
    let run = relax_with(&psi0, &rc, |iter, psi| {
        Snapshot::from_map(psi, format!("relax iteration {iter}"))?.write(&dir.join(format!("checkpoint_{iter:06}.hopf")))
    })?;
    write_atomic(&dir.join("history.csv"), run.history_csv().as_bytes())?;
    let last = run.history.last().expect("history starts with the initial state");
    let mut fin = Snapshot::from_map(&run.psi, "relax final")?;
    fin.meta.charge = last.charge.map(|c| serde_json::json!({ "whitehead": c }));
    fin.write(&dir.join("final.hopf"))?;
    write_atomic(&dir.join("config.txt"), cfg.to_text().as_bytes())?;
    println!(
        "{} after {} iterations: energy {:.10e}, grad {:.3e} (initial {:.3e})",
        run.reason.name(),
        last.iter,
        last.energy,
        last.grad_norm,
        run.history[0].grad_norm
    );
    let flagged = charge_guard(&run, DEFAULT_GUARD);
    if !flagged.is_empty() {
        eprintln!("warning: charge estimate jumped at iterations {flagged:?}");
    }
    if run.reason == Termination::Diverged {
        return Err(Exit(3, "relaxation diverged".into()));
    }
    Ok(())
}

fn outcome_json(c: &CheckOutcome) -> serde_json::Value {
    serde_json::json!({
        "suite": "invariants",
        "name": c.name,
        "value": c.value,
        "budget": c.budget,
        "bound": c.bound,
        "passed": c.passed(),
    })
}

fn cmd_check(a: CheckArgs) -> std::result::Result<(), Exit> {
    if a.sizes.len() < 3 || a.sizes.iter().any(|&n| n < 4) {
        return Err(Error::Config("--sizes needs at least three grid sizes, each ≥ 4".into()).into());
    }
    let mut rows = Vec::new();
    let mut ok = true;
    for r in identity_suite(&a.sizes, a.seed)? {
        let passed = r.passed();
        ok &= passed;
        let class = match r.class {
            IdentityClass::Pointwise => "pointwise",
            IdentityClass::Differential => "differential",
        };
        rows.push(serde_json::json!({
            "suite": "identities",
            "name": r.name,
            "class": class,
            "sizes": r.sizes,
            "residuals": r.l2_residual,
            "fitted_order": r.fitted_order,
            "budget": r.budget,
            "passed": passed,
        }));
    }
    let mid = a.sizes[a.sizes.len() / 2];
    for c in invariant_suite(mid, a.seed)? {
        ok &= c.passed();
        rows.push(outcome_json(&c));
    }
    println!("{}", serde_json::to_string_pretty(&serde_json::Value::Array(rows)).map_err(Error::from)?);
    if ok {
        Ok(())
    } else {
        Err(Exit(1, "one or more checks exceeded their budget".into()))
    }
}

/// Legacy ASCII VTK with one `VECTORS` block per field.
fn vtk_text(n: usize, h: f64, fields: &[(String, Vec<[f64; 3]>)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# vtk DataFile Version 3.0\nhopf export\nASCII\nDATASET STRUCTURED_POINTS");
    let _ = writeln!(s, "DIMENSIONS {n} {n} {n}\nORIGIN 0 0 0\nSPACING {h} {h} {h}\nPOINT_DATA {}", n * n * n);
    for (name, v) in fields {
        let _ = writeln!(s, "VECTORS {name} double");
        for x in v {
            let _ = writeln!(s, "{:e} {:e} {:e}", x[0], x[1], x[2]);
        }
    }
    s
}

fn cmd_export(a: ExportArgs) -> std::result::Result<(), Exit> {
    let s = read(&a.input)?;
    let grid = s.grid()?;
    let n = grid.sites();
    let (fields, density): (Vec<(String, Vec<[f64; 3]>)>, Vec<f64>) = match s.meta.kind {
        FieldKind::Potential => {
            let slots: Vec<(String, Vec<[f64; 3]>)> = (0..3)
                .map(|mu| {
                    let v = (0..n).map(|i| std::array::from_fn(|c| s.data[9 * i + 3 * mu + c])).collect();
                    (format!("a_{}", ["x", "y", "z"][mu]), v)
                })
                .collect();
            let dens = (0..n).map(|i| 0.5 * s.data[9 * i..9 * i + 9].iter().map(|x| x * x).sum::<f64>()).collect();
            (slots, dens)
        }
        _ => {
            let (psi, lift) = map_and_lift(&s)?;
            let mut f = vec![("psi".to_string(), psi.sphere_vec())];
            if let Some(u) = lift {
                f.push(("u_imag".to_string(), (0..n).map(|i| u.at(i).vec()).collect()));
            }
            let rep = energy_map_with(&psi, &a.model.model()?)?;
            (f, (0..n).map(|i| rep.density.at(i, 0)[0]).collect())
        }
    };
    write_atomic(&a.vtk, vtk_text(grid.n, grid.h(), &fields).as_bytes())?;
    if let Some(csv) = &a.csv {
        let mut t = String::from("x,y,z,density\n");
        for (i, d) in density.iter().enumerate() {
            let [x, y, z] = grid.position(i);
            let _ = writeln!(t, "{x:e},{y:e},{z:e},{d:e}");
        }
        write_atomic(csv, t.as_bytes())?;
    }
    println!("wrote {}", a.vtk.display());
    Ok(())
}

fn cmd_info(a: InfoArgs) -> std::result::Result<(), Exit> {
    let s = read(&a.input)?;
    let m = &s.meta;
    println!("kind {}\nn {}\nlength {}\ncomponents {}\ncreation {}", m.kind.name(), m.n, m.length, m.components, m.creation);
    if let Some(c) = &m.charge {
        println!("charge {c}");
    }
    Ok(())
}
