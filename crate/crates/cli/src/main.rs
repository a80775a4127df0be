//! `qclock`: law checks, simulation, spectral transforms, diagram suites and
//! convergence studies for finite quantum clocks.

mod error;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use qclock::coherent::check_strong_complementarity;
use qclock::dsl::{self, parse_corpus, run_paper_suite, run_suite};
use qclock::dynamics::SystemSpec;
use qclock::frobenius::check_laws;
use qclock::scaling::refinement_study;
use qclock::spectra::{ergodic_projector, projector_family, stone_reconstruct, weyl_exchange_phase, weyl_residual};
use qclock::{CoherentGroup, DynamicalSystem, EqualityReport, LawReport, Level, QuantumClock, Tensor, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use error::Failure;

#[derive(Parser, Debug)]
#[command(name = "qclock", version, about = "Finite quantum clocks and their dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Residual tolerance for every check.
    #[arg(long, global = true, env = "QCLOCK_TOL", default_value_t = 1e-10, value_parser = positive)]
    tol: f64,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Clock given by its time extent ω_uv (with --omega-ir).
    #[arg(long, global = true)]
    omega_uv: Option<f64>,

    /// Clock given by its energy extent ω_ir (with --omega-uv).
    #[arg(long, global = true)]
    omega_ir: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Frobenius and strong-complementarity laws, plus a seeded sweep of random systems.
    Check(ClockArg),
    /// Run the built-in equation corpus, or a user `.qd` file.
    Diagram {
        #[command(flatten)]
        clock: ClockArg,
        file: Option<PathBuf>,
    },
    /// Evaluate a system at time index `t` and dump the history of a state.
    Simulate {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long, allow_hyphen_values = true)]
        t: i64,
        /// Initial state as tensor JSON; defaults to the first basis state.
        #[arg(long)]
        psi0: Option<PathBuf>,
    },
    /// Energy projectors of a system.
    Spectrum {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        csv: bool,
    },
    /// Stone reconstruction residuals for every time index.
    Stone(SystemArg),
    /// Ergodic average for energy index `m`.
    Ergodic {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
    /// Exchange relation for every (m, n) pair.
    Weyl(ClockArg),
    /// Grid refinement study as CSV.
    Converge {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        spectrum: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        times: Vec<f64>,
        /// Comma-separated `uv:ir` pairs in increasing ω.
        #[arg(long, value_delimiter = ',', value_parser = grid, required = true)]
        grids: Vec<(f64, f64)>,
    },
}

#[derive(Args, Debug)]
struct ClockArg {
    /// Number of clock states ω.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Debug)]
struct SystemArg {
    /// System description JSON.
    #[arg(long)]
    system: PathBuf,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

fn grid(s: &str) -> Result<(f64, f64), String> {
    let (uv, ir) = s.split_once(':').ok_or_else(|| format!("`{s}` is not of the form uv:ir"))?;
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    Ok((parse(uv)?, parse(ir)?))
}

/// Result of one subcommand: the report body and whether every check passed.
struct Outcome {
    body: Body,
    passed: bool,
    summary: String,
}

enum Body {
    Json(Value),
    Csv(String),
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    validate_paths(cli)?;
    let tol = cli.tol;
    match &cli.command {
        Command::Check(c) => check(&resolve_clock(cli, c)?, tol, cli.seed),
        Command::Diagram { clock, file } => diagram(&resolve_clock(cli, clock)?, file.as_deref(), tol),
        Command::Simulate { system, t, psi0 } => simulate(&load_system(cli, system)?, *t, psi0.as_deref(), tol),
        Command::Spectrum { system, csv } => spectrum(&load_system(cli, system)?, *csv, tol),
        Command::Stone(system) => stone(&load_system(cli, system)?, tol),
        Command::Ergodic { system, m } => ergodic(&load_system(cli, system)?, *m, tol),
        Command::Weyl(c) => weyl(&resolve_clock(cli, c)?, tol),
        Command::Converge { spectrum, times, grids } => converge(spectrum, times, grids, tol),
    }
}

fn validate_paths(cli: &Cli) -> Result<(), Failure> {
    let inputs: Vec<&Path> = match &cli.command {
        Command::Diagram { file, .. } => file.iter().map(|p| p.as_path()).collect(),
        Command::Simulate { system, psi0, .. } => {
            std::iter::once(system.system.as_path()).chain(psi0.iter().map(|p| p.as_path())).collect()
        }
        Command::Spectrum { system, .. } | Command::Stone(system) | Command::Ergodic { system, .. } => {
            vec![system.system.as_path()]
        }
        _ => vec![],
    };
    for p in inputs {
        if !p.is_file() {
            return Err(Failure::new("InvalidPath", format!("input file {} does not exist", p.display())));
        }
    }
    if let Some(out) = &cli.out {
        let parent = out.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        if !parent.is_dir() {
            return Err(Failure::new("InvalidPath", format!("output directory {} does not exist", parent.display())));
        }
    }
    Ok(())
}

fn resolve_clock(cli: &Cli, arg: &ClockArg) -> Result<QuantumClock, Failure> {
    let labelled = match (cli.omega_uv, cli.omega_ir) {
        (Some(uv), Some(ir)) => Some(QuantumClock::new(uv, ir)?),
        (None, None) => None,
        _ => return Err(Failure::new("InvalidArgument", "--omega-uv and --omega-ir must be given together")),
    };
    match (arg.n, labelled) {
        (Some(n), Some(c)) if c.omega() != n => {
            Err(Failure::new("InvalidArgument", format!("--n {n} disagrees with the labelled clock of {} states", c.omega())))
        }
        (_, Some(c)) => Ok(c),
        (Some(n), None) => Ok(QuantumClock::with_omega(n)?),
        (None, None) => Err(Failure::new("InvalidArgument", "give --n or --omega-uv/--omega-ir")),
    }
}

fn load_system(cli: &Cli, arg: &SystemArg) -> Result<DynamicalSystem, Failure> {
    let spec: SystemSpec = serde_json::from_str(&fs::read_to_string(&arg.system)?)?;
    let sys = spec.build(cli.tol)?;
    if let (Some(uv), Some(ir)) = (cli.omega_uv, cli.omega_ir) {
        if *sys.clock().as_ref() != QuantumClock::new(uv, ir)? {
            return Err(Failure::new("ClockMismatch", "system file runs on a different clock than --omega-uv/--omega-ir"));
        }
    }
    Ok(sys)
}

fn random_system(c: &Arc<QuantumClock>, d: usize, rng: &mut ChaCha8Rng) -> Result<DynamicalSystem, Failure> {
    let reps: Vec<i64> = c.labels().representatives().collect();
    let mut levels: Vec<Level> = Vec::new();
    for k in 0..d {
        let m = reps[rng.gen_range(0..reps.len())];
        let phase = C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let v = Tensor::basis_state(d, k)?.scale(phase);
        match levels.iter_mut().find(|l| l.m == m) {
            Some(l) => l.basis.push(v),
            None => levels.push(Level { m, basis: vec![v] }),
        }
    }
    Ok(DynamicalSystem::from_spectrum(c.clone(), &levels)?)
}

fn check(c: &QuantumClock, tol: f64, seed: u64) -> Result<Outcome, Failure> {
    let pair = CoherentGroup::cyclic_pair(c.omega())?;
    let z = check_laws(pair.zdot(), tol);
    let x = check_laws(pair.xdot(), tol);
    let complementarity = check_strong_complementarity(&pair, tol);
    let clock = Arc::new(c.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sweep = Vec::new();
    for d in 1..=4 {
        sweep.push((d, random_system(&clock, d, &mut rng)?.validate(tol)));
    }
    let quasi_special = (x.normalisation - c.omega() as f64).abs() <= tol;
    let passed = z.passed() && x.passed() && quasi_special && complementarity.passed() && sweep.iter().all(|(_, r)| r.passed());
    let reports: Vec<&LawReport> =
        [&z.laws, &x.laws, &complementarity].into_iter().chain(sweep.iter().map(|(_, r)| r)).collect();
    let count: usize = reports.iter().map(|r| r.laws.len()).sum();
    let worst = reports.iter().map(|r| r.max_residual()).fold(0.0, f64::max);
    Ok(Outcome {
        body: Body::Json(json!({
            "omega": c.omega(),
            "clock": c,
            "z": z,
            "x": x,
            "normalisation": {"z": z.normalisation, "x": x.normalisation},
            "strong_complementarity": complementarity,
            "random_systems": sweep.iter().map(|(d, r)| json!({"dim": d, "report": r})).collect::<Vec<_>>(),
            "seed": seed,
            "passed": passed,
        })),
        passed,
        summary: format!("check ω={}: {count} laws, max residual {worst:.3e}", c.omega()),
    })
}

fn case_json(name: &str, r: &EqualityReport) -> Value {
    json!({"name": name, "equal": r.equal, "residual": r.residual, "lambda": r.lambda})
}

fn diagram(c: &QuantumClock, file: Option<&Path>, tol: f64) -> Result<Outcome, Failure> {
    let results = match file {
        None => run_paper_suite(c, tol),
        Some(path) => {
            let cases = parse_corpus(&fs::read_to_string(path)?)?;
            let sys = dsl::default_system(c);
            run_suite(&cases, c, Some(&sys), tol)
        }
    };
    let passed = results.iter().all(|(_, r)| r.equal);
    let failed = results.iter().filter(|(_, r)| !r.equal).count();
    Ok(Outcome {
        body: Body::Json(json!({
            "omega": c.omega(),
            "cases": results.iter().map(|(n, r)| case_json(n, r)).collect::<Vec<_>>(),
            "passed": passed,
        })),
        passed,
        summary: format!("diagram ω={}: {} cases, {failed} failed", c.omega(), results.len()),
    })
}

fn simulate(sys: &DynamicalSystem, t: i64, psi0: Option<&Path>, tol: f64) -> Result<Outcome, Failure> {
    let psi0: Tensor = match psi0 {
        Some(p) => serde_json::from_str(&fs::read_to_string(p)?)?,
        None => Tensor::basis_state(sys.system_dim(), 0)?,
    };
    let history = sys.history(&psi0)?;
    let morphism = history.check_morphism(tol);
    let representation = sys.representation_report();
    let passed = representation.passed() && morphism.equal;
    let labels = sys.clock().labels();
    let trajectory: Vec<Value> =
        labels.representatives().map(|n| json!({"n": n, "time": labels.time_of(n), "state": history.trajectory(n)})).collect();
    Ok(Outcome {
        body: Body::Json(json!({
            "clock": sys.clock().as_ref(),
            "t": labels.representative(t),
            "time": labels.time_of(t),
            "alpha": sys.evaluate_at(t),
            "representation": representation,
            "psi0": psi0,
            "history": trajectory,
            "history_morphism": morphism,
            "passed": passed,
        })),
        passed,
        summary: format!("simulate ω={} t={}: history residual {:.3e}", sys.omega(), labels.representative(t), morphism.residual),
    })
}

fn spectrum(sys: &DynamicalSystem, csv: bool, tol: f64) -> Result<Outcome, Failure> {
    let fam = projector_family(sys)?;
    let invariants = fam.check_invariants(tol);
    let entries = fam.summary();
    let passed = invariants.passed();
    let summary = format!(
        "spectrum ω={}: {} occupied levels, invariants max residual {:.3e}",
        sys.omega(),
        entries.iter().filter(|e| e.rank > 0).count(),
        invariants.max_residual()
    );
    let body = if csv {
        let mut out = String::from("m,energy,rank,idempotence_residual\n");
        for e in &entries {
            out.push_str(&format!("{},{},{},{:e}\n", e.m, e.energy, e.rank, e.idempotence_residual));
        }
        Body::Csv(out)
    } else {
        Body::Json(json!({
            "clock": sys.clock().as_ref(),
            "levels": entries,
            "energy_sum": fam.energy_sum(),
            "invariants": invariants,
            "passed": passed,
        }))
    };
    Ok(Outcome { body, passed, summary })
}

fn residual(a: &Tensor, b: &Tensor) -> Result<f64, Failure> {
    Ok(a.sub(b)?.max_norm())
}

fn stone(sys: &DynamicalSystem, tol: f64) -> Result<Outcome, Failure> {
    let fam = projector_family(sys)?;
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for n in sys.clock().labels().representatives() {
        let r = residual(&stone_reconstruct(&fam, n), sys.evaluate_at(n))?;
        worst = worst.max(r);
        rows.push(json!({"n": n, "residual": r}));
    }
    let passed = worst <= tol;
    Ok(Outcome {
        body: Body::Json(json!({"clock": sys.clock().as_ref(), "residuals": rows, "max_residual": worst, "passed": passed})),
        passed,
        summary: format!("stone ω={}: max residual {worst:.3e}", sys.omega()),
    })
}

fn ergodic(sys: &DynamicalSystem, m: i64, tol: f64) -> Result<Outcome, Failure> {
    let p = ergodic_projector(sys, m)?;
    let fam = projector_family(sys)?;
    let r = residual(&p, fam.member(m))?;
    let passed = r <= tol;
    let labels = sys.clock().labels();
    Ok(Outcome {
        body: Body::Json(json!({
            "m": labels.representative(m),
            "energy": labels.energy_of(m),
            "projector": p,
            "residual": r,
            "passed": passed,
        })),
        passed,
        summary: format!("ergodic m={}: residual against spectral projector {r:.3e}", labels.representative(m)),
    })
}

#[derive(Serialize)]
struct WeylRow {
    m: i64,
    n: i64,
    residual: f64,
    lambda: Option<C64>,
    pairing: C64,
}

fn weyl(c: &QuantumClock, tol: f64) -> Result<Outcome, Failure> {
    let mut rows = Vec::new();
    for m in c.labels().representatives() {
        for n in c.labels().representatives() {
            rows.push(WeylRow {
                m,
                n,
                residual: weyl_residual(c, m, n),
                lambda: weyl_exchange_phase(c, m, n),
                pairing: c.pairing_phase(m, n),
            });
        }
    }
    let ok = |r: &WeylRow| r.residual <= tol && r.lambda.is_some_and(|l| (l - r.pairing).norm() <= tol);
    let passed = rows.iter().all(ok);
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    let summary = format!("weyl ω={}: {} pairs, max residual {worst:.3e}", c.omega(), rows.len());
    Ok(Outcome {
        body: Body::Json(json!({"omega": c.omega(), "pairs": rows, "max_residual": worst, "passed": passed})),
        passed,
        summary,
    })
}

fn converge(spectrum: &[f64], times: &[f64], grids: &[(f64, f64)], tol: f64) -> Result<Outcome, Failure> {
    let study = refinement_study(spectrum, times, grids)?;
    let passed = study.rows.iter().all(|r| r.max_error <= r.bound + tol);
    Ok(Outcome {
        body: Body::Csv(study.to_csv()),
        passed,
        summary: format!(
            "converge: {} grids, monotone non-increasing {}, decay ratios {:?}",
            study.rows.len(),
            study.is_monotone_non_increasing(),
            study.decay_ratios()
        ),
    })
}

fn emit(cli: &Cli, body: &Body) -> Result<(), Failure> {
    let text = match body {
        Body::Json(v) => serde_json::to_string_pretty(v)? + "\n",
        Body::Csv(s) => s.clone(),
    };
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("{}", serde_json::to_string(f).unwrap_or_else(|_| f.message.clone()));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => return fail(&Failure::new("InvalidArgument", e.to_string().trim_end())),
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(f) => return fail(&f),
    };
    if let Err(f) = emit(&cli, &outcome.body) {
        return fail(&f);
    }
    eprintln!("{} [{}]", outcome.summary, if outcome.passed { "pass" } else { "FAIL" });
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
