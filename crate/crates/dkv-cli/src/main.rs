//! Command line surface over the bound-state library: spectrum tables,
//! wavefunction samples, aggregated verification reports, and the
//! six-parameter family, in deterministic table, CSV, or JSON form.
//!
//! Exit contract: 0 success, 1 verification failure, 2 invalid parameters
//! or I/O trouble, 3 requested level missing.

mod output;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dkv::grid::Grid;
use dkv::natanzon::{
    class_ode_residual, natanzon_energies, natanzon_potential_on, natanzon_psi, MapClass,
    NatanzonParams, RootExpMap,
};
use dkv::oracle::{hamiltonian_from_samples, verify_spectrum, Scheme, VerifyTolerances};
use dkv::potential::{liouville_residual, mirror_defect};
use dkv::spectrum::{
    enumerate_levels, scan_levels, select_root, BoundState, CubicTriple, LevelScan, RootSelection,
};
use dkv::susy::{strength_identity_residual, superpotential, susy_residual};
use dkv::wavefunction::normalized_samples;
use dkv::{tolerance, DkvParams, Error};

use output::{csv, fixed, sci, sig17, write_output, Table};
use report::*;

#[derive(Parser)]
#[command(name = "dkv", version, about = "Bound-state spectra of an inverse square root potential family")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-level cubic roots, admissible window, energy, and shape parameters.
    Spectrum(SpectrumArgs),
    /// Normalized wavefunction samples of one level.
    Wavefunction(WavefunctionArgs),
    /// All residual checks against the grid oracle; exit 1 on any failure.
    Verify(VerifyArgs),
    /// Energies of the six-parameter family on the unit interval.
    Natanzon(NatanzonArgs),
}

#[derive(Args)]
struct PotentialArgs {
    /// Strength of the inverse-square term.
    #[arg(long = "A", value_name = "REAL", allow_hyphen_values = true)]
    a: f64,
    /// Strength of the linear-inverse term; requires B > 1/2.
    #[arg(long = "B", value_name = "REAL", allow_hyphen_values = true)]
    b: f64,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
    x_min: f64,
    #[arg(long, default_value_t = 60.0, allow_hyphen_values = true)]
    x_max: f64,
    #[arg(long, default_value_t = 5e-3)]
    h: f64,
}

impl GridArgs {
    fn build(&self) -> Result<Grid, Failure> {
        Grid::new(self.x_min, self.x_max, self.h).map_err(invalid)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Numerov,
    ThreePoint,
}

impl SchemeArg {
    fn to_scheme(self) -> Scheme {
        match self {
            SchemeArg::Numerov => Scheme::Numerov,
            SchemeArg::ThreePoint => Scheme::ThreePoint,
        }
    }

    fn name(self) -> &'static str {
        match self {
            SchemeArg::Numerov => "numerov",
            SchemeArg::ThreePoint => "three-point",
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum WfFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum SelectArg {
    #[default]
    Middle,
    Leftmost,
    Rightmost,
}

impl SelectArg {
    fn name(self) -> &'static str {
        match self {
            SelectArg::Middle => "middle",
            SelectArg::Leftmost => "leftmost",
            SelectArg::Rightmost => "rightmost",
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; relative paths land in $DKV_OUT_DIR when set. Stdout by
    /// default.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add a unix-seconds stamp field to JSON reports.
    #[arg(long, default_value_t = false)]
    stamp: bool,
}

impl OutputArgs {
    fn stamp_value(&self) -> Option<u64> {
        self.stamp.then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        })
    }
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    pot: PotentialArgs,
    /// Highest level index to scan.
    #[arg(long, default_value_t = 16)]
    n_max: usize,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct WavefunctionArgs {
    #[command(flatten)]
    pot: PotentialArgs,
    /// Level index.
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value_t)]
    format: WfFormat,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    pot: PotentialArgs,
    #[arg(long, default_value_t = 16)]
    n_max: usize,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value_t = SchemeArg::Numerov)]
    scheme: SchemeArg,
    /// Root choice; anything but `middle` is a deliberate negative control.
    #[arg(long, value_enum, default_value_t)]
    select: SelectArg,
    /// Override every tolerance at once (0 fails everything); unset flags
    /// keep the pinned per-check values.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the oracle energy tolerance [pinned: 1e-4].
    #[arg(long)]
    tol_energy: Option<f64>,
    /// Override the oracle overlap-defect tolerance [pinned: 1e-6].
    #[arg(long)]
    tol_overlap: Option<f64>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct NatanzonArgs {
    #[arg(long, allow_hyphen_values = true)]
    f: f64,
    #[arg(long, allow_hyphen_values = true)]
    h0: f64,
    #[arg(long, allow_hyphen_values = true)]
    h1: f64,
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, allow_hyphen_values = true)]
    c0: f64,
    #[arg(long, allow_hyphen_values = true)]
    c1: f64,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, default_value_t = -16.0, allow_hyphen_values = true)]
    x_min: f64,
    #[arg(long, default_value_t = 16.0, allow_hyphen_values = true)]
    x_max: f64,
    #[arg(long, default_value_t = 0.01)]
    h: f64,
    /// Write a CSV of (x, V(x)) to this path.
    #[arg(long)]
    potential_out: Option<PathBuf>,
    /// Write a CSV of (x, psi_0(x), ..) to this path.
    #[arg(long)]
    psi_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

/// Failure routed to the exit code.
enum Failure {
    Verification(String),
    Invalid(String),
    MissingLevel(usize),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::MissingLevel(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Verification(what) => format!("verification failed: {what}"),
            Failure::Invalid(what) => what.clone(),
            Failure::MissingLevel(n) => format!("level n = {n} does not exist at these parameters"),
        }
    }
}

fn invalid(e: impl ToString) -> Failure {
    Failure::Invalid(e.to_string())
}

fn params(args: &PotentialArgs) -> Result<DkvParams, Failure> {
    DkvParams::new(args.a, args.b).map_err(invalid)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Wavefunction(args) => cmd_wavefunction(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Natanzon(args) => cmd_natanzon(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("dkv: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn grid_info(grid: &Grid) -> GridInfo {
    GridInfo {
        x_min: grid.x_min,
        x_max: grid.x_max,
        h: grid.h,
        n_points: grid.n_points,
    }
}

fn to_json(value: &impl serde::Serialize) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(invalid)?;
    s.push('\n');
    Ok(s)
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<(), Failure> {
    let p = params(&args.pot)?;
    let levels: Vec<SpectrumLevel> = scan_levels(&p, args.n_max)
        .into_iter()
        .map_while(|row| {
            let LevelScan { triple, state, .. } = row;
            state.map(|s| SpectrumLevel {
                n: s.n,
                roots: triple.real_roots().expect("selected level has real roots"),
                selected: s.c,
                window: [triple.window.0, triple.window.1],
                energy: s.energy,
                alpha: s.alpha,
                beta: s.beta,
            })
        })
        .collect();
    let content = match args.format {
        Format::Table => {
            let mut t = Table::new(&[
                "n", "root_left", "root_middle", "root_right", "selected", "window", "energy",
                "alpha", "beta",
            ]);
            for l in &levels {
                t.row(vec![
                    l.n.to_string(),
                    fixed(l.roots[0]),
                    fixed(l.roots[1]),
                    fixed(l.roots[2]),
                    fixed(l.selected),
                    format!("({}, {})", fixed(l.window[0]), fixed(l.window[1])),
                    fixed(l.energy),
                    fixed(l.alpha),
                    fixed(l.beta),
                ]);
            }
            t.render()
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = levels
                .iter()
                .map(|l| {
                    vec![
                        l.n.to_string(),
                        sig17(l.roots[0]),
                        sig17(l.roots[1]),
                        sig17(l.roots[2]),
                        sig17(l.selected),
                        sig17(l.window[0]),
                        sig17(l.window[1]),
                        sig17(l.energy),
                        sig17(l.alpha),
                        sig17(l.beta),
                    ]
                })
                .collect();
            csv(
                &[
                    "n", "root_left", "root_middle", "root_right", "selected", "window_low",
                    "window_high", "energy", "alpha", "beta",
                ],
                &rows,
            )
        }
        Format::Json => to_json(&SpectrumReport {
            a_strength: p.a,
            b_strength: p.b,
            half_b: p.half_b(),
            n_max: args.n_max,
            levels,
            stamp: args.output.stamp_value(),
        })?,
    };
    write_output(&args.output.out, &content).map_err(invalid)
}

fn cmd_wavefunction(args: WavefunctionArgs) -> Result<(), Failure> {
    let p = params(&args.pot)?;
    let state = match dkv::spectrum::level(&p, args.n) {
        Ok(s) => s,
        Err(Error::MissingLevel { n }) => return Err(Failure::MissingLevel(n)),
        Err(e) => return Err(invalid(e)),
    };
    let grid = args.grid.build()?;
    let psi = normalized_samples(&state, &grid).map_err(invalid)?;
    let xs: Vec<f64> = grid.points().collect();
    let content = match args.format {
        WfFormat::Csv => {
            let rows: Vec<Vec<String>> = xs
                .iter()
                .zip(&psi)
                .map(|(x, v)| vec![sig17(*x), sig17(*v)])
                .collect();
            csv(&["x", "psi"], &rows)
        }
        WfFormat::Json => to_json(&WavefunctionReport {
            a_strength: p.a,
            b_strength: p.b,
            n: state.n,
            energy: state.energy,
            grid: grid_info(&grid),
            x: xs,
            psi,
            stamp: args.output.stamp_value(),
        })?,
    };
    write_output(&args.output.out, &content).map_err(invalid)
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let p = params(&args.pot)?;
    let grid = args.grid.build()?;
    let scheme = args.scheme.to_scheme();
    let energy_tol = args.tol.or(args.tol_energy).unwrap_or(tolerance::ENERGY_ABS);
    let overlap_tol = args.tol.or(args.tol_overlap).unwrap_or(tolerance::OVERLAP_DEFECT);
    let residual_tol = |pinned: f64| args.tol.unwrap_or(pinned);

    let true_levels = enumerate_levels(&p, args.n_max);
    let states: Vec<BoundState> = match args.select {
        SelectArg::Middle => true_levels,
        SelectArg::Leftmost | SelectArg::Rightmost => {
            let sel = if matches!(args.select, SelectArg::Leftmost) {
                RootSelection::Leftmost
            } else {
                RootSelection::Rightmost
            };
            (0..true_levels.len())
                .filter_map(|n| {
                    let triple = CubicTriple::build(&p, n);
                    select_root(&triple, sel).map(|a| BoundState::from_root_unchecked(&p, n, a))
                })
                .collect()
        }
    };

    let vt = VerifyTolerances { energy_abs: energy_tol, overlap_defect: overlap_tol };
    let outcome = verify_spectrum(&p, &states, &grid, scheme, &vt).map_err(invalid)?;
    let mut checks: Vec<CheckReport> = Vec::new();
    let oracle_worst = outcome
        .reports
        .iter()
        .map(|r| r.abs_delta_e)
        .collect::<Option<Vec<f64>>>()
        .map(|ds| ds.into_iter().fold(0.0, f64::max));
    checks.push(CheckReport {
        name: "oracle".into(),
        worst: oracle_worst,
        tolerance: energy_tol,
        pass: outcome.pass,
    });

    // Factorization checks per selected state; a construction failure is a
    // failed check, not an abort.
    let specs: Vec<_> = states.iter().map(superpotential).collect();
    let susy_row = |name: &str, tol: f64, picked: Vec<usize>| -> CheckReport {
        let mut worst = Some(0.0f64);
        for i in &picked {
            match &specs[*i] {
                Ok(spec) => {
                    let r = susy_residual(spec, &p, &grid);
                    worst = worst.map(|w| w.max(r));
                }
                Err(_) => worst = None,
            }
        }
        let pass = picked.is_empty() || worst.is_some_and(|w| w <= tol);
        CheckReport { name: name.into(), worst, tolerance: tol, pass }
    };
    let ground_idx: Vec<usize> = states.iter().enumerate().filter(|(_, s)| s.n == 0).map(|(i, _)| i).collect();
    let excited_idx: Vec<usize> = states.iter().enumerate().filter(|(_, s)| s.n > 0).map(|(i, _)| i).collect();
    checks.push(susy_row("susy_ground", residual_tol(tolerance::SUSY_GROUND), ground_idx));
    if !excited_idx.is_empty() {
        checks.push(susy_row("susy_excited", residual_tol(tolerance::SUSY_EXCITED), excited_idx));
    }

    let strength_worst = specs
        .iter()
        .map(|s| s.as_ref().ok().map(|spec| strength_identity_residual(spec, &p)))
        .collect::<Option<Vec<f64>>>()
        .map(|rs| rs.into_iter().fold(0.0, f64::max));
    let strength_tol = residual_tol(1e-12);
    checks.push(CheckReport {
        name: "strength_identity".into(),
        worst: strength_worst,
        tolerance: strength_tol,
        pass: states.is_empty() || strength_worst.is_some_and(|w| w <= strength_tol),
    });

    let r_points: Vec<f64> = (1..=400).map(|i| i as f64 * 0.025).collect();
    let half_line_worst = states
        .iter()
        .map(|s| liouville_residual(&p, s, &r_points, 1e-2).ok())
        .collect::<Option<Vec<f64>>>()
        .map(|rs| rs.into_iter().fold(0.0, f64::max));
    let half_line_tol = residual_tol(tolerance::LIOUVILLE);
    checks.push(CheckReport {
        name: "half_line_map".into(),
        worst: half_line_worst,
        tolerance: half_line_tol,
        pass: states.is_empty() || half_line_worst.is_some_and(|w| w <= half_line_tol),
    });

    let xs: Vec<f64> = grid.points().collect();
    let bridge = RootExpMap { sqrt_c: -1.0, d: 0.0 };
    let class_worst = class_ode_residual(MapClass::RootExp, 1.0, &bridge, &xs);
    let class_tol = residual_tol(tolerance::CLASS_ODE);
    checks.push(CheckReport {
        name: "class_ode".into(),
        worst: Some(class_worst),
        tolerance: class_tol,
        pass: class_worst <= class_tol,
    });

    let mirror_worst = xs.iter().map(|&x| mirror_defect(&p, x).abs()).fold(0.0, f64::max);
    let mirror_tol = residual_tol(tolerance::EQUIVALENCE);
    checks.push(CheckReport {
        name: "mirror_identity".into(),
        worst: Some(mirror_worst),
        tolerance: mirror_tol,
        pass: mirror_worst <= mirror_tol,
    });

    let levels: Vec<LevelCheck> = outcome
        .reports
        .iter()
        .map(|r| LevelCheck {
            n: r.n,
            e_analytic: r.e_analytic,
            e_oracle: r.e_oracle,
            abs_delta_e: r.abs_delta_e,
            overlap: r.overlap,
            nodes_analytic: r.nodes_analytic,
            nodes_oracle: r.nodes_oracle,
            normalizable: r.normalizable,
            pass: r.pass,
        })
        .collect();
    let all_pass = checks.iter().all(|c| c.pass);
    let report = VerifyReport {
        a_strength: p.a,
        b_strength: p.b,
        select: args.select.name().into(),
        scheme: args.scheme.name().into(),
        grid: grid_info(&grid),
        analytic_count: outcome.analytic_count,
        oracle_count: outcome.oracle_count,
        levels,
        checks,
        pass: all_pass,
        stamp: args.output.stamp_value(),
    };

    let content = match args.format {
        Format::Table => {
            let mut t = Table::new(&["check", "worst", "tolerance", "pass"]);
            for c in &report.checks {
                t.row(vec![
                    c.name.clone(),
                    c.worst.map_or("-".into(), sci),
                    sci(c.tolerance),
                    c.pass.to_string(),
                ]);
            }
            let mut lv = Table::new(&["n", "E_analytic", "E_oracle", "|dE|", "overlap", "pass"]);
            for l in &report.levels {
                lv.row(vec![
                    l.n.to_string(),
                    fixed(l.e_analytic),
                    l.e_oracle.map_or("-".into(), fixed),
                    l.abs_delta_e.map_or("-".into(), sci),
                    l.overlap.map_or("-".into(), |o| format!("{o:.12}")),
                    l.pass.to_string(),
                ]);
            }
            format!("{}\n{}", lv.render(), t.render())
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        c.worst.map_or(String::new(), sig17),
                        sig17(c.tolerance),
                        c.pass.to_string(),
                    ]
                })
                .collect();
            csv(&["check", "worst", "tolerance", "pass"], &rows)
        }
        Format::Json => to_json(&report)?,
    };
    write_output(&args.output.out, &content).map_err(invalid)?;

    if report.pass {
        Ok(())
    } else {
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        Err(Failure::Verification(failing.join(", ")))
    }
}

fn cmd_natanzon(args: NatanzonArgs) -> Result<(), Failure> {
    let np = NatanzonParams::new(args.f, args.h0, args.h1, args.a, args.c0, args.c1)
        .map_err(invalid)?;
    let grid = Grid::new(args.x_min, args.x_max, args.h).map_err(invalid)?;
    let levels = natanzon_energies(&np, args.n_max);

    let v = natanzon_potential_on(&np, &grid).map_err(invalid)?;
    let oracle = hamiltonian_from_samples(&grid, Scheme::Numerov, v.clone())
        .and_then(|ham| ham.eigenvalues_below(np.threshold()))
        .map_err(invalid)?;

    let rows: Vec<NatanzonLevelReport> = levels
        .iter()
        .map(|l| {
            let e_oracle = oracle.get(l.n).copied();
            NatanzonLevelReport {
                n: l.n,
                energy: l.energy,
                equation_residual: l.equation_residual,
                alpha: l.alpha,
                beta: l.beta,
                delta: l.delta,
                oracle_energy: e_oracle,
                abs_delta_e: e_oracle.map(|e| (e - l.energy).abs()),
            }
        })
        .collect();

    if let Some(path) = &args.potential_out {
        let body: Vec<Vec<String>> = grid
            .points()
            .zip(&v)
            .map(|(x, vv)| vec![sig17(x), sig17(*vv)])
            .collect();
        write_output(&Some(path.clone()), &csv(&["x", "v"], &body)).map_err(invalid)?;
    }
    if let Some(path) = &args.psi_out {
        let psis: Vec<Vec<f64>> = levels
            .iter()
            .map(|l| natanzon_psi(&np, l, &grid))
            .collect::<dkv::Result<_>>()
            .map_err(invalid)?;
        let mut header: Vec<String> = vec!["x".into()];
        header.extend(levels.iter().map(|l| format!("psi{}", l.n)));
        let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let body: Vec<Vec<String>> = grid
            .points()
            .enumerate()
            .map(|(i, x)| {
                let mut row = vec![sig17(x)];
                row.extend(psis.iter().map(|psi| sig17(psi[i])));
                row
            })
            .collect();
        write_output(&Some(path.clone()), &csv(&header_refs, &body)).map_err(invalid)?;
    }

    let content = match args.format {
        Format::Table => {
            let mut t = Table::new(&[
                "n", "energy", "eq_residual", "oracle_delta", "alpha", "beta", "delta",
            ]);
            for r in &rows {
                t.row(vec![
                    r.n.to_string(),
                    fixed(r.energy),
                    sci(r.equation_residual),
                    r.abs_delta_e.map_or("-".into(), sci),
                    fixed(r.alpha),
                    fixed(r.beta),
                    fixed(r.delta),
                ]);
            }
            t.render()
        }
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        sig17(r.energy),
                        sig17(r.equation_residual),
                        r.oracle_energy.map_or(String::new(), sig17),
                        r.abs_delta_e.map_or(String::new(), sig17),
                        sig17(r.alpha),
                        sig17(r.beta),
                        sig17(r.delta),
                    ]
                })
                .collect();
            csv(
                &[
                    "n", "energy", "equation_residual", "oracle_energy", "abs_delta_e", "alpha",
                    "beta", "delta",
                ],
                &body,
            )
        }
        Format::Json => to_json(&NatanzonReport {
            f: args.f,
            h0: args.h0,
            h1: args.h1,
            a: args.a,
            c0: args.c0,
            c1: args.c1,
            threshold: np.threshold(),
            grid: grid_info(&grid),
            levels: rows,
            stamp: args.output.stamp_value(),
        })?,
    };
    write_output(&args.output.out, &content).map_err(invalid)
}
