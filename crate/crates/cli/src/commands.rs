use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use absorbing_flows::analysis::{
    choi_positive, evolve as flow, purity_verdict, spectral_gap, time_grid, trajectory_with_gap,
    GridKind, PurityCertificate, DEFAULT_M_MAX,
};
use absorbing_flows::flowbuild::{
    build_pure_flow_seeded, index, sweep as run_sweep, SweepRow, MODEL_DEFECT_TOL, SWEEP_R_CAP,
};
use absorbing_flows::generator::{invariance_criterion, invariance_defect, necessity_demo};
use absorbing_flows::schema::{model_to_json, to_pretty_string};
use absorbing_flows::{Error, FaithfulState};
use rayon::prelude::*;
use serde_json::json;

use crate::{input, CliError};

/// Defect tolerance for build, verify and the demo.
const CERTIFY_TOL: f64 = 1e-9;
/// Final trace distance that counts as absorbed.
const ABSORBED_TOL: f64 = 1e-6;
/// Gaps below this are treated as absent when picking a default grid.
const GAP_FLOOR: f64 = 1e-6;
const DEFAULT_HORIZON: f64 = 50.0;
/// Times at which the Choi matrix of `P_t` is sampled.
const CHOI_TIMES: [f64; 3] = [0.1, 1.0, 10.0];

/// Writes through a sibling temporary file and a rename.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, contents).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn classify(e: Error) -> CliError {
    match e {
        Error::ConstructionFailed(_) | Error::NoConvergence { .. } => {
            CliError::Failed(e.to_string())
        }
        other => CliError::Invalid(other.to_string()),
    }
}

pub fn build(
    eigenvalues: &str,
    n: usize,
    seed: u64,
    tol: Option<f64>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let list = input::eigenvalues(eigenvalues)?;
    let model = build_pure_flow_seeded(&list, n, seed).map_err(classify)?;
    let tol = tol.unwrap_or(CERTIFY_TOL);
    let unitality = model.generator.unitality_defect();
    let invariance =
        invariance_defect(&model.generator.as_superoperator(), &model.state).map_err(classify)?;
    emit(out, &to_pretty_string(&model_to_json(&model)))?;

    // The summary goes to stderr when stdout carries the model.
    let summary = format!(
        "branch      {}\npure        {}\nindex       {}\ngap         {:.6e}\nunitality   {:.3e}\ninvariance  {:.3e}\n",
        model.branch,
        model.certificate.is_pure(),
        model.index,
        model.certificate.spectral_gap_estimate,
        unitality,
        invariance,
    );
    if out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    if unitality > tol || invariance > tol {
        return Err(CliError::Failed(format!("defects exceed {tol:e}")));
    }
    Ok(())
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

pub fn verify(model_path: &str, tol: Option<f64>, out: Option<&Path>) -> Result<(), CliError> {
    let tol = tol.unwrap_or(CERTIFY_TOL);
    let loaded = input::model(model_path, None)?;
    let (generator, state) = (&loaded.generator, &loaded.state);
    let l = generator.as_superoperator();

    let unitality = generator.unitality_defect();
    let invariance = invariance_defect(&l, state).map_err(classify)?;
    let criterion = invariance_criterion(&generator.cp_part(), state).map_err(classify)?;
    let mut choi_min = f64::INFINITY;
    for t in CHOI_TIMES {
        let p = flow(&l, t).map_err(classify)?;
        choi_min = choi_min.min(choi_positive(&p, tol).min_eigenvalue);
    }
    let certificate: Result<PurityCertificate, Error> = purity_verdict(generator, state);
    let (d, space) = index(generator).map_err(classify)?;

    let mut checks = vec![
        Check {
            name: "unitality",
            passed: unitality <= tol,
            detail: format!("{unitality:.3e}"),
        },
        Check {
            name: "invariance",
            passed: invariance <= tol,
            detail: format!("{invariance:.3e}"),
        },
        Check {
            name: "criterion",
            passed: criterion.holds,
            detail: format!(
                "holds={} residual={:.3e}",
                criterion.holds, criterion.residual
            ),
        },
        Check {
            name: "choi",
            passed: choi_min >= -tol,
            detail: format!("min eigenvalue {choi_min:.3e} over t in {CHOI_TIMES:?}"),
        },
    ];
    match &certificate {
        Ok(c) => checks.push(Check {
            name: "purity",
            passed: c.is_pure(),
            detail: format!(
                "ergodic={} irreducible={} fixed_dim={} commutant_dim={} gap={:.6e}",
                c.ergodic,
                c.irreducible,
                c.fixed_point_dim,
                c.commutant_dim,
                c.spectral_gap_estimate
            ),
        }),
        Err(e) => checks.push(Check {
            name: "purity",
            passed: false,
            detail: e.to_string(),
        }),
    }
    let recorded = loaded.model.as_ref().map(|m| m.index);
    checks.push(Check {
        name: "index",
        passed: recorded.is_none_or(|n| n == d) && !space.intersects_scalars,
        detail: format!(
            "{d} (intersects scalars: {}){}",
            space.intersects_scalars,
            recorded
                .map(|n| format!(", recorded {n}"))
                .unwrap_or_default()
        ),
    });

    for c in &checks {
        println!(
            "{:<4} {:<11} {}",
            if c.passed { "ok" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    if let Some(path) = out {
        let report = json!({
            "unitality_defect": unitality,
            "invariance_defect": invariance,
            "criterion": { "holds": criterion.holds, "residual": criterion.residual },
            "choi_min_eigenvalue": choi_min,
            "certificate": certificate.as_ref().ok(),
            "index": d,
            "intersects_scalars": space.intersects_scalars,
            "certified": checks.iter().all(|c| c.passed),
        });
        write_atomic(path, &to_pretty_string(&report))?;
    }
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "failed checks: {}",
            failed.join(", ")
        )))
    }
}

pub struct EvolveArgs<'a> {
    pub model: &'a str,
    pub eigenvalues: Option<&'a str>,
    pub rho0: &'a str,
    pub tmax: Option<f64>,
    pub steps: usize,
    pub log_grid: bool,
    pub seed: u64,
    pub tol: Option<f64>,
    pub out: Option<&'a Path>,
}

pub fn evolve(args: EvolveArgs<'_>) -> Result<(), CliError> {
    let loaded = input::model(args.model, args.eigenvalues)?;
    let (generator, state) = (&loaded.generator, &loaded.state);
    let rho0 = input::rho0(args.rho0, state, args.seed)?;
    let l = generator.as_superoperator();
    let gap = spectral_gap(&l, state, DEFAULT_M_MAX)
        .map_err(|e| CliError::Failed(format!("cannot evolve towards the state: {e}")))?;
    let t_max = args.tmax.unwrap_or(if gap.epsilon > GAP_FLOOR {
        DEFAULT_HORIZON / gap.epsilon
    } else {
        DEFAULT_HORIZON
    });
    let kind = if args.log_grid {
        GridKind::Log
    } else {
        GridKind::Linear
    };
    let times = time_grid(t_max, args.steps, kind).map_err(classify)?;
    let report = trajectory_with_gap(&l, state, &rho0, &times, gap.epsilon).map_err(classify)?;
    emit(args.out, &report.to_csv())?;

    let pure = purity_verdict(generator, state)
        .map(|c| c.is_pure())
        .unwrap_or(false);
    let final_distance = report.final_distance();
    let summary = format!(
        "final distance {final_distance:.6e} at t = {t_max:.6e} (initial {:.6e}, gap {:.6e}, C' {:.6e})\n",
        report.distances[0], gap.epsilon, report.bound_constant
    );
    if args.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    let tol = args.tol.unwrap_or(ABSORBED_TOL);
    if !pure {
        return Err(CliError::Failed(format!(
            "no decay detected: the generator is not pure (final distance {final_distance:.3e})"
        )));
    }
    if final_distance > tol {
        return Err(CliError::Failed(format!(
            "final distance {final_distance:.3e} exceeds {tol:e}; extend --tmax"
        )));
    }
    Ok(())
}

pub fn gap(model: &str, eigenvalues: Option<&str>, m_max: usize) -> Result<(), CliError> {
    let loaded = input::model(model, eigenvalues)?;
    let gap = spectral_gap(&loaded.generator.as_superoperator(), &loaded.state, m_max)
        .map_err(|e| CliError::Failed(e.to_string()))?;
    println!("epsilon   {:.12e}", gap.epsilon);
    println!("constant  {:.12e}", gap.constant);
    println!("powers    {}", gap.powers);
    Ok(())
}

pub fn demo_perturbation(
    eigenvalues: Option<&str>,
    epsilon: f64,
    tol: Option<f64>,
) -> Result<(), CliError> {
    let list = match eigenvalues {
        Some(text) => input::eigenvalues(text)?,
        None => vec![2.0 / 3.0, 1.0 / 3.0],
    };
    let state = FaithfulState::diagonal(&list).map_err(classify)?;
    let demo = necessity_demo(&state, epsilon).map_err(classify)?;
    println!("defect before  {:.12e}", demo.defect_before);
    println!("defect after   {:.12e}", demo.defect_after);
    println!("ell");
    for i in 0..demo.ell.rows() {
        let row: Vec<String> = (0..demo.ell.cols())
            .map(|j| {
                let z = demo.ell[(i, j)];
                format!("{:+.6}{:+.6}i", z.re, z.im)
            })
            .collect();
        println!("  {}", row.join("  "));
    }
    let tol = tol.unwrap_or(CERTIFY_TOL);
    if demo.defect_after > tol {
        return Err(CliError::Failed(format!(
            "perturbed defect {:.3e} exceeds {tol:e}",
            demo.defect_after
        )));
    }
    Ok(())
}

fn row_file(row: &SweepRow) -> String {
    format!(
        "model_r{}_n{}_{}.json",
        row.r,
        row.n,
        row.branch.to_string().to_lowercase()
    )
}

pub fn sweep(r_max: usize, tol: Option<f64>, out: &Path) -> Result<(), CliError> {
    let tol = tol.unwrap_or(MODEL_DEFECT_TOL);
    if !(2..=SWEEP_R_CAP).contains(&r_max) {
        return Err(CliError::Invalid(format!(
            "r_max = {r_max} outside 2..={SWEEP_R_CAP} (cap exceeded)"
        )));
    }
    fs::create_dir_all(out).map_err(|source| CliError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let rows = run_sweep(r_max).map_err(classify)?;

    rows.par_iter()
        .filter_map(|row| row.model.as_ref().map(|m| (row, m)))
        .try_for_each(|(row, model)| {
            let path: PathBuf = out.join(row_file(row));
            write_atomic(&path, &to_pretty_string(&model_to_json(model)))
        })?;

    let mut csv = String::from("r,n,branch,pure,index,gap,max_defect\n");
    for row in &rows {
        let index = row.index.map(|i| i.to_string()).unwrap_or_default();
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{:.12e},{:.6e}",
            row.r, row.n, row.branch, row.pure, index, row.gap, row.max_defect
        );
        println!(
            "{} r={} n={:<2} {:<10} pure={:<5} index={:<2} gap={:.6e} defect={:.3e}",
            if row.certified_with(tol) {
                "ok  "
            } else {
                "FAIL"
            },
            row.r,
            row.n,
            row.branch,
            row.pure,
            index,
            row.gap,
            row.max_defect
        );
        if let Some(e) = &row.error {
            eprintln!("  r={} n={} {}: {e}", row.r, row.n, row.branch);
        }
    }
    write_atomic(&out.join("summary.csv"), &csv)?;
    let failed = rows.iter().filter(|r| !r.certified_with(tol)).count();
    println!("{} of {} rows certified", rows.len() - failed, rows.len());
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} rows failed")));
    }
    Ok(())
}
