use std::io;
use std::path::Path;
use std::time::Instant;

use crate::checks;
use crate::config::{CheckKind, Scenario};
use crate::exec::Rayon;
use crate::report::{self, CheckOutcome, Status};

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses one per core.
    pub threads: Option<usize>,
    /// Overrides the seed of synthetic scattering matrices.
    pub seed: Option<u64>,
}

fn run_one(sc: &Scenario, check: CheckKind, opts: &RunOptions) -> CheckOutcome {
    let exec = Rayon;
    let start = Instant::now();
    let result = match check {
        CheckKind::ZetaCompare => checks::zeta_compare(sc, &exec),
        CheckKind::OrbitalCheck => checks::orbital_check(sc, &exec),
        CheckKind::EisensteinCheck => checks::eisenstein_check(sc, &exec),
        CheckKind::OmegaCheck => checks::omega_check(sc),
        CheckKind::ScatterAlgebra => checks::scatter_algebra(sc, opts.seed),
        CheckKind::EstimateSums => checks::estimate(sc, &exec),
    };
    let mut o = result.unwrap_or_else(|e| CheckOutcome::error(check, sc.policy, e));
    o.wall_ms = start.elapsed().as_millis();
    o
}

/// Runs `checks` (in order) and returns their outcomes without writing anything.
pub fn run_checks(sc: &Scenario, checks: &[CheckKind], opts: &RunOptions) -> io::Result<Vec<CheckOutcome>> {
    let work = || checks.iter().map(|&c| run_one(sc, c, opts)).collect();
    match opts.threads {
        None => Ok(work()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().map_err(io::Error::other)?;
            Ok(pool.install(work))
        }
    }
}

/// Runs the checks and writes reports under `out_dir`.
pub fn run_scenario(
    sc: &Scenario,
    checks: &[CheckKind],
    opts: &RunOptions,
    out_dir: &Path,
) -> io::Result<Vec<CheckOutcome>> {
    let outcomes = run_checks(sc, checks, opts)?;
    report::write_all(out_dir, sc.name(), &outcomes)?;
    Ok(outcomes)
}

pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|o| o.status == Status::Pass)
}
