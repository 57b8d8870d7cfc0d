use std::path::PathBuf;
use std::process::ExitCode;

use artin_core::classes::class_reps;
use artin_core::{GroupDescriptor, GroupElement};
use artin_harness::config::{self, CheckKind, Scenario};
use artin_harness::exec::Rayon;
use artin_harness::report::{sci, ARTIFACT_VERSION, ORDERING_VERSION};
use artin_harness::run::{all_passed, run_scenario, RunOptions};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "artin", version, about = "Verify Artin-formalism identities on congruence subgroups of PSL(2,Z) and PSL(2,Z[i])")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario file, or the name of a bundled scenario.
    #[arg(long)]
    config: Option<String>,
    #[arg(long, default_value = "reports")]
    out_dir: PathBuf,
    /// Worker threads (default: one per core).
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for synthetic scattering matrices (overrides the scenario).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check listed in a scenario.
    Verify {
        /// Scenario file, or the name of a bundled scenario.
        #[arg(value_name = "CONFIG", id = "scenario")]
        scenario: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Compare truncated zeta log-derivatives on both sides and decompose classes.
    ZetaCompare(Common),
    /// Matched-truncation orbital identity.
    OrbitalCheck(Common),
    /// Matched-truncation Eisenstein correspondence.
    EisensteinCheck(Common),
    /// Exact Omega constants (2-dimensional scenarios).
    OmegaCheck(Common),
    /// Determinant relations for synthetic scattering matrices.
    ScatterAlgebra(Common),
    /// Parabolic and hyperbolic delta^-sigma sums.
    EstimateSums(Common),
    /// Dump cosets, cusps, the enumeration window and classes as JSON.
    Enumerate(Common),
    /// List the bundled scenarios.
    Scenarios,
}

fn load(path: Option<&String>) -> Result<Scenario, ExitCode> {
    let Some(path) = path else {
        eprintln!("error: a scenario is required (--config <file-or-bundled-name>)");
        return Err(ExitCode::from(2));
    };
    config::load(path).map_err(|e| {
        eprintln!("configuration error: {e}");
        ExitCode::from(2)
    })
}

fn execute(sc: &Scenario, checks: &[CheckKind], common: &Common) -> ExitCode {
    let opts = RunOptions { threads: common.threads, seed: common.seed };
    let outcomes = match run_scenario(sc, checks, &opts, &common.out_dir) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error writing reports to {}: {e}", common.out_dir.display());
            return ExitCode::from(2);
        }
    };
    for o in &outcomes {
        println!(
            "{} {} {} residual={} tolerance={} terms={}",
            sc.name(),
            o.check.name(),
            o.status.as_str(),
            sci(o.residual),
            sci(o.tolerance),
            o.terms
        );
        if let Some(msg) = o.details.get("error") {
            println!("  {msg}");
        }
    }
    if all_passed(&outcomes) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn enumerate(sc: &Scenario, common: &Common) -> ExitCode {
    let exec = Rayon;
    let pool = match common.threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().ok(),
        None => None,
    };
    let work = || {
        let pair = sc.pair();
        let window = GroupDescriptor::full(sc.ambient).enumerate(sc.policy.bound, &exec);
        let classes =
            class_reps(pair.gamma_tilde(), &[GroupElement::identity()], &window, sc.policy.bound, sc.policy.norm_cutoff, &exec);
        json!({
            "artifact_version": ARTIFACT_VERSION,
            "ordering_version": ORDERING_VERSION,
            "scenario": sc.name(),
            "gamma": pair.gamma().to_string(),
            "index": pair.index(),
            "kappa": sc.pi.kappa(),
            "character": sc.pi.character().describe(),
            "cosets": pair.alpha().iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "cusps": pair.cusps().iter().map(|c| json!({
                "point": c.point.to_string(),
                "width": c.width,
                "sigma": c.sigma.to_string(),
                "stabilizer_gens": c.stabilizer_gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "window_bound": sc.policy.bound,
            "window_size": window.len(),
            "classes_complete_up_to": classes.complete_up_to,
            "classes": classes.classes.iter().map(|c| json!({
                "rep": c.rep.to_string(),
                "trace": c.trace.to_string(),
                "norm": c.norm,
                "m": c.m,
                "k": c.k,
                "certified": c.certified,
            })).collect::<Vec<_>>(),
        })
    };
    let dump = match pool {
        Some(p) => p.install(work),
        None => work(),
    };
    let text = serde_json::to_string_pretty(&dump).expect("json values serialize");
    if let Err(e) = std::fs::create_dir_all(&common.out_dir)
        .and_then(|_| std::fs::write(common.out_dir.join(format!("{}.enumerate.json", sc.name())), format!("{text}\n")))
    {
        eprintln!("error writing reports to {}: {e}", common.out_dir.display());
        return ExitCode::from(2);
    }
    println!("{text}");
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, only) = match &cli.command {
        Command::Scenarios => {
            for (name, _) in config::BUNDLED {
                println!("{name}");
            }
            return ExitCode::SUCCESS;
        }
        Command::Verify { scenario, common } => {
            let mut common = common.clone();
            if scenario.is_some() {
                common.config = scenario.clone();
            }
            (common, None)
        }
        Command::ZetaCompare(c) => (c.clone(), Some(CheckKind::ZetaCompare)),
        Command::OrbitalCheck(c) => (c.clone(), Some(CheckKind::OrbitalCheck)),
        Command::EisensteinCheck(c) => (c.clone(), Some(CheckKind::EisensteinCheck)),
        Command::OmegaCheck(c) => (c.clone(), Some(CheckKind::OmegaCheck)),
        Command::ScatterAlgebra(c) => (c.clone(), Some(CheckKind::ScatterAlgebra)),
        Command::EstimateSums(c) => (c.clone(), Some(CheckKind::EstimateSums)),
        Command::Enumerate(c) => {
            return match load(c.config.as_ref()) {
                Ok(sc) => enumerate(&sc, c),
                Err(code) => code,
            };
        }
    };
    let sc = match load(common.config.as_ref()) {
        Ok(sc) => sc,
        Err(code) => return code,
    };
    let checks = match only {
        None => sc.file.checks.clone(),
        Some(kind) => {
            // a single-check subcommand needs that check's parameters even if the scenario does not list it
            let mut file = sc.file.clone();
            file.checks = vec![kind];
            match config::build(file) {
                Ok(_) => vec![kind],
                Err(e) => {
                    eprintln!("configuration error: {e}");
                    return ExitCode::from(2);
                }
            }
        }
    };
    execute(&sc, &checks, &common)
}

#[cfg(test)]
mod tests {
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        super::Cli::command().debug_assert();
    }
}
