mod checks;

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use cleave::blueprint::{
    alpha_preimage_in, blueprint, components, stable_degree, thicken, BlueprintError,
};
use cleave::doc::{
    blueprint_json, blueprint_obj, cleavage_json, parse_cleavage, parse_loops, parse_tree,
    thom_json, DocError,
};
use cleave::geom::{GeomConfig, SphereRegion};
use cleave::operad::random::{random_cleavage, MAX_REJECTIONS};
use cleave::operad::{compose, permute, OperadError, Permutation};
use cleave::umkehr::{umkehr, umkehr_mapping, SupRange, UmkehrConfig, UmkehrError};

use checks::Suite;

#[derive(Parser)]
#[command(name = "cleave", version, about = "Cleavage operads, blueprints and the umkehr map")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Serialize)]
struct Common {
    /// Seed for every random choice
    #[arg(long, global = true, env = "CLEAVE_SEED", default_value_t = 0)]
    seed: u64,
    /// Geometric tolerance
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Write the document here instead of stdout
    #[arg(long, global = true)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Rejection-sample a random cleavage document
    Gen {
        /// Sphere dimension
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=2))]
        n: u64,
        /// Arity
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
    },
    /// Report timbers, blueprint, components, degree and preimage counts
    Inspect {
        cleavage: PathBuf,
        #[arg(long, default_value_t = 2)]
        dim_m: usize,
        #[arg(long, default_value_t = 33)]
        density: usize,
    },
    /// Graft `inner` into timber `i` of `outer`
    Compose { outer: PathBuf, i: usize, inner: PathBuf },
    /// Act by a permutation given as images, e.g. `2,1,3`
    Permute {
        cleavage: PathBuf,
        #[arg(value_delimiter = ',')]
        images: Vec<usize>,
    },
    /// Evaluate the umkehr map on a loops document
    Umkehr {
        cleavage: PathBuf,
        loops: PathBuf,
        #[command(flatten)]
        cfg: UmkehrArgs,
        /// Allow intersecting loops (mapping-space extension, t = 1)
        #[arg(long)]
        mapping: bool,
    },
    /// Run an invariant suite over seeded instances
    Check { suite: Suite },
    /// Blueprint pieces as an OBJ file
    ExportObj { cleavage: PathBuf },
    /// Blueprint faces and thickened samples as JSON
    ExportBlueprint {
        cleavage: PathBuf,
        #[arg(long, default_value_t = 33)]
        density: usize,
    },
}

#[derive(Args, Serialize)]
struct UmkehrArgs {
    #[arg(long, default_value_t = 0.2)]
    epsilon: f64,
    /// Homotopy parameter in [0, 1]
    #[arg(long, default_value_t = 0.0)]
    t: f64,
    /// Samples per blueprint piece
    #[arg(long, default_value_t = 33)]
    density: usize,
    /// Endpoint exclusion radius in loop parameter (default: two sample steps)
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long, value_parser = ["component", "blueprint", "sample"], default_value = "component")]
    sup_range: String,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Doc(#[from] DocError),
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error(transparent)]
    Blueprint(#[from] BlueprintError),
    #[error(transparent)]
    Umkehr(#[from] UmkehrError),
    #[error("check failed: {0}")]
    Check(String),
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

fn emit(common: &Common, text: &str) -> Result<(), CliError> {
    match &common.out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn emit_json(common: &Common, mut doc: Value, run: Value) -> Result<(), CliError> {
    doc["run"] = run;
    emit(common, &serde_json::to_string_pretty(&doc).expect("json serializes"))
}

fn geom_cfg(common: &Common) -> GeomConfig {
    GeomConfig {
        tol: common.tol,
        seed: common.seed,
        ..GeomConfig::default()
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let common = &cli.common;
    let gcfg = geom_cfg(common);
    match cli.command {
        Command::Gen { n, k } => {
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let c = random_cleavage(&mut rng, n as usize, k as usize, &gcfg, MAX_REJECTIONS)?;
            emit_json(common, cleavage_json(&c), json!({ "command": "gen", "common": common, "n": n, "k": k }))
        }
        Command::Inspect { cleavage, dim_m, density } => {
            let c = parse_cleavage(&read(&cleavage)?, &gcfg)?;
            let timbers: Vec<Value> = c
                .timbers()
                .iter()
                .map(|t| {
                    let trace = match &t.trace {
                        SphereRegion::Arcs(arcs) => json!(arcs.iter().map(|a| [a.start, a.end]).collect::<Vec<_>>()),
                        SphereRegion::Sampled(_) => json!({ "measure": t.trace.measure() }),
                    };
                    json!({ "label": t.label, "trace": trace, "centroid": t.centroid.point.coords() })
                })
                .collect();
            let mut report = json!({ "arity": c.arity(), "n": c.sphere_dim(), "timbers": timbers });
            if c.sphere_dim() == 1 {
                let tb = thicken(&c, density)?;
                let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
                for s in &tb.samples {
                    *hist.entry(alpha_preimage_in(&c, &tb.blueprint, &s.point, common.tol)?.len()).or_default() += 1;
                }
                let deg = stable_degree(&c, dim_m)?;
                let bp = blueprint_json(&tb);
                report["faces"] = bp["faces"].clone();
                report["components"] = json!(components(&tb.blueprint));
                report["stable_degree"] = json!({ "dim_m": dim_m, "degree": deg.degree, "padding": deg.padding });
                report["preimage_histogram"] = json!(hist);
            }
            emit_json(common, report, json!({ "command": "inspect", "common": common, "dim_m": dim_m, "density": density }))
        }
        Command::Compose { outer, i, inner } => {
            let outer = parse_cleavage(&read(&outer)?, &gcfg)?;
            let (_, inner) = parse_tree(&read(&inner)?)?;
            let c = compose(&outer, i, &inner)?;
            emit_json(common, cleavage_json(&c), json!({ "command": "compose", "common": common, "i": i }))
        }
        Command::Permute { cleavage, images } => {
            let c = parse_cleavage(&read(&cleavage)?, &gcfg)?;
            let sigma = Permutation::new(images.clone())?;
            let p = permute(&c, &sigma)?;
            emit_json(common, cleavage_json(&p), json!({ "command": "permute", "common": common, "images": images }))
        }
        Command::Umkehr { cleavage, loops, cfg, mapping } => {
            let c = parse_cleavage(&read(&cleavage)?, &gcfg)?;
            let g = parse_loops(&read(&loops)?)?;
            let ucfg = UmkehrConfig {
                epsilon: cfg.epsilon,
                t: cfg.t,
                density: cfg.density,
                eta: cfg.eta,
                tol: common.tol,
                sup_range: match cfg.sup_range.as_str() {
                    "blueprint" => SupRange::Blueprint,
                    "sample" => SupRange::Sample,
                    _ => SupRange::Component,
                },
            };
            ucfg.check(g.metric())?;
            let tb = thicken(&c, ucfg.density)?;
            let v = if mapping {
                umkehr_mapping(&g, &c, &tb, &ucfg)?
            } else {
                umkehr(&g, &c, &tb, &ucfg)?
            };
            let inf = v.infinite_components();
            eprintln!(
                "{} components, at infinity: {:?}, max finite scale {}",
                v.components.len(),
                inf,
                v.max_finite_scale()
            );
            emit_json(
                common,
                thom_json(&v),
                json!({ "command": "umkehr", "common": common, "umkehr": cfg, "mapping": mapping }),
            )
        }
        Command::Check { suite } => match checks::run(suite, common.seed, common.tol) {
            Ok(report) => {
                let name = suite_name(suite);
                println!("PASS {name}: {}", report.summary);
                emit_json(
                    common,
                    json!({ "suite": name, "status": "pass", "stats": report.stats }),
                    json!({ "command": "check", "common": common }),
                )
            }
            Err(f) => {
                let name = suite_name(suite);
                println!("FAIL {name}: {}", f.reason);
                emit_json(
                    common,
                    json!({ "suite": name, "status": "fail", "reason": f.reason, "counterexample": f.counterexample }),
                    json!({ "command": "check", "common": common }),
                )?;
                Err(CliError::Check(f.reason))
            }
        },
        Command::ExportObj { cleavage } => {
            let c = parse_cleavage(&read(&cleavage)?, &gcfg)?;
            emit(common, blueprint_obj(&blueprint(&c)?).trim_end())
        }
        Command::ExportBlueprint { cleavage, density } => {
            let c = parse_cleavage(&read(&cleavage)?, &gcfg)?;
            let tb = thicken(&c, density)?;
            emit_json(common, blueprint_json(&tb), json!({ "command": "export-blueprint", "common": common, "density": density }))
        }
    }
}

fn suite_name(suite: Suite) -> String {
    use clap::ValueEnum;
    suite
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
