use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use etv_core::degeneracy::{
    degeneracy_witness, is_nondegenerate, mixed_volume_zero_criterion, witness_bruteforce_capped, MAX_ENUMERATION,
};
use etv_core::dual_fan::dual_fan_etp;
use etv_core::error::EtvError;
use etv_core::framed::{Etv, FramedSet};
use etv_core::intersection::{bergman_fan, product, stable_support};
use etv_core::json::{
    etv_in, etv_out, family_in, framed_in, framed_out, hpoly_out, pl_in, rat_out, rats_out, test_form_in, vpolytope_in,
    witness_out, EtvInput, FramedSetJson, PLFunctionJson, TestFormJson, VPolytopeJson, VectorFamilyJson,
};
use etv_core::monge::{
    corner_locus, dc_refined, mixed_ma, mixed_volume_oracle, mixed_volume_via_ma, PLFunction, DC_SIGN,
};
use etv_core::polyhedron::VPolytope;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

mod schemas;

const CONVENTIONS_VERSION: &str = "1";
const ORIENTATION_RULE: &str = "outward-first";

#[derive(Parser)]
#[command(
    name = "etv",
    version,
    about = "Exact computations with exponential tropical varieties"
)]
struct Cli {
    /// Seed for the generic shifts of stable intersections.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Print the JSON schemas (all, or the named one) and exit.
    #[arg(long, value_name = "NAME", num_args = 0..=1, default_missing_value = "all")]
    schema: Option<String>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the closedness condition of a framed set.
    ValidateEtp { set: PathBuf },
    /// Boundary of a framed set.
    Boundary { set: PathBuf },
    /// ETV of the k-dimensional dual cones of a polytope.
    DualFan {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Sum of ETVs of equal dimension.
    Add {
        #[arg(required = true, num_args = 2..)]
        sets: Vec<PathBuf>,
    },
    /// Product of two ETVs.
    Product { a: PathBuf, b: PathBuf },
    /// Cells of the stable intersection of two positive ETVs with their parents.
    StableSupport { a: PathBuf, b: PathBuf },
    /// Recession fan of an ETV.
    Bergman { set: PathBuf },
    /// Corner locus of a piecewise linear function.
    CornerLocus { function: PathBuf },
    /// `D_c` of a piecewise linear function times an ETV.
    Dc { function: PathBuf, set: PathBuf },
    /// Mixed Monge-Ampere product of piecewise linear functions.
    MixedMa {
        #[arg(required = true)]
        functions: Vec<PathBuf>,
    },
    /// Mixed volume read off the top Monge-Ampere product.
    MixedVolume {
        #[arg(required = true)]
        bodies: Vec<PathBuf>,
    },
    /// Mixed volume by inclusion-exclusion over Minkowski sums.
    MvOracle {
        #[arg(required = true)]
        bodies: Vec<PathBuf>,
    },
    /// Nondegeneracy of a family of vector sets, with a witness if degenerate.
    Degeneracy {
        #[arg(long)]
        family: PathBuf,
        /// Cross-check against subset enumeration.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Whether a mixed volume vanishes, with the witnessing subspace.
    MvZero {
        #[arg(long, required = true, num_args = 1..)]
        bodies: Vec<PathBuf>,
    },
    /// Pairing of an ETV with a test form.
    EvalCurrent {
        set: PathBuf,
        #[arg(long)]
        form: PathBuf,
    },
    /// Equality of two ETVs as currents.
    Equivalent { a: PathBuf, b: PathBuf },
}

enum Failure {
    Invalid(String, Option<Value>),
    Parse(String),
    Cap(String),
}

impl Failure {
    fn status(&self) -> (&'static str, u8) {
        match self {
            Failure::Invalid(..) => ("invalid", 1),
            Failure::Parse(_) => ("parse-error", 2),
            Failure::Cap(_) => ("resource-cap", 3),
        }
    }
}

impl From<EtvError> for Failure {
    fn from(e: EtvError) -> Self {
        match e {
            EtvError::Parse(_) => Failure::Parse(e.to_string()),
            EtvError::ResourceCap(_) | EtvError::ShiftBudget(_) => Failure::Cap(e.to_string()),
            EtvError::Invalid(_) | EtvError::Dimension(_) | EtvError::NotEtp(_) => {
                Failure::Invalid(e.to_string(), None)
            }
        }
    }
}

type Outcome = Result<Value, Failure>;

struct Caps {
    max_cells: usize,
    max_subsets: usize,
}

fn env_cap(name: &str, default: usize) -> Result<usize, Failure> {
    match std::env::var(name) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Parse(format!("{name} must be a nonnegative integer, got {s:?}"))),
        Err(_) => Ok(default),
    }
}

impl Caps {
    fn from_env() -> Result<Caps, Failure> {
        Ok(Caps {
            max_cells: env_cap("ETV_MAX_CELLS", 10_000)?,
            max_subsets: env_cap("ETV_MAX_SUBSETS", MAX_ENUMERATION)?,
        })
    }

    fn check(&self, x: &Etv) -> Result<(), Failure> {
        if x.cells.len() > self.max_cells {
            return Err(Failure::Cap(format!(
                "{} cells exceed ETV_MAX_CELLS = {}",
                x.cells.len(),
                self.max_cells
            )));
        }
        Ok(())
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_etv(path: &Path, caps: &Caps) -> Result<Etv, Failure> {
    let x = etv_in(&read_json::<EtvInput>(path)?)?;
    caps.check(&x)?;
    Ok(x)
}

fn load_framed(path: &Path) -> Result<FramedSet, Failure> {
    match read_json::<EtvInput>(path)? {
        EtvInput::Framed(f) => Ok(framed_in(&f)?),
        EtvInput::Weighted(w) => Ok(etv_in(&EtvInput::Weighted(w))?.to_framed()),
    }
}

fn load_pl(path: &Path) -> Result<PLFunction, Failure> {
    Ok(pl_in(&read_json::<PLFunctionJson>(path)?)?)
}

fn load_bodies(paths: &[PathBuf]) -> Result<Vec<VPolytope>, Failure> {
    paths
        .iter()
        .map(|p| Ok(vpolytope_in(&read_json::<VPolytopeJson>(p)?)?))
        .collect()
}

fn etv_value(x: &Etv, caps: &Caps) -> Outcome {
    caps.check(x)?;
    Ok(serde_json::to_value(etv_out(x)).expect("serializable"))
}

fn run(cmd: &Command, seed: u64, caps: &Caps) -> Outcome {
    match cmd {
        Command::ValidateEtp { set } => {
            let fs = load_framed(set)?;
            let v = fs.is_etp()?;
            if v.ok {
                Ok(json!({ "etp": true }))
            } else {
                let w = v.witness.unwrap_or_default();
                Err(Failure::Invalid(
                    "not an ETP".into(),
                    Some(json!({ "etp": false, "reason": w })),
                ))
            }
        }
        Command::Boundary { set } => {
            let b = load_framed(set)?.boundary().canonicalize();
            Ok(serde_json::to_value::<FramedSetJson>(framed_out(&b)).expect("serializable"))
        }
        Command::DualFan { polytope, k } => {
            let gamma = vpolytope_in(&read_json::<VPolytopeJson>(polytope)?)?;
            let d = dual_fan_etp(&gamma, *k)?;
            let balanced = d.framed().is_etp()?.ok;
            Ok(json!({
                "etv": etv_value(&d.result, caps)?,
                "faces": d.faces.len(),
                "balanced": balanced,
            }))
        }
        Command::Add { sets } => {
            let mut acc = load_etv(&sets[0], caps)?;
            for p in &sets[1..] {
                acc = acc.add(&load_etv(p, caps)?)?;
            }
            etv_value(&acc, caps)
        }
        Command::Product { a, b } => etv_value(&product(&load_etv(a, caps)?, &load_etv(b, caps)?, seed)?, caps),
        Command::StableSupport { a, b } => {
            let cells = stable_support(&load_etv(a, caps)?, &load_etv(b, caps)?, seed)?;
            if cells.len() > caps.max_cells {
                return Err(Failure::Cap(format!("{} cells exceed ETV_MAX_CELLS", cells.len())));
            }
            Ok(Value::Array(
                cells
                    .iter()
                    .map(|c| {
                        json!({
                            "theta": hpoly_out(&c.theta),
                            "parents": [c.parents.0, c.parents.1],
                            "weight": rat_out(&c.weight),
                        })
                    })
                    .collect(),
            ))
        }
        Command::Bergman { set } => etv_value(&bergman_fan(&load_etv(set, caps)?), caps),
        Command::CornerLocus { function } => etv_value(&corner_locus(&load_pl(function)?)?, caps),
        Command::Dc { function, set } => etv_value(&dc_refined(&load_pl(function)?, &load_etv(set, caps)?)?, caps),
        Command::MixedMa { functions } => {
            let hs = functions.iter().map(|p| load_pl(p)).collect::<Result<Vec<_>, _>>()?;
            etv_value(&mixed_ma(&hs, seed)?, caps)
        }
        Command::MixedVolume { bodies } => {
            Ok(json!({ "mixed_volume": rat_out(&mixed_volume_via_ma(&load_bodies(bodies)?, seed)?) }))
        }
        Command::MvOracle { bodies } => {
            let bs = load_bodies(bodies)?;
            if bs.len() > caps.max_subsets {
                return Err(Failure::Cap(format!(
                    "{} bodies exceed ETV_MAX_SUBSETS = {}",
                    bs.len(),
                    caps.max_subsets
                )));
            }
            let n = bs.len();
            if bs.iter().any(|b| b.ambient() != n || !b.is_bounded()) {
                return Err(Failure::Invalid(
                    format!("expected {n} bounded polytopes in R^{n}"),
                    None,
                ));
            }
            Ok(json!({ "mixed_volume": rat_out(&mixed_volume_oracle(&bs)) }))
        }
        Command::Degeneracy { family, exhaustive } => {
            let f = family_in(&read_json::<VectorFamilyJson>(family)?)?;
            let nondegenerate = is_nondegenerate(&f);
            let witness = if nondegenerate {
                None
            } else {
                Some(degeneracy_witness(&f)?)
            };
            let mut out = json!({
                "nondegenerate": nondegenerate,
                "witness": witness.as_ref().map(witness_out),
            });
            if *exhaustive {
                let w = witness_bruteforce_capped(&f, caps.max_subsets)?;
                if w.is_some() == nondegenerate {
                    return Err(Failure::Invalid("subset enumeration disagrees".into(), Some(out)));
                }
                out["minimal_witness"] = serde_json::to_value(w.as_ref().map(witness_out)).expect("serializable");
            }
            Ok(out)
        }
        Command::MvZero { bodies } => {
            let v = mixed_volume_zero_criterion(&load_bodies(bodies)?)?;
            Ok(json!({
                "zero": v.zero,
                "subset": v.subset,
                "subspace": v.subspace.iter().map(|b| rats_out(b)).collect::<Vec<_>>(),
            }))
        }
        Command::EvalCurrent { set, form } => {
            let x = load_etv(set, caps)?;
            let phi = test_form_in(&read_json::<TestFormJson>(form)?)?;
            Ok(json!({ "value": rat_out(&x.evaluate_current(&phi)?) }))
        }
        Command::Equivalent { a, b } => {
            let (x, y) = (load_etv(a, caps)?, load_etv(b, caps)?);
            Ok(json!({ "equivalent": x.equivalent(&y) }))
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::ValidateEtp { .. } => "validate-etp",
        Command::Boundary { .. } => "boundary",
        Command::DualFan { .. } => "dual-fan",
        Command::Add { .. } => "add",
        Command::Product { .. } => "product",
        Command::StableSupport { .. } => "stable-support",
        Command::Bergman { .. } => "bergman",
        Command::CornerLocus { .. } => "corner-locus",
        Command::Dc { .. } => "dc",
        Command::MixedMa { .. } => "mixed-ma",
        Command::MixedVolume { .. } => "mixed-volume",
        Command::MvOracle { .. } => "mv-oracle",
        Command::Degeneracy { .. } => "degeneracy",
        Command::MvZero { .. } => "mv-zero",
        Command::EvalCurrent { .. } => "eval-current",
        Command::Equivalent { .. } => "equivalent",
    }
}

fn emit(text: &str, output: Option<&Path>) -> ExitCode {
    match output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                eprintln!("etv: cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{text}"),
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(name) = &cli.schema {
        let text = match schemas::render(name) {
            Some(t) => t,
            None => {
                eprintln!("etv: unknown schema {name:?}; known: {}", schemas::names().join(", "));
                return ExitCode::from(2);
            }
        };
        return emit(&text, cli.output.as_deref());
    }
    let Some(cmd) = &cli.command else {
        eprintln!("etv: no command given; see --help");
        return ExitCode::from(2);
    };
    let outcome = Caps::from_env().and_then(|caps| run(cmd, cli.seed, &caps));
    let mut report = json!({
        "command": command_name(cmd),
        "conventions": {
            "version": CONVENTIONS_VERSION,
            "orientation": ORIENTATION_RULE,
            "dc_sign": if DC_SIGN > 0 { "+1" } else { "-1" },
        },
        "seed": cli.seed.to_string(),
    });
    let code = match outcome {
        Ok(result) => {
            report["status"] = "ok".into();
            report["result"] = result;
            0
        }
        Err(f) => {
            let (status, code) = f.status();
            report["status"] = status.into();
            match f {
                Failure::Invalid(msg, witness) => {
                    report["error"] = msg.into();
                    if let Some(w) = witness {
                        report["witness"] = w;
                    }
                }
                Failure::Parse(msg) | Failure::Cap(msg) => report["error"] = msg.into(),
            }
            code
        }
    };
    let text = serde_json::to_string_pretty(&report).expect("serializable");
    let written = emit(&text, cli.output.as_deref());
    if written != ExitCode::SUCCESS {
        return written;
    }
    ExitCode::from(code)
}
