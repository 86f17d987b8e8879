//! Job description and dispatch for the `eqtree` command.

use std::fmt::Write as _;
use std::path::PathBuf;

use eqtree::ideal::{
    flattening_ideal_sum, root_extension_ideal, tree_coordinates, tree_ideal,
    verify_on_distributions, verify_on_model, with_linear_cuts, GeneratorSet, IdealError,
    OracleConfig, StarIdealProvider, VerifyReport,
};
use eqtree::io::{
    parse_representation, parse_stochastic, read_star_file, read_tree, IdealReport, IoError,
};
use eqtree::model::{
    distribution_table, phi, psi, random_representation, StochasticRepresentation,
};
use eqtree::toric::{lattice_relations_up_to_degree, monomial_certificate, ToricError};
use eqtree::tree::SpacedTree;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNRESOLVED: i32 = 3;

/// Monomials enumerated by `toric` before giving up.
const LATTICE_BUDGET: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Ideal,
    FlattenIdeal,
    Evaluate,
    Phi,
    Toric,
    Verify,
    RootExtendIdeal,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Ideal => "ideal",
            Command::FlattenIdeal => "flatten-ideal",
            Command::Evaluate => "evaluate",
            Command::Phi => "phi",
            Command::Toric => "toric",
            Command::Verify => "verify",
            Command::RootExtendIdeal => "root-extend-ideal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProviderSpec {
    Builtin,
    File(PathBuf),
    Oracle,
}

impl std::str::FromStr for ProviderSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "builtin" => Ok(ProviderSpec::Builtin),
            "oracle" => Ok(ProviderSpec::Oracle),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(ProviderSpec::File(path.into())),
                _ => Err(format!(
                    "unknown provider '{s}' (expected builtin, file:PATH or oracle)"
                )),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub tree: PathBuf,
    pub command: Command,
    pub provider: ProviderSpec,
    pub degree_bound: u32,
    pub seed: u64,
    pub samples: usize,
    pub format: Format,
    pub emit_linear_cuts: bool,
    /// Root for `phi` and `root-extend-ideal`; defaults to the first
    /// internal vertex.
    pub root: Option<String>,
    /// Representation file for `evaluate` and `phi`.
    pub representation: Option<PathBuf>,
}

impl JobSpec {
    pub fn new(tree: impl Into<PathBuf>, command: Command) -> Self {
        JobSpec {
            tree: tree.into(),
            command,
            provider: ProviderSpec::Oracle,
            degree_bound: 2,
            seed: 0,
            samples: 100,
            format: Format::Text,
            emit_linear_cuts: false,
            root: None,
            representation: None,
        }
    }
}

/// What a run prints and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Unresolved(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<IdealError> for Failure {
    fn from(e: IdealError) -> Self {
        match e {
            IdealError::UnresolvedStar(s) => Failure::Unresolved(s),
            e => Failure::Input(e.to_string()),
        }
    }
}

impl From<ToricError> for Failure {
    fn from(e: ToricError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<eqtree::model::ModelError> for Failure {
    fn from(e: eqtree::model::ModelError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn diagnostic(kind: &str, message: &str) -> String {
    let v = serde_json::json!({ "error": kind, "message": message });
    format!("{v}\n")
}

pub fn run(job: &JobSpec) -> Outcome {
    match dispatch(job) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Input(m)) => Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: diagnostic("input", &m),
        },
        Err(Failure::Unresolved(s)) => Outcome {
            code: EXIT_UNRESOLVED,
            stdout: String::new(),
            stderr: diagnostic(
                "unresolved-star",
                &format!("no generators known for the star {s}"),
            ),
        },
    }
}

fn provider(job: &JobSpec) -> Result<StarIdealProvider, Failure> {
    Ok(match &job.provider {
        ProviderSpec::Builtin => StarIdealProvider::builtin(),
        ProviderSpec::Oracle => StarIdealProvider::oracle(OracleConfig {
            degree: job.degree_bound,
            seed: job.seed,
            ..OracleConfig::default()
        }),
        ProviderSpec::File(path) => StarIdealProvider::with_entries(
            read_star_file(path)?,
            format!("file:{}", path.display()),
        ),
    })
}

fn root_of(job: &JobSpec, t: &SpacedTree) -> Result<String, Failure> {
    match &job.root {
        Some(r) if t.contains(r) => Ok(r.clone()),
        Some(r) => Err(Failure::Input(format!("no vertex named '{r}'"))),
        None => t
            .internal()
            .into_iter()
            .next()
            .ok_or_else(|| Failure::Input("the tree has no internal vertex".into())),
    }
}

fn dispatch(job: &JobSpec) -> Result<(i32, String), Failure> {
    if job.degree_bound == 0 {
        return Err(Failure::Input("--degree-bound must be at least 1".into()));
    }
    let t = read_tree(&job.tree)?;
    match job.command {
        Command::Ideal | Command::FlattenIdeal | Command::RootExtendIdeal => {
            let p = provider(job)?;
            let set = match job.command {
                Command::Ideal => tree_ideal(&t, &p)?,
                Command::FlattenIdeal => flattening_ideal_sum(&t, &p)?,
                _ => root_extension_ideal(&t, &root_of(job, &t)?, &p)?,
            };
            let set = if job.emit_linear_cuts && job.command != Command::RootExtendIdeal {
                with_linear_cuts(&t, &set)
            } else {
                set
            };
            Ok((EXIT_OK, listing(job, &p, &set)))
        }
        Command::Evaluate => evaluate(job, &t),
        Command::Phi => phi_table(job, &t),
        Command::Toric => toric(job, &t),
        Command::Verify => verify(job, &t),
    }
}

fn listing(job: &JobSpec, p: &StarIdealProvider, set: &GeneratorSet) -> String {
    let report = IdealReport::new(job.command.name(), &p.name, Some(job.degree_bound), set);
    match job.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn evaluate(job: &JobSpec, t: &SpacedTree) -> Result<(i32, String), Failure> {
    let a = match &job.representation {
        Some(path) => parse_representation(&read(path)?, t)?,
        None => random_representation(t, job.seed, true, 9),
    };
    let coords = tree_coordinates(t);
    let values = coords.coords(psi(t, &a).data());
    let rows: Vec<(String, String)> = coords
        .labels()
        .iter()
        .zip(&values)
        .map(|(l, v)| (l.to_string(), v.to_string()))
        .collect();
    Ok((EXIT_OK, table(job, "coordinates", &rows)))
}

fn phi_table(job: &JobSpec, t: &SpacedTree) -> Result<(i32, String), Failure> {
    let s = match &job.representation {
        Some(path) => parse_stochastic(&read(path)?, t)?,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(job.seed);
            StochasticRepresentation::random(t, &root_of(job, t)?, &mut rng, true)?
        }
    };
    let dist = distribution_table(t, &phi(t, &s)?)?;
    let rows: Vec<(String, String)> = dist
        .iter()
        .map(|(labels, v)| (labels.join(","), v.to_string()))
        .collect();
    Ok((EXIT_OK, table(job, "distribution", &rows)))
}

fn table(job: &JobSpec, key: &str, rows: &[(String, String)]) -> String {
    match job.format {
        Format::Text => rows.iter().fold(String::new(), |mut out, (l, v)| {
            let _ = writeln!(out, "{l}\t{v}");
            out
        }),
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = rows
                .iter()
                .map(|(l, v)| (l.clone(), serde_json::Value::String(v.clone())))
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&serde_json::json!({ key: map }))
                    .expect("serializable")
            )
        }
    }
}

fn toric(job: &JobSpec, t: &SpacedTree) -> Result<(i32, String), Failure> {
    let cert = monomial_certificate(t)?;
    let binomials = lattice_relations_up_to_degree(&cert.matrix, job.degree_bound, LATTICE_BUDGET)?;
    let vars = eqtree::toric::certificate_vars(&cert);
    let texts: Vec<String> = binomials.iter().map(|b| b.display(&vars)).collect();
    let header: serde_json::Value =
        serde_json::from_str(&cert.matrix.header_json()).expect("valid header");
    Ok((
        EXIT_OK,
        match job.format {
            Format::Text => {
                let mut out = String::new();
                let _ = writeln!(out, "{header}");
                out.push_str(&cert.matrix.to_csv());
                let _ = writeln!(
                    out,
                    "# {} binomials up to degree {}",
                    texts.len(),
                    job.degree_bound
                );
                for b in &texts {
                    let _ = writeln!(out, "{b}");
                }
                out
            }
            Format::Json => {
                let v = serde_json::json!({ "header": header, "csv": cert.matrix.to_csv(), "degree_bound": job.degree_bound, "binomials": texts });
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&v).expect("serializable")
                )
            }
        },
    ))
}

fn verify(job: &JobSpec, t: &SpacedTree) -> Result<(i32, String), Failure> {
    let p = provider(job)?;
    let root = root_of(job, t)?;
    let mut results: Vec<(&str, usize, VerifyReport)> = Vec::new();
    let set = tree_ideal(t, &p)?;
    results.push((
        "ideal",
        set.len(),
        verify_on_model(t, &set, job.samples, job.seed)?,
    ));
    let flat = flattening_ideal_sum(t, &p)?;
    results.push((
        "flatten-ideal",
        flat.len(),
        verify_on_model(t, &flat, job.samples, job.seed)?,
    ));
    let ext = root_extension_ideal(t, &root, &p)?;
    results.push((
        "root-extend-ideal",
        ext.len(),
        verify_on_distributions(t, &root, &ext, job.samples, job.seed)?,
    ));
    let passed = results.iter().all(|(_, _, r)| r.passed());
    let out = match job.format {
        Format::Text => results.iter().fold(String::new(), |mut out, (name, n, r)| {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{status} {name}: {n} generators, {} samples, {} nonzero values",
                r.samples,
                r.failures.len()
            );
            out
        }),
        Format::Json => {
            let items: Vec<serde_json::Value> = results
                .iter()
                .map(|(name, n, r)| serde_json::json!({ "construction": name, "generators": n, "samples": r.samples, "failures": r.failures, "passed": r.passed() }))
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(
                    &serde_json::json!({ "seed": job.seed, "results": items })
                )
                .expect("serializable")
            )
        }
    };
    Ok((if passed { EXIT_OK } else { EXIT_VERIFY }, out))
}
