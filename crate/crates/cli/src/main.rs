//! `frobsplit`: batch verification driver. Every run writes one JSON report.
//!
//! Exit status: 0 when the report passes, 1 when it records a counterexample,
//! 2 on usage or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use frobsplit_core::modules::{
    dominant_weights, verify_characters, verify_donkin, verify_k_invariants, verify_roundtrip,
    weyl_module, WeightModule,
};
use frobsplit_core::root_datum::z_extension_postconditions;
use frobsplit_core::sampled::{verify_action_oracle, verify_associativity, verify_mu0, verify_torus_oracle};
use frobsplit_core::torus::{verify_lemma_1_1, Lemma11Params, Lemma11Part};
use frobsplit_core::{
    corpus, verify_borel, verify_compat, verify_theorem, AlgebraContext, CoefficientRing, Integers,
    PrimeField, RootDatum, TheoremMode, TorusProjection, VerificationReport,
};

#[derive(Parser)]
#[command(name = "frobsplit", version, about = "Exact checks for the Frobenius splitting of rank-one hyperalgebras")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Root data: axioms, z-extensions, isomorphisms.
    #[command(subcommand)]
    Rootdatum(RootdatumCmd),
    /// Identity sweeps in the torus and rank-one algebras.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Weight-module operations.
    #[command(subcommand)]
    Module(ModuleCmd),
}

#[derive(Args, Clone)]
struct DatumArg {
    /// Root datum: a JSON file, a name in $FROBSPLIT_CORPUS, or a built-in name.
    #[arg(long)]
    datum: String,
}

#[derive(Args, Clone)]
struct FieldArg {
    #[arg(long)]
    p: u64,
}

#[derive(Args, Clone)]
struct SliceArg {
    /// Simple root to slice along when the datum has semisimple rank > 1.
    #[arg(long)]
    root: Option<usize>,
}

#[derive(Args, Clone)]
struct SeedArgs {
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum RootdatumCmd {
    Validate {
        #[command(flatten)]
        datum: DatumArg,
    },
    ZExtend {
        #[command(flatten)]
        datum: DatumArg,
        /// Also search for an isomorphism with this datum.
        #[arg(long)]
        iso_against: Option<String>,
        #[arg(long, default_value_t = 2)]
        bound: i64,
    },
    Iso {
        #[command(flatten)]
        datum: DatumArg,
        #[arg(long)]
        against: String,
        #[arg(long, default_value_t = 2)]
        bound: i64,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// The three torus identities.
    Lemma11 {
        #[command(flatten)]
        field: FieldArg,
        /// Torus rank.
        #[arg(long, default_value_t = 1)]
        rank: usize,
        /// a and c range over [-range, range].
        #[arg(long, default_value_t = 6)]
        range: i64,
        /// Largest b (default 3p + 2).
        #[arg(long)]
        b_max: Option<u32>,
    },
    /// Conjugation of φ⁰ binomials past E^(pa), F^(pa).
    Borel {
        #[command(flatten)]
        datum: DatumArg,
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        slice: SliceArg,
        /// a, b ≤ deg and c ∈ [-deg, deg].
        #[arg(long, default_value_t = 3)]
        deg: u32,
    },
    /// φ multiplicative, Dist(F)∘φ = id, and the E F μ₀ expansion.
    Theorem {
        #[command(flatten)]
        datum: DatumArg,
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        slice: SliceArg,
        #[arg(long)]
        deg: u32,
        /// Sample this many pairs instead of sweeping all of them.
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Projection from the z-extension commutes with φ.
    Compat {
        #[command(flatten)]
        datum: DatumArg,
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        deg: Option<u32>,
    },
    /// μ₀ idempotent, divisibility indicator, commuting with E^(pn), F^(pn).
    Mu0 {
        #[command(flatten)]
        datum: DatumArg,
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        slice: SliceArg,
    },
    /// Torus products against pointwise values on [0, p³)^rank.
    Oracle {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Associativity on random monomial triples (over ℤ without --p).
    Assoc {
        #[command(flatten)]
        datum: DatumArg,
        #[arg(long)]
        p: Option<u64>,
        #[command(flatten)]
        slice: SliceArg,
        #[arg(long, default_value_t = 4)]
        deg: u32,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Action matrices on ⊕ V(n), n ≤ n-max, are multiplicative.
    Action {
        #[command(flatten)]
        datum: DatumArg,
        #[arg(long)]
        p: Option<u64>,
        #[command(flatten)]
        slice: SliceArg,
        #[arg(long, default_value_t = 8)]
        n_max: i64,
        #[command(flatten)]
        seed: SeedArgs,
    },
}

#[derive(Subcommand)]
enum ModuleCmd {
    /// Frobenius contraction of a module file, or of a Weyl module.
    Contract {
        #[command(flatten)]
        datum: DatumArg,
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        slice: SliceArg,
        /// Module JSON file.
        #[arg(long, conflicts_with = "highest")]
        module: Option<PathBuf>,
        /// Highest weight of a Weyl module, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        highest: Option<String>,
    },
    /// contract(frobenius_twist(V(n))) = V(n).
    Roundtrip {
        #[command(flatten)]
        datum: DatumArg,
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        slice: SliceArg,
        #[arg(long, default_value_t = 12)]
        n_max: i64,
    },
    /// dim (St ⊗ St ⊗ V(n))^{G₁} = dim contract(V(n)) for SL₂.
    Donkin {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, default_value_t = 10)]
        n_max: i64,
    },
    /// Weyl and tilting decompositions of contracted SL₂ characters.
    Characters {
        #[command(flatten)]
        field: FieldArg,
        /// Largest n (default 3p).
        #[arg(long)]
        n_max: Option<i64>,
    },
    /// Contraction commutes with K-invariants on the z-extension corpus.
    KInvariants {
        #[command(flatten)]
        field: FieldArg,
    },
}

/// Input problems map to exit status 2.
struct InputError(anyhow::Error);

fn input<T, E: Into<anyhow::Error>>(r: std::result::Result<T, E>) -> std::result::Result<T, InputError> {
    r.map_err(|e| InputError(e.into()))
}

fn load_datum(name: &str) -> Result<RootDatum> {
    let path = Path::new(name);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {name}"))?;
        return RootDatum::from_json(&text).with_context(|| format!("parsing {name}"));
    }
    if let Some(dir) = std::env::var_os("FROBSPLIT_CORPUS") {
        let dir = PathBuf::from(dir);
        for candidate in [dir.join(name), dir.join(format!("{name}.json"))] {
            if candidate.is_file() {
                let text = fs::read_to_string(&candidate)
                    .with_context(|| format!("reading {}", candidate.display()))?;
                return RootDatum::from_json(&text)
                    .with_context(|| format!("parsing {}", candidate.display()));
            }
        }
    }
    corpus::get(name).ok_or_else(|| anyhow!("unknown datum {name:?}"))
}

fn field(p: u64) -> Result<PrimeField> {
    PrimeField::new(p).map_err(|_| anyhow!("p must be prime (got {p})"))
}

fn context<R: CoefficientRing>(datum: &RootDatum, ring: R, slice: &SliceArg) -> Result<Arc<AlgebraContext<R>>> {
    Ok(match slice.root {
        Some(k) => AlgebraContext::simple_root_slice(datum, k, ring)?,
        None => AlgebraContext::new(datum, ring)?,
    })
}

fn parse_weight(text: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(|s| s.trim().parse::<i64>().with_context(|| format!("bad weight entry {s:?}")))
        .collect()
}

fn run(cli: &Cli) -> std::result::Result<VerificationReport, InputError> {
    match &cli.command {
        Command::Rootdatum(cmd) => rootdatum(cmd),
        Command::Verify(cmd) => verify(cmd),
        Command::Module(cmd) => module(cmd),
    }
}

fn rootdatum(cmd: &RootdatumCmd) -> std::result::Result<VerificationReport, InputError> {
    Ok(match cmd {
        RootdatumCmd::Validate { datum } => input(load_datum(&datum.datum))?.validate(),
        RootdatumCmd::ZExtend { datum, iso_against, bound } => {
            let base = input(load_datum(&datum.datum))?;
            let (ext, proj) = input(base.z_extend())?;
            let mut report = z_extension_postconditions(&base, &ext, &proj);
            let mut result = json!({
                "extended": serde_json::from_str::<serde_json::Value>(&ext.to_json()).expect("datum serializes"),
                "projection": proj.matrix,
            });
            if let Some(other) = iso_against {
                let other = input(load_datum(other))?;
                report = report.param("iso_against", &other.name).param("bound", bound);
                report.trial();
                match ext.find_isomorphism(&other, *bound) {
                    Some(m) => result["isomorphism"] = json!(m),
                    None => report.fail(json!({"isomorphism": "none within bound", "bound": bound})),
                }
            }
            report.set_result(result);
            report.finish()
        }
        RootdatumCmd::Iso { datum, against, bound } => {
            let a = input(load_datum(&datum.datum))?;
            let b = input(load_datum(against))?;
            let mut report = VerificationReport::new("rootdatum.iso")
                .param("datum", &a.name)
                .param("against", &b.name)
                .param("bound", bound);
            report.trial();
            match a.find_isomorphism(&b, *bound) {
                Some(m) => report.set_result(json!({"isomorphism": m})),
                None => report.fail(json!({"isomorphism": "none within bound", "bound": bound})),
            }
            report.finish()
        }
    })
}

fn verify(cmd: &VerifyCmd) -> std::result::Result<VerificationReport, InputError> {
    Ok(match cmd {
        VerifyCmd::Lemma11 { field: f, rank, range, b_max } => {
            input(field(f.p))?;
            let params = Lemma11Params {
                p: f.p,
                rank: *rank,
                a_range: (-range, *range),
                c_range: (-range, *range),
                b_max: b_max.unwrap_or(3 * f.p as u32 + 2),
                parts: vec![Lemma11Part::I, Lemma11Part::Ii, Lemma11Part::Iii],
            };
            input(verify_lemma_1_1(&params))?
        }
        VerifyCmd::Borel { datum, field: f, slice, deg } => {
            let ctx = input(context(&input(load_datum(&datum.datum))?, input(field(f.p))?, slice))?;
            verify_borel(&ctx, *deg, *deg, (-(*deg as i64), *deg as i64))
        }
        VerifyCmd::Theorem { datum, field: f, slice, deg, seed } => {
            let ctx = input(context(&input(load_datum(&datum.datum))?, input(field(f.p))?, slice))?;
            let mode = match seed.trials {
                Some(samples) => TheoremMode::Sampled { samples, seed: seed.seed },
                None => TheoremMode::Exhaustive,
            };
            verify_theorem(&ctx, *deg, mode)
        }
        VerifyCmd::Compat { datum, field: f, deg } => {
            let fp = input(field(f.p))?;
            let base = input(load_datum(&datum.datum))?;
            let (ext, m) = input(base.z_extend())?;
            let proj = input(TorusProjection::from_morphism(&m))?;
            let deg = deg.unwrap_or(2 * f.p as u32);
            // PBW slices only exist in semisimple rank one
            let slices = match (AlgebraContext::new(&ext, fp.clone()), AlgebraContext::new(&base, fp)) {
                (Ok(hat), Ok(b)) => Some((hat, b)),
                _ => None,
            };
            input(verify_compat(&proj, f.p, deg, slices.as_ref().map(|(h, b)| (h, b))))?
        }
        VerifyCmd::Mu0 { datum, field: f, slice } => {
            let ctx = input(context(&input(load_datum(&datum.datum))?, input(field(f.p))?, slice))?;
            verify_mu0(&ctx)
        }
        VerifyCmd::Oracle { field: f, rank, seed } => {
            input(field(f.p))?;
            input(verify_torus_oracle(f.p, *rank, seed.trials.unwrap_or(1000), seed.seed))?
        }
        VerifyCmd::Assoc { datum, p, slice, deg, seed } => {
            let d = input(load_datum(&datum.datum))?;
            let trials = seed.trials.unwrap_or(500);
            match p {
                Some(p) => verify_associativity(&input(context(&d, input(field(*p))?, slice))?, *deg, trials, seed.seed),
                None => verify_associativity(&input(context(&d, Integers, slice))?, *deg, trials, seed.seed),
            }
        }
        VerifyCmd::Action { datum, p, slice, n_max, seed } => {
            let d = input(load_datum(&datum.datum))?;
            let trials = seed.trials.unwrap_or(200);
            match p {
                Some(p) => input(verify_action_oracle(
                    &input(context(&d, input(field(*p))?, slice))?,
                    *n_max,
                    trials,
                    seed.seed,
                ))?,
                None => input(verify_action_oracle(&input(context(&d, Integers, slice))?, *n_max, trials, seed.seed))?,
            }
        }
    })
}

fn module(cmd: &ModuleCmd) -> std::result::Result<VerificationReport, InputError> {
    Ok(match cmd {
        ModuleCmd::Contract { datum, field: f, slice, module, highest } => {
            let ctx = input(context(&input(load_datum(&datum.datum))?, input(field(f.p))?, slice))?;
            let m = match (module, highest) {
                (Some(path), _) => {
                    let text = input(fs::read_to_string(path).with_context(|| format!("reading {}", path.display())))?;
                    input(WeightModule::from_json(&ctx, &text))?
                }
                (None, Some(w)) => input(weyl_module(&ctx, &input(parse_weight(w))?))?,
                (None, None) => return Err(InputError(anyhow!("give --module or --highest"))),
            };
            let mut report = VerificationReport::new("module.contract")
                .param("context", ctx.name())
                .param("p", f.p)
                .param("dim", m.dim());
            let valid = m.validate();
            report.absorb(valid);
            let contracted = m.contract();
            report.absorb(contracted.validate());
            report.set_result(contracted.to_json_value());
            report.finish()
        }
        ModuleCmd::Roundtrip { datum, field: f, slice, n_max } => {
            let ctx = input(context(&input(load_datum(&datum.datum))?, input(field(f.p))?, slice))?;
            input(verify_roundtrip(&ctx, &dominant_weights(&ctx, *n_max)))?
        }
        ModuleCmd::Donkin { field: f, n_max } => {
            input(field(f.p))?;
            input(verify_donkin(f.p, *n_max))?
        }
        ModuleCmd::Characters { field: f, n_max } => {
            input(field(f.p))?;
            input(verify_characters(f.p, n_max.unwrap_or(3 * f.p as i64)))?
        }
        ModuleCmd::KInvariants { field: f } => {
            input(field(f.p))?;
            input(verify_k_invariants(f.p))?
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let report = match run(&cli) {
        Ok(r) => r,
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let text = report.to_json();
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text + "\n") {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{text}"),
    }
    eprintln!("{}", report.summary_line());
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
