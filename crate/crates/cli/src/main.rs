use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cluster_core::examples::{fixture_matrix, run_example, EXAMPLES};
use cluster_core::explorer::{cluster_count, explore, ExploreMode, DEFAULT_CAP};
use cluster_core::formulas::{formula_moves, standard_matrix, verify_formula, Family, Move, Reading, TypeSpec};
use cluster_core::groups::{direct_automorphisms_triv, qaut0_group};
use cluster_core::morphism::{classify, MonomialMap};
use cluster_core::quiver::ValuedQuiver;
use cluster_core::{Error, ExtMatrix, LabeledSeed};

#[derive(Parser)]
#[command(name = "cluster", version, about = "Seeds, mutations, quasi-automorphisms and their groups")]
struct Cli {
    /// Compact single-line JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Matrix file, or the name of a built-in fixture.
    #[arg(long)]
    matrix: Option<String>,
    /// Valued quiver file.
    #[arg(long)]
    quiver: Option<PathBuf>,
    /// Standard type, e.g. A3, D5, AffE6, Rank2:2,3.
    #[arg(long = "type")]
    ty: Option<String>,
    /// Attach principal coefficients.
    #[arg(long)]
    principal: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Mutate along a path of 1-based directions.
    Mutate {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "")]
        path: String,
        /// Also compute cluster variables.
        #[arg(long)]
        seed: bool,
    },
    /// Enumerate the exchange graph.
    Graph {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Classify a monomial map from the input seed to a mutated, relabeled seed.
    Classify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        map: PathBuf,
        /// Mutation path giving the target seed.
        #[arg(long, default_value = "")]
        path: String,
        /// 1-based relabeling applied after the path.
        #[arg(long)]
        relabel: Option<String>,
    },
    /// Automorphism group of the trivial-coefficient algebra.
    Groups {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
        /// Include inverse automorphisms.
        #[arg(long)]
        inverse: bool,
    },
    /// QAut₀ as a subgroup of the trivial automorphism group.
    Qaut {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// Compare closed-form frozen-row predictors with explicit mutation.
    VerifyFormulas {
        #[arg(long = "type")]
        ty: String,
        /// tau, tau_inv, r1 or r2; defaults to the moves with a closed form.
        #[arg(long = "move")]
        mv: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        /// Read closed forms literally, misprints included.
        #[arg(long)]
        printed: bool,
    },
    /// Re-run the built-in worked examples.
    Examples {
        #[arg(long)]
        run: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

enum Outcome {
    Ok(Value),
    Text(String),
    Failed(Value),
}

fn parse_path(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .enumerate()
        .map(|(i, t)| match t.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k - 1),
            _ => Err(Error::Parse { line: 1, column: i + 1, message: format!("bad direction `{}`", t) }),
        })
        .collect()
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::MalformedMatrix(format!("{}: {}", path.display(), e)))
}

fn load(input: &Input) -> Result<ExtMatrix, Error> {
    let b = match (&input.matrix, &input.quiver, &input.ty) {
        (Some(m), None, None) => {
            let p = Path::new(m);
            if p.exists() {
                ExtMatrix::parse(&read(p)?)?
            } else {
                fixture_matrix(m)?
            }
        }
        (None, Some(q), None) => ValuedQuiver::parse(&read(q)?)?.to_matrix()?,
        (None, None, Some(t)) => standard_matrix(&TypeSpec::parse(t)?)?,
        _ => return Err(Error::MalformedMatrix("give exactly one of --matrix, --quiver, --type".into())),
    };
    Ok(if input.principal { b.principal_only().with_principal_coefficients() } else { b })
}

fn type_family(input: &Input) -> Option<(char, usize)> {
    let t = TypeSpec::parse(input.ty.as_deref()?).ok()?;
    let c = match t.family {
        Family::A => 'A',
        Family::B => 'B',
        Family::C => 'C',
        Family::D => 'D',
        Family::E6 | Family::E7 | Family::E8 => 'E',
        Family::F4 => 'F',
        Family::G2 => 'G',
        _ => return None,
    };
    Some((c, t.n))
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Mutate { input, path, seed } => {
            let b = load(input)?;
            let path = parse_path(path)?;
            if *seed {
                let s = LabeledSeed::root(b).mutate_path(&path)?;
                return Ok(Outcome::Ok(s.to_json()));
            }
            let out = b.mutate_path(&path)?;
            if cli.json {
                Ok(Outcome::Ok(json!({
                    "path": path.iter().map(|k| k + 1).collect::<Vec<_>>(),
                    "matrix": out.to_i64_rows(),
                })))
            } else {
                Ok(Outcome::Text(out.to_text()))
            }
        }
        Command::Graph { input, cap, mode, dot } => {
            let b = load(input)?;
            let mode = match mode {
                Some(m) => ExploreMode::parse(m)
                    .ok_or_else(|| Error::MalformedMatrix(format!("unknown mode `{}`", m)))?,
                None => ExploreMode::default_for(b.n()),
            };
            let g = explore(&LabeledSeed::root(b), *cap, mode)?;
            if let Some(p) = dot {
                fs::write(p, g.to_dot()).map_err(|e| Error::MalformedMatrix(format!("{}: {}", p.display(), e)))?;
            }
            let mut v = g.census();
            if let Some((f, n)) = type_family(input) {
                let expected = cluster_count(f, n);
                v["expected_nodes"] = json!(expected);
                if g.finite && expected.is_some_and(|e| e != g.len() as u64) {
                    return Ok(Outcome::Failed(v));
                }
            }
            Ok(Outcome::Ok(v))
        }
        Command::Classify { input, map, path, relabel } => {
            let source = LabeledSeed::root(load(input)?);
            let mut target = source.mutate_path(&parse_path(path)?)?;
            if let Some(r) = relabel {
                let sigma = parse_path(r)?;
                let mut seen = sigma.clone();
                seen.sort();
                if seen != (0..source.n()).collect::<Vec<_>>() {
                    return Err(Error::MalformedMatrix("relabeling must be a permutation".into()));
                }
                target = target.relabeled(&sigma);
            }
            let m = MonomialMap::parse(&read(map)?, source, target)?;
            let c = classify(&m, None)?;
            let mut v = c.to_json();
            v["map"] = m.to_json();
            Ok(Outcome::Ok(v))
        }
        Command::Groups { input, cap, inverse } => {
            let b = load(input)?;
            let g = direct_automorphisms_triv(&LabeledSeed::root(b), *cap, *inverse)?;
            let mut v = g.report.to_json(None);
            v["nodes"] = json!(g.graph.len());
            v["group"] = json!(if *inverse { "aut" } else { "aut_plus" });
            Ok(Outcome::Ok(v))
        }
        Command::Qaut { input, cap } => {
            let b = load(input)?;
            let (r, _) = qaut0_group(&LabeledSeed::root(b), *cap)?;
            Ok(Outcome::Ok(r.to_json()))
        }
        Command::VerifyFormulas { ty, mv, trials, rng_seed, printed } => {
            let t = TypeSpec::parse(ty)?;
            let moves = match mv {
                Some(m) => vec![Move::parse(m)?],
                None => {
                    let f = formula_moves(&t);
                    if !f.is_empty() {
                        f
                    } else if t.family == Family::AffA {
                        vec![Move::R1, Move::R2]
                    } else {
                        vec![Move::Tau, Move::TauInv]
                    }
                }
            };
            let reading = if *printed { Reading::Printed } else { Reading::Corrected };
            let mut reports = Vec::new();
            let mut pass = true;
            for m in moves {
                let r = verify_formula(&t, m, *trials, *rng_seed, reading)?;
                pass &= r.pass();
                reports.push(r.to_json());
            }
            let v = if reports.len() == 1 { reports.pop().unwrap() } else { Value::Array(reports) };
            Ok(if pass { Outcome::Ok(v) } else { Outcome::Failed(v) })
        }
        Command::Examples { run, list } => {
            if *list || run.is_none() {
                return Ok(Outcome::Ok(json!(EXAMPLES)));
            }
            let name = run.as_deref().unwrap();
            let names: Vec<&str> = if name == "all" { EXAMPLES.to_vec() } else { vec![name] };
            let mut out: BTreeMap<String, Value> = BTreeMap::new();
            let mut pass = true;
            for n in names {
                let r = run_example(n)?;
                pass &= r.pass();
                out.insert(n.to_string(), r.to_json());
            }
            let v = if out.len() == 1 { out.into_values().next().unwrap() } else { json!(out) };
            Ok(if pass { Outcome::Ok(v) } else { Outcome::Failed(v) })
        }
    }
}

fn emit(v: &Value, compact: bool) {
    if compact {
        println!("{}", v);
    } else {
        println!("{}", serde_json::to_string_pretty(v).unwrap());
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(Outcome::Ok(v)) => {
            emit(&v, cli.json);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Text(s)) => {
            print!("{}", s);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Failed(v)) => {
            emit(&v, cli.json);
            ExitCode::from(2)
        }
        Err(e) => {
            emit(&json!({"error": e.to_string()}), cli.json);
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}
