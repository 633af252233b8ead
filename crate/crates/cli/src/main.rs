use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use submod_core::{
    choquet_integral, embed_chain, load_family, load_instance, recover_generator, risk_measure,
    set_epsilon, ternary_embed, verify_choquet_sup, verify_inf_representation_with,
    verify_sup_representation_with, Chain, GroundSet, PointFunction, Scalar, SetFunction, Subset,
    VerificationReport,
};

mod render;

#[derive(Parser)]
#[command(
    name = "submod",
    version,
    about = "Verify chain-extension measures, cores and Choquet integrals"
)]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    /// Tolerance for float-mode comparisons.
    #[arg(long, global = true, env = "SUBMOD_EPSILON")]
    epsilon: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Direction {
    /// Sup for submodular input, inf for supermodular input, sup otherwise.
    Auto,
    Sup,
    Inf,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an instance and report its lattice properties.
    Check { instance: PathBuf },
    /// Build and verify the witness measure for B ⊆ A.
    Core {
        instance: PathBuf,
        /// Carrier A as a point list, e.g. "{0,2}" or "all".
        #[arg(long)]
        a: String,
        /// Target B ⊆ A as a point list.
        #[arg(long)]
        b: String,
        /// Base chain as a point order covering every point, e.g. "2,0,1".
        #[arg(long)]
        chain: Option<String>,
        #[arg(long, value_enum, default_value_t = Direction::Auto)]
        direction: Direction,
    },
    /// Choquet integral of f with its level-set witness.
    Choquet {
        instance: PathBuf,
        /// One value per point, e.g. "[3, 1, 2]" or "1/3,0,2".
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Report the risk measure v(-f) instead.
        #[arg(long)]
        risk: bool,
        /// Random core measures checked against the integral.
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Embed a generating family into one chain and recover its members.
    Embed {
        family: PathBuf,
        /// Recover only member N (1-based).
        #[arg(long)]
        recover: Option<usize>,
    },
    /// Verify every pair B ⊆ A for each instance in a directory.
    Sweep {
        dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Direction::Auto)]
        direction: Direction,
    },
}

/// Input problems, as opposed to claims that fail.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

struct Output {
    json: Value,
    text: String,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(eps) = cli.epsilon {
        if let Err(e) = set_epsilon(eps) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli.command) {
        Ok(out) => {
            if cli.pretty {
                print!("{}", out.text);
            } else {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("json output")
                );
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: &Command) -> Result<Output, InputError> {
    match command {
        Command::Check { instance } => check(instance),
        Command::Core {
            instance,
            a,
            b,
            chain,
            direction,
        } => core(instance, a, b, chain.as_deref(), *direction),
        Command::Choquet {
            instance,
            f,
            risk,
            samples,
            seed,
        } => choquet(instance, f, *risk, *samples, *seed),
        Command::Embed { family, recover } => embed(family, *recover),
        Command::Sweep { dir, direction } => sweep(dir, *direction),
    }
}

fn load(path: &Path) -> anyhow::Result<SetFunction> {
    load_instance(path).with_context(|| format!("loading {}", path.display()))
}

fn check(path: &Path) -> Result<Output, InputError> {
    let v = load(path)?;
    let profile = v.profile();
    let json = json!({
        "n": v.n(),
        "mode": v.mode(),
        "labels": v.ground().labels(),
        "profile": profile,
    });
    let text = render::profile(&v, &profile);
    Ok(Output {
        json,
        text,
        pass: true,
    })
}

fn parse_order(ground: &GroundSet, text: &str) -> anyhow::Result<Vec<usize>> {
    let inner = text
        .trim()
        .trim_start_matches(['[', '{'])
        .trim_end_matches([']', '}']);
    inner
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| Ok(ground.point(t)?))
        .collect()
}

fn resolve(v: &SetFunction, direction: Direction) -> Direction {
    match direction {
        Direction::Auto if !v.is_submodular() && v.is_supermodular() => Direction::Inf,
        Direction::Auto => Direction::Sup,
        d => d,
    }
}

fn verify_pair(
    v: &SetFunction,
    a: Subset,
    b: Subset,
    base: &Chain,
    direction: Direction,
) -> submod_core::Result<VerificationReport> {
    match direction {
        Direction::Inf => verify_inf_representation_with(v, a, b, base),
        _ => verify_sup_representation_with(v, a, b, base),
    }
}

fn core(
    path: &Path,
    a: &str,
    b: &str,
    chain: Option<&str>,
    direction: Direction,
) -> Result<Output, InputError> {
    let v = load(path)?;
    let ground = v.ground();
    let a = ground.parse_points(a).context("--a")?;
    let b = ground.parse_points(b).context("--b")?;
    if !b.is_subset_of(a) {
        return Err(InputError(anyhow::anyhow!(
            "--b {} is not a subset of --a {}",
            ground.format(b),
            ground.format(a)
        )));
    }
    let base = match chain {
        Some(order) => Chain::maximal(ground, &parse_order(ground, order).context("--chain")?)
            .context("--chain")?,
        None => Chain::identity(ground.full()),
    };
    let direction = resolve(&v, direction);
    let report = verify_pair(&v, a, b, &base, direction)?;
    let text = render::report(ground, &report);
    Ok(Output {
        pass: report.pass,
        json: json!({ "direction": direction, "report": report }),
        text,
    })
}

fn parse_values(ground: &GroundSet, v: &SetFunction, text: &str) -> anyhow::Result<PointFunction> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    let values = inner
        .split(',')
        .map(|t| {
            let t = t.trim().trim_matches('"');
            let x: Scalar = t.parse().with_context(|| format!("bad value {t:?}"))?;
            Ok(x.to_mode(v.mode())?)
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    if values.len() != ground.n() {
        bail!(
            "--f has {} values but the instance has {} points",
            values.len(),
            ground.n()
        );
    }
    Ok(PointFunction::new(ground.clone(), values)?)
}

fn choquet(
    path: &Path,
    f: &str,
    risk: bool,
    samples: usize,
    seed: u64,
) -> Result<Output, InputError> {
    let v = load(path)?;
    let f = parse_values(v.ground(), &v, f).context("--f")?;
    let integrand = if risk {
        f.map(|x| -x.clone())
    } else {
        f.clone()
    };
    let report = verify_choquet_sup(&v, &integrand, samples, seed)?;
    let value = if risk {
        risk_measure(&v, &f)?
    } else {
        choquet_integral(&v, &f)?
    };
    let mut text = format!(
        "{} = {value}\n",
        if risk { "risk v(-f)" } else { "choquet v(f)" }
    );
    text.push_str(&render::report(v.ground(), &report));
    Ok(Output {
        pass: report.pass,
        json: json!({ "risk": risk, "value": value, "report": report }),
        text,
    })
}

fn embed(path: &Path, recover: Option<usize>) -> Result<Output, InputError> {
    let family = load_family(path).with_context(|| format!("loading {}", path.display()))?;
    let ground = family.ground();
    let f = ternary_embed(&family);
    let chain = embed_chain(&family);
    let m = family.members().len();
    let indices: Vec<usize> = match recover {
        Some(k) => vec![k],
        None => (1..=m).collect(),
    };
    let mut recovered = Vec::new();
    for k in indices {
        let got = recover_generator(&f, m, k)?;
        let expected = family.members()[k - 1];
        recovered.push(json!({
            "index": k,
            "member": expected,
            "recovered": got,
            "pass": got == expected,
        }));
    }
    let pass = recovered.iter().all(|r| r["pass"] == json!(true));
    let mut text = String::new();
    for (p, x) in f.values().iter().enumerate() {
        text.push_str(&format!("f({}) = {x}\n", ground.label(p)));
    }
    text.push_str(&format!("chain: {}\n", render::sets(ground, chain.sets())));
    text.push_str(&format!(
        "separates points: {}\n",
        family.separates_points()
    ));
    for r in &recovered {
        let k = r["index"].as_u64().expect("index") as usize;
        let got: Subset = serde_json::from_value(r["recovered"].clone()).expect("subset");
        text.push_str(&format!(
            "J_{k}: {} {}\n",
            ground.format(got),
            if r["pass"] == json!(true) {
                "PASS"
            } else {
                "FAIL"
            }
        ));
    }
    Ok(Output {
        json: json!({
            "f": f.values(),
            "chain": chain.sets(),
            "separates_points": family.separates_points(),
            "point_classes": family.point_classes(),
            "recovered": recovered,
            "pass": pass,
        }),
        text,
        pass,
    })
}

fn sweep(dir: &Path, direction: Direction) -> Result<Output, InputError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "json"));
    paths.sort();
    if paths.is_empty() {
        return Err(InputError(anyhow::anyhow!(
            "no .json instances in {}",
            dir.display()
        )));
    }
    let mut files = Vec::new();
    let mut text = String::new();
    for path in &paths {
        let v = load(path)?;
        let d = resolve(&v, direction);
        let base = Chain::identity(v.ground().full());
        let (mut pairs, mut failures) = (0usize, Vec::new());
        for a in v.ground().subsets() {
            for b in a.subsets() {
                pairs += 1;
                let report = verify_pair(&v, a, b, &base, d)?;
                if !report.pass {
                    failures.push(json!({ "a": a, "b": b }));
                }
            }
        }
        let name = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        text.push_str(&format!(
            "{name}: {d:?} {}/{pairs} pass\n",
            pairs - failures.len()
        ));
        files.push(json!({
            "file": name,
            "n": v.n(),
            "direction": d,
            "pairs": pairs,
            "failures": failures,
            "pass": failures.is_empty(),
        }));
    }
    let pass = files.iter().all(|f| f["pass"] == json!(true));
    Ok(Output {
        json: json!({ "files": files, "pass": pass }),
        text,
        pass,
    })
}
