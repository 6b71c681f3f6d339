use clap::{Parser, Subcommand};
use num_rational::BigRational;
use qshuf::field::{Field, Rational};
use qshuf::hopf::{GeneratorWord, Hopf, PbwDecomposition};
use qshuf::kac::{check_conjecture, kac_exp_series, kac_hua, kac_hua_box, KacPoly};
use qshuf::params::{modp_params, rational_params};
use qshuf::quiver::{sub_vectors, Quiver};
use qshuf::report::{dim_key, parse_dims, ElementFile};
use qshuf::shuffle::{Element, ShuffleAlgebra, Side};
use qshuf::slope::{parse_slope, slope_dim, slope_from_ints, DEFAULT_CEILING};
use qshuf::{Error, Result};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "qshuf", version, about = "Shuffle algebras of doubled quivers, slope subalgebras and Kac polynomials")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Quiver JSON file, or one of jordan, a2, loops:G, kronecker:D
    #[arg(long, global = true)]
    quiver: Option<String>,
    /// Slope vector, e.g. "0,1/2"
    #[arg(long, global = true)]
    slope: Option<String>,
    /// Direction vector with positive entries
    #[arg(long, global = true)]
    theta: Option<String>,
    #[arg(long, global = true)]
    dim: Option<String>,
    #[arg(long, global = true)]
    upto: Option<String>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Number of seeds (or random instances)
    #[arg(long, global = true, default_value_t = 3)]
    trials: usize,
    /// Worker threads; does not affect the output
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Compute ranks over the rationals instead of modulo a prime
    #[arg(long, global = true)]
    exact: bool,
    #[arg(long, global = true, default_value_t = 3)]
    window: i64,
    #[arg(long, global = true, default_value_t = 2)]
    hbound: usize,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Dimensions of the slope pieces B_{m|n} for n <= upto
    Dims,
    /// Kac polynomials via Hua's formula
    Kac,
    /// Plethystic exponential of the Kac polynomials at t = 1
    Exp,
    /// Compare dim B_{0|n} with the coefficients of Exp[A_Q(1, z)]
    CheckConjecture,
    /// Expand a generator word, or multiply two elements
    Shuffle {
        #[arg(long)]
        word: Option<String>,
        /// "+" or "-"
        #[arg(long, default_value = "+")]
        side: String,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        right: Option<PathBuf>,
    },
    /// Pair a plus element with a minus word or minus element
    Pair {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        minus: Option<PathBuf>,
    },
    /// PBW factorization along the ray m + r theta
    Pbw {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        word: Option<String>,
    },
    /// Windowed check of the slope factorization of the canonical tensor
    RmatrixCheck,
}

/// A failed check that is a result rather than an operational error.
struct Finding(Value);

fn ceiling() -> Result<usize> {
    match std::env::var("QSHUF_RESOURCE_CEILING") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("QSHUF_RESOURCE_CEILING={s:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_CEILING),
    }
}

fn load_quiver(spec: Option<&str>) -> Result<Quiver> {
    let spec = spec.ok_or_else(|| Error::InvalidInput("--quiver is required".into()))?;
    let path = std::path::Path::new(spec);
    if path.exists() {
        return Quiver::from_json(&std::fs::read_to_string(path)?);
    }
    let count = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::Parse(format!("quiver {spec:?}: {s:?} after ':' is not a count")))
    };
    match spec.split_once(':') {
        None if spec == "jordan" => Ok(Quiver::jordan()),
        None if spec == "a2" => Ok(Quiver::a2()),
        Some(("loops", g)) => Ok(Quiver::loops(count(g)?)),
        Some(("kronecker", d)) => Ok(Quiver::kronecker(count(d)?)),
        _ => Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("quiver file {spec:?} not found (builtin names: jordan, a2, loops:G, kronecker:D)"),
        ))),
    }
}

/// Prefixes a parse message with the offending flag.
fn flag_error(name: &str, e: Error) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("--{name}: {m}")),
        e => e,
    }
}

fn vector_arg(name: &str, s: Option<&str>, nv: usize, default: i64) -> Result<Vec<BigRational>> {
    let v = match s {
        Some(s) => parse_slope(s).map_err(|e| flag_error(name, e))?,
        None => slope_from_ints(&vec![default; nv]),
    };
    if v.len() != nv {
        return Err(Error::InvalidInput(format!("--{name} has {} entries, the quiver has {nv} vertices", v.len())));
    }
    Ok(v)
}

fn dims_arg(name: &str, s: Option<&str>, nv: usize) -> Result<Vec<usize>> {
    let s = s.ok_or_else(|| Error::InvalidInput(format!("--{name} is required")))?;
    let v = parse_dims(s).map_err(|e| flag_error(name, e))?;
    if v.len() != nv {
        return Err(Error::InvalidInput(format!("--{name} has {} entries, the quiver has {nv} vertices", v.len())));
    }
    Ok(v)
}

fn read_element(path: &PathBuf) -> Result<Element<Rational>> {
    let at = |e: Error| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        e => e,
    };
    ElementFile::from_json(&std::fs::read_to_string(path)?).map_err(at)?.to_element().map_err(at)
}

fn side_arg(s: &str) -> Result<Side> {
    match s {
        "+" | "plus" => Ok(Side::Plus),
        "-" | "minus" => Ok(Side::Minus),
        _ => Err(Error::Parse(format!("--side {s:?}: expected + or -"))),
    }
}

fn seeds(cli: &Cli) -> Vec<u64> {
    (0..cli.trials.max(1) as u64).map(|i| cli.seed + i).collect()
}

fn hopf(q: &Quiver, seed: u64) -> Result<Hopf<Rational>> {
    Ok(Hopf::new(ShuffleAlgebra::new(q.clone(), rational_params(q, seed))?).with_ceiling(ceiling()?))
}

fn kac_json(p: &KacPoly) -> Value {
    json!({
        "n": p.n,
        "coeffs": p.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "at_one": p.at_one().to_string(),
    })
}

fn pbw_json(p: &PbwDecomposition<Rational>) -> Value {
    json!({
        "m": p.m.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "theta": p.theta.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "terms": p.terms.iter().map(|t| json!({
            "coeff": t.coeff.to_exact_string(),
            "factors": t.factors.iter().map(|f| json!({
                "slope": f.slope.to_string(),
                "element": ElementFile::from_element(&f.element),
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "steps": p.steps.iter().map(|s| json!({
            "shape": s.shape,
            "vdeg": s.vdeg,
            "hinge": {"k": s.hinge.k, "e": s.hinge.e, "rho": s.hinge.rho.to_string()},
            "gamma": s.gamma.to_exact_string(),
            "closed_form_agrees": s.closed_form_agrees,
            "basis_dim": s.basis_dim,
        })).collect::<Vec<_>>(),
    })
}

fn run(cli: &Cli) -> Result<std::result::Result<Value, Finding>> {
    let q = load_quiver(cli.quiver.as_deref())?;
    let nv = q.vertex_count();
    let result = match &cli.cmd {
        Cmd::Dims => {
            let m = vector_arg("slope", cli.slope.as_deref(), nv, 0)?;
            let upto = dims_arg("upto", cli.upto.as_deref(), nv)?;
            let ceiling = ceiling()?;
            let seeds = seeds(cli);
            let mut dims = serde_json::Map::new();
            let mut per_seed = serde_json::Map::new();
            let mut agree = true;
            for n in sub_vectors(&upto) {
                let mut row = Vec::new();
                for &s in &seeds {
                    let d = if cli.exact {
                        slope_dim(&ShuffleAlgebra::new(q.clone(), rational_params(&q, s))?, &m, &n, ceiling)?
                    } else {
                        slope_dim(&ShuffleAlgebra::new(q.clone(), modp_params(&q, s)?)?, &m, &n, ceiling)?
                    };
                    row.push(d);
                }
                agree &= row.iter().all(|&d| d == row[0]);
                // a specialization can only drop the rank of the wheel system
                dims.insert(dim_key(&n), json!(row.iter().min()));
                per_seed.insert(dim_key(&n), json!(row));
            }
            json!({
                "slope": m.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "upto": upto,
                "field": if cli.exact { "rational" } else { "mod 2^61-1" },
                "seeds": seeds,
                "dims": dims,
                "per_seed": per_seed,
                "seeds_agree": agree,
            })
        }
        Cmd::Kac => match (&cli.dim, &cli.upto) {
            (Some(_), _) => kac_json(&kac_hua(&q, &dims_arg("dim", cli.dim.as_deref(), nv)?)?),
            (None, Some(_)) => {
                let polys = kac_hua_box(&q, &dims_arg("upto", cli.upto.as_deref(), nv)?)?;
                json!({ "polynomials": polys.iter().map(kac_json).collect::<Vec<_>>() })
            }
            (None, None) => return Err(Error::InvalidInput("kac needs --dim or --upto".into())),
        },
        Cmd::Exp => {
            let (polys, series) = kac_exp_series(&q, &dims_arg("upto", cli.upto.as_deref(), nv)?)?;
            let table: serde_json::Map<String, Value> =
                series.to_table().iter().map(|(n, c)| (dim_key(n), json!(c.to_string()))).collect();
            json!({
                "kac": polys.iter().map(kac_json).collect::<Vec<_>>(),
                "exp": table,
            })
        }
        Cmd::CheckConjecture => {
            let upto = dims_arg("upto", cli.upto.as_deref(), nv)?;
            let r = check_conjecture(&q, &upto, &seeds(cli), ceiling()?, cli.jobs.unwrap_or(1))?;
            let v = serde_json::to_value(&r).map_err(|e| Error::Internal(e.to_string()))?;
            if !r.all_equal {
                return Ok(Err(Finding(v)));
            }
            v
        }
        Cmd::Shuffle { word, side, input, right } => {
            let h = hopf(&q, cli.seed)?;
            let x = match (word, input, right) {
                (Some(w), None, None) => h.expand_word(&GeneratorWord::parse(side_arg(side)?, w)?)?,
                (None, Some(a), Some(b)) => h.algebra().product(&read_element(a)?, &read_element(b)?)?,
                _ => return Err(Error::InvalidInput("shuffle needs --word, or --input and --right".into())),
            };
            json!({
                "element": ElementFile::from_element(&x),
                "wheel_conditions_hold": h.algebra().wheel_check(&x).passed,
            })
        }
        Cmd::Pair { input, word, minus } => {
            let h = hopf(&q, cli.seed)?;
            let f = read_element(input)?;
            match (word, minus) {
                (Some(w), None) => {
                    let w = GeneratorWord::parse(Side::Minus, w)?;
                    json!({ "word": w.letters, "value": h.pairing_word(&f, &w)?.to_exact_string() })
                }
                (None, Some(g)) => {
                    let g = read_element(g)?;
                    let words = h.express_in_words(&g)?;
                    let x = h.pairing_combination(&f, &words)?;
                    let y = h.pair_via_plus_words(&f, &g)?;
                    json!({
                        "value": x.to_exact_string(),
                        "minus_words": words.iter().map(|(c, w)| json!([c.to_exact_string(), w.letters])).collect::<Vec<_>>(),
                        "via_plus_words": y.to_exact_string(),
                        "routes_agree": x == y,
                    })
                }
                _ => return Err(Error::InvalidInput("pair needs exactly one of --word, --minus".into())),
            }
        }
        Cmd::Pbw { input, word } => {
            let m = vector_arg("slope", cli.slope.as_deref(), nv, 0)?;
            let theta = vector_arg("theta", cli.theta.as_deref(), nv, 1)?;
            let h = hopf(&q, cli.seed)?;
            let f = match (input, word) {
                (Some(p), None) => read_element(p)?,
                (None, Some(w)) => h.expand_word(&GeneratorWord::parse(Side::Plus, w)?)?,
                _ => return Err(Error::InvalidInput("pbw needs exactly one of --input, --word".into())),
            };
            pbw_json(&h.pbw_decompose(&f, &m, &theta)?)
        }
        Cmd::RmatrixCheck => {
            let m = vector_arg("slope", cli.slope.as_deref(), nv, 0)?;
            let theta = vector_arg("theta", cli.theta.as_deref(), nv, 1)?;
            let h = hopf(&q, cli.seed)?;
            let r = h.rprime_window_check(&m, &theta, cli.hbound, cli.window)?;
            let cases = h.factorized_pairing_check(&m, &theta, cli.hbound, cli.trials, cli.seed)?;
            let ok = r.passed && cases.iter().all(|c| c.ok);
            let v = json!({ "window_check": r, "factorized_pairing": cases, "passed": ok });
            if !ok {
                return Ok(Err(Finding(v)));
            }
            v
        }
    };
    Ok(Ok(result))
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Dims => "dims",
        Cmd::Kac => "kac",
        Cmd::Exp => "exp",
        Cmd::CheckConjecture => "check-conjecture",
        Cmd::Shuffle { .. } => "shuffle",
        Cmd::Pair { .. } => "pair",
        Cmd::Pbw { .. } => "pbw",
        Cmd::RmatrixCheck => "rmatrix-check",
    }
}

/// Peak resident set size in kB, where the platform reports it.
fn peak_rss_kb() -> Option<u64> {
    let s = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = s.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
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
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    let outcome = run(&cli);
    eprintln!(
        "telemetry: command={} wall_ms={} peak_rss_kb={}",
        command_name(&cli.cmd),
        start.elapsed().as_millis(),
        peak_rss_kb().map_or("unknown".to_string(), |x| x.to_string())
    );
    let (result, code) = match outcome {
        Ok(Ok(v)) => (v, 0),
        Ok(Err(Finding(v))) => (v, 2),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    // the echo leaves out --jobs and --out, which do not change the result
    let report = json!({
        "command": command_name(&cli.cmd),
        "config": {
            "quiver": cli.quiver,
            "slope": cli.slope,
            "theta": cli.theta,
            "dim": cli.dim,
            "upto": cli.upto,
            "seed": cli.seed,
            "trials": cli.trials,
            "exact": cli.exact,
            "window": cli.window,
            "hbound": cli.hbound,
            "resource_ceiling": ceiling().unwrap_or(DEFAULT_CEILING),
            "detail": format!("{:?}", cli.cmd),
        },
        "result": result,
    });
    let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    let written = match &cli.out {
        Some(p) => std::fs::write(p, &text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
