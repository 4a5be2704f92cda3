//! Command-line front end: exact partition-function evaluation,
//! hardness classification, circuit encodings and simulation, gadget
//! chains, oracle-driven cut counting, and value lower bounds.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use cising::classify::{classify_ising, classify_ising_field, classify_tutte_sign, TutteSignPoint};
use cising::corpus::random_connected_multigraph;
use cising::counting::{count_min_cuts_bisection, count_min_cuts_brute, maxcut_brute, maxcut_threshold_check};
use cising::error::CisingError;
use cising::gadgets::{chain_to_negative_unit, parallel_weight, series_weight, TwoTerminalGadget};
use cising::gadgets::effective_weight_with;
use cising::graph::{GraphFile, IsingInstance, RandomClusterInstance};
use cising::iqp::{cz_expand, encode_full, encode_partial, encoding_probability, parse_circuit, parseval_check, EncodingKind};
use cising::numerics::cyclotomic::Cyclotomic;
use cising::numerics::interval::decimal_string;
use cising::numerics::poly::partition_lower_bound;
use cising::numerics::value::ComplexValue;
use cising::numerics::weightspec::{parse_rational, WeightSpec};
use cising::partition::{z_ising_with, z_tutte_rc_with, EvalConfig};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(name = "cising", version, about = "Exact complex-weighted Ising / Tutte partition functions, gadget reductions, and IQP circuit encodings", disable_help_subcommand = true)]
struct Cli {
    /// Working precision in bits for certified enclosures (>= 64).
    #[arg(long, global = true, default_value_t = 256)]
    precision: u32,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for all randomized procedures.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Vertex cap for exhaustive evaluation.
    #[arg(long = "cap-n", global = true, default_value_t = 24)]
    cap_n: usize,
    /// Edge cap for exhaustive evaluation.
    #[arg(long = "cap-m", global = true, default_value_t = 24)]
    cap_m: usize,
    /// Multiplicative oracle noise factor, as a rational p/q in [1, 22/21].
    #[arg(long, global = true, default_value = "22/21")]
    noise: String,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the Ising partition function of a graph file.
    Eval {
        /// Graph file (see the `graph/edge/field/terminals` grammar).
        #[arg(long)]
        graph: PathBuf,
        /// Fallback edge weight for edges without one, e.g. rou(1,4).
        #[arg(long)]
        y: Option<String>,
        /// Fallback vertex weight.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Classify the approximation complexity of a parameter point.
    Classify {
        /// Edge weight y (rou/polarpi/real forms).
        #[arg(long)]
        y: Option<String>,
        /// Vertex weight z: classifies the (y, z) field problem instead.
        #[arg(long)]
        z: Option<String>,
        /// Tutte sign point a/b, classifying (e^{-a*pi*i/b}, e^{a*pi*i/b}).
        #[arg(long = "tutte-sign")]
        tutte_sign: Option<String>,
    },
    /// Encode an IQP circuit file as an Ising instance.
    EncodeIqp {
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Compute an output probability of an IQP circuit exactly.
    SimulateIqp {
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Build a thicken/stretch chain taking y to a weight in (-1, 0).
    GadgetChain {
        #[arg(long)]
        y: String,
    },
    /// Count minimum s-t cuts through a noisy-oracle bisection,
    /// cross-checked against brute force. Terminals come from the file.
    CountMincut {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Decide maxcut >= b from one exact partition value, cross-checked.
    Maxcut {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        b: usize,
        /// Edge weight with 0 < |y| < 1, e.g. real(1/2).
        #[arg(long)]
        y: String,
    },
    /// Certified lower bound on any nonzero partition value at (y[, z]).
    Bounds {
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: Option<String>,
        /// Vertex count of the instances the bound covers.
        #[arg(long)]
        n: u64,
        /// Edge count of the instances the bound covers.
        #[arg(long)]
        m: u64,
    },
    /// Run the built-in cross-identity suites.
    Verify,
}

fn error_exit_code(e: &CisingError) -> u8 {
    match e {
        CisingError::CapExceeded(_) => 3,
        CisingError::Indeterminate(_) => 4,
        _ => 2,
    }
}

fn exact_string(c: &Cyclotomic) -> String {
    if let Some(r) = c.to_rational() {
        return format!("{r}");
    }
    let n = c.order();
    let mut parts = Vec::new();
    for (j, coeff) in c.coeffs().iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let term = if j == 0 {
            format!("{coeff}")
        } else if coeff.is_one() {
            format!("z{n}^{j}")
        } else {
            format!("({coeff})*z{n}^{j}")
        };
        parts.push(term);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        format!("{} [zN = exp(2*pi*i/N)]", parts.join(" + "))
    }
}

/// Decimal digits carried by a given bit precision.
fn digits_for(prec: u32) -> u32 {
    (prec / 4).clamp(12, 60)
}

struct Fmt {
    format: Format,
    precision: u32,
}

impl Fmt {
    /// { exact?, decimal, error_radius } for a complex value.
    fn number(&self, v: &ComplexValue) -> Value {
        let digits = digits_for(self.precision);
        let (re, im) = v.re_im(self.precision);
        let radius = (re.width() + im.width()) / BigRational::from(BigInt::from(2u32));
        let mut obj = Map::new();
        if let ComplexValue::Exact(c) = v {
            obj.insert("exact".into(), json!(exact_string(c)));
        }
        obj.insert(
            "decimal".into(),
            json!(format!(
                "{} + {}i",
                decimal_string(&re.midpoint(), digits),
                decimal_string(&im.midpoint(), digits)
            )),
        );
        obj.insert("error_radius".into(), json!(decimal_string(&radius, digits)));
        Value::Object(obj)
    }

    fn rational(&self, v: &BigRational) -> Value {
        let digits = digits_for(self.precision);
        json!({
            "exact": format!("{v}"),
            "decimal": decimal_string(v, digits),
            "error_radius": "0",
        })
    }

    fn number_text(&self, v: &ComplexValue) -> String {
        match self.number(v) {
            Value::Object(obj) => {
                let decimal = obj["decimal"].as_str().unwrap().to_string();
                match obj.get("exact") {
                    Some(e) => format!("{decimal} (exact: {})", e.as_str().unwrap()),
                    None => format!("{decimal} +- {}", obj["error_radius"].as_str().unwrap()),
                }
            }
            _ => unreachable!(),
        }
    }

    fn emit(&self, json_value: Value, text: String) {
        match self.format {
            Format::Json => println!("{}", serde_json::to_string_pretty(&json_value).unwrap()),
            Format::Text => println!("{text}"),
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, CisingError> {
    std::fs::read_to_string(path)
        .map_err(|e| CisingError::Parse(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8, CisingError> {
    if cli.precision < 64 {
        return Err(CisingError::Parse("precision must be at least 64 bits".into()));
    }
    let fmt = Fmt { format: cli.format, precision: cli.precision };
    let cfg = EvalConfig { cap_n: cli.cap_n, cap_m: cli.cap_m };
    match &cli.cmd {
        Cmd::Eval { graph, y, lambda } => {
            let file = GraphFile::parse(&read_file(graph)?)?;
            let y = y.as_deref().map(WeightSpec::parse).transpose()?;
            let lambda = lambda.as_deref().map(WeightSpec::parse).transpose()?;
            let inst = file.to_ising(
                y.map(|w| w.to_value()).as_ref(),
                lambda.map(|w| w.to_value()).as_ref(),
            )?;
            let z = z_ising_with(&inst, &cfg)?;
            fmt.emit(
                json!({ "command": "eval", "n": inst.graph.n(), "m": inst.graph.m(), "z": fmt.number(&z) }),
                format!("Z = {}", fmt.number_text(&z)),
            );
            Ok(0)
        }
        Cmd::Classify { y, z, tutte_sign } => {
            let result = match (y, z, tutte_sign) {
                (None, None, Some(ts)) => {
                    let (a, b) = ts.split_once('/').ok_or_else(|| {
                        CisingError::Parse("tutte-sign expects a/b".into())
                    })?;
                    let a = a.trim().parse::<u64>().map_err(|_| {
                        CisingError::Parse("tutte-sign expects positive integers".into())
                    })?;
                    let b = b.trim().parse::<u64>().map_err(|_| {
                        CisingError::Parse("tutte-sign expects positive integers".into())
                    })?;
                    classify_tutte_sign(&TutteSignPoint::new(a, b)?)?
                }
                (Some(y), Some(z), None) => {
                    classify_ising_field(&WeightSpec::parse(y)?, &WeightSpec::parse(z)?)?
                }
                (Some(y), None, None) => classify_ising(&WeightSpec::parse(y)?)?,
                _ => {
                    return Err(CisingError::Parse(
                        "pass --y [--z] for weight classification or --tutte-sign a/b".into(),
                    ))
                }
            };
            let witness_json = result.witness.as_ref().map(|c| {
                json!({
                    "steps": c.steps.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                    "effective_weight": fmt.number(&c.effective_weight),
                    "prefactor_per_edge": fmt.number(&c.prefactor_per_edge),
                })
            });
            let mut text = format!(
                "verdict: {} (theorem {}, item {})",
                result.verdict.as_str(),
                result.theorem,
                result.item
            );
            if let Some(c) = &result.witness {
                let steps: Vec<String> = c.steps.iter().map(|s| s.to_string()).collect();
                text.push_str(&format!(
                    "\nwitness chain: [{}] -> effective weight {}",
                    steps.join(", "),
                    fmt.number_text(&c.effective_weight)
                ));
            }
            for note in &result.notes {
                text.push_str(&format!("\nnote: {note}"));
            }
            fmt.emit(
                json!({
                    "command": "classify",
                    "verdict": result.verdict.as_str(),
                    "theorem": result.theorem,
                    "item": result.item,
                    "witness": witness_json,
                    "notes": result.notes,
                }),
                text,
            );
            Ok(0)
        }
        Cmd::EncodeIqp { circuit } => {
            let (c, meas) = parse_circuit(&read_file(circuit)?)?;
            let c = if c.has_cz() { cz_expand(&c)? } else { c };
            let full = meas.measured.len() == c.n;
            let enc = if full {
                let mut outcome = vec![false; c.n];
                for (line, bit) in meas.measured.iter().zip(&meas.outcome) {
                    outcome[*line] = *bit;
                }
                encode_full(&c, &outcome)?
            } else {
                encode_partial(&c, &meas)?
            };
            let kind = match enc.kind {
                EncodingKind::Full => "full",
                EncodingKind::Partial => "partial",
            };
            let edges: Vec<Value> = enc
                .inst
                .graph
                .edges()
                .iter()
                .zip(&enc.inst.phi)
                .map(|(&(u, v), w)| json!({ "u": u, "v": v, "weight": fmt.number(w) }))
                .collect();
            let fields: Vec<Value> = enc.inst.tau.iter().map(|t| fmt.number(t)).collect();
            let mut text = format!(
                "{kind} encoding: {} vertices, {} edges, probability = 2^{} * {}",
                enc.inst.graph.n(),
                enc.inst.graph.m(),
                enc.scale_exponent,
                if full { "|Z|^2" } else { "Z" }
            );
            for (i, (&(u, v), w)) in enc.inst.graph.edges().iter().zip(&enc.inst.phi).enumerate() {
                text.push_str(&format!("\nedge {i}: {u} -- {v}  weight {}", fmt.number_text(w)));
            }
            for (v, t) in enc.inst.tau.iter().enumerate() {
                text.push_str(&format!("\nvertex {v}: field {}", fmt.number_text(t)));
            }
            fmt.emit(
                json!({
                    "command": "encode-iqp",
                    "kind": kind,
                    "n_vertices": enc.inst.graph.n(),
                    "scale_exponent": enc.scale_exponent,
                    "edges": edges,
                    "fields": fields,
                }),
                text,
            );
            Ok(0)
        }
        Cmd::SimulateIqp { circuit } => {
            let (c, meas) = parse_circuit(&read_file(circuit)?)?;
            let c = if c.has_cz() { cz_expand(&c)? } else { c };
            let p = cising::iqp::statevector_prob(&c, &meas)?;
            fmt.emit(
                json!({ "command": "simulate-iqp", "probability": fmt.number(&p) }),
                format!("probability = {}", fmt.number_text(&p)),
            );
            Ok(0)
        }
        Cmd::GadgetChain { y } => {
            let chain = chain_to_negative_unit(&WeightSpec::parse(y)?)?;
            let steps: Vec<String> = chain.steps.iter().map(|s| s.to_string()).collect();
            fmt.emit(
                json!({
                    "command": "gadget-chain",
                    "steps": steps,
                    "start_weight": fmt.number(&chain.start_weight),
                    "effective_weight": fmt.number(&chain.effective_weight),
                    "prefactor_per_edge": fmt.number(&chain.prefactor_per_edge),
                }),
                format!(
                    "chain: [{}]\nstart weight: {}\neffective weight: {}\nprefactor per edge: {}",
                    steps.join(", "),
                    fmt.number_text(&chain.start_weight),
                    fmt.number_text(&chain.effective_weight),
                    fmt.number_text(&chain.prefactor_per_edge)
                ),
            );
            Ok(0)
        }
        Cmd::CountMincut { graph } => {
            let file = GraphFile::parse(&read_file(graph)?)?;
            let (s, t) = file.terminals.ok_or_else(|| {
                CisingError::Parse("graph file needs a `terminals s t` line".into())
            })?;
            let noise = parse_rational(&cli.noise)?;
            let got = count_min_cuts_bisection(&file.graph, s, t, noise, cli.seed)?;
            let brute = count_min_cuts_brute(&file.graph, s, t)?;
            let agree = got == brute;
            fmt.emit(
                json!({
                    "command": "count-mincut",
                    "k": got.k,
                    "count": got.count,
                    "brute_force": { "k": brute.k, "count": brute.count },
                    "cross_check": if agree { "pass" } else { "fail" },
                }),
                format!(
                    "minimum cut size k = {}, count C = {}\nbrute-force cross-check: {}",
                    got.k,
                    got.count,
                    if agree { "pass" } else { "fail" }
                ),
            );
            Ok(if agree { 0 } else { 1 })
        }
        Cmd::Maxcut { graph, b, y } => {
            let file = GraphFile::parse(&read_file(graph)?)?;
            let y = WeightSpec::parse(y)?.to_value();
            let decision = maxcut_threshold_check(&file.graph, *b, &y)?;
            let brute = maxcut_brute(&file.graph);
            let agree = decision == (brute >= *b);
            fmt.emit(
                json!({
                    "command": "maxcut",
                    "b": b,
                    "decision": decision,
                    "brute_force_maxcut": brute,
                    "cross_check": if agree { "pass" } else { "fail" },
                }),
                format!(
                    "maxcut >= {b}: {decision}\nbrute-force maxcut = {brute}\ncross-check: {}",
                    if agree { "pass" } else { "fail" }
                ),
            );
            Ok(if agree { 0 } else { 1 })
        }
        Cmd::Bounds { y, z, n, m } => {
            let y = WeightSpec::parse(y)?;
            let z = z.as_deref().map(WeightSpec::parse).transpose()?;
            let b = partition_lower_bound(&y, z.as_ref(), *n, *m)?;
            fmt.emit(
                json!({
                    "command": "bounds",
                    "bound": fmt.rational(&b.bound),
                    "minimal_polynomial_degree": b.degree,
                    "minimal_polynomial_height": b.height.to_string(),
                    "n": b.size_n,
                    "m": b.size_m,
                }),
                format!(
                    "any nonzero partition value at this point (n <= {}, m <= {}) has |Z| > {}\n(minimal polynomial degree {}, height {})",
                    b.size_n,
                    b.size_m,
                    decimal_string(&b.bound, digits_for(cli.precision)),
                    b.degree,
                    b.height
                ),
            );
            Ok(0)
        }
        Cmd::Verify => run_verify(&fmt, &cfg, cli.seed),
    }
}

/// Quick cross-identity suites over seeded random inputs; one line per
/// suite, nonzero exit if any identity fails.
fn run_verify(fmt: &Fmt, cfg: &EvalConfig, seed: u64) -> Result<u8, CisingError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results: Vec<(&str, bool)> = Vec::new();

    // Ising partition sum vs random-cluster sum at q = 2, gamma = y - 1.
    let mut ok = true;
    for _ in 0..20 {
        let n = rng.gen_range(2..=6);
        let m = rng.gen_range(n - 1..=8);
        let g = random_connected_multigraph(&mut rng, n, m);
        let y = ComplexValue::Exact(Cyclotomic::root_of_unity(16, rng.gen_range(0..16)));
        let ising = IsingInstance::uniform(g.clone(), y.clone(), ComplexValue::one());
        let rc = RandomClusterInstance::uniform(
            g,
            ComplexValue::from_int(2),
            y.sub(&ComplexValue::one()),
        );
        let lhs = z_ising_with(&ising, cfg)?;
        let rhs = z_tutte_rc_with(&rc, cfg)?;
        ok &= lhs.eq_exact(&rhs) == Some(true);
    }
    results.push(("ising-vs-random-cluster", ok));

    // Series/parallel closed forms vs brute-forced effective weights.
    let mut ok = true;
    let q = ComplexValue::from_int(2);
    for _ in 0..10 {
        let w1 = ComplexValue::from_int(rng.gen_range(1..6));
        let w2 = ComplexValue::from_int(rng.gen_range(1..6));
        let path = cising::graph::Multigraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let mut inst = RandomClusterInstance::uniform(path, q.clone(), w1.clone());
        inst.gamma[1] = w2.clone();
        let gadget = TwoTerminalGadget::new(inst, 0, 2)?;
        let series = series_weight(&w1, &w2, &q)?;
        ok &= effective_weight_with(&gadget, cfg)?.eq_exact(&series) == Some(true);

        let par = cising::graph::Multigraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let mut inst = RandomClusterInstance::uniform(par, q.clone(), w1.clone());
        inst.gamma[1] = w2.clone();
        let gadget = TwoTerminalGadget::new(inst, 0, 1)?;
        let parallel = parallel_weight(&w1, &w2);
        ok &= effective_weight_with(&gadget, cfg)?.eq_exact(&parallel) == Some(true);
    }
    results.push(("series-parallel-closed-forms", ok));

    // Circuit probability vs Ising encoding on small random circuits.
    let mut ok = true;
    for _ in 0..5 {
        let n = rng.gen_range(1..=3usize);
        let mut text = format!("iqp {n} theta pi(1,8)\n");
        for _ in 0..rng.gen_range(1..=6) {
            if n >= 2 && rng.gen_bool(0.5) {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n);
                while j == i {
                    j = rng.gen_range(0..n);
                }
                text.push_str(&format!("zz {i} {j}\n"));
            } else {
                text.push_str(&format!("p {}\n", rng.gen_range(0..n)));
            }
        }
        let (c, meas) = parse_circuit(&text)?;
        let direct = cising::iqp::statevector_prob(&c, &meas)?;
        let mut outcome = vec![false; c.n];
        for (line, bit) in meas.measured.iter().zip(&meas.outcome) {
            outcome[*line] = *bit;
        }
        let enc = encode_full(&c, &outcome)?;
        let via_ising = encoding_probability(&enc, cfg)?;
        ok &= direct.eq_exact(&via_ising) == Some(true);
    }
    results.push(("iqp-encoding-identity", ok));

    // Hadamard-transform norm identity on random exact vectors.
    let mut ok = true;
    for _ in 0..5 {
        let len = 1usize << rng.gen_range(1..=3);
        let coeffs: Vec<ComplexValue> = (0..len)
            .map(|_| ComplexValue::Exact(Cyclotomic::root_of_unity(8, rng.gen_range(0..8))))
            .collect();
        let (lhs, rhs) = parseval_check(&coeffs)?;
        ok &= lhs.eq_exact(&rhs) == Some(true);
    }
    results.push(("hadamard-norm-identity", ok));

    let all_ok = results.iter().all(|(_, ok)| *ok);
    let text = results
        .iter()
        .map(|(name, ok)| format!("{name}: {}", if *ok { "pass" } else { "FAIL" }))
        .collect::<Vec<_>>()
        .join("\n");
    let json_results: Vec<Value> = results
        .iter()
        .map(|(name, ok)| json!({ "suite": name, "pass": ok }))
        .collect();
    fmt.emit(json!({ "command": "verify", "suites": json_results }), text);
    Ok(if all_ok { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version by "erroring" with a display request
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e))
        }
    }
}
