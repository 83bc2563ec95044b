use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ssbve::approx::{
    les_trim, snap_alpha, solve_planted, solve_worst_case_report, trivial_ksubset, WorstCaseConfig,
};
use ssbve::bench::{run_benchmark, Suite};
use ssbve::certs::{
    build_sa_certificate, build_sdp_certificate, build_sdp_instance, hardness_gap_calculator,
    parse_rational, to_f64, verify_sa_certificate, verify_sdp_certificate, GapRegime, SaMode, VerifyReport,
};
use ssbve::exact::exact_ssbve;
use ssbve::gen::{gen_gap_instance, gen_hdvr, gen_planted, gen_random_bipartite, HdvrMode, HdvrSpec, PlantedSpec};
use ssbve::io::{parse_mku, parse_ssbve, parse_ssve, write_mku, write_ssbve};
use ssbve::reductions::mku_to_ssbve;
use ssbve::ssve::{ssve_via_sse, SseOracle};
use ssbve::{Error, Solution, SsbveInstance};

const EXIT_VERIFY: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(name = "ssbve", version, about = "Small set bipartite vertex expansion toolkit")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for parallel suites (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Random,
    Gap,
    Planted,
    Hdvr,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Worst,
    Planted,
    Baseline,
    Les,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Sdp,
    Sa,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Brute,
    Sweep,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance in the text format.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Right side size (random, gap).
        #[arg(long)]
        s: Option<usize>,
        /// Edge probability (random).
        #[arg(long)]
        p: Option<f64>,
        /// Expected left degree (gap).
        #[arg(long)]
        dl: Option<f64>,
        /// Budget written into the header.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        /// Left degree (planted) or hyperedge arity (hdvr).
        #[arg(long)]
        r: Option<usize>,
        /// Emit the planted hypergraph (hdvr).
        #[arg(long)]
        plant: bool,
    },
    /// Solve an SSBVE (or M$k$U) instance.
    Solve {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 3)]
        qmax: u32,
        #[arg(long = "branch-cap", default_value_t = 256)]
        branch_cap: usize,
        /// Log-density `p/q` for the planted algorithm (default: snapped from the instance).
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        q: Option<u32>,
    },
    /// Build and verify an integrality-gap certificate.
    Certify {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        /// Budget (SDP only; SA derives its own).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        dl: f64,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        /// `exhaustive` or `sampled:N`.
        #[arg(long, default_value = "exhaustive")]
        mode: String,
        /// Samples for box and structural checks (SA).
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Small set vertex expansion through an edge-expansion oracle.
    Ssve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = OracleArg::Brute)]
        oracle: OracleArg,
    },
    /// Hardness gap exponents.
    Gapcalc {
        #[arg(long)]
        r: usize,
        #[arg(long, default_value = "0")]
        eps: String,
        #[arg(long, default_value = "by_m")]
        regime: String,
    },
    /// Run a benchmark suite.
    Bench {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 10)]
        seeds: usize,
    },
}

enum Failure {
    Lib(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } | Error::TooLarge(_) | Error::SizeExceeded(_) | Error::ArityTooLarge(_) => EXIT_BUDGET,
        Error::SolverStalled | Error::Stalled(_) | Error::NoRoot(_) | Error::NoCover(_) => 1,
        _ => EXIT_INPUT,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<SsbveInstance, Failure> {
    let text = read(path)?;
    let mku = text.lines().map(str::trim).find(|l| l.starts_with('p')).is_some_and(|l| l.split_whitespace().nth(1) == Some("mku"));
    if mku {
        let (h, k) = parse_mku(&text)?;
        Ok(mku_to_ssbve(&h, k)?)
    } else {
        Ok(parse_ssbve(&text)?)
    }
}

fn need<T>(v: Option<T>, name: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Input(format!("--{name} is required for this family")))
}

fn solution_json(sol: &Solution) -> Value {
    json!({
        "chosen": sol.chosen.iter().map(|u| u + 1).collect::<Vec<_>>(),
        "size": sol.chosen.len(),
        "neighborhood_size": sol.neighborhood_size,
        "expansion": sol.expansion.to_string(),
        "expansion_f64": sol.expansion.as_f64(),
    })
}

fn checks_json(rep: &VerifyReport) -> Value {
    rep.checks
        .iter()
        .map(|c| json!({"id": c.id, "lhs": c.lhs, "rhs": c.rhs, "slack": c.slack, "passed": c.passed, "count": c.count}))
        .collect()
}

fn table(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                table(x, &key, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for (i, x) in a.iter().enumerate() {
                table(x, &format!("{prefix}[{i}]"), out);
            }
        }
        other => out.push_str(&format!("{prefix:<40} {other}\n")),
    }
}

fn emit(cli: &Cli, text: String) -> Result<(), Failure> {
    match &cli.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_value(cli: &Cli, v: &Value) -> Result<(), Failure> {
    let text = match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(v).expect("json")),
        Format::Table => {
            let mut s = String::new();
            table(v, "", &mut s);
            s
        }
    };
    emit(cli, text)
}

fn gen(cli: &Cli) -> Result<u8, Failure> {
    let Cmd::Gen { family, n, s, p, dl, k, alpha, beta, gamma, r, plant } = cli.cmd else { unreachable!() };
    let seed = cli.seed;
    match family {
        Family::Random | Family::Gap => {
            let s = need(s, "s")?;
            let g = match family {
                Family::Random => gen_random_bipartite(n, s, need(p, "p")?, seed)?,
                _ => gen_gap_instance(n, s, need(dl, "dl")?, seed)?,
            };
            let inst = SsbveInstance::new(g, k.unwrap_or(1))?;
            emit(cli, write_ssbve(&inst))?;
        }
        Family::Planted => {
            let spec = PlantedSpec::new(n, need(alpha, "alpha")?, need(beta, "beta")?, need(gamma, "gamma")?, need(r, "r")?, seed);
            let (inst, truth) = gen_planted(&spec)?;
            emit(cli, write_ssbve(&inst))?;
            if let Some(out) = &cli.out {
                let side = out.with_extension("planted.json");
                let text = serde_json::to_string_pretty(&truth.sidecar()).expect("json");
                fs::write(&side, text).map_err(|e| Failure::Input(format!("{}: {e}", side.display())))?;
            }
        }
        Family::Hdvr => {
            let k_planted = need(k, "k")?;
            let spec = HdvrSpec {
                n,
                r_edge: need(r, "r")?,
                alpha: need(alpha, "alpha")?,
                beta: need(beta, "beta")?,
                k_planted,
                mode: if plant { HdvrMode::Planted } else { HdvrMode::Random },
                seed,
            };
            let h = gen_hdvr(&spec)?;
            emit(cli, write_mku(&h, k_planted.min(h.m()).max(1)))?;
        }
    }
    Ok(0)
}

fn solve(cli: &Cli) -> Result<u8, Failure> {
    let Cmd::Solve { algo, ref input, eps, qmax, branch_cap, p, q } = cli.cmd else { unreachable!() };
    let inst = load_instance(input)?;
    let mut extra = json!({});
    let sol = match algo {
        Algo::Exact => exact_ssbve(&inst)?,
        Algo::Les => les_trim(&inst)?,
        Algo::Baseline => trivial_ksubset(&inst),
        Algo::Worst => {
            let cfg = WorstCaseConfig { eps, q_max: qmax, branch_cap, seed: cli.seed };
            let rep = solve_worst_case_report(&inst, &cfg)?;
            extra = json!({"winner": rep.winner, "candidates": rep.candidates, "branches_explored": rep.branches_explored, "branches_dropped": rep.branches_dropped});
            rep.solution
        }
        Algo::Planted => {
            let (p, q) = match (p, q) {
                (Some(p), Some(q)) => (p, q),
                _ => {
                    let g = &inst.graph;
                    let n = g.n() as f64;
                    let avg = g.edge_count() as f64 / g.n().max(1) as f64;
                    snap_alpha((avg.max(1.0)).ln() / n.ln(), qmax)
                }
            };
            let run = solve_planted(&inst, p, q, branch_cap, cli.seed)?;
            extra = json!({"p": p, "q": q, "branches": run.branches, "exhaustive": run.exhaustive});
            match run.best {
                Some(s) => s,
                None => return Err(Failure::Lib(Error::SolverStalled)),
            }
        }
    };
    let algo_name = algo.to_possible_value().expect("named").get_name().to_string();
    let v = json!({
        "algo": algo_name,
        "n": inst.graph.n(),
        "n_right": inst.graph.n_right(),
        "k": inst.k,
        "seed": cli.seed,
        "solution": solution_json(&sol),
        "details": extra,
    });
    emit_value(cli, &v)?;
    Ok(0)
}

fn parse_mode(mode: &str) -> Result<SaMode, Failure> {
    if mode == "exhaustive" {
        return Ok(SaMode::Exhaustive);
    }
    mode.strip_prefix("sampled:")
        .and_then(|n| n.parse().ok())
        .map(SaMode::Sampled)
        .ok_or_else(|| Failure::Input(format!("mode {mode:?} is neither `exhaustive` nor `sampled:N`")))
}

fn certify(cli: &Cli) -> Result<u8, Failure> {
    let Cmd::Certify { kind, n, s, k, dl, rounds, ref mode, samples } = cli.cmd else { unreachable!() };
    let v = match kind {
        Kind::Sdp => {
            let k = need(k, "k")?;
            if dl < 0.0 || dl.fract() != 0.0 {
                return Err(Failure::Input(format!("--dl {dl} must be a non-negative integer for the SDP certificate")));
            }
            let inst = build_sdp_instance(n, s, dl as usize, cli.seed)?;
            let cert = build_sdp_certificate(&inst.graph, k)?;
            let rep = verify_sdp_certificate(&cert);
            let obj = cert.objective();
            let lb = k.min(s) as f64 / 2.0;
            let obj_f = to_f64(&obj);
            json!({
                "kind": "sdp",
                "params": {"n": n, "s": s, "k": k, "d_l": inst.d_l, "d_r": inst.d_r, "d_l_base": inst.d_l_base, "seed": cli.seed,
                           "alpha": cert.sdp_alpha.to_string(), "tau": cert.tau.to_string()},
                "objective": obj.to_string(),
                "objective_f64": obj_f,
                "combinatorial_lb": lb,
                "gap_ratio": lb / obj_f,
                "max_violation": rep.max_violation,
                "checks": checks_json(&rep),
                "passed": rep.passed,
            })
        }
        Kind::Sa => {
            let mode = parse_mode(mode)?;
            let g = gen_gap_instance(n, s, dl, cli.seed)?;
            let cert = build_sa_certificate(&g, rounds)?;
            let rep = verify_sa_certificate(&cert, mode, samples, cli.seed)?;
            json!({
                "kind": "sa",
                "params": {"n": n, "s": s, "k": cert.k, "d_l": dl, "rounds": rounds, "seed": cli.seed,
                           "alpha": cert.sa_alpha.to_string(), "theta_exact": cert.theta_exact, "contexts": rep.contexts},
                "objective": rep.objective,
                "objective_f64": rep.objective_f64,
                "combinatorial_lb": rep.combinatorial_lb,
                "gap_ratio": rep.gap_ratio,
                "max_violation": rep.report.max_violation,
                "checks": checks_json(&rep.report),
                "passed": rep.report.passed,
            })
        }
    };
    emit_value(cli, &v)?;
    Ok(if v["passed"] == Value::Bool(true) { 0 } else { EXIT_VERIFY })
}

fn ssve(cli: &Cli) -> Result<u8, Failure> {
    let Cmd::Ssve { ref input, k, oracle } = cli.cmd else { unreachable!() };
    let (g, file_k) = parse_ssve(&read(input)?)?;
    let k = k.unwrap_or(file_k);
    let oracle = match oracle {
        OracleArg::Brute => SseOracle::bruteforce(),
        OracleArg::Sweep => SseOracle::sweep(),
    };
    let run = ssve_via_sse(&g, k, &oracle)?;
    let v = json!({
        "n": g.n(),
        "k": k,
        "set": run.set.iter().map(|v| v + 1).collect::<Vec<_>>(),
        "vertex_expansion": run.vertex_expansion.to_string(),
        "edge_expansion": run.edge_expansion.to_string(),
    });
    emit_value(cli, &v)?;
    Ok(0)
}

fn gapcalc(cli: &Cli) -> Result<u8, Failure> {
    let Cmd::Gapcalc { r, ref eps, ref regime } = cli.cmd else { unreachable!() };
    let eps = parse_rational(eps)?;
    let rep = hardness_gap_calculator(r, &eps, regime.parse::<GapRegime>()?)?;
    emit_value(cli, &serde_json::to_value(&rep).expect("json"))?;
    Ok(0)
}

fn bench(cli: &Cli) -> Result<u8, Failure> {
    let Cmd::Bench { ref suite, seeds } = cli.cmd else { unreachable!() };
    let suite: Suite = suite.parse()?;
    let rep = run_benchmark(suite, seeds, None)?;
    let text = match cli.format {
        Format::Json => format!("{}\n", rep.to_json()),
        Format::Table => rep.table(),
    };
    emit(cli, text)?;
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| Failure::Input(e.to_string()))?;
    }
    match cli.cmd {
        Cmd::Gen { .. } => gen(cli),
        Cmd::Solve { .. } => solve(cli),
        Cmd::Certify { .. } => certify(cli),
        Cmd::Ssve { .. } => ssve(cli),
        Cmd::Gapcalc { .. } => gapcalc(cli),
        Cmd::Bench { .. } => bench(cli),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
