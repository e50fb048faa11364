use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kgrip::family::{
    build_family_graph, gamma_curve, gamma_curve_csv, verify_family, DEFAULT_FAMILY_TOL,
};
use kgrip::graph::format_edge_list;
use kgrip::graph6::MAX_GRAPH6_NODES;
use kgrip::resistance::{kirchhoff_index, normalized_resistance};
use kgrip::solver::{
    brute_force_optimal_with, efficiency_report, greedy_with, GreedyMode, GreedyTrace,
    SolverConfig, DEFAULT_SUBSET_BUDGET, DEFAULT_TIE_TOL,
};
use kgrip::submod::{
    curvature_with, find_witness, guarantee_factor, submodularity_ratio_with, Bound, Objective,
    SubmodConfig, DEFAULT_GAIN_TOL, DEFAULT_MAX_GROUND,
};
use kgrip::sweep::{render_csv, render_json, sample_sweep, sweep, SweepOutput, SweepSource};
use kgrip::{encode_graph6, parse_edge_list, parse_graph6, Error, Graph, NodePair};

#[derive(Parser, Debug)]
#[command(
    name = "kgrip",
    version,
    about = "Add links to a graph to minimise its effective graph resistance"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Write output to this file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    /// Output format (default: csv for sweeps and curves, text otherwise).
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Worker threads (default: available parallelism).
    #[arg(long, env = "KGRIP_JOBS", global = true)]
    jobs: Option<usize>,
    /// Relative tolerance under which candidate gains count as tied.
    #[arg(long, default_value_t = DEFAULT_TIE_TOL, global = true)]
    tie_tol: f64,
    /// Gains at or below this fraction of R_G are skipped in ratio probes.
    #[arg(long, default_value_t = DEFAULT_GAIN_TOL, global = true)]
    gain_tol: f64,
    /// Maximum number of subsets an exhaustive search may evaluate.
    #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET, global = true)]
    budget: u128,
    /// Largest ground set for ratio and curvature probes.
    #[arg(long, default_value_t = DEFAULT_MAX_GROUND, global = true)]
    max_ground: usize,
    /// Treat the graph argument as a graph6 string.
    #[arg(long, global = true, conflicts_with = "edgelist")]
    g6: bool,
    /// Treat the graph argument as an edge-list file path.
    #[arg(long, global = true)]
    edgelist: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Naive,
    Incremental,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ObjectiveArg {
    Resistance,
    Normalized,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Effective graph resistance and its normalised value.
    Resistance { graph: String },
    /// Greedy link addition.
    Greedy {
        graph: String,
        #[arg(short = 'k')]
        k: usize,
        #[arg(long, value_enum, default_value = "incremental")]
        mode: ModeArg,
    },
    /// Exhaustive optimum over all k-subsets of absent links.
    Optimal {
        graph: String,
        #[arg(short = 'k')]
        k: usize,
    },
    /// Greedy efficiency R_opt / R_greedy.
    Eta {
        graph: String,
        #[arg(short = 'k')]
        k: usize,
    },
    /// Efficiency over every connected graph on n nodes.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(short = 'k', long)]
        k: usize,
        /// graph6 catalog (required for n > 7).
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Efficiency over a seeded random sample of connected graphs.
    SampleSweep {
        #[arg(long)]
        n: usize,
        #[arg(short = 'k', long)]
        k: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        /// Draw from this graph6 catalog instead of the random generator.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Submodularity ratio over all absent links.
    Gamma {
        graph: String,
        #[arg(long, value_enum, default_value = "resistance")]
        objective: ObjectiveArg,
    },
    /// Curvature over all absent links.
    Curvature { graph: String },
    /// Greedy guarantee factors for given ratio and curvature.
    Bounds {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// Smallest graph where adding a link helps more after another link.
    Witness {
        #[arg(long, default_value_t = 5)]
        max_nodes: usize,
    },
    /// Counterexample family graph for even N, optionally verified.
    Family {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        verify: bool,
    },
    /// Ratio upper bound of the family for even N in a range.
    GammaCurve {
        #[arg(long)]
        n_from: usize,
        #[arg(long)]
        n_to: usize,
    },
}

enum Failure {
    Lib(Error),
    /// Verification ran but some rows failed; the report is still written.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Io(_) => 2,
        Error::Infeasible(_) | Error::Domain(_) => 3,
        Error::Numerical(_) => 4,
        Error::Budget { .. } => 5,
    }
}

type Config = Vec<(&'static str, String)>;

struct Ctx<'a> {
    global: &'a GlobalOpts,
    config: Config,
}

impl Ctx<'_> {
    fn solver(&self) -> SolverConfig {
        SolverConfig {
            tie_tol: self.global.tie_tol,
            subset_budget: self.global.budget,
        }
    }

    fn submod(&self) -> SubmodConfig {
        SubmodConfig {
            max_ground: self.global.max_ground,
            gain_tol: self.global.gain_tol,
        }
    }

    fn set(&mut self, key: &'static str, value: impl ToString) {
        self.config.push((key, value.to_string()));
    }

    fn format(&mut self, default: Format) -> Format {
        let f = self.global.format.unwrap_or(default);
        self.set("format", f.name());
        f
    }

    fn header(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.config {
            let _ = writeln!(s, "# {k}={v}");
        }
        s
    }

    fn config_json(&self) -> Value {
        Value::Object(
            self.config
                .iter()
                .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
                .collect(),
        )
    }

    fn json(&self, body: Value) -> String {
        let mut obj = json!({ "config": self.config_json() });
        if let Value::Object(map) = body {
            obj.as_object_mut().unwrap().extend(map);
        }
        let mut s = serde_json::to_string_pretty(&obj).expect("serializable");
        s.push('\n');
        s
    }
}

fn load_graph(arg: &str, g: &GlobalOpts) -> Result<Graph, Error> {
    if g.g6 {
        return parse_graph6(arg);
    }
    if !g.edgelist {
        if let Ok(graph) = parse_graph6(arg) {
            return Ok(graph);
        }
    }
    let path = Path::new(arg);
    if !g.edgelist && !path.exists() {
        return Err(Error::Parse {
            line: None,
            msg: format!("{arg:?} is neither a graph6 string nor an existing file"),
        });
    }
    let text = std::fs::read_to_string(path)?;
    if !g.edgelist {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        if let (Some(only), None) = (lines.next(), lines.next()) {
            if let Ok(graph) = parse_graph6(only) {
                return Ok(graph);
            }
        }
    }
    parse_edge_list(&text, None)
}

fn graph_id(g: &Graph) -> String {
    encode_graph6(g).unwrap_or_else(|_| format!("n={},L={}", g.node_count(), g.link_count()))
}

fn pair_json(p: NodePair) -> Value {
    json!([p.u, p.v])
}

fn pairs_text(ps: &[NodePair]) -> String {
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

fn greedy_json(t: &GreedyTrace) -> Value {
    json!({
        "initial_R": t.initial_r,
        "steps": t.steps.iter().map(|s| json!({
            "u": s.pair.u,
            "v": s.pair.v,
            "delta_R": s.delta_r,
            "R_after": s.r_after,
        })).collect::<Vec<_>>(),
    })
}

fn greedy_csv(t: &GreedyTrace) -> String {
    let mut s = String::from("step,u,v,delta_R,R_after\n");
    let _ = writeln!(s, "0,,,,{}", t.initial_r);
    for (i, st) in t.steps.iter().enumerate() {
        let _ = writeln!(s, "{},{},{},{},{}", i + 1, st.pair.u, st.pair.v, st.delta_r, st.r_after);
    }
    s
}

fn greedy_text(t: &GreedyTrace) -> String {
    let mut s = format!("initial R = {}\n", t.initial_r);
    for (i, st) in t.steps.iter().enumerate() {
        let _ = writeln!(
            s,
            "step {}: add {} delta_R = {} R = {}",
            i + 1,
            st.pair,
            st.delta_r,
            st.r_after
        );
    }
    s
}

fn sweep_output(ctx: &mut Ctx, out: &SweepOutput) -> String {
    let f = ctx.format(Format::Csv);
    match f {
        Format::Json => render_json(&out.records, Some(&out.summary), ctx.config_json()),
        _ => {
            let pre: Vec<(String, String)> =
                ctx.config.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
            render_csv(&out.records, Some(&out.summary), &pre)
        }
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let g = &cli.global;
    let mut ctx = Ctx {
        global: g,
        config: Vec::new(),
    };
    let solver_keys = |ctx: &mut Ctx| {
        ctx.set("tie_tol", format!("{:e}", g.tie_tol));
        ctx.set("budget", g.budget);
    };
    let submod_keys = |ctx: &mut Ctx| {
        ctx.set("gain_tol", format!("{:e}", g.gain_tol));
        ctx.set("max_ground", g.max_ground);
    };

    let text = match &cli.command {
        Command::Resistance { graph } => {
            let gr = load_graph(graph, g)?;
            ctx.set("command", "resistance");
            ctx.set("graph", graph_id(&gr));
            let r = kirchhoff_index(&gr)?;
            let norm = normalized_resistance(&gr).ok();
            let (n, l) = (gr.node_count(), gr.link_count());
            match ctx.format(Format::Text) {
                Format::Json => ctx.json(json!({ "n": n, "L": l, "R": r, "r_normalized": norm })),
                Format::Csv => format!(
                    "{}n,L,R,r_normalized\n{n},{l},{r},{}\n",
                    ctx.header(),
                    norm.map_or(String::new(), |v| v.to_string())
                ),
                Format::Text => format!(
                    "{}n = {n}\nL = {l}\nR = {r}\nr_normalized = {}\n",
                    ctx.header(),
                    norm.map_or("undefined".into(), |v| v.to_string())
                ),
            }
        }
        Command::Greedy { graph, k, mode } => {
            let gr = load_graph(graph, g)?;
            let mode = match mode {
                ModeArg::Naive => GreedyMode::Naive,
                ModeArg::Incremental => GreedyMode::Incremental,
            };
            ctx.set("command", "greedy");
            ctx.set("graph", graph_id(&gr));
            ctx.set("k", k);
            ctx.set("mode", mode);
            solver_keys(&mut ctx);
            let t = greedy_with(&gr, *k, None, mode, &ctx.solver())?;
            match ctx.format(Format::Text) {
                Format::Json => ctx.json(greedy_json(&t)),
                Format::Csv => ctx.header() + &greedy_csv(&t),
                Format::Text => ctx.header() + &greedy_text(&t),
            }
        }
        Command::Optimal { graph, k } => {
            let gr = load_graph(graph, g)?;
            ctx.set("command", "optimal");
            ctx.set("graph", graph_id(&gr));
            ctx.set("k", k);
            solver_keys(&mut ctx);
            let o = brute_force_optimal_with(&gr, *k, None, &ctx.solver())?;
            match ctx.format(Format::Text) {
                Format::Json => ctx.json(json!({
                    "R_opt": o.r_opt,
                    "best_set": o.best_set.iter().map(|&p| pair_json(p)).collect::<Vec<_>>(),
                    "n_evaluated": o.n_evaluated.to_string(),
                })),
                Format::Csv => {
                    let mut s = ctx.header() + "u,v\n";
                    for p in &o.best_set {
                        let _ = writeln!(s, "{},{}", p.u, p.v);
                    }
                    let _ = writeln!(s, "# R_opt={} evaluated={}", o.r_opt, o.n_evaluated);
                    s
                }
                Format::Text => format!(
                    "{}R_opt = {}\nbest set = {}\nsubsets evaluated = {}\n",
                    ctx.header(),
                    o.r_opt,
                    pairs_text(&o.best_set),
                    o.n_evaluated
                ),
            }
        }
        Command::Eta { graph, k } => {
            let gr = load_graph(graph, g)?;
            ctx.set("command", "eta");
            ctx.set("graph", graph_id(&gr));
            ctx.set("k", k);
            solver_keys(&mut ctx);
            let rep = efficiency_report(&gr, *k, None, &ctx.solver())?;
            match ctx.format(Format::Text) {
                Format::Json => {
                    let mut body = greedy_json(&rep.greedy);
                    body["R_greedy"] = json!(rep.greedy.final_r());
                    body["R_opt"] = json!(rep.optimal.r_opt);
                    body["best_set"] = Value::Array(
                        rep.optimal.best_set.iter().map(|&p| pair_json(p)).collect(),
                    );
                    body["eta"] = json!(rep.eta);
                    ctx.json(body)
                }
                Format::Csv => format!(
                    "{}graph6,k,R_initial,R_greedy,R_opt,eta\n{},{k},{},{},{},{}\n",
                    ctx.header(),
                    graph_id(&gr),
                    rep.greedy.initial_r,
                    rep.greedy.final_r(),
                    rep.optimal.r_opt,
                    rep.eta
                ),
                Format::Text => format!(
                    "{}R_initial = {}\nR_greedy = {}\ngreedy set = {}\nR_opt = {}\noptimal set = {}\neta = {}\n",
                    ctx.header(),
                    rep.greedy.initial_r,
                    rep.greedy.final_r(),
                    pairs_text(&rep.greedy.pairs()),
                    rep.optimal.r_opt,
                    pairs_text(&rep.optimal.best_set),
                    rep.eta
                ),
            }
        }
        Command::Sweep { n, k, catalog } => {
            ctx.set("command", "sweep");
            ctx.set("n", n);
            ctx.set("k", k);
            ctx.set(
                "source",
                catalog.as_ref().map_or("builtin".into(), |p| p.display().to_string()),
            );
            solver_keys(&mut ctx);
            let source = catalog.clone().map_or(SweepSource::Builtin, SweepSource::Catalog);
            let out = sweep(*n, *k, &source, &ctx.solver())?;
            sweep_output(&mut ctx, &out)
        }
        Command::SampleSweep {
            n,
            k,
            count,
            seed,
            catalog,
        } => {
            ctx.set("command", "sample-sweep");
            ctx.set("n", n);
            ctx.set("k", k);
            ctx.set("count", count);
            ctx.set("seed", seed);
            ctx.set(
                "source",
                catalog.as_ref().map_or("generator".into(), |p| p.display().to_string()),
            );
            solver_keys(&mut ctx);
            let out = sample_sweep(*n, *k, *count, *seed, catalog.as_deref(), &ctx.solver())?;
            sweep_output(&mut ctx, &out)
        }
        Command::Gamma { graph, objective } => {
            let gr = load_graph(graph, g)?;
            let objective = match objective {
                ObjectiveArg::Resistance => Objective::Resistance,
                ObjectiveArg::Normalized => Objective::Normalized,
            };
            ctx.set("command", "gamma");
            ctx.set("graph", graph_id(&gr));
            ctx.set("objective", format!("{objective:?}").to_lowercase());
            submod_keys(&mut ctx);
            let rep = submodularity_ratio_with(&gr, None, objective, &ctx.submod())?;
            match ctx.format(Format::Text) {
                Format::Json => ctx.json(json!({
                    "gamma": rep.gamma,
                    "n_triples": rep.n_triples.to_string(),
                    "n_skipped": rep.n_skipped.to_string(),
                    "argmin": rep.argmin,
                })),
                Format::Csv => format!(
                    "{}gamma,n_triples,n_skipped\n{},{},{}\n",
                    ctx.header(),
                    rep.gamma,
                    rep.n_triples,
                    rep.n_skipped
                ),
                Format::Text => {
                    let mut s = format!(
                        "{}gamma = {}\ntriples = {}\nskipped = {}\n",
                        ctx.header(),
                        rep.gamma,
                        rep.n_triples,
                        rep.n_skipped
                    );
                    if let Some(w) = &rep.argmin {
                        let _ = writeln!(
                            s,
                            "argmin: S = {{{}}} R = {{{}}} v = {}",
                            pairs_text(&w.triple.s),
                            pairs_text(&w.triple.r),
                            w.triple.v
                        );
                    }
                    s
                }
            }
        }
        Command::Curvature { graph } => {
            let gr = load_graph(graph, g)?;
            ctx.set("command", "curvature");
            ctx.set("graph", graph_id(&gr));
            submod_keys(&mut ctx);
            let rep = curvature_with(&gr, None, &ctx.submod())?;
            match ctx.format(Format::Text) {
                Format::Json => ctx.json(json!({
                    "alpha": rep.alpha,
                    "n_triples": rep.n_triples.to_string(),
                    "n_skipped": rep.n_skipped.to_string(),
                    "argmax": rep.argmax,
                })),
                Format::Csv => format!(
                    "{}alpha,n_triples,n_skipped\n{},{},{}\n",
                    ctx.header(),
                    rep.alpha,
                    rep.n_triples,
                    rep.n_skipped
                ),
                Format::Text => format!(
                    "{}alpha = {}\ntriples = {}\nskipped = {}\n",
                    ctx.header(),
                    rep.alpha,
                    rep.n_triples,
                    rep.n_skipped
                ),
            }
        }
        Command::Bounds { gamma, alpha } => {
            ctx.set("command", "bounds");
            ctx.set("gamma", gamma);
            ctx.set("alpha", alpha);
            let bian = guarantee_factor(*gamma, *alpha, Bound::Bian)?;
            let liu = guarantee_factor(*gamma, *alpha, Bound::Liu)?;
            match ctx.format(Format::Text) {
                Format::Json => ctx.json(json!({ "bian": bian, "liu": liu })),
                Format::Csv => format!("{}gamma,alpha,bian,liu\n{gamma},{alpha},{bian},{liu}\n", ctx.header()),
                Format::Text => format!("{}bian = {bian:.6}\nliu = {liu:.6}\n", ctx.header()),
            }
        }
        Command::Witness { max_nodes } => {
            ctx.set("command", "witness");
            ctx.set("max_nodes", max_nodes);
            let search = find_witness(*max_nodes)?;
            match ctx.format(Format::Text) {
                Format::Json => ctx.json(json!({
                    "graph6": search.witness.as_ref().map(|w| graph_id(&w.graph)),
                    "witness": search.witness,
                    "scanned": search.scanned,
                })),
                Format::Csv => {
                    let mut s = ctx.header() + "n,L,graphs,violating\n";
                    for grp in &search.scanned {
                        let _ = writeln!(s, "{},{},{},{}", grp.n, grp.links, grp.graphs, grp.violating);
                    }
                    if let Some(w) = &search.witness {
                        let _ = writeln!(s, "# witness={} ratio={}", graph_id(&w.graph), w.ratio);
                    }
                    s
                }
                Format::Text => {
                    let mut s = ctx.header();
                    match &search.witness {
                        None => s.push_str("no violation found\n"),
                        Some(w) => {
                            let (small, large) = w.gains();
                            let _ = write!(
                                s,
                                "graph = {} (links {})\nv = {}\nR = {{{}}}\n\
                                 R_G: G = {}, G+v = {}, G+R = {}, G+R+v = {}\n\
                                 gain before R = {small}\ngain after R = {large}\nratio = {}\n",
                                graph_id(&w.graph),
                                pairs_text(w.graph.links()),
                                w.v,
                                pairs_text(&w.r_set),
                                w.values[0],
                                w.values[1],
                                w.values[2],
                                w.values[3],
                                w.ratio
                            );
                        }
                    }
                    s
                }
            }
        }
        Command::Family { n, verify } => {
            ctx.set("command", "family");
            ctx.set("n", n);
            ctx.set("verify", verify);
            if *verify {
                ctx.set("tol", format!("{DEFAULT_FAMILY_TOL:e}"));
                let rep = verify_family(*n, DEFAULT_FAMILY_TOL)?;
                let body = match ctx.format(Format::Csv) {
                    Format::Json => ctx.json(json!({ "n": rep.param_n, "rows": rep.rows, "passed": rep.passed() })),
                    _ => ctx.header() + &rep.to_csv(),
                };
                if !rep.passed() {
                    write_output(g, &body)?;
                    let failed: Vec<&str> = rep
                        .rows
                        .iter()
                        .filter(|r| r.status == kgrip::family::RowStatus::Fail)
                        .map(|r| r.quantity.as_str())
                        .collect();
                    return Err(Failure::Check(format!("failed rows: {}", failed.join(", "))));
                }
                body
            } else {
                let fam = build_family_graph(*n)?;
                let g6 = (fam.graph.node_count() <= MAX_GRAPH6_NODES)
                    .then(|| encode_graph6(&fam.graph).expect("fits graph6"));
                match ctx.format(Format::Text) {
                    Format::Json => ctx.json(json!({
                        "graph6": g6,
                        "family": fam,
                    })),
                    _ => {
                        let mut s = ctx.header();
                        let _ = writeln!(
                            s,
                            "# i={} j={} l={} m={} v={} R={} {}",
                            fam.label_i, fam.label_j, fam.label_l, fam.label_m, fam.v_pair,
                            fam.r_pairs[0], fam.r_pairs[1]
                        );
                        if let Some(code) = &g6 {
                            let _ = writeln!(s, "# graph6={code}");
                        }
                        s + &format_edge_list(&fam.graph)
                    }
                }
            }
        }
        Command::GammaCurve { n_from, n_to } => {
            ctx.set("command", "gamma-curve");
            ctx.set("n_from", n_from);
            ctx.set("n_to", n_to);
            let rows = gamma_curve(*n_from, *n_to)?;
            match ctx.format(Format::Csv) {
                Format::Json => ctx.json(json!({
                    "rows": rows.iter().map(|(n, two_n, b, a)| json!({
                        "n": n, "two_n": two_n, "gamma_bound": b, "asymptote_6_over_n": a,
                    })).collect::<Vec<_>>(),
                })),
                _ => ctx.header() + &gamma_curve_csv(&rows),
            }
        }
    };
    Ok(text)
}

fn write_output(g: &GlobalOpts, text: &str) -> std::io::Result<()> {
    match &g.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
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
    if let Some(jobs) = cli.global.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = run(&cli).and_then(|text| Ok(write_output(&cli.global, &text)?));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: verification failed: {msg}");
            ExitCode::from(4)
        }
    }
}
