//! Command-line driver for `gkmkalc`.

use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fan::{Fan, Surface};
use crate::gkm::{self, GkmGraph, PiecewiseClass};
use crate::grr;
use crate::rankone::{self, RankOneCase};
use crate::report::Report;
use crate::rootdata::{self, RootDatum};
use crate::schubert::{self, Convention};
use crate::toric;
use crate::wonderful;

#[derive(Parser, Debug)]
#[command(name = "gkmkalc", version, about = "Exact GKM presentations of equivariant K-theory")]
pub struct Cli {
    /// Write the JSON report to this path ("-" for stdout) instead of text.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Toric GKM graphs and Reisner-Stanley presentations.
    Toric {
        #[command(subcommand)]
        what: ToricCmd,
    },
    /// SL2-compactifications of rank one.
    Rankone {
        surface: String,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        g_equivariant: bool,
        #[arg(long)]
        rs: bool,
        /// Window bounds for the invariant/quotient comparison.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        window: Vec<i64>,
    },
    /// Wonderful compactifications of minimal-rank symmetric spaces.
    Symmetric {
        #[command(subcommand)]
        what: SymmetricCmd,
    },
    /// Schubert classes of a flag variety.
    Schubert {
        /// Root datum JSON file, or A1, A2, A3.
        datum: String,
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        constants: Option<Vec<String>>,
        #[arg(long)]
        table: bool,
        #[arg(long)]
        opposite: bool,
    },
    /// Chern transport to a Chow presentation.
    Rr {
        graph: String,
        #[arg(long)]
        class: Option<String>,
        #[arg(long, default_value_t = grr::DEFAULT_DEGREE)]
        degree: usize,
    },
    /// Test a class for membership.
    Member { graph: String, class: String },
    /// Multiply two classes and test the product.
    Mul { graph: String, f: String, g: String },
    /// Invariant member classes under the graph's registered automorphisms.
    Invariants {
        graph: String,
        #[arg(long, default_value_t = 3)]
        window: i64,
    },
    /// Built-in toric surfaces.
    Catalog {
        /// P1, P2, P1xP1 or Fn (omit to list).
        name: Option<String>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        rankone: bool,
        #[arg(long)]
        g_equivariant: bool,
        /// Ring-closure check on this many random member classes.
        #[arg(long)]
        check_ring: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        window: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum ToricCmd {
    Gkm {
        /// Fan JSON file or catalog name.
        fan: String,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        dot: bool,
    },
    Rs {
        fan: String,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 2)]
        window: i64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GraphChoice {
    X,
    Y,
}

#[derive(Subcommand, Debug)]
pub enum SymmetricCmd {
    Build {
        /// Root datum JSON file, or a bundled instance name.
        datum: String,
        /// Involution JSON file (omit for bundled instances).
        theta: Option<String>,
        #[arg(long, value_enum)]
        graph: Option<GraphChoice>,
        #[arg(long, value_name = "B")]
        verify_product: Option<i64>,
        #[arg(long, value_name = "B")]
        g_equivariant: Option<i64>,
        #[arg(long)]
        schubert: bool,
    },
}

/// Exit code and rendered output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Output {
    payload: serde_json::Map<String, Value>,
    text: Vec<String>,
    reports: Vec<Report>,
}

impl Output {
    fn new() -> Self {
        Self { payload: serde_json::Map::new(), text: Vec::new(), reports: Vec::new() }
    }

    fn put(&mut self, key: &str, v: Value) {
        self.payload.insert(key.to_string(), v);
    }

    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    fn passed(&self) -> bool {
        self.reports.iter().all(Report::passed)
    }
}

fn read_json(path: &str) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Dimension(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Dimension(format!("{path}: {e}")))
}

fn load_graph(path: &str) -> Result<GkmGraph> {
    GkmGraph::from_json(&read_json(path)?)
}

fn load_class(path: &str, rank: usize) -> Result<PiecewiseClass> {
    PiecewiseClass::from_json(&read_json(path)?, rank)
}

fn load_fan(spec: &str, n: Option<u32>) -> Result<Fan> {
    if Path::new(spec).exists() {
        return Fan::from_json(&read_json(spec)?);
    }
    Ok(Fan::surface_catalog(Surface::parse(spec, n)?))
}

fn load_datum(spec: &str) -> Result<RootDatum> {
    match spec {
        "A1" => Ok(rootdata::type_a(1)),
        "A2" => Ok(rootdata::type_a(2)),
        "A3" => Ok(rootdata::type_a(3)),
        _ => RootDatum::from_json(&read_json(spec)?),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json renders")
}

fn graph_text(g: &GkmGraph) -> String {
    let mut s = format!("vertices: {}\n", g.vertices().join(", "));
    for c in g.constraints() {
        s.push_str(&format!(
            "  f[{}] - f[{}] = 0 mod (1 - {})\n",
            g.vertices()[c.u],
            g.vertices()[c.v],
            crate::IntPoly::monomial(c.chi.iter().map(|x| x * c.n).collect(), 1.into())
        ));
    }
    s
}

fn run_command(cmd: &Command, out: &mut Output) -> Result<()> {
    match cmd {
        Command::Toric { what: ToricCmd::Gkm { fan, n, dot } } => {
            let g = toric::gkm_from_fan(&load_fan(fan, *n)?)?;
            out.put("graph", g.to_json());
            out.line(if *dot { g.to_dot() } else { graph_text(&g) });
        }
        Command::Toric { what: ToricCmd::Rs { fan, n, verify, window } } => {
            let f = load_fan(fan, *n)?;
            let rs = toric::rs_presentation(&f)?;
            out.put("presentation", rs.to_json());
            out.line(pretty(&rs.to_json()));
            if *verify {
                out.reports.push(toric::verify_rs(&f, *window)?);
            }
        }
        Command::Rankone { surface, n, g_equivariant, rs, window } => {
            let case = RankOneCase::parse(surface, *n)?;
            let g = case.small_graph();
            out.put("graph", g.to_json());
            out.line(graph_text(&g));
            if *g_equivariant {
                let q = case.g_equivariant_presentation();
                out.put("g_equivariant", q.to_json());
                out.line(format!("G-equivariant presentation\n{}", graph_text(&q)));
                out.reports.push(case.g_equivariant_report(window)?);
            }
            if *rs {
                let s = case.rs_small();
                out.put("rs", s.to_json());
                out.line(pretty(&s.to_json()));
                out.reports.push(rankone::verify_rs_small(&case)?);
            }
        }
        Command::Symmetric { what: SymmetricCmd::Build { datum, theta, graph, verify_product, g_equivariant, schubert } } => {
            let mrd = match (theta, rootdata::bundled(datum)) {
                (None, Some(_)) => wonderful::bundled(datum)?,
                (Some(t), _) => wonderful::from_json(&read_json(datum)?, &read_json(t)?)?,
                (None, None) => return Err(Error::Dimension(format!("{datum}: an involution file is required"))),
            };
            out.put("datum", mrd.summary_json());
            out.line(pretty(&mrd.summary_json()));
            out.reports.push(wonderful::structure_report(&mrd)?);
            out.reports.push(wonderful::compare_toric_y(&mrd)?);
            if let Some(choice) = graph {
                let g = match choice {
                    GraphChoice::X => mrd.build_gkm_x()?,
                    GraphChoice::Y => mrd.build_gkm_y()?,
                };
                out.put("graph", g.to_json());
                out.line(graph_text(&g));
            }
            if let Some(b) = verify_product {
                out.reports.push(wonderful::verify_product_decomposition(&mrd, *b)?);
            }
            if let Some(b) = g_equivariant {
                let r = wonderful::g_equivariant_k(&mrd, *b)?;
                out.put(
                    "g_equivariant",
                    json!({"invariant_rank": r.invariants.rank, "model_rank": r.model_rank, "window": r.invariants.window.len()}),
                );
                out.reports.push(r.report);
            }
            if *schubert {
                out.reports.push(schubert::symmetric_schubert(&mrd)?.1);
            }
        }
        Command::Schubert { datum, constants, table, opposite } => {
            let d = load_datum(datum)?;
            let conv = if *opposite { Convention::Opposite } else { Convention::Standard };
            let sb = schubert::schubert_basis(&d, conv)?;
            let classes: serde_json::Map<String, Value> =
                (0..sb.len()).map(|x| (sb.label(x), sb.classes[x].to_json())).collect();
            out.put("classes", Value::Object(classes));
            for x in 0..sb.len() {
                let vals: Vec<String> = sb.classes[x].values.iter().map(|p| p.to_string()).collect();
                out.line(format!("O_{} = ({})", sb.label(x), vals.join(", ")));
            }
            if let Some(uv) = constants {
                let idx = |s: &str| sb.index_of(s).ok_or_else(|| Error::Dimension(format!("unknown Weyl element {s}")));
                let (u, v) = (idx(&uv[0])?, idx(&uv[1])?);
                let c = sb.structure_constants(u, v)?;
                let mut m = serde_json::Map::new();
                for (x, p) in c.iter().enumerate() {
                    if !p.is_zero() {
                        out.line(format!("c^{}_{{{},{}}} = {p}", sb.label(x), uv[0], uv[1]));
                        m.insert(sb.label(x), p.to_json());
                    }
                }
                out.put("constants", Value::Object(m));
            }
            if *table {
                let t = sb.table_json()?;
                out.line(pretty(&t));
                out.put("table", t);
            }
        }
        Command::Rr { graph, class, degree } => {
            let g = load_graph(graph)?;
            let chow = grr::k_to_chow(&g);
            out.put("chow", chow.to_json());
            out.line(pretty(&chow.to_json()));
            if let Some(c) = class {
                let f = load_class(c, g.rank())?;
                let v = f.is_member(&g)?;
                let mut rep = Report::new("input class");
                rep.push("member", v.member, v.failure.map(|x| x.description).unwrap_or_default());
                out.reports.push(rep);
                out.reports.push(grr::verify_transport(&g, &f, *degree)?);
            }
        }
        Command::Member { graph, class } => {
            let g = load_graph(graph)?;
            let f = load_class(class, g.rank())?;
            let v = f.is_member(&g)?;
            let mut rep = Report::new("membership");
            let detail = match &v.failure {
                Some(x) => format!("{}; remainder {}", x.description, x.remainder),
                None => format!("all {} congruences hold", g.constraints().len()),
            };
            rep.push("member", v.member, detail);
            out.reports.push(rep);
        }
        Command::Mul { graph, f, g: h } => {
            let gr = load_graph(graph)?;
            let a = load_class(f, gr.rank())?;
            let b = load_class(h, gr.rank())?;
            let p = a.mul(&gr, &b)?;
            out.put("product", p.to_json());
            out.line(pretty(&p.to_json()));
            let mut rep = Report::new("product");
            for (name, c) in [("first factor", &a), ("second factor", &b), ("product", &p)] {
                let v = c.is_member(&gr)?;
                rep.push(format!("{name} is a member"), v.member, v.failure.map(|x| x.description).unwrap_or_default());
            }
            out.reports.push(rep);
        }
        Command::Invariants { graph, window } => {
            let g = load_graph(graph)?;
            let sol = gkm::invariants_window(&g, g.autos(), *window)?;
            out.put("rank", json!(sol.rank));
            out.put("window", json!(sol.window.len()));
            out.put("basis", Value::Array(sol.basis.iter().map(PiecewiseClass::to_json).collect()));
            out.line(format!("{} invariant member classes over {} window monomials", sol.rank, sol.window.len()));
        }
        Command::Catalog { name, n, rankone: r1, g_equivariant, check_ring, seed, window } => {
            let Some(name) = name else {
                let names = ["P1", "P2", "P1xP1", "Fn"];
                out.put("surfaces", json!(names));
                out.put("symmetric", json!(rootdata::BUNDLED));
                out.line(format!("surfaces: {}\nsymmetric instances: {}", names.join(", "), rootdata::BUNDLED.join(", ")));
                return Ok(());
            };
            let case = RankOneCase::parse(name, *n)?;
            let g = if *g_equivariant {
                case.g_equivariant_presentation()
            } else if *r1 {
                case.small_graph()
            } else {
                case.toric_graph()
            };
            out.put("graph", g.to_json());
            out.line(graph_text(&g));
            if let Some(count) = check_ring {
                let fs = gkm::random_members(&g, *window, *count, *seed)?;
                let mut bad = 0;
                for pair in fs.chunks(2) {
                    if let [a, b] = pair {
                        for c in [a.add(&g, b)?, a.mul(&g, b)?] {
                            if !c.is_member(&g)?.member {
                                bad += 1;
                            }
                        }
                    }
                }
                let mut rep = Report::new(format!("ring closure (seed {seed})"));
                rep.push("sums and products are members", bad == 0, format!("{bad} failures over {} pairs", count / 2));
                out.reports.push(rep);
            }
        }
    }
    Ok(())
}

/// Run on an argument vector (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut out = Output::new();
    if let Err(e) = run_command(&cli.command, &mut out) {
        return Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") };
    }
    let code = if out.passed() { 0 } else { 1 };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match &cli.json {
        Some(path) => {
            let doc = json!({
                "command": echo,
                "passed": out.passed(),
                "result": Value::Object(out.payload),
                "reports": out.reports.iter().map(Report::to_json).collect::<Vec<_>>(),
            });
            let text = format!("{}\n", pretty(&doc));
            if path == "-" {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                match std::fs::write(path, text) {
                    Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                    Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {path}: {e}\n") },
                }
            }
        }
        None => {
            let mut s = out.text.join("\n");
            if !s.ends_with('\n') && !s.is_empty() {
                s.push('\n');
            }
            for r in &out.reports {
                s.push_str(&r.to_string());
            }
            Outcome { code, stdout: s, stderr: String::new() }
        }
    }
}

/// Size the global worker pool from `GKMKALC_THREADS`.
pub fn init_threads() {
    if let Some(n) = std::env::var("GKMKALC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}
