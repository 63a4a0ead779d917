use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use steiner_spanner::format::{
    parse_forest, parse_polygon, parse_spanner, parse_tree, write_forest, write_polygon, write_spanner, write_tree,
};
use steiner_spanner::forest_spanner::build_forest_spanner;
use steiner_spanner::generators::{Family, GadgetSpec, Instance};
use steiner_spanner::polygon_spanner::build_polygon_spanner;
use steiner_spanner::steiner_tree::build_steiner_tree_spanner;
use steiner_spanner::verify::{
    check_forest_ratio, check_polygon_ratio, measure, timed, write_csv, ExperimentRecord, Measure, RatioReport,
};
use steiner_spanner::{Error, Host, Metric, NodeKind, SpannerGraph};

#[derive(Parser)]
#[command(name = "steiner-spanner", version, about = "Low-complexity Steiner spanners on trees, forests and polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Gadget parameter, or tree count for random forests.
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a spanner on a tree file.
    BuildTree(BuildArgs),
    /// Build a spanner on a forest file.
    BuildForest(BuildArgs),
    /// Build a geodesic spanner on a polygon file.
    BuildPolygon {
        #[command(flatten)]
        build: BuildArgs,
        /// Write the geodesic polyline of every link.
        #[arg(long)]
        emit_paths: bool,
    },
    /// Check a spanner against its instance.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        spanner: PathBuf,
        /// Largest allowed spanning ratio.
        #[arg(long)]
        bound: f64,
        /// Largest allowed number of Steiner points.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Sweep a grid of parameters and write one CSV row per run.
    Bench {
        #[arg(long)]
        family: Family,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Vertex counts; one per entry of `--n`, or a single value for all.
        #[arg(long, value_delimiter = ',', conflicts_with = "m_per_n")]
        m: Vec<usize>,
        /// Vertex count as a multiple of `n`.
        #[arg(long)]
        m_per_n: Option<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        k: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1", value_parser = clap::value_parser!(u32).range(1..))]
        t: Vec<u32>,
        /// Gadget parameter of the pitchfork star and comb chain, tree count
        /// of random forests.
        #[arg(long, default_value_t = 1)]
        gadget_k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Write 0 in the `ms` column so that reruns are byte-identical.
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    t: u32,
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Input(String),
    Bound(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn summary(g: &SpannerGraph) {
    let m = measure(g);
    println!("size={} complexity={} steiner={}", m.size, m.complexity, m.steiner);
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { family, n, m, k, seed, out } => {
            let text = match (GadgetSpec { family, n, m, k, seed }).generate()? {
                Instance::Tree(t) => write_tree(&t)?,
                Instance::Forest(f) => write_forest(&f)?,
                Instance::Polygon(p, s) => write_polygon(&p, &s),
            };
            write(&out, &text)
        }
        Command::BuildTree(a) => {
            let tree = parse_tree(&read(&a.input)?)?;
            let g = build_steiner_tree_spanner(&tree, a.t as usize, a.k)?;
            summary(&g);
            write(&a.out, &write_spanner(&g, true))
        }
        Command::BuildForest(a) => {
            let forest = parse_forest(&read(&a.input)?)?;
            let g = build_forest_spanner(&forest, a.t as usize, a.k)?;
            summary(&g);
            write(&a.out, &write_spanner(&g, true))
        }
        Command::BuildPolygon { build: a, emit_paths } => {
            let (polygon, sites) = parse_polygon(&read(&a.input)?)?;
            let g = build_polygon_spanner(&polygon, &sites, a.t as usize, a.k)?;
            summary(&g);
            write(&a.out, &write_spanner(&g, emit_paths))
        }
        Command::Verify { input, spanner, bound, k } => verify(&read(&input)?, &read(&spanner)?, bound, k),
        Command::Bench { family, n, m, m_per_n, k, t, gadget_k, seed, out, no_timing } => {
            let ms: Vec<usize> = match (m_per_n, m.len()) {
                (Some(f), _) => n.iter().map(|&x| x * f).collect(),
                (None, 1) => vec![m[0]; n.len()],
                (None, l) if l == n.len() => m,
                _ => return Err(Failure::Input("--m needs one value or one per --n".into())),
            };
            let mut records = Vec::new();
            let mut failed = Vec::new();
            for (&nn, &mm) in n.iter().zip(&ms) {
                let instance = (GadgetSpec { family, n: nn, m: mm, k: gadget_k, seed }).generate()?;
                for &kk in &k {
                    for &tt in &t {
                        let tt = tt as usize;
                        let (mut meas, report, bound) = bench_cell(&instance, tt, kk)?;
                        if no_timing {
                            meas.millis = 0;
                        }
                        if !report.pass {
                            failed.push(format!("n={nn} m={mm} k={kk} t={tt}: ratio {} > {bound}", report.max_ratio));
                        }
                        records.push(ExperimentRecord {
                            family: family.name().to_string(),
                            n: nn,
                            m: mm,
                            k: kk,
                            t: tt,
                            measure: meas,
                            max_ratio: report.max_ratio,
                        });
                    }
                }
            }
            let mut buf = Vec::new();
            write_csv(&mut buf, &records).map_err(|e| Failure::Input(e.to_string()))?;
            write(&out, &String::from_utf8_lossy(&buf))?;
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Bound(failed.join("\n")))
            }
        }
    }
}

/// Builds one grid cell and checks it against its ratio bound.
fn bench_cell(instance: &Instance, t: usize, k: usize) -> Result<(Measure, RatioReport, f64), Failure> {
    let tf = t as f64;
    Ok(match instance {
        Instance::Tree(tree) => {
            let (g, m) = timed(|| build_steiner_tree_spanner(tree, t, k))?;
            (m, check_forest_ratio(&g, std::slice::from_ref(tree), 2.0 * tf)?, 2.0 * tf)
        }
        Instance::Forest(f) => {
            let (g, m) = timed(|| build_forest_spanner(f, t, k))?;
            (m, check_forest_ratio(&g, &f.trees, 2.0 * tf)?, 2.0 * tf)
        }
        Instance::Polygon(p, s) => {
            let (g, m) = timed(|| build_polygon_spanner(p, s, t, k))?;
            let bound = 2.0 * std::f64::consts::SQRT_2 * tf;
            (m, check_polygon_ratio(&g, p, bound)?, bound)
        }
    })
}

fn verify(instance: &str, spanner: &str, bound: f64, k: Option<usize>) -> Result<(), Failure> {
    let g = parse_spanner(spanner)?;
    let is_polygon = instance.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).is_some_and(|l| l.starts_with("polygon"));
    let report = if is_polygon {
        let (polygon, sites) = parse_polygon(instance)?;
        if g.metric != Metric::Polygon {
            return Err(Failure::Input("spanner metric does not match a polygon instance".into()));
        }
        g.validate(&[]).map_err(|e| Failure::Bound(e.to_string()))?;
        for (i, &p) in sites.iter().enumerate() {
            let ok = g.find_node(Host::Point(p)).is_some_and(|v| g.nodes[v].kind == NodeKind::Site);
            if !ok {
                return Err(Failure::Bound(format!("site {i} is missing from the spanner")));
            }
        }
        check_polygon_ratio(&g, &polygon, bound)?
    } else {
        let single = g.metric == Metric::Tree;
        let trees = if single { vec![parse_tree(instance)?] } else { parse_forest(instance)?.trees };
        if g.metric == Metric::Polygon {
            return Err(Failure::Input("spanner metric does not match a tree instance".into()));
        }
        g.validate(&trees).map_err(|e| Failure::Bound(e.to_string()))?;
        for (ti, t) in trees.iter().enumerate() {
            for s in t.sites() {
                let ok = g.find_node(Host::Vertex { tree: ti, vertex: s }).is_some_and(|v| g.nodes[v].kind == NodeKind::Site);
                if !ok {
                    return Err(Failure::Bound(format!("site {s} of tree {ti} is missing from the spanner")));
                }
            }
        }
        check_forest_ratio(&g, &trees, bound)?
    };
    println!("max_ratio={} bound={bound} pairs={} steiner={}", report.max_ratio, report.checked, g.steiner_count());
    if !report.pass {
        let (a, b) = report.argmax.unwrap_or_default();
        return Err(Failure::Bound(format!("ratio {} between nodes {a} and {b} exceeds {bound}", report.max_ratio)));
    }
    if let Some(k) = k {
        if g.steiner_count() > k {
            return Err(Failure::Bound(format!("{} Steiner points exceed k = {k}", g.steiner_count())));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Bound(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
