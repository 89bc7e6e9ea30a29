use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fatsep::bench::{run_bench, write_csv, BenchSuite};
use fatsep::exact::{solve_pack, solve_pierce, SolveConfig};
use fatsep::geometry::Point;
use fatsep::instance::{gen_instance, read_instance, GenSpec, Instance, Layout, ShapeFamily};
use fatsep::measure::Witness;
use fatsep::oracle::{brute_pack, brute_pierce, fine_grid_pierce, OracleMethod};
use fatsep::ptas::{ptas_pack, ptas_pierce, Discard, PtasConfig};
use fatsep::separator::{separate, SeparatorConfig};
use fatsep::svg::{save_svg, Overlay};
use fatsep::Error;

const EXIT_ERROR: u8 = 2;
const EXIT_ABORTED: u8 = 3;

#[derive(Parser)]
#[command(name = "fatsep", version, about = "Separators, packing and piercing for fat objects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance.
    Gen(GenArgs),
    /// Exact packing number.
    Pack(SolveArgs),
    /// Exact piercing number.
    Pierce(SolveArgs),
    /// Approximate packing.
    PtasPack(PtasArgs),
    /// Approximate piercing.
    PtasPierce(PtasArgs),
    /// Compute a box separator.
    Separator(SeparatorArgs),
    /// Brute-force reference values for small instances.
    Oracle(OracleArgs),
    /// Run a benchmark suite and write CSV.
    Bench(BenchArgs),
    /// Draw a planar instance as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value_t = Family::Balls)]
    family: Family,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Uniform random layout with this many objects.
    #[arg(long, conflicts_with_all = ["grid", "clusters"])]
    n: Option<usize>,
    /// Expected objects per unit of volume scaled by size (random layout).
    #[arg(long, default_value_t = 0.8)]
    density: f64,
    /// Lattice layout with k cells per axis; packing number k^dim.
    #[arg(long, conflicts_with = "clusters")]
    grid: Option<usize>,
    #[arg(long, default_value_t = 2)]
    per_cell: usize,
    #[arg(long, default_value_t = 6.0)]
    spacing: f64,
    /// Clustered layout with this many clusters.
    #[arg(long)]
    clusters: Option<usize>,
    #[arg(long, default_value_t = 10)]
    per_cluster: usize,
    #[arg(long, default_value_t = 3.0)]
    spread: f64,
    #[arg(long, default_value_t = 40.0)]
    gap: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Balls,
    Boxes,
    Mixed,
}

impl From<Family> for ShapeFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Balls => ShapeFamily::Balls,
            Family::Boxes => ShapeFamily::Boxes,
            Family::Mixed => ShapeFamily::Mixed,
        }
    }
}

#[derive(Args)]
struct SolverFlags {
    /// Instance file.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 12)]
    base_threshold: usize,
    /// Separator parameter.
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.8)]
    balance_cap: f64,
    #[arg(long, default_value_t = 100_000_000)]
    node_cap: u64,
    /// Evaluate independent branches on several threads.
    #[arg(long)]
    parallel: bool,
    /// Draw the solution (planar instances only).
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

impl SolverFlags {
    fn solve_config(&self) -> SolveConfig {
        SolveConfig {
            base_threshold: self.base_threshold,
            epsilon: self.epsilon,
            balance_cap: self.balance_cap,
            node_cap: self.node_cap,
            parallel_branches: self.parallel,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    flags: SolverFlags,
}

#[derive(Args)]
struct PtasArgs {
    #[command(flatten)]
    flags: SolverFlags,
    /// Accuracy of the approximation, in (0, 1).
    #[arg(long, default_value_t = 0.25)]
    accuracy: f64,
    /// Leaves are solved exactly below ceil((c_stop / accuracy)^d).
    #[arg(long, default_value_t = 3.0)]
    c_stop: f64,
}

#[derive(Args)]
struct SeparatorArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Pack,
    Pierce,
    Grid,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = OracleKind::Pack)]
    method: OracleKind,
    /// Grid intervals per axis for the grid method.
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BenchArgs {
    /// Built-in suite: grid, node-law, random or empty.
    #[arg(long, default_value = "grid")]
    suite: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderOverlay {
    None,
    Separator,
    Pack,
    Pierce,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    svg: PathBuf,
    #[arg(long, value_enum, default_value_t = RenderOverlay::None)]
    overlay: RenderOverlay,
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
}

/// Text emitted on success plus whether the search was cut short.
struct Report {
    text: String,
    aborted: bool,
}

impl Report {
    fn done(text: String) -> Self {
        Report { text, aborted: false }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (result, output) = match &cli.command {
        Command::Gen(a) => (gen(a), Some(&a.output)),
        Command::Pack(a) => (pack(&a.flags), Some(&a.flags.output)),
        Command::Pierce(a) => (pierce(&a.flags), Some(&a.flags.output)),
        Command::PtasPack(a) => (approx(a, true), Some(&a.flags.output)),
        Command::PtasPierce(a) => (approx(a, false), Some(&a.flags.output)),
        Command::Separator(a) => (separator(a), Some(&a.output)),
        Command::Oracle(a) => (oracle(a), Some(&a.output)),
        Command::Bench(a) => (bench(a), Some(&a.output)),
        Command::Render(a) => (render(a), None),
    };
    let code = match result.and_then(|r| emit(&r, output.and_then(|o| o.out.as_ref())).map(|_| r)) {
        Ok(r) if r.aborted => {
            eprintln!("fatsep: node cap reached, result is a bound only");
            ExitCode::from(EXIT_ABORTED)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fatsep: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    };
    eprintln!("wall_ms={:.3}", start.elapsed().as_secs_f64() * 1e3);
    code
}

fn emit(r: &Report, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, &r.text)?,
        None => std::io::stdout().write_all(r.text.as_bytes())?,
    }
    Ok(())
}

fn gen(a: &GenArgs) -> Result<Report, Error> {
    let layout = if let Some(k) = a.grid {
        Layout::Grid {
            k,
            per_cell: a.per_cell,
            spacing: a.spacing,
        }
    } else if let Some(clusters) = a.clusters {
        Layout::Clusters {
            clusters,
            per_cluster: a.per_cluster,
            spread: a.spread,
            gap: a.gap,
        }
    } else {
        Layout::Random {
            n: a.n.unwrap_or(20),
            density: a.density,
        }
    };
    let spec = GenSpec {
        family: a.family.into(),
        dim: a.dim,
        layout,
        seed: a.seed,
    };
    Ok(Report::done(gen_instance(&spec)?.to_text()))
}

fn ids_line(tag: &str, ids: &[usize]) -> String {
    let mut line = tag.to_string();
    for id in ids {
        let _ = write!(line, " {id}");
    }
    line.push('\n');
    line
}

fn point_lines(points: &[Point]) -> String {
    points.iter().map(|p| format!("point {}\n", coords(p))).collect()
}

fn coords(p: &Point) -> String {
    p.coords()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn draw(inst: &Instance, overlay: Overlay<'_>, svg: Option<&PathBuf>) -> Result<(), Error> {
    match svg {
        Some(path) => save_svg(inst, overlay, path),
        None => Ok(()),
    }
}

fn pack(f: &SolverFlags) -> Result<Report, Error> {
    let inst = read_instance(&f.input)?;
    let s = solve_pack(&inst, &f.solve_config())?;
    draw(&inst, Overlay::Packing(&s.witness), f.svg.as_ref())?;
    let text = format!(
        "pack value={} optimal={} nodes={} depth={} fallbacks={}\n{}",
        s.value,
        s.optimal,
        s.nodes,
        s.depth,
        s.fallbacks,
        ids_line("witness", &s.witness)
    );
    Ok(Report {
        text,
        aborted: !s.optimal,
    })
}

fn pierce(f: &SolverFlags) -> Result<Report, Error> {
    let inst = read_instance(&f.input)?;
    let s = solve_pierce(&inst, &f.solve_config())?;
    draw(&inst, Overlay::Piercing(&s.witness), f.svg.as_ref())?;
    let text = format!(
        "pierce value={} optimal={} nodes={} depth={} fallbacks={}\n{}",
        s.value,
        s.optimal,
        s.nodes,
        s.depth,
        s.fallbacks,
        point_lines(&s.witness)
    );
    Ok(Report {
        text,
        aborted: !s.optimal,
    })
}

fn discard_lines(discards: &[Discard]) -> String {
    discards
        .iter()
        .map(|d| {
            format!(
                "discard level={} objects={} estimate={} boundary={} boundary_estimate={} points={}\n",
                d.level,
                d.subset_len,
                d.estimate,
                d.boundary_ids.len(),
                d.boundary_estimate,
                d.points_spent
            )
        })
        .collect()
}

fn approx(a: &PtasArgs, packing: bool) -> Result<Report, Error> {
    let inst = read_instance(&a.flags.input)?;
    let cfg = PtasConfig {
        epsilon: a.accuracy,
        c_stop: a.c_stop,
        solve: a.flags.solve_config(),
    };
    let header = |name: &str, value: usize, nodes: u64, depth: usize| {
        format!(
            "{name} value={value} epsilon={} stop_threshold={} nodes={nodes} depth={depth}\n",
            cfg.epsilon,
            cfg.stop_threshold(inst.dim)
        )
    };
    let text = if packing {
        let r = ptas_pack(&inst, &cfg)?;
        draw(&inst, Overlay::Packing(&r.solution.witness), a.flags.svg.as_ref())?;
        let s = &r.solution;
        header("ptas-pack", s.value, s.nodes, s.depth)
            + &discard_lines(&r.discards)
            + &ids_line("witness", &s.witness)
    } else {
        let r = ptas_pierce(&inst, &cfg)?;
        draw(&inst, Overlay::Piercing(&r.solution.witness), a.flags.svg.as_ref())?;
        let s = &r.solution;
        header("ptas-pierce", s.value, s.nodes, s.depth)
            + &discard_lines(&r.discards)
            + &point_lines(&s.witness)
    };
    Ok(Report::done(text))
}

fn separator(a: &SeparatorArgs) -> Result<Report, Error> {
    let inst = read_instance(&a.input)?;
    let cfg = SeparatorConfig {
        epsilon: a.epsilon,
        ..SeparatorConfig::default()
    };
    let r = separate(&inst.objects, &cfg)?;
    if inst.dim == 2 {
        draw(&inst, Overlay::Separator(&r), a.svg.as_ref())?;
    } else if a.svg.is_some() {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: inst.dim,
        });
    }
    let mut text = format!(
        "separator total={} inside={} outside={} boundary={} m_star={} degenerate={} balanced={}\n",
        r.mu_total.value,
        r.mu_inside.value,
        r.mu_outside.value,
        r.mu_boundary.value,
        r.m_star,
        r.degenerate,
        r.is_balanced(cfg.balance_cap)
    );
    let _ = writeln!(text, "region {} {}", coords(&r.region.low), coords(&r.region.high));
    let _ = writeln!(text, "base {} {}", coords(&r.base_box.low), coords(&r.base_box.high));
    text += &ids_line("inside", &r.inside_ids);
    text += &ids_line("outside", &r.outside_ids);
    text += &ids_line("boundary", &r.boundary_ids);
    for s in &r.sweep.shells {
        let _ = writeln!(
            text,
            "shell {} m={} boundary_measure={} small_measure={}",
            s.index, s.magnification, s.boundary_measure, s.small_measure
        );
    }
    Ok(Report::done(text))
}

fn oracle(a: &OracleArgs) -> Result<Report, Error> {
    let inst = read_instance(&a.input)?;
    let r = match a.method {
        OracleKind::Pack => brute_pack(&inst)?,
        OracleKind::Pierce => brute_pierce(&inst)?,
        OracleKind::Grid => fine_grid_pierce(&inst, a.steps)?,
    };
    let method = match r.method {
        OracleMethod::ExhaustiveSubset => "exhaustive-subset",
        OracleMethod::SetCoverExhaustive => "set-cover",
        OracleMethod::FineGrid => "fine-grid",
    };
    let body = match &r.witness {
        Witness::Objects(ids) => ids_line("witness", ids),
        Witness::Points(points) => point_lines(points),
    };
    Ok(Report::done(format!("oracle method={method} value={}\n{body}", r.value)))
}

fn bench(a: &BenchArgs) -> Result<Report, Error> {
    let suite = BenchSuite::builtin(&a.suite)?;
    let rows = run_bench(&suite)?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    let aborted = rows.iter().any(|r| r.status == "aborted");
    Ok(Report {
        text: String::from_utf8(buf).expect("csv output is utf-8"),
        aborted,
    })
}

fn render(a: &RenderArgs) -> Result<Report, Error> {
    let inst = read_instance(&a.input)?;
    let cfg = SolveConfig {
        epsilon: a.epsilon,
        ..SolveConfig::default()
    };
    match a.overlay {
        RenderOverlay::None => save_svg(&inst, Overlay::Plain, &a.svg)?,
        RenderOverlay::Separator => {
            let r = separate(&inst.objects, &cfg.separator())?;
            save_svg(&inst, Overlay::Separator(&r), &a.svg)?
        }
        RenderOverlay::Pack => {
            let s = solve_pack(&inst, &cfg)?;
            save_svg(&inst, Overlay::Packing(&s.witness), &a.svg)?
        }
        RenderOverlay::Pierce => {
            let s = solve_pierce(&inst, &cfg)?;
            save_svg(&inst, Overlay::Piercing(&s.witness), &a.svg)?
        }
    }
    Ok(Report::done(String::new()))
}
