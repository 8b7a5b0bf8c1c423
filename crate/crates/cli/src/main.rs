//! `freegraph`: exact moments, cumulants and free Poisson spectra of
//! weighted-graph path algebras from the command line.

mod input;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use freegraph::cumulants::{
    contributing_partitions, covariance_maps, kappa_pi_closed, kappa_pi_recursive, mixed_cumulants_vanish,
    moment_from_cumulants, moment_record, p0_json, tuples, Insertion,
};
use freegraph::fock::tstar_t_moments;
use freegraph::graph::{enumerate_paths, make_two_vertex, validate};
use freegraph::noncrossing::{
    catalan, enumerate_nc, enumerate_nc2, narayana_poly, narayana_row, odd_block_count, parse_blocks, parse_pairs,
    tl_bijection, tl_inverse, NCPartition,
};
use freegraph::path_algebra::{
    format_word, norm_squared, parse_word, tau_p0, tr_pairpartition, vacuum_moment_operator_model,
};
use freegraph::rational::{format_rational, int, parse_rational, pow_i, to_f64};
use freegraph::spectral::{density_tstar_t, inversion_estimate, linspace, stieltjes_inversion_scan, DensityModel};
use freegraph::{EdgeId, Rational, WeightedGraph};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "freegraph",
    version,
    about = "Free probability on weighted graph path algebras"
)]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Graph description in JSON.
    #[arg(long, conflicts_with = "preset")]
    graph: Option<PathBuf>,
    /// Built-in graph: `two-vertex:MU_V,MU_W` or `flower:N[:A-B,...]`.
    #[arg(long)]
    preset: Option<String>,
}

impl GraphArgs {
    fn load(&self) -> Result<WeightedGraph> {
        input::load(self.graph.as_deref(), self.preset.as_deref())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph file against every invariant.
    Validate {
        #[arg(long)]
        graph: PathBuf,
    },
    /// List paths of a given length.
    Paths {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
    },
    /// Traces of words by three independent evaluators.
    Moment {
        #[command(flatten)]
        graph: GraphArgs,
        /// Comma-separated edge ids, `*` suffix for the dual (repeatable).
        #[arg(long = "word")]
        words: Vec<String>,
        /// Also evaluate every closed loop of length 1..=N.
        #[arg(long)]
        all_loops: Option<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// P0-valued cumulant of a word, or the covariance maps of a two-vertex graph.
    Cumulant {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, required_unless_present = "covariance")]
        word: Option<String>,
        /// Non-crossing partition as `1,4/2,3`; defaults to the one-block partition.
        #[arg(long)]
        partition: Option<String>,
        #[arg(long)]
        covariance: bool,
    },
    /// Check that mixed cumulants across dual-pair classes vanish.
    Freeness {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 6)]
        max_length: usize,
    },
    /// Narayana row and Catalan number, cross-checked by enumeration.
    Narayana {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Pair partition to non-crossing partition and back.
    Bijection {
        /// Pair partition such as `1-8,2-5,3-4,6-7`.
        #[arg(long, required_unless_present = "blocks", conflicts_with = "blocks")]
        pairs: Option<String>,
        /// Partition such as `1,3,4/2/5,6`, mapped back to pairs.
        #[arg(long)]
        blocks: Option<String>,
    },
    /// Moments of t*t three ways: path algebra, Fock matrix, Narayana formula.
    PoissonVerify {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        max_order: usize,
    },
    /// Exact vacuum moments of the banded t*t against the Narayana formula.
    FockMoments {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        max_order: usize,
    },
    /// Density of t*t on its support with the Stieltjes inversion estimate.
    Density {
        #[arg(long)]
        rho: f64,
        /// Number of grid points.
        #[arg(long)]
        grid: usize,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
    },
    /// Stieltjes inversion of F_rho against the density of a_rho.
    InversionScan {
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long, default_value_t = -1.9, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 1.9, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long, default_value_t = 1e-4)]
        tolerance: f64,
    },
}

/// Rendered artifact plus the verdict of any cross-check it carries.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn pass(text: String) -> Self {
        Outcome { text, ok: true }
    }

    fn json(value: serde_json::Value, ok: bool) -> Self {
        let mut text = serde_json::to_string_pretty(&value).expect("json serializes");
        text.push('\n');
        Outcome { text, ok }
    }
}

fn decimal(r: &Rational) -> String {
    format!("{}", to_f64(r))
}

fn validate_cmd(path: &Path) -> Result<Outcome> {
    let report = validate(&input::read_spec(path)?);
    let mut value = report.to_json();
    value["schema_version"] = json!(1);
    Ok(Outcome::json(value, report.is_valid()))
}

fn paths_cmd(g: &WeightedGraph, length: usize, from: Option<&str>, to: Option<&str>) -> Result<Outcome> {
    let from = from.map(|v| g.vertex_by_name(v)).transpose()?;
    let to = to.map(|v| g.vertex_by_name(v)).transpose()?;
    let mut out = String::from("path,length,source,range,norm_squared\n");
    for p in enumerate_paths(g, length, from, to) {
        writeln!(
            out,
            "\"{}\",{},{},{},{}",
            p.display(g),
            p.len(),
            g.vertex_name(p.source()),
            g.vertex_name(p.range(g)),
            format_rational(&norm_squared(g, &p))
        )?;
    }
    Ok(Outcome::pass(out))
}

fn closed_loops(g: &WeightedGraph, max_len: usize) -> Vec<Vec<EdgeId>> {
    let edges: Vec<EdgeId> = g.edge_ids().collect();
    (1..=max_len)
        .flat_map(|n| tuples(&edges, n))
        .filter(|t| (0..t.len()).all(|i| g.range(t[i]) == g.source(t[(i + 1) % t.len()])))
        .collect()
}

fn moment_cmd(g: &WeightedGraph, specs: &[String], all_loops: Option<usize>, format: Format) -> Result<Outcome> {
    let mut words: Vec<Vec<EdgeId>> = specs.iter().map(|s| parse_word(g, s)).collect::<Result<_, _>>()?;
    if let Some(n) = all_loops {
        words.extend(closed_loops(g, n));
    }
    if words.is_empty() {
        bail!("give at least one --word or --all-loops");
    }
    let mut ok = true;
    let mut out = String::from("word,length,value,decimal,operator_model,cumulant_sum,match\n");
    let mut records = Vec::new();
    for w in &words {
        let trace = tr_pairpartition(g, w)?;
        let model = vacuum_moment_operator_model(g, w)?;
        let from_cumulants = if w.is_empty() {
            int(1)
        } else {
            tau_p0(g, &moment_from_cumulants(g, w))
        };
        let agree = trace == model && model == from_cumulants;
        ok &= agree;
        writeln!(
            out,
            "\"{}\",{},{},{},{},{},{}",
            format_word(g, w),
            w.len(),
            format_rational(&trace),
            decimal(&trace),
            format_rational(&model),
            format_rational(&from_cumulants),
            agree
        )?;
        let mut rec = moment_record(g, w);
        rec["operator_model"] = json!(format_rational(&model));
        rec["pair_partition_trace"] = json!(format_rational(&trace));
        rec["match"] = json!(agree);
        records.push(rec);
    }
    Ok(match format {
        Format::Csv => Outcome { text: out, ok },
        Format::Json => Outcome::json(json!({ "schema_version": 1, "moments": records }), ok),
    })
}

fn cumulant_cmd(g: &WeightedGraph, word: Option<&str>, partition: Option<&str>, covariance: bool) -> Result<Outcome> {
    if covariance {
        return Ok(Outcome::json(covariance_maps(g)?.to_json(g), true));
    }
    let word = parse_word(g, word.expect("clap requires --word"))?;
    if word.is_empty() {
        bail!("cumulants need a nonempty word");
    }
    let n = word.len();
    let p = match partition {
        Some(s) => parse_blocks(s)?,
        None => NCPartition::new(n, vec![(1..=n).collect()])?,
    };
    if p.n() != n {
        bail!("partition {p} is on {} points but the word has {n} letters", p.n());
    }
    let closed = kappa_pi_closed(g, &word, &p)?;
    let left = kappa_pi_recursive(g, &word, &p, Insertion::Left)?;
    let right = kappa_pi_recursive(g, &word, &p, Insertion::Right)?;
    let ok = closed == left && closed == right;
    let decimals: serde_json::Map<String, serde_json::Value> = closed
        .terms()
        .map(|(v, c)| (g.vertex_name(*v).to_string(), json!(to_f64(c))))
        .collect();
    let value = json!({
        "schema_version": 1,
        "word": format_word(g, &word),
        "partition": p.to_string(),
        "partition_count": contributing_partitions(g, &word),
        "value": p0_json(g, &closed),
        "value_decimal": decimals,
        "recursive_left": p0_json(g, &left),
        "recursive_right": p0_json(g, &right),
        "match": ok,
        "moment": moment_record(g, &word),
    });
    Ok(Outcome::json(value, ok))
}

fn narayana_cmd(n: usize, format: Format) -> Result<Outcome> {
    if n == 0 {
        bail!("--n must be at least 1");
    }
    let row = narayana_row(n);
    let mut counted = vec![0u128; n + 1];
    for p in enumerate_nc(n) {
        counted[p.block_count()] += 1;
    }
    let nc2 = enumerate_nc2(2 * n)?.len() as u128;
    let cat = catalan(n as u64);
    let ok = row.iter().zip(&counted[1..]).all(|(a, b)| a == b) && row.iter().sum::<u128>() == cat && nc2 == cat;
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("k,narayana,enumerated,match\n");
            for (k, (a, b)) in row.iter().zip(&counted[1..]).enumerate() {
                writeln!(out, "{},{a},{b},{}", k + 1, a == b)?;
            }
            writeln!(out, "all,{cat},{},{}", counted.iter().sum::<u128>(), ok)?;
            Outcome { text: out, ok }
        }
        Format::Json => Outcome::json(
            json!({
                "schema_version": 1,
                "n": n,
                "row": row.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "catalan": cat.to_string(),
                "nc_count": counted.iter().sum::<u128>().to_string(),
                "nc2_count": nc2.to_string(),
                "match": ok,
            }),
            ok,
        ),
    })
}

fn bijection_cmd(pairs: Option<&str>, blocks: Option<&str>) -> Result<Outcome> {
    let pp = match (pairs, blocks) {
        (Some(s), _) => parse_pairs(s)?,
        (None, Some(s)) => tl_inverse(&parse_blocks(s)?),
        (None, None) => bail!("give --pairs or --blocks"),
    };
    let image = tl_bijection(&pp);
    let back = tl_inverse(&image);
    let ok = odd_block_count(&pp) == image.block_count() && back == pp;
    let value = json!({
        "schema_version": 1,
        "pairs": pp.to_string(),
        "blocks": image.to_string(),
        "odd_pairs": odd_block_count(&pp),
        "block_count": image.block_count(),
        "round_trip": back == pp,
    });
    Ok(Outcome::json(value, ok))
}

fn parse_rho(s: &str) -> Result<Rational> {
    let rho = parse_rational(s)?;
    if rho <= int(0) {
        bail!("rho must be positive, got {s}");
    }
    Ok(rho)
}

/// `Σ_k N(n,k) ρ^{2k−n} = ρ^{−n} N_n(ρ²)`.
fn narayana_formula(n: usize, rho: &Rational) -> Rational {
    narayana_poly(n, &(rho * rho)) * pow_i(rho, -(n as i64))
}

fn poisson_verify_cmd(rho: &str, max_order: usize) -> Result<Outcome> {
    let rho = parse_rho(rho)?;
    if rho < int(1) {
        bail!("the two-vertex graph needs rho >= 1, got {}", format_rational(&rho));
    }
    let g = make_two_vertex(&rho, &int(1))?;
    let shape = g.two_vertex_shape().expect("two-vertex preset");
    let fock = tstar_t_moments(&rho, max_order)?;
    let mut ok = true;
    let mut out = String::from("n,path_algebra,fock,narayana,decimal,match\n");
    for (n, exact) in fock.iter().enumerate().skip(1) {
        let word: Vec<EdgeId> = (0..n).flat_map(|_| [shape.e_dual, shape.e]).collect();
        let path = tr_pairpartition(&g, &word)? * g.mu_squared_sum() / g.mu_squared(shape.w);
        let formula = narayana_formula(n, &rho);
        let agree = path == *exact && *exact == formula;
        ok &= agree;
        writeln!(
            out,
            "{n},{},{},{},{},{agree}",
            format_rational(&path),
            format_rational(exact),
            format_rational(&formula),
            decimal(&formula)
        )?;
    }
    Ok(Outcome { text: out, ok })
}

fn fock_moments_cmd(rho: &str, max_order: usize) -> Result<Outcome> {
    let rho = parse_rho(rho)?;
    let fock = tstar_t_moments(&rho, max_order)?;
    let mut ok = true;
    let mut out = String::from("n,exact,decimal,narayana,match\n");
    for (n, exact) in fock.iter().enumerate().skip(1) {
        let formula = narayana_formula(n, &rho);
        let agree = *exact == formula;
        ok &= agree;
        writeln!(
            out,
            "{n},{},{},{},{agree}",
            format_rational(exact),
            decimal(exact),
            format_rational(&formula)
        )?;
    }
    Ok(Outcome { text: out, ok })
}

fn density_cmd(rho: f64, grid: usize, epsilon: f64) -> Result<Outcome> {
    let model = DensityModel::new(rho)?;
    let (lo, hi) = model.support();
    let mut out = String::from("t,g,inversion_estimate,diff\n");
    for t in linspace(lo, hi, grid) {
        let g = density_tstar_t(t, rho)?;
        let inv = inversion_estimate(t - model.center(), rho, epsilon)?;
        writeln!(out, "{t},{g},{inv},{}", (g - inv).abs())?;
    }
    Ok(Outcome::pass(out))
}

fn inversion_scan_cmd(rho: f64, epsilon: f64, grid: usize, lo: f64, hi: f64, tolerance: f64) -> Result<Outcome> {
    let table = stieltjes_inversion_scan(rho, epsilon, &linspace(lo, hi, grid))?;
    let mut out = String::from("t,density,inversion_estimate,diff\n");
    for r in &table.rows {
        writeln!(out, "{},{},{},{}", r.t, r.density, r.inversion, r.diff)?;
    }
    let worst = table.max_diff();
    if worst >= tolerance {
        eprintln!("max deviation {worst:e} exceeds {tolerance:e}");
    }
    Ok(Outcome {
        text: out,
        ok: worst < tolerance,
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Validate { graph } => validate_cmd(graph),
        Command::Paths {
            graph,
            length,
            from,
            to,
        } => paths_cmd(&graph.load()?, *length, from.as_deref(), to.as_deref()),
        Command::Moment {
            graph,
            words,
            all_loops,
            format,
        } => moment_cmd(&graph.load()?, words, *all_loops, *format),
        Command::Cumulant {
            graph,
            word,
            partition,
            covariance,
        } => cumulant_cmd(&graph.load()?, word.as_deref(), partition.as_deref(), *covariance),
        Command::Freeness { graph, max_length } => {
            let g = graph.load()?;
            let report = mixed_cumulants_vanish(&g, *max_length);
            Ok(Outcome::json(report.to_json(&g), report.is_free()))
        }
        Command::Narayana { n, format } => narayana_cmd(*n, *format),
        Command::Bijection { pairs, blocks } => bijection_cmd(pairs.as_deref(), blocks.as_deref()),
        Command::PoissonVerify { rho, max_order } => poisson_verify_cmd(rho, *max_order),
        Command::FockMoments { rho, max_order } => fock_moments_cmd(rho, *max_order),
        Command::Density { rho, grid, epsilon } => density_cmd(*rho, *grid, *epsilon),
        Command::InversionScan {
            rho,
            epsilon,
            grid,
            lo,
            hi,
            tolerance,
        } => inversion_scan_cmd(*rho, *epsilon, *grid, *lo, *hi, *tolerance),
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, &outcome.text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{}", outcome.text);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|o| emit(&cli, &o).map(|()| o.ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
