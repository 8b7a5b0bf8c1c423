use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use freegraph::graph::{make_flower, make_two_vertex, GraphSpec};
use freegraph::rational::parse_rational;
use freegraph::WeightedGraph;

pub fn read_spec(path: &Path) -> Result<GraphSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Builds a graph from `two-vertex:MU_V,MU_W` or `flower:N[:PAIRS]`, where
/// `PAIRS` lists mutually dual petals as `1-2,3-4` (1-based); unlisted petals
/// are self-dual.
pub fn preset(spec: &str) -> Result<WeightedGraph> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    match kind {
        "two-vertex" => {
            let Some((v, w)) = rest.split_once(',') else {
                bail!("expected two-vertex:MU_V,MU_W, got {spec:?}");
            };
            Ok(make_two_vertex(&parse_rational(v)?, &parse_rational(w)?)?)
        }
        "flower" => {
            let (n, pairs) = rest.split_once(':').unwrap_or((rest, ""));
            let n: usize = n.trim().parse().with_context(|| format!("petal count in {spec:?}"))?;
            let mut groups: Vec<Vec<usize>> = Vec::new();
            let mut paired = vec![false; n];
            for tok in pairs.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let Some((a, b)) = tok.split_once('-') else {
                    bail!("petal pair {tok:?} is not of the form A-B");
                };
                let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
                if a == 0 || b == 0 || a > n || b > n {
                    bail!("petal pair {tok:?} is outside 1..={n}");
                }
                for p in [a, b] {
                    if std::mem::replace(&mut paired[p - 1], true) {
                        bail!("petal {p} is paired twice");
                    }
                }
                groups.push(vec![a - 1, b - 1]);
            }
            groups.extend((0..n).filter(|&i| !paired[i]).map(|i| vec![i]));
            Ok(make_flower(n, &groups)?)
        }
        _ => bail!("unknown preset {kind:?} (expected two-vertex or flower)"),
    }
}

pub fn load(graph: Option<&Path>, preset_spec: Option<&str>) -> Result<WeightedGraph> {
    match (graph, preset_spec) {
        (Some(path), None) => Ok(WeightedGraph::from_spec(&read_spec(path)?)?),
        (None, Some(spec)) => preset(spec),
        (None, None) => bail!("one of --graph or --preset is required"),
        (Some(_), Some(_)) => bail!("--graph and --preset are mutually exclusive"),
    }
}
