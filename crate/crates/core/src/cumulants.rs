//! `P₀(Γ)`-valued free cumulants of edge generators in `Gr(Γ)`.
//!
//! The only non-vanishing base cumulants are
//! `κ₂([e], [e~]) = μ(r(e))/μ(s(e)) · [s(e)]`. Their multiplicative extension
//! `κ_π` over a non-crossing partition has a closed form (nonzero only for
//! dual-matched non-crossing pairings of a composable loop), and can also be
//! evaluated by repeatedly peeling an interval block and multiplying its
//! value into a neighbouring argument. Both evaluators live here, together
//! with a third route that recovers the cumulants from moments alone.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde_json::json;
use thiserror::Error;

use crate::graph::{EdgeId, VertexId, WeightedGraph};
use crate::noncrossing::{enumerate_nc, narayana_poly, NCPartition};
use crate::path_algebra::{format_word, phi_word_fock, tau_p0, P0Element};
use crate::rational::{format_rational, is_positive, pow_i, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CumulantError {
    #[error("covariance maps need the two-vertex graph with one dual edge pair")]
    NotTwoVertex,
    #[error("free Poisson parameters must be positive (rate {rate}, jump {jump})")]
    BadPoissonParams { rate: String, jump: String },
    #[error("partition is on {partition} points but the tuple has {tuple} entries")]
    SizeMismatch { partition: usize, tuple: usize },
}

/// A scalar multiple of an edge generator, `c·[e]`. Multiplying by vertex
/// idempotents on either side only rescales it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedEdge {
    pub coeff: Rational,
    pub edge: EdgeId,
}

impl WeightedEdge {
    pub fn plain(edge: EdgeId) -> Self {
        WeightedEdge {
            coeff: Rational::one(),
            edge,
        }
    }

    /// `b · (c[e]) = b(s(e)) c [e]`.
    pub fn left_mul(&self, g: &WeightedGraph, b: &P0Element) -> Self {
        WeightedEdge {
            coeff: &self.coeff * b.get(g.source(self.edge)),
            edge: self.edge,
        }
    }

    /// `(c[e]) · b = b(r(e)) c [e]`.
    pub fn right_mul(&self, g: &WeightedGraph, b: &P0Element) -> Self {
        WeightedEdge {
            coeff: &self.coeff * b.get(g.range(self.edge)),
            edge: self.edge,
        }
    }
}

pub fn plain_args(edges: &[EdgeId]) -> Vec<WeightedEdge> {
    edges.iter().copied().map(WeightedEdge::plain).collect()
}

/// `κ_n([e_1], ..., [e_n])`.
pub fn kappa_base(g: &WeightedGraph, edges: &[EdgeId]) -> P0Element {
    match edges {
        &[e, f] if f == g.dual(e) => {
            let (s, r) = (g.source(e), g.range(e));
            P0Element::term(s, g.mu(r) / g.mu(s))
        }
        _ => P0Element::zero(),
    }
}

/// Multilinear extension of [`kappa_base`] to scaled generators.
pub fn kappa_base_args(g: &WeightedGraph, args: &[WeightedEdge]) -> P0Element {
    let edges: Vec<EdgeId> = args.iter().map(|a| a.edge).collect();
    let c: Rational = args.iter().map(|a| a.coeff.clone()).product();
    kappa_base(g, &edges).scale(&c)
}

fn check_size(t: &[EdgeId], p: &NCPartition) -> Result<(), CumulantError> {
    if p.n() != t.len() {
        return Err(CumulantError::SizeMismatch {
            partition: p.n(),
            tuple: t.len(),
        });
    }
    Ok(())
}

/// Closed form of `κ_π([e_1], ..., [e_n])`: zero unless the word is a
/// composable loop and `π` pairs each `i < j` with `e_j = e_i~`; then
/// `Π_{(i<j)} μ(r(e_i))/μ(r(e_j)) · [s(e_1)]`.
pub fn kappa_pi_closed(g: &WeightedGraph, t: &[EdgeId], p: &NCPartition) -> Result<P0Element, CumulantError> {
    check_size(t, p)?;
    let n = t.len();
    if n == 0 {
        return Ok(P0Element::zero());
    }
    let is_loop = (0..n).all(|i| g.range(t[i]) == g.source(t[(i + 1) % n]));
    if !is_loop || !p.is_pair_partition() {
        return Ok(P0Element::zero());
    }
    let mut c = Rational::one();
    for b in p.blocks() {
        let (ei, ej) = (t[b[0] - 1], t[b[1] - 1]);
        if ej != g.dual(ei) {
            return Ok(P0Element::zero());
        }
        c *= g.mu(g.range(ei)) / g.mu(g.range(ej));
    }
    Ok(P0Element::term(g.source(t[0]), c))
}

/// Where a peeled block's value is multiplied in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insertion {
    /// Onto the argument just before the block (`x_{k-1} κ(...)`), falling
    /// back to the one after it when the block starts the live sequence.
    Left,
    /// Onto the argument just after the block (`κ(...) x_{l+1}`), falling
    /// back to the one before it.
    Right,
}

/// Evaluates a multiplicative extension by interval-block peeling, with
/// `block_value` supplying the cumulant of a block of plain edges.
pub(crate) fn peel(
    g: &WeightedGraph,
    args: &[WeightedEdge],
    p: &NCPartition,
    mode: Insertion,
    block_value: &mut dyn FnMut(&[EdgeId]) -> P0Element,
) -> P0Element {
    let mut coeffs: Vec<Rational> = args.iter().map(|a| a.coeff.clone()).collect();
    let mut live: Vec<usize> = (0..args.len()).collect();
    let mut blocks: Vec<Vec<usize>> = p.blocks().iter().map(|b| b.iter().map(|i| i - 1).collect()).collect();
    loop {
        let (bi, start) = blocks
            .iter()
            .enumerate()
            .find_map(|(bi, b)| {
                let start = live.iter().position(|&x| x == b[0])?;
                (live.get(start..start + b.len()) == Some(b.as_slice())).then_some((bi, start))
            })
            .expect("a non-crossing partition always has an interval block");
        let block = blocks.remove(bi);
        let edges: Vec<EdgeId> = block.iter().map(|&i| args[i].edge).collect();
        let c: Rational = block.iter().map(|&i| coeffs[i].clone()).product();
        let value = block_value(&edges).scale(&c);
        live.drain(start..start + block.len());
        if live.is_empty() || value.is_zero() {
            return value;
        }
        let use_left = match mode {
            Insertion::Left => start > 0,
            Insertion::Right => start == live.len(),
        };
        if use_left {
            let i = live[start - 1];
            coeffs[i] *= value.get(g.range(args[i].edge));
        } else {
            let i = live[start];
            coeffs[i] *= value.get(g.source(args[i].edge));
        }
    }
}

/// `κ_π` from base cumulants by interval-block peeling.
pub fn kappa_pi_recursive(
    g: &WeightedGraph,
    t: &[EdgeId],
    p: &NCPartition,
    mode: Insertion,
) -> Result<P0Element, CumulantError> {
    check_size(t, p)?;
    Ok(kappa_pi_recursive_args(g, &plain_args(t), p, mode))
}

pub fn kappa_pi_recursive_args(
    g: &WeightedGraph,
    args: &[WeightedEdge],
    p: &NCPartition,
    mode: Insertion,
) -> P0Element {
    if args.is_empty() {
        return P0Element::zero();
    }
    peel(g, args, p, mode, &mut |edges| kappa_base(g, edges))
}

/// `φ([e_1] ⋯ [e_n]) = Σ_{π ∈ NC(n)} κ_π`, summed with the closed form.
pub fn moment_from_cumulants(g: &WeightedGraph, t: &[EdgeId]) -> P0Element {
    let mut acc = P0Element::zero();
    for p in enumerate_nc(t.len()) {
        acc = &acc + &kappa_pi_closed(g, t, &p).expect("sizes agree");
    }
    acc
}

/// Same sum for scaled generators, through the peeling evaluator.
pub fn moment_from_cumulants_args(g: &WeightedGraph, args: &[WeightedEdge]) -> P0Element {
    let mut acc = P0Element::zero();
    for p in enumerate_nc(args.len()) {
        acc = &acc + &kappa_pi_recursive_args(g, args, &p, Insertion::Left);
    }
    acc
}

/// Number of `π ∈ NC(n)` whose closed-form `κ_π` is nonzero.
pub fn contributing_partitions(g: &WeightedGraph, t: &[EdgeId]) -> usize {
    enumerate_nc(t.len())
        .iter()
        .filter(|p| !kappa_pi_closed(g, t, p).expect("sizes agree").is_zero())
        .count()
}

/// Cumulants recovered from moments alone:
/// `κ_n(x) = φ(x_1 ⋯ x_n) − Σ_{π ≠ 1_n} κ_π(x)`, with `φ` taken from the
/// left-regular (Fock) representation. Independent of [`kappa_base`].
pub struct CumulantsFromMoments<'g> {
    g: &'g WeightedGraph,
    memo: HashMap<Vec<EdgeId>, P0Element>,
}

impl<'g> CumulantsFromMoments<'g> {
    pub fn new(g: &'g WeightedGraph) -> Self {
        CumulantsFromMoments {
            g,
            memo: HashMap::new(),
        }
    }

    pub fn kappa(&mut self, edges: &[EdgeId]) -> P0Element {
        if let Some(k) = self.memo.get(edges) {
            return k.clone();
        }
        let g = self.g;
        let mut k = phi_word_fock(g, edges).expect("edges belong to graph");
        let args = plain_args(edges);
        for p in enumerate_nc(edges.len()) {
            if p.block_count() == 1 {
                continue;
            }
            let term = peel(g, &args, &p, Insertion::Left, &mut |sub| self.kappa(sub));
            k = &k + &term.scale(&-Rational::one());
        }
        self.memo.insert(edges.to_vec(), k.clone());
        k
    }
}

/// A tuple whose cumulant should vanish (or whose two routes disagree) but does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreenessWitness {
    pub word: Vec<EdgeId>,
    pub closed_form: P0Element,
    pub from_moments: P0Element,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreenessReport {
    pub max_len: usize,
    pub dual_classes: usize,
    pub tuples_checked: usize,
    pub mixed_tuples: usize,
    pub witnesses: Vec<FreenessWitness>,
}

impl FreenessReport {
    pub fn is_free(&self) -> bool {
        self.witnesses.is_empty()
    }

    pub fn to_json(&self, g: &WeightedGraph) -> serde_json::Value {
        json!({
            "schema_version": 1,
            "max_len": self.max_len,
            "dual_classes": self.dual_classes,
            "tuples_checked": self.tuples_checked,
            "mixed_tuples": self.mixed_tuples,
            "free": self.is_free(),
            "witnesses": self.witnesses.iter().map(|w| json!({
                "word": format_word(g, &w.word),
                "closed_form": p0_json(g, &w.closed_form),
                "from_moments": p0_json(g, &w.from_moments),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Checks every edge tuple of length `1..=max_len`: the cumulant recovered
/// from moments must equal the base cumulant, and both must vanish whenever
/// the tuple draws from two or more dual-pair classes.
pub fn mixed_cumulants_vanish(g: &WeightedGraph, max_len: usize) -> FreenessReport {
    let edges: Vec<EdgeId> = g.edge_ids().collect();
    let mut route = CumulantsFromMoments::new(g);
    let mut report = FreenessReport {
        max_len,
        dual_classes: g.dual_classes().len(),
        tuples_checked: 0,
        mixed_tuples: 0,
        witnesses: Vec::new(),
    };
    for n in 1..=max_len {
        for t in tuples(&edges, n) {
            report.tuples_checked += 1;
            let first = g.dual_class_of(t[0]);
            let mixed = t.iter().any(|&e| g.dual_class_of(e) != first);
            let full = NCPartition::new(n, vec![(1..=n).collect()]).expect("one block");
            let closed = kappa_pi_closed(g, &t, &full).expect("sizes agree");
            let from_moments = route.kappa(&t);
            if mixed {
                report.mixed_tuples += 1;
            }
            let bad = closed != from_moments || (mixed && !closed.is_zero());
            if bad {
                report.witnesses.push(FreenessWitness {
                    word: t,
                    closed_form: closed,
                    from_moments,
                });
            }
        }
    }
    report
}

/// All length-`n` words over `alphabet`, lexicographic.
pub fn tuples(alphabet: &[EdgeId], n: usize) -> Vec<Vec<EdgeId>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&e| {
                    let mut w = w.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

/// Covariance of the `P₀`-valued circular element `x = λ(e)` on the
/// two-vertex graph. Matrices act on coordinates in the ordered basis
/// `(p_v, p_w)`: entry `[i][j]` is the `i`-th coordinate of the image of the
/// `j`-th basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovarianceMaps {
    pub v: VertexId,
    pub w: VertexId,
    pub rho: Rational,
    /// `α(b) = φ(x* b x)`.
    pub alpha: [[Rational; 2]; 2],
    /// `β(b) = φ(x b x*)`.
    pub beta: [[Rational; 2]; 2],
    /// `η(b) = κ₂(s b, s)` for `s = x + x*`.
    pub eta: [[Rational; 2]; 2],
}

impl CovarianceMaps {
    pub fn to_json(&self, g: &WeightedGraph) -> serde_json::Value {
        let m = |a: &[[Rational; 2]; 2]| {
            a.iter()
                .map(|row| row.iter().map(format_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        };
        json!({
            "schema_version": 1,
            "basis": [g.vertex_name(self.v), g.vertex_name(self.w)],
            "convention": "entry [i][j] is coordinate i of the image of basis vector j",
            "rho": format_rational(&self.rho),
            "alpha": m(&self.alpha),
            "beta": m(&self.beta),
            "eta": m(&self.eta),
        })
    }
}

pub fn covariance_maps(g: &WeightedGraph) -> Result<CovarianceMaps, CumulantError> {
    let shape = g.two_vertex_shape().ok_or(CumulantError::NotTwoVertex)?;
    let basis = [shape.v, shape.w];
    let (x, xs) = (shape.e, shape.e_dual);
    // φ(a b c) for generators a, c and b ∈ P₀, via the cumulant sum
    let sandwich = |a: EdgeId, b: VertexId, c: EdgeId| {
        let args = [
            WeightedEdge::plain(a).right_mul(g, &P0Element::vertex(b)),
            WeightedEdge::plain(c),
        ];
        moment_from_cumulants_args(g, &args)
    };
    let zero = || {
        [
            [Rational::zero(), Rational::zero()],
            [Rational::zero(), Rational::zero()],
        ]
    };
    let (mut alpha, mut beta, mut eta) = (zero(), zero(), zero());
    for (j, &b) in basis.iter().enumerate() {
        let a_img = sandwich(xs, b, x);
        let b_img = sandwich(x, b, xs);
        // κ₂(s b, s) with s = x + x*, expanded bilinearly
        let mut e_img = P0Element::zero();
        for l in [x, xs] {
            for r in [x, xs] {
                let args = [
                    WeightedEdge::plain(l).right_mul(g, &P0Element::vertex(b)),
                    WeightedEdge::plain(r),
                ];
                e_img = &e_img + &kappa_base_args(g, &args);
            }
        }
        for (i, &u) in basis.iter().enumerate() {
            alpha[i][j] = a_img.get(u);
            beta[i][j] = b_img.get(u);
            eta[i][j] = e_img.get(u);
        }
    }
    Ok(CovarianceMaps {
        v: shape.v,
        w: shape.w,
        rho: shape.rho,
        alpha,
        beta,
        eta,
    })
}

/// Rate `λ` and jump size `α` of a free Poisson law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreePoissonParams {
    rate: Rational,
    jump: Rational,
}

impl FreePoissonParams {
    pub fn new(rate: Rational, jump: Rational) -> Result<Self, CumulantError> {
        if !is_positive(&rate) || !is_positive(&jump) {
            return Err(CumulantError::BadPoissonParams {
                rate: format_rational(&rate),
                jump: format_rational(&jump),
            });
        }
        Ok(FreePoissonParams { rate, jump })
    }

    pub fn rate(&self) -> &Rational {
        &self.rate
    }

    pub fn jump(&self) -> &Rational {
        &self.jump
    }

    /// Free cumulants `κ_n = λ αⁿ`.
    pub fn cumulants(&self, len: usize) -> Vec<Rational> {
        (1..=len).map(|n| &self.rate * pow_i(&self.jump, n as i64)).collect()
    }
}

/// `μ_n = αⁿ N_n(λ)`.
pub fn free_poisson_moment(n: usize, p: &FreePoissonParams) -> Rational {
    pow_i(&p.jump, n as i64) * narayana_poly(n, &p.rate)
}

fn block_product(p: &NCPartition, k: &[Rational]) -> Rational {
    p.blocks().iter().map(|b| k[b.len() - 1].clone()).product()
}

/// Scalar moments `μ_1..μ_n` from free cumulants `κ_1..κ_n`.
pub fn cumulants_to_moments(k: &[Rational]) -> Vec<Rational> {
    (1..=k.len())
        .map(|n| enumerate_nc(n).iter().map(|p| block_product(p, k)).sum())
        .collect()
}

/// Scalar free cumulants `κ_1..κ_n` from moments `μ_1..μ_n`.
pub fn moments_to_cumulants(m: &[Rational]) -> Vec<Rational> {
    let mut k: Vec<Rational> = Vec::with_capacity(m.len());
    for n in 1..=m.len() {
        k.push(Rational::zero());
        let lower: Rational = enumerate_nc(n)
            .iter()
            .filter(|p| p.block_count() > 1)
            .map(|p| block_product(p, &k))
            .sum();
        k[n - 1] = &m[n - 1] - lower;
    }
    k
}

pub fn p0_json(g: &WeightedGraph, b: &P0Element) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = b
        .terms()
        .map(|(v, c)| (g.vertex_name(*v).to_string(), json!(format_rational(c))))
        .collect();
    serde_json::Value::Object(map)
}

/// JSON record for one edge tuple: the `P₀`-valued moment as a cumulant sum.
pub fn moment_record(g: &WeightedGraph, t: &[EdgeId]) -> serde_json::Value {
    let value = moment_from_cumulants(g, t);
    let decimal: serde_json::Map<String, serde_json::Value> = value
        .terms()
        .map(|(v, c)| (g.vertex_name(*v).to_string(), json!(to_f64(c))))
        .collect();
    json!({
        "schema_version": 1,
        "word": format_word(g, t),
        "partition_count": contributing_partitions(g, t),
        "value": p0_json(g, &value),
        "value_decimal": decimal,
        "trace": format_rational(&tau_p0(g, &value)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_flower, make_two_vertex};
    use crate::noncrossing::catalan;
    use crate::rational::{int, ratio};

    fn tv(mu_v: Rational, mu_w: Rational) -> (WeightedGraph, EdgeId, EdgeId) {
        let g = make_two_vertex(&mu_v, &mu_w).unwrap();
        let e = g.edge_by_name("e").unwrap();
        let d = g.edge_by_name("e~").unwrap();
        (g, e, d)
    }

    fn part(n: usize, blocks: &[&[usize]]) -> NCPartition {
        NCPartition::new(n, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn base_cumulants() {
        let (g, e, d) = tv(int(3), int(2));
        assert_eq!(kappa_base(&g, &[e, d]), P0Element::term(VertexId(0), ratio(2, 3)));
        assert_eq!(kappa_base(&g, &[d, e]), P0Element::term(VertexId(1), ratio(3, 2)));
        assert!(kappa_base(&g, &[e]).is_zero());
        assert!(kappa_base(&g, &[e, e]).is_zero());
        assert!(kappa_base(&g, &[e, d, e, d]).is_zero());
    }

    #[test]
    fn closed_form_examples() {
        let (g, e, d) = tv(int(3), int(2));
        let rho = ratio(3, 2);
        let p = part(4, &[&[1, 2], &[3, 4]]);
        assert_eq!(
            kappa_pi_closed(&g, &[d, e, d, e], &p).unwrap(),
            P0Element::term(VertexId(1), &rho * &rho)
        );
        let q = part(4, &[&[1, 4], &[2, 3]]);
        assert_eq!(
            kappa_pi_closed(&g, &[d, e, d, e], &q).unwrap(),
            P0Element::term(VertexId(1), int(1))
        );
        let r = part(4, &[&[1, 2, 3, 4]]);
        assert!(kappa_pi_closed(&g, &[d, e, d, e], &r).unwrap().is_zero());
        assert!(kappa_pi_closed(&g, &[d, e, e, d], &p).unwrap().is_zero());
        assert!(kappa_pi_closed(&g, &[d, e], &p).is_err());
    }

    #[test]
    fn recursive_matches_closed_on_nested_example() {
        let f = make_flower(2, &[vec![0, 1]]).unwrap();
        let (a, b) = (EdgeId(0), EdgeId(1));
        let p = part(4, &[&[1, 4], &[2, 3]]);
        let t = [a, a, b, b];
        let closed = kappa_pi_closed(&f, &t, &p).unwrap();
        assert_eq!(closed, P0Element::vertex(VertexId(0)));
        for mode in [Insertion::Left, Insertion::Right] {
            assert_eq!(kappa_pi_recursive(&f, &t, &p, mode).unwrap(), closed);
        }
    }

    #[test]
    fn recursion_detects_broken_adjacency() {
        let spec = r#"{"vertices":[{"id":"v","mu":"2"},{"id":"w","mu":"1"},{"id":"u","mu":"1"}],
            "edges":[{"id":"e","source":"v","range":"w","dual":"E"},{"id":"E","source":"w","range":"v","dual":"e"},
                     {"id":"f","source":"v","range":"u","dual":"F"},{"id":"F","source":"u","range":"v","dual":"f"}]}"#;
        let g = WeightedGraph::from_json(spec).unwrap();
        let id = |n: &str| g.edge_by_name(n).unwrap();
        let p = part(4, &[&[1, 2], &[3, 4]]);
        for t in [
            [id("E"), id("e"), id("f"), id("F")],
            [id("e"), id("E"), id("f"), id("F")],
        ] {
            let closed = kappa_pi_closed(&g, &t, &p).unwrap();
            for mode in [Insertion::Left, Insertion::Right] {
                assert_eq!(kappa_pi_recursive(&g, &t, &p, mode).unwrap(), closed);
            }
        }
    }

    #[test]
    fn moment_examples() {
        let (g, e, d) = tv(int(3), int(2));
        assert!(moment_from_cumulants(&g, &[e, d, e]).is_zero());
        assert_eq!(
            moment_from_cumulants(&g, &[e, d]),
            P0Element::term(VertexId(0), ratio(2, 3))
        );
        assert_eq!(contributing_partitions(&g, &[d, e, d, e]), 2);
    }

    #[test]
    fn balanced_and_bilinear() {
        let (g, e, d) = tv(int(3), int(2));
        let mut b = P0Element::term(VertexId(0), ratio(5, 7));
        b.add_term(VertexId(1), int(-3));
        for (x, y) in [(e, d), (d, e), (e, e)] {
            // balanced: κ(x b, y) = κ(x, b y)
            let lhs = kappa_base_args(&g, &[WeightedEdge::plain(x).right_mul(&g, &b), WeightedEdge::plain(y)]);
            let rhs = kappa_base_args(&g, &[WeightedEdge::plain(x), WeightedEdge::plain(y).left_mul(&g, &b)]);
            assert_eq!(lhs, rhs);
            // bilinear: κ(b x, y b') = b κ(x, y) b'
            let bp = P0Element::term(VertexId(1), int(4));
            let lhs = kappa_base_args(
                &g,
                &[
                    WeightedEdge::plain(x).left_mul(&g, &b),
                    WeightedEdge::plain(y).right_mul(&g, &bp),
                ],
            );
            let rhs = b.mul(&kappa_base(&g, &[x, y])).mul(&bp);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn moment_route_recovers_base_cumulants() {
        let (g, e, d) = tv(int(3), int(2));
        let mut route = CumulantsFromMoments::new(&g);
        for n in 1..=5 {
            for t in tuples(&[e, d], n) {
                assert_eq!(route.kappa(&t), kappa_base(&g, &t), "{t:?}");
            }
        }
    }

    #[test]
    fn freeness_on_flowers() {
        let two_self = make_flower(2, &[vec![0], vec![1]]).unwrap();
        let r = mixed_cumulants_vanish(&two_self, 6);
        assert!(r.is_free());
        assert_eq!(r.tuples_checked, 2 + 4 + 8 + 16 + 32 + 64);
        assert_eq!(r.mixed_tuples, r.tuples_checked - 12);
        let (g, _, _) = tv(int(2), int(1));
        let r = mixed_cumulants_vanish(&g, 4);
        assert!(r.is_free());
        assert_eq!(r.mixed_tuples, 0);
        assert_eq!(r.dual_classes, 1);
    }

    #[test]
    fn covariance_examples() {
        let (g, _, _) = tv(int(2), int(1));
        let c = covariance_maps(&g).unwrap();
        let (z, rho, inv) = (int(0), int(2), ratio(1, 2));
        assert_eq!(c.alpha, [[z.clone(), z.clone()], [rho.clone(), z.clone()]]);
        assert_eq!(c.beta, [[z.clone(), inv.clone()], [z.clone(), z.clone()]]);
        assert_eq!(c.eta, [[z.clone(), inv], [rho, z]]);
        let f = make_flower(1, &[vec![0]]).unwrap();
        assert_eq!(covariance_maps(&f), Err(CumulantError::NotTwoVertex));
    }

    #[test]
    fn free_poisson_examples() {
        let p = FreePoissonParams::new(ratio(3, 2), ratio(2, 5)).unwrap();
        assert_eq!(free_poisson_moment(1, &p), ratio(3, 5));
        let one = FreePoissonParams::new(int(1), int(1)).unwrap();
        for n in 1..=8 {
            assert_eq!(free_poisson_moment(n, &one), int(catalan(n as u64) as i64));
        }
        assert!(FreePoissonParams::new(int(0), int(1)).is_err());
        assert!(FreePoissonParams::new(int(1), int(-1)).is_err());
    }

    #[test]
    fn semicircle_cumulants_give_catalan() {
        let k = vec![int(0), int(1), int(0), int(0), int(0), int(0)];
        let m = cumulants_to_moments(&k);
        assert_eq!(m, vec![int(0), int(1), int(0), int(2), int(0), int(5)]);
        assert_eq!(moments_to_cumulants(&m), k);
    }

    #[test]
    fn poisson_cumulants_give_narayana_moments() {
        let p = FreePoissonParams::new(int(4), ratio(1, 2)).unwrap();
        let m = cumulants_to_moments(&p.cumulants(6));
        for (n, mn) in (1..=6).zip(&m) {
            assert_eq!(*mn, free_poisson_moment(n, &p));
        }
        assert_eq!(moments_to_cumulants(&m), p.cumulants(6));
    }
}
