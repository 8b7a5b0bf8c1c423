//! The two algebra structures on the graded span of paths.
//!
//! * `F(Γ)`: the weighted "#" product, which may cancel a tail of the left
//!   path against the dual of a head of the right path, with the trace
//!   `τ = μ² ∘ φ`, `φ` the projection onto degree 0.
//! * `Gr(Γ)`: plain concatenation, with the trace given by a sum over
//!   non-crossing pair partitions of the word.
//!
//! Every coefficient stays rational because only ratios `μ(a)/μ(b)` and
//! squares `μ(a)²` ever appear in the `[ξ]` basis.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use thiserror::Error;

use crate::graph::{reverse_path, EdgeId, Path, VertexId, WeightedGraph};
use crate::noncrossing::enumerate_nc2;
use crate::rational::{one, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("path {0} does not belong to this graph")]
    ForeignPath(String),
    #[error("edge index {0} does not belong to this graph")]
    ForeignEdge(usize),
    #[error("unknown edge {0:?} in word")]
    UnknownEdge(String),
    #[error("empty letter in word {0:?}")]
    EmptyLetter(String),
}

/// A finite rational combination of paths. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PathVector {
    terms: BTreeMap<Path, Rational>,
}

impl PathVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(p: Path) -> Self {
        Self::term(p, one())
    }

    pub fn term(p: Path, c: Rational) -> Self {
        let mut v = Self::zero();
        v.add_term(p, c);
        v
    }

    /// `Σ_v [v]`, the unit of both products.
    pub fn identity(g: &WeightedGraph) -> Self {
        let mut v = Self::zero();
        for u in g.vertex_ids() {
            v.add_term(Path::vertex(u), one());
        }
        v
    }

    pub fn add_term(&mut self, p: Path, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(p).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn coefficient(&self, p: &Path) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(p, x)| (p.clone(), x * c)).collect(),
        }
    }

    /// The degree-`n` component.
    pub fn component(&self, n: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.len() == n)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(Path::len).max()
    }

    fn check_in(&self, g: &WeightedGraph) -> Result<(), AlgebraError> {
        match self.terms.keys().find(|p| !p.is_valid_in(g)) {
            Some(p) => Err(AlgebraError::ForeignPath(format!("{:?}", p.edges()))),
            None => Ok(()),
        }
    }

    pub fn display(&self, g: &WeightedGraph) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(p, c)| format!("{}[{}]", crate::rational::format_rational(c), p.display(g)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl Add for &PathVector {
    type Output = PathVector;
    fn add(self, rhs: &PathVector) -> PathVector {
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }
}

impl Sub for &PathVector {
    type Output = PathVector;
    fn sub(self, rhs: &PathVector) -> PathVector {
        self + &(-rhs)
    }
}

impl Neg for &PathVector {
    type Output = PathVector;
    fn neg(self) -> PathVector {
        PathVector {
            terms: self.terms.iter().map(|(p, c)| (p.clone(), -c)).collect(),
        }
    }
}

/// An element of the vertex algebra `P_0(Γ)`: a rational combination of
/// the orthogonal idempotents `[v]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct P0Element {
    terms: BTreeMap<VertexId, Rational>,
}

impl P0Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vertex(v: VertexId) -> Self {
        Self::term(v, one())
    }

    pub fn term(v: VertexId, c: Rational) -> Self {
        let mut b = Self::zero();
        b.add_term(v, c);
        b
    }

    pub fn add_term(&mut self, v: VertexId, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(v).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&v);
        }
    }

    pub fn get(&self, v: VertexId) -> Rational {
        self.terms.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VertexId, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (v, x) in &self.terms {
            out.add_term(*v, x * c);
        }
        out
    }

    /// Product in `P_0`; the `[v]` are orthogonal idempotents.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (v, x) in &self.terms {
            out.add_term(*v, x * other.get(*v));
        }
        out
    }

    pub fn to_path_vector(&self) -> PathVector {
        let mut out = PathVector::zero();
        for (v, c) in &self.terms {
            out.add_term(Path::vertex(*v), c.clone());
        }
        out
    }
}

impl Add for &P0Element {
    type Output = P0Element;
    fn add(self, rhs: &P0Element) -> P0Element {
        let mut out = self.clone();
        for (v, c) in &rhs.terms {
            out.add_term(*v, c.clone());
        }
        out
    }
}

/// `[ξ] # [η]` on basis paths.
///
/// The `k`-th term cancels the last `k` edges of `ξ` against the first `k`
/// edges of `η` (which must be their duals, innermost first) and carries
/// the weight `μ(v_m)/μ(v_{m-k})`, where `v_i` is the vertex of `ξ` after
/// `i` edges.
pub fn fock_mul_paths(g: &WeightedGraph, xi: &Path, eta: &Path) -> PathVector {
    let mut out = PathVector::zero();
    if xi.range(g) != eta.source() {
        return out;
    }
    let (a, b) = (xi.edges(), eta.edges());
    let m = a.len();
    let mu_end = g.mu(xi.vertex_at(g, m));
    for k in 0..=m.min(b.len()) {
        if k > 0 && a[m - k] != g.dual(b[k - 1]) {
            break;
        }
        let coeff = mu_end / g.mu(xi.vertex_at(g, m - k));
        let mut edges = a[..m - k].to_vec();
        edges.extend_from_slice(&b[k..]);
        out.add_term(Path::from_parts(xi.source(), edges), coeff);
    }
    out
}

pub fn fock_mul(g: &WeightedGraph, x: &PathVector, y: &PathVector) -> Result<PathVector, AlgebraError> {
    x.check_in(g)?;
    y.check_in(g)?;
    let mut out = PathVector::zero();
    for (p, c) in x.terms() {
        for (q, d) in y.terms() {
            let cd = c * d;
            for (r, e) in fock_mul_paths(g, p, q).terms() {
                out.add_term(r.clone(), e * &cd);
            }
        }
    }
    Ok(out)
}

/// Concatenation product; non-composable pairs contribute zero.
pub fn gr_mul(g: &WeightedGraph, x: &PathVector, y: &PathVector) -> Result<PathVector, AlgebraError> {
    x.check_in(g)?;
    y.check_in(g)?;
    let mut out = PathVector::zero();
    for (p, c) in x.terms() {
        for (q, d) in y.terms() {
            if p.range(g) != q.source() {
                continue;
            }
            let mut edges = p.edges().to_vec();
            edges.extend_from_slice(q.edges());
            out.add_term(Path::from_parts(p.source(), edges), c * d);
        }
    }
    Ok(out)
}

/// `[ξ]* = [ξ~]`, extended linearly (coefficients are real).
pub fn star(g: &WeightedGraph, x: &PathVector) -> PathVector {
    let mut out = PathVector::zero();
    for (p, c) in x.terms() {
        out.add_term(reverse_path(g, p), c.clone());
    }
    out
}

/// Projection onto the degree-0 part.
pub fn phi_f(x: &PathVector) -> P0Element {
    let mut out = P0Element::zero();
    for (p, c) in x.terms() {
        if p.is_empty() {
            out.add_term(p.source(), c.clone());
        }
    }
    out
}

/// `Σ_v μ(v)² b_v`, divided by `Σ_v μ(v)²` so the state is unital on any graph.
pub fn tau_p0(g: &WeightedGraph, b: &P0Element) -> Rational {
    let mut s = Rational::zero();
    for (v, c) in b.terms() {
        s += g.mu_squared(*v) * c;
    }
    s / g.mu_squared_sum()
}

pub fn tau_f(g: &WeightedGraph, x: &PathVector) -> Rational {
    tau_p0(g, &phi_f(x))
}

/// `‖[ξ]‖² = τ([ξ] # [ξ]*) = μ(s(ξ)) μ(r(ξ))` (before trace rescaling).
pub fn norm_squared(g: &WeightedGraph, p: &Path) -> Rational {
    g.mu(p.source()) * g.mu(p.range(g))
}

fn check_word(g: &WeightedGraph, word: &[EdgeId]) -> Result<(), AlgebraError> {
    match word.iter().find(|e| !g.contains_edge(**e)) {
        Some(e) => Err(AlgebraError::ForeignEdge(e.0)),
        None => Ok(()),
    }
}

fn is_composable_loop(g: &WeightedGraph, word: &[EdgeId]) -> bool {
    let n = word.len();
    (0..n).all(|i| g.range(word[i]) == g.source(word[(i + 1) % n]))
}

/// Trace of the concatenated word in `Gr(Γ)`:
/// `Σ_{π ∈ NC₂(n)} Π_{(i<j) ∈ π} δ(e_j = e_i~) μ(r(e_i))/μ(r(e_j)) · μ²(s(e_1))`,
/// rescaled by `1/Σμ²`. Words that are not composable loops give 0; the
/// empty word gives `τ(1) = 1`.
pub fn tr_pairpartition(g: &WeightedGraph, word: &[EdgeId]) -> Result<Rational, AlgebraError> {
    check_word(g, word)?;
    if word.is_empty() {
        return Ok(one());
    }
    if word.len() % 2 == 1 || !is_composable_loop(g, word) {
        return Ok(Rational::zero());
    }
    let mut total = Rational::zero();
    for pi in enumerate_nc2(word.len()).expect("even length") {
        let mut term = one();
        for &(i, j) in pi.pairs() {
            let (ei, ej) = (word[i - 1], word[j - 1]);
            if ej != g.dual(ei) {
                term = Rational::zero();
                break;
            }
            term *= g.mu(g.range(ei)) / g.mu(g.range(ej));
        }
        total += term;
    }
    Ok(total * g.mu_squared(g.source(word[0])) / g.mu_squared_sum())
}

/// `φ(λ([e_1]) ⋯ λ([e_n]) 1)`: applies the left-multiplication operators of
/// the letters, right to left, to the unit vector and projects to degree 0.
///
/// A degree-one letter moves degree by at most one, so nothing is truncated.
pub fn phi_word_fock(g: &WeightedGraph, word: &[EdgeId]) -> Result<P0Element, AlgebraError> {
    check_word(g, word)?;
    let mut state = PathVector::identity(g);
    for &e in word.iter().rev() {
        let letter = Path::single(g, e);
        let mut next = PathVector::zero();
        for (p, c) in state.terms() {
            for (q, d) in fock_mul_paths(g, &letter, p).terms() {
                next.add_term(q.clone(), c * d);
            }
        }
        state = next;
        if state.is_zero() {
            break;
        }
    }
    Ok(phi_f(&state))
}

/// `τ(λ([e_1]) ⋯ λ([e_n]))` computed in the left-regular representation.
pub fn vacuum_moment_operator_model(g: &WeightedGraph, word: &[EdgeId]) -> Result<Rational, AlgebraError> {
    Ok(tau_p0(g, &phi_word_fock(g, word)?))
}

/// Parses `e,e*,f` where a trailing `*` selects the dual edge.
pub fn parse_word(g: &WeightedGraph, spec: &str) -> Result<Vec<EdgeId>, AlgebraError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    spec.split(',')
        .map(|tok| {
            let tok = tok.trim();
            let (name, dualize) = match tok.strip_suffix('*') {
                Some(base) => (base, true),
                None => (tok, false),
            };
            if name.is_empty() {
                return Err(AlgebraError::EmptyLetter(spec.to_string()));
            }
            let e = g
                .edge_by_name(name)
                .map_err(|_| AlgebraError::UnknownEdge(name.to_string()))?;
            Ok(if dualize { g.dual(e) } else { e })
        })
        .collect()
}

pub fn format_word(g: &WeightedGraph, word: &[EdgeId]) -> String {
    word.iter().map(|&e| g.edge_name(e)).collect::<Vec<_>>().join(",")
}

/// `⟨x, y⟩ = τ(x # y*)` on a family of vectors.
pub fn gram_matrix(g: &WeightedGraph, family: &[PathVector]) -> Result<Vec<Vec<Rational>>, AlgebraError> {
    let stars: Vec<PathVector> = family.iter().map(|y| star(g, y)).collect();
    family
        .iter()
        .map(|x| stars.iter().map(|ys| Ok(tau_f(g, &fock_mul(g, x, ys)?))).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_paths, make_flower, make_two_vertex};
    use crate::rational::{int, ratio};

    fn two_vertex(mu_v: Rational, mu_w: Rational) -> (WeightedGraph, EdgeId, EdgeId) {
        let g = make_two_vertex(&mu_v, &mu_w).unwrap();
        let e = g.edge_by_name("e").unwrap();
        let ed = g.edge_by_name("e~").unwrap();
        (g, e, ed)
    }

    fn path(g: &WeightedGraph, edges: &[EdgeId]) -> PathVector {
        PathVector::basis(Path::new(g, edges.to_vec()).unwrap())
    }

    #[test]
    fn vertex_idempotents_select_endpoints() {
        let (g, e, ed) = two_vertex(int(3), int(2));
        let xi = path(&g, &[e, ed, e]);
        let (v, w) = (VertexId(0), VertexId(1));
        for u1 in [v, w] {
            for u2 in [v, w] {
                let lhs = fock_mul(
                    &g,
                    &fock_mul(&g, &PathVector::basis(Path::vertex(u1)), &xi).unwrap(),
                    &PathVector::basis(Path::vertex(u2)),
                )
                .unwrap();
                let expect = if u1 == v && u2 == w {
                    xi.clone()
                } else {
                    PathVector::zero()
                };
                assert_eq!(lhs, expect);
            }
        }
    }

    #[test]
    fn single_edge_times_path_three_cases() {
        let (g, e, ed) = two_vertex(int(3), int(2));
        // r(e) != s(e)
        assert!(fock_mul(&g, &path(&g, &[e]), &path(&g, &[e])).unwrap().is_zero());
        // e ~ (e~): cancellation with weight μ(r(e))/μ(s(e)) = 2/3
        let got = fock_mul(&g, &path(&g, &[e]), &path(&g, &[ed, e])).unwrap();
        let mut want = path(&g, &[e, ed, e]);
        want.add_term(Path::new(&g, vec![e]).unwrap(), ratio(2, 3));
        assert_eq!(got, want);

        let f = make_flower(2, &[vec![0], vec![1]]).unwrap();
        let got = fock_mul(&f, &path(&f, &[EdgeId(0)]), &path(&f, &[EdgeId(1)])).unwrap();
        assert_eq!(got, path(&f, &[EdgeId(0), EdgeId(1)]));
    }

    #[test]
    fn one_petal_square() {
        let f = make_flower(1, &[vec![0]]).unwrap();
        let e = path(&f, &[EdgeId(0)]);
        let mut want = path(&f, &[EdgeId(0), EdgeId(0)]);
        want.add_term(Path::vertex(VertexId(0)), int(1));
        assert_eq!(fock_mul(&f, &e, &e).unwrap(), want);
    }

    #[test]
    fn concatenation_examples() {
        let (g, e, ed) = two_vertex(int(2), int(1));
        assert_eq!(
            gr_mul(&g, &path(&g, &[e]), &path(&g, &[ed])).unwrap(),
            path(&g, &[e, ed])
        );
        assert!(gr_mul(&g, &path(&g, &[e]), &path(&g, &[e])).unwrap().is_zero());
        let xi = path(&g, &[ed, e]);
        let w = PathVector::basis(Path::vertex(VertexId(1)));
        let v = PathVector::basis(Path::vertex(VertexId(0)));
        assert_eq!(gr_mul(&g, &w, &xi).unwrap(), xi);
        assert!(gr_mul(&g, &v, &xi).unwrap().is_zero());
    }

    #[test]
    fn star_examples() {
        let (g, e, ed) = two_vertex(int(2), int(1));
        assert_eq!(star(&g, &path(&g, &[e])), path(&g, &[ed]));
        assert_eq!(star(&g, &path(&g, &[e, ed, e])), path(&g, &[ed, e, ed]));
        let v = PathVector::basis(Path::vertex(VertexId(0)));
        assert_eq!(star(&g, &v), v);
        let x = &path(&g, &[e]) + &path(&g, &[ed, e]).scale(&ratio(-3, 2));
        let y = &path(&g, &[ed]) + &v;
        assert_eq!(star(&g, &star(&g, &x)), x);
        assert_eq!(
            star(&g, &gr_mul(&g, &x, &y).unwrap()),
            gr_mul(&g, &star(&g, &y), &star(&g, &x)).unwrap()
        );
    }

    #[test]
    fn phi_examples() {
        let (g, e, _) = two_vertex(int(2), int(1));
        let (v, w) = (VertexId(0), VertexId(1));
        assert!(phi_f(&path(&g, &[e])).is_zero());
        assert_eq!(phi_f(&PathVector::basis(Path::vertex(v))), P0Element::vertex(v));
        let mut x = PathVector::term(Path::vertex(v), int(3));
        x.add_term(Path::new(&g, vec![e]).unwrap(), int(2));
        x.add_term(Path::vertex(w), int(-1));
        let mut want = P0Element::term(v, int(3));
        want.add_term(w, int(-1));
        assert_eq!(phi_f(&x), want);
    }

    #[test]
    fn tau_on_normalized_graph() {
        let (g, _, _) = two_vertex(ratio(4, 5), ratio(3, 5));
        assert_eq!(tau_f(&g, &PathVector::basis(Path::vertex(VertexId(0)))), ratio(16, 25));
        assert_eq!(tau_f(&g, &PathVector::identity(&g)), int(1));
        let (h, _, _) = two_vertex(int(2), int(1));
        assert_eq!(tau_f(&h, &PathVector::identity(&h)), int(1));
        assert_eq!(tau_f(&h, &PathVector::basis(Path::vertex(VertexId(1)))), ratio(1, 5));
    }

    #[test]
    fn basis_paths_are_orthogonal() {
        let (g, _, _) = two_vertex(ratio(4, 5), ratio(3, 5));
        let paths: Vec<Path> = (0..=4).flat_map(|n| enumerate_paths(&g, n, None, None)).collect();
        for p in &paths {
            for q in &paths {
                let x = fock_mul(
                    &g,
                    &PathVector::basis(p.clone()),
                    &star(&g, &PathVector::basis(q.clone())),
                )
                .unwrap();
                let want = if p == q { norm_squared(&g, p) } else { Rational::zero() };
                assert_eq!(tau_f(&g, &x), want, "{p:?} {q:?}");
            }
        }
    }

    #[test]
    fn pair_partition_trace_examples() {
        let (g, e, ed) = two_vertex(ratio(4, 5), ratio(3, 5));
        assert_eq!(tr_pairpartition(&g, &[ed, e]).unwrap(), ratio(12, 25));
        assert_eq!(tr_pairpartition(&g, &[ed, e, ed]).unwrap(), int(0));
        assert_eq!(tr_pairpartition(&g, &[e, e]).unwrap(), int(0));
        let f = make_flower(1, &[vec![0]]).unwrap();
        assert_eq!(tr_pairpartition(&f, &[EdgeId(0); 4]).unwrap(), int(2));
        assert_eq!(tr_pairpartition(&f, &[]).unwrap(), int(1));
        assert!(tr_pairpartition(&f, &[EdgeId(7)]).is_err());
    }

    #[test]
    fn operator_model_examples() {
        let f = make_flower(1, &[vec![0]]).unwrap();
        assert_eq!(
            vacuum_moment_operator_model(&f, &[EdgeId(0), EdgeId(0)]).unwrap(),
            int(1)
        );
        assert_eq!(vacuum_moment_operator_model(&f, &[EdgeId(0)]).unwrap(), int(0));
        let catalan = [1, 2, 5, 14, 42];
        for (n, c) in (1..=5).zip(catalan) {
            assert_eq!(
                vacuum_moment_operator_model(&f, &vec![EdgeId(0); 2 * n]).unwrap(),
                int(c)
            );
        }
    }

    #[test]
    fn word_parsing() {
        let (g, e, ed) = two_vertex(int(2), int(1));
        assert_eq!(parse_word(&g, "e,e*,e~").unwrap(), vec![e, ed, ed]);
        assert_eq!(parse_word(&g, "e~*").unwrap(), vec![e]);
        assert!(parse_word(&g, "").unwrap().is_empty());
        assert!(matches!(parse_word(&g, "x"), Err(AlgebraError::UnknownEdge(_))));
        assert!(matches!(parse_word(&g, "e,*"), Err(AlgebraError::EmptyLetter(_))));
        assert_eq!(format_word(&g, &[e, ed]), "e,e~");
    }

    #[test]
    fn foreign_paths_are_rejected() {
        let (g, _, _) = two_vertex(int(2), int(1));
        let f = make_flower(3, &[vec![0], vec![1], vec![2]]).unwrap();
        let x = PathVector::basis(Path::new(&f, vec![EdgeId(2)]).unwrap());
        assert!(fock_mul(&g, &x, &x).is_err());
        assert!(gr_mul(&g, &x, &x).is_err());
    }
}
