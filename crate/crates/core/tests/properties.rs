use freegraph::cumulants::{cumulants_to_moments, moment_from_cumulants, moments_to_cumulants, tuples};
use freegraph::fock::{build_tstar_t, general_t_moments, is_positive_semidefinite, required_dimension, vacuum_moment};
use freegraph::graph::{enumerate_paths, make_flower, make_two_vertex, reverse_path};
use freegraph::noncrossing::{catalan, enumerate_nc, enumerate_nc2, narayana, narayana_row, tl_bijection, tl_inverse};
use freegraph::path_algebra::{
    fock_mul, gr_mul, gram_matrix, star, tau_p0, tr_pairpartition, vacuum_moment_operator_model,
};
use freegraph::rational::{int, ratio};
use freegraph::spectral::{boundary_f0, cauchy_f0, cauchy_frho, density_arho, inversion_estimate};
use freegraph::{EdgeId, Path, PathVector, Rational, WeightedGraph};
use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;

const CHAIN: &str = r#"{
  "vertices": [{"id": "u", "mu": "1"}, {"id": "v", "mu": "2"}, {"id": "w", "mu": "3"}],
  "edges": [
    {"id": "a", "source": "u", "range": "v", "dual": "a~"},
    {"id": "a~", "source": "v", "range": "u", "dual": "a"},
    {"id": "b", "source": "v", "range": "w", "dual": "b~"},
    {"id": "b~", "source": "w", "range": "v", "dual": "b"},
    {"id": "c", "source": "w", "range": "w", "dual": "c"}
  ]
}"#;

fn suite() -> Vec<(&'static str, WeightedGraph)> {
    vec![
        ("two-vertex", make_two_vertex(&int(3), &int(2)).unwrap()),
        ("flower 1", make_flower(1, &[vec![0]]).unwrap()),
        ("flower 2 paired", make_flower(2, &[vec![0, 1]]).unwrap()),
        ("flower 2 self-dual", make_flower(2, &[vec![0], vec![1]]).unwrap()),
        ("chain", WeightedGraph::from_json(CHAIN).unwrap()),
    ]
}

fn paths_up_to(g: &WeightedGraph, n: usize) -> Vec<Path> {
    (0..=n).flat_map(|k| enumerate_paths(g, k, None, None)).collect()
}

fn loops(g: &WeightedGraph, n: usize) -> Vec<Vec<EdgeId>> {
    let edges: Vec<EdgeId> = g.edge_ids().collect();
    tuples(&edges, n)
        .into_iter()
        .filter(|t| (0..n).all(|i| g.range(t[i]) == g.source(t[(i + 1) % n])))
        .collect()
}

#[test]
fn reversal_is_an_involution() {
    for (name, g) in suite() {
        for p in paths_up_to(&g, 5) {
            let r = reverse_path(&g, &p);
            assert!(r.is_valid_in(&g), "{name}");
            assert_eq!(r.len(), p.len());
            assert_eq!(reverse_path(&g, &r), p, "{name}");
        }
    }
}

#[test]
fn products_are_associative() {
    for (name, g) in suite()
        .into_iter()
        .filter(|(_, g)| g.vertex_count() <= 3 && g.edge_count() <= 6)
    {
        let basis = paths_up_to(&g, 6);
        for x in &basis {
            for y in basis.iter().filter(|y| x.len() + y.len() <= 6) {
                let xy_f = fock_mul(&g, &PathVector::basis(x.clone()), &PathVector::basis(y.clone())).unwrap();
                let xy_g = gr_mul(&g, &PathVector::basis(x.clone()), &PathVector::basis(y.clone())).unwrap();
                for z in basis.iter().filter(|z| x.len() + y.len() + z.len() <= 6) {
                    let zv = PathVector::basis(z.clone());
                    let yz_f = fock_mul(&g, &PathVector::basis(y.clone()), &zv).unwrap();
                    let left = fock_mul(&g, &xy_f, &zv).unwrap();
                    let right = fock_mul(&g, &PathVector::basis(x.clone()), &yz_f).unwrap();
                    assert_eq!(left, right, "{name}: fock ({x:?} {y:?}) {z:?}");
                    let yz_g = gr_mul(&g, &PathVector::basis(y.clone()), &zv).unwrap();
                    let left = gr_mul(&g, &xy_g, &zv).unwrap();
                    let right = gr_mul(&g, &PathVector::basis(x.clone()), &yz_g).unwrap();
                    assert_eq!(left, right, "{name}: concatenation");
                }
            }
        }
    }
}

#[test]
fn star_is_an_antimultiplicative_involution() {
    for (name, g) in suite() {
        let basis = paths_up_to(&g, 3);
        for x in &basis {
            let xv = PathVector::basis(x.clone());
            assert_eq!(star(&g, &star(&g, &xv)), xv);
            for y in &basis {
                let yv = PathVector::basis(y.clone());
                let lhs = star(&g, &fock_mul(&g, &xv, &yv).unwrap());
                let rhs = fock_mul(&g, &star(&g, &yv), &star(&g, &xv)).unwrap();
                assert_eq!(lhs, rhs, "{name}: ({x:?} # {y:?})*");
            }
        }
    }
}

#[test]
fn trace_is_cyclic() {
    for (name, g) in suite() {
        for n in 1..=6 {
            for word in loops(&g, n) {
                let base = tr_pairpartition(&g, &word).unwrap();
                for r in 1..n {
                    let mut rotated = word.clone();
                    rotated.rotate_left(r);
                    assert_eq!(tr_pairpartition(&g, &rotated).unwrap(), base, "{name} {word:?} by {r}");
                }
            }
        }
    }
}

#[test]
fn three_moment_oracles_agree() {
    for (name, g) in suite() {
        let edges: Vec<EdgeId> = g.edge_ids().collect();
        for n in 0..=6 {
            for word in tuples(&edges, n) {
                let trace = tr_pairpartition(&g, &word).unwrap();
                let fock = vacuum_moment_operator_model(&g, &word).unwrap();
                assert_eq!(trace, fock, "{name} {word:?}");
                if n > 0 {
                    let cumulants = tau_p0(&g, &moment_from_cumulants(&g, &word));
                    assert_eq!(trace, cumulants, "{name} {word:?}");
                }
            }
        }
    }
}

#[test]
fn gram_matrix_is_positive_semidefinite() {
    for (name, g) in suite() {
        let family: Vec<PathVector> = paths_up_to(&g, 3).into_iter().map(PathVector::basis).collect();
        let m = gram_matrix(&g, &family).unwrap();
        assert!(is_positive_semidefinite(&m), "{name}");
    }
}

#[test]
fn flower_petals_factorize() {
    // x₁ = λ(e1) self-dual, x₂ = λ(e2) + λ(e3) with e3 = e2~
    let g = make_flower(3, &[vec![0], vec![1, 2]]).unwrap();
    let e = |s: &str| g.edge_by_name(s).unwrap();
    let x1 = vec![e("e1")];
    let x2 = vec![e("e2"), e("e3")];
    // τ of a product of sums of generators, expanded multilinearly
    let tau = |factors: &[&Vec<EdgeId>]| -> Rational {
        let mut words: Vec<Vec<EdgeId>> = vec![Vec::new()];
        for f in factors {
            words = words
                .iter()
                .flat_map(|w| f.iter().map(move |&l| [w.as_slice(), &[l]].concat()))
                .collect();
        }
        words.iter().map(|w| vacuum_moment_operator_model(&g, w).unwrap()).sum()
    };
    let t11 = tau(&[&x1, &x1]);
    let t22 = tau(&[&x2, &x2]);
    assert_eq!(t11, int(1));
    assert_eq!(t22, int(2));
    assert_eq!(tau(&[&x1, &x1, &x2, &x2]), &t11 * &t22);
    assert_eq!(tau(&[&x1, &x2, &x1, &x2]), Rational::zero());
    assert_eq!(tau(&[&x2, &x1, &x1, &x2]), &t11 * &t22);
}

#[test]
fn narayana_symmetry_and_sums() {
    for n in 1..=10usize {
        let row = narayana_row(n);
        for k in 1..=n {
            assert_eq!(narayana(n, k).unwrap(), narayana(n, n + 1 - k).unwrap());
        }
        assert_eq!(row.iter().sum::<u128>(), catalan(n as u64));
    }
}

#[test]
fn bijection_round_trips() {
    for n in 1..=7 {
        for p in enumerate_nc2(2 * n).unwrap() {
            assert_eq!(tl_inverse(&tl_bijection(&p)), p);
        }
        for q in enumerate_nc(n) {
            assert_eq!(tl_bijection(&tl_inverse(&q)), q);
        }
    }
}

#[test]
fn moments_do_not_depend_on_truncation() {
    for rho in [int(2), ratio(3, 2), ratio(7, 3)] {
        for n in 0..=8 {
            let dim = required_dimension(2, n).max(3);
            let small = vacuum_moment(&build_tstar_t(&rho, dim).unwrap(), n).unwrap();
            let large = vacuum_moment(&build_tstar_t(&rho, dim + 5).unwrap(), n).unwrap();
            assert_eq!(small, large);
        }
    }
}

#[test]
fn cauchy_transforms_are_herglotz() {
    for i in 0..500 {
        let s = i as f64 / 499.0;
        let z = Complex64::new(
            -6.0 + 12.0 * s,
            10f64.powf(-4.0 + 6.0 * ((i * 37) % 500) as f64 / 499.0),
        );
        assert!(cauchy_f0(z).unwrap().im > 0.0, "{z}");
        assert!(cauchy_frho(z, 2.0).unwrap().im > 0.0, "{z}");
        assert!(cauchy_frho(z, 1.25).unwrap().im >= 0.0, "{z}");
    }
}

#[test]
fn boundary_value_is_continuous_at_the_edges() {
    for t0 in [-2.0f64, 2.0] {
        let at = boundary_f0(t0);
        assert!((at - Complex64::new(-t0 / 2.0, 0.0)).norm() < 1e-15);
        for d in [1e-6, 1e-8, 1e-10, 1e-12] {
            let inside = boundary_f0(t0 - t0.signum() * d);
            let outside = boundary_f0(t0 + t0.signum() * d);
            let above = cauchy_f0(Complex64::new(t0, d)).unwrap();
            // square-root edge: the gap closes like √d
            let bound = 2.0 * d.sqrt();
            for v in [inside, outside, above] {
                assert!((v - at).norm() <= bound, "t0={t0} d={d} {v}");
            }
        }
    }
}

#[test]
fn inversion_vanishes_away_from_support() {
    for t in [-3.0, -2.5, 2.5, 4.0] {
        assert!(inversion_estimate(t, 2.0, 1e-9).unwrap().abs() < 1e-6);
        assert_eq!(density_arho(t, 2.0).unwrap(), 0.0);
    }
}

/// `t = aℓ + bℓ*` as a dense lower/upper bidiagonal matrix, squared directly.
fn dense_tstar_t_moment(a: &Rational, b: &Rational, n: usize) -> Rational {
    let dim = n + 2;
    let mut t = vec![vec![Rational::zero(); dim]; dim];
    for k in 0..dim - 1 {
        t[k + 1][k] = a.clone();
        t[k][k + 1] = b.clone();
    }
    // x ← tᵀ(t x)
    let mut x = vec![Rational::zero(); dim];
    x[0] = Rational::one();
    for _ in 0..n {
        let y: Vec<Rational> = (0..dim).map(|i| (0..dim).map(|j| &t[i][j] * &x[j]).sum()).collect();
        x = (0..dim).map(|i| (0..dim).map(|j| &t[j][i] * &y[j]).sum()).collect();
    }
    x[0].clone()
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
}

proptest! {
    #[test]
    fn general_model_matches_dense_oracle(a in small_rational(), b in small_rational(), n in 0usize..=5) {
        prop_assume!(!(a.is_zero() && b.is_zero()));
        prop_assert_eq!(general_t_moments(&a, &b, n).unwrap(), dense_tstar_t_moment(&a, &b, n));
    }

    #[test]
    fn scalar_moment_cumulant_round_trip(ks in prop::collection::vec(small_rational(), 1..=7)) {
        let m = cumulants_to_moments(&ks);
        prop_assert_eq!(moments_to_cumulants(&m), ks);
    }

    #[test]
    fn star_involution_on_vectors(coeffs in prop::collection::vec(small_rational(), 1..=12)) {
        let g = WeightedGraph::from_json(CHAIN).unwrap();
        let basis = paths_up_to(&g, 3);
        let mut x = PathVector::zero();
        for (i, c) in coeffs.into_iter().enumerate() {
            x.add_term(basis[(i * 7) % basis.len()].clone(), c);
        }
        prop_assert_eq!(star(&g, &star(&g, &x)), x);
    }
}
