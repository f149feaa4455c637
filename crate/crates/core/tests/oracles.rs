mod common;

use common::{harmonic_dimension, kernel, perm_sign, to_sparse, wedge, Oracle, Sparse};
use gauduchon_core::catalog::{builtin, BUILTIN_NAMES};
use gauduchon_core::conditions::almost_kahler_obstruction;
use gauduchon_core::form::word_indices;
use gauduchon_core::scalar::{int, rat};
use gauduchon_core::{parse_structure_file, Gauss, HermitianMetric, HermitianStructure, InvariantForm, Rational};

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/fixtures/{}", env!("CARGO_MANIFEST_DIR"), name)).unwrap()
}

fn diagonals(n: usize) -> Vec<Vec<Rational>> {
    vec![vec![int(1); n], (1..=n as i64).map(int).collect(), (0..n as i64).map(|k| rat(2 * k + 1, 3)).collect()]
}

#[test]
fn exterior_derivative_matches_oracle() {
    for name in BUILTIN_NAMES {
        let desc = builtin(name).unwrap();
        let acs = desc.acs().unwrap();
        let o = Oracle::new(&desc);
        let frame = acs.frame();
        for k in 0..=frame.size() {
            for w in frame.words_of_degree(k) {
                let engine = to_sparse(&acs.d(&InvariantForm::basis(frame, w)));
                let oracle = o.d(&[(word_indices(w), Gauss::one())].into_iter().collect());
                assert_eq!(engine, oracle, "{} word {}", name, frame.render_word(w));
            }
        }
    }
}

#[test]
fn star_matches_defining_relation() {
    for name in BUILTIN_NAMES {
        let desc = builtin(name).unwrap();
        let acs = desc.acs().unwrap();
        let o = Oracle::new(&desc);
        let frame = acs.frame();
        for h in diagonals(o.n) {
            let hs = HermitianStructure::new(&acs, HermitianMetric::diagonal(&h).unwrap()).unwrap();
            for k in 0..=frame.size() {
                for w in frame.words_of_degree(k) {
                    let engine = to_sparse(&hs.hodge_star(&InvariantForm::basis(frame, w)));
                    let oracle = o.star_word(&h, &word_indices(w));
                    assert_eq!(engine, oracle, "{} {:?} word {}", name, h, frame.render_word(w));
                }
            }
        }
    }
}

#[test]
fn harmonic_dimensions_match_brute_force() {
    let cases: &[(&str, Vec<Rational>, Option<usize>)] = &[
        ("torus3", vec![int(1); 3], Some(3)),
        ("iwasawa", vec![int(1); 3], Some(2)),
        ("nil4", vec![int(1); 2], None),
        ("kodaira_thurston", vec![int(1), int(3)], None),
        ("iwasawa", vec![int(2), int(1), rat(1, 2)], Some(2)),
    ];
    for (name, h, expected) in cases {
        let desc = builtin(name).unwrap();
        let acs = desc.acs().unwrap();
        let o = Oracle::new(&desc);
        let hs = HermitianStructure::new(&acs, HermitianMetric::diagonal(h).unwrap()).unwrap();
        for p in 0..=o.n {
            for q in 0..=o.n {
                let engine = hs.harmonic_space(p, q).dimension();
                let oracle = harmonic_dimension(&o, h, p, q);
                assert_eq!(engine, oracle, "{} ({},{})", name, p, q);
            }
        }
        if let Some(e) = expected {
            assert_eq!(harmonic_dimension(&o, h, 0, 1), *e, "{}", name);
        }
    }
}

#[test]
fn wedge_sign_example() {
    // (i/2)φ^{11̄} ∧ (i/2)φ^{22̄} = -(1/4)φ^{11̄22̄}
    let half_i = Gauss::from_parts(0, 1, 1, 2);
    let f = gauduchon_core::Frame::Complex { n: 2 };
    let a = InvariantForm::monomial(f, 0b0101, half_i.clone());
    let b = InvariantForm::monomial(f, 0b1010, half_i);
    let product = a.wedge(&b);
    assert_eq!(product.terms().count(), 1);
    // φ^{11̄22̄} in letter order (φ1, φ2, φ̄1, φ̄2) is −φ^{12 1̄ 2̄}
    let (_, s) = perm_sign(&[0, 2, 1, 3]).unwrap();
    assert_eq!(s, -1);
    assert_eq!(product.constant_coefficient(0b1111), Gauss::from_parts(1, 4, 0, 1));
    let oracle = wedge(&[(vec![0, 2], Gauss::from_parts(0, 1, 1, 2))].into_iter().collect(), &[(vec![1, 3], Gauss::from_parts(0, 1, 1, 2))].into_iter().collect());
    assert_eq!(oracle[&vec![0, 1, 2, 3]], Gauss::from_parts(1, 4, 0, 1));
}

#[test]
fn real_fixtures_reproduce_catalog() {
    for (file, name) in [("nil4_real.alg", "nil4"), ("iwasawa_real.alg", "iwasawa")] {
        let real = parse_structure_file(&fixture(file)).unwrap().acs().unwrap();
        let complex = builtin(name).unwrap().acs().unwrap();
        for k in 0..real.complex_dim() {
            assert_eq!(real.dphi(k), complex.dphi(k), "{} dphi{}", name, k + 1);
        }
    }
}

/// Closed `J`-compatible real 2-forms, by brute force in the fixture's real frame.
fn compatible_closed_forms(desc: &gauduchon_core::ManifoldDescriptor) -> (Vec<(usize, usize)>, Vec<Vec<Gauss>>) {
    let m = desc.real_dim;
    let j = desc.j.as_ref().unwrap();
    let de: Vec<Sparse> = desc.equations.iter().map(to_sparse).collect();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
    let omega = |v: &[Gauss], a: usize, b: usize| -> Gauss {
        if a == b {
            Gauss::zero()
        } else if a < b {
            v[pairs.iter().position(|&p| p == (a, b)).unwrap()].clone()
        } else {
            -v[pairs.iter().position(|&p| p == (b, a)).unwrap()].clone()
        }
    };
    let unit = |k: usize| -> Vec<Gauss> { (0..pairs.len()).map(|i| if i == k { Gauss::one() } else { Gauss::zero() }).collect() };
    let mut rows = Vec::new();
    // ω(Je_a, Je_b) = ω(e_a, e_b)
    for &(a, b) in &pairs {
        let row: Vec<Gauss> = (0..pairs.len())
            .map(|k| {
                let v = unit(k);
                let mut s = -omega(&v, a, b);
                for i in 0..m {
                    for l in 0..m {
                        s += &(&(&j[(i, a)] * &j[(l, b)]) * &omega(&v, i, l));
                    }
                }
                s
            })
            .collect();
        rows.push(row);
    }
    // dω = 0
    let mut columns: Vec<Sparse> = Vec::new();
    for &(a, b) in &pairs {
        let ea: Sparse = [(vec![a], Gauss::one())].into_iter().collect();
        let eb: Sparse = [(vec![b], Gauss::one())].into_iter().collect();
        let mut d = wedge(&de[a], &eb);
        for (k, c) in wedge(&ea, &de[b]) {
            common::add_into(&mut d, k, -c);
        }
        columns.push(d);
    }
    let mut keys: Vec<Vec<usize>> = columns.iter().flat_map(|c| c.keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    for key in keys {
        rows.push(columns.iter().map(|c| c.get(&key).cloned().unwrap_or_else(Gauss::zero)).collect());
    }
    let ker = kernel(rows, pairs.len());
    (pairs, ker)
}

#[test]
fn obstruction_matches_real_oracle() {
    for (file, conclusive) in [("nil4_real.alg", true), ("iwasawa_real.alg", true)] {
        let desc = parse_structure_file(&fixture(file)).unwrap();
        let acs = desc.acs().unwrap();
        let ob = almost_kahler_obstruction(&acs).unwrap();
        let (pairs, ker) = compatible_closed_forms(&desc);
        assert_eq!(ob.solution_space.len(), ker.len(), "{}", file);
        assert_eq!(ob.is_conclusive(), conclusive, "{}", file);
        let v: Vec<Gauss> = ob.certificate.clone().unwrap().into_iter().map(Gauss::real).collect();
        let j = desc.j.as_ref().unwrap();
        let jv = j.apply(&v);
        for w in &ker {
            let mut s = Gauss::zero();
            for (k, &(a, b)) in pairs.iter().enumerate() {
                s += &(&w[k] * &(&(&v[a] * &jv[b]) - &(&v[b] * &jv[a])));
            }
            assert!(s.is_zero(), "{}: ω(v, Jv) = {}", file, s);
        }
    }
}

#[test]
fn torus_obstruction_is_inconclusive() {
    let text = "manifold t4\nreal_dim 4\nJ 0 -1 0 0\nJ 1 0 0 0\nJ 0 0 0 -1\nJ 0 0 1 0\n";
    let desc = parse_structure_file(text).unwrap();
    let ob = almost_kahler_obstruction(&desc.acs().unwrap()).unwrap();
    let (_, ker) = compatible_closed_forms(&desc);
    assert_eq!(ob.solution_space.len(), ker.len());
    assert_eq!(ker.len(), 4);
    assert!(!ob.is_conclusive());
}

#[test]
fn oracle_sign_helper() {
    assert_eq!(perm_sign(&[2, 0, 1]), Some((vec![0, 1, 2], 1)));
    assert_eq!(perm_sign(&[1, 0]), Some((vec![0, 1], -1)));
    assert_eq!(perm_sign(&[1, 1]), None);
}
