use std::path::PathBuf;

use gauduchon_core::catalog::{self, builtin_source, parse_coefficient, render_coefficient, Mode, BUILTIN_NAMES};
use gauduchon_core::{parse_structure_file, Gauss, ParseError};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

#[test]
fn catalog_round_trip() {
    for name in BUILTIN_NAMES {
        let first = parse_structure_file(builtin_source(name).unwrap()).unwrap();
        let rendered = first.render();
        let second = parse_structure_file(&rendered).unwrap();
        assert_eq!(first, second, "{}", name);
        assert_eq!(second.render(), rendered, "{}", name);
    }
}

#[test]
fn real_fixtures_round_trip() {
    for f in ["nil4_real.alg", "iwasawa_real.alg"] {
        let text = std::fs::read_to_string(fixture(f)).unwrap();
        let d = parse_structure_file(&text).unwrap();
        assert_eq!(d.mode, Mode::Real);
        assert_eq!(parse_structure_file(&d.render()).unwrap(), d, "{}", f);
    }
}

#[test]
fn malformed_fixtures_are_positioned() {
    let dir = fixture("malformed");
    let mut paths: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    assert_eq!(paths.len(), 10);
    for p in paths {
        let text = std::fs::read_to_string(&p).unwrap();
        let err = parse_structure_file(&text).expect_err(&p.display().to_string());
        assert!(matches!(err, ParseError::Syntax { .. }), "{}: {:?}", p.display(), err);
        let (line, column) = err.position();
        let lines = text.lines().count();
        assert!((1..=lines).contains(&line), "{}: line {}", p.display(), line);
        assert!(column >= 1, "{}: column {}", p.display(), column);
    }
}

#[test]
fn specific_positions() {
    let err = parse_structure_file("manifold a\ncomplex_dim 2\nd phi2 = phi1^^phi1\n").unwrap_err();
    assert_eq!(err.position(), (3, 15));
    let err = parse_structure_file("manifold a\ncomplex_dim 2\nd phi2 = phi1^~phi1\nd phi2 = 0\n").unwrap_err();
    assert_eq!(err.position().0, 4);
}

#[test]
fn dimension_and_symbol_errors() {
    let err = parse_structure_file("manifold a\ncomplex_dim 2\nd phi2 = phi3^phi1\n").unwrap_err();
    assert!(matches!(err, ParseError::UndeclaredSymbol { line: 3, .. }));
    let err = parse_structure_file("manifold a\ncomplex_dim 2\nd e1 = 0\n").unwrap_err();
    assert!(matches!(err, ParseError::UndeclaredSymbol { .. } | ParseError::Syntax { .. }));
    let err = parse_structure_file("manifold a\nreal_dim 3\n").unwrap_err();
    assert!(matches!(err, ParseError::DimensionMismatch { line: 2, .. }));
}

const TOKENS: &[&str] = &[
    "d", "phi1", "phi2", "phi3", "~phi1", "~phi2", "e1", "e2", "^", "*", "+", "-", "=", "(", ")", "/", "i", "1", "2", "0",
    "1/2", "(1/2)i", "(1+2i)", "manifold", "complex_dim", "real_dim", "J", "#", " ", "\t", "x", "phi", "~", "999999999999999999999",
];

fn random_line(rng: &mut ChaCha8Rng) -> String {
    let len = rng.gen_range(0..12);
    let mut s = String::new();
    for _ in 0..len {
        if rng.gen_bool(0.1) {
            s.push(char::from_u32(rng.gen_range(0x20..0x2FF)).unwrap_or('?'));
        } else {
            s.push_str(TOKENS.choose(rng).unwrap());
        }
        if rng.gen_bool(0.5) {
            s.push(' ');
        }
    }
    s
}

#[test]
fn fuzz_lines_never_panic() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut accepted = 0;
    for _ in 0..10_000 {
        let line = random_line(&mut rng);
        let text = format!("manifold fuzz\ncomplex_dim 3\n{}\n", line);
        if parse_structure_file(&text).is_ok() {
            accepted += 1;
        }
        let _ = parse_coefficient(&line);
    }
    assert!(accepted < 10_000);
}

#[test]
fn builtin_lookup() {
    assert!(catalog::builtin("iwasawa").unwrap().provenance.unwrap().contains("iwasawa"));
    assert!(catalog::builtin("nope").is_err());
}

proptest! {
    #[test]
    fn coefficient_render_parses_back(a in -50i64..50, b in 1i64..20, c in -50i64..50, d in 1i64..20) {
        let g = Gauss::from_parts(a, b, c, d);
        prop_assert_eq!(parse_coefficient(&render_coefficient(&g)).unwrap(), g);
    }
}
