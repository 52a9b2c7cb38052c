use crosscap::collar::{self_intersections_closed_form, CollarParams};
use crosscap::config::ModelConfig;
use crosscap::enumerate::markoff::ordered_tuple_lengths;
use crosscap::enumerate::{enumerate_simple, is_simple, markoff_orbit, MarkoffConfig, MarkoffTuple, SidedFilter};
use crosscap::pml::N13Orbit;
use crosscap::surface::{builtin_model, n3_torus, sys_minus, ModelName};
use crosscap::word::Word;

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

#[test]
fn builtin_models_close_up() {
    for m in ModelName::ALL {
        let rep = builtin_model(m, &m.default_parameters()).unwrap();
        assert!(rep.relation_residual().unwrap() < 1e-8, "{m}");
        assert!(rep.peripheral_residual().unwrap() < 1e-8, "{m}");
    }
    let rep = builtin_model(ModelName::N13, &[1.5, 2.5, 3.0, 1.2, 0.7, 0.8]).unwrap();
    assert!(rep.relation_residual().unwrap() < 1e-8);
    assert!(builtin_model(ModelName::N21, &[1.0, 1.0]).is_err());
}

#[test]
fn cores_and_systoles() {
    let rep = builtin_model(ModelName::N21, &[2.0, 2.5, 1.0]).unwrap();
    assert!((rep.length(&w("a")).unwrap() - 2.0).abs() < 1e-9);
    assert!((rep.length(&w("b")).unwrap() - 2.5).abs() < 1e-9);
    assert!((rep.length(&w("aabb")).unwrap() - 1.0).abs() < 1e-9);
    let s = sys_minus(&rep, 4).unwrap();
    assert!(s.certified);
    assert!(s.length <= 2.0 + 1e-9);
}

#[test]
fn n3_torus_boundary_is_twice_the_distinguished_curve() {
    let rep = builtin_model(ModelName::N3, &[2.0, 3.0, 4.0]).unwrap();
    let t = n3_torus(&rep).unwrap();
    let lt = t.length(&w("xyXY")).unwrap();
    let l = rep.length(&w("abc")).unwrap();
    assert!((lt - 2.0 * l).abs() < 1e-8 * lt);
}

#[test]
fn twice_holed_projective_plane_has_two_simple_curves() {
    let rep = builtin_model(ModelName::N12, &ModelName::N12.default_parameters()).unwrap();
    let c = enumerate_simple(&rep, SidedFilter::All, 25.0, 6).unwrap();
    assert!(c.certified());
    let words: Vec<String> = c.records.iter().map(|r| r.word.to_string()).collect();
    assert_eq!(words, ["a", "b"]);
    assert_eq!(is_simple(&rep, &w("aab"), 4).unwrap(), (false, true));
}

#[test]
fn markoff_small_tuples() {
    let t = markoff_orbit(&MarkoffConfig::triples(), 100).unwrap();
    let want: std::collections::BTreeSet<MarkoffTuple> = [
        [1, 1, 1],
        [1, 1, 2],
        [1, 2, 5],
        [1, 5, 13],
        [2, 5, 29],
        [1, 13, 34],
        [1, 34, 89],
        [2, 29, 169],
        [5, 13, 194],
    ]
    .iter()
    .filter(|x| x[2] <= 100)
    .map(|x| MarkoffTuple::from_u64(x))
    .collect();
    assert_eq!(t, want);
}

#[test]
fn collar_and_config_round_trip() {
    assert_eq!(self_intersections_closed_form(5), 3);
    assert!(CollarParams::new(1.0, 0.5).unwrap().boundary_length() > 2.0);
    let c = ModelConfig::parse("model = N21\ncore_lengths = 2, 2.5\nboundary_lengths = 1").unwrap();
    let rep = c.build().unwrap();
    assert!((rep.length(&w("b")).unwrap() - 2.5).abs() < 1e-9);
}

#[test]
fn ordered_quadruples_are_the_vieta_tree() {
    let bound = 100_000u64;
    let cfg = MarkoffConfig::quadruples();
    let ordered = ordered_tuple_lengths(&markoff_orbit(&cfg, bound).unwrap()).len();
    let tree = N13Orbit::build(&cfg, 9).unwrap();
    let b = num_bigint::BigUint::from(bound);
    let below = (0..tree.nodes.len())
        .filter(|&n| *tree.tuple(n).max_coord() <= b)
        .count();
    assert_eq!(ordered, below);
}
