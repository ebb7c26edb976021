use mukai_core::cusp::{
    cusp_census, enumerate_isotropic, fricke_cusp_count, fricke_generators, gamma0_cusp_count_formula, gamma0_cusps,
    reflection_generators, sign_canonical, standard_cusp_census,
};
use mukai_core::Lattice;
use num_bigint::BigInt;
use num_traits::Signed;

#[test]
fn census_records_satisfy_lattice_invariants() {
    for preset in ["U+<2>", "U+<4>", "U+<12>", "U+U", "mukai_rank1(3)"] {
        let lat = Lattice::preset(preset).unwrap();
        let gens = reflection_generators(&lat, 3).unwrap();
        let census = cusp_census(&lat, 6, &gens, 4, false).unwrap();
        let rho = lat.signature().1;
        for r in &census.records {
            let q = Lattice::new("L(v)", r.lv_gram.clone()).unwrap();
            assert!(q.is_even(), "{preset}");
            assert_eq!(q.signature(), (1, rho - 1), "{preset}");
            if r.div == 1 {
                assert_eq!(q.det().abs(), lat.det().abs(), "{preset}");
            }
            let neg: Vec<i64> = r.rep.iter().map(|a| -a).collect();
            assert!(census.records.iter().all(|s| s.rep != neg));
            assert_eq!(sign_canonical(&r.rep), r.rep);
        }
    }
}

#[test]
fn records_with_different_determinants_stay_apart() {
    // U(2)+<2>: divisibility-2 vectors have |det L(v)| = |det N| / 4
    let lat = Lattice::new("U(2)+<2>", vec![vec![0, 2, 0], vec![2, 0, 0], vec![0, 0, 2]]).unwrap();
    let gens = reflection_generators(&lat, 3).unwrap();
    let census = cusp_census(&lat, 6, &gens, 5, false).unwrap();
    for a in &census.records {
        for b in &census.records {
            let da = Lattice::new("a", a.lv_gram.clone()).unwrap().det().clone();
            let db = Lattice::new("b", b.lv_gram.clone()).unwrap().det().clone();
            if da != db {
                assert_ne!(a.rep, b.rep);
            }
        }
    }
    assert!(census.records.iter().any(|r| r.div == 2));
}

#[test]
fn all_of_u_plus_u_has_quotient_u() {
    let lat = Lattice::preset("U+U").unwrap();
    let gens = reflection_generators(&lat, 1).unwrap();
    let census = standard_cusp_census(&lat, 3, &gens, 4).unwrap();
    assert!(!census.records.is_empty());
    for r in &census.records {
        assert!(r.disc_group.is_empty());
        let q = Lattice::new("q", r.lv_gram.clone()).unwrap();
        assert_eq!(q.det(), &BigInt::from(-1));
    }
}

#[test]
fn fricke_oracle_agrees_with_counting_formula() {
    for n in 1..=60 {
        assert_eq!(gamma0_cusps(n).len(), gamma0_cusp_count_formula(n));
        let f = fricke_cusp_count(n).unwrap();
        let g = gamma0_cusp_count_formula(n);
        // the involution pairs classes, fixing at most all of them
        assert!(2 * f >= g && f <= g, "n = {n}");
    }
}

#[test]
fn all_divisibility_census_matches_fricke_count() {
    for n in 1..=6 {
        let lat = Lattice::preset(&format!("U+<{}>", 2 * n)).unwrap();
        let mut gens = reflection_generators(&lat, 8).unwrap();
        gens.extend(fricke_generators(&lat, 2).unwrap());
        let census = cusp_census(&lat, 20, &gens, 6, false).unwrap();
        assert_eq!(census.count(), fricke_cusp_count(n).unwrap(), "n = {n}");
    }
}

#[test]
fn isotropic_enumeration_is_exhaustive_on_u_plus_u() {
    let lat = Lattice::preset("U+U").unwrap();
    let fast = enumerate_isotropic(&lat, 2).len();
    let mut brute = 0;
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            for c in -2i64..=2 {
                for d in -2i64..=2 {
                    let v = [a, b, c, d];
                    let g = [a, b, c, d].iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
                    if g == 1 && sign_canonical(&v) == v && a * b + c * d == 0 {
                        brute += 1;
                    }
                }
            }
        }
    }
    assert_eq!(fast, brute);
}
