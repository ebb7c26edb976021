use mukai_core::period::{
    enumerate_walls_region, exp_v, gl2_act, gl2_factor, log_v, theta, wall_membership, walls_of_root, TubeBox,
    TubeChart, WallKind,
};
use mukai_core::{Isometry, Lattice};
use proptest::prelude::*;
use std::collections::BTreeSet;

const PRESETS: [&str; 4] = ["mukai_rank1(1)", "mukai_rank1(2)", "mukai(<2>+<-2>)", "mukai(U)"];

fn chart(preset: &str) -> TubeChart {
    let n = Lattice::preset(preset).unwrap();
    TubeChart::new(&n.point_class().unwrap()).unwrap()
}

/// A class well inside the positive cone of `K` for each preset.
fn forward(ch: &TubeChart) -> Vec<f64> {
    let kg = ch.kgram();
    match kg.len() {
        1 => vec![1.0],
        _ if kg[0][1] != 0 => vec![1.0, 1.0],
        _ => vec![1.0, 0.0],
    }
}

fn tube_coords() -> impl Strategy<Value = (usize, Vec<f64>, Vec<f64>, f64)> {
    (
        0..PRESETS.len(),
        prop::collection::vec(-2.0..2.0f64, 2),
        prop::collection::vec(-0.4..0.4f64, 2),
        0.3..3.0f64,
    )
}

fn point_data((p, x, dy, t): (usize, Vec<f64>, Vec<f64>, f64)) -> Option<(TubeChart, Vec<f64>, Vec<f64>)> {
    let ch = chart(PRESETS[p]);
    let m = ch.dim();
    let y: Vec<f64> = forward(&ch).iter().zip(&dy).map(|(f, d)| t * f + d).collect();
    (ch.k_pair(&y, &y) > 0.05).then(|| (ch, x[..m].to_vec(), y))
}

fn reflections(lat: &Lattice) -> Vec<Isometry> {
    lat.roots_in_box(2)
        .iter()
        .filter(|r| r.coords().iter().find(|&&a| a != 0).map_or(false, |&a| a > 0))
        .map(|r| lat.reflection(r).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn exp_and_log_are_inverse(data in tube_coords()) {
        let Some((ch, x, y)) = point_data(data) else { return Ok(()) };
        let pt = ch.point(&x, &y).unwrap();
        let z = exp_v(&pt).unwrap();
        let back = log_v(&z, ch.v()).unwrap();
        let (x2, y2) = ch.coords_of(&back).unwrap();
        for (a, b) in x.iter().zip(&x2).chain(y.iter().zip(&y2)) {
            prop_assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()), "{a} vs {b}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn period_map_is_equivariant(data in tube_coords(), picks in prop::collection::vec(0usize..64, 1..4)) {
        let Some((ch, x, y)) = point_data(data) else { return Ok(()) };
        let lat = ch.lattice().clone();
        let refl = reflections(&lat);
        let mut g = lat.identity();
        for k in picks {
            g = g.compose(&refl[k % refl.len()]).unwrap();
        }
        let pt = ch.point(&x, &y).unwrap();
        let z = exp_v(&pt).unwrap();
        let gz = z.apply(&g);
        let moved = exp_v(&pt.apply(&g).unwrap()).unwrap();
        let scale = 1.0 + gz.max_abs();
        prop_assert!(gz.max_abs_diff(&moved) < 1e-10 * scale);
        let d = theta(&lat, &gz).unwrap().distance(&theta(&lat, &moved).unwrap());
        prop_assert!(d < 1e-10, "{d}");
    }

    #[test]
    fn gl2_factor_recovers_the_matrix(
        data in tube_coords(),
        t in prop::collection::vec(-2.0..2.0f64, 4),
    ) {
        let Some((ch, x, y)) = point_data(data) else { return Ok(()) };
        let m = [[t[0], t[1]], [t[2], t[3]]];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        prop_assume!(det > 0.1);
        let pt = ch.point(&x, &y).unwrap();
        let z = exp_v(&pt).unwrap();
        let zt = gl2_act(&z, &m).unwrap();
        let lat = ch.lattice();
        prop_assert!(theta(lat, &z).unwrap().distance(&theta(lat, &zt).unwrap()) < 1e-10);
        let (_, m2) = gl2_factor(&zt, ch.v()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((m[i][j] - m2[i][j]).abs() < 1e-10, "{m:?} {m2:?}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn no_a_wall_where_y_square_exceeds_two(data in tube_coords()) {
        let Some((ch, x, y)) = point_data(data) else { return Ok(()) };
        prop_assume!(ch.k_pair(&y, &y) > 2.0);
        let pt = ch.point(&x, &y).unwrap();
        let walls = enumerate_walls_region(&ch, &TubeBox::point(&x, &y)).unwrap();
        prop_assert!(walls.iter().all(|w| w.kind != WallKind::A));
        for r in ch.lattice().roots_in_box(4) {
            prop_assert!(!wall_membership(&pt, &r).unwrap().on_a);
        }
    }

    #[test]
    fn wall_list_is_stable_under_refinement(data in tube_coords(), w in 0.05..0.4f64) {
        let Some((ch, x, y)) = point_data(data) else { return Ok(()) };
        prop_assume!(ch.dim() == 1);
        let bx = TubeBox::new(vec![(x[0], x[0] + w)], vec![(y[0], y[0] + w)]);
        let keys = |b: &TubeBox| -> BTreeSet<(WallKind, Vec<i64>)> {
            enumerate_walls_region(&ch, b).unwrap().into_iter().map(|r| r.key()).collect()
        };
        let whole = keys(&bx);
        let left = keys(&TubeBox::new(vec![(x[0], x[0] + w / 2.0)], bx.y.clone()));
        let right = keys(&TubeBox::new(vec![(x[0] + w / 2.0, x[0] + w)], bx.y.clone()));
        let union: BTreeSet<_> = left.union(&right).cloned().collect();
        prop_assert_eq!(whole, union);
    }
}

/// The majorant-bounded candidate list against a brute-force scan of all
/// roots with coordinates in `[-10, 10]`, both filtered by the same predicate.
#[test]
fn wall_enumeration_matches_brute_force() {
    let cases: [(&str, TubeBox); 4] = [
        ("mukai_rank1(1)", TubeBox::new(vec![(-0.6, 0.7)], vec![(0.4, 1.1)])),
        ("mukai_rank1(2)", TubeBox::new(vec![(-0.2, 0.3)], vec![(0.2, 0.5)])),
        (
            "mukai(<2>+<-2>)",
            TubeBox::new(vec![(-0.3, 0.4), (-0.2, 0.3)], vec![(0.8, 1.0), (-0.1, 0.15)]),
        ),
        (
            "mukai(U)",
            TubeBox::new(vec![(-0.3, 0.3), (0.0, 0.5)], vec![(0.5, 0.8), (0.6, 0.9)]),
        ),
    ];
    for (preset, bx) in cases {
        let ch = chart(preset);
        let fast: BTreeSet<_> = enumerate_walls_region(&ch, &bx)
            .unwrap()
            .into_iter()
            .map(|r| r.key())
            .collect();
        let mut brute = BTreeSet::new();
        for r in ch.lattice().roots_in_box(10) {
            for w in walls_of_root(&ch, &bx, &r).unwrap() {
                brute.insert(w.key());
            }
        }
        assert!(!fast.is_empty(), "{preset}");
        assert_eq!(fast, brute, "{preset}");
    }
}
