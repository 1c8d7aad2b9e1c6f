use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use proptest::prelude::*;

use prefgeom::arrangement::{
    build_graph, cells_profile, count_double_pairs, critical_points, enumerate_cells, euler_audit,
};
use prefgeom::geometry::{
    build_bisector, classify_bisector_l1, detect_degeneracies, distance_key, intersect, on_bisector, parallelogram,
    perturb_generic, rat, rotate45, triple_intersection, IntersectionResult, NormTag, Point2, Rational,
    TripleIntersection,
};
use prefgeom::profiles::{l2_planar_max_size, ranking_at, Embedding2, Ranking};

fn pts(coords: &[(i64, i64)]) -> Vec<Point2> {
    coords.iter().map(|&(x, y)| Point2::int(x, y)).collect()
}

fn distinct(coords: &[(i64, i64)]) -> bool {
    coords.iter().collect::<BTreeSet<_>>().len() == coords.len()
}

fn generic(norm: NormTag, coords: &[(i64, i64)]) -> bool {
    distinct(coords) && detect_degeneracies(norm, &pts(coords), None).unwrap().is_empty()
}

fn coords(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((lo..hi, lo..hi), n)
}

/// Independent integer ranking for a point given in units of `1/scale`.
fn grid_ranking(norm: NormTag, cands: &[(i64, i64)], scale: i64, px: i64, py: i64) -> Option<Vec<usize>> {
    let keys: Vec<i128> = cands
        .iter()
        .map(|&(x, y)| {
            let dx = i128::from(px - x * scale).abs();
            let dy = i128::from(py - y * scale).abs();
            match norm {
                NormTag::L1 => dx + dy,
                NormTag::L2 => dx * dx + dy * dy,
                NormTag::Linf => dx.max(dy),
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..cands.len()).collect();
    order.sort_by_key(|&k| keys[k]);
    order.windows(2).all(|w| keys[w[0]] != keys[w[1]]).then_some(order)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bisector_membership_matches_distances(
        c in coords(2, -8, 8),
        p in (-40i64..40, -40i64..40),
        norm in prop::sample::select(NormTag::ALL.to_vec()),
    ) {
        prop_assume!(distinct(&c));
        let c = pts(&c);
        // Half-integer grid hits polyline corners and diagonal pieces.
        let p = Point2::rat((p.0, 2), (p.1, 2));
        let b = build_bisector(norm, &c[0], &c[1]).unwrap();
        let tied = distance_key(norm, &p, &c[0]) == distance_key(norm, &p, &c[1]);
        prop_assert_eq!(on_bisector(&b, &p), tied);
        for bp in b.breakpoints() {
            prop_assert_eq!(distance_key(norm, &bp, &c[0]), distance_key(norm, &bp, &c[1]));
        }
    }

    #[test]
    fn shared_candidate_bisectors_meet_at_most_once(c in coords(3, -30, 30)) {
        prop_assume!(generic(NormTag::L1, &c));
        let c = pts(&c);
        let b01 = build_bisector(NormTag::L1, &c[0], &c[1]).unwrap();
        let b02 = build_bisector(NormTag::L1, &c[0], &c[2]).unwrap();
        prop_assert!(intersect(&b01, &b02).unwrap().count().unwrap() <= 1);
    }

    #[test]
    fn three_bisectors_orientation_dichotomy(c in coords(3, -30, 30)) {
        prop_assume!(generic(NormTag::L1, &c));
        let c = pts(&c);
        let orient = |i: usize, j: usize| classify_bisector_l1(&c[i], &c[j]).unwrap().orientation().unwrap();
        let same = orient(0, 1) == orient(0, 2) && orient(0, 2) == orient(1, 2);
        let pairs = [(0, 1), (0, 2), (1, 2)];
        let b: Vec<_> = pairs.iter().map(|&(i, j)| build_bisector(NormTag::L1, &c[i], &c[j]).unwrap()).collect();
        let triple = triple_intersection(&c[0], &c[1], &c[2], NormTag::L1).unwrap();
        if same {
            for (x, y) in [(0, 1), (0, 2), (1, 2)] {
                prop_assert_eq!(intersect(&b[x], &b[y]).unwrap(), IntersectionResult::Empty);
            }
            prop_assert_eq!(triple, TripleIntersection::Empty);
        } else {
            let TripleIntersection::One(p) = triple else { return Err(TestCaseError::fail("expected a point")) };
            let d = distance_key(NormTag::L1, &p, &c[0]);
            prop_assert_eq!(distance_key(NormTag::L1, &p, &c[1]), d.clone());
            prop_assert_eq!(distance_key(NormTag::L1, &p, &c[2]), d);
        }
    }

    #[test]
    fn parallelogram_criterion(c in coords(3, -30, 30)) {
        prop_assume!(generic(NormTag::L1, &c));
        let c = pts(&c);
        let inside = [(1, 0, 2), (0, 1, 2), (2, 0, 1)]
            .iter()
            .any(|&(k, i, j)| parallelogram(&c[i], &c[j]).unwrap().contains(&c[k]));
        let triple = triple_intersection(&c[0], &c[1], &c[2], NormTag::L1).unwrap();
        prop_assert_eq!(inside, triple == TripleIntersection::Empty);
        if inside {
            for (i, j, k, l) in [(0, 1, 0, 2), (0, 1, 1, 2), (0, 2, 1, 2)] {
                let b1 = build_bisector(NormTag::L1, &c[i], &c[j]).unwrap();
                let b2 = build_bisector(NormTag::L1, &c[k], &c[l]).unwrap();
                prop_assert_eq!(intersect(&b1, &b2).unwrap(), IntersectionResult::Empty);
            }
        }
    }

    #[test]
    fn candidate_inside_parallelogram_never_last(
        ends in coords(2, -30, 30),
        frac in (1i64..16, 1i64..16),
        voters in prop::collection::vec((-400i64..400, -400i64..400), 40),
    ) {
        // Place the middle candidate inside via the diagonal coordinates u = x - y, v = x + y.
        let e = pts(&ends);
        let u = |p: &Point2| &p.x - &p.y;
        let v = |p: &Point2| &p.x + &p.y;
        let mid_u = u(&e[0]) + (u(&e[1]) - u(&e[0])) * rat(frac.0, 16);
        let mid_v = v(&e[0]) + (v(&e[1]) - v(&e[0])) * rat(frac.1, 16);
        let mid = Point2::new((&mid_u + &mid_v) * rat(1, 2), (&mid_v - &mid_u) * rat(1, 2));
        let c = vec![e[0].clone(), mid, e[1].clone()];
        prop_assume!(c.iter().collect::<BTreeSet<_>>().len() == 3);
        prop_assume!(detect_degeneracies(NormTag::L1, &c, None).unwrap().is_empty());
        prop_assert!(parallelogram(&c[0], &c[2]).unwrap().contains(&c[1]));
        let emb = Embedding2::new(c).unwrap();
        for (x, y) in voters {
            if let Ok(r) = ranking_at(&emb, NormTag::L1, &Point2::rat((x, 4), (y, 4))) {
                prop_assert_ne!(r.last(), Some(1));
            }
        }
    }

    #[test]
    fn at_most_one_double_pair(c in coords(4, -30, 30)) {
        prop_assume!(generic(NormTag::L1, &c));
        let emb = Embedding2::new(pts(&c)).unwrap();
        prop_assert!(count_double_pairs(&emb, NormTag::L1).unwrap() <= 1);
    }

    #[test]
    fn rotation_preserves_rankings(c in coords(4, -20, 20), v in (-60i64..60, -60i64..60)) {
        prop_assume!(distinct(&c));
        let p = pts(&c);
        let emb = Embedding2::new(p.clone()).unwrap();
        let rot = Embedding2::new(p.iter().map(rotate45).collect()).unwrap();
        let v = Point2::rat((v.0, 3), (v.1, 3));
        prop_assert_eq!(ranking_at(&emb, NormTag::L1, &v), ranking_at(&rot, NormTag::Linf, &rotate45(&v)));
    }

    #[test]
    fn euler_inequality_and_sound_witnesses(
        c in prop::collection::vec((-25i64..25, -25i64..25), 3..6),
        norm in prop::sample::select(NormTag::ALL.to_vec()),
    ) {
        prop_assume!(generic(norm, &c));
        let emb = Embedding2::new(pts(&c)).unwrap();
        let g = build_graph(&emb, norm).unwrap();
        prop_assert!(euler_audit(&g).pass, "{:?}", euler_audit(&g));
        for cell in &g.cells {
            prop_assert_eq!(&ranking_at(&emb, norm, &cell.witness).unwrap(), &cell.ranking);
        }
        if norm == NormTag::L2 {
            prop_assert!(num_bigint::BigUint::from(g.cells.len()) <= l2_planar_max_size(c.len()));
        }
    }

    #[test]
    fn perturbation_repairs_and_keeps_voters(
        c in coords(4, 0, 5),
        voters in prop::collection::vec((0i64..20, 0i64..20), 0..6),
        norm in prop::sample::select(NormTag::ALL.to_vec()),
    ) {
        prop_assume!(distinct(&c));
        let cands = pts(&c);
        let voters: Vec<Point2> = voters.iter().map(|&(x, y)| Point2::rat((2 * x + 1, 4), (2 * y + 1, 4))).collect();
        let before: Vec<Vec<std::cmp::Ordering>> = voters
            .iter()
            .map(|v| {
                let keys: Vec<_> = cands.iter().map(|c| distance_key(norm, v, c)).collect();
                (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| keys[i].cmp(&keys[j])).collect()
            })
            .collect();
        match perturb_generic(norm, &cands, Some(&voters)) {
            Ok(out) => {
                prop_assert!(detect_degeneracies(norm, &out, Some(&voters)).unwrap().is_empty());
                for (v, signs) in voters.iter().zip(&before) {
                    let keys: Vec<_> = out.iter().map(|c| distance_key(norm, v, c)).collect();
                    for (k, (i, j)) in (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).enumerate() {
                        if signs[k] != std::cmp::Ordering::Equal {
                            prop_assert_eq!(keys[i].cmp(&keys[j]), signs[k]);
                        }
                    }
                }
            }
            Err(e) => {
                // Only a voter tied on every pair may block the repair.
                prop_assert_eq!(e, prefgeom::geometry::GeometryError::NoStrictGap);
            }
        }
    }
}

/// Enumeration agrees with a dense integer grid over the enclosing square.
fn grid_check(norm: NormTag, c: &[(i64, i64)]) -> Result<(), TestCaseError> {
    let emb = Embedding2::new(pts(c)).unwrap();
    let cells = enumerate_cells(&emb, norm).unwrap();
    let found: BTreeSet<Ranking> = cells.iter().map(|cell| cell.ranking.clone()).collect();

    let cs = critical_points(&emb, norm).unwrap();
    let mut anchors: Vec<&Point2> = cs.vertices.keys().chain(cs.breakpoints.iter()).collect();
    anchors.extend(emb.positions());
    let gap = |values: BTreeSet<&Rational>| {
        let v: Vec<&Rational> = values.into_iter().collect();
        v.windows(2).map(|w| w[1] - w[0]).min()
    };
    let eps = [gap(anchors.iter().map(|p| &p.x).collect()), gap(anchors.iter().map(|p| &p.y).collect())]
        .into_iter()
        .flatten()
        .min()
        .map_or(1.0, |g| g.to_f64().unwrap() / 4.0);
    // Pitch is a power of two at most eps / 2; points sit at half-pitch offsets.
    let mut scale: i64 = 1;
    while 1.0 / (scale as f64) > eps / 2.0 {
        scale *= 2;
    }
    let min_x = anchors.iter().map(|p| p.x.to_f64().unwrap()).fold(f64::INFINITY, f64::min);
    let max_x = anchors.iter().map(|p| p.x.to_f64().unwrap()).fold(f64::NEG_INFINITY, f64::max);
    let min_y = anchors.iter().map(|p| p.y.to_f64().unwrap()).fold(f64::INFINITY, f64::min);
    let max_y = anchors.iter().map(|p| p.y.to_f64().unwrap()).fold(f64::NEG_INFINITY, f64::max);
    let radius = 3.0 * (max_x - min_x).max(max_y - min_y) + 1.0;
    let (cx, cy) = ((min_x + max_x) / 2.0, (min_y + max_y) / 2.0);
    let lo_x = ((cx - radius) * scale as f64).floor() as i64;
    let hi_x = ((cx + radius) * scale as f64).ceil() as i64;
    let lo_y = ((cy - radius) * scale as f64).floor() as i64;
    let hi_y = ((cy + radius) * scale as f64).ceil() as i64;
    let mut grid: BTreeSet<Vec<usize>> = BTreeSet::new();
    // Work in units of 1 / (2 * scale) so half-pitch offsets are integral.
    for i in lo_x..hi_x {
        for j in lo_y..hi_y {
            if let Some(order) = grid_ranking(norm, c, 2 * scale, 2 * i + 1, 2 * j + 1) {
                grid.insert(order);
            }
        }
    }
    let found: BTreeSet<Vec<usize>> = found.iter().map(|r| r.order().to_vec()).collect();
    prop_assert_eq!(found, grid, "norm {} candidates {:?}", norm, c);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn enumeration_matches_dense_grid(
        c in prop::collection::vec((0i64..10, 0i64..10), 3..5),
        norm in prop::sample::select(vec![NormTag::L1, NormTag::Linf]),
    ) {
        prop_assume!(generic(norm, &c));
        grid_check(norm, &c)?;
    }
}

#[test]
fn dense_grid_on_reference_embeddings() {
    grid_check(NormTag::L1, &[(0, 8), (10, 10), (4, 1), (8, 3)]).unwrap();
    grid_check(NormTag::L1, &[(4, 1), (1, 6), (6, 8), (8, 2)]).unwrap();
    grid_check(NormTag::L2, &[(3, 3), (8, 6), (6, 2)]).unwrap();
}

#[test]
fn four_candidate_l1_profiles_respect_the_maximum() {
    let emb = Embedding2::from_ints(&[(0, 8), (10, 10), (4, 1), (8, 3)]).unwrap();
    let cells = enumerate_cells(&emb, NormTag::L1).unwrap();
    assert_eq!(cells_profile(4, &cells).len(), 19);
}
