use std::collections::BTreeSet;

use ultranorm_core::betweenness::coordinate_between;
use ultranorm_core::isometry::decompose;
use ultranorm_core::oracle::{
    axial_group, enumerate_isometries, exhaustive_betweenness_check, group_closure_check,
    DEFAULT_GROUP_CAP, DEFAULT_SEARCH_CAP, DEFAULT_TRIPLE_CAP,
};
use ultranorm_core::{distance, FieldSpec, NormSpec, Vector};

#[test]
fn search_counts_match_axial_group() {
    for (q, n, all, centred) in [(2, 2, 8, 2), (3, 2, 72, 8), (2, 3, 48, 6)] {
        let found = enumerate_isometries(q, n, NormSpec::One, false, DEFAULT_SEARCH_CAP).unwrap();
        assert_eq!(found.isometry_count(), all, "q={q} n={n}");
        assert_eq!(found.axial_count, all);
        assert_eq!(found.matches_prediction(), Some(true));

        let generated = axial_group(q, n, false, DEFAULT_GROUP_CAP).unwrap();
        let found_set: BTreeSet<Vec<usize>> = found.maps.iter().cloned().collect();
        assert_eq!(found_set, generated);
        assert!(group_closure_check(&found).is_group());

        let c = enumerate_isometries(q, n, NormSpec::One, true, DEFAULT_SEARCH_CAP).unwrap();
        assert_eq!(c.isometry_count(), centred);
        let c_set: BTreeSet<Vec<usize>> = c.maps.iter().cloned().collect();
        assert_eq!(c_set, axial_group(q, n, true, DEFAULT_GROUP_CAP).unwrap());
    }
}

#[test]
fn centred_decompositions_have_zero_translation() {
    let search =
        ultranorm_core::oracle::IsometrySearch::new(3, 2, NormSpec::One, true, DEFAULT_SEARCH_CAP)
            .unwrap();
    let result = search.run();
    for map in &result.maps {
        let iso = decompose(&search.probe_map(map)).unwrap();
        assert!(iso.is_centred());
        // axes go onto axes
        for (i, x) in search.points().iter().enumerate() {
            if x.support().count() == 1 {
                assert_eq!(search.points()[map[i]].support().count(), 1);
            }
        }
    }
}

#[test]
fn sup_norm_has_non_axial_isometries() {
    let r = enumerate_isometries(2, 2, NormSpec::Sup, false, DEFAULT_SEARCH_CAP).unwrap();
    assert_eq!(r.isometry_count(), 24);
    assert_eq!(r.axial_count, 8);
    assert!(!r.non_axial_witnesses.is_empty());
    let r = enumerate_isometries(3, 2, NormSpec::Sup, true, DEFAULT_SEARCH_CAP).unwrap();
    assert_eq!(r.isometry_count(), 40320);
    assert!(!r.non_axial_witnesses.is_empty());
}

#[test]
fn exhaustive_betweenness() {
    for (q, n, triples) in [(3, 2, 729), (2, 3, 512), (2, 1, 8), (5, 2, 15625)] {
        let r = exhaustive_betweenness_check(q, n, DEFAULT_TRIPLE_CAP).unwrap();
        assert_eq!(r.triples, triples);
        assert_eq!(r.mismatches, 0);
        assert!(r.first_mismatch.is_none());
    }
}

/// Under the sup-norm the coordinate condition no longer characterises
/// betweenness: some coordinate mixtures are not metrically between. The
/// converse never fails, since in an ultrametric space `d(x,y) = d(x,z) +
/// d(z,y)` forces `z ∈ {x, y}`.
#[test]
fn sup_norm_breaks_the_coordinate_characterisation() {
    let f = FieldSpec::gf(2).unwrap();
    let points = Vector::enumerate_space(f, 2, 16).unwrap();
    let sup = NormSpec::Sup;
    let mut witness = None;
    for x in &points {
        for y in &points {
            for z in &points {
                let metric = distance(x, y, &sup).unwrap()
                    == distance(x, z, &sup).unwrap() + distance(z, y, &sup).unwrap();
                let coord = coordinate_between(x, z, y).unwrap();
                assert!(!metric || coord, "metric without coordinate at {x} {z} {y}");
                assert_eq!(metric, z == x || z == y);
                if coord && !metric && witness.is_none() {
                    witness = Some((x.clone(), z.clone(), y.clone()));
                }
            }
        }
    }
    let (x, z, y) = witness.expect("a coordinate mixture off the sup-norm segment");
    assert_eq!(
        (x.to_string(), z.to_string(), y.to_string()),
        ("(0,0)".into(), "(0,1)".into(), "(1,1)".into())
    );
}
