//! Metric betweenness under the one-norm.
//!
//! Over an ultrametric field, `||x - y||_1 = ||x - z||_1 + ||z - y||_1` holds
//! exactly when each `z_i` is `x_i` or `y_i`: coordinatewise,
//! `|x_i - y_i| <= max(|x_i - z_i|, |z_i - y_i|)`, which is strictly below the
//! sum unless one of the two terms vanishes. Both predicates are provided so
//! callers (and tests) can compare them. Degenerate triples (`z = x`,
//! `z = y`, `x = y`) are handled by the same equalities.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Magnitude;
use crate::norm::{distance, NormSpec, Vector};

/// Default limit on the number of segment points produced.
pub const DEFAULT_SEGMENT_CAP: u64 = 1 << 16;

/// `||x - y||_1 == ||x - z||_1 + ||z - y||_1`, exactly.
pub fn is_metrically_between(x: &Vector, z: &Vector, y: &Vector) -> Result<bool> {
    let one = NormSpec::One;
    Ok(distance(x, y, &one)? == distance(x, z, &one)? + distance(z, y, &one)?)
}

/// `z_i ∈ {x_i, y_i}` for every `i`.
pub fn coordinate_between(x: &Vector, z: &Vector, y: &Vector) -> Result<bool> {
    x.check_compatible(z)?;
    x.check_compatible(y)?;
    Ok(x.coords()
        .iter()
        .zip(z.coords())
        .zip(y.coords())
        .all(|((a, c), b)| c == a || c == b))
}

/// The metric segment between two points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentEnumeration {
    pub x: Vector,
    pub y: Vector,
    /// Number of coordinates where `x` and `y` differ.
    pub k: usize,
    /// `2^k` points in binary-counter order: bit `j` of the counter selects
    /// `y` at the `j`-th differing coordinate. Starts at `x`, ends at `y`.
    pub points: Vec<Vector>,
}

/// All `z` with `z_i ∈ {x_i, y_i}`, failing if `2^k > cap`.
pub fn segment(x: &Vector, y: &Vector, cap: u64) -> Result<SegmentEnumeration> {
    x.check_compatible(y)?;
    let differing: Vec<usize> = x
        .coords()
        .iter()
        .zip(y.coords())
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(i, _)| i)
        .collect();
    let k = differing.len();
    let count = if k < 64 { 1u64 << k } else { u64::MAX };
    if k >= 64 || count > cap {
        return Err(Error::SegmentTooLarge { k, cap });
    }

    let points = (0..count)
        .map(|mask| {
            let mut coords = x.coords().to_vec();
            for (bit, &i) in differing.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    coords[i] = y.coords()[i].clone();
                }
            }
            Vector::new(x.field(), coords)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SegmentEnumeration {
        x: x.clone(),
        y: y.clone(),
        k,
        points,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoPointMinimum {
    pub minimum: Magnitude,
    /// Every minimiser of `x ↦ ||c - x||_1 + ||x - a||_1`.
    pub witnesses: SegmentEnumeration,
}

/// Minimum and minimisers of `x ↦ ||c - x||_1 + ||x - a||_1`.
///
/// The minimum is `||c - a||_1`, attained exactly on the segment.
pub fn minimize_two_point(a: &Vector, c: &Vector, cap: u64) -> Result<TwoPointMinimum> {
    let witnesses = segment(a, c, cap)?;
    Ok(TwoPointMinimum {
        minimum: distance(c, a, &NormSpec::One)?,
        witnesses,
    })
}

/// Segment points `b` of the plane with `||c - b||_1 = d1` and
/// `||b - a||_1 = d2`.
///
/// When `|a_1 - c_1| != |a_2 - c_2|` the result has exactly one element.
pub fn uniqueness_check(
    a: &Vector,
    c: &Vector,
    d1: &Magnitude,
    d2: &Magnitude,
) -> Result<Vec<Vector>> {
    a.check_compatible(c)?;
    if a.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: a.dim(),
        });
    }
    let one = NormSpec::One;
    let total = distance(c, a, &one)?;
    if d1 + d2 != total {
        return Err(Error::DistanceSum {
            d1: alloc::format!("{d1}"),
            d2: alloc::format!("{d2}"),
            total: alloc::format!("{total}"),
        });
    }
    let mut out = Vec::new();
    for b in segment(a, c, DEFAULT_SEGMENT_CAP)?.points {
        if distance(c, &b, &one)? == *d1 && distance(&b, a, &one)? == *d2 {
            out.push(b);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use alloc::vec;

    fn p3() -> FieldSpec {
        FieldSpec::padic(3).unwrap()
    }

    fn v(field: FieldSpec, t: &str) -> Vector {
        Vector::parse(field, t).unwrap()
    }

    fn m(t: &str) -> Magnitude {
        Magnitude::parse(t).unwrap()
    }

    #[test]
    fn plane_examples() {
        let f = p3();
        let (x, y) = (v(f, "1,0"), v(f, "0,1"));
        for (z, expected) in [("0,0", true), ("1,1", true), ("2,2", false), ("1,2", false)] {
            let z = v(f, z);
            assert_eq!(is_metrically_between(&x, &z, &y).unwrap(), expected);
            assert_eq!(coordinate_between(&x, &z, &y).unwrap(), expected);
        }
    }

    #[test]
    fn degenerate_triples() {
        let f = p3();
        let (x, y) = (v(f, "1/3,5"), v(f, "9,-2"));
        for (a, b) in [(&x, &y), (&y, &x), (&x, &x)] {
            assert!(is_metrically_between(a, a, b).unwrap());
            assert!(is_metrically_between(a, b, b).unwrap());
            assert!(coordinate_between(a, a, b).unwrap());
        }
    }

    #[test]
    fn coordinate_predicate_over_gf5() {
        let f = FieldSpec::gf(5).unwrap();
        assert!(!coordinate_between(&v(f, "0,0,0"), &v(f, "0,1,2"), &v(f, "1,1,1")).unwrap());
    }

    #[test]
    fn segments() {
        let f = p3();
        let x = v(f, "1,0");
        let s = segment(&x, &x, DEFAULT_SEGMENT_CAP).unwrap();
        assert_eq!((s.k, s.points.len()), (0, 1));

        let s = segment(&x, &v(f, "0,1"), DEFAULT_SEGMENT_CAP).unwrap();
        assert_eq!(s.k, 2);
        let expected: Vec<Vector> = ["1,0", "0,0", "1,1", "0,1"]
            .iter()
            .map(|t| v(f, t))
            .collect();
        assert_eq!(s.points, expected);
    }

    #[test]
    fn segment_cap_guard() {
        let f = FieldSpec::gf(2).unwrap();
        let n = 30;
        let x = Vector::zero(f, n).unwrap();
        let y = Vector::parse(f, &vec!["1"; n].join(",")).unwrap();
        assert_eq!(
            segment(&x, &y, 1 << 20),
            Err(Error::SegmentTooLarge {
                k: 30,
                cap: 1 << 20
            })
        );
        let n = 70;
        let x = Vector::zero(f, n).unwrap();
        let y = Vector::parse(f, &vec!["1"; n].join(",")).unwrap();
        assert!(matches!(
            segment(&x, &y, u64::MAX),
            Err(Error::SegmentTooLarge { k: 70, .. })
        ));
    }

    #[test]
    fn two_point_minimum() {
        let f = p3();
        let r = minimize_two_point(&v(f, "0,0"), &v(f, "1,0"), DEFAULT_SEGMENT_CAP).unwrap();
        assert_eq!(r.minimum, m("1"));
        assert_eq!(r.witnesses.points, vec![v(f, "0,0"), v(f, "1,0")]);

        let r = minimize_two_point(&v(f, "0,0"), &v(f, "9,1/3"), DEFAULT_SEGMENT_CAP).unwrap();
        assert_eq!(r.minimum, m("28/9"));
        assert_eq!(r.witnesses.points.len(), 4);

        let a = v(f, "2,7/3");
        let r = minimize_two_point(&a, &a, DEFAULT_SEGMENT_CAP).unwrap();
        assert!(r.minimum.is_zero());
        assert_eq!(r.witnesses.points, vec![a]);
    }

    #[test]
    fn uniqueness() {
        let f = p3();
        let (a, c) = (v(f, "0,0"), v(f, "9,1/3"));
        assert_eq!(
            uniqueness_check(&a, &c, &m("3"), &m("1/9")).unwrap(),
            vec![v(f, "9,0")]
        );
        assert_eq!(
            uniqueness_check(&a, &c, &m("0"), &m("28/9")).unwrap(),
            vec![c.clone()]
        );

        let c = v(f, "1,1");
        assert_eq!(
            uniqueness_check(&a, &c, &m("1"), &m("1")).unwrap(),
            vec![v(f, "1,0"), v(f, "0,1")]
        );
        assert!(matches!(
            uniqueness_check(&a, &c, &m("1"), &m("2")),
            Err(Error::DistanceSum { .. })
        ));
        assert!(matches!(
            uniqueness_check(&v(f, "0,0,0"), &v(f, "1,1,1"), &m("1"), &m("2")),
            Err(Error::WrongDimension { .. })
        ));
    }
}
