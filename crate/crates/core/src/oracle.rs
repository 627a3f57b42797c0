//! Exhaustive ground truth over `GF(q)^n`.
//!
//! Everything here works on explicit point tables: the space is listed in
//! lexicographic order and a map is a permutation of point indices. The
//! isometry search does not use the axial form at all; it assigns images
//! point by point and prunes on the first pairwise distance that is not
//! preserved. [`axial_group`] builds the axial maps directly, so the two sets
//! can be compared.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use num_bigint::BigUint;
use num_traits::One;

use crate::betweenness::{coordinate_between, is_metrically_between};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::isometry::{decompose, AxialIsometry, ProbeMap, ScalarIsometry};
use crate::norm::{distance, NormSpec, Vector};

/// Largest space (in points) the isometry search accepts by default.
pub const DEFAULT_SEARCH_CAP: u64 = 9;
/// Default limit on the number of triples in [`exhaustive_betweenness_check`].
pub const DEFAULT_TRIPLE_CAP: u64 = 10_000_000;
/// Default limit on the size of the group built by [`axial_group`].
pub const DEFAULT_GROUP_CAP: u64 = 1_000_000;
/// Non-axial isometries kept as witnesses.
pub const MAX_WITNESSES: usize = 8;

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Number of isometries of `(GF(q)^n, spec)` (or of those fixing the origin)
/// implied by the axial form, where known.
///
/// One-norm: `n! (q!)^n`, centred `n! ((q-1)!)^n`. Unweighted sup-norm under
/// the trivial valuation is the discrete metric, so every bijection counts.
pub fn predicted_count(q: u64, n: usize, spec: &NormSpec, centred: bool) -> Option<BigUint> {
    let n32 = u32::try_from(n).ok()?;
    match spec {
        NormSpec::One => {
            let per_axis = factorial(if centred { q - 1 } else { q });
            Some(factorial(n as u64) * per_axis.pow(n32))
        }
        NormSpec::Sup => {
            let points = q.checked_pow(n32)?;
            Some(factorial(if centred { points - 1 } else { points }))
        }
        NormSpec::WeightedSup(_) => None,
    }
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
}

/// Index of a point of `GF(q)^n` in lexicographic order.
fn point_index(v: &Vector, q: u64) -> usize {
    v.coords()
        .iter()
        .fold(0u64, |acc, c| acc * q + c.residue().expect("finite field")) as usize
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BranchOutcome {
    /// Isometries found, as point-index permutations.
    pub maps: Vec<Vec<usize>>,
    /// Whether each map decomposed into axial form.
    pub axial: Vec<bool>,
    /// Search-tree nodes visited.
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    pub q: u64,
    pub n: usize,
    pub norm: NormSpec,
    pub centred: bool,
    /// Number of bijections the search ranges over: `(q^n)!`, or
    /// `(q^n - 1)!` when the origin is fixed.
    pub search_space: BigUint,
    pub nodes_visited: u64,
    /// Every isometry found, as a permutation of point indices.
    pub maps: Vec<Vec<usize>>,
    pub axial_count: usize,
    /// First few non-axial isometries, in search order.
    pub non_axial_witnesses: Vec<Vec<usize>>,
    /// Filled in by callers that time the search.
    pub duration: Option<Duration>,
}

impl EnumerationResult {
    pub fn isometry_count(&self) -> usize {
        self.maps.len()
    }

    pub fn predicted(&self) -> Option<BigUint> {
        predicted_count(self.q, self.n, &self.norm, self.centred)
    }

    pub fn matches_prediction(&self) -> Option<bool> {
        self.predicted()
            .map(|p| p == BigUint::from(self.isometry_count()))
    }
}

/// Backtracking search for distance-preserving bijections of `GF(q)^n`.
///
/// The search tree splits on the image of the origin, so branches can be
/// run independently and merged with [`IsometrySearch::finish`].
#[derive(Debug, Clone)]
pub struct IsometrySearch {
    q: u64,
    n: usize,
    spec: NormSpec,
    centred: bool,
    points: Vec<Vector>,
    /// `dist[i * len + j]`: id of `d(points[i], points[j])`; equal ids mean
    /// equal distances.
    dist: Vec<u32>,
}

impl IsometrySearch {
    pub fn new(q: u64, n: usize, spec: NormSpec, centred: bool, cap: u64) -> Result<Self> {
        let field = FieldSpec::gf(q)?;
        let points = Vector::enumerate_space(field, n, cap)?;
        let mut ids: BTreeMap<_, u32> = BTreeMap::new();
        let mut dist = Vec::with_capacity(points.len() * points.len());
        for x in &points {
            for y in &points {
                let d = distance(x, y, &spec)?;
                let next = ids.len() as u32;
                dist.push(*ids.entry(d).or_insert(next));
            }
        }
        Ok(IsometrySearch {
            q,
            n,
            spec,
            centred,
            points,
            dist,
        })
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    fn d(&self, i: usize, j: usize) -> u32 {
        self.dist[i * self.points.len() + j]
    }

    /// Candidate images of the origin (point 0).
    pub fn root_branches(&self) -> Vec<usize> {
        if self.centred {
            vec![0]
        } else {
            (0..self.points.len()).collect()
        }
    }

    pub fn run_branch(&self, root_image: usize) -> BranchOutcome {
        let len = self.points.len();
        let mut out = BranchOutcome::default();
        let mut used = vec![false; len];
        let mut assigned = Vec::with_capacity(len);
        used[root_image] = true;
        assigned.push(root_image);
        self.extend(&mut assigned, &mut used, &mut out);
        out.axial = out.maps.iter().map(|m| self.is_axial(m)).collect();
        out
    }

    fn extend(&self, assigned: &mut Vec<usize>, used: &mut [bool], out: &mut BranchOutcome) {
        out.nodes += 1;
        let k = assigned.len();
        if k == self.points.len() {
            out.maps.push(assigned.clone());
            return;
        }
        for cand in 0..self.points.len() {
            if used[cand] {
                continue;
            }
            if (0..k).all(|j| self.d(k, j) == self.d(cand, assigned[j])) {
                used[cand] = true;
                assigned.push(cand);
                self.extend(assigned, used, out);
                assigned.pop();
                used[cand] = false;
            }
        }
    }

    pub fn probe_map(&self, map: &[usize]) -> ProbeMap {
        let field = self.points[0].field();
        let images = map.iter().map(|&i| self.points[i].clone()).collect();
        ProbeMap::new(field, self.n, self.points.clone(), images, true)
            .expect("search maps are permutations of the space")
    }

    pub fn is_axial(&self, map: &[usize]) -> bool {
        decompose(&self.probe_map(map)).is_ok()
    }

    /// Merges branch outcomes, which must be given in root-branch order.
    pub fn finish(&self, outcomes: Vec<BranchOutcome>) -> EnumerationResult {
        let points = self.points.len() as u64;
        let mut result = EnumerationResult {
            q: self.q,
            n: self.n,
            norm: self.spec.clone(),
            centred: self.centred,
            search_space: factorial(if self.centred { points - 1 } else { points }),
            nodes_visited: 0,
            maps: Vec::new(),
            axial_count: 0,
            non_axial_witnesses: Vec::new(),
            duration: None,
        };
        for outcome in outcomes {
            result.nodes_visited += outcome.nodes;
            for (map, axial) in outcome.maps.into_iter().zip(outcome.axial) {
                if axial {
                    result.axial_count += 1;
                } else if result.non_axial_witnesses.len() < MAX_WITNESSES {
                    result.non_axial_witnesses.push(map.clone());
                }
                result.maps.push(map);
            }
        }
        result
    }

    pub fn run(&self) -> EnumerationResult {
        let outcomes = self
            .root_branches()
            .into_iter()
            .map(|b| self.run_branch(b))
            .collect();
        self.finish(outcomes)
    }
}

/// Sequential search; see [`IsometrySearch`].
pub fn enumerate_isometries(
    q: u64,
    n: usize,
    spec: NormSpec,
    centred: bool,
    cap: u64,
) -> Result<EnumerationResult> {
    Ok(IsometrySearch::new(q, n, spec, centred, cap)?.run())
}

/// Every axial map `t + (τ_i(x_σ(i)))` of `GF(q)^n`, as point-index
/// permutations. Translations are absorbed into the tables, so this is all
/// `σ` and all tables (fixing 0 when `centred`).
pub fn axial_group(q: u64, n: usize, centred: bool, cap: u64) -> Result<BTreeSet<Vec<usize>>> {
    let field = FieldSpec::gf(q)?;
    let size = predicted_count(q, n, &NormSpec::One, centred).unwrap_or_default();
    if size > BigUint::from(cap) {
        return Err(Error::SearchTooLarge {
            size: u64::try_from(&size).unwrap_or(u64::MAX),
            cap,
        });
    }
    let points = Vector::enumerate_space(field, n, cap)?;
    let tables: Vec<ScalarIsometry> = permutations(q as usize)
        .into_iter()
        .filter(|p| !centred || p[0] == 0)
        .map(|p| ScalarIsometry::table(field, p.into_iter().map(|r| r as u64).collect()))
        .collect::<Result<_>>()?;
    let zero = Vector::zero(field, n)?;

    let mut out = BTreeSet::new();
    for sigma in permutations(n) {
        // mixed-radix counter over the table choice per coordinate
        let mut choice = vec![0usize; n];
        loop {
            let taus = choice.iter().map(|&c| tables[c].clone()).collect();
            let iso = AxialIsometry::new(sigma.clone(), taus, zero.clone())?;
            let map = points
                .iter()
                .map(|x| Ok(point_index(&iso.apply(x)?, q)))
                .collect::<Result<Vec<_>>>()?;
            out.insert(map);
            let Some(pos) = choice.iter().rposition(|&c| c + 1 < tables.len()) else {
                break;
            };
            choice[pos] += 1;
            for c in &mut choice[pos + 1..] {
                *c = 0;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetweennessReport {
    pub q: u64,
    pub n: usize,
    pub triples: u64,
    /// Triples where the metric equality holds.
    pub metric_between: u64,
    pub mismatches: u64,
    pub first_mismatch: Option<(Vector, Vector, Vector)>,
}

/// Compares the metric and coordinate betweenness predicates on every
/// triple `(x, z, y)` of `GF(q)^n`.
pub fn exhaustive_betweenness_check(q: u64, n: usize, cap: u64) -> Result<BetweennessReport> {
    let field = FieldSpec::gf(q)?;
    let points = Vector::enumerate_space(field, n, cap)?;
    let len = points.len() as u64;
    let triples = len
        .checked_mul(len)
        .and_then(|t| t.checked_mul(len))
        .filter(|&t| t <= cap)
        .ok_or(Error::SearchTooLarge {
            size: len.saturating_mul(len).saturating_mul(len),
            cap,
        })?;
    let mut report = BetweennessReport {
        q,
        n,
        triples,
        metric_between: 0,
        mismatches: 0,
        first_mismatch: None,
    };
    for x in &points {
        for y in &points {
            for z in &points {
                let metric = is_metrically_between(x, z, y)?;
                if metric {
                    report.metric_between += 1;
                }
                if metric != coordinate_between(x, z, y)? {
                    report.mismatches += 1;
                    report
                        .first_mismatch
                        .get_or_insert_with(|| (x.clone(), z.clone(), y.clone()));
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub size: usize,
    pub has_identity: bool,
    pub closed_under_composition: bool,
    pub closed_under_inverse: bool,
    /// First pair `(f, g)` (indices into the input) whose composite
    /// `f ∘ g` is missing.
    pub composition_witness: Option<(usize, usize)>,
}

impl ClosureReport {
    pub fn is_group(&self) -> bool {
        self.has_identity && self.closed_under_composition && self.closed_under_inverse
    }
}

/// Checks that a set of point permutations is a group.
pub fn group_closure(maps: &[Vec<usize>]) -> ClosureReport {
    let set: BTreeSet<&[usize]> = maps.iter().map(Vec::as_slice).collect();
    let len = maps.first().map_or(0, Vec::len);
    let identity: Vec<usize> = (0..len).collect();
    let mut report = ClosureReport {
        size: set.len(),
        has_identity: !maps.is_empty() && set.contains(identity.as_slice()),
        closed_under_composition: true,
        closed_under_inverse: true,
        composition_witness: None,
    };
    let mut buf = vec![0; len];
    for f in maps {
        for (i, &img) in f.iter().enumerate() {
            buf[img] = i;
        }
        if !set.contains(buf.as_slice()) {
            report.closed_under_inverse = false;
        }
    }
    'outer: for (a, f) in maps.iter().enumerate() {
        for (b, g) in maps.iter().enumerate() {
            for (slot, &gi) in buf.iter_mut().zip(g) {
                *slot = f[gi];
            }
            if !set.contains(buf.as_slice()) {
                report.closed_under_composition = false;
                report.composition_witness = Some((a, b));
                break 'outer;
            }
        }
    }
    report
}

pub fn group_closure_check(result: &EnumerationResult) -> ClosureReport {
    group_closure(&result.maps)
}
