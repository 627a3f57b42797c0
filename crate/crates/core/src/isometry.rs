//! Axial isometries of `(K^n, ||·||_1)`.
//!
//! An axial isometry has the form
//!
//! ```text
//! x ↦ t + (τ_0(x_σ(0)), …, τ_{n-1}(x_σ(n-1)))
//! ```
//!
//! for a translation `t`, a permutation `σ` and scalar isometries `τ_i` of
//! `K`. Every such map preserves one-norm distances, and every one-norm
//! isometry is of this form. [`decompose`] recovers `(t, σ, τ)` from a finite
//! table of probe values by locating the images of the coordinate axes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Magnitude, Scalar};
use crate::norm::{distance, norm, NormSpec, Vector};

/// A distance-preserving bijection of the scalar field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ScalarIsometry {
    /// `a ↦ unit * a + shift` with `|unit| = 1`.
    Affine { unit: Scalar, shift: Scalar },
    /// A permutation of `GF(q)`: residue `r` maps to `images[r]`.
    Table { field: FieldSpec, images: Vec<u64> },
    /// A partial map known only on finitely many points.
    Sampled {
        field: FieldSpec,
        pairs: Vec<(Scalar, Scalar)>,
    },
}

impl ScalarIsometry {
    pub fn affine(unit: Scalar, shift: Scalar) -> Result<Self> {
        unit.field().check_same(shift.field())?;
        if unit.valuation() != Magnitude::one() {
            return Err(Error::NotUnit(format!("{unit}")));
        }
        Ok(ScalarIsometry::Affine { unit, shift })
    }

    pub fn identity(field: FieldSpec) -> Self {
        ScalarIsometry::Affine {
            unit: Scalar::one(field),
            shift: Scalar::zero(field),
        }
    }

    pub fn shift(by: Scalar) -> Self {
        ScalarIsometry::Affine {
            unit: Scalar::one(by.field()),
            shift: by,
        }
    }

    pub fn table(field: FieldSpec, images: Vec<u64>) -> Result<Self> {
        let q = field.order().ok_or(Error::UnsupportedField {
            expected: "a finite field",
            found: field,
        })?;
        if !is_permutation(&images, q as usize) {
            return Err(Error::NotPermutation(q as usize));
        }
        Ok(ScalarIsometry::Table { field, images })
    }

    /// Checks that the pairs describe an injective map preserving `|a - b|`.
    pub fn sampled(field: FieldSpec, pairs: Vec<(Scalar, Scalar)>) -> Result<Self> {
        for (a, b) in &pairs {
            field.check_same(a.field())?;
            field.check_same(b.field())?;
        }
        let mut seen = BTreeSet::new();
        for (i, (a, b)) in pairs.iter().enumerate() {
            if !seen.insert(a) {
                return Err(Error::NotBijection("repeated preimage in sampled map"));
            }
            for (c, d) in &pairs[..i] {
                if a.try_sub(c)?.valuation() != b.try_sub(d)?.valuation() {
                    return Err(Error::NotBijection(
                        "sampled map does not preserve distances",
                    ));
                }
            }
        }
        Ok(ScalarIsometry::Sampled { field, pairs })
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            ScalarIsometry::Affine { unit, .. } => unit.field(),
            ScalarIsometry::Table { field, .. } | ScalarIsometry::Sampled { field, .. } => *field,
        }
    }

    pub fn apply(&self, a: &Scalar) -> Result<Scalar> {
        self.field().check_same(a.field())?;
        match self {
            ScalarIsometry::Affine { unit, shift } => unit.try_mul(a)?.try_add(shift),
            ScalarIsometry::Table { field, images } => {
                let r = a.residue().expect("finite field scalar");
                Ok(Scalar::from_i64(*field, images[r as usize] as i64))
            }
            ScalarIsometry::Sampled { pairs, .. } => pairs
                .iter()
                .find(|(x, _)| x == a)
                .map(|(_, y)| y.clone())
                .ok_or_else(|| Error::OutsideTable(format!("{a}"))),
        }
    }

    pub fn fixes_zero(&self) -> bool {
        let zero = Scalar::zero(self.field());
        matches!(self.apply(&zero), Ok(z) if z.is_zero())
    }

    pub fn inverse(&self) -> ScalarIsometry {
        match self {
            ScalarIsometry::Affine { unit, shift } => {
                let inv = unit.inv().expect("units are nonzero");
                let shift = inv.try_mul(shift).expect("same field").neg();
                ScalarIsometry::Affine { unit: inv, shift }
            }
            ScalarIsometry::Table { field, images } => {
                let mut inv = vec![0; images.len()];
                for (r, &img) in images.iter().enumerate() {
                    inv[img as usize] = r as u64;
                }
                ScalarIsometry::Table {
                    field: *field,
                    images: inv,
                }
            }
            ScalarIsometry::Sampled { field, pairs } => ScalarIsometry::Sampled {
                field: *field,
                pairs: pairs.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
            },
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ScalarIsometry) -> Result<ScalarIsometry> {
        let field = self.field();
        field.check_same(inner.field())?;
        match (self, inner) {
            (
                ScalarIsometry::Affine { unit, shift },
                ScalarIsometry::Affine {
                    unit: u2,
                    shift: c2,
                },
            ) => Ok(ScalarIsometry::Affine {
                unit: unit.try_mul(u2)?,
                shift: unit.try_mul(c2)?.try_add(shift)?,
            }),
            (_, ScalarIsometry::Sampled { pairs, .. }) => Ok(ScalarIsometry::Sampled {
                field,
                pairs: pairs
                    .iter()
                    .map(|(a, b)| Ok((a.clone(), self.apply(b)?)))
                    .collect::<Result<_>>()?,
            }),
            (ScalarIsometry::Sampled { pairs, .. }, _) => {
                let back = inner.inverse();
                Ok(ScalarIsometry::Sampled {
                    field,
                    pairs: pairs
                        .iter()
                        .map(|(a, b)| Ok((back.apply(a)?, b.clone())))
                        .collect::<Result<_>>()?,
                })
            }
            _ => {
                let elements = field
                    .elements()
                    .expect("tables only exist over finite fields");
                let images = elements
                    .map(|a| {
                        let r = self.apply(&inner.apply(&a)?)?;
                        Ok(r.residue().expect("finite field scalar"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ScalarIsometry::Table { field, images })
            }
        }
    }
}

fn is_permutation(images: &[u64], n: usize) -> bool {
    if images.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &i in images {
        match seen.get_mut(i as usize) {
            Some(s) if !*s => *s = true,
            _ => return false,
        }
    }
    true
}

/// `x ↦ translation + (τ_i(x_σ(i)))_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AxialIsometry {
    sigma: Vec<usize>,
    taus: Vec<ScalarIsometry>,
    translation: Vector,
}

impl AxialIsometry {
    pub fn new(sigma: Vec<usize>, taus: Vec<ScalarIsometry>, translation: Vector) -> Result<Self> {
        let n = translation.dim();
        let field = translation.field();
        if taus.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: taus.len(),
            });
        }
        let as_u64: Vec<u64> = sigma.iter().map(|&s| s as u64).collect();
        if !is_permutation(&as_u64, n) {
            return Err(Error::NotPermutation(n));
        }
        for tau in &taus {
            field.check_same(tau.field())?;
        }
        Ok(AxialIsometry {
            sigma,
            taus,
            translation,
        })
    }

    pub fn identity(field: FieldSpec, n: usize) -> Result<Self> {
        AxialIsometry::new(
            (0..n).collect(),
            vec![ScalarIsometry::identity(field); n],
            Vector::zero(field, n)?,
        )
    }

    /// Pure coordinate permutation: output coordinate `i` is input `sigma[i]`.
    pub fn permutation(field: FieldSpec, sigma: Vec<usize>) -> Result<Self> {
        let n = sigma.len();
        AxialIsometry::new(
            sigma,
            vec![ScalarIsometry::identity(field); n],
            Vector::zero(field, n)?,
        )
    }

    pub fn field(&self) -> FieldSpec {
        self.translation.field()
    }

    pub fn dim(&self) -> usize {
        self.translation.dim()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn taus(&self) -> &[ScalarIsometry] {
        &self.taus
    }

    pub fn translation(&self) -> &Vector {
        &self.translation
    }

    pub fn is_centred(&self) -> bool {
        self.translation.is_zero() && self.taus.iter().all(ScalarIsometry::fixes_zero)
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        self.translation.check_compatible(x)?;
        let coords = self
            .taus
            .iter()
            .zip(&self.sigma)
            .zip(self.translation.coords())
            .map(|((tau, &s), t)| tau.apply(&x.coords()[s])?.try_add(t))
            .collect::<Result<Vec<_>>>()?;
        Vector::new(self.field(), coords)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AxialIsometry) -> Result<AxialIsometry> {
        self.translation.check_compatible(&inner.translation)?;
        let mut sigma = Vec::with_capacity(self.dim());
        let mut taus = Vec::with_capacity(self.dim());
        for (tau, &k) in self.taus.iter().zip(&self.sigma) {
            sigma.push(inner.sigma[k]);
            let shifted = ScalarIsometry::shift(inner.translation.coords()[k].clone())
                .compose(&inner.taus[k])?;
            taus.push(tau.compose(&shifted)?);
        }
        AxialIsometry::new(sigma, taus, self.translation.clone())
    }

    pub fn invert(&self) -> Result<AxialIsometry> {
        let n = self.dim();
        let mut sigma = vec![0; n];
        let mut taus = vec![ScalarIsometry::identity(self.field()); n];
        for (i, &s) in self.sigma.iter().enumerate() {
            sigma[s] = i;
            let unshift = ScalarIsometry::shift(self.translation.coords()[i].neg());
            taus[s] = self.taus[i].inverse().compose(&unshift)?;
        }
        AxialIsometry::new(sigma, taus, Vector::zero(self.field(), n)?)
    }
}

/// A map known on finitely many points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeMap {
    field: FieldSpec,
    n: usize,
    domain: Vec<Vector>,
    images: Vec<Vector>,
    /// The domain is the whole (finite) space.
    complete: bool,
    index: BTreeMap<Vector, usize>,
}

impl ProbeMap {
    pub fn new(
        field: FieldSpec,
        n: usize,
        domain: Vec<Vector>,
        images: Vec<Vector>,
        complete: bool,
    ) -> Result<Self> {
        if domain.len() != images.len() {
            return Err(Error::ProbeLength {
                domain: domain.len(),
                images: images.len(),
            });
        }
        for v in domain.iter().chain(&images) {
            field.check_same(v.field())?;
            if v.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.dim(),
                });
            }
        }
        let mut index = BTreeMap::new();
        for (i, x) in domain.iter().enumerate() {
            if index.insert(x.clone(), i).is_some() {
                return Err(Error::DuplicateProbe(x.clone()));
            }
        }
        Ok(ProbeMap {
            field,
            n,
            domain,
            images,
            complete,
            index,
        })
    }

    /// Probe table of `f` on `domain`.
    pub fn from_fn(
        field: FieldSpec,
        n: usize,
        domain: Vec<Vector>,
        complete: bool,
        f: impl Fn(&Vector) -> Result<Vector>,
    ) -> Result<Self> {
        let images = domain.iter().map(f).collect::<Result<Vec<_>>>()?;
        ProbeMap::new(field, n, domain, images, complete)
    }

    pub fn of_isometry(iso: &AxialIsometry, domain: Vec<Vector>, complete: bool) -> Result<Self> {
        ProbeMap::from_fn(iso.field(), iso.dim(), domain, complete, |x| iso.apply(x))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn domain(&self) -> &[Vector] {
        &self.domain
    }

    pub fn images(&self) -> &[Vector] {
        &self.images
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Vector, &Vector)> {
        self.domain.iter().zip(&self.images)
    }

    pub fn image_of(&self, x: &Vector) -> Option<&Vector> {
        self.index.get(x).map(|&i| &self.images[i])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceViolation {
    pub x: Vector,
    pub y: Vector,
    pub domain_distance: Magnitude,
    pub image_distance: Magnitude,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsometryReport {
    pub pairs_checked: usize,
    pub distance_violations: Vec<DistanceViolation>,
    /// Distinct probes with the same image.
    pub collisions: Vec<(Vector, Vector)>,
    /// Checked only for complete probe maps.
    pub surjective: Option<bool>,
}

impl IsometryReport {
    pub fn injective(&self) -> bool {
        self.collisions.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.distance_violations.is_empty() && self.injective() && self.surjective != Some(false)
    }
}

/// Checks distance preservation on every probe pair, injectivity, and (for
/// complete maps) surjectivity.
pub fn verify_isometry(m: &ProbeMap, spec: &NormSpec) -> Result<IsometryReport> {
    let mut report = IsometryReport {
        pairs_checked: 0,
        distance_violations: Vec::new(),
        collisions: Vec::new(),
        surjective: None,
    };
    for i in 0..m.len() {
        for j in 0..i {
            let (x, y) = (&m.domain[j], &m.domain[i]);
            let (fx, fy) = (&m.images[j], &m.images[i]);
            let before = distance(x, y, spec)?;
            let after = distance(fx, fy, spec)?;
            if fx == fy {
                report.collisions.push((x.clone(), y.clone()));
            }
            if before != after {
                report.distance_violations.push(DistanceViolation {
                    x: x.clone(),
                    y: y.clone(),
                    domain_distance: before,
                    image_distance: after,
                });
            }
            report.pairs_checked += 1;
        }
    }
    if m.complete {
        let images: BTreeSet<&Vector> = m.images.iter().collect();
        report.surjective = Some(m.domain.iter().all(|x| images.contains(x)));
    }
    Ok(report)
}

fn failure(probe: &Vector, reason: &'static str) -> Error {
    Error::DecompositionFailure {
        probe: probe.clone(),
        reason,
    }
}

/// Recovers the axial form of a one-norm isometry from its probe table.
///
/// The origin must be probed. After subtracting its image, points on input
/// axis `i` have to land on a single output axis `j`, which gives
/// `σ(j) = i`, and their images give `τ_j`. Over finite fields every axis
/// must be fully probed and `τ_j` is a table; otherwise `τ_j` is fitted as an
/// affine map from the origin and the first probe on the axis, falling back
/// to the sampled values when the fit does not explain every axis probe.
/// Finally every probe is recomputed from the recovered form.
pub fn decompose(m: &ProbeMap) -> Result<AxialIsometry> {
    let field = m.field;
    let n = m.n;
    let origin = Vector::zero(field, n)?;
    let translation = m.image_of(&origin).ok_or(Error::MissingOrigin)?.clone();
    let centred = m
        .images
        .iter()
        .map(|y| y.try_sub(&translation))
        .collect::<Result<Vec<_>>>()?;

    let mut axis_probes: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (idx, x) in m.domain.iter().enumerate() {
        let mut support = x.support();
        if let (Some(i), None) = (support.next(), support.next()) {
            axis_probes[i].push(idx);
        }
    }

    // target[i] = output axis of input axis i; sigma[j] = input axis of j.
    let mut sigma: Vec<Option<usize>> = vec![None; n];
    for (i, probes) in axis_probes.iter().enumerate() {
        let mut target = None;
        for &idx in probes {
            let mut support = centred[idx].support();
            let j = match (support.next(), support.next()) {
                (Some(j), None) => j,
                _ => {
                    return Err(failure(
                        &m.domain[idx],
                        "axis point not mapped onto an axis",
                    ))
                }
            };
            match target {
                None => target = Some(j),
                Some(t) if t != j => {
                    return Err(failure(&m.domain[idx], "axis points mapped onto two axes"))
                }
                _ => {}
            }
        }
        let j = target.ok_or(Error::UnderDetermined { axis: i })?;
        if sigma[j].is_some() {
            return Err(failure(&m.domain[probes[0]], "two axes mapped onto one"));
        }
        sigma[j] = Some(i);
    }
    let sigma: Vec<usize> = sigma
        .into_iter()
        .map(|s| s.expect("n axes onto n axes"))
        .collect();

    let taus = sigma
        .iter()
        .enumerate()
        .map(|(j, &i)| fit_axis(m, &centred, &axis_probes[i], i, j))
        .collect::<Result<Vec<_>>>()?;
    let iso = AxialIsometry::new(sigma, taus, translation)?;

    for (x, y) in m.pairs() {
        match iso.apply(x) {
            Ok(z) if z == *y => {}
            Ok(_) => return Err(failure(x, "image disagrees with the axial reconstruction")),
            Err(_) => return Err(failure(x, "coordinate outside the sampled scalar isometry")),
        }
    }
    Ok(iso)
}

/// `τ_j` from the probes on input axis `i`, whose centred images lie on
/// output axis `j`.
fn fit_axis(
    m: &ProbeMap,
    centred: &[Vector],
    probes: &[usize],
    i: usize,
    j: usize,
) -> Result<ScalarIsometry> {
    let field = m.field;
    let samples: Vec<(Scalar, Scalar)> = probes
        .iter()
        .map(|&idx| {
            (
                m.domain[idx].coords()[i].clone(),
                centred[idx].coords()[j].clone(),
            )
        })
        .collect();

    if let Some(q) = field.order() {
        let mut images = vec![None; q as usize];
        images[0] = Some(0);
        for (a, b) in &samples {
            images[a.residue().expect("finite") as usize] = b.residue();
        }
        let images: Vec<u64> = images
            .into_iter()
            .collect::<Option<_>>()
            .ok_or(Error::UnderDetermined { axis: i })?;
        return ScalarIsometry::table(field, images)
            .map_err(|_| failure(&m.domain[probes[0]], "axis images collide"));
    }

    let zero = Scalar::zero(field);
    let (a1, b1) = &samples[0];
    let unit = b1.try_mul(&a1.inv()?)?;
    if let Ok(fit) = ScalarIsometry::affine(unit, zero.clone()) {
        if samples.iter().all(|(a, b)| fit.apply(a).as_ref() == Ok(b)) {
            return Ok(fit);
        }
    }
    let mut pairs = vec![(zero.clone(), zero)];
    pairs.extend(samples);
    ScalarIsometry::sampled(field, pairs).map_err(|_| {
        failure(
            &m.domain[probes[0]],
            "axis images do not preserve distances",
        )
    })
}

/// Probe table of the map that adds `e0` to every vector of sup-norm
/// `||v0||` and fixes everything else.
///
/// Requires a p-adic field and `||e0|| < ||v0||`; the result preserves
/// sup-norm distances but is not axial.
pub fn make_sup_norm_counterexample(
    field: FieldSpec,
    e0: &Vector,
    v0: &Vector,
    probes: Vec<Vector>,
) -> Result<ProbeMap> {
    if !matches!(field, FieldSpec::PAdic(_)) {
        return Err(Error::Hypothesis(
            "needs a p-adic field; under the trivial valuation all nonzero vectors have sup-norm 1",
        ));
    }
    e0.check_compatible(v0)?;
    field.check_same(e0.field())?;
    let radius = norm(v0, &NormSpec::Sup)?;
    if norm(e0, &NormSpec::Sup)? >= radius {
        return Err(Error::Hypothesis("||e0|| < ||v0|| is required"));
    }
    ProbeMap::from_fn(field, e0.dim(), probes, false, |v| {
        if norm(v, &NormSpec::Sup)? == radius {
            v.try_add(e0)
        } else {
            Ok(v.clone())
        }
    })
}
