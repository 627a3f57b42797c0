//! Vectors in `K^n` and the one-, sup- and weighted sup-norms.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Magnitude, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector {
    field: FieldSpec,
    coords: Vec<Scalar>,
}

impl Vector {
    pub fn new(field: FieldSpec, coords: Vec<Scalar>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        for c in &coords {
            field.check_same(c.field())?;
        }
        Ok(Vector { field, coords })
    }

    pub fn zero(field: FieldSpec, n: usize) -> Result<Self> {
        Vector::new(field, (0..n).map(|_| Scalar::zero(field)).collect())
    }

    /// `value * e_axis`.
    pub fn on_axis(field: FieldSpec, n: usize, axis: usize, value: Scalar) -> Result<Self> {
        let mut v = Vector::zero(field, n)?;
        field.check_same(value.field())?;
        if axis >= n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: axis + 1,
            });
        }
        v.coords[axis] = value;
        Ok(v)
    }

    /// Every point of `GF(q)^n` in lexicographic order (first coordinate
    /// slowest), refusing spaces with more than `cap` points.
    pub fn enumerate_space(field: FieldSpec, n: usize, cap: u64) -> Result<Vec<Vector>> {
        let q = field.order().ok_or(Error::UnsupportedField {
            expected: "a finite field",
            found: field,
        })?;
        if n == 0 {
            return Err(Error::EmptyVector);
        }
        let size = u32::try_from(n)
            .ok()
            .and_then(|n| q.checked_pow(n))
            .filter(|&s| s <= cap)
            .ok_or(Error::SearchTooLarge {
                size: q.saturating_pow(n.min(u32::MAX as usize) as u32),
                cap,
            })?;
        let mut out = Vec::with_capacity(size as usize);
        for index in 0..size {
            let mut coords = alloc::vec![Scalar::zero(field); n];
            let mut rest = index;
            for c in coords.iter_mut().rev() {
                *c = Scalar::from_i64(field, (rest % q) as i64);
                rest /= q;
            }
            out.push(Vector { field, coords });
        }
        Ok(out)
    }

    /// Comma-separated scalars, e.g. `9,1/3`.
    pub fn parse(field: FieldSpec, text: &str) -> Result<Self> {
        let coords = text
            .split(',')
            .map(|t| Scalar::parse(field, t))
            .collect::<Result<Vec<_>>>()?;
        Vector::new(field, coords)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    /// Indices of nonzero coordinates.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
    }

    pub fn check_compatible(&self, other: &Vector) -> Result<()> {
        self.field.check_same(other.field)?;
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &Vector,
        op: impl Fn(&Scalar, &Scalar) -> Result<Scalar>,
    ) -> Result<Vector> {
        self.check_compatible(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| op(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Vector {
            field: self.field,
            coords,
        })
    }

    pub fn try_add(&self, other: &Vector) -> Result<Vector> {
        self.zip_with(other, Scalar::try_add)
    }

    pub fn try_sub(&self, other: &Vector) -> Result<Vector> {
        self.zip_with(other, Scalar::try_sub)
    }

    pub fn scale(&self, lambda: &Scalar) -> Result<Vector> {
        self.field.check_same(lambda.field())?;
        let coords = self
            .coords
            .iter()
            .map(|c| lambda.try_mul(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Vector {
            field: self.field,
            coords,
        })
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NormSpec {
    /// `|a_1| + ... + |a_n|`.
    One,
    /// `max |a_i|`.
    Sup,
    /// `max w_i |a_i|` with strictly positive weights.
    WeightedSup(Vec<Magnitude>),
}

impl NormSpec {
    pub fn weighted_sup(weights: Vec<Magnitude>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(w) = weights.iter().find(|w| w.is_zero()) {
            return Err(Error::NonPositiveWeight(w.to_string()));
        }
        Ok(NormSpec::WeightedSup(weights))
    }

    /// Sup variants satisfy the strong triangle inequality.
    pub fn is_ultrametric(&self) -> bool {
        !matches!(self, NormSpec::One)
    }

    pub fn name(&self) -> &'static str {
        match self {
            NormSpec::One => "one",
            NormSpec::Sup => "sup",
            NormSpec::WeightedSup(_) => "weighted-sup",
        }
    }
}

/// Exact norm of `v`.
pub fn norm(v: &Vector, spec: &NormSpec) -> Result<Magnitude> {
    let vals = v.coords().iter().map(Scalar::valuation);
    Ok(match spec {
        NormSpec::One => vals.sum(),
        NormSpec::Sup => vals.fold(Magnitude::zero(), Magnitude::max),
        NormSpec::WeightedSup(weights) => {
            if weights.len() != v.dim() {
                return Err(Error::DimensionMismatch {
                    expected: weights.len(),
                    found: v.dim(),
                });
            }
            vals.zip(weights)
                .map(|(a, w)| &a * w)
                .fold(Magnitude::zero(), Magnitude::max)
        }
    })
}

/// `norm(x - y)`.
pub fn distance(x: &Vector, y: &Vector, spec: &NormSpec) -> Result<Magnitude> {
    norm(&x.try_sub(y)?, spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NormAxiom {
    /// `||x|| = 0` iff `x = 0`.
    Definiteness,
    /// `||lambda x|| = |lambda| ||x||`.
    Homogeneity,
    /// `||x + y|| <= ||x|| + ||y||`.
    Triangle,
    /// `||x + y|| <= max(||x||, ||y||)`, sup variants only.
    StrongTriangle,
    /// Equal coordinate valuations give equal norms.
    Absoluteness,
}

impl NormAxiom {
    pub fn name(self) -> &'static str {
        match self {
            NormAxiom::Definiteness => "definiteness",
            NormAxiom::Homogeneity => "homogeneity",
            NormAxiom::Triangle => "triangle",
            NormAxiom::StrongTriangle => "strong-triangle",
            NormAxiom::Absoluteness => "absoluteness",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormViolation {
    pub axiom: NormAxiom,
    pub x: Vector,
    pub y: Vector,
}

/// Vector pairs plus the scalars used for the homogeneity check.
#[derive(Debug, Clone, Default)]
pub struct NormSamples {
    pub pairs: Vec<(Vector, Vector)>,
    pub scalars: Vec<Scalar>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormReport {
    pub pairs_checked: usize,
    pub checks: usize,
    pub violations: Vec<NormViolation>,
}

impl NormReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A unit of `field` other than 1 where one exists, used to build vectors
/// with the same coordinate valuations.
fn nontrivial_unit(field: FieldSpec) -> Scalar {
    match field {
        FieldSpec::PAdic(p) => Scalar::from_i64(field, -(p.get() as i64) - 1),
        FieldSpec::Finite(q) if q.get() > 2 => Scalar::from_i64(field, 2),
        FieldSpec::Finite(_) => Scalar::one(field),
        FieldSpec::Trivial => Scalar::from_i64(field, -7),
    }
}

/// Evaluates the norm axioms on each sample pair and scalar multiple.
///
/// Absoluteness is checked on sample pairs whose coordinate valuations agree
/// and, for every sample vector, against a copy with each coordinate
/// multiplied by a unit.
pub fn check_norm_axioms(
    spec: &NormSpec,
    field: FieldSpec,
    samples: &NormSamples,
) -> Result<NormReport> {
    let mut report = NormReport::default();
    let unit = nontrivial_unit(field);
    for (x, y) in &samples.pairs {
        field.check_same(x.field())?;
        x.check_compatible(y)?;
        let nx = norm(x, spec)?;
        let ny = norm(y, spec)?;
        let nsum = norm(&x.try_add(y)?, spec)?;
        let mut fail = |axiom, a: &Vector, b: &Vector| {
            report.violations.push(NormViolation {
                axiom,
                x: a.clone(),
                y: b.clone(),
            })
        };

        if nx.is_zero() != x.is_zero() || ny.is_zero() != y.is_zero() {
            fail(NormAxiom::Definiteness, x, y);
        }
        for lambda in &samples.scalars {
            field.check_same(lambda.field())?;
            if norm(&x.scale(lambda)?, spec)? != &lambda.valuation() * &nx {
                fail(NormAxiom::Homogeneity, x, x);
            }
        }
        if nsum > &nx + &ny {
            fail(NormAxiom::Triangle, x, y);
        }
        if spec.is_ultrametric() && nsum > nx.clone().max(ny.clone()) {
            fail(NormAxiom::StrongTriangle, x, y);
        }

        let same_profile = x
            .coords()
            .iter()
            .zip(y.coords())
            .all(|(a, b)| a.valuation() == b.valuation());
        if same_profile && nx != ny {
            fail(NormAxiom::Absoluteness, x, y);
        }
        for (v, nv) in [(x, &nx), (y, &ny)] {
            let twisted = Vector::new(
                field,
                v.coords()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let c = if i % 2 == 0 { c.neg() } else { c.clone() };
                        unit.try_mul(&c)
                    })
                    .collect::<Result<Vec<_>>>()?,
            )?;
            if norm(&twisted, spec)? != *nv {
                fail(NormAxiom::Absoluteness, v, &twisted);
            }
        }

        report.checks += 6 + samples.scalars.len();
        report.pairs_checked += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
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
    fn one_and_sup_norms() {
        let x = v(p3(), "9,1/3");
        assert_eq!(norm(&x, &NormSpec::One).unwrap(), m("28/9"));
        assert_eq!(norm(&x, &NormSpec::Sup).unwrap(), m("3"));
        let w = NormSpec::weighted_sup(vec![m("100"), m("1/2")]).unwrap();
        // max(100/9, 3/2)
        assert_eq!(norm(&x, &w).unwrap(), m("100/9"));
    }

    #[test]
    fn zero_vector_has_zero_norm() {
        let w = NormSpec::weighted_sup(vec![m("2"), m("5")]).unwrap();
        for spec in [NormSpec::One, NormSpec::Sup, w] {
            assert!(norm(&Vector::zero(p3(), 2).unwrap(), &spec)
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn one_norm_is_hamming_weight_over_finite_fields() {
        let f2 = FieldSpec::gf(2).unwrap();
        assert_eq!(norm(&v(f2, "1,1"), &NormSpec::One).unwrap(), m("2"));
        let f3 = FieldSpec::gf(3).unwrap();
        assert_eq!(
            distance(&v(f3, "0,1,2"), &v(f3, "0,2,2"), &NormSpec::One).unwrap(),
            m("1")
        );
    }

    #[test]
    fn distances() {
        let x = v(p3(), "1,0");
        let y = v(p3(), "0,1");
        assert_eq!(distance(&x, &y, &NormSpec::One).unwrap(), m("2"));
        assert!(distance(&x, &x, &NormSpec::One).unwrap().is_zero());
    }

    #[test]
    fn mismatches_are_errors() {
        let x = v(p3(), "1,0");
        assert!(matches!(
            distance(&x, &v(p3(), "1,0,0"), &NormSpec::One),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            distance(&x, &v(FieldSpec::Trivial, "1,0"), &NormSpec::One),
            Err(Error::FieldMismatch { .. })
        ));
        let w = NormSpec::weighted_sup(vec![m("1")]).unwrap();
        assert!(norm(&x, &w).is_err());
        assert!(NormSpec::weighted_sup(vec![m("1"), m("0")]).is_err());
        assert!(Vector::parse(p3(), "").is_err());
    }

    #[test]
    fn one_norm_is_not_ultrametric() {
        let x = v(p3(), "1,0");
        let y = v(p3(), "0,1");
        let sum = norm(&x.try_add(&y).unwrap(), &NormSpec::One).unwrap();
        assert!(sum > norm(&x, &NormSpec::One).unwrap());
        assert!(sum > norm(&y, &NormSpec::One).unwrap());
    }

    #[test]
    fn axiom_report() {
        let f = p3();
        let samples = NormSamples {
            pairs: vec![
                (v(f, "9,1/3"), v(f, "1,2")),
                (v(f, "0,0"), v(f, "-9,1/3")),
                (v(f, "1,0"), v(f, "0,1")),
            ],
            scalars: vec![Scalar::zero(f), Scalar::from_i64(f, 3)],
        };
        for spec in [NormSpec::One, NormSpec::Sup] {
            let r = check_norm_axioms(&spec, f, &samples).unwrap();
            assert!(r.holds(), "{spec:?}: {:?}", r.violations);
            assert_eq!(r.pairs_checked, 3);
        }
    }
}
