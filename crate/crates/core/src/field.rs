//! Valued fields, their elements, and exact valuations.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A prime number, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(n: u64) -> Result<Self> {
        if is_prime(n) {
            Ok(Prime(n))
        } else {
            Err(Error::NotPrime(n))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// The ambient field together with its valuation.
///
/// Every supported valuation is ultrametric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldSpec {
    /// The rationals with `|p| = 1/p`.
    PAdic(Prime),
    /// The prime field `GF(q)` with the trivial valuation.
    Finite(Prime),
    /// The rationals with the trivial valuation.
    Trivial,
}

impl FieldSpec {
    pub fn padic(p: u64) -> Result<Self> {
        Prime::new(p).map(FieldSpec::PAdic)
    }

    pub fn gf(q: u64) -> Result<Self> {
        Prime::new(q).map(FieldSpec::Finite)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, FieldSpec::Finite(_))
    }

    /// Number of elements, for finite fields.
    pub fn order(self) -> Option<u64> {
        match self {
            FieldSpec::Finite(q) => Some(q.get()),
            _ => None,
        }
    }

    /// All elements in residue order, for finite fields.
    pub fn elements(self) -> Option<impl Iterator<Item = Scalar>> {
        let q = self.order()?;
        Some((0..q).map(move |r| Scalar {
            field: self,
            value: Value::Residue(r),
        }))
    }

    pub fn check_same(self, other: FieldSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self,
                right: other,
            })
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::PAdic(p) => write!(f, "padic:{}", p.get()),
            FieldSpec::Finite(q) => write!(f, "gf:{}", q.get()),
            FieldSpec::Trivial => f.write_str("trivial:q"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |reason| Error::Parse {
            token: s.to_string(),
            reason,
        };
        let (kind, arg) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| parse_err("expected padic:p, gf:q or trivial:q"))?;
        match kind {
            "trivial" if arg == "q" => Ok(FieldSpec::Trivial),
            "padic" | "gf" => {
                let n: u64 = arg.parse().map_err(|_| parse_err("invalid prime"))?;
                if kind == "padic" {
                    FieldSpec::padic(n)
                } else {
                    FieldSpec::gf(n)
                }
            }
            _ => Err(parse_err("expected padic:p, gf:q or trivial:q")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Value {
    Rational(BigRational),
    Residue(u64),
}

/// An element of the field named by its [`FieldSpec`].
///
/// Rationals are kept in lowest terms with a positive denominator and
/// residues are reduced, so structural equality is field equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    field: FieldSpec,
    value: Value,
}

fn reduce_mod(n: &BigInt, q: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(q));
    u64::try_from(r).expect("residue fits in u64")
}

fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn zero(field: FieldSpec) -> Self {
        Self::from_i64(field, 0)
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::from_i64(field, 1)
    }

    pub fn from_i64(field: FieldSpec, n: i64) -> Self {
        Self::from_bigint(field, BigInt::from(n))
    }

    pub fn from_bigint(field: FieldSpec, n: BigInt) -> Self {
        let value = match field {
            FieldSpec::Finite(q) => Value::Residue(reduce_mod(&n, q.get())),
            _ => Value::Rational(BigRational::from_integer(n)),
        };
        Scalar { field, value }
    }

    /// Embeds a rational. Over `GF(q)` this is `num * den^-1`, which fails
    /// when `q` divides the denominator.
    pub fn from_ratio(field: FieldSpec, r: BigRational) -> Result<Self> {
        match field {
            FieldSpec::Finite(_) => {
                let num = Scalar::from_bigint(field, r.numer().clone());
                let den = Scalar::from_bigint(field, r.denom().clone());
                num.try_mul(&den.inv()?)
            }
            _ => Ok(Scalar {
                field,
                value: Value::Rational(r),
            }),
        }
    }

    /// Parses `num`, `num/den` (rational fields) or a decimal residue.
    pub fn parse(field: FieldSpec, token: &str) -> Result<Self> {
        let t = token.trim();
        let parse_err = |reason| Error::Parse {
            token: token.to_string(),
            reason,
        };
        let int = |s: &str| -> Result<BigInt> {
            let s = s.strip_prefix('+').unwrap_or(s);
            s.parse::<BigInt>()
                .map_err(|_| parse_err("invalid integer"))
        };
        match field {
            FieldSpec::Finite(_) => {
                if t.contains('/') {
                    return Err(parse_err("finite-field scalars are integer residues"));
                }
                Ok(Scalar::from_bigint(field, int(t)?))
            }
            _ => {
                let r = match t.split_once('/') {
                    Some((n, d)) => {
                        let d = int(d)?;
                        if d.is_zero() {
                            return Err(parse_err("zero denominator"));
                        }
                        BigRational::new(int(n)?, d)
                    }
                    None => BigRational::from_integer(int(t)?),
                };
                Scalar::from_ratio(field, r)
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rational(r) => r.is_zero(),
            Value::Residue(r) => *r == 0,
        }
    }

    pub fn as_ratio(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(r) => Some(r),
            Value::Residue(_) => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match self.value {
            Value::Residue(r) => Some(r),
            Value::Rational(_) => None,
        }
    }

    fn combine(
        &self,
        other: &Scalar,
        rat: impl FnOnce(&BigRational, &BigRational) -> BigRational,
        res: impl FnOnce(u64, u64, u64) -> u64,
    ) -> Result<Scalar> {
        self.field.check_same(other.field)?;
        let value = match (&self.value, &other.value, self.field) {
            (Value::Rational(a), Value::Rational(b), _) => Value::Rational(rat(a, b)),
            (Value::Residue(a), Value::Residue(b), FieldSpec::Finite(q)) => {
                Value::Residue(res(*a, *b, q.get()))
            }
            _ => unreachable!("value kind follows the field"),
        };
        Ok(Scalar {
            field: self.field,
            value,
        })
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.combine(
            other,
            |a, b| a + b,
            |a, b, q| ((a as u128 + b as u128) % q as u128) as u64,
        )
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.combine(other, |a, b| a * b, mul_mod)
    }

    pub fn neg(&self) -> Scalar {
        let value = match (&self.value, self.field) {
            (Value::Rational(r), _) => Value::Rational(-r),
            (Value::Residue(r), FieldSpec::Finite(q)) => {
                Value::Residue(if *r == 0 { 0 } else { q.get() - r })
            }
            _ => unreachable!("value kind follows the field"),
        };
        Scalar {
            field: self.field,
            value,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let value = match (&self.value, self.field) {
            (Value::Rational(r), _) => Value::Rational(r.recip()),
            // Fermat: a^(q-2) = a^-1.
            (Value::Residue(r), FieldSpec::Finite(q)) => {
                Value::Residue(pow_mod(*r, q.get() - 2, q.get()))
            }
            _ => unreachable!("value kind follows the field"),
        };
        Ok(Scalar {
            field: self.field,
            value,
        })
    }

    /// `|self|` under the field's valuation.
    pub fn valuation(&self) -> Magnitude {
        if self.is_zero() {
            return Magnitude::zero();
        }
        match (&self.value, self.field) {
            (Value::Rational(r), FieldSpec::PAdic(p)) => {
                let v = multiplicity(r.numer(), p.get()) - multiplicity(r.denom(), p.get());
                Magnitude::power(p.get(), -v)
            }
            _ => Magnitude::one(),
        }
    }
}

/// Number of times `p` divides `n` (nonzero), by repeated exact division.
fn multiplicity(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

fn write_ratio(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rational(r) => write_ratio(f, r),
            Value::Residue(r) => write!(f, "{r}"),
        }
    }
}

/// An exact nonnegative rational: a valuation or a norm value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Magnitude(BigRational);

impl Magnitude {
    pub fn zero() -> Self {
        Magnitude(BigRational::zero())
    }

    pub fn one() -> Self {
        Magnitude(BigRational::one())
    }

    pub fn from_integer(n: u64) -> Self {
        Magnitude(BigRational::from_integer(BigInt::from(n)))
    }

    /// `base^exp` for any integer exponent.
    pub fn power(base: u64, exp: i64) -> Self {
        let b = BigInt::from(base).pow(exp.unsigned_abs() as u32);
        let r = if exp >= 0 {
            BigRational::from_integer(b)
        } else {
            BigRational::new(BigInt::one(), b)
        };
        Magnitude(r)
    }

    /// `None` for negative input.
    pub fn from_ratio(r: BigRational) -> Option<Self> {
        if r.is_negative() {
            None
        } else {
            Some(Magnitude(r))
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        let s = Scalar::parse(FieldSpec::Trivial, token)?;
        let r = s.as_ratio().cloned().expect("rational field");
        Magnitude::from_ratio(r).ok_or_else(|| Error::Parse {
            token: token.to_string(),
            reason: "magnitudes are nonnegative",
        })
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn max(self, other: Magnitude) -> Magnitude {
        core::cmp::max(self, other)
    }

    /// Decimal rendering for display; never used in comparisons.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = (self.0.numer() * &scale).div_floor(self.0.denom());
        let (int, frac) = scaled.div_rem(&scale);
        if digits == 0 {
            return int.to_string();
        }
        let mut frac = frac.to_string();
        while frac.len() < digits {
            frac.insert(0, '0');
        }
        let mut out = alloc::format!("{int}.{frac}");
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
        out
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ratio(f, &self.0)
    }
}

impl Add for Magnitude {
    type Output = Magnitude;
    fn add(self, rhs: Magnitude) -> Magnitude {
        Magnitude(self.0 + rhs.0)
    }
}

impl Add<&Magnitude> for &Magnitude {
    type Output = Magnitude;
    fn add(self, rhs: &Magnitude) -> Magnitude {
        Magnitude(&self.0 + &rhs.0)
    }
}

impl Mul<&Magnitude> for &Magnitude {
    type Output = Magnitude;
    fn mul(self, rhs: &Magnitude) -> Magnitude {
        Magnitude(&self.0 * &rhs.0)
    }
}

impl core::iter::Sum for Magnitude {
    fn sum<I: Iterator<Item = Magnitude>>(iter: I) -> Magnitude {
        iter.fold(Magnitude::zero(), |a, b| a + b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValuationAxiom {
    /// `|a| = 0` iff `a = 0`.
    Definiteness,
    /// `|ab| = |a||b|`.
    Multiplicativity,
    /// `|a + b| <= |a| + |b|`.
    Triangle,
    /// `|a + b| <= max(|a|, |b|)`.
    Ultrametric,
    /// `|a + b| = max(|a|, |b|)` when `|a| != |b|`.
    Isosceles,
}

impl ValuationAxiom {
    pub fn name(self) -> &'static str {
        match self {
            ValuationAxiom::Definiteness => "definiteness",
            ValuationAxiom::Multiplicativity => "multiplicativity",
            ValuationAxiom::Triangle => "triangle",
            ValuationAxiom::Ultrametric => "ultrametric",
            ValuationAxiom::Isosceles => "isosceles",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationViolation {
    pub axiom: ValuationAxiom,
    pub left: Scalar,
    pub right: Scalar,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValuationReport {
    pub pairs_checked: usize,
    /// Exact checks evaluated, over all axioms.
    pub checks: usize,
    pub violations: Vec<ValuationViolation>,
}

impl ValuationReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates the valuation axioms on every sample pair.
///
/// Fails only if a sample does not belong to `spec`.
pub fn check_valuation_axioms(
    spec: FieldSpec,
    samples: &[(Scalar, Scalar)],
) -> Result<ValuationReport> {
    let mut report = ValuationReport::default();
    for (a, b) in samples {
        spec.check_same(a.field())?;
        spec.check_same(b.field())?;
        let va = a.valuation();
        let vb = b.valuation();
        let vsum = a.try_add(b)?.valuation();
        let vprod = a.try_mul(b)?.valuation();
        let mut fail = |axiom| {
            report.violations.push(ValuationViolation {
                axiom,
                left: a.clone(),
                right: b.clone(),
            })
        };
        if va.is_zero() != a.is_zero() || vb.is_zero() != b.is_zero() {
            fail(ValuationAxiom::Definiteness);
        }
        if vprod != &va * &vb {
            fail(ValuationAxiom::Multiplicativity);
        }
        if vsum > &va + &vb {
            fail(ValuationAxiom::Triangle);
        }
        let vmax = va.clone().max(vb.clone());
        if vsum > vmax {
            fail(ValuationAxiom::Ultrametric);
        }
        if va != vb && vsum != vmax {
            fail(ValuationAxiom::Isosceles);
        }
        report.checks += 5;
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

    fn s(field: FieldSpec, t: &str) -> Scalar {
        Scalar::parse(field, t).unwrap()
    }

    fn m(t: &str) -> Magnitude {
        Magnitude::parse(t).unwrap()
    }

    #[test]
    fn primes() {
        let found: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(found, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(1_000_000_007));
        assert_eq!(FieldSpec::gf(4), Err(Error::NotPrime(4)));
        assert_eq!(FieldSpec::padic(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn field_spec_text_form() {
        for t in ["padic:3", "gf:5", "trivial:q"] {
            assert_eq!(t.parse::<FieldSpec>().unwrap().to_string(), t);
        }
        assert!("padic:4".parse::<FieldSpec>().is_err());
        assert!("real".parse::<FieldSpec>().is_err());
        assert!("trivial:3".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn addition() {
        let f = p3();
        assert_eq!(s(f, "1/3").try_add(&s(f, "2/3")).unwrap(), s(f, "1"));
        let g = FieldSpec::gf(3).unwrap();
        assert_eq!(s(g, "2").try_add(&s(g, "2")).unwrap(), s(g, "1"));
        let x = s(f, "-17/12");
        assert_eq!(x.try_add(&Scalar::zero(f)).unwrap(), x);
    }

    #[test]
    fn addition_rejects_mixed_fields() {
        let err = s(p3(), "1")
            .try_add(&s(FieldSpec::Trivial, "1"))
            .unwrap_err();
        assert!(matches!(err, Error::FieldMismatch { .. }));
    }

    #[test]
    fn inverses() {
        assert_eq!(s(p3(), "3").inv().unwrap(), s(p3(), "1/3"));
        let g5 = FieldSpec::gf(5).unwrap();
        assert_eq!(s(g5, "2").inv().unwrap(), s(g5, "3"));
        assert_eq!(Scalar::zero(p3()).inv(), Err(Error::ZeroInverse));
        assert_eq!(Scalar::zero(g5).inv(), Err(Error::ZeroInverse));
    }

    #[test]
    fn lowest_terms_and_reduction() {
        assert_eq!(s(p3(), "2/6"), s(p3(), "1/3"));
        assert_eq!(s(p3(), "3/-9"), s(p3(), "-1/3"));
        let g7 = FieldSpec::gf(7).unwrap();
        assert_eq!(s(g7, "-1"), s(g7, "6"));
        assert_eq!(s(g7, "15").residue(), Some(1));
        assert!(Scalar::parse(g7, "1/2").is_err());
        assert!(Scalar::parse(p3(), "1/0").is_err());
        assert!(Scalar::parse(p3(), "x").is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(s(p3(), "9").valuation(), m("1/9"));
        assert_eq!(s(p3(), "1/3").valuation(), m("3"));
        assert_eq!(s(p3(), "10/3").valuation(), m("3"));
        assert_eq!(s(p3(), "2/6").valuation(), s(p3(), "1/3").valuation());
        assert_eq!(s(p3(), "-54/5").valuation(), m("1/27"));
        let g7 = FieldSpec::gf(7).unwrap();
        assert_eq!(s(g7, "5").valuation(), Magnitude::one());
        assert_eq!(s(FieldSpec::Trivial, "1/3").valuation(), Magnitude::one());
        for f in [p3(), g7, FieldSpec::Trivial] {
            assert_eq!(Scalar::zero(f).valuation(), Magnitude::zero());
        }
    }

    #[test]
    fn axiom_report_on_fixed_pairs() {
        let f = p3();
        let pairs = vec![(s(f, "3"), s(f, "1/3")), (s(f, "9"), s(f, "9"))];
        let report = check_valuation_axioms(f, &pairs).unwrap();
        assert!(report.holds());
        assert_eq!(report.pairs_checked, 2);
        // |3 + 1/3| = |10/3| = 3 = max(1/3, 3)
        assert_eq!(s(f, "3").try_add(&s(f, "1/3")).unwrap().valuation(), m("3"));

        let t = FieldSpec::Trivial;
        let pairs = vec![(s(t, "4"), s(t, "-4")), (s(t, "7/2"), s(t, "5"))];
        assert!(check_valuation_axioms(t, &pairs).unwrap().holds());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(m("28/9").to_decimal(6), "3.111111");
        assert_eq!(m("3").to_decimal(6), "3");
        assert_eq!(m("1/8").to_decimal(6), "0.125");
        assert_eq!(m("0").to_decimal(3), "0");
    }
}
