//! Random scalars, vectors and isometries for property checks.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::field::{FieldSpec, Scalar};
use crate::isometry::{AxialIsometry, ScalarIsometry};
use crate::norm::Vector;

/// Integers drawn for numerators and denominators lie in `[-BOUND, BOUND]`.
const BOUND: i64 = 30;
/// p-adic scalars are additionally scaled by `p^e`, `|e| <= MAX_SHIFT`.
const MAX_SHIFT: i64 = 3;

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn random_scalar<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> Scalar {
    match field {
        FieldSpec::Finite(q) => Scalar::from_i64(field, rng.gen_range(0..q.get()) as i64),
        FieldSpec::PAdic(p) => {
            let base = ratio(rng.gen_range(-BOUND..=BOUND), rng.gen_range(1..=BOUND));
            let e = rng.gen_range(-MAX_SHIFT..=MAX_SHIFT);
            let scale = BigRational::from_integer(BigInt::from(p.get())).pow(e as i32);
            Scalar::from_ratio(field, base * scale).expect("rational field")
        }
        FieldSpec::Trivial => {
            let r = ratio(rng.gen_range(-BOUND..=BOUND), rng.gen_range(1..=BOUND));
            Scalar::from_ratio(field, r).expect("rational field")
        }
    }
}

pub fn random_nonzero_scalar<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> Scalar {
    loop {
        let s = random_scalar(field, rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A scalar of valuation 1.
pub fn random_unit<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> Scalar {
    match field {
        FieldSpec::PAdic(p) => {
            let p = p.get() as i64;
            let mut draw = || loop {
                let k = rng.gen_range(1..=BOUND);
                if k % p != 0 {
                    return k;
                }
            };
            let (num, den) = (draw(), draw());
            let sign = if rng.gen_bool(0.5) { -1 } else { 1 };
            Scalar::from_ratio(field, ratio(sign * num, den)).expect("rational field")
        }
        _ => random_nonzero_scalar(field, rng),
    }
}

pub fn random_vector<R: Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R) -> Vector {
    Vector::new(field, (0..n).map(|_| random_scalar(field, rng)).collect())
        .expect("n >= 1 coordinates from one field")
}

/// A pair `(x, y)` differing in exactly `k` randomly chosen coordinates.
pub fn random_pair_differing_in<R: Rng + ?Sized>(
    field: FieldSpec,
    n: usize,
    k: usize,
    rng: &mut R,
) -> (Vector, Vector) {
    assert!(k <= n);
    let x = random_vector(field, n, rng);
    let mut positions: Vec<usize> = (0..n).collect();
    positions.shuffle(rng);
    let mut coords = x.coords().to_vec();
    for &i in &positions[..k] {
        let step = random_nonzero_scalar(field, rng);
        coords[i] = coords[i].try_add(&step).expect("same field");
    }
    let y = Vector::new(field, coords).expect("same shape");
    (x, y)
}

pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// A uniformly random table over finite fields, otherwise an affine map with
/// a random unit.
pub fn random_scalar_isometry<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> ScalarIsometry {
    match field.order() {
        Some(q) => {
            let images = random_permutation(q as usize, rng)
                .into_iter()
                .map(|r| r as u64)
                .collect();
            ScalarIsometry::table(field, images).expect("shuffled residues")
        }
        None => ScalarIsometry::affine(random_unit(field, rng), random_scalar(field, rng))
            .expect("unit multiplier"),
    }
}

pub fn random_axial_isometry<R: Rng + ?Sized>(
    field: FieldSpec,
    n: usize,
    rng: &mut R,
) -> AxialIsometry {
    let sigma = random_permutation(n, rng);
    let taus = (0..n).map(|_| random_scalar_isometry(field, rng)).collect();
    AxialIsometry::new(sigma, taus, random_vector(field, n, rng)).expect("consistent parts")
}
