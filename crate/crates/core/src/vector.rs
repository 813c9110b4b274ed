//! Dense exact vectors.

use std::fmt;
use std::ops::{Add, Deref, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vector(Vec<Scalar>);

impl Vector {
    pub fn new(entries: Vec<Scalar>) -> Self {
        Vector(entries)
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        Vector(entries.iter().map(|&n| scalar::int(n)).collect())
    }

    pub fn from_integers(entries: &[BigInt]) -> Self {
        Vector(entries.iter().cloned().map(Scalar::from_integer).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![Scalar::zero(); dim])
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = Scalar::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Inner product. Panics on length mismatch; use [`Vector::try_dot`] at API
    /// boundaries.
    pub fn dot(&self, other: &Vector) -> Scalar {
        assert_eq!(self.dim(), other.dim(), "dot of mismatched vectors");
        self.0
            .iter()
            .zip(&other.0)
            .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn try_dot(&self, other: &Vector) -> Result<Scalar> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self.dot(other))
    }

    pub fn scale(&self, factor: &Scalar) -> Vector {
        Vector(self.0.iter().map(|a| a * factor).collect())
    }

    /// Kronecker product, first factor major: `(i, j) -> i * other.dim() + j`.
    pub fn kron(&self, other: &Vector) -> Vector {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.0 {
            for b in &other.0 {
                out.push(a * b);
            }
        }
        Vector(out)
    }

    /// Multiply by the lcm of denominators and divide by the gcd of numerators,
    /// keeping the direction: the unique primitive integer vector on the ray.
    pub fn primitive_integers(&self) -> Vec<BigInt> {
        let lcm = self.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        primitive(ints)
    }

    /// Canonical representative of the ray through `self`: coprime integer
    /// entries, positive scaling only.
    pub fn canonical_ray(&self) -> Vector {
        Vector::from_integers(&self.primitive_integers())
    }

    /// Canonical representative of the line through `self`: coprime integers
    /// with the first nonzero entry positive.
    pub fn canonical_line(&self) -> Vector {
        let ray = self.canonical_ray();
        match ray.0.iter().find(|x| !x.is_zero()) {
            Some(first) if first.is_negative() => -ray,
            _ => ray,
        }
    }

    /// If `self = factor * other` for some scalar, returns the factor.
    pub fn ratio_to(&self, other: &Vector) -> Option<Scalar> {
        if self.dim() != other.dim() || other.is_zero() {
            return None;
        }
        let pivot = other.0.iter().position(|x| !x.is_zero())?;
        let factor = &self.0[pivot] / &other.0[pivot];
        (other.scale(&factor) == *self).then_some(factor)
    }

    /// Positive multiple test.
    pub fn is_positive_multiple_of(&self, other: &Vector) -> bool {
        self.ratio_to(other).is_some_and(|f| f.is_positive())
    }
}

pub(crate) fn primitive(mut ints: Vec<BigInt>) -> Vec<BigInt> {
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in &mut ints {
            *x /= &g;
        }
    }
    ints
}

impl Deref for Vector {
    type Target = [Scalar];
    fn deref(&self) -> &[Scalar] {
        &self.0
    }
}

impl From<Vec<Scalar>> for Vector {
    fn from(v: Vec<Scalar>) -> Self {
        Vector(v)
    }
}

impl FromIterator<Scalar> for Vector {
    fn from_iter<I: IntoIterator<Item = Scalar>>(iter: I) -> Self {
        Vector(iter.into_iter().collect())
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim());
        self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect()
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim());
        self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect()
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.0.into_iter().map(|a| -a).collect()
    }
}

/// Sum of `coeff * vector` terms. Panics on an empty list.
pub fn combination<'a, I>(terms: I) -> Vector
where
    I: IntoIterator<Item = (Scalar, &'a Vector)>,
{
    let mut acc: Option<Vector> = None;
    for (c, v) in terms {
        let term = v.scale(&c);
        acc = Some(match acc {
            None => term,
            Some(a) => &a + &term,
        });
    }
    acc.expect("empty linear combination")
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", scalar::display(x))?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.0.iter().map(scalar::format).collect();
        strings.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|t| scalar::parse(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Canonical order for vertex and ray lists: lexicographic on coordinates.
pub fn sort_canonical(vectors: &mut Vec<Vector>) {
    vectors.sort();
    vectors.dedup();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, half};

    #[test]
    fn kron_is_first_factor_major() {
        let a = Vector::from_ints(&[1, 0, 1]);
        let b = Vector::from_ints(&[0, 1, 1]);
        assert_eq!(a.kron(&b), Vector::from_ints(&[0, 1, 1, 0, 0, 0, 0, 1, 1]));
    }

    #[test]
    fn canonical_ray_keeps_direction() {
        let e1 = Vector::from_ints(&[-1, -1, 1]).scale(&half());
        assert_eq!(e1.canonical_ray(), Vector::from_ints(&[-1, -1, 1]));
        assert_eq!(e1.canonical_line(), Vector::from_ints(&[1, 1, -1]));
        let v = Vector::new(vec![frac(2, 3), frac(4, 9), scalar::int(0)]);
        assert_eq!(v.canonical_ray(), Vector::from_ints(&[3, 2, 0]));
    }

    #[test]
    fn ratio_detects_proportionality() {
        let a = Vector::from_ints(&[2, -4, 6]);
        let b = Vector::from_ints(&[1, -2, 3]);
        assert_eq!(a.ratio_to(&b), Some(scalar::int(2)));
        assert!(a.is_positive_multiple_of(&b));
        assert!(!(-a.clone()).is_positive_multiple_of(&b));
        assert_eq!(a.ratio_to(&Vector::from_ints(&[1, 2, 3])), None);
    }

    #[test]
    fn try_dot_reports_mismatch() {
        let a = Vector::from_ints(&[1, 2]);
        let b = Vector::from_ints(&[1, 2, 3]);
        assert!(matches!(
            a.try_dot(&b),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
    }
}
