//! Determinant-one 2x2 matrices over the Gaussian integers, taken up to sign.

use core::cmp::Ordering;
use core::fmt;
use core::ops::Mul;

use num_complex::Complex64;

use crate::error::Error;
use crate::gauss::GaussInt;
use crate::int::Int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Classification {
    Identity,
    Hyperbolic,
    Parabolic,
    Elliptic,
}

/// A projective class `{g, -g}` in `PSL(2, Z[i])`.
///
/// The stored representative always has canonical sign: the first nonzero
/// entry in reading order `(a, b, c, d)` has positive real part, or zero real
/// part and positive imaginary part. Equality, hashing and ordering therefore
/// respect the projective identification.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    a: GaussInt,
    b: GaussInt,
    c: GaussInt,
    d: GaussInt,
    height: Int,
}

fn is_positive(x: &GaussInt) -> bool {
    let s = x.re.signum();
    s > 0 || (s == 0 && x.im.signum() > 0)
}

impl GroupElement {
    /// Builds an element, checking `ad - bc = 1`. The sign is normalised.
    pub fn new(a: GaussInt, b: GaussInt, c: GaussInt, d: GaussInt) -> Result<Self, Error> {
        let det = &(&a * &d) - &(&b * &c);
        if !det.is_one() {
            // a determinant of -1 cannot be fixed by a sign flip
            return Err(Error::NotInAmbient);
        }
        Ok(Self::from_entries_unchecked(a, b, c, d))
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self, Error> {
        Self::new(GaussInt::from_int(a), GaussInt::from_int(b), GaussInt::from_int(c), GaussInt::from_int(d))
    }

    /// Builds an element whose determinant is known to be one.
    pub(crate) fn from_entries_unchecked(a: GaussInt, b: GaussInt, c: GaussInt, d: GaussInt) -> Self {
        debug_assert!((&(&a * &d) - &(&b * &c)).is_one());
        let first = [&a, &b, &c, &d].into_iter().find(|x| !x.is_zero()).cloned();
        let flip = first.map(|x| !is_positive(&x)).unwrap_or(false);
        let height = [&a, &b, &c, &d].iter().map(|x| x.norm()).max().expect("four entries");
        if flip {
            GroupElement { a: -&a, b: -&b, c: -&c, d: -&d, height }
        } else {
            GroupElement { a, b, c, d, height }
        }
    }

    pub fn identity() -> Self {
        Self::from_entries_unchecked(GaussInt::one(), GaussInt::zero(), GaussInt::zero(), GaussInt::one())
    }

    /// `[[1, x], [0, 1]]`
    pub fn translation(x: GaussInt) -> Self {
        Self::from_entries_unchecked(GaussInt::one(), x, GaussInt::zero(), GaussInt::one())
    }

    /// `[[0, -1], [1, 0]]`
    pub fn inversion() -> Self {
        Self::from_entries_unchecked(GaussInt::zero(), GaussInt::from_int(-1), GaussInt::one(), GaussInt::zero())
    }

    /// `[[i, 0], [0, -i]]`
    pub fn rotation_i() -> Self {
        Self::from_entries_unchecked(GaussInt::i(), GaussInt::zero(), GaussInt::zero(), GaussInt::new(0, -1))
    }

    pub fn a(&self) -> &GaussInt {
        &self.a
    }
    pub fn b(&self) -> &GaussInt {
        &self.b
    }
    pub fn c(&self) -> &GaussInt {
        &self.c
    }
    pub fn d(&self) -> &GaussInt {
        &self.d
    }

    pub fn entries(&self) -> [&GaussInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Trace of the canonical representative (defined up to sign projectively).
    pub fn trace(&self) -> GaussInt {
        &self.a + &self.d
    }

    /// Trace normalised up to sign, a conjugacy invariant of the projective class.
    pub fn trace_key(&self) -> GaussInt {
        let t = self.trace();
        if is_positive(&t) || t.is_zero() {
            t
        } else {
            -&t
        }
    }

    pub fn negated_entries(&self) -> [GaussInt; 4] {
        [-&self.a, -&self.b, -&self.c, -&self.d]
    }

    pub fn inverse(&self) -> Self {
        Self::from_entries_unchecked(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    /// `self * other * self^-1`
    pub fn conjugate(&self, other: &GroupElement) -> GroupElement {
        &(self * other) * &self.inverse()
    }

    pub fn pow(&self, k: i64) -> GroupElement {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut result = GroupElement::identity();
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        result
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    /// Every entry lies in `Z`.
    pub fn is_real(&self) -> bool {
        self.entries().iter().all(|x| x.is_real())
    }

    /// Largest entry norm `max |e|^2`.
    pub fn height(&self) -> &Int {
        &self.height
    }

    /// Squared Frobenius norm `|a|^2 + |b|^2 + |c|^2 + |d|^2`.
    pub fn frobenius_sq(&self) -> Int {
        self.entries().iter().fold(Int::ZERO, |acc, x| &acc + &x.norm())
    }

    pub fn classify(&self) -> Classification {
        if self.is_identity() {
            return Classification::Identity;
        }
        let t = self.trace();
        if t.is_real() {
            let tr = t.re.abs();
            match tr.cmp(&Int::from(2)) {
                Ordering::Equal => return Classification::Parabolic,
                Ordering::Less => return Classification::Elliptic,
                Ordering::Greater => {}
            }
        }
        Classification::Hyperbolic
    }

    pub fn to_complex(&self) -> [[Complex64; 2]; 2] {
        [[self.a.to_complex(), self.b.to_complex()], [self.c.to_complex(), self.d.to_complex()]]
    }

    pub fn entries_owned(&self) -> [GaussInt; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }
}

fn mul_raw(x: [GaussInt; 4], y: [GaussInt; 4]) -> [GaussInt; 4] {
    let [a, b, c, d] = x;
    let [e, f, g, h] = y;
    [
        &(&a * &e) + &(&b * &g),
        &(&a * &f) + &(&b * &h),
        &(&c * &e) + &(&d * &g),
        &(&c * &f) + &(&d * &h),
    ]
}

impl<'a> Mul<&'a GroupElement> for &'a GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: &'a GroupElement) -> GroupElement {
        let [a, b, c, d] = mul_raw(self.entries_owned(), rhs.entries_owned());
        GroupElement::from_entries_unchecked(a, b, c, d)
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: GroupElement) -> GroupElement {
        &self * &rhs
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical element order: by height, then entries in reading order.
impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.height
            .cmp(&other.height)
            .then_with(|| self.a.cmp(&other.a))
            .then_with(|| self.b.cmp(&other.b))
            .then_with(|| self.c.cmp(&other.c))
            .then_with(|| self.d.cmp(&other.d))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64, c: i64, d: i64) -> GroupElement {
        GroupElement::from_ints(a, b, c, d).unwrap()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(g(1, 1, 0, 1).classify(), Classification::Parabolic);
        assert_eq!(g(2, 1, 1, 1).classify(), Classification::Hyperbolic);
        assert_eq!(g(0, -1, 1, 0).classify(), Classification::Elliptic);
        assert_eq!(g(-1, 0, 0, -1).classify(), Classification::Identity);
        let lox = GroupElement::new(GaussInt::new(1, 1), GaussInt::i(), GaussInt::one(), GaussInt::one()).unwrap();
        assert_eq!(lox.classify(), Classification::Hyperbolic);
    }

    #[test]
    fn projective_equality() {
        assert_eq!(g(2, 1, 1, 1), g(-2, -1, -1, -1));
        assert_eq!(g(0, -1, 1, 0), g(0, 1, -1, 0));
        assert!(GroupElement::from_ints(1, 0, 0, -1).is_err());
    }

    #[test]
    fn inverse_and_powers() {
        let x = g(2, 1, 1, 1);
        assert!((&x * &x.inverse()).is_identity());
        assert_eq!(x.pow(3), &(&x * &x) * &x);
        assert_eq!(x.pow(-2), x.inverse().pow(2));
        assert!(GroupElement::inversion().pow(2).is_identity());
    }
}
