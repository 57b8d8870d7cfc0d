//! Exact roots of unity and the cyclotomic integers they generate.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::Error;
use crate::int::Int;

/// A root of unity `exp(2 pi i num/den)`, stored as a reduced fraction of a
/// full turn in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Turn {
    num: u64,
    den: u64,
}

impl Turn {
    pub const ONE: Turn = Turn { num: 0, den: 1 };

    pub fn new(num: i64, den: u64) -> Turn {
        assert!(den > 0, "zero denominator");
        let d = den as i64;
        let n = num.rem_euclid(d) as u64;
        let g = n.gcd(&den);
        Turn { num: n / g, den: den / g }
    }

    /// Parses `"k/m"` (or an integer, meaning a whole number of turns).
    pub fn parse(s: &str) -> Result<Turn, Error> {
        let bad = || Error::Parse(alloc::format!("invalid angle fraction '{s}'"));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: u64 = d.trim().parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(Turn::new(n, d))
            }
            None => {
                let n: i64 = s.parse().map_err(|_| bad())?;
                Ok(Turn::new(n, 1))
            }
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn inv(&self) -> Turn {
        Turn::new(-(self.num as i64), self.den)
    }

    pub fn pow(&self, k: i64) -> Turn {
        let n = (self.num as i128 * k as i128).rem_euclid(self.den as i128) as i64;
        Turn::new(n, self.den)
    }

    /// Multiplicative order of the root of unity.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn to_complex(&self) -> Complex64 {
        match (self.num, self.den) {
            (0, _) => Complex64::new(1.0, 0.0),
            (1, 2) => Complex64::new(-1.0, 0.0),
            (1, 4) => Complex64::new(0.0, 1.0),
            (3, 4) => Complex64::new(0.0, -1.0),
            _ => {
                let a = 2.0 * core::f64::consts::PI * self.num as f64 / self.den as f64;
                Complex64::new(libm::cos(a), libm::sin(a))
            }
        }
    }
}

impl Mul for Turn {
    type Output = Turn;
    fn mul(self, rhs: Turn) -> Turn {
        let den = self.den.lcm(&rhs.den);
        let n = self.num * (den / self.den) + rhs.num * (den / rhs.den);
        Turn::new((n % den) as i64, den)
    }
}

impl fmt::Debug for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({}/{})", self.num, self.den)
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn poly_trim(p: &mut Vec<Int>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Exact division of integer polynomials (low-order coefficients first) by a
/// monic divisor.
fn poly_divexact_monic(num: &[Int], den: &[Int]) -> Vec<Int> {
    let mut rem: Vec<Int> = num.to_vec();
    let dn = den.len() - 1;
    if rem.len() <= dn {
        return vec![Int::ZERO];
    }
    let mut q = vec![Int::ZERO; rem.len() - dn];
    for k in (0..q.len()).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] = &rem[k + j] - &(&c * dj);
        }
        q[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    q
}

/// Coefficients of the m-th cyclotomic polynomial, low order first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<Int> {
    assert!(m >= 1);
    let mut p = vec![Int::ZERO; m as usize + 1];
    p[0] = Int::from(-1);
    p[m as usize] = Int::ONE;
    for d in 1..m {
        if m.is_multiple_of(d) {
            p = poly_divexact_monic(&p, &cyclotomic_polynomial(d));
        }
    }
    poly_trim(&mut p);
    p
}

/// The ring `Z[zeta_m]`, realised as `Z[x] / Phi_m(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicRing {
    m: u64,
    phi: Vec<Int>,
}

/// An element of a [`CyclotomicRing`] in the power basis `1, zeta, ..., zeta^(deg-1)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclo {
    m: u64,
    coeffs: Vec<Int>,
}

impl CyclotomicRing {
    pub fn new(m: u64) -> Self {
        CyclotomicRing { m, phi: cyclotomic_polynomial(m) }
    }

    /// Smallest ring containing every given root of unity.
    pub fn containing<'a>(turns: impl IntoIterator<Item = &'a Turn>) -> Self {
        let m = turns.into_iter().fold(1u64, |acc, t| acc.lcm(&t.den()));
        Self::new(m)
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    fn reduce(&self, mut p: Vec<Int>) -> Cyclo {
        let d = self.degree();
        for k in (d..p.len()).rev() {
            let c = p[k].clone();
            if c.is_zero() {
                continue;
            }
            for (j, pj) in self.phi.iter().enumerate() {
                p[k - d + j] = &p[k - d + j] - &(&c * pj);
            }
        }
        p.truncate(d.max(1));
        p.resize(d.max(1), Int::ZERO);
        Cyclo { m: self.m, coeffs: p }
    }

    pub fn zero(&self) -> Cyclo {
        self.reduce(vec![Int::ZERO])
    }

    pub fn one(&self) -> Cyclo {
        self.reduce(vec![Int::ONE])
    }

    pub fn from_int(&self, n: impl Into<Int>) -> Cyclo {
        self.reduce(vec![n.into()])
    }

    pub fn from_turn(&self, t: &Turn) -> Cyclo {
        assert_eq!(self.m % t.den(), 0, "root of unity outside the ring");
        let e = (t.num() * (self.m / t.den())) as usize;
        let mut p = vec![Int::ZERO; e + 1];
        p[e] = Int::ONE;
        self.reduce(p)
    }

    pub fn add(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        Cyclo { m: self.m, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        Cyclo { m: self.m, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect() }
    }

    pub fn neg(&self, a: &Cyclo) -> Cyclo {
        Cyclo { m: self.m, coeffs: a.coeffs.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        let mut p = vec![Int::ZERO; a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                p[i + j] = &p[i + j] + &(x * y);
            }
        }
        self.reduce(p)
    }
}

impl Cyclo {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    /// Rational integer value, if the element lies in `Z`.
    pub fn as_integer(&self) -> Option<Int> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| self.coeffs[0].clone())
    }

    pub fn to_complex(&self) -> Complex64 {
        let z = Turn::new(1, self.m).to_complex();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        for c in &self.coeffs {
            acc += pw * c.to_f64();
            pw *= z;
        }
        acc
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[m={}]{:?}", self.m, self.coeffs)
    }
}

/// Cyclotomic integers support the usual operator sugar when both operands
/// come from the same ring.
macro_rules! cyclo_op {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a Cyclo> for &'a Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: &'a Cyclo) -> Cyclo {
                assert_eq!(self.m, rhs.m, "mixed cyclotomic rings");
                let ring = CyclotomicRing::new(self.m);
                $body(&ring, self, rhs)
            }
        }
    };
}

cyclo_op!(Add, add, |r: &CyclotomicRing, a, b| r.add(a, b));
cyclo_op!(Sub, sub, |r: &CyclotomicRing, a, b| r.sub(a, b));
cyclo_op!(Mul, mul, |r: &CyclotomicRing, a, b| r.mul(a, b));

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo { m: self.m, coeffs: self.coeffs.iter().map(|x| -x).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(3), ints(&[1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn turn_arithmetic_is_exact() {
        let a = Turn::new(1, 3);
        assert_eq!(a * a * a, Turn::ONE);
        assert_eq!(a.inv(), Turn::new(2, 3));
        assert_eq!(Turn::new(2, 4), Turn::new(1, 2));
        assert_eq!(Turn::parse("-1/4").unwrap(), Turn::new(3, 4));
        assert_eq!(Turn::new(1, 2).to_complex(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        let r = CyclotomicRing::new(6);
        let mut acc = r.zero();
        for k in 0..6 {
            acc = r.add(&acc, &r.from_turn(&Turn::new(k, 6)));
        }
        assert!(acc.is_zero());
        // (1 - zeta_3)(1 - zeta_3^2) = 3
        let w = r.from_turn(&Turn::new(1, 3));
        let w2 = r.from_turn(&Turn::new(2, 3));
        let p = r.mul(&r.sub(&r.one(), &w), &r.sub(&r.one(), &w2));
        assert_eq!(p.as_integer(), Some(Int::from(3)));
    }
}
