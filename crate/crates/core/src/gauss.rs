//! Gaussian integers and residue arithmetic modulo a principal ideal.
//!
//! Rational integers are embedded as Gaussian integers with zero imaginary
//! part; the ambient group descriptor decides which ring is in force.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::Error;
use crate::int::Int;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GaussInt {
    pub re: Int,
    pub im: Int,
}

impl GaussInt {
    pub fn new(re: impl Into<Int>, im: impl Into<Int>) -> Self {
        GaussInt { re: re.into(), im: im.into() }
    }

    pub fn from_int(re: impl Into<Int>) -> Self {
        GaussInt { re: re.into(), im: Int::ZERO }
    }

    pub fn zero() -> Self {
        GaussInt::new(0, 0)
    }

    pub fn one() -> Self {
        GaussInt::new(1, 0)
    }

    pub fn i() -> Self {
        GaussInt::new(0, 1)
    }

    /// The four units 1, i, -1, -i.
    pub fn units() -> [GaussInt; 4] {
        [GaussInt::new(1, 0), GaussInt::new(0, 1), GaussInt::new(-1, 0), GaussInt::new(0, -1)]
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn conj(&self) -> GaussInt {
        GaussInt { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm(&self) -> Int {
        &self.re.square() + &self.im.square()
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Multiplicative inverse when `self` is a unit.
    pub fn unit_inverse(&self) -> Option<GaussInt> {
        self.is_unit().then(|| self.conj())
    }

    /// Euclidean division with the quotient rounded to the nearest lattice point,
    /// so that `norm(remainder) <= norm(divisor) / 2`.
    pub fn div_rem_round(&self, d: &GaussInt) -> (GaussInt, GaussInt) {
        let n = d.norm();
        assert!(!n.is_zero(), "division by zero");
        let num = self * &d.conj();
        let two_n = &n + &n;
        let round = |x: &Int| (&(x + x) + &n).div_mod_floor(&two_n).0;
        let q = GaussInt { re: round(&num.re), im: round(&num.im) };
        let r = self - &(&q * d);
        (q, r)
    }

    /// Exact quotient when `d` divides `self`.
    pub fn div_exact(&self, d: &GaussInt) -> Option<GaussInt> {
        let n = d.norm();
        if n.is_zero() {
            return None;
        }
        let num = self * &d.conj();
        Some(GaussInt { re: num.re.div_exact(&n)?, im: num.im.div_exact(&n)? })
    }

    pub fn divides(&self, x: &GaussInt) -> bool {
        x.div_exact(self).is_some()
    }

    /// Extended Euclid: returns `(g, u, v)` with `u*self + v*other = g`.
    pub fn xgcd(&self, other: &GaussInt) -> (GaussInt, GaussInt, GaussInt) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (GaussInt::one(), GaussInt::zero());
        let (mut t0, mut t1) = (GaussInt::zero(), GaussInt::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem_round(&r1);
            r0 = core::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = core::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = core::mem::replace(&mut t1, t);
        }
        (r0, s0, t0)
    }

    pub fn coprime(&self, other: &GaussInt) -> bool {
        self.xgcd(other).0.is_unit()
    }

    /// Multiplies by the unit that puts the value in the closed first quadrant
    /// `re > 0, im >= 0` (zero stays zero).
    pub fn unit_normalized(&self) -> (GaussInt, GaussInt) {
        for u in GaussInt::units() {
            let x = self * &u;
            if x.re.signum() > 0 && x.im.signum() >= 0 {
                return (x, u);
            }
        }
        (self.clone(), GaussInt::one())
    }

    /// Parses literals such as `2`, `-3`, `i`, `1+i`, `2-i`, `-2+3i`, `3i`.
    pub fn parse(s: &str) -> Result<GaussInt, Error> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(alloc::format!("invalid Gaussian integer literal '{s}'"));
        if t.is_empty() {
            return Err(bad());
        }
        let bytes = t.as_bytes();
        let mut split = None;
        for (k, &b) in bytes.iter().enumerate().skip(1) {
            if b == b'+' || b == b'-' {
                split = Some(k);
            }
        }
        let (re_part, im_part) = match (t.ends_with('i'), split) {
            (true, Some(k)) => (&t[..k], &t[k..]),
            (true, None) => ("", t.as_str()),
            (false, None) => (t.as_str(), ""),
            (false, Some(_)) => return Err(bad()),
        };
        let re = if re_part.is_empty() { 0 } else { re_part.parse::<i64>().map_err(|_| bad())? };
        let im = if im_part.is_empty() {
            0
        } else {
            let body = &im_part[..im_part.len() - 1];
            match body {
                "" | "+" => 1,
                "-" => -1,
                _ => body.parse::<i64>().map_err(|_| bad())?,
            }
        };
        Ok(GaussInt::new(re, im))
    }

    /// All elements with `norm <= bound`, ordered by (norm, re, im).
    pub fn ball(bound: &Int, real_only: bool) -> Vec<GaussInt> {
        let r = isqrt(bound);
        let mut out = Vec::new();
        let mut x = -&r;
        while x <= r {
            if real_only {
                out.push(GaussInt::from_int(x.clone()));
            } else {
                let mut y = -&r;
                while y <= r {
                    let z = GaussInt { re: x.clone(), im: y.clone() };
                    if z.norm() <= *bound {
                        out.push(z);
                    }
                    y = &y + &Int::ONE;
                }
            }
            x = &x + &Int::ONE;
        }
        out.sort_by(|a, b| a.norm().cmp(&b.norm()).then_with(|| a.cmp(b)));
        out
    }
}

/// Integer square root (floor) of a non-negative integer.
pub fn isqrt(n: &Int) -> Int {
    assert!(n.signum() >= 0);
    let approx = libm::sqrt(n.to_f64()) as i64;
    let mut r = Int::from(approx.max(0));
    while &r * &r > *n {
        r = &r - &Int::ONE;
    }
    loop {
        let next = &r + &Int::ONE;
        if &next * &next <= *n {
            r = next;
        } else {
            break;
        }
    }
    r
}

impl fmt::Debug for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if !self.re.is_zero() {
            write!(f, "{}", self.re)?;
            if self.im.signum() > 0 {
                f.write_str("+")?;
            }
        }
        match self.im.to_i64() {
            Some(1) => f.write_str("i"),
            Some(-1) => f.write_str("-i"),
            _ => write!(f, "{}i", self.im),
        }
    }
}

impl<'a> Add<&'a GaussInt> for &'a GaussInt {
    type Output = GaussInt;
    fn add(self, rhs: &'a GaussInt) -> GaussInt {
        GaussInt { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a GaussInt> for &'a GaussInt {
    type Output = GaussInt;
    fn sub(self, rhs: &'a GaussInt) -> GaussInt {
        GaussInt { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a GaussInt> for &'a GaussInt {
    type Output = GaussInt;
    fn mul(self, rhs: &'a GaussInt) -> GaussInt {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussInt { re: &self.re * &rhs.re, im: Int::ZERO };
        }
        GaussInt {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Neg for &GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt { re: -&self.re, im: -&self.im }
    }
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, rhs: GaussInt) -> GaussInt {
        &self + &rhs
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, rhs: GaussInt) -> GaussInt {
        &self - &rhs
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, rhs: GaussInt) -> GaussInt {
        &self * &rhs
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        -&self
    }
}

/// Canonical residues modulo the ideal `(q)`.
///
/// The ideal is a rank-two lattice in `Z^2`; its Hermite basis
/// `{(e, f), (0, g)}` with `e * g = norm(q)` yields the canonical residue box
/// `[0, e) x [0, g)`.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    modulus: GaussInt,
    e: Int,
    f: Int,
    g: Int,
    rational: bool,
}

/// A canonical residue class, stored as its representative's coordinates.
pub type Residue = (Int, Int);

impl ResidueRing {
    pub fn new(modulus: &GaussInt) -> Result<Self, Error> {
        if modulus.is_zero() {
            return Err(Error::Parse("congruence level must be nonzero".into()));
        }
        let (a, b) = (modulus.re.clone(), modulus.im.clone());
        let n = modulus.norm();
        // integer xgcd on the first coordinates of (a, b) and (-b, a)
        let (e, u, v) = int_xgcd(&a, &(-&b));
        let (e, u, v) = if e.signum() < 0 { (-&e, -&u, -&v) } else { (e, u, v) };
        let g = n.div_exact(&e).expect("lattice index");
        let f_raw = &(&u * &b) + &(&v * &a);
        let f = f_raw.div_mod_floor(&g).1;
        Ok(ResidueRing { modulus: modulus.clone(), e, f, g, rational: false })
    }

    /// Residues of `Z / (q)` for a rational integer `q`, embedded in `Z[i] / (q)`.
    pub fn new_rational(modulus: &GaussInt) -> Result<Self, Error> {
        if !modulus.is_real() {
            return Err(Error::Parse(alloc::format!("level {modulus} is not a rational integer")));
        }
        let mut r = Self::new(modulus)?;
        r.rational = true;
        Ok(r)
    }

    pub fn modulus(&self) -> &GaussInt {
        &self.modulus
    }

    /// Number of residue classes: `norm(q)`, or `|q|` in rational mode.
    pub fn size(&self) -> Int {
        if self.rational {
            self.e.clone()
        } else {
            &self.e * &self.g
        }
    }

    pub fn reduce(&self, x: &GaussInt) -> Residue {
        let (k, x0) = x.re.div_mod_floor(&self.e);
        let y = &x.im - &(&k * &self.f);
        let y0 = y.div_mod_floor(&self.g).1;
        (x0, y0)
    }

    pub fn is_zero(&self, x: &GaussInt) -> bool {
        let (a, b) = self.reduce(x);
        a.is_zero() && b.is_zero()
    }

    pub fn representative(r: &Residue) -> GaussInt {
        GaussInt { re: r.0.clone(), im: r.1.clone() }
    }

    /// All residues, in canonical order.
    pub fn elements(&self) -> Vec<Residue> {
        let mut out = Vec::new();
        let e = self.e.to_i64().expect("small modulus");
        let g = if self.rational { 1 } else { self.g.to_i64().expect("small modulus") };
        for x in 0..e {
            for y in 0..g {
                out.push((Int::from(x), Int::from(y)));
            }
        }
        out
    }

    pub fn is_unit(&self, x: &GaussInt) -> bool {
        x.coprime(&self.modulus)
    }

    pub fn units(&self) -> Vec<Residue> {
        self.elements()
            .into_iter()
            .filter(|r| self.is_unit(&Self::representative(r)))
            .collect()
    }

    pub fn mul(&self, x: &Residue, y: &Residue) -> Residue {
        self.reduce(&(&Self::representative(x) * &Self::representative(y)))
    }

    /// Discrete logarithm table with respect to `generator`, or `None` if it
    /// does not generate the unit group.
    pub fn log_table(&self, generator: &GaussInt) -> Option<BTreeMap<Residue, u64>> {
        let units = self.units();
        let gen = self.reduce(generator);
        let one = self.reduce(&GaussInt::one());
        let mut table = BTreeMap::new();
        let mut cur = one.clone();
        let mut k = 0u64;
        loop {
            if table.insert(cur.clone(), k).is_some() {
                return None;
            }
            cur = self.mul(&cur, &gen);
            k += 1;
            if cur == one {
                break;
            }
            if k as usize > units.len() {
                return None;
            }
        }
        (table.len() == units.len()).then_some(table)
    }

    /// Smallest unit residue (canonical order) generating the unit group, if cyclic.
    pub fn find_generator(&self) -> Option<GaussInt> {
        self.units().into_iter().map(|r| Self::representative(&r)).find(|g| self.log_table(g).is_some())
    }
}

fn int_xgcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Int::ONE, Int::ZERO);
    let (mut t0, mut t1) = (Int::ZERO, Int::ONE);
    while !r1.is_zero() {
        let (q, r) = r0.div_mod_floor(&r1);
        r0 = core::mem::replace(&mut r1, r);
        let s = &s0 - &(&q * &s1);
        s0 = core::mem::replace(&mut s1, s);
        let t = &t0 - &(&q * &t1);
        t0 = core::mem::replace(&mut t1, t);
    }
    (r0, s0, t0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_literals() {
        assert_eq!(GaussInt::parse("2").unwrap(), GaussInt::new(2, 0));
        assert_eq!(GaussInt::parse("1+i").unwrap(), GaussInt::new(1, 1));
        assert_eq!(GaussInt::parse("2 - i").unwrap(), GaussInt::new(2, -1));
        assert_eq!(GaussInt::parse("-i").unwrap(), GaussInt::new(0, -1));
        assert_eq!(GaussInt::parse("-2+3i").unwrap(), GaussInt::new(-2, 3));
        assert_eq!(GaussInt::parse("3i").unwrap(), GaussInt::new(0, 3));
        assert!(GaussInt::parse("1+").is_err());
        assert!(GaussInt::parse("x").is_err());
    }

    #[test]
    fn display_round_trips_through_parse() {
        for (re, im) in [(0, 1), (0, -1), (2, 0), (-3, 1), (1, -1), (4, 7), (0, -5)] {
            let x = GaussInt::new(re, im);
            assert_eq!(GaussInt::parse(&alloc::format!("{x}")).unwrap(), x);
        }
    }

    #[test]
    fn xgcd_identity_holds() {
        let a = GaussInt::new(7, 3);
        let b = GaussInt::new(-2, 5);
        let (g, u, v) = a.xgcd(&b);
        assert_eq!(&(&u * &a) + &(&v * &b), g);
        assert!(g.divides(&a) && g.divides(&b));
    }

    #[test]
    fn residue_ring_sizes_and_zero_test() {
        for (q, n) in [(GaussInt::new(1, 1), 2), (GaussInt::new(2, 1), 5), (GaussInt::new(2, 0), 4), (GaussInt::new(3, 0), 9)] {
            let r = ResidueRing::new(&q).unwrap();
            assert_eq!(r.size(), Int::from(n));
            assert_eq!(r.elements().len(), n as usize);
            // distinct residues really are distinct mod q
            let els = r.elements();
            for x in &els {
                for y in &els {
                    let diff = &ResidueRing::representative(x) - &ResidueRing::representative(y);
                    assert_eq!(q.divides(&diff), x == y);
                }
            }
            assert!(r.is_zero(&(&q * &GaussInt::new(-3, 2))));
        }
    }

    #[test]
    fn rational_residues_mod_nine() {
        let r = ResidueRing::new_rational(&GaussInt::from_int(9)).unwrap();
        assert_eq!(r.size(), Int::from(9));
        assert_eq!(r.units().len(), 6);
        assert_eq!(r.find_generator(), Some(GaussInt::from_int(2)));
        assert!(ResidueRing::new_rational(&GaussInt::new(1, 1)).is_err());
    }

    #[test]
    fn units_mod_two_plus_i_are_cyclic_of_order_four() {
        let r = ResidueRing::new(&GaussInt::new(2, 1)).unwrap();
        assert_eq!(r.units().len(), 4);
        let g = r.find_generator().unwrap();
        let table = r.log_table(&g).unwrap();
        // -1 is the square of a generator
        assert_eq!(table[&r.reduce(&GaussInt::new(-1, 0))], 2);
    }
}
