//! Ambient groups, Hecke congruence subgroups and bounded enumeration windows.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::element::GroupElement;
use crate::error::Error;
use crate::exec::Executor;
use crate::gauss::{GaussInt, ResidueRing};
use crate::geometry::{apply_mobius, delta, PointH3};
use crate::int::Int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ambient {
    /// `PSL(2, Z)` acting on the upper half-plane.
    Modular,
    /// `PSL(2, Z[i])` acting on upper half-space.
    Bianchi,
}

impl Ambient {
    pub fn parse(s: &str) -> Result<Ambient, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sl2z" | "modular" => Ok(Ambient::Modular),
            "sl2zi" | "bianchi" => Ok(Ambient::Bianchi),
            other => Err(Error::Parse(format!("unknown ambient group '{other}' (expected sl2z or sl2zi)"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Ambient::Modular => "sl2z",
            Ambient::Bianchi => "sl2zi",
        }
    }

    /// True in the 2-dimensional (Fuchsian) mode.
    pub fn is_planar(&self) -> bool {
        matches!(self, Ambient::Modular)
    }

    /// Classical generators: `T, S` for `SL(2, Z)`; `T, T_i, S, U` for `SL(2, Z[i])`.
    pub fn generators(&self) -> Vec<GroupElement> {
        let t = GroupElement::translation(GaussInt::one());
        let s = GroupElement::inversion();
        match self {
            Ambient::Modular => vec![t, s],
            Ambient::Bianchi => {
                vec![t, GroupElement::translation(GaussInt::i()), s, GroupElement::rotation_i()]
            }
        }
    }

    /// Generators of the stabiliser of the cusp at infinity.
    pub fn stabilizer_generators(&self) -> Vec<GroupElement> {
        let t = GroupElement::translation(GaussInt::one());
        match self {
            Ambient::Modular => vec![t],
            Ambient::Bianchi => {
                vec![t, GroupElement::translation(GaussInt::i()), GroupElement::rotation_i()]
            }
        }
    }

    /// Units `u` occurring as the diagonal entry of stabiliser elements
    /// `[[u, *], [0, 1/u]]`, modulo sign.
    pub fn stabilizer_units(&self) -> Vec<GaussInt> {
        match self {
            Ambient::Modular => vec![GaussInt::one()],
            Ambient::Bianchi => vec![GaussInt::one(), GaussInt::i()],
        }
    }

    pub fn contains_entry(&self, x: &GaussInt) -> bool {
        match self {
            Ambient::Modular => x.is_real(),
            Ambient::Bianchi => true,
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.entries().iter().all(|x| self.contains_entry(x))
    }

    /// Functional-equation reflection `s -> shift - s` for Eisenstein series.
    pub fn functional_equation_shift(&self) -> f64 {
        match self {
            Ambient::Modular => 1.0,
            Ambient::Bianchi => 2.0,
        }
    }
}

/// A subgroup of an ambient group: the whole group, or the Hecke congruence
/// subgroup `Gamma_0(q) = { c = 0 mod q }`.
#[derive(Clone, Debug)]
pub struct GroupDescriptor {
    ambient: Ambient,
    level: Option<ResidueRing>,
}

impl PartialEq for GroupDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.level() == other.level()
    }
}

impl GroupDescriptor {
    pub fn full(ambient: Ambient) -> Self {
        GroupDescriptor { ambient, level: None }
    }

    /// `Gamma_0(q)`; a unit level gives the full group.
    pub fn hecke(ambient: Ambient, level: GaussInt) -> Result<Self, Error> {
        if !ambient.contains_entry(&level) {
            return Err(Error::Parse(format!("level {level} is not in the coefficient ring of {}", ambient.name())));
        }
        if level.is_zero() {
            return Err(Error::Parse("congruence level must be nonzero".into()));
        }
        let (q, _) = level.unit_normalized();
        if q.is_unit() {
            return Ok(Self::full(ambient));
        }
        let residues = if ambient.is_planar() { ResidueRing::new_rational(&q)? } else { ResidueRing::new(&q)? };
        Ok(GroupDescriptor { ambient, level: Some(residues) })
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn is_full(&self) -> bool {
        self.level.is_none()
    }

    pub fn level(&self) -> Option<&GaussInt> {
        self.level.as_ref().map(|r| r.modulus())
    }

    pub fn residues(&self) -> Option<&ResidueRing> {
        self.level.as_ref()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.ambient.contains(g) && self.level.as_ref().is_none_or(|r| r.is_zero(g.c()))
    }

    /// All projective elements whose entries `e` satisfy `norm(e) <= bound^2`,
    /// in canonical order. Closed under inversion and contains the identity.
    pub fn enumerate<E: Executor>(&self, bound: u32, exec: &E) -> Vec<GroupElement> {
        let b2 = Int::from(bound as i64 * bound as i64);
        let ring = GaussInt::ball(&b2, self.ambient.is_planar());
        let cs: Vec<GaussInt> = ring
            .iter()
            .filter(|c| self.level.as_ref().is_none_or(|r| r.is_zero(c)))
            .cloned()
            .collect();
        let planar = self.ambient.is_planar();
        let chunks = exec.map(&cs, |c| {
            let mut out = Vec::new();
            for d in &ring {
                bottom_row_completions(c, d, &b2, &ring, planar, &mut out);
            }
            out
        });
        let mut all: Vec<GroupElement> = chunks.into_iter().flatten().collect();
        all.sort();
        all.dedup();
        all
    }

    /// Every element `g` with `delta(g w, w) <= cutoff`, sorted.
    ///
    /// Since `delta(g w, w) >= (|cz + d|^2 + |c|^2 y^2) / 2`, only finitely many
    /// bottom rows qualify; for each, the admissible translations `T^l g` form a
    /// disc in the horizontal coordinate of `g w`.
    pub fn ball<E: Executor>(&self, w: &PointH3, cutoff: f64, exec: &E) -> Vec<GroupElement> {
        let planar = self.ambient.is_planar();
        let r2 = 2.0 * cutoff * (1.0 + 1e-9) + 1e-12;
        let c_max = Int::from(libm::floor(r2 / (w.y * w.y)) as i64);
        let cs: Vec<GaussInt> = GaussInt::ball(&c_max, planar)
            .into_iter()
            .filter(|c| self.level.as_ref().is_none_or(|r| r.is_zero(c)))
            .collect();
        let chunks = exec.map(&cs, |c| {
            let mut out = Vec::new();
            let cc = c.to_complex();
            let rd2 = r2 - cc.norm_sqr() * w.y * w.y;
            if rd2 < 0.0 {
                return out;
            }
            let center = -(cc * w.z);
            for d in disc(center.re, center.im, libm::sqrt(rd2), planar) {
                let Some((a0, b0)) = completion(c, &d) else { continue };
                let g0 = GroupElement::from_entries_unchecked(a0.clone(), b0.clone(), c.clone(), d.clone());
                let p = apply_mobius(&g0, w);
                let rho2 = 2.0 * w.y * p.y * cutoff * (1.0 + 1e-9) - p.y * p.y - w.y * w.y;
                if rho2 < 0.0 {
                    continue;
                }
                let shift = w.z - p.z;
                for l in disc(shift.re, shift.im, libm::sqrt(rho2) + 1e-9, planar) {
                    let g = GroupElement::from_entries_unchecked(&a0 + &(&l * c), &b0 + &(&l * &d), c.clone(), d.clone());
                    if delta(&apply_mobius(&g, w), w) <= cutoff && self.contains(&g) {
                        out.push(g);
                    }
                }
            }
            out
        });
        let mut all: Vec<GroupElement> = chunks.into_iter().flatten().collect();
        all.sort();
        all.dedup();
        all
    }
}

/// Gaussian (or rational, when `planar`) integers in the closed disc.
pub(crate) fn disc(cx: f64, cy: f64, r: f64, planar: bool) -> Vec<GaussInt> {
    let mut out = Vec::new();
    let (y_lo, y_hi) = if planar { (0, 0) } else { (libm::ceil(cy - r) as i64, libm::floor(cy + r) as i64) };
    for x in libm::ceil(cx - r) as i64..=libm::floor(cx + r) as i64 {
        for y in y_lo..=y_hi {
            let (dx, dy) = (x as f64 - cx, y as f64 - cy);
            if dx * dx + dy * dy <= r * r {
                out.push(GaussInt::new(x, y));
            }
        }
    }
    out
}

/// Some top row `(a, b)` with `ad - bc = 1`, if `(c, d)` is unimodular.
pub(crate) fn completion(c: &GaussInt, d: &GaussInt) -> Option<(GaussInt, GaussInt)> {
    if c.is_zero() {
        return d.unit_inverse().map(|a| (a, GaussInt::zero()));
    }
    let (g, u, v) = d.xgcd(c);
    let ginv = g.unit_inverse()?;
    Some((&u * &ginv, -&(&v * &ginv)))
}

/// Pushes every `[[a, b], [c, d]]` of determinant one with `norm(a), norm(b) <= b2`.
fn bottom_row_completions(
    c: &GaussInt,
    d: &GaussInt,
    b2: &Int,
    ring: &[GaussInt],
    planar: bool,
    out: &mut Vec<GroupElement>,
) {
    if c.is_zero() {
        if let Some(a) = d.unit_inverse() {
            for b in ring {
                out.push(GroupElement::from_entries_unchecked(a.clone(), b.clone(), c.clone(), d.clone()));
            }
        }
        return;
    }
    let Some((a0, b0)) = completion(c, d) else {
        return;
    };
    // a = a0 + l*c, so l is near -a0/c within radius bound/|c|
    let (center, _) = (-&a0).div_rem_round(c);
    let radius = libm::sqrt(b2.to_f64() / c.norm().to_f64()) + 1.0;
    let r = libm::ceil(radius) as i64;
    for x in -r..=r {
        let ys = if planar { 0..=0 } else { -r..=r };
        for y in ys {
            if ((x * x + y * y) as f64) > radius * radius {
                continue;
            }
            let l = &center + &GaussInt::new(x, y);
            let a = &a0 + &(&l * c);
            if a.norm() > *b2 {
                continue;
            }
            let b = &b0 + &(&l * d);
            if b.norm() > *b2 {
                continue;
            }
            out.push(GroupElement::from_entries_unchecked(a, b, c.clone(), d.clone()));
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level() {
            None => write!(f, "PSL(2,{})", if self.ambient.is_planar() { "Z" } else { "Z[i]" }),
            Some(q) => write!(f, "Gamma0({q}) in PSL(2,{})", if self.ambient.is_planar() { "Z" } else { "Z[i]" }),
        }
    }
}
