//! One-dimensional characters of Hecke congruence subgroups.
//!
//! A congruence character is `chi([[a, b], [c, d]]) = psi(d mod q)` where
//! `psi` is a character of the unit group of `Z[i]/(q)` (or `Z/(q)`),
//! fixed by the image of a generator. Values are exact [`Turn`]s.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;

use crate::element::GroupElement;
use crate::error::Error;
use crate::gauss::{GaussInt, Residue, ResidueRing};
use crate::group::GroupDescriptor;
use crate::turn::Turn;

#[derive(Clone, Debug)]
pub enum Character {
    Trivial,
    Congruence(CongruenceCharacter),
}

#[derive(Clone, Debug)]
pub struct CongruenceCharacter {
    residues: ResidueRing,
    generator: GaussInt,
    image: Turn,
    log: BTreeMap<Residue, u64>,
}

impl Character {
    /// Builds `psi(d mod level)` with `psi(generator) = image`.
    ///
    /// The level must divide the level of `gamma` so that `chi` is a
    /// homomorphism on `gamma`, and `psi(-1) = 1` so that `chi` is well
    /// defined on projective classes. Without an explicit generator the
    /// smallest generating residue is used.
    pub fn congruence(
        gamma: &GroupDescriptor,
        level: &GaussInt,
        generator: Option<GaussInt>,
        image: Turn,
    ) -> Result<Character, Error> {
        let (q, _) = level.unit_normalized();
        if q.is_unit() || image.is_one() {
            return Ok(Character::Trivial);
        }
        if !gamma.ambient().contains_entry(&q) {
            return Err(Error::InvalidCharacter(format!("level {q} is outside the coefficient ring")));
        }
        match gamma.level() {
            Some(gl) if q.divides(gl) => {}
            _ => {
                return Err(Error::InvalidCharacter(format!(
                    "character level {q} must divide the subgroup level ({gamma})"
                )))
            }
        }
        let residues =
            if gamma.ambient().is_planar() { ResidueRing::new_rational(&q)? } else { ResidueRing::new(&q)? };
        let generator = match generator {
            Some(g) => g,
            None => residues.find_generator().ok_or_else(|| {
                Error::InvalidCharacter(format!("unit group modulo {q} is not cyclic; give a generator"))
            })?,
        };
        let log = residues
            .log_table(&generator)
            .ok_or_else(|| Error::InvalidCharacter(format!("{generator} does not generate the units modulo {q}")))?;
        let order = log.len() as i64;
        if !image.pow(order).is_one() {
            return Err(Error::InvalidCharacter(format!(
                "image {image} has order not dividing the unit group order {order}"
            )));
        }
        let minus_one = residues.reduce(&GaussInt::from_int(-1));
        if !image.pow(log[&minus_one] as i64).is_one() {
            return Err(Error::InvalidCharacter("character is odd: psi(-1) != 1".into()));
        }
        Ok(Character::Congruence(CongruenceCharacter { residues, generator, image, log }))
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Character::Trivial)
    }

    /// `chi(g)`, or `None` when `d` is not invertible modulo the level.
    pub fn eval(&self, g: &GroupElement) -> Option<Turn> {
        match self {
            Character::Trivial => Some(Turn::ONE),
            Character::Congruence(c) => {
                let k = c.log.get(&c.residues.reduce(g.d()))?;
                Some(c.image.pow(*k as i64))
            }
        }
    }

    /// Order of the value group (every value is an `m`-th root of unity).
    pub fn value_order(&self) -> u64 {
        match self {
            Character::Trivial => 1,
            Character::Congruence(c) => c.image.den(),
        }
    }

    pub fn level(&self) -> Option<&GaussInt> {
        match self {
            Character::Trivial => None,
            Character::Congruence(c) => Some(c.residues.modulus()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Character::Trivial => "trivial".into(),
            Character::Congruence(c) => {
                format!("psi(d mod {}) with psi({}) = e({})", c.residues.modulus(), c.generator, c.image)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;
    use crate::group::Ambient;

    #[test]
    fn quadratic_character_mod_two_plus_i() {
        let q = GaussInt::new(2, 1);
        let gamma = GroupDescriptor::hecke(Ambient::Bianchi, q.clone()).unwrap();
        let chi = Character::congruence(&gamma, &q, None, Turn::new(1, 2)).unwrap();
        assert!(!chi.is_trivial());
        let w = gamma.enumerate(2, &Sequential);
        let mut nontrivial = 0;
        for g in &w {
            let v = chi.eval(g).unwrap();
            assert!(v.is_one() || v == Turn::new(1, 2));
            if !v.is_one() {
                nontrivial += 1;
            }
            for h in w.iter().take(40) {
                assert_eq!(chi.eval(&(g * h)).unwrap(), chi.eval(g).unwrap() * chi.eval(h).unwrap());
            }
        }
        assert!(nontrivial > 0);
    }

    #[test]
    fn odd_characters_are_rejected() {
        let q = GaussInt::new(2, 1);
        let gamma = GroupDescriptor::hecke(Ambient::Bianchi, q.clone()).unwrap();
        // a generator of order four has psi(-1) = psi(g)^2 = -1
        let r = Character::congruence(&gamma, &q, None, Turn::new(1, 4));
        assert!(matches!(r, Err(Error::InvalidCharacter(_))));
        // the units mod 3 are {1, 2}, with 2 = -1
        let g3 = GroupDescriptor::hecke(Ambient::Modular, GaussInt::from_int(3)).unwrap();
        assert!(Character::congruence(&g3, &GaussInt::from_int(3), None, Turn::new(1, 2)).is_err());
    }

    #[test]
    fn level_must_divide_subgroup_level() {
        let gamma = GroupDescriptor::hecke(Ambient::Modular, GaussInt::from_int(9)).unwrap();
        assert!(Character::congruence(&gamma, &GaussInt::from_int(9), None, Turn::new(1, 3)).is_ok());
        assert!(Character::congruence(&gamma, &GaussInt::from_int(7), None, Turn::new(1, 3)).is_err());
        assert!(Character::congruence(&gamma, &GaussInt::from_int(9), None, Turn::new(1, 4)).is_err());
    }

    #[test]
    fn explicit_generator_must_generate() {
        let gamma = GroupDescriptor::hecke(Ambient::Modular, GaussInt::from_int(9)).unwrap();
        let r = Character::congruence(&gamma, &GaussInt::from_int(9), Some(GaussInt::from_int(4)), Turn::new(1, 3));
        assert!(r.is_err());
        let chi =
            Character::congruence(&gamma, &GaussInt::from_int(9), Some(GaussInt::from_int(2)), Turn::new(1, 3)).unwrap();
        let g = GroupElement::from_ints(5, 1, 9, 2).unwrap();
        assert_eq!(chi.eval(&g), Some(Turn::new(1, 3)));
    }
}
