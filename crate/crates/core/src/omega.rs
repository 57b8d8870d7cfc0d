//! The constants `Omega(chi)` and `Omega(pi)` of the co-volume-one
//! normalisation in the planar case, computed in exact cyclotomic arithmetic.
//!
//! With representatives `alpha = sigma_i T^a` (`0 <= a < n_i`), the matrix of
//! `pi(T)` is block diagonal; block `i` has ones on the superdiagonal and
//! `chi(S_i)` in the lower-left corner, where `S_i = sigma_i T^{n_i} sigma_i^-1`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::element::GroupElement;
use crate::error::Error;
use crate::gauss::GaussInt;
use crate::induced::InducedRep;
use crate::int::Int;
use crate::turn::{Cyclo, CyclotomicRing, Turn};

/// Exact polynomial over a cyclotomic ring, coefficients from degree 0 up.
pub type CycloPoly = Vec<Cyclo>;

#[derive(Clone, Debug)]
pub struct OmegaConstants {
    pub widths: Vec<usize>,
    pub kappa: usize,
    /// `chi(S_i)` per cusp, singular cusps first.
    pub cusp_values: Vec<Turn>,
    /// `pi(T)` in the basis `sigma_i T^a`; `None` marks a zero entry.
    pub block_matrix: Vec<Vec<Option<Turn>>>,
    /// The block matrix has exactly the companion shape described above.
    pub block_form: bool,
    /// `prod (lambda^{n_i} - chi(S_i))`
    pub charpoly_blocks: CycloPoly,
    /// `det(lambda - pi(T))` expanded directly from the coset-basis matrix.
    pub charpoly_direct: CycloPoly,
    pub charpoly_agree: bool,
    /// Algebraic multiplicity of the eigenvalue 1.
    pub unit_multiplicity: usize,
    /// Product of the nonzero eigenvalues of `I - pi(T)`.
    pub det_prime: Cyclo,
    /// `prod_{j <= kappa} n_j * prod_{i > kappa} (1 - chi(S_i))`
    pub det_prime_expected: Cyclo,
    pub product_nj: u64,
    pub omega_pi: f64,
    pub omega_chi: f64,
    /// `det_prime == det_prime_expected`, which makes `Omega(pi) / Omega(chi) = product_nj` exact.
    pub ratio_exact: bool,
}

fn trim(p: &mut CycloPoly) {
    while p.len() > 1 && p.last().is_some_and(Cyclo::is_zero) {
        p.pop();
    }
}

fn poly_mul(ring: &CyclotomicRing, a: &[Cyclo], b: &[Cyclo]) -> CycloPoly {
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// `p(1 - mu)` as a polynomial in `mu`.
fn reflect_at_one(ring: &CyclotomicRing, p: &[Cyclo]) -> CycloPoly {
    let step = [ring.one(), ring.from_int(-1)];
    let mut acc = vec![ring.zero()];
    for c in p.iter().rev() {
        acc = poly_mul(ring, &acc, &step);
        acc[0] = ring.add(&acc[0], c);
    }
    trim(&mut acc);
    acc
}

/// Number of times `lambda - 1` divides `p` (for `p != 0`).
fn multiplicity_at_one(ring: &CyclotomicRing, p: &[Cyclo]) -> usize {
    let mut p = p.to_vec();
    let mut k = 0;
    while p.len() > 1 {
        // synthetic division by lambda - 1
        let mut q = vec![ring.zero(); p.len() - 1];
        let mut carry = ring.zero();
        for i in (1..p.len()).rev() {
            carry = ring.add(&carry, &p[i]);
            q[i - 1] = carry.clone();
        }
        if !ring.add(&carry, &p[0]).is_zero() {
            break;
        }
        p = q;
        k += 1;
    }
    k
}

/// Characteristic polynomial `det(lambda I - a)` by Berkowitz's division-free recursion.
pub fn charpoly(ring: &CyclotomicRing, a: &[Vec<Cyclo>]) -> CycloPoly {
    let n = a.len();
    // coefficients from the leading one down
    let mut v = vec![ring.one()];
    for r in 0..n {
        let mut col = vec![ring.one(), ring.neg(&a[r][r])];
        // R M^k C for the leading r x r block M, row R = a[r][..r], column C = a[..r][r]
        let mut w: Vec<Cyclo> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let mut dot = ring.zero();
            for (j, wj) in w.iter().enumerate() {
                dot = ring.add(&dot, &ring.mul(&a[r][j], wj));
            }
            col.push(ring.neg(&dot));
            w = (0..r)
                .map(|i| (0..r).fold(ring.zero(), |acc, j| ring.add(&acc, &ring.mul(&a[i][j], &w[j]))))
                .collect();
        }
        let mut next = vec![ring.zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate().take(i + 1) {
                if i - j < col.len() {
                    *slot = ring.add(slot, &ring.mul(&col[i - j], vj));
                }
            }
        }
        v = next;
    }
    v.reverse();
    v
}

fn entry_cyclo(ring: &CyclotomicRing, e: &Option<Turn>) -> Cyclo {
    match e {
        Some(t) => ring.from_turn(t),
        None => ring.zero(),
    }
}

/// Checks that `Gamma_i` is generated by `S_i`: every stabiliser generator
/// conjugates into `+-T^m` with `n_i | m`.
fn check_cyclic(sigma: &GroupElement, width: usize, gens: &[GroupElement]) -> Result<(), Error> {
    let si = sigma.inverse();
    for g in gens {
        let h = si.conjugate(g);
        if !h.c().is_zero() || !(h.a() == h.d()) || !h.a().is_unit() {
            return Err(Error::StabilizerNotCyclic);
        }
        // projectively h = [[1, b/a], [0, 1]]
        let shift = h.b() * h.a();
        if !shift.im.is_zero() || shift.re.div_exact(&Int::from(width as i64)).is_none() {
            return Err(Error::StabilizerNotCyclic);
        }
    }
    Ok(())
}

pub fn omega_constants(pi: &InducedRep) -> Result<OmegaConstants, Error> {
    let pair = pi.pair();
    if !pair.gamma_tilde().ambient().is_planar() {
        return Err(Error::Not2D);
    }
    let t = GroupElement::translation(GaussInt::one());
    if !pair.gamma_tilde().contains(&t) {
        return Err(Error::AssumptionViolated("the stabiliser of infinity in the larger group is not generated by T".into()));
    }
    let ring = pi.ring();
    let kappa = pi.kappa();
    let chi = pi.character();

    let mut reps = Vec::with_capacity(pair.index());
    let mut widths = Vec::new();
    let mut cusp_values = Vec::new();
    for c in pair.cusps() {
        check_cyclic(&c.sigma, c.width, &c.stabilizer_gens)?;
        widths.push(c.width);
        cusp_values.push(chi.eval(&c.planar_generator()).ok_or(Error::NotInAmbient)?);
        for a in 0..c.width {
            reps.push(&c.sigma * &t.pow(a as i64));
        }
    }
    let n = reps.len();
    let mut hit = vec![false; n];
    for r in &reps {
        let k = pair.coset_index(r).ok_or(Error::NotInAmbient)?;
        if core::mem::replace(&mut hit[k], true) {
            return Err(Error::StabilizerNotCyclic);
        }
    }
    if n != pair.index() {
        return Err(Error::AssumptionViolated(format!("cusp widths sum to {n}, index is {}", pair.index())));
    }

    let inv: Vec<GroupElement> = reps.iter().map(GroupElement::inverse).collect();
    let mut block_matrix = vec![vec![None; n]; n];
    for (i, row) in block_matrix.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = pi.chi_tilde(&(&(&reps[i] * &t) * &inv[j]))?;
        }
    }

    let mut block_form = true;
    let mut off = 0;
    for (w, v) in widths.iter().zip(&cusp_values) {
        for a in 0..*w {
            for (j, got) in block_matrix[off + a].iter().enumerate() {
                let want = if a + 1 < *w && j == off + a + 1 {
                    Some(Turn::ONE)
                } else if a + 1 == *w && j == off {
                    Some(*v)
                } else {
                    None
                };
                block_form &= *got == want;
            }
        }
        off += w;
    }

    let mut charpoly_blocks = vec![ring.one()];
    for (w, v) in widths.iter().zip(&cusp_values) {
        let mut f = vec![ring.zero(); w + 1];
        f[0] = ring.neg(&ring.from_turn(v));
        f[*w] = ring.one();
        charpoly_blocks = poly_mul(ring, &charpoly_blocks, &f);
    }
    // independent route: the matrix of pi(T) in the pair's own coset basis
    let own = pi.matrix(&t)?;
    let dense: Vec<Vec<Cyclo>> =
        (0..n).map(|i| (0..n).map(|j| entry_cyclo(ring, &own.entry(i, j))).collect()).collect();
    let charpoly_direct = charpoly(ring, &dense);
    let charpoly_agree = charpoly_direct == charpoly_blocks;

    let unit_multiplicity = multiplicity_at_one(ring, &charpoly_blocks);
    // det(mu - (I - M)) = (-1)^n P(1 - mu) = mu^k R(mu); det' = (-1)^{n-k} R(0)
    let mut q = reflect_at_one(ring, &charpoly_blocks);
    if n % 2 == 1 {
        q = q.iter().map(|c| ring.neg(c)).collect();
    }
    let k = q.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let det_prime = if (n - k) % 2 == 1 { ring.neg(&q[k]) } else { q[k].clone() };

    let product_nj: u64 = widths[..kappa].iter().map(|&w| w as u64).product();
    let mut det_prime_expected = ring.from_int(Int::from(product_nj as i64));
    let mut omega_chi = 1.0;
    for v in &cusp_values[kappa..] {
        let f = ring.sub(&ring.one(), &ring.from_turn(v));
        omega_chi *= f.to_complex().norm();
        det_prime_expected = ring.mul(&det_prime_expected, &f);
    }
    let omega_pi = det_prime.to_complex().norm();
    let ratio_exact = det_prime == det_prime_expected;
    Ok(OmegaConstants {
        widths,
        kappa,
        cusp_values,
        block_matrix,
        block_form,
        charpoly_blocks,
        charpoly_direct,
        charpoly_agree,
        unit_multiplicity,
        det_prime,
        det_prime_expected,
        product_nj,
        omega_pi,
        omega_chi,
        ratio_exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::Character;
    use crate::cosets::SubgroupPair;
    use crate::group::{Ambient, GroupDescriptor};
    use crate::induced::SingularityTest;

    fn pair(level: i64) -> SubgroupPair {
        let full = GroupDescriptor::full(Ambient::Modular);
        SubgroupPair::new(GroupDescriptor::hecke(Ambient::Modular, GaussInt::from_int(level)).unwrap(), full).unwrap()
    }

    fn ints(ring: &CyclotomicRing, c: &[i64]) -> CycloPoly {
        c.iter().map(|&x| ring.from_int(x)).collect()
    }

    #[test]
    fn berkowitz_small_cases() {
        let r = CyclotomicRing::new(1);
        let a = vec![ints(&r, &[2, 1, 0]), ints(&r, &[0, 3, 4]), ints(&r, &[1, 0, 5])];
        // det(lambda - A) = lambda^3 - 10 lambda^2 + 31 lambda - 34
        assert_eq!(charpoly(&r, &a), ints(&r, &[-34, 31, -10, 1]));
        assert_eq!(charpoly(&r, &[]), ints(&r, &[1]));
    }

    #[test]
    fn gamma0_2_trivial() {
        let pi = InducedRep::new(&pair(2), Character::Trivial, SingularityTest::default()).unwrap();
        let o = omega_constants(&pi).unwrap();
        let r = pi.ring();
        let mut w = o.widths.clone();
        w.sort();
        assert_eq!(w, vec![1, 2]);
        assert!(o.block_form && o.charpoly_agree && o.ratio_exact);
        // (lambda - 1)(lambda^2 - 1)
        assert_eq!(o.charpoly_blocks, ints(r, &[1, -1, -1, 1]));
        assert_eq!(o.unit_multiplicity, 2);
        assert_eq!(o.det_prime.as_integer(), Some(Int::from(2)));
        assert_eq!(o.omega_chi, 1.0);
        assert_eq!(o.product_nj, 2);
    }

    #[test]
    fn full_group_ratio_one() {
        let full = GroupDescriptor::full(Ambient::Modular);
        let pi = InducedRep::new(&SubgroupPair::trivial(full).unwrap(), Character::Trivial, SingularityTest::default())
            .unwrap();
        let o = omega_constants(&pi).unwrap();
        assert!(o.ratio_exact);
        assert_eq!(o.product_nj, 1);
        assert_eq!(o.det_prime.as_integer(), Some(Int::from(1)));
    }

    #[test]
    fn cubic_character_on_gamma0_9() {
        let p = pair(9);
        let chi = Character::congruence(p.gamma(), &GaussInt::from_int(9), None, Turn::new(1, 3)).unwrap();
        let pi = InducedRep::new(&p, chi, SingularityTest::default()).unwrap();
        let o = omega_constants(&pi).unwrap();
        assert_eq!(o.kappa, 2);
        assert!(o.block_form && o.charpoly_agree && o.ratio_exact);
        assert_eq!(o.unit_multiplicity, o.kappa);
        assert!(o.cusp_values[o.kappa..].iter().all(|v| !v.is_one()));
        let ratio = o.omega_pi / o.omega_chi;
        assert!((ratio - o.product_nj as f64).abs() < 1e-12 * ratio);
    }

    #[test]
    fn bianchi_is_rejected() {
        let full = GroupDescriptor::full(Ambient::Bianchi);
        let p = SubgroupPair::new(GroupDescriptor::hecke(Ambient::Bianchi, GaussInt::new(1, 1)).unwrap(), full).unwrap();
        let pi = InducedRep::new(&p, Character::Trivial, SingularityTest::default()).unwrap();
        assert!(matches!(omega_constants(&pi), Err(Error::Not2D)));
    }
}
