//! The induced representation `pi = Ind chi` as exact monomial matrices.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::character::Character;
use crate::cosets::SubgroupPair;
use crate::element::GroupElement;
use crate::error::Error;
use crate::turn::{Cyclo, CyclotomicRing, Turn};

/// A square matrix with exactly one nonzero entry, a root of unity, in each
/// row and column. Row `i` has its entry `phase[i]` in column `col[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMatrix {
    col: Vec<usize>,
    phase: Vec<Turn>,
}

impl MonomialMatrix {
    pub fn identity(n: usize) -> Self {
        MonomialMatrix { col: (0..n).collect(), phase: vec![Turn::ONE; n] }
    }

    /// Builds a matrix from `(column, phase)` per row; `None` if not a permutation.
    pub fn from_rows(rows: Vec<(usize, Turn)>) -> Option<Self> {
        let n = rows.len();
        let mut seen = vec![false; n];
        for (c, _) in &rows {
            if *c >= n || seen[*c] {
                return None;
            }
            seen[*c] = true;
        }
        let (col, phase) = rows.into_iter().unzip();
        Some(MonomialMatrix { col, phase })
    }

    pub fn dim(&self) -> usize {
        self.col.len()
    }

    pub fn column_of(&self, row: usize) -> usize {
        self.col[row]
    }

    pub fn phase_of(&self, row: usize) -> Turn {
        self.phase[row]
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<Turn> {
        (self.col[i] == j).then_some(self.phase[i])
    }

    pub fn is_identity(&self) -> bool {
        self.col.iter().enumerate().all(|(i, &c)| c == i) && self.phase.iter().all(|p| p.is_one())
    }

    pub fn mul(&self, rhs: &MonomialMatrix) -> MonomialMatrix {
        assert_eq!(self.dim(), rhs.dim());
        let col = self.col.iter().map(|&j| rhs.col[j]).collect();
        let phase = self.col.iter().zip(&self.phase).map(|(&j, &p)| p * rhs.phase[j]).collect();
        MonomialMatrix { col, phase }
    }

    /// Conjugate transpose, which is the inverse.
    pub fn adjoint(&self) -> MonomialMatrix {
        let n = self.dim();
        let mut col = vec![0; n];
        let mut phase = vec![Turn::ONE; n];
        for i in 0..n {
            col[self.col[i]] = i;
            phase[self.col[i]] = self.phase[i].inv();
        }
        MonomialMatrix { col, phase }
    }

    /// Exact trace in `Z[zeta_m]`.
    pub fn trace_exact(&self, ring: &CyclotomicRing) -> Cyclo {
        let mut acc = ring.zero();
        for i in 0..self.dim() {
            if self.col[i] == i {
                acc = ring.add(&acc, &ring.from_turn(&self.phase[i]));
            }
        }
        acc
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).filter(|&i| self.col[i] == i).map(|i| self.phase[i].to_complex()).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let n = self.dim();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            m[i][self.col[i]] = self.phase[i].to_complex();
        }
        m
    }

    /// `M v` for a dense complex vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.phase[i].to_complex() * v[self.col[i]]).collect()
    }
}

/// Dimension of the common fixed space `{v : M v = v for all M}` of a family
/// of monomial matrices, computed exactly. Each orbit of the generated
/// permutation group contributes one dimension iff the phases along it are
/// consistent.
pub fn fixed_space_dim(mats: &[MonomialMatrix]) -> usize {
    let Some(n) = mats.first().map(|m| m.dim()) else {
        return 0;
    };
    // M v = v reads v_i = phase_i v_{col_i}
    let mut adj: Vec<Vec<(usize, Turn)>> = vec![Vec::new(); n];
    for m in mats {
        for i in 0..n {
            let j = m.col[i];
            adj[i].push((j, m.phase[i].inv()));
            adj[j].push((i, m.phase[i]));
        }
    }
    let mut value: Vec<Option<Turn>> = vec![None; n];
    let mut dim = 0;
    for root in 0..n {
        if value[root].is_some() {
            continue;
        }
        value[root] = Some(Turn::ONE);
        let mut consistent = true;
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let vi = value[i].expect("visited");
            for &(j, f) in &adj[i] {
                let vj = vi * f;
                match value[j] {
                    None => {
                        value[j] = Some(vj);
                        queue.push_back(j);
                    }
                    Some(old) => consistent &= old == vj,
                }
            }
        }
        if consistent {
            dim += 1;
        }
    }
    dim
}

/// Which subgroup of `Gamma_j` the character must be trivial on for cusp `j`
/// to count as singular.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SingularityTest {
    /// The full stabiliser `Gamma_j`.
    #[default]
    FullStabilizer,
    /// Only its parabolic part `Gamma_j'`.
    ParabolicOnly,
}

#[derive(Clone, Debug)]
pub struct InducedRep {
    pair: SubgroupPair,
    chi: Character,
    ring: CyclotomicRing,
    kappa: usize,
    test: SingularityTest,
}

impl InducedRep {
    /// Builds `pi`, reordering the cusps of `pair` so the singular ones come first.
    pub fn new(pair: &SubgroupPair, chi: Character, test: SingularityTest) -> Result<Self, Error> {
        let mut singular = Vec::new();
        let mut regular = Vec::new();
        for (k, c) in pair.cusps().iter().enumerate() {
            if c.stabilizer_gens.is_empty() {
                return Err(Error::StabilizerUnavailable);
            }
            let gens = match test {
                SingularityTest::FullStabilizer => c.stabilizer_gens.clone(),
                SingularityTest::ParabolicOnly => parabolic_part(&c.sigma, &c.stabilizer_gens),
            };
            let mut trivial = true;
            for g in &gens {
                trivial &= chi.eval(g).ok_or(Error::NotInAmbient)?.is_one();
            }
            if trivial {
                singular.push(k);
            } else {
                regular.push(k);
            }
        }
        let kappa = singular.len();
        singular.extend(regular);
        let pair = pair.reorder_cusps(&singular);
        let ring = CyclotomicRing::new(chi.value_order());
        Ok(InducedRep { pair, chi, ring, kappa, test })
    }

    pub fn pair(&self) -> &SubgroupPair {
        &self.pair
    }

    pub fn character(&self) -> &Character {
        &self.chi
    }

    pub fn ring(&self) -> &CyclotomicRing {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.pair.index()
    }

    /// Degree of singularity: the number of singular cusps, which occupy the
    /// first `kappa` blocks.
    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn singularity_test(&self) -> SingularityTest {
        self.test
    }

    /// `chi~(g)`: `chi(g)` on `Gamma`, `None` (zero) off it.
    pub fn chi_tilde(&self, g: &GroupElement) -> Result<Option<Turn>, Error> {
        if !self.pair.gamma_tilde().contains(g) {
            return Err(Error::NotInAmbient);
        }
        if self.pair.gamma().contains(g) {
            Ok(Some(self.chi.eval(g).ok_or(Error::NotInAmbient)?))
        } else {
            Ok(None)
        }
    }

    /// `pi(g)` with entries `chi~(alpha_i g alpha_j^-1)`.
    pub fn matrix(&self, g: &GroupElement) -> Result<MonomialMatrix, Error> {
        if !self.pair.gamma_tilde().contains(g) {
            return Err(Error::NotInAmbient);
        }
        let mut rows = Vec::with_capacity(self.dim());
        for a in self.pair.alpha() {
            let x = a * g;
            let j = self.pair.coset_index(&x).ok_or(Error::NotInAmbient)?;
            let h = &x * &self.pair.alpha_inv()[j];
            rows.push((j, self.chi.eval(&h).ok_or(Error::NotInAmbient)?));
        }
        Ok(MonomialMatrix::from_rows(rows).expect("right multiplication permutes cosets"))
    }

    /// Phases `chi(alpha_i g alpha_i^-1)` of the diagonal entries that are nonzero.
    pub fn trace_terms(&self, g: &GroupElement) -> Result<Vec<Turn>, Error> {
        if !self.pair.gamma_tilde().contains(g) {
            return Err(Error::NotInAmbient);
        }
        let mut out = Vec::new();
        for (a, ai) in self.pair.alpha().iter().zip(self.pair.alpha_inv()) {
            let h = &(a * g) * ai;
            if self.pair.gamma().contains(&h) {
                out.push(self.chi.eval(&h).ok_or(Error::NotInAmbient)?);
            }
        }
        Ok(out)
    }

    pub fn trace(&self, g: &GroupElement) -> Result<Complex64, Error> {
        Ok(self.trace_terms(g)?.iter().map(|t| t.to_complex()).sum())
    }

    pub fn trace_exact(&self, g: &GroupElement) -> Result<Cyclo, Error> {
        let mut acc = self.ring.zero();
        for t in self.trace_terms(g)? {
            acc = self.ring.add(&acc, &self.ring.from_turn(&t));
        }
        Ok(acc)
    }

    /// Orthonormal basis `e_1..e_kappa` of the singular space; `e_j` is the
    /// indicator of block `j` scaled by `n_j^{-1/2}`.
    pub fn singular_basis(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..self.kappa)
            .map(|j| {
                let c = &self.pair.cusps()[j];
                let off = self.pair.block_offset(j);
                let mut v = vec![0.0; n];
                let w = 1.0 / libm::sqrt(c.width as f64);
                for x in &mut v[off..off + c.width] {
                    *x = w;
                }
                v
            })
            .collect()
    }

    /// `pi(g)` for the generators of `Gamma~_inf`.
    pub fn cusp_stabilizer_matrices(&self) -> Result<Vec<MonomialMatrix>, Error> {
        self.pair.gamma_tilde().ambient().stabilizer_generators().iter().map(|g| self.matrix(g)).collect()
    }

    /// `dim V_inf` computed from the matrices of `pi` on `Gamma~_inf`.
    pub fn singular_dim_exact(&self) -> Result<usize, Error> {
        Ok(fixed_space_dim(&self.cusp_stabilizer_matrices()?))
    }
}

/// Generators of the parabolic part of `Gamma_j`, the kernel of
/// `sigma^-1 g sigma = [[u, *], [0, 1/u]] -> u^2 in {1, -1}`.
fn parabolic_part(sigma: &GroupElement, gens: &[GroupElement]) -> Vec<GroupElement> {
    let si = sigma.inverse();
    let rotates = |g: &GroupElement| !si.conjugate(g).a().is_real();
    let Some(h) = gens.iter().find(|g| rotates(g)).cloned() else {
        return gens.to_vec();
    };
    let hi = h.inverse();
    let mut out = Vec::new();
    for g in gens {
        if rotates(g) {
            out.push(g * &hi);
            out.push(&h * g);
        } else {
            out.push(g.clone());
            out.push(h.conjugate(g));
        }
    }
    out.retain(|g| !g.is_identity());
    out.sort();
    out.dedup();
    out
}
