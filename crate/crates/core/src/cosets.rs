//! Right coset decompositions `Gamma \ Gamma~` arranged in cusp blocks.
//!
//! The cosets are found by breadth-first closure under the ambient
//! generators. Cusps of `Gamma` correspond to orbits of the stabiliser of
//! infinity `Gamma~_inf` acting on the cosets from the right: the orbit of the
//! coset `Gamma sigma` has size `n_i = [Gamma~_i : Gamma_i]`, and walking it
//! from `sigma_i` produces representatives `alpha = sigma_i t` with
//! `t in Gamma~_inf`, i.e. `alpha = beta sigma_i` with `beta = sigma_i t sigma_i^-1`.
//! Stabiliser generators are the Schreier generators of that walk, so they
//! generate `Gamma_i` exactly.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::element::GroupElement;
use crate::error::Error;
use crate::gauss::GaussInt;
use crate::group::GroupDescriptor;

/// Default cap on the index during coset closure.
pub const DEFAULT_MAX_INDEX: usize = 4096;

/// A cusp `a / c` on the boundary, or infinity when `c = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspPoint {
    pub num: GaussInt,
    pub den: GaussInt,
}

impl CuspPoint {
    pub fn is_infinity(&self) -> bool {
        self.den.is_zero()
    }
}

impl fmt::Display for CuspPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            f.write_str("inf")
        } else if self.num.is_zero() {
            f.write_str("0")
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[derive(Clone, Debug)]
pub struct CuspData {
    pub point: CuspPoint,
    /// Scaling matrix in the ambient group with `sigma . inf = point`.
    pub sigma: GroupElement,
    /// `n_i = [Gamma~_i : Gamma_i]`
    pub width: usize,
    /// Elements `t_k` of `Gamma~_inf` with `alpha = sigma t_k` for this block.
    pub shifts: Vec<GroupElement>,
    /// `beta_k = sigma t_k sigma^-1`, coset representatives of `Gamma_i \ Gamma~_i`.
    pub betas: Vec<GroupElement>,
    /// Generators of `Gamma_i`.
    pub stabilizer_gens: Vec<GroupElement>,
    /// Generators of `Gamma~_i = sigma Gamma~_inf sigma^-1`.
    pub ambient_stabilizer_gens: Vec<GroupElement>,
}

impl CuspData {
    /// `S_i = sigma T^{n_i} sigma^-1`, the generator of `Gamma_i` in the planar case.
    pub fn planar_generator(&self) -> GroupElement {
        let t = GroupElement::translation(GaussInt::one());
        self.sigma.conjugate(&t.pow(self.width as i64))
    }
}

#[derive(Clone, Debug)]
pub struct SubgroupPair {
    gamma: GroupDescriptor,
    gamma_tilde: GroupDescriptor,
    alpha: Vec<GroupElement>,
    alpha_inv: Vec<GroupElement>,
    cusps: Vec<CuspData>,
    /// `cusp_order[k]` is the discovery index of the cusp now in position `k`.
    cusp_order: Vec<usize>,
}

impl SubgroupPair {
    pub fn new(gamma: GroupDescriptor, gamma_tilde: GroupDescriptor) -> Result<Self, Error> {
        Self::with_max_index(gamma, gamma_tilde, DEFAULT_MAX_INDEX)
    }

    pub fn with_max_index(gamma: GroupDescriptor, gamma_tilde: GroupDescriptor, max_index: usize) -> Result<Self, Error> {
        if !gamma_tilde.is_full() {
            return Err(Error::AssumptionViolated(format!(
                "the larger group must have a single cusp class; got {gamma_tilde}"
            )));
        }
        if gamma.ambient() != gamma_tilde.ambient() {
            return Err(Error::AssumptionViolated("both groups must share the ambient group".into()));
        }
        let ambient = gamma_tilde.ambient();
        let gens = ambient.generators();
        let stab_gens = ambient.stabilizer_generators();

        // breadth-first coset closure
        let mut reps: Vec<GroupElement> = vec![GroupElement::identity()];
        let mut inv: Vec<GroupElement> = vec![GroupElement::identity()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for s in &gens {
                let y = &reps[k] * s;
                if find_coset(&gamma, &inv, &y).is_none() {
                    if reps.len() >= max_index {
                        return Err(Error::IndexOverflow(max_index));
                    }
                    inv.push(y.inverse());
                    reps.push(y);
                    queue.push_back(reps.len() - 1);
                }
            }
        }
        let n = reps.len();

        // orbits of Gamma~_inf on the cosets
        let mut assigned = vec![false; n];
        let mut cusps = Vec::new();
        let mut alpha = Vec::with_capacity(n);
        for start in 0..n {
            if assigned[start] {
                continue;
            }
            let sigma = reps[start].clone();
            // (coset index, shift t) in walk order
            let mut walk: Vec<(usize, GroupElement)> = vec![(start, GroupElement::identity())];
            assigned[start] = true;
            let mut schreier: Vec<GroupElement> = Vec::new();
            let mut head = 0;
            while head < walk.len() {
                let (_, t) = walk[head].clone();
                head += 1;
                for s in &stab_gens {
                    let ts = &t * s;
                    let y = &sigma * &ts;
                    let idx = find_coset(&gamma, &inv, &y).expect("coset closure is complete");
                    match walk.iter().find(|(c, _)| *c == idx) {
                        Some((_, t2)) => {
                            let h = &ts * &t2.inverse();
                            if !h.is_identity() {
                                schreier.push(sigma.conjugate(&h));
                            }
                        }
                        None => {
                            assigned[idx] = true;
                            walk.push((idx, ts));
                        }
                    }
                }
            }
            schreier.sort();
            schreier.dedup();
            let shifts: Vec<GroupElement> = walk.into_iter().map(|(_, t)| t).collect();
            let betas: Vec<GroupElement> = shifts.iter().map(|t| sigma.conjugate(t)).collect();
            for t in &shifts {
                alpha.push(&sigma * t);
            }
            let point = CuspPoint { num: sigma.a().clone(), den: sigma.c().clone() };
            cusps.push(CuspData {
                point,
                width: shifts.len(),
                ambient_stabilizer_gens: stab_gens.iter().map(|g| sigma.conjugate(g)).collect(),
                sigma,
                shifts,
                betas,
                stabilizer_gens: schreier,
            });
        }
        let alpha_inv = alpha.iter().map(|a| a.inverse()).collect();
        let cusp_order = (0..cusps.len()).collect();
        Ok(SubgroupPair { gamma, gamma_tilde, alpha, alpha_inv, cusps, cusp_order })
    }

    /// The trivial pair `Gamma = Gamma~`.
    pub fn trivial(gamma_tilde: GroupDescriptor) -> Result<Self, Error> {
        Self::new(gamma_tilde.clone(), gamma_tilde)
    }

    pub fn gamma(&self) -> &GroupDescriptor {
        &self.gamma
    }

    pub fn gamma_tilde(&self) -> &GroupDescriptor {
        &self.gamma_tilde
    }

    pub fn index(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[GroupElement] {
        &self.alpha
    }

    pub fn alpha_inv(&self) -> &[GroupElement] {
        &self.alpha_inv
    }

    pub fn cusps(&self) -> &[CuspData] {
        &self.cusps
    }

    pub fn cusp_order(&self) -> &[usize] {
        &self.cusp_order
    }

    /// Start offset of block `i` in the representative list.
    pub fn block_offset(&self, i: usize) -> usize {
        self.cusps[..i].iter().map(|c| c.width).sum()
    }

    /// `(block, position)` of representative `nu`.
    pub fn block_of(&self, nu: usize) -> (usize, usize) {
        let mut off = 0;
        for (i, c) in self.cusps.iter().enumerate() {
            if nu < off + c.width {
                return (i, nu - off);
            }
            off += c.width;
        }
        panic!("representative index {nu} out of range")
    }

    /// The unique `nu` with `g alpha_nu^-1 in Gamma`.
    pub fn coset_index(&self, g: &GroupElement) -> Option<usize> {
        if !self.gamma_tilde.contains(g) {
            return None;
        }
        find_coset(&self.gamma, &self.alpha_inv, g)
    }

    /// Every `nu` with `g alpha_nu^-1 in Gamma` (exactly one for `g` in `Gamma~`).
    pub fn coset_matches(&self, g: &GroupElement) -> Vec<usize> {
        (0..self.index()).filter(|&k| self.gamma.contains(&(g * &self.alpha_inv[k]))).collect()
    }

    /// Reorders the cusp blocks; `order[k]` is the current index of the new `k`-th cusp.
    pub fn reorder_cusps(&self, order: &[usize]) -> SubgroupPair {
        assert_eq!(order.len(), self.cusps.len());
        let cusps: Vec<CuspData> = order.iter().map(|&k| self.cusps[k].clone()).collect();
        let alpha: Vec<GroupElement> =
            cusps.iter().flat_map(|c| c.shifts.iter().map(|t| &c.sigma * t)).collect();
        let alpha_inv = alpha.iter().map(|a| a.inverse()).collect();
        let cusp_order = order.iter().map(|&k| self.cusp_order[k]).collect();
        SubgroupPair {
            gamma: self.gamma.clone(),
            gamma_tilde: self.gamma_tilde.clone(),
            alpha,
            alpha_inv,
            cusps,
            cusp_order,
        }
    }

    pub fn scalings(&self) -> Vec<GroupElement> {
        self.cusps.iter().map(|c| c.sigma.clone()).collect()
    }
}

fn find_coset(gamma: &GroupDescriptor, inv: &[GroupElement], g: &GroupElement) -> Option<usize> {
    if gamma.is_full() {
        return (!inv.is_empty()).then_some(0);
    }
    let residues = gamma.residues().expect("proper subgroup has a level");
    // bottom-left entry of g x^-1 with x^-1 = [[d', -b'], [-c', a']] is c d' - d c'
    inv.iter().position(|x| {
        let c = &(g.c() * x.a()) + &(g.d() * x.c());
        residues.is_zero(&c)
    })
}

/// Height lower bound `max y(sigma_j^-1 g w)` over the given window.
pub fn height_lower_bound(
    w: &crate::geometry::PointH3,
    pair: &SubgroupPair,
    window: &[GroupElement],
) -> Result<f64, Error> {
    if pair.cusps().is_empty() {
        return Err(Error::NoCuspData);
    }
    Ok(crate::geometry::height_lower_bound(w, window, &pair.scalings()))
}
