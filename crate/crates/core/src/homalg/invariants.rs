//! Canonical invariants of finitely generated modules.

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::snf::smith_normal_form;
use crate::qarith::EuclideanRing;

/// `R^free_rank ⊕ R/d_1 ⊕ ... ⊕ R/d_k` with `d_1 | ... | d_k`, no unit `d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbGroupInvariants {
    pub free_rank: usize,
    pub divisors: Vec<String>,
}

impl AbGroupInvariants {
    pub fn zero() -> Self {
        AbGroupInvariants {
            free_rank: 0,
            divisors: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        AbGroupInvariants {
            free_rank: rank,
            divisors: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.divisors.is_empty()
    }
}

impl std::fmt::Display for AbGroupInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("R^{}", self.free_rank));
        }
        parts.extend(self.divisors.iter().map(|d| format!("R/({d})")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" ⊕ "))
        }
    }
}

/// Invariants with ring-valued torsion coefficients.
#[derive(Clone, Debug)]
pub struct ModuleInvariants<E: EuclideanRing> {
    pub free_rank: usize,
    pub torsion: Vec<E::Elem>,
}

impl<E: EuclideanRing> ModuleInvariants<E> {
    pub fn zero() -> Self {
        ModuleInvariants {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    /// Invariants of `⊕ R/g_i` for arbitrary generators `g_i` (zero means a
    /// free summand, units are dropped).
    pub fn from_cyclic(ring: &E, gens: &[E::Elem]) -> Self {
        let mut inv = Self::zero();
        inv.absorb(ring, gens);
        inv.canonicalize(ring);
        inv
    }

    fn absorb(&mut self, ring: &E, gens: &[E::Elem]) {
        for g in gens {
            if ring.is_zero(g) {
                self.free_rank += 1;
            } else if !ring.is_unit(g) {
                self.torsion.push(g.clone());
            }
        }
    }

    /// Direct sum.
    pub fn sum(&self, ring: &E, o: &Self) -> Self {
        let mut out = self.clone();
        out.free_rank += o.free_rank;
        out.torsion.extend(o.torsion.iter().cloned());
        out.canonicalize(ring);
        out
    }

    /// Rewrites the torsion part as a divisibility chain.
    pub fn canonicalize(&mut self, ring: &E) {
        let k = self.torsion.len();
        if k == 0 {
            return;
        }
        let all_normal = self.torsion.iter().all(|x| ring.normalize(x).0 == *x);
        let chain = all_normal && self.torsion.windows(2).all(|w| ring.divides(&w[0], &w[1]));
        if chain {
            return;
        }
        let d = Matrix::diagonal(ring, k, k, &self.torsion);
        let s = smith_normal_form(ring, &d, false, false);
        self.torsion = s.diag.into_iter().filter(|x| !ring.is_unit(x)).collect();
        // Torsion generators are non-zero, so no free part appears here.
        debug_assert!(self.torsion.iter().all(|x| !ring.is_zero(x)));
    }

    pub fn to_ab(&self, ring: &E) -> AbGroupInvariants {
        AbGroupInvariants {
            free_rank: self.free_rank,
            divisors: self.torsion.iter().map(|x| ring.format(x)).collect(),
        }
    }
}
