//! Shioda–Tate rank arithmetic for Lagrangian fibrations with a section.

use crate::error::{unsupported, usage, Error, Result};
use serde::{Deserialize, Serialize};

/// Largest rank of `H^{2,2}(X, ℚ)` for a cubic fourfold: `b₄ = 23` and
/// `h^{3,1} = h^{1,3} = 1`.
pub const MAX_H22_RANK: u32 = 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationData {
    /// Picard rank of the total space.
    pub ns_rank: u32,
    /// Irreducible components of the non-regular locus that miss the section.
    pub boundary_components: u32,
    pub has_section: bool,
}

impl FibrationData {
    pub fn with_section(ns_rank: u32, boundary_components: u32) -> Self {
        FibrationData {
            ns_rank,
            boundary_components,
            has_section: true,
        }
    }
}

/// `rk NS − rk(ℤL ⊕ ⊕ ℤDᵢ) − 1`, the rank of the Mordell–Weil group.
pub fn shioda_tate_rank(data: &FibrationData) -> Result<u32> {
    if !data.has_section {
        return unsupported("the Shioda–Tate formula needs a fibration with a section");
    }
    let vertical = 1 + data.boundary_components as i64;
    let rank = data.ns_rank as i64 - vertical - 1;
    if rank < 0 {
        return Err(Error::Inconsistency(format!(
            "ns_rank {} is smaller than the {} classes spanned by L, the boundary components and a section",
            data.ns_rank,
            vertical + 1
        )));
    }
    Ok(rank as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicFourfoldHodgeData {
    h22_rank: u32,
}

impl CubicFourfoldHodgeData {
    pub fn new(h22_rank: u32) -> Result<Self> {
        if !(1..=MAX_H22_RANK).contains(&h22_rank) {
            return usage(format!(
                "h22 rank must lie in [1, {MAX_H22_RANK}], got {h22_rank}"
            ));
        }
        Ok(CubicFourfoldHodgeData { h22_rank })
    }

    pub fn h22_rank(&self) -> u32 {
        self.h22_rank
    }

    /// Rank of the primitive part `H^{2,2}(X, ℤ)₀`.
    pub fn h22_primitive_rank(&self) -> u32 {
        self.h22_rank - 1
    }
}

/// Picard rank of the intermediate Jacobian fibration `J(X)`.
pub fn rho_of_j(data: &CubicFourfoldHodgeData) -> u32 {
    data.h22_rank + 1
}

/// Mordell–Weil rank of `J(X) → ℙ⁵`, equal to `ρ(J) − 2`.
pub fn mw_rank_of_jx(data: &CubicFourfoldHodgeData) -> u32 {
    let rank = rho_of_j(data) - 2;
    debug_assert_eq!(rank, data.h22_primitive_rank());
    assert!(rank < MAX_H22_RANK, "Mordell–Weil rank {rank} exceeds 20");
    rank
}

/// The `mw-rank` report. Field order is the JSON key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JxRankReport {
    pub mw_rank: u32,
    #[serde(rename = "rho_J")]
    pub rho_j: u32,
    pub torsion_free: bool,
}

pub fn jx_rank_report(h22_rank: u32) -> Result<JxRankReport> {
    let data = CubicFourfoldHodgeData::new(h22_rank)?;
    Ok(JxRankReport {
        mw_rank: mw_rank_of_jx(&data),
        rho_j: rho_of_j(&data),
        torsion_free: true,
    })
}
