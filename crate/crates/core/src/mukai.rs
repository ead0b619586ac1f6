//! The algebraic Mukai lattice of a polarized K3 surface `(S, C)` with
//! `NS(S) = Z·C` and `C² = 2d`.
//!
//! A Mukai vector `(r, a·C, b)` is stored as the integer triple `(r, a, b)`.
//! The pairing is `⟨(r,aC,b),(r',a'C,b')⟩ = 2d·aa' − rb' − r'b`.

use crate::error::{unsupported, usage, Error, Result};
use crate::lattice::{GramLattice, LatticeVector};
use crate::num::{json_int, json_int_matrix, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Polarization data: `C² = 2d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct K3Context {
    d: BigInt,
}

impl K3Context {
    pub fn new(d: impl Into<BigInt>) -> Result<Self> {
        let d = d.into();
        if d < BigInt::one() {
            return usage(format!(
                "polarization parameter d must be positive, got {d}"
            ));
        }
        Ok(K3Context { d })
    }

    /// The degree-2 K3 surface (`C² = 2`).
    pub fn degree_two() -> Self {
        K3Context { d: BigInt::one() }
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// Gram matrix `[[0,0,−1],[0,2d,0],[−1,0,0]]` in the basis
    /// `(1,0,0), (0,C,0), (0,0,1)`.
    pub fn lattice(&self) -> GramLattice {
        let z = BigInt::zero;
        let m1 = || BigInt::from(-1);
        GramLattice::new(vec![
            vec![z(), z(), m1()],
            vec![z(), BigInt::from(2) * &self.d, z()],
            vec![m1(), z(), z()],
        ])
        .expect("Mukai Gram matrix is symmetric")
    }

    pub fn vector(&self, r: i64, a: i64, b: i64) -> MukaiVector {
        MukaiVector::new(r.into(), a.into(), b.into(), self.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMukaiVector")]
pub struct MukaiVector {
    #[serde(with = "json_int")]
    r: BigInt,
    #[serde(with = "json_int")]
    a: BigInt,
    #[serde(with = "json_int")]
    b: BigInt,
    #[serde(with = "json_int")]
    d: BigInt,
}

#[derive(Deserialize)]
struct RawMukaiVector {
    #[serde(with = "json_int")]
    r: BigInt,
    #[serde(with = "json_int")]
    a: BigInt,
    #[serde(with = "json_int")]
    b: BigInt,
    #[serde(with = "json_int")]
    d: BigInt,
}

impl TryFrom<RawMukaiVector> for MukaiVector {
    type Error = Error;

    fn try_from(raw: RawMukaiVector) -> Result<Self> {
        let ctx = K3Context::new(raw.d)?;
        Ok(MukaiVector::new(raw.r, raw.a, raw.b, ctx))
    }
}

impl MukaiVector {
    pub fn new(r: BigInt, a: BigInt, b: BigInt, context: K3Context) -> Self {
        MukaiVector {
            r,
            a,
            b,
            d: context.d,
        }
    }

    pub fn from_coords(context: &K3Context, coords: &LatticeVector) -> Result<Self> {
        match coords.coords() {
            [r, a, b] => Ok(MukaiVector::new(
                r.clone(),
                a.clone(),
                b.clone(),
                context.clone(),
            )),
            _ => usage(format!(
                "a Mukai vector has three coordinates, got {coords}"
            )),
        }
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn context(&self) -> K3Context {
        K3Context { d: self.d.clone() }
    }

    pub fn coords(&self) -> LatticeVector {
        LatticeVector::new(vec![self.r.clone(), self.a.clone(), self.b.clone()])
    }

    pub fn square(&self) -> BigInt {
        pair_unchecked(self, self)
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.a.is_zero() && self.b.is_zero()
    }

    pub fn content(&self) -> BigInt {
        self.r.gcd(&self.a).gcd(&self.b)
    }

    pub fn neg(&self) -> Self {
        MukaiVector {
            r: -&self.r,
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        MukaiVector {
            r: k * &self.r,
            a: k * &self.a,
            b: k * &self.b,
            d: self.d.clone(),
        }
    }

    /// `self + other`; both must share the polarization.
    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.d, other.d);
        MukaiVector {
            r: &self.r + &other.r,
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            d: self.d.clone(),
        }
    }

    /// Largest absolute coordinate.
    pub fn height(&self) -> BigInt {
        [&self.r, &self.a, &self.b]
            .into_iter()
            .map(|c| c.abs())
            .max()
            .unwrap()
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.a, self.b)
    }
}

fn pair_unchecked(x: &MukaiVector, y: &MukaiVector) -> BigInt {
    BigInt::from(2) * &x.d * &x.a * &y.a - &x.r * &y.b - &y.r * &x.b
}

pub fn mukai_pair(x: &MukaiVector, y: &MukaiVector) -> Result<BigInt> {
    if x.d != y.d {
        return usage(format!(
            "Mukai vectors {x} and {y} live on different K3 surfaces (d = {} vs {})",
            x.d, y.d
        ));
    }
    Ok(pair_unchecked(x, y))
}

/// `v · exp(nC)`, the Mukai vector of `F ⊗ O_S(nC)`.
pub fn tensor_by_polarization(v: &MukaiVector, n: &BigInt) -> MukaiVector {
    let two = BigInt::from(2);
    MukaiVector {
        r: v.r.clone(),
        a: &v.a + n * &v.r,
        b: &v.b + &two * &v.d * n * &v.a + &v.d * n * n * &v.r,
        d: v.d.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factoriality {
    Factorial,
    TwoFactorial,
    NotApplicable,
}

/// Invariants of the moduli space of sheaves with Mukai vector `m·v0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuliReport {
    pub m: u32,
    pub v0: MukaiVector,
    #[serde(with = "json_int")]
    pub dimension: BigInt,
    pub admits_symplectic_resolution: bool,
    pub is_og10_type: bool,
    pub factoriality: Factoriality,
    pub ns_basis: Vec<MukaiVector>,
    #[serde(with = "json_int_matrix")]
    pub ns_gram: IntMatrix,
    /// Positivity of `v0` with respect to a stability condition is never verified.
    pub positivity_checked: bool,
}

pub fn moduli_report(m: u32, v0: &MukaiVector) -> Result<ModuliReport> {
    if m == 0 {
        return usage("the multiplicity m must be positive");
    }
    if v0.is_zero() {
        return usage("v0 must be nonzero");
    }
    let g = v0.content();
    if !g.is_one() {
        return usage(format!(
            "v0 = {v0} is not primitive (gcd of coordinates is {g})"
        ));
    }
    let sq = v0.square();
    if sq < BigInt::from(2) {
        return unsupported(format!(
            "v0 = {v0} has square {sq}; only v0² ≥ 2 is supported"
        ));
    }
    let m_big = BigInt::from(m);
    let dimension = &m_big * &m_big * &sq + 2;
    let resolution = m == 2 && sq == BigInt::from(2);

    let ctx = v0.context();
    let lattice = ctx.lattice();
    let factoriality = if m == 2 {
        if lattice.divisibility(&v0.coords())?.is_even() {
            Factoriality::Factorial
        } else {
            Factoriality::TwoFactorial
        }
    } else {
        Factoriality::NotApplicable
    };
    let complement = lattice.orthogonal_complement(&[v0.coords()])?;
    let ns_basis = complement
        .basis
        .iter()
        .map(|c| MukaiVector::from_coords(&ctx, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModuliReport {
        m,
        v0: v0.clone(),
        dimension,
        admits_symplectic_resolution: resolution,
        is_og10_type: resolution,
        factoriality,
        ns_basis,
        ns_gram: complement.gram,
        positivity_checked: false,
    })
}
