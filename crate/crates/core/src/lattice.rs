//! Integral lattices given by a symmetric Gram matrix.

use crate::error::{unsupported, usage, Result};
use crate::num::{determinant, gcd_all, json_int_matrix, json_int_vec, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::cmp::Ordering;

/// Coordinates of a lattice element in the ambient basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LatticeVector(#[serde(with = "json_int_vec")] pub Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); rank])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Non-negative gcd of the coordinates.
    pub fn content(&self) -> BigInt {
        gcd_all(&self.0)
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        LatticeVector(self.0.iter().map(|c| c * k).collect())
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Divides out the content; the zero vector is returned unchanged.
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            self.clone()
        } else {
            LatticeVector(self.0.iter().map(|c| c / &g).collect())
        }
    }
}

impl std::fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A finite-rank integral lattice with a symmetric Gram matrix.
///
/// Evenness and nondegeneracy are computed once at construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GramLattice {
    rank: usize,
    #[serde(with = "json_int_matrix")]
    gram: IntMatrix,
    even: bool,
    nondegenerate: bool,
}

/// Basis of an orthogonal complement together with the induced form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Complement {
    pub basis: Vec<LatticeVector>,
    #[serde(with = "json_int_matrix")]
    pub gram: IntMatrix,
}

impl GramLattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        let rank = gram.len();
        if rank == 0 {
            return usage("Gram matrix must have positive rank");
        }
        if gram.iter().any(|row| row.len() != rank) {
            return usage(format!("Gram matrix is not square ({rank} rows)"));
        }
        for i in 0..rank {
            for j in i + 1..rank {
                if gram[i][j] != gram[j][i] {
                    return usage(format!(
                        "Gram matrix is not symmetric: entry ({i},{j}) = {} but ({j},{i}) = {}",
                        gram[i][j], gram[j][i]
                    ));
                }
            }
        }
        let even = (0..rank).all(|i| gram[i][i].is_even());
        let nondegenerate = !determinant(&gram).is_zero();
        Ok(GramLattice {
            rank,
            gram,
            even,
            nondegenerate,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(crate::num::int_matrix(rows))
    }

    /// The hyperbolic plane `U`.
    pub fn hyperbolic_plane() -> Self {
        Self::from_i64(&[&[0, 1], &[1, 0]]).expect("U is a valid Gram matrix")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.gram)
    }

    fn check_len(&self, x: &LatticeVector) -> Result<()> {
        if x.len() != self.rank {
            return usage(format!(
                "vector {x} has length {} but the lattice has rank {}",
                x.len(),
                self.rank
            ));
        }
        Ok(())
    }

    /// The functional `y ↦ (x, y)` as a row vector `xᵀ·gram`.
    fn functional(&self, x: &LatticeVector) -> Vec<BigInt> {
        (0..self.rank)
            .map(|j| {
                x.0.iter()
                    .zip(&self.gram)
                    .map(|(xi, row)| xi * &row[j])
                    .sum()
            })
            .collect()
    }

    /// The bilinear form `xᵀ·gram·y`.
    pub fn pair(&self, x: &LatticeVector, y: &LatticeVector) -> Result<BigInt> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self
            .functional(x)
            .iter()
            .zip(&y.0)
            .map(|(f, yi)| f * yi)
            .sum())
    }

    pub fn square(&self, x: &LatticeVector) -> Result<BigInt> {
        self.pair(x, x)
    }

    /// True iff the gcd of the coordinates is one.
    pub fn is_primitive(&self, x: &LatticeVector) -> Result<bool> {
        self.check_len(x)?;
        if x.is_zero() {
            return usage("primitivity is undefined for the zero vector");
        }
        Ok(x.content().is_one())
    }

    /// Divisibility of `x`: the non-negative generator of the ideal `(x, Λ)`.
    pub fn divisibility(&self, x: &LatticeVector) -> Result<BigInt> {
        self.check_len(x)?;
        Ok(gcd_all(&self.functional(x)))
    }

    pub fn gram_of(&self, basis: &[LatticeVector]) -> Result<IntMatrix> {
        basis
            .iter()
            .map(|u| basis.iter().map(|v| self.pair(u, v)).collect())
            .collect()
    }

    /// Saturated sublattice of vectors orthogonal to every generator.
    ///
    /// The returned basis is canonical: it is the Hermite normal form of the
    /// sublattice taken with pivots scanned from the last coordinate, each
    /// pivot (last nonzero coordinate) positive, listed in decreasing
    /// lexicographic order.
    pub fn orthogonal_complement(&self, generators: &[LatticeVector]) -> Result<Complement> {
        if !self.nondegenerate {
            return unsupported("orthogonal complements require a nondegenerate lattice");
        }
        for g in generators {
            self.check_len(g)?;
        }
        let constraints: IntMatrix = generators.iter().map(|g| self.functional(g)).collect();
        let kernel = integer_kernel(&constraints, self.rank);
        let basis: Vec<LatticeVector> = canonical_basis(&kernel)
            .into_iter()
            .map(LatticeVector)
            .collect();
        let gram = self.gram_of(&basis)?;
        Ok(Complement { basis, gram })
    }
}

/// Saturated basis of `{x ∈ Zⁿ : A·x = 0}`.
///
/// Row-reduces `[Aᵀ | I]` with unimodular operations; the identity half of
/// every row whose left half vanishes is a kernel vector, and together they
/// span the full (hence saturated) kernel.
pub fn integer_kernel(constraints: &[Vec<BigInt>], n: usize) -> IntMatrix {
    let m = constraints.len();
    let mut rows: Vec<(Vec<BigInt>, Vec<BigInt>)> = (0..n)
        .map(|j| {
            let left = constraints.iter().map(|c| c[j].clone()).collect();
            let mut right = vec![BigInt::zero(); n];
            right[j] = BigInt::one();
            (left, right)
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..m {
        if pivot_row == n {
            break;
        }
        loop {
            let best = (pivot_row..n)
                .filter(|&i| !rows[i].0[col].is_zero())
                .min_by(|&i, &j| rows[i].0[col].abs().cmp(&rows[j].0[col].abs()));
            let Some(best) = best else { break };
            rows.swap(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..n {
                if rows[i].0[col].is_zero() {
                    continue;
                }
                let q = rows[i].0[col].div_floor(&rows[pivot_row].0[col]);
                let (pl, pr) = rows[pivot_row].clone();
                for (a, b) in rows[i].0.iter_mut().zip(&pl) {
                    *a -= &q * b;
                }
                for (a, b) in rows[i].1.iter_mut().zip(&pr) {
                    *a -= &q * b;
                }
                if !rows[i].0[col].is_zero() {
                    done = false;
                }
            }
            if done {
                pivot_row += 1;
                break;
            }
        }
    }
    rows.into_iter()
        .filter(|(left, _)| left.iter().all(Zero::is_zero))
        .map(|(_, right)| right)
        .collect()
}

/// Row Hermite normal form: pivots move right row by row, pivots are
/// positive and entries above a pivot lie in `[0, pivot)`. Zero rows are
/// dropped.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> IntMatrix {
    let mut m: IntMatrix = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            let best = (r..m.len())
                .filter(|&i| !m[i][col].is_zero())
                .min_by(|&i, &j| m[i][col].abs().cmp(&m[j][col].abs()));
            let Some(best) = best else { break };
            m.swap(r, best);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][col].is_zero() {
                    continue;
                }
                let q = m[i][col].div_floor(&m[r][col]);
                let pivot = m[r].clone();
                for (a, b) in m[i].iter_mut().zip(&pivot) {
                    *a -= &q * b;
                }
                if !m[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                if m[r][col].is_negative() {
                    for a in m[r].iter_mut() {
                        *a = -a.clone();
                    }
                }
                pivots.push((r, col));
                r += 1;
                break;
            }
        }
    }
    for &(pr, pc) in &pivots {
        let pivot = m[pr].clone();
        for i in 0..pr {
            let q = m[i][pc].div_floor(&pivot[pc]);
            if !q.is_zero() {
                for (a, b) in m[i].iter_mut().zip(&pivot) {
                    *a -= &q * b;
                }
            }
        }
    }
    m.truncate(r);
    m
}

/// Canonical basis of the lattice spanned by `rows` (see
/// [`GramLattice::orthogonal_complement`]).
pub fn canonical_basis(rows: &[Vec<BigInt>]) -> IntMatrix {
    let reversed: IntMatrix = rows
        .iter()
        .map(|r| r.iter().rev().cloned().collect())
        .collect();
    let mut basis: IntMatrix = hermite_normal_form(&reversed)
        .into_iter()
        .map(|r| r.into_iter().rev().collect())
        .collect();
    basis.sort_by(|a, b| b.cmp(a));
    basis
}

/// Diagonal of the Smith normal form (the nonzero elementary divisors, in
/// divisibility order).
pub fn elementary_divisors(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m: IntMatrix = matrix.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // Move the smallest nonzero entry of the remaining block to (t, t).
        let pos = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by(|&(a, b), &(c, d)| m[a][b].abs().cmp(&m[c][d].abs()));
        let Some((pi, pj)) = pos else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                let q = m[i][t].div_floor(&m[t][t]);
                if !q.is_zero() {
                    let pivot = m[t].clone();
                    for (a, b) in m[i].iter_mut().zip(&pivot) {
                        *a -= &q * b;
                    }
                }
                if !m[i][t].is_zero() {
                    m.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                let q = m[t][j].div_floor(&m[t][t]);
                if !q.is_zero() {
                    for row in m.iter_mut() {
                        let v = &q * &row[t];
                        row[j] -= v;
                    }
                }
                if !m[t][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // Enforce divisibility of the rest of the block by the pivot.
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&m[i][j] % &m[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    let src = m[i].clone();
                    for (a, b) in m[t].iter_mut().zip(&src) {
                        *a += b;
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].abs());
    }
    diag
}

/// True iff the rows span a saturated sublattice of `Zⁿ`.
pub fn is_saturated(rows: &[Vec<BigInt>]) -> bool {
    elementary_divisors(rows).iter().all(One::is_one)
}

/// Integer coordinates of `x` in the given basis, if `x` lies in its span.
pub fn coordinates_in(basis: &[LatticeVector], x: &LatticeVector) -> Option<LatticeVector> {
    use num_rational::BigRational;
    let k = basis.len();
    let n = x.len();
    if basis.iter().any(|b| b.len() != n) {
        return None;
    }
    // Solve Bᵀ·c = x by Gaussian elimination over Q on the n×(k+1) system.
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = basis
                .iter()
                .map(|b| BigRational::from_integer(b.0[i].clone()))
                .collect();
            row.push(BigRational::from_integer(x.0[i].clone()));
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..n).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..n {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pr = m[r].clone();
                for (a, b) in m[i].iter_mut().zip(&pr) {
                    *a = &*a - &f * b;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    if pivot_cols.len() != k || m[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let coords = (0..k)
        .map(|i| {
            let v = &m[i][k];
            v.is_integer().then(|| v.to_integer())
        })
        .collect::<Option<Vec<_>>>()?;
    Some(LatticeVector(coords))
}

/// Lexicographic comparison after normalising each vector so its first
/// nonzero coordinate is positive.
pub fn cmp_up_to_sign(a: &LatticeVector, b: &LatticeVector) -> Ordering {
    let norm = |v: &LatticeVector| {
        if crate::num::leading_sign(&v.0) < 0 {
            v.neg()
        } else {
            v.clone()
        }
    };
    norm(a).cmp(&norm(b))
}
