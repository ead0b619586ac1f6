//! Sparse multivariate and dense univariate polynomials over `Q`.

use crate::conic::positive_divisors;
use crate::error::{Error, Result};
use crate::num::render_rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// A polynomial in `nvars` variables; terms are keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(e, BigRational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(e.clone())
            .or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        if k.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut acc: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigRational::zero) += c1 * c2;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Poly {
            nvars: self.nvars,
            terms: acc,
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::constant(self.nvars, BigRational::one());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Coefficient of `x_0^{e_0}⋯x_{m-1}^{e_{m-1}}` as a polynomial in the
    /// remaining `nvars − m` variables.
    pub fn coefficient_of_prefix(&self, prefix: &[u32]) -> Poly {
        let m = prefix.len();
        let mut out = Poly::zero(self.nvars - m);
        for (e, c) in &self.terms {
            if e[..m] == *prefix {
                out.add_term(e[m..].to_vec(), c.clone());
            }
        }
        out
    }

    /// Indices of variables that occur with positive degree.
    pub fn vars_used(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect()
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Replaces variable `i` by `value`; the variable stays (with degree 0).
    pub fn substitute(&self, i: usize, value: &BigRational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[i];
            e2[i] = 0;
            let factor = num_traits::pow(value.clone(), k as usize);
            out.add_term(e2, c * factor);
        }
        out
    }

    /// The polynomial viewed in variable `i` alone; other variables must not
    /// occur.
    pub fn to_univariate(&self, i: usize) -> Option<UniPoly> {
        let mut coeffs = Vec::new();
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(j, &k)| j != i && k > 0) {
                return None;
            }
            let k = e[i] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigRational::zero());
            }
            coeffs[k] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    /// Coefficients in variable `y`, each a univariate polynomial in `x`.
    /// Only `x` and `y` may occur.
    pub fn to_bivariate(&self, x: usize, y: usize) -> Option<Vec<UniPoly>> {
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for (e, c) in &self.terms {
            if e.iter()
                .enumerate()
                .any(|(j, &k)| j != x && j != y && k > 0)
            {
                return None;
            }
            let (kx, ky) = (e[x] as usize, e[y] as usize);
            if rows.len() <= ky {
                rows.resize(ky + 1, Vec::new());
            }
            if rows[ky].len() <= kx {
                rows[ky].resize(kx + 1, BigRational::zero());
            }
            rows[ky][kx] = c.clone();
        }
        Some(rows.into_iter().map(UniPoly::new).collect())
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{}", names[i], k)
                    }
                })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if monomial.is_empty() {
                out.push_str(&render_rational(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&render_rational(&abs));
                    out.push('*');
                }
                out.push_str(&monomial.join("*"));
            }
        }
        out
    }
}

/// Dense univariate polynomial, coefficients from the constant term up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get =
            |p: &UniPoly, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
        UniPoly::new((0..n).map(|i| get(self, i) + get(other, i)).collect())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.leading();
        UniPoly::new(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scalar multiple with coprime integer coefficients and positive
    /// leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let g = crate::num::gcd_all(&ints);
        let sign = if self.leading().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    /// Rational roots with multiplicity, plus the deflated residual factor
    /// that carries every irrational or complex root.
    pub fn rational_roots(&self) -> Result<(Vec<(BigRational, u32)>, UniPoly)> {
        if self.is_zero() {
            return Err(Error::Usage(
                "the zero polynomial has every number as a root".into(),
            ));
        }
        let mut residual = self.clone();
        let mut roots: Vec<(BigRational, u32)> = Vec::new();
        let mut zero_mult = 0;
        while residual.coeffs.first().is_some_and(Zero::is_zero) {
            residual = UniPoly::new(residual.coeffs[1..].to_vec());
            zero_mult += 1;
        }
        if zero_mult > 0 {
            roots.push((BigRational::zero(), zero_mult));
        }
        if residual.degree().unwrap_or(0) > 0 {
            let ints = residual.primitive_integer();
            let a0 = ints.first().unwrap();
            let an = ints.last().unwrap();
            let too_big =
                || Error::Resource("coefficients too large for rational-root search".into());
            let ps = positive_divisors(a0).ok_or_else(too_big)?;
            let qs = positive_divisors(an).ok_or_else(too_big)?;
            let mut candidates: Vec<BigRational> = Vec::new();
            for p in &ps {
                for q in &qs {
                    if p.gcd(q).is_one() {
                        let r = BigRational::new(p.clone(), q.clone());
                        candidates.push(-r.clone());
                        candidates.push(r);
                    }
                }
            }
            candidates.sort();
            for r in candidates {
                let mut mult = 0;
                let linear = UniPoly::new(vec![-r.clone(), BigRational::one()]);
                while residual.degree().unwrap_or(0) > 0 && residual.eval(&r).is_zero() {
                    residual = residual.div_rem(&linear).0;
                    mult += 1;
                }
                if mult > 0 {
                    roots.push((r, mult));
                }
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        Ok((roots, residual))
    }

    pub fn render(&self, name: &str) -> String {
        let mut nvars = Poly::zero(1);
        for (k, c) in self.coeffs.iter().enumerate() {
            nvars.add_term(vec![k as u32], c.clone());
        }
        nvars.render(&[name.to_string()])
    }
}

/// Resultant of `f, g ∈ Q[x][y]` with respect to `y`, given as coefficient
/// lists in `y` (lowest first). Computed as the Sylvester determinant by
/// fraction-free elimination over `Q[x]`.
pub fn resultant(f: &[UniPoly], g: &[UniPoly]) -> UniPoly {
    let trim = |p: &[UniPoly]| {
        let mut v = p.to_vec();
        while v.last().is_some_and(UniPoly::is_zero) {
            v.pop();
        }
        v
    };
    let (f, g) = (trim(f), trim(g));
    if f.is_empty() || g.is_empty() {
        return UniPoly::zero();
    }
    let (m, n) = (f.len() - 1, g.len() - 1);
    if m == 0 && n == 0 {
        return UniPoly::constant(BigRational::one());
    }
    let size = m + n;
    let mut mat: Vec<Vec<UniPoly>> = vec![vec![UniPoly::zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    if size == 0 {
        return UniPoly::constant(BigRational::one());
    }
    let mut sign = false;
    let mut prev = UniPoly::constant(BigRational::one());
    for k in 0..size - 1 {
        if mat[k][k].is_zero() {
            match (k + 1..size).find(|&i| !mat[i][k].is_zero()) {
                Some(i) => {
                    mat.swap(k, i);
                    sign = !sign;
                }
                None => return UniPoly::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = mat[i][j].mul(&mat[k][k]).sub(&mat[i][k].mul(&mat[k][j]));
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                mat[i][j] = q;
            }
        }
        prev = mat[k][k].clone();
    }
    let det = mat[size - 1][size - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}
