//! Integer points on plane conics `a·p² + b·pq + c·q² + d·p + e·q + f = 0`.
//!
//! Used to certify that a family of spherical classes is finite. Two shapes
//! are solved exactly: definite forms (bounded ellipses) and forms that
//! split into rational linear factors (hyperbolas with rational
//! asymptotes, reduced to a divisor enumeration). Everything else is
//! reported as [`ConicSolutions::Unresolved`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Largest `|N|` for which a divisor enumeration is attempted.
const DIVISOR_LIMIT: u128 = 100_000_000_000_000;
/// Largest range of `q` scanned for a definite form.
const ELLIPSE_SCAN_LIMIT: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryQuadratic {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    pub e: BigInt,
    pub f: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConicSolutions {
    /// The complete (finite) set of integer solutions, sorted.
    Finite(Vec<(BigInt, BigInt)>),
    /// No finiteness certificate; the reason is a short description.
    Unresolved(String),
}

impl BinaryQuadratic {
    pub fn from_i64(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> Self {
        BinaryQuadratic {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
            e: e.into(),
            f: f.into(),
        }
    }

    pub fn eval(&self, p: &BigInt, q: &BigInt) -> BigInt {
        &self.a * p * p + &self.b * p * q + &self.c * q * q + &self.d * p + &self.e * q + &self.f
    }

    /// Discriminant `b² − 4ac` of the quadratic part.
    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn solve(&self) -> ConicSolutions {
        let disc = self.discriminant();
        let mut result = if disc.is_negative() {
            self.solve_definite(&disc)
        } else if disc.is_zero() {
            ConicSolutions::Unresolved("degenerate quadratic part (discriminant 0)".into())
        } else {
            let s = disc.sqrt();
            if &s * &s == disc {
                self.solve_split(&s)
            } else {
                ConicSolutions::Unresolved(format!(
                    "indefinite quadratic part with non-square discriminant {disc}"
                ))
            }
        };
        if let ConicSolutions::Finite(sols) = &mut result {
            sols.sort();
            sols.dedup();
            debug_assert!(sols.iter().all(|(p, q)| self.eval(p, q).is_zero()));
        }
        result
    }

    fn solve_definite(&self, disc: &BigInt) -> ConicSolutions {
        // 4a·F = (2ap + bq + d)² − g(q) with
        // g(q) = disc·q² + (2bd − 4ae)·q + (d² − 4af).
        let two = BigInt::from(2);
        let four = BigInt::from(4);
        let beta = &two * &self.b * &self.d - &four * &self.a * &self.e;
        let gamma = &self.d * &self.d - &four * &self.a * &self.f;
        let g = |q: &BigInt| disc * q * q + &beta * q + &gamma;
        // g(q) ≥ 0 only between the real roots of g.
        let inner = &beta * &beta - &four * disc * &gamma;
        if inner.is_negative() {
            return ConicSolutions::Finite(Vec::new());
        }
        let root = inner.sqrt() + 1;
        let denom = -(&two * disc);
        let lo: BigInt = Integer::div_floor(&(&beta - &root), &denom) - 1;
        let hi: BigInt = Integer::div_ceil(&(&beta + &root), &denom) + 1;
        match (&hi - &lo).to_u64() {
            Some(span) if span <= ELLIPSE_SCAN_LIMIT => {}
            _ => return ConicSolutions::Unresolved("ellipse too large to scan".into()),
        }
        let two_a = &two * &self.a;
        let mut sols = Vec::new();
        let mut q = lo;
        while q <= hi {
            let gq = g(&q);
            if !gq.is_negative() {
                let u = gq.sqrt();
                if &u * &u == gq {
                    for u in [u.clone(), -u] {
                        let num = &u - &self.b * &q - &self.d;
                        if num.is_multiple_of(&two_a) {
                            sols.push((num / &two_a, q.clone()));
                        }
                    }
                }
            }
            q += 1;
        }
        ConicSolutions::Finite(sols)
    }

    fn solve_split(&self, s: &BigInt) -> ConicSolutions {
        let two = BigInt::from(2);
        let four = BigInt::from(4);
        // m·Q = L1·L2 with integer linear forms L = (coef of p, coef of q).
        let (m, l1, l2) = if !self.a.is_zero() {
            (
                &four * &self.a,
                (&two * &self.a, &self.b - s),
                (&two * &self.a, &self.b + s),
            )
        } else if !self.c.is_zero() {
            (
                &four * &self.c,
                (&self.b - s, &two * &self.c),
                (&self.b + s, &two * &self.c),
            )
        } else {
            (
                BigInt::one(),
                (self.b.clone(), BigInt::zero()),
                (BigInt::zero(), BigInt::one()),
            )
        };
        let det = &l1.0 * &l2.1 - &l1.1 * &l2.0;
        debug_assert!(!det.is_zero());
        // m·(d, e) = α·L1 + β·L2.
        let md = &m * &self.d;
        let me = &m * &self.e;
        let alpha = BigRational::new(&md * &l2.1 - &me * &l2.0, det.clone());
        let beta = BigRational::new(&l1.0 * &me - &l1.1 * &md, det.clone());
        // m·F = (L1 + β)(L2 + α) + m·f − αβ.
        let n = &alpha * &beta - BigRational::from_integer(&m * &self.f);
        let den = alpha.denom().lcm(beta.denom());
        let den_r = BigRational::from_integer(den.clone());
        let shift1 = (&beta * &den_r).to_integer();
        let shift2 = (&alpha * &den_r).to_integer();
        let target = (&n * &den_r * &den_r).to_integer();
        // M1 = den·L1 + shift1, M2 = den·L2 + shift2, M1·M2 = target.
        let row1 = (&den * &l1.0, &den * &l1.1);
        let row2 = (&den * &l2.0, &den * &l2.1);

        if target.is_zero() {
            let line_has_points = |row: &(BigInt, BigInt), rhs: &BigInt| {
                let g = row.0.gcd(&row.1);
                rhs.is_multiple_of(&g)
            };
            if line_has_points(&row1, &-&shift1) || line_has_points(&row2, &-&shift2) {
                return ConicSolutions::Unresolved(
                    "conic degenerates to lines with integer points".into(),
                );
            }
            return ConicSolutions::Finite(Vec::new());
        }

        let Some(divisors) = positive_divisors(&target) else {
            return ConicSolutions::Unresolved(format!("cannot enumerate divisors of {target}"));
        };
        let det_rows = &row1.0 * &row2.1 - &row1.1 * &row2.0;
        let mut sols = Vec::new();
        for delta in divisors {
            for delta in [delta.clone(), -delta] {
                let r1 = &delta - &shift1;
                let r2 = &target / &delta - &shift2;
                let p_num = &r1 * &row2.1 - &row1.1 * &r2;
                let q_num = &row1.0 * &r2 - &r1 * &row2.0;
                if p_num.is_multiple_of(&det_rows) && q_num.is_multiple_of(&det_rows) {
                    sols.push((p_num / &det_rows, q_num / &det_rows));
                }
            }
        }
        ConicSolutions::Finite(sols)
    }
}

/// All positive divisors of `n ≠ 0`, or `None` when `|n|` exceeds the
/// trial-division limit.
pub fn positive_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u128()?;
    if n == 0 || n > DIVISOR_LIMIT {
        return None;
    }
    let mut primes: Vec<(u128, u32)> = Vec::new();
    let mut rest = n;
    let mut p = 2u128;
    while p * p <= rest {
        if rest % p == 0 {
            let mut k = 0;
            while rest % p == 0 {
                rest /= p;
                k += 1;
            }
            primes.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        primes.push((rest, 1));
    }
    let mut divs = vec![1u128];
    for (p, k) in primes {
        let mut next = Vec::with_capacity(divs.len() * (k as usize + 1));
        for d in &divs {
            let mut pk = 1u128;
            for _ in 0..=k {
                next.push(d * pk);
                pk *= p;
            }
        }
        divs = next;
    }
    divs.sort_unstable();
    Some(divs.into_iter().map(BigInt::from).collect())
}
