//! Independent reference implementations and the property checks built on
//! them. Each check returns `Err` with a counterexample description.
//!
//! The oracles use plain machine integers and textbook formulas so that
//! they share no code with the library.

#![allow(dead_code, clippy::needless_range_loop)]

use hk_lattice::lattice::is_saturated;
use hk_lattice::mukai::Factoriality;
use hk_lattice::walls::SphericalEnumeration;
use hk_lattice::{
    enumerate_constrained_spherical, full_table, moduli_report, mukai_pair, tensor_by_polarization,
    BBForm, GramLattice, K3Context, LatticeVector, MukaiVector,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use std::collections::BTreeSet;

pub const RANDOM_CASES: u32 = 1000;

pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn to_i128(x: &BigInt) -> i128 {
    x.to_i128().expect("oracle values fit in i128")
}

/// `⟨(r,a,b),(r',a',b')⟩ = 2d·aa' − rb' − r'b`
pub fn mukai_pair_oracle(d: i64, x: [i64; 3], y: [i64; 3]) -> i128 {
    let [r, a, b] = x.map(i128::from);
    let [r2, a2, b2] = y.map(i128::from);
    2 * d as i128 * a * a2 - r * b2 - r2 * b
}

/// `v ⊗ O(nC)` for `C² = 2d`.
pub fn tensor_oracle(d: i64, v: [i64; 3], n: i64) -> [i128; 3] {
    let [r, a, b] = v.map(i128::from);
    let (d, n) = (d as i128, n as i128);
    [r, a + n * r, b + 2 * d * n * a + d * n * n * r]
}

fn gram_pair(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> i128 {
    let mut s = 0i128;
    for i in 0..g.len() {
        for j in 0..g.len() {
            s += g[i][j] as i128 * x[i] as i128 * y[j] as i128;
        }
    }
    s
}

fn vector(ctx: &K3Context, x: [i64; 3]) -> MukaiVector {
    ctx.vector(x[0], x[1], x[2])
}

fn coords3() -> impl Strategy<Value = [i64; 3]> {
    [
        -1_000_000i64..=1_000_000,
        -1_000_000i64..=1_000_000,
        -1_000_000i64..=1_000_000,
    ]
}

fn symmetric_gram(n: usize, range: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(-range..=range, n * (n + 1) / 2).prop_map(move |upper| {
        let mut g = vec![vec![0i64; n]; n];
        let mut it = upper.into_iter();
        for i in 0..n {
            for j in i..n {
                let v = it.next().unwrap();
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        g
    })
}

fn to_big_matrix(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|r| r.iter().map(|&x| big(x)).collect())
        .collect()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn finish<T: std::fmt::Debug>(
    r: Result<(), proptest::test_runner::TestError<T>>,
) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// Symmetry and bilinearity of the Mukai pairing and of general Gram
/// pairings, compared with the explicit formula.
pub fn pairing_bilinear_symmetric(cases: u32) -> Result<(), String> {
    let mut run = runner(cases);
    let mukai = (
        1i64..=50,
        coords3(),
        coords3(),
        coords3(),
        -1000i64..=1000,
        -1000i64..=1000,
    );
    finish(run.run(&mukai, |(d, x, y, z, s, t)| {
        let ctx = K3Context::new(d).unwrap();
        let (vx, vy, vz) = (vector(&ctx, x), vector(&ctx, y), vector(&ctx, z));
        let xy = mukai_pair(&vx, &vy).unwrap();
        check(to_i128(&xy) == mukai_pair_oracle(d, x, y), || {
            format!("formula mismatch {x:?} {y:?}")
        })?;
        check(xy == mukai_pair(&vy, &vx).unwrap(), || {
            format!("asymmetric at {x:?} {y:?}")
        })?;
        let combo = vx.scaled(&big(s)).add(&vy.scaled(&big(t)));
        let lhs = mukai_pair(&combo, &vz).unwrap();
        let rhs = big(s) * mukai_pair(&vx, &vz).unwrap() + big(t) * mukai_pair(&vy, &vz).unwrap();
        check(lhs == rhs, || {
            format!("not linear at {x:?} {y:?} {z:?} s={s} t={t}")
        })
    }))?;

    let mut run = runner(cases);
    let general = (1usize..=5).prop_flat_map(|n| {
        (
            symmetric_gram(n, 20),
            proptest::collection::vec(-1000i64..=1000, n),
            proptest::collection::vec(-1000i64..=1000, n),
            proptest::collection::vec(-1000i64..=1000, n),
            -50i64..=50,
        )
    });
    finish(run.run(&general, |(g, x, y, z, s)| {
        let lattice = GramLattice::new(to_big_matrix(&g)).unwrap();
        let lv = |v: &[i64]| LatticeVector::from_i64s(v);
        let xy = lattice.pair(&lv(&x), &lv(&y)).unwrap();
        check(to_i128(&xy) == gram_pair(&g, &x, &y), || {
            format!("Gram pairing mismatch {g:?}")
        })?;
        check(xy == lattice.pair(&lv(&y), &lv(&x)).unwrap(), || {
            "asymmetric".into()
        })?;
        let sx_plus_z: Vec<i64> = x.iter().zip(&z).map(|(a, b)| s * a + b).collect();
        let lhs = lattice.pair(&lv(&sx_plus_z), &lv(&y)).unwrap();
        let rhs = big(s) * xy + lattice.pair(&lv(&z), &lv(&y)).unwrap();
        check(lhs == rhs, || format!("not linear for {g:?}"))
    }))
}

/// Exact rank over ℚ by fraction elimination.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(big(x)))
                .collect()
        })
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                for j in 0..cols {
                    let delta = &f * &m[rank][j];
                    m[i][j] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by cofactor expansion.
pub fn cofactor_det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * cofactor_det(&minor)
            })
            .sum(),
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Rows of full rank `k` span a saturated sublattice iff their maximal
/// minors are coprime.
pub fn minors_gcd(rows: &[Vec<i128>]) -> i128 {
    let k = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    subsets(n, k).iter().fold(0, |g, cols| {
        let sub: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c]).collect())
            .collect();
        gcd(g, cofactor_det(&sub))
    })
}

/// Orthogonal complements in random nondegenerate lattices of rank ≤ 5:
/// orthogonality, saturation, rank and induced Gram matrix.
pub fn complement_saturation(cases: u32) -> Result<(), String> {
    let mut run = runner(cases);
    let strategy = (2usize..=5).prop_flat_map(|n| {
        (
            symmetric_gram(n, 6),
            (1usize..n).prop_flat_map(move |k| {
                proptest::collection::vec(proptest::collection::vec(-4i64..=4, n), k)
            }),
        )
    });
    finish(run.run(&strategy, |(g, gens)| {
        let g128: Vec<Vec<i128>> = g
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        prop_assume!(cofactor_det(&g128) != 0);
        let lattice = GramLattice::new(to_big_matrix(&g)).unwrap();
        let gen_vectors: Vec<LatticeVector> =
            gens.iter().map(|v| LatticeVector::from_i64s(v)).collect();
        prop_assume!(gen_vectors.iter().any(|v| !v.is_zero()));
        let comp = lattice
            .orthogonal_complement(&gen_vectors)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let n = g.len();
        let basis: Vec<Vec<i64>> = comp
            .basis
            .iter()
            .map(|b| b.coords().iter().map(|x| x.to_i64().unwrap()).collect())
            .collect();
        check(basis.len() == n - rational_rank(&gens), || {
            format!("rank of complement wrong for {g:?} {gens:?}")
        })?;
        for b in &basis {
            for x in &gens {
                check(gram_pair(&g, b, x) == 0, || {
                    format!("{b:?} not orthogonal to {x:?}")
                })?;
            }
        }
        if !basis.is_empty() {
            check(rational_rank(&basis) == basis.len(), || {
                "complement basis is dependent".into()
            })?;
            let rows: Vec<Vec<i128>> = basis
                .iter()
                .map(|r| r.iter().map(|&x| x as i128).collect())
                .collect();
            check(minors_gcd(&rows) == 1, || {
                format!("complement of {gens:?} in {g:?} not saturated")
            })?;
            let rows_big: Vec<Vec<BigInt>> = basis
                .iter()
                .map(|r| r.iter().map(|&x| big(x)).collect())
                .collect();
            check(is_saturated(&rows_big), || {
                "library saturation test disagrees".into()
            })?;
        }
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                check(
                    to_i128(&comp.gram[i][j]) == gram_pair(&g, &basis[i], &basis[j]),
                    || "induced Gram wrong".into(),
                )?;
            }
        }
        Ok(())
    }))
}

/// `v ↦ v ⊗ O(nC)` is an isometry and `T_n ∘ T_m = T_{n+m}`.
pub fn tensor_isometry_group_law(cases: u32) -> Result<(), String> {
    let mut run = runner(cases);
    let strategy = (
        1i64..=50,
        coords3(),
        coords3(),
        -1000i64..=1000,
        -1000i64..=1000,
    );
    finish(run.run(&strategy, |(d, v, w, n, m)| {
        let ctx = K3Context::new(d).unwrap();
        let (vv, vw) = (vector(&ctx, v), vector(&ctx, w));
        let tv = tensor_by_polarization(&vv, &big(n));
        let got = [tv.r(), tv.a(), tv.b()].map(to_i128);
        check(got == tensor_oracle(d, v, n), || {
            format!("tensor formula mismatch d={d} v={v:?} n={n}")
        })?;
        let tw = tensor_by_polarization(&vw, &big(n));
        check(
            mukai_pair(&tv, &tw).unwrap() == mukai_pair(&vv, &vw).unwrap(),
            || format!("not an isometry d={d} n={n}"),
        )?;
        let composed = tensor_by_polarization(&tensor_by_polarization(&vv, &big(m)), &big(n));
        check(composed == tensor_by_polarization(&vv, &big(n + m)), || {
            format!("group law fails n={n} m={m}")
        })?;
        check(tensor_by_polarization(&vv, &BigInt::zero()) == vv, || {
            "T_0 is not the identity".into()
        })
    }))
}

/// Exhaustive triple loop over `|r|, |a|, |b| ≤ bound`, in canonical form:
/// up to sign for `k = 0`, as is otherwise.
pub fn spherical_box_oracle(d: i64, v0: [i64; 3], k: i64, bound: i64) -> BTreeSet<[i64; 3]> {
    let mut out = BTreeSet::new();
    for r in -bound..=bound {
        for a in -bound..=bound {
            for b in -bound..=bound {
                let x = [r, a, b];
                if mukai_pair_oracle(d, x, x) != -2 || mukai_pair_oracle(d, x, v0) != k as i128 {
                    continue;
                }
                let first = x.iter().copied().find(|&c| c != 0).unwrap_or(0);
                out.insert(if k == 0 && first < 0 { [-r, -a, -b] } else { x });
            }
        }
    }
    out
}

/// Primitive `v0` with `v0² = 2` and coordinates in `[-h, h]`.
pub fn square_two_vectors(d: i64, h: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for r in -h..=h {
        for a in -h..=h {
            for b in -h..=h {
                let v = [r, a, b];
                let content = v.iter().fold(0i128, |g, &c| gcd(g, c as i128));
                if content == 1 && mukai_pair_oracle(d, v, v) == 2 {
                    out.push(v);
                }
            }
        }
    }
    out
}

fn enumeration_set(e: &SphericalEnumeration) -> BTreeSet<[i64; 3]> {
    e.classes
        .iter()
        .map(|x| [x.r(), x.a(), x.b()].map(|c| c.to_i64().unwrap()))
        .collect()
}

/// Library enumeration equals the exhaustive box scan for every `d ≤ 3`,
/// bound `≤ 6`, pairing value in `[-2, 4]` and `v0` of square 2 with small
/// coordinates. Partner pairs must satisfy `x + x' = k·v0`.
pub fn enumeration_matches_box_scan() -> Result<(), String> {
    for d in 1..=3i64 {
        let ctx = K3Context::new(d).unwrap();
        for v0 in square_two_vectors(d, 2) {
            let vv0 = vector(&ctx, v0);
            for k in -2..=4i64 {
                for bound in 1..=6i64 {
                    let e = enumerate_constrained_spherical(&vv0, &big(k), &big(bound))
                        .map_err(|err| format!("d={d} v0={v0:?} k={k} bound={bound}: {err}"))?;
                    let got = enumeration_set(&e);
                    let want = spherical_box_oracle(d, v0, k, bound);
                    if got != want || got.len() != e.classes.len() {
                        return Err(format!(
                            "d={d} v0={v0:?} k={k} bound={bound}: library {got:?}, box scan {want:?}"
                        ));
                    }
                    for [i, j] in &e.partners {
                        let sum = e.classes[*i].add(&e.classes[*j]);
                        if sum != vv0.scaled(&big(k)) {
                            return Err(format!(
                                "bad partner pair {} {}",
                                e.classes[*i], e.classes[*j]
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

/// `D0^{e0} D1^{e1}` for a rank-2 form by the multinomial theorem:
/// `q(t0 D0 + t1 D1) = g00 t0² + 2 g01 t0 t1 + g11 t1²`.
pub fn fujiki_multinomial_oracle(g: [[i64; 2]; 2], n: u32, c: i64, e0: u32) -> BigRational {
    let mut coef = BigInt::zero();
    for i in 0..=n {
        for j in 0..=n - i {
            let k = n - i - j;
            if 2 * i + j != e0 {
                continue;
            }
            let multinomial = factorial(n) / (factorial(i) * factorial(j) * factorial(k));
            coef +=
                multinomial * big(g[0][0]).pow(i) * big(2 * g[0][1]).pow(j) * big(g[1][1]).pow(k);
        }
    }
    let e1 = 2 * n - e0;
    BigRational::new(
        big(c) * coef * factorial(e0) * factorial(e1),
        factorial(2 * n),
    )
}

/// Every entry of `full_table` for random rank-2 forms with `n ≤ 5`.
pub fn fujiki_matches_multinomial(cases: u32) -> Result<(), String> {
    let mut run = runner(cases);
    let strategy = (-6i64..=6, -6i64..=6, -6i64..=6, 1u32..=5, 1i64..=2000);
    finish(run.run(&strategy, |(g00, g01, g11, n, c)| {
        let form = BBForm::from_i64(&[&[g00, g01], &[g01, g11]], n, c).unwrap();
        let table = full_table(&form).map_err(|e| TestCaseError::fail(e.to_string()))?;
        check(table.entries.len() == 2 * n as usize + 1, || {
            "table size".into()
        })?;
        for (e, value) in &table.entries {
            let want = fujiki_multinomial_oracle([[g00, g01], [g01, g11]], n, c, e[0]);
            check(*value == want, || {
                format!("g=[[{g00},{g01}],[{g01},{g11}]] n={n} c={c} e={e:?}")
            })?;
        }
        Ok(())
    }))
}

/// `v_k = (0, 1, k − 2)` on the degree-2 K3: `M_{2v_k}` is factorial
/// exactly for even `k`.
pub fn factoriality_alternates() -> Result<(), String> {
    let ctx = K3Context::degree_two();
    for k in -4..=5i64 {
        let report = moduli_report(2, &ctx.vector(0, 1, k - 2)).map_err(|e| e.to_string())?;
        let want = if k % 2 == 0 {
            Factoriality::Factorial
        } else {
            Factoriality::TwoFactorial
        };
        if report.factoriality != want || report.dimension != big(10) {
            return Err(format!(
                "k={k}: {:?}, dimension {}",
                report.factoriality, report.dimension
            ));
        }
    }
    Ok(())
}

/// `div(v)` divides every pairing `v·u`, and some basis pairing attains it.
pub fn divisibility_divides_pairings(cases: u32) -> Result<(), String> {
    let mut run = runner(cases);
    let strategy = (
        1i64..=20,
        [-50i64..=50, -50i64..=50, -50i64..=50],
        coords3(),
    );
    finish(run.run(&strategy, |(d, v, u)| {
        prop_assume!(v != [0, 0, 0]);
        let ctx = K3Context::new(d).unwrap();
        let div = ctx
            .lattice()
            .divisibility(&LatticeVector::from_i64s(&v))
            .unwrap();
        let units = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let want = units
            .iter()
            .fold(0i128, |g, e| gcd(g, mukai_pair_oracle(d, v, *e)));
        check(to_i128(&div) == want, || {
            format!("divisibility of {v:?} with d={d}")
        })?;
        check(mukai_pair_oracle(d, v, u) % want == 0, || {
            "does not divide".into()
        })
    }))
}
