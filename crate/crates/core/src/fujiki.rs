//! Top intersection numbers from the Beauville–Bogomolov form.
//!
//! The relation used throughout is `∫ α^{2n} = c · q(α)^n`. Writing
//! `α = Σ tᵢ Dᵢ` and comparing coefficients of `Π tᵢ^{eᵢ}` gives
//!
//! ```text
//! D^e = c · [t^e] q(Σ tᵢ Dᵢ)^n · Π eᵢ! / (2n)!
//! ```
//!
//! Everything is exact; no floating point is involved.

use crate::error::{usage, Error, Result};
use crate::num::{parse_rational, rational_to_json, render_rational};
use crate::poly::{resultant, Poly, UniPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::ser::{Serialize, SerializeMap, SerializeStruct, Serializer};

pub const OG10_FUJIKI_CONSTANT: i64 = 945;
pub const OG10_HALF_DIMENSION: u32 = 5;
/// Largest rank accepted by [`full_table`].
pub const MAX_TABLE_RANK: usize = 4;
/// Largest number of monomials an expansion may produce.
const MAX_MONOMIALS: u64 = 500_000;

pub const CONVENTION_NOTE: &str = "intersection numbers use ∫α^{2n} = c·q(α)^n; the alternative \
placement q(α)^n = c·α^{2n} cannot reproduce L^5Θ^5 = 120 together with q(L,Θ) = 1 when c = 945";

/// A Beauville–Bogomolov form on a chosen set of divisor classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BBForm {
    gram: Vec<Vec<BigRational>>,
    n: u32,
    c: BigRational,
}

impl BBForm {
    pub fn new(gram: Vec<Vec<BigRational>>, n: u32, c: BigRational) -> Result<Self> {
        check_shape(gram.len(), gram.iter().map(Vec::len))?;
        for i in 0..gram.len() {
            for j in i + 1..gram.len() {
                if gram[i][j] != gram[j][i] {
                    return usage(format!("BB Gram matrix is not symmetric at ({i},{j})"));
                }
            }
        }
        check_n_c(n, &c)?;
        Ok(BBForm { gram, n, c })
    }

    pub fn from_i64(rows: &[&[i64]], n: u32, c: i64) -> Result<Self> {
        let gram = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| BigRational::from_integer(x.into()))
                    .collect()
            })
            .collect();
        BBForm::new(gram, n, BigRational::from_integer(c.into()))
    }

    /// `⟨L, Θ⟩` on the intermediate Jacobian fibration: `q(L) = 0`,
    /// `q(L,Θ) = 1`, `q(Θ) = −2`, with `n = 5`, `c = 945`.
    pub fn og10_l_theta() -> Self {
        BBForm::from_i64(
            &[&[0, 1], &[1, -2]],
            OG10_HALF_DIMENSION,
            OG10_FUJIKI_CONSTANT,
        )
        .expect("preset is valid")
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<BigRational>] {
        &self.gram
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn c(&self) -> &BigRational {
        &self.c
    }

    fn entry_polys(&self) -> Vec<Vec<Poly>> {
        let nvars = self.rank();
        self.gram
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| Poly::constant(nvars, x.clone()))
                    .collect()
            })
            .collect()
    }
}

fn check_shape(rank: usize, row_lens: impl Iterator<Item = usize>) -> Result<()> {
    if rank == 0 {
        return usage("BB Gram matrix must have positive rank");
    }
    for len in row_lens {
        if len != rank {
            return usage(format!(
                "BB Gram matrix is not square ({rank} rows, a row of length {len})"
            ));
        }
    }
    Ok(())
}

fn check_n_c(n: u32, c: &BigRational) -> Result<()> {
    if n == 0 {
        return usage("half-dimension n must be positive");
    }
    if !c.is_positive() {
        return usage(format!(
            "Fujiki constant must be positive, got {}",
            render_rational(c)
        ));
    }
    Ok(())
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn guard_expansion(rank: usize, extra: usize, n: u32) -> Result<()> {
    let count = binomial(2 * n as u64 + (rank + extra) as u64, (rank + extra) as u64);
    match count.to_u64() {
        Some(c) if c <= MAX_MONOMIALS => Ok(()),
        _ => Err(Error::Resource(format!(
            "expanding q^{n} in {rank} classes would produce more than {MAX_MONOMIALS} monomials"
        ))),
    }
}

/// `q(Σ tᵢ Dᵢ)^n` with `t` the first `rank` variables.
fn expand(entries: &[Vec<Poly>], n: u32) -> Poly {
    let rank = entries.len();
    let nvars = entries[0][0].nvars();
    let mut q = Poly::zero(nvars);
    for i in 0..rank {
        for j in 0..rank {
            let term = entries[i][j]
                .mul(&Poly::var(nvars, i))
                .mul(&Poly::var(nvars, j));
            q = q.add(&term);
        }
    }
    q.pow(n)
}

fn check_exponents(exponents: &[u32], rank: usize, n: u32) -> Result<()> {
    if exponents.len() != rank {
        return usage(format!(
            "exponent tuple has {} entries but the form has rank {rank}",
            exponents.len()
        ));
    }
    let sum: u64 = exponents.iter().map(|&e| e as u64).sum();
    if sum != 2 * n as u64 {
        return usage(format!("exponents sum to {sum}, expected 2n = {}", 2 * n));
    }
    Ok(())
}

/// `c · Π eᵢ! / (2n)!`
fn normalisation(exponents: &[u32], n: u32, c: &BigRational) -> BigRational {
    let num: BigInt = exponents.iter().map(|&e| factorial(e)).product();
    c * BigRational::new(num, factorial(2 * n))
}

fn intersection_from(expansion: &Poly, exponents: &[u32], n: u32, c: &BigRational) -> Poly {
    expansion
        .coefficient_of_prefix(exponents)
        .scale(&normalisation(exponents, n, c))
}

/// The intersection number `Π Dᵢ^{eᵢ}` with `Σ eᵢ = 2n`.
pub fn top_intersection(form: &BBForm, exponents: &[u32]) -> Result<BigRational> {
    check_exponents(exponents, form.rank(), form.n)?;
    guard_expansion(form.rank(), 0, form.n)?;
    let expansion = expand(&form.entry_polys(), form.n);
    Ok(intersection_from(&expansion, exponents, form.n, &form.c).constant_term())
}

/// All top intersection numbers of a form, keyed by exponent tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionTable {
    pub rank: usize,
    pub n: u32,
    /// Entries in decreasing lexicographic order of the exponent tuple.
    pub entries: Vec<(Vec<u32>, BigRational)>,
}

impl IntersectionTable {
    pub fn get(&self, exponents: &[u32]) -> Option<&BigRational> {
        self.entries
            .iter()
            .find(|(e, _)| e == exponents)
            .map(|(_, v)| v)
    }

    /// Fails with a diagnostic naming the first non-integral entry.
    pub fn check_integral(&self) -> Result<()> {
        match self.entries.iter().find(|(_, v)| !v.is_integer()) {
            Some((e, v)) => Err(Error::Inconsistency(format!(
                "intersection number for exponents {} is {}, not an integer",
                key(e),
                render_rational(v)
            ))),
            None => Ok(()),
        }
    }
}

fn key(e: &[u32]) -> String {
    e.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

impl Serialize for IntersectionTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.entries.len()))?;
        for (e, v) in &self.entries {
            map.serialize_entry(&key(e), &rational_to_json(v))?;
        }
        map.end()
    }
}

/// Compositions of `total` into `parts` non-negative parts, in decreasing
/// lexicographic order.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn full_table(form: &BBForm) -> Result<IntersectionTable> {
    if form.rank() > MAX_TABLE_RANK {
        return Err(Error::Resource(format!(
            "full tables are limited to rank ≤ {MAX_TABLE_RANK}, got {}",
            form.rank()
        )));
    }
    guard_expansion(form.rank(), 0, form.n)?;
    let expansion = expand(&form.entry_polys(), form.n);
    let entries = compositions(2 * form.n, form.rank())
        .into_iter()
        .map(|e| {
            let v = intersection_from(&expansion, &e, form.n, &form.c).constant_term();
            (e, v)
        })
        .collect();
    Ok(IntersectionTable {
        rank: form.rank(),
        n: form.n,
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplateEntry {
    Known(BigRational),
    Unknown(String),
}

/// A symmetric Gram matrix in which some entries are named unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramTemplate {
    entries: Vec<Vec<TemplateEntry>>,
    n: u32,
    c: BigRational,
}

/// At most this many distinct unknowns are supported.
pub const MAX_UNKNOWNS: usize = 2;

impl GramTemplate {
    pub fn new(entries: Vec<Vec<TemplateEntry>>, n: u32, c: BigRational) -> Result<Self> {
        check_shape(entries.len(), entries.iter().map(Vec::len))?;
        for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                if entries[i][j] != entries[j][i] {
                    return usage(format!("template is not symmetric at ({i},{j})"));
                }
            }
        }
        check_n_c(n, &c)?;
        let t = GramTemplate { entries, n, c };
        let unknowns = t.unknowns();
        if unknowns.len() > MAX_UNKNOWNS {
            return usage(format!(
                "at most {MAX_UNKNOWNS} unknown entries are supported, got {}: {}",
                unknowns.len(),
                unknowns.join(", ")
            ));
        }
        Ok(t)
    }

    /// Parses rows separated by `;` and entries by `,`. Entries are
    /// integers, `p/q` rationals or identifiers naming unknowns.
    pub fn parse(text: &str, n: u32, c: BigRational) -> Result<Self> {
        let entries = text
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|cell| {
                        let cell = cell.trim();
                        if let Some(q) = parse_rational(cell) {
                            Ok(TemplateEntry::Known(q))
                        } else if is_identifier(cell) {
                            Ok(TemplateEntry::Unknown(cell.to_string()))
                        } else {
                            usage(format!("cannot parse template entry {cell:?}"))
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GramTemplate::new(entries, n, c)
    }

    /// Names of the unknowns in row-major order of first appearance.
    pub fn unknowns(&self) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        for row in &self.entries {
            for e in row {
                if let TemplateEntry::Unknown(name) = e {
                    if !names.contains(name) {
                        names.push(name.clone());
                    }
                }
            }
        }
        names
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn c(&self) -> &BigRational {
        &self.c
    }

    /// Substitutes values for every unknown.
    pub fn instantiate(&self, values: &[(String, BigRational)]) -> Result<BBForm> {
        let gram = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| match e {
                        TemplateEntry::Known(q) => Ok(q.clone()),
                        TemplateEntry::Unknown(name) => values
                            .iter()
                            .find(|(n, _)| n == name)
                            .map(|(_, v)| v.clone())
                            .ok_or_else(|| Error::Usage(format!("no value for unknown {name}"))),
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?;
        BBForm::new(gram, self.n, self.c.clone())
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// A prescribed intersection number `Π Dᵢ^{eᵢ} = value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionConstraint {
    pub exponents: Vec<u32>,
    pub value: BigRational,
}

impl IntersectionConstraint {
    pub fn new(exponents: Vec<u32>, value: BigRational) -> Self {
        IntersectionConstraint { exponents, value }
    }

    /// Parses `e0,e1,...=value`.
    pub fn parse(text: &str) -> Result<Self> {
        let Some((lhs, rhs)) = text.split_once('=') else {
            return usage(format!(
                "constraint {text:?} must look like e0,e1,...=value"
            ));
        };
        let exponents = lhs
            .split(',')
            .map(|e| {
                e.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Usage(format!("bad exponent {e:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let value =
            parse_rational(rhs).ok_or_else(|| Error::Usage(format!("bad value {rhs:?}")))?;
        Ok(IntersectionConstraint { exponents, value })
    }
}

/// Rational solutions of the coefficient equations for the unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramSolution {
    pub unknowns: Vec<String>,
    /// Each solution assigns every determined unknown.
    pub solutions: Vec<Vec<(String, BigRational)>>,
    /// Unknowns the constraints leave free.
    pub undetermined: Vec<String>,
    /// Factors whose roots are not rational, rendered as text. For an
    /// inconsistent system these are the offending equations.
    pub residuals: Vec<String>,
}

impl GramSolution {
    /// The unique value of `name`, if every solution agrees on one.
    pub fn unique_value(&self, name: &str) -> Option<&BigRational> {
        match self.solutions.as_slice() {
            [only] => only.iter().find(|(n, _)| n == name).map(|(_, v)| v),
            _ => None,
        }
    }
}

impl Serialize for GramSolution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Assignment<'a>(&'a [(String, BigRational)]);
        impl Serialize for Assignment<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (name, v) in self.0 {
                    map.serialize_entry(name, &rational_to_json(v))?;
                }
                map.end()
            }
        }
        let mut st = s.serialize_struct("GramSolution", 4)?;
        st.serialize_field("unknowns", &self.unknowns)?;
        let sols: Vec<Assignment> = self.solutions.iter().map(|a| Assignment(a)).collect();
        st.serialize_field("solutions", &sols)?;
        st.serialize_field("undetermined", &self.undetermined)?;
        st.serialize_field("residuals", &self.residuals)?;
        st.end()
    }
}

/// Matches the coefficients of the Fujiki identity against the constraints
/// and returns every rational solution for the unknown Gram entries.
pub fn solve_gram(
    template: &GramTemplate,
    constraints: &[IntersectionConstraint],
) -> Result<GramSolution> {
    let rank = template.rank();
    let names = template.unknowns();
    let k = names.len();
    for con in constraints {
        check_exponents(&con.exponents, rank, template.n)?;
    }
    guard_expansion(rank, k, template.n)?;
    let nvars = rank + k;
    let entries: Vec<Vec<Poly>> = template
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| match e {
                    TemplateEntry::Known(q) => Poly::constant(nvars, q.clone()),
                    TemplateEntry::Unknown(name) => {
                        let idx = names.iter().position(|n| n == name).unwrap();
                        Poly::var(nvars, rank + idx)
                    }
                })
                .collect()
        })
        .collect();
    let expansion = expand(&entries, template.n);
    let equations: Vec<Poly> = constraints
        .iter()
        .map(|con| {
            intersection_from(&expansion, &con.exponents, template.n, &template.c)
                .add(&Poly::constant(k, -con.value.clone()))
        })
        .collect();
    solve_system(&equations, &names)
}

fn render_all(eqs: &[Poly], names: &[String]) -> Vec<String> {
    eqs.iter()
        .map(|e| format!("{} = 0", e.render(names)))
        .collect()
}

fn underdetermined(free: &[String]) -> Error {
    Error::Usage(format!(
        "constraints do not determine the unknowns; free unknowns: {}",
        free.join(", ")
    ))
}

/// Common rational roots of univariate equations, plus residual factors.
fn common_roots(eqs: &[UniPoly]) -> Result<(Vec<BigRational>, Vec<UniPoly>)> {
    let g = eqs.iter().fold(UniPoly::zero(), |acc, e| acc.gcd(e));
    if g.is_zero() {
        return Ok((Vec::new(), Vec::new()));
    }
    let (roots, residual) = g.rational_roots()?;
    let residuals = if residual.degree().unwrap_or(0) > 0 {
        vec![residual]
    } else {
        Vec::new()
    };
    Ok((roots.into_iter().map(|(r, _)| r).collect(), residuals))
}

fn solve_system(equations: &[Poly], names: &[String]) -> Result<GramSolution> {
    let eqs: Vec<Poly> = equations.iter().filter(|e| !e.is_zero()).cloned().collect();
    let mut solution = GramSolution {
        unknowns: names.to_vec(),
        solutions: Vec::new(),
        undetermined: Vec::new(),
        residuals: Vec::new(),
    };
    if let Some(bad) = eqs.iter().find(|e| e.vars_used().is_empty()) {
        // a nonzero constant: no assignment can satisfy it
        solution.residuals = render_all(std::slice::from_ref(bad), names);
        return Ok(solution);
    }
    let mut used: Vec<usize> = eqs.iter().flat_map(Poly::vars_used).collect();
    used.sort_unstable();
    used.dedup();
    solution.undetermined = (0..names.len())
        .filter(|i| !used.contains(i))
        .map(|i| names[i].clone())
        .collect();
    match used.as_slice() {
        [] => Err(underdetermined(names)),
        [x] => {
            let unis: Vec<UniPoly> = eqs.iter().map(|e| e.to_univariate(*x).unwrap()).collect();
            let (roots, residuals) = common_roots(&unis)?;
            if roots.is_empty() && residuals.is_empty() {
                solution.residuals = render_all(&eqs, names);
            } else {
                solution.residuals = residuals
                    .iter()
                    .map(|r| format!("{} = 0", r.render(&names[*x])))
                    .collect();
            }
            solution.solutions = roots
                .into_iter()
                .map(|r| vec![(names[*x].clone(), r)])
                .collect();
            Ok(solution)
        }
        [x, y] => solve_two(&eqs, names, *x, *y, solution),
        _ => unreachable!("template allows at most two unknowns"),
    }
}

fn solve_two(
    eqs: &[Poly],
    names: &[String],
    x: usize,
    y: usize,
    mut solution: GramSolution,
) -> Result<GramSolution> {
    let only = |v: usize| -> Vec<UniPoly> {
        eqs.iter()
            .filter(|e| e.vars_used() == [v])
            .map(|e| e.to_univariate(v).unwrap())
            .collect()
    };
    let (in_x, in_y) = (only(x), only(y));
    // Eliminate down to a univariate condition on one variable.
    let (first, second, first_eqs) = if !in_x.is_empty() {
        (x, y, in_x)
    } else if !in_y.is_empty() {
        (y, x, in_y)
    } else {
        let mixed: Vec<&Poly> = eqs.iter().collect();
        if mixed.len() < 2 {
            return Err(underdetermined(names));
        }
        let mut res = UniPoly::zero();
        for a in 0..mixed.len() {
            for b in a + 1..mixed.len() {
                let r = resultant(
                    &mixed[a].to_bivariate(x, y).unwrap(),
                    &mixed[b].to_bivariate(x, y).unwrap(),
                );
                res = res.gcd(&r);
            }
        }
        if res.is_zero() {
            return Err(underdetermined(names));
        }
        (x, y, vec![res])
    };
    let (candidates, residuals) = common_roots(&first_eqs)?;
    for r in &residuals {
        solution
            .residuals
            .push(format!("{} = 0", r.render(&names[first])));
    }
    let mut free_second = false;
    for value in candidates {
        let reduced: Vec<Poly> = eqs
            .iter()
            .map(|e| e.substitute(first, &value))
            .filter(|e| !e.is_zero())
            .collect();
        if reduced.iter().any(|e| e.vars_used().is_empty()) {
            continue;
        }
        if reduced.is_empty() {
            free_second = true;
            solution.solutions.push(vec![(names[first].clone(), value)]);
            continue;
        }
        let unis: Vec<UniPoly> = reduced
            .iter()
            .map(|e| e.to_univariate(second).unwrap())
            .collect();
        let (roots, res2) = common_roots(&unis)?;
        for r in &res2 {
            solution.residuals.push(format!(
                "{} = 0 (with {} = {})",
                r.render(&names[second]),
                names[first],
                render_rational(&value)
            ));
        }
        for r in roots {
            let mut assignment = vec![
                (names[first].clone(), value.clone()),
                (names[second].clone(), r),
            ];
            assignment.sort_by_key(|(n, _)| names.iter().position(|m| m == n));
            solution.solutions.push(assignment);
        }
    }
    if free_second && !solution.undetermined.contains(&names[second]) {
        solution.undetermined.push(names[second].clone());
    }
    if solution.solutions.is_empty() && solution.residuals.is_empty() {
        solution.residuals = render_all(eqs, names);
    }
    Ok(solution)
}
