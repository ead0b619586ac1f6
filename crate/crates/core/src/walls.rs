//! Spherical classes, walls and the chamber decomposition of the movable
//! cone for moduli spaces `M_{2v0}` with `v0² = 2`.
//!
//! Walls come in two families. A spherical class `s` with `s·v0 = 0`
//! defines a divisorial (Brill–Noether) wall `s⊥ ∩ v0⊥`; a spherical class
//! `w` with `w·v0 = 2` defines a flopping wall `w⊥ ∩ v0⊥`. In rank 2 each
//! wall is a single ray of `NS = v0⊥`.

use crate::conic::{BinaryQuadratic, ConicSolutions};
use crate::error::{unsupported, usage, Error, Result};
use crate::lattice::{coordinates_in, GramLattice, LatticeVector};
use crate::mukai::{K3Context, MukaiVector};
use crate::num::{json_int, json_int_matrix, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Ordering;

/// Largest box half-width accepted for an uncertified scan.
const MAX_SCAN_BOUND: i64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum WallType {
    #[serde(rename = "divisorial_BNU")]
    DivisorialBnu,
    #[serde(rename = "flopping")]
    Flopping,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Completeness {
    ProvenFinite,
    BoundedSearchOnly,
}

impl Completeness {
    fn and(self, other: Completeness) -> Completeness {
        match (self, other) {
            (Completeness::ProvenFinite, Completeness::ProvenFinite) => Completeness::ProvenFinite,
            _ => Completeness::BoundedSearchOnly,
        }
    }
}

/// Spherical classes `x` with `x² = −2`, `x·v0 = k` and all coordinates
/// bounded by `bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SphericalEnumeration {
    pub v0: MukaiVector,
    #[serde(with = "json_int")]
    pub pairing_value: BigInt,
    #[serde(with = "json_int")]
    pub bound: BigInt,
    pub classes: Vec<MukaiVector>,
    /// Index pairs `(i, j)` with `classes[j] = k·v0 − classes[i]`.
    pub partners: Vec<[usize; 2]>,
    pub completeness: Completeness,
    /// How the solution set was obtained.
    pub certificate: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WallClass {
    pub cls: MukaiVector,
    pub wall_type: WallType,
    /// Primitive generator of `cls⊥ ∩ v0⊥` in `ns_basis` coordinates.
    pub wall_ray: LatticeVector,
    pub interpretation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ray {
    pub label: String,
    pub class: MukaiVector,
    pub coords: LatticeVector,
    pub interpretation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chamber {
    pub rays: [String; 2],
    pub model: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaData {
    pub label: String,
    pub class: MukaiVector,
    pub coords: LatticeVector,
    #[serde(with = "json_int")]
    pub square: BigInt,
    #[serde(with = "json_int")]
    pub pairing_with_lagrangian: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChamberReport {
    pub v0: MukaiVector,
    pub ns_basis: Vec<MukaiVector>,
    #[serde(with = "json_int_matrix")]
    pub ns_gram: IntMatrix,
    pub rays: Vec<Ray>,
    pub chambers: Vec<Chamber>,
    pub wall_classes: Vec<WallClass>,
    #[serde(with = "json_int")]
    pub enumeration_bound: BigInt,
    pub completeness: Completeness,
    pub theta: Option<ThetaData>,
    /// Class used to pick the half of the positive cone containing the rays.
    pub probe: MukaiVector,
}

fn check_og10_vector(v0: &MukaiVector) -> Result<()> {
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
    if sq != BigInt::from(2) {
        return unsupported(format!(
            "v0 = {v0} has square {sq}; walls are only computed for v0² = 2"
        ));
    }
    Ok(())
}

/// Sort key: smaller height first, then lexicographically larger `(r,a,b)`.
fn class_order(x: &MukaiVector, y: &MukaiVector) -> Ordering {
    x.height()
        .cmp(&y.height())
        .then_with(|| (y.r(), y.a(), y.b()).cmp(&(x.r(), x.a(), x.b())))
}

fn first_nonzero_positive(x: &MukaiVector) -> MukaiVector {
    if crate::num::leading_sign(x.coords().coords()) < 0 {
        x.neg()
    } else {
        x.clone()
    }
}

/// One solution of `c·x = k` over the integers.
fn particular_solution(c: &[BigInt], k: &BigInt) -> Option<Vec<BigInt>> {
    let mut g = BigInt::zero();
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(c.len());
    for ci in c {
        let ext = g.extended_gcd(ci);
        for x in coeffs.iter_mut() {
            *x = &*x * &ext.x;
        }
        coeffs.push(ext.y);
        g = ext.gcd;
    }
    if g.is_zero() {
        return k.is_zero().then(|| vec![BigInt::zero(); c.len()]);
    }
    if !k.is_multiple_of(&g) {
        return None;
    }
    let scale = k / &g;
    Some(coeffs.into_iter().map(|x| x * &scale).collect())
}

/// The full solution family, when it can be certified finite.
enum Family {
    Finite(Vec<MukaiVector>, String),
    Unresolved(String),
}

fn constrained_family(v0: &MukaiVector, k: &BigInt) -> Result<Family> {
    let ctx = v0.context();
    let lattice = ctx.lattice();
    let functional: Vec<BigInt> = (0..3)
        .map(|j| {
            let mut e = LatticeVector::zero(3);
            e.0[j] = BigInt::one();
            lattice.pair(&v0.coords(), &e)
        })
        .collect::<Result<_>>()?;
    let Some(xp) = particular_solution(&functional, k) else {
        return Ok(Family::Finite(
            Vec::new(),
            format!("x·v0 = {k} has no integer solution (divisibility of v0 does not divide {k})"),
        ));
    };
    let xp = LatticeVector::new(xp);
    let basis = lattice.orthogonal_complement(&[v0.coords()])?.basis;
    let (b1, b2) = (&basis[0], &basis[1]);
    let two = BigInt::from(2);
    let conic = BinaryQuadratic {
        a: lattice.square(b1)?,
        b: &two * lattice.pair(b1, b2)?,
        c: lattice.square(b2)?,
        d: &two * lattice.pair(&xp, b1)?,
        e: &two * lattice.pair(&xp, b2)?,
        f: lattice.square(&xp)? + &two,
    };
    Ok(match conic.solve() {
        ConicSolutions::Finite(points) => {
            let classes = points
                .iter()
                .map(|(p, q)| {
                    let x = xp.add(&b1.scaled(p)).add(&b2.scaled(q));
                    MukaiVector::from_coords(&ctx, &x)
                })
                .collect::<Result<Vec<_>>>()?;
            let how = if conic.discriminant().is_negative() {
                "definite residual form"
            } else {
                "residual form splits over Q"
            };
            Family::Finite(classes, format!("exact: {how}, {} solutions", points.len()))
        }
        ConicSolutions::Unresolved(why) => Family::Unresolved(why),
    })
}

/// Exhaustive scan of the box `|coords| ≤ bound`, solving the linear
/// constraint for one coordinate. Rows of the box are scanned in parallel
/// and merged in sorted order.
fn box_scan(v0: &MukaiVector, k: &BigInt, bound: i64) -> Result<Vec<MukaiVector>> {
    if bound > MAX_SCAN_BOUND {
        return Err(Error::Resource(format!(
            "uncertified box scan limited to bound ≤ {MAX_SCAN_BOUND}, got {bound}"
        )));
    }
    let ctx = v0.context();
    // x·v0 = −b0·r + 2d·a0·a − r0·b
    let c = [
        -v0.b().clone(),
        BigInt::from(2) * ctx.d() * v0.a(),
        -v0.r().clone(),
    ];
    let solve_idx = (0..3).find(|&j| !c[j].is_zero()).expect("v0 is nonzero");
    let free: Vec<usize> = (0..3).filter(|&j| j != solve_idx).collect();
    let target = BigInt::from(-2);
    let bound_big = BigInt::from(bound);
    let mut found: Vec<MukaiVector> = (-bound..=bound)
        .into_par_iter()
        .flat_map_iter(|s| {
            let (c, ctx, free, target, bound_big) = (&c, &ctx, &free, &target, &bound_big);
            (-bound..=bound).filter_map(move |t| {
                let mut x = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
                x[free[0]] = BigInt::from(s);
                x[free[1]] = BigInt::from(t);
                let rest = k - &c[free[0]] * &x[free[0]] - &c[free[1]] * &x[free[1]];
                if !rest.is_multiple_of(&c[solve_idx]) {
                    return None;
                }
                x[solve_idx] = rest / &c[solve_idx];
                if x[solve_idx].abs() > *bound_big {
                    return None;
                }
                let [r, a, b] = x;
                let v = MukaiVector::new(r, a, b, ctx.clone());
                (v.square() == *target).then_some(v)
            })
        })
        .collect();
    found.sort_by(class_order);
    Ok(found)
}

fn bound_to_i64(bound: &BigInt) -> Result<i64> {
    if !bound.is_positive() {
        return usage(format!("enumeration bound must be positive, got {bound}"));
    }
    bound
        .to_i64()
        .ok_or_else(|| Error::Resource(format!("enumeration bound {bound} is too large")))
}

/// Canonical representatives and partner pairs of a raw solution list.
fn canonicalize(
    v0: &MukaiVector,
    k: &BigInt,
    raw: Vec<MukaiVector>,
) -> (Vec<MukaiVector>, Vec<[usize; 2]>) {
    if k.is_zero() {
        let mut reps: Vec<MukaiVector> = raw.iter().map(first_nonzero_positive).collect();
        reps.sort_by(class_order);
        reps.dedup();
        return (reps, Vec::new());
    }
    let partner = |x: &MukaiVector| v0.scaled(k).add(&x.neg());
    let mut groups: Vec<Vec<MukaiVector>> = Vec::new();
    let mut seen: Vec<MukaiVector> = Vec::new();
    let mut sorted = raw;
    sorted.sort_by(class_order);
    sorted.dedup();
    for x in &sorted {
        if seen.contains(x) {
            continue;
        }
        let p = partner(x);
        let mut group = vec![x.clone()];
        if sorted.contains(&p) && p != *x {
            group.push(p.clone());
            seen.push(p);
        }
        seen.push(x.clone());
        groups.push(group);
    }
    let mut classes = Vec::new();
    let mut partners = Vec::new();
    for g in groups {
        let i = classes.len();
        if g.len() == 2 {
            partners.push([i, i + 1]);
        }
        classes.extend(g);
    }
    (classes, partners)
}

pub fn enumerate_constrained_spherical(
    v0: &MukaiVector,
    pairing_value: &BigInt,
    bound: &BigInt,
) -> Result<SphericalEnumeration> {
    check_og10_vector(v0)?;
    let bound_i = bound_to_i64(bound)?;
    let (raw, completeness, certificate) = match constrained_family(v0, pairing_value)? {
        Family::Finite(all, how) => {
            let inside: Vec<MukaiVector> = all
                .iter()
                .filter(|x| x.height() <= *bound)
                .cloned()
                .collect();
            let completeness = if inside.len() == all.len() {
                Completeness::ProvenFinite
            } else {
                Completeness::BoundedSearchOnly
            };
            (inside, completeness, how)
        }
        Family::Unresolved(why) => (
            box_scan(v0, pairing_value, bound_i)?,
            Completeness::BoundedSearchOnly,
            format!("box scan only: {why}"),
        ),
    };
    let (classes, partners) = canonicalize(v0, pairing_value, raw);
    Ok(SphericalEnumeration {
        v0: v0.clone(),
        pairing_value: pairing_value.clone(),
        bound: bound.clone(),
        classes,
        partners,
        completeness,
        certificate,
    })
}

/// Solution family used for chamber assembly: the exact set when it is
/// certified finite, the box scan otherwise. The flag reports whether the
/// box alone would have contained everything.
fn wall_family(
    v0: &MukaiVector,
    k: i64,
    bound: &BigInt,
) -> Result<(Vec<MukaiVector>, Completeness)> {
    let k = BigInt::from(k);
    match constrained_family(v0, &k)? {
        Family::Finite(all, _) => {
            let covered = all.iter().all(|x| x.height() <= *bound);
            let flag = if covered {
                Completeness::ProvenFinite
            } else {
                Completeness::BoundedSearchOnly
            };
            Ok((canonicalize(v0, &k, all).0, flag))
        }
        Family::Unresolved(_) => {
            let raw = box_scan(v0, &k, bound_to_i64(bound)?)?;
            Ok((canonicalize(v0, &k, raw).0, Completeness::BoundedSearchOnly))
        }
    }
}

/// Rank-2 geometry of `NS = v0⊥`: basis, Lagrangian class and probe.
struct NsPlane {
    lattice: GramLattice,
    ctx: K3Context,
    v0: MukaiVector,
    basis: Vec<LatticeVector>,
    gram: IntMatrix,
    lagrangian: LatticeVector,
    probe: LatticeVector,
    /// Sign making `cross(ℓ, probe)` positive in `ns_basis` coordinates.
    orientation: i32,
}

impl NsPlane {
    fn new(v0: &MukaiVector) -> Result<Self> {
        let ctx = v0.context();
        let lattice = ctx.lattice();
        let complement = lattice.orthogonal_complement(&[v0.coords()])?;
        if complement.basis.len() != 2 {
            return unsupported(format!(
                "NS has rank {}; chambers are only computed in rank 2",
                complement.basis.len()
            ));
        }
        if !v0.r().is_zero() {
            return unsupported(format!(
                "v0 = {v0} has nonzero rank; the Lagrangian class (0,0,1) is only orthogonal \
                 to v0 for sheaves supported on curves"
            ));
        }
        let lagrangian = LatticeVector::from_i64s(&[0, 0, 1]);
        let basis = complement.basis;
        // Probe: y + t·ℓ for a basis vector y with y·ℓ > 0 and the least t ≥ 1
        // making the square positive.
        let mut y = None;
        for b in &basis {
            let p = lattice.pair(b, &lagrangian)?;
            if !p.is_zero() {
                y = Some(if p.is_positive() { b.clone() } else { b.neg() });
                break;
            }
        }
        let y = y.ok_or_else(|| Error::Inconsistency("ℓ lies in the radical of NS".into()))?;
        let y_l = lattice.pair(&y, &lagrangian)?;
        let y_sq = lattice.square(&y)?;
        // (y + tℓ)² = y² + 2t·(y·ℓ)
        let needed: BigInt = Integer::div_floor(&(-&y_sq), &(BigInt::from(2) * &y_l)) + 1;
        let t = needed.max(BigInt::one());
        let probe = y.add(&lagrangian.scaled(&t));
        let mut plane = NsPlane {
            lattice,
            ctx,
            v0: v0.clone(),
            basis,
            gram: complement.gram,
            lagrangian,
            probe,
            orientation: 1,
        };
        let cross = cross(
            &plane.coords(&plane.lagrangian)?,
            &plane.coords(&plane.probe)?,
        );
        plane.orientation = if cross.is_negative() { -1 } else { 1 };
        Ok(plane)
    }

    fn coords(&self, x: &LatticeVector) -> Result<LatticeVector> {
        coordinates_in(&self.basis, x)
            .ok_or_else(|| Error::Inconsistency(format!("{x} does not lie in NS = v0⊥")))
    }

    fn mukai(&self, x: &LatticeVector) -> Result<MukaiVector> {
        MukaiVector::from_coords(&self.ctx, x)
    }

    /// Primitive generator of `cls⊥ ∩ v0⊥` on the probe side.
    fn wall_ray(&self, cls: &MukaiVector) -> Result<LatticeVector> {
        let c = self
            .lattice
            .orthogonal_complement(&[self.v0.coords(), cls.coords()])?;
        let [ray] = c.basis.as_slice() else {
            return Err(Error::Inconsistency(format!(
                "wall of {cls} is not a single ray"
            )));
        };
        self.oriented(ray)
    }

    fn oriented(&self, ray: &LatticeVector) -> Result<LatticeVector> {
        let s = self.lattice.pair(ray, &self.probe)?;
        if s.is_zero() {
            return Err(Error::Inconsistency(format!(
                "ray {ray} is orthogonal to the probe"
            )));
        }
        Ok(if s.is_negative() {
            ray.neg()
        } else {
            ray.clone()
        })
    }

    /// Angular order from ℓ inside the probe half-plane.
    fn angle_cmp(&self, x: &LatticeVector, y: &LatticeVector) -> Ordering {
        if x == y {
            return Ordering::Equal;
        }
        let (cx, cy) = (self.coords(x).unwrap(), self.coords(y).unwrap());
        let c = cross(&cx, &cy) * self.orientation;
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }

    /// The second isotropic ray of NS, when it is rational.
    fn other_isotropic(&self) -> Result<Option<LatticeVector>> {
        let (a, b, c) = (&self.gram[0][0], &self.gram[0][1], &self.gram[1][1]);
        let disc = b * b - a * c;
        if disc.is_negative() {
            return Ok(None);
        }
        let s = num_integer::Roots::sqrt(&disc);
        if &s * &s != disc {
            return Ok(None);
        }
        // a p² + 2b pq + c q² = 0
        let candidates: Vec<[BigInt; 2]> = if !a.is_zero() {
            vec![[-(b - &s), a.clone()], [-(b + &s), a.clone()]]
        } else {
            vec![
                [BigInt::one(), BigInt::zero()],
                [-c.clone(), BigInt::from(2) * b],
            ]
        };
        let l = self.coords(&self.lagrangian)?;
        for [p, q] in candidates {
            let cand = LatticeVector::new(vec![p, q]);
            if cand.is_zero() || cross(&cand, &l).is_zero() {
                continue;
            }
            let cand = cand.primitive_part();
            let x = self.basis[0]
                .scaled(&cand.0[0])
                .add(&self.basis[1].scaled(&cand.0[1]));
            return Ok(Some(self.oriented(&x)?));
        }
        Ok(None)
    }
}

fn cross(x: &LatticeVector, y: &LatticeVector) -> BigInt {
    &x.0[0] * &y.0[1] - &x.0[1] * &y.0[0]
}

/// True when `w` or its partner `2v0 − w` is `v(O_S)` up to twisting by
/// `O_S(nC)`, i.e. has the shape `(1, n, 1 + d·n²)`.
fn is_structure_sheaf_like(w: &MukaiVector, v0: &MukaiVector) -> bool {
    let like = |x: &MukaiVector| {
        x.r().is_one() && *x.b() == BigInt::one() + x.context().d() * x.a() * x.a()
    };
    like(w) || like(&v0.scaled(&BigInt::from(2)).add(&w.neg()))
}

struct Labels {
    lagrangian: &'static str,
    flop_prefix: &'static str,
    terminal: &'static str,
    theta: &'static str,
    nef: &'static str,
    flop_model: &'static str,
    lagrangian_note: &'static str,
    zero_section_flop: &'static str,
    other_flop: &'static str,
    divisorial: &'static str,
}

const MODULI_LABELS: Labels = Labels {
    lagrangian: "l",
    flop_prefix: "h0",
    terminal: "h",
    theta: "theta",
    nef: "Nef(M_2v0)",
    flop_model: "Nef(flop model)",
    lagrangian_note: "Lagrangian fibration (isotropic)",
    zero_section_flop: "Mukai flop of zero section",
    other_flop: "Mukai flop",
    divisorial: "divisorial contraction of theta",
};

const JACOBIAN_LABELS: Labels = Labels {
    lagrangian: "L",
    flop_prefix: "H0",
    terminal: "H",
    theta: "Theta",
    nef: "Nef(J)",
    flop_model: "p*Nef(N)",
    lagrangian_note: "Lagrangian fibration J -> P^5 (isotropic)",
    zero_section_flop: "Mukai flop p: J -> N of zero section",
    other_flop: "Mukai flop",
    divisorial: "divisorial contraction of Theta; exceptional image birational to LLSvS 8-fold",
};

/// Nef/movable chamber structure of `M_{2v0}` in its rank-2 NS lattice.
///
/// Rays run from the Lagrangian class `ℓ = (0,0,1)` through the flopping
/// walls inside the movable cone to the first divisorial wall. With
/// `relabel_as_intermediate_jacobian` the same lattice data carries the
/// labels of the intermediate Jacobian fibration `J`.
pub fn chamber_report(
    v0: &MukaiVector,
    bound: &BigInt,
    relabel_as_intermediate_jacobian: bool,
) -> Result<ChamberReport> {
    check_og10_vector(v0)?;
    bound_to_i64(bound)?;
    let labels = if relabel_as_intermediate_jacobian {
        &JACOBIAN_LABELS
    } else {
        &MODULI_LABELS
    };
    let plane = NsPlane::new(v0)?;

    let (divisorial, div_flag) = wall_family(v0, 0, bound)?;
    let (flopping, flop_flag) = wall_family(v0, 2, bound)?;
    let completeness = div_flag.and(flop_flag);

    let mut walls: Vec<(LatticeVector, WallType, MukaiVector)> = Vec::new();
    for cls in &divisorial {
        walls.push((plane.wall_ray(cls)?, WallType::DivisorialBnu, cls.clone()));
    }
    for cls in &flopping {
        walls.push((plane.wall_ray(cls)?, WallType::Flopping, cls.clone()));
    }
    walls.sort_by(|x, y| {
        plane
            .angle_cmp(&x.0, &y.0)
            .then_with(|| x.1.cmp(&y.1))
            .then_with(|| class_order(&x.2, &y.2))
    });

    let terminal = walls
        .iter()
        .find(|w| w.1 == WallType::DivisorialBnu)
        .map(|w| w.0.clone());
    let (terminal_ray, terminal_is_divisorial) = match terminal {
        Some(r) => (r, true),
        None => match plane.other_isotropic()? {
            Some(r) => (r, false),
            None => {
                return unsupported(
                    "no divisorial wall found and the positive cone has an irrational boundary",
                )
            }
        },
    };

    let inside = |ray: &LatticeVector| plane.angle_cmp(ray, &terminal_ray) == Ordering::Less;
    let mut interior: Vec<LatticeVector> = Vec::new();
    let mut wall_classes = Vec::new();
    for (ray, ty, cls) in &walls {
        let keep = match ty {
            WallType::Flopping => inside(ray),
            WallType::DivisorialBnu => terminal_is_divisorial && *ray == terminal_ray,
        };
        if !keep {
            continue;
        }
        let interpretation = match ty {
            WallType::Flopping if is_structure_sheaf_like(cls, v0) => labels.zero_section_flop,
            WallType::Flopping => labels.other_flop,
            WallType::DivisorialBnu => labels.divisorial,
        };
        if *ty == WallType::Flopping && !interior.contains(ray) {
            interior.push(ray.clone());
        }
        wall_classes.push(WallClass {
            cls: cls.clone(),
            wall_type: *ty,
            wall_ray: plane.coords(ray)?,
            interpretation: interpretation.to_string(),
        });
    }

    let mut rays = vec![Ray {
        label: labels.lagrangian.to_string(),
        class: plane.mukai(&plane.lagrangian)?,
        coords: plane.coords(&plane.lagrangian)?,
        interpretation: labels.lagrangian_note.to_string(),
    }];
    for (i, ray) in interior.iter().enumerate() {
        let label = if i == 0 {
            labels.flop_prefix.to_string()
        } else {
            format!("{}_{}", labels.flop_prefix, i + 1)
        };
        let interpretation = wall_classes
            .iter()
            .find(|w| {
                w.wall_type == WallType::Flopping
                    && plane.coords(ray).ok().as_ref() == Some(&w.wall_ray)
            })
            .map(|w| w.interpretation.clone())
            .unwrap_or_default();
        rays.push(Ray {
            label,
            class: plane.mukai(ray)?,
            coords: plane.coords(ray)?,
            interpretation,
        });
    }
    rays.push(Ray {
        label: labels.terminal.to_string(),
        class: plane.mukai(&terminal_ray)?,
        coords: plane.coords(&terminal_ray)?,
        interpretation: if terminal_is_divisorial {
            labels.divisorial.to_string()
        } else {
            "isotropic boundary of the positive cone".to_string()
        },
    });

    let chambers = rays
        .windows(2)
        .enumerate()
        .map(|(i, pair)| Chamber {
            rays: [pair[0].label.clone(), pair[1].label.clone()],
            model: match i {
                0 => labels.nef.to_string(),
                1 => labels.flop_model.to_string(),
                _ => format!("{} {}", labels.flop_model, i),
            },
        })
        .collect();

    let theta = match wall_classes
        .iter()
        .find(|w| w.wall_type == WallType::DivisorialBnu)
    {
        Some(w) => {
            let l = plane.lagrangian.clone();
            let s = w.cls.coords();
            let sl = plane.lattice.pair(&s, &l)?;
            let cls = if sl.is_negative() {
                w.cls.neg()
            } else {
                w.cls.clone()
            };
            let coords = plane.coords(&cls.coords())?;
            Some(ThetaData {
                label: labels.theta.to_string(),
                square: cls.square(),
                pairing_with_lagrangian: plane.lattice.pair(&cls.coords(), &l)?,
                class: cls,
                coords,
            })
        }
        None => None,
    };

    let ns_basis = plane
        .basis
        .iter()
        .map(|b| plane.mukai(b))
        .collect::<Result<Vec<_>>>()?;
    let report = ChamberReport {
        v0: v0.clone(),
        ns_basis,
        ns_gram: plane.gram.clone(),
        probe: plane.mukai(&plane.probe)?,
        rays,
        chambers,
        wall_classes,
        enumeration_bound: bound.clone(),
        completeness,
        theta,
    };
    check_report(&plane, &report)?;
    Ok(report)
}

/// Re-verifies the type invariants of a freshly built report.
fn check_report(plane: &NsPlane, report: &ChamberReport) -> Result<()> {
    let fail = |msg: String| Err(Error::Inconsistency(msg));
    let two = BigInt::from(2);
    for w in &report.wall_classes {
        if w.cls.square() != BigInt::from(-2) {
            return fail(format!("wall class {} is not spherical", w.cls));
        }
        let expected = match w.wall_type {
            WallType::DivisorialBnu => BigInt::zero(),
            WallType::Flopping => two.clone(),
        };
        if crate::mukai::mukai_pair(&w.cls, &report.v0)? != expected {
            return fail(format!(
                "wall class {} has the wrong pairing with v0",
                w.cls
            ));
        }
        if !w.wall_ray.content().is_one() {
            return fail(format!("wall ray {} is not primitive", w.wall_ray));
        }
        let ray = plane.basis[0]
            .scaled(&w.wall_ray.0[0])
            .add(&plane.basis[1].scaled(&w.wall_ray.0[1]));
        if !plane.lattice.pair(&ray, &w.cls.coords())?.is_zero() {
            return fail(format!("wall ray of {} is not orthogonal to it", w.cls));
        }
    }
    for pair in report.rays.windows(2) {
        if pair[0].class == pair[1].class {
            return fail(format!("repeated ray {}", pair[0].class));
        }
    }
    for r in &report.rays {
        if !plane
            .lattice
            .pair(&r.class.coords(), &plane.probe)?
            .is_positive()
        {
            return fail(format!("ray {} is not on the probe side", r.class));
        }
    }
    Ok(())
}
