use hk_lattice::fujiki::compositions;
use hk_lattice::{
    full_table, solve_gram, top_intersection, BBForm, GramTemplate, IntersectionConstraint,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn gram3() -> impl Strategy<Value = [[i64; 3]; 3]> {
    prop::array::uniform6(-4i64..=4)
        .prop_map(|[a, b, c, d, e, f]| [[a, b, c], [b, d, e], [c, e, f]])
}

fn form(g: &[[i64; 3]; 3], n: u32, c: i64) -> BBForm {
    BBForm::from_i64(&[&g[0], &g[1], &g[2]], n, c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relabelling_divisors_permutes_exponents(g in gram3(), n in 1u32..=3, c in 1i64..100) {
        let perm = [2usize, 0, 1];
        let mut h = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                h[i][j] = g[perm[i]][perm[j]];
            }
        }
        let (f, fp) = (form(&g, n, c), form(&h, n, c));
        for e in compositions(2 * n, 3) {
            let mut ep = [0u32; 3];
            for i in 0..3 {
                ep[i] = e[perm[i]];
            }
            prop_assert_eq!(top_intersection(&f, &e).unwrap(), top_intersection(&fp, &ep).unwrap());
        }
    }

    #[test]
    fn scaling_the_form_scales_by_its_power(g in gram3(), n in 1u32..=3, lambda in -3i64..=3) {
        let scaled = g.map(|r| r.map(|x| lambda * x));
        let (t, ts) = (full_table(&form(&g, n, 7)).unwrap(), full_table(&form(&scaled, n, 7)).unwrap());
        let factor = BigRational::from_integer(BigInt::from(lambda).pow(n));
        for ((e, v), (es, vs)) in t.entries.iter().zip(&ts.entries) {
            prop_assert_eq!(e, es);
            prop_assert_eq!(vs, &(v * &factor));
        }
    }

    #[test]
    fn solving_recovers_a_known_entry(a in -5i64..=5, p in -5i64..=5, b in -5i64..=5, n in 1u32..=5) {
        let truth = full_table(&BBForm::from_i64(&[&[a, p], &[p, b]], n, 3).unwrap()).unwrap();
        let template = GramTemplate::parse(&format!("{a},x;x,{b}"), n, q(3)).unwrap();
        let constraints: Vec<_> = truth
            .entries
            .iter()
            .map(|(e, v)| IntersectionConstraint::new(e.clone(), v.clone()))
            .collect();
        let sol = solve_gram(&template, &constraints).unwrap();
        prop_assert!(sol.solutions.contains(&vec![("x".to_string(), q(p))]));
    }
}

#[test]
fn k3_surface_square() {
    // n = 1, c = 1: D² = q(D)
    let f = BBForm::from_i64(&[&[2, 1], &[1, -2]], 1, 1).unwrap();
    assert_eq!(top_intersection(&f, &[2, 0]).unwrap(), q(2));
    assert_eq!(top_intersection(&f, &[1, 1]).unwrap(), q(1));
    assert_eq!(top_intersection(&f, &[0, 2]).unwrap(), q(-2));
}

#[test]
fn og10_table_values() {
    let t = full_table(&BBForm::og10_l_theta()).unwrap();
    let values: Vec<i64> = t
        .entries
        .iter()
        .map(|(_, v)| v.to_integer().try_into().unwrap())
        .collect();
    assert_eq!(
        values,
        [0, 0, 0, 0, 0, 120, -720, 2520, -6720, 15120, -30240]
    );
}

#[test]
fn rational_gram_entries_are_supported() {
    let t = GramTemplate::parse("1/2,x;x,0", 1, q(1)).unwrap();
    let sol = solve_gram(&t, &[IntersectionConstraint::parse("1,1=3/4").unwrap()]).unwrap();
    assert_eq!(
        sol.unique_value("x"),
        Some(&BigRational::new(3.into(), 4.into()))
    );
}
