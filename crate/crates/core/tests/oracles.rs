// Cross-checks of the exact core against independent computations.

use lattice_schlicht::grunsky::{grunsky_coefficients_recursive, grunsky_table};
use lattice_schlicht::reconstruct::{catalog, CatalogEntry, RationalFn};
use lattice_schlicht::series::{pow_alpha, reciprocal_tail, taylor_of_rational};
use lattice_schlicht::{Rat, TaylorPrefix};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn r(s: &str) -> Rat {
    s.parse().unwrap()
}

fn random_prefix(rng: &mut StdRng, len: usize) -> TaylorPrefix {
    TaylorPrefix::new(
        (0..len)
            .map(|_| Rat::frac(rng.random_range(-8..=8), rng.random_range(1..=4)))
            .collect(),
    )
}

/// `c_{j,k}` for `j + k <= total` from `-log D(z, w)` with
/// `D = sum a_{i+j+1} z^i w^j`, expanding `log(1 + E) = sum (-1)^{m+1} E^m / m`.
fn bivariate_oracle(a: &TaylorPrefix, total: usize) -> Vec<Vec<Rat>> {
    let dense = a.dense();
    let zero = || vec![vec![Rat::zero(); total + 1]; total + 1];
    let mut e = zero();
    for i in 0..=total {
        for j in 0..=total - i {
            if i + j > 0 {
                e[i][j] = dense[i + j + 1].clone();
            }
        }
    }
    let mul = |x: &Vec<Vec<Rat>>, y: &Vec<Vec<Rat>>| {
        let mut out = zero();
        for i1 in 0..=total {
            for j1 in 0..=total - i1 {
                if x[i1][j1].is_zero() {
                    continue;
                }
                for i2 in 0..=total - i1 - j1 {
                    for j2 in 0..=total - i1 - j1 - i2 {
                        let v = &x[i1][j1] * &y[i2][j2];
                        out[i1 + i2][j1 + j2] += &v;
                    }
                }
            }
        }
        out
    };
    let mut log = zero();
    let mut power = e.clone();
    for m in 1..=total {
        let coef = Rat::frac(if m % 2 == 1 { 1 } else { -1 }, m as i64);
        for i in 0..=total {
            for j in 0..=total - i {
                let v = &coef * &power[i][j];
                log[i][j] += &v;
            }
        }
        power = mul(&power, &e);
    }
    log.into_iter()
        .map(|row| row.into_iter().map(|x| -x).collect())
        .collect()
}

#[test]
fn grunsky_paths_agree_with_each_other_and_the_oracle() {
    let mut rng = StdRng::seed_from_u64(0x6a09e667);
    for _ in 0..200 {
        let a = random_prefix(&mut rng, 9);
        let direct = grunsky_table(&a, 9).unwrap();
        let rec = grunsky_coefficients_recursive(&a, 9).unwrap();
        let oracle = bivariate_oracle(&a, 9);
        let b = reciprocal_tail(&a);
        for j in 0..=9 {
            for k in 0..=9 - j {
                assert_eq!(direct.c(j, k), rec.c(j, k), "c({j},{k}) for {a:?}");
                assert_eq!(direct.c(j, k), &oracle[j][k], "oracle c({j},{k}) for {a:?}");
            }
        }
        for k in 1..=8 {
            assert_eq!(rec.c(1, k), &b.coeffs()[k], "c(1,{k}) = b_{k}");
        }
    }
}

#[test]
fn sigma_of_the_prawitz_counterexample() {
    let g = RationalFn::from_i64(&[0, 2, 0, 0, 1], &[2, 0, 0, 2]).unwrap();
    let sigma = pow_alpha(&taylor_of_rational(&g, 16), &r("2/3"), 15).unwrap();
    let want = ["1/3", "-7/36", "19/162", "-143/1944", "281/5832"];
    for (i, w) in want.iter().enumerate() {
        assert_eq!(sigma.get(3 * (i + 1)), Some(&r(w)));
    }
    for n in (1..=15).filter(|n| n % 3 != 0) {
        assert!(sigma.get(n).unwrap().is_zero());
    }
}

#[test]
fn reciprocal_tail_of_the_area_extremal_example() {
    let f = RationalFn::from_i64(&[0, 2, -1], &[2]).unwrap();
    let b = reciprocal_tail(&taylor_of_rational(&f, 22));
    for n in 0..=20u32 {
        let want = Rat::one() / Rat::int(num_bigint::BigInt::from(2).pow(n + 1));
        assert_eq!(b.coeffs()[n as usize], want, "b_{n}");
    }
}

#[test]
fn catalog_json_round_trip() {
    for e in catalog() {
        let s = serde_json::to_string(&e).unwrap();
        let back: CatalogEntry = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }
    let s = r#"{"id":"x","numerator":[0,2,-1],"denominator":[2,-2],"provenance":"half_integer"}"#;
    let e: CatalogEntry = serde_json::from_str(s).unwrap();
    assert_eq!(
        e.function,
        lattice_schlicht::parse::parse_function("z(2-z)/2(1-z)").unwrap()
    );
    // not normalized: f'(0) = 2
    let bad = r#"{"numerator":[0,2],"denominator":[1]}"#;
    assert!(serde_json::from_str::<RationalFn>(bad).is_err());
}

#[test]
fn area_sum_bounded_for_catalog() {
    for e in catalog() {
        let b = reciprocal_tail(&taylor_of_rational(&e.function, 42));
        let s = lattice_schlicht::criteria::area_sum(&b);
        assert!(s <= Rat::one(), "{}: {s}", e.id);
    }
}
