//! Scalar necessary conditions for univalence and the uniqueness test that
//! ends a branch.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::exact::Rat;
use crate::series::{pow_alpha, LaurentTail, TaylorPrefix};
use crate::Result;

/// Admissible next coefficients satisfy `(a - center)^2 <= radius_sq`.
/// A negative `radius_sq` marks a dead branch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalBound {
    pub center: Rat,
    pub radius_sq: Rat,
}

/// `sum_{n=1}^{M} n b_n^2` over the stored tail.
pub fn area_sum(b: &LaurentTail) -> Rat {
    area_sum_to(b, b.len().saturating_sub(1))
}

/// `sum_{n=1}^{upto} n b_n^2`; `upto` is clamped to the stored tail.
pub fn area_sum_to(b: &LaurentTail, upto: usize) -> Rat {
    b.coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .take(upto)
        .map(|(n, bn)| Rat::int(n as i64) * bn.square())
        .sum()
}

/// Interval for `a_{N+1}` given `a_2..a_N` and its tail `b_0..b_{N-2}`.
///
/// For the empty prefix the area theorem says nothing about `b_0 = -a_2`,
/// so the bound returned is de Branges' `|a_2| <= 2`.
pub fn next_interval(a: &TaylorPrefix, b: &LaurentTail) -> IntervalBound {
    let n = a.depth();
    debug_assert_eq!(b.len(), n - 1, "tail does not match prefix");
    if n == 1 {
        return IntervalBound {
            center: Rat::zero(),
            radius_sq: Rat::int(4),
        };
    }
    let dense = a.dense();
    let bs = b.coeffs();
    let center: Rat = -(2..=n).map(|k| &dense[k] * &bs[n - k]).sum::<Rat>();
    let remaining = Rat::one() - area_sum_to(b, n - 2);
    let radius_sq = remaining / Rat::int((n - 1) as i64);
    IntervalBound { center, radius_sq }
}

/// `|a_n| <= n` for every stored coefficient (`< n` when `strict`).
pub fn debranges_ok(a: &TaylorPrefix, strict: bool) -> bool {
    debranges_violation(a, strict).is_none()
}

/// First index `n` violating the de Branges bound.
pub fn debranges_violation(a: &TaylorPrefix, strict: bool) -> Option<usize> {
    a.coeffs().iter().enumerate().find_map(|(i, an)| {
        let n = i + 2;
        let bound = Rat::int(n as i64);
        let abs = an.abs();
        let bad = if strict { abs >= bound } else { abs > bound };
        bad.then_some(n)
    })
}

/// `alpha - sum_{n=1}^{M} (n - alpha) sigma_n^2`; negative means `f` is not
/// univalent.
pub fn prawitz_deficit(a: &TaylorPrefix, alpha: &Rat, m: usize) -> Result<Rat> {
    let sigma = pow_alpha(a, alpha, m)?;
    let mut deficit = alpha.clone();
    for (i, s) in sigma.coeffs.iter().enumerate() {
        let weight = Rat::int(i as i64 + 1) - alpha;
        deficit -= &(weight * s.square());
    }
    Ok(deficit)
}

/// The uniqueness condition `4 (1 - sum_{n=1}^{N-2} n b_n^2) < (N - 1) r0^2`.
///
/// When it holds, at most one function in the class extends `a_2..a_N`.
pub fn termination_ok(b: &LaurentTail, n: usize, r0: &Rat) -> bool {
    if n < 2 {
        return false;
    }
    debug_assert!(b.len() >= n - 1, "tail too short for N = {n}");
    let lhs = Rat::int(4) * (Rat::one() - area_sum_to(b, n - 2));
    let rhs = Rat::int((n - 1) as i64) * r0.square();
    lhs.cmp(&rhs) == Ordering::Less
}
