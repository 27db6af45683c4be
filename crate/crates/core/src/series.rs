//! Truncated formal power series over [`Rat`].
//!
//! Every operation states how many coefficients it produces and refuses to
//! read past the end of its input; nothing is zero-filled.

use serde::{Deserialize, Serialize};

use crate::exact::Rat;
use crate::reconstruct::RationalFn;
use crate::{Error, Result};

/// `f(z) = z + a_2 z^2 + ... + a_N z^N + O(z^{N+1})`, with `a_1 = 1` implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TaylorPrefix {
    coeffs: Vec<Rat>,
}

impl TaylorPrefix {
    /// `coeffs` are `a_2, ..., a_N`.
    pub fn new(coeffs: Vec<Rat>) -> TaylorPrefix {
        TaylorPrefix { coeffs }
    }

    pub fn identity() -> TaylorPrefix {
        TaylorPrefix { coeffs: Vec::new() }
    }

    /// The identity `f(z) = z` known to depth `n`.
    pub fn identity_to(n: usize) -> TaylorPrefix {
        TaylorPrefix {
            coeffs: vec![Rat::zero(); n.saturating_sub(1)],
        }
    }

    /// Depth `N`: the highest known power.
    pub fn depth(&self) -> usize {
        self.coeffs.len() + 1
    }

    /// `a_2, ..., a_N`.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// `a_n` for `1 <= n <= N`.
    pub fn get(&self, n: usize) -> Result<Rat> {
        match n {
            0 => Ok(Rat::zero()),
            1 => Ok(Rat::one()),
            _ if n <= self.depth() => Ok(self.coeffs[n - 2].clone()),
            _ => Err(Error::InsufficientDepth {
                needed: n,
                available: self.depth(),
            }),
        }
    }

    /// All coefficients `a_0 = 0, a_1 = 1, a_2, ..., a_N` as a dense vector.
    pub fn dense(&self) -> Vec<Rat> {
        let mut v = Vec::with_capacity(self.depth() + 1);
        v.push(Rat::zero());
        v.push(Rat::one());
        v.extend(self.coeffs.iter().cloned());
        v
    }

    pub fn push(&mut self, a: Rat) {
        self.coeffs.push(a);
    }

    pub fn extended(&self, a: Rat) -> TaylorPrefix {
        let mut next = self.clone();
        next.push(a);
        next
    }

    pub fn truncated(&self, depth: usize) -> Result<TaylorPrefix> {
        if depth > self.depth() {
            return Err(Error::InsufficientDepth {
                needed: depth,
                available: self.depth(),
            });
        }
        Ok(TaylorPrefix {
            coeffs: self.coeffs[..depth.saturating_sub(1)].to_vec(),
        })
    }

    /// Coefficients of `-f(-z)`: `a_n -> (-1)^{n+1} a_n`.
    pub fn rotated(&self) -> TaylorPrefix {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| if i % 2 == 0 { -a } else { a.clone() })
            .collect();
        TaylorPrefix { coeffs }
    }

    pub fn ensure_depth(&self, needed: usize) -> Result<()> {
        if self.depth() < needed {
            return Err(Error::InsufficientDepth {
                needed,
                available: self.depth(),
            });
        }
        Ok(())
    }
}

/// `1/f(z) = 1/z + b_0 + b_1 z + ... + b_M z^M`, with `M = N - 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LaurentTail {
    coeffs: Vec<Rat>,
}

impl LaurentTail {
    pub fn new(coeffs: Vec<Rat>) -> LaurentTail {
        LaurentTail { coeffs }
    }

    /// `b_0, ..., b_M`.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, n: usize) -> Result<&Rat> {
        self.coeffs.get(n).ok_or(Error::InsufficientDepth {
            needed: n + 1,
            available: self.coeffs.len(),
        })
    }
}

/// `[z/f(z)]^alpha = 1 + sigma_1 z + ... + sigma_M z^M`.
///
/// Stored with a plus sign; only `sigma_n^2` enters Prawitz's inequality so
/// the opposite sign convention is equivalent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaPrefix {
    pub alpha: Rat,
    /// `sigma_1, ..., sigma_M`.
    pub coeffs: Vec<Rat>,
}

impl SigmaPrefix {
    /// `sigma_n` for `1 <= n <= M`.
    pub fn get(&self, n: usize) -> Option<&Rat> {
        n.checked_sub(1).and_then(|i| self.coeffs.get(i))
    }
}

/// Tail coefficients of `1/f` from the recursion
/// `b_{n-1} = -a_{n+1} - sum_{k=2}^{n} a_k b_{n-k}`.
pub fn reciprocal_tail(a: &TaylorPrefix) -> LaurentTail {
    let dense = a.dense();
    let n_max = a.depth().saturating_sub(1);
    let mut b: Vec<Rat> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut v = -&dense[n + 1];
        for k in 2..=n {
            v -= &(&dense[k] * &b[n - k]);
        }
        b.push(v);
    }
    LaurentTail { coeffs: b }
}

/// Extends `b` by one coefficient given the newest `a_{N}`; `a` must already
/// contain it and `b` must be its tail minus the last entry.
pub fn extend_tail(a: &TaylorPrefix, b: &mut LaurentTail) {
    let dense = a.dense();
    let n = b.coeffs.len() + 1;
    debug_assert_eq!(n + 1, a.depth());
    let mut v = -&dense[n + 1];
    for k in 2..=n {
        v -= &(&dense[k] * &b.coeffs[n - k]);
    }
    b.coeffs.push(v);
}

/// Formal logarithm of `h` with `h[0] = 1`; same length as `h`, constant 0.
pub fn series_log(h: &[Rat]) -> Result<Vec<Rat>> {
    if h.is_empty() || h[0] != Rat::one() {
        return Err(Error::NotNormalized("log needs constant term 1".into()));
    }
    let len = h.len();
    let mut l = vec![Rat::zero(); len];
    for n in 1..len {
        let mut acc = Rat::int(n as i64) * &h[n];
        for k in 1..n {
            acc -= &(Rat::int(k as i64) * &l[k] * &h[n - k]);
        }
        l[n] = acc / Rat::int(n as i64);
    }
    Ok(l)
}

/// Formal exponential of `l` with `l[0] = 0`.
pub fn series_exp(l: &[Rat]) -> Result<Vec<Rat>> {
    if l.first().is_some_and(|c| !c.is_zero()) {
        return Err(Error::NotNormalized("exp needs constant term 0".into()));
    }
    let len = l.len();
    let mut e = vec![Rat::zero(); len];
    if len == 0 {
        return Ok(e);
    }
    e[0] = Rat::one();
    for n in 1..len {
        let mut acc = Rat::zero();
        for k in 1..=n {
            acc += &(Rat::int(k as i64) * &l[k] * &e[n - k]);
        }
        e[n] = acc / Rat::int(n as i64);
    }
    Ok(e)
}

/// Truncated product of two dense series, keeping `len` terms.
pub fn series_mul(x: &[Rat], y: &[Rat], len: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); len];
    for (i, xi) in x.iter().enumerate().take(len) {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate().take(len - i) {
            out[i + j] += &(xi * yj);
        }
    }
    out
}

/// Dense coefficients `1, c_1, ..., c_M` of `z/f(z)`; needs depth `M + 1`.
pub fn z_over_f(a: &TaylorPrefix, m: usize) -> Result<Vec<Rat>> {
    a.ensure_depth(m + 1)?;
    let b = reciprocal_tail(&a.truncated(m + 1)?);
    let mut h = Vec::with_capacity(m + 1);
    h.push(Rat::one());
    h.extend(b.coeffs.iter().take(m).cloned());
    Ok(h)
}

/// First `m` coefficients of `[z/f]^alpha`, via `exp(alpha * log(z/f))`.
pub fn pow_alpha(a: &TaylorPrefix, alpha: &Rat, m: usize) -> Result<SigmaPrefix> {
    let h = z_over_f(a, m)?;
    let log_h = series_log(&h)?;
    let scaled: Vec<Rat> = log_h.iter().map(|c| c * alpha).collect();
    let p = series_exp(&scaled)?;
    Ok(SigmaPrefix {
        alpha: alpha.clone(),
        coeffs: p[1..].to_vec(),
    })
}

/// Taylor coefficients `a_2..a_N` of a normalized rational function.
pub fn taylor_of_rational(r: &RationalFn, n: usize) -> TaylorPrefix {
    let t = r.taylor_dense(n + 1);
    TaylorPrefix::new(t.into_iter().skip(2).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn prefix(xs: &[&str]) -> TaylorPrefix {
        TaylorPrefix::new(xs.iter().map(|s| r(s)).collect())
    }

    fn pow2(e: u32) -> Rat {
        Rat::int(num_bigint::BigInt::from(2u8).pow(e))
    }

    #[test]
    fn reciprocal_tail_of_identity_is_zero() {
        let b = reciprocal_tail(&TaylorPrefix::identity_to(10));
        assert_eq!(b.len(), 9);
        assert!(b.coeffs().iter().all(Rat::is_zero));
    }

    #[test]
    fn reciprocal_tail_of_z_minus_half_z2() {
        let mut coeffs = vec![r("-1/2")];
        coeffs.extend(std::iter::repeat_n(Rat::zero(), 21));
        let b = reciprocal_tail(&TaylorPrefix::new(coeffs));
        for (n, bn) in b.coeffs().iter().enumerate() {
            assert_eq!(*bn, Rat::one() / pow2(n as u32 + 1), "b_{n}");
        }
    }

    #[test]
    fn reciprocal_tail_branch_values() {
        let b = reciprocal_tail(&prefix(&["3/2", "2", "5/2", "3"]));
        assert_eq!(b.coeffs(), &[r("-3/2"), r("1/4"), r("1/8"), r("1/16")]);
    }

    #[test]
    fn reciprocal_tail_closed_forms() {
        let a = prefix(&["2/3", "-5/7", "3/11", "1/2", "-4"]);
        let (a2, a3, a4, a5, a6) = (r("2/3"), r("-5/7"), r("3/11"), r("1/2"), r("-4"));
        let b = reciprocal_tail(&a);
        let two = Rat::int(2);
        let three = Rat::int(3);
        let four = Rat::int(4);
        assert_eq!(b.coeffs()[0], -&a2);
        assert_eq!(b.coeffs()[1], -&a3 + a2.square());
        assert_eq!(b.coeffs()[2], -&a4 + &two * &a2 * &a3 - &a2 * a2.square());
        assert_eq!(
            b.coeffs()[3],
            -&a5 + &two * &a2 * &a4 + a3.square() - &three * a2.square() * &a3 + a2.square().square()
        );
        assert_eq!(
            b.coeffs()[4],
            -&a6 + &two * &a2 * &a5 + &two * &a3 * &a4 - &three * a2.square() * &a4 - &three * &a2 * a3.square()
                + &four * &a2 * a2.square() * &a3
                - a2.square().square() * &a2
        );
    }

    #[test]
    fn pow_alpha_of_identity() {
        let s = pow_alpha(&TaylorPrefix::identity_to(8), &r("2/3"), 7).unwrap();
        assert!(s.coeffs.iter().all(Rat::is_zero));
    }

    #[test]
    fn pow_alpha_prawitz_example() {
        // g(z) = z(2+z^3)/2(1+z^3) = z - z^4/2 + z^7/2 - ...
        let g = RationalFn::from_i64(&[0, 2, 0, 0, 1], &[2, 0, 0, 2]).unwrap();
        let a = taylor_of_rational(&g, 16);
        let s = pow_alpha(&a, &r("2/3"), 15).unwrap();
        let expected = [
            (3, "1/3"),
            (6, "-7/36"),
            (9, "19/162"),
            (12, "-143/1944"),
            (15, "281/5832"),
        ];
        for n in 1..=15 {
            let want = expected
                .iter()
                .find(|(k, _)| *k == n)
                .map(|(_, v)| r(v))
                .unwrap_or_else(Rat::zero);
            assert_eq!(s.get(n).unwrap(), &want, "sigma_{n}");
        }
    }

    #[test]
    fn pow_alpha_geometric() {
        let mut coeffs = vec![r("-1/2")];
        coeffs.extend(std::iter::repeat_n(Rat::zero(), 9));
        let s = pow_alpha(&TaylorPrefix::new(coeffs), &Rat::one(), 10).unwrap();
        for n in 1..=10 {
            assert_eq!(s.get(n).unwrap(), &(Rat::one() / pow2(n as u32)));
        }
    }

    #[test]
    fn pow_alpha_refuses_over_read() {
        let a = prefix(&["1", "1"]);
        assert!(matches!(
            pow_alpha(&a, &Rat::one(), 3),
            Err(Error::InsufficientDepth { .. })
        ));
    }

    #[test]
    fn taylor_of_rational_examples() {
        let koebe = RationalFn::from_i64(&[0, 1], &[1, -2, 1]).unwrap();
        assert_eq!(taylor_of_rational(&koebe, 6), prefix(&["2", "3", "4", "5", "6"]));
        let fib = RationalFn::from_i64(&[0, 1], &[1, -1, -1]).unwrap();
        assert_eq!(taylor_of_rational(&fib, 6), prefix(&["1", "2", "3", "5", "8"]));
        let f3 = RationalFn::from_i64(&[0, 2, 0, -1], &[2, 0, -2]).unwrap();
        assert_eq!(
            taylor_of_rational(&f3, 7),
            prefix(&["0", "1/2", "0", "1/2", "0", "1/2"])
        );
    }

    fn random_prefix(max_len: usize) -> impl Strategy<Value = TaylorPrefix> {
        proptest::collection::vec((-8i64..8, 1i64..5), 1..max_len)
            .prop_map(|v| TaylorPrefix::new(v.into_iter().map(|(p, q)| Rat::frac(p, q)).collect()))
    }

    proptest! {
        #[test]
        fn reciprocal_round_trip(a in random_prefix(9)) {
            // f(z) * (1/z + sum b_n z^n) = 1 + O(z^{N-1})
            let n = a.depth();
            let b = reciprocal_tail(&a);
            let f_over_z: Vec<Rat> = a.dense()[1..].to_vec();
            let mut zf_inv = vec![Rat::one()];
            zf_inv.extend(b.coeffs().iter().cloned());
            let prod = series_mul(&f_over_z, &zf_inv, n);
            prop_assert_eq!(&prod[0], &Rat::one());
            for c in &prod[1..] {
                prop_assert!(c.is_zero());
            }
        }

        #[test]
        fn pow_alpha_is_multiplicative(a in random_prefix(8), p1 in 1i64..5, p2 in -3i64..5) {
            let m = a.depth() - 1;
            let al1 = Rat::frac(p1, 3);
            let al2 = Rat::frac(p2, 2);
            let s1 = pow_alpha(&a, &al1, m).unwrap();
            let s2 = pow_alpha(&a, &al2, m).unwrap();
            let s12 = pow_alpha(&a, &(&al1 + &al2), m).unwrap();
            let dense = |s: &SigmaPrefix| {
                let mut v = vec![Rat::one()];
                v.extend(s.coeffs.iter().cloned());
                v
            };
            let prod = series_mul(&dense(&s1), &dense(&s2), m + 1);
            prop_assert_eq!(prod, dense(&s12));
        }

        #[test]
        fn pow_one_is_shifted_tail(a in random_prefix(9)) {
            let m = a.depth() - 1;
            let s = pow_alpha(&a, &Rat::one(), m).unwrap();
            let b = reciprocal_tail(&a);
            prop_assert_eq!(&s.coeffs[..], &b.coeffs()[..m]);
        }
    }
}
