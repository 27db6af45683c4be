//! Rational functions, rational reconstruction from Taylor prefixes,
//! candidate verification and the catalog of known solutions.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::criteria::{area_sum, debranges_violation, prawitz_deficit};
use crate::exact::{Lattice, Rat};
use crate::grunsky::{grunsky_coefficients_recursive, grunsky_matrix_from_table, is_psd, PsdWitness};
use crate::poly::Poly;
use crate::series::{reciprocal_tail, taylor_of_rational, TaylorPrefix};
use crate::{Error, Result};

/// `P(z)/Q(z)` in canonical form: reduced, integer coefficients with no common
/// factor, `Q(0) > 0`, `P(0) = 0` and `P'(0) = Q(0)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFn {
    numer: Vec<BigInt>,
    denom: Vec<BigInt>,
}

impl RationalFn {
    /// Normalizes `p/q`; fails unless the quotient is `z + O(z^2)`.
    pub fn new(p: &Poly, q: &Poly) -> Result<RationalFn> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if p.is_zero() {
            return Err(Error::NotNormalized("zero function".into()));
        }
        let g = p.gcd(q);
        let (p, _) = p.div_rem(&g)?;
        let (q, _) = q.div_rem(&g)?;
        let q0 = q.coeff(0);
        if q0.is_zero() {
            return Err(Error::NotNormalized("pole at the origin".into()));
        }
        if !p.coeff(0).is_zero() {
            return Err(Error::NotNormalized("f(0) != 0".into()));
        }
        if p.coeff(1) != q0 {
            return Err(Error::NotNormalized(format!("f'(0) = {} != 1", p.coeff(1) / q0)));
        }
        // common integer scaling of both polynomials
        let all: Vec<Rat> = p.coeffs().iter().chain(q.coeffs()).cloned().collect();
        let scaled = Poly::new(all).primitive_integer();
        let mut numer: Vec<BigInt> = scaled[..p.coeffs().len()].to_vec();
        let mut denom: Vec<BigInt> = scaled[p.coeffs().len()..].to_vec();
        if denom[0].is_negative() {
            numer.iter_mut().for_each(|c| *c = -c.clone());
            denom.iter_mut().for_each(|c| *c = -c.clone());
        }
        Ok(RationalFn { numer, denom })
    }

    pub fn from_i64(p: &[i64], q: &[i64]) -> Result<RationalFn> {
        RationalFn::new(&Poly::from_ints(p), &Poly::from_ints(q))
    }

    pub fn identity() -> RationalFn {
        RationalFn::from_i64(&[0, 1], &[1]).expect("identity is normalized")
    }

    /// Numerator coefficients, constant term first.
    pub fn numerator(&self) -> &[BigInt] {
        &self.numer
    }

    pub fn denominator(&self) -> &[BigInt] {
        &self.denom
    }

    pub fn p(&self) -> Poly {
        Poly::from_ints(&self.numer)
    }

    pub fn q(&self) -> Poly {
        Poly::from_ints(&self.denom)
    }

    /// Dense Taylor coefficients `t_0..t_{len-1}` (`t_0 = 0`, `t_1 = 1`).
    pub fn taylor_dense(&self, len: usize) -> Vec<Rat> {
        let q0 = Rat::int(self.denom[0].clone());
        let mut t: Vec<Rat> = Vec::with_capacity(len);
        for n in 0..len {
            let mut v = self.numer.get(n).map(|c| Rat::int(c.clone())).unwrap_or_else(Rat::zero);
            for (k, qk) in self.denom.iter().enumerate().skip(1).take(n) {
                if !qk.is_zero() {
                    v -= &(Rat::int(qk.clone()) * &t[n - k]);
                }
            }
            t.push(v / &q0);
        }
        t
    }

    /// `-f(-z)`, i.e. `a_n -> (-1)^{n+1} a_n`.
    pub fn rotated(&self) -> RationalFn {
        let flip = |cs: &[BigInt], negate_even: bool| -> Poly {
            Poly::new(
                cs.iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let c = Rat::int(c.clone());
                        if (i % 2 == 0) == negate_even {
                            -c
                        } else {
                            c
                        }
                    })
                    .collect(),
            )
        };
        // -P(-z) / Q(-z)
        RationalFn::new(&flip(&self.numer, true), &flip(&self.denom, false)).expect("rotation preserves normalization")
    }

    /// Numerator and denominator of `f'`, reduced: `f' = N / D`.
    pub fn derivative_parts(&self) -> (Poly, Poly) {
        let (p, q) = (self.p(), self.q());
        let n = &(&p.derivative() * &q) - &(&p * &q.derivative());
        let d = &q * &q;
        let g = n.gcd(&d);
        if g.is_zero() {
            return (n, d);
        }
        let (n, _) = n.div_rem(&g).expect("gcd divides");
        let (d, _) = d.div_rem(&g).expect("gcd divides");
        (n, d)
    }
}

fn poly_literal(cs: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, c) in cs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let mono = match i {
            0 => String::new(),
            1 => "z".to_string(),
            _ => format!("z^{i}"),
        };
        if i == 0 || !mag.is_one() {
            out.push_str(&mag.to_string());
        }
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for RationalFn {
    /// Writes `(P)/(Q)`, parseable by [`crate::parse::parse_function`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", poly_literal(&self.numer), poly_literal(&self.denom))
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct RationalFnRepr {
    numerator: Vec<i64>,
    denominator: Vec<i64>,
}

impl Serialize for RationalFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let conv = |cs: &[BigInt]| -> std::result::Result<Vec<i64>, S::Error> {
            cs.iter()
                .map(|c| {
                    c.to_i64()
                        .ok_or_else(|| serde::ser::Error::custom("coefficient exceeds i64"))
                })
                .collect()
        };
        RationalFnRepr {
            numerator: conv(&self.numer)?,
            denominator: conv(&self.denom)?,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<RationalFn, D::Error> {
        let repr = RationalFnRepr::deserialize(d)?;
        if repr.numerator.len() > 256 || repr.denominator.len() > 256 {
            return Err(de::Error::custom("polynomial degree too large"));
        }
        RationalFn::from_i64(&repr.numerator, &repr.denominator).map_err(de::Error::custom)
    }
}

/// Dense Taylor coefficients `t_0 = 0, t_1 = 1, a_2, ..., a_N`.
fn dense_of(a: &TaylorPrefix) -> Vec<Rat> {
    a.dense()
}

/// Basis of the null space of `rows` (each of length `cols`).
fn null_space(mut rows: Vec<Vec<Rat>>, cols: usize) -> Vec<Vec<Rat>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rat::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..cols {
                    let v = &f * &rows[r][j];
                    rows[i][j] -= &v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rat::zero(); cols];
            v[free] = Rat::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -&rows[i][free];
            }
            v
        })
        .collect()
}

/// The rational function of numerator degree `<= dmax + 1` and denominator
/// degree `<= dmax` agreeing with every known coefficient of `a`, taking the
/// smallest denominator degree that works.
pub fn pade_from_prefix(a: &TaylorPrefix, dmax: usize) -> Result<RationalFn> {
    let n = a.depth();
    a.ensure_depth(2 * dmax + 1)?;
    let t = dense_of(a);
    for e in 0..=dmax {
        // sum_i q_i t_{k-i} = 0 for k = e+2..=N
        let rows: Vec<Vec<Rat>> = (e + 2..=n)
            .map(|k| {
                (0..=e)
                    .map(|i| if i <= k { t[k - i].clone() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        let basis = null_space(rows, e + 1);
        let Some(q) = basis.into_iter().find(|v| !v[0].is_zero()) else {
            continue;
        };
        let p: Vec<Rat> = (0..=e + 1)
            .map(|k| (0..=e.min(k)).map(|i| &q[i] * &t[k - i]).sum())
            .collect();
        let Ok(candidate) = RationalFn::new(&Poly::new(p), &Poly::new(q)) else {
            continue;
        };
        if candidate.taylor_dense(n + 1) == t {
            return Ok(candidate);
        }
    }
    Err(Error::NotFound(dmax))
}

/// Whether `a_2..a_K` of `r` all lie in `lat`.
pub fn verify_membership(r: &RationalFn, lat: Lattice, k: usize) -> bool {
    first_off_lattice(r, lat, k).is_none()
}

/// First index `n <= K` with `a_n` outside the lattice.
pub fn first_off_lattice(r: &RationalFn, lat: Lattice, k: usize) -> Option<usize> {
    r.taylor_dense(k + 1)
        .iter()
        .enumerate()
        .skip(2)
        .find(|(_, a)| !lat.contains(a))
        .map(|(n, _)| n)
}

/// Tries `dmax = 1..=4` and returns the first reconstruction whose
/// coefficients stay in the lattice up to `k`.
pub fn reconstruct(a: &TaylorPrefix, lat: Lattice, k: usize) -> Option<RationalFn> {
    (1..=4)
        .filter(|d| a.depth() > 2 * d)
        .filter_map(|d| pade_from_prefix(a, d).ok())
        .find(|r| verify_membership(r, lat, k))
}

pub const ROOT_MARGIN: f64 = 1e-6;

/// Outcome of the zero-free test for `f'` on the open disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeCheck {
    pub ok: bool,
    /// Smallest modulus among the zeros of `f'`, if any.
    pub min_zero_modulus: Option<f64>,
    /// Whether the exact boundary test was needed.
    pub exact_fallback: bool,
}

/// Zeros of `p` strictly inside the unit disk, assuming none lie on the
/// circle; `None` if the Schur-Cohn recursion hits a singular step.
pub fn schur_cohn_inside(p: &Poly) -> Option<usize> {
    let mut p = p.clone();
    let mut flips: Vec<(bool, usize)> = Vec::new();
    loop {
        let n = p.degree()?;
        if n == 0 {
            break;
        }
        let p0 = p.coeff(0);
        let an = p.coeff(n);
        let delta = p0.square() - an.square();
        if delta.is_zero() {
            return None;
        }
        let star = Poly::new((0..=n).map(|i| p.coeff(n - i)).collect());
        let next = &p.scale(&p0) - &star.scale(&an);
        flips.push((delta.is_negative(), n));
        p = next;
    }
    // unwind: inside(p) = inside(Tp) or deg p - inside(Tp)
    let mut count = 0usize;
    for (neg, n) in flips.into_iter().rev() {
        if neg {
            count = n - count;
        }
    }
    Some(count)
}

/// `f'` has no zero in `|z| < 1`, checked numerically with an exact fallback
/// when a zero lies within [`ROOT_MARGIN`] of the circle.
pub fn derivative_check(r: &RationalFn) -> DerivativeCheck {
    let (num, _) = r.derivative_parts();
    let roots = num.roots();
    let min_mod = roots
        .iter()
        .map(|z| z.norm())
        .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.min(x))));
    let Some(min_mod) = min_mod else {
        return DerivativeCheck {
            ok: true,
            min_zero_modulus: None,
            exact_fallback: false,
        };
    };
    if min_mod < 1.0 - ROOT_MARGIN {
        return DerivativeCheck {
            ok: false,
            min_zero_modulus: Some(min_mod),
            exact_fallback: false,
        };
    }
    if min_mod > 1.0 + ROOT_MARGIN {
        return DerivativeCheck {
            ok: true,
            min_zero_modulus: Some(min_mod),
            exact_fallback: false,
        };
    }
    // Split off the self-reciprocal part (all zeros on the circle and
    // reciprocal pairs), then count the rest exactly.
    let g = num.gcd(&num.reversed());
    let (rest, _) = num.div_rem(&g).expect("gcd divides");
    let exact_inside = schur_cohn_inside(&rest);
    let pairs_ok = g.roots().iter().all(|z| z.norm() >= 1.0 - ROOT_MARGIN);
    let ok = exact_inside == Some(0) && pairs_ok;
    DerivativeCheck {
        ok,
        min_zero_modulus: Some(min_mod),
        exact_fallback: true,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrawitzResult {
    pub alpha: Rat,
    pub terms: usize,
    pub deficit: Rat,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrunskyFailure {
    pub order: usize,
    pub witness: PsdWitness,
}

/// Necessary conditions for univalence evaluated on a rational candidate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub function: RationalFn,
    pub lattice_ok: bool,
    pub first_off_lattice: Option<usize>,
    pub debranges_ok: bool,
    pub debranges_violation: Option<usize>,
    pub area_ok: bool,
    pub area_sum: Rat,
    pub grunsky_ok: bool,
    pub grunsky_order: usize,
    pub grunsky_failure: Option<GrunskyFailure>,
    pub prawitz_ok: bool,
    pub prawitz: Vec<PrawitzResult>,
    pub derivative_ok: bool,
    pub derivative: DerivativeCheck,
    pub pass: bool,
}

/// Lattice membership to `k`, area sum over `b_1..b_{k-2}`, Grunsky PSD for
/// orders `1..=n_cert`, Prawitz at each `alpha` with `m` terms, de Branges,
/// and a zero-free derivative.
pub fn verify_candidate(
    r: &RationalFn,
    lat: Lattice,
    k: usize,
    n_cert: usize,
    alphas: &[Rat],
    m: usize,
) -> VerificationReport {
    let depth = k.max(2 * n_cert + 1).max(m + 1);
    let a = taylor_of_rational(r, depth);
    let first_off = first_off_lattice(r, lat, k);
    let viol = debranges_violation(&a.truncated(k).expect("depth >= k"), false);
    let area = area_sum(&reciprocal_tail(&a.truncated(k).expect("depth >= k")));

    let mut grunsky_failure = None;
    if n_cert > 0 {
        let table = grunsky_coefficients_recursive(&a, 2 * n_cert).expect("depth suffices");
        for n in 1..=n_cert {
            let v = is_psd(&grunsky_matrix_from_table(&table, n));
            if !v.psd {
                grunsky_failure = Some(GrunskyFailure {
                    order: n,
                    witness: v.witness.expect("failing matrix has a witness"),
                });
                break;
            }
        }
    }

    let prawitz: Vec<PrawitzResult> = alphas
        .iter()
        .map(|alpha| {
            let deficit = prawitz_deficit(&a, alpha, m).expect("depth suffices");
            PrawitzResult {
                alpha: alpha.clone(),
                terms: m,
                ok: !deficit.is_negative(),
                deficit,
            }
        })
        .collect();
    let derivative = derivative_check(r);

    let lattice_ok = first_off.is_none();
    let area_ok = area <= Rat::one();
    let grunsky_ok = grunsky_failure.is_none();
    let prawitz_ok = prawitz.iter().all(|p| p.ok);
    let pass = lattice_ok && viol.is_none() && area_ok && grunsky_ok && prawitz_ok && derivative.ok;
    VerificationReport {
        function: r.clone(),
        lattice_ok,
        first_off_lattice: first_off,
        debranges_ok: viol.is_none(),
        debranges_violation: viol,
        area_ok,
        area_sum: area,
        grunsky_ok,
        grunsky_order: n_cert,
        grunsky_failure,
        prawitz_ok,
        prawitz,
        derivative_ok: derivative.ok,
        derivative,
        pass,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Integer coefficients.
    Integer,
    /// Half-integer coefficients, not all integers.
    HalfInteger,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    #[serde(flatten)]
    pub function: RationalFn,
    pub provenance: Provenance,
}

// (id, numerator, denominator, provenance)
const CATALOG: &[(&str, &[i64], &[i64], Provenance)] = &[
    ("friedman_01", &[0, 1], &[1], Provenance::Integer),
    ("friedman_02", &[0, 1], &[1, 1], Provenance::Integer),
    ("friedman_03", &[0, 1], &[1, -1], Provenance::Integer),
    ("friedman_04", &[0, 1], &[1, 0, 1], Provenance::Integer),
    ("friedman_05", &[0, 1], &[1, 0, -1], Provenance::Integer),
    ("friedman_06", &[0, 1], &[1, 2, 1], Provenance::Integer),
    ("friedman_07", &[0, 1], &[1, -2, 1], Provenance::Integer),
    ("friedman_08", &[0, 1], &[1, 1, 1], Provenance::Integer),
    ("friedman_09", &[0, 1], &[1, -1, 1], Provenance::Integer),
    ("f1_plus", &[0, 2, 1], &[2], Provenance::HalfInteger),
    ("f1_minus", &[0, 2, -1], &[2], Provenance::HalfInteger),
    ("f2_plus", &[0, 2, 1], &[2, 2], Provenance::HalfInteger),
    ("f2_minus", &[0, 2, -1], &[2, -2], Provenance::HalfInteger),
    ("f3_plus", &[0, 2, 0, 1], &[2, 0, 2], Provenance::HalfInteger),
    ("f3_minus", &[0, 2, 0, -1], &[2, 0, -2], Provenance::HalfInteger),
    ("f4_plus", &[0, 2, 1], &[2, 0, -2], Provenance::HalfInteger),
    ("f4_minus", &[0, 2, -1], &[2, 0, -2], Provenance::HalfInteger),
    ("f5_plus", &[0, 2, 1], &[2, 4, 2], Provenance::HalfInteger),
    ("f5_minus", &[0, 2, -1], &[2, -4, 2], Provenance::HalfInteger),
    ("f6_plus", &[0, 2, 1, 1], &[2, 2, 2], Provenance::HalfInteger),
    ("f6_minus", &[0, 2, -1, 1], &[2, -2, 2], Provenance::HalfInteger),
];

/// Short names for the six representatives analysed geometrically.
pub const REPRESENTATIVES: &[(&str, &str)] = &[
    ("f1", "f1_plus"),
    ("f2", "f2_minus"),
    ("f3", "f3_minus"),
    ("f4", "f4_plus"),
    ("f5", "f5_minus"),
    ("f6", "f6_minus"),
];

/// The nine integer-coefficient functions followed by the twelve others.
pub fn catalog() -> Vec<CatalogEntry> {
    CATALOG
        .iter()
        .map(|(id, p, q, prov)| CatalogEntry {
            id: id.to_string(),
            function: RationalFn::from_i64(p, q).expect("catalog entries are normalized"),
            provenance: *prov,
        })
        .collect()
}

/// Looks up a catalog id, accepting `identity`, `koebe` and `f1`..`f6`.
pub fn lookup(id: &str) -> Result<CatalogEntry> {
    let canonical = match id {
        "identity" => "friedman_01",
        "koebe" => "friedman_07",
        _ => REPRESENTATIVES
            .iter()
            .find(|(s, _)| *s == id)
            .map_or(id, |(_, full)| *full),
    };
    catalog()
        .into_iter()
        .find(|e| e.id == canonical)
        .ok_or_else(|| Error::UnknownId(id.to_string()))
}

/// Exact match of a canonical function against the catalog.
pub fn match_catalog(r: &RationalFn) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| &e.function == r)
}

/// Reduce the magnitude of all coefficients by their gcd; used by tests.
#[allow(dead_code)]
fn content(cs: &[BigInt]) -> BigInt {
    cs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}
