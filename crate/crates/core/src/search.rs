//! Branch-and-prune enumeration of lattice Taylor prefixes.
//!
//! Each node is a prefix `a_2..a_N`. Children are the lattice points of the
//! area-theorem interval for `a_{N+1}`; a node is cut by the first failing
//! necessary condition, or closed once the uniqueness test guarantees at most
//! one continuation. Closed branches are continued deterministically and
//! handed to rational reconstruction.

use std::collections::BTreeMap;

use log::{debug, trace};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{next_interval, prawitz_deficit, termination_ok};
use crate::exact::{lattice_points_in_interval, Lattice, Rat};
use crate::grunsky::{grunsky_matrix, is_psd, PsdWitness};
use crate::reconstruct::{match_catalog, reconstruct, RationalFn};
use crate::series::{extend_tail, reciprocal_tail, LaurentTail, TaylorPrefix};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub lattice: Lattice,
    /// Deepest prefix examined; branches still open there are exhausted.
    pub max_depth: usize,
    /// Grunsky orders `n`, each tested once the prefix reaches depth `2n+1`.
    pub grunsky_orders: Vec<usize>,
    pub prawitz_alphas: Vec<Rat>,
    /// Prawitz is applied with `M = depth - 1` from this depth on.
    pub prawitz_min_depth: usize,
    pub strict_debranges: bool,
    /// Closed branches are continued to this depth before reconstruction.
    pub extend_depth: usize,
}

impl SearchConfig {
    pub fn new(lattice: Lattice) -> SearchConfig {
        SearchConfig {
            lattice,
            max_depth: 18,
            grunsky_orders: vec![2, 3, 4],
            prawitz_alphas: vec![Rat::frac(2, 3), Rat::one()],
            prawitz_min_depth: 2,
            strict_debranges: true,
            extend_depth: 40,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_depth < 4 {
            return Err(Error::Parse(format!("max_depth {} < 4", self.max_depth)));
        }
        if self.grunsky_orders.contains(&0) {
            return Err(Error::Parse("grunsky order 0".into()));
        }
        if self.prawitz_alphas.iter().any(|a| !a.is_positive()) {
            return Err(Error::Parse("prawitz alpha must be positive".into()));
        }
        if self.extend_depth < self.max_depth {
            return Err(Error::Parse("extend_depth below max_depth".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum PruneReason {
    /// No lattice point in the next interval; `radius_sq` is that interval's.
    AreaInterval {
        radius_sq: Rat,
    },
    DeBranges {
        index: usize,
        value: Rat,
    },
    GrunskyPsd {
        order: usize,
        witness: PsdWitness,
    },
    Prawitz {
        alpha: Rat,
        terms: usize,
        deficit: Rat,
    },
    /// Open at `max_depth`; `slack = 4(1 - sum n b_n^2) - (N-1) r0^2 >= 0`.
    DepthExhausted {
        slack: Rat,
    },
}

impl PruneReason {
    pub fn name(&self) -> &'static str {
        match self {
            PruneReason::AreaInterval { .. } => "area_interval",
            PruneReason::DeBranges { .. } => "de_branges",
            PruneReason::GrunskyPsd { .. } => "grunsky_psd",
            PruneReason::Prawitz { .. } => "prawitz",
            PruneReason::DepthExhausted { .. } => "depth_exhausted",
        }
    }

    /// The exact value certifying the cut.
    pub fn witness(&self) -> &Rat {
        match self {
            PruneReason::AreaInterval { radius_sq } => radius_sq,
            PruneReason::DeBranges { value, .. } => value,
            PruneReason::GrunskyPsd { witness, .. } => &witness.value,
            PruneReason::Prawitz { deficit, .. } => deficit,
            PruneReason::DepthExhausted { slack } => slack,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeVerdict {
    Continue,
    Terminated(TaylorPrefix),
    Pruned(PruneReason),
}

/// One line of the JSONL trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub prefix: Vec<Rat>,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Rat>,
    /// Set on records produced while continuing a closed branch.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub continuation: bool,
}

impl TraceRecord {
    fn pruned(a: &TaylorPrefix, r: &PruneReason, continuation: bool) -> TraceRecord {
        let (order, indices, alpha, terms) = match r {
            PruneReason::GrunskyPsd { order, witness } => (Some(*order), Some(witness.indices.clone()), None, None),
            PruneReason::Prawitz { alpha, terms, .. } => (None, None, Some(alpha.clone()), Some(*terms)),
            _ => (None, None, None, None),
        };
        TraceRecord {
            prefix: a.coeffs().to_vec(),
            verdict: "pruned".into(),
            reason: Some(r.name().into()),
            order,
            indices,
            alpha,
            terms,
            witness: Some(r.witness().clone()),
            continuation,
        }
    }

    fn terminated(a: &TaylorPrefix) -> TraceRecord {
        TraceRecord {
            prefix: a.coeffs().to_vec(),
            verdict: "terminated".into(),
            reason: None,
            order: None,
            indices: None,
            alpha: None,
            terms: None,
            witness: None,
            continuation: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub continuation_nodes: u64,
    pub terminated: u64,
    pub prunes: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    /// Prefix at the depth where the branch closed.
    pub prefix: TaylorPrefix,
    pub termination_depth: usize,
    /// `None` when no rational function of the tried degrees fits.
    pub function: Option<RationalFn>,
    pub catalog_id: Option<String>,
    /// Added by closing the set under `f(z) -> -f(-z)`.
    pub via_symmetry: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub candidates: Vec<Candidate>,
    pub stats: SearchStats,
    pub complete: bool,
    #[serde(skip)]
    pub trace: Vec<TraceRecord>,
}

impl SearchOutcome {
    /// Candidates without a rational reconstruction.
    pub fn unresolved(&self) -> impl Iterator<Item = &Candidate> {
        self.candidates.iter().filter(|c| c.function.is_none())
    }
}

/// Checks the coefficient `a_N` just appended to `a`, or every coefficient
/// when `full` is set.
fn check_criteria(a: &TaylorPrefix, cfg: &SearchConfig, full: bool) -> Option<PruneReason> {
    let depth = a.depth();
    let first = if full { 2 } else { depth };
    for n in first..=depth {
        let an = &a.coeffs()[n - 2];
        let bound = Rat::int(n as i64);
        let abs = an.abs();
        let bad = if cfg.strict_debranges {
            abs >= bound
        } else {
            abs > bound
        };
        if bad {
            return Some(PruneReason::DeBranges {
                index: n,
                value: an.clone(),
            });
        }
    }
    let mut orders = cfg.grunsky_orders.clone();
    orders.sort_unstable();
    for n in orders {
        let feasible = if full { depth > 2 * n } else { depth == 2 * n + 1 };
        if !feasible {
            continue;
        }
        let m = grunsky_matrix(a, n).expect("depth checked");
        let v = is_psd(&m);
        if !v.psd {
            let witness = v.witness.expect("failing matrix has a witness");
            return Some(PruneReason::GrunskyPsd { order: n, witness });
        }
    }
    if depth >= cfg.prawitz_min_depth.max(2) {
        let terms = depth - 1;
        for alpha in &cfg.prawitz_alphas {
            let deficit = prawitz_deficit(a, alpha, terms).expect("depth checked");
            if deficit.is_negative() {
                return Some(PruneReason::Prawitz {
                    alpha: alpha.clone(),
                    terms,
                    deficit,
                });
            }
        }
    }
    None
}

fn is_koebe_root(a: &TaylorPrefix) -> bool {
    a.coeffs().first().is_some_and(|a2| a2.abs() == Rat::int(2))
}

fn koebe_for(a2: &Rat) -> RationalFn {
    if a2.is_negative() {
        RationalFn::from_i64(&[0, 1], &[1, 2, 1]).expect("normalized")
    } else {
        RationalFn::from_i64(&[0, 1], &[1, -2, 1]).expect("normalized")
    }
}

fn verdict_with_tail(a: &TaylorPrefix, b: &LaurentTail, cfg: &SearchConfig, full: bool) -> NodeVerdict {
    if a.depth() == 2 && is_koebe_root(a) {
        return NodeVerdict::Terminated(a.clone());
    }
    if let Some(r) = check_criteria(a, cfg, full) {
        return NodeVerdict::Pruned(r);
    }
    if termination_ok(b, a.depth(), &cfg.lattice.r0()) {
        return NodeVerdict::Terminated(a.clone());
    }
    NodeVerdict::Continue
}

/// Verdict for a single prefix, applying every criterion that its depth
/// supports: strict de Branges (with `|a_2| = 2` routed to Koebe), Grunsky
/// PSD, Prawitz, then the uniqueness test.
pub fn classify_prefix(a: &TaylorPrefix, cfg: &SearchConfig) -> NodeVerdict {
    if is_koebe_root(a) {
        return NodeVerdict::Terminated(a.truncated(2).expect("depth >= 2"));
    }
    verdict_with_tail(a, &reciprocal_tail(a), cfg, true)
}

#[derive(Default)]
struct Collector {
    stats: SearchStats,
    trace: Vec<TraceRecord>,
    candidates: Vec<Candidate>,
    exhausted: bool,
}

impl Collector {
    fn prune(&mut self, a: &TaylorPrefix, r: PruneReason, continuation: bool) {
        trace!("prune {:?}: {} {}", a.coeffs(), r.name(), r.witness());
        *self.stats.prunes.entry(r.name().to_string()).or_default() += 1;
        if matches!(r, PruneReason::DepthExhausted { .. }) {
            self.exhausted = true;
        }
        self.trace.push(TraceRecord::pruned(a, &r, continuation));
    }

    fn merge(&mut self, other: Collector) {
        self.stats.nodes += other.stats.nodes;
        self.stats.continuation_nodes += other.stats.continuation_nodes;
        self.stats.terminated += other.stats.terminated;
        for (k, v) in other.stats.prunes {
            *self.stats.prunes.entry(k).or_default() += v;
        }
        self.trace.extend(other.trace);
        self.candidates.extend(other.candidates);
        self.exhausted |= other.exhausted;
    }
}

// Nodes shallower than this fan their children out to the thread pool.
const PARALLEL_DEPTH: usize = 3;

fn children(a: &TaylorPrefix, b: &LaurentTail, cfg: &SearchConfig) -> (Vec<Rat>, Rat) {
    let iv = next_interval(a, b);
    let mut pts = if iv.radius_sq.is_negative() {
        Vec::new()
    } else {
        lattice_points_in_interval(&iv.center, &iv.radius_sq, cfg.lattice)
    };
    if a.depth() == 1 {
        pts.retain(|x| !x.is_negative());
    }
    (pts, iv.radius_sq)
}

fn explore(a: TaylorPrefix, b: LaurentTail, cfg: &SearchConfig) -> Collector {
    let mut col = Collector::default();
    col.stats.nodes += 1;
    if a.depth() > 1 {
        match verdict_with_tail(&a, &b, cfg, false) {
            NodeVerdict::Pruned(r) => {
                col.prune(&a, r, false);
                return col;
            }
            NodeVerdict::Terminated(_) => {
                col.stats.terminated += 1;
                col.trace.push(TraceRecord::terminated(&a));
                close_branch(a, b, cfg, &mut col);
                return col;
            }
            NodeVerdict::Continue => {}
        }
        if a.depth() >= cfg.max_depth {
            let lhs = Rat::int(4) * (Rat::one() - crate::criteria::area_sum_to(&b, a.depth() - 2));
            let rhs = Rat::int(a.depth() as i64 - 1) * cfg.lattice.r0().square();
            col.prune(&a, PruneReason::DepthExhausted { slack: lhs - rhs }, false);
            return col;
        }
    }
    let (pts, radius_sq) = children(&a, &b, cfg);
    if pts.is_empty() {
        col.prune(&a, PruneReason::AreaInterval { radius_sq }, false);
        return col;
    }
    let step = |x: Rat| {
        let child = a.extended(x);
        let mut tail = b.clone();
        extend_tail(&child, &mut tail);
        explore(child, tail, cfg)
    };
    let subs: Vec<Collector> = if a.depth() < PARALLEL_DEPTH {
        pts.into_par_iter().map(step).collect()
    } else {
        pts.into_iter().map(step).collect()
    };
    for s in subs {
        col.merge(s);
    }
    col
}

/// Continues a closed branch through its forced coefficients and attempts
/// reconstruction.
fn close_branch(a: TaylorPrefix, b: LaurentTail, cfg: &SearchConfig, col: &mut Collector) {
    let termination_depth = a.depth();
    if termination_depth == 2 && is_koebe_root(&a) {
        let f = koebe_for(&a.coeffs()[0]);
        let id = match_catalog(&f).map(|e| e.id);
        col.candidates.push(Candidate {
            prefix: a,
            termination_depth,
            function: Some(f),
            catalog_id: id,
            via_symmetry: false,
        });
        return;
    }
    let start = a.clone();
    let (mut a, mut b) = (a, b);
    while a.depth() < cfg.extend_depth {
        let (pts, radius_sq) = children(&a, &b, cfg);
        debug_assert!(pts.len() <= 1, "closed branch with several continuations");
        let Some(x) = pts.into_iter().next() else {
            col.prune(&a, PruneReason::AreaInterval { radius_sq }, true);
            return;
        };
        a.push(x);
        extend_tail(&a, &mut b);
        col.stats.continuation_nodes += 1;
        if let Some(r) = check_criteria(&a, cfg, false) {
            col.prune(&a, r, true);
            return;
        }
    }
    let function = reconstruct(&a, cfg.lattice, cfg.extend_depth);
    let catalog_id = function.as_ref().and_then(match_catalog).map(|e| e.id);
    debug!(
        "closed {:?} at depth {termination_depth}: {:?} {:?}",
        start.coeffs(),
        function,
        catalog_id
    );
    col.candidates.push(Candidate {
        prefix: start,
        termination_depth,
        function,
        catalog_id,
        via_symmetry: false,
    });
}

fn symmetry_closure(mut cands: Vec<Candidate>) -> Vec<Candidate> {
    let mut extra = Vec::new();
    for c in &cands {
        let rotated_prefix = c.prefix.rotated();
        let rotated_fn = c.function.as_ref().map(RationalFn::rotated);
        let present = cands
            .iter()
            .chain(extra.iter())
            .any(|o: &Candidate| match (&rotated_fn, &o.function) {
                (Some(f), Some(g)) => f == g,
                (None, None) => o.prefix == rotated_prefix,
                _ => false,
            });
        if !present {
            let catalog_id = rotated_fn.as_ref().and_then(match_catalog).map(|e| e.id);
            extra.push(Candidate {
                prefix: rotated_prefix,
                termination_depth: c.termination_depth,
                function: rotated_fn,
                catalog_id,
                via_symmetry: true,
            });
        }
    }
    cands.extend(extra);
    // canonical order: by prefix, compared coefficient by coefficient
    cands.sort_by(|x, y| x.prefix.coeffs().cmp(y.prefix.coeffs()));
    cands
}

/// Exhaustive search over prefixes with `a_2 >= 0`, closed under rotation.
///
/// Runs on the current rayon pool; results do not depend on its size.
pub fn search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let col = explore(TaylorPrefix::identity(), LaurentTail::new(Vec::new()), cfg);
    let candidates = symmetry_closure(col.candidates);
    Ok(SearchOutcome {
        candidates,
        stats: col.stats,
        complete: !col.exhausted,
        trace: col.trace,
    })
}
