//! Deterministic grid/random/refinement counterexample search.
//!
//! For a fixed `(claim, config)` the search is a pure function: grid points
//! are enumerated in declared variable order, random points come from a
//! ChaCha8 stream seeded by `seed XOR fnv1a(claim id)`, refinement re-centers
//! a shrinking local grid on the worst point so far, and candidate
//! violations are confirmed by the extended-precision oracle (worst first)
//! before any verdict says "violated". Reductions keep the smaller margin
//! and break ties by lexicographic point order, so the result is
//! byte-reproducible regardless of platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::catalog::catalog;
use super::eval::{evaluate_claim, oracle_eval};
use super::{
    fnv1a64, ClaimSpec, ClaimVerdict, OrderBranch, Point, SearchConfig, Status, Var, Witness,
};
use crate::error::Result;

/// Name of the deterministic generator, recorded in every report.
pub const GENERATOR: &str = "chacha8";

/// How many worst candidates are re-checked at extended precision.
const MAX_ESCALATIONS: usize = 64;

/// Decision threshold at a point: `max(error_bound, 1e-12 (1 + |lhs| + |rhs|))`.
fn decision_threshold(w: &Witness) -> f64 {
    w.error_bound.max(1e-12 * (1.0 + w.lhs.abs() + w.rhs.abs()))
}

fn worse(a: &Witness, b: &Witness) -> bool {
    a.margin < b.margin
        || (a.margin == b.margin && a.point.lex_cmp(&b.point) == std::cmp::Ordering::Less)
}

/// Running reduction state over evaluated points.
struct Tally {
    evaluated: u64,
    skipped: u64,
    /// Overall worst (minimum-margin) witness.
    worst: Option<Witness>,
    /// Worst witness among decisive positive points.
    worst_decisive_positive: Option<Witness>,
    /// Candidate violations, bounded worst-first.
    candidates: Vec<Witness>,
}

impl Tally {
    fn new() -> Tally {
        Tally {
            evaluated: 0,
            skipped: 0,
            worst: None,
            worst_decisive_positive: None,
            candidates: Vec::new(),
        }
    }

    fn absorb(&mut self, w: Witness) {
        self.evaluated += 1;
        if self.worst.as_ref().is_none_or(|cur| worse(&w, cur)) {
            self.worst = Some(w);
        }
        let thr = decision_threshold(&w);
        if w.margin > thr
            && self.worst_decisive_positive.as_ref().is_none_or(|cur| worse(&w, cur))
        {
            self.worst_decisive_positive = Some(w);
        }
        if w.margin < -thr {
            self.candidates.push(w);
            if self.candidates.len() > 4 * MAX_ESCALATIONS {
                self.prune_candidates();
            }
        }
    }

    fn prune_candidates(&mut self) {
        self.candidates.sort_by(|a, b| {
            a.margin
                .partial_cmp(&b.margin)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.point.lex_cmp(&b.point))
        });
        self.candidates.truncate(MAX_ESCALATIONS);
    }
}

/// The sampling axes of one claim: the spread ratio plus its coordinates.
struct Axes {
    ratios: Vec<f64>,
    /// Per order-branch, the values each order coordinate ranges over.
    order_values: Vec<(OrderBranch, Vec<f64>)>,
    weight_values: Vec<f64>,
}

fn build_axes(claim: &ClaimSpec, config: &SearchConfig) -> Axes {
    let mut ratios = config.ratio.values();
    ratios.extend_from_slice(&config.extra_ratios);
    let pos = config.order.values();
    let mut order_values = Vec::new();
    for branch in claim.hypothesis.order_branches() {
        match branch {
            OrderBranch::Positive => order_values.push((OrderBranch::Positive, pos.clone())),
            OrderBranch::NonPositive => {
                // mirrored orders plus the p = q = 0 corner
                let mut neg: Vec<f64> = pos.iter().map(|&v| -v).collect();
                neg.push(0.0);
                order_values.push((OrderBranch::NonPositive, neg));
            }
        }
    }
    Axes { ratios, order_values, weight_values: config.weight.values() }
}

fn axis_values<'a>(axes: &'a Axes, var: Var, branch_orders: &'a [f64]) -> &'a [f64] {
    match var {
        Var::P | Var::Q => branch_orders,
        Var::Omega | Var::Nu => &axes.weight_values,
    }
}

fn make_point(claim: &ClaimSpec, ratio: f64, coords: &[f64]) -> Point {
    let (a, b) = claim.hypothesis.make_pair(ratio);
    let mut pt = Point::pair_only(a, b);
    for (var, &v) in claim.vars.iter().zip(coords) {
        match var {
            Var::P => pt.p = Some(v),
            Var::Q => pt.q = Some(v),
            Var::Omega => pt.omega = Some(v),
            Var::Nu => pt.nu = Some(v),
        }
    }
    pt
}

fn process_point(claim: &ClaimSpec, pt: &Point, tally: &mut Tally) {
    if !claim.hypothesis.satisfied(pt) {
        tally.skipped += 1;
        return;
    }
    match evaluate_claim(claim, pt) {
        Ok(w) => tally.absorb(w),
        Err(_) => tally.skipped += 1,
    }
}

/// Search one claim under a configuration.
pub fn search(claim: &ClaimSpec, config: &SearchConfig) -> Result<ClaimVerdict> {
    config.validate()?;
    let fingerprint = config.fingerprint();
    let axes = build_axes(claim, config);
    let mut tally = Tally::new();

    // --- full Cartesian grid, in declared variable order ---
    for (_, branch_orders) in &axes.order_values {
        let dims: Vec<&[f64]> =
            claim.vars.iter().map(|&v| axis_values(&axes, v, branch_orders)).collect();
        for &ratio in &axes.ratios {
            let mut idx = vec![0usize; dims.len()];
            loop {
                let coords: Vec<f64> = idx.iter().zip(&dims).map(|(&i, d)| d[i]).collect();
                let pt = make_point(claim, ratio, &coords);
                process_point(claim, &pt, &mut tally);
                // odometer increment
                let mut k = dims.len();
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < dims[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    if k == 0 {
                        k = usize::MAX;
                        break;
                    }
                }
                if k == usize::MAX || dims.is_empty() {
                    break;
                }
            }
        }
    }

    // --- seeded random phase ---
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ fnv1a64(claim.id.as_bytes()));
    let branches = claim.hypothesis.order_branches();
    for _ in 0..config.random_count {
        let ratio = config.ratio.sample(&mut rng);
        let branch = if branches.len() == 2 {
            if rng.gen::<bool>() {
                branches[1]
            } else {
                branches[0]
            }
        } else {
            branches[0]
        };
        let coords: Vec<f64> = claim
            .vars
            .iter()
            .map(|&v| match v {
                Var::P | Var::Q => {
                    let raw = config.order.sample(&mut rng);
                    match branch {
                        OrderBranch::Positive => raw,
                        OrderBranch::NonPositive => -raw,
                    }
                }
                Var::Omega | Var::Nu => config.weight.sample(&mut rng),
            })
            .collect();
        let pt = make_point(claim, ratio, &coords);
        process_point(claim, &pt, &mut tally);
    }

    // --- local nested-grid refinement around the current worst point ---
    let ratio_lo = axes.ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let ratio_hi = axes.ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for round in 1..=config.refinement_rounds {
        let Some(center) = tally.worst else { break };
        let shrink = config.shrink_factor.powi(round as i32);
        let anchor = claim.hypothesis.pair_anchor();
        let center_ratio = (center.point.a.max(center.point.b)) / anchor;
        let local = |val: f64, span: f64, lo: f64, hi: f64| -> Vec<f64> {
            let s = span * shrink;
            [-1.0, -0.5, 0.0, 0.5, 1.0]
                .iter()
                .map(|&k| (val + k * s).clamp(lo, hi))
                .collect()
        };
        let ratio_axis = local(center_ratio, ratio_hi - ratio_lo, ratio_lo, ratio_hi);
        let coord_of = |pt: &Point, var: Var| match var {
            Var::P => pt.p.unwrap_or(0.0),
            Var::Q => pt.q.unwrap_or(0.0),
            Var::Omega => pt.omega.unwrap_or(0.0),
            Var::Nu => pt.nu.unwrap_or(0.0),
        };
        let dims: Vec<Vec<f64>> = claim
            .vars
            .iter()
            .map(|&v| {
                let cur = coord_of(&center.point, v);
                match v {
                    Var::P | Var::Q => {
                        let span = config.order.hi - config.order.lo;
                        if cur < 0.0 {
                            local(cur, span, -config.order.hi, -config.order.lo)
                        } else if cur == 0.0 {
                            vec![0.0]
                        } else {
                            local(cur, span, config.order.lo, config.order.hi)
                        }
                    }
                    Var::Omega | Var::Nu => {
                        local(cur, config.weight.hi - config.weight.lo, config.weight.lo, config.weight.hi)
                    }
                }
            })
            .collect();
        for &ratio in &ratio_axis {
            let mut idx = vec![0usize; dims.len()];
            loop {
                let coords: Vec<f64> = idx.iter().zip(&dims).map(|(&i, d)| d[i]).collect();
                let pt = make_point(claim, ratio, &coords);
                process_point(claim, &pt, &mut tally);
                let mut k = dims.len();
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < dims[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    if k == 0 {
                        k = usize::MAX;
                        break;
                    }
                }
                if k == usize::MAX || dims.is_empty() {
                    break;
                }
            }
        }
    }

    // --- oracle confirmation, worst candidates first ---
    tally.prune_candidates();
    let mut confirmed: Option<Witness> = None;
    for cand in tally.candidates.iter().take(MAX_ESCALATIONS) {
        if let Ok(o) = oracle_eval(claim, &cand.point) {
            if o.margin < -o.error_bound
                && confirmed.as_ref().is_none_or(|cur| worse(&o, cur))
            {
                confirmed = Some(o);
            }
        }
    }

    let (status, worst) = if let Some(v) = confirmed {
        (Status::Violated, Some(v))
    } else if tally.evaluated == 0 {
        (Status::Vacuous, None)
    } else if let Some(w) = tally.worst_decisive_positive {
        // no confirmed violation; decisive positive points exist
        (Status::HoldsOnSample, Some(w))
    } else {
        (Status::Indeterminate, tally.worst)
    };

    Ok(ClaimVerdict {
        id: claim.id.to_string(),
        status,
        worst,
        samples_evaluated: tally.evaluated,
        skipped: tally.skipped,
        config_fingerprint: fingerprint,
        depends_on_status: Vec::new(),
    })
}

/// A full audit: every catalog claim under one shared configuration.
#[derive(Clone, Debug)]
pub struct AuditReport {
    pub version: String,
    pub generator: &'static str,
    pub seed: u64,
    pub config: SearchConfig,
    pub fingerprint: String,
    pub verdicts: Vec<ClaimVerdict>,
}

impl AuditReport {
    pub fn any_violated(&self) -> bool {
        self.verdicts.iter().any(|v| v.status == Status::Violated)
    }

    pub fn any_indeterminate(&self) -> bool {
        self.verdicts.iter().any(|v| v.status == Status::Indeterminate)
    }
}

/// Run [`search`] over the whole catalog and annotate each verdict with the
/// statuses of the claims it depends on. Verdicts are sorted by claim id.
pub fn audit_all(config: &SearchConfig) -> Result<AuditReport> {
    config.validate()?;
    let cat = catalog();
    let mut verdicts = Vec::with_capacity(cat.len());
    for claim in &cat {
        verdicts.push(search(claim, config)?);
    }
    verdicts.sort_by(|a, b| a.id.cmp(&b.id));
    let status_of: Vec<(String, Status)> =
        verdicts.iter().map(|v| (v.id.clone(), v.status)).collect();
    for (claim, verdict) in cat.iter().zip(verdicts.iter_mut()) {
        debug_assert_eq!(claim.id, verdict.id);
        verdict.depends_on_status = claim
            .depends_on
            .iter()
            .map(|dep| {
                let st = status_of
                    .iter()
                    .find(|(id, _)| id == dep)
                    .map(|(_, s)| *s)
                    .unwrap_or(Status::Indeterminate);
                (dep.to_string(), st)
            })
            .collect();
    }
    Ok(AuditReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        generator: GENERATOR,
        seed: config.seed,
        config: config.clone(),
        fingerprint: config.fingerprint(),
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::super::catalog::find_claim;
    use super::*;
    use crate::claims::{GridScale, GridSpec};

    /// A small config for fast engine tests.
    fn small_config() -> SearchConfig {
        SearchConfig {
            ratio: GridSpec { lo: 1.05, hi: 8.0, count: 6, scale: GridScale::Log },
            extra_ratios: vec![1.0 + 1e-6],
            order: GridSpec { lo: 0.25, hi: 4.0, count: 6, scale: GridScale::Linear },
            weight: GridSpec { lo: 0.2, hi: 6.0, count: 5, scale: GridScale::Log },
            random_count: 200,
            seed: 42,
            refinement_rounds: 3,
            shrink_factor: 0.5,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn t11_is_violated() {
        let claim = find_claim("T1.1").unwrap();
        let v = search(&claim, &small_config()).unwrap();
        assert_eq!(v.status, Status::Violated);
        let w = v.worst.unwrap();
        assert_eq!(w.precision, crate::claims::Precision::Extended);
        assert!(w.margin < -w.error_bound);
    }

    #[test]
    fn violations_are_sticky_under_enlargement() {
        let claim = find_claim("T2.2").unwrap();
        let small = search(&claim, &small_config()).unwrap();
        assert_eq!(small.status, Status::Violated);
        let mut bigger = small_config();
        bigger.random_count = 400;
        bigger.ratio.count = 9;
        let big = search(&claim, &bigger).unwrap();
        assert_eq!(big.status, Status::Violated);
        assert!(big.worst.unwrap().margin <= small.worst.unwrap().margin + 1e-12);
    }

    #[test]
    fn vacuous_when_ratio_grid_contradicts_pair_hypothesis() {
        // hypothesis b >= a searched on pairs with a > b only
        let claim = find_claim("T2.1").unwrap();
        let mut config = small_config();
        config.ratio = GridSpec { lo: 0.2, hi: 0.9, count: 5, scale: GridScale::Log };
        config.extra_ratios.clear();
        config.random_count = 50;
        let v = search(&claim, &config).unwrap();
        assert_eq!(v.status, Status::Vacuous);
        assert!(v.worst.is_none());
        assert!(v.skipped > 0);
    }

    #[test]
    fn vacuous_when_parameter_domain_is_empty() {
        // TT-W needs a weight center u > 1; cap the weight grid below 1
        let claim = find_claim("TT-W").unwrap();
        let mut config = small_config();
        config.weight = GridSpec { lo: 0.1, hi: 0.9, count: 4, scale: GridScale::Log };
        config.random_count = 50;
        let v = search(&claim, &config).unwrap();
        assert_eq!(v.status, Status::Vacuous);
    }

    #[test]
    fn search_is_deterministic() {
        let claim = find_claim("T1.3").unwrap();
        let a = search(&claim, &small_config()).unwrap();
        let b = search(&claim, &small_config()).unwrap();
        assert_eq!(a.status, b.status);
        assert_eq!(a.samples_evaluated, b.samples_evaluated);
        let (wa, wb) = (a.worst.unwrap(), b.worst.unwrap());
        assert_eq!(wa.margin.to_bits(), wb.margin.to_bits());
        assert_eq!(wa.point, wb.point);
    }

    #[test]
    fn seed_changes_statuses_stay() {
        let claim = find_claim("T1.1").unwrap();
        let mut other = small_config();
        other.seed = 7;
        let a = search(&claim, &small_config()).unwrap();
        let b = search(&claim, &other).unwrap();
        assert_eq!(a.status, b.status);
    }

    #[test]
    fn audit_all_covers_catalog_and_fills_dependencies() {
        let mut config = small_config();
        config.random_count = 100;
        config.refinement_rounds = 2;
        let report = audit_all(&config).unwrap();
        assert_eq!(report.verdicts.len(), 20);
        let ids: Vec<_> = report.verdicts.iter().map(|v| v.id.clone()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        let t11 = report.verdicts.iter().find(|v| v.id == "T1.1").unwrap();
        assert_eq!(t11.depends_on_status.len(), 2);
        assert!(t11.depends_on_status.iter().any(|(id, _)| id == "L2.4a"));
        assert_eq!(report.generator, "chacha8");
    }

    #[test]
    fn error_bound_soundness_on_refined_witnesses() {
        // |working margin - extended margin| <= working error bound
        for id in ["T1.1", "T1.2", "T2.2", "T3.1", "L2.5", "TT-L"] {
            let claim = find_claim(id).unwrap();
            let v = search(&claim, &small_config()).unwrap();
            if let Some(w) = v.worst {
                let working = evaluate_claim(&claim, &w.point).unwrap();
                let extended = oracle_eval(&claim, &w.point).unwrap();
                assert!(
                    (working.margin - extended.margin).abs() <= working.error_bound,
                    "{id}: working {} vs extended {} bound {}",
                    working.margin,
                    extended.margin,
                    working.error_bound
                );
            }
        }
    }
}
