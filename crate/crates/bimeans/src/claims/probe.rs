//! MN-convexity probe: sample `f(M(x,y))` against `N(f(x), f(y))` in both
//! directions over an interval and classify.
//!
//! `f` ranges over elementary anchors (identity, exp, log, x^c) and the four
//! parameter curves anchored at a fixed argument pair; `M` and `N` are any
//! of the five classical means. A direction only counts as violated after
//! the extended-precision oracle confirms a negative margin.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{fnv1a64, ClaimVerdict, Point, Precision, SearchConfig, Status, Witness};
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::means::{self, ClassicalKind, PositivePair};
use crate::oracle;
use crate::params::ParamCurve;

const EPS: f64 = f64::EPSILON;

/// The probed function.
#[derive(Clone, Debug)]
pub enum ProbeFunction {
    Identity,
    Exp,
    Log,
    /// `x^c`.
    PowerOf(f64),
    /// One of the parameter curves at a fixed pair: `t -> mean(t)`.
    Curve(ParamCurve),
}

impl ProbeFunction {
    pub fn describe(&self) -> String {
        match self {
            ProbeFunction::Identity => "identity".into(),
            ProbeFunction::Exp => "exp".into(),
            ProbeFunction::Log => "log".into(),
            ProbeFunction::PowerOf(c) => format!("x^{c}"),
            ProbeFunction::Curve(c) => format!(
                "{}-curve at ({}, {})",
                c.family.name(),
                c.pair.a(),
                c.pair.b()
            ),
        }
    }

    /// `(value, absolute log-error bound)`; errors if the value leaves (0, inf).
    fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let out = match self {
            ProbeFunction::Identity => (x, EPS),
            ProbeFunction::Exp => (x.exp(), EPS * (1.0 + x.abs())),
            ProbeFunction::Log => (x.ln(), EPS * (1.0 + x.ln().abs())),
            ProbeFunction::PowerOf(c) => (x.powf(*c), EPS * (2.0 + (c * x.ln()).abs())),
            ProbeFunction::Curve(curve) => {
                let r = means::eval(&curve.spec_at(x), &curve.pair)?;
                (r.value, r.abs_error_bound)
            }
        };
        if !(out.0 > 0.0) || !out.0.is_finite() {
            return Err(Error::ParamDomain {
                family: "probe",
                detail: format!("f({x}) = {} leaves (0, inf)", out.0),
            });
        }
        Ok(out)
    }

    fn eval_dd(&self, x: Dd) -> Result<Dd> {
        let v = match self {
            ProbeFunction::Identity => x,
            ProbeFunction::Exp => x.exp(),
            ProbeFunction::Log => x.ln(),
            ProbeFunction::PowerOf(c) => x.powdd(Dd::from(*c)),
            ProbeFunction::Curve(curve) => {
                let spec = curve.spec_at(x.to_f64());
                oracle::mean_dd(&spec, &curve.pair)?
            }
        };
        if !(v.hi > 0.0) || !v.hi.is_finite() {
            return Err(Error::ParamDomain { family: "probe", detail: "f out of range".into() });
        }
        Ok(v)
    }

    fn in_domain(&self, x: f64) -> bool {
        match self {
            ProbeFunction::Curve(curve) => curve.in_domain(x),
            _ => x.is_finite() && x > 0.0,
        }
    }
}

/// Probe classification over the sampled interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeClass {
    /// Both directions hold (equality within tolerance everywhere).
    ConvexAndConcave,
    Convex,
    Concave,
    Neither,
}

impl ProbeClass {
    pub fn name(self) -> &'static str {
        match self {
            ProbeClass::ConvexAndConcave => "MN-convex and MN-concave (equality)",
            ProbeClass::Convex => "MN-convex",
            ProbeClass::Concave => "MN-concave",
            ProbeClass::Neither => "neither",
        }
    }
}

/// Outcome of one probe: verdicts for the convex direction
/// (`f(M) <= N(f,f)`) and the concave direction (`f(M) >= N(f,f)`).
#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub f_desc: String,
    pub m: ClassicalKind,
    pub n: ClassicalKind,
    pub interval: (f64, f64),
    pub convex: ClaimVerdict,
    pub concave: ClaimVerdict,
    pub classification: ProbeClass,
}

struct DirTally {
    evaluated: u64,
    skipped: u64,
    worst: Option<Witness>,
    worst_decisive_positive: Option<Witness>,
    candidates: Vec<Witness>,
}

impl DirTally {
    fn new() -> Self {
        DirTally {
            evaluated: 0,
            skipped: 0,
            worst: None,
            worst_decisive_positive: None,
            candidates: Vec::new(),
        }
    }

    fn absorb(&mut self, w: Witness) {
        let worse = |a: &Witness, b: &Witness| {
            a.margin < b.margin
                || (a.margin == b.margin && a.point.lex_cmp(&b.point) == std::cmp::Ordering::Less)
        };
        self.evaluated += 1;
        if self.worst.as_ref().is_none_or(|cur| worse(&w, cur)) {
            self.worst = Some(w);
        }
        let thr = w.error_bound.max(1e-13 * (1.0 + w.lhs.abs() + w.rhs.abs()));
        if w.margin > thr
            && self.worst_decisive_positive.as_ref().is_none_or(|cur| worse(&w, cur))
        {
            self.worst_decisive_positive = Some(w);
        }
        if w.margin < -thr {
            self.candidates.push(w);
        }
    }
}

/// Sample `(x, y)` pairs from `interval` (grid plus seeded random points) and
/// audit both MN-convexity directions of `f`.
pub fn mn_convexity_probe(
    f: &ProbeFunction,
    m: ClassicalKind,
    n: ClassicalKind,
    interval: (f64, f64),
    samples_per_axis: usize,
    config: &SearchConfig,
) -> Result<ProbeReport> {
    let (lo, hi) = interval;
    if !(lo < hi) || !(lo > 0.0) || !hi.is_finite() {
        return Err(Error::Config(format!("probe interval must satisfy 0 < lo < hi, got [{lo}, {hi}]")));
    }
    if samples_per_axis < 2 {
        return Err(Error::Config("probe needs at least 2 samples per axis".into()));
    }
    let mut convex = DirTally::new();
    let mut concave = DirTally::new();

    let mut visit = |x: f64, y: f64, convex: &mut DirTally, concave: &mut DirTally| {
        if !f.in_domain(x) || !f.in_domain(y) {
            convex.skipped += 1;
            concave.skipped += 1;
            return;
        }
        let inner = (|| -> Result<(f64, f64, f64, f64)> {
            let mxy = means::classical_mean(m, &PositivePair::new(x, y)?)?;
            if !f.in_domain(mxy.value) {
                return Err(Error::ParamDomain { family: "probe", detail: "M(x,y) leaves f's domain".into() });
            }
            let (f_of_m, e_fm) = f.eval(mxy.value)?;
            let (fx, ex) = f.eval(x)?;
            let (fy, ey) = f.eval(y)?;
            let nff = means::classical_mean(n, &PositivePair::new(fx, fy)?)?;
            let e_n = ex.max(ey) + nff.abs_error_bound;
            let err = 2.0 * (f_of_m * e_fm + nff.value * e_n + 4.0 * EPS * (f_of_m + nff.value));
            Ok((f_of_m, nff.value, err, 0.0))
        })();
        match inner {
            Ok((f_of_m, nff, err, _)) => {
                let pt = Point::pair_only(x, y);
                convex.absorb(Witness {
                    point: pt,
                    lhs: f_of_m,
                    rhs: nff,
                    margin: nff - f_of_m,
                    error_bound: err,
                    precision: Precision::Working,
                });
                concave.absorb(Witness {
                    point: pt,
                    lhs: f_of_m,
                    rhs: nff,
                    margin: f_of_m - nff,
                    error_bound: err,
                    precision: Precision::Working,
                });
            }
            Err(_) => {
                convex.skipped += 1;
                concave.skipped += 1;
            }
        }
    };

    // inclusive grid over the square
    let step = (hi - lo) / (samples_per_axis - 1) as f64;
    let axis: Vec<f64> = (0..samples_per_axis)
        .map(|i| if i + 1 == samples_per_axis { hi } else { lo + i as f64 * step })
        .collect();
    for &x in &axis {
        for &y in &axis {
            visit(x, y, &mut convex, &mut concave);
        }
    }
    // seeded random pairs
    let salt = format!("probe:{}:{}:{}", f.describe(), m.name(), n.name());
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ fnv1a64(salt.as_bytes()));
    for _ in 0..samples_per_axis * samples_per_axis {
        let x = lo + rng.gen::<f64>() * (hi - lo);
        let y = lo + rng.gen::<f64>() * (hi - lo);
        visit(x, y, &mut convex, &mut concave);
    }

    // oracle confirmation of candidate violations, worst first
    let confirm = |tally: &mut DirTally, concave_dir: bool| -> Option<Witness> {
        tally.candidates.sort_by(|a, b| {
            a.margin
                .partial_cmp(&b.margin)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.point.lex_cmp(&b.point))
        });
        for cand in tally.candidates.iter().take(32) {
            let (x, y) = (cand.point.a, cand.point.b);
            let check = (|| -> Result<Witness> {
                let mxy = oracle::classical_dd(m, Dd::from(x), Dd::from(y));
                let f_of_m = f.eval_dd(mxy)?;
                let fx = f.eval_dd(Dd::from(x))?;
                let fy = f.eval_dd(Dd::from(y))?;
                let nff = if fx == fy { fx } else { oracle::classical_dd(n, fx, fy) };
                let raw = nff.sub(f_of_m);
                let margin = if concave_dir { raw.neg() } else { raw };
                let scale = f_of_m.to_f64().abs() + nff.to_f64().abs();
                // the inner f values carry ~ATOM_REL; L/I outer amplification
                let amp = match n {
                    ClassicalKind::Logarithmic | ClassicalKind::Identric if fx != fy => {
                        (fx.add(fy).abs().to_f64() / fx.sub(fy).abs().to_f64().max(1e-290))
                            .clamp(1.0, 1e15)
                    }
                    _ => 1.0,
                };
                Ok(Witness {
                    point: cand.point,
                    lhs: f_of_m.to_f64(),
                    rhs: nff.to_f64(),
                    margin: margin.to_f64(),
                    error_bound: oracle::ATOM_REL * scale * 4.0 * amp,
                    precision: Precision::Extended,
                })
            })();
            if let Ok(o) = check {
                if o.margin < -o.error_bound {
                    return Some(o);
                }
            }
        }
        None
    };

    let fingerprint = config.fingerprint();
    let make_verdict = |tally: &mut DirTally, id: String, confirmed: Option<Witness>| -> ClaimVerdict {
        let (status, worst) = if let Some(v) = confirmed {
            (Status::Violated, Some(v))
        } else if tally.evaluated == 0 {
            (Status::Vacuous, None)
        } else if let Some(w) = tally.worst_decisive_positive {
            (Status::HoldsOnSample, Some(w))
        } else {
            (Status::Indeterminate, tally.worst)
        };
        ClaimVerdict {
            id,
            status,
            worst,
            samples_evaluated: tally.evaluated,
            skipped: tally.skipped,
            config_fingerprint: fingerprint.clone(),
            depends_on_status: Vec::new(),
        }
    };

    let convex_confirmed = confirm(&mut convex, false);
    let concave_confirmed = confirm(&mut concave, true);
    let base = format!("PROBE[{} {}{}]", f.describe(), m.name(), n.name());
    let convex_v = make_verdict(&mut convex, format!("{base}-convex"), convex_confirmed);
    let concave_v = make_verdict(&mut concave, format!("{base}-concave"), concave_confirmed);

    let classification = match (convex_v.status == Status::Violated, concave_v.status == Status::Violated) {
        (false, false) => ProbeClass::ConvexAndConcave,
        (false, true) => ProbeClass::Convex,
        (true, false) => ProbeClass::Concave,
        (true, true) => ProbeClass::Neither,
    };
    // "both" only makes sense as equality; if one direction holds decisively
    // while the other merely lacks a counterexample, report the decisive one
    let classification = match classification {
        ProbeClass::ConvexAndConcave => {
            let convex_slack = convex_v.worst.map(|w| w.margin).unwrap_or(0.0);
            let concave_slack = concave_v.worst.map(|w| w.margin).unwrap_or(0.0);
            let tol_scale = |v: &ClaimVerdict| {
                v.worst.map(|w| 1e-12 * (1.0 + w.lhs.abs() + w.rhs.abs())).unwrap_or(1e-12)
            };
            if convex_slack.abs() <= tol_scale(&convex_v) && concave_slack.abs() <= tol_scale(&concave_v)
            {
                ProbeClass::ConvexAndConcave
            } else if convex_slack > concave_slack {
                ProbeClass::Convex
            } else {
                ProbeClass::Concave
            }
        }
        other => other,
    };

    Ok(ProbeReport {
        f_desc: f.describe(),
        m,
        n,
        interval,
        convex: convex_v,
        concave: concave_v,
        classification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::CurveFamily;
    use std::f64::consts::E;

    fn cfg() -> SearchConfig {
        SearchConfig { random_count: 0, ..SearchConfig::default() }
    }

    #[test]
    fn exp_is_ag_equality() {
        // exp(A(x,y)) = G(exp x, exp y) identically
        let r = mn_convexity_probe(
            &ProbeFunction::Exp,
            ClassicalKind::Arithmetic,
            ClassicalKind::Geometric,
            (0.1, 1.0),
            12,
            &cfg(),
        )
        .unwrap();
        assert_eq!(r.classification, ProbeClass::ConvexAndConcave);
        assert_ne!(r.convex.status, Status::Violated);
        assert_ne!(r.concave.status, Status::Violated);
    }

    #[test]
    fn identity_is_equality_for_matching_means() {
        for kind in ClassicalKind::ALL {
            let r = mn_convexity_probe(
                &ProbeFunction::Identity,
                kind,
                kind,
                (0.5, 2.0),
                8,
                &cfg(),
            )
            .unwrap();
            assert_eq!(r.classification, ProbeClass::ConvexAndConcave, "{kind:?}");
        }
    }

    #[test]
    fn power_curve_ll_concavity_is_violated_on_1_3() {
        // f(p) = M_p(1, e) with M = N = L on [1, 3]: the concave direction
        // f(L) >= L(f, f) fails at the same kind of witness as T1.1
        let curve = ParamCurve::new(
            CurveFamily::PowerInOrder,
            PositivePair::new(1.0, E).unwrap(),
        )
        .unwrap();
        let r = mn_convexity_probe(
            &ProbeFunction::Curve(curve),
            ClassicalKind::Logarithmic,
            ClassicalKind::Logarithmic,
            (1.0, 3.0),
            16,
            &cfg(),
        )
        .unwrap();
        assert_eq!(r.concave.status, Status::Violated);
        let w = r.concave.worst.unwrap();
        assert_eq!(w.precision, Precision::Extended);
        assert!(w.margin < 0.0);
    }

    #[test]
    fn exp_is_aa_convex_not_concave() {
        let r = mn_convexity_probe(
            &ProbeFunction::Exp,
            ClassicalKind::Arithmetic,
            ClassicalKind::Arithmetic,
            (0.1, 2.0),
            12,
            &cfg(),
        )
        .unwrap();
        assert_eq!(r.classification, ProbeClass::Convex);
        assert_eq!(r.concave.status, Status::Violated);
    }

    #[test]
    fn log_outside_positive_range_skips_points() {
        // log(x) <= 0 for x <= 1 leaves (0, inf): those points are skipped
        let r = mn_convexity_probe(
            &ProbeFunction::Log,
            ClassicalKind::Arithmetic,
            ClassicalKind::Arithmetic,
            (0.5, 3.0),
            8,
            &cfg(),
        )
        .unwrap();
        assert!(r.convex.skipped > 0);
        assert!(r.convex.samples_evaluated > 0);
    }
}
