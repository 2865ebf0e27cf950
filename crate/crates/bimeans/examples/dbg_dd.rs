fn main() {
    use bimeans::claims::*;
    let t0 = std::time::Instant::now();
    let report = audit_all(&SearchConfig::default()).unwrap();
    let dt = t0.elapsed();
    for v in &report.verdicts {
        let w = v.worst.as_ref();
        println!(
            "{:6} {:15} margin={:>13.6e} at a={:.4} b={:.4} p={:?} q={:?} w={:?} v={:?}  n={} skip={}",
            v.id,
            v.status.name(),
            w.map(|w| w.margin).unwrap_or(f64::NAN),
            w.map(|w| w.point.a).unwrap_or(f64::NAN),
            w.map(|w| w.point.b).unwrap_or(f64::NAN),
            w.and_then(|w| w.point.p).map(|x| format!("{x:.4}")),
            w.and_then(|w| w.point.q).map(|x| format!("{x:.4}")),
            w.and_then(|w| w.point.omega).map(|x| format!("{x:.3}")),
            w.and_then(|w| w.point.nu).map(|x| format!("{x:.3}")),
            v.samples_evaluated, v.skipped,
        );
    }
    println!("elapsed: {dt:?}");
}
