use std::f64::consts::{PI, TAU};

use lattice_schlicht::geometry::{
    boundary_trace, ctc_margin, kaplan_gap, report_markdown, report_rows, starlike_margin, svg_string, DEFAULT_CLIP,
};
use lattice_schlicht::reconstruct::{catalog, derivative_check, lookup};
use lattice_schlicht::RationalFn;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn f(id: &str) -> RationalFn {
    lookup(id).unwrap().function
}

#[test]
fn f6_is_injective_on_sampled_boundary() {
    let t = boundary_trace(&f("f6"), 1.0, 10_000).unwrap();
    let keep: Vec<(f64, num_complex::Complex64)> = t
        .samples
        .iter()
        .filter(|(th, _)| (th - PI / 3.0).abs() > 0.05 && (th - 5.0 * PI / 3.0).abs() > 0.05)
        .map(|(th, [x, y])| (*th, num_complex::Complex64::new(*x, *y)))
        .collect();
    // sort by real part and compare neighbours within a window
    let mut idx: Vec<usize> = (0..keep.len()).collect();
    idx.sort_by(|&i, &j| keep[i].1.re.total_cmp(&keep[j].1.re));
    for (pos, &i) in idx.iter().enumerate() {
        for &j in idx[pos + 1..].iter() {
            if keep[j].1.re - keep[i].1.re > 1e-6 {
                break;
            }
            let d = (keep[i].1 - keep[j].1).norm();
            let dtheta = (keep[i].0 - keep[j].0).abs();
            assert!(
                d >= 1e-6 || dtheta.min(TAU - dtheta) < 1e-3,
                "collision at {} and {}",
                keep[i].0,
                keep[j].0
            );
        }
    }
}

#[test]
fn kaplan_holds_on_random_arcs_for_f1() {
    let f1 = f("f1");
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..10_000 {
        let t1: f64 = rng.random_range(0.0..TAU);
        let len: f64 = rng.random_range(1e-3..TAU);
        let g = kaplan_gap(&f1, 0.999, t1, t1 + len).unwrap();
        assert!(g > -PI, "gap {g} on [{t1}, {}]", t1 + len);
    }
}

#[test]
fn kaplan_full_period_is_two_pi() {
    for e in catalog() {
        assert!(derivative_check(&e.function).ok);
        let g = kaplan_gap(&e.function, 0.9, 0.0, TAU).unwrap();
        assert!((g - TAU).abs() < 1e-6, "{}: {g}", e.id);
    }
}

#[test]
fn close_to_convexity_witnesses() {
    let k = f("koebe");
    let odd = f("friedman_05");
    assert!(ctc_margin(&f("f2"), &k, 0.9999, 4096).unwrap() >= 0.25 - 1e-6);
    assert!(ctc_margin(&f("f4"), &odd, 0.9999, 4096).unwrap() > 0.0);
    assert!(ctc_margin(&f("f3"), &odd, 0.9999, 4096).unwrap() > 0.0);
    assert!(ctc_margin(&f("f5"), &k, 0.9999, 4096).unwrap() >= 0.5 - 1e-6);
}

#[test]
fn f3_margin_tends_to_minus_two() {
    let m = starlike_margin(&f("f3"), 0.9999, 4096).unwrap();
    assert!(m < -1.8 && m > -2.1, "{m}");
}

#[test]
fn figures() {
    let t1 = boundary_trace(&f("f1"), 1.0, 2048).unwrap();
    let segs = t1.segments(DEFAULT_CLIP);
    assert_eq!(segs.len(), 1);
    assert!((segs[0][0] - *segs[0].last().unwrap()).norm() < 1e-6);

    let t4 = boundary_trace(&f("f4"), 1.0, 2048).unwrap();
    let segs = t4.segments(DEFAULT_CLIP);
    assert_eq!(segs.len(), 2);
    for s in &segs {
        assert!(s.iter().all(|w| (w.re + 0.25).abs() < 1e-9));
    }
    let svg = svg_string(&[t4], DEFAULT_CLIP).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
}

#[test]
fn report_table_has_six_rows() {
    let rows = report_rows().unwrap();
    assert_eq!(rows.len(), 6);
    let starlike: Vec<bool> = rows.iter().map(|r| r.starlike).collect();
    assert_eq!(starlike, [true, false, false, false, false, false]);
    assert!(rows[5].kaplan_violation.as_ref().unwrap().gap < -PI);
    assert!(!rows[5].class_u);
    let md = report_markdown(&rows);
    assert_eq!(md.lines().filter(|l| l.starts_with("| f")).count(), 6);
}
