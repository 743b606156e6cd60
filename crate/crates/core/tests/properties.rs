//! Property suites for the library invariants: root completeness against a
//! dense scan, branch-interval consistency, endpoint h-exactness,
//! divergence detection, classification exhaustivity, and profile
//! round-trips through the CSV + sidecar format.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use travwave::classify::{classify_level, WaveTag};
use travwave::io::{load_profile, write_profile_with_sidecar};
use travwave::potential::{IntervalKind, ZeroContact};
use travwave::profile::{build_compacton, build_cusped_periodic, BuildOptions};
use travwave::quad::{finite_time_convergent, Endpoint};
use travwave::verify::verify_profile;
use travwave::Potential;

fn random_potential(rng: &mut ChaCha8Rng, max_degree: usize) -> Potential {
    let degree = rng.gen_range(1..=max_degree);
    let mut coeffs: Vec<f64> = (0..=degree)
        .map(|_| rng.gen_range(-5i32..=5) as f64)
        .collect();
    if coeffs[degree] == 0.0 {
        coeffs[degree] = 1.0;
    }
    Potential::new(coeffs).unwrap()
}

/// Dense sign-change scan: resolution 1e-5, bisection to refine each
/// bracketed root. Finds exactly the odd-multiplicity roots.
fn scan_roots(f: &Potential, h: f64, lo: f64, hi: f64) -> Vec<f64> {
    let n = ((hi - lo) / 1e-5).ceil() as usize;
    let val = |u: f64| f.eval(u, 0) - h;
    let mut out = Vec::new();
    let mut prev_u = lo;
    let mut prev_v = val(lo);
    if prev_v == 0.0 {
        out.push(lo);
    }
    for i in 1..=n {
        let u = lo + (hi - lo) * i as f64 / n as f64;
        let v = val(u);
        if v == 0.0 {
            out.push(u);
        } else if prev_v != 0.0 && v.signum() != prev_v.signum() {
            let (mut a, mut b) = (prev_u, u);
            let sa = prev_v.signum();
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                let vm = val(m);
                if vm == 0.0 {
                    break;
                }
                if vm.signum() == sa {
                    a = m;
                } else {
                    b = m;
                }
            }
            out.push(0.5 * (a + b));
        }
        prev_u = u;
        prev_v = v;
    }
    out
}

#[test]
fn root_completeness_against_dense_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..60 {
        let f = random_potential(&mut rng, 8);
        let h = rng.gen_range(-5i32..=5) as f64;
        let hi = f.default_u_max(h);
        let found = match f.roots_shifted(h, 0.0, hi) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let scanned = scan_roots(&f, h, 0.0, hi);
        // Completeness: every scanned (sign-change) root is reported.
        for s in &scanned {
            assert!(
                found
                    .iter()
                    .any(|r| (r.x - s).abs() <= 1e-10 * s.abs().max(1.0)),
                "missed root {s} of {:?} at h = {h} (found {found:?})",
                f.coeffs()
            );
        }
        // No spurious odd-multiplicity roots: each must show a sign change.
        for r in &found {
            if r.multiplicity % 2 == 1 {
                assert!(
                    scanned
                        .iter()
                        .any(|s| (r.x - s).abs() <= 1e-10 * s.abs().max(1.0)),
                    "spurious root {} of {:?} at h = {h}",
                    r.x,
                    f.coeffs()
                );
            }
        }
    }
}

#[test]
fn interval_consistency_and_h_exact_contacts() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let f = random_potential(&mut rng, 8);
        let h = if rng.gen_bool(0.5) {
            f.h0()
        } else {
            rng.gen_range(-6.0..6.0)
        };
        let Ok(ivs) = f.admissible_intervals(h, f.default_u_max(h)) else {
            continue;
        };
        for iv in ivs {
            // Strictly below the level inside.
            assert!(f.eval(iv.midpoint(), 0) < h);
            // Endpoint residuals within the root tolerance.
            let scale = f.scale_at(iv.right_end);
            assert!((f.eval(iv.right_end, 0) - h).abs() <= 1e-9 * scale.max(1.0));
            // Zero contacts are h-exact: finite/zero slope only at h = h0,
            // infinite slope only above it.
            match iv.left_diag.zero_contact {
                ZeroContact::FiniteSlope(_) | ZeroContact::ZeroSlope => {
                    assert!(f.is_h0(h));
                }
                ZeroContact::InfiniteSlope => {
                    assert!(h > f.h0());
                }
                ZeroContact::None => assert_eq!(iv.kind, IntervalKind::Interior),
            }
        }
    }
}

/// Raw arrival-time integrand away from the endpoint; used only for monotone
/// growth checks.
fn raw_tail(f: &Potential, level: f64, from: f64, to: f64, n: usize) -> f64 {
    let dx = (to - from) / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let u = from + (i as f64 + 0.5) * dx;
        acc += (u / (level - f.eval(u, 0))).sqrt();
    }
    acc * dx
}

#[test]
fn divergence_detected_when_not_finite_time() {
    // Vanish order 3 at the singular line.
    let f = Potential::new(vec![0.0, 0.0, 0.0, -1.0]).unwrap();
    assert!(!finite_time_convergent(&f, Endpoint::Zero));
    let vals: Vec<f64> = [1e-3, 1e-4, 1e-5]
        .iter()
        .map(|&e| raw_tail(&f, f.h0(), e, 0.3, 100_000))
        .collect();
    assert!(vals[0] < vals[1] && vals[1] < vals[2]);
    assert!(vals[2] - vals[1] > 0.5 * (vals[1] - vals[0]) - 1e-6);

    // Critical turning point: F = -u (u - 1)^2 at m = 1.
    let f = Potential::new(vec![0.0, -1.0, 2.0, -1.0]).unwrap();
    assert!(!finite_time_convergent(&f, Endpoint::Turn(1.0)));
    let vals: Vec<f64> = [1e-3, 1e-4, 1e-5]
        .iter()
        .map(|&e| raw_tail(&f, f.h0(), 0.5, 1.0 - e, 100_000))
        .collect();
    assert!(vals[0] < vals[1] && vals[1] < vals[2]);
}

#[test]
fn classification_is_exhaustive_over_from_zero_intervals() {
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let mut nontrivial = 0usize;
    for _ in 0..2000 {
        let f = random_potential(&mut rng, 8);
        for h in [f.h0(), f.h0() + 0.5, f.h0() + 2.0] {
            let Ok(ivs) = f.admissible_intervals(h, f.default_u_max(h)) else {
                continue;
            };
            let classes = classify_level(&f, h);
            for iv in ivs.iter().filter(|iv| iv.kind == IntervalKind::FromZero) {
                nontrivial += 1;
                let covered = classes.iter().any(|c| {
                    (c.interval.left_end - iv.left_end).abs() <= 1e-9
                        && (c.interval.right_end - iv.right_end).abs()
                            <= 1e-9 * iv.right_end.abs().max(1.0)
                });
                assert!(
                    covered,
                    "from-zero interval (0, {}) of {:?} at h = {h} dropped",
                    iv.right_end,
                    f.coeffs()
                );
            }
        }
    }
    assert!(nontrivial > 200, "ensemble too small: {nontrivial}");
}

#[test]
fn profile_round_trip_preserves_the_verdict() {
    let dir = std::env::temp_dir().join("travwave-prop-roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    let cases: Vec<(Potential, travwave::profile::WaveProfile)> = vec![
        {
            let f = Potential::new(vec![0.0, 0.0, -1.0, 1.0]).unwrap();
            let p = build_compacton(&f, &BuildOptions::default()).unwrap();
            (f, p)
        },
        {
            let f = Potential::new(vec![0.0, 1.0]).unwrap();
            let p = build_cusped_periodic(&f, 1.0, &BuildOptions::default()).unwrap();
            (f, p)
        },
    ];
    for (f, p) in cases {
        let tag = p.meta.tag.as_str();
        let csv = dir.join(format!("{tag}.csv"));
        let sc = dir.join(format!("{tag}.json"));
        write_profile_with_sidecar(&p, &f, &csv, &sc).unwrap();
        let (q, g) = load_profile(&csv, &sc).unwrap();

        let before = verify_profile(&p, &f);
        let after = verify_profile(&q, &g);
        // The 17-significant-digit format round-trips every f64 exactly, so
        // the entire report must be byte-identical.
        assert_eq!(
            serde_json::to_string(&before).unwrap(),
            serde_json::to_string(&after).unwrap(),
            "round-trip changed the verification report for {tag}"
        );
    }
}

#[test]
fn none_singular_reported_for_lipschitz_contacts() {
    // F'(0) = F''(0) = 0 with odd/even higher contact: u^4 - u^3, u^5 - u^4.
    for coeffs in [
        vec![0.0, 0.0, 0.0, -1.0, 1.0],
        vec![0.0, 0.0, 0.0, 0.0, -1.0, 1.0],
    ] {
        let f = Potential::new(coeffs).unwrap();
        let classes = classify_level(&f, f.h0());
        assert!(classes.iter().any(|c| c.tag == WaveTag::NoneSingular));
        assert!(!classes
            .iter()
            .any(|c| c.tag.is_peaked() || c.tag.is_compact_family()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Evaluation by coefficient differentiation agrees with finite
    /// differences of the polynomial itself.
    #[test]
    fn derivative_consistency(
        coeffs in prop::collection::vec(-5.0f64..5.0, 2..8),
        u in -2.0f64..2.0,
    ) {
        prop_assume!(coeffs.last().map(|c| c.abs() > 1e-3).unwrap_or(false));
        let f = Potential::new(coeffs).unwrap();
        let eps = 1e-6;
        let fd = (f.eval(u + eps, 0) - f.eval(u - eps, 0)) / (2.0 * eps);
        let exact = f.eval(u, 1);
        let scale = f.scale_at(u).max(1.0);
        prop_assert!((fd - exact).abs() <= 1e-4 * scale);
    }

    /// The two signed branches are exact mirrors and satisfy the energy
    /// identity wherever they are defined.
    #[test]
    fn branch_energy_identity(
        c1 in -4.0f64..-0.5,
        c2 in 0.5f64..4.0,
        frac in 0.05f64..0.95,
    ) {
        // F = c2 u^2 + c1 u has a from-zero interval at h0 = 0 with
        // m = -c1/c2 > 0.
        let f = Potential::new(vec![0.0, c1, c2]).unwrap();
        let m = -c1 / c2;
        let u = frac * m;
        let plus = travwave::quad::SpeedBranch::new(&f, 0.0, travwave::quad::Sign::Plus);
        let minus = travwave::quad::SpeedBranch::new(&f, 0.0, travwave::quad::Sign::Minus);
        let vp = plus.speed(u).unwrap();
        let vm = minus.speed(u).unwrap();
        prop_assert_eq!(vp, -vm);
        let resid = (u * vp * vp / 2.0 + f.eval(u, 0)).abs();
        prop_assert!(resid <= 1e-10 * f.scale_at(u).max(1.0));
    }
}

#[test]
fn parallel_and_sequential_sweeps_agree() {
    let f = Potential::new(vec![0.0, -1.0, 2.0, -0.5]).unwrap();
    let hs: Vec<f64> = (0..40).map(|i| -1.0 + 2.0 * i as f64 / 39.0).collect();
    let par = travwave::exec::par_map(&hs, |&h| {
        travwave::io::ClassifyReport::new(h, &classify_level(&f, h))
    });
    let seq = travwave::exec::seq_map(&hs, |&h| {
        travwave::io::ClassifyReport::new(h, &classify_level(&f, h))
    });
    assert_eq!(
        serde_json::to_string(&par).unwrap(),
        serde_json::to_string(&seq).unwrap(),
        "fan-out must not change results or ordering"
    );
}
