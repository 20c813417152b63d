//! Acceptance suite A1–A12. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};
use std::time::{Duration, Instant};

use junctionlab::bdg::{assemble, assemble_pairing};
use junctionlab::bulk::{bloch_block, block_eigenvalues, device_gap_edge, open_chain, periodic_ring};
use junctionlab::continuum::{abs_energy, delta_jump_c, delta_scattering, free_amplitude, pole_root, ContinuumParams};
use junctionlab::eigen::eigvalsh;
use junctionlab::lattice::{build_sc_sc, build_sc_tsc, build_tsc_tsc, MsqGeometry, RegionKind, RegionModel};
use junctionlab::observables::{local_densities, total_charge};
use junctionlab::presets::{probe_phases, PresetId, MSQ_GATES};
use junctionlab::sweep::{
    in_gap_states, msq_sweep, pinned_branches, sweep, DeviceFamily, MsqPattern, SweepConfig, SweptPhase, NEAR_ZERO_BAND,
};
use junctionlab::symmetry::{ph_defect, values_symmetry_defect};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn a1() -> Check {
    let mut worst = 0.0f64;
    for (phi, expect) in [(0.0, 1.0), (FRAC_PI_2, 1.0 / SQRT_2), (PI, 0.0)] {
        let (p, m) = abs_energy(phi, 1.0, 1.0);
        worst = worst.max((p - expect).abs()).max((m + expect).abs());
    }
    ensure(worst <= 1e-12, format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn a2() -> Check {
    let mut worst = 0.0f64;
    for i in 0..64 {
        let phi = TAU * (i as f64 + 0.5) / 64.0;
        let root = pole_root(phi, 1.0).map_err(e)?;
        worst = worst.max((root - abs_energy(phi, 1.0, 1.0).0).abs());
    }
    ensure(worst <= 1e-9, format!("max |root - closed form| {worst:e}"))?;
    Ok(format!("64 points, max deviation {worst:.1e}"))
}

fn a3() -> Check {
    let spec = build_sc_sc(30, 0.5, 1.0, 1.0, PI, 1.0).map_err(e)?;
    let gap = device_gap_edge(&spec, None).map_err(e)?;
    let values = eigvalsh(&assemble(&spec).map_err(e)?).map_err(e)?;
    let in_gap: Vec<f64> = values.iter().copied().filter(|x| x.abs() < gap).collect();
    let sym = values_symmetry_defect(&values);
    ensure(in_gap.len() == 2, format!("{} in-gap states", in_gap.len()))?;
    ensure(sym <= 1e-9, format!("spectrum symmetry defect {sym:e}"))?;
    Ok(format!(
        "in-gap {:.4}, {:.4} (gap edge {gap:.4}); symmetry defect {sym:.1e}",
        in_gap[0], in_gap[1]
    ))
}

fn abs_gap_at_pi(v: f64) -> Result<f64, String> {
    let spec = build_sc_sc(30, 0.5, 1.0, 1.0, PI, v).map_err(e)?;
    let snap = in_gap_states(&spec, device_gap_edge(&spec, None).map_err(e)?).map_err(e)?;
    let below = snap
        .energies
        .iter()
        .copied()
        .filter(|x| *x < 0.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let above = snap
        .energies
        .iter()
        .copied()
        .filter(|x| *x >= 0.0)
        .fold(f64::INFINITY, f64::min);
    ensure(
        below.is_finite() && above.is_finite(),
        format!("v = {v}: ABS pair not found"),
    )?;
    Ok(above - below)
}

fn a4() -> Check {
    let gaps: Vec<f64> = [0.25, 0.5, 0.75, 1.0]
        .iter()
        .map(|&v| abs_gap_at_pi(v))
        .collect::<Result<_, _>>()?;
    ensure(
        gaps.windows(2).all(|w| w[1] < w[0]),
        format!("not strictly decreasing: {gaps:?}"),
    )?;
    Ok(format!(
        "ABS gap at pi: {}",
        gaps.iter().map(|g| format!("{g:.4}")).collect::<Vec<_>>().join(" > ")
    ))
}

fn a5() -> Check {
    let family = DeviceFamily::ScTsc {
        n: 30,
        mu: 1.0,
        t: 1.0,
        delta0: 1.0,
        v_c: 1.0,
    };
    let r = sweep(&SweepConfig::new(family.clone()).with_n_phi(128)).map_err(e)?;
    let spec = family.build(SweptPhase::Phi, 0.0).map_err(e)?;
    let tsc = spec.region_index("tsc").unwrap();
    let far_edge = spec.chain_edge(tsc, true, 4);
    let n = r.snapshots.len();
    let full: Vec<_> = r.curves.iter().filter(|c| c.points.len() == n).collect();
    let flat = full
        .iter()
        .filter(|c| c.spread() <= 1e-3)
        .map(|c| {
            let w = c
                .points
                .iter()
                .map(|p| {
                    local_densities(r.state(p), &spec)
                        .map(|f| f.weight_on(&far_edge))
                        .unwrap_or(0.0)
                })
                .fold(f64::INFINITY, f64::min);
            (c.branch_id, c.spread(), w)
        })
        .find(|x| x.2 >= 0.9);
    let Some((fb, spread, weight)) = flat else {
        return Err("no flat branch with >= 90% weight on the far TSC edge".into());
    };
    let sensitive: Vec<_> = full.iter().filter(|c| c.spread() > 1e-3).collect();
    ensure(
        sensitive.len() == 1,
        format!("{} phase-sensitive full branches", sensitive.len()),
    )?;
    let xs = sensitive[0].zero_crossings();
    let near = |target: f64| xs.iter().any(|x| (x - target).abs() <= 0.05);
    ensure(
        xs.len() == 2 && near(FRAC_PI_2) && near(3.0 * FRAC_PI_2),
        format!("zero crossings {xs:?}"),
    )?;
    Ok(format!(
        "flat branch {fb}: spread {spread:.1e}, min far-edge weight {weight:.3}; ABS crossings {:.4}, {:.4}",
        xs[0], xs[1]
    ))
}

fn a6() -> Check {
    let family = DeviceFamily::ScTsc {
        n: 30,
        mu: 1.0,
        t: 1.0,
        delta0: 1.0,
        v_c: 0.0,
    };
    let r = sweep(&SweepConfig::new(family).with_n_phi(64)).map_err(e)?;
    ensure(!r.curves.is_empty(), "no in-gap branches")?;
    let worst = r.curves.iter().map(|c| c.spread()).fold(0.0, f64::max);
    ensure(worst <= 1e-9, format!("max spread {worst:e}"))?;
    Ok(format!("{} branches, max spread {worst:.1e}", r.curves.len()))
}

fn a7() -> Check {
    let family = DeviceFamily::TscTsc {
        n: 60,
        mu_left: 1.0,
        mu_right: 1.0,
        t: 1.0,
        delta0: 1.0,
        v_junction: 1.0,
    };
    let r = sweep(&SweepConfig::new(family).with_n_phi(128)).map_err(e)?;
    let n = r.snapshots.len();
    let full = r.curves.iter().filter(|c| c.points.len() == n).count();
    ensure(
        r.curves.len() == 4 && full == 4,
        format!("{} branches ({full} full length)", r.curves.len()),
    )?;
    let pinned = pinned_branches(&r.curves, 1e-3);
    ensure(pinned.len() == 2, format!("{} pinned branches", pinned.len()))?;
    let exchanged = r.exchanged_branches();
    ensure(
        exchanged.len() == 2 && exchanged.iter().all(|b| !pinned.contains(b)),
        format!("exchanged {exchanged:?}"),
    )?;
    Ok(format!(
        "4 branches, pinned {pinned:?}, ABS branches {exchanged:?} exchanged at 2pi"
    ))
}

fn a8() -> Check {
    let mut tsc_worst = 0.0f64;
    let mut sc_worst = 0.0f64;
    for i in 0..8 {
        let phi = TAU * i as f64 / 8.0 + 0.1;
        for spec in [
            build_tsc_tsc(40, 1.0, 1.7, 1.0, 1.0, phi).map_err(e)?,
            open_chain(&RegionModel::new("k", RegionKind::KitaevTsc, 0.6, 1.0, 0.9, phi), 20),
        ] {
            tsc_worst = tsc_worst.max(ph_defect(&assemble(&spec).map_err(e)?).defect);
        }
        for spec in [
            build_sc_sc(30, 0.5, 1.0, 1.0, phi, 1.0).map_err(e)?,
            build_sc_tsc(30, 1.0, 1.0, 1.0, phi, 1.0).map_err(e)?,
        ] {
            let d = ph_defect(&assemble(&spec).map_err(e)?).defect;
            let p = assemble_pairing(&spec, Some(RegionKind::NormalSc))
                .map_err(e)?
                .frobenius_norm();
            sc_worst = sc_worst.max((d - 2.0 * p).abs());
        }
    }
    ensure(tsc_worst <= 1e-12, format!("all-TSC defect {tsc_worst:e}"))?;
    ensure(sc_worst <= 1e-10, format!("SC defect vs 2x pairing norm {sc_worst:e}"))?;
    Ok(format!(
        "all-TSC defect {tsc_worst:.1e}; SC-device mismatch {sc_worst:.1e}"
    ))
}

fn a9() -> Check {
    let mut states = 0;
    let (mut norm, mut bloch) = (0.0f64, 0.0f64);
    let mut families: Vec<(DeviceFamily, Vec<f64>)> = Vec::new();
    for id in PresetId::ALL {
        for f in id.families() {
            families.push((f, probe_phases(id)));
        }
    }
    for (family, phases) in &families {
        let gap = family.gap_edge().map_err(e)?;
        for &phi in phases {
            let spec = family.build(SweptPhase::Phi, phi).map_err(e)?;
            let snap = in_gap_states(&spec, gap).map_err(e)?;
            for v in &snap.states {
                let f = local_densities(v, &spec).map_err(e)?;
                norm = norm.max((f.total_rho() - 1.0).abs());
                bloch = bloch.max(f.max_bloch_defect());
                states += 1;
            }
        }
    }
    ensure(
        norm <= 1e-10 && bloch <= 1e-10,
        format!("norm defect {norm:e}, Bloch defect {bloch:e}"),
    )?;
    let mut charge = 0.0f64;
    let mut zero_mu_states = 0;
    let zero_mu = [
        DeviceFamily::ScSc {
            n: 30,
            mu: 0.0,
            t: 1.0,
            delta0: 1.0,
            v_junction: 1.0,
        },
        DeviceFamily::ScTsc {
            n: 30,
            mu: 0.0,
            t: 1.0,
            delta0: 1.0,
            v_c: 1.0,
        },
        DeviceFamily::TscTsc {
            n: 60,
            mu_left: 0.0,
            mu_right: 0.0,
            t: 1.0,
            delta0: 1.0,
            v_junction: 1.0,
        },
    ];
    for family in &zero_mu {
        let gap = family.gap_edge().map_err(e)?;
        for phi in [0.3, FRAC_PI_2, 2.0, 4.4] {
            let spec = family.build(SweptPhase::Phi, phi).map_err(e)?;
            for v in &in_gap_states(&spec, gap).map_err(e)?.states {
                charge = charge.max(total_charge(&local_densities(v, &spec).map_err(e)?).abs());
                zero_mu_states += 1;
            }
        }
    }
    ensure(zero_mu_states > 0, "no in-gap states in the mu = 0 devices")?;
    ensure(charge <= 1e-10, format!("mu = 0 total charge {charge:e}"))?;
    Ok(format!(
        "{states} preset states: norm {norm:.1e}, Bloch {bloch:.1e}; {zero_mu_states} mu=0 states: |charge| <= {charge:.1e}"
    ))
}

fn a10() -> Check {
    let params = ContinuumParams::default();
    let (mut unit, mut route) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let k = 0.05 + 4.0 * i as f64 / 99.0;
        for v_c in [0.0, 0.2, 1.0, 3.0] {
            let s = delta_scattering(k, v_c, &params);
            unit = unit.max((s.b_over_a.norm_sqr() + s.c_over_a.norm_sqr() - 1.0).abs());
            let jump = delta_jump_c(k, v_c, &params);
            let scattering = free_amplitude(k, params.m, params.hbar) * s.c_over_a;
            route = route.max((jump - scattering).norm()).max((jump - s.c).norm());
        }
    }
    ensure(unit <= 1e-12, format!("unitarity defect {unit:e}"))?;
    ensure(route <= 1e-12, format!("jump vs scattering C {route:e}"))?;
    Ok(format!("unitarity {unit:.1e}; C routes agree to {route:.1e}"))
}

fn a11() -> Check {
    let g = MsqGeometry::canonical();
    let r = msq_sweep(0.0, 0.0, MSQ_GATES, &g, 32).map_err(e)?;
    ensure(
        r.curves.len() == 8 && r.curves.iter().all(|c| c.points.len() == 32),
        format!("{} branches", r.curves.len()),
    )?;
    let pattern = MsqPattern::classify(&r.curves);
    ensure(pattern.is_reference(), format!("pattern {pattern:?}"))?;
    let (lo, hi) = pattern
        .near_zero
        .iter()
        .flat_map(|&b| r.curves[b].points.iter().map(|p| p.energy.abs()))
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), x| (lo.min(x), hi.max(x)));
    ensure(
        lo >= NEAR_ZERO_BAND.0 && hi <= NEAR_ZERO_BAND.1,
        format!("near-zero |E| in [{lo:e}, {hi:e}]"),
    )?;
    let r2 = msq_sweep(FRAC_PI_2, 0.0, MSQ_GATES, &g, 32).map_err(e)?;
    let pinned = pinned_branches(&r2.curves, 1e-3);
    ensure(!pinned.is_empty(), "no branch pinned at phi1 = pi/2")?;
    let worst = pinned
        .iter()
        .flat_map(|&b| r2.curves[b].points.iter().map(|p| p.energy.abs()))
        .fold(0.0, f64::max);
    Ok(format!(
        "2+2+2+2 pattern {:?}/{:?}/{:?}/{:?}; near-zero |E| in [{lo:.2e}, {hi:.2e}]; phi1=pi/2 pins branch {pinned:?} (max |E| {worst:.1e})",
        pattern.phase_sensitive, pattern.mirrored_flat, pattern.near_zero, pattern.flat
    ))
}

fn a12() -> Check {
    let n = 400;
    let mut worst = 0.0f64;
    for region in [
        RegionModel::new("sc", RegionKind::NormalSc, 0.5, 1.0, 1.0, 0.9),
        RegionModel::new("k", RegionKind::KitaevTsc, 1.0, 1.0, 1.0, 0.0),
        RegionModel::new("p", RegionKind::TscPhaseHopping, 0.25, 0.5, 1.0, 2.2),
    ] {
        let ring = eigvalsh(&assemble(&periodic_ring(&region, n)).map_err(e)?).map_err(e)?;
        let mut bands = Vec::with_capacity(2 * n);
        for j in 0..n {
            let (lo, hi) = block_eigenvalues(&bloch_block(&region, TAU * j as f64 / n as f64).map_err(e)?);
            bands.extend([lo, hi]);
        }
        bands.sort_by(f64::total_cmp);
        worst = ring
            .iter()
            .zip(&bands)
            .map(|(a, b)| (a - b).abs())
            .fold(worst, f64::max);
    }
    ensure(worst <= 1e-6, format!("max deviation {worst:e}"))?;
    Ok(format!("3 region kinds, 400-site rings, max deviation {worst:.1e}"))
}

type Criterion = (&'static str, fn() -> Check, Duration);

fn main() {
    let criteria: [Criterion; 12] = [
        ("A1 analytic dispersion", a1, Duration::from_millis(1)),
        ("A2 pole/closed-form equivalence", a2, Duration::from_secs(1)),
        ("A3 SC-SC in-gap pair", a3, Duration::from_secs(1)),
        ("A4 SC-SC coupling monotonicity", a4, Duration::from_secs(10)),
        ("A5 SC-TSC pinned edge mode and ABS", a5, Duration::from_secs(30)),
        ("A6 SC-TSC decoupled", a6, Duration::from_secs(10)),
        ("A7 TSC-TSC four branches and exchange", a7, Duration::from_secs(30)),
        ("A8 particle-hole structure", a8, Duration::from_secs(5)),
        ("A9 density invariants", a9, Duration::from_secs(60)),
        ("A10 delta barrier", a10, Duration::from_secs(1)),
        ("A11 MSQ pattern", a11, Duration::from_secs(600)),
        ("A12 bulk/ring consistency", a12, Duration::from_secs(10)),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f, budget) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.starts_with(o.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > budget => Err(format!("{msg}; took {took:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS {name} ({took:.2?}): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name} ({took:.2?}): {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
