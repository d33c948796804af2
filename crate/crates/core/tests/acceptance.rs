//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use pslab::equations::{
    admissible_exponents, density_weight_check, nontrivial_count, oracle, solution_count, thresholds, LinearForm,
};
use pslab::experiments::{colour_scan, greedy_3ap_free, make_colouring, ColouringScheme};
use pslab::expsums::{audit_bounds, reconstruct_difference, AuditFamily};
use pslab::ps_core::{is_member, members, nu_vector, ps_indicator};
use pslab::spectral::{additive_energy, decay_exponent_fit, energy_exponent_fit, moment_mean};
use pslab::{Error, FrequencyGrid, PSParams, Rational};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn params(c: f64, n: u64) -> PSParams {
    PSParams::new(c, n).expect("valid parameters")
}

fn fail(e: Error) -> String {
    e.to_string()
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    if t > limit {
        Err(format!("took {t:.1?}, limit {limit:?}"))
    } else {
        Ok(t)
    }
}

fn membership_agreement() -> Outcome {
    let start = Instant::now();
    let n = 1_000_000u64;
    let mut total = 0usize;
    for c in [1.05, 1.2, 1.5, 1.9, 2.0] {
        let q = params(c, n);
        let ms = members(&q).map_err(fail)?;
        let mut flags = vec![false; n as usize + 1];
        for &m in &ms {
            flags[m as usize] = true;
        }
        let bad = (1..=n).filter(|&k| is_member(k, &q) != flags[k as usize]).count();
        if bad != 0 {
            return Err(format!("c = {c}: {bad} discrepancies"));
        }
        total += ms.len();
    }
    let t = within(Duration::from_secs(30), start)?;
    Ok(format!("{total} members over 5 exponents, 0 discrepancies, {t:.1?}"))
}

fn parseval() -> Outcome {
    let q = params(1.5, 10_000);
    let nu = nu_vector::<f64>(&q).map_err(fail)?;
    let grid = FrequencyGrid::new(2 * q.n() + 2, q.n()).map_err(fail)?;
    let mean = moment_mean(&nu, 2.0, &grid).map_err(fail)?;
    let direct = nu.sum_of_squares();
    let rel = (mean - direct).abs() / direct;
    if rel > 1e-9 {
        return Err(format!("grid mean {mean} vs Σν² {direct}, relative error {rel:e}"));
    }
    Ok(format!("Σν² = {direct:.6}, relative error {rel:.2e}"))
}

fn energy_identity() -> Outcome {
    let mut notes = Vec::new();
    for c in [1.2, 1.5] {
        let q = params(c, 1000);
        let ind = ps_indicator::<f64>(&q).map_err(fail)?;
        let m = 4 * q.n() + 4;
        let grid = FrequencyGrid::new(m, q.n()).map_err(fail)?;
        let mean = moment_mean(&ind, 4.0, &grid).map_err(fail)?;
        let scaled = mean * m as f64;
        let energy = additive_energy(&q).map_err(fail)?;
        let err = (mean - energy as f64).abs();
        // Σ_j |f̂|⁴ = M·E is an integer and the grid mean is E itself
        let integral = scaled.round() as u128 == m as u128 * energy as u128;
        if !integral || mean.round() as u64 != energy || err > 1e-6 {
            return Err(format!("c = {c}: moment = {mean}, M·moment = {scaled}, energy = {energy}"));
        }
        notes.push(format!("E_{c} = {energy}, M·moment = M·E, |moment - E| = {err:.1e}"));
    }
    let q = params(1.5, 11);
    let small = additive_energy(&q).map_err(fail)?;
    let brute = oracle::count_solutions(&[1, 1, -1, -1], &members(&q).map_err(fail)?, false);
    if small != 61 || brute != 61 {
        return Err(format!("E(PS_1.5(11)) = {small}, brute force {brute}, expected 61"));
    }
    notes.push("E(PS_1.5(11)) = 61 = brute force".into());
    Ok(notes.join("; "))
}

fn energy_scaling() -> Outcome {
    let start = Instant::now();
    let ns: Vec<u64> = (12..=18).map(|k| 1u64 << k).collect();
    let scan = energy_exponent_fit(1.5, &ns).map_err(fail)?;
    let limit = 4.0 / 1.5 - 1.0 + 0.1;
    let t = within(Duration::from_secs(120), start)?;
    if scan.fit.slope > limit {
        return Err(format!("slope {:.4} exceeds {limit:.4}", scan.fit.slope));
    }
    Ok(format!("slope {:.4} ≤ {limit:.4} (target {:.4}), {t:.1?}", scan.fit.slope, scan.target_slope))
}

fn fourier_decay() -> Outcome {
    let start = Instant::now();
    let ns: Vec<u64> = (10..=17).map(|k| 1u64 << k).collect();
    let scan = decay_exponent_fit(1.5, &ns, 4).map_err(fail)?;
    let limit = 0.9333 + 0.05;
    let t = within(Duration::from_secs(600), start)?;
    if scan.fit.slope > limit {
        return Err(format!("slope {:.4} exceeds {limit:.4}", scan.fit.slope));
    }
    Ok(format!("slope {:.4} ≤ {limit:.4} (target {:.4}), {t:.1?}", scan.fit.slope, scan.target_slope))
}

fn dyadic_reconstruction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut worst = 0.0f64;
    for c in [1.2, 1.5] {
        let q = params(c, 100_000);
        for _ in 0..100 {
            let alpha: f64 = rng.random();
            let d = reconstruct_difference(alpha, &q).map_err(fail)?;
            worst = worst.max(d.residual / d.residual_bound);
        }
    }
    Ok(format!("200 samples, 0 violations, largest residual/bound {worst:.3}"))
}

fn counting_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..200 {
        let s = rng.random_range(2..=4usize);
        let coeffs: Vec<i64> = (0..s)
            .map(|_| loop {
                let c = rng.random_range(-5..=5i64);
                if c != 0 {
                    break c;
                }
            })
            .collect();
        let size = rng.random_range(1..=40usize);
        let mut set: Vec<u64> = sample(&mut rng, 100, size).into_iter().map(|v| v as u64 + 1).collect();
        set.sort_unstable();
        let form = LinearForm::new(coeffs.clone()).map_err(fail)?;
        let cap = *set.last().unwrap();
        let ind = pslab::Weights::indicator(&set, cap).map_err(fail)?;
        let all = solution_count(&form, &ind, form.degree_bound(cap).map_err(fail)? + 1).map_err(fail)?;
        let want_all = oracle::count_solutions(&coeffs, &set, false);
        if (all - want_all as f64).abs() > 1e-6 || all.round() as u128 != want_all {
            return Err(format!("instance {i} {coeffs:?}: solution_count {all} vs {want_all}"));
        }
        let distinct = nontrivial_count(&form, &set).map_err(fail)?;
        let want = oracle::count_solutions(&coeffs, &set, true);
        if distinct != want {
            return Err(format!("instance {i} {coeffs:?}: nontrivial_count {distinct} vs {want}"));
        }
    }
    let ps = members(&params(1.5, 11)).map_err(fail)?;
    let schur = LinearForm::new(vec![1, 1, -1]).map_err(fail)?;
    let ap = LinearForm::new(vec![1, 1, -2]).map_err(fail)?;
    let pinned = [
        (nontrivial_count(&schur, &ps).map_err(fail)?, 0),
        (nontrivial_count(&ap, &ps).map_err(fail)?, 4),
        (nontrivial_count(&schur, &[1, 4, 9, 16, 25]).map_err(fail)?, 2),
    ];
    if pinned.iter().any(|(got, want)| got != want) {
        return Err(format!("pinned counts {pinned:?}"));
    }
    Ok("200 random instances exact; pinned 0, 4, 2".into())
}

fn exponential_sum_audit() -> Outcome {
    let mut notes = Vec::new();
    for c in [1.2, 1.5] {
        let q = params(c, 200_001);
        let table = audit_bounds(&q, &[1e3, 1e4, 1e5], 1000, &[0.0]).map_err(fail)?;
        if !table.all_finite() {
            return Err(format!("c = {c}: non-finite rows"));
        }
        let lemma = table.c_fit(AuditFamily::Lemma);
        let second = table.c_fit(AuditFamily::SecondDerivative);
        if lemma > 10.0 || second > 10.0 {
            return Err(format!("c = {c}: C_fit lemma {lemma:.3}, second derivative {second:.3}"));
        }
        notes.push(format!("c = {c}: C_fit {lemma:.3} / {second:.3}"));
    }
    Ok(notes.join("; "))
}

fn threshold_consistency() -> Outcome {
    for s in 3..=8u32 {
        let cd = thresholds(s).map_err(fail)?.c_dagger;
        let cdf = *cd.numer() as f64 / *cd.denom() as f64;
        if admissible_exponents(s, cdf - 0.01).is_none() || admissible_exponents(s, cdf + 0.01).is_some() {
            return Err(format!("s = {s}: existence does not switch at c† = {cd}"));
        }
    }
    let t3 = thresholds(3).map_err(fail)?;
    let t4 = thresholds(4).map_err(fail)?;
    if t3.c_dagger != Rational::new(12, 11) || t4.c_dagger != Rational::new(7, 6) {
        return Err(format!("c†(3) = {}, c†(4) = {}", t3.c_dagger, t4.c_dagger));
    }
    Ok("switch at c† ± 0.01 for s = 3..8; c†(3) = 12/11, c†(4) = 7/6".into())
}

fn ramsey_experiment() -> Outcome {
    let start = Instant::now();
    let q = params(1.05, 1_000_000);
    let form = LinearForm::new(vec![1, 1, -1]).map_err(fail)?;
    let mut rows = colour_scan(&form, &q, &[ColouringScheme::Random], &[2], 20, 1).map_err(fail)?;
    rows.extend(
        colour_scan(&form, &q, &[ColouringScheme::Residue, ColouringScheme::DyadicBand], &[2, 3], 1, 0).map_err(fail)?,
    );
    for row in &rows {
        let w = row.witness.as_ref().ok_or_else(|| format!("{} r={} trial {}: no witness", row.scheme, row.r, row.trial))?;
        let colouring = make_colouring(&q, row.scheme, row.r, row.seed.unwrap_or(0)).map_err(fail)?;
        let sum: i128 = w.x[0] as i128 + w.x[1] as i128 - w.x[2] as i128;
        if sum != 0 || !w.verify(&form, &colouring) {
            return Err(format!("{} r={} trial {}: witness {:?} fails recheck", row.scheme, row.r, row.trial, w.x));
        }
    }
    let t = within(Duration::from_secs(300), start)?;
    Ok(format!("{} runs, all with verified witnesses, {t:.1?}", rows.len()))
}

fn density_transfer() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let exps = [1.1, 1.5, 1.9];
    let mut checked = 0;
    for (i, &c) in exps.iter().enumerate() {
        let q = params(c, 100_000);
        let ms = members(&q).map_err(fail)?;
        let runs = 10_000 / exps.len() + usize::from(i < 10_000 % exps.len());
        for _ in 0..runs {
            let k = rng.random_range(0..=ms.len());
            let a: Vec<u64> = sample(&mut rng, ms.len(), k).into_iter().map(|j| ms[j]).collect();
            let check = density_weight_check(&a, &q).map_err(fail)?;
            if !check.ok {
                return Err(format!("c = {c}, |A| = {k}: {} < {}", check.weighted_sum, check.lower_bound));
            }
            checked += 1;
        }
    }
    let g = greedy_3ap_free(&params(1.5, 11)).map_err(fail)?;
    if g.set != [1, 2, 5, 11] || g.certified_count != 0 {
        return Err(format!("greedy set {:?}, certified count {}", g.set, g.certified_count));
    }
    Ok(format!("{checked} random subsets ok; greedy 3AP-free set {:?}, 0 progressions", g.set))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("membership and generation agree", membership_agreement),
        ("Parseval grid mean is exact", parseval),
        ("quartic moment equals additive energy", energy_identity),
        ("additive energy exponent", energy_scaling),
        ("Fourier decay exponent", fourier_decay),
        ("dyadic reconstruction bound", dyadic_reconstruction),
        ("solution counts match enumeration", counting_oracles),
        ("exponential sum bounds audit", exponential_sum_audit),
        ("threshold consistency", threshold_consistency),
        ("monochromatic witnesses", ramsey_experiment),
        ("density transfer", density_transfer),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail} ({t:.1?})", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL [{:>2}] {name}: {detail} ({t:.1?})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
