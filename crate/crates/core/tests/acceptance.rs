//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line; the
//! process exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use num_rational::Ratio;
use rand::Rng;
use uniform_channel::cayley::{
    build_cayley, laplacian_spectrum, walk_apply, walk_matrix_eigenvalues, GroupDistribution,
};
use uniform_channel::channel::{
    approx_errors, build_dilation, compose, max_abs, qn_channel, seeded_rng, share,
    swap_test_simulate, trace_product, uniform_channel, DensityMatrix, DilationRegime,
    QuantumChannel,
};
use uniform_channel::gip::{
    bernoulli_empirical, bernoulli_separation, decode_graph, efficiency_report, walk_entry_bound,
    GraphCode, SymmetricAction, Verdict,
};
use uniform_channel::group_rep::{
    edge_count, enumerate_from_generators, klein_four_generators, neighbor_swap_decomposition,
    star_generators, symmetric_group, GeneratorSet,
};

fn verdict(id: u32, title: &str, pass: bool, detail: &str, started: Instant) {
    println!(
        "criterion {id:02} {} {title}: {detail} ({:.2?})",
        if pass { "PASS" } else { "FAIL" },
        started.elapsed()
    );
    assert!(pass, "criterion {id} failed: {detail}");
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}

/// Edge set of `code` relabelled by the vertex map `sigma` (0-based).
fn relabel(code: GraphCode, sigma: &[usize]) -> BTreeSet<(usize, usize)> {
    decode_graph(code)
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = (sigma[a - 1], sigma[b - 1]);
            (a.min(b), a.max(b))
        })
        .collect()
}

fn edge_set(code: GraphCode) -> BTreeSet<(usize, usize)> {
    decode_graph(code)
        .into_iter()
        .map(|(a, b)| (a - 1, b - 1))
        .collect()
}

fn brute_isomorphic(x: GraphCode, y: GraphCode, perms: &[Vec<usize>]) -> bool {
    let target = edge_set(y);
    perms.iter().any(|s| relabel(x, s) == target)
}

fn brute_automorphisms(x: GraphCode, perms: &[Vec<usize>]) -> u64 {
    let own = edge_set(x);
    perms.iter().filter(|s| relabel(x, s) == own).count() as u64
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn criterion_01_intertwining() {
    let t = Instant::now();
    let mut rng = seeded_rng(101);
    let mut worst: f64 = 0.0;
    for n in [3, 4] {
        let group = share(symmetric_group(n).unwrap());
        let gens = star_generators(n).unwrap();
        let graph = build_cayley(&group, &gens).unwrap();
        let qn = qn_channel(group.clone(), &gens).unwrap();
        for _ in 0..10 {
            let u = GroupDistribution::random(group.len(), &mut rng);
            let qu = QuantumChannel::new(group.clone(), u.clone()).unwrap();
            let qmu = QuantumChannel::new(group.clone(), walk_apply(&graph, &u).unwrap()).unwrap();
            let composed = compose(&qn, &qu).unwrap();
            for _ in 0..5 {
                let rho = DensityMatrix::random_mixed(group.dim(), &mut rng).unwrap();
                let rhs = qmu.apply(&rho).unwrap();
                let sequential = qn.apply(&qu.apply(&rho).unwrap()).unwrap();
                let merged = composed.apply(&rho).unwrap();
                worst = worst
                    .max(max_abs(&(sequential.matrix() - rhs.matrix())))
                    .max(max_abs(&(merged.matrix() - rhs.matrix())));
            }
        }
    }
    verdict(
        1,
        "Q_N∘Q(u) = Q(Mu) on S3, S4",
        worst <= 1e-12,
        &format!("max deviation {worst:e} (tol 1e-12)"),
        t,
    );
}

fn criterion_02_dilation() {
    let t = Instant::now();
    let cases = [
        ("S3/star", share(symmetric_group(3).unwrap()), star_generators(3).unwrap(), DilationRegime::Padded),
        ("S4/star", share(symmetric_group(4).unwrap()), star_generators(4).unwrap(), DilationRegime::PowerOfTwo),
        (
            "Klein four",
            share(enumerate_from_generators(&klein_four_generators(), 16).unwrap()),
            GeneratorSet::new(klein_four_generators()),
            DilationRegime::PowerOfTwo,
        ),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for (name, group, gens, regime) in cases {
        let dilation = build_dilation(&group, &gens).unwrap();
        let qn = qn_channel(group.clone(), &gens).unwrap();
        let mut rng = seeded_rng(202);
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let rho = DensityMatrix::random_mixed(group.dim(), &mut rng).unwrap();
            let a = dilation.apply(&rho).unwrap();
            let b = qn.apply_kraus(&rho).unwrap();
            worst = worst.max(max_abs(&(a.matrix() - b.matrix())));
        }
        pass &= worst <= 1e-10 && dilation.regime == regime;
        details.push(format!("{name} {:?} {worst:.1e}", dilation.regime));
    }
    verdict(2, "dilation matches Kraus form", pass, &details.join(", "), t);
}

fn criterion_03_convergence() {
    let t = Instant::now();
    let group = share(symmetric_group(3).unwrap());
    let gens = star_generators(3).unwrap();
    let rho = DensityMatrix::random_pure(8, &mut seeded_rng(303)).unwrap();
    let constants = efficiency_report(3, None, false).unwrap().constants();
    let rows = approx_errors(group, &gens, &rho, 60, Some(constants)).unwrap();

    let spectral = rows
        .iter()
        .all(|r| r.error <= 6f64.sqrt() * (2.0f64 / 3.0).powi(r.l as i32) + 1e-12);
    let monotone = rows.windows(2).all(|w| w[1].error <= w[0].error + 1e-12);
    let chain = rows
        .iter()
        .all(|r| r.error <= r.deviation_l1 + 1e-12 && r.deviation_l1 <= r.deviation_l2_scaled + 1e-12);
    let active: Vec<_> = rows
        .iter()
        .filter_map(|r| r.paper_bound.filter(|&p| p < 2.0).map(|p| (r.error, p)))
        .collect();
    let paper = !active.is_empty() && active.iter().all(|&(e, p)| e <= p);
    verdict(
        3,
        "S3 trace-norm convergence",
        spectral && monotone && chain && paper,
        &format!(
            "√6(2/3)^l {spectral}, non-increasing {monotone}, l1/l2 chain {chain}, \
             exp bound over {} steps {paper}, final error {:.2e}",
            active.len(),
            rows.last().unwrap().error
        ),
        t,
    );
}

fn criterion_04_spectra() {
    let t = Instant::now();
    let mut pass = true;
    let mut details = Vec::new();
    for n in 3..=6 {
        let group = symmetric_group(n).unwrap();
        let graph = build_cayley(&group, &star_generators(n).unwrap()).unwrap();
        let spectrum = laplacian_spectrum(&graph).unwrap();
        let lambdas = spectrum.laplacian_eigenvalues.clone().unwrap();
        let gap_ok = (spectrum.spectral_gap - 1.0).abs() <= 1e-8;
        let s = graph.degree() as f64;
        let direct = walk_matrix_eigenvalues(&graph);
        let mut mapped: Vec<f64> = lambdas.iter().map(|l| (s + 1.0 - l) / (s + 1.0)).collect();
        mapped.sort_by(|a, b| b.total_cmp(a));
        let map_err = direct
            .iter()
            .zip(&mapped)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        pass &= gap_ok && map_err <= 1e-8;
        details.push(format!("n={n} λ₂={:.10} μ err {map_err:.1e}", spectrum.spectral_gap));
        if n == 3 {
            let expected = [0.0, 1.0, 1.0, 3.0, 3.0, 4.0];
            let ok = lambdas.iter().zip(expected).all(|(a, b)| (a - b).abs() <= 1e-8);
            pass &= ok;
            details.push(format!("S3 spectrum {{0,1,1,3,3,4}} {ok}"));
        }
    }
    verdict(4, "Laplacian and walk spectra", pass, &details.join("; "), t);
}

fn criterion_05_exact_lambda() {
    let t = Instant::now();
    let n = 4;
    let action = SymmetricAction::new(n).unwrap();
    let perms = permutations(n);
    let mut pass = true;
    for x in 0..(1u64 << edge_count(n)) {
        let code = GraphCode::new(n, x).unwrap();
        let h = brute_automorphisms(code, &perms);
        let exact = action.rho_x_exact(code).unwrap();
        let expected = Ratio::new(h, 24);
        let orbit_codes: BTreeSet<usize> = perms
            .iter()
            .map(|s| {
                let e: Vec<(usize, usize)> = relabel(code, s).into_iter().map(|(a, b)| (a + 1, b + 1)).collect();
                uniform_channel::gip::encode_graph(n, &e).unwrap().index()
            })
            .collect();
        let keys: BTreeSet<usize> = exact.keys().copied().collect();
        let total: Ratio<u64> = exact.values().copied().sum();
        pass &= keys == orbit_codes
            && exact.values().all(|&v| v == expected)
            && total == Ratio::from_integer(1);
        for &y in &orbit_codes {
            let lam = action.lambda_y(code, GraphCode::new(n, y as u64).unwrap()).unwrap();
            pass &= lam.as_ratio() == expected;
        }
    }
    verdict(5, "exact λ_x = |H(x)|/24 at n=4", pass, "64 basis states, rational arithmetic", t);
}

fn criterion_06_walk_bound() {
    let t = Instant::now();
    let mut pass = true;
    let mut worst = [0.0f64; 2];
    let mut rng = seeded_rng(606);
    for (slot, n, l) in [(0usize, 4usize, 64u64), (1, 5, 125)] {
        let action = SymmetricAction::new(n).unwrap();
        let bound = walk_entry_bound(n, l);
        let xs: Vec<u64> = if n == 4 {
            (0..64).collect()
        } else {
            (0..20).map(|_| rng.gen_range(0..1u64 << edge_count(n))).collect()
        };
        for x in xs {
            let code = GraphCode::new(n, x).unwrap();
            let walk = action.walk_distribution(code, l).unwrap();
            let exact = action.rho_x_exact(code).unwrap();
            for (&y, lam) in &exact {
                let lam = *lam.numer() as f64 / *lam.denom() as f64;
                let dev = (lam - walk.entry(y)).abs();
                worst[slot] = worst[slot].max(dev);
                pass &= dev <= bound;
            }
        }
    }
    verdict(
        6,
        "walk entries within √(n!)e^(-l/n)",
        pass,
        &format!(
            "n=4 max {:.2e} (bound {:.2e}), n=5 max {:.2e} (bound {:.2e})",
            worst[0],
            walk_entry_bound(4, 64),
            worst[1],
            walk_entry_bound(5, 125)
        ),
        t,
    );
}

fn criterion_07_gip_oracle() {
    let t = Instant::now();
    let mut pass = true;
    let mut checked = 0;
    let perms4 = permutations(4);
    let action4 = SymmetricAction::new(4).unwrap();
    for x1 in 0..64 {
        let c1 = GraphCode::new(4, x1).unwrap();
        let h = brute_automorphisms(c1, &perms4);
        for x2 in 0..64 {
            let c2 = GraphCode::new(4, x2).unwrap();
            let d = action4.decide_isomorphic(c1, c2, None).unwrap();
            let iso = brute_isomorphic(c1, c2, &perms4);
            pass &= (d.verdict == Verdict::Isomorphic) == iso;
            if iso {
                pass &= d.automorphism_count == Some(h);
            }
            checked += 1;
        }
    }
    let perms5 = permutations(5);
    let action5 = SymmetricAction::new(5).unwrap();
    let mut rng = seeded_rng(707);
    let mut iso_pairs = 0;
    for k in 0..500 {
        let x1 = rng.gen_range(0..1u64 << 10);
        // every other pair is a relabelled copy so both verdicts occur
        let c1 = GraphCode::new(5, x1).unwrap();
        let c2 = if k % 2 == 0 {
            let s = &perms5[rng.gen_range(0..120)];
            let e: Vec<(usize, usize)> = relabel(c1, s).into_iter().map(|(a, b)| (a + 1, b + 1)).collect();
            uniform_channel::gip::encode_graph(5, &e).unwrap()
        } else {
            GraphCode::new(5, rng.gen_range(0..1u64 << 10)).unwrap()
        };
        let d = action5.decide_isomorphic(c1, c2, None).unwrap();
        let iso = brute_isomorphic(c1, c2, &perms5);
        iso_pairs += iso as usize;
        pass &= (d.verdict == Verdict::Isomorphic) == iso;
        checked += 1;
    }
    verdict(
        7,
        "isomorphism decisions match brute force",
        pass,
        &format!("{checked} pairs, {iso_pairs} of 500 isomorphic at n=5"),
        t,
    );
}

fn criterion_08_swap_test() {
    let t = Instant::now();
    let mut rng = seeded_rng(808);
    let samples = 100_000;
    let psi = DensityMatrix::random_pure(4, &mut rng).unwrap();
    let pairs = vec![
        ("identical pure", psi.clone(), psi),
        ("orthogonal pure", DensityMatrix::basis(4, 0).unwrap(), DensityMatrix::basis(4, 3).unwrap()),
        (
            "random mixed",
            DensityMatrix::random_mixed(4, &mut rng).unwrap(),
            DensityMatrix::random_mixed(4, &mut rng).unwrap(),
        ),
        (
            "pure vs mixed",
            DensityMatrix::random_pure(4, &mut rng).unwrap(),
            DensityMatrix::random_mixed(4, &mut rng).unwrap(),
        ),
        ("maximally mixed", DensityMatrix::maximally_mixed(4).unwrap(), DensityMatrix::random_pure(4, &mut rng).unwrap()),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for (seed, (name, rho, eta)) in pairs.into_iter().enumerate() {
        let p = (1.0 + trace_product(&rho, &eta).unwrap()) / 2.0;
        let outcome = swap_test_simulate(&rho, &eta, samples, seed as u64).unwrap();
        let se = (p * (1.0 - p) / samples as f64).sqrt();
        let freq = outcome.frequency();
        let ok = if name == "identical pure" {
            outcome.zero_count == samples
        } else {
            (freq - p).abs() <= 4.0 * se
        };
        pass &= ok;
        details.push(format!("{name} {freq:.4} vs {p:.4}"));
    }
    verdict(8, "SWAP-test frequencies within 4 SE", pass, &details.join(", "), t);
}

fn criterion_09_sample_complexity() {
    let t = Instant::now();
    let mut pass = true;
    let mut ratios = Vec::new();
    for n in 3..=7 {
        let a = bernoulli_separation(n, 0.05).unwrap().samples;
        let b = bernoulli_separation(n + 1, 0.05).unwrap().samples;
        let expected = (factorial(n + 1) / factorial(n)).powi(2);
        let r = b / a;
        pass &= (r / expected - 1.0).abs() <= 0.10;
        ratios.push(format!("{r:.2}/{expected}"));
    }
    let at8 = bernoulli_separation(8, 0.05).unwrap().samples;
    pass &= at8 > 1e6;
    let empirical = bernoulli_empirical(4, 100_000, 909).unwrap();
    pass &= empirical.z_score > 3.0;
    verdict(
        9,
        "SWAP-test sample count grows as (n!)²",
        pass,
        &format!(
            "ratios {}, n=8 needs {at8:.3e}, n=4 empirical z = {:.2}",
            ratios.join(" "),
            empirical.z_score
        ),
        t,
    );
}

fn criterion_10_channel_axioms() {
    let t = Instant::now();
    let mut rng = seeded_rng(1010);
    let groups = [share(symmetric_group(3).unwrap()), share(symmetric_group(4).unwrap())];
    let mut pass = true;
    let mut worst = [0.0f64; 4];
    for k in 0..100 {
        let group = &groups[k % 2];
        let u = GroupDistribution::random(group.len(), &mut rng);
        let channel = QuantumChannel::new(group.clone(), u).unwrap();
        let rho = if k % 3 == 0 {
            DensityMatrix::random_pure(group.dim(), &mut rng).unwrap()
        } else {
            DensityMatrix::random_mixed(group.dim(), &mut rng).unwrap()
        };
        let out = channel.apply(&rho).unwrap();
        let kraus = channel.apply_kraus(&rho).unwrap();
        worst[0] = worst[0].max((out.trace().re - 1.0).abs().max(out.trace().im.abs()));
        worst[1] = worst[1].max(out.hermitian_defect());
        worst[2] = worst[2].max(-out.min_eigenvalue());
        worst[3] = worst[3]
            .max(channel.kraus_completeness_defect().unwrap())
            .max(max_abs(&(out.matrix() - kraus.matrix())));
    }
    pass &= worst[0] <= 1e-10 && worst[1] <= 1e-10 && worst[2] <= 1e-9 && worst[3] <= 1e-10;

    let mut invariance: f64 = 0.0;
    let klein = share(enumerate_from_generators(&klein_four_generators(), 16).unwrap());
    let all = [
        klein,
        groups[0].clone(),
        groups[1].clone(),
        share(symmetric_group(5).unwrap()),
    ];
    for group in all {
        let qu = uniform_channel(group.clone());
        let rho = DensityMatrix::random_mixed(group.dim(), &mut rng).unwrap();
        let once = qu.apply(&rho).unwrap();
        let twice = qu.apply(&once).unwrap();
        invariance = invariance.max(max_abs(&(twice.matrix() - once.matrix())));
        let g = rng.gen_range(0..group.len());
        let conj = QuantumChannel::new(group.clone(), GroupDistribution::delta(group.len(), g))
            .unwrap()
            .apply(&rho)
            .unwrap();
        let moved = qu.apply(&conj).unwrap();
        invariance = invariance.max(max_abs(&(moved.matrix() - once.matrix())));
        let before = qu.apply(&rho).unwrap();
        let after = QuantumChannel::new(group.clone(), GroupDistribution::delta(group.len(), g))
            .unwrap()
            .apply(&before)
            .unwrap();
        invariance = invariance.max(max_abs(&(after.matrix() - before.matrix())));
    }
    pass &= invariance <= 1e-12;
    verdict(
        10,
        "channel axioms, QU idempotent and invariant",
        pass,
        &format!(
            "trace {:.1e}, hermitian {:.1e}, negativity {:.1e}, kraus {:.1e}, QU {:.1e}",
            worst[0], worst[1], worst[2], worst[3], invariance
        ),
        t,
    );
}

fn criterion_11_efficiency() {
    let t = Instant::now();
    let mut pass = true;
    let mut details = Vec::new();
    for n in 3..=6 {
        let report = efficiency_report(n, None, false).unwrap();
        pass &= report.all_pass();
        let limit = 6 * (n * (n - 1) * (n - 2) / 6);
        let mut max_swaps = 0;
        for p in 1..=n {
            for q in p + 1..=n {
                let d = neighbor_swap_decomposition(p, q, n).unwrap();
                max_swaps = max_swaps.max(d.total_count);
                pass &= d.total_count < limit && d.swaps.len() == d.total_count;
            }
        }
        details.push(format!("n={n} b={} swaps {max_swaps}<{limit}", report.b));
    }
    verdict(11, "efficiency certificate", pass, &details.join(", "), t);
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_unichan"))
        .args(args)
        .arg("--no-timestamp")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_12_cli_determinism() {
    let t = Instant::now();
    let runs: [&[&str]; 8] = [
        &["spectrum", "--sym", "4"],
        &["approx", "--sym", "3", "--l", "20", "--epsilon", "0.01", "--seed", "5"],
        &["gip", "--graph", "4:41", "--graph", "4:26"],
        &["gip", "--graph", "4:7", "--graph", "4:56", "--mode", "swap-test", "--seed", "9"],
        &["dilation-check", "--sym", "3", "--seed", "2"],
        &["efficiency", "--sym", "5"],
        &["swap-test", "--graph", "4:41", "--graph", "4:26", "--samples", "50000", "--seed", "3"],
        &["spectrum", "--sym", "3", "--format", "csv"],
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for args in runs {
        let (c1, o1) = run_cli(args);
        let (c2, o2) = run_cli(args);
        let same = c1 == c2 && o1 == o2 && !o1.is_empty();
        pass &= same && c1 == 0;
        details.push(format!("{} {}", args[0], if same { "identical" } else { "differs" }));
    }
    let dir = std::env::temp_dir().join(format!("unichan-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let p = path.to_str().unwrap();
    let (c1, _) = run_cli(&["efficiency", "--sym", "4", "--out", p]);
    let first = std::fs::read(&path).unwrap();
    let (c2, _) = run_cli(&["efficiency", "--sym", "4", "--out", p]);
    let second = std::fs::read(&path).unwrap();
    pass &= c1 == 0 && c2 == 0 && first == second;
    let leftovers = std::fs::read_dir(&dir).unwrap().count();
    pass &= leftovers == 1;
    std::fs::remove_dir_all(&dir).unwrap();
    details.push(format!("--out identical {}", first == second));
    verdict(12, "CLI output is deterministic", pass, &details.join(", "), t);
}

fn main() {
    let criteria: [(&str, fn()); 12] = [
        ("criterion_01_intertwining", criterion_01_intertwining),
        ("criterion_02_dilation", criterion_02_dilation),
        ("criterion_03_convergence", criterion_03_convergence),
        ("criterion_04_spectra", criterion_04_spectra),
        ("criterion_05_exact_lambda", criterion_05_exact_lambda),
        ("criterion_06_walk_bound", criterion_06_walk_bound),
        ("criterion_07_gip_oracle", criterion_07_gip_oracle),
        ("criterion_08_swap_test", criterion_08_swap_test),
        ("criterion_09_sample_complexity", criterion_09_sample_complexity),
        ("criterion_10_channel_axioms", criterion_10_channel_axioms),
        ("criterion_11_efficiency", criterion_11_efficiency),
        ("criterion_12_cli_determinism", criterion_12_cli_determinism),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        if std::panic::catch_unwind(run).is_err() {
            failed.push(name);
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed.len(),
        criteria.len()
    );
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
