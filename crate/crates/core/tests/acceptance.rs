//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p tailbound --test acceptance`.

use std::time::Instant;

use rand::Rng;
use tailbound::digits::agrees_with_printed;
use tailbound::monotonicity::{standard_cases, verify_lhopital_case, Pattern, DEFAULT_GRID_SIZE};
use tailbound::normal::{upper_tail, upper_tail_inverse};
use tailbound::oracle::{
    exact_rademacher_tail_mitm, exact_rademacher_tails, exact_rademacher_tails_mitm,
    mc_martingale_tails, verify_instance, BoundedSource, HilbertSource, MartingaleSource,
    RademacherSource, TailSource, WeightVector,
};
use tailbound::{BoundKind, Bounds, Constants};

mod common;

const MC_SAMPLES: usize = 1_000_000;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn constants() -> Outcome {
    let c = Constants::default();
    let target = 2.0 * 3.0_f64.exp() / 9.0;
    let ulps = (c.exp_lambda - target).abs() / (f64::EPSILON * target);
    let digits = agrees_with_printed(c.lambda, "1.495");
    // mpmath: 3 - ln 4.5
    let reference = (c.lambda - 1.495_922_603_223_725_8).abs() <= 4e-16;
    outcome(
        digits && reference && ulps <= 1.0,
        format!("lambda = {:.16}, e^lambda off 2e^3/9 by {ulps} ulp", c.lambda),
    )
}

fn crossings() -> Outcome {
    let b = Bounds::default();
    let z = b.solve_crossings().unwrap();
    let res = z.residuals(&b);
    let digits = agrees_with_printed(z.z_v, "1.312")
        && agrees_with_printed(z.z_w, "1.365")
        && agrees_with_printed(z.z_wtilde, "1.865");
    // mpmath roots at 30 digits
    let reference = [
        (z.z_v, 1.312_400_205_607_535_055_7),
        (z.z_w, 1.365_088_136_068_977_525_6),
        (z.z_wtilde, 1.865_958_430_633_821_422_2),
    ]
    .iter()
    .all(|(a, b)| (a - b).abs() <= 1e-13);
    let worst = res.iter().cloned().fold(0.0, f64::max);
    outcome(
        digits && reference && worst <= 1e-12,
        format!(
            "z_v = {:.6}, z_w = {:.6}, z_wtilde = {:.6}, max residual {worst:e}",
            z.z_v, z.z_w, z.z_wtilde
        ),
    )
}

fn boundary_values() -> Outcome {
    let b = Bounds::default();
    let z = b.solve_crossings().unwrap();
    let cases = standard_cases(&b, &z);
    let lam = b.lambda();
    let r0 = cases[0].r(0.0);
    let r1 = cases[1].r(1.0);
    let rz = cases[2].r(z.z_v);
    let rs = cases[3].r(lam.sqrt());
    let e_half = b.constants().exp_lambda / 2.0;
    let pass = agrees_with_printed(r1, "1.13")
        && agrees_with_printed(rz, "1.020")
        && ((rs - lam) / lam).abs() <= 1e-12
        && ((r0 - e_half) / e_half).abs() <= 1e-15;
    outcome(
        pass,
        format!("r(1) = {r1:.6}, r(z_V) = {rz:.6}, r(sqrt lambda) = {rs:.15}, r(0) = {r0:.15}"),
    )
}

fn check_source(src: &dyn TailSource, grid: &[f64], worst: &mut f64) -> usize {
    let kinds = if src.two_sided() { &BoundKind::TWO_SIDED[..] } else { &BoundKind::ONE_SIDED[..] };
    let report = verify_instance(src, kinds, grid).unwrap();
    *worst = worst.min(report.min_slack());
    report.violation_count()
}

fn inequality_suite() -> Outcome {
    let mut rng = common::rng(2024);
    let grid = common::open_grid(64, 4.0);
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    let mut instances = 0;
    for n in 1..=20 {
        for _ in 0..100 {
            let weights = common::random_weights(&mut rng, n);
            for two_sided in [false, true] {
                let src = RademacherSource { weights: weights.clone(), two_sided };
                violations += check_source(&src, &grid, &mut worst);
            }
            instances += 1;
        }
    }
    for _ in 0..50 {
        let n = rng.gen_range(1..=8);
        let weights = common::random_weights(&mut rng, n);
        let dists: Vec<_> = (0..n).map(|_| common::random_law(&mut rng)).collect();
        for two_sided in [false, true] {
            let src = BoundedSource { weights: weights.clone(), dists: dists.clone(), two_sided };
            violations += check_source(&src, &grid, &mut worst);
        }
        instances += 1;
    }
    outcome(
        violations == 0,
        format!("{instances} instances x 64 points, {violations} violations, min slack {worst:e}"),
    )
}

fn ordering() -> Outcome {
    let b = Bounds::default();
    let z = b.solve_crossings().unwrap();
    let grid = common::open_grid(10_000, 12.0);
    let lam = b.lambda();
    let e_lam = b.constants().exp_lambda;
    let mut failures = Vec::new();
    if grid.iter().any(|&x| b.v(x) > b.w(x) + 1e-13) {
        failures.push("V <= W");
    }
    let past_z: Vec<f64> = common::linspace(z.z_v, 12.0, 10_000);
    if past_z.iter().any(|&x| e_lam * upper_tail(x).unwrap() > upper_tail(x - lam / x).unwrap() + 1e-15) {
        failures.push("e^lambda Q(x) <= Q(x - lambda/x)");
    }
    if grid.iter().any(|&x| b.w_gaussian_branch(x) > b.edelman(x)) {
        failures.push("W Gaussian branch <= Edelman");
    }
    let piecewise_gap = grid
        .iter()
        .flat_map(|&x| {
            [(BoundKind::V, b.v(x)), (BoundKind::W, b.w(x)), (BoundKind::Wtilde, b.w_tilde(x))]
                .map(|(k, m)| (b.piecewise(k, x, &z).unwrap() - m).abs())
        })
        .fold(0.0, f64::max);
    if piecewise_gap > 1e-12 {
        failures.push("min form = piecewise form");
    }
    let detail = if failures.is_empty() {
        format!("all four orderings hold on 10^4 points, piecewise gap {piecewise_gap:e}")
    } else {
        format!("failed: {}", failures.join(", "))
    };
    outcome(failures.is_empty(), detail)
}

fn asymptotics() -> Outcome {
    let b = Bounds::default();
    let dev: Vec<f64> = [4.0, 6.0, 8.0, 10.0].iter().map(|&x| (b.w(x) / b.v(x) - 1.0).abs()).collect();
    let shrinking = dev.windows(2).all(|p| p[1] < p[0]);
    outcome(
        shrinking && dev[3] <= 0.01,
        format!("|W/V - 1| at 4, 6, 8, 10: {:.5}, {:.5}, {:.5}, {:.7}", dev[0], dev[1], dev[2], dev[3]),
    )
}

fn monotonicity() -> Outcome {
    let b = Bounds::default();
    let z = b.solve_crossings().unwrap();
    let lam = b.lambda();
    let expected_switch = [None, Some(1.011_352_954_504_159_9), Some(lam / (2.0 - lam).sqrt()), None];
    let expected_rho = [Pattern::Decreasing, Pattern::UpDown, Pattern::UpDown, Pattern::UpDown];
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, case) in standard_cases(&b, &z).iter().enumerate() {
        let report = verify_lhopital_case(case, DEFAULT_GRID_SIZE).unwrap();
        let rho_ok = report.rho.pattern == expected_rho[i];
        let switch_ok = match (expected_switch[i], report.rho.switch_point) {
            (Some(e), Some(s)) => (e - s).abs() <= 1e-6,
            (Some(_), None) => false,
            (None, _) => true,
        };
        let r_ok = matches!(report.r.pattern, Pattern::Decreasing | Pattern::UpDown);
        let deriv_ok = report.derivative_max_rel_error <= 1e-6;
        let ok = rho_ok && switch_ok && r_ok && deriv_ok && report.passed();
        pass &= ok;
        parts.push(format!(
            "{} rho {} r {}{}",
            case.name,
            report.rho.pattern.symbol(),
            report.r.pattern.symbol(),
            report.rho.switch_point.map_or(String::new(), |s| format!(" switch {s:.7}")),
        ));
    }
    outcome(pass, parts.join("; "))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = common::rng(77);
    let grid = common::open_grid(32, 4.0);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let n = rng.gen_range(1..=18);
        let w = common::random_weights(&mut rng, n);
        let two_sided = i % 2 == 0;
        let direct = exact_rademacher_tails(&w, &grid, two_sided).unwrap();
        let mitm = exact_rademacher_tails_mitm(&w, &grid, two_sided).unwrap();
        for (a, b) in direct.iter().zip(&mitm) {
            worst = worst.max((a - b).abs());
        }
    }
    let central = 155_117_520.0_f64; // C(30, 15)
    let expected = (1.0 + central / 2f64.powi(30)) / 2.0;
    let got = exact_rademacher_tail_mitm(&WeightVector::uniform(30).unwrap(), 0.0, false).unwrap();
    let gap = (got - expected).abs();
    outcome(
        worst <= 1e-12 && gap <= 1e-12,
        format!("200 instances max gap {worst:e}; uniform n = 30 at 0: {got:.17} (gap {gap:e})"),
    )
}

fn monte_carlo() -> Outcome {
    let mut rng = common::rng(9);
    let grid = common::open_grid(64, 4.0);
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    let mut deterministic = true;
    for i in 0..20 {
        let spec = common::random_martingale(&mut rng, i);
        let seed = 1000 + i as u64;
        for (two_sided, kind) in [(false, BoundKind::W), (true, BoundKind::Wtilde)] {
            let src = MartingaleSource { spec: spec.clone(), samples: MC_SAMPLES, seed, two_sided };
            let report = verify_instance(&src, &[kind], &grid).unwrap();
            violations += report.violation_count();
            worst = worst.min(report.min_slack());
        }
        if i == 0 {
            let a = mc_martingale_tails(&spec, &grid, MC_SAMPLES, seed, false).unwrap();
            let b = mc_martingale_tails(&spec, &grid, MC_SAMPLES, seed, false).unwrap();
            deterministic &= a.iter().zip(&b).all(|(p, q)| p.value.to_bits() == q.value.to_bits());
        }
    }
    for i in 0..10 {
        let instance = common::random_hilbert(&mut rng);
        let seed = 2000 + i as u64;
        let src = HilbertSource { instance: instance.clone(), samples: MC_SAMPLES, seed };
        let report = verify_instance(&src, &[BoundKind::Wtilde], &grid).unwrap();
        violations += report.violation_count();
        worst = worst.min(report.min_slack());
        if i == 0 {
            let again = verify_instance(&src, &[BoundKind::Wtilde], &grid).unwrap();
            deterministic &= again == report;
        }
    }
    outcome(
        violations == 0 && deterministic,
        format!(
            "20 martingales + 10 Hilbert instances at 10^6 samples: {violations} violations, min slack {worst:e}, seeds {}",
            if deterministic { "reproducible" } else { "NOT reproducible" }
        ),
    )
}

fn normal_core() -> Outcome {
    // mpmath erfc(x / sqrt 2) / 2 at 50 digits
    let reference = [
        (0.5, 0.308_537_538_725_986_896_362_3),
        (1.0, 0.158_655_253_931_457_051_414_8),
        (2.0, 0.022_750_131_948_179_207_200_28),
        (4.0, 3.167_124_183_311_992_125_377e-5),
        (6.0, 9.865_876_450_376_981_407_009e-10),
        (8.0, 6.220_960_574_271_784_123_516e-16),
    ];
    let rel = reference
        .iter()
        .map(|&(x, v)| ((upper_tail(x).unwrap() - v) / v).abs())
        .fold(0.0, f64::max);
    let complement = common::linspace(-8.0, 8.0, 1001)
        .iter()
        .map(|&x| (upper_tail(x).unwrap() + upper_tail(-x).unwrap() - 1.0).abs())
        .fold(0.0, f64::max);
    let round_trip = reference
        .iter()
        .map(|&(x, _)| (upper_tail_inverse(upper_tail(x).unwrap()).unwrap() - x).abs())
        .fold(0.0, f64::max);
    outcome(
        rel <= 1e-13 && complement <= 1e-14 && round_trip <= 1e-9,
        format!("max rel err {rel:e}, complement {complement:e}, inverse round trip {round_trip:e}"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("constants", constants),
        ("crossing points", crossings),
        ("boundary values", boundary_values),
        ("inequality suite", inequality_suite),
        ("ordering properties", ordering),
        ("W/V asymptotics", asymptotics),
        ("monotonicity oracle", monotonicity),
        ("oracle equivalence", oracle_equivalence),
        ("Monte Carlo suite", monte_carlo),
        ("normal core", normal_core),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "{tag} criterion {:>2} {name}: {} [{:.1}s]",
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
