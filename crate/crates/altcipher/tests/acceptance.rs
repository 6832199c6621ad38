//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use altcipher::experiments::{run_amplifier, run_collapse, run_expand, run_general_collapse, Setup};
use altcipher::spec::GroupSpec;
use altcipher_core::metrics::{
    alpha_guesswork, guesswork, marginal_guesswork, renyi_entropy, shannon_entropy, variation_to_uniform,
    variation_to_uniform_increasing, ENTROPY_TOLERANCE,
};
use altcipher_core::qsec::{conditional_guesswork, conditional_guesswork_oracle, ncpa_advantage};
use altcipher_core::{
    compare, compare_q, distinct_tuples, hlp_witness, product, project, triple_decompose, ExactDist, GroupTable,
    Permutation, Rational, Relation, Scalar, DEFAULT_CAP,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn r(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn perm(images: &[usize]) -> Permutation {
    Permutation::new(images.to_vec()).unwrap()
}

fn random_subgroup(rng: &mut ChaCha8Rng, g: &GroupTable) -> GroupTable {
    let k = rng.gen_range(1..=2);
    let gens: Vec<Permutation> = (0..k).map(|_| g.element(rng.gen_range(0..g.order())).clone()).collect();
    GroupTable::closure(&gens, DEFAULT_CAP).unwrap()
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    let mut w: Vec<Rational> = (0..n).map(|_| Rational::from_count(rng.gen_range(0..=4))).collect();
    if w.iter().all(|v| *v == Rational::from_count(0)) {
        let i = rng.gen_range(0..n);
        w[i] = Rational::from_count(1);
    }
    w
}

/// Random law supported inside `sub`.
fn random_dist_on(rng: &mut ChaCha8Rng, g: &GroupTable, sub: &GroupTable) -> ExactDist {
    let idx = sub.indices_in(g).unwrap();
    let w = random_weights(rng, idx.len());
    let mut full = vec![Rational::from_count(0); g.order()];
    for (i, v) in idx.into_iter().zip(w) {
        full[i] = v;
    }
    ExactDist::from_weights(g, full).unwrap()
}

fn random_dist(rng: &mut ChaCha8Rng, g: &GroupTable) -> ExactDist {
    let mut w = random_weights(rng, g.order());
    // sparsify about half the time
    if rng.gen_bool(0.5) {
        for v in w.iter_mut() {
            if rng.gen_bool(0.6) {
                *v = Rational::from_count(0);
            }
        }
        if w.iter().all(|v| *v == Rational::from_count(0)) {
            w[0] = Rational::from_count(1);
        }
    }
    ExactDist::from_weights(g, w).unwrap()
}

/// `Σ x(a) δ_π z(b)` accumulated element by element.
fn triple_oracle(x: &ExactDist, pi: &Permutation, z: &ExactDist) -> BTreeMap<Permutation, Rational> {
    let g = x.group();
    let mut out = BTreeMap::new();
    for a in x.support() {
        for b in z.support() {
            let e = g.element(a).compose(pi).unwrap().compose(g.element(b)).unwrap();
            *out.entry(e).or_insert_with(|| Rational::from_count(0)) += x.mass(a).clone() * z.mass(b).clone();
        }
    }
    out
}

fn matches_oracle(d: &ExactDist, oracle: &BTreeMap<Permutation, Rational>) -> bool {
    let g = d.group();
    d.support().len() == oracle.len() && oracle.iter().all(|(e, m)| d.mass(g.index_of(e).unwrap()) == m)
}

fn groups_up_to_s5() -> Vec<GroupTable> {
    (3..=5).map(|m| GroupTable::symmetric(m).unwrap()).collect()
}

fn decomposition_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let groups = groups_up_to_s5();
    let mut cases = 0;
    let mut total_m = 0;
    for i in 0..150 {
        let g = &groups[i % groups.len()];
        let (h, k) = (random_subgroup(&mut rng, g), random_subgroup(&mut rng, g));
        let pi = g.element(rng.gen_range(0..g.order())).clone();
        let (x, z) = (random_dist_on(&mut rng, g, &h), random_dist_on(&mut rng, g, &k));
        let d = triple_decompose(&x, &h, &pi, &z, &k).map_err(|e| e.to_string())?;
        ensure!(matches_oracle(&d.reconstruct(), &triple_oracle(&x, &pi, &z)), "case {i}: reconstruction differs");
        let pinv = pi.inverse();
        let meet = h.elements().iter().filter(|e| k.contains(&pinv.compose(e).unwrap().compose(&pi).unwrap())).count();
        ensure!(d.m == h.order() / meet, "case {i}: m = {} but [H : H∩πKπ⁻¹] = {}", d.m, h.order() / meet);
        for (j, part) in d.parts.iter().enumerate() {
            ensure!(compare(part.masses(), z.masses()).relation.is_below(), "case {i}: z_{j} not below z");
        }
        cases += 1;
        total_m += d.m;
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("{cases} cases over S3..S5, mean m {:.2}, {elapsed:.2?}", total_m as f64 / cases as f64))
}

fn uniform_double_coset_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let groups = groups_up_to_s5();
    let (mut strict, mut equal) = (0, 0);
    for i in 0..120 {
        let g = &groups[i % groups.len()];
        let (h, k) = (random_subgroup(&mut rng, g), random_subgroup(&mut rng, g));
        let pi = g.element(rng.gen_range(0..g.order())).clone();
        let x = ExactDist::uniform_on_elements(g, h.elements()).unwrap();
        let z = ExactDist::uniform_on_elements(g, k.elements()).unwrap();
        let t = product(&[&x, &ExactDist::deterministic(g, &pi).unwrap(), &z]).unwrap();
        let mut hpik: Vec<Permutation> = Vec::new();
        for a in h.elements() {
            for b in k.elements() {
                hpik.push(a.compose(&pi).unwrap().compose(b).unwrap());
            }
        }
        hpik.sort();
        hpik.dedup();
        let share = Rational::reciprocal(hpik.len());
        ensure!(t.support().len() == hpik.len(), "case {i}: support {} vs |HπK| {}", t.support().len(), hpik.len());
        ensure!(hpik.iter().all(|e| t.mass_of(e) == share), "case {i}: not uniform on HπK");
        let verdict = compare(t.masses(), z.masses()).relation;
        if hpik.len() > k.order() {
            ensure!(verdict == Relation::StrictlyBelow, "case {i}: verdict {verdict}");
            strict += 1;
        } else {
            ensure!(verdict == Relation::EqualUpToPermutation, "case {i}: verdict {verdict}");
            equal += 1;
        }
    }
    Ok(format!("120 cases, {strict} strictly below, {equal} with |HπK| = |K|"))
}

fn s3_setup() -> Setup {
    Setup::from_specs(&GroupSpec::Sym(3), &"gen([[1,0,2]])".parse().unwrap(), &perm(&[0, 2, 1])).unwrap()
}

/// Every tuple at every level 1..=q_max: `left` has advantage ≤ and guesswork ≥ those of `right`.
fn tuples_ordered(left: &ExactDist, right: &ExactDist, q_max: usize) -> Result<usize, String> {
    let report = compare_q(left, right, q_max, ("L", "R")).map_err(|e| e.to_string())?;
    let mut n = 0;
    for level in report.levels.iter().filter(|l| l.q >= 1) {
        for t in &level.tuples {
            ensure!(t.advantage.0 <= t.advantage.1, "q={} {}: advantage {} > {}", level.q, t.tuple, t.advantage.0, t.advantage.1);
            ensure!(
                t.conditional_guesswork.0 >= t.conditional_guesswork.1,
                "q={} {}: guesswork {} < {}",
                level.q,
                t.tuple,
                t.conditional_guesswork.0,
                t.conditional_guesswork.1
            );
            n += 1;
        }
    }
    ensure!(report.left_no_less_secure(), "coherence {}", report.coherence());
    Ok(n)
}

fn expansion_s3() -> Outcome {
    let res = run_expand(&s3_setup(), Some(3)).map_err(|e| e.to_string())?;
    ensure!(res.passed(), "experiment checks failed");
    let (t, d) = (&res.distributions["T"], &res.distributions["D"]);
    ensure!(t.support().len() == 4 && d.support().len() == 2, "supports {} / {}", t.support().len(), d.support().len());
    ensure!(compare(t.masses(), d.masses()).relation == Relation::StrictlyBelow, "t not strictly below d");
    let (ht, hd) = (shannon_entropy(t.masses()).unwrap(), shannon_entropy(d.masses()).unwrap());
    ensure!((ht - 2.0).abs() <= 1e-12 && (hd - 1.0).abs() <= 1e-12, "entropies {ht} / {hd}");
    ensure!(guesswork(t.masses()).unwrap() == r(5, 2) && guesswork(d.masses()).unwrap() == r(3, 2), "guesswork");
    let n = tuples_ordered(t, d, 3)?;
    Ok(format!("|supp t| = 4, |supp d| = 2, H = {ht} vs {hd} bits, {n} tuples ordered at q = 1..3"))
}

fn collapse_s3() -> Outcome {
    let setup = s3_setup();
    let res = run_collapse(&setup, Some(3)).map_err(|e| e.to_string())?;
    ensure!(res.passed(), "experiment checks failed");
    let (t, d) = (&res.distributions["T"], &res.distributions["D"]);
    ensure!(t.support().len() == 2 && d.support().len() == 4, "supports {} / {}", t.support().len(), d.support().len());
    ensure!(compare(d.masses(), t.masses()).relation == Relation::StrictlyBelow, "d not strictly below t");
    let n = tuples_ordered(d, t, 3)?;
    let expand = run_expand(&setup, Some(0)).map_err(|e| e.to_string())?;
    let pinv = setup.pi.inverse();
    ensure!(t.translate(&pinv).unwrap() == expand.distributions["D"], "π⁻¹T differs from expand D");
    ensure!(d.translate(&pinv).unwrap() == expand.distributions["T"], "π⁻¹D differs from expand T");
    Ok(format!("reversed: |supp t| = 2, |supp d| = 4, {n} tuples ordered; translations match expand"))
}

fn general_collapse() -> Outcome {
    let cases = [
        (s3_setup(), "S3"),
        (
            Setup::from_specs(&GroupSpec::Sym(4), &GroupSpec::Stab { degree: 4, fixed: 3 }, &perm(&[0, 1, 3, 2])).unwrap(),
            "S4",
        ),
    ];
    let mut sizes_out = Vec::new();
    for (setup, name) in &cases {
        let res = run_general_collapse(setup, 3).map_err(|e| e.to_string())?;
        ensure!(res.passed(), "{name}: experiment checks failed");
        let mut coset: Vec<Permutation> = setup.subgroup.elements().iter().map(|h| setup.pi.compose(h).unwrap()).collect();
        coset.sort();
        let mut prev = 0;
        for k in 1..=3 {
            let e = &res.distributions[&format!("E_r{k}")];
            let support: Vec<Permutation> = e.support().iter().map(|&i| setup.group.element(i).clone()).collect();
            ensure!(support == coset, "{name} r={k}: supp(E) is not πH");
            let xs = res.distributions[&format!("X_r{k}")].support().len();
            ensure!(xs > coset.len() && xs >= prev, "{name} r={k}: X-product support {xs}");
            prev = xs;
            sizes_out.push(format!("{name}/r{k}:{xs}"));
        }
    }
    Ok(format!("supp(E) = πH throughout; X-product supports {}", sizes_out.join(" ")))
}

fn amplifier() -> Outcome {
    let start = Instant::now();
    let mut out = Vec::new();
    for (n, expected) in [(1u32, 4usize), (2, 96)] {
        let res = run_amplifier(n).map_err(|e| e.to_string())?;
        ensure!(res.passed(), "n={n}: experiment checks failed");
        let (t, d) = (&res.distributions["T"], &res.distributions["D"]);
        ensure!(t.support().len() == expected, "n={n}: |supp t| = {}", t.support().len());
        let point = 1usize << n;
        let p_fix = d.probability_of(|p| p.fixes(point));
        ensure!(p_fix == Rational::from_count(1), "n={n}: D fixes {point} with probability {p_fix}");
        let adv = p_fix - ExactDist::uniform(d.group()).probability_of(|p| p.fixes(point));
        ensure!(adv == r(point as i64, point as i64 + 1), "n={n}: advantage {adv}");
        out.push(format!("n={n}: |supp t| = {expected}, advantage {adv}"));
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!("{}, {elapsed:.2?}", out.join("; ")))
}

/// Pairs `(x, y)` with `x ⪯ y` built from random T-transforms and a shuffle.
fn schur_pairs() -> Vec<(Vec<Rational>, Vec<Rational>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..1200)
        .map(|_| {
            let n = rng.gen_range(2..=8);
            let w = random_weights(&mut rng, n);
            let sum = w.iter().cloned().sum::<Rational>();
            let y: Vec<Rational> = w.into_iter().map(|v| v / sum.clone()).collect();
            let mut x = y.clone();
            for _ in 0..rng.gen_range(1..=4) {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                let lambda = r(rng.gen_range(0..=10), 10);
                let (a, b) = (x[i].clone(), x[j].clone());
                let mu = r(1, 1) - lambda.clone();
                x[i] = lambda.clone() * a.clone() + mu.clone() * b.clone();
                x[j] = mu * a + lambda * b;
            }
            x.shuffle(&mut rng);
            (x, y)
        })
        .collect()
}

fn schur_suite(pairs: &[(Vec<Rational>, Vec<Rational>)]) -> Outcome {
    let alphas = [r(1, 10), r(1, 3), r(1, 2), r(3, 4), r(1, 1)];
    let orders = [0.5, 2.0, 3.0];
    let mut strict = 0;
    for (i, (x, y)) in pairs.iter().enumerate() {
        let verdict = compare(x, y).relation;
        ensure!(verdict.is_below(), "pair {i}: generated pair is {verdict}");
        let (hx, hy) = (shannon_entropy(x).unwrap(), shannon_entropy(y).unwrap());
        ensure!(hx >= hy - ENTROPY_TOLERANCE, "pair {i}: shannon {hx} < {hy}");
        let (gx, gy) = (guesswork(x).unwrap(), guesswork(y).unwrap());
        ensure!(gx >= gy, "pair {i}: guesswork {gx} < {gy}");
        for a in &alphas {
            ensure!(alpha_guesswork(x, a).unwrap() >= alpha_guesswork(y, a).unwrap(), "pair {i}: alpha-guesswork at {a}");
            ensure!(marginal_guesswork(x, a).unwrap() >= marginal_guesswork(y, a).unwrap(), "pair {i}: marginal at {a}");
        }
        ensure!(variation_to_uniform(x).unwrap() <= variation_to_uniform(y).unwrap(), "pair {i}: variation distance");
        let renyi: Vec<(f64, f64)> = orders.iter().map(|&o| (renyi_entropy(x, o).unwrap(), renyi_entropy(y, o).unwrap())).collect();
        ensure!(renyi.iter().all(|(a, b)| *a >= b - ENTROPY_TOLERANCE), "pair {i}: renyi {renyi:?}");
        if verdict == Relation::StrictlyBelow {
            strict += 1;
            ensure!(hx > hy + ENTROPY_TOLERANCE, "pair {i}: shannon not strict ({hx} vs {hy})");
            ensure!(renyi.iter().all(|(a, b)| *a > b + ENTROPY_TOLERANCE), "pair {i}: renyi not strict {renyi:?}");
            ensure!(gx > gy, "pair {i}: guesswork not strict");
        }
    }
    Ok(format!("{} pairs, {strict} strictly below", pairs.len()))
}

fn product_qsec_suite() -> Result<(String, Vec<ExactDist>), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let groups = [GroupTable::symmetric(3).unwrap(), GroupTable::symmetric(4).unwrap()];
    let mut dists = Vec::new();
    let mut tuples = 0;
    for i in 0..120 {
        let g = &groups[i % 2];
        let (x, y) = (random_dist(&mut rng, g), random_dist(&mut rng, g));
        let z = x.convolve(&y).unwrap();
        for q in 1..=2 {
            for p in distinct_tuples(g.degree(), q).unwrap() {
                let (pz, py) = (project(&z, &p).unwrap(), project(&y, &p).unwrap());
                ensure!(compare(&pz.coset_masses, &py.coset_masses).relation.is_below(), "pair {i} {p}: ẑ not below ŷ");
                ensure!(compare(&pz.profile_sum(), &py.profile_sum()).relation.is_below(), "pair {i} {p}: profiles");
                let (wz, wy) = (conditional_guesswork(&z, &p).unwrap(), conditional_guesswork(&y, &p).unwrap());
                ensure!(wz >= wy, "pair {i} {p}: guesswork {wz} < {wy}");
                let (az, ay) = (ncpa_advantage(&z, &p).unwrap(), ncpa_advantage(&y, &p).unwrap());
                ensure!(az <= ay, "pair {i} {p}: advantage {az} > {ay}");
                tuples += 1;
            }
        }
        dists.extend([x, y, z]);
    }
    Ok((format!("120 pairs on S3/S4, {tuples} (pair, tuple) checks at q = 1, 2"), dists))
}

fn half_l1(x: &[Rational]) -> Rational {
    let u = Rational::reciprocal(x.len());
    x.iter().map(|v| if *v < u { u.clone() - v.clone() } else { v.clone() - u.clone() }).sum::<Rational>() / Rational::from_count(2)
}

fn oracle_suite(dists: &[ExactDist], pairs: &[(Vec<Rational>, Vec<Rational>)]) -> Outcome {
    let mut cg = 0;
    for (i, d) in dists.iter().enumerate() {
        for q in 1..=2 {
            for p in distinct_tuples(d.group().degree(), q).unwrap() {
                let (a, b) = (conditional_guesswork(d, &p).unwrap(), conditional_guesswork_oracle(d, &p).unwrap());
                ensure!(a == b, "dist {i} {p}: {a} vs oracle {b}");
                cg += 1;
            }
        }
    }
    let mut vd = 0;
    for (x, y) in pairs {
        for v in [x, y] {
            let (a, b, c) = (variation_to_uniform(v).unwrap(), variation_to_uniform_increasing(v).unwrap(), half_l1(v));
            ensure!(a == b && b == c, "variation forms disagree on {v:?}: {a}, {b}, {c}");
            vd += 1;
        }
    }
    Ok(format!("{cg} conditional guesswork evaluations, {vd} variation distances"))
}

fn witness_suite(pairs: &[(Vec<Rational>, Vec<Rational>)]) -> Outcome {
    let zero = Rational::from_count(0);
    let one = Rational::from_count(1);
    let mut terms = 0;
    for (i, (x, y)) in pairs.iter().enumerate() {
        let w = hlp_witness(x, y).map_err(|e| format!("pair {i}: {e}"))?;
        let n = x.len();
        let m = &w.matrix;
        ensure!(m.len() == n && m.iter().all(|row| row.len() == n), "pair {i}: matrix shape");
        ensure!(m.iter().flatten().all(|v| *v >= zero), "pair {i}: negative entry");
        ensure!(m.iter().all(|row| row.iter().cloned().sum::<Rational>() == one), "pair {i}: row sum");
        ensure!((0..n).all(|c| m.iter().map(|row| row[c].clone()).sum::<Rational>() == one), "pair {i}: column sum");
        let dy: Vec<Rational> = m.iter().map(|row| row.iter().zip(y).map(|(a, b)| a.clone() * b.clone()).sum()).collect();
        ensure!(&dy == x, "pair {i}: Dy != x");
        let mut rebuilt = vec![vec![zero.clone(); n]; n];
        for (weight, p) in &w.decomposition {
            ensure!(*weight > zero, "pair {i}: nonpositive Birkhoff weight");
            for (row, &col) in p.images().iter().enumerate() {
                rebuilt[row][col] += weight.clone();
            }
        }
        ensure!(&rebuilt == m, "pair {i}: Birkhoff terms do not rebuild D");
        terms += w.decomposition.len();
    }
    Ok(format!("{} witnesses, {terms} Birkhoff terms in total", pairs.len()))
}

fn main() {
    let pairs = schur_pairs();
    let qsec = product_qsec_suite();
    let qsec_dists = qsec.as_ref().map(|(_, d)| d.clone()).unwrap_or_default();
    let results: Vec<(&str, Outcome)> = vec![
        ("decomposition of x * δπ * z", decomposition_suite()),
        ("uniform factors give uniform double cosets", uniform_double_coset_suite()),
        ("expansion on S3", expansion_s3()),
        ("collapse on S3", collapse_s3()),
        ("general collapse", general_collapse()),
        ("amplifier", amplifier()),
        ("Schur monotonicity", schur_suite(&pairs)),
        ("products never lose q-security", qsec.map(|(s, _)| s)),
        ("oracle equivalence", oracle_suite(&qsec_dists, &pairs)),
        ("HLP witnesses and Birkhoff terms", witness_suite(&pairs)),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS  {:>2}  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
