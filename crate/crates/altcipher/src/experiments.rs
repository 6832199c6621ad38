//! The expansion, collapse and amplifier experiments as reproducible runs.
//!
//! Each run builds the ciphers from uniform laws on subgroups and cosets,
//! convolves them, and records checks. Expected values come from group
//! structure alone (orders, double cosets, closed formulas); actual values
//! come from the convolved distributions.

use std::collections::BTreeMap;
use std::fmt::Display;

use altcipher_core::metrics::{guesswork, shannon_entropy, ENTROPY_TOLERANCE};
use altcipher_core::qsec::ncpa_advantage;
use altcipher_core::{
    compare, compare_q, double_coset, product, triple_decompose, Error, ExactDist, ExactReport, GroupTable,
    Permutation, PlaintextTuple, Rational, Relation, Result, Scalar,
};

use crate::spec::{GroupSpec, SpecError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub quantity: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Check {
    pub fn exact<T: PartialEq + Display>(quantity: impl Into<String>, expected: T, actual: T) -> Check {
        Check { quantity: quantity.into(), expected: expected.to_string(), actual: actual.to_string(), pass: expected == actual }
    }

    pub fn approx(quantity: impl Into<String>, expected: f64, actual: f64, tol: f64) -> Check {
        Check {
            quantity: quantity.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass: (expected - actual).abs() <= tol,
        }
    }

    pub fn holds(quantity: impl Into<String>, expected: impl Into<String>, actual: impl Display, pass: bool) -> Check {
        Check { quantity: quantity.into(), expected: expected.into(), actual: actual.to_string(), pass }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub id: String,
    pub parameters: String,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
    pub comparison: Option<ExactReport>,
    /// Distributions built along the way, by name.
    pub distributions: BTreeMap<String, ExactDist>,
}

impl ExperimentResult {
    pub fn new(id: impl Into<String>, parameters: impl Into<String>) -> Self {
        ExperimentResult {
            id: id.into(),
            parameters: parameters.into(),
            notes: Vec::new(),
            checks: Vec::new(),
            comparison: None,
            distributions: BTreeMap::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, quantity: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.quantity == quantity)
    }

    fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    fn keep(&mut self, name: &str, dist: &ExactDist) {
        self.distributions.insert(name.to_string(), dist.clone());
    }

    /// One check per level of `report`: the left side must be no less secure.
    fn push_levels(&mut self, report: ExactReport) {
        for level in &report.levels {
            let c = level.coherence();
            self.push(Check::holds(
                format!("q{}_{}_vs_{}", level.q, report.left, report.right),
                "left-more-secure|equivalent",
                c,
                matches!(c, altcipher_core::Coherence::LeftMoreSecure | altcipher_core::Coherence::Equivalent),
            ));
        }
        self.comparison = Some(report);
    }
}

/// Ambient group, subgroup `H` and the permutation `π`.
#[derive(Debug, Clone)]
pub struct Setup {
    pub group: GroupTable,
    pub subgroup: GroupTable,
    pub pi: Permutation,
    pub label: String,
}

impl Setup {
    pub fn from_specs(group: &GroupSpec, subgroup: &GroupSpec, pi: &Permutation) -> std::result::Result<Setup, SpecError> {
        let g = group.build()?;
        let h = subgroup.build_in(&g)?;
        if pi.degree() != g.degree() {
            return Err(SpecError(format!("pi {pi} has degree {}, expected {}", pi.degree(), g.degree())));
        }
        g.require(pi)?;
        Ok(Setup { group: g, subgroup: h, pi: pi.clone(), label: format!("G={group}, H={subgroup}, pi={pi}") })
    }

    fn subgroup_indices(&self) -> Result<Vec<usize>> {
        self.subgroup.indices_in(&self.group)
    }

    /// Indices of the left coset `πH`, ascending.
    fn coset_indices(&self) -> Result<Vec<usize>> {
        let p = self.group.require(&self.pi)?;
        let mut idx: Vec<usize> = self.subgroup_indices()?.iter().map(|&h| self.group.product_index(p, h)).collect();
        idx.sort_unstable();
        Ok(idx)
    }

    fn normalizes(&self) -> Result<bool> {
        Ok(self.subgroup.conjugate_by(&self.pi)? == self.subgroup)
    }

    fn default_q(&self, q_max: Option<usize>) -> usize {
        q_max.unwrap_or(self.group.degree()).min(self.group.degree())
    }
}

fn log2_count(n: usize) -> f64 {
    (n as f64).log2()
}

fn mean_rank(n: usize) -> Rational {
    Rational::from_ratio(n as i64 + 1, 2)
}

fn strict_or_equal(larger: bool) -> &'static str {
    if larger {
        Relation::StrictlyBelow.name()
    } else {
        Relation::EqualUpToPermutation.name()
    }
}

fn degenerate(mut r: ExperimentResult, setup: &Setup, t: &ExactDist, d: &ExactDist) -> ExperimentResult {
    let h = setup.subgroup.order();
    r.notes.push("pi lies in H: degenerate case, no expansion or collapse".into());
    r.push(Check::exact("support_T", h, t.support().len()));
    r.push(Check::exact("support_D", h, d.support().len()));
    r.push(Check::exact("T_equals_D", true, t == d));
    r.keep("T", t);
    r.keep("D", d);
    r
}

/// `X`, `Z` uniform on `H`, `Y` fixed at `π`: `T = XYZ` against `D = XZ`.
pub fn run_expand(setup: &Setup, q_max: Option<usize>) -> Result<ExperimentResult> {
    let (g, h, pi) = (&setup.group, &setup.subgroup, &setup.pi);
    let hi = setup.subgroup_indices()?;
    let x = ExactDist::uniform_on(g, &hi)?;
    let y = ExactDist::deterministic(g, pi)?;
    let t = product(&[&x, &y, &x])?;
    let d = x.convolve(&x)?;
    let mut r = ExperimentResult::new("expand", setup.label.clone());
    if h.contains(pi) {
        return Ok(degenerate(r, setup, &t, &d));
    }
    if setup.normalizes()? {
        r.notes.push("pi normalizes H: H pi H = pi H, so T and D have equal spread".into());
    }

    let m = h.order() / h.intersection(&h.conjugate_by(pi)?)?.order();
    let dc = double_coset(g, h, pi, h)?;
    let dec = triple_decompose(&x, h, pi, &x, h)?;
    let spread = m * h.order();

    r.push(Check::exact("support_T", spread, t.support().len()));
    r.push(Check::exact("support_D", h.order(), d.support().len()));
    r.push(Check::exact("m", m, dec.m));
    r.push(Check::exact("reconstruction", true, dec.reconstruct() == t));
    r.push(Check::exact("T_uniform_on_HpiH", true, t.is_uniform_on(&dc.elements)));
    r.push(Check::exact("majorization_T_D", strict_or_equal(m > 1), compare(t.masses(), d.masses()).relation.name()));
    r.push(Check::approx("shannon_T", log2_count(spread), shannon_entropy(t.masses())?, ENTROPY_TOLERANCE));
    r.push(Check::approx("shannon_D", log2_count(h.order()), shannon_entropy(d.masses())?, ENTROPY_TOLERANCE));
    r.push(Check::exact("guesswork_T", mean_rank(spread), guesswork(t.masses())?));
    r.push(Check::exact("guesswork_D", mean_rank(h.order()), guesswork(d.masses())?));
    r.push_levels(compare_q(&t, &d, setup.default_q(q_max), ("T", "D"))?);
    r.keep("T", &t);
    r.keep("D", &d);
    Ok(r)
}

/// `X`, `Z` uniform on `πH`, `Y` fixed at `π⁻¹`: `D = XZ` against `T = XYZ`.
pub fn run_collapse(setup: &Setup, q_max: Option<usize>) -> Result<ExperimentResult> {
    let (g, h, pi) = (&setup.group, &setup.subgroup, &setup.pi);
    let hi = setup.subgroup_indices()?;
    let coset = setup.coset_indices()?;
    let pi_inv = pi.inverse();
    let x = ExactDist::uniform_on(g, &coset)?;
    let y = ExactDist::deterministic(g, &pi_inv)?;
    let t = product(&[&x, &y, &x])?;
    let d = x.convolve(&x)?;
    let v = y.convolve(&x)?;
    let mut r = ExperimentResult::new("collapse", setup.label.clone());
    if h.contains(pi) {
        return Ok(degenerate(r, setup, &t, &d));
    }
    let normalizes = setup.normalizes()?;
    if normalizes {
        r.notes.push("pi normalizes H: pi H pi H is a single coset, so T and D have equal spread".into());
    }

    let dc = double_coset(g, h, pi, h)?;
    r.push(Check::exact("support_T", h.order(), t.support().len()));
    r.push(Check::exact("T_uniform_on_piH", true, t.is_uniform_on(&coset)));
    r.push(Check::exact("V_uniform_on_H", true, v.is_uniform_on(&hi)));
    r.push(Check::exact("support_D", dc.len(), d.support().len()));
    r.push(Check::exact(
        "majorization_D_T",
        strict_or_equal(dc.len() > h.order()),
        compare(d.masses(), t.masses()).relation.name(),
    ));
    r.push(Check::approx("shannon_T", log2_count(h.order()), shannon_entropy(t.masses())?, ENTROPY_TOLERANCE));
    r.push(Check::approx("shannon_D", log2_count(dc.len()), shannon_entropy(d.masses())?, ENTROPY_TOLERANCE));
    r.push(Check::exact("guesswork_T", mean_rank(h.order()), guesswork(t.masses())?));
    r.push(Check::exact("guesswork_D", mean_rank(dc.len()), guesswork(d.masses())?));

    // Stripping the leading π from the collapse leaves the expansion with roles swapped.
    let u = ExactDist::uniform_on(g, &hi)?;
    let expand_t = product(&[&u, &ExactDist::deterministic(g, pi)?, &u])?;
    let expand_d = u.convolve(&u)?;
    r.push(Check::exact("translated_T_equals_expand_D", true, t.translate(&pi_inv)? == expand_d));
    r.push(Check::exact("translated_D_equals_expand_T", true, d.translate(&pi_inv)? == expand_t));
    r.push_levels(compare_q(&d, &t, setup.default_q(q_max), ("D", "T"))?);
    r.keep("T", &t);
    r.keep("D", &d);
    r.keep("V", &v);
    Ok(r)
}

/// `E = X Y X ⋯ Y X` with `r` copies of `Y` against the bare `X` product.
pub fn run_general_collapse(setup: &Setup, rounds: usize) -> Result<ExperimentResult> {
    if rounds == 0 {
        return Err(Error::ParameterOutOfRange("rounds must be at least 1".into()));
    }
    let (g, h, pi) = (&setup.group, &setup.subgroup, &setup.pi);
    let coset = setup.coset_indices()?;
    let x = ExactDist::uniform_on(g, &coset)?;
    let y = ExactDist::deterministic(g, &pi.inverse())?;
    let mut r = ExperimentResult::new("general-collapse", format!("{}, rounds={rounds}", setup.label));
    if h.contains(pi) {
        r.notes.push("pi lies in H: degenerate case, every product is uniform on H".into());
    }
    let normalizes = !h.contains(pi) && setup.normalizes()?;
    if normalizes {
        r.notes.push("pi normalizes H: products of cosets of H stay cosets".into());
    }
    let grows = !h.contains(pi) && !normalizes;

    let mut e = x.clone();
    let mut xs = x.clone();
    let mut sizes = Vec::with_capacity(rounds);
    for k in 1..=rounds {
        e = product(&[&x, &y, &e])?;
        xs = x.convolve(&xs)?;
        let size = xs.support().len();
        sizes.push(size);
        let on_coset = e.support() == coset;
        r.push(Check::holds(format!("support_E_r{k}"), format!("piH ({})", h.order()), e.support().len(), on_coset));
        if grows {
            r.push(Check::holds(format!("support_X_r{k}"), format!("> {}", h.order()), size, size > h.order()));
        } else {
            r.push(Check::exact(format!("support_X_r{k}"), h.order(), size));
        }
        r.push(Check::exact(
            format!("majorization_X_E_r{k}"),
            strict_or_equal(grows),
            compare(xs.masses(), e.masses()).relation.name(),
        ));
        r.keep(&format!("E_r{k}"), &e);
        r.keep(&format!("X_r{k}"), &xs);
    }
    let sizes_text = sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ");
    r.push(Check::holds("support_X_nondecreasing", "true", sizes_text, sizes.windows(2).all(|w| w[0] <= w[1])));

    let collapse = run_collapse(setup, Some(0))?;
    let matches = r.distributions["E_r1"] == collapse.distributions["T"] && r.distributions["X_r1"] == collapse.distributions["D"];
    r.push(Check::exact("r1_matches_collapse", true, matches));
    Ok(r)
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// The amplifier modeled as uniform on `Sym(2ⁿ)` inside `Sym(2ⁿ+1)`, with `π = i ↦ i+1`.
pub fn run_amplifier(n: u32) -> Result<ExperimentResult> {
    if n == 0 || n > 8 {
        return Err(Error::ParameterOutOfRange(format!("n = {n}; the ambient group must be enumerable")));
    }
    let special = 1usize << n;
    let size = special + 1;
    let g = GroupTable::symmetric(size)?;
    let h = GroupTable::point_stabilizer(size, special)?;
    let pi = Permutation::new((0..size).map(|i| (i + 1) % size).collect())?;
    let hi = h.indices_in(&g)?;
    let x = ExactDist::uniform_on(&g, &hi)?;
    let t = product(&[&x, &ExactDist::deterministic(&g, &pi)?, &x])?;
    let d = x.convolve(&x)?;
    let mut r = ExperimentResult::new("amplifier", format!("n={n}, G=sym({size}), H=stab({size}, {special}), pi={pi}"));

    let fixes = |p: &Permutation| p.fixes(special);
    let p_d = d.probability_of(fixes);
    let p_u = ExactDist::uniform(&g).probability_of(fixes);
    let advantage = Rational::from_ratio(special as i64, size as i64);
    r.push(Check::exact(format!("D_fixes_{special}"), Rational::from_count(1), p_d.clone()));
    r.push(Check::exact(format!("uniform_fixes_{special}"), Rational::from_ratio(1, size as i64), p_u.clone()));
    r.push(Check::exact("distinguisher_advantage", advantage.clone(), p_d - p_u));
    let tuple = PlaintextTuple::new(vec![special], size)?;
    r.push(Check::exact(format!("ncpa_advantage_{tuple}"), advantage, ncpa_advantage(&d, &tuple)?));

    let spread = factorial(size) - factorial(special);
    let dc = double_coset(&g, &h, &pi, &h)?;
    r.push(Check::exact("support_T", spread, t.support().len()));
    r.push(Check::exact("double_coset_size", spread, dc.len()));
    r.push(Check::exact("T_uniform_on_double_coset", true, t.is_uniform_on(&dc.elements)));
    r.push(Check::exact("support_D", factorial(special), d.support().len()));
    r.push(Check::exact("support_D_equals_H", true, d.support() == hi));
    r.keep("T", &t);
    r.keep("D", &d);
    Ok(r)
}
