//! The library's end-to-end self-check: eleven numbered checks covering the
//! fixtures, the two finite planes, exhaustive enumeration, random
//! sampling, the edge bounds and the grid construction.
//!
//! Checks are grouped into stages so callers can skip expensive groups.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{degree_inequality_audit, max_edges_oa, max_edges_omp, oml_bound_satisfied};
use crate::constructions::{
    add_diagonal_edges, ag23, bundled_grid_diagonals, fano, merge, oml67, omp21,
    search_diagonal_edges, SearchBudget,
};
use crate::enumerate::{enumerate_diagrams, verify_theorem4, EnumerationOptions, EnumerationTask};
use crate::hypergraph::{DiagramKind, Hypergraph};
use crate::linalg::nullspace_mod_p;
use crate::measures::{
    analyze_group_measures, build_incidence_system, find_group_valued_measure,
    find_probability_measure, nonconstant_range_profile, square_system_determinant,
    verify_group_measure, GroupMeasureWitness,
};
use crate::random::random_greechie;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Fixtures,
    Planes,
    Enumerate,
    Random,
    Bounds,
    Grid,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Fixtures,
        Stage::Planes,
        Stage::Enumerate,
        Stage::Random,
        Stage::Bounds,
        Stage::Grid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Fixtures => "fixtures",
            Stage::Planes => "planes",
            Stage::Enumerate => "enumerate",
            Stage::Random => "random",
            Stage::Bounds => "bounds",
            Stage::Grid => "grid",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                let names: Vec<&str> = Stage::ALL.iter().map(|s| s.name()).collect();
                format!("unknown stage '{s}', expected one of {}", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub stage: Stage,
    pub title: &'static str,
    pub status: Status,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2}. {} ({} ms): {}",
            self.status, self.id, self.title, self.elapsed_ms, self.detail
        )
    }
}

/// Inputs and limits for [`run_all`].
#[derive(Debug, Clone)]
pub struct AuditConfig {
    pub omp21: Hypergraph,
    pub oml67: Hypergraph,
    /// Samples for each of the two random checks.
    pub samples: usize,
    pub seed: u64,
    /// Vertex limit of the exhaustive state check.
    pub state_check_max_n: usize,
    /// Also run the state check at nine vertices.
    pub extended: bool,
    pub grid_budget: SearchBudget,
    pub workers: usize,
    pub skip: BTreeSet<Stage>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            omp21: omp21(),
            oml67: oml67(),
            samples: 1000,
            seed: 2024,
            state_check_max_n: 8,
            extended: false,
            grid_budget: SearchBudget::default(),
            workers: 0,
            skip: BTreeSet::new(),
        }
    }
}

pub const TITLES: [(u8, Stage, &str); 11] = [
    (1, Stage::Fixtures, "21-vertex OMP admits no measure"),
    (2, Stage::Fixtures, "67-vertex OML admits no measure"),
    (
        3,
        Stage::Planes,
        "Fano plane: nonconstant measures only mod 2",
    ),
    (4, Stage::Planes, "AG(2,3): nonconstant measures only mod 3"),
    (5, Stage::Enumerate, "every small OA diagram has a state"),
    (6, Stage::Random, "|E| <= |V| always leaves a group measure"),
    (
        7,
        Stage::Random,
        "square systems: SNF agrees with |det| = 1",
    ),
    (8, Stage::Bounds, "edge bounds on the known examples"),
    (
        9,
        Stage::Enumerate,
        "degree inequality on 3-uniform OMP diagrams",
    ),
    (
        10,
        Stage::Grid,
        "grid merge with diagonals kills all measures",
    ),
    (11, Stage::Enumerate, "enumeration matches the naive oracle"),
];

type Outcome = Result<String, String>;

/// Runs one check by number (1 to 11).
pub fn run_check(id: u8, config: &AuditConfig) -> CheckResult {
    let (_, stage, title) = TITLES[usize::from(id) - 1];
    if config.skip.contains(&stage) {
        return CheckResult {
            id,
            stage,
            title,
            status: Status::Skipped,
            detail: format!("stage '{stage}' skipped"),
            elapsed_ms: 0,
        };
    }
    let started = Instant::now();
    let outcome = match id {
        1 => check_fixture(&config.omp21, 21, 22, DiagramKind::Omp, Some(4)),
        2 => check_fixture(&config.oml67, 67, 68, DiagramKind::Oml, None),
        3 => check_plane(&fano(), 2),
        4 => check_plane(&ag23(), 3),
        5 => check_states(config),
        6 => check_sparse_measures(config),
        7 => check_square_systems(config),
        8 => check_bounds(),
        9 => check_degree_audit(config),
        10 => check_grid(config),
        11 => check_enumeration(config),
        _ => Err(format!("no check numbered {id}")),
    };
    let elapsed = started.elapsed();
    let outcome = outcome.and_then(|d| within(id, elapsed).map(|()| d));
    let (status, detail) = match outcome {
        Ok(d) => (Status::Pass, d),
        Err(d) => (Status::Fail, d),
    };
    CheckResult {
        id,
        stage,
        title,
        status,
        detail,
        elapsed_ms: elapsed.as_millis(),
    }
}

pub fn run_all(config: &AuditConfig) -> Vec<CheckResult> {
    TITLES
        .iter()
        .map(|&(id, _, _)| run_check(id, config))
        .collect()
}

fn within(id: u8, elapsed: Duration) -> Result<(), String> {
    let limit = match id {
        1..=4 => Duration::from_secs(1),
        5 | 10 => Duration::from_secs(600),
        _ => return Ok(()),
    };
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn check_fixture(
    h: &Hypergraph,
    n: usize,
    m: usize,
    kind: DiagramKind,
    order: Option<usize>,
) -> Outcome {
    let det = square_system_determinant(h).map_err(|e| format!("determinant: {e}"))?;
    ensure(det.abs().is_one(), || {
        format!("determinant {det}, expected +-1")
    })?;
    ensure(h.vertex_count() == n && h.edge_count() == m, || {
        format!(
            "expected {n} vertices / {m} edges, got {} / {}",
            h.vertex_count(),
            h.edge_count()
        )
    })?;
    let measure = find_group_valued_measure(h).map_err(|e| e.to_string())?;
    ensure(measure.is_none(), || "a group-valued measure exists".into())?;
    ensure(find_probability_measure(h).is_none(), || {
        "a state exists".into()
    })?;
    let class = h.classify();
    ensure(class.kind == kind, || {
        format!("classified {}, expected {kind}", class.kind)
    })?;
    match (order, class.min_cycle_order) {
        (Some(want), got) => ensure(got == Some(want), || {
            format!("min cycle order {got:?}, expected {want}")
        })?,
        (None, Some(got)) => ensure(got >= 5, || format!("min cycle order {got}"))?,
        (None, None) => {}
    }
    Ok(format!(
        "det = {det}, no group measure, no state, {kind} with min cycle order {}",
        class
            .min_cycle_order
            .map_or("none".to_string(), |k| k.to_string())
    ))
}

fn check_plane(h: &Hypergraph, only: u64) -> Outcome {
    let primes = [2u64, 3, 5, 7];
    let profile = nonconstant_range_profile(h, &primes).map_err(|e| e.to_string())?;
    let system = build_incidence_system(h).matrix;
    let mut dims = Vec::new();
    for p in primes {
        let expected = p == only;
        ensure(profile[&p] == expected, || {
            format!(
                "nonconstant measure mod {p}: {}, expected {expected}",
                profile[&p]
            )
        })?;
        let dim = nullspace_mod_p(&system, p)
            .map_err(|e| e.to_string())?
            .len();
        dims.push(format!("{p}:{dim}"));
        if p == only {
            ensure(dim >= 2, || {
                format!("mod {p} nullspace has dimension {dim}")
            })?;
        } else {
            ensure(dim == 1, || {
                format!("mod {p} nullspace has dimension {dim}")
            })?;
        }
    }
    Ok(format!(
        "nonconstant only mod {only}; nullspace dimensions {}",
        dims.join(" ")
    ))
}

fn check_states(config: &AuditConfig) -> Outcome {
    let options = EnumerationOptions::with_workers(config.workers);
    let mut sizes = vec![config.state_check_max_n];
    if config.extended && config.state_check_max_n < 9 {
        sizes.push(9);
    }
    let mut parts = Vec::new();
    for max_n in sizes {
        let report = verify_theorem4(max_n, &options).map_err(|e| e.to_string())?;
        ensure(report.complete, || {
            format!("n <= {max_n}: enumeration incomplete")
        })?;
        ensure(report.all_have_states(), || {
            format!(
                "n <= {max_n}: {} stateless diagram(s), first:\n{}",
                report.stateless.len(),
                report.stateless[0]
            )
        })?;
        parts.push(format!(
            "n <= {max_n}: {} diagrams, all with states ({} ms)",
            report.diagrams_checked, report.elapsed_ms
        ));
    }
    Ok(parts.join("; "))
}

fn random_shape(rng: &mut ChaCha8Rng, n_range: (usize, usize)) -> (usize, Vec<usize>) {
    let n = rng.gen_range(n_range.0..=n_range.1);
    let sizes = match rng.gen_range(0..3) {
        0 => vec![3],
        1 => vec![3, 4],
        _ => vec![3, 3, 3, 4],
    };
    (n, sizes)
}

fn sample<F>(config: &AuditConfig, salt: u64, mut draw: F) -> Vec<Hypergraph>
where
    F: FnMut(&mut ChaCha8Rng) -> Option<Hypergraph>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ salt);
    let mut out = Vec::with_capacity(config.samples);
    while out.len() < config.samples {
        if let Some(h) = draw(&mut rng) {
            out.push(h);
        }
    }
    out
}

fn check_sparse_measures(config: &AuditConfig) -> Outcome {
    let diagrams = sample(config, 0x6, |rng| {
        let (n, sizes) = random_shape(rng, (3, 16));
        let m = rng.gen_range(1..=n);
        random_greechie(rng, n, m, &sizes, 20)
    });
    let mut by_prime = std::collections::BTreeMap::<u64, usize>::new();
    for (i, h) in diagrams.iter().enumerate() {
        let w = find_group_valued_measure(h)
            .map_err(|e| format!("sample {i}: {e}"))?
            .ok_or_else(|| format!("sample {i} has no group measure:\n{h}"))?;
        let ok = verify_group_measure(h, &w).map_err(|e| e.to_string())?;
        ensure(ok, || {
            format!("sample {i}: witness failed verification:\n{h}")
        })?;
        *by_prime.entry(w.p).or_default() += 1;
    }
    Ok(format!(
        "{} diagrams, every witness verified (witness primes {:?})",
        diagrams.len(),
        by_prime
    ))
}

fn check_square_systems(config: &AuditConfig) -> Outcome {
    let diagrams = sample(config, 0x7, |rng| {
        let (n, sizes) = random_shape(rng, (6, 16));
        random_greechie(rng, n, n + 1, &sizes, 20)
    });
    let (mut unimodular, mut with_measure) = (0usize, 0usize);
    for (i, h) in diagrams.iter().enumerate() {
        let det = square_system_determinant(h).map_err(|e| e.to_string())?;
        let analysis = analyze_group_measures(h).map_err(|e| e.to_string())?;
        let det_says_free = det.abs().is_one();
        ensure(analysis.measure_free() == det_says_free, || {
            format!(
                "sample {i}: det = {det} but SNF factors {:?}:\n{h}",
                analysis.snf.invariant_factors
            )
        })?;
        if let Some(w) = &analysis.witness {
            let ok = verify_group_measure(h, w).map_err(|e| e.to_string())?;
            ensure(ok, || format!("sample {i}: witness failed verification"))?;
            with_measure += 1;
        } else {
            unimodular += 1;
        }
    }
    Ok(format!(
        "{} diagrams agree ({unimodular} with |det| = 1, {with_measure} with a measure)",
        diagrams.len()
    ))
}

fn check_bounds() -> Outcome {
    let oa = |n| max_edges_oa(n).map_err(|e| e.to_string());
    ensure(oa(7)? == 7 && fano().edge_count() == 7, || {
        "Fano does not attain the OA bound".into()
    })?;
    ensure(oa(9)? == 12 && ag23().edge_count() == 12, || {
        "AG(2,3) does not attain the OA bound".into()
    })?;
    let omp = max_edges_omp(21).map_err(|e| e.to_string())?;
    ensure(omp == 28 && 22 <= omp, || {
        format!("max_edges_omp(21) = {omp}")
    })?;
    let lhs = (12i128 * 31 - 31).pow(2);
    let rhs = 4 * 31i128.pow(3) - 3 * 31i128.pow(2);
    ensure(oml_bound_satisfied(31, 31) && lhs == rhs, || {
        format!("(31, 31): {lhs} vs {rhs}")
    })?;
    ensure(oml_bound_satisfied(67, 68), || {
        "(67, 68) violates the OML bound".into()
    })?;
    Ok(format!(
        "OA(7) = 7, OA(9) = 12, OMP(21) = 28, OML(31, 31) tight at {lhs}, OML(67, 68) holds"
    ))
}

fn check_degree_audit(config: &AuditConfig) -> Outcome {
    let task = EnumerationTask::new(8, DiagramKind::Omp).uniform(3);
    let en = enumerate_diagrams(&task, &EnumerationOptions::with_workers(config.workers))
        .map_err(|e| e.to_string())?;
    ensure(en.complete, || "enumeration incomplete".into())?;
    for h in &en.diagrams {
        let audit = degree_inequality_audit(h).map_err(|e| e.to_string())?;
        ensure(audit.all_pass(), || format!("audit fails on\n{h}"))?;
    }
    Ok(format!("{} diagrams audited, all pass", en.diagrams.len()))
}

fn check_grid(config: &AuditConfig) -> Outcome {
    let g = merge(&fano(), &ag23()).map_err(|e| e.to_string())?;
    ensure(
        g.grid.vertex_count() == 63 && g.grid.edge_count() == 147,
        || {
            format!(
                "merge has {} / {}",
                g.grid.vertex_count(),
                g.grid.edge_count()
            )
        },
    )?;
    ensure(g.grid.is_greechie().0, || "merge is not Greechie".into())?;
    let constant = GroupMeasureWitness {
        p: 2,
        values: vec![1; 63],
        g: 1,
    };
    ensure(
        verify_group_measure(&g.grid, &constant).map_err(|e| e.to_string())?,
        || "constant mod-2 measure fails on the bare merge".into(),
    )?;
    ensure(
        find_group_valued_measure(&g.grid)
            .map_err(|e| e.to_string())?
            .is_some(),
        || "bare merge reported measure-free".into(),
    )?;
    let (diagonals, source) = match search_diagonal_edges(&g, 4, config.grid_budget) {
        Ok(d) => (d, "search".to_string()),
        Err(e) => (bundled_grid_diagonals(), format!("bundled set ({e})")),
    };
    let h = add_diagonal_edges(&g, &diagonals).map_err(|e| e.to_string())?;
    let analysis = analyze_group_measures(&h).map_err(|e| e.to_string())?;
    ensure(analysis.snf.rank == analysis.unknowns, || {
        format!("rank {} of {}", analysis.snf.rank, analysis.unknowns)
    })?;
    ensure(analysis.snf.is_unimodular(), || {
        "some invariant factor exceeds 1".into()
    })?;
    ensure(find_probability_measure(&h).is_none(), || {
        "combined diagram has a state".into()
    })?;
    Ok(format!(
        "63 vertices / 147 edges; {} diagonals from {source}; {} edges, all invariant factors 1, no state",
        diagonals.len(),
        h.edge_count()
    ))
}

fn check_enumeration(config: &AuditConfig) -> Outcome {
    let mut checked = 0usize;
    for n in 3..=6 {
        let sizes: Vec<usize> = (3..=n).collect();
        let expected = naive::counts(n, &sizes);
        for kind in [DiagramKind::Oa, DiagramKind::Omp, DiagramKind::Oml] {
            let task = EnumerationTask::new(n, kind);
            let en = enumerate_diagrams(&task, &EnumerationOptions::with_workers(config.workers))
                .map_err(|e| e.to_string())?;
            let got: Vec<usize> = en
                .diagrams
                .iter()
                .filter(|h| h.vertex_count() == n)
                .map(Hypergraph::edge_count)
                .collect();
            let mut got_counts = std::collections::BTreeMap::new();
            for m in got {
                *got_counts.entry(m).or_insert(0usize) += 1;
            }
            let want = expected.get(&kind).cloned().unwrap_or_default();
            ensure(got_counts == want, || {
                format!("n = {n}, {kind}: enumerated {got_counts:?}, oracle {want:?}")
            })?;
            checked += want.values().sum::<usize>();
        }
    }
    let task = EnumerationTask::new(7, DiagramKind::Oa);
    let render = |workers| -> Result<String, String> {
        let en = enumerate_diagrams(&task, &EnumerationOptions::with_workers(workers))
            .map_err(|e| e.to_string())?;
        Ok(en
            .diagrams
            .iter()
            .map(|h| h.to_text())
            .collect::<Vec<_>>()
            .join("\n"))
    };
    let single = render(1)?;
    let multi = render(4)?;
    ensure(single == multi, || {
        "1-worker and 4-worker output differ".into()
    })?;
    Ok(format!(
        "{checked} classes for n <= 6 match the oracle; n <= 7 output identical for 1 and 4 workers"
    ))
}

/// Generate-and-filter with brute-force isomorphism classes.
mod naive {
    use std::collections::{BTreeMap, BTreeSet};

    use crate::hypergraph::{DiagramKind, Hypergraph};

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        fn go(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k == cur.len() {
                out.push(cur.clone());
                return;
            }
            for i in k..cur.len() {
                cur.swap(k, i);
                go(k + 1, cur, out);
                cur.swap(k, i);
            }
        }
        let mut out = Vec::new();
        go(0, &mut (0..n).collect(), &mut out);
        out
    }

    fn min_form(edges: &[Vec<usize>], perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
        perms
            .iter()
            .map(|p| {
                let mut f: Vec<Vec<usize>> = edges
                    .iter()
                    .map(|e| {
                        let mut r: Vec<usize> = e.iter().map(|&v| p[v]).collect();
                        r.sort_unstable();
                        r
                    })
                    .collect();
                f.sort();
                f
            })
            .min()
            .expect("at least one permutation")
    }

    struct Walk<'a> {
        n: usize,
        candidates: &'a [Vec<usize>],
        perms: &'a [Vec<usize>],
        classes: BTreeSet<Vec<Vec<usize>>>,
    }

    impl Walk<'_> {
        fn grow(&mut self, start: usize, chosen: &mut Vec<Vec<usize>>) {
            if !chosen.is_empty() {
                let covered: BTreeSet<usize> = chosen.iter().flatten().copied().collect();
                if covered.len() == self.n {
                    let h = Hypergraph::new(
                        self.n,
                        chosen
                            .iter()
                            .map(|e| e.iter().map(|v| v + 1).collect())
                            .collect(),
                    )
                    .expect("covering edge set");
                    if h.is_connected() {
                        self.classes.insert(min_form(chosen, self.perms));
                    }
                }
            }
            for i in start..self.candidates.len() {
                let e = &self.candidates[i];
                if chosen
                    .iter()
                    .all(|f| e.iter().filter(|v| f.contains(v)).count() <= 1)
                {
                    chosen.push(e.clone());
                    self.grow(i + 1, chosen);
                    chosen.pop();
                }
            }
        }
    }

    /// Class counts by edge number for connected diagrams on exactly `n`
    /// vertices with edge sizes from `sizes`.
    pub fn counts(n: usize, sizes: &[usize]) -> BTreeMap<DiagramKind, BTreeMap<usize, usize>> {
        let mut candidates = Vec::new();
        for &k in sizes {
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize == k {
                    candidates.push((0..n).filter(|&i| mask >> i & 1 == 1).collect());
                }
            }
        }
        let perms = permutations(n);
        let mut walk = Walk {
            n,
            candidates: &candidates,
            perms: &perms,
            classes: BTreeSet::new(),
        };
        walk.grow(0, &mut Vec::new());
        let mut out: BTreeMap<DiagramKind, BTreeMap<usize, usize>> = BTreeMap::new();
        for form in walk.classes {
            let h = Hypergraph::new(
                n,
                form.iter()
                    .map(|e| e.iter().map(|v| v + 1).collect())
                    .collect(),
            )
            .expect("class representative");
            let order = h.min_cycle_order();
            for kind in [DiagramKind::Oa, DiagramKind::Omp, DiagramKind::Oml] {
                if kind.admits(order) {
                    *out.entry(kind)
                        .or_default()
                        .entry(h.edge_count())
                        .or_default() += 1;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_names_round_trip() {
        for s in Stage::ALL {
            assert_eq!(s.name().parse::<Stage>().unwrap(), s);
        }
        assert!("nope".parse::<Stage>().is_err());
    }

    #[test]
    fn skipped_stage_is_reported() {
        let config = AuditConfig {
            skip: [Stage::Enumerate].into_iter().collect(),
            ..AuditConfig::default()
        };
        assert_eq!(run_check(5, &config).status, Status::Skipped);
        assert_eq!(run_check(8, &config).status, Status::Pass);
    }

    #[test]
    fn tampered_fixture_fails() {
        let omp = omp21();
        let config = AuditConfig {
            omp21: Hypergraph::from_edges(omp.edges()[1..].to_vec()).unwrap(),
            ..AuditConfig::default()
        };
        let r = run_check(1, &config);
        assert_eq!(r.status, Status::Fail);
        assert!(r.detail.starts_with("determinant"), "{}", r.detail);
    }

    #[test]
    fn naive_counts_small() {
        let c = naive::counts(5, &[3, 4, 5]);
        assert_eq!(c[&DiagramKind::Oa].values().sum::<usize>(), 2);
    }
}
