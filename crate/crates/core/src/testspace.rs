//! Finite test spaces, probability weights, and exact state polytopes.
//!
//! A test space is a finite outcome set covered by non-empty tests; a
//! probability weight assigns rationals in `[0,1]` summing to exactly 1 on
//! every test. Pure states are enumerated by double description, with a
//! catalog of standard small models (classical, square bit, firefly box,
//! grid, graph, approximate n-gon) and the finite-group symmetric
//! construction.

use crate::lp::{feasible_eq_nonneg, LpOutcome};
use crate::perm::{self, GroupError, Perm};
use crate::polytope::{polytope_vertices, ConeError};
use crate::rat::{format_rat, parse_rat, rat, rat_int, Matrix, Rat, Vector};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Default cap on outcomes for the automorphism backtracking search.
pub const AUTOMORPHISM_OUTCOME_GUARD: usize = 24;
/// Cap on enumerated automorphisms before the search refuses.
pub const AUTOMORPHISM_COUNT_GUARD: usize = 100_000;
/// Cap on group closure size in the symmetric construction.
pub const GROUP_CLOSURE_GUARD: usize = 100_000;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("test {0} is empty")]
    EmptyTest(usize),
    #[error("tests {0} and {1} are equal as sets")]
    DuplicateTest(usize, usize),
    #[error("test {test} references outcome index {index} out of range")]
    OutcomeOutOfRange { test: usize, index: usize },
    #[error("outcome {0} belongs to no test")]
    UncoveredOutcome(usize),
    #[error("invalid probability weight: {0}")]
    InvalidWeight(String),
    #[error("the test space admits no probability weights")]
    EmptyStateSpace,
    #[error("size guard exceeded: {what} is {actual}, limit {limit}")]
    SizeGuardExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("K ∩ H differs from the stabilizer of the reference outcome in H")]
    StabilizerMismatch,
    #[error("symmetric construction: {0}")]
    Group(#[from] GroupError),
    #[error("cone computation failed: {0}")]
    Cone(#[from] ConeError),
    #[error("model file: {0}")]
    Format(String),
}

/// A finite test space: outcome labels plus tests as outcome-index sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestSpace {
    outcomes: Vec<String>,
    tests: Vec<Vec<usize>>,
}

impl TestSpace {
    /// Validates the covering condition, non-emptiness, and distinctness.
    /// Tests are stored sorted; their order is preserved.
    pub fn new(outcomes: Vec<String>, tests: Vec<Vec<usize>>) -> Result<Self, ModelError> {
        let n = outcomes.len();
        let mut sorted_tests = Vec::with_capacity(tests.len());
        for (ti, t) in tests.into_iter().enumerate() {
            if t.is_empty() {
                return Err(ModelError::EmptyTest(ti));
            }
            let mut s: Vec<usize> = t;
            s.sort_unstable();
            s.dedup();
            if let Some(&bad) = s.iter().find(|&&i| i >= n) {
                return Err(ModelError::OutcomeOutOfRange {
                    test: ti,
                    index: bad,
                });
            }
            sorted_tests.push(s);
        }
        for i in 0..sorted_tests.len() {
            for j in (i + 1)..sorted_tests.len() {
                if sorted_tests[i] == sorted_tests[j] {
                    return Err(ModelError::DuplicateTest(i, j));
                }
            }
        }
        let mut covered = vec![false; n];
        for t in &sorted_tests {
            for &x in t {
                covered[x] = true;
            }
        }
        if let Some(x) = covered.iter().position(|&c| !c) {
            return Err(ModelError::UncoveredOutcome(x));
        }
        Ok(TestSpace {
            outcomes,
            tests: sorted_tests,
        })
    }

    pub fn outcome_count(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn tests(&self) -> &[Vec<usize>] {
        &self.tests
    }

    pub fn outcome_label(&self, i: usize) -> &str {
        &self.outcomes[i]
    }

    pub fn outcome_index(&self, label: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o == label)
    }

    /// Disjointification: outcomes become `(x, E)` pairs, tests become
    /// disjoint copies. Weights pull back along the forgetful surjection.
    pub fn lift_contextual(&self) -> (TestSpace, Vec<usize>) {
        let mut outcomes = Vec::new();
        let mut forget = Vec::new();
        let mut tests = Vec::new();
        for (ti, t) in self.tests.iter().enumerate() {
            let mut lifted = Vec::new();
            for &x in t {
                lifted.push(outcomes.len());
                outcomes.push(format!("{}@{}", self.outcomes[x], ti));
                forget.push(x);
            }
            tests.push(lifted);
        }
        let ts = TestSpace::new(outcomes, tests).expect("lift is always well-formed");
        (ts, forget)
    }

    /// Pull a weight back along the forgetful surjection of
    /// [`lift_contextual`].
    pub fn pullback_weight(&self, lift: &TestSpace, forget: &[usize], w: &ProbWeight) -> ProbWeight {
        let values = (0..lift.outcome_count())
            .map(|i| w.values()[forget[i]].clone())
            .collect();
        ProbWeight::new(lift, values).expect("pullback of a weight is a weight")
    }

    /// Test-preserving bijections of the outcome set, by backtracking.
    pub fn automorphism_group(&self, max_outcomes: usize) -> Result<AutomorphismGroup, ModelError> {
        let n = self.outcome_count();
        if n > max_outcomes {
            return Err(ModelError::SizeGuardExceeded {
                what: "outcomes for automorphism search",
                actual: n,
                limit: max_outcomes,
            });
        }
        let test_sets: Vec<BTreeSet<usize>> = self
            .tests
            .iter()
            .map(|t| t.iter().copied().collect())
            .collect();
        // Signature: sorted sizes of the tests containing each outcome.
        let signature = |x: usize| -> Vec<usize> {
            let mut sizes: Vec<usize> = test_sets
                .iter()
                .filter(|t| t.contains(&x))
                .map(|t| t.len())
                .collect();
            sizes.sort_unstable();
            sizes
        };
        let sigs: Vec<Vec<usize>> = (0..n).map(signature).collect();

        let mut found: Vec<Perm> = Vec::new();
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.search_autos(0, &mut image, &mut used, &sigs, &test_sets, &mut found)?;
        found.sort();
        let generators = perm::generating_set(&found);
        Ok(AutomorphismGroup {
            order: found.len(),
            generators,
            elements: found,
        })
    }

    fn search_autos(
        &self,
        depth: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        sigs: &[Vec<usize>],
        test_sets: &[BTreeSet<usize>],
        found: &mut Vec<Perm>,
    ) -> Result<(), ModelError> {
        let n = self.outcome_count();
        if depth == n {
            found.push(image.clone());
            if found.len() > AUTOMORPHISM_COUNT_GUARD {
                return Err(ModelError::SizeGuardExceeded {
                    what: "automorphism count",
                    actual: found.len(),
                    limit: AUTOMORPHISM_COUNT_GUARD,
                });
            }
            return Ok(());
        }
        'candidates: for cand in 0..n {
            if used[cand] || sigs[depth] != sigs[cand] {
                continue;
            }
            image[depth] = cand;
            used[cand] = true;
            // Partial consistency: every test whose members are all assigned
            // must map onto a test; partially assigned tests must fit inside
            // one of the right size.
            for t in test_sets {
                let assigned: Vec<usize> = t
                    .iter()
                    .filter(|&&x| x <= depth)
                    .map(|&x| image[x])
                    .collect();
                if assigned.is_empty() {
                    continue;
                }
                let img: BTreeSet<usize> = assigned.iter().copied().collect();
                let fits = test_sets
                    .iter()
                    .any(|u| u.len() == t.len() && img.is_subset(u));
                if !fits {
                    used[cand] = false;
                    image[depth] = usize::MAX;
                    continue 'candidates;
                }
            }
            self.search_autos(depth + 1, image, used, sigs, test_sets, found)?;
            used[cand] = false;
            image[depth] = usize::MAX;
        }
        Ok(())
    }

    /// Greechie-diagram export: one node per outcome, one colored edge path
    /// per test.
    pub fn to_dot(&self) -> String {
        const COLORS: [&str; 8] = [
            "black", "red", "blue", "darkgreen", "orange", "purple", "brown", "cadetblue",
        ];
        let mut s = String::from("graph greechie {\n  node [shape=point, width=0.12];\n");
        for (i, label) in self.outcomes.iter().enumerate() {
            s.push_str(&format!("  o{i} [xlabel=\"{label}\"];\n"));
        }
        for (ti, t) in self.tests.iter().enumerate() {
            let color = COLORS[ti % COLORS.len()];
            for pair in t.windows(2) {
                s.push_str(&format!(
                    "  o{} -- o{} [color={color}, penwidth=1.4];\n",
                    pair[0], pair[1]
                ));
            }
            if t.len() == 1 {
                s.push_str(&format!("  o{} -- o{} [color={color}];\n", t[0], t[0]));
            }
        }
        s.push_str("}\n");
        s
    }
}

/// The automorphism group of a test space: full element list plus a small
/// generating set extracted from it.
#[derive(Debug, Clone)]
pub struct AutomorphismGroup {
    pub order: usize,
    pub generators: Vec<Perm>,
    pub elements: Vec<Perm>,
}

/// An exact probability weight on a test space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProbWeight {
    values: Vector,
}

impl ProbWeight {
    pub fn new(ts: &TestSpace, values: Vector) -> Result<Self, ModelError> {
        if values.len() != ts.outcome_count() {
            return Err(ModelError::InvalidWeight(format!(
                "expected {} values, got {}",
                ts.outcome_count(),
                values.len()
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if *v < Rat::zero() || *v > Rat::one() {
                return Err(ModelError::InvalidWeight(format!(
                    "value at outcome {i} is outside [0,1]: {}",
                    format_rat(v)
                )));
            }
        }
        for (ti, t) in ts.tests().iter().enumerate() {
            let mut sum = Rat::zero();
            for &x in t {
                sum += values[x].clone();
            }
            if !sum.is_one() {
                return Err(ModelError::InvalidWeight(format!(
                    "test {ti} sums to {}, not 1",
                    format_rat(&sum)
                )));
            }
        }
        Ok(ProbWeight { values })
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn value(&self, outcome: usize) -> &Rat {
        &self.values[outcome]
    }

    pub fn is_dispersion_free(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }
}

/// Designated state set of a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateSet {
    /// The full polytope of probability weights.
    Full,
    /// Convex hull of an explicit list of weights; canonicalized to its
    /// extreme members at model construction.
    Generated(Vec<ProbWeight>),
}

/// A test space together with a designated convex state set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    test_space: TestSpace,
    state_set: StateSet,
}

impl Model {
    pub fn new(test_space: TestSpace, state_set: StateSet) -> Result<Self, ModelError> {
        let state_set = match state_set {
            StateSet::Full => StateSet::Full,
            StateSet::Generated(gens) => {
                let mut uniq: Vec<ProbWeight> = Vec::new();
                for g in gens {
                    if !uniq.contains(&g) {
                        uniq.push(g);
                    }
                }
                if uniq.is_empty() {
                    return Err(ModelError::InvalidWeight(
                        "generated state set must be non-empty".into(),
                    ));
                }
                let vecs: Vec<Vector> = uniq.iter().map(|w| w.values.clone()).collect();
                let keep = extreme_points(&vecs);
                StateSet::Generated(keep.into_iter().map(|i| uniq[i].clone()).collect())
            }
        };
        Ok(Model {
            test_space,
            state_set,
        })
    }

    pub fn full(test_space: TestSpace) -> Self {
        Model {
            test_space,
            state_set: StateSet::Full,
        }
    }

    pub fn test_space(&self) -> &TestSpace {
        &self.test_space
    }

    pub fn state_set(&self) -> &StateSet {
        &self.state_set
    }

    /// Exact extreme points of the state set, in lexicographic order.
    pub fn pure_states(&self) -> Result<Vec<ProbWeight>, ModelError> {
        match &self.state_set {
            StateSet::Full => {
                let poly = self.state_polytope()?;
                Ok(poly.vertices)
            }
            StateSet::Generated(gens) => {
                let mut sorted = gens.clone();
                sorted.sort();
                Ok(sorted)
            }
        }
    }

    /// H- and V-representations of the full weight polytope.
    pub fn state_polytope(&self) -> Result<StatePolytope, ModelError> {
        let n = self.test_space.outcome_count();
        let mut ineqs: Vec<(Vector, Rat)> = Vec::with_capacity(n);
        for x in 0..n {
            let mut row = crate::rat::zeros(n);
            row[x] = Rat::one();
            ineqs.push((row, Rat::zero()));
        }
        let mut eqs: Vec<(Vector, Rat)> = Vec::new();
        for t in self.test_space.tests() {
            let mut row = crate::rat::zeros(n);
            for &x in t {
                row[x] = Rat::one();
            }
            eqs.push((row, Rat::one()));
        }
        let vrep = polytope_vertices(n, &ineqs, &eqs)?;
        if vrep.vertices.is_empty() {
            return Err(ModelError::EmptyStateSpace);
        }
        debug_assert!(vrep.recession_rays.is_empty());
        let vertices = vrep
            .vertices
            .into_iter()
            .map(|v| ProbWeight::new(&self.test_space, v).expect("vertex satisfies H-rep"))
            .collect();
        Ok(StatePolytope {
            ambient_dim: n,
            nonnegativity: ineqs,
            test_equalities: eqs,
            vertices,
        })
    }

    /// Unitality, sharpness, outcome separation, and the dispersion-free
    /// vertices, decided exactly over the pure states.
    pub fn state_predicates(&self) -> Result<StatePredicates, ModelError> {
        let vertices = self.pure_states()?;
        let n = self.test_space.outcome_count();
        let mut attain: Vec<usize> = vec![0; n];
        for v in &vertices {
            for x in 0..n {
                if v.value(x).is_one() {
                    attain[x] += 1;
                }
            }
        }
        let unital = attain.iter().all(|&c| c > 0);
        let sharp = unital && attain.iter().all(|&c| c == 1);
        let mut separating = true;
        'outer: for x in 0..n {
            for y in (x + 1)..n {
                if vertices.iter().all(|v| v.value(x) == v.value(y)) {
                    separating = false;
                    break 'outer;
                }
            }
        }
        let dispersion_free = vertices
            .iter()
            .filter(|v| v.is_dispersion_free())
            .cloned()
            .collect();
        Ok(StatePredicates {
            unital,
            sharp,
            separating,
            dispersion_free,
        })
    }

    /// Classification per the partition-space lemma: a unital, separating
    /// set of dispersion-free states makes the space a partition space;
    /// sharpness of that set upgrades it to classical.
    pub fn classify_classicality(&self) -> Result<Classicality, ModelError> {
        let vertices = self.pure_states()?;
        let df: Vec<&ProbWeight> = vertices.iter().filter(|v| v.is_dispersion_free()).collect();
        let n = self.test_space.outcome_count();
        if df.is_empty() {
            return Ok(Classicality::Neither);
        }
        let mut attain = vec![0usize; n];
        for v in &df {
            for x in 0..n {
                if v.value(x).is_one() {
                    attain[x] += 1;
                }
            }
        }
        let unital = attain.iter().all(|&c| c > 0);
        let mut separating = true;
        'outer: for x in 0..n {
            for y in (x + 1)..n {
                if df.iter().all(|v| v.value(x) == v.value(y)) {
                    separating = false;
                    break 'outer;
                }
            }
        }
        if !(unital && separating) {
            return Ok(Classicality::Neither);
        }
        if attain.iter().all(|&c| c == 1) {
            Ok(Classicality::Classical)
        } else {
            Ok(Classicality::Partition)
        }
    }

    /// Search all tests for outcomes `x_1..x_n` with `α_i(x_j) = δ_ij`.
    pub fn distinguishability(
        &self,
        states: &[ProbWeight],
    ) -> Option<(usize, Vec<usize>)> {
        for (ti, t) in self.test_space.tests().iter().enumerate() {
            if t.len() < states.len() {
                continue;
            }
            // Candidate outcomes per state, then distinct representatives.
            let candidates: Vec<Vec<usize>> = states
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    t.iter()
                        .copied()
                        .filter(|&x| {
                            s.value(x).is_one()
                                && states
                                    .iter()
                                    .enumerate()
                                    .all(|(j, o)| j == i || o.value(x).is_zero())
                        })
                        .collect()
                })
                .collect();
            let mut chosen: Vec<usize> = Vec::new();
            if pick_distinct(&candidates, 0, &mut chosen) {
                return Some((ti, chosen));
            }
        }
        None
    }
}

fn pick_distinct(candidates: &[Vec<usize>], depth: usize, chosen: &mut Vec<usize>) -> bool {
    if depth == candidates.len() {
        return true;
    }
    for &c in &candidates[depth] {
        if chosen.contains(&c) {
            continue;
        }
        chosen.push(c);
        if pick_distinct(candidates, depth + 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Indices of the extreme points among a finite point list (exact LP).
fn extreme_points(points: &[Vector]) -> Vec<usize> {
    let mut keep = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let others: Vec<&Vector> = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q)
            .collect();
        if others.is_empty() {
            keep.push(i);
            continue;
        }
        let dim = p.len();
        let mut a = Matrix::zero(dim + 1, others.len());
        for (col, q) in others.iter().enumerate() {
            for row in 0..dim {
                a[(row, col)] = q[row].clone();
            }
            a[(dim, col)] = Rat::one();
        }
        let mut b = p.clone();
        b.push(Rat::one());
        match feasible_eq_nonneg(&a, &b) {
            LpOutcome::Feasible(_) => {}
            LpOutcome::Infeasible(_) => keep.push(i),
        }
    }
    keep
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classicality {
    Classical,
    Partition,
    Neither,
}

#[derive(Debug, Clone)]
pub struct StatePredicates {
    pub unital: bool,
    pub sharp: bool,
    pub separating: bool,
    pub dispersion_free: Vec<ProbWeight>,
}

/// The full weight polytope of a test space: H-representation (per-test
/// equalities plus nonnegativity) and V-representation (exact vertices).
#[derive(Debug, Clone)]
pub struct StatePolytope {
    pub ambient_dim: usize,
    pub nonnegativity: Vec<(Vector, Rat)>,
    pub test_equalities: Vec<(Vector, Rat)>,
    pub vertices: Vec<ProbWeight>,
}

// ---------------------------------------------------------------------------
// Symmetric construction

/// Input data for the finite-group symmetric construction: a group given by
/// permutation generators of a ground set, subgroups `H` and `K`, a
/// reference test `E` inside the ground set, and a reference outcome.
#[derive(Debug, Clone)]
pub struct SymmetricSpec {
    pub group_generators: Vec<Perm>,
    pub h_generators: Vec<Perm>,
    pub k_generators: Vec<Perm>,
    /// Reference test as a subset of the ground set.
    pub reference_test: Vec<usize>,
    /// Reference outcome `x_o ∈ E`.
    pub reference_outcome: usize,
}

/// Outcomes are cosets `G/K`; tests are the orbit of the embedded reference
/// test. Errors with `StabilizerMismatch` unless `K ∩ H` is exactly the
/// stabilizer of the reference outcome in `H`.
pub fn build_symmetric_testspace(spec: &SymmetricSpec) -> Result<TestSpace, ModelError> {
    let group = perm::closure(&spec.group_generators, GROUP_CLOSURE_GUARD)?;
    let h = perm::closure(&spec.h_generators, GROUP_CLOSURE_GUARD)?;
    let k = perm::closure(&spec.k_generators, GROUP_CLOSURE_GUARD)?;
    let group_set: BTreeSet<&Perm> = group.iter().collect();
    if !h.iter().all(|g| group_set.contains(g)) || !k.iter().all(|g| group_set.contains(g)) {
        return Err(ModelError::Format("H and K must be subgroups of G".into()));
    }

    let x_o = spec.reference_outcome;
    if !spec.reference_test.contains(&x_o) {
        return Err(ModelError::Format(
            "reference outcome must lie in the reference test".into(),
        ));
    }
    // H must act transitively on E; record a transporter h_x with h_x(x_o)=x.
    let mut transporter: BTreeMap<usize, Perm> = BTreeMap::new();
    for elem in &h {
        let image = elem[x_o];
        if spec.reference_test.contains(&image) {
            transporter.entry(image).or_insert_with(|| elem.clone());
        }
    }
    if spec
        .reference_test
        .iter()
        .any(|x| !transporter.contains_key(x))
    {
        return Err(ModelError::Format(
            "H does not act transitively on the reference test".into(),
        ));
    }

    // K ∩ H must equal the stabilizer of x_o in H.
    let k_set: BTreeSet<&Perm> = k.iter().collect();
    for elem in &h {
        let stabilizes = elem[x_o] == x_o;
        let in_k = k_set.contains(elem);
        if stabilizes != in_k {
            return Err(ModelError::StabilizerMismatch);
        }
    }

    let cosets = perm::left_cosets(&group, &k);
    // Embed E: j(x) = h_x K.
    let embedded: Vec<usize> = spec
        .reference_test
        .iter()
        .map(|x| perm::coset_index(&cosets, &transporter[x]))
        .collect();

    // Orbit of the embedded test under G, acting by left multiplication.
    let mut tests: BTreeSet<Vec<usize>> = BTreeSet::new();
    for g in &group {
        let mut image: Vec<usize> = embedded
            .iter()
            .map(|&ci| {
                let rep = &cosets[ci][0];
                perm::coset_index(&cosets, &perm::compose(g, rep))
            })
            .collect();
        image.sort_unstable();
        image.dedup();
        tests.insert(image);
    }
    let outcomes = (0..cosets.len()).map(|i| format!("c{i}")).collect();
    TestSpace::new(outcomes, tests.into_iter().collect())
}

// ---------------------------------------------------------------------------
// Catalog

/// A single `n`-outcome test with its full simplex of weights.
pub fn classical(n: usize) -> Model {
    assert!(n >= 1);
    let outcomes = (0..n).map(|i| format!("x{i}")).collect();
    let ts = TestSpace::new(outcomes, vec![(0..n).collect()]).expect("valid");
    Model::full(ts)
}

/// Two disjoint two-outcome tests; the state space is the unit square.
pub fn square_bit() -> Model {
    let ts = TestSpace::new(
        vec!["x".into(), "x'".into(), "y".into(), "y'".into()],
        vec![vec![0, 1], vec![2, 3]],
    )
    .expect("valid");
    Model::full(ts)
}

/// The three-test firefly box: `{a,x,b}, {b,y,c}, {c,z,a}`.
pub fn firefly() -> Model {
    let ts = TestSpace::new(
        vec![
            "a".into(),
            "x".into(),
            "b".into(),
            "y".into(),
            "c".into(),
            "z".into(),
        ],
        vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 0]],
    )
    .expect("valid");
    Model::full(ts)
}

/// The two-triple/three-pair test space of Figure 1(c), which has no states.
pub fn stateless_fig1c() -> TestSpace {
    // Outcomes 0,1,2 on the top row and 3,4,5 on the bottom.
    TestSpace::new(
        (0..6).map(|i| format!("o{i}")).collect(),
        vec![
            vec![0, 1, 2],
            vec![3, 4, 5],
            vec![0, 3],
            vec![1, 4],
            vec![2, 5],
        ],
    )
    .expect("valid")
}

/// Grid test space: rows and columns of the `n x n` array.
pub fn grid(n: usize) -> Model {
    assert!(n >= 2);
    let outcomes = (0..n * n)
        .map(|i| format!("r{}c{}", i / n, i % n))
        .collect();
    let mut tests = Vec::new();
    for r in 0..n {
        tests.push((0..n).map(|c| r * n + c).collect());
    }
    for c in 0..n {
        tests.push((0..n).map(|r| r * n + c).collect());
    }
    Model::full(TestSpace::new(outcomes, tests).expect("valid"))
}

/// Graph test space: graphs of all permutations of `{0..n}`. Guarded to
/// `n <= 5`.
pub fn graph(n: usize) -> Result<Model, ModelError> {
    if !(2..=5).contains(&n) {
        return Err(ModelError::SizeGuardExceeded {
            what: "graph test space size",
            actual: n,
            limit: 5,
        });
    }
    let outcomes = (0..n * n)
        .map(|i| format!("r{}c{}", i / n, i % n))
        .collect();
    let mut tests = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        tests.push((0..n).map(|i| i * n + p[i]).collect());
        if !next_permutation(&mut p) {
            break;
        }
    }
    Ok(Model::full(TestSpace::new(outcomes, tests).expect("valid")))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// A convex `k`-gon model with exact rational vertices on the unit circle,
/// at approximately regular angles (rational points via the tangent
/// half-angle parametrization). For even `k` the test space pairs antipodal
/// effect directions into `k/2` two-outcome tests; for odd `k` each of the
/// `k` directions gets its own complement outcome.
pub fn ngon(k: usize) -> Result<Model, ModelError> {
    if k < 3 {
        return Err(ModelError::Format("ngon needs k >= 3".into()));
    }
    if k > 64 {
        return Err(ModelError::SizeGuardExceeded {
            what: "ngon size",
            actual: k,
            limit: 64,
        });
    }
    let verts: Vec<[Rat; 2]> = (0..k)
        .map(|j| circle_point((2.0 * std::f64::consts::PI) * (j as f64 + 0.5) / k as f64))
        .collect();
    let half = |x: &Rat| -> Rat { (Rat::one() + x) * rat(1, 2) };

    let (outcomes, tests, dirs): (Vec<String>, Vec<Vec<usize>>, Vec<(usize, [Rat; 2], bool)>) =
        if k % 2 == 0 {
            let m = k / 2;
            let mut outcomes = Vec::new();
            let mut tests = Vec::new();
            let mut dirs = Vec::new();
            for i in 0..m {
                let d = circle_point((2.0 * std::f64::consts::PI) * i as f64 / k as f64);
                outcomes.push(format!("e{i}"));
                outcomes.push(format!("e{}", i + m));
                dirs.push((2 * i, d.clone(), false));
                dirs.push((2 * i + 1, d, true));
                tests.push(vec![2 * i, 2 * i + 1]);
            }
            (outcomes, tests, dirs)
        } else {
            let mut outcomes = Vec::new();
            let mut tests = Vec::new();
            let mut dirs = Vec::new();
            for i in 0..k {
                let d = circle_point((2.0 * std::f64::consts::PI) * i as f64 / k as f64);
                outcomes.push(format!("e{i}"));
                outcomes.push(format!("e{i}'"));
                dirs.push((2 * i, d.clone(), false));
                dirs.push((2 * i + 1, d, true));
                tests.push(vec![2 * i, 2 * i + 1]);
            }
            (outcomes, tests, dirs)
        };

    let ts = TestSpace::new(outcomes, tests)?;
    let mut states = Vec::new();
    for v in &verts {
        let mut values = crate::rat::zeros(ts.outcome_count());
        for (idx, d, complement) in &dirs {
            let inner = &v[0] * &d[0] + &v[1] * &d[1];
            let p = half(&inner);
            values[*idx] = if *complement { Rat::one() - &p } else { p };
        }
        states.push(ProbWeight::new(&ts, values)?);
    }
    Model::new(ts, StateSet::Generated(states))
}

/// An exact rational point on the unit circle near the given angle.
fn circle_point(theta: f64) -> [Rat; 2] {
    // tan(theta/2) rationalized; the Weierstrass map keeps it on the circle.
    let t = (theta / 2.0).tan();
    let t = if t.abs() > 1.0e6 {
        return [rat_int(-1), rat_int(0)];
    } else {
        let denom = 10_000i64;
        rat((t * denom as f64).round() as i64, denom)
    };
    let t2 = &t * &t;
    let denom = Rat::one() + &t2;
    let x = (Rat::one() - &t2) / denom.clone();
    let y = (rat_int(2) * &t) / denom;
    [x, y]
}

// ---------------------------------------------------------------------------
// Direct sums of models

/// Disjoint union of test spaces with paired tests `E ⊕ F`; states decompose
/// uniquely as `t·α ⊕ (1−t)·β`.
pub fn direct_sum(a: &Model, b: &Model) -> Result<Model, ModelError> {
    let na = a.test_space().outcome_count();
    let mut outcomes: Vec<String> = a
        .test_space()
        .outcomes()
        .iter()
        .map(|o| format!("L.{o}"))
        .collect();
    outcomes.extend(b.test_space().outcomes().iter().map(|o| format!("R.{o}")));
    let mut tests = Vec::new();
    for ta in a.test_space().tests() {
        for tb in b.test_space().tests() {
            let mut t: Vec<usize> = ta.clone();
            t.extend(tb.iter().map(|&x| x + na));
            tests.push(t);
        }
    }
    let ts = TestSpace::new(outcomes, tests)?;
    let state_set = match (a.state_set(), b.state_set()) {
        (StateSet::Full, StateSet::Full) => StateSet::Full,
        _ => {
            // Pure states of the sum are the embedded pure states of the
            // parts.
            let mut gens = Vec::new();
            for s in a.pure_states()? {
                let mut v = s.values().to_vec();
                v.extend(crate::rat::zeros(b.test_space().outcome_count()));
                gens.push(ProbWeight::new(&ts, v)?);
            }
            for s in b.pure_states()? {
                let mut v = crate::rat::zeros(na);
                v.extend(s.values().to_vec());
                gens.push(ProbWeight::new(&ts, v)?);
            }
            StateSet::Generated(gens)
        }
    };
    Model::new(ts, state_set)
}

// ---------------------------------------------------------------------------
// JSON model files

#[derive(Serialize, Deserialize)]
struct ModelJson {
    outcomes: Vec<String>,
    tests: Vec<Vec<usize>>,
    states: StatesJson,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum StatesJson {
    Keyword(String),
    Generated(Vec<Vec<String>>),
}

impl Model {
    pub fn to_json(&self) -> String {
        let states = match &self.state_set {
            StateSet::Full => StatesJson::Keyword("full".into()),
            StateSet::Generated(gens) => StatesJson::Generated(
                gens.iter()
                    .map(|w| w.values().iter().map(format_rat).collect())
                    .collect(),
            ),
        };
        let j = ModelJson {
            outcomes: self.test_space.outcomes.clone(),
            tests: self.test_space.tests.clone(),
            states,
        };
        serde_json::to_string_pretty(&j).expect("model serializes")
    }

    pub fn from_json(s: &str) -> Result<Model, ModelError> {
        let j: ModelJson =
            serde_json::from_str(s).map_err(|e| ModelError::Format(e.to_string()))?;
        let ts = TestSpace::new(j.outcomes, j.tests)?;
        let state_set = match j.states {
            StatesJson::Keyword(k) if k == "full" => StateSet::Full,
            StatesJson::Keyword(k) => {
                return Err(ModelError::Format(format!(
                    "unknown states keyword {k:?}; expected \"full\" or a list"
                )))
            }
            StatesJson::Generated(rows) => {
                let mut gens = Vec::new();
                for row in rows {
                    let mut vals = Vector::with_capacity(row.len());
                    for cell in row {
                        vals.push(parse_rat(&cell).map_err(ModelError::Format)?);
                    }
                    gens.push(ProbWeight::new(&ts, vals)?);
                }
                StateSet::Generated(gens)
            }
        };
        Model::new(ts, state_set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_bit_has_four_pure_states() {
        let m = square_bit();
        let pure = m.pure_states().unwrap();
        assert_eq!(pure.len(), 4);
        // In coordinates (α(x), α(y)) the vertices are the unit square's.
        let coords: BTreeSet<(Rat, Rat)> = pure
            .iter()
            .map(|w| (w.value(0).clone(), w.value(2).clone()))
            .collect();
        let expect: BTreeSet<(Rat, Rat)> = [
            (rat_int(0), rat_int(0)),
            (rat_int(0), rat_int(1)),
            (rat_int(1), rat_int(0)),
            (rat_int(1), rat_int(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(coords, expect);
    }

    #[test]
    fn firefly_has_five_pure_states_including_epsilon() {
        let m = firefly();
        let pure = m.pure_states().unwrap();
        assert_eq!(pure.len(), 5);
        let ts = m.test_space();
        let a = ts.outcome_index("a").unwrap();
        let b = ts.outcome_index("b").unwrap();
        let c = ts.outcome_index("c").unwrap();
        let x = ts.outcome_index("x").unwrap();
        let eps = pure
            .iter()
            .find(|w| *w.value(a) == rat(1, 2))
            .expect("epsilon vertex present");
        assert_eq!(*eps.value(b), rat(1, 2));
        assert_eq!(*eps.value(c), rat(1, 2));
        assert_eq!(*eps.value(x), rat_int(0));
        assert_eq!(pure.iter().filter(|w| w.is_dispersion_free()).count(), 4);
    }

    #[test]
    fn stateless_space_yields_empty_state_space() {
        let ts = stateless_fig1c();
        let m = Model::full(ts);
        match m.pure_states() {
            Err(ModelError::EmptyStateSpace) => {}
            other => panic!("expected EmptyStateSpace, got {other:?}"),
        }
    }

    #[test]
    fn grid3_pure_states_are_the_six_permutation_matrices() {
        let m = grid(3);
        let pure = m.pure_states().unwrap();
        assert_eq!(pure.len(), 6);
        for w in &pure {
            assert!(w.is_dispersion_free());
        }
    }

    #[test]
    fn graph3_has_six_row_column_states() {
        let m = graph(3).unwrap();
        let pure = m.pure_states().unwrap();
        assert_eq!(pure.len(), 6);
        // Row state: α(i,j) = δ_{i,k}; column state: α(i,j) = δ_{k,j}.
        for w in &pure {
            assert!(w.is_dispersion_free());
        }
    }

    #[test]
    fn classify_catalog() {
        for n in 2..=6 {
            assert_eq!(
                classical(n).classify_classicality().unwrap(),
                Classicality::Classical
            );
        }
        assert_eq!(
            firefly().classify_classicality().unwrap(),
            Classicality::Partition
        );
        // The square bit's test space is semiclassical, hence a partition
        // space; its four dispersion-free vertices are unital and separating
        // but far from sharp.
        assert_eq!(
            square_bit().classify_classicality().unwrap(),
            Classicality::Partition
        );
    }

    #[test]
    fn firefly_predicates() {
        let p = firefly().state_predicates().unwrap();
        assert!(p.unital);
        assert!(!p.sharp);
        assert!(p.separating);
        assert_eq!(p.dispersion_free.len(), 4);
    }

    #[test]
    fn classical_predicates_sharp() {
        let p = classical(3).state_predicates().unwrap();
        assert!(p.unital && p.sharp && p.separating);
    }

    #[test]
    fn grid3_unital() {
        assert!(grid(3).state_predicates().unwrap().unital);
    }

    #[test]
    fn sharp_implies_unital_on_catalog() {
        let models: Vec<Model> = vec![
            classical(2),
            classical(4),
            square_bit(),
            firefly(),
            grid(3),
            graph(3).unwrap(),
        ];
        for m in models {
            let p = m.state_predicates().unwrap();
            if p.sharp {
                assert!(p.unital);
            }
        }
    }

    #[test]
    fn distinguishability_on_square_bit() {
        let m = square_bit();
        let pure = m.pure_states().unwrap();
        // States (1,·) and (0,·) in the x coordinate are distinguished by
        // the test {x, x'}.
        let s1 = pure.iter().find(|w| w.value(0).is_one()).unwrap().clone();
        let s0 = pure
            .iter()
            .find(|w| w.value(0).is_zero() && w.value(2) == s1.value(2))
            .unwrap()
            .clone();
        let (test, outs) = m.distinguishability(&[s1.clone(), s0.clone()]).unwrap();
        assert_eq!(test, 0);
        assert_eq!(outs, vec![0, 1]);
        // Two identical states are never sharply distinguishable.
        assert!(m.distinguishability(&[s1.clone(), s1]).is_none());
    }

    #[test]
    fn grid3_column_states_distinguished_by_column_test() {
        let m = grid(3);
        let pure = m.pure_states().unwrap();
        // Pick three permutation matrices that pairwise differ in column 0:
        // the value-1 cells in column 0 are (σ^{-1}(0), 0).
        let mut picks = Vec::new();
        let mut seen_rows = BTreeSet::new();
        for w in &pure {
            let row = (0..3).find(|&r| w.value(r * 3).is_one()).unwrap();
            if seen_rows.insert(row) {
                picks.push(w.clone());
            }
        }
        assert_eq!(picks.len(), 3);
        assert!(m.distinguishability(&picks).is_some());
    }

    #[test]
    fn lift_contextual_firefly() {
        let m = firefly();
        let (lift, forget) = m.test_space().lift_contextual();
        assert_eq!(lift.outcome_count(), 9);
        assert_eq!(lift.tests().len(), 3);
        // Pullback of every pure state is a valid weight on the lift.
        for w in m.pure_states().unwrap() {
            let _ = m.test_space().pullback_weight(&lift, &forget, &w);
        }
    }

    #[test]
    fn lift_of_single_test_is_isomorphic() {
        let m = classical(3);
        let (lift, _) = m.test_space().lift_contextual();
        assert_eq!(lift.outcome_count(), 3);
        assert_eq!(lift.tests().len(), 1);
    }

    #[test]
    fn lift_square_bit() {
        let (lift, _) = square_bit().test_space().lift_contextual();
        assert_eq!(lift.outcome_count(), 4);
        assert_eq!(lift.tests().len(), 2);
    }

    #[test]
    fn automorphisms_classical() {
        let m = classical(4);
        let g = m.test_space().automorphism_group(24).unwrap();
        assert_eq!(g.order, 24);
    }

    #[test]
    fn automorphisms_square_bit() {
        let g = square_bit().test_space().automorphism_group(24).unwrap();
        assert_eq!(g.order, 8);
    }

    #[test]
    fn automorphisms_firefly_never_swap_chambers_with_no_light() {
        let m = firefly();
        let ts = m.test_space();
        let g = ts.automorphism_group(24).unwrap();
        assert_eq!(g.order, 6);
        // a, b, c live in two tests each; x, y, z in one.
        let chambers: BTreeSet<usize> = ["a", "b", "c"]
            .iter()
            .map(|l| ts.outcome_index(l).unwrap())
            .collect();
        for auto in &g.elements {
            for &ch in &chambers {
                assert!(chambers.contains(&auto[ch]));
            }
        }
    }

    #[test]
    fn automorphism_guard() {
        let m = classical(30);
        match m.test_space().automorphism_group(24) {
            Err(ModelError::SizeGuardExceeded { .. }) => {}
            other => panic!("expected guard error, got {other:?}"),
        }
    }

    #[test]
    fn generated_states_canonicalized_to_extreme() {
        let ts = square_bit().test_space().clone();
        let v = |a: i64, b: i64| -> ProbWeight {
            ProbWeight::new(
                &ts,
                vec![rat_int(a), rat_int(1 - a), rat_int(b), rat_int(1 - b)],
            )
            .unwrap()
        };
        let center = ProbWeight::new(&ts, vec![rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)]).unwrap();
        let m = Model::new(
            ts.clone(),
            StateSet::Generated(vec![v(0, 0), v(0, 1), v(1, 0), v(1, 1), center, v(0, 0)]),
        )
        .unwrap();
        match m.state_set() {
            StateSet::Generated(gens) => assert_eq!(gens.len(), 4),
            _ => panic!(),
        }
    }

    #[test]
    fn probweight_rejects_bad_sums() {
        let ts = square_bit().test_space().clone();
        assert!(ProbWeight::new(&ts, vec![rat(1, 2); 4]).is_ok());
        assert!(ProbWeight::new(&ts, vec![rat(1, 3); 4]).is_err());
        assert!(
            ProbWeight::new(&ts, vec![rat_int(2), rat_int(-1), rat(1, 2), rat(1, 2)]).is_err()
        );
    }

    #[test]
    fn json_roundtrip() {
        for m in [square_bit(), firefly(), classical(3), ngon(6).unwrap()] {
            let s = m.to_json();
            let back = Model::from_json(&s).unwrap();
            assert_eq!(m, back);
        }
        assert!(Model::from_json("{\"outcomes\":[],\"tests\":[],\"states\":\"oops\"}").is_err());
    }

    #[test]
    fn ngon_models() {
        for k in [3usize, 4, 5, 6, 8] {
            let m = ngon(k).unwrap();
            let pure = m.pure_states().unwrap();
            assert_eq!(pure.len(), k, "k = {k}");
        }
    }

    #[test]
    fn symmetric_construction_semiclassical_when_k_is_stabilizer() {
        // G = S3 x S3 acting on two 3-element blocks; H = first factor;
        // E = the first block; K = H_{x_o}.
        let g_gens = vec![
            vec![1, 0, 2, 3, 4, 5],
            vec![1, 2, 0, 3, 4, 5],
            vec![0, 1, 2, 4, 3, 5],
            vec![0, 1, 2, 4, 5, 3],
        ];
        let h_gens = vec![vec![1, 0, 2, 3, 4, 5], vec![1, 2, 0, 3, 4, 5]];
        let k_gens = vec![vec![0, 2, 1, 3, 4, 5]]; // stabilizer of 0 in H
        let spec = SymmetricSpec {
            group_generators: g_gens,
            h_generators: h_gens,
            k_generators: k_gens,
            reference_test: vec![0, 1, 2],
            reference_outcome: 0,
        };
        let ts = build_symmetric_testspace(&spec).unwrap();
        // |G/K| = 36/2 = 18 outcomes in 6 disjoint 3-outcome tests.
        assert_eq!(ts.outcome_count(), 18);
        assert_eq!(ts.tests().len(), 6);
        let mut seen = BTreeSet::new();
        for t in ts.tests() {
            assert_eq!(t.len(), 3);
            for &x in t {
                assert!(seen.insert(x), "tests are disjoint");
            }
        }
    }

    #[test]
    fn symmetric_construction_stabilizer_mismatch() {
        let g_gens = vec![vec![1, 0, 2], vec![1, 2, 0]];
        let spec = SymmetricSpec {
            group_generators: g_gens.clone(),
            h_generators: g_gens.clone(),
            k_generators: g_gens, // K = G, but H_{x_o} is smaller
            reference_test: vec![0, 1, 2],
            reference_outcome: 0,
        };
        match build_symmetric_testspace(&spec) {
            Err(ModelError::StabilizerMismatch) => {}
            other => panic!("expected StabilizerMismatch, got {other:?}"),
        }
    }

    #[test]
    fn direct_sum_of_trivial_models_is_classical_bit() {
        let a = classical(1);
        let b = classical(1);
        let s = direct_sum(&a, &b).unwrap();
        assert_eq!(s.pure_states().unwrap().len(), 2);
        assert_eq!(
            s.classify_classicality().unwrap(),
            Classicality::Classical
        );
    }

    #[test]
    fn direct_sum_of_classical_is_classical_union() {
        let s = direct_sum(&classical(2), &classical(3)).unwrap();
        let pure = s.pure_states().unwrap();
        assert_eq!(pure.len(), 5);
    }

    #[test]
    fn dot_export_mentions_every_outcome() {
        let dot = firefly().test_space().to_dot();
        for i in 0..6 {
            assert!(dot.contains(&format!("o{i}")));
        }
        assert!(dot.starts_with("graph greechie {"));
    }
}
