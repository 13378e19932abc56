//! Measurement and mixing entropies, conditional and mutual information,
//! strong subadditivity, the Holevo bound, the data processing inequality,
//! and the information-causality protocol simulator.
//!
//! Probabilities stay exact until the final logarithms; entropies are in
//! bits. Joint entropies of composites minimize over product tests, which is
//! the composite test structure this crate materializes.

use crate::composite::{CompositeError, CompositeState, TripartiteState};
use crate::ordspace::{LinearHull, Process};
use crate::rat::{dot, rat, rat_to_f64, Matrix, Rat, Vector};
use crate::testspace::{Model, ProbWeight};
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InfoError {
    #[error("size guard exceeded: {what} is {actual}, limit {limit}")]
    SizeGuardExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("unsupported protocol size: N = {0}, m = {1}")]
    UnsupportedSize(usize, usize),
    #[error("the process must be unital to push a state table through it")]
    NotUnital,
    #[error(transparent)]
    Composite(#[from] CompositeError),
}

/// Vertex-count guard for decomposition enumeration.
pub const MIXING_VERTEX_GUARD: usize = 16;

/// Shannon entropy in bits of an exact distribution (zeros contribute 0).
pub fn shannon_bits(probs: &[Rat]) -> f64 {
    let mut h = 0.0;
    for p in probs {
        if p.is_zero() {
            continue;
        }
        let x = rat_to_f64(p);
        h -= x * x.log2();
    }
    h
}

#[derive(Debug, Clone)]
pub struct EntropyReport {
    pub bits: f64,
    /// Index of the achieving test, for measurement entropy.
    pub achieving_test: Option<usize>,
    /// Achieving decomposition `(vertex index, weight)`, for mixing entropy.
    pub achieving_decomposition: Option<Vec<(usize, Rat)>>,
}

/// Exact minimum over tests of the Shannon entropy of `α` restricted to the
/// test; ties break toward the lower test index.
pub fn measurement_entropy(model: &Model, alpha: &ProbWeight) -> EntropyReport {
    let mut best: Option<(f64, usize)> = None;
    for (ti, t) in model.test_space().tests().iter().enumerate() {
        let probs: Vec<Rat> = t.iter().map(|&x| alpha.value(x).clone()).collect();
        let h = shannon_bits(&probs);
        if best.as_ref().map_or(true, |(bh, _)| h < *bh) {
            best = Some((h, ti));
        }
    }
    let (bits, ti) = best.expect("test spaces are non-empty");
    EntropyReport {
        bits,
        achieving_test: Some(ti),
        achieving_decomposition: None,
    }
}

/// All convex decompositions of `target` (normalized, in hull coordinates)
/// into pure states with affinely independent support and strictly positive
/// weights. On the normalization hyperplane affine independence coincides
/// with linear independence, so supports range over independent subsets of
/// size at most `dim`.
pub fn enumerate_decompositions(hull: &LinearHull, target: &Vector) -> Vec<Vec<(usize, Rat)>> {
    let verts = hull.state_vectors();
    let n = verts.len();
    let dim = hull.dim();
    let mut result = Vec::new();
    let mut subset: Vec<usize> = Vec::new();
    enumerate_rec(verts, n, dim, target, 0, &mut subset, &mut result);
    result
}

fn enumerate_rec(
    verts: &[Vector],
    n: usize,
    max_size: usize,
    target: &Vector,
    start: usize,
    subset: &mut Vec<usize>,
    out: &mut Vec<Vec<(usize, Rat)>>,
) {
    if !subset.is_empty() {
        let rows: Vec<Vector> = subset.iter().map(|&i| verts[i].clone()).collect();
        let m = Matrix::from_rows(rows);
        if m.rank() < subset.len() {
            return; // dependent support; no extension can restore independence
        }
        if let Some(t) = m.transpose().solve(target) {
            if t.iter().all(|w| *w > Rat::zero()) {
                out.push(subset.iter().cloned().zip(t).collect());
            }
        }
    }
    if subset.len() == max_size {
        return;
    }
    for i in start..n {
        subset.push(i);
        enumerate_rec(verts, n, max_size, target, i + 1, subset, out);
        subset.pop();
    }
}

/// Exact global minimum of the Shannon entropy over convex decompositions
/// of `alpha` into pure states. The minimum of a concave function over the
/// decomposition polytope is attained at an extreme point, whose support is
/// affinely independent, so enumerating those supports is exhaustive.
pub fn mixing_entropy(hull: &LinearHull, alpha: &ProbWeight) -> Result<EntropyReport, InfoError> {
    let n = hull.state_vectors().len();
    if n > MIXING_VERTEX_GUARD {
        return Err(InfoError::SizeGuardExceeded {
            what: "pure states for decomposition enumeration",
            actual: n,
            limit: MIXING_VERTEX_GUARD,
        });
    }
    let target = hull
        .state_coords(alpha)
        .expect("state lies in the span of the pure states");
    let decomps = enumerate_decompositions(hull, &target);
    let best = decomps
        .into_par_iter()
        .map(|d| {
            let probs: Vec<Rat> = d.iter().map(|(_, w)| w.clone()).collect();
            (shannon_bits(&probs), d)
        })
        .reduce_with(|x, y| {
            if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) {
                y
            } else {
                x
            }
        });
    let (bits, decomp) = best.expect("every state in the polytope has a decomposition");
    Ok(EntropyReport {
        bits,
        achieving_test: None,
        achieving_decomposition: Some(decomp),
    })
}

// ---------------------------------------------------------------------------
// Joint entropies

/// Measurement entropy of a bipartite state over product tests.
pub fn composite_measurement_entropy(omega: &CompositeState) -> EntropyReport {
    let tests_a = omega.hull_a().model().test_space().tests();
    let tests_b = omega.hull_b().model().test_space().tests();
    let mut best: Option<(f64, usize)> = None;
    for (i, ta) in tests_a.iter().enumerate() {
        for (j, tb) in tests_b.iter().enumerate() {
            let mut probs = Vec::with_capacity(ta.len() * tb.len());
            for &x in ta {
                for &y in tb {
                    probs.push(omega.entry(x, y).clone());
                }
            }
            let h = shannon_bits(&probs);
            let idx = i * tests_b.len() + j;
            if best.as_ref().map_or(true, |(bh, _)| h < *bh) {
                best = Some((h, idx));
            }
        }
    }
    let (bits, idx) = best.expect("non-empty test spaces");
    EntropyReport {
        bits,
        achieving_test: Some(idx),
        achieving_decomposition: None,
    }
}

#[derive(Debug, Clone)]
pub struct JointEntropies {
    pub h_a: f64,
    pub h_b: f64,
    pub h_ab: f64,
    pub h_a_given_b: f64,
    pub mutual: f64,
}

pub fn joint_entropies(omega: &CompositeState) -> JointEntropies {
    let h_a = measurement_entropy(omega.hull_a().model(), &omega.marginal_a()).bits;
    let h_b = measurement_entropy(omega.hull_b().model(), &omega.marginal_b()).bits;
    let h_ab = composite_measurement_entropy(omega).bits;
    debug_assert!(h_ab <= h_a + h_b + 1e-9, "subadditivity");
    JointEntropies {
        h_a,
        h_b,
        h_ab,
        h_a_given_b: h_ab - h_b,
        mutual: h_a + h_b - h_ab,
    }
}

/// Measurement entropy of a tripartite table over triple product tests.
pub fn tripartite_measurement_entropy(t: &TripartiteState) -> f64 {
    let tests: [&[Vec<usize>]; 3] = [
        t.hull(0).model().test_space().tests(),
        t.hull(1).model().test_space().tests(),
        t.hull(2).model().test_space().tests(),
    ];
    let mut best = f64::INFINITY;
    for ta in tests[0] {
        for tb in tests[1] {
            for tc in tests[2] {
                let mut probs = Vec::new();
                for &x in ta {
                    for &y in tb {
                        for &z in tc {
                            probs.push(t.at(x, y, z).clone());
                        }
                    }
                }
                let h = shannon_bits(&probs);
                if h < best {
                    best = h;
                }
            }
        }
    }
    best
}

#[derive(Debug, Clone)]
pub struct TriEntropies {
    pub h: [f64; 3],
    pub h_ab: f64,
    pub h_ac: f64,
    pub h_bc: f64,
    pub h_abc: f64,
}

pub fn tripartite_entropies(t: &TripartiteState) -> Result<TriEntropies, CompositeError> {
    let m_ab = t.marginal_pair(0, 1)?;
    let m_ac = t.marginal_pair(0, 2)?;
    let m_bc = t.marginal_pair(1, 2)?;
    let h_a = measurement_entropy(t.hull(0).model(), &m_ab.marginal_a()).bits;
    let h_b = measurement_entropy(t.hull(1).model(), &m_ab.marginal_b()).bits;
    let h_c = measurement_entropy(t.hull(2).model(), &m_ac.marginal_b()).bits;
    Ok(TriEntropies {
        h: [h_a, h_b, h_c],
        h_ab: composite_measurement_entropy(&m_ab).bits,
        h_ac: composite_measurement_entropy(&m_ac).bits,
        h_bc: composite_measurement_entropy(&m_bc).bits,
        h_abc: tripartite_measurement_entropy(t),
    })
}

/// The four equivalent strong-subadditivity forms, each reported with its
/// slack (`>= -tol` means the form holds).
#[derive(Debug, Clone)]
pub struct SsaReport {
    /// `I(A:BC) - I(A:B)`.
    pub form_a: f64,
    /// `H(A|B) - H(A|BC)`.
    pub form_b: f64,
    /// `H(AB) + H(BC) - H(B) - H(ABC)`.
    pub form_c: f64,
    /// `I(A:B|C)`.
    pub form_d: f64,
    pub holds: bool,
    /// All four forms agree in sign within tolerance (they are algebraically
    /// equal).
    pub consistent: bool,
}

pub const SSA_TOL: f64 = 1e-12;

pub fn ssa_check(t: &TripartiteState) -> Result<SsaReport, CompositeError> {
    let e = tripartite_entropies(t)?;
    let [h_a, h_b, h_c] = e.h;
    let i_a_bc = h_a + e.h_bc - e.h_abc;
    let i_a_b = h_a + h_b - e.h_ab;
    let form_a = i_a_bc - i_a_b;
    let form_b = (e.h_ab - h_b) - (e.h_abc - e.h_bc);
    let form_c = e.h_ab + e.h_bc - h_b - e.h_abc;
    // I(A:B|C) = H(A|C) + H(B|C) - H(AB|C)
    //          = H(AC) + H(BC) - H(ABC) - H(C).
    let form_d = e.h_ac + e.h_bc - e.h_abc - h_c;
    // (a), (b), (c) are the same quantity up to rearrangement; (d) differs
    // by conditioning on C instead of B, so consistency means equal signs.
    let forms = [form_a, form_b, form_c, form_d];
    let holds = forms.iter().all(|f| *f >= -SSA_TOL);
    let all_fail = forms.iter().all(|f| *f < SSA_TOL);
    let consistent =
        (form_a - form_b).abs() < SSA_TOL && (form_a - form_c).abs() < SSA_TOL && (holds || all_fail);
    Ok(SsaReport {
        form_a,
        form_b,
        form_c,
        form_d,
        holds,
        consistent,
    })
}

// ---------------------------------------------------------------------------
// Holevo bound

#[derive(Debug, Clone)]
pub struct HolevoReport {
    pub chi: f64,
    /// `I(E : F)` for the supplied observable.
    pub mutual: f64,
    pub bound_holds: bool,
}

/// `χ = H(ρ) − Σ_x p_x H(β_x)` for the ensemble, and the classical mutual
/// information between the preparation register and a measurement `F` on
/// `B`, which the Holevo bound says cannot exceed `χ`.
pub fn holevo(
    hull_b: &LinearHull,
    ensemble: &[(Rat, ProbWeight)],
    observable: &[Vector],
) -> HolevoReport {
    let total: Rat = ensemble.iter().map(|(p, _)| p.clone()).sum();
    assert!(total.is_one(), "ensemble weights must sum to 1");
    // ρ = Σ p_x β_x as a weight.
    let n = hull_b.model().test_space().outcome_count();
    let mut rho_vals = crate::rat::zeros(n);
    for (p, beta) in ensemble {
        for i in 0..n {
            rho_vals[i] += p * beta.value(i);
        }
    }
    let rho = ProbWeight::new(hull_b.model().test_space(), rho_vals).expect("mixture is a weight");
    let h_rho = measurement_entropy(hull_b.model(), &rho).bits;
    let mut chi = h_rho;
    for (p, beta) in ensemble {
        chi -= rat_to_f64(p) * measurement_entropy(hull_b.model(), beta).bits;
    }
    // Classical I(E:F) from the exact joint table p(x, j) = p_x β_x(F_j).
    let mut joint: Vec<Vec<Rat>> = Vec::new();
    for (p, beta) in ensemble {
        let coords = hull_b.state_coords(beta).expect("state in span");
        joint.push(
            observable
                .iter()
                .map(|f| p * dot(f, &coords))
                .collect(),
        );
    }
    let mutual = classical_mutual_information(&joint);
    HolevoReport {
        chi,
        mutual,
        bound_holds: mutual <= chi + 1e-9,
    }
}

/// Mutual information in bits of an exact joint table.
pub fn classical_mutual_information(joint: &[Vec<Rat>]) -> f64 {
    let rows = joint.len();
    let cols = joint.first().map_or(0, |r| r.len());
    let mut px = vec![Rat::zero(); rows];
    let mut py = vec![Rat::zero(); cols];
    for (i, row) in joint.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            px[i] += v;
            py[j] += v;
        }
    }
    let hx = shannon_bits(&px);
    let hy = shannon_bits(&py);
    let flat: Vec<Rat> = joint.iter().flatten().cloned().collect();
    let hxy = shannon_bits(&flat);
    hx + hy - hxy
}

// ---------------------------------------------------------------------------
// Data processing inequality

#[derive(Debug, Clone)]
pub struct DpiReport {
    pub mutual_before: f64,
    pub mutual_after: f64,
    pub holds: bool,
}

/// Apply a unital process to the `B` side of a bipartite state
/// (Heisenberg: `τ : E(C) → E(B)` pulls target effects back) and compare
/// mutual informations.
pub fn dpi_check(
    omega: &CompositeState,
    process: &Process,
    target_hull: &LinearHull,
) -> Result<DpiReport, InfoError> {
    if !process.is_unital() {
        return Err(InfoError::NotUnital);
    }
    let na = omega.hull_a().model().test_space().outcome_count();
    let nc = target_hull.model().test_space().outcome_count();
    let mut table = Matrix::zero(na, nc);
    for x in 0..na {
        for z in 0..nc {
            let pulled = process.apply_effect(target_hull.outcome_vector(z));
            table[(x, z)] = omega.evaluate(omega.hull_a().outcome_vector(x), &pulled);
        }
    }
    let processed = CompositeState::new(omega.hull_a(), target_hull, table)?;
    let before = joint_entropies(omega).mutual;
    let after = joint_entropies(&processed).mutual;
    Ok(DpiReport {
        mutual_before: before,
        mutual_after: after,
        holds: after <= before + 1e-9,
    })
}

// ---------------------------------------------------------------------------
// Information causality

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcResource {
    /// Deterministic classical strategies, exhaustively maximized.
    Classical,
    /// Van Dam's nested PR-box protocol.
    PrBoxes,
}

#[derive(Debug, Clone)]
pub struct ICRun {
    pub n: usize,
    pub m: usize,
    pub resource: IcResource,
    /// `I(e_k : b_k | G = k)` per k, in bits.
    pub per_k_bits: Vec<f64>,
    pub lhs_bits: f64,
    /// Probability that Bob's guess is correct, per k.
    pub correct_probability: Vec<Rat>,
}

/// Run the information-causality protocol analytically (exact joint
/// distributions, uniform inputs). Supported: PR boxes with `N ∈ {2, 4}`,
/// `m = 1` (one and three nested boxes); classical with `N = 2`, `m = 1`
/// (exhaustive over deterministic strategies).
pub fn run_information_causality(
    n: usize,
    m: usize,
    resource: IcResource,
) -> Result<ICRun, InfoError> {
    match (resource, n, m) {
        (IcResource::PrBoxes, 2, 1) | (IcResource::PrBoxes, 4, 1) => Ok(run_van_dam(n)),
        (IcResource::Classical, 2, 1) => Ok(run_classical_exhaustive()),
        _ => Err(InfoError::UnsupportedSize(n, m)),
    }
}

/// Van Dam protocol with 1 (N=2) or 3 (N=4) PR boxes; the joint
/// distribution of `(e_k, b_k)` is tallied exactly over all inputs and box
/// outputs.
fn run_van_dam(n: usize) -> ICRun {
    let boxes = if n == 2 { 1 } else { 3 };
    let weight = rat(1, 1i64 << (n + boxes));
    // joint[k][(e_k, guess)] accumulated exactly.
    let mut joint = vec![[[Rat::zero(), Rat::zero()], [Rat::zero(), Rat::zero()]]; n];
    for e_bits in 0..(1u32 << n) {
        let e = |i: usize| -> u8 { ((e_bits >> i) & 1) as u8 };
        for a_bits in 0..(1u32 << boxes) {
            let a_out = |b: usize| -> u8 { ((a_bits >> b) & 1) as u8 };
            // PR box: Alice's output A is free (uniform), Bob's output is
            // B = A ⊕ (alice_input · bob_input).
            for k in 0..n {
                let guess = if n == 2 {
                    let alice_in = e(0) ^ e(1);
                    let message = e(0) ^ a_out(0);
                    let bob_in = k as u8;
                    let b_out = a_out(0) ^ (alice_in & bob_in);
                    message ^ b_out
                } else {
                    // Pairs (e0,e1) via box0, (e2,e3) via box1, nested via box2.
                    let a01 = e(0) ^ e(1);
                    let a23 = e(2) ^ e(3);
                    let ehat01 = e(0) ^ a_out(0);
                    let ehat23 = e(2) ^ a_out(1);
                    let a_top = ehat01 ^ ehat23;
                    let message = ehat01 ^ a_out(2);
                    let k1 = (k >> 1) as u8; // which pair
                    let k0 = (k & 1) as u8; // which bit within the pair
                    let b_top = a_out(2) ^ (a_top & k1);
                    let ehat_pair = message ^ b_top; // = ehat01 or ehat23
                    let (pair_box, pair_in) = if k1 == 0 { (0, a01) } else { (1, a23) };
                    let b_pair = a_out(pair_box) ^ (pair_in & k0);
                    ehat_pair ^ b_pair
                };
                joint[k][e(k) as usize][guess as usize] += weight.clone();
            }
        }
    }
    finish_ic_run(n, IcResource::PrBoxes, joint)
}

/// Exhaustive maximization over deterministic strategies at N = 2, m = 1:
/// Alice sends any boolean function of her two bits; Bob guesses any
/// boolean function of (message, k).
fn run_classical_exhaustive() -> ICRun {
    let n = 2;
    let weight = rat(1, 4);
    let mut best: Option<(f64, Vec<[[Rat; 2]; 2]>)> = None;
    for alice_fn in 0..16u32 {
        let msg = |e0: u8, e1: u8| -> u8 { ((alice_fn >> (2 * e1 + e0)) & 1) as u8 };
        for bob_fn in 0..16u32 {
            // Bob: guess(f, k) packed as 4 bits indexed by 2k + f.
            let guess = |f: u8, k: usize| -> u8 { ((bob_fn >> (2 * k + f as usize)) & 1) as u8 };
            let mut joint = vec![[[Rat::zero(), Rat::zero()], [Rat::zero(), Rat::zero()]]; n];
            for e_bits in 0..4u32 {
                let e0 = (e_bits & 1) as u8;
                let e1 = ((e_bits >> 1) & 1) as u8;
                let f = msg(e0, e1);
                for k in 0..n {
                    let ek = if k == 0 { e0 } else { e1 };
                    joint[k][ek as usize][guess(f, k) as usize] += weight.clone();
                }
            }
            let lhs: f64 = joint
                .iter()
                .map(|j| {
                    classical_mutual_information(&[
                        vec![j[0][0].clone(), j[0][1].clone()],
                        vec![j[1][0].clone(), j[1][1].clone()],
                    ])
                })
                .sum();
            if best.as_ref().map_or(true, |(b, _)| lhs > *b) {
                best = Some((lhs, joint));
            }
        }
    }
    let (_, joint) = best.expect("non-empty strategy space");
    finish_ic_run(n, IcResource::Classical, joint)
}

fn finish_ic_run(n: usize, resource: IcResource, joint: Vec<[[Rat; 2]; 2]>) -> ICRun {
    let per_k_bits: Vec<f64> = joint
        .iter()
        .map(|j| {
            classical_mutual_information(&[
                vec![j[0][0].clone(), j[0][1].clone()],
                vec![j[1][0].clone(), j[1][1].clone()],
            ])
        })
        .collect();
    let correct_probability: Vec<Rat> = joint
        .iter()
        .map(|j| j[0][0].clone() + j[1][1].clone())
        .collect();
    ICRun {
        n,
        m: 1,
        resource,
        lhs_bits: per_k_bits.iter().sum(),
        per_k_bits,
        correct_probability,
    }
}

// ---------------------------------------------------------------------------
// Monoentropicity

#[derive(Debug, Clone)]
pub struct MonoReport {
    /// Largest `|H - S|` over the sampled states.
    pub max_discrepancy: f64,
    /// A state achieving it, as a weight.
    pub witness: Option<ProbWeight>,
    pub samples: usize,
}

/// Compare measurement and mixing entropy on every vertex and on a rational
/// grid of mixtures of up to three vertices.
pub fn monoentropic_check(hull: &LinearHull, steps: u32) -> Result<MonoReport, InfoError> {
    let model = hull.model().clone();
    let verts = hull.vertices().to_vec();
    let n = verts.len();
    let mut samples: Vec<ProbWeight> = verts.clone();
    let denom = steps as i64;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..=(j + 1).min(n) {
                let triple = if k < n { Some(k) } else { None };
                for a in 0..=denom {
                    for b in 0..=(denom - a) {
                        let c = denom - a - b;
                        if triple.is_none() && c != 0 {
                            continue;
                        }
                        let mut vals =
                            crate::rat::zeros(model.test_space().outcome_count());
                        let parts: Vec<(usize, i64)> = match triple {
                            Some(t) => vec![(i, a), (j, b), (t, c)],
                            None => vec![(i, a), (j, b)],
                        };
                        for (vi, w) in parts {
                            if w == 0 {
                                continue;
                            }
                            let scale = rat(w, denom);
                            for (o, val) in verts[vi].values().iter().enumerate() {
                                vals[o] += val * &scale;
                            }
                        }
                        if let Ok(w) = ProbWeight::new(model.test_space(), vals) {
                            samples.push(w);
                        }
                    }
                }
            }
        }
    }
    samples.sort();
    samples.dedup();
    let mut max_discrepancy = 0.0;
    let mut witness = None;
    let count = samples.len();
    for w in samples {
        let h = measurement_entropy(&model, &w).bits;
        let s = mixing_entropy(hull, &w)?.bits;
        let d = (h - s).abs();
        if d > max_discrepancy {
            max_discrepancy = d;
            witness = Some(w);
        }
    }
    Ok(MonoReport {
        max_discrepancy,
        witness,
        samples: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composite::{pr_box, uniform_correlator, TripartiteState};
    use crate::rat::rat_int;
    use crate::testspace::{classical, square_bit};

    fn sq_hull() -> LinearHull {
        LinearHull::build(&square_bit()).unwrap()
    }

    fn cl_hull(n: usize) -> LinearHull {
        LinearHull::build(&classical(n)).unwrap()
    }

    fn sq_state(x: Rat, y: Rat) -> ProbWeight {
        let m = square_bit();
        ProbWeight::new(
            m.test_space(),
            vec![x.clone(), Rat::one() - x, y.clone(), Rat::one() - y],
        )
        .unwrap()
    }

    #[test]
    fn classical_uniform_entropy() {
        let m = classical(3);
        let w = ProbWeight::new(m.test_space(), vec![rat(1, 3); 3]).unwrap();
        let h = measurement_entropy(&m, &w);
        assert!((h.bits - 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn square_bit_measurement_entropy_takes_min() {
        let m = square_bit();
        let w = sq_state(rat(3, 4), rat(1, 2));
        let h = measurement_entropy(&m, &w);
        let h2_34 = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
        assert!((h.bits - h2_34).abs() < 1e-12);
        assert_eq!(h.achieving_test, Some(0));
    }

    #[test]
    fn dispersion_free_states_have_zero_entropy() {
        let m = square_bit();
        for w in m.pure_states().unwrap() {
            assert_eq!(measurement_entropy(&m, &w).bits, 0.0);
        }
    }

    #[test]
    fn mixing_entropy_pure_state_zero() {
        let h = sq_hull();
        let w = h.vertices()[0].clone();
        let rep = mixing_entropy(&h, &w).unwrap();
        assert_eq!(rep.bits, 0.0);
    }

    #[test]
    fn mixing_entropy_square_center_one_bit() {
        let h = sq_hull();
        let w = sq_state(rat(1, 2), rat(1, 2));
        let rep = mixing_entropy(&h, &w).unwrap();
        assert!((rep.bits - 1.0).abs() < 1e-12);
        let d = rep.achieving_decomposition.unwrap();
        assert_eq!(d.len(), 2); // an opposite-vertex pair
    }

    #[test]
    fn mixing_entropy_classical_equals_shannon() {
        let h = cl_hull(3);
        let w = ProbWeight::new(
            h.model().test_space(),
            vec![rat(1, 2), rat(1, 3), rat(1, 6)],
        )
        .unwrap();
        let s = mixing_entropy(&h, &w).unwrap();
        let hh = measurement_entropy(h.model(), &w);
        assert!((s.bits - hh.bits).abs() < 1e-12);
    }

    #[test]
    fn square_bit_not_monoentropic() {
        let h = sq_hull();
        let w = sq_state(rat(3, 4), rat(1, 2));
        let hm = measurement_entropy(h.model(), &w).bits;
        let s = mixing_entropy(&h, &w).unwrap().bits;
        // H ≈ 0.811, S = 1.5 via the (1/4, 1/2, 1/4) support.
        assert!(s > hm + 0.5);
        assert!((s - 1.5).abs() < 1e-12);
    }

    #[test]
    fn monoentropic_check_classical_vs_square() {
        let hc = cl_hull(3);
        let rep = monoentropic_check(&hc, 4).unwrap();
        assert!(rep.max_discrepancy < 1e-12);
        let hs = sq_hull();
        let rep2 = monoentropic_check(&hs, 4).unwrap();
        assert!(rep2.max_discrepancy > 0.5);
    }

    #[test]
    fn mixing_entropy_invariant_under_test_space_change() {
        // The contextual lift has a different test space but the same state
        // geometry; mixing entropies agree on corresponding states.
        let m = square_bit();
        let h = LinearHull::build(&m).unwrap();
        let (lift, forget) = m.test_space().lift_contextual();
        let lifted_states: Vec<ProbWeight> = m
            .pure_states()
            .unwrap()
            .iter()
            .map(|w| m.test_space().pullback_weight(&lift, &forget, w))
            .collect();
        let lifted_model = crate::testspace::Model::new(
            lift.clone(),
            crate::testspace::StateSet::Generated(lifted_states),
        )
        .unwrap();
        let hl = LinearHull::build(&lifted_model).unwrap();
        let w = sq_state(rat(3, 4), rat(1, 2));
        let wl = m.test_space().pullback_weight(&lift, &forget, &w);
        let s1 = mixing_entropy(&h, &w).unwrap().bits;
        let s2 = mixing_entropy(&hl, &wl).unwrap().bits;
        assert!((s1 - s2).abs() < 1e-12);
    }

    #[test]
    fn product_state_zero_mutual_information() {
        let h = sq_hull();
        let pure = h.vertices().to_vec();
        let mix = {
            // An interior product state: mix two vertices on each side.
            let w = sq_state(rat(1, 2), rat(1, 4));
            let v = sq_state(rat(1, 3), rat(2, 3));
            CompositeState::product(&h, &h, &w, &v).unwrap()
        };
        let je = joint_entropies(&mix);
        assert!(je.mutual.abs() < 1e-12);
        let _ = pure;
    }

    #[test]
    fn perfectly_correlated_bits() {
        let h = cl_hull(2);
        let u = uniform_correlator(&h).unwrap();
        let je = joint_entropies(&u);
        assert!((je.h_ab - 1.0).abs() < 1e-12);
        assert!((je.mutual - 1.0).abs() < 1e-12);
        assert!((je.h_a_given_b - 0.0).abs() < 1e-12);
    }

    #[test]
    fn pr_box_entropies() {
        let h = sq_hull();
        let pr = pr_box(&h, &h).unwrap();
        let je = joint_entropies(&pr);
        // Uniform marginals: 1 bit each; joint over any product test: 1 bit.
        assert!((je.h_a - 1.0).abs() < 1e-12);
        assert!((je.h_b - 1.0).abs() < 1e-12);
        assert!((je.h_ab - 1.0).abs() < 1e-12);
        assert!((je.mutual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ssa_classical_holds() {
        // Tripartite classical: three perfectly correlated bits.
        let h = cl_hull(2);
        let mut table = vec![Rat::zero(); 8];
        table[0] = rat(1, 2);
        table[7] = rat(1, 2);
        let t = TripartiteState::new([h.clone(), h.clone(), h.clone()], table).unwrap();
        let rep = ssa_check(&t).unwrap();
        assert!(rep.holds);
        assert!(rep.consistent);
    }

    #[test]
    fn ssa_product_zeroes() {
        let h = cl_hull(2);
        let mut table = Vec::new();
        for _ in 0..8 {
            table.push(rat(1, 8));
        }
        let t = TripartiteState::new([h.clone(), h.clone(), h.clone()], table).unwrap();
        let rep = ssa_check(&t).unwrap();
        assert!(rep.holds);
        assert!(rep.form_a.abs() < 1e-9 && rep.form_d.abs() < 1e-9);
    }

    #[test]
    fn conditional_mutual_information_identity() {
        // For perfectly correlated classical A and B (copies), with any C:
        // I(A:B|C) = H(A|C).
        let h = cl_hull(2);
        let mut table = vec![Rat::zero(); 8];
        // A = B uniform, C independent uniform.
        for a in 0..2usize {
            for c in 0..2usize {
                table[a * 4 + a * 2 + c] = rat(1, 4);
            }
        }
        let t = TripartiteState::new([h.clone(), h.clone(), h.clone()], table).unwrap();
        let e = tripartite_entropies(&t).unwrap();
        let i_ab_c = e.h_ac + e.h_bc - e.h_abc - e.h[2];
        let h_a_c = e.h_ac - e.h[2];
        assert!((i_ab_c - h_a_c).abs() < 1e-12);
        // H(AC) = H(BC) = H(ABC) for perfectly correlated copies.
        assert!((e.h_ac - e.h_abc).abs() < 1e-12);
        assert!((e.h_bc - e.h_abc).abs() < 1e-12);
    }

    #[test]
    fn holevo_identical_states_zero() {
        let h = sq_hull();
        let w = sq_state(rat(1, 2), rat(1, 2));
        let ensemble = vec![(rat(1, 2), w.clone()), (rat(1, 2), w)];
        let obs = vec![
            h.outcome_vector(0).clone(),
            h.outcome_vector(1).clone(),
        ];
        let rep = holevo(&h, &ensemble, &obs);
        assert!(rep.chi.abs() < 1e-12);
        assert!(rep.mutual.abs() < 1e-12);
        assert!(rep.bound_holds);
    }

    #[test]
    fn holevo_opposite_square_vertices() {
        let h = sq_hull();
        let v00 = sq_state(rat_int(0), rat_int(0));
        let v11 = sq_state(rat_int(1), rat_int(1));
        let ensemble = vec![(rat(1, 2), v00), (rat(1, 2), v11)];
        // χ = H(center) − 0 = 1 bit.
        let obs = vec![h.outcome_vector(0).clone(), h.outcome_vector(1).clone()];
        let rep = holevo(&h, &ensemble, &obs);
        assert!((rep.chi - 1.0).abs() < 1e-12);
        assert!(rep.bound_holds);
        // All vertex observables obey the bound.
        for a in h.effect_polytope_vertices().unwrap() {
            let complement: Vector = h
                .unit()
                .iter()
                .zip(a)
                .map(|(u, x)| u - x)
                .collect();
            let rep = holevo(
                &h,
                &[
                    (rat(1, 2), sq_state(rat_int(0), rat_int(0))),
                    (rat(1, 2), sq_state(rat_int(1), rat_int(1))),
                ],
                &[a.clone(), complement],
            );
            assert!(rep.bound_holds);
        }
    }

    #[test]
    fn dpi_identity_equality() {
        let h = cl_hull(2);
        let u = uniform_correlator(&h).unwrap();
        let idp = Process::new(&h, &h, Matrix::identity(2)).unwrap();
        let rep = dpi_check(&u, &idp, &h).unwrap();
        assert!((rep.mutual_before - rep.mutual_after).abs() < 1e-12);
        assert!(rep.holds);
    }

    #[test]
    fn dpi_noisy_channel_decreases() {
        let h = cl_hull(2);
        let u = uniform_correlator(&h).unwrap();
        // Binary symmetric channel with flip probability 1/4 (Heisenberg
        // action on effects is the same stochastic matrix, transposed).
        let mut m = Matrix::zero(2, 2);
        m[(0, 0)] = rat(3, 4);
        m[(0, 1)] = rat(1, 4);
        m[(1, 0)] = rat(1, 4);
        m[(1, 1)] = rat(3, 4);
        let p = Process::new(&h, &h, m).unwrap();
        let rep = dpi_check(&u, &p, &h).unwrap();
        assert!(rep.holds);
        assert!(rep.mutual_after < rep.mutual_before - 0.1);
    }

    #[test]
    fn ic_pr_boxes_n2() {
        let run = run_information_causality(2, 1, IcResource::PrBoxes).unwrap();
        assert!((run.lhs_bits - 2.0).abs() < 1e-12);
        for p in &run.correct_probability {
            assert!(p.is_one());
        }
    }

    #[test]
    fn ic_pr_boxes_n4() {
        let run = run_information_causality(4, 1, IcResource::PrBoxes).unwrap();
        assert!((run.lhs_bits - 4.0).abs() < 1e-12);
        for p in &run.correct_probability {
            assert!(p.is_one());
        }
    }

    #[test]
    fn ic_classical_bounded_by_m() {
        let run = run_information_causality(2, 1, IcResource::Classical).unwrap();
        assert!(run.lhs_bits <= 1.0 + 1e-9);
    }

    #[test]
    fn ic_unsupported_size() {
        assert!(matches!(
            run_information_causality(3, 1, IcResource::PrBoxes),
            Err(InfoError::UnsupportedSize(3, 1))
        ));
    }

    #[test]
    fn decomposition_enumeration_guard() {
        let h = LinearHull::build(&crate::testspace::ngon(64).unwrap()).unwrap();
        let w = h.vertices()[0].clone();
        assert!(matches!(
            mixing_entropy(&h, &w),
            Err(InfoError::SizeGuardExceeded { .. })
        ));
    }
}
