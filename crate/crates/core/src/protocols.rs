//! Cloning and broadcasting decisions, remote evaluation, teleportation and
//! entanglement-swapping verification, compact-closure checks, and steering.
//!
//! Everything is exact: feasibility questions go through the rational
//! simplex, with Farkas certificates on the infeasible side.

use crate::composite::{CompositeError, CompositeState, TensorSpace};
use crate::lp::{Cmp, Feasibility, Witness};
use crate::ordspace::{LinearHull, OrdError};
use crate::rat::{dot, vec_scale, Matrix, Rat, Vector};
use crate::testspace::ProbWeight;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("size guard exceeded: {what} would need {actual} variables, limit {limit}")]
    SizeGuardExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("ensemble does not sum to the marginal")]
    EnsembleMismatch,
    #[error("not an observable: effects do not sum to the unit")]
    NotAnObservable,
    #[error(transparent)]
    Composite(#[from] CompositeError),
    #[error(transparent)]
    Ord(#[from] OrdError),
}

/// Cap on free variables in the broadcast feasibility program.
pub const BROADCAST_VAR_GUARD: usize = 4000;

// ---------------------------------------------------------------------------
// Bipartite effects

/// An effect on a bipartite system, stored as the matrix `F` of its bilinear
/// form: `f(α ⊗ β) = αᵀ F β` in hull coordinates. Validity is checked
/// against product states: `0 <= f <= u ⊗ u` on the separable cone.
#[derive(Debug, Clone)]
pub struct BipartiteEffect {
    pub matrix: Matrix,
}

impl BipartiteEffect {
    pub fn new(
        hull_a: &LinearHull,
        hull_b: &LinearHull,
        matrix: Matrix,
    ) -> Result<Self, ProtocolError> {
        if matrix.rows != hull_a.dim() || matrix.cols != hull_b.dim() {
            return Err(ProtocolError::DimensionMismatch(format!(
                "effect matrix is {}x{}, hulls are {}, {}",
                matrix.rows,
                matrix.cols,
                hull_a.dim(),
                hull_b.dim()
            )));
        }
        for sa in hull_a.state_vectors() {
            let row = matrix.transpose().mul_vec(sa);
            for sb in hull_b.state_vectors() {
                let v = dot(&row, sb);
                if v < Rat::zero() || v > Rat::one() {
                    return Err(ProtocolError::DimensionMismatch(format!(
                        "not an effect: value {} on a product state",
                        crate::rat::format_rat(&v)
                    )));
                }
            }
        }
        Ok(BipartiteEffect { matrix })
    }

    pub fn pure(a: &[Rat], b: &[Rat]) -> Self {
        let mut m = Matrix::zero(a.len(), b.len());
        for i in 0..a.len() {
            for j in 0..b.len() {
                m[(i, j)] = &a[i] * &b[j];
            }
        }
        BipartiteEffect { matrix: m }
    }

    /// Co-conditioning map `f̂ : V(A) → E(B)`, `α ↦ Fᵀ α`.
    pub fn co_conditioning(&self) -> Matrix {
        self.matrix.transpose()
    }

    pub fn evaluate(&self, alpha: &[Rat], beta: &[Rat]) -> Rat {
        dot(alpha, &self.matrix.mul_vec(beta))
    }
}

// ---------------------------------------------------------------------------
// Cloning

/// A cloning map built from a distinguishing observable:
/// `φ(β) = Σ_i β(a_i) α_i ⊗ α_i`.
#[derive(Debug, Clone)]
pub struct CloningMap {
    pub observable: Vec<Vector>,
    pub state_coords: Vec<Vector>,
    /// Matrix of `φ : V(A) → V(A) ⊗ V(A)`.
    pub matrix: Matrix,
}

impl CloningMap {
    pub fn build(hull: &LinearHull, states: &[Vector], observable: &[Vector]) -> Self {
        let d = hull.dim();
        let mut m = Matrix::zero(d * d, d);
        for (sigma, a) in states.iter().zip(observable) {
            let pair = crate::composite::kron(sigma, sigma);
            for r in 0..d * d {
                for c in 0..d {
                    let add = &pair[r] * &a[c];
                    m[(r, c)] += add;
                }
            }
        }
        CloningMap {
            observable: observable.to_vec(),
            state_coords: states.to_vec(),
            matrix: m,
        }
    }

    pub fn apply(&self, state: &[Rat]) -> Vector {
        self.matrix.mul_vec(state)
    }

    /// `φ(α_i) = α_i ⊗ α_i`, exactly, for every input state.
    pub fn clones_exactly(&self) -> bool {
        self.state_coords
            .iter()
            .all(|s| self.apply(s) == crate::composite::kron(s, s))
    }
}

/// Exact feasibility: effects `a_i >= 0` with `Σ a_i = u` and
/// `α_i(a_j) = δ_ij`. `None` certifies that the states are not jointly
/// distinguishable (and hence not jointly clonable).
pub fn find_distinguishing_observable(
    hull: &LinearHull,
    states: &[Vector],
) -> Result<Option<Vec<Vector>>, ProtocolError> {
    let d = hull.dim();
    let n = states.len();
    let facets = hull.effect_space().cone.facets().map_err(OrdError::from)?;
    let mut prob = Feasibility::new(n * d);
    // Positivity of each effect.
    for i in 0..n {
        for f in facets {
            let mut row = crate::rat::zeros(n * d);
            row[i * d..(i + 1) * d].clone_from_slice(f);
            prob.ge(row, Rat::zero());
        }
    }
    // Σ_i a_i = u.
    for c in 0..d {
        let mut row = crate::rat::zeros(n * d);
        for i in 0..n {
            row[i * d + c] = Rat::one();
        }
        prob.eq(row, hull.unit()[c].clone());
    }
    // α_i(a_j) = δ_ij.
    for (i, sigma) in states.iter().enumerate() {
        for j in 0..n {
            let mut row = crate::rat::zeros(n * d);
            row[j * d..(j + 1) * d].clone_from_slice(sigma);
            prob.eq(row, if i == j { Rat::one() } else { Rat::zero() });
        }
    }
    match prob.solve() {
        Witness::Point(x) => {
            let effects = (0..n).map(|i| x[i * d..(i + 1) * d].to_vec()).collect();
            Ok(Some(effects))
        }
        Witness::Certificate(_) => Ok(None),
    }
}

/// Decision of the broadcasting feasibility program.
#[derive(Debug, Clone)]
pub enum Broadcast {
    /// Matrix of a positive map `V(A) → V(A⊗A)` with both marginals of
    /// `φ(ρ)` equal to `ρ` for every requested state.
    Yes(Matrix),
    /// Farkas certificate over the program rows.
    No(Vector),
}

/// Decide joint broadcastability of the given normalized states against the
/// most permissive composite (all non-signaling states). Infeasibility there
/// implies infeasibility in every non-signaling composite.
pub fn broadcastable(
    hull: &LinearHull,
    states: &[Vector],
    tensor: &TensorSpace,
) -> Result<Broadcast, ProtocolError> {
    let d = hull.dim();
    let dd = d * d;
    let nvars = dd * d;
    if nvars > BROADCAST_VAR_GUARD {
        return Err(ProtocolError::SizeGuardExceeded {
            what: "broadcast map variables",
            actual: nvars,
            limit: BROADCAST_VAR_GUARD,
        });
    }
    let uu = crate::composite::kron(hull.unit(), hull.unit());
    let mut prob = Feasibility::new(nvars);
    // Positivity: for every vertex σ of Ω(A) and every pure-tensor effect
    // generator g of the composite, <g, Φσ> >= 0. Φ is row-major: entry
    // (r, c) is variable r*d + c, and (Φσ)_r = Σ_c Φ_rc σ_c.
    for sigma in hull.state_vectors() {
        for g in tensor.effect_cone.generators() {
            let mut row = crate::rat::zeros(nvars);
            for r in 0..dd {
                for c in 0..d {
                    row[r * d + c] = &g[r] * &sigma[c];
                }
            }
            prob.ge(row, Rat::zero());
        }
        // Sub-normalization on every pure state: <u⊗u, Φσ> <= 1.
        let mut row = crate::rat::zeros(nvars);
        for r in 0..dd {
            for c in 0..d {
                row[r * d + c] = &uu[r] * &sigma[c];
            }
        }
        prob.le(row, Rat::one());
    }
    // Marginal conditions for each broadcast state ρ: for every coordinate
    // functional e_i, <e_i ⊗ u, Φρ> = ρ_i and <u ⊗ e_i, Φρ> = ρ_i.
    for rho in states {
        for i in 0..d {
            let mut e = crate::rat::zeros(d);
            e[i] = Rat::one();
            for g in [
                crate::composite::kron(&e, hull.unit()),
                crate::composite::kron(hull.unit(), &e),
            ] {
                let mut row = crate::rat::zeros(nvars);
                for r in 0..dd {
                    for c in 0..d {
                        row[r * d + c] = &g[r] * &rho[c];
                    }
                }
                prob.eq(row, rho[i].clone());
            }
        }
    }
    match prob.solve() {
        Witness::Point(x) => {
            let mut m = Matrix::zero(dd, d);
            for r in 0..dd {
                for c in 0..d {
                    m[(r, c)] = x[r * d + c].clone();
                }
            }
            Ok(Broadcast::Yes(m))
        }
        Witness::Certificate(y) => Ok(Broadcast::No(y)),
    }
}

// ---------------------------------------------------------------------------
// Remote evaluation and teleportation

/// Output of a remote-evaluation step: the induced process `τ = ω̂ ∘ f̂`,
/// the un-normalized output state, and Alice's success probability.
#[derive(Debug, Clone)]
pub struct RemoteEval {
    /// Matrix of `τ : V(A_o) → V(B)`.
    pub tau: Matrix,
    /// `τ(α)`, un-normalized.
    pub output: Vector,
    /// `u_B(τ(α))`: the marginal probability of Alice obtaining `f`.
    pub success_probability: Rat,
}

/// `τ = ω̂ ∘ f̂` applied to a state of `A_o`; the composition order is fixed
/// by the maps' domains (`f̂ : V(A_o) → E(A_1)`, `ω̂ : E(A_1) → V(B)`).
pub fn remote_evaluate(
    alpha: &[Rat],
    omega: &CompositeState,
    f: &BipartiteEffect,
) -> Result<RemoteEval, ProtocolError> {
    if f.matrix.cols != omega.hull_a().dim() {
        return Err(ProtocolError::DimensionMismatch(format!(
            "effect acts on dimension {}, state conditions on {}",
            f.matrix.cols,
            omega.hull_a().dim()
        )));
    }
    if alpha.len() != f.matrix.rows {
        return Err(ProtocolError::DimensionMismatch(format!(
            "input state has dimension {}, effect expects {}",
            alpha.len(),
            f.matrix.rows
        )));
    }
    let omega_hat = omega.conditioning_map().matrix; // E(A_1) -> V(B)
    let f_hat = f.co_conditioning(); // V(A_o) -> E(A_1)
    let tau = omega_hat.mul_mat(&f_hat);
    let output = tau.mul_vec(alpha);
    let success_probability = dot(omega.hull_b().unit(), &output);
    Ok(RemoteEval {
        tau,
        output,
        success_probability,
    })
}

/// Classification of a teleportation protocol `(f, ω)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TeleportClass {
    /// `τ` is not an order-isomorphism.
    Fail,
    /// `τ` is an order-isomorphism; after the correction the input is
    /// recovered with probability `1/c`.
    Conclusive,
    /// Conclusive with `c = 1`: the conditional state is a reversible image
    /// of the input, so the correction is certain.
    Strong,
}

#[derive(Debug, Clone)]
pub struct TeleportReport {
    pub class: TeleportClass,
    /// Reversibility constant of the normalized conditional map (1 for
    /// strong protocols).
    pub constant: Rat,
    /// Maximal probability of Alice's outcome over pure inputs.
    pub success_scale: Rat,
}

/// Verify a conclusive/strong teleportation protocol.
pub fn verify_teleportation(
    omega: &CompositeState,
    f: &BipartiteEffect,
) -> Result<TeleportReport, ProtocolError> {
    if f.matrix.rows != omega.hull_b().dim() {
        return Err(ProtocolError::DimensionMismatch(
            "teleportation needs dim A_o = dim B".into(),
        ));
    }
    // The teleported system A_o shares B's hull (the protocol maps
    // V(A_o) → V(B)).
    let source = omega.hull_b();
    let target = omega.hull_b();
    let tau = omega
        .conditioning_map()
        .matrix
        .mul_mat(&f.co_conditioning());
    let Some(inv) = tau.inverse() else {
        return Ok(TeleportReport {
            class: TeleportClass::Fail,
            constant: Rat::zero(),
            success_scale: Rat::zero(),
        });
    };
    let fwd_ok = source
        .state_cone()
        .generators()
        .iter()
        .all(|g| target.state_cone().contains(&tau.mul_vec(g)));
    let bwd_ok = target
        .state_cone()
        .generators()
        .iter()
        .all(|g| source.state_cone().contains(&inv.mul_vec(g)));
    if !fwd_ok || !bwd_ok {
        return Ok(TeleportReport {
            class: TeleportClass::Fail,
            constant: Rat::zero(),
            success_scale: Rat::zero(),
        });
    }
    // Success probability of Alice's outcome per input vertex; the scale s
    // is its maximum. The reversal constant of the normalized map τ/s is
    // c = s · max_β u_A(τ⁻¹ β) over target vertices.
    let mut s = Rat::zero();
    for v in source.state_vectors() {
        let p = dot(target.unit(), &tau.mul_vec(v));
        if p > s {
            s = p;
        }
    }
    let mut c_raw = Rat::zero();
    for v in target.state_vectors() {
        let q = dot(source.unit(), &inv.mul_vec(v));
        if q > c_raw {
            c_raw = q;
        }
    }
    let c = &c_raw * &s;
    // Strong additionally needs the outcome probability constant across
    // inputs: τᵀ u_B = s · u_{A_o}.
    let pullback = tau.transpose().mul_vec(target.unit());
    let constant_prob = pullback == vec_scale(source.unit(), &s);
    let class = if c.is_one() && constant_prob {
        TeleportClass::Strong
    } else {
        TeleportClass::Conclusive
    };
    Ok(TeleportReport {
        class,
        constant: c,
        success_scale: s,
    })
}

/// Deterministic teleportation: every `f_i` must give a conclusive
/// protocol, the family must be an observable, and the classically-corrected
/// outputs must recombine to a multiple of the identity.
#[derive(Debug, Clone)]
pub struct DeterministicReport {
    pub per_outcome: Vec<TeleportReport>,
    /// The scalar `s` with `Σ_i correction_i ∘ τ_i = s · id`, when the sum
    /// is proportional to the identity (the overall success probability).
    pub reconstruction_scalar: Option<Rat>,
}

pub fn verify_deterministic_teleportation(
    omega: &CompositeState,
    effects: &[BipartiteEffect],
) -> Result<DeterministicReport, ProtocolError> {
    let d_o = effects
        .first()
        .map(|f| f.matrix.rows)
        .ok_or(ProtocolError::NotAnObservable)?;
    let d_1 = omega.hull_a().dim();
    // Observable: Σ f_i = u ⊗ u as bilinear forms. In hull coordinates both
    // units are all-ones, so the matrix of u ⊗ u is all-ones.
    let mut sum = Matrix::zero(d_o, d_1);
    for f in effects {
        for i in 0..d_o {
            for j in 0..d_1 {
                let v = f.matrix[(i, j)].clone();
                sum[(i, j)] += v;
            }
        }
    }
    for i in 0..d_o {
        for j in 0..d_1 {
            if !sum[(i, j)].is_one() {
                return Err(ProtocolError::NotAnObservable);
            }
        }
    }
    let mut reports = Vec::new();
    let mut total: Option<Matrix> = None;
    for f in effects {
        let rep = verify_teleportation(omega, f)?;
        if rep.class == TeleportClass::Fail {
            return Ok(DeterministicReport {
                per_outcome: vec![rep],
                reconstruction_scalar: None,
            });
        }
        let tau = omega
            .conditioning_map()
            .matrix
            .mul_mat(&f.co_conditioning());
        let inv = tau.inverse().expect("conclusive implies invertible");
        // Bob's correction is the process (s_i/c_i) τ_i⁻¹; the round trip
        // contributes (s_i/c_i) id.
        let scale = &rep.success_scale / &rep.constant;
        let contribution = {
            let composed = inv.mul_mat(&tau);
            let mut m = Matrix::zero(composed.rows, composed.cols);
            for i in 0..composed.rows {
                for j in 0..composed.cols {
                    m[(i, j)] = &composed[(i, j)] * &scale;
                }
            }
            m
        };
        total = Some(match total {
            None => contribution,
            Some(t) => {
                let mut m = Matrix::zero(t.rows, t.cols);
                for i in 0..t.rows {
                    for j in 0..t.cols {
                        m[(i, j)] = &t[(i, j)] + &contribution[(i, j)];
                    }
                }
                m
            }
        });
        reports.push(rep);
    }
    let total = total.expect("non-empty observable");
    let scalar = proportional_to_identity(&total);
    Ok(DeterministicReport {
        per_outcome: reports,
        reconstruction_scalar: scalar,
    })
}

// ---------------------------------------------------------------------------
// Entanglement swapping

/// Conditional bipartite state of `(C, B)` given the effect `f` on
/// `(A_o, A_1)`, for `μ` on `(C, A_o)` and `ω` on `(A_1, B)`: the chain
/// `ω̂ ∘ f̂ ∘ μ̂*` as a bilinear matrix, with its outcome probability.
#[derive(Debug, Clone)]
pub struct SwapResult {
    pub conditional: CompositeState,
    pub probability: Rat,
}

pub fn entanglement_swap(
    mu: &CompositeState,
    omega: &CompositeState,
    f: &BipartiteEffect,
) -> Result<SwapResult, ProtocolError> {
    if f.matrix.rows != mu.hull_b().dim() || f.matrix.cols != omega.hull_a().dim() {
        return Err(ProtocolError::DimensionMismatch(
            "effect must act on (A_o, A_1)".into(),
        ));
    }
    // M_σ = M_μ F M_ω : bilinear form on E(C) × E(B).
    let m = mu.bilinear().mul_mat(&f.matrix).mul_mat(omega.bilinear());
    let p = dot(mu.hull_a().unit(), &m.mul_vec(omega.hull_b().unit()));
    if p.is_zero() {
        return Err(ProtocolError::DimensionMismatch(
            "conditioning on a probability-zero outcome".into(),
        ));
    }
    let inv = p.recip();
    let mut scaled = Matrix::zero(m.rows, m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            scaled[(i, j)] = &m[(i, j)] * &inv;
        }
    }
    let conditional = CompositeState::from_bilinear(mu.hull_a(), omega.hull_b(), &scaled)?;
    Ok(SwapResult {
        conditional,
        probability: p,
    })
}

// ---------------------------------------------------------------------------
// Compact closure

#[derive(Debug, Clone)]
pub struct SnakeReport {
    /// Both snake equations hold exactly.
    pub holds: bool,
    /// When the two composites are proportional to the identity with a
    /// common factor, that factor; exact closure means scalar = 1.
    pub scalar: Option<Rat>,
}

/// Check the two snake equations for a state `η` on `(B, A)` and an effect
/// `ε` on `(A, B)` at the level of the induced maps: `η̂ ∘ ε̂ = id_{V(A)}`
/// and `ε̂ ∘ η̂ = id_{E(B)}`.
pub fn check_compact_closure_pair(eta: &CompositeState, eps: &BipartiteEffect) -> SnakeReport {
    // ε̂ : V(A) → E(B) is Fᵀ·; η̂ : E(B) → V(A) is Mᵀ·.
    let first = eta.bilinear().transpose().mul_mat(&eps.matrix.transpose());
    let second = eps.matrix.transpose().mul_mat(&eta.bilinear().transpose());
    let lambda = proportional_to_identity(&first);
    let mu = proportional_to_identity(&second);
    match (lambda, mu) {
        (Some(l), Some(m)) if l == m => SnakeReport {
            holds: l.is_one(),
            scalar: Some(l),
        },
        _ => SnakeReport {
            holds: false,
            scalar: None,
        },
    }
}

fn proportional_to_identity(m: &Matrix) -> Option<Rat> {
    if m.rows != m.cols || m.rows == 0 {
        return None;
    }
    let lambda = m[(0, 0)].clone();
    for i in 0..m.rows {
        for j in 0..m.cols {
            let want = if i == j { lambda.clone() } else { Rat::zero() };
            if m[(i, j)] != want {
                return None;
            }
        }
    }
    Some(lambda)
}

// ---------------------------------------------------------------------------
// Steering

/// Exact feasibility for an observable realizing a given ensemble through
/// the conditioning map: effects `a_i >= 0`, `Σ a_i = u_A`, `ω̂(a_i) = β_i`.
pub fn steering_check(
    omega: &CompositeState,
    ensemble: &[Vector],
) -> Result<Option<Vec<Vector>>, ProtocolError> {
    let hull_a = omega.hull_a();
    let hull_b = omega.hull_b();
    let d = hull_a.dim();
    let db = hull_b.dim();
    // Pre: the ensemble sums to ω₂ exactly.
    let mut sum = crate::rat::zeros(db);
    for beta in ensemble {
        if beta.len() != db {
            return Err(ProtocolError::DimensionMismatch(
                "ensemble member has wrong dimension".into(),
            ));
        }
        sum = crate::rat::vec_add(&sum, beta);
    }
    let marg = hull_b
        .state_coords(&omega.marginal_b())
        .expect("marginal lies in the state span");
    if sum != marg {
        return Err(ProtocolError::EnsembleMismatch);
    }

    let omega_hat = omega.conditioning_map().matrix; // db x d
    let n = ensemble.len();
    let facets = hull_a.effect_space().cone.facets().map_err(OrdError::from)?;
    let mut prob = Feasibility::new(n * d);
    for i in 0..n {
        for f in facets {
            let mut row = crate::rat::zeros(n * d);
            row[i * d..(i + 1) * d].clone_from_slice(f);
            prob.ge(row, Rat::zero());
        }
    }
    for c in 0..d {
        let mut row = crate::rat::zeros(n * d);
        for i in 0..n {
            row[i * d + c] = Rat::one();
        }
        prob.eq(row, hull_a.unit()[c].clone());
    }
    for (i, beta) in ensemble.iter().enumerate() {
        for r in 0..db {
            let mut row = crate::rat::zeros(n * d);
            row[i * d..(i + 1) * d].clone_from_slice(omega_hat.row(r));
            prob.constraint(row, Cmp::Eq, beta[r].clone());
        }
    }
    match prob.solve() {
        Witness::Point(x) => Ok(Some(
            (0..n).map(|i| x[i * d..(i + 1) * d].to_vec()).collect(),
        )),
        Witness::Certificate(_) => Ok(None),
    }
}

/// A state is steering for its `B` marginal when every vertex-supported
/// ensemble of `ω₂` is realizable by an observable on `A`. Decompositions
/// are enumerated over affinely independent vertex supports.
pub fn is_steering(omega: &CompositeState) -> Result<bool, ProtocolError> {
    let hull_b = omega.hull_b();
    let marg = hull_b
        .state_coords(&omega.marginal_b())
        .expect("marginal in span");
    let decomps = crate::infotheory::enumerate_decompositions(hull_b, &marg);
    for decomp in &decomps {
        let ensemble: Vec<Vector> = decomp
            .iter()
            .map(|(vi, t)| vec_scale(&hull_b.state_vectors()[*vi], t))
            .collect();
        if steering_check(omega, &ensemble)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The image `ω̂(E(A)_+)` equals the face of `V(B)_+` generated by `ω₂`
/// when `ω` is steering.
pub fn steering_image_is_face(omega: &CompositeState) -> Result<bool, ProtocolError> {
    let hull_b = omega.hull_b();
    let marg = hull_b
        .state_coords(&omega.marginal_b())
        .expect("marginal in span");
    let omega_hat = omega.conditioning_map().matrix;
    let image_gens: Vec<Vector> = omega
        .hull_a()
        .effect_space()
        .cone
        .generators()
        .iter()
        .map(|g| omega_hat.mul_vec(g))
        .collect();
    // Face(ω₂): generators of V(B)+ annihilated by every facet tight at ω₂.
    let facets = hull_b.state_cone().facets().map_err(OrdError::from)?;
    let tight: Vec<&Vector> = facets.iter().filter(|f| dot(f, &marg).is_zero()).collect();
    let face_gens: Vec<&Vector> = hull_b
        .state_cone()
        .generators()
        .iter()
        .filter(|g| tight.iter().all(|f| dot(f, g).is_zero()))
        .collect();
    // Image inside the face.
    for img in &image_gens {
        if !hull_b.state_cone().contains(img) {
            return Ok(false);
        }
        if !tight.iter().all(|f| dot(f, img).is_zero()) {
            return Ok(false);
        }
    }
    // Face inside the image cone (exact conic membership).
    let nonzero_imgs: Vec<&Vector> = image_gens
        .iter()
        .filter(|v| !crate::rat::is_zero_vec(v))
        .collect();
    for g in face_gens {
        if nonzero_imgs.is_empty() {
            return Ok(false);
        }
        let mut a = Matrix::zero(g.len(), nonzero_imgs.len());
        for (j, img) in nonzero_imgs.iter().enumerate() {
            for i in 0..g.len() {
                a[(i, j)] = img[i].clone();
            }
        }
        match crate::lp::feasible_eq_nonneg(&a, g) {
            crate::lp::LpOutcome::Feasible(_) => {}
            crate::lp::LpOutcome::Infeasible(_) => return Ok(false),
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------

/// Diagonal correlator realizing any classical state as the marginal of an
/// isomorphism state — the constructive homogeneity witness for simplicial
/// state spaces. Requires an interior (everywhere-nonzero) weight.
pub fn classical_isomorphism_state_with_marginal(
    hull: &LinearHull,
    beta: &ProbWeight,
) -> Result<CompositeState, ProtocolError> {
    let n = hull.model().test_space().outcome_count();
    let mut table = Matrix::zero(n, n);
    for i in 0..n {
        table[(i, i)] = beta.value(i).clone();
    }
    Ok(CompositeState::new(hull, hull, table)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composite::{min_max_tensor, pr_box, uniform_correlator, CompositeState, TensorKind};
    use crate::ordspace::LinearHull;
    use crate::rat::{rat, rat_int};
    use crate::testspace::{classical, square_bit, ProbWeight};

    fn sq_hull() -> LinearHull {
        LinearHull::build(&square_bit()).unwrap()
    }

    fn cl_hull(n: usize) -> LinearHull {
        LinearHull::build(&classical(n)).unwrap()
    }

    #[test]
    fn classical_point_masses_distinguished_by_indicators() {
        let h = cl_hull(3);
        let states: Vec<Vector> = h.state_vectors().to_vec();
        let obs = find_distinguishing_observable(&h, &states)
            .unwrap()
            .expect("point masses are jointly distinguishable");
        assert_eq!(obs.len(), 3);
        for (i, a) in obs.iter().enumerate() {
            for (j, s) in states.iter().enumerate() {
                assert_eq!(dot(a, s), if i == j { rat_int(1) } else { rat_int(0) });
            }
        }
    }

    #[test]
    fn square_bit_two_opposite_vertices_distinguishable() {
        let h = sq_hull();
        let v00 = h
            .vertices()
            .iter()
            .position(|w| w.value(0).is_zero() && w.value(2).is_zero())
            .unwrap();
        let v11 = h
            .vertices()
            .iter()
            .position(|w| w.value(0).is_one() && w.value(2).is_one())
            .unwrap();
        let states = vec![
            h.state_vectors()[v00].clone(),
            h.state_vectors()[v11].clone(),
        ];
        let obs = find_distinguishing_observable(&h, &states).unwrap();
        assert!(obs.is_some());
        // Cloning map from the observable clones both states exactly, is
        // positive on pure states, and is unital on them.
        let cm = CloningMap::build(&h, &states, &obs.unwrap());
        assert!(cm.clones_exactly());
        let uu = crate::composite::kron(h.unit(), h.unit());
        for sigma in h.state_vectors() {
            let img = cm.apply(sigma);
            assert_eq!(dot(&uu, &img), rat_int(1));
        }
    }

    #[test]
    fn three_square_bit_vertices_not_distinguishable() {
        let h = sq_hull();
        let pick = |x: i64, y: i64| -> Vector {
            let idx = h
                .vertices()
                .iter()
                .position(|w| *w.value(0) == rat_int(x) && *w.value(2) == rat_int(y))
                .unwrap();
            h.state_vectors()[idx].clone()
        };
        let states = vec![pick(0, 0), pick(1, 1), pick(1, 0)];
        assert!(find_distinguishing_observable(&h, &states)
            .unwrap()
            .is_none());
    }

    #[test]
    fn classical_broadcastable() {
        let h = cl_hull(3);
        let t = min_max_tensor(&h, &h, TensorKind::Max).unwrap();
        let states: Vec<Vector> = h.state_vectors().to_vec();
        match broadcastable(&h, &states, &t).unwrap() {
            Broadcast::Yes(m) => {
                for rho in &states {
                    let img = m.mul_vec(rho);
                    for i in 0..3 {
                        let mut e = crate::rat::zeros(3);
                        e[i] = rat_int(1);
                        let m1 = dot(&crate::composite::kron(&e, h.unit()), &img);
                        let m2 = dot(&crate::composite::kron(h.unit(), &e), &img);
                        assert_eq!(m1, rho[i]);
                        assert_eq!(m2, rho[i]);
                    }
                }
            }
            Broadcast::No(_) => panic!("classical states are broadcastable"),
        }
    }

    #[test]
    fn square_bit_four_vertices_not_broadcastable() {
        let h = sq_hull();
        let t = min_max_tensor(&h, &h, TensorKind::Max).unwrap();
        let states: Vec<Vector> = h.state_vectors().to_vec();
        match broadcastable(&h, &states, &t).unwrap() {
            Broadcast::No(cert) => assert!(!cert.is_empty()),
            Broadcast::Yes(_) => panic!("square bit is not broadcastable on all vertices"),
        }
    }

    #[test]
    fn square_bit_two_distinguishable_vertices_broadcastable() {
        let h = sq_hull();
        let t = min_max_tensor(&h, &h, TensorKind::Max).unwrap();
        let v = |x: i64, y: i64| -> Vector {
            let idx = h
                .vertices()
                .iter()
                .position(|w| *w.value(0) == rat_int(x) && *w.value(2) == rat_int(y))
                .unwrap();
            h.state_vectors()[idx].clone()
        };
        let states = vec![v(0, 0), v(1, 1)];
        assert!(matches!(
            broadcastable(&h, &states, &t).unwrap(),
            Broadcast::Yes(_)
        ));
    }

    #[test]
    fn remote_evaluation_product_case() {
        // f = a₀ ⊗ a₁ and ω = β₁ ⊗ β₂ give τ(α) = α(a₀) β₁(a₁) β₂.
        let h = sq_hull();
        let beta1 = h.vertices()[1].clone();
        let beta2 = h.vertices()[2].clone();
        let omega = CompositeState::product(&h, &h, &beta1, &beta2).unwrap();
        let a0 = h.outcome_vector(0).clone();
        let a1 = h.outcome_vector(2).clone();
        let f = BipartiteEffect::pure(&a0, &a1);
        let alpha_w = h.vertices()[3].clone();
        let alpha = h.state_coords(&alpha_w).unwrap();
        let out = remote_evaluate(&alpha, &omega, &f).unwrap();
        let scale = dot(&a0, &alpha) * dot(&a1, &h.state_coords(&beta1).unwrap());
        let expect = vec_scale(&h.state_coords(&beta2).unwrap(), &scale);
        assert_eq!(out.output, expect);
        assert_eq!(out.success_probability, scale);
    }

    #[test]
    fn remote_evaluation_identity_benchmark() {
        // ω = PR box; f = the scaled inverse of ω̂ as an effect: τ ∝ id.
        let h = sq_hull();
        let pr = pr_box(&h, &h).unwrap();
        let iso = pr.is_isomorphism_state().unwrap().unwrap();
        // f̂ = s · ω̂⁻¹ : V(A_o) → E(A_1), and f̂ = Fᵀ.
        let mut f_mat = iso.inverse.transpose();
        for i in 0..f_mat.rows {
            for j in 0..f_mat.cols {
                let v = &f_mat[(i, j)] * &iso.effect_scale;
                f_mat[(i, j)] = v;
            }
        }
        let f = BipartiteEffect::new(&h, &h, f_mat).unwrap();
        let alpha = h.state_vectors()[0].clone();
        let out = remote_evaluate(&alpha, &pr, &f).unwrap();
        let lambda = out.success_probability.clone();
        assert!(!lambda.is_zero());
        assert_eq!(out.output, vec_scale(&alpha, &lambda));
    }

    #[test]
    fn teleportation_classical_strong() {
        let h = cl_hull(3);
        let omega = uniform_correlator(&h).unwrap();
        let f = BipartiteEffect::new(&h, &h, Matrix::identity(3)).unwrap();
        let rep = verify_teleportation(&omega, &f).unwrap();
        assert_eq!(rep.class, TeleportClass::Strong);
        assert_eq!(rep.constant, rat_int(1));
        assert_eq!(rep.success_scale, rat(1, 3));
    }

    #[test]
    fn teleportation_pr_box_conclusive() {
        let h = sq_hull();
        let pr = pr_box(&h, &h).unwrap();
        let iso = pr.is_isomorphism_state().unwrap().unwrap();
        let mut f_mat = iso.inverse.transpose();
        for i in 0..f_mat.rows {
            for j in 0..f_mat.cols {
                let v = &f_mat[(i, j)] * &iso.effect_scale;
                f_mat[(i, j)] = v;
            }
        }
        let f = BipartiteEffect::new(&h, &h, f_mat).unwrap();
        let rep = verify_teleportation(&pr, &f).unwrap();
        assert!(matches!(
            rep.class,
            TeleportClass::Strong | TeleportClass::Conclusive
        ));
        assert!(rep.constant >= rat_int(1));
    }

    #[test]
    fn teleportation_rank_deficient_fails() {
        let h = sq_hull();
        let pr = pr_box(&h, &h).unwrap();
        let a = h.outcome_vector(0).clone();
        let f = BipartiteEffect::pure(&a, &a);
        let rep = verify_teleportation(&pr, &f).unwrap();
        assert_eq!(rep.class, TeleportClass::Fail);
    }

    #[test]
    fn deterministic_classical_teleportation() {
        // Δ(n) with the shifted-correlator observable: n effects
        // f_k(α ⊗ β) = Σ_i α_i β_{i+k}.
        let n = 3;
        let h = cl_hull(n);
        let omega = uniform_correlator(&h).unwrap();
        let mut effects = Vec::new();
        for k in 0..n {
            let mut m = Matrix::zero(n, n);
            for i in 0..n {
                m[(i, (i + k) % n)] = Rat::one();
            }
            effects.push(BipartiteEffect::new(&h, &h, m).unwrap());
        }
        let rep = verify_deterministic_teleportation(&omega, &effects).unwrap();
        assert_eq!(rep.per_outcome.len(), n);
        for r in &rep.per_outcome {
            assert_eq!(r.class, TeleportClass::Strong);
        }
        assert_eq!(rep.reconstruction_scalar, Some(rat_int(1)));
    }

    #[test]
    fn entanglement_swap_product_inputs() {
        let h = cl_hull(2);
        let pure = h.vertices().to_vec();
        let mu = CompositeState::product(&h, &h, &pure[0], &pure[1]).unwrap();
        let omega = CompositeState::product(&h, &h, &pure[1], &pure[0]).unwrap();
        let f = BipartiteEffect::new(&h, &h, Matrix::identity(2)).unwrap();
        let res = entanglement_swap(&mu, &omega, &f).unwrap();
        // Product in, product out.
        assert_eq!(res.conditional.bilinear().rank(), 1);
    }

    #[test]
    fn entanglement_swap_pr_chain_gives_isomorphism_state() {
        let h = sq_hull();
        let mu = pr_box(&h, &h).unwrap();
        let omega = pr_box(&h, &h).unwrap();
        let iso = mu.is_isomorphism_state().unwrap().unwrap();
        let mut f_mat = iso.inverse.transpose();
        for i in 0..f_mat.rows {
            for j in 0..f_mat.cols {
                let v = &f_mat[(i, j)] * &iso.effect_scale;
                f_mat[(i, j)] = v;
            }
        }
        let f = BipartiteEffect::new(&h, &h, f_mat).unwrap();
        let res = entanglement_swap(&mu, &omega, &f).unwrap();
        assert!(res.conditional.is_isomorphism_state().unwrap().is_some());
    }

    #[test]
    fn entanglement_swap_classical_correlators() {
        let n = 3;
        let h = cl_hull(n);
        let mu = uniform_correlator(&h).unwrap();
        let omega = uniform_correlator(&h).unwrap();
        let f = BipartiteEffect::new(&h, &h, Matrix::identity(n)).unwrap();
        let res = entanglement_swap(&mu, &omega, &f).unwrap();
        assert_eq!(
            res.conditional.table(),
            uniform_correlator(&h).unwrap().table()
        );
    }

    #[test]
    fn swap_identity_against_independent_route() {
        // (f ⊗ g)(μ ⊗ ω) by direct table sums must match g(ω̂ ∘ f̂ ∘ μ̂*)
        // for pure-tensor f.
        let h = sq_hull();
        let mu = pr_box(&h, &h).unwrap();
        let omega = pr_box(&h, &h).unwrap();
        let a = h.outcome_vector(0).clone();
        let b = h.outcome_vector(2).clone();
        let f = BipartiteEffect::pure(&a, &b);
        let m_chain = mu.bilinear().mul_mat(&f.matrix).mul_mat(omega.bilinear());
        for c_out in 0..4 {
            for g_out in 0..4 {
                let c_eff = h.outcome_vector(c_out);
                let g_eff = h.outcome_vector(g_out);
                let direct = mu.evaluate(c_eff, &a) * omega.evaluate(&b, g_eff);
                let chained = dot(c_eff, &m_chain.mul_vec(g_eff));
                assert_eq!(direct, chained);
            }
        }
    }

    #[test]
    fn snake_equations_classical() {
        let n = 4;
        let h = cl_hull(n);
        let eta = uniform_correlator(&h).unwrap();
        let eps = BipartiteEffect::new(&h, &h, Matrix::identity(n)).unwrap();
        let rep = check_compact_closure_pair(&eta, &eps);
        // η̂ = I/n and ε̂ = I compose to I/n: proportional, not closed.
        assert!(!rep.holds);
        assert_eq!(rep.scalar, Some(rat(1, n as i64)));
        // Scaling ε by n closes both snakes exactly.
        let mut scaled = Matrix::zero(n, n);
        for i in 0..n {
            scaled[(i, i)] = rat_int(n as i64);
        }
        let eps_n = BipartiteEffect { matrix: scaled };
        let rep2 = check_compact_closure_pair(&eta, &eps_n);
        assert!(rep2.holds);
        assert_eq!(rep2.scalar, Some(rat_int(1)));
    }

    #[test]
    fn snake_equations_mismatched_pair() {
        let h = cl_hull(2);
        let eta = uniform_correlator(&h).unwrap();
        let mut m = Matrix::zero(2, 2);
        m[(0, 1)] = rat_int(1);
        m[(1, 0)] = rat_int(1);
        let eps = BipartiteEffect::new(&h, &h, m).unwrap();
        let rep = check_compact_closure_pair(&eta, &eps);
        assert!(!rep.holds);
        assert!(rep.scalar.is_none());
    }

    #[test]
    fn steering_pr_box_vertex_ensembles() {
        let h = sq_hull();
        let pr = pr_box(&h, &h).unwrap();
        assert!(is_steering(&pr).unwrap());
    }

    #[test]
    fn steering_trivial_for_pure_product_marginal() {
        let h = sq_hull();
        let pure = h.vertices().to_vec();
        let omega = CompositeState::product(&h, &h, &pure[0], &pure[1]).unwrap();
        // A pure marginal has only the trivial ensemble.
        assert!(is_steering(&omega).unwrap());
    }

    #[test]
    fn steering_face_lemma() {
        let h = sq_hull();
        let pr = pr_box(&h, &h).unwrap();
        assert!(steering_image_is_face(&pr).unwrap());
        let pure = h.vertices().to_vec();
        let prod = CompositeState::product(&h, &h, &pure[0], &pure[1]).unwrap();
        assert!(steering_image_is_face(&prod).unwrap());
    }

    #[test]
    fn ensemble_mismatch_rejected() {
        let h = sq_hull();
        let pr = pr_box(&h, &h).unwrap();
        let bogus = vec![h.state_vectors()[0].clone()];
        assert!(matches!(
            steering_check(&pr, &bogus),
            Err(ProtocolError::EnsembleMismatch)
        ));
    }

    #[test]
    fn classical_interior_states_are_isomorphism_marginals() {
        let h = cl_hull(3);
        let beta = ProbWeight::new(
            h.model().test_space(),
            vec![rat(1, 2), rat(1, 3), rat(1, 6)],
        )
        .unwrap();
        let omega = classical_isomorphism_state_with_marginal(&h, &beta).unwrap();
        assert!(omega.is_isomorphism_state().unwrap().is_some());
        assert_eq!(&omega.marginal_b(), &beta);
    }

    #[test]
    fn square_bit_center_is_isomorphism_marginal() {
        let h = sq_hull();
        let pr = pr_box(&h, &h).unwrap();
        assert!(pr.is_isomorphism_state().unwrap().is_some());
        let center = pr.marginal_b();
        for v in center.values() {
            assert_eq!(*v, rat(1, 2));
        }
    }
}
