//! Bipartite composition: non-signaling state tables, bilinearization and
//! conditioning maps, minimal/maximal tensor products, separability, CHSH,
//! and isomorphism states. Tripartite tables are supported as far as the
//! information-theoretic checks need them.
//!
//! A composite state is represented by its exact table on product tests.
//! Non-signaling and conditional-state membership are verified at
//! construction, after which the unique bilinear extension is cached as a
//! matrix `M` with `ω(a ⊗ b) = aᵀ M b` in hull coordinates; the flattened
//! `M` is also the state's vector in `V(A) ⊗ V(B)`.

use crate::lp::{feasible_eq_nonneg, LpOutcome};
use crate::ordspace::{LinearHull, OrdError, PolyhedralCone, Process};
use crate::polytope::{polytope_vertices, ConeError};
use crate::rat::{dot, independent_subset, rat_int, vec_sub, Matrix, Rat, Vector};
use crate::testspace::{ModelError, ProbWeight, StateSet};
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CompositeError {
    #[error("table shape does not match the outcome sets")]
    BadShape,
    #[error("negative entry at outcome pair ({0}, {1})")]
    NegativeEntry(usize, usize),
    #[error("product test ({0}, {1}) sums to {2}, not 1")]
    NotNormalized(usize, usize, String),
    #[error("signaling: marginal of side {side} differs across partner tests {test_a} and {test_b}")]
    Signaling {
        side: char,
        test_a: usize,
        test_b: usize,
    },
    #[error("conditional state at outcome {0} of side {1} lies outside the designated state space")]
    ConditionalOutsideStateSpace(usize, char),
    #[error("table admits no bilinear extension consistent with the state spans")]
    InconsistentBilinear,
    #[error("effect out of range: not between 0 and the order unit")]
    EffectOutOfRange,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Ord(#[from] OrdError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A non-signaling bipartite state on product tests.
#[derive(Debug, Clone)]
pub struct CompositeState {
    hull_a: LinearHull,
    hull_b: LinearHull,
    table: Matrix,
    marginal_a: Vector,
    marginal_b: Vector,
    bilinear: Matrix,
}

impl CompositeState {
    /// Validate a table `ω(x, y)` over `X(A) × X(B)` and cache marginals and
    /// the bilinear extension.
    pub fn new(
        hull_a: &LinearHull,
        hull_b: &LinearHull,
        table: Matrix,
    ) -> Result<Self, CompositeError> {
        let na = hull_a.model().test_space().outcome_count();
        let nb = hull_b.model().test_space().outcome_count();
        if table.rows != na || table.cols != nb {
            return Err(CompositeError::BadShape);
        }
        for i in 0..na {
            for j in 0..nb {
                if table[(i, j)] < Rat::zero() {
                    return Err(CompositeError::NegativeEntry(i, j));
                }
            }
        }
        let tests_a = hull_a.model().test_space().tests();
        let tests_b = hull_b.model().test_space().tests();
        for (ti, ta) in tests_a.iter().enumerate() {
            for (tj, tb) in tests_b.iter().enumerate() {
                let mut s = Rat::zero();
                for &x in ta {
                    for &y in tb {
                        s += table[(x, y)].clone();
                    }
                }
                if !s.is_one() {
                    return Err(CompositeError::NotNormalized(
                        ti,
                        tj,
                        crate::rat::format_rat(&s),
                    ));
                }
            }
        }

        // Non-signaling: each side's marginal must not depend on the partner
        // test.
        let marginal_a = marginal_rows(&table, tests_b, 'A')?;
        let marginal_b = marginal_rows(&table.transpose(), tests_a, 'B')?;

        // Conditional states must lie in the designated state spaces.
        for x in 0..na {
            if marginal_a[x].is_zero() {
                continue;
            }
            let inv = marginal_a[x].recip();
            let cond: Vector = (0..nb).map(|y| &table[(x, y)] * &inv).collect();
            let w = ProbWeight::new(hull_b.model().test_space(), cond)
                .map_err(|_| CompositeError::ConditionalOutsideStateSpace(x, 'A'))?;
            if !weight_in_state_space(hull_b, &w) {
                return Err(CompositeError::ConditionalOutsideStateSpace(x, 'A'));
            }
        }
        for y in 0..nb {
            if marginal_b[y].is_zero() {
                continue;
            }
            let inv = marginal_b[y].recip();
            let cond: Vector = (0..na).map(|x| &table[(x, y)] * &inv).collect();
            let w = ProbWeight::new(hull_a.model().test_space(), cond)
                .map_err(|_| CompositeError::ConditionalOutsideStateSpace(y, 'B'))?;
            if !weight_in_state_space(hull_a, &w) {
                return Err(CompositeError::ConditionalOutsideStateSpace(y, 'B'));
            }
        }

        let bilinear = bilinear_extension(hull_a, hull_b, &table)?;
        Ok(CompositeState {
            hull_a: hull_a.clone(),
            hull_b: hull_b.clone(),
            table,
            marginal_a,
            marginal_b,
            bilinear,
        })
    }

    /// Rebuild the table from a bilinear matrix in hull coordinates.
    pub fn from_bilinear(
        hull_a: &LinearHull,
        hull_b: &LinearHull,
        m: &Matrix,
    ) -> Result<Self, CompositeError> {
        let na = hull_a.model().test_space().outcome_count();
        let nb = hull_b.model().test_space().outcome_count();
        if m.rows != hull_a.dim() || m.cols != hull_b.dim() {
            return Err(CompositeError::DimensionMismatch(format!(
                "bilinear matrix is {}x{}, expected {}x{}",
                m.rows,
                m.cols,
                hull_a.dim(),
                hull_b.dim()
            )));
        }
        let mut table = Matrix::zero(na, nb);
        for x in 0..na {
            let row = m.transpose().mul_vec(hull_a.outcome_vector(x));
            for y in 0..nb {
                table[(x, y)] = dot(&row, hull_b.outcome_vector(y));
            }
        }
        CompositeState::new(hull_a, hull_b, table)
    }

    /// Product state `α ⊗ β`.
    pub fn product(
        hull_a: &LinearHull,
        hull_b: &LinearHull,
        alpha: &ProbWeight,
        beta: &ProbWeight,
    ) -> Result<Self, CompositeError> {
        let na = hull_a.model().test_space().outcome_count();
        let nb = hull_b.model().test_space().outcome_count();
        let mut table = Matrix::zero(na, nb);
        for x in 0..na {
            for y in 0..nb {
                table[(x, y)] = alpha.value(x) * beta.value(y);
            }
        }
        CompositeState::new(hull_a, hull_b, table)
    }

    pub fn hull_a(&self) -> &LinearHull {
        &self.hull_a
    }

    pub fn hull_b(&self) -> &LinearHull {
        &self.hull_b
    }

    pub fn table(&self) -> &Matrix {
        &self.table
    }

    pub fn entry(&self, x: usize, y: usize) -> &Rat {
        &self.table[(x, y)]
    }

    /// Marginal weight on `A` (independent of the partner test).
    pub fn marginal_a(&self) -> ProbWeight {
        ProbWeight::new(self.hull_a.model().test_space(), self.marginal_a.clone())
            .expect("marginal of a non-signaling state is a weight")
    }

    pub fn marginal_b(&self) -> ProbWeight {
        ProbWeight::new(self.hull_b.model().test_space(), self.marginal_b.clone())
            .expect("marginal of a non-signaling state is a weight")
    }

    /// The bilinear extension `M` with `ω(a ⊗ b) = aᵀ M b`.
    pub fn bilinear(&self) -> &Matrix {
        &self.bilinear
    }

    /// Evaluate on a pair of effect vectors.
    pub fn evaluate(&self, a: &[Rat], b: &[Rat]) -> Rat {
        dot(a, &self.bilinear.mul_vec(b))
    }

    /// Flattened state vector in `V(A) ⊗ V(B)` (row-major over `M`).
    pub fn state_vector(&self) -> Vector {
        let mut v = Vector::with_capacity(self.bilinear.rows * self.bilinear.cols);
        for i in 0..self.bilinear.rows {
            v.extend(self.bilinear.row(i).iter().cloned());
        }
        v
    }

    /// The conditioning map `ω̂ : E(A) → V(B)`, `a ↦ Mᵀ a`.
    pub fn conditioning_map(&self) -> ConditioningMap {
        ConditioningMap {
            matrix: self.bilinear.transpose(),
        }
    }

    /// The opposite-direction conditioning map `ω̂* : E(B) → V(A)`.
    pub fn co_conditioning_map(&self) -> ConditioningMap {
        ConditioningMap {
            matrix: self.bilinear.clone(),
        }
    }

    /// Normalized conditional state of `B` given outcome `x` of `A`.
    pub fn conditional_b(&self, x: usize) -> Option<ProbWeight> {
        if self.marginal_a[x].is_zero() {
            return None;
        }
        let inv = self.marginal_a[x].recip();
        let nb = self.hull_b.model().test_space().outcome_count();
        let vals = (0..nb).map(|y| &self.table[(x, y)] * &inv).collect();
        Some(ProbWeight::new(self.hull_b.model().test_space(), vals).expect("checked"))
    }

    /// Law of total probability: `Σ_{a∈E} ω̂(a) = ω₂` for an observable `E`.
    /// Returns the residual vector when it fails (it cannot, for a valid
    /// state and observable; used as a test oracle).
    pub fn law_of_total_probability(&self, observable: &[Vector]) -> Result<(), Vector> {
        let cm = self.conditioning_map();
        let mut acc = crate::rat::zeros(self.hull_b.dim());
        for a in observable {
            acc = crate::rat::vec_add(&acc, &cm.apply(a));
        }
        let target = self
            .hull_b
            .state_coords(&self.marginal_b())
            .expect("marginal lies in the span of pure states");
        if acc == target {
            Ok(())
        } else {
            Err(vec_sub(&acc, &target))
        }
    }

    /// CHSH parameter for two settings per side, exact:
    /// `S = E(a₁,b₁) + E(a₁,b₂) + E(a₂,b₁) − E(a₂,b₂)` with
    /// `E(a,b) = ω((2a−u) ⊗ (2b−u))`.
    pub fn chsh(&self, alice: &[Vector; 2], bob: &[Vector; 2]) -> Result<Rat, CompositeError> {
        for a in alice {
            if !self.hull_a.effect_space().is_effect(a) {
                return Err(CompositeError::EffectOutOfRange);
            }
        }
        for b in bob {
            if !self.hull_b.effect_space().is_effect(b) {
                return Err(CompositeError::EffectOutOfRange);
            }
        }
        let corr = |a: &Vector, b: &Vector| -> Rat {
            let joint = self.evaluate(a, b);
            let ma = self.evaluate(a, self.hull_b.unit());
            let mb = self.evaluate(self.hull_a.unit(), b);
            rat_int(4) * joint - rat_int(2) * ma - rat_int(2) * mb + Rat::one()
        };
        Ok(corr(&alice[0], &bob[0]) + corr(&alice[0], &bob[1]) + corr(&alice[1], &bob[0])
            - corr(&alice[1], &bob[1]))
    }

    /// Is the conditioning map an order-isomorphism `E(A) ≅ V(B)`?
    pub fn is_isomorphism_state(&self) -> Result<Option<IsomorphismData>, CompositeError> {
        if self.hull_a.dim() != self.hull_b.dim() {
            return Err(CompositeError::DimensionMismatch(
                "isomorphism states need equal dimensions".into(),
            ));
        }
        let omega_hat = self.bilinear.transpose();
        let Some(inverse) = omega_hat.inverse() else {
            return Ok(None);
        };
        // Forward positivity: effect cone of A into state cone of B.
        for g in self.hull_a.effect_space().cone.generators() {
            if !self.hull_b.state_cone().contains(&omega_hat.mul_vec(g)) {
                return Ok(None);
            }
        }
        // Inverse positivity: state cone of B back into the effect cone.
        for g in self.hull_b.state_cone().generators() {
            if !self
                .hull_a
                .effect_space()
                .cone
                .contains(&inverse.mul_vec(g))
            {
                return Ok(None);
            }
        }
        // Largest s making s·(ω̂⁻¹ as a bipartite element on B⊗A) an effect
        // against product states: s = 1 / max over vertex pairs.
        let mut max_val = Rat::zero();
        for sb in self.hull_b.state_vectors() {
            let image = inverse.mul_vec(sb);
            for sa in self.hull_a.state_vectors() {
                let v = dot(&image, sa);
                if v > max_val {
                    max_val = v;
                }
            }
        }
        let scale = if max_val.is_zero() {
            Rat::one()
        } else {
            max_val.recip()
        };
        Ok(Some(IsomorphismData {
            inverse,
            effect_scale: scale,
        }))
    }
}

/// Inverse data returned for isomorphism states: the inverse conditioning
/// map `V(B) → E(A)` and the scalar making it a bipartite effect.
#[derive(Debug, Clone)]
pub struct IsomorphismData {
    pub inverse: Matrix,
    pub effect_scale: Rat,
}

/// A positive linear map `E(A) → V(B)` obtained from a bipartite state.
#[derive(Debug, Clone)]
pub struct ConditioningMap {
    pub matrix: Matrix,
}

impl ConditioningMap {
    pub fn apply(&self, a: &[Rat]) -> Vector {
        self.matrix.mul_vec(a)
    }
}

fn marginal_rows(table: &Matrix, partner_tests: &[Vec<usize>], side: char) -> Result<Vector, CompositeError> {
    let mut marginal: Option<(usize, Vector)> = None;
    for (tj, t) in partner_tests.iter().enumerate() {
        let m: Vector = (0..table.rows)
            .map(|x| {
                let mut s = Rat::zero();
                for &y in t {
                    s += table[(x, y)].clone();
                }
                s
            })
            .collect();
        match &marginal {
            None => marginal = Some((tj, m)),
            Some((t0, m0)) => {
                if m != *m0 {
                    return Err(CompositeError::Signaling {
                        side,
                        test_a: *t0,
                        test_b: tj,
                    });
                }
            }
        }
    }
    Ok(marginal.expect("at least one test").1)
}

fn weight_in_state_space(hull: &LinearHull, w: &ProbWeight) -> bool {
    match hull.model().state_set() {
        StateSet::Full => true,
        StateSet::Generated(_) => {
            // Membership in the convex hull of the pure states, exactly.
            let verts = hull.vertices();
            let n = w.values().len();
            let mut a = Matrix::zero(n + 1, verts.len());
            for (j, v) in verts.iter().enumerate() {
                for i in 0..n {
                    a[(i, j)] = v.value(i).clone();
                }
                a[(n, j)] = Rat::one();
            }
            let mut b = w.values().to_vec();
            b.push(Rat::one());
            matches!(feasible_eq_nonneg(&a, &b), LpOutcome::Feasible(_))
        }
    }
}

/// Solve for the bilinear extension from the table, then check it against
/// every outcome pair.
fn bilinear_extension(
    hull_a: &LinearHull,
    hull_b: &LinearHull,
    table: &Matrix,
) -> Result<Matrix, CompositeError> {
    let base_a = independent_subset(hull_a.outcome_vectors());
    let base_b = independent_subset(hull_b.outcome_vectors());
    let p = Matrix::from_rows(base_a.iter().map(|&x| hull_a.outcome_vector(x).clone()).collect());
    let q = Matrix::from_rows(base_b.iter().map(|&y| hull_b.outcome_vector(y).clone()).collect());
    let mut w = Matrix::zero(base_a.len(), base_b.len());
    for (i, &x) in base_a.iter().enumerate() {
        for (j, &y) in base_b.iter().enumerate() {
            w[(i, j)] = table[(x, y)].clone();
        }
    }
    let p_inv = p.inverse().expect("independent rows");
    let q_inv_t = q.inverse().expect("independent rows").transpose();
    let m = p_inv.mul_mat(&w).mul_mat(&q_inv_t);
    // Consistency on all outcome pairs.
    let na = table.rows;
    let nb = table.cols;
    for x in 0..na {
        let row = m.transpose().mul_vec(hull_a.outcome_vector(x));
        for y in 0..nb {
            if dot(&row, hull_b.outcome_vector(y)) != table[(x, y)] {
                return Err(CompositeError::InconsistentBilinear);
            }
        }
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// Tensor products

/// Which state set the tensor product carries: `Max` keeps every
/// non-signaling state (effects are product-generated); `Min` keeps only
/// separable states (effects are maximal).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorKind {
    Min,
    Max,
}

/// A dual pair of cones on `E(A) ⊗ E(B)` / `V(A) ⊗ V(B)` with the product
/// order unit, plus the normalized extreme states.
#[derive(Debug)]
pub struct TensorSpace {
    pub kind: TensorKind,
    pub dim: usize,
    pub effect_cone: PolyhedralCone,
    pub state_cone: PolyhedralCone,
    pub unit: Vector,
    /// Extreme normalized states, lexicographically sorted.
    pub state_vertices: Vec<Vector>,
}

pub fn kron(a: &[Rat], b: &[Rat]) -> Vector {
    let mut v = Vector::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            v.push(x * y);
        }
    }
    v
}

/// Build the minimal or maximal tensor product of two linear hulls.
pub fn min_max_tensor(
    hull_a: &LinearHull,
    hull_b: &LinearHull,
    kind: TensorKind,
) -> Result<TensorSpace, CompositeError> {
    let da = hull_a.dim();
    let db = hull_b.dim();
    let dim = da * db;
    let unit = kron(hull_a.unit(), hull_b.unit());

    let pure_tensors: Vec<Vector> = hull_a
        .effect_space()
        .cone
        .generators()
        .iter()
        .flat_map(|g| {
            hull_b
                .effect_space()
                .cone
                .generators()
                .iter()
                .map(move |h| kron(g, h))
        })
        .collect();
    let product_states: Vec<Vector> = hull_a
        .state_vectors()
        .iter()
        .flat_map(|s| hull_b.state_vectors().iter().map(move |t| kron(s, t)))
        .collect();

    match kind {
        TensorKind::Max => {
            // Effects: the minimal cone of pure tensors. States: its dual,
            // i.e. every non-signaling state.
            let effect_cone = PolyhedralCone::new(dim, pure_tensors)?;
            let state_cone = effect_cone.dual()?;
            let ineqs: Vec<(Vector, Rat)> = effect_cone
                .generators()
                .iter()
                .map(|g| (g.clone(), Rat::zero()))
                .collect();
            let eqs = vec![(unit.clone(), Rat::one())];
            let v = polytope_vertices(dim, &ineqs, &eqs)?;
            Ok(TensorSpace {
                kind,
                dim,
                effect_cone,
                state_cone,
                unit,
                state_vertices: v.vertices,
            })
        }
        TensorKind::Min => {
            // States: products only. Effects: everything positive on them.
            let state_cone = PolyhedralCone::new(dim, product_states)?;
            let effect_cone = state_cone.dual()?;
            let mut vertices: Vec<Vector> = state_cone.generators().to_vec();
            vertices.sort();
            vertices.dedup();
            // Cone generators are unnormalized; product states already pair
            // to 1 with the unit, so normalization is a no-op here.
            debug_assert!(vertices.iter().all(|v| dot(v, &unit).is_one()));
            Ok(TensorSpace {
                kind,
                dim,
                effect_cone,
                state_cone,
                unit,
                state_vertices: vertices,
            })
        }
    }
}

impl TensorSpace {
    pub fn contains_state(&self, v: &[Rat]) -> bool {
        self.state_cone.contains(v)
    }

    pub fn contains_effect(&self, v: &[Rat]) -> bool {
        self.effect_cone.contains(v)
    }
}

// ---------------------------------------------------------------------------
// Separability

#[derive(Debug, Clone)]
pub enum Separability {
    /// Mixture weights over vertex pairs `(i, j, t_ij)`.
    Separable(Vec<(usize, usize, Rat)>),
    /// An affine witness `(w, c)` with `<w, σ> <= c` on all product states
    /// but `<w, ω> > c`.
    Entangled(Vector, Rat),
}

/// Exact separability: is `ω` a convex mixture of products of pure states?
pub fn is_separable(omega: &CompositeState) -> Separability {
    let va = omega.hull_a().state_vectors();
    let vb = omega.hull_b().state_vectors();
    let dim = omega.hull_a().dim() * omega.hull_b().dim();
    let ncols = va.len() * vb.len();
    let mut a = Matrix::zero(dim + 1, ncols);
    let mut col = 0;
    for sa in va {
        for sb in vb {
            let k = kron(sa, sb);
            for (r, val) in k.iter().enumerate() {
                a[(r, col)] = val.clone();
            }
            a[(dim, col)] = Rat::one();
            col += 1;
        }
    }
    let mut b = omega.state_vector();
    b.push(Rat::one());
    match feasible_eq_nonneg(&a, &b) {
        LpOutcome::Feasible(t) => {
            let mut mix = Vec::new();
            for (idx, w) in t.iter().enumerate() {
                if !w.is_zero() {
                    mix.push((idx / vb.len(), idx % vb.len(), w.clone()));
                }
            }
            Separability::Separable(mix)
        }
        LpOutcome::Infeasible(y) => {
            let w = y[..dim].to_vec();
            let c = -y[dim].clone();
            Separability::Entangled(w, c)
        }
    }
}

// ---------------------------------------------------------------------------
// CHSH maximization

#[derive(Debug, Clone)]
pub struct ChshMax {
    pub value: Rat,
    pub state_index: usize,
    pub alice: [Vector; 2],
    pub bob: [Vector; 2],
}

/// Maximize the CHSH parameter over the extreme states of a `Max` tensor
/// space and the vertices of both effect polytopes. Exact: `S` is affine in
/// the state and multi-affine in each effect, so the optimum is attained at
/// vertices. Ties break lexicographically.
pub fn chsh_max(
    hull_a: &LinearHull,
    hull_b: &LinearHull,
    tensor: &TensorSpace,
) -> Result<ChshMax, CompositeError> {
    let ea = hull_a.effect_polytope_vertices()?.to_vec();
    let eb = hull_b.effect_polytope_vertices()?.to_vec();
    let da = hull_a.dim();
    let db = hull_b.dim();

    let best = tensor
        .state_vertices
        .par_iter()
        .enumerate()
        .map(|(si, sv)| {
            let mut m = Matrix::zero(da, db);
            for i in 0..da {
                for j in 0..db {
                    m[(i, j)] = sv[i * db + j].clone();
                }
            }
            let ua = hull_a.unit();
            let ub = hull_b.unit();
            // Correlator table E(a_i, b_j) over the effect vertices; the
            // four-tuple scan then reduces to table lookups.
            let mb: Vec<Vector> = eb.iter().map(|b| m.mul_vec(b)).collect();
            let mu = m.mul_vec(ub);
            let corr: Vec<Vec<Rat>> = ea
                .iter()
                .map(|a| {
                    let a_mu = dot(a, &mu);
                    mb.iter()
                        .map(|mbj| {
                            let joint = dot(a, mbj);
                            let b_mu = dot(ua, mbj);
                            rat_int(4) * joint - rat_int(2) * &a_mu - rat_int(2) * b_mu
                                + Rat::one()
                        })
                        .collect()
                })
                .collect();
            let mut local: Option<(Rat, usize, usize, usize, usize)> = None;
            for a1 in 0..ea.len() {
                for a2 in 0..ea.len() {
                    for b1 in 0..eb.len() {
                        for b2 in 0..eb.len() {
                            let s = &corr[a1][b1] + &corr[a1][b2] + &corr[a2][b1]
                                - &corr[a2][b2];
                            let better = match &local {
                                None => true,
                                Some((cur, ..)) => s > *cur,
                            };
                            if better {
                                local = Some((s, a1, a2, b1, b2));
                            }
                        }
                    }
                }
            }
            let (value, a1, a2, b1, b2) = local.expect("effect polytopes are non-empty");
            ChshMax {
                value,
                state_index: si,
                alice: [ea[a1].clone(), ea[a2].clone()],
                bob: [eb[b1].clone(), eb[b2].clone()],
            }
        })
        .reduce_with(|x, y| {
            // Deterministic: larger value wins; ties prefer the smaller
            // state index, then lexicographic effects.
            if y.value > x.value
                || (y.value == x.value
                    && (y.state_index, &y.alice, &y.bob) < (x.state_index, &x.alice, &x.bob))
            {
                y
            } else {
                x
            }
        })
        .expect("tensor space has at least one state vertex");
    Ok(best)
}

// ---------------------------------------------------------------------------
// Tripartite tables

/// A non-signaling tripartite state on product tests, stored as a table
/// `ω(x, y, z)`.
#[derive(Debug, Clone)]
pub struct TripartiteState {
    hulls: [LinearHull; 3],
    sizes: [usize; 3],
    table: Vec<Rat>,
}

impl TripartiteState {
    pub fn new(
        hulls: [LinearHull; 3],
        table: Vec<Rat>,
    ) -> Result<Self, CompositeError> {
        let sizes = [
            hulls[0].model().test_space().outcome_count(),
            hulls[1].model().test_space().outcome_count(),
            hulls[2].model().test_space().outcome_count(),
        ];
        if table.len() != sizes[0] * sizes[1] * sizes[2] {
            return Err(CompositeError::BadShape);
        }
        if table.iter().any(|v| *v < Rat::zero()) {
            return Err(CompositeError::NegativeEntry(0, 0));
        }
        let ts = TripartiteState {
            hulls,
            sizes,
            table,
        };
        // Normalization on every triple product test.
        for ta in ts.hulls[0].model().test_space().tests() {
            for tb in ts.hulls[1].model().test_space().tests() {
                for tc in ts.hulls[2].model().test_space().tests() {
                    let mut s = Rat::zero();
                    for &x in ta {
                        for &y in tb {
                            for &z in tc {
                                s += ts.at(x, y, z).clone();
                            }
                        }
                    }
                    if !s.is_one() {
                        return Err(CompositeError::NotNormalized(
                            0,
                            0,
                            crate::rat::format_rat(&s),
                        ));
                    }
                }
            }
        }
        // Pairwise marginals must be well-defined (this also covers the
        // single-system marginals); validity as non-signaling bipartite
        // states is established by construction below.
        ts.marginal_pair(0, 1)?;
        ts.marginal_pair(0, 2)?;
        ts.marginal_pair(1, 2)?;
        Ok(ts)
    }

    pub fn at(&self, x: usize, y: usize, z: usize) -> &Rat {
        &self.table[(x * self.sizes[1] + y) * self.sizes[2] + z]
    }

    pub fn hull(&self, i: usize) -> &LinearHull {
        &self.hulls[i]
    }

    /// Marginal bipartite state on systems `i < j`, summing the third out
    /// over each of its tests and demanding agreement.
    pub fn marginal_pair(&self, i: usize, j: usize) -> Result<CompositeState, CompositeError> {
        assert!(i < j && j < 3);
        let k = 3 - i - j; // the traced-out system
        let mut result: Option<Matrix> = None;
        for tk in self.hulls[k].model().test_space().tests() {
            let mut m = Matrix::zero(self.sizes[i], self.sizes[j]);
            for a in 0..self.sizes[i] {
                for b in 0..self.sizes[j] {
                    let mut s = Rat::zero();
                    for &c in tk {
                        let (x, y, z) = place(i, j, k, a, b, c);
                        s += self.at(x, y, z).clone();
                    }
                    m[(a, b)] = s;
                }
            }
            match &result {
                None => result = Some(m),
                Some(prev) => {
                    if *prev != m {
                        return Err(CompositeError::Signaling {
                            side: char::from(b'A' + k as u8),
                            test_a: 0,
                            test_b: 0,
                        });
                    }
                }
            }
        }
        CompositeState::new(
            &self.hulls[i],
            &self.hulls[j],
            result.expect("at least one test"),
        )
    }

    /// Single-system marginal weight.
    pub fn marginal_single(&self, i: usize) -> Result<ProbWeight, CompositeError> {
        let (a, b) = match i {
            0 => (0usize, 1usize),
            1 => (0, 1),
            2 => (0, 2),
            _ => unreachable!(),
        };
        let pair = self.marginal_pair(a.min(b), a.max(b).max(1))?;
        // Reuse the bipartite marginals.
        Ok(match i {
            0 => pair.marginal_a(),
            1 => self.marginal_pair(1, 2)?.marginal_a(),
            2 => pair.marginal_b(),
            _ => unreachable!(),
        })
    }

    /// Product of a bipartite state with a single-system state on the left:
    /// `σ ⊗ ω` on systems `(C, A, B)`.
    pub fn from_left_product(
        sigma_hull: &LinearHull,
        sigma: &ProbWeight,
        omega: &CompositeState,
    ) -> Result<Self, CompositeError> {
        let nc = sigma_hull.model().test_space().outcome_count();
        let na = omega.hull_a().model().test_space().outcome_count();
        let nb = omega.hull_b().model().test_space().outcome_count();
        let mut table = Vec::with_capacity(nc * na * nb);
        for c in 0..nc {
            for x in 0..na {
                for y in 0..nb {
                    table.push(sigma.value(c) * omega.entry(x, y));
                }
            }
        }
        TripartiteState::new(
            [
                sigma_hull.clone(),
                omega.hull_a().clone(),
                omega.hull_b().clone(),
            ],
            table,
        )
    }

    /// Apply a process (Heisenberg picture) to the third system's effects,
    /// producing `id ⊗ id ⊗ τ*`-processed tables: the new table over
    /// `(x, y, z')` is `ω(x, y, τ(ẑ'))`.
    pub fn apply_process_third(
        &self,
        process: &Process,
        target_hull: &LinearHull,
    ) -> Result<TripartiteState, CompositeError> {
        // For each fixed (x, y) the slice z ↦ ω(x,y,z) is an unnormalized
        // weight on C; push it through the process by re-evaluating effects.
        let nc_new = target_hull.model().test_space().outcome_count();
        let mut table = Vec::with_capacity(self.sizes[0] * self.sizes[1] * nc_new);
        // Slice in V(C)-coordinates: solve from the outcome evaluations.
        let rows =
            Matrix::from_rows(self.hulls[2].outcome_vectors().to_vec());
        for x in 0..self.sizes[0] {
            for y in 0..self.sizes[1] {
                let slice: Vector = (0..self.sizes[2])
                    .map(|z| self.at(x, y, z).clone())
                    .collect();
                let coords = rows
                    .solve(&slice)
                    .ok_or(CompositeError::InconsistentBilinear)?;
                for znew in 0..nc_new {
                    let effect = process.apply_effect(target_hull.outcome_vector(znew));
                    table.push(dot(&effect, &coords));
                }
            }
        }
        TripartiteState::new(
            [
                self.hulls[0].clone(),
                self.hulls[1].clone(),
                target_hull.clone(),
            ],
            table,
        )
    }
}

fn place(i: usize, j: usize, k: usize, a: usize, b: usize, c: usize) -> (usize, usize, usize) {
    let mut out = [0usize; 3];
    out[i] = a;
    out[j] = b;
    out[k] = c;
    (out[0], out[1], out[2])
}

// ---------------------------------------------------------------------------
// Catalog of composite states

/// The PR box on a pair of square bits: perfectly correlated on three
/// setting pairs, anticorrelated on the fourth.
pub fn pr_box(hull_a: &LinearHull, hull_b: &LinearHull) -> Result<CompositeState, CompositeError> {
    let h = Rat::new(1.into(), 2.into());
    let z = Rat::zero();
    // Outcome order: x, x', y, y'.
    let rows = vec![
        vec![h.clone(), z.clone(), h.clone(), z.clone()],
        vec![z.clone(), h.clone(), z.clone(), h.clone()],
        vec![h.clone(), z.clone(), z.clone(), h.clone()],
        vec![z.clone(), h.clone(), h.clone(), z.clone()],
    ];
    CompositeState::new(hull_a, hull_b, Matrix::from_rows(rows))
}

/// The uniform correlator `ω(x, y) = δ_xy / n` on a pair of `n`-outcome
/// classical systems.
pub fn uniform_correlator(hull: &LinearHull) -> Result<CompositeState, CompositeError> {
    let n = hull.model().test_space().outcome_count();
    let mut table = Matrix::zero(n, n);
    for i in 0..n {
        table[(i, i)] = Rat::new(1.into(), (n as i64).into());
    }
    CompositeState::new(hull, hull, table)
}
