//! Ordered linear spaces with polyhedral cones; the linear hull `E(A)` of a
//! model and its dual state space `V(A)`; positive processes.
//!
//! Concretely, `E(A)` is coordinatized by evaluation against a maximal
//! linearly independent set of pure states, so the pairing between effects
//! and states is the standard dot product and the order unit is the all-ones
//! vector. Everything here is exact.

use crate::polytope::{cone_facets_from_generators, polytope_vertices, ConeError};
use crate::rat::{dot, independent_subset, vec_sub, Matrix, Rat, Vector};
use crate::testspace::{Model, ModelError, ProbWeight};
use num_traits::{One, Zero};
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OrdError {
    #[error("cone is not pointed")]
    NotPointed,
    #[error("cone generators do not span the ambient space")]
    NotGenerating,
    #[error("unit is not an order unit (vanishes against a dual generator)")]
    BadUnit,
    #[error("test sums disagree: the model is corrupted")]
    InconsistentUnit,
    #[error("process is not positive: generator {0} maps outside the target cone")]
    NotPositive(usize),
    #[error("process is not sub-unital")]
    NotSubUnital,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

/// A pointed, generating polyhedral cone with lazily computed facets.
#[derive(Debug)]
pub struct PolyhedralCone {
    dim: usize,
    generators: Vec<Vector>,
    facets: OnceLock<Vec<Vector>>,
}

impl Clone for PolyhedralCone {
    fn clone(&self) -> Self {
        PolyhedralCone {
            dim: self.dim,
            generators: self.generators.clone(),
            facets: match self.facets.get() {
                Some(f) => {
                    let lock = OnceLock::new();
                    let _ = lock.set(f.clone());
                    lock
                }
                None => OnceLock::new(),
            },
        }
    }
}

impl PolyhedralCone {
    /// Requires the generators to span (generating) and the cone to be
    /// pointed.
    pub fn new(dim: usize, generators: Vec<Vector>) -> Result<Self, OrdError> {
        assert!(generators.iter().all(|g| g.len() == dim));
        let m = Matrix::from_rows(generators.clone());
        if m.rank() != dim {
            return Err(OrdError::NotGenerating);
        }
        let cone = PolyhedralCone {
            dim,
            generators,
            facets: OnceLock::new(),
        };
        // Pointedness: facet normals must span; equivalently the dual cone
        // is generating, which the facet computation itself establishes.
        let facets = cone.facets()?;
        if Matrix::from_rows(facets.to_vec()).rank() != dim {
            return Err(OrdError::NotPointed);
        }
        Ok(cone)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    /// Facet normals, memoized after the first computation.
    pub fn facets(&self) -> Result<&[Vector], ConeError> {
        if self.facets.get().is_none() {
            let f = cone_facets_from_generators(self.dim, &self.generators)?;
            let _ = self.facets.set(f);
        }
        Ok(self.facets.get().expect("just set"))
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.facets()
            .map(|fs| fs.iter().all(|f| dot(f, v) >= Rat::zero()))
            .unwrap_or(false)
    }

    /// The dual cone under the standard pairing: its generators are this
    /// cone's facets and vice versa.
    pub fn dual(&self) -> Result<PolyhedralCone, OrdError> {
        let gens = self.facets()?.to_vec();
        let dual = PolyhedralCone {
            dim: self.dim,
            generators: gens,
            facets: OnceLock::new(),
        };
        // The primal generators support the dual, so seed its facet cache
        // with their extreme subset.
        let keep = crate::polytope::extreme_among_generators(&self.generators);
        let facets: Vec<Vector> = keep
            .into_iter()
            .map(|i| crate::rat::canonical_ray(&self.generators[i]))
            .collect();
        let mut sorted = facets;
        sorted.sort();
        let _ = dual.facets.set(sorted);
        Ok(dual)
    }

    /// Cone equality: mutual containment of generators.
    pub fn equals(&self, other: &PolyhedralCone) -> bool {
        self.dim == other.dim
            && self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g))
    }
}

/// An ordered linear space with a distinguished order unit.
#[derive(Debug, Clone)]
pub struct OrderUnitSpace {
    pub cone: PolyhedralCone,
    pub unit: Vector,
}

impl OrderUnitSpace {
    pub fn new(cone: PolyhedralCone, unit: Vector) -> Result<Self, OrdError> {
        // Order-unit property: strictly positive against every nonzero dual
        // element, i.e. against every facet normal.
        for f in cone.facets()? {
            if dot(f, &unit) <= Rat::zero() {
                return Err(OrdError::BadUnit);
            }
        }
        Ok(OrderUnitSpace { cone, unit })
    }

    /// Is `0 <= a <= u` in this order?
    pub fn is_effect(&self, a: &[Rat]) -> bool {
        self.cone.contains(a) && self.cone.contains(&vec_sub(&self.unit, a))
    }
}

/// The linear hull `E(A)` of a model together with its dual `V(A)`.
///
/// Coordinates: a maximal independent set of pure states is fixed; an
/// effect's coordinates are its evaluations at those states, a state's
/// coordinates are its expansion coefficients. The pairing is then the dot
/// product and `u` is the all-ones vector.
#[derive(Debug, Clone)]
pub struct LinearHull {
    model: Model,
    dim: usize,
    vertices: Vec<ProbWeight>,
    basis_states: Vec<usize>,
    outcome_vectors: Vec<Vector>,
    state_vectors: Vec<Vector>,
    unit: Vector,
    effects: OrderUnitSpace,
    state_cone: PolyhedralCone,
    effect_vertices: OnceLock<Vec<Vector>>,
}

impl LinearHull {
    pub fn build(model: &Model) -> Result<Self, OrdError> {
        let vertices = model.pure_states()?;
        let vertex_vecs: Vec<Vector> = vertices.iter().map(|w| w.values().to_vec()).collect();
        let basis_states = independent_subset(&vertex_vecs);
        let dim = basis_states.len();
        let n = model.test_space().outcome_count();

        // Effect coordinates: evaluations at the basis states.
        let outcome_vectors: Vec<Vector> = (0..n)
            .map(|x| {
                basis_states
                    .iter()
                    .map(|&s| vertices[s].value(x).clone())
                    .collect()
            })
            .collect();

        // Unit = sum over any test; all tests must agree.
        let unit: Vector = vec![Rat::one(); dim];
        for t in model.test_space().tests() {
            let mut sum = crate::rat::zeros(dim);
            for &x in t {
                sum = crate::rat::vec_add(&sum, &outcome_vectors[x]);
            }
            if sum != unit {
                return Err(OrdError::InconsistentUnit);
            }
        }

        // State coordinates: expansions in the basis states.
        let basis_matrix = {
            let rows: Vec<Vector> = (0..n)
                .map(|x| {
                    basis_states
                        .iter()
                        .map(|&s| vertices[s].value(x).clone())
                        .collect()
                })
                .collect();
            Matrix::from_rows(rows)
        };
        let state_vectors: Vec<Vector> = vertex_vecs
            .iter()
            .map(|w| {
                basis_matrix
                    .solve(w)
                    .expect("every pure state lies in the span of the basis states")
            })
            .collect();

        let effects = OrderUnitSpace::new(
            PolyhedralCone::new(dim, outcome_vectors.clone())?,
            unit.clone(),
        )?;
        let state_cone = PolyhedralCone::new(dim, state_vectors.clone())?;
        Ok(LinearHull {
            model: model.clone(),
            dim,
            vertices,
            basis_states,
            outcome_vectors,
            state_vectors,
            unit,
            effects,
            state_cone,
            effect_vertices: OnceLock::new(),
        })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[ProbWeight] {
        &self.vertices
    }

    /// Pure states in `V` coordinates, aligned with [`Self::vertices`].
    pub fn state_vectors(&self) -> &[Vector] {
        &self.state_vectors
    }

    pub fn outcome_vector(&self, x: usize) -> &Vector {
        &self.outcome_vectors[x]
    }

    pub fn outcome_vectors(&self) -> &[Vector] {
        &self.outcome_vectors
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn effect_space(&self) -> &OrderUnitSpace {
        &self.effects
    }

    pub fn state_cone(&self) -> &PolyhedralCone {
        &self.state_cone
    }

    /// `<a, σ>` — evaluation of an effect against a state, both in hull
    /// coordinates.
    pub fn pairing(&self, effect: &[Rat], state: &[Rat]) -> Rat {
        dot(effect, state)
    }

    /// Coordinates of an arbitrary weight in `V(A)`, if it lies in the span
    /// of the pure states.
    pub fn state_coords(&self, w: &ProbWeight) -> Option<Vector> {
        let n = self.model.test_space().outcome_count();
        let rows: Vec<Vector> = (0..n)
            .map(|x| {
                self.basis_states
                    .iter()
                    .map(|&s| self.vertices[s].value(x).clone())
                    .collect()
            })
            .collect();
        Matrix::from_rows(rows).solve(w.values())
    }

    /// The probability weight a normalized state vector induces on the test
    /// space.
    pub fn coords_to_weight(&self, state: &[Rat]) -> Result<ProbWeight, ModelError> {
        let values: Vector = self
            .outcome_vectors
            .iter()
            .map(|x| dot(x, state))
            .collect();
        ProbWeight::new(self.model.test_space(), values)
    }

    /// Vertices of the effect polytope `[0, u]`, exact, lexicographic.
    pub fn effect_polytope_vertices(&self) -> Result<&[Vector], OrdError> {
        if self.effect_vertices.get().is_none() {
            let facets = self.effects.cone.facets()?;
            let mut ineqs: Vec<(Vector, Rat)> = Vec::new();
            for f in facets {
                ineqs.push((f.clone(), Rat::zero()));
                ineqs.push((
                    f.iter().map(|c| -c.clone()).collect(),
                    -dot(f, &self.unit),
                ));
            }
            let v = polytope_vertices(self.dim, &ineqs, &[])?;
            debug_assert!(v.recession_rays.is_empty());
            let _ = self.effect_vertices.set(v.vertices);
        }
        Ok(self.effect_vertices.get().expect("just set"))
    }

    /// Positive map on `E` induced by a test-space automorphism.
    pub fn process_from_outcome_map(&self, image: &[usize]) -> Result<Process, OrdError> {
        let n = self.model.test_space().outcome_count();
        assert_eq!(image.len(), n);
        let basis = independent_subset(&self.outcome_vectors);
        let rows: Vec<Vector> = basis.iter().map(|&x| self.outcome_vectors[x].clone()).collect();
        let b = Matrix::from_rows(rows).transpose(); // columns are basis effects
        let targets: Vec<Vector> = basis
            .iter()
            .map(|&x| self.outcome_vectors[image[x]].clone())
            .collect();
        let t = Matrix::from_rows(targets).transpose();
        let m = t.mul_mat(&b.inverse().ok_or(OrdError::Singular)?);
        // Consistency beyond the basis: a genuine symmetry maps every
        // outcome vector onto its image's vector.
        for x in 0..n {
            if m.mul_vec(&self.outcome_vectors[x]) != self.outcome_vectors[image[x]] {
                return Err(OrdError::DimensionMismatch(
                    "outcome map does not extend linearly".into(),
                ));
            }
        }
        Process::new(self, self, m)
    }
}

/// Witness output of [`check_state_completeness`].
#[derive(Debug, Clone)]
pub enum Completeness {
    Complete,
    /// A normalized positive functional on `E(A)` that is not a designated
    /// state, as a probability weight.
    Incomplete(ProbWeight),
}

/// Does every normalized positive functional on `E(A)` come from a state in
/// `Ω(A)`? Decided by vertex enumeration of the dual feasible region.
pub fn check_state_completeness(hull: &LinearHull) -> Result<Completeness, OrdError> {
    let mut ineqs: Vec<(Vector, Rat)> = Vec::new();
    for x in hull.outcome_vectors() {
        ineqs.push((x.clone(), Rat::zero()));
    }
    let eqs = vec![(hull.unit().clone(), Rat::one())];
    let v = polytope_vertices(hull.dim(), &ineqs, &eqs)?;
    let known: std::collections::BTreeSet<Vector> = hull
        .state_vectors()
        .iter()
        .map(|s| s.clone())
        .collect();
    for vertex in &v.vertices {
        if !known.contains(vertex) {
            let w = hull
                .coords_to_weight(vertex)
                .expect("dual-feasible vertices are probability weights");
            return Ok(Completeness::Incomplete(w));
        }
    }
    Ok(Completeness::Complete)
}

/// A positive, sub-unital linear map between linear hulls, stored on the
/// effect spaces (Heisenberg picture). The action on states is the
/// transpose.
#[derive(Debug, Clone)]
pub struct Process {
    pub matrix: Matrix,
    source_unit: Vector,
    target_unit: Vector,
}

impl Process {
    pub fn new(source: &LinearHull, target: &LinearHull, matrix: Matrix) -> Result<Self, OrdError> {
        if matrix.cols != source.dim() || matrix.rows != target.dim() {
            return Err(OrdError::DimensionMismatch(format!(
                "matrix is {}x{}, hulls are {} -> {}",
                matrix.rows,
                matrix.cols,
                source.dim(),
                target.dim()
            )));
        }
        // Positivity: every generator of the source effect cone lands in the
        // target effect cone.
        for (i, g) in source.effect_space().cone.generators().iter().enumerate() {
            if !target.effect_space().cone.contains(&matrix.mul_vec(g)) {
                return Err(OrdError::NotPositive(i));
            }
        }
        let tu = matrix.mul_vec(source.unit());
        if !target
            .effect_space()
            .cone
            .contains(&vec_sub(target.unit(), &tu))
        {
            return Err(OrdError::NotSubUnital);
        }
        Ok(Process {
            matrix,
            source_unit: source.unit().clone(),
            target_unit: target.unit().clone(),
        })
    }

    /// Apply to an effect of the source.
    pub fn apply_effect(&self, a: &[Rat]) -> Vector {
        self.matrix.mul_vec(a)
    }

    /// Schrödinger action: apply the transpose to a state of the target.
    pub fn apply_state(&self, sigma: &[Rat]) -> Vector {
        self.matrix.transpose().mul_vec(sigma)
    }

    pub fn is_unital(&self) -> bool {
        self.matrix.mul_vec(&self.source_unit) == self.target_unit
    }
}

/// Result of a probabilistic-reversibility check.
#[derive(Debug, Clone)]
pub struct Reversibility {
    /// The inverse as a process (already scaled by `1/c`).
    pub inverse: Process,
    /// The reversal constant: the round trip succeeds with probability `1/c`.
    pub constant: Rat,
    /// True exactly when `c = 1` and the unit is preserved.
    pub reversible: bool,
}

/// If the process matrix is invertible with positive inverse, find the
/// minimal `c >= 1` making `(1/c) τ⁻¹` sub-unital.
pub fn check_prob_reversible(
    p: &Process,
    source: &LinearHull,
    target: &LinearHull,
) -> Result<Option<Reversibility>, OrdError> {
    if p.matrix.rows != p.matrix.cols {
        return Err(OrdError::DimensionMismatch(
            "reversibility needs a square matrix".into(),
        ));
    }
    let inv = p.matrix.inverse().ok_or(OrdError::Singular)?;
    // Positive inverse?
    for g in target.effect_space().cone.generators() {
        if !source.effect_space().cone.contains(&inv.mul_vec(g)) {
            return Ok(None);
        }
    }
    // Minimal c with τ⁻¹(u_B) <= c u_A, over the facets of the source cone.
    let inv_unit = inv.mul_vec(target.unit());
    let mut c = Rat::one();
    for f in source.effect_space().cone.facets()? {
        let denom = dot(f, source.unit());
        let num = dot(f, &inv_unit);
        let ratio = num / denom;
        if ratio > c {
            c = ratio;
        }
    }
    let scale = c.recip();
    let mut scaled = Matrix::zero(inv.rows, inv.cols);
    for i in 0..inv.rows {
        for j in 0..inv.cols {
            scaled[(i, j)] = &inv[(i, j)] * &scale;
        }
    }
    let inverse = Process::new(target, source, scaled)?;
    let reversible = c.is_one() && p.is_unital();
    Ok(Some(Reversibility {
        inverse,
        constant: c,
        reversible,
    }))
}

/// Hull-level direct sum, via the direct sum of the underlying models.
pub fn direct_sum(a: &LinearHull, b: &LinearHull) -> Result<LinearHull, OrdError> {
    let model = crate::testspace::direct_sum(a.model(), b.model())?;
    LinearHull::build(&model)
}
