//! Euclidean Jordan algebras as the non-polyhedral cone backend: Hermitian
//! matrices over the reals, complexes, and quaternions, plus spin factors.
//!
//! Elements are stored concretely (real symmetric, complex Hermitian,
//! symplectic-real complex Hermitian for the quaternionic case, and `(t, v)`
//! pairs for spin factors). All computation here is binary64 with stated
//! tolerances; construction-level checks use 1e-9.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub type C64 = Complex<f64>;

pub const CONSTRUCTION_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum JordanError {
    #[error("element does not belong to this Jordan system")]
    KindMismatch,
    #[error("element is not interior: minimal eigenvalue {0}")]
    NotInterior(f64),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// The four special Euclidean Jordan algebra families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JordanKind {
    /// Real symmetric `n x n` matrices.
    RealSym(usize),
    /// Complex Hermitian `n x n` matrices.
    ComplexHerm(usize),
    /// Quaternionic Hermitian `n x n` matrices, embedded as symplectic-real
    /// complex Hermitian `2n x 2n` matrices.
    QuatHerm(usize),
    /// Spin factor `R ⊕ R^n`.
    Spin(usize),
}

#[derive(Debug, Clone)]
pub enum JordanElem {
    Real(DMatrix<f64>),
    Complex(DMatrix<C64>),
    Quat(DMatrix<C64>),
    Spin(f64, DVector<f64>),
}

#[derive(Debug, Clone, Copy)]
pub struct JordanSystem {
    pub kind: JordanKind,
}

impl JordanSystem {
    pub fn new(kind: JordanKind) -> Self {
        JordanSystem { kind }
    }

    /// Real dimension of the algebra.
    pub fn dim(&self) -> usize {
        match self.kind {
            JordanKind::RealSym(n) => n * (n + 1) / 2,
            JordanKind::ComplexHerm(n) => n * n,
            JordanKind::QuatHerm(n) => n * (2 * n - 1),
            JordanKind::Spin(n) => n + 1,
        }
    }

    /// Common size of all Jordan frames.
    pub fn rank(&self) -> usize {
        match self.kind {
            JordanKind::RealSym(n) | JordanKind::ComplexHerm(n) | JordanKind::QuatHerm(n) => n,
            JordanKind::Spin(_) => 2,
        }
    }

    pub fn unit(&self) -> JordanElem {
        match self.kind {
            JordanKind::RealSym(n) => JordanElem::Real(DMatrix::identity(n, n)),
            JordanKind::ComplexHerm(n) => JordanElem::Complex(DMatrix::identity(n, n)),
            JordanKind::QuatHerm(n) => JordanElem::Quat(DMatrix::identity(2 * n, 2 * n)),
            JordanKind::Spin(n) => JordanElem::Spin(1.0, DVector::zeros(n)),
        }
    }

    pub fn zero(&self) -> JordanElem {
        match self.kind {
            JordanKind::RealSym(n) => JordanElem::Real(DMatrix::zeros(n, n)),
            JordanKind::ComplexHerm(n) => JordanElem::Complex(DMatrix::zeros(n, n)),
            JordanKind::QuatHerm(n) => JordanElem::Quat(DMatrix::zeros(2 * n, 2 * n)),
            JordanKind::Spin(n) => JordanElem::Spin(0.0, DVector::zeros(n)),
        }
    }

    /// The symmetrized product (or the spin-factor rule).
    pub fn product(&self, a: &JordanElem, b: &JordanElem) -> JordanElem {
        match (a, b) {
            (JordanElem::Real(x), JordanElem::Real(y)) => {
                JordanElem::Real((x * y + y * x) * 0.5)
            }
            (JordanElem::Complex(x), JordanElem::Complex(y)) => {
                JordanElem::Complex((x * y + y * x) * C64::new(0.5, 0.0))
            }
            (JordanElem::Quat(x), JordanElem::Quat(y)) => {
                JordanElem::Quat((x * y + y * x) * C64::new(0.5, 0.0))
            }
            (JordanElem::Spin(s, u), JordanElem::Spin(t, v)) => {
                JordanElem::Spin(s * t + u.dot(v), v * *s + u * *t)
            }
            _ => panic!("mismatched Jordan elements"),
        }
    }

    /// Canonical trace: sums of spectral eigenvalues; primitive idempotents
    /// have trace 1.
    pub fn trace(&self, a: &JordanElem) -> f64 {
        match a {
            JordanElem::Real(x) => x.trace(),
            JordanElem::Complex(x) => x.trace().re,
            JordanElem::Quat(x) => x.trace().re / 2.0,
            JordanElem::Spin(t, _) => 2.0 * t,
        }
    }

    /// Trace form `<a, b> = Tr(a ∘ b)`.
    pub fn inner(&self, a: &JordanElem, b: &JordanElem) -> f64 {
        self.trace(&self.product(a, b))
    }

    pub fn add(&self, a: &JordanElem, b: &JordanElem) -> JordanElem {
        match (a, b) {
            (JordanElem::Real(x), JordanElem::Real(y)) => JordanElem::Real(x + y),
            (JordanElem::Complex(x), JordanElem::Complex(y)) => JordanElem::Complex(x + y),
            (JordanElem::Quat(x), JordanElem::Quat(y)) => JordanElem::Quat(x + y),
            (JordanElem::Spin(s, u), JordanElem::Spin(t, v)) => JordanElem::Spin(s + t, u + v),
            _ => panic!("mismatched Jordan elements"),
        }
    }

    pub fn scale(&self, a: &JordanElem, c: f64) -> JordanElem {
        match a {
            JordanElem::Real(x) => JordanElem::Real(x * c),
            JordanElem::Complex(x) => JordanElem::Complex(x * C64::new(c, 0.0)),
            JordanElem::Quat(x) => JordanElem::Quat(x * C64::new(c, 0.0)),
            JordanElem::Spin(t, v) => JordanElem::Spin(t * c, v * c),
        }
    }

    pub fn sub(&self, a: &JordanElem, b: &JordanElem) -> JordanElem {
        self.add(a, &self.scale(b, -1.0))
    }

    pub fn norm(&self, a: &JordanElem) -> f64 {
        self.inner(a, a).max(0.0).sqrt()
    }

    /// A Gaussian random element of the algebra.
    pub fn random(&self, rng: &mut impl Rng) -> JordanElem {
        let mut g = || -> f64 {
            // Box-Muller from two uniforms.
            let u1: f64 = rng.gen_range(1e-12..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        };
        match self.kind {
            JordanKind::RealSym(n) => {
                let raw = DMatrix::from_fn(n, n, |_, _| g());
                JordanElem::Real((&raw + raw.transpose()) * 0.5)
            }
            JordanKind::ComplexHerm(n) => {
                let raw = DMatrix::from_fn(n, n, |_, _| C64::new(g(), g()));
                JordanElem::Complex((&raw + raw.adjoint()) * C64::new(0.5, 0.0))
            }
            JordanKind::QuatHerm(n) => {
                // A Hermitian, B antisymmetric; embed as [[A, B], [-B̄, Ā]].
                let raw_a = DMatrix::from_fn(n, n, |_, _| C64::new(g(), g()));
                let a = (&raw_a + raw_a.adjoint()) * C64::new(0.5, 0.0);
                let raw_b = DMatrix::from_fn(n, n, |_, _| C64::new(g(), g()));
                let b = (&raw_b - raw_b.transpose()) * C64::new(0.5, 0.0);
                JordanElem::Quat(embed_quat(&a, &b))
            }
            JordanKind::Spin(n) => JordanElem::Spin(g(), DVector::from_fn(n, |_, _| g())),
        }
    }

    /// A random interior (strictly positive) element: `x² + ε u`.
    pub fn random_interior(&self, rng: &mut impl Rng) -> JordanElem {
        let x = self.random(rng);
        let sq = self.product(&x, &x);
        self.add(&sq, &self.scale(&self.unit(), 0.3))
    }

    /// Spectral decomposition `a = Σ t_e e` over a Jordan frame.
    ///
    /// Matrix kinds build eigenprojectors as polynomials in the matrix from
    /// the (clustered) eigenvalues, then split each cluster projector into
    /// primitive idempotents. Eigenvector output of the underlying QR
    /// iteration is never used: it can silently degrade on the paired
    /// spectra the quaternionic embedding always produces.
    pub fn spectral_decompose(&self, a: &JordanElem) -> (Vec<JordanElem>, Vec<f64>) {
        match a {
            JordanElem::Real(x) => {
                let xc = x.map(|v| C64::new(v, 0.0));
                let (frame, vals) = hermitian_frame(&xc, 1);
                (
                    frame
                        .into_iter()
                        .map(|p| JordanElem::Real(p.map(|c| c.re)))
                        .collect(),
                    vals,
                )
            }
            JordanElem::Complex(x) => {
                let (frame, vals) = hermitian_frame(x, 1);
                (frame.into_iter().map(JordanElem::Complex).collect(), vals)
            }
            JordanElem::Quat(x) => {
                let (frame, vals) = hermitian_frame(x, 2);
                (frame.into_iter().map(JordanElem::Quat).collect(), vals)
            }
            JordanElem::Spin(t, v) => {
                let nv = v.norm();
                let dir = if nv < 1e-14 {
                    let mut e = DVector::zeros(v.len());
                    e[0] = 1.0;
                    e
                } else {
                    v / nv
                };
                let e_plus = JordanElem::Spin(0.5, &dir * 0.5);
                let e_minus = JordanElem::Spin(0.5, &dir * -0.5);
                (vec![e_plus, e_minus], vec![t + nv, t - nv])
            }
        }
    }

    /// Apply a scalar function through the spectral decomposition.
    pub fn spectral_map(&self, a: &JordanElem, f: impl Fn(f64) -> f64) -> JordanElem {
        let (frame, vals) = self.spectral_decompose(a);
        let mut acc = self.zero();
        for (e, t) in frame.iter().zip(&vals) {
            acc = self.add(&acc, &self.scale(e, f(*t)));
        }
        acc
    }

    pub fn min_eigenvalue(&self, a: &JordanElem) -> f64 {
        let (_, vals) = self.spectral_decompose(a);
        vals.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn is_positive(&self, a: &JordanElem, tol: f64) -> bool {
        self.min_eigenvalue(a) >= -tol
    }

    /// Quadratic representation `P(c)x = 2 c∘(c∘x) − c²∘x`.
    pub fn quad_rep(&self, c: &JordanElem, x: &JordanElem) -> JordanElem {
        let cx = self.product(c, x);
        let ccx = self.product(c, &cx);
        let c2 = self.product(c, c);
        let c2x = self.product(&c2, x);
        self.sub(&self.scale(&ccx, 2.0), &c2x)
    }

    /// Order-automorphism `g = P(b^{1/2}) P(a^{-1/2})` with `g(a) = b`, for
    /// interior `a`, `b`.
    pub fn homogeneity_witness(
        &self,
        a: &JordanElem,
        b: &JordanElem,
    ) -> Result<HomogeneityWitness, JordanError> {
        let min_a = self.min_eigenvalue(a);
        let min_b = self.min_eigenvalue(b);
        if min_a <= CONSTRUCTION_TOL {
            return Err(JordanError::NotInterior(min_a));
        }
        if min_b <= CONSTRUCTION_TOL {
            return Err(JordanError::NotInterior(min_b));
        }
        let a_inv_sqrt = self.spectral_map(a, |t| 1.0 / t.sqrt());
        let b_sqrt = self.spectral_map(b, |t| t.sqrt());
        Ok(HomogeneityWitness {
            system: *self,
            a_inv_sqrt,
            b_sqrt,
        })
    }

    /// Verify self-duality of the cone of squares with respect to a bilinear
    /// form, by sampling: squares must pair nonnegatively, and any element
    /// pairing nonnegatively with all sampled squares must itself be
    /// (nearly) positive.
    pub fn self_duality_check_with(
        &self,
        samples: usize,
        seed: u64,
        form: impl Fn(&JordanElem, &JordanElem) -> f64,
    ) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let squares: Vec<JordanElem> = (0..samples)
            .map(|_| {
                let x = self.random(&mut rng);
                self.product(&x, &x)
            })
            .collect();
        // E_+ ⊆ E^+ : squares pair nonnegatively with squares.
        for s in &squares {
            for t in &squares {
                if form(s, t) < -CONSTRUCTION_TOL {
                    return false;
                }
            }
        }
        // E^+ ⊆ E_+ : an element with a negative eigenvalue must pair
        // negatively with some square. The spectral projector onto the
        // negative eigenvector is itself a square and is the canonical
        // witness; sampled squares are tried as well.
        for _ in 0..samples {
            let a = self.random(&mut rng);
            let (frame, vals) = self.spectral_decompose(&a);
            let Some(neg) = vals.iter().position(|t| *t < -1e-6) else {
                continue;
            };
            let witnesses = squares.iter().chain(std::iter::once(&frame[neg]));
            let rejected = witnesses.into_iter().any(|s| form(&a, s) < -CONSTRUCTION_TOL);
            if !rejected {
                return false;
            }
        }
        true
    }

    /// Self-duality with respect to the canonical trace form.
    pub fn self_duality_check(&self, samples: usize, seed: u64) -> bool {
        self.self_duality_check_with(samples, seed, |a, b| self.inner(a, b))
    }
}

/// The order-automorphism produced by [`JordanSystem::homogeneity_witness`].
#[derive(Debug, Clone)]
pub struct HomogeneityWitness {
    system: JordanSystem,
    a_inv_sqrt: JordanElem,
    b_sqrt: JordanElem,
}

impl HomogeneityWitness {
    pub fn apply(&self, x: &JordanElem) -> JordanElem {
        let inner = self.system.quad_rep(&self.a_inv_sqrt, x);
        self.system.quad_rep(&self.b_sqrt, &inner)
    }
}

/// Frame of a Hermitian matrix via eigenvalue clustering and polynomial
/// spectral projectors. `line_dim` is the complex dimension of a primitive
/// idempotent's range: 1 for real/complex kinds, 2 for the quaternionic
/// embedding (Kramers pairs).
fn hermitian_frame(x: &DMatrix<C64>, line_dim: usize) -> (Vec<DMatrix<C64>>, Vec<f64>) {
    let dim = x.nrows();
    let mut eigenvalues = x.clone().symmetric_eigen().eigenvalues.as_slice().to_vec();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let scale = eigenvalues
        .iter()
        .fold(1.0f64, |acc, v| acc.max(v.abs()));
    let tol = 1e-7 * scale;
    // Cluster equal-within-tolerance eigenvalues.
    let mut clusters: Vec<(f64, usize)> = Vec::new(); // (mean, multiplicity)
    for &v in &eigenvalues {
        match clusters.last_mut() {
            Some((mean, count)) if (v - *mean).abs() <= tol => {
                *mean = (*mean * *count as f64 + v) / (*count as f64 + 1.0);
                *count += 1;
            }
            _ => clusters.push((v, 1)),
        }
    }
    let id = DMatrix::<C64>::identity(dim, dim);
    let mut frame = Vec::new();
    let mut vals = Vec::new();
    for (ci, &(lambda, mult)) in clusters.iter().enumerate() {
        // P = Π_{j≠i} (X − μ_j) / (λ − μ_j): the spectral projector of the
        // cluster, exact in the eigenvalues and independent of eigenvectors.
        let mut p = id.clone();
        for (cj, &(mu, _)) in clusters.iter().enumerate() {
            if cj == ci {
                continue;
            }
            p = &p * &((x - &id * C64::new(mu, 0.0)) / C64::new(lambda - mu, 0.0));
        }
        // Split into primitive idempotents of rank `line_dim`.
        let lines = mult / line_dim;
        let mut chosen: Vec<DVector<C64>> = Vec::new();
        for _ in 0..lines {
            // A range vector of P orthogonal to the lines already taken.
            let mut u: Option<DVector<C64>> = None;
            for k in 0..dim {
                let mut cand = p.column(k).clone_owned();
                for c in &chosen {
                    let ov = c.dotc(&cand);
                    cand -= c * ov;
                }
                let n = cand.norm();
                if n > 1e-6 {
                    u = Some(cand / C64::new(n, 0.0));
                    break;
                }
            }
            let Some(u) = u else { break };
            if line_dim == 1 {
                frame.push(&u * u.adjoint());
                vals.push(lambda);
                chosen.push(u);
            } else {
                // Quaternionic line: span{u, J ū}.
                let mut w = apply_j(&u.map(|c| c.conj()));
                let ov = u.dotc(&w);
                w -= &u * ov;
                for c in &chosen {
                    let ov = c.dotc(&w);
                    w -= c * ov;
                }
                let n = w.norm();
                debug_assert!(n > 1e-6, "Kramers partner degenerated");
                w /= C64::new(n, 0.0);
                frame.push(&u * u.adjoint() + &w * w.adjoint());
                vals.push(lambda);
                chosen.push(u);
                chosen.push(w);
            }
        }
    }
    (frame, vals)
}

fn embed_quat(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = a[(i, j)];
            m[(i, n + j)] = b[(i, j)];
            m[(n + i, j)] = -b[(i, j)].conj();
            m[(n + i, n + j)] = a[(i, j)].conj();
        }
    }
    m
}

/// `J v` for the symplectic form `J = [[0, I], [-I, 0]]`.
fn apply_j(v: &DVector<C64>) -> DVector<C64> {
    let m = v.len();
    let n = m / 2;
    DVector::from_fn(m, |i, _| if i < n { v[n + i] } else { -v[i - n] })
}

// ---------------------------------------------------------------------------
// Quantum models

/// A Jordan system viewed as a probabilistic model: states are unit-trace
/// positive elements, effects lie in `[0, u]`, tests are Jordan frames
/// (parameterized, not enumerated).
#[derive(Debug, Clone, Copy)]
pub struct QuantumModel {
    pub system: JordanSystem,
}

impl QuantumModel {
    pub fn new(system: JordanSystem) -> Self {
        QuantumModel { system }
    }

    pub fn probability(&self, rho: &JordanElem, effect: &JordanElem) -> f64 {
        self.system.inner(rho, effect)
    }

    /// Outcome distribution of a frame in a state.
    pub fn frame_distribution(&self, rho: &JordanElem, frame: &[JordanElem]) -> Vec<f64> {
        frame.iter().map(|e| self.probability(rho, e)).collect()
    }

    /// A random density element: normalized square.
    pub fn random_state(&self, rng: &mut impl Rng) -> JordanElem {
        let x = self.system.random(rng);
        let sq = self.system.product(&x, &x);
        let t = self.system.trace(&sq);
        self.system.scale(&sq, 1.0 / t.max(1e-12))
    }
}

#[derive(Debug, Clone)]
pub struct ModelCheckReport {
    pub frames_checked: usize,
    pub uniform_rank: bool,
    pub outcomes_primitive: bool,
    pub sharp: bool,
    pub max_residual: f64,
}

/// Verify on sampled frames that outcomes are primitive idempotents, that
/// frames have constant size equal to the rank, and that the model is sharp
/// (the unique state assigning an outcome probability 1 is the outcome
/// itself, by Cauchy-Schwarz saturation).
pub fn jordan_model_checks(model: &QuantumModel, frames: usize, seed: u64) -> ModelCheckReport {
    let sys = model.system;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut uniform_rank = true;
    let mut outcomes_primitive = true;
    let mut sharp = true;
    let mut max_residual: f64 = 0.0;
    for _ in 0..frames {
        let x = sys.random(&mut rng);
        let (frame, _) = sys.spectral_decompose(&x);
        if frame.len() != sys.rank() {
            uniform_rank = false;
        }
        let mut sum = sys.zero();
        for e in &frame {
            // e∘e = e and Tr e = 1.
            let idem = sys.norm(&sys.sub(&sys.product(e, e), e));
            let tr = (sys.trace(e) - 1.0).abs();
            max_residual = max_residual.max(idem).max(tr);
            if idem > CONSTRUCTION_TOL || tr > CONSTRUCTION_TOL {
                outcomes_primitive = false;
            }
            sum = sys.add(&sum, e);
        }
        let unit_res = sys.norm(&sys.sub(&sum, &sys.unit()));
        max_residual = max_residual.max(unit_res);
        // Sharpness: a random state assigning e probability close to 1 must
        // be close to e; equivalently <ρ, e> < 1 strictly away from ρ = e.
        for e in frame.iter().take(2) {
            let rho = model.random_state(&mut rng);
            let p = model.probability(&rho, e);
            if p > 1.0 + CONSTRUCTION_TOL {
                sharp = false;
            }
            let dist = sys.norm(&sys.sub(&rho, e));
            if (p - 1.0).abs() < 1e-12 && dist > 1e-6 {
                sharp = false;
            }
        }
    }
    ModelCheckReport {
        frames_checked: frames,
        uniform_rank,
        outcomes_primitive,
        sharp,
        max_residual,
    }
}

// ---------------------------------------------------------------------------
// Purification

/// A pure bipartite state on `H ⊗ H̄` purifying a density matrix `W`; its
/// coefficient matrix in the basis-times-conjugate-basis representation is
/// exactly `W^{1/2}`.
#[derive(Debug, Clone)]
pub struct PurifiedState {
    pub coeff: DMatrix<C64>,
}

pub fn purify(w: &DMatrix<C64>) -> Result<PurifiedState, JordanError> {
    let sys = JordanSystem::new(JordanKind::ComplexHerm(w.nrows()));
    let elem = JordanElem::Complex(w.clone());
    let tr = sys.trace(&elem);
    if (tr - 1.0).abs() > CONSTRUCTION_TOL {
        return Err(JordanError::Numerical(format!(
            "density must have unit trace, got {tr}"
        )));
    }
    if sys.min_eigenvalue(&elem) < -CONSTRUCTION_TOL {
        return Err(JordanError::Numerical("density must be positive".into()));
    }
    let sqrt = sys.spectral_map(&elem, |t| t.max(0.0).sqrt());
    let JordanElem::Complex(coeff) = sqrt else {
        unreachable!()
    };
    Ok(PurifiedState { coeff })
}

impl PurifiedState {
    /// Marginal over the conjugate factor: `C C*`, which equals `W`.
    pub fn marginal(&self) -> DMatrix<C64> {
        &self.coeff * self.coeff.adjoint()
    }

    /// Joint probability of outcome `y` on the first factor and the
    /// conjugate-factor outcome labeled `x̄'`, passed by its defining vector
    /// `x'`: `|y* C x'|²`.
    pub fn joint_probability(&self, y: &DVector<C64>, x: &DVector<C64>) -> f64 {
        let amp = (y.adjoint() * &self.coeff * x)[(0, 0)];
        amp.norm_sqr()
    }
}

// ---------------------------------------------------------------------------
// Local tomography dimension counts

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TomographyDims {
    pub dim_a: u64,
    pub dim_b: u64,
    pub dim_composite: u64,
    pub locally_tomographic: bool,
}

/// Exact integer dimension counts for matrix-kind composites: complex
/// systems compose locally tomographically, real ones do not.
pub fn local_tomography_dimensions(kind_a: JordanKind, kind_b: JordanKind) -> Option<TomographyDims> {
    let herm_dim = |k: JordanKind| -> Option<(u64, bool)> {
        match k {
            JordanKind::RealSym(n) => Some(((n as u64) * (n as u64 + 1) / 2, true)),
            JordanKind::ComplexHerm(n) => Some(((n as u64) * (n as u64), false)),
            _ => None,
        }
    };
    let size = |k: JordanKind| -> u64 {
        match k {
            JordanKind::RealSym(n) | JordanKind::ComplexHerm(n) => n as u64,
            _ => 0,
        }
    };
    let (da, real_a) = herm_dim(kind_a)?;
    let (db, real_b) = herm_dim(kind_b)?;
    if real_a != real_b {
        return None;
    }
    let mn = size(kind_a) * size(kind_b);
    let dim_composite = if real_a { mn * (mn + 1) / 2 } else { mn * mn };
    Some(TomographyDims {
        dim_a: da,
        dim_b: db,
        dim_composite,
        locally_tomographic: dim_composite == da * db,
    })
}

// ---------------------------------------------------------------------------
// Trace-form factorization on complex composites

#[derive(Debug, Clone)]
pub struct FactorizationReport {
    pub trace_factorizes: bool,
    pub unit_compatibility: bool,
    pub rank_one_products_primitive: bool,
    pub max_residual: f64,
}

/// On `ComplexHerm(n · m)`: `<x⊗y, a⊗b> = <x,a><y,b>`, the compatibility
/// `(a⊗1)∘(b⊗1) = (a∘b)⊗1`, and primitivity of rank-one product
/// idempotents, all on random samples.
pub fn trace_form_factorization_check(n: usize, m: usize, samples: usize, seed: u64) -> FactorizationReport {
    let sys_a = JordanSystem::new(JordanKind::ComplexHerm(n));
    let sys_b = JordanSystem::new(JordanKind::ComplexHerm(m));
    let sys_ab = JordanSystem::new(JordanKind::ComplexHerm(n * m));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual: f64 = 0.0;
    let mut trace_factorizes = true;
    let mut unit_compatibility = true;
    let mut rank_one_products_primitive = true;
    for _ in 0..samples {
        let (JordanElem::Complex(x), JordanElem::Complex(a)) =
            (sys_a.random(&mut rng), sys_a.random(&mut rng))
        else {
            unreachable!()
        };
        let (JordanElem::Complex(y), JordanElem::Complex(b)) =
            (sys_b.random(&mut rng), sys_b.random(&mut rng))
        else {
            unreachable!()
        };
        // <x⊗y, a⊗b> = <x,a> <y,b>.
        let lhs = sys_ab.inner(
            &JordanElem::Complex(x.kronecker(&y)),
            &JordanElem::Complex(a.kronecker(&b)),
        );
        let rhs = sys_a.inner(&JordanElem::Complex(x.clone()), &JordanElem::Complex(a.clone()))
            * sys_b.inner(&JordanElem::Complex(y.clone()), &JordanElem::Complex(b.clone()));
        let r1 = (lhs - rhs).abs();
        if r1 > CONSTRUCTION_TOL * 100.0 {
            trace_factorizes = false;
        }
        // (a⊗1)∘(b'⊗1) = (a∘b')⊗1 with b' another n x n Hermitian.
        let JordanElem::Complex(b2) = sys_a.random(&mut rng) else {
            unreachable!()
        };
        let eye_m = DMatrix::<C64>::identity(m, m);
        let left = sys_ab.product(
            &JordanElem::Complex(a.kronecker(&eye_m)),
            &JordanElem::Complex(b2.kronecker(&eye_m)),
        );
        let prod = sys_a.product(&JordanElem::Complex(a.clone()), &JordanElem::Complex(b2));
        let JordanElem::Complex(prod_m) = prod else {
            unreachable!()
        };
        let right = JordanElem::Complex(prod_m.kronecker(&eye_m));
        let r2 = sys_ab.norm(&sys_ab.sub(&left, &right));
        if r2 > CONSTRUCTION_TOL * 100.0 {
            unit_compatibility = false;
        }
        max_residual = max_residual.max(r1).max(r2);
    }
    // Rank-one products of primitive idempotents are primitive idempotents.
    for _ in 0..samples.min(50) {
        let xa = sys_a.random(&mut rng);
        let yb = sys_b.random(&mut rng);
        let (fa, _) = sys_a.spectral_decompose(&xa);
        let (fb, _) = sys_b.spectral_decompose(&yb);
        let (JordanElem::Complex(ea), JordanElem::Complex(eb)) = (&fa[0], &fb[0]) else {
            unreachable!()
        };
        let prod = JordanElem::Complex(ea.kronecker(eb));
        let idem = sys_ab.norm(&sys_ab.sub(&sys_ab.product(&prod, &prod), &prod));
        let tr = (sys_ab.trace(&prod) - 1.0).abs();
        max_residual = max_residual.max(idem).max(tr);
        if idem > CONSTRUCTION_TOL * 100.0 || tr > CONSTRUCTION_TOL * 100.0 {
            rank_one_products_primitive = false;
        }
    }
    FactorizationReport {
        trace_factorizes,
        unit_compatibility,
        rank_one_products_primitive,
        max_residual,
    }
}

/// Residual of the snake equations for the maximally entangled state on
/// `H ⊗ H̄` with its matching scaled effect.
///
/// The conditioning map of `Ψ = Σ_x x ⊗ x̄ / √n` sends a Hermitian `a` to
/// the un-normalized conditional `η̂(a)(b) = Tr(P_Ψ (a ⊗ bᵀ))`; the matching
/// co-conditioning map is `ε̂ = n · η̂⁻¹`-normalized, i.e. the effect form
/// scaled by `n` exactly as in the classical uniform-correlator pair. Both
/// maps are built numerically from `P_Ψ` on a basis of Hermitians and the
/// two composites are compared against the identity.
pub fn maximally_entangled_snake_residual(n: usize) -> f64 {
    // Ψ coefficient matrix is I/√n; P_Ψ acts on H ⊗ H̄ = C^{n²}.
    let dim = n * n;
    let mut psi = DVector::zeros(dim);
    for i in 0..n {
        psi[i * n + i] = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    }
    let proj = &psi * psi.adjoint();
    // Hermitian basis of L_h(C^n): E_ii, symmetric and antisymmetric pairs.
    let mut basis: Vec<DMatrix<C64>> = Vec::new();
    for i in 0..n {
        let mut m = DMatrix::zeros(n, n);
        m[(i, i)] = C64::new(1.0, 0.0);
        basis.push(m);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut s = DMatrix::zeros(n, n);
            s[(i, j)] = C64::new(1.0, 0.0);
            s[(j, i)] = C64::new(1.0, 0.0);
            basis.push(s);
            let mut a = DMatrix::zeros(n, n);
            a[(i, j)] = C64::new(0.0, 1.0);
            a[(j, i)] = C64::new(0.0, -1.0);
            basis.push(a);
        }
    }
    let d = basis.len();
    // Gram matrix of the trace form (the basis is orthogonal but not
    // normalized uniformly).
    let gram: Vec<f64> = basis.iter().map(|b| (b * b).trace().re).collect();
    // η̂ in basis coordinates: η̂(a) = Σ_k [Tr(P_Ψ (a ⊗ b_kᵀ)) / gram_k] b_k.
    let eval = |a: &DMatrix<C64>, b: &DMatrix<C64>| -> f64 {
        let big = a.kronecker(&b.transpose());
        (&proj * big).trace().re
    };
    let mut eta = DMatrix::<f64>::zeros(d, d);
    for (col, a) in basis.iter().enumerate() {
        for (row, b) in basis.iter().enumerate() {
            eta[(row, col)] = eval(a, b) / gram[row];
        }
    }
    let eps = eta.transpose() * (n as f64) * (n as f64);
    let id = DMatrix::<f64>::identity(d, d);
    let r1 = (&eps * &eta - &id).norm();
    let r2 = (&eta * &eps - &id).norm();
    r1.max(r2)
}

// ---------------------------------------------------------------------------
// Quantum CHSH

/// Two-qubit CHSH with X-Z-plane projective measurements on an arbitrary
/// density matrix: effects `a(θ) = (1 + cosθ Z + sinθ X)/2` per side.
pub fn quantum_chsh(rho: &DMatrix<C64>, angles: [f64; 4]) -> f64 {
    let obs = |theta: f64| -> DMatrix<C64> {
        DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(theta.cos(), 0.0),
                C64::new(theta.sin(), 0.0),
                C64::new(theta.sin(), 0.0),
                C64::new(-theta.cos(), 0.0),
            ],
        )
    };
    let corr = |ta: f64, tb: f64| -> f64 {
        let ab = obs(ta).kronecker(&obs(tb));
        (rho * ab).trace().re
    };
    corr(angles[0], angles[2]) + corr(angles[0], angles[3]) + corr(angles[1], angles[2])
        - corr(angles[1], angles[3])
}

/// The singlet state `|ψ⁻⟩⟨ψ⁻|`.
pub fn singlet() -> DMatrix<C64> {
    let s = 1.0 / 2f64.sqrt();
    let psi = DVector::from_vec(vec![
        C64::new(0.0, 0.0),
        C64::new(s, 0.0),
        C64::new(-s, 0.0),
        C64::new(0.0, 0.0),
    ]);
    &psi * psi.adjoint()
}

/// Golden-section refinement of the CHSH value over measurement angles,
/// coordinate-wise, starting from the canonical optimal configuration.
pub fn quantum_chsh_optimize(rho: &DMatrix<C64>) -> (f64, [f64; 4]) {
    let mut angles = [
        0.0,
        std::f64::consts::FRAC_PI_2,
        5.0 * std::f64::consts::FRAC_PI_4,
        3.0 * std::f64::consts::FRAC_PI_4,
    ];
    let mut best = quantum_chsh(rho, angles);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _round in 0..6 {
        for i in 0..4 {
            let mut lo = angles[i] - 0.5;
            let mut hi = angles[i] + 0.5;
            for _ in 0..40 {
                let x1 = hi - phi * (hi - lo);
                let x2 = lo + phi * (hi - lo);
                let mut a1 = angles;
                a1[i] = x1;
                let mut a2 = angles;
                a2[i] = x2;
                if quantum_chsh(rho, a1) > quantum_chsh(rho, a2) {
                    hi = x2;
                } else {
                    lo = x1;
                }
            }
            angles[i] = 0.5 * (lo + hi);
            best = quantum_chsh(rho, angles);
        }
    }
    (best, angles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn all_systems() -> Vec<JordanSystem> {
        vec![
            JordanSystem::new(JordanKind::RealSym(3)),
            JordanSystem::new(JordanKind::ComplexHerm(2)),
            JordanSystem::new(JordanKind::ComplexHerm(3)),
            JordanSystem::new(JordanKind::QuatHerm(2)),
            JordanSystem::new(JordanKind::Spin(3)),
            JordanSystem::new(JordanKind::Spin(5)),
        ]
    }

    #[test]
    fn jordan_axioms_on_random_triples() {
        for sys in all_systems() {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let mut max_res: f64 = 0.0;
            for _ in 0..200 {
                let a = sys.random(&mut rng);
                let b = sys.random(&mut rng);
                let c = sys.random(&mut rng);
                // Commutativity.
                let comm = sys.norm(&sys.sub(&sys.product(&a, &b), &sys.product(&b, &a)));
                // Jordan identity a²∘(b∘a) = (a²∘b)∘a.
                let a2 = sys.product(&a, &a);
                let lhs = sys.product(&a2, &sys.product(&b, &a));
                let rhs = sys.product(&sys.product(&a2, &b), &a);
                let jid = sys.norm(&sys.sub(&lhs, &rhs));
                // Trace associativity <a∘b, c> = <a, b∘c>.
                let t1 = sys.inner(&sys.product(&a, &b), &c);
                let t2 = sys.inner(&a, &sys.product(&b, &c));
                let tres = (t1 - t2).abs();
                max_res = max_res.max(comm).max(jid).max(tres);
            }
            assert!(max_res < 1e-8, "{:?}: residual {max_res}", sys.kind);
        }
    }

    #[test]
    fn spectral_reconstruction_and_orthogonality() {
        for sys in all_systems() {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..20 {
                let a = sys.random(&mut rng);
                let (frame, vals) = sys.spectral_decompose(&a);
                assert_eq!(frame.len(), sys.rank());
                let mut acc = sys.zero();
                for (e, t) in frame.iter().zip(&vals) {
                    acc = sys.add(&acc, &sys.scale(e, *t));
                }
                assert!(
                    sys.norm(&sys.sub(&acc, &a)) < 1e-9,
                    "reconstruction failed for {:?}",
                    sys.kind
                );
                for i in 0..frame.len() {
                    for j in 0..frame.len() {
                        let p = sys.product(&frame[i], &frame[j]);
                        let expect = if i == j { frame[i].clone() } else { sys.zero() };
                        assert!(sys.norm(&sys.sub(&p, &expect)) < 1e-9);
                    }
                }
                // Frames resolve the unit and have unit traces.
                let mut sum = sys.zero();
                for e in &frame {
                    assert_relative_eq!(sys.trace(e), 1.0, epsilon = 1e-9);
                    sum = sys.add(&sum, e);
                }
                assert!(sys.norm(&sys.sub(&sum, &sys.unit())) < 1e-9);
            }
        }
    }

    #[test]
    fn spectral_unit_and_diagonal() {
        let sys = JordanSystem::new(JordanKind::ComplexHerm(2));
        let (_, vals) = sys.spectral_decompose(&sys.unit());
        assert_relative_eq!(vals[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(vals[1], 1.0, epsilon = 1e-12);
        // diag(3, -1).
        let d = JordanElem::Complex(DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(3.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(-1.0, 0.0),
            ],
        ));
        let (_, mut vals) = sys.spectral_decompose(&d);
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_relative_eq!(vals[0], -1.0, epsilon = 1e-12);
        assert_relative_eq!(vals[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn spin_factor_closed_form() {
        let sys = JordanSystem::new(JordanKind::Spin(3));
        let v = DVector::from_vec(vec![1.0, 2.0, -2.0]); // norm 3
        let a = JordanElem::Spin(0.5, v);
        let (frame, vals) = sys.spectral_decompose(&a);
        assert_relative_eq!(vals[0], 3.5, epsilon = 1e-12);
        assert_relative_eq!(vals[1], -2.5, epsilon = 1e-12);
        for e in &frame {
            let idem = sys.norm(&sys.sub(&sys.product(e, e), e));
            assert!(idem < 1e-12);
        }
    }

    #[test]
    fn dimensions_and_ranks() {
        assert_eq!(JordanSystem::new(JordanKind::RealSym(3)).dim(), 6);
        assert_eq!(JordanSystem::new(JordanKind::ComplexHerm(2)).dim(), 4);
        assert_eq!(JordanSystem::new(JordanKind::QuatHerm(2)).dim(), 6);
        assert_eq!(JordanSystem::new(JordanKind::Spin(4)).dim(), 5);
        assert_eq!(JordanSystem::new(JordanKind::QuatHerm(3)).dim(), 15);
        assert_eq!(JordanSystem::new(JordanKind::Spin(5)).rank(), 2);
    }

    #[test]
    fn quadratic_representation_preserves_positivity() {
        for sys in all_systems() {
            let mut rng = ChaCha8Rng::seed_from_u64(23);
            for _ in 0..20 {
                let c = sys.random_interior(&mut rng);
                let x = sys.random(&mut rng);
                let pos = sys.product(&x, &x);
                let image = sys.quad_rep(&c, &pos);
                assert!(
                    sys.min_eigenvalue(&image) > -1e-8,
                    "P(c) left the cone for {:?}",
                    sys.kind
                );
            }
        }
    }

    #[test]
    fn homogeneity_witness_maps_a_to_b() {
        for sys in all_systems() {
            let mut rng = ChaCha8Rng::seed_from_u64(31);
            for _ in 0..10 {
                let a = sys.random_interior(&mut rng);
                let b = sys.random_interior(&mut rng);
                let g = sys.homogeneity_witness(&a, &b).unwrap();
                let image = g.apply(&a);
                assert!(
                    sys.norm(&sys.sub(&image, &b)) < 1e-8,
                    "g(a) != b for {:?}",
                    sys.kind
                );
                // g maps sampled cone elements into the cone.
                for _ in 0..5 {
                    let x = sys.random(&mut rng);
                    let sq = sys.product(&x, &x);
                    assert!(sys.min_eigenvalue(&g.apply(&sq)) > -1e-8);
                }
            }
        }
    }

    #[test]
    fn homogeneity_witness_trivial_cases() {
        let sys = JordanSystem::new(JordanKind::RealSym(3));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let b = sys.random_interior(&mut rng);
        // a = u: g = P(b^{1/2}), g(u) = b.
        let g = sys.homogeneity_witness(&sys.unit(), &b).unwrap();
        assert!(sys.norm(&sys.sub(&g.apply(&sys.unit()), &b)) < 1e-9);
        // a = b: g(a) = a.
        let g2 = sys.homogeneity_witness(&b, &b).unwrap();
        assert!(sys.norm(&sys.sub(&g2.apply(&b), &b)) < 1e-9);
    }

    #[test]
    fn homogeneity_witness_rejects_boundary() {
        let sys = JordanSystem::new(JordanKind::ComplexHerm(2));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = sys.random(&mut rng);
        let boundary = {
            // A rank-one projector is on the cone boundary.
            let (frame, _) = sys.spectral_decompose(&x);
            frame[0].clone()
        };
        let b = sys.random_interior(&mut rng);
        assert!(matches!(
            sys.homogeneity_witness(&boundary, &b),
            Err(JordanError::NotInterior(_))
        ));
    }

    #[test]
    fn self_duality_of_standard_systems() {
        for sys in all_systems() {
            assert!(sys.self_duality_check(60, 17), "{:?}", sys.kind);
        }
    }

    #[test]
    fn skewed_form_fails_self_duality() {
        // Spin(2) with the v-components scaled asymmetrically: squares no
        // longer pair nonnegatively.
        let sys = JordanSystem::new(JordanKind::Spin(2));
        let skew = |a: &JordanElem, b: &JordanElem| -> f64 {
            let (JordanElem::Spin(s, u), JordanElem::Spin(t, v)) = (a, b) else {
                unreachable!()
            };
            2.0 * (s * t + 9.0 * u[0] * v[0] + u[1] * v[1] / 9.0)
        };
        assert!(!sys.self_duality_check_with(60, 17, skew));
    }

    #[test]
    fn purification_marginal_and_correlation() {
        // W = diag(3/4, 1/4).
        let w = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.75, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.25, 0.0),
            ],
        );
        let psi = purify(&w).unwrap();
        assert!((psi.marginal() - &w).norm() < 1e-12);
        let e0 = DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let e1 = DVector::from_vec(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        assert_relative_eq!(psi.joint_probability(&e0, &e0), 0.75, epsilon = 1e-12);
        assert_relative_eq!(psi.joint_probability(&e1, &e1), 0.25, epsilon = 1e-12);
        assert_relative_eq!(psi.joint_probability(&e0, &e1), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn purification_pure_state_is_product() {
        let e0 = DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let w = &e0 * e0.adjoint();
        let psi = purify(&w).unwrap();
        // Coefficient matrix W^{1/2} = W has rank one: a product vector.
        assert!(psi.coeff.rank(1e-10) == 1);
    }

    #[test]
    fn maximally_mixed_purification_correlates_every_basis() {
        let n = 2;
        let w = DMatrix::<C64>::identity(n, n) * C64::new(0.5, 0.0);
        let psi = purify(&w).unwrap();
        let sys = JordanSystem::new(JordanKind::ComplexHerm(n));
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10 {
            let x = sys.random(&mut rng);
            let JordanElem::Complex(m) = x else { unreachable!() };
            let eig = m.symmetric_eigen();
            for k in 0..n {
                let v = eig.eigenvectors.column(k).clone_owned();
                // η(x, γ(x)) = 1/n for every frame outcome (the conjugate
                // correlator), and cross terms vanish.
                assert_relative_eq!(
                    psi.joint_probability(&v, &v),
                    1.0 / n as f64,
                    epsilon = 1e-9
                );
                for k2 in 0..n {
                    if k2 != k {
                        let v2 = eig.eigenvectors.column(k2).clone_owned();
                        assert_relative_eq!(
                            psi.joint_probability(&v, &v2),
                            0.0,
                            epsilon = 1e-9
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn tomography_dimension_counts() {
        let c22 = local_tomography_dimensions(
            JordanKind::ComplexHerm(2),
            JordanKind::ComplexHerm(2),
        )
        .unwrap();
        assert_eq!((c22.dim_a, c22.dim_b, c22.dim_composite), (4, 4, 16));
        assert!(c22.locally_tomographic);
        let r22 =
            local_tomography_dimensions(JordanKind::RealSym(2), JordanKind::RealSym(2)).unwrap();
        assert_eq!((r22.dim_a, r22.dim_b, r22.dim_composite), (3, 3, 10));
        assert!(!r22.locally_tomographic);
        let c23 = local_tomography_dimensions(
            JordanKind::ComplexHerm(2),
            JordanKind::ComplexHerm(3),
        )
        .unwrap();
        assert_eq!(c23.dim_composite, 36);
        assert!(c23.locally_tomographic);
    }

    #[test]
    fn model_checks_on_matrix_and_spin_systems() {
        for kind in [
            JordanKind::ComplexHerm(2),
            JordanKind::RealSym(3),
            JordanKind::Spin(5),
        ] {
            let model = QuantumModel::new(JordanSystem::new(kind));
            let rep = jordan_model_checks(&model, 20, 13);
            assert!(rep.uniform_rank, "{kind:?}");
            assert!(rep.outcomes_primitive, "{kind:?}");
            assert!(rep.sharp, "{kind:?}");
            assert!(rep.max_residual < 1e-8, "{kind:?}: {}", rep.max_residual);
        }
    }

    #[test]
    fn trace_form_factorization() {
        for (n, m) in [(2, 2), (2, 3)] {
            let rep = trace_form_factorization_check(n, m, 100, 29);
            assert!(rep.trace_factorizes);
            assert!(rep.unit_compatibility);
            assert!(rep.rank_one_products_primitive);
            assert!(rep.max_residual < 1e-9 * 100.0);
        }
    }

    #[test]
    fn chsh_singlet_reaches_tsirelson() {
        let rho = singlet();
        let (best, _) = quantum_chsh_optimize(&rho);
        assert_relative_eq!(best, 2.0 * 2f64.sqrt(), epsilon = 1e-6);
    }

    #[test]
    fn chsh_never_exceeds_tsirelson() {
        let rho = singlet();
        let bound = 2.0 * 2f64.sqrt() + 1e-9;
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        for _ in 0..10_000 {
            let angles = [
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(0.0..std::f64::consts::TAU),
            ];
            assert!(quantum_chsh(&rho, angles).abs() <= bound);
        }
        // Random two-qubit states with canonical angles also respect it.
        let model = QuantumModel::new(JordanSystem::new(JordanKind::ComplexHerm(4)));
        for _ in 0..200 {
            let state = model.random_state(&mut rng);
            let JordanElem::Complex(m) = state else {
                unreachable!()
            };
            let (value, _) = quantum_chsh_optimize(&m);
            assert!(value <= bound);
        }
    }

    #[test]
    fn quat_spectral_has_kramers_pairs() {
        let sys = JordanSystem::new(JordanKind::QuatHerm(3));
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let a = sys.random(&mut rng);
        let (frame, vals) = sys.spectral_decompose(&a);
        assert_eq!(frame.len(), 3);
        assert_eq!(vals.len(), 3);
        // Each primitive idempotent is rank 2 in the complex embedding.
        for e in &frame {
            let JordanElem::Quat(m) = e else { unreachable!() };
            assert_eq!(m.rank(1e-8), 2);
        }
    }
}
