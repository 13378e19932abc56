//! Exact vertex and extreme-ray enumeration by the double description method.
//!
//! The cone form is primal: `{x : Ex = 0, Ax >= 0}`. Equalities are removed
//! by restricting to the null space of `E`; the inequality-only cone is then
//! built incrementally, one half-space at a time, with a rank-based adjacency
//! test. Polytopes are handled through the usual homogenization coordinate.
//!
//! Output rays are canonicalized (primitive integer vectors, first nonzero
//! entry positive) and sorted lexicographically, so results are deterministic
//! regardless of internal evaluation order.

use crate::rat::{canonical_ray, dot, is_zero_vec, vec_scale, vec_sub, Matrix, Rat, Vector};
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConeError {
    #[error("cone is not pointed: lineality space has dimension {0}")]
    NotPointed(usize),
}

/// Half-space representation of a polyhedral cone through the origin.
#[derive(Debug, Clone)]
pub struct ConeHRep {
    pub dim: usize,
    /// Rows `e` with `e . x = 0`.
    pub equalities: Vec<Vector>,
    /// Rows `a` with `a . x >= 0`.
    pub inequalities: Vec<Vector>,
}

impl ConeHRep {
    pub fn inequality_only(dim: usize, inequalities: Vec<Vector>) -> Self {
        ConeHRep {
            dim,
            equalities: Vec::new(),
            inequalities,
        }
    }
}

/// Extreme rays of the pointed cone described by `h`, canonical and sorted.
///
/// Returns an empty list when the cone is `{0}`. Errors if the cone contains
/// a line.
pub fn extreme_rays(h: &ConeHRep) -> Result<Vec<Vector>, ConeError> {
    if h.dim == 0 {
        return Ok(Vec::new());
    }
    if !h.equalities.is_empty() {
        // Restrict to the solution space of the equalities and recurse.
        let em = Matrix::from_rows(h.equalities.clone());
        let basis = em.null_space();
        if basis.is_empty() {
            return Ok(Vec::new());
        }
        let k = basis.len();
        let reduced: Vec<Vector> = h
            .inequalities
            .iter()
            .map(|a| basis.iter().map(|b| dot(a, b)).collect())
            .collect();
        let rays = extreme_rays(&ConeHRep::inequality_only(k, reduced))?;
        let lifted = rays
            .iter()
            .map(|r| {
                let mut x = crate::rat::zeros(h.dim);
                for (c, b) in r.iter().zip(&basis) {
                    if !c.is_zero() {
                        x = crate::rat::vec_add(&x, &vec_scale(b, c));
                    }
                }
                canonical_ray(&x)
            })
            .collect::<BTreeSet<_>>();
        return Ok(lifted.into_iter().collect());
    }
    extreme_rays_pointed(h.dim, &h.inequalities)
}

fn extreme_rays_pointed(dim: usize, ineqs: &[Vector]) -> Result<Vec<Vector>, ConeError> {
    if ineqs.is_empty() {
        return Err(ConeError::NotPointed(dim));
    }
    let a = Matrix::from_rows(ineqs.to_vec());
    let lineality = dim - a.rank();
    if lineality > 0 {
        return Err(ConeError::NotPointed(lineality));
    }

    // Initial simplicial cone from a maximal independent set of constraints.
    let init = crate::rat::independent_subset(ineqs);
    debug_assert_eq!(init.len(), dim);
    let init_m = Matrix::from_rows(init.iter().map(|&i| ineqs[i].clone()).collect());
    let inv = init_m.inverse().expect("independent rows are invertible");
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| Ray::new(canonical_ray(&inv.col(j))))
        .collect();

    let mut processed: Vec<usize> = init.clone();
    for r in &mut rays {
        for &ci in &processed {
            r.push_incidence(dot(&ineqs[ci], &r.coords).is_zero());
        }
    }

    let init_set: BTreeSet<usize> = init.into_iter().collect();
    for (ci, constraint) in ineqs.iter().enumerate() {
        if init_set.contains(&ci) {
            continue;
        }
        insert_halfspace(dim, ineqs, &mut rays, &mut processed, ci, constraint);
    }

    let set: BTreeSet<Vector> = rays.into_iter().map(|r| r.coords).collect();
    Ok(set.into_iter().collect())
}

struct Ray {
    coords: Vector,
    /// Incidence with processed constraints, in `processed` order.
    tight: Vec<bool>,
}

impl Ray {
    fn new(coords: Vector) -> Self {
        Ray {
            coords,
            tight: Vec::new(),
        }
    }
    fn push_incidence(&mut self, tight: bool) {
        self.tight.push(tight);
    }
}

fn insert_halfspace(
    dim: usize,
    ineqs: &[Vector],
    rays: &mut Vec<Ray>,
    processed: &mut Vec<usize>,
    ci: usize,
    constraint: &Vector,
) {
    let values: Vec<Rat> = rays.iter().map(|r| dot(constraint, &r.coords)).collect();
    let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i] > Rat::zero()).collect();
    let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i] < Rat::zero()).collect();

    let mut fresh: Vec<Vector> = Vec::new();
    if !neg.is_empty() {
        for &p in &pos {
            for &n in &neg {
                if !adjacent(dim, ineqs, processed, &rays[p], &rays[n]) {
                    continue;
                }
                // Positive combination vanishing on the new hyperplane.
                let combo = vec_sub(
                    &vec_scale(&rays[n].coords, &values[p]),
                    &vec_scale(&rays[p].coords, &values[n]),
                );
                debug_assert!(!is_zero_vec(&combo));
                fresh.push(canonical_ray(&combo));
            }
        }
    }

    let keep: Vec<usize> = (0..rays.len())
        .filter(|&i| values[i] >= Rat::zero())
        .collect();
    let mut next: Vec<Ray> = Vec::with_capacity(keep.len() + fresh.len());
    for i in keep {
        let mut r = Ray::new(rays[i].coords.clone());
        r.tight = rays[i].tight.clone();
        r.push_incidence(values[i].is_zero());
        next.push(r);
    }
    processed.push(ci);
    for coords in fresh {
        let mut r = Ray::new(coords);
        for &cj in processed.iter() {
            r.push_incidence(dot(&ineqs[cj], &r.coords).is_zero());
        }
        next.push(r);
    }
    *rays = next;
}

/// Rank-based adjacency: two extreme rays are adjacent iff the constraints
/// tight at both span a subspace of dimension `dim - 2`.
fn adjacent(dim: usize, ineqs: &[Vector], processed: &[usize], a: &Ray, b: &Ray) -> bool {
    let common: Vec<Vector> = processed
        .iter()
        .enumerate()
        .filter(|&(k, _)| a.tight[k] && b.tight[k])
        .map(|(_, &ci)| ineqs[ci].clone())
        .collect();
    if common.len() < dim.saturating_sub(2) {
        return false;
    }
    if common.is_empty() {
        return dim == 2;
    }
    Matrix::from_rows(common).rank() == dim - 2
}

/// A polytope's vertex representation, plus recession rays if unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VRep {
    pub vertices: Vec<Vector>,
    pub recession_rays: Vec<Vector>,
}

/// Enumerate the vertices of `{x : a.x >= b for (a,b), e.x = d for (e,d)}`.
pub fn polytope_vertices(
    dim: usize,
    ineqs: &[(Vector, Rat)],
    eqs: &[(Vector, Rat)],
) -> Result<VRep, ConeError> {
    // Homogenize with a trailing coordinate t: a.x - b t >= 0, e.x - d t = 0,
    // t >= 0. Rays with t > 0 are vertices; rays with t = 0 are directions.
    let mut hineqs: Vec<Vector> = Vec::with_capacity(ineqs.len() + 1);
    for (a, b) in ineqs {
        let mut row = a.clone();
        row.push(-b.clone());
        hineqs.push(row);
    }
    let mut t_row = crate::rat::zeros(dim);
    t_row.push(Rat::one());
    hineqs.push(t_row);
    let heqs: Vec<Vector> = eqs
        .iter()
        .map(|(e, d)| {
            let mut row = e.clone();
            row.push(-d.clone());
            row
        })
        .collect();
    let rays = extreme_rays(&ConeHRep {
        dim: dim + 1,
        equalities: heqs,
        inequalities: hineqs,
    })?;
    let mut vertices = Vec::new();
    let mut recession = Vec::new();
    for r in rays {
        let t = r[dim].clone();
        if t.is_zero() {
            recession.push(r[..dim].to_vec());
        } else {
            let inv = t.recip();
            vertices.push(vec_scale(&r[..dim], &inv));
        }
    }
    vertices.sort();
    recession.sort();
    Ok(VRep {
        vertices,
        recession_rays: recession,
    })
}

/// Facet normals of the full-dimensional pointed cone generated by `gens`:
/// the extreme rays of `{y : g.y >= 0 for all g}`.
pub fn cone_facets_from_generators(dim: usize, gens: &[Vector]) -> Result<Vec<Vector>, ConeError> {
    extreme_rays(&ConeHRep::inequality_only(dim, gens.to_vec()))
}

/// Extreme rays among a generating set: drops every generator expressible as
/// a nonnegative combination of the others. Exact, via LP feasibility.
pub fn extreme_among_generators(gens: &[Vector]) -> Vec<usize> {
    use crate::lp::{feasible_eq_nonneg, LpOutcome};
    let mut keep = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if is_zero_vec(g) {
            continue;
        }
        let others: Vec<Vector> = gens
            .iter()
            .enumerate()
            .filter(|&(j, h)| j != i && !is_zero_vec(h))
            .map(|(_, h)| h.clone())
            .collect();
        if others.is_empty() {
            keep.push(i);
            continue;
        }
        let cols = Matrix::from_rows(others).transpose();
        match feasible_eq_nonneg(&cols, g) {
            LpOutcome::Feasible(_) => {}
            LpOutcome::Infeasible(_) => keep.push(i),
        }
    }
    keep
}
