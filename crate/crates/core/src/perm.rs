//! Small permutation-group utilities: composition, closure, cosets.
//!
//! Groups are held as explicit element lists generated by breadth-first
//! closure, which is all the symmetric test-space construction needs at desk
//! scale.

use std::collections::BTreeSet;
use thiserror::Error;

/// A permutation of `{0..n}`, stored as the image table `p[i]`.
pub type Perm = Vec<usize>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("group closure exceeded the cap of {0} elements")]
    ClosureCapExceeded(usize),
    #[error("permutations act on different domains")]
    DomainMismatch,
    #[error("not a permutation: image table is not a bijection")]
    NotAPermutation,
}

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

/// `(compose(p, q))(i) = p[q[i]]` — apply `q` first.
pub fn compose(p: &Perm, q: &Perm) -> Perm {
    q.iter().map(|&i| p[i]).collect()
}

pub fn inverse(p: &Perm) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

pub fn is_permutation(p: &[usize]) -> bool {
    let n = p.len();
    let mut seen = vec![false; n];
    for &i in p {
        if i >= n || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

/// All elements generated by `gens`, by breadth-first multiplication.
pub fn closure(gens: &[Perm], cap: usize) -> Result<Vec<Perm>, GroupError> {
    if gens.is_empty() {
        return Ok(vec![]);
    }
    let n = gens[0].len();
    for g in gens {
        if g.len() != n {
            return Err(GroupError::DomainMismatch);
        }
        if !is_permutation(g) {
            return Err(GroupError::NotAPermutation);
        }
    }
    let mut seen: BTreeSet<Perm> = BTreeSet::new();
    let mut queue = vec![identity(n)];
    seen.insert(identity(n));
    while let Some(g) = queue.pop() {
        for h in gens {
            let gh = compose(h, &g);
            if seen.insert(gh.clone()) {
                if seen.len() > cap {
                    return Err(GroupError::ClosureCapExceeded(cap));
                }
                queue.push(gh);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Left cosets `gK` of `subgroup` in `group`, each as a sorted element list;
/// cosets are keyed and ordered by their minimal element.
pub fn left_cosets(group: &[Perm], subgroup: &[Perm]) -> Vec<Vec<Perm>> {
    let sub: BTreeSet<&Perm> = subgroup.iter().collect();
    debug_assert!(sub.iter().all(|s| group.binary_search(s).is_ok()));
    let mut assigned: BTreeSet<Perm> = BTreeSet::new();
    let mut cosets = Vec::new();
    for g in group {
        if assigned.contains(g) {
            continue;
        }
        let mut coset: Vec<Perm> = subgroup.iter().map(|k| compose(g, k)).collect();
        coset.sort();
        coset.dedup();
        for e in &coset {
            assigned.insert(e.clone());
        }
        cosets.push(coset);
    }
    cosets.sort_by(|a, b| a[0].cmp(&b[0]));
    cosets
}

/// Index of the coset containing `g`, given cosets as produced by
/// [`left_cosets`].
pub fn coset_index(cosets: &[Vec<Perm>], g: &Perm) -> usize {
    cosets
        .iter()
        .position(|c| c.binary_search(g).is_ok())
        .expect("element belongs to some coset")
}

/// Greedily extract a small generating set from a full element list.
pub fn generating_set(group: &[Perm]) -> Vec<Perm> {
    if group.is_empty() {
        return vec![];
    }
    let n = group[0].len();
    let full: BTreeSet<&Perm> = group.iter().collect();
    let mut gens: Vec<Perm> = Vec::new();
    let mut have: BTreeSet<Perm> = BTreeSet::new();
    have.insert(identity(n));
    for g in group {
        if have.contains(g) {
            continue;
        }
        gens.push(g.clone());
        have = closure(&gens, full.len()).expect("closure within the group").into_iter().collect();
        if have.len() == full.len() {
            break;
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_closure() {
        let gens = vec![vec![1, 0, 2], vec![1, 2, 0]];
        let g = closure(&gens, 100).unwrap();
        assert_eq!(g.len(), 6);
    }

    #[test]
    fn closure_cap() {
        let gens = vec![vec![1, 2, 3, 4, 0]];
        assert_eq!(
            closure(&gens, 3),
            Err(GroupError::ClosureCapExceeded(3))
        );
    }

    #[test]
    fn cosets_of_stabilizer() {
        // S3 over the stabilizer of 0 gives three cosets = the orbit of 0.
        let g = closure(&vec![vec![1, 0, 2], vec![1, 2, 0]], 100).unwrap();
        let k = closure(&vec![vec![0, 2, 1]], 100).unwrap();
        let cosets = left_cosets(&g, &k);
        assert_eq!(cosets.len(), 3);
        for c in &cosets {
            assert_eq!(c.len(), 2);
        }
    }

    #[test]
    fn generating_set_spans() {
        let g = closure(&vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]], 100).unwrap();
        let gens = generating_set(&g);
        let regenerated = closure(&gens, 100).unwrap();
        assert_eq!(regenerated.len(), g.len());
        assert!(gens.len() <= 3);
    }

    #[test]
    fn compose_and_inverse() {
        let p = vec![2, 0, 1];
        let q = inverse(&p);
        assert_eq!(compose(&p, &q), identity(3));
        assert_eq!(compose(&q, &p), identity(3));
    }
}
