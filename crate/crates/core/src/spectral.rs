//! Finite-state transition diagrams, dominant eigenvalues and capacities.

use std::collections::HashMap;

use thiserror::Error;

use crate::patterns::PatternSet;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 1_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("constraint admits no infinite sequence")]
    EmptyLanguage,
    #[error("power iteration did not converge in {0} iterations")]
    NoConvergence(usize),
    #[error("matrix is not square or is empty")]
    NotSquare,
    #[error("matrix has a negative or non-finite entry")]
    BadEntry,
    #[error("tracks_coded ({coded}) must be in 1..=tracks_total ({total})")]
    Tracks { coded: usize, total: usize },
}

/// A deterministic, forward-minimal presentation of a constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fstd {
    /// Representative context of each state.
    contexts: Vec<Vec<u8>>,
    /// `(from, symbol, to)`, sorted.
    edges: Vec<(usize, u8, usize)>,
}

impl Fstd {
    pub fn num_states(&self) -> usize {
        self.contexts.len()
    }

    pub fn contexts(&self) -> &[Vec<u8>] {
        &self.contexts
    }

    pub fn edges(&self) -> &[(usize, u8, usize)] {
        &self.edges
    }

    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let n = self.num_states();
        let mut a = vec![vec![0u64; n]; n];
        for &(from, _, to) in &self.edges {
            a[from][to] += 1;
        }
        a
    }

    /// Follows labels from `state`; `None` if a label is rejected.
    pub fn walk(&self, state: usize, labels: &[u8]) -> Option<usize> {
        labels.iter().try_fold(state, |s, &x| {
            self.edges
                .iter()
                .find(|&&(f, l, _)| f == s && l == x)
                .map(|&(_, _, t)| t)
        })
    }
}

fn all_words(q: u8, len: usize) -> Vec<Vec<u8>> {
    let mut words = vec![Vec::new()];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|w| {
                (0..q).map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    words
}

/// Builds the FSTD over allowed contexts of length `L - 1`, trimmed to
/// states lying on bi-infinite walks and merged by forward equivalence.
pub fn build_fstd(set: &PatternSet) -> Result<Fstd, SpectralError> {
    let q = set.field().order();
    let ctx_len = set.max_len().saturating_sub(1);
    let contexts: Vec<Vec<u8>> = all_words(q, ctx_len).into_iter().filter(|w| set.is_valid(w)).collect();
    let index: HashMap<&[u8], usize> = contexts.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();

    let n = contexts.len();
    let mut delta: Vec<Vec<Option<usize>>> = vec![vec![None; q as usize]; n];
    for (i, c) in contexts.iter().enumerate() {
        for x in 0..q {
            if set.completes_forbidden(c, x) {
                continue;
            }
            let mut next = c.clone();
            if ctx_len > 0 {
                next.remove(0);
                next.push(x);
            }
            delta[i][x as usize] = index.get(next.as_slice()).copied();
        }
    }

    // Trim states without successors or predecessors until stable.
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        let mut has_in = vec![false; n];
        for i in (0..n).filter(|&i| alive[i]) {
            for t in delta[i].iter().flatten() {
                if alive[*t] {
                    has_in[*t] = true;
                }
            }
        }
        for i in 0..n {
            if !alive[i] {
                continue;
            }
            let has_out = delta[i].iter().flatten().any(|&t| alive[t]);
            if !has_out || !has_in[i] {
                alive[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let live: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    if live.is_empty() {
        return Err(SpectralError::EmptyLanguage);
    }

    // Moore refinement: start from one block, split by per-symbol target blocks.
    let mut block: Vec<usize> = vec![0; n];
    let mut num_blocks = 1;
    loop {
        let mut sigs: HashMap<Vec<Option<usize>>, usize> = HashMap::new();
        let mut next_block = vec![0; n];
        for &i in &live {
            let sig: Vec<Option<usize>> = std::iter::once(Some(block[i]))
                .chain(delta[i].iter().map(|t| t.filter(|&t| alive[t]).map(|t| block[t])))
                .collect();
            let len = sigs.len();
            next_block[i] = *sigs.entry(sig).or_insert(len);
        }
        let count = sigs.len();
        block = next_block;
        if count == num_blocks {
            break;
        }
        num_blocks = count;
    }

    let mut reps: Vec<Option<usize>> = vec![None; num_blocks];
    for &i in &live {
        reps[block[i]].get_or_insert(i);
    }
    let reps: Vec<usize> = reps.into_iter().map(|r| r.expect("non-empty block")).collect();
    let mut edges = Vec::new();
    for (b, &rep) in reps.iter().enumerate() {
        for x in 0..q {
            if let Some(t) = delta[rep][x as usize].filter(|&t| alive[t]) {
                edges.push((b, x, block[t]));
            }
        }
    }
    edges.sort_unstable();
    Ok(Fstd {
        contexts: reps.iter().map(|&r| contexts[r].clone()).collect(),
        edges,
    })
}

/// Largest eigenvalue of a non-negative square matrix by power iteration on
/// `A + I` from the all-ones vector.
pub fn dominant_eigenvalue(matrix: &[Vec<f64>], tol: f64) -> Result<f64, SpectralError> {
    let n = matrix.len();
    if n == 0 || matrix.iter().any(|r| r.len() != n) {
        return Err(SpectralError::NotSquare);
    }
    if matrix.iter().flatten().any(|&v| !(v.is_finite() && v >= 0.0)) {
        return Err(SpectralError::BadEntry);
    }
    let mut v = vec![1.0f64; n];
    let mut lambda = f64::NAN;
    for _ in 0..MAX_ITERATIONS {
        let w: Vec<f64> = (0..n)
            .map(|i| v[i] + matrix[i].iter().zip(&v).map(|(a, x)| a * x).sum::<f64>())
            .collect();
        let norm = w.iter().fold(0.0f64, |m, &x| m.max(x));
        if norm == 0.0 {
            return Ok(0.0);
        }
        let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
        let step = next.iter().zip(&v).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let converged = (norm - lambda).abs() <= tol * norm.max(1.0) && step <= tol;
        lambda = norm;
        v = next;
        if converged {
            return Ok(lambda - 1.0);
        }
    }
    Err(SpectralError::NoConvergence(MAX_ITERATIONS))
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Capacity {
    pub lambda: f64,
    /// Bits per coded symbol.
    pub c: f64,
    /// Bits per written bit across the whole track group.
    pub cn: f64,
}

/// `C = log2(lambda_max)`; uncoded tracks add one bit per column each.
pub fn capacity(set: &PatternSet, tracks_coded: usize, tracks_total: usize) -> Result<Capacity, SpectralError> {
    if tracks_coded == 0 || tracks_coded > tracks_total {
        return Err(SpectralError::Tracks {
            coded: tracks_coded,
            total: tracks_total,
        });
    }
    let fstd = build_fstd(set)?;
    let a: Vec<Vec<f64>> = fstd
        .adjacency()
        .iter()
        .map(|r| r.iter().map(|&x| x as f64).collect())
        .collect();
    let lambda = dominant_eigenvalue(&a, DEFAULT_TOL)?;
    let c = lambda.log2();
    Ok(Capacity {
        lambda,
        c,
        cn: (c + (tracks_total - tracks_coded) as f64) / tracks_total as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::Field;
    use crate::patterns::BuiltinSet;

    #[test]
    fn identity_matrix() {
        let id: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..4).map(|j| f64::from(u8::from(i == j))).collect())
            .collect();
        assert!((dominant_eigenvalue(&id, DEFAULT_TOL).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn periodic_matrix_converges() {
        let swap = vec![vec![0.0, 2.0], vec![2.0, 0.0]];
        assert!((dominant_eigenvalue(&swap, DEFAULT_TOL).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_matrices() {
        assert_eq!(dominant_eigenvalue(&[], 1e-9), Err(SpectralError::NotSquare));
        assert_eq!(
            dominant_eigenvalue(&[vec![1.0, 0.0]], 1e-9),
            Err(SpectralError::NotSquare)
        );
        assert_eq!(dominant_eigenvalue(&[vec![-1.0]], 1e-9), Err(SpectralError::BadEntry));
    }

    #[test]
    fn empty_language() {
        let all = PatternSet::new(Field::Gf4, (0..4).map(|x| vec![x]).collect()).unwrap();
        assert_eq!(build_fstd(&all), Err(SpectralError::EmptyLanguage));
    }

    #[test]
    fn unconstrained_single_symbol_ban() {
        let set = PatternSet::new(Field::Gf4, vec![vec![3]]).unwrap();
        let cap = capacity(&set, 2, 2).unwrap();
        assert!((cap.c - 3f64.log2()).abs() < 1e-10);
    }

    #[test]
    fn walks_follow_labels() {
        let st = PatternSet::builtin(BuiltinSet::St4);
        let f = build_fstd(&st).unwrap();
        assert_eq!(f.num_states(), 4);
        let start = (0..f.num_states()).find(|&s| f.walk(s, &[0, 3]).is_some());
        assert!(start.is_some());
        for s in 0..f.num_states() {
            assert_eq!(f.walk(s, &[0, 3, 0]), None);
        }
    }

    #[test]
    fn track_arguments() {
        let st = PatternSet::builtin(BuiltinSet::St4);
        assert!(matches!(capacity(&st, 3, 2), Err(SpectralError::Tracks { .. })));
        assert!(matches!(capacity(&st, 0, 3), Err(SpectralError::Tracks { .. })));
    }
}
