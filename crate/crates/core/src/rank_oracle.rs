//! Lexicographic rank and unrank for any minimal pattern set, by counting
//! walks of the context automaton.

use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::patterns::PatternSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RankError {
    #[error("symbol {symbol} at position {position} is outside the alphabet")]
    Alphabet { position: usize, symbol: u8 },
    #[error("forbidden pattern ends at position {0}")]
    Violation(usize),
    #[error("index is not below the cardinality of length-{0} words")]
    OutOfRange(usize),
}

type CountTable = Vec<Vec<BigUint>>;

/// States are the valid words of length up to `L - 1` (the empty word is
/// the start state); a transition keeps the last `L - 1` symbols.
#[derive(Debug)]
pub struct CountingDfa {
    set: PatternSet,
    q: usize,
    delta: Vec<Vec<Option<usize>>>,
    /// `counts[k][state]`: allowed continuations of length `k`.
    counts: RwLock<Arc<CountTable>>,
}

impl CountingDfa {
    pub fn new(set: PatternSet) -> CountingDfa {
        let q = set.field().order() as usize;
        let ctx_len = set.max_len() - 1;
        let mut contexts: Vec<Vec<u8>> = vec![Vec::new()];
        let mut frontier = 0;
        for _ in 0..ctx_len {
            let end = contexts.len();
            for i in frontier..end {
                for x in 0..q as u8 {
                    let mut w = contexts[i].clone();
                    w.push(x);
                    if set.is_valid(&w) {
                        contexts.push(w);
                    }
                }
            }
            frontier = end;
        }
        let lookup = |w: &[u8]| contexts.iter().position(|c| c.as_slice() == w);
        let delta: Vec<Vec<Option<usize>>> = contexts
            .iter()
            .map(|c| {
                (0..q as u8)
                    .map(|x| {
                        if set.completes_forbidden(c, x) {
                            return None;
                        }
                        let mut next = c.clone();
                        next.push(x);
                        if next.len() > ctx_len {
                            next.remove(0);
                        }
                        Some(lookup(&next).expect("suffix of a valid word is a state"))
                    })
                    .collect()
            })
            .collect();
        let base = vec![BigUint::from(1u32); contexts.len()];
        CountingDfa {
            set,
            q,
            delta,
            counts: RwLock::new(Arc::new(vec![base])),
        }
    }

    pub fn set(&self) -> &PatternSet {
        &self.set
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub const START: usize = 0;

    #[inline]
    pub fn step(&self, state: usize, symbol: u8) -> Option<usize> {
        self.delta[state].get(symbol as usize).copied().flatten()
    }

    /// Count table covering lengths `0..=k`.
    fn table(&self, k: usize) -> Arc<CountTable> {
        {
            let t = self.counts.read().expect("count lock");
            if t.len() > k {
                return Arc::clone(&t);
            }
        }
        let mut guard = self.counts.write().expect("count lock");
        if guard.len() <= k {
            let mut t: CountTable = (**guard).clone();
            while t.len() <= k {
                let prev = t.last().expect("non-empty");
                let row: Vec<BigUint> = self
                    .delta
                    .iter()
                    .map(|succ| succ.iter().flatten().map(|&n| &prev[n]).sum())
                    .collect();
                t.push(row);
            }
            *guard = Arc::new(t);
        }
        Arc::clone(&guard)
    }

    pub fn count(&self, state: usize, k: usize) -> BigUint {
        self.table(k)[k][state].clone()
    }

    /// Number of valid words of length `m`.
    pub fn cardinality(&self, m: usize) -> BigUint {
        self.count(Self::START, m)
    }

    pub fn rank(&self, word: &[u8]) -> Result<BigUint, RankError> {
        let m = word.len();
        let table = self.table(m);
        let mut state = Self::START;
        let mut r = BigUint::zero();
        for (pos, &c) in word.iter().enumerate() {
            if c as usize >= self.q {
                return Err(RankError::Alphabet {
                    position: pos,
                    symbol: c,
                });
            }
            let rem = m - pos - 1;
            for cp in 0..c {
                if let Some(n) = self.step(state, cp) {
                    r += &table[rem][n];
                }
            }
            state = self.step(state, c).ok_or(RankError::Violation(pos))?;
        }
        Ok(r)
    }

    pub fn unrank(&self, index: &BigUint, m: usize) -> Result<Vec<u8>, RankError> {
        let table = self.table(m);
        if index >= &table[m][Self::START] {
            return Err(RankError::OutOfRange(m));
        }
        let mut residual = index.clone();
        let mut state = Self::START;
        let mut word = Vec::with_capacity(m);
        for pos in 0..m {
            let rem = m - pos - 1;
            let mut chosen = None;
            for c in 0..self.q as u8 {
                if let Some(n) = self.step(state, c) {
                    let cnt = &table[rem][n];
                    if &residual < cnt {
                        chosen = Some((c, n));
                        break;
                    }
                    residual -= cnt;
                }
            }
            let (c, n) = chosen.expect("index below cardinality always finds a branch");
            word.push(c);
            state = n;
        }
        Ok(word)
    }
}
