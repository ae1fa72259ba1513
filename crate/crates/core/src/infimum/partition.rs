//! Set partitions enumerated as restricted growth strings.
//!
//! A partition of `{x_0, …, x_{n−1}}` is encoded by `a_0 … a_{n−1}` with
//! `a_0 = 0` and `a_i ≤ 1 + max(a_0, …, a_{i−1})`: `x_i` goes to block `a_i`.
//! Stepping through those strings in lexicographic order visits every
//! partition exactly once.

use crate::error::{Error, Result};

/// Bell number `B(n)`, saturating at `u128::MAX`.
pub fn bell_number(n: usize) -> u128 {
    // Bell triangle: each row starts with the last entry of the previous row.
    let mut row: Vec<u128> = vec![1];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &x in &row {
            let prev = *next.last().unwrap();
            next.push(prev.saturating_add(x));
        }
        row = next;
    }
    row[0]
}

/// Lexicographic successor iteration over restricted growth strings of length `n`.
#[derive(Debug, Clone)]
pub struct RestrictedGrowthStrings {
    code: Vec<usize>,
    // prefix_max[i] = max(code[0..=i])
    prefix_max: Vec<usize>,
    started: bool,
    done: bool,
}

impl RestrictedGrowthStrings {
    pub fn new(n: usize) -> Self {
        Self { code: vec![0; n], prefix_max: vec![0; n], started: false, done: false }
    }

    /// Advances to the next string, returning it, or `None` when exhausted.
    pub fn advance(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.code);
        }
        let n = self.code.len();
        let pivot = (1..n).rev().find(|&i| self.code[i] <= self.prefix_max[i - 1]);
        let Some(i) = pivot else {
            self.done = true;
            return None;
        };
        self.code[i] += 1;
        self.prefix_max[i] = self.prefix_max[i - 1].max(self.code[i]);
        for j in i + 1..n {
            self.code[j] = 0;
            self.prefix_max[j] = self.prefix_max[i];
        }
        Some(&self.code)
    }
}

/// A set partition: nonempty, pairwise disjoint blocks covering the atoms.
/// Blocks are ordered by their first atom; atoms keep their input order.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition<T> {
    pub blocks: Vec<Vec<T>>,
}

impl<T: Clone> Partition<T> {
    fn from_code(atoms: &[T], code: &[usize]) -> Self {
        let count = code.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); count];
        for (atom, &b) in atoms.iter().zip(code) {
            blocks[b].push(atom.clone());
        }
        Self { blocks }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Iterator over all partitions of a slice of atoms.
#[derive(Debug, Clone)]
pub struct Partitions<'a, T> {
    atoms: &'a [T],
    codes: RestrictedGrowthStrings,
}

impl<T: Clone> Iterator for Partitions<'_, T> {
    type Item = Partition<T>;

    fn next(&mut self) -> Option<Partition<T>> {
        let code = self.codes.advance()?;
        Some(Partition::from_code(self.atoms, code))
    }
}

pub(crate) fn check_cap(atoms: usize, cap: usize) -> Result<()> {
    if atoms > cap {
        return Err(Error::CapExceeded { atoms, cap, required: bell_number(atoms) });
    }
    Ok(())
}

/// Every partition of `atoms`, `B(|atoms|)` in total, in restricted-growth
/// lexicographic order. The empty set has exactly one (empty) partition.
pub fn enumerate_partitions<T: Clone>(atoms: &[T], cap: usize) -> Result<Partitions<'_, T>> {
    check_cap(atoms.len(), cap)?;
    Ok(Partitions { atoms, codes: RestrictedGrowthStrings::new(atoms.len()) })
}
