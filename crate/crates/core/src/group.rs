//! Finite groups as validated multiplication tables.
//!
//! Elements are indices `0..order`; the table stores `x·y` row-major. Validation
//! finds the identity, checks associativity over all triples and recovers the
//! inverse of every element, so a constructed [`FiniteGroup`] is a group, not
//! just a magma.

use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GroupError {
    #[error("multiplication table is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("table entry {entry} at ({row},{col}) is out of range for order {order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        entry: usize,
        order: usize,
    },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {element} has no inverse")]
    NoInverse { element: usize },
    #[error("non-associative triple ({x},{y},{z}): (xy)z = {left}, x(yz) = {right}")]
    NonAssociative {
        x: usize,
        y: usize,
        z: usize,
        left: usize,
        right: usize,
    },
    #[error("group order {order} exceeds the brute-force cap {cap}")]
    OrderTooLarge { order: usize, cap: usize },
}

/// Largest order accepted by the exhaustive axiom and duality checkers.
pub const BRUTE_FORCE_CAP: usize = 24;

/// A finite group given by its Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mult: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Validate a raw multiplication table. Labels default to element indices.
    pub fn from_table(table: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<Arc<Self>, GroupError> {
        let order = table.len();
        for (row, r) in table.iter().enumerate() {
            if r.len() != order {
                return Err(GroupError::NotSquare {
                    rows: order,
                    cols: r.len(),
                });
            }
            for (col, &entry) in r.iter().enumerate() {
                if entry >= order {
                    return Err(GroupError::EntryOutOfRange {
                        row,
                        col,
                        entry,
                        order,
                    });
                }
            }
        }
        if order == 0 {
            return Err(GroupError::NoIdentity);
        }

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;

        let mut inv = vec![usize::MAX; order];
        for x in 0..order {
            let found = (0..order).find(|&y| table[x][y] == identity && table[y][x] == identity);
            inv[x] = found.ok_or(GroupError::NoInverse { element: x })?;
        }

        for x in 0..order {
            for y in 0..order {
                for z in 0..order {
                    let left = table[table[x][y]][z];
                    let right = table[x][table[y][z]];
                    if left != right {
                        return Err(GroupError::NonAssociative { x, y, z, left, right });
                    }
                }
            }
        }

        let mut flat = Vec::with_capacity(order * order);
        for r in table {
            flat.extend_from_slice(r);
        }
        let labels = labels.unwrap_or_else(|| (0..order).map(|i| i.to_string()).collect());
        Ok(Arc::new(FiniteGroup {
            order,
            mult: flat,
            inv,
            identity,
            labels,
        }))
    }

    /// Cyclic group of order `n` under addition mod n.
    pub fn cyclic(n: usize) -> Arc<Self> {
        let table: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        Self::from_table(&table, None).expect("cyclic table is a group")
    }

    /// Dihedral group of order `2n`: rotations `r^k` (indices `0..n`) and
    /// reflections `s r^k` (indices `n..2n`).
    pub fn dihedral(n: usize) -> Arc<Self> {
        assert!(n >= 1);
        let order = 2 * n;
        let mut table = vec![vec![0usize; order]; order];
        // element (a, k): a in {0,1} reflection flag, k rotation exponent;
        // (a,k)(b,l) = (a xor b, (if b == 0 { k + l } else { l - k }) mod n)
        let idx = |a: usize, k: usize| a * n + k % n;
        for a in 0..2 {
            for k in 0..n {
                for b in 0..2 {
                    for l in 0..n {
                        let rot = if b == 0 { k + l } else { n + l - k };
                        table[idx(a, k)][idx(b, l)] = idx(a ^ b, rot % n);
                    }
                }
            }
        }
        Self::from_table(&table, None).expect("dihedral table is a group")
    }

    /// Symmetric group on `n` letters (n <= 5), elements in lexicographic order
    /// of their one-line permutation notation.
    pub fn symmetric(n: usize) -> Arc<Self> {
        assert!((1..=5).contains(&n));
        let perms = permutations(n);
        let find = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        // composition: apply q first, then p
                        let composed: Vec<usize> = (0..n).map(|i| p[q[i]]).collect();
                        find(&composed)
                    })
                    .collect()
            })
            .collect();
        let labels = perms
            .iter()
            .map(|p| p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(""))
            .collect();
        Self::from_table(&table, Some(labels)).expect("symmetric table is a group")
    }

    /// Direct product; indices are row-major pairs `x * other.order + y`.
    pub fn direct_product(a: &Arc<Self>, b: &Arc<Self>) -> Arc<Self> {
        let n = a.order;
        let m = b.order;
        let order = n * m;
        let mut mult = vec![0usize; order * order];
        let mut inv = vec![0usize; order];
        for x1 in 0..n {
            for x2 in 0..m {
                let x = x1 * m + x2;
                inv[x] = a.inv[x1] * m + b.inv[x2];
                for y1 in 0..n {
                    for y2 in 0..m {
                        let y = y1 * m + y2;
                        mult[x * order + y] = a.mul(x1, y1) * m + b.mul(x2, y2);
                    }
                }
            }
        }
        let labels = (0..order)
            .map(|i| format!("({},{})", a.labels[i / m], b.labels[i % m]))
            .collect();
        Arc::new(FiniteGroup {
            order,
            mult,
            inv,
            identity: a.identity * m + b.identity,
            labels,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mult[x * self.order + y]
    }

    #[inline]
    pub fn inverse(&self, x: usize) -> usize {
        self.inv[x]
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.order).all(|x| (0..self.order).all(|y| self.mul(x, y) == self.mul(y, x)))
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    heap_permute(&mut current, n, &mut out);
    out.sort();
    out
}

fn heap_permute(current: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(current.clone());
        return;
    }
    for i in 0..k {
        heap_permute(current, k - 1, out);
        if k % 2 == 0 {
            current.swap(i, k - 1);
        } else {
            current.swap(0, k - 1);
        }
    }
}

/// On-disk form of a group definition.
#[derive(Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    pub mult: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl GroupFile {
    pub fn validate(&self) -> Result<Arc<FiniteGroup>, GroupError> {
        if self.mult.len() != self.order {
            return Err(GroupError::NotSquare {
                rows: self.mult.len(),
                cols: self.order,
            });
        }
        FiniteGroup::from_table(&self.mult, self.labels.clone())
    }
}
