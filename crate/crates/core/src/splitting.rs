//! The suspension-splitting calculus: attaching-coefficient vectors, the
//! equivalence moves that self-equivalences of the wedge induce on them, the
//! canonical (colex-minimal) normal form, a brute-force orbit oracle, and the
//! wedge decomposition of the suspension itself.
//!
//! The top cell of the suspended manifold attaches to a wedge of spheres,
//! Moore spaces, and η-cofibres; the attaching map is recorded as a vector of
//! coefficient blocks:
//!
//! | block | carries coefficients on          |
//! |-------|----------------------------------|
//! | `x`   | sphere generators of top stem    |
//! | `y`   | order-2 sphere classes           |
//! | `z`   | a second sphere/cofibre family   |
//! | `z2`  | order-2 partners of `z` (dim 10) |
//! | `u`   | 3-primary Moore classes          |
//! | `w`   | a second 3-primary Moore family  |
//!
//! Block lengths and moduli depend on the connectivity `n` and the ranks
//! `(l, k, c)` and 3-torsion of the manifold; see [`block_schema`]. Two
//! vectors describe homotopy-equivalent total spaces exactly when a sequence
//! of [`Move`]s carries one to the other, and [`normalize`] computes the
//! distinguished orbit representative in closed form. [`orbit_oracle`]
//! enumerates a full orbit by breadth-first closure so the closed forms can
//! be certified independently on small instances.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::FgAbGroup;
use crate::manifold::ManifoldDescriptor;
use crate::tables::Space;

/// Attaching coefficients for the top cell, one vector per block. All blocks
/// are always present; a block that does not apply to the given `n` is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AttachingVector {
    pub x: Vec<u64>,
    pub y: Vec<u64>,
    pub z: Vec<u64>,
    pub z2: Vec<u64>,
    pub u: Vec<u64>,
    pub w: Vec<u64>,
}

impl AttachingVector {
    /// The zero vector of the given shape.
    pub fn zero(schema: &BlockSchema) -> Self {
        AttachingVector {
            x: vec![0; schema.x.0],
            y: vec![0; schema.y.0],
            z: vec![0; schema.z.0],
            z2: vec![0; schema.z2.0],
            u: vec![0; schema.u.0],
            w: vec![0; schema.w.0],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks().iter().all(|b| b.iter().all(|&v| v == 0))
    }

    fn blocks(&self) -> [&Vec<u64>; 6] {
        [&self.x, &self.y, &self.z, &self.z2, &self.u, &self.w]
    }

    /// Comparison key for the colexicographic order: the concatenation of
    /// all blocks read back-to-front. The canonical orbit representative is
    /// the vector whose key is lexicographically least.
    pub fn colex_key(&self) -> Vec<u64> {
        let mut all: Vec<u64> = self
            .blocks()
            .iter()
            .flat_map(|b| b.iter().copied())
            .collect();
        all.reverse();
        all
    }

    fn block_mut(&mut self, id: BlockId) -> &mut Vec<u64> {
        match id {
            BlockId::X => &mut self.x,
            BlockId::Y => &mut self.y,
            BlockId::Z => &mut self.z,
            BlockId::Z2 => &mut self.z2,
            BlockId::U => &mut self.u,
            BlockId::W => &mut self.w,
        }
    }
}

/// Per-block `(length, modulus)` pairs for one descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockSchema {
    pub x: (usize, u64),
    pub y: (usize, u64),
    pub z: (usize, u64),
    pub z2: (usize, u64),
    pub u: (usize, u64),
    pub w: (usize, u64),
}

impl BlockSchema {
    fn modulus(&self, id: BlockId) -> u64 {
        match id {
            BlockId::X => self.x.1,
            BlockId::Y => self.y.1,
            BlockId::Z => self.z.1,
            BlockId::Z2 => self.z2.1,
            BlockId::U => self.u.1,
            BlockId::W => self.w.1,
        }
    }
}

/// Block shape for a descriptor. Unused blocks get length 0 and modulus 1.
pub fn block_schema(d: &ManifoldDescriptor) -> BlockSchema {
    let free = d.l.saturating_sub(d.c) as usize;
    let c = d.c as usize;
    let k = d.k as usize;
    let t3 = d.t3();
    let none = (0usize, 1u64);
    match d.n {
        2 => BlockSchema {
            x: (free, 12),
            y: (free, 2),
            z: (t3, 3),
            z2: none,
            u: none,
            w: (c, 6),
        },
        3 => BlockSchema {
            x: (k, 24),
            y: (free, 2),
            z: (c, 2),
            z2: none,
            u: (t3, 3),
            w: (t3, 3),
        },
        4 => BlockSchema {
            x: (free, 24),
            y: (free, 2),
            z: (c, 24),
            z2: (c, 2),
            u: none,
            w: (t3, 3),
        },
        _ => BlockSchema {
            x: none,
            y: none,
            z: none,
            z2: none,
            u: none,
            w: none,
        },
    }
}

/// Names for the six coefficient blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BlockId {
    X,
    Y,
    Z,
    Z2,
    U,
    W,
}

impl BlockId {
    pub fn name(self) -> &'static str {
        match self {
            BlockId::X => "x",
            BlockId::Y => "y",
            BlockId::Z => "z",
            BlockId::Z2 => "z2",
            BlockId::U => "u",
            BlockId::W => "w",
        }
    }
}

/// Which exponent wins when two 3-primary Moore coefficients interact: the
/// coefficient on the factor of the largest exponent absorbs smaller ones
/// (`Max`), or the smallest absorbs larger ones (`Min`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Survivor {
    Min,
    Max,
}

/// One elementary equivalence move on an attaching vector. Every move is
/// invertible, so the generated relation is symmetric.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    /// `v[target] += ±v[source]` within one plain block.
    AddWithin {
        block: BlockId,
        target: usize,
        source: usize,
        subtract: bool,
    },
    /// `v[index] = −v[index]` within one block.
    NegateEntry { block: BlockId, index: usize },
    /// `v[target] += ±v[source]` within a 3-primary Moore block, permitted
    /// only in the direction the factor exponents allow; generation filters
    /// the pairs, application is ordinary addition.
    ExponentTransfer {
        block: BlockId,
        target: usize,
        source: usize,
        subtract: bool,
    },
    /// `(z[target], z2[target]) += ±(z[source], z2[source])` on the paired
    /// cofibre block (dimension ten only).
    ChangPairAdd {
        target: usize,
        source: usize,
        subtract: bool,
    },
    /// `(z[index], z2[index]) = (−z[index], z2[index])`.
    ChangPairNegate { index: usize },
    /// `z2[target] += y[source]` (dimension ten only).
    CrossAdd { target: usize, source: usize },
}

impl Move {
    /// Apply the move, returning the successor vector.
    pub fn apply(&self, v: &AttachingVector, schema: &BlockSchema) -> AttachingVector {
        let mut out = v.clone();
        match *self {
            Move::AddWithin {
                block,
                target,
                source,
                subtract,
            }
            | Move::ExponentTransfer {
                block,
                target,
                source,
                subtract,
            } => {
                let m = schema.modulus(block);
                let b = out.block_mut(block);
                let add = if subtract {
                    (m - b[source] % m) % m
                } else {
                    b[source]
                };
                b[target] = (b[target] + add) % m;
            }
            Move::NegateEntry { block, index } => {
                let m = schema.modulus(block);
                let b = out.block_mut(block);
                b[index] = (m - b[index] % m) % m;
            }
            Move::ChangPairAdd {
                target,
                source,
                subtract,
            } => {
                let (mz, mz2) = (schema.z.1, schema.z2.1);
                let add_z = if subtract {
                    (mz - out.z[source] % mz) % mz
                } else {
                    out.z[source]
                };
                out.z[target] = (out.z[target] + add_z) % mz;
                // Mod 2 the two signs agree.
                out.z2[target] = (out.z2[target] + out.z2[source]) % mz2;
            }
            Move::ChangPairNegate { index } => {
                let mz = schema.z.1;
                out.z[index] = (mz - out.z[index] % mz) % mz;
            }
            Move::CrossAdd { target, source } => {
                out.z2[target] = (out.z2[target] + out.y[source]) % schema.z2.1;
            }
        }
        out
    }
}

fn plain_block_moves(out: &mut Vec<Move>, block: BlockId, len: usize, modulus: u64) {
    for target in 0..len {
        for source in 0..len {
            if target == source {
                continue;
            }
            out.push(Move::AddWithin {
                block,
                target,
                source,
                subtract: false,
            });
            if modulus > 2 {
                out.push(Move::AddWithin {
                    block,
                    target,
                    source,
                    subtract: true,
                });
            }
        }
    }
    if modulus > 2 {
        for index in 0..len {
            out.push(Move::NegateEntry { block, index });
        }
    }
}

fn moore_block_moves(out: &mut Vec<Move>, block: BlockId, exponents: &[u32], survivor: Survivor) {
    let len = exponents.len();
    for target in 0..len {
        for source in 0..len {
            if target == source {
                continue;
            }
            let allowed = match survivor {
                Survivor::Max => exponents[source] >= exponents[target],
                Survivor::Min => exponents[source] <= exponents[target],
            };
            if allowed {
                out.push(Move::ExponentTransfer {
                    block,
                    target,
                    source,
                    subtract: false,
                });
                out.push(Move::ExponentTransfer {
                    block,
                    target,
                    source,
                    subtract: true,
                });
            }
        }
    }
    for index in 0..len {
        out.push(Move::NegateEntry { block, index });
    }
}

/// The full move set acting on attaching vectors of the given descriptor.
pub fn move_set(d: &ManifoldDescriptor) -> Vec<Move> {
    let schema = block_schema(d);
    let exps = d.torsion.three_exponents();
    let mut moves = Vec::new();
    match d.n {
        2 => {
            plain_block_moves(&mut moves, BlockId::X, schema.x.0, schema.x.1);
            plain_block_moves(&mut moves, BlockId::Y, schema.y.0, schema.y.1);
            plain_block_moves(&mut moves, BlockId::W, schema.w.0, schema.w.1);
            moore_block_moves(&mut moves, BlockId::Z, &exps, Survivor::Max);
        }
        3 => {
            plain_block_moves(&mut moves, BlockId::X, schema.x.0, schema.x.1);
            plain_block_moves(&mut moves, BlockId::Y, schema.y.0, schema.y.1);
            plain_block_moves(&mut moves, BlockId::Z, schema.z.0, schema.z.1);
            moore_block_moves(&mut moves, BlockId::U, &exps, Survivor::Min);
            moore_block_moves(&mut moves, BlockId::W, &exps, Survivor::Max);
        }
        4 => {
            plain_block_moves(&mut moves, BlockId::X, schema.x.0, schema.x.1);
            plain_block_moves(&mut moves, BlockId::Y, schema.y.0, schema.y.1);
            let c = schema.z.0;
            for target in 0..c {
                for source in 0..c {
                    if target == source {
                        continue;
                    }
                    moves.push(Move::ChangPairAdd {
                        target,
                        source,
                        subtract: false,
                    });
                    moves.push(Move::ChangPairAdd {
                        target,
                        source,
                        subtract: true,
                    });
                }
            }
            for index in 0..c {
                moves.push(Move::ChangPairNegate { index });
            }
            for target in 0..schema.z2.0 {
                for source in 0..schema.y.0 {
                    moves.push(Move::CrossAdd { target, source });
                }
            }
            moore_block_moves(&mut moves, BlockId::W, &exps, Survivor::Min);
        }
        _ => {}
    }
    moves
}

/// The canonical orbit representative together with the certificates the
/// splitting and group formulas consume.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedAttachment {
    /// Colex-least vector in the equivalence orbit.
    pub vector: AttachingVector,
    /// Exponent of the surviving 3-primary factor of the first Moore block
    /// (`z` for n = 2, `u` for n = 3, `w` for n = 4); 0 when that block
    /// vanishes or does not apply.
    pub r_j0: u32,
    /// Exponent of the surviving factor of the second Moore block (`w`,
    /// n = 3 only); 0 when it vanishes or does not apply.
    pub r_j1: u32,
    /// Index (among the 3-primary factors, canonical order) of the first
    /// surviving factor.
    pub j0: Option<usize>,
    /// Index of the second surviving factor (n = 3 only).
    pub j1: Option<usize>,
    /// For n = 3: 1 when the canonical sphere-block coefficient is odd,
    /// else 0. Controls the 2-primary quotient in the degree-3 formulas.
    pub delta: u8,
}

/// Closed-form canonical vector under adds and negations within one block:
/// `(g, 0, …, 0)` with `g` the gcd of the entries and the modulus for blocks
/// of length at least two, and the sign-minimal value for a single entry.
fn canon_plain(block: &[u64], modulus: u64) -> Vec<u64> {
    match block.len() {
        0 => Vec::new(),
        1 => {
            let v = block[0] % modulus;
            vec![v.min((modulus - v) % modulus)]
        }
        _ => {
            let g = block.iter().fold(modulus, |acc, &v| acc.gcd(&v));
            let mut out = vec![0; block.len()];
            out[0] = g % modulus;
            out
        }
    }
}

/// Canonical vector of a 3-primary Moore block under exponent-directed
/// transfers: a single 1 at the first slot whose factor exponent equals the
/// extremal exponent over the support. Returns the vector, the surviving
/// exponent, and the surviving slot (`0`/`None` for the zero block).
fn canon_moore(
    block: &[u64],
    exponents: &[u32],
    survivor: Survivor,
) -> (Vec<u64>, u32, Option<usize>) {
    let support: Vec<usize> = (0..block.len()).filter(|&i| block[i] % 3 != 0).collect();
    if support.is_empty() {
        return (vec![0; block.len()], 0, None);
    }
    let e = match survivor {
        Survivor::Max => support.iter().map(|&i| exponents[i]).max().unwrap(),
        Survivor::Min => support.iter().map(|&i| exponents[i]).min().unwrap(),
    };
    let slot = (0..block.len())
        .find(|&i| exponents[i] == e)
        .expect("extremal exponent attained on some slot");
    let mut out = vec![0; block.len()];
    out[slot] = 1;
    (out, e, Some(slot))
}

const PAIR_MOD: (u64, u64) = (24, 2);

fn pair_add(a: (u64, u64), b: (u64, u64), subtract: bool) -> (u64, u64) {
    let z = if subtract {
        (a.0 + PAIR_MOD.0 - b.0 % PAIR_MOD.0) % PAIR_MOD.0
    } else {
        (a.0 + b.0) % PAIR_MOD.0
    };
    (z, (a.1 + b.1) % PAIR_MOD.1)
}

fn pair_colex_key(pairs: &[(u64, u64)]) -> Vec<u64> {
    pairs
        .iter()
        .rev()
        .map(|p| p.1)
        .chain(pairs.iter().rev().map(|p| p.0))
        .collect()
}

/// Exhaustive canonicalization of the paired `(z, z2)` block by closure
/// under pair adds and pair negation. Intended for at most three pairs.
fn canon_pairs_bfs(start: &[(u64, u64)]) -> Vec<(u64, u64)> {
    let len = start.len();
    let mut visited: BTreeSet<Vec<(u64, u64)>> = BTreeSet::new();
    let mut frontier = vec![start.to_vec()];
    visited.insert(start.to_vec());
    while let Some(state) = frontier.pop() {
        let mut successors: Vec<Vec<(u64, u64)>> = Vec::new();
        for target in 0..len {
            for source in 0..len {
                if target == source {
                    continue;
                }
                for subtract in [false, true] {
                    let mut succ = state.clone();
                    succ[target] = pair_add(succ[target], succ[source], subtract);
                    successors.push(succ);
                }
            }
            let mut succ = state.clone();
            succ[target].0 = (PAIR_MOD.0 - succ[target].0 % PAIR_MOD.0) % PAIR_MOD.0;
            successors.push(succ);
        }
        for succ in successors {
            if visited.insert(succ.clone()) {
                frontier.push(succ);
            }
        }
    }
    visited
        .into_iter()
        .min_by(|a, b| pair_colex_key(a).cmp(&pair_colex_key(b)))
        .expect("orbit contains the start state")
}

/// Additive closure of the given pairs inside `Z/24 ⊕ Z/2`.
fn submodule_closure(gens: &[(u64, u64)]) -> BTreeSet<(u64, u64)> {
    let mut set: BTreeSet<(u64, u64)> = BTreeSet::new();
    set.insert((0, 0));
    let mut frontier: Vec<(u64, u64)> = vec![(0, 0)];
    while let Some(a) = frontier.pop() {
        for &g in gens {
            let s = pair_add(a, g, false);
            if set.insert(s) {
                frontier.push(s);
            }
        }
    }
    set
}

/// A generating list of at most two elements for a subgroup of `Z/24 ⊕ Z/2`.
fn minimal_generators(s: &BTreeSet<(u64, u64)>) -> Vec<(u64, u64)> {
    if s.len() == 1 {
        return Vec::new();
    }
    let elements: Vec<(u64, u64)> = s.iter().copied().collect();
    for &e in &elements {
        if submodule_closure(&[e]) == *s {
            return vec![e];
        }
    }
    for &e in &elements {
        for &f in &elements {
            if submodule_closure(&[e, f]) == *s {
                return vec![e, f];
            }
        }
    }
    unreachable!("every subgroup of Z/24 ⊕ Z/2 is generated by two elements");
}

/// Canonical form of the coupled `(y, z, z2)` component in dimension ten.
fn canon_coupled_dim10(y: &[u64], z: &[u64], z2: &[u64]) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let y_nonzero = y.iter().any(|&v| v % 2 != 0);
    let z2_nonzero = z2.iter().any(|&v| v % 2 != 0);
    if y_nonzero {
        // A unit y coefficient clears the whole z2 block by cross addition,
        // leaving plain add/negate freedom on z.
        let mut yc = vec![0; y.len()];
        yc[0] = 1;
        return (yc, canon_plain(z, PAIR_MOD.0), vec![0; z2.len()]);
    }
    if !z2_nonzero {
        return (
            vec![0; y.len()],
            canon_plain(z, PAIR_MOD.0),
            vec![0; z2.len()],
        );
    }
    let pairs: Vec<(u64, u64)> = z.iter().zip(z2).map(|(&a, &b)| (a % 24, b % 2)).collect();
    let canonical = if pairs.len() <= 3 {
        canon_pairs_bfs(&pairs)
    } else {
        // Beyond three pairs the orbit is determined by the subgroup the
        // pairs generate: canonicalize a generating triple and pad.
        let closure = submodule_closure(&pairs);
        let mut gens = minimal_generators(&closure);
        gens.resize(3, (0, 0));
        let mut canonical = canon_pairs_bfs(&gens);
        canonical.resize(pairs.len(), (0, 0));
        canonical
    };
    (
        vec![0; y.len()],
        canonical.iter().map(|p| p.0).collect(),
        canonical.iter().map(|p| p.1).collect(),
    )
}

/// Compute the canonical orbit representative of `v` together with the
/// surviving-exponent certificates.
pub fn normalize(v: &AttachingVector, d: &ManifoldDescriptor) -> NormalizedAttachment {
    let schema = block_schema(d);
    let exps = d.torsion.three_exponents();
    let mut vector = v.clone();
    let mut r_j0 = 0;
    let mut r_j1 = 0;
    let mut j0 = None;
    let mut j1 = None;
    let mut delta = 0;
    match d.n {
        2 => {
            vector.x = canon_plain(&v.x, schema.x.1);
            vector.y = canon_plain(&v.y, schema.y.1);
            let (zc, e, j) = canon_moore(&v.z, &exps, Survivor::Max);
            vector.z = zc;
            r_j0 = e;
            j0 = j;
            vector.w = canon_plain(&v.w, schema.w.1);
        }
        3 => {
            vector.x = canon_plain(&v.x, schema.x.1);
            vector.y = canon_plain(&v.y, schema.y.1);
            vector.z = canon_plain(&v.z, schema.z.1);
            let (uc, e0, i0) = canon_moore(&v.u, &exps, Survivor::Min);
            vector.u = uc;
            r_j0 = e0;
            j0 = i0;
            let (wc, e1, i1) = canon_moore(&v.w, &exps, Survivor::Max);
            vector.w = wc;
            r_j1 = e1;
            j1 = i1;
            if !vector.x.is_empty() && vector.x[0] % 2 == 1 {
                delta = 1;
            }
        }
        4 => {
            vector.x = canon_plain(&v.x, schema.x.1);
            let (yc, zc, z2c) = canon_coupled_dim10(&v.y, &v.z, &v.z2);
            vector.y = yc;
            vector.z = zc;
            vector.z2 = z2c;
            let (wc, e, j) = canon_moore(&v.w, &exps, Survivor::Min);
            vector.w = wc;
            r_j0 = e;
            j0 = j;
        }
        _ => {}
    }
    NormalizedAttachment {
        vector,
        r_j0,
        r_j1,
        j0,
        j1,
        delta,
    }
}

/// Limits for the brute-force orbit enumeration.
#[derive(Clone, Copy, Debug)]
pub struct OrbitOptions {
    /// Refuse blocks longer than this (the closure grows geometrically).
    pub max_block_len: usize,
    /// Refuse once the visited set exceeds this many states.
    pub state_cap: usize,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            max_block_len: 3,
            state_cap: 1_000_000,
        }
    }
}

/// Why the orbit oracle declined to run.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrbitError {
    #[error("orbit enumeration refused: block {block} has {len} entries (limit {max})")]
    BlockTooLong {
        block: &'static str,
        len: usize,
        max: usize,
    },
    #[error("orbit enumeration aborted: more than {cap} states")]
    StateCap { cap: usize },
}

/// Enumerate the full equivalence orbit of `v` by breadth-first closure
/// under [`move_set`]. Refuses inputs whose blocks exceed the configured
/// sizes rather than running unbounded.
pub fn orbit_oracle(
    v: &AttachingVector,
    d: &ManifoldDescriptor,
    opts: &OrbitOptions,
) -> Result<BTreeSet<AttachingVector>, OrbitError> {
    for (id, block) in [
        (BlockId::X, &v.x),
        (BlockId::Y, &v.y),
        (BlockId::Z, &v.z),
        (BlockId::Z2, &v.z2),
        (BlockId::U, &v.u),
        (BlockId::W, &v.w),
    ] {
        if block.len() > opts.max_block_len {
            return Err(OrbitError::BlockTooLong {
                block: id.name(),
                len: block.len(),
                max: opts.max_block_len,
            });
        }
    }
    let schema = block_schema(d);
    let moves = move_set(d);
    let mut visited: BTreeSet<AttachingVector> = BTreeSet::new();
    visited.insert(v.clone());
    let mut frontier: Vec<AttachingVector> = vec![v.clone()];
    while !frontier.is_empty() {
        let successors = expand_frontier(&frontier, &moves, &schema);
        frontier = successors
            .into_iter()
            .filter(|s| !visited.contains(s))
            .collect();
        for s in &frontier {
            visited.insert(s.clone());
        }
        if visited.len() > opts.state_cap {
            return Err(OrbitError::StateCap {
                cap: opts.state_cap,
            });
        }
    }
    Ok(visited)
}

#[cfg(feature = "parallel")]
fn expand_frontier(
    frontier: &[AttachingVector],
    moves: &[Move],
    schema: &BlockSchema,
) -> BTreeSet<AttachingVector> {
    use rayon::prelude::*;
    frontier
        .par_iter()
        .map(|state| {
            moves
                .iter()
                .map(|m| m.apply(state, schema))
                .collect::<BTreeSet<_>>()
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        })
}

#[cfg(not(feature = "parallel"))]
fn expand_frontier(
    frontier: &[AttachingVector],
    moves: &[Move],
    schema: &BlockSchema,
) -> BTreeSet<AttachingVector> {
    let mut out = BTreeSet::new();
    for state in frontier {
        for m in moves {
            out.insert(m.apply(state, schema));
        }
    }
    out
}

/// The top-cell cofibre piece of the wedge decomposition: the mapping cone
/// of the attaching map from the top sphere into the listed codomain wedge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CofibreSummand {
    /// Canonical attaching coefficients.
    pub attachment: AttachingVector,
    /// The wedge the attaching map lands in.
    pub codomain: Vec<Space>,
    /// Dimension of the attached cell (one above the suspended manifold).
    pub top_cell_dim: u32,
    /// True when every attaching coefficient vanishes, so the cone splits
    /// further as codomain ∨ top sphere.
    pub splits_further: bool,
}

/// The suspension of the manifold as a wedge: fully split summands plus at
/// most one cofibre carrying the top cell. When the cofibre's codomain
/// would be empty the top cell splits off as a sphere in `summands` and
/// `cofibre` is `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeDecomposition {
    pub summands: Vec<Space>,
    pub cofibre: Option<CofibreSummand>,
}

impl WedgeDecomposition {
    /// Every space in the decomposition, codomain included.
    pub fn all_spaces(&self) -> Vec<Space> {
        let mut out = self.summands.clone();
        if let Some(cof) = &self.cofibre {
            out.extend(cof.codomain.iter().copied());
        }
        out
    }

    /// Reduced integral homology of the whole wedge, nonzero degrees only.
    pub fn reduced_homology(&self) -> std::collections::BTreeMap<u32, FgAbGroup> {
        let mut table: std::collections::BTreeMap<u32, FgAbGroup> =
            std::collections::BTreeMap::new();
        let mut add = |degree: u32, group: FgAbGroup| {
            let entry = table.entry(degree).or_insert_with(FgAbGroup::trivial);
            *entry = entry.direct_sum(&group);
        };
        for space in self.all_spaces() {
            match space {
                Space::Sphere { dim } => add(dim, FgAbGroup::free(1)),
                Space::Moore { dim, p, r } => {
                    add(dim - 1, FgAbGroup::from_prime_powers(0, vec![(p, r)]))
                }
                Space::Chang { dim } => {
                    add(dim - 2, FgAbGroup::free(1));
                    add(dim, FgAbGroup::free(1));
                }
            }
        }
        if let Some(cof) = &self.cofibre {
            add(cof.top_cell_dim, FgAbGroup::free(1));
        }
        table.retain(|_, g| !g.is_trivial());
        table
    }

    /// Compare the wedge's homology with the suspension of the manifold's;
    /// an empty report certifies the decomposition.
    pub fn homology_check(&self, d: &ManifoldDescriptor) -> Vec<HomologyMismatch> {
        let found = self.reduced_homology();
        let mut expected: std::collections::BTreeMap<u32, FgAbGroup> =
            std::collections::BTreeMap::new();
        for (degree, group) in d.homology_table() {
            if degree == 0 {
                continue; // reduced homology drops the basepoint class
            }
            expected.insert(degree + 1, group);
        }
        let degrees: BTreeSet<u32> = expected.keys().chain(found.keys()).copied().collect();
        let mut mismatches = Vec::new();
        for degree in degrees {
            let e = expected
                .get(&degree)
                .cloned()
                .unwrap_or_else(FgAbGroup::trivial);
            let f = found
                .get(&degree)
                .cloned()
                .unwrap_or_else(FgAbGroup::trivial);
            if e != f {
                mismatches.push(HomologyMismatch {
                    degree,
                    expected: e,
                    found: f,
                });
            }
        }
        mismatches
    }
}

impl std::fmt::Display for WedgeDecomposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        if let Some(cof) = &self.cofibre {
            let codomain = cof
                .codomain
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(" ∨ ");
            let marker = if cof.splits_further { "; splits" } else { "" };
            parts.push(format!(
                "Cof(S{} → {codomain}{marker})",
                crate::group::superscript(cof.top_cell_dim as usize)
            ));
        }
        if parts.is_empty() {
            write!(f, "∗")
        } else {
            write!(f, "{}", parts.join(" ∨ "))
        }
    }
}

/// One degree where the wedge's homology disagrees with the suspension's.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyMismatch {
    pub degree: u32,
    pub expected: FgAbGroup,
    pub found: FgAbGroup,
}

/// Moore-space wedge on the factors of `t`, with the factor at 3-primary
/// index `skip` (if any) left out.
fn moore_wedge(dim: u32, t: &crate::manifold::TorsionGroup, skip: Option<usize>) -> Vec<Space> {
    let reduced = match skip {
        Some(j) => t.without_three_factor(j),
        None => t.clone(),
    };
    reduced
        .factors()
        .iter()
        .map(|&(p, r)| Space::Moore { dim, p, r })
        .collect()
}

/// Split the suspension of the manifold into the canonical wedge. The
/// attaching coefficients are normalized first; the certificates decide
/// which 3-primary Moore factor migrates into the cofibre.
pub fn suspension_splitting(d: &ManifoldDescriptor) -> WedgeDecomposition {
    let norm = normalize(&d.attach, d);
    let free = d.l.saturating_sub(d.c) as usize;
    let c = d.c as usize;
    let k = d.k as usize;
    let mut summands: Vec<Space> = Vec::new();
    let mut codomain: Vec<Space> = Vec::new();
    match d.n {
        2 => {
            for _ in 0..free.saturating_sub(1) {
                summands.push(Space::Sphere { dim: 3 });
                summands.push(Space::Sphere { dim: 5 });
            }
            for _ in 0..k {
                summands.push(Space::Sphere { dim: 4 });
            }
            summands.extend(moore_wedge(4, &d.torsion, norm.j0));
            summands.extend(moore_wedge(5, &d.torsion, None));
            for _ in 0..c.saturating_sub(1) {
                summands.push(Space::Chang { dim: 5 });
            }
            if free >= 1 {
                codomain.push(Space::Sphere { dim: 3 });
                codomain.push(Space::Sphere { dim: 5 });
            }
            if norm.j0.is_some() {
                codomain.push(Space::Moore {
                    dim: 4,
                    p: 3,
                    r: norm.r_j0,
                });
            }
            if c >= 1 {
                codomain.push(Space::Chang { dim: 5 });
            }
        }
        3 => {
            for _ in 0..k.saturating_sub(1) {
                summands.push(Space::Sphere { dim: 5 });
            }
            for _ in 0..free.saturating_sub(1) {
                summands.push(Space::Sphere { dim: 4 });
            }
            for _ in 0..free {
                summands.push(Space::Sphere { dim: 6 });
            }
            for _ in 0..c.saturating_sub(1) {
                summands.push(Space::Chang { dim: 6 });
            }
            summands.extend(moore_wedge(5, &d.torsion, norm.j0));
            summands.extend(moore_wedge(6, &d.torsion, norm.j1));
            if k >= 1 {
                codomain.push(Space::Sphere { dim: 5 });
            }
            if free >= 1 {
                codomain.push(Space::Sphere { dim: 4 });
            }
            if c >= 1 {
                codomain.push(Space::Chang { dim: 6 });
            }
            if norm.j0.is_some() {
                codomain.push(Space::Moore {
                    dim: 5,
                    p: 3,
                    r: norm.r_j0,
                });
            }
            if norm.j1.is_some() {
                codomain.push(Space::Moore {
                    dim: 6,
                    p: 3,
                    r: norm.r_j1,
                });
            }
        }
        4 => {
            for _ in 0..k {
                summands.push(Space::Sphere { dim: 6 });
            }
            for _ in 0..free.saturating_sub(1) {
                summands.push(Space::Sphere { dim: 5 });
                summands.push(Space::Sphere { dim: 7 });
            }
            for _ in 0..c.saturating_sub(2) {
                summands.push(Space::Chang { dim: 7 });
            }
            summands.extend(moore_wedge(6, &d.torsion, None));
            summands.extend(moore_wedge(7, &d.torsion, norm.j0));
            if free >= 1 {
                codomain.push(Space::Sphere { dim: 7 });
                codomain.push(Space::Sphere { dim: 5 });
            }
            for _ in 0..c.min(2) {
                codomain.push(Space::Chang { dim: 7 });
            }
            if norm.j0.is_some() {
                codomain.push(Space::Moore {
                    dim: 7,
                    p: 3,
                    r: norm.r_j0,
                });
            }
        }
        _ => {}
    }
    let top_cell_dim = 2 * d.n + 3;
    let cofibre = if codomain.is_empty() {
        summands.push(Space::Sphere { dim: top_cell_dim });
        None
    } else {
        Some(CofibreSummand {
            splits_further: norm.vector.is_zero(),
            attachment: norm.vector,
            codomain,
            top_cell_dim,
        })
    };
    WedgeDecomposition { summands, cofibre }
}
